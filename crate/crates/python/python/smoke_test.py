"""Smoke test for the mpcshield_py extension module."""

import pathlib

import mpcshield_py as ms

P = 7

# 4 + 5x over Z_7 evaluated at 1..4
f = ms.Polynomial([4, 5], P)
assert [f(x) for x in range(1, 5)] == [2, 0, 5, 3]
assert f.degree == 1
assert ms.Polynomial.interpolate([(1, 2), (2, 0)], P) == f
assert ms.rs_encode([4, 5], 4, P) == [2, 0, 5, 3]
assert ms.mod_inverse(3, P) == 5

out = ms.bw_decode([2, 0, 4, 3], 2, P)
assert out.message == [4, 5]
assert out.error_positions == [3]
assert out.corrected == [2, 0, 5, 3]

assert ms.determinant([[1, 2], [3, 4]], 101) == 99

shares = ms.shamir_share(42, 3, 5, 101, seed=9)
assert ms.shamir_reconstruct(list(zip([1, 3, 5], shares[0::2])), 3, 5, 101) == 42

sim = ms.Simulation([2, 0, 5, 3], P, threshold=2, seed=1)
sim.corrupt(3, 4)
det = sim.detect()
assert det.verdict == "error" and det.location == 3, det
assert (det.d1, det.d2, det.b0) == (4, 1, 4)
assert sim.correct(3) == 5
assert sim.shares == [2, 0, 5, 3]
assert sim.round_count("detection") == 3
assert sim.round_count("correction") == 2
assert sim.transcript().startswith("round=1 from=1 to=* kind=minor_broadcast")

toy = pathlib.Path(__file__).resolve().parents[3] / "scenarios" / "toy.scn"
report, transcript, code = ms.run_scenario(toy.read_text())
assert code == 0
assert "detection: location=3" in report
assert "correction: player=3 recovered=5 rounds=2" in report
assert transcript

try:
    ms.run_scenario("prime=8\nplayers=4\nsecret=1\n")
except ValueError:
    pass
else:
    raise AssertionError("non-prime modulus accepted")

print("smoke test ok")
