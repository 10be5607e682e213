//! End-to-end acceptance checks. Runs without the libtest harness so each
//! criterion prints exactly one PASS/FAIL line; exits nonzero on any FAIL.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{cramer_matrices, detection_case, modulus};
use mpcshield::algebra::{FieldElement, MatrixZp, Polynomial};
use mpcshield::coding::{bw_decode, rs_encode, Codeword, RsParams};
use mpcshield::protocol::{
    compute_public_minors, local_det_contribution, players_from_values, run_correction, run_detection, Verdict,
};
use mpcshield::scenario::{parse_scenario, run_scenario};
use mpcshield::sharing::{lagrange_constant, player_rng, shares_of, sharing_polynomial, SharingParams};
use mpcshield::simnet::{round_count, MessageKind, Network, Phase};
use rand::Rng;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

const TOY_SHARES: [u64; 4] = [2, 0, 5, 3];
const TOY_RECEIVED: [u64; 4] = [2, 0, 4, 3];

fn toy_params() -> SharingParams {
    SharingParams::new(2, 4, modulus(7)).unwrap()
}

fn ac1_toy_detection() -> Check {
    let m = modulus(7);
    // independent route: the toy A1 / A2 matrices, determinants computed directly
    let a1 = MatrixZp::from_rows(
        &[vec![1, 1, 1, 2], vec![1, 2, 4, 0], vec![1, 3, 2, 5], vec![1, 4, 2, 5]],
        m,
    )
    .unwrap();
    let a2 = MatrixZp::from_rows(
        &[vec![1, 1, 1, 5], vec![1, 2, 4, 0], vec![1, 3, 2, 3], vec![1, 4, 2, 4]],
        m,
    )
    .unwrap();
    let (o1, o2) = (a1.determinant().unwrap().value(), a2.determinant().unwrap().value());
    ensure!((o1, o2) == (4, 1), "oracle determinants {o1}, {o2}");

    let mut players = players_from_values(&TOY_RECEIVED, toy_params(), 1).unwrap();
    let out = run_detection(&mut players, &mut Network::new(4)).map_err(|e| e.to_string())?;
    ensure!(out.d1.value() == 4 && out.d2.value() == 1, "d1={} d2={}", out.d1, out.d2);
    ensure!(out.b0.map(|b| b.value()) == Some(4), "b0={:?}", out.b0);
    ensure!(out.verdict == Verdict::ErrorAt(3), "verdict {:?}", out.verdict);
    Ok("d1=4 d2=1 b0=4 location=3".into())
}

fn ac2_toy_correction() -> Check {
    let mut players = players_from_values(&TOY_SHARES, toy_params(), 1).unwrap();
    players[2] = players_from_values(&TOY_RECEIVED, toy_params(), 1).unwrap().remove(2);
    let mut net = Network::new(4);
    let out = run_detection(&mut players, &mut net).map_err(|e| e.to_string())?;
    ensure!(out.verdict == Verdict::ErrorAt(3), "verdict {:?}", out.verdict);
    let fix = run_correction(&mut players, 3, &mut net).map_err(|e| e.to_string())?;
    ensure!(fix.recovered.value() == 5, "recovered {}", fix.recovered);
    ensure!(players[2].share().value.value() == 5, "share not updated");
    let rounds = round_count(net.transcript(), Phase::Correction);
    ensure!(rounds == 2, "correction rounds {rounds}");
    Ok("player 3 recovered 5 in 2 rounds".into())
}

fn ac3_bw_property_suite() -> Check {
    let mut trials = 0;
    let mut rng = player_rng(2024, 0);
    for p in [7u64, 101, 65537] {
        let m = modulus(p);
        for k in 2..=5 {
            for e in 1..=3 {
                let n = k + 2 * e;
                if n as u64 > p - 1 {
                    continue;
                }
                let params = RsParams::new(n, k, m).unwrap();
                for _ in 0..60 {
                    let msg: Vec<FieldElement> = (0..k).map(|_| m.random(&mut rng)).collect();
                    let clean = rs_encode(&msg, &params).unwrap();
                    let count = rng.gen_range(0..=e);
                    let positions: BTreeSet<usize> =
                        rand::seq::index::sample(&mut rng, n, count).into_iter().map(|i| i + 1).collect();
                    let mut symbols = clean.symbols().to_vec();
                    for &pos in &positions {
                        symbols[pos - 1] = symbols[pos - 1] + m.element(rng.gen_range(1..p));
                    }
                    let out = bw_decode(&Codeword::new(symbols), &params)
                        .map_err(|err| format!("p={p} k={k} e={e}: {err}"))?;
                    ensure!(
                        out.message_poly == Polynomial::new(msg.clone(), m).unwrap(),
                        "p={p} k={k} e={e}: wrong message"
                    );
                    ensure!(out.error_positions == positions, "p={p} k={k} e={e}: wrong error set");
                    trials += 1;
                }
            }
        }
    }
    ensure!(trials >= 1000, "only {trials} trials");
    Ok(format!("{trials} trials, 100% recovered"))
}

fn ac4_oracle_equivalence() -> Check {
    let mut scenarios = 0;
    let mut zero_error = 0;
    for seed in 0..600u64 {
        let p = if seed % 2 == 0 { 7 } else { 101 };
        let max_n = if p == 7 { 6 } else { 8 };
        let n = 4 + (seed as usize / 2) % (max_n - 3);
        let corrupt = seed % 5 != 0;
        let mut case = detection_case(p, n, corrupt, seed);
        let received = Codeword::new(case.players.iter().map(|pl| pl.share().value).collect());
        let oracle = bw_decode(&received, &RsParams::new(n, n - 2, modulus(p)).unwrap())
            .map_err(|e| format!("seed {seed}: oracle failed: {e}"))?;
        let out = run_detection(&mut case.players, &mut Network::new(n)).map_err(|e| e.to_string())?;
        let expected = match oracle.error_positions.iter().copied().collect::<Vec<_>>()[..] {
            [] => Verdict::NoErrorDetected,
            [l] => Verdict::ErrorAt(l),
            _ => return Err(format!("seed {seed}: oracle reported several errors")),
        };
        ensure!(out.verdict == expected, "seed {seed} p={p} n={n}: {:?} vs oracle {:?}", out.verdict, expected);
        ensure!(
            case.corrupted.map_or(Verdict::NoErrorDetected, Verdict::ErrorAt) == expected,
            "seed {seed}: oracle disagrees with injected corruption"
        );
        if !corrupt {
            zero_error += 1;
        }
        scenarios += 1;
    }
    ensure!(scenarios >= 500 && zero_error > 0, "{scenarios} scenarios, {zero_error} clean");
    Ok(format!("{scenarios} scenarios ({zero_error} clean) agree with the decoder"))
}

fn ac5_cofactor_identity() -> Check {
    let mut rng = player_rng(5, 0);
    let mut trials = 0;
    for p in [7u64, 101, 65537] {
        let m = modulus(p);
        for n in 4..=6 {
            let minors = compute_public_minors(n, m).map_err(|e| e.to_string())?;
            for _ in 0..50 {
                let alphas: Vec<FieldElement> = (0..n).map(|_| m.random(&mut rng)).collect();
                let (a1, a2) = cramer_matrices(&alphas);
                let (mut su, mut sv) = (m.zero(), m.zero());
                for i in 1..=n {
                    let c = local_det_contribution(i, alphas[i - 1], minors[i - 1], n);
                    su += c.u;
                    sv += c.v;
                }
                ensure!(su == a1.determinant().unwrap(), "p={p} n={n}: sum u != det(A1)");
                ensure!(sv == a2.determinant().unwrap(), "p={p} n={n}: sum v != det(A2)");
                trials += 1;
            }
        }
    }
    Ok(format!("{trials} random share vectors"))
}

fn ac6_recovery_property() -> Check {
    let mut trials = 0;
    for seed in 0..500u64 {
        let mut rng = player_rng(seed, 6000);
        let p = if seed % 2 == 0 { 7 } else { 101 };
        let m = modulus(p);
        let n = rng.gen_range(3..=6);
        let t = rng.gen_range(1..n);
        let params = SharingParams::new(t, n, m).unwrap();
        let poly = sharing_polynomial(m.random(&mut rng), t, &mut rng).unwrap();
        let target = rng.gen_range(1..=n);
        let mut values: Vec<u64> = shares_of(&poly, n).unwrap().iter().map(|s| s.value.value()).collect();
        values[target - 1] = rng.gen_range(0..p);
        let mut players = players_from_values(&values, params, seed).unwrap();
        let mut net = Network::new(n);
        let out = run_correction(&mut players, target, &mut net).map_err(|e| e.to_string())?;
        let expected = poly.eval(m.element(target as u64)).unwrap();
        ensure!(out.recovered == expected, "seed {seed}: recovered {} expected {expected}", out.recovered);

        let tr = net.transcript();
        let mut per_helper: BTreeMap<usize, FieldElement> = BTreeMap::new();
        for e in tr.envelopes().iter().filter(|e| e.kind == MessageKind::Portion) {
            let acc = per_helper.entry(e.from).or_insert(m.zero());
            *acc += e.payload[0];
        }
        for (&h, &sum) in &per_helper {
            let gamma = lagrange_constant(h, &out.helpers, target, m).unwrap();
            ensure!(sum == gamma * m.element(values[h - 1]), "seed {seed}: portions of {h} unbalanced");
        }
        let sigma_sum = tr
            .envelopes()
            .iter()
            .filter(|e| e.kind == MessageKind::Sigma)
            .fold(m.zero(), |acc, e| acc + e.payload[0]);
        ensure!(sigma_sum == out.recovered, "seed {seed}: sigma sum mismatch");
        trials += 1;
    }
    Ok(format!("{trials} scenarios recovered exactly"))
}

fn ac7_minimum_distance() -> Check {
    let m = modulus(7);
    let mut report = Vec::new();
    for (n, k) in [(4usize, 2usize), (7, 3)] {
        // points 1..=n reduced mod 7; for n = 7 the last point is 0
        let words: Vec<Vec<FieldElement>> = (0..7u64.pow(k as u32))
            .map(|mut v| {
                let coeffs: Vec<u64> = (0..k)
                    .map(|_| {
                        let c = v % 7;
                        v /= 7;
                        c
                    })
                    .collect();
                let poly = Polynomial::from_u64s(&coeffs, m);
                (1..=n as u64).map(|i| poly.eval(m.element(i)).unwrap()).collect()
            })
            .collect();
        let mut min = usize::MAX;
        for i in 0..words.len() {
            for j in i + 1..words.len() {
                let d = words[i].iter().zip(&words[j]).filter(|(a, b)| a != b).count();
                min = min.min(d);
            }
        }
        ensure!(min >= n - k + 1, "RS({n},{k}) minimum distance {min}");
        report.push(format!("RS({n},{k}) d_min={min}"));
    }
    Ok(report.join(", "))
}

fn ac8_determinism() -> Check {
    let scenarios = [
        "prime=7\nplayers=4\nthreshold=2\nshares=2,0,5,3\ncorrupt=3:4\nmode=full\nseed=1",
        "prime=101\nplayers=7\nthreshold=5\nsecret=42\ncorrupt=6:0\nmode=full\nseed=99",
        "prime=65537\nplayers=8\nthreshold=3\nsecret=1234\ncorrupt=2:7\nmode=correct\nseed=5",
        "prime=7\nplayers=4\nthreshold=2\nshares=2,0,5,3\nmode=detect\nseed=3",
    ];
    for text in scenarios {
        let s = parse_scenario(text).map_err(|e| e.to_string())?;
        let a = run_scenario(&s).map_err(|e| e.to_string())?;
        let b = run_scenario(&s).map_err(|e| e.to_string())?;
        ensure!(a == b, "runs differ for {text:?}");
    }
    Ok(format!("{} scenarios byte-identical", scenarios.len()))
}

fn smoke_large_detection() -> Check {
    let mut case = detection_case(65537, 64, true, 64);
    let out = run_detection(&mut case.players, &mut Network::new(64)).map_err(|e| e.to_string())?;
    ensure!(
        out.verdict == Verdict::ErrorAt(case.corrupted.unwrap()),
        "verdict {:?}, corrupted {:?}",
        out.verdict,
        case.corrupted
    );
    Ok("n=64 p=65537 located the error".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check, Duration); 9] = [
        ("AC1 toy detection", ac1_toy_detection, Duration::from_secs(1)),
        ("AC2 toy correction", ac2_toy_correction, Duration::from_secs(1)),
        ("AC3 Berlekamp-Welch property suite", ac3_bw_property_suite, Duration::from_secs(30)),
        ("AC4 detection vs decoder equivalence", ac4_oracle_equivalence, Duration::MAX),
        ("AC5 cofactor identity", ac5_cofactor_identity, Duration::MAX),
        ("AC6 recovery property", ac6_recovery_property, Duration::MAX),
        ("AC7 minimum distance", ac7_minimum_distance, Duration::MAX),
        ("AC8 determinism", ac8_determinism, Duration::MAX),
        ("SMOKE n=64 detection", smoke_large_detection, Duration::from_secs(5)),
    ];
    let mut failed = 0;
    for (name, check, limit) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed > limit => Err(format!("{detail}, but took {elapsed:?} (limit {limit:?})")),
            other => other,
        };
        match result {
            Ok(detail) => println!("PASS {name}: {detail} [{elapsed:.2?}]"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why} [{elapsed:.2?}]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    } else {
        println!("all acceptance criteria passed");
        ExitCode::SUCCESS
    }
}
