//! Python bindings for the `mpcshield` crate.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use mpcshield::algebra::{self, MatrixZp, PrimeModulus};
use mpcshield::coding::{self, Codeword, RsParams};
use mpcshield::protocol::{self, PlayerState, Verdict};
use mpcshield::scenario;
use mpcshield::sharing::{self, player_rng, Share, SharingParams};
use mpcshield::simnet::{self, AdversarySpec, Network, Phase};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn prime(p: u64) -> PyResult<PrimeModulus> {
    PrimeModulus::new(p).map_err(err)
}

fn values(xs: &[algebra::FieldElement]) -> Vec<u64> {
    xs.iter().map(|x| x.value()).collect()
}

/// Polynomial over Z_p, coefficients low degree first.
#[pyclass(name = "Polynomial", frozen)]
struct PyPolynomial(algebra::Polynomial);

#[pymethods]
impl PyPolynomial {
    #[new]
    fn new(coefficients: Vec<u64>, p: u64) -> PyResult<Self> {
        Ok(PyPolynomial(algebra::Polynomial::from_u64s(&coefficients, prime(p)?)))
    }

    /// Unique polynomial of degree < len(points) through `(x, y)` pairs.
    #[staticmethod]
    fn interpolate(points: Vec<(u64, u64)>, p: u64) -> PyResult<Self> {
        let m = prime(p)?;
        let pts: Vec<_> = points.iter().map(|&(x, y)| (m.element(x), m.element(y))).collect();
        algebra::lagrange_interpolate(&pts).map(PyPolynomial).map_err(err)
    }

    fn __call__(&self, x: u64) -> PyResult<u64> {
        self.eval(x)
    }

    fn eval(&self, x: u64) -> PyResult<u64> {
        let m = self.0.modulus();
        self.0.eval(m.element(x)).map(|v| v.value()).map_err(err)
    }

    /// Returns `(quotient, remainder)`.
    fn divmod(&self, divisor: &PyPolynomial) -> PyResult<(PyPolynomial, PyPolynomial)> {
        let (q, r) = algebra::poly_divide(&self.0, &divisor.0).map_err(err)?;
        Ok((PyPolynomial(q), PyPolynomial(r)))
    }

    #[getter]
    fn coefficients(&self) -> Vec<u64> {
        values(self.0.coefficients())
    }

    /// `None` for the zero polynomial.
    #[getter]
    fn degree(&self) -> Option<usize> {
        self.0.degree()
    }

    #[getter]
    fn p(&self) -> u64 {
        self.0.modulus().value()
    }

    fn __eq__(&self, other: &PyPolynomial) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("Polynomial({}, p={})", self.0, self.0.modulus())
    }
}

#[pyfunction]
fn mod_inverse(a: u64, p: u64) -> PyResult<u64> {
    algebra::mod_inverse(prime(p)?.element(a)).map(|v| v.value()).map_err(err)
}

fn matrix(rows: Vec<Vec<u64>>, p: u64) -> PyResult<MatrixZp> {
    MatrixZp::from_rows(&rows, prime(p)?).map_err(err)
}

#[pyfunction]
fn determinant(rows: Vec<Vec<u64>>, p: u64) -> PyResult<u64> {
    matrix(rows, p)?.determinant().map(|v| v.value()).map_err(err)
}

/// Determinant with 0-based `drop_row` and `drop_col` removed.
#[pyfunction]
fn minor_determinant(rows: Vec<Vec<u64>>, drop_row: usize, drop_col: usize, p: u64) -> PyResult<u64> {
    matrix(rows, p)?
        .minor_determinant(drop_row, drop_col)
        .map(|v| v.value())
        .map_err(err)
}

#[pyfunction]
fn solve_linear_system(rows: Vec<Vec<u64>>, rhs: Vec<u64>, p: u64) -> PyResult<Vec<u64>> {
    let m = prime(p)?;
    let a = matrix(rows, p)?;
    a.solve(&m.elements(&rhs)).map(|x| values(&x)).map_err(err)
}

#[pyfunction]
fn rs_encode(message: Vec<u64>, n: usize, p: u64) -> PyResult<Vec<u64>> {
    let m = prime(p)?;
    let params = RsParams::new(n, message.len(), m).map_err(err)?;
    coding::rs_encode(&m.elements(&message), &params)
        .map(|c| c.values())
        .map_err(err)
}

#[pyfunction]
fn is_codeword(received: Vec<u64>, k: usize, p: u64) -> PyResult<bool> {
    let m = prime(p)?;
    let params = RsParams::new(received.len(), k, m).map_err(err)?;
    coding::is_codeword(&Codeword::from_u64s(&received, m), &params).map_err(err)
}

#[pyclass(name = "DecodeResult", frozen, get_all)]
struct PyDecodeResult {
    message: Vec<u64>,
    error_positions: Vec<usize>,
    corrected: Vec<u64>,
}

#[pymethods]
impl PyDecodeResult {
    fn __repr__(&self) -> String {
        format!(
            "DecodeResult(message={:?}, error_positions={:?}, corrected={:?})",
            self.message, self.error_positions, self.corrected
        )
    }
}

/// Berlekamp-Welch decoding with `k` message symbols. `errors` defaults to
/// the full capacity `(n - k) // 2`.
#[pyfunction]
#[pyo3(signature = (received, k, p, errors=None))]
fn bw_decode(received: Vec<u64>, k: usize, p: u64, errors: Option<usize>) -> PyResult<PyDecodeResult> {
    let m = prime(p)?;
    let params = RsParams::new(received.len(), k, m).map_err(err)?;
    let e = errors.unwrap_or(params.error_capacity());
    let out = coding::bw_decode_with(&Codeword::from_u64s(&received, m), &params, e).map_err(err)?;
    Ok(PyDecodeResult {
        message: (0..k).map(|i| out.message_poly.coefficient(i).value()).collect(),
        error_positions: out.error_positions.into_iter().collect(),
        corrected: out.corrected.values(),
    })
}

#[pyfunction]
fn shamir_share(secret: u64, t: usize, n: usize, p: u64, seed: u64) -> PyResult<Vec<u64>> {
    let m = prime(p)?;
    let params = SharingParams::new(t, n, m).map_err(err)?;
    let shares = sharing::shamir_share(m.element(secret), &params, &mut player_rng(seed, 0)).map_err(err)?;
    Ok(shares.iter().map(|s| s.value.value()).collect())
}

/// `shares` are `(player_id, value)` pairs.
#[pyfunction]
fn shamir_reconstruct(shares: Vec<(usize, u64)>, t: usize, n: usize, p: u64) -> PyResult<u64> {
    let m = prime(p)?;
    let params = SharingParams::new(t, n, m).map_err(err)?;
    let shares: Vec<Share> = shares.iter().map(|&(i, v)| Share::new(i, m.element(v))).collect();
    sharing::shamir_reconstruct(&shares, &params).map(|v| v.value()).map_err(err)
}

#[pyfunction]
fn lagrange_constant(i: usize, helpers: Vec<usize>, target: usize, p: u64) -> PyResult<u64> {
    sharing::lagrange_constant(i, &helpers, target, prime(p)?)
        .map(|v| v.value())
        .map_err(err)
}

#[pyfunction]
fn public_minors(n: usize, p: u64) -> PyResult<Vec<u64>> {
    protocol::compute_public_minors(n, prime(p)?).map(|v| values(&v)).map_err(err)
}

#[pyclass(name = "DetectionOutcome", frozen, get_all)]
struct PyDetectionOutcome {
    d1: u64,
    d2: u64,
    b0: Option<u64>,
    /// `"error"`, `"none"` or `"undecodable"`.
    verdict: &'static str,
    location: Option<usize>,
}

#[pymethods]
impl PyDetectionOutcome {
    fn __repr__(&self) -> String {
        fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
            v.map_or("None".into(), |v| v.to_string())
        }
        format!(
            "DetectionOutcome(verdict='{}', location={}, d1={}, d2={}, b0={})",
            self.verdict,
            opt(self.location),
            self.d1,
            self.d2,
            opt(self.b0)
        )
    }
}

impl From<protocol::DetectionOutcome> for PyDetectionOutcome {
    fn from(o: protocol::DetectionOutcome) -> Self {
        let (verdict, location) = match o.verdict {
            Verdict::ErrorAt(l) => ("error", Some(l)),
            Verdict::NoErrorDetected => ("none", None),
            Verdict::Undecodable => ("undecodable", None),
        };
        PyDetectionOutcome {
            d1: o.d1.value(),
            d2: o.d2.value(),
            b0: o.b0.map(|b| b.value()),
            verdict,
            location,
        }
    }
}

/// Players `1..=n` holding shares on a simulated network.
#[pyclass(name = "Simulation")]
struct PySimulation {
    players: Vec<PlayerState>,
    net: Network,
}

#[pymethods]
impl PySimulation {
    /// `threshold` defaults to `len(shares) - 2`.
    #[new]
    #[pyo3(signature = (shares, p, threshold=None, seed=0))]
    fn new(shares: Vec<u64>, p: u64, threshold: Option<usize>, seed: u64) -> PyResult<Self> {
        let n = shares.len();
        let t = threshold.unwrap_or(n.saturating_sub(2).max(1));
        let params = SharingParams::new(t, n, prime(p)?).map_err(err)?;
        let players = protocol::players_from_values(&shares, params, seed).map_err(err)?;
        Ok(PySimulation {
            players,
            net: Network::new(n),
        })
    }

    /// Overwrites a player's stored share before running a protocol.
    fn corrupt(&mut self, player: usize, value: u64) -> PyResult<()> {
        simnet::apply_adversary(&mut self.players, &AdversarySpec::single(player, value)).map_err(err)?;
        Ok(())
    }

    fn detect(&mut self) -> PyResult<PyDetectionOutcome> {
        protocol::run_detection(&mut self.players, &mut self.net)
            .map(Into::into)
            .map_err(err)
    }

    /// Recovers `target`'s share and returns the new value.
    fn correct(&mut self, target: usize) -> PyResult<u64> {
        protocol::run_correction(&mut self.players, target, &mut self.net)
            .map(|o| o.recovered.value())
            .map_err(err)
    }

    #[getter]
    fn shares(&self) -> Vec<u64> {
        self.players.iter().map(|p| p.share().value.value()).collect()
    }

    fn transcript(&self) -> String {
        self.net.transcript().export()
    }

    /// Rounds spent in `"detection"` or `"correction"`.
    fn round_count(&self, phase: &str) -> PyResult<usize> {
        let phase = match phase {
            "detection" => Phase::Detection,
            "correction" => Phase::Correction,
            other => return Err(PyValueError::new_err(format!("unknown phase {other:?}"))),
        };
        Ok(simnet::round_count(self.net.transcript(), phase))
    }
}

/// Parses and runs a scenario file's contents. Returns
/// `(report, transcript, exit_code)`.
#[pyfunction]
#[pyo3(signature = (text, seed=None))]
fn run_scenario(text: &str, seed: Option<u64>) -> PyResult<(String, String, i32)> {
    let mut s = scenario::parse_scenario(text).map_err(err)?;
    if let Some(seed) = seed {
        s.seed = seed;
    }
    let run = scenario::run_scenario(&s).map_err(err)?;
    Ok((run.report, run.transcript, run.exit_code))
}

#[pymodule]
fn mpcshield_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolynomial>()?;
    m.add_class::<PyDecodeResult>()?;
    m.add_class::<PyDetectionOutcome>()?;
    m.add_class::<PySimulation>()?;
    m.add_function(wrap_pyfunction!(mod_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(determinant, m)?)?;
    m.add_function(wrap_pyfunction!(minor_determinant, m)?)?;
    m.add_function(wrap_pyfunction!(solve_linear_system, m)?)?;
    m.add_function(wrap_pyfunction!(rs_encode, m)?)?;
    m.add_function(wrap_pyfunction!(is_codeword, m)?)?;
    m.add_function(wrap_pyfunction!(bw_decode, m)?)?;
    m.add_function(wrap_pyfunction!(shamir_share, m)?)?;
    m.add_function(wrap_pyfunction!(shamir_reconstruct, m)?)?;
    m.add_function(wrap_pyfunction!(lagrange_constant, m)?)?;
    m.add_function(wrap_pyfunction!(public_minors, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    Ok(())
}
