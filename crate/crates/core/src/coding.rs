//! Reed-Solomon codes over Z_p with evaluation points `1..=n`, and a
//! centralized Berlekamp-Welch decoder.
//!
//! Position `i` (1-based) of a codeword holds `P(i)`. Error positions are
//! reported with the same 1-based numbering, which is also the player id of
//! the share holder.

use std::collections::BTreeSet;

use crate::algebra::{AlgebraError, FieldElement, MatrixZp, Polynomial, PrimeModulus};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodingError {
    #[error("invalid code parameters: n={n}, k={k}, p={p}")]
    InvalidParams { n: usize, k: usize, p: u64 },
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("error budget {e} exceeds capacity {capacity}")]
    ErrorBudget { e: usize, capacity: usize },
    #[error("received word is not within the correctable distance of any codeword")]
    Undecodable,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Code parameters: length `n`, dimension `k`, field `Z_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RsParams {
    n: usize,
    k: usize,
    modulus: PrimeModulus,
}

impl RsParams {
    pub fn new(n: usize, k: usize, modulus: PrimeModulus) -> Result<Self, CodingError> {
        if k == 0 || k > n || n as u64 > modulus.value() - 1 {
            return Err(CodingError::InvalidParams { n, k, p: modulus.value() });
        }
        Ok(RsParams { n, k, modulus })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    /// `floor((n - k) / 2)`
    pub fn error_capacity(&self) -> usize {
        (self.n - self.k) / 2
    }

    /// Minimum Hamming distance `n - k + 1`.
    pub fn min_distance(&self) -> usize {
        self.n - self.k + 1
    }

    /// Evaluation point of 1-based position `i`.
    pub fn point(&self, i: usize) -> FieldElement {
        self.modulus.element(i as u64)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Codeword {
    symbols: Vec<FieldElement>,
}

impl Codeword {
    pub fn new(symbols: Vec<FieldElement>) -> Self {
        Codeword { symbols }
    }

    pub fn from_u64s(values: &[u64], modulus: PrimeModulus) -> Self {
        Codeword::new(modulus.elements(values))
    }

    pub fn symbols(&self) -> &[FieldElement] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Symbol at 1-based position `i`.
    pub fn at(&self, i: usize) -> FieldElement {
        self.symbols[i - 1]
    }

    /// 1-based positions where `self` and `other` differ.
    pub fn disagreements(&self, other: &Codeword) -> BTreeSet<usize> {
        self.symbols
            .iter()
            .zip(&other.symbols)
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn values(&self) -> Vec<u64> {
        self.symbols.iter().map(|s| s.value()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeResult {
    pub message_poly: Polynomial,
    /// Monic error locator `E` from the key equation.
    pub locator: Polynomial,
    pub error_positions: BTreeSet<usize>,
    pub corrected: Codeword,
}

fn check_len(r: &Codeword, params: &RsParams) -> Result<(), CodingError> {
    if r.len() != params.n {
        return Err(CodingError::LengthMismatch { expected: params.n, actual: r.len() });
    }
    Ok(())
}

/// Evaluates the message polynomial `m_0 + m_1 x + ...` at `1..=n`.
pub fn rs_encode(message: &[FieldElement], params: &RsParams) -> Result<Codeword, CodingError> {
    if message.len() != params.k {
        return Err(CodingError::LengthMismatch { expected: params.k, actual: message.len() });
    }
    let poly = Polynomial::new(message.to_vec(), params.modulus)?;
    encode_polynomial(&poly, params)
}

/// Codeword of an arbitrary polynomial of degree `< k`.
pub fn encode_polynomial(poly: &Polynomial, params: &RsParams) -> Result<Codeword, CodingError> {
    if poly.degree().is_some_and(|d| d >= params.k) {
        return Err(CodingError::LengthMismatch {
            expected: params.k,
            actual: poly.coefficients().len(),
        });
    }
    let symbols = (1..=params.n)
        .map(|i| poly.eval(params.point(i)))
        .collect::<Result<_, _>>()?;
    Ok(Codeword::new(symbols))
}

/// True when all `n` symbols lie on one polynomial of degree `< k`.
pub fn is_codeword(r: &Codeword, params: &RsParams) -> Result<bool, CodingError> {
    check_len(r, params)?;
    let head: Vec<_> = (1..=params.k).map(|i| (params.point(i), r.at(i))).collect();
    let poly = Polynomial::interpolate(&head)?;
    for i in params.k + 1..=params.n {
        if poly.eval(params.point(i))? != r.at(i) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Decodes with the full error capacity `floor((n - k) / 2)`.
pub fn bw_decode(r: &Codeword, params: &RsParams) -> Result<DecodeResult, CodingError> {
    bw_decode_with(r, params, params.error_capacity())
}

/// Berlekamp-Welch decoding allowing up to `e` errors.
///
/// Unknowns are `Q = q_0 + ... + q_{k+e-1} x^{k+e-1}` and the monic
/// `E = b_0 + ... + b_{e-1} x^{e-1} + x^e`. Each position contributes one row
/// of the key equation `Q(i) - r_i (b_0 + ... + b_{e-1} i^{e-1}) = r_i i^e`.
pub fn bw_decode_with(r: &Codeword, params: &RsParams, e: usize) -> Result<DecodeResult, CodingError> {
    check_len(r, params)?;
    if e > params.error_capacity() {
        return Err(CodingError::ErrorBudget { e, capacity: params.error_capacity() });
    }
    let m = params.modulus;
    let (n, k) = (params.n, params.k);
    let q_len = k + e;
    let unknowns = q_len + e;

    let mut system = MatrixZp::zeros(n, unknowns, m);
    let mut rhs = Vec::with_capacity(n);
    for i in 1..=n {
        let x = params.point(i);
        let ri = r.at(i);
        let mut pow = m.one();
        for j in 0..q_len {
            system.set(i - 1, j, pow);
            if j < e {
                system.set(i - 1, q_len + j, -(ri * pow));
            }
            pow *= x;
        }
        rhs.push(ri * x.pow(e as u64));
    }

    let solution = match system.solve_any(&rhs) {
        Ok(s) => s,
        Err(AlgebraError::SingularSystem(_)) => return Err(CodingError::Undecodable),
        Err(other) => return Err(other.into()),
    };
    let q = Polynomial::new(solution.values[..q_len].to_vec(), m)?;
    let mut e_coeffs = solution.values[q_len..].to_vec();
    e_coeffs.push(m.one());
    let locator = Polynomial::new(e_coeffs, m)?;

    let (message_poly, remainder) = q.div_rem(&locator)?;
    if !remainder.is_zero() || message_poly.degree().is_some_and(|d| d >= k) {
        return Err(CodingError::Undecodable);
    }
    let corrected = encode_polynomial(&message_poly, params)?;
    let error_positions = corrected.disagreements(r);
    if error_positions.len() > e {
        return Err(CodingError::Undecodable);
    }
    Ok(DecodeResult {
        message_poly,
        locator,
        error_positions,
        corrected,
    })
}
