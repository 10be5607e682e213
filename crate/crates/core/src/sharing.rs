//! Shamir `(t, n)` threshold sharing, additive splitting and Lagrange
//! recombination constants.

use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::algebra::{AlgebraError, FieldElement, Polynomial, PrimeModulus};

/// Players are numbered `1..=n`; the id doubles as the evaluation point.
pub type PlayerId = usize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SharingError {
    #[error("invalid sharing parameters: t={t}, n={n}, p={p}")]
    InvalidParams { t: usize, n: usize, p: u64 },
    #[error("need at least {needed} shares, got {got}")]
    InsufficientShares { needed: usize, got: usize },
    #[error("player {0} appears more than once")]
    DuplicateOwner(PlayerId),
    #[error("helper {0} appears more than once")]
    DuplicateHelper(PlayerId),
    #[error("target {0} is in the helper set")]
    TargetInHelperSet(PlayerId),
    #[error("player {player} is not in the helper set")]
    NotAHelper { player: PlayerId },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SharingParams {
    t: usize,
    n: usize,
    modulus: PrimeModulus,
}

impl SharingParams {
    pub fn new(t: usize, n: usize, modulus: PrimeModulus) -> Result<Self, SharingError> {
        if t == 0 || t > n || n as u64 > modulus.value() - 1 {
            return Err(SharingError::InvalidParams { t, n, p: modulus.value() });
        }
        Ok(SharingParams { t, n, modulus })
    }

    pub fn threshold(&self) -> usize {
        self.t
    }

    pub fn players(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Share {
    pub owner: PlayerId,
    pub value: FieldElement,
}

impl Share {
    pub fn new(owner: PlayerId, value: FieldElement) -> Self {
        Share { owner, value }
    }
}

/// Independent deterministic stream for a participant. Stream 0 belongs to
/// the dealer, stream `i` to player `i`.
pub fn player_rng(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Samples a degree `t - 1` polynomial with constant term `secret`.
pub fn sharing_polynomial<R: Rng + ?Sized>(
    secret: FieldElement,
    t: usize,
    rng: &mut R,
) -> Result<Polynomial, SharingError> {
    let modulus = secret.modulus();
    let mut coeffs = Vec::with_capacity(t);
    coeffs.push(secret);
    coeffs.extend((1..t).map(|_| modulus.random(rng)));
    Ok(Polynomial::new(coeffs, modulus)?)
}

/// Shares of `poly` for players `1..=n`.
pub fn shares_of(poly: &Polynomial, n: usize) -> Result<Vec<Share>, SharingError> {
    let modulus = poly.modulus();
    (1..=n)
        .map(|i| Ok(Share::new(i, poly.eval(modulus.element(i as u64))?)))
        .collect()
}

pub fn shamir_share<R: Rng + ?Sized>(
    secret: FieldElement,
    params: &SharingParams,
    rng: &mut R,
) -> Result<Vec<Share>, SharingError> {
    if secret.modulus() != params.modulus {
        return Err(AlgebraError::ModulusMismatch {
            left: params.modulus.value(),
            right: secret.modulus().value(),
        }
        .into());
    }
    let poly = sharing_polynomial(secret, params.t, rng)?;
    shares_of(&poly, params.n)
}

/// Interpolates the constant term from at least `t` shares.
pub fn shamir_reconstruct(shares: &[Share], params: &SharingParams) -> Result<FieldElement, SharingError> {
    let mut seen = BTreeSet::new();
    for s in shares {
        if !seen.insert(s.owner) {
            return Err(SharingError::DuplicateOwner(s.owner));
        }
    }
    if shares.len() < params.t {
        return Err(SharingError::InsufficientShares { needed: params.t, got: shares.len() });
    }
    let points: Vec<_> = shares
        .iter()
        .map(|s| (params.modulus.element(s.owner as u64), s.value))
        .collect();
    Ok(Polynomial::interpolate(&points)?.coefficient(0))
}

/// `gamma_i = prod_{j in helpers, j != i} (target - j) / (i - j)`, the weight
/// of `P(i)` when recombining `P(target)` from the helpers' points.
pub fn lagrange_constant(
    i: PlayerId,
    helpers: &[PlayerId],
    target: PlayerId,
    modulus: PrimeModulus,
) -> Result<FieldElement, SharingError> {
    let mut seen = BTreeSet::new();
    for &h in helpers {
        if !seen.insert(h) {
            return Err(SharingError::DuplicateHelper(h));
        }
    }
    if seen.contains(&target) {
        return Err(SharingError::TargetInHelperSet(target));
    }
    if !seen.contains(&i) {
        return Err(SharingError::NotAHelper { player: i });
    }
    let xi = modulus.element(i as u64);
    let xk = modulus.element(target as u64);
    let mut num = modulus.one();
    let mut den = modulus.one();
    for &j in helpers.iter().filter(|&&j| j != i) {
        let xj = modulus.element(j as u64);
        num *= xk - xj;
        den *= xi - xj;
    }
    Ok(num * den.inverse()?)
}

/// Splits `v` into `t` additive portions: `t - 1` uniform values and a
/// balancing last term.
pub fn additive_split<R: Rng + ?Sized>(v: FieldElement, t: usize, rng: &mut R) -> Vec<FieldElement> {
    assert!(t >= 1, "additive split needs at least one portion");
    let modulus = v.modulus();
    let mut portions: Vec<_> = (1..t).map(|_| modulus.random(rng)).collect();
    let partial = portions.iter().fold(modulus.zero(), |acc, &x| acc + x);
    portions.push(v - partial);
    portions
}
