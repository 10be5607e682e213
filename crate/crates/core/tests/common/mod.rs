#![allow(dead_code)]

use mpcshield::algebra::{FieldElement, MatrixZp, Polynomial, PrimeModulus};
use mpcshield::protocol::{players_from_shares, PlayerState};
use mpcshield::sharing::{player_rng, shares_of, sharing_polynomial, SharingParams};
use rand::Rng;

pub fn modulus(p: u64) -> PrimeModulus {
    PrimeModulus::new(p).unwrap()
}

/// A single-error detection scenario: `n` shares of a random polynomial of
/// degree `<= n - 3`, optionally with one position overwritten by a
/// different value.
pub struct DetectionCase {
    pub params: SharingParams,
    pub poly: Polynomial,
    pub players: Vec<PlayerState>,
    pub corrupted: Option<usize>,
}

pub fn detection_case(p: u64, n: usize, corrupt: bool, seed: u64) -> DetectionCase {
    let m = modulus(p);
    let params = SharingParams::new(n - 2, n, m).unwrap();
    let mut rng = player_rng(seed, 1000);
    let poly = sharing_polynomial(m.random(&mut rng), n - 2, &mut rng).unwrap();
    let mut shares = shares_of(&poly, n).unwrap();
    let mut corrupted = None;
    if corrupt {
        let pos = rng.gen_range(1..=n);
        let delta = m.element(rng.gen_range(1..p));
        shares[pos - 1].value = shares[pos - 1].value + delta;
        corrupted = Some(pos);
    }
    let players = players_from_shares(&shares, params, seed).unwrap();
    DetectionCase {
        params,
        poly,
        players,
        corrupted,
    }
}

/// `A1` (last column `i * alpha_i`) and `A2` (last column `-alpha_i`) built
/// directly from the key-equation rows.
pub fn cramer_matrices(alphas: &[FieldElement]) -> (MatrixZp, MatrixZp) {
    let m = alphas[0].modulus();
    let n = alphas.len();
    let mut a1 = MatrixZp::zeros(n, n, m);
    let mut a2 = MatrixZp::zeros(n, n, m);
    for (r, &alpha) in alphas.iter().enumerate() {
        let x = m.element(r as u64 + 1);
        let mut pow = m.one();
        for c in 0..n - 1 {
            a1.set(r, c, pow);
            a2.set(r, c, pow);
            pow *= x;
        }
        a1.set(r, n - 1, x * alpha);
        a2.set(r, n - 1, -alpha);
    }
    (a1, a2)
}
