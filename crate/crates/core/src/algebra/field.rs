use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use rand::Rng;

use super::AlgebraError;

/// Largest supported modulus. Products of two residues fit in a `u64`.
pub const MAX_MODULUS: u64 = (1 << 31) - 1;

/// A prime `p` with `2 < p <= 2^31 - 1`, checked at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeModulus(u64);

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self, AlgebraError> {
        if p <= 2 || p > MAX_MODULUS || !is_prime(p) {
            return Err(AlgebraError::InvalidModulus(p));
        }
        Ok(PrimeModulus(p))
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.0
    }

    /// Reduces `v` into the field.
    #[inline]
    pub fn element(self, v: u64) -> FieldElement {
        FieldElement {
            value: v % self.0,
            modulus: self,
        }
    }

    /// Reduces a signed integer into the field.
    pub fn from_i64(self, v: i64) -> FieldElement {
        let p = self.0 as i64;
        FieldElement {
            value: v.rem_euclid(p) as u64,
            modulus: self,
        }
    }

    pub fn zero(self) -> FieldElement {
        self.element(0)
    }

    pub fn one(self) -> FieldElement {
        self.element(1)
    }

    /// Uniformly random element.
    pub fn random<R: Rng + ?Sized>(self, rng: &mut R) -> FieldElement {
        FieldElement {
            value: rng.gen_range(0..self.0),
            modulus: self,
        }
    }

    pub fn elements(self, values: &[u64]) -> Vec<FieldElement> {
        values.iter().map(|&v| self.element(v)).collect()
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

// Trial division is plenty below 2^31 (at most ~23k odd candidates).
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// A residue in `[0, p)` tagged with its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    modulus: PrimeModulus,
}

impl FieldElement {
    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> PrimeModulus {
        self.modulus
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn check(self, other: FieldElement) -> Result<(), AlgebraError> {
        if self.modulus != other.modulus {
            return Err(AlgebraError::ModulusMismatch {
                left: self.modulus.value(),
                right: other.modulus.value(),
            });
        }
        Ok(())
    }

    pub fn checked_add(self, other: FieldElement) -> Result<FieldElement, AlgebraError> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_sub(self, other: FieldElement) -> Result<FieldElement, AlgebraError> {
        self.check(other)?;
        Ok(self.sub_unchecked(other))
    }

    pub fn checked_mul(self, other: FieldElement) -> Result<FieldElement, AlgebraError> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn checked_div(self, other: FieldElement) -> Result<FieldElement, AlgebraError> {
        self.check(other)?;
        Ok(self.mul_unchecked(other.inverse()?))
    }

    #[inline]
    fn add_unchecked(self, other: FieldElement) -> FieldElement {
        let p = self.modulus.0;
        let s = self.value + other.value;
        FieldElement {
            value: if s >= p { s - p } else { s },
            modulus: self.modulus,
        }
    }

    #[inline]
    fn sub_unchecked(self, other: FieldElement) -> FieldElement {
        let p = self.modulus.0;
        FieldElement {
            value: if self.value >= other.value {
                self.value - other.value
            } else {
                self.value + p - other.value
            },
            modulus: self.modulus,
        }
    }

    #[inline]
    fn mul_unchecked(self, other: FieldElement) -> FieldElement {
        // both operands < 2^31, so the product is < 2^62
        FieldElement {
            value: self.value * other.value % self.modulus.0,
            modulus: self.modulus,
        }
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inverse(self) -> Result<FieldElement, AlgebraError> {
        if self.value == 0 {
            return Err(AlgebraError::ZeroInverse);
        }
        let p = self.modulus.0 as i64;
        let (mut old_r, mut r) = (self.value as i64, p);
        let (mut old_s, mut s) = (1i64, 0i64);
        while r != 0 {
            let q = old_r / r;
            (old_r, r) = (r, old_r - q * r);
            (old_s, s) = (s, old_s - q * s);
        }
        debug_assert_eq!(old_r, 1);
        Ok(self.modulus.from_i64(old_s))
    }

    pub fn pow(self, mut exp: u64) -> FieldElement {
        let mut base = self;
        let mut acc = self.modulus.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_unchecked(base);
            }
            base = base.mul_unchecked(base);
            exp >>= 1;
        }
        acc
    }
}

/// Inverse of `a` modulo its prime.
pub fn mod_inverse(a: FieldElement) -> Result<FieldElement, AlgebraError> {
    a.inverse()
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

// Operator impls panic on mixed moduli; use the `checked_*` methods where the
// moduli are not already known to agree.
macro_rules! binop {
    ($trait:ident, $method:ident, $assign_trait:ident, $assign_method:ident, $inner:ident) => {
        impl $trait for FieldElement {
            type Output = FieldElement;
            #[inline]
            fn $method(self, rhs: FieldElement) -> FieldElement {
                assert_eq!(self.modulus, rhs.modulus, "field elements of different moduli");
                self.$inner(rhs)
            }
        }

        impl $assign_trait for FieldElement {
            #[inline]
            fn $assign_method(&mut self, rhs: FieldElement) {
                *self = $trait::$method(*self, rhs);
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign, add_unchecked);
binop!(Sub, sub, SubAssign, sub_assign, sub_unchecked);
binop!(Mul, mul, MulAssign, mul_assign, mul_unchecked);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.modulus.zero().sub_unchecked(self)
    }
}

impl std::iter::Sum for FieldElement {
    /// Panics on an empty iterator since the modulus is unknown; use `fold`
    /// with an explicit zero in that case.
    fn sum<I: Iterator<Item = FieldElement>>(mut iter: I) -> FieldElement {
        let first = iter.next().expect("sum of an empty sequence of field elements");
        iter.fold(first, |acc, x| acc + x)
    }
}
