use std::fmt;

use super::{AlgebraError, FieldElement, PrimeModulus};

/// Polynomial over Z_p, coefficients stored low degree first.
///
/// Trailing zeros are always stripped, so two polynomials are equal exactly
/// when their coefficient vectors are equal. The zero polynomial has no
/// coefficients and [`Polynomial::degree`] returns `None` for it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<FieldElement>,
    modulus: PrimeModulus,
}

impl Polynomial {
    pub fn zero(modulus: PrimeModulus) -> Self {
        Polynomial {
            coeffs: Vec::new(),
            modulus,
        }
    }

    pub fn constant(c: FieldElement) -> Self {
        Self::new(vec![c], c.modulus()).expect("single coefficient")
    }

    /// `c * x^degree`
    pub fn monomial(c: FieldElement, degree: usize) -> Self {
        let mut coeffs = vec![c.modulus().zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs, c.modulus()).expect("uniform modulus")
    }

    pub fn new(coeffs: Vec<FieldElement>, modulus: PrimeModulus) -> Result<Self, AlgebraError> {
        if let Some(bad) = coeffs.iter().find(|c| c.modulus() != modulus) {
            return Err(AlgebraError::ModulusMismatch {
                left: modulus.value(),
                right: bad.modulus().value(),
            });
        }
        let mut p = Polynomial { coeffs, modulus };
        p.normalize();
        Ok(p)
    }

    pub fn from_u64s(coeffs: &[u64], modulus: PrimeModulus) -> Self {
        let mut p = Polynomial {
            coeffs: modulus.elements(coeffs),
            modulus,
        };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn coefficients(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero past the degree.
    pub fn coefficient(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or(self.modulus.zero())
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading_coefficient(&self) -> Option<FieldElement> {
        self.coeffs.last().copied()
    }

    fn check(&self, other: PrimeModulus) -> Result<(), AlgebraError> {
        if self.modulus != other {
            return Err(AlgebraError::ModulusMismatch {
                left: self.modulus.value(),
                right: other.value(),
            });
        }
        Ok(())
    }

    /// Horner evaluation.
    pub fn eval(&self, x: FieldElement) -> Result<FieldElement, AlgebraError> {
        self.check(x.modulus())?;
        Ok(self
            .coeffs
            .iter()
            .rev()
            .fold(self.modulus.zero(), |acc, &c| acc * x + c))
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial, AlgebraError> {
        self.check(other.modulus)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| self.coefficient(i) + other.coefficient(i))
            .collect();
        Polynomial::new(coeffs, self.modulus)
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial, AlgebraError> {
        self.check(other.modulus)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| self.coefficient(i) - other.coefficient(i))
            .collect();
        Polynomial::new(coeffs, self.modulus)
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial, AlgebraError> {
        self.check(other.modulus)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(self.modulus));
        }
        let mut coeffs = vec![self.modulus.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial::new(coeffs, self.modulus)
    }

    pub fn scale(&self, c: FieldElement) -> Result<Polynomial, AlgebraError> {
        self.check(c.modulus())?;
        Polynomial::new(self.coeffs.iter().map(|&a| a * c).collect(), self.modulus)
    }

    /// Long division: returns `(quotient, remainder)` with
    /// `self = divisor * quotient + remainder` and `deg(remainder) < deg(divisor)`.
    pub fn div_rem(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial), AlgebraError> {
        self.check(divisor.modulus)?;
        let d_deg = divisor.degree().ok_or(AlgebraError::DivisionByZeroPolynomial)?;
        let lead_inv = divisor.coeffs[d_deg].inverse()?;
        let mut rem = self.coeffs.clone();
        let Some(n_deg) = self.degree().filter(|&n| n >= d_deg) else {
            return Ok((Polynomial::zero(self.modulus), self.clone()));
        };
        let mut quot = vec![self.modulus.zero(); n_deg - d_deg + 1];
        for shift in (0..=n_deg - d_deg).rev() {
            let c = rem[shift + d_deg] * lead_inv;
            quot[shift] = c;
            if c.is_zero() {
                continue;
            }
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                rem[shift + j] -= c * dc;
            }
        }
        rem.truncate(d_deg);
        Ok((
            Polynomial::new(quot, self.modulus)?,
            Polynomial::new(rem, self.modulus)?,
        ))
    }

    /// Unique polynomial of degree `< points.len()` through the given points.
    pub fn interpolate(points: &[(FieldElement, FieldElement)]) -> Result<Polynomial, AlgebraError> {
        let Some(&(x0, _)) = points.first() else {
            return Err(AlgebraError::EmptyInterpolation);
        };
        let modulus = x0.modulus();
        for (i, &(xi, yi)) in points.iter().enumerate() {
            if xi.modulus() != modulus || yi.modulus() != modulus {
                return Err(AlgebraError::ModulusMismatch {
                    left: modulus.value(),
                    right: if xi.modulus() != modulus { xi.modulus() } else { yi.modulus() }.value(),
                });
            }
            if points[..i].iter().any(|&(xj, _)| xj == xi) {
                return Err(AlgebraError::DuplicateAbscissa(xi.value()));
            }
        }

        let mut acc = Polynomial::zero(modulus);
        for (i, &(xi, yi)) in points.iter().enumerate() {
            // basis polynomial L_i(x) = prod_{j != i} (x - x_j) / (x_i - x_j)
            let mut basis = Polynomial::constant(modulus.one());
            let mut denom = modulus.one();
            for (j, &(xj, _)) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                basis = basis.mul(&Polynomial::new(vec![-xj, modulus.one()], modulus)?)?;
                denom *= xi - xj;
            }
            acc = acc.add(&basis.scale(yi * denom.inverse()?)?)?;
        }
        Ok(acc)
    }
}

/// Value at `x` of the interpolating polynomial through `points`, without
/// building its coefficients.
pub fn interpolate_at(
    points: &[(FieldElement, FieldElement)],
    x: FieldElement,
) -> Result<FieldElement, AlgebraError> {
    let modulus = x.modulus();
    if points.is_empty() {
        return Err(AlgebraError::EmptyInterpolation);
    }
    let mut acc = modulus.zero();
    for (i, &(xi, yi)) in points.iter().enumerate() {
        xi.checked_add(yi)?;
        x.checked_add(xi)?;
        let mut num = modulus.one();
        let mut den = modulus.one();
        for (j, &(xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            if xi == xj {
                return Err(AlgebraError::DuplicateAbscissa(xi.value()));
            }
            num *= x - xj;
            den *= xi - xj;
        }
        acc += yi * num * den.inverse()?;
    }
    Ok(acc)
}

/// Evaluates `poly` at `x`.
pub fn poly_eval(poly: &Polynomial, x: FieldElement) -> Result<FieldElement, AlgebraError> {
    poly.eval(x)
}

pub fn poly_divide(
    numerator: &Polynomial,
    divisor: &Polynomial,
) -> Result<(Polynomial, Polynomial), AlgebraError> {
    numerator.div_rem(divisor)
}

pub fn lagrange_interpolate(points: &[(FieldElement, FieldElement)]) -> Result<Polynomial, AlgebraError> {
    Polynomial::interpolate(points)
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}x")?,
                _ => write!(f, "{c}x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f7() -> PrimeModulus {
        PrimeModulus::new(7).unwrap()
    }

    fn pts(m: PrimeModulus, raw: &[(u64, u64)]) -> Vec<(FieldElement, FieldElement)> {
        raw.iter().map(|&(x, y)| (m.element(x), m.element(y))).collect()
    }

    #[test]
    fn canonical_form() {
        let m = f7();
        let p = Polynomial::from_u64s(&[1, 2, 0, 7, 14], m);
        assert_eq!(p.degree(), Some(1));
        let z = Polynomial::from_u64s(&[0, 0, 7], m);
        assert_eq!(z, Polynomial::zero(m));
        assert_eq!(z.degree(), None);
    }

    #[test]
    fn eval_examples() {
        let m = f7();
        // interpolate the first two codeword positions, then evaluate
        let p = lagrange_interpolate(&pts(m, &[(1, 2), (2, 0)])).unwrap();
        assert_eq!(p, Polynomial::from_u64s(&[4, 5], m));
        assert_eq!(poly_eval(&p, m.element(3)).unwrap().value(), 5);
        assert_eq!(poly_eval(&p, m.element(4)).unwrap().value(), 3);
        for x in 0..7 {
            assert!(poly_eval(&Polynomial::zero(m), m.element(x)).unwrap().is_zero());
        }
    }

    #[test]
    fn eval_rejects_foreign_point() {
        let p = Polynomial::from_u64s(&[4, 5], f7());
        let x = PrimeModulus::new(11).unwrap().element(1);
        assert!(matches!(p.eval(x), Err(AlgebraError::ModulusMismatch { .. })));
    }

    #[test]
    fn divide_examples() {
        let m = f7();
        let n = Polynomial::from_u64s(&[2, 3, 5], m);
        let d = Polynomial::from_u64s(&[4, 1], m);
        // oracle: (4 + 5x)(x + 4) = 16 + 25x + 5x^2 = 2 + 4x... mod 7
        let q_expected = Polynomial::from_u64s(&[4, 5], m);
        let prod = q_expected.mul(&d).unwrap();
        assert_eq!(prod, n);
        let (q, r) = poly_divide(&n, &d).unwrap();
        assert_eq!(q, q_expected);
        assert!(r.is_zero());

        let x2 = Polynomial::from_u64s(&[0, 0, 1], m);
        let x = Polynomial::from_u64s(&[0, 1], m);
        assert_eq!(poly_divide(&x2, &x).unwrap(), (x.clone(), Polynomial::zero(m)));

        let xp1 = Polynomial::from_u64s(&[1, 1], m);
        assert_eq!(poly_divide(&xp1, &x2).unwrap(), (Polynomial::zero(m), xp1.clone()));

        assert_eq!(
            poly_divide(&xp1, &Polynomial::zero(m)),
            Err(AlgebraError::DivisionByZeroPolynomial)
        );
    }

    #[test]
    fn interpolate_examples() {
        let m = f7();
        let p = lagrange_interpolate(&pts(m, &[(1, 2), (2, 0)])).unwrap();
        assert_eq!(p.eval(m.element(1)).unwrap().value(), 2);
        assert_eq!(p.eval(m.element(2)).unwrap().value(), 0);
        assert_eq!(
            lagrange_interpolate(&pts(m, &[(5, 3)])).unwrap(),
            Polynomial::from_u64s(&[3], m)
        );
        assert_eq!(
            lagrange_interpolate(&pts(m, &[(1, 2), (1, 0)])),
            Err(AlgebraError::DuplicateAbscissa(1))
        );
        assert_eq!(lagrange_interpolate(&[]), Err(AlgebraError::EmptyInterpolation));
    }

    #[test]
    fn interpolate_at_matches_full_interpolation() {
        let m = PrimeModulus::new(101).unwrap();
        let points = pts(m, &[(1, 17), (2, 99), (3, 4), (5, 60)]);
        let poly = lagrange_interpolate(&points).unwrap();
        for x in 0..10 {
            let x = m.element(x);
            assert_eq!(interpolate_at(&points, x).unwrap(), poly.eval(x).unwrap());
        }
        assert_eq!(
            interpolate_at(&pts(m, &[(1, 2), (1, 3)]), m.zero()),
            Err(AlgebraError::DuplicateAbscissa(1))
        );
    }

    #[test]
    fn display() {
        let m = f7();
        assert_eq!(Polynomial::from_u64s(&[4, 5], m).to_string(), "4 + 5x");
        assert_eq!(Polynomial::from_u64s(&[0, 0, 3], m).to_string(), "3x^2");
        assert_eq!(Polynomial::zero(m).to_string(), "0");
    }
}
