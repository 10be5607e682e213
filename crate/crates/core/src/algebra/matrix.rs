use std::fmt;

use super::{AlgebraError, FieldElement, PrimeModulus, SingularKind};

/// Dense row-major matrix over Z_p. Row and column indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixZp {
    rows: usize,
    cols: usize,
    entries: Vec<FieldElement>,
    modulus: PrimeModulus,
}

impl MatrixZp {
    pub fn new(
        rows: usize,
        cols: usize,
        entries: Vec<FieldElement>,
        modulus: PrimeModulus,
    ) -> Result<Self, AlgebraError> {
        if entries.len() != rows * cols {
            return Err(AlgebraError::DimensionMismatch {
                expected: rows * cols,
                actual: entries.len(),
            });
        }
        if let Some(bad) = entries.iter().find(|e| e.modulus() != modulus) {
            return Err(AlgebraError::ModulusMismatch {
                left: modulus.value(),
                right: bad.modulus().value(),
            });
        }
        Ok(MatrixZp {
            rows,
            cols,
            entries,
            modulus,
        })
    }

    pub fn zeros(rows: usize, cols: usize, modulus: PrimeModulus) -> Self {
        MatrixZp {
            rows,
            cols,
            entries: vec![modulus.zero(); rows * cols],
            modulus,
        }
    }

    pub fn identity(n: usize, modulus: PrimeModulus) -> Self {
        let mut m = Self::zeros(n, n, modulus);
        for i in 0..n {
            m.set(i, i, modulus.one());
        }
        m
    }

    /// Builds a matrix from integer rows, reducing every entry mod `p`.
    pub fn from_rows(rows: &[Vec<u64>], modulus: PrimeModulus) -> Result<Self, AlgebraError> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(AlgebraError::DimensionMismatch {
                    expected: cols,
                    actual: row.len(),
                });
            }
            entries.extend(row.iter().map(|&v| modulus.element(v)));
        }
        Self::new(rows.len(), cols, entries, modulus)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        assert_eq!(v.modulus(), self.modulus);
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    /// Copy of `self` with column `c` replaced.
    pub fn with_column(&self, c: usize, values: &[FieldElement]) -> Result<MatrixZp, AlgebraError> {
        if c >= self.cols {
            return Err(AlgebraError::IndexOutOfRange { index: c, bound: self.cols });
        }
        if values.len() != self.rows {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.rows,
                actual: values.len(),
            });
        }
        let mut out = self.clone();
        for (r, &v) in values.iter().enumerate() {
            if v.modulus() != self.modulus {
                return Err(AlgebraError::ModulusMismatch {
                    left: self.modulus.value(),
                    right: v.modulus().value(),
                });
            }
            out.set(r, c, v);
        }
        Ok(out)
    }

    /// Submatrix with one row and one column removed.
    pub fn without(&self, drop_row: usize, drop_col: usize) -> Result<MatrixZp, AlgebraError> {
        if drop_row >= self.rows {
            return Err(AlgebraError::IndexOutOfRange { index: drop_row, bound: self.rows });
        }
        if drop_col >= self.cols {
            return Err(AlgebraError::IndexOutOfRange { index: drop_col, bound: self.cols });
        }
        let entries = (0..self.rows)
            .filter(|&r| r != drop_row)
            .flat_map(|r| {
                (0..self.cols)
                    .filter(move |&c| c != drop_col)
                    .map(move |c| self.get(r, c))
            })
            .collect();
        Ok(MatrixZp {
            rows: self.rows - 1,
            cols: self.cols - 1,
            entries,
            modulus: self.modulus,
        })
    }

    pub fn mul_vec(&self, x: &[FieldElement]) -> Result<Vec<FieldElement>, AlgebraError> {
        if x.len() != self.cols {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.cols,
                actual: x.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x)
                    .fold(self.modulus.zero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect())
    }

    /// Determinant by Gaussian elimination. Singular matrices give zero.
    pub fn determinant(&self) -> Result<FieldElement, AlgebraError> {
        if !self.is_square() {
            return Err(AlgebraError::NonSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut a = self.entries.clone();
        let mut det = self.modulus.one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return Ok(self.modulus.zero());
            };
            if pivot != col {
                for c in 0..n {
                    a.swap(pivot * n + c, col * n + c);
                }
                det = -det;
            }
            let pv = a[col * n + col];
            det *= pv;
            let inv = pv.inverse()?;
            for r in col + 1..n {
                let factor = a[r * n + col] * inv;
                if factor.is_zero() {
                    continue;
                }
                for c in col..n {
                    let sub = factor * a[col * n + c];
                    a[r * n + c] -= sub;
                }
            }
        }
        Ok(det)
    }

    /// Determinant of the minor obtained by deleting `drop_row` and `drop_col`.
    pub fn minor_determinant(&self, drop_row: usize, drop_col: usize) -> Result<FieldElement, AlgebraError> {
        if !self.is_square() {
            return Err(AlgebraError::NonSquare { rows: self.rows, cols: self.cols });
        }
        self.without(drop_row, drop_col)?.determinant()
    }

    /// Reduces `[self | b]` to row echelon form and returns one solution with
    /// every free variable set to zero. Works for rectangular systems.
    pub fn solve_any(&self, b: &[FieldElement]) -> Result<Solution, AlgebraError> {
        if b.len() != self.rows {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.rows,
                actual: b.len(),
            });
        }
        let (rows, cols) = (self.rows, self.cols);
        let width = cols + 1;
        let mut aug: Vec<FieldElement> = Vec::with_capacity(rows * width);
        for r in 0..rows {
            aug.extend_from_slice(self.row(r));
            aug.push(b[r]);
        }

        let mut pivot_cols = Vec::new();
        let mut rank = 0;
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let Some(pivot) = (rank..rows).find(|&r| !aug[r * width + col].is_zero()) else {
                continue;
            };
            if pivot != rank {
                for c in 0..width {
                    aug.swap(pivot * width + c, rank * width + c);
                }
            }
            let inv = aug[rank * width + col].inverse()?;
            for c in col..width {
                aug[rank * width + c] *= inv;
            }
            for r in 0..rows {
                if r == rank {
                    continue;
                }
                let factor = aug[r * width + col];
                if factor.is_zero() {
                    continue;
                }
                for c in col..width {
                    let sub = factor * aug[rank * width + c];
                    aug[r * width + c] -= sub;
                }
            }
            pivot_cols.push(col);
            rank += 1;
        }

        // a zero row with a nonzero right-hand side means no solution
        if (rank..rows).any(|r| !aug[r * width + cols].is_zero()) {
            return Err(AlgebraError::SingularSystem(SingularKind::Inconsistent));
        }
        let mut x = vec![self.modulus.zero(); cols];
        for (r, &c) in pivot_cols.iter().enumerate() {
            x[c] = aug[r * width + cols];
        }
        Ok(Solution {
            values: x,
            rank,
            unique: rank == cols,
        })
    }

    /// Unique solution of a square system.
    pub fn solve(&self, b: &[FieldElement]) -> Result<Vec<FieldElement>, AlgebraError> {
        if !self.is_square() {
            return Err(AlgebraError::NonSquare { rows: self.rows, cols: self.cols });
        }
        let sol = self.solve_any(b)?;
        if !sol.unique {
            return Err(AlgebraError::SingularSystem(SingularKind::Underdetermined));
        }
        Ok(sol.values)
    }
}

/// A particular solution from [`MatrixZp::solve_any`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub values: Vec<FieldElement>,
    pub rank: usize,
    pub unique: bool,
}

pub fn determinant(a: &MatrixZp) -> Result<FieldElement, AlgebraError> {
    a.determinant()
}

pub fn minor_determinant(a: &MatrixZp, drop_row: usize, drop_col: usize) -> Result<FieldElement, AlgebraError> {
    a.minor_determinant(drop_row, drop_col)
}

pub fn solve_linear_system(a: &MatrixZp, b: &[FieldElement]) -> Result<Vec<FieldElement>, AlgebraError> {
    a.solve(b)
}

impl fmt::Display for MatrixZp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
