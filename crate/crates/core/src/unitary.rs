//! Dense unitary matrices with a checked unitarity invariant.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Unitarity tolerance: max-norm of U†U − I admitted at construction.
/// Roughly 100x the rounding accumulated by double precision at d = 64
/// over 400 compositions.
pub const UNITARITY_TOL: f64 = 1e-10;

/// A dense d×d unitary. Every constructor verifies max-norm(U†U − I) ≤
/// [`UNITARITY_TOL`] and rejects non-finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    matrix: DMatrix<Complex64>,
}

impl UnitaryMatrix {
    /// Wrap a matrix, verifying squareness, finiteness, and unitarity.
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                actual: matrix.ncols(),
            });
        }
        if matrix.is_empty() {
            return Err(Error::EmptyInput { context: "unitary matrix" });
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { context: "unitary matrix entries" });
        }
        let deviation = unitarity_deviation(&matrix);
        if deviation > UNITARITY_TOL {
            return Err(Error::NotUnitary {
                deviation,
                tolerance: UNITARITY_TOL,
            });
        }
        Ok(Self { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: DMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    /// Row `t` as an owned vector (the bra ⟨t|U).
    pub fn row(&self, t: usize) -> Result<DVector<Complex64>> {
        if t >= self.dim() {
            return Err(Error::IndexOutOfRange {
                index: t,
                limit: self.dim(),
            });
        }
        Ok(self.matrix.row(t).transpose())
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
        }
    }

    /// Product `self * rhs`, re-checked against the unitarity invariant.
    pub fn compose(&self, rhs: &UnitaryMatrix) -> Result<Self> {
        if self.dim() != rhs.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: rhs.dim(),
            });
        }
        Self::new(&self.matrix * &rhs.matrix)
    }

    /// `self^n` by iterated multiplication.
    pub fn pow(&self, n: u64) -> Result<Self> {
        let mut acc = Self::identity(self.dim());
        for _ in 0..n {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    /// Max-norm of U†U − I for this matrix.
    pub fn unitarity_deviation(&self) -> f64 {
        unitarity_deviation(&self.matrix)
    }

    /// True when every row and column holds exactly one unit entry and
    /// zeros elsewhere (tolerance 1e-12 on the comparison).
    pub fn is_permutation(&self) -> bool {
        let d = self.dim();
        let mut row_hits = vec![0usize; d];
        let mut col_hits = vec![0usize; d];
        for r in 0..d {
            for c in 0..d {
                let z = self.matrix[(r, c)];
                if (z - Complex64::new(1.0, 0.0)).norm() <= 1e-12 {
                    row_hits[r] += 1;
                    col_hits[c] += 1;
                } else if z.norm() > 1e-12 {
                    return false;
                }
            }
        }
        row_hits.iter().all(|&k| k == 1) && col_hits.iter().all(|&k| k == 1)
    }

    /// Haar-distributed random unitary: QR of a complex Gaussian matrix
    /// with the R diagonal phases absorbed into Q.
    pub fn random_haar<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyInput { context: "random unitary" });
        }
        let gaussian = DMatrix::from_fn(dim, dim, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let qr = gaussian.qr();
        let r = qr.r();
        let mut q = qr.q();
        for j in 0..dim {
            let diag = r[(j, j)];
            let phase = if diag.norm() > 0.0 {
                diag / diag.norm()
            } else {
                Complex64::new(1.0, 0.0)
            };
            for i in 0..dim {
                q[(i, j)] *= phase;
            }
        }
        Self::new(q)
    }
}

fn unitarity_deviation(matrix: &DMatrix<Complex64>) -> f64 {
    let d = matrix.nrows();
    let gram = matrix.adjoint() * matrix;
    let mut max = 0.0f64;
    for r in 0..d {
        for c in 0..d {
            let expect = if r == c {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            max = max.max((gram[(r, c)] - expect).norm());
        }
    }
    max
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_is_unitary() {
        let u = UnitaryMatrix::identity(5);
        assert!(u.unitarity_deviation() <= UNITARITY_TOL);
        assert!(u.is_permutation());
    }

    #[test]
    fn non_unitary_rejected_with_deviation() {
        let m = DMatrix::from_diagonal_element(2, 2, Complex64::new(2.0, 0.0));
        match UnitaryMatrix::new(m) {
            Err(Error::NotUnitary { deviation, .. }) => assert!((deviation - 3.0).abs() < 1e-12),
            other => panic!("expected NotUnitary, got {other:?}"),
        }
    }

    #[test]
    fn non_finite_rejected() {
        let mut m = DMatrix::identity(2, 2);
        m[(0, 0)] = Complex64::new(f64::NAN, 0.0);
        assert!(matches!(
            UnitaryMatrix::new(m),
            Err(Error::NonFinite { .. })
        ));
    }

    #[test]
    fn pow_zero_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let u = UnitaryMatrix::random_haar(4, &mut rng).unwrap();
        let p = u.pow(0).unwrap();
        assert_eq!(p.as_matrix(), UnitaryMatrix::identity(4).as_matrix());
    }

    #[test]
    fn random_haar_is_unitary_across_dims() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for dim in [2usize, 4, 8, 16] {
            let u = UnitaryMatrix::random_haar(dim, &mut rng).unwrap();
            assert!(u.unitarity_deviation() <= UNITARITY_TOL, "dim {dim}");
        }
    }

    #[test]
    fn compose_checks_dims() {
        let a = UnitaryMatrix::identity(2);
        let b = UnitaryMatrix::identity(3);
        assert!(matches!(
            a.compose(&b),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
