//! Dense complex linear algebra shared by the verification paths.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Default ceiling on the register size of any dense object.
pub const DEFAULT_DENSE_LIMIT: usize = 14;

/// Largest entry of `m - m^dagger`.
pub fn hermitian_residue(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Eigendecomposition `H = V diag(lambda) V^dagger` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: DVector<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    /// Fails when `m` is not Hermitian to within `tol`.
    pub fn new(m: &CMatrix, tol: f64) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::Precondition("matrix is not square".into()));
        }
        let residue = hermitian_residue(m);
        if residue > tol {
            return Err(Error::NotHermitian {
                residue,
                tolerance: tol,
            });
        }
        // symmetrize away the residue before solving
        let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = h.symmetric_eigen();
        Ok(Self {
            values: eig.eigenvalues,
            vectors: eig.eigenvectors,
        })
    }

    /// `V e^{-i lambda t} V^dagger psi`.
    pub fn evolve(&self, psi: &[Complex64], t: f64) -> Vec<Complex64> {
        let v = DVector::from_column_slice(psi);
        let mut coeffs = self.vectors.adjoint() * v;
        for (c, &l) in coeffs.iter_mut().zip(self.values.iter()) {
            *c *= Complex64::new(0.0, -l * t).exp();
        }
        (&self.vectors * coeffs).iter().copied().collect()
    }

    /// Unitary `e^{-iHt}` as a dense matrix.
    pub fn propagator(&self, t: f64) -> CMatrix {
        let phases = DVector::from_iterator(
            self.values.len(),
            self.values.iter().map(|&l| Complex64::new(0.0, -l * t).exp()),
        );
        let scaled = CMatrix::from_fn(self.vectors.nrows(), self.vectors.ncols(), |i, j| {
            self.vectors[(i, j)] * phases[j]
        });
        scaled * self.vectors.adjoint()
    }

    /// Operator 2-norm, `max |lambda|`.
    pub fn spectral_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |a, &l| a.max(l.abs()))
    }
}

/// Frobenius distance between `a` and `b` after aligning the global phase on
/// the largest-magnitude entry of `a`. Frobenius bounds the operator norm
/// from above, so a small value here certifies operator closeness.
pub fn phase_aligned_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    let (mut best, mut idx) = (0.0, (0, 0));
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            let m = a[(i, j)].norm();
            if m > best {
                best = m;
                idx = (i, j);
            }
        }
    }
    let phase = if best == 0.0 || b[idx].norm() == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        let r = b[idx] / a[idx];
        r / r.norm()
    };
    (a * phase - b).norm()
}

/// `<a|b>`.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm_sqr(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}

/// `<psi|M|psi>` for a dense matrix.
pub fn expectation(m: &CMatrix, psi: &[Complex64]) -> Complex64 {
    let v = DVector::from_column_slice(psi);
    let mv = m * &v;
    inner(psi, mv.as_slice())
}
