//! Dense real matrix kernels at small dimension.
//!
//! Everything here is plain `Vec<f64>` row-major storage with quadratic or
//! cubic loops; the systems this crate targets have a handful of degrees of
//! freedom, so cache blocking and BLAS dispatch would be noise. Values are
//! immutable after construction and every function is pure.

use num_complex::Complex64;
use thiserror::Error;

mod givens;
mod jacobi;

pub use givens::{givens_decompose, givens_reconstruct, GivensRotation, GivensSequence};
pub use jacobi::{jacobi_eigen, EigenResult};

/// Errors from matrix construction and the kernels in this module.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("matrix dimension must be at least 1")]
    EmptyMatrix,
    #[error("entry count {got} does not match {n}x{n}")]
    BadEntryCount { n: usize, got: usize },
    #[error("matrix is not symmetric: |A - A^T| = {residual:e} exceeds tolerance")]
    Asymmetric { residual: f64 },
    #[error("matrix is not orthogonal: |M M^T - I| = {residual:e} exceeds tolerance")]
    NonOrthogonal { residual: f64 },
    #[error("Jacobi sweep budget exhausted after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("rotation indices must satisfy i < j, got ({i}, {j})")]
    BadRotationOrder { i: usize, j: usize },
    #[error("rotation indices ({i}, {j}) invalid for dimension {n}")]
    BadRotationIndex { i: usize, j: usize, n: usize },
    #[error("rotation list has {got} entries, more than n(n-1)/2 = {max}")]
    TooManyRotations { got: usize, max: usize },
    #[error("det_sign must be +1 or -1, got {0}")]
    BadDetSign(f64),
}

/// Square dense matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    n: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(n: usize) -> Self {
        Mat {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Build from a row-major entry slice; `entries.len()` must be `n*n`.
    pub fn from_entries(n: usize, entries: &[f64]) -> Result<Self, LinalgError> {
        if n == 0 {
            return Err(LinalgError::EmptyMatrix);
        }
        if entries.len() != n * n {
            return Err(LinalgError::BadEntryCount {
                n,
                got: entries.len(),
            });
        }
        Ok(Mat {
            n,
            data: entries.to_vec(),
        })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Mat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.n, |i, j| self.get(j, i))
    }

    pub fn mul(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.n, rhs.n, "matrix dimensions must agree");
        let n = self.n;
        let mut out = Mat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.get(k, j);
                }
            }
        }
        out
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.n, x.len(), "vector length must match dimension");
        let n = self.n;
        let mut out = vec![0.0; n];
        for i in 0..n {
            let mut acc = 0.0;
            for j in 0..n {
                acc += self.get(i, j) * x[j];
            }
            out[i] = acc;
        }
        out
    }

    pub fn sub(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.n, rhs.n, "matrix dimensions must agree");
        Mat::from_fn(self.n, |i, j| self.get(i, j) - rhs.get(i, j))
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Entrywise residual of the orthogonality identity `M M^T = I`.
    pub fn orthogonality_residual(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for k in 0..n {
                    acc += self.get(i, k) * self.get(j, k);
                }
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((acc - target).abs());
            }
        }
        worst
    }
}

/// Real symmetric matrix. Construction symmetrizes the input, storing
/// `(A + A^T)/2`, and rejects inputs whose asymmetry exceeds
/// `1e-12 * max|A|`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    mat: Mat,
}

impl SymMatrix {
    pub fn new(n: usize, entries: &[f64]) -> Result<Self, LinalgError> {
        let mat = Mat::from_entries(n, entries)?;
        Self::from_mat(mat)
    }

    pub fn from_mat(mat: Mat) -> Result<Self, LinalgError> {
        if !mat.is_finite() {
            return Err(LinalgError::NonFinite);
        }
        let n = mat.n();
        let scale = mat.max_abs();
        let mut asym = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                asym = asym.max((mat.get(i, j) - mat.get(j, i)).abs());
            }
        }
        if asym > 1e-12 * scale {
            return Err(LinalgError::Asymmetric { residual: asym });
        }
        let mut sym = mat.clone();
        for i in 0..n {
            for j in (i + 1)..n {
                let v = 0.5 * (mat.get(i, j) + mat.get(j, i));
                sym.set(i, j, v);
                sym.set(j, i, v);
            }
        }
        Ok(SymMatrix { mat: sym })
    }

    pub fn diagonal(d: &[f64]) -> Result<Self, LinalgError> {
        if d.is_empty() {
            return Err(LinalgError::EmptyMatrix);
        }
        if d.iter().any(|v| !v.is_finite()) {
            return Err(LinalgError::NonFinite);
        }
        let n = d.len();
        let mut m = Mat::zeros(n);
        for i in 0..n {
            m.set(i, i, d[i]);
        }
        Ok(SymMatrix { mat: m })
    }

    /// Arrowhead matrix: `diag` on the diagonal, `border` along the first
    /// row and column (`border[k]` couples index 0 to index `k+1`).
    pub fn arrowhead(diag: &[f64], border: &[f64]) -> Result<Self, LinalgError> {
        if diag.is_empty() {
            return Err(LinalgError::EmptyMatrix);
        }
        if border.len() + 1 != diag.len() {
            return Err(LinalgError::BadEntryCount {
                n: diag.len(),
                got: border.len() + 1,
            });
        }
        if diag.iter().chain(border.iter()).any(|v| !v.is_finite()) {
            return Err(LinalgError::NonFinite);
        }
        let n = diag.len();
        let mut m = Mat::zeros(n);
        for i in 0..n {
            m.set(i, i, diag[i]);
        }
        for (k, &b) in border.iter().enumerate() {
            m.set(0, k + 1, b);
            m.set(k + 1, 0, b);
        }
        Ok(SymMatrix { mat: m })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.mat.n()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.mat.get(i, j)
    }

    pub fn as_mat(&self) -> &Mat {
        &self.mat
    }

    pub fn to_mat(&self) -> Mat {
        self.mat.clone()
    }

    pub fn max_abs(&self) -> f64 {
        self.mat.max_abs()
    }

    pub fn frobenius(&self) -> f64 {
        self.mat.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n()).map(|i| self.get(i, i)).sum()
    }
}

/// Real orthogonal matrix; construction enforces `|M M^T - I| <= 1e-12`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthoMatrix {
    mat: Mat,
}

impl OrthoMatrix {
    pub const CONSTRUCTION_TOL: f64 = 1e-12;

    pub fn new(n: usize, entries: &[f64]) -> Result<Self, LinalgError> {
        let mat = Mat::from_entries(n, entries)?;
        Self::from_mat(mat)
    }

    pub fn from_mat(mat: Mat) -> Result<Self, LinalgError> {
        if !mat.is_finite() {
            return Err(LinalgError::NonFinite);
        }
        let residual = mat.orthogonality_residual();
        if residual > Self::CONSTRUCTION_TOL {
            return Err(LinalgError::NonOrthogonal { residual });
        }
        Ok(OrthoMatrix { mat })
    }

    pub fn identity(n: usize) -> Self {
        OrthoMatrix {
            mat: Mat::identity(n),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.mat.n()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.mat.get(i, j)
    }

    pub fn as_mat(&self) -> &Mat {
        &self.mat
    }

    pub fn to_mat(&self) -> Mat {
        self.mat.clone()
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        self.mat.matvec(x)
    }

    /// `M^T x` without materializing the transpose.
    pub fn matvec_t(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n();
        assert_eq!(n, x.len(), "vector length must match dimension");
        let mut out = vec![0.0; n];
        for i in 0..n {
            let xi = x[i];
            for j in 0..n {
                out[j] += self.get(i, j) * xi;
            }
        }
        out
    }

    /// Conjugation `M A M^T`.
    pub fn conjugate(&self, a: &SymMatrix) -> Mat {
        let am = a.as_mat();
        self.mat.mul(am).mul(&self.mat.transpose())
    }
}

/// Diagonal of the complex exponential `exp(i diag(lambdas) t)`.
///
/// Each entry is `e^{i lambda_k t}`, a pure phase.
pub fn matexp_hermitian_diag(lambdas: &[f64], t: f64) -> Vec<Complex64> {
    lambdas
        .iter()
        .map(|&l| {
            let (s, c) = (l * t).sin_cos();
            Complex64::new(c, s)
        })
        .collect()
}

/// Entrywise residual `|M J M^T - J|` for an even-dimension square matrix,
/// with `J = [[0, I], [-I, 0]]`.
pub fn symplectic_residual(m: &Mat) -> f64 {
    let two_n = m.n();
    assert!(two_n.is_multiple_of(2), "symplectic form needs even dimension");
    let n = two_n / 2;
    let j_of = |r: usize, c: usize| -> f64 {
        if c == r + n {
            1.0
        } else if r == c + n {
            -1.0
        } else {
            0.0
        }
    };
    // M J M^T computed column-block-wise: (M J)[i][k] = M[i][k+n] for k<n,
    // -M[i][k-n] for k>=n.
    let mut worst = 0.0f64;
    for i in 0..two_n {
        for j in 0..two_n {
            let mut acc = 0.0;
            for k in 0..n {
                acc += m.get(i, k) * m.get(j, k + n);
                acc -= m.get(i, k + n) * m.get(j, k);
            }
            worst = worst.max((acc - j_of(i, j)).abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetrize_small_asymmetry() {
        let a = SymMatrix::new(2, &[1.0, 0.5 + 1e-14, 0.5, 2.0]).unwrap();
        assert_eq!(a.get(0, 1), a.get(1, 0));
    }

    #[test]
    fn reject_large_asymmetry() {
        let err = SymMatrix::new(2, &[1.0, 0.5, 0.6, 2.0]).unwrap_err();
        assert!(matches!(err, LinalgError::Asymmetric { .. }));
    }

    #[test]
    fn reject_non_finite() {
        let err = SymMatrix::new(2, &[1.0, f64::NAN, f64::NAN, 2.0]).unwrap_err();
        assert_eq!(err, LinalgError::NonFinite);
    }

    #[test]
    fn ortho_construction_gate() {
        let c = 0.3f64.cos();
        let s = 0.3f64.sin();
        OrthoMatrix::new(2, &[c, s, -s, c]).unwrap();
        let err = OrthoMatrix::new(2, &[1.0, 0.1, 0.0, 1.0]).unwrap_err();
        assert!(matches!(err, LinalgError::NonOrthogonal { .. }));
    }

    #[test]
    fn phase_diag_is_unimodular() {
        let d = matexp_hermitian_diag(&[1.5, 0.5], 1.0);
        assert!((d[0] - Complex64::new(1.5f64.cos(), 1.5f64.sin())).norm() < 1e-15);
        for z in &d {
            assert!((z.norm() - 1.0).abs() <= 1e-15);
        }
        let id = matexp_hermitian_diag(&[1.0, 2.0], 0.0);
        for z in &id {
            assert_eq!(*z, Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn full_period_phase() {
        let omega = 0.7;
        let d = matexp_hermitian_diag(&[omega], std::f64::consts::TAU / omega);
        assert!((d[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn symplectic_residual_of_canonical_j_transform() {
        // A pure rotation applied equally to q and p blocks is symplectic.
        let c = 0.4f64.cos();
        let s = 0.4f64.sin();
        #[rustfmt::skip]
        let m = Mat::from_entries(4, &[
            c, s, 0.0, 0.0,
            -s, c, 0.0, 0.0,
            0.0, 0.0, c, s,
            0.0, 0.0, -s, c,
        ]).unwrap();
        assert!(symplectic_residual(&m) < 1e-15);
        // Unequal scaling of q without inverse scaling of p is not.
        let mut bad = Mat::identity(4);
        bad.set(0, 0, 2.0);
        assert!(symplectic_residual(&bad) > 0.5);
    }
}
