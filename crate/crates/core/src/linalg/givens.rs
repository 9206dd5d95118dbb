//! Factorization of an orthogonal matrix into planar (Givens) rotations.
//!
//! Works row by row: right-multiplying by `R(i,j,alpha)^T` with
//! `alpha = atan2(m[i][j], m[i][i])` zeroes entry `(i, j)` while leaving the
//! other columns of row `i` untouched, and drives `(i, i)` to a nonnegative
//! value. Orthogonality then forces the trailing block to stay orthogonal,
//! so the sweep reduces the matrix to the identity, except that a matrix
//! with determinant `-1` ends as `diag(1, .., 1, -1)`. That reflection is
//! recorded in `det_sign` rather than forced into rotation angles, which can
//! only represent the special orthogonal group.

use super::{LinalgError, Mat, OrthoMatrix};
use std::f64::consts::{PI, TAU};

/// Maximum orthogonality residual accepted by [`givens_decompose`].
pub const DECOMPOSE_TOL: f64 = 1e-10;

/// A rotation by `alpha` in the `(i, j)` coordinate plane, `i < j`
/// (zero-based). Matrix convention: `R[i][i] = R[j][j] = cos`,
/// `R[i][j] = sin`, `R[j][i] = -sin`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GivensRotation {
    pub i: usize,
    pub j: usize,
    pub alpha: f64,
}

impl GivensRotation {
    /// Validates `i < j` and wraps the angle into `(-pi, pi]`.
    pub fn new(i: usize, j: usize, alpha: f64) -> Result<Self, LinalgError> {
        if !alpha.is_finite() {
            return Err(LinalgError::NonFinite);
        }
        if i >= j {
            return Err(LinalgError::BadRotationOrder { i, j });
        }
        Ok(GivensRotation {
            i,
            j,
            alpha: wrap_angle(alpha),
        })
    }
}

fn wrap_angle(alpha: f64) -> f64 {
    let mut a = alpha % TAU;
    if a > PI {
        a -= TAU;
    } else if a <= -PI {
        a += TAU;
    }
    a
}

/// Ordered product of planar rotations factoring an orthogonal matrix.
///
/// The represented matrix is `F * R_k * ... * R_2 * R_1` where `R_1` is
/// `rotations[0]` and `F = diag(1, .., 1, det_sign)`. With rotations grouped
/// by first index this is the product `R_{N-1} ... R_1` of row-clearing
/// stages, each stage itself a product over planes `(i, i+1), .., (i, N)`.
#[derive(Debug, Clone)]
pub struct GivensSequence {
    pub n: usize,
    pub rotations: Vec<GivensRotation>,
    pub det_sign: f64,
}

impl GivensSequence {
    pub fn new(
        n: usize,
        rotations: Vec<GivensRotation>,
        det_sign: f64,
    ) -> Result<Self, LinalgError> {
        if n == 0 {
            return Err(LinalgError::EmptyMatrix);
        }
        if det_sign != 1.0 && det_sign != -1.0 {
            return Err(LinalgError::BadDetSign(det_sign));
        }
        let max = n * (n - 1) / 2;
        if rotations.len() > max {
            return Err(LinalgError::TooManyRotations {
                got: rotations.len(),
                max,
            });
        }
        for r in &rotations {
            if r.i >= r.j || r.j >= n {
                return Err(LinalgError::BadRotationIndex { i: r.i, j: r.j, n });
            }
        }
        Ok(GivensSequence {
            n,
            rotations,
            det_sign,
        })
    }
}

/// Factor an orthogonal matrix into at most `n(n-1)/2` planar rotations.
///
/// Rotations with angle exactly zero are omitted, so the identity yields an
/// empty list. Errors with [`LinalgError::NonOrthogonal`] if
/// `|m m^T - I| > 1e-10`.
pub fn givens_decompose(m: &OrthoMatrix) -> Result<GivensSequence, LinalgError> {
    let residual = m.as_mat().orthogonality_residual();
    if residual > DECOMPOSE_TOL {
        return Err(LinalgError::NonOrthogonal { residual });
    }
    let n = m.n();
    let mut a = m.to_mat();
    let mut rotations = Vec::new();
    for i in 0..n.saturating_sub(1) {
        for j in (i + 1)..n {
            let alpha = a.get(i, j).atan2(a.get(i, i));
            if alpha == 0.0 {
                continue;
            }
            rotations.push(GivensRotation {
                i,
                j,
                alpha: wrap_angle(alpha),
            });
            let (s, c) = alpha.sin_cos();
            // a <- a * R^T mixes columns i and j only.
            for k in 0..n {
                let aki = a.get(k, i);
                let akj = a.get(k, j);
                a.set(k, i, c * aki + s * akj);
                a.set(k, j, -s * aki + c * akj);
            }
        }
    }
    let det_sign = if a.get(n - 1, n - 1) < 0.0 { -1.0 } else { 1.0 };
    GivensSequence::new(n, rotations, det_sign)
}

/// Rebuild the orthogonal matrix represented by a [`GivensSequence`].
pub fn givens_reconstruct(seq: &GivensSequence) -> Result<OrthoMatrix, LinalgError> {
    let n = seq.n;
    if seq.det_sign != 1.0 && seq.det_sign != -1.0 {
        return Err(LinalgError::BadDetSign(seq.det_sign));
    }
    let mut out = Mat::identity(n);
    for r in &seq.rotations {
        if r.i >= r.j || r.j >= n {
            return Err(LinalgError::BadRotationIndex { i: r.i, j: r.j, n });
        }
        let (s, c) = r.alpha.sin_cos();
        // out <- R * out mixes rows i and j only.
        for k in 0..n {
            let rik = out.get(r.i, k);
            let rjk = out.get(r.j, k);
            out.set(r.i, k, c * rik + s * rjk);
            out.set(r.j, k, -s * rik + c * rjk);
        }
    }
    if seq.det_sign < 0.0 {
        for k in 0..n {
            let v = out.get(n - 1, k);
            out.set(n - 1, k, -v);
        }
    }
    OrthoMatrix::from_mat(out)
}
