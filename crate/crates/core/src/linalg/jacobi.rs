//! Cyclic Jacobi eigendecomposition for real symmetric matrices.
//!
//! Chosen over QR-style solvers because its factor structure (a product of
//! planar rotations) matches the Givens factorization used elsewhere in the
//! crate. Convergence is quadratic once the off-diagonal mass is small; at
//! the dimensions this crate handles a handful of sweeps suffices.

use super::{LinalgError, Mat, OrthoMatrix, SymMatrix};

const MAX_SWEEPS: usize = 30;
const OFF_DIAG_TOL: f64 = 1e-14;

/// Eigendecomposition of a real symmetric matrix.
///
/// `basis` rows are eigenvectors: `basis * A * basis^T = diag(lambdas)`.
/// `lambdas` are sorted descending, ties broken by the pivot position in the
/// converged Jacobi iteration. Each row has its largest-magnitude component
/// made positive, except that `det(basis)` is forced to `+1` by flipping the
/// sign of the last row when necessary; `det_sign` is `-1.0` when that flip
/// was applied and `+1.0` otherwise.
#[derive(Debug, Clone)]
pub struct EigenResult {
    pub lambdas: Vec<f64>,
    pub basis: OrthoMatrix,
    pub det_sign: f64,
}

fn off_diag_frobenius(m: &Mat) -> f64 {
    let n = m.n();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let v = m.get(i, j);
                acc += v * v;
            }
        }
    }
    acc.sqrt()
}

/// Diagonalize `a` by cyclic Jacobi rotations.
///
/// Errors with [`LinalgError::NonFinite`] on NaN/infinite entries and
/// [`LinalgError::NoConvergence`] if the off-diagonal Frobenius norm fails to
/// drop below `1e-14 * |A|_F` within 30 sweeps.
pub fn jacobi_eigen(a: &SymMatrix) -> Result<EigenResult, LinalgError> {
    if !a.as_mat().is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let n = a.n();
    let mut m = a.to_mat();
    let mut v = Mat::identity(n);
    let tol = OFF_DIAG_TOL * a.frobenius();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diag_frobenius(&m) <= tol {
            converged = true;
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let apq = m.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let theta = 0.5 * (m.get(q, q) - m.get(p, p)) / apq;
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (theta - (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // A <- J^T A J with J mixing columns (p, q).
                for k in 0..n {
                    let akp = m.get(k, p);
                    let akq = m.get(k, q);
                    m.set(k, p, c * akp - s * akq);
                    m.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = m.get(p, k);
                    let aqk = m.get(q, k);
                    m.set(p, k, c * apk - s * aqk);
                    m.set(q, k, s * apk + c * aqk);
                }
                m.set(p, q, 0.0);
                m.set(q, p, 0.0);
                // Accumulate eigenvectors as columns of V.
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }
    if !converged && off_diag_frobenius(&m) > tol {
        return Err(LinalgError::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let raw: Vec<f64> = (0..n).map(|i| m.get(i, i)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| raw[j].partial_cmp(&raw[i]).unwrap().then(i.cmp(&j)));

    // det(V) = +1 (product of rotations); track the permutation parity and
    // every row-sign flip so the final determinant is known exactly.
    let mut det = permutation_parity(&order);
    let lambdas: Vec<f64> = order.iter().map(|&i| raw[i]).collect();
    let mut basis = Mat::zeros(n);
    for (row, &col) in order.iter().enumerate() {
        let mut best = 0usize;
        let mut best_abs = -1.0;
        for k in 0..n {
            let a = v.get(k, col).abs();
            if a > best_abs {
                best_abs = a;
                best = k;
            }
        }
        let flip = if v.get(best, col) < 0.0 { -1.0 } else { 1.0 };
        det *= flip;
        for k in 0..n {
            basis.set(row, k, flip * v.get(k, col));
        }
    }
    let det_sign = if det < 0.0 {
        for k in 0..n {
            let val = basis.get(n - 1, k);
            basis.set(n - 1, k, -val);
        }
        -1.0
    } else {
        1.0
    };

    Ok(EigenResult {
        lambdas,
        basis: OrthoMatrix::from_mat(basis)?,
        det_sign,
    })
}

fn permutation_parity(order: &[usize]) -> f64 {
    let mut inversions = 0usize;
    for i in 0..order.len() {
        for j in (i + 1)..order.len() {
            if order[i] > order[j] {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}
