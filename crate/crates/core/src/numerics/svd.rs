use super::linalg::{dot, Matrix};
use super::rng::RngStream;
use super::NumericsError;

const JACOBI_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;
const MAX_DIM: usize = 64;

/// Singular values of a small square matrix, in descending order.
///
/// One-sided (Hestenes) Jacobi: columns are rotated pairwise until every pair
/// is orthogonal to relative tolerance 1e-12; the singular values are then the
/// column norms.
pub fn singular_values(a: &Matrix) -> Result<Vec<f64>, NumericsError> {
    let (rows, cols) = a.shape();
    if rows != cols || rows == 0 {
        return Err(NumericsError::DimensionMismatch {
            expected: "non-empty square matrix".into(),
            got: format!("{rows}x{cols}"),
        });
    }
    if rows > MAX_DIM {
        return Err(NumericsError::InvalidArgument(format!(
            "singular_values supports r <= {MAX_DIM}, got {rows}"
        )));
    }
    if a.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(NumericsError::InvalidArgument(
            "matrix has non-finite entries".into(),
        ));
    }

    let n = cols;
    // column-major working copy
    let mut u: Vec<Vec<f64>> = (0..n).map(|j| a.column(j)).collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = dot(&u[p], &u[p]);
                let beta = dot(&u[q], &u[q]);
                let gamma = dot(&u[p], &u[q]);
                if gamma == 0.0 || gamma.abs() <= JACOBI_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (left, right) = u.split_at_mut(q);
                let (up, uq) = (&mut left[p], &mut right[0]);
                for (x, y) in up.iter_mut().zip(uq.iter_mut()) {
                    let (xp, yq) = (*x, *y);
                    *x = c * xp - s * yq;
                    *y = s * xp + c * yq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sigma: Vec<f64> = u.iter().map(|col| dot(col, col).sqrt()).collect();
    sigma.sort_by(|x, y| y.total_cmp(x));
    Ok(sigma)
}

/// Thin SVD `a = U diag(sigma) Vᵀ` of a small square matrix, by the same
/// one-sided Jacobi sweep as [`singular_values`] with the rotations
/// accumulated into `V`. Singular values are descending; for zero singular
/// values the matching columns of `U` are an arbitrary orthonormal completion.
pub fn svd_small(a: &Matrix) -> Result<(Matrix, Vec<f64>, Matrix), NumericsError> {
    let (rows, cols) = a.shape();
    if rows != cols || rows == 0 || rows > MAX_DIM {
        return Err(NumericsError::DimensionMismatch {
            expected: format!("non-empty square matrix of order <= {MAX_DIM}"),
            got: format!("{rows}x{cols}"),
        });
    }
    let n = cols;
    let mut u: Vec<Vec<f64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = dot(&u[p], &u[p]);
                let beta = dot(&u[q], &u[q]);
                let gamma = dot(&u[p], &u[q]);
                if gamma == 0.0 || gamma.abs() <= JACOBI_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for cols in [&mut u, &mut v] {
                    let (left, right) = cols.split_at_mut(q);
                    for (x, y) in left[p].iter_mut().zip(right[0].iter_mut()) {
                        let (xp, yq) = (*x, *y);
                        *x = c * xp - s * yq;
                        *y = s * xp + c * yq;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let sigma: Vec<f64> = u.iter().map(|col| dot(col, col).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigma[j].total_cmp(&sigma[i]));
    let smax = sigma[order[0]];
    let cutoff = smax * 1e-13;

    let mut ucols: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut sorted_sigma = Vec::with_capacity(n);
    let mut vmat = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        sorted_sigma.push(sigma[src]);
        for i in 0..n {
            vmat[(i, dst)] = v[src][i];
        }
        if sigma[src] > cutoff && sigma[src] > 0.0 {
            ucols.push(u[src].iter().map(|x| x / sigma[src]).collect());
        } else {
            ucols.push(orthonormal_completion(&ucols, n));
        }
    }
    let mut umat = Matrix::zeros(n, n);
    for (j, col) in ucols.iter().enumerate() {
        for (i, x) in col.iter().enumerate() {
            umat[(i, j)] = *x;
        }
    }
    Ok((umat, sorted_sigma, vmat))
}

/// A unit vector orthogonal to every vector in `basis` (assumed orthonormal).
fn orthonormal_completion(basis: &[Vec<f64>], n: usize) -> Vec<f64> {
    let mut best: Option<Vec<f64>> = None;
    let mut best_len = 0.0;
    for e in 0..n {
        let mut w: Vec<f64> = (0..n).map(|i| if i == e { 1.0 } else { 0.0 }).collect();
        for b in basis {
            let proj = dot(b, &w);
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi -= proj * bi;
            }
        }
        let len = dot(&w, &w).sqrt();
        if len > best_len {
            best_len = len;
            best = Some(w);
        }
    }
    let w = best.expect("n >= 1");
    w.iter().map(|x| x / best_len).collect()
}

/// Haar-ish random orthogonal `n x n` matrix: modified Gram-Schmidt applied
/// to a Gaussian matrix, with column signs fixed so that the triangular
/// factor has a positive diagonal.
pub fn random_orthogonal(rng: &mut RngStream, n: usize) -> Matrix {
    loop {
        let mut cols: Vec<Vec<f64>> = (0..n).map(|_| rng.sample_gaussian(n)).collect();
        let mut ok = true;
        for j in 0..n {
            for i in 0..j {
                let proj = dot(&cols[i], &cols[j]);
                let (head, tail) = cols.split_at_mut(j);
                for (x, y) in tail[0].iter_mut().zip(&head[i]) {
                    *x -= proj * y;
                }
            }
            let len = dot(&cols[j], &cols[j]).sqrt();
            if len < 1e-8 {
                ok = false;
                break;
            }
            cols[j].iter_mut().for_each(|x| *x /= len);
        }
        if ok {
            let mut q = Matrix::zeros(n, n);
            for (j, col) in cols.iter().enumerate() {
                for (i, v) in col.iter().enumerate() {
                    q[(i, j)] = *v;
                }
            }
            return q;
        }
    }
}
