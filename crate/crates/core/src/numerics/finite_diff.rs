use super::NumericsError;

/// Central-difference gradient `(f(x + h e_j) - f(x - h e_j)) / 2h`.
pub fn finite_diff_grad<F>(f: F, x: &[f64], h: f64) -> Result<Vec<f64>, NumericsError>
where
    F: Fn(&[f64]) -> f64,
{
    if !(h > 0.0 && h.is_finite()) {
        return Err(NumericsError::InvalidArgument(format!(
            "step h must be positive and finite, got {h}"
        )));
    }
    let mut probe = x.to_vec();
    let mut grad = Vec::with_capacity(x.len());
    for j in 0..x.len() {
        let xj = probe[j];
        probe[j] = xj + h;
        let fp = f(&probe);
        probe[j] = xj - h;
        let fm = f(&probe);
        probe[j] = xj;
        for v in [fp, fm] {
            if !v.is_finite() {
                return Err(NumericsError::NonFinite { coord: j, value: v });
            }
        }
        grad.push((fp - fm) / (2.0 * h));
    }
    Ok(grad)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratics() {
        let g = finite_diff_grad(|x| x.iter().map(|v| v * v).sum(), &[1.0, 2.0], 1e-6).unwrap();
        assert!((g[0] - 2.0).abs() < 1e-5 && (g[1] - 4.0).abs() < 1e-5);
        let g = finite_diff_grad(|x| x[0] * x[0], &[1.0], 1e-6).unwrap();
        assert!((g[0] - 2.0).abs() < 1e-5);
    }

    #[test]
    fn second_order_accuracy() {
        // cubic: error of central differences is h^2 f'''/6 = h^2
        let f = |x: &[f64]| x[0].powi(3) + 2.0 * x[0] * x[1];
        let exact = [3.0 * 0.7f64.powi(2) + 2.0 * -1.3, 2.0 * 0.7];
        let mut prev = f64::INFINITY;
        for h in [1e-1, 5e-2, 2.5e-2] {
            let g = finite_diff_grad(f, &[0.7, -1.3], h).unwrap();
            let err = (g[0] - exact[0]).abs();
            assert!((err - h * h).abs() < 1e-10, "h={h} err={err}");
            assert!((g[1] - exact[1]).abs() < 1e-12);
            assert!(err < prev / 3.9);
            prev = err;
        }
    }

    #[test]
    fn errors() {
        assert!(finite_diff_grad(|x| x[0], &[1.0], 0.0).is_err());
        let err = finite_diff_grad(|x| 1.0 / x[1], &[1.0, 1e-7], 1e-7).unwrap_err();
        assert!(matches!(err, NumericsError::NonFinite { coord: 1, .. }));
    }
}
