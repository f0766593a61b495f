use crate::solver::Trace;

use super::AnalysisError;

/// Portion of a series used for rate fitting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Window {
    /// Central fraction of the (truncated) series, e.g. 0.8 drops 10% at
    /// each end.
    Middle(f64),
    /// Explicit half-open index range `[start, end)`.
    Range(usize, usize),
}

impl Default for Window {
    fn default() -> Self {
        Window::Middle(0.8)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    /// Per-iteration contraction of `dist²`: `exp(slope)`.
    pub q: f64,
    /// Intercept of the fitted line in `log dist²`.
    pub intercept: f64,
    /// Root-mean-square residual in `log dist²`.
    pub residual: f64,
    /// Half-open index range actually fitted.
    pub window: (usize, usize),
}

/// Least-squares fit of `log dist²(x_k)` against `k`.
pub fn fit_linear_rate(trace: &Trace, window: Window) -> Result<RateFit, AnalysisError> {
    let dists = trace.distances().ok_or(AnalysisError::MissingDistance)?;
    let sq: Vec<f64> = dists.iter().map(|d| d * d).collect();
    fit_rate_series(&sq, window)
}

/// Fit on a series of squared distances. The series is first truncated at
/// its first nonpositive entry (exact convergence), then windowed.
pub fn fit_rate_series(sq_dists: &[f64], window: Window) -> Result<RateFit, AnalysisError> {
    let positive = sq_dists.iter().take_while(|e| **e > 0.0).count();
    let (start, end) = match window {
        Window::Middle(frac) => {
            if !(frac > 0.0 && frac <= 1.0) {
                return Err(AnalysisError::InvalidArgument(format!(
                    "window fraction must lie in (0,1], got {frac}"
                )));
            }
            let drop = ((1.0 - frac) / 2.0 * positive as f64).round() as usize;
            (drop, positive - drop)
        }
        Window::Range(s, e) => {
            if s >= e || e > sq_dists.len() {
                return Err(AnalysisError::InvalidArgument(format!(
                    "window [{s}, {e}) outside series of length {}",
                    sq_dists.len()
                )));
            }
            (s, e.min(positive))
        }
    };
    if end < start + 3 {
        return Err(AnalysisError::NoValidSamples(
            "fewer than 3 positive distances in the fit window",
        ));
    }
    let n = (end - start) as f64;
    let ks: Vec<f64> = (start..end).map(|k| k as f64).collect();
    let ys: Vec<f64> = sq_dists[start..end].iter().map(|e| e.ln()).collect();
    let kbar = ks.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let sxx: f64 = ks.iter().map(|k| (k - kbar).powi(2)).sum();
    let sxy: f64 = ks
        .iter()
        .zip(&ys)
        .map(|(k, y)| (k - kbar) * (y - ybar))
        .sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * kbar;
    let sse: f64 = ks
        .iter()
        .zip(&ys)
        .map(|(k, y)| (y - intercept - slope * k).powi(2))
        .sum();
    Ok(RateFit {
        q: slope.exp(),
        intercept,
        residual: (sse / n).sqrt(),
        window: (start, end),
    })
}
