//! Power-law exponent of a time series by least squares on log-log axes.
//!
//! Survival series are squared Bessel-like oscillations that touch zero, so
//! the samples in the window are first averaged in consecutive blocks of
//! `smoothing_width` samples. Each block contributes one point
//! `(ln ⟨t⟩, ln ⟨value⟩)`; a trailing partial block is dropped.

use super::{ObservableError, TimeSeries};

/// Minimum number of smoothed points a fit will accept.
pub const MIN_FIT_BLOCKS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    /// Slope of `ln value` against `ln t`.
    pub exponent: f64,
    pub intercept: f64,
    pub window: (u64, u64),
    pub smoothing_width: usize,
    /// Root-mean-square residual in log space.
    pub rms_residual: f64,
    pub points: usize,
}

pub fn fit_decay_exponent(
    series: &TimeSeries,
    window: (u64, u64),
    smoothing_width: usize,
) -> Result<DecayFit, ObservableError> {
    if smoothing_width == 0 {
        return Err(ObservableError::ZeroSmoothing);
    }
    if window.0 >= window.1 {
        return Err(ObservableError::EmptyWindow(window.0, window.1));
    }
    let samples = series.window(window);

    let mut points = Vec::with_capacity(samples.len() / smoothing_width);
    for block in samples.chunks_exact(smoothing_width) {
        let n = block.len() as f64;
        let mean_t = block.iter().map(|&(t, _)| t as f64).sum::<f64>() / n;
        let mean_v = block.iter().map(|&(_, v)| v).sum::<f64>() / n;
        if mean_v <= 0.0 || mean_t <= 0.0 {
            return Err(ObservableError::NonPositive { t: mean_t, value: mean_v });
        }
        points.push((mean_t.ln(), mean_v.ln()));
    }
    if points.len() < MIN_FIT_BLOCKS {
        return Err(ObservableError::WindowTooShort { found: points.len() });
    }

    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for &(x, y) in &points {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    let exponent = sxy / sxx;
    let intercept = mean_y - exponent * mean_x;
    let sse: f64 = points
        .iter()
        .map(|&(x, y)| {
            let r = y - (intercept + exponent * x);
            r * r
        })
        .sum();

    Ok(DecayFit {
        exponent,
        intercept,
        window,
        smoothing_width,
        rms_residual: (sse / n).sqrt(),
        points: points.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn power_series(exponent: f64, scale: f64, range: std::ops::RangeInclusive<u64>) -> TimeSeries {
        TimeSeries::from_samples("p", range.map(|t| (t, scale * (t as f64).powf(exponent)))).unwrap()
    }

    #[test]
    fn exact_inverse_square() {
        let s = power_series(-2.0, 1.0, 1..=1000);
        let fit = fit_decay_exponent(&s, (100, 1000), 1).unwrap();
        assert!((fit.exponent + 2.0).abs() < 1e-6);
        assert!(fit.intercept.abs() < 1e-6);
        assert!(fit.rms_residual < 1e-10);
        assert_eq!(fit.points, 901);
    }

    #[test]
    fn intercept_recovers_prefactor() {
        let s = power_series(-1.0, 3.5, 1..=2000);
        let fit = fit_decay_exponent(&s, (50, 2000), 1).unwrap();
        assert!((fit.intercept - 3.5f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn smoothing_drops_partial_block() {
        let s = power_series(-1.0, 1.0, 1..=1000);
        let fit = fit_decay_exponent(&s, (100, 1000), 32).unwrap();
        assert_eq!(fit.points, 901 / 32);
        assert_eq!(fit.smoothing_width, 32);
        assert_eq!(fit.window, (100, 1000));
    }

    #[test]
    fn rejects_non_positive_blocks() {
        let s = TimeSeries::from_samples("z", (1..=500).map(|t| (t, if t > 300 { 0.0 } else { 1.0 }))).unwrap();
        assert!(matches!(
            fit_decay_exponent(&s, (100, 500), 10),
            Err(ObservableError::NonPositive { .. })
        ));
    }

    #[test]
    fn rejects_short_windows() {
        let s = power_series(-1.0, 1.0, 1..=1000);
        assert_eq!(
            fit_decay_exponent(&s, (100, 200), 32),
            Err(ObservableError::WindowTooShort { found: 3 })
        );
        assert_eq!(fit_decay_exponent(&s, (100, 100), 1), Err(ObservableError::EmptyWindow(100, 100)));
        assert_eq!(fit_decay_exponent(&s, (100, 900), 0), Err(ObservableError::ZeroSmoothing));
    }
}
