use super::ObservableError;

/// Ordered `(t, value)` samples of one observable.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    label: String,
    samples: Vec<(u64, f64)>,
}

impl TimeSeries {
    pub fn new(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            samples: Vec::new(),
        }
    }

    /// Builds a series, checking ordering and finiteness.
    pub fn from_samples(
        label: impl Into<String>,
        samples: impl IntoIterator<Item = (u64, f64)>,
    ) -> Result<Self, ObservableError> {
        let mut series = Self::new(label);
        for (t, v) in samples {
            series.push(t, v)?;
        }
        Ok(series)
    }

    pub fn push(&mut self, t: u64, value: f64) -> Result<(), ObservableError> {
        if let Some(&(prev, _)) = self.samples.last() {
            if t <= prev {
                return Err(ObservableError::NonIncreasingTime { prev, next: t });
            }
        }
        if !value.is_finite() {
            return Err(ObservableError::NonFiniteValue(t));
        }
        self.samples.push((t, value));
        Ok(())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn samples(&self) -> &[(u64, f64)] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Samples with `t_min ≤ t ≤ t_max`.
    pub fn window(&self, (t_min, t_max): (u64, u64)) -> &[(u64, f64)] {
        let lo = self.samples.partition_point(|&(t, _)| t < t_min);
        let hi = self.samples.partition_point(|&(t, _)| t <= t_max);
        &self.samples[lo..hi.max(lo)]
    }
}

/// Mean of the series over `window`, the trailing-window estimate of a
/// long-time limit.
pub fn asymptotic_entropy(series: &TimeSeries, window: (u64, u64)) -> Result<f64, ObservableError> {
    let samples = series.window(window);
    if window.0 > window.1 || samples.is_empty() {
        return Err(ObservableError::EmptyWindow(window.0, window.1));
    }
    Ok(samples.iter().map(|(_, v)| v).sum::<f64>() / samples.len() as f64)
}
