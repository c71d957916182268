//! Measurements on walk states and estimators over their time series.

mod density;
mod fit;
mod series;

pub use density::{coin_density, entanglement_entropy, CoinDensityMatrix, DENSITY_TOLERANCE};
pub use fit::{fit_decay_exponent, DecayFit, MIN_FIT_BLOCKS};
pub use series::{asymptotic_entropy, TimeSeries};

use thiserror::Error;

use crate::walk::WalkState;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ObservableError {
    #[error("density matrix is not Hermitian (|ρ_RL − ρ_LR*| = {0})")]
    NotHermitian(f64),

    #[error("density matrix trace is {0}, expected 1")]
    BadTrace(f64),

    #[error("time series samples must have strictly increasing t (got {next} after {prev})")]
    NonIncreasingTime { prev: u64, next: u64 },

    #[error("time series value at t={0} is not finite")]
    NonFiniteValue(u64),

    #[error("window [{0}, {1}] is empty or inverted")]
    EmptyWindow(u64, u64),

    #[error("smoothing width must be at least 1")]
    ZeroSmoothing,

    #[error("window yields {found} smoothed points; at least {MIN_FIT_BLOCKS} are required")]
    WindowTooShort { found: usize },

    #[error("smoothed value {value} at t≈{t} is not positive; cannot take its logarithm")]
    NonPositive { t: f64, value: f64 },
}

/// `P(x, t) = |aₓ|² + |bₓ|²` over the support of a state.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityProfile {
    pub t: u64,
    pub values: Vec<(i64, f64)>,
}

impl ProbabilityProfile {
    pub fn total(&self) -> f64 {
        self.values.iter().map(|(_, p)| p).sum()
    }

    pub fn get(&self, x: i64) -> f64 {
        self.values
            .binary_search_by_key(&x, |(xi, _)| *xi)
            .map(|i| self.values[i].1)
            .unwrap_or(0.0)
    }

    /// Largest site probability.
    pub fn peak(&self) -> f64 {
        self.values.iter().map(|(_, p)| *p).fold(0.0, f64::max)
    }
}

pub fn probability_profile(state: &WalkState) -> ProbabilityProfile {
    ProbabilityProfile {
        t: state.t(),
        values: state.sites().map(|(x, amp)| (x, amp.norm_sqr())).collect(),
    }
}

/// Probability of finding the walker in `[−s, s]`.
pub fn survival(state: &WalkState, s: u64) -> f64 {
    let s = s as i64;
    let lo = state.x_min().max(-s);
    let hi = state.x_max().min(s);
    (lo..=hi).map(|x| state.get(x).norm_sqr()).sum()
}

/// `Σ x² P(x) − (Σ x P(x))²`.
pub fn variance(state: &WalkState) -> f64 {
    let (mut first, mut second) = (0.0, 0.0);
    for (x, amp) in state.sites() {
        let p = amp.norm_sqr();
        let x = x as f64;
        first += x * p;
        second += x * x * p;
    }
    second - first * first
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::{evolve, make_initial, InitialCondition, Phase};

    #[test]
    fn pair_profile_at_start() {
        let s = make_initial(&InitialCondition::pair(1, Phase::Plus)).unwrap();
        let p = probability_profile(&s);
        assert_eq!(p.t, 0);
        assert_eq!(p.get(-1), 0.5);
        assert_eq!(p.get(1), 0.5);
        assert_eq!(p.get(0), 0.0);
        assert_eq!(p.get(17), 0.0);
    }

    #[test]
    fn localized_profile_after_one_step() {
        let s = evolve(&make_initial(&InitialCondition::default_localized()).unwrap(), 1);
        let p = probability_profile(&s);
        assert!((p.get(-1) - 0.5).abs() < 1e-15);
        assert!((p.get(1) - 0.5).abs() < 1e-15);
        assert!((p.total() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn survival_covers_initial_support() {
        for k in 1..4 {
            for phase in [Phase::Plus, Phase::Minus] {
                let s = make_initial(&InitialCondition::pair(k, phase)).unwrap();
                assert!((survival(&s, k as u64) - 1.0).abs() < 1e-15);
                assert_eq!(survival(&s, k as u64 - 1), 0.0);
                let later = evolve(&s, 25);
                assert!((survival(&later, k as u64 + 25) - 1.0).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn variance_at_start() {
        let loc = make_initial(&InitialCondition::default_localized()).unwrap();
        assert_eq!(variance(&loc), 0.0);
        let pair = make_initial(&InitialCondition::pair(1, Phase::Minus)).unwrap();
        assert!((variance(&pair) - 1.0).abs() < 1e-15);
        let wide = make_initial(&InitialCondition::pair(3, Phase::Plus)).unwrap();
        assert!((variance(&wide) - 9.0).abs() < 1e-15);
    }
}
