//! Cylindrical Bessel functions of the first kind, integer order.
//!
//! Values come from Miller's downward recurrence
//! `J_{m−1}(τ) = (2m/τ) J_m(τ) − J_{m+1}(τ)`, started well above both the
//! requested order and `τ` with an arbitrary seed, then normalized with
//! `J₀(τ) + 2 Σ_{m≥1} J_{2m}(τ) = 1`. The upward recurrence loses all accuracy
//! once the order exceeds the argument, which the walk needs routinely.

use super::AnalyticError;

/// Largest `|n|` accepted by [`bessel_j`].
pub const MAX_ORDER: u64 = 1_000_000;

const RESCALE_THRESHOLD: f64 = 1e250;
const RESCALE_FACTOR: f64 = 1e-250;
/// Below this argument the two-term ascending series is exact to double precision.
const SMALL_ARGUMENT: f64 = 1e-8;

fn check_argument(tau: f64) -> Result<(), AnalyticError> {
    if !tau.is_finite() {
        return Err(AnalyticError::NonFiniteArgument(tau));
    }
    if tau < 0.0 {
        return Err(AnalyticError::NegativeArgument(tau));
    }
    Ok(())
}

/// Starting order for the downward sweep.
fn start_order(n_max: u64, tau: f64) -> u64 {
    let base = n_max.max(tau.ceil() as u64);
    let start = base + (10.0 * (base as f64).sqrt()).ceil() as u64 + 20;
    start + start % 2
}

fn small_argument_orders(n_max: usize, tau: f64) -> Vec<f64> {
    let half = 0.5 * tau;
    let mut out = Vec::with_capacity(n_max + 1);
    // leading = (τ/2)^n / n!
    let mut leading = 1.0;
    for n in 0..=n_max {
        if n > 0 {
            leading *= half / n as f64;
        }
        out.push(leading * (1.0 - half * half / (n as f64 + 1.0)));
    }
    out
}

/// `J_0(τ), …, J_{n_max}(τ)` from a single recurrence pass.
pub fn bessel_j_orders(n_max: usize, tau: f64) -> Result<Vec<f64>, AnalyticError> {
    check_argument(tau)?;
    if tau == 0.0 {
        let mut out = vec![0.0; n_max + 1];
        out[0] = 1.0;
        return Ok(out);
    }
    if tau < SMALL_ARGUMENT {
        return Ok(small_argument_orders(n_max, tau));
    }

    let start = start_order(n_max as u64, tau);
    let mut out = vec![0.0; n_max + 1];
    let two_over_tau = 2.0 / tau;
    let mut above = 0.0; // J_{m+1}
    let mut current = 1e-300; // J_m, arbitrary seed
    let mut norm = 0.0;

    let mut m = start;
    loop {
        if m as usize <= n_max {
            out[m as usize] = current;
        }
        if m == 0 {
            norm += current;
            break;
        }
        if m % 2 == 0 {
            norm += 2.0 * current;
        }
        let below = m as f64 * two_over_tau * current - above;
        above = current;
        current = below;
        m -= 1;

        if current.abs() > RESCALE_THRESHOLD {
            current *= RESCALE_FACTOR;
            above *= RESCALE_FACTOR;
            norm *= RESCALE_FACTOR;
            for v in out.iter_mut().skip(m as usize + 1) {
                *v *= RESCALE_FACTOR;
            }
        }
    }

    let scale = 1.0 / norm;
    for v in &mut out {
        *v *= scale;
    }
    Ok(out)
}

/// `J_n(τ)` for any integer order, using `J_{−n} = (−1)ⁿ J_n`.
pub fn bessel_j(n: i64, tau: f64) -> Result<f64, AnalyticError> {
    let order = n.unsigned_abs();
    if order > MAX_ORDER {
        return Err(AnalyticError::OrderOutOfRange(n));
    }
    let values = bessel_j_orders(order as usize, tau)?;
    Ok(reflect(n, values[order as usize]))
}

#[inline]
fn reflect(n: i64, value: f64) -> f64 {
    if n < 0 && n % 2 != 0 {
        -value
    } else {
        value
    }
}

/// Orders `−n_max..=n_max` at one argument.
#[derive(Debug, Clone)]
pub struct BesselTable {
    tau: f64,
    values: Vec<f64>,
}

impl BesselTable {
    pub fn new(n_max: usize, tau: f64) -> Result<Self, AnalyticError> {
        Ok(Self {
            tau,
            values: bessel_j_orders(n_max, tau)?,
        })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn max_order(&self) -> usize {
        self.values.len() - 1
    }

    /// `J_n(τ)`; panics if `|n|` exceeds the table.
    #[inline]
    pub fn get(&self, n: i64) -> f64 {
        reflect(n, self.values[n.unsigned_abs() as usize])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_origin() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j(-7, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(bessel_j(0, -1.0), Err(AnalyticError::NegativeArgument(_))));
        assert!(matches!(bessel_j(0, f64::NAN), Err(AnalyticError::NonFiniteArgument(_))));
        assert!(matches!(bessel_j(0, f64::INFINITY), Err(AnalyticError::NonFiniteArgument(_))));
        assert!(matches!(bessel_j(1_000_001, 1.0), Err(AnalyticError::OrderOutOfRange(_))));
        assert!(bessel_j(-1_000_000, 1.0).is_ok());
    }

    #[test]
    fn known_values() {
        // Abramowitz & Stegun table 9.1
        assert!((bessel_j(0, 1.0).unwrap() - 0.765_197_686_557_966_6).abs() < 1e-15);
        assert!((bessel_j(1, 1.0).unwrap() - 0.440_050_585_744_933_5).abs() < 1e-15);
        assert!((bessel_j(0, 10.0).unwrap() - (-0.245_935_764_451_348_3)).abs() < 1e-14);
        assert!((bessel_j(1, 10.0).unwrap() - 0.043_472_746_168_861_44).abs() < 1e-14);
    }

    #[test]
    fn reflection_symmetry() {
        for tau in [0.3, 4.0, 70.7] {
            for n in 0..40i64 {
                let pos = bessel_j(n, tau).unwrap();
                let neg = bessel_j(-n, tau).unwrap();
                let expected = if n % 2 == 0 { pos } else { -pos };
                assert_eq!(neg, expected);
            }
        }
    }

    #[test]
    fn tiny_arguments_use_series() {
        let t = bessel_j_orders(3, 1e-10).unwrap();
        assert!((t[0] - 1.0).abs() < 1e-19);
        assert!((t[1] - 5e-11).abs() < 1e-25);
        // just above the series cutoff the recurrence must agree
        let r = bessel_j_orders(3, 2e-8).unwrap();
        assert!((r[1] - 1e-8).abs() < 1e-22);
    }

    #[test]
    fn large_argument_rescaling_survives() {
        let t = bessel_j_orders(10, 7071.0).unwrap();
        assert!(t.iter().all(|v| v.is_finite()));
        let high = bessel_j(5000, 3.0).unwrap();
        assert_eq!(high, 0.0);
    }

    #[test]
    fn table_matches_single_evaluation() {
        let table = BesselTable::new(30, 12.5).unwrap();
        for n in -30..=30 {
            assert!((table.get(n) - bessel_j(n, 12.5).unwrap()).abs() < 1e-15);
        }
        assert_eq!(table.max_order(), 30);
    }
}
