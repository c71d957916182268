//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use qwalk_core::analytic::analytic_pair_survival;
use qwalk_core::observables::{coin_density, entanglement_entropy, survival, variance, TimeSeries};
use qwalk_core::walk::{make_initial_with_horizon, InitialCondition, Phase, Walker};

/// Decimal digits of fixed-point precision used by the series oracle.
const ORACLE_DIGITS: u32 = 60;

/// `J_n(p/q · 2)` from the ascending series `Σ (−1)^m (τ/2)^{2m+n} / (m! (m+n)!)`
/// evaluated in exact integer arithmetic at a fixed-point scale of 10^60.
///
/// `half_tau = (p, q)` is `τ/2` as a fraction. Independent of the recurrence
/// used by the library; cancellation between the huge alternating terms at
/// large `τ` is harmless because every term is an exact integer quotient.
pub fn bessel_series_oracle(n: u32, half_tau: (u64, u64)) -> f64 {
    let (p, q) = (BigInt::from(half_tau.0), BigInt::from(half_tau.1));
    let scale = BigInt::from(10u32).pow(ORACLE_DIGITS);

    // numerator / denominator of (τ/2)^n / n!
    let mut num = p.pow(n);
    let mut den = q.pow(n);
    for i in 1..=n {
        den *= BigInt::from(i);
    }

    let mut sum = BigInt::zero();
    let p2 = &p * &p;
    let q2 = &q * &q;
    let mut m: u64 = 0;
    loop {
        let term = &scale * &num / &den;
        if m % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        // past the peak of the terms and below the fixed-point resolution
        if term.is_zero() && (m as f64) > 2.0 * half_tau.0 as f64 / half_tau.1 as f64 {
            break;
        }
        m += 1;
        num *= &p2;
        den *= &q2 * BigInt::from(m) * BigInt::from(m + n as u64);
    }
    sum.to_f64().unwrap() / 10f64.powi(ORACLE_DIGITS as i32)
}

/// Exact survival, coin entropy and variance for every step `0..=steps`.
pub struct Trajectory {
    pub survival: TimeSeries,
    pub entropy: TimeSeries,
    pub variance: TimeSeries,
}

pub fn trajectory(cond: &InitialCondition, s: u64, steps: u64) -> Trajectory {
    let mut walker = Walker::new(make_initial_with_horizon(cond, steps).unwrap(), steps);
    let mut out = Trajectory {
        survival: TimeSeries::new("survival"),
        entropy: TimeSeries::new("entropy"),
        variance: TimeSeries::new("variance"),
    };
    for t in 0..=steps {
        let state = walker.state();
        out.survival.push(t, survival(state, s)).unwrap();
        out.entropy.push(t, entanglement_entropy(&coin_density(state)).unwrap()).unwrap();
        out.variance.push(t, variance(state)).unwrap();
        if t < steps {
            walker.step();
        }
    }
    out
}

/// Pair-reduced analytic survival for `t = 1..=steps`.
pub fn analytic_pair_series(k: i64, phase: Phase, s: u64, steps: u64) -> TimeSeries {
    TimeSeries::from_samples(
        "analytic_survival",
        (1..=steps).map(|t| (t, analytic_pair_survival(t, s, k, phase).unwrap())),
    )
    .unwrap()
}
