//! Long-time behaviour of the exact walk against the asymptotic predictions.

mod common;

use std::f64::consts::FRAC_1_SQRT_2;

use common::trajectory;
use qwalk_core::analytic::{asymptotic_survival_exponent, bessel_j};
use qwalk_core::observables::{asymptotic_entropy, fit_decay_exponent, probability_profile, TimeSeries};
use qwalk_core::walk::{evolve, make_initial, InitialCondition, Phase};
use qwalk_core::Complex64;

fn coins() -> Vec<(Complex64, Complex64)> {
    let r = FRAC_1_SQRT_2;
    vec![
        (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
        (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)),
        (Complex64::new(r, 0.0), Complex64::new(r, 0.0)),
        (Complex64::new(0.0, r), Complex64::new(r, 0.0)),
        (Complex64::new(0.6, 0.0), Complex64::new(0.0, -0.8)),
    ]
}

#[test]
fn localized_decay_is_normal_for_any_coin() {
    for (alpha, beta) in coins() {
        let traj = trajectory(&InitialCondition::Localized { alpha, beta }, 0, 1000);
        let fit = fit_decay_exponent(&traj.survival, (100, 1000), 32).unwrap();
        assert!((fit.exponent + 1.0).abs() <= 0.1, "coin ({alpha}, {beta}): {}", fit.exponent);
    }
}

#[test]
fn localized_entanglement_level() {
    let traj = trajectory(&InitialCondition::default_localized(), 0, 1000);
    let level = asymptotic_entropy(&traj.entropy, (900, 1000)).unwrap();
    assert!((level - 0.872).abs() <= 0.01, "{level}");
}

#[test]
fn predicted_exponents_match_simulation() {
    for k in 1..=4i64 {
        for phase in [Phase::Plus, Phase::Minus] {
            let predicted = asymptotic_survival_exponent(k, phase).unwrap() as f64;
            let traj = trajectory(&InitialCondition::pair(k, phase), k as u64, 1000);
            let fitted = fit_decay_exponent(&traj.survival, (100, 1000), 32).unwrap().exponent;
            let tol = if predicted == -3.0 { 0.2 } else { 0.1 };
            assert!((fitted - predicted).abs() <= tol, "k={k} {phase}: fitted {fitted}, predicted {predicted}");
        }
    }
}

#[test]
fn outward_peaks_at_final_time() {
    for phase in [Phase::Plus, Phase::Minus] {
        let p = probability_profile(&evolve(&make_initial(&InitialCondition::pair(1, phase)).unwrap(), 1000));
        let (x_peak, _) = p.values.iter().copied().fold((0, 0.0), |best, (x, v)| if v > best.1 { (x, v) } else { best });
        // the ballistic fronts sit near ±t/√2
        assert!(x_peak.abs() > 600 && x_peak.abs() < 760, "{phase}: peak at {x_peak}");
        assert_eq!(p.get(x_peak), p.get(-x_peak));
    }
}

/// Exact `P₀(t)` and `J₀²(t/√2)` for a localized walker.
fn origin_series() -> (TimeSeries, Vec<f64>) {
    let traj = trajectory(&InitialCondition::default_localized(), 0, 1000);
    let bessel = (0..=1000u64)
        .map(|t| bessel_j(0, t as f64 * FRAC_1_SQRT_2).unwrap().powi(2))
        .collect();
    (traj.survival, bessel)
}

#[test]
fn origin_envelope_tracks_j0_squared_up_to_constant() {
    // The envelopes share the t⁻¹ law but differ by a constant factor; the
    // block-averaged ratio must stay flat across the window.
    let (exact, bessel) = origin_series();
    let ratios: Vec<f64> = (500..=1000 - 64)
        .step_by(64)
        .map(|lo| {
            let e: f64 = (lo..lo + 64).map(|t| exact.samples()[t].1).sum();
            let b: f64 = (lo..lo + 64).map(|t| bessel[t]).sum();
            e / b
        })
        .collect();
    let max = ratios.iter().cloned().fold(f64::MIN, f64::max);
    let min = ratios.iter().cloned().fold(f64::MAX, f64::min);
    assert!(max / min < 1.1, "{ratios:?}");
}

#[test]
#[ignore = "pointwise J₀² agreement does not hold: exact P₀ vanishes at odd t and its envelope differs by ≈1/√2"]
fn origin_survival_near_j0_squared_at_500() {
    let (exact, bessel) = origin_series();
    let ratio = exact.samples()[500].1 / bessel[500];
    assert!((ratio - 1.0).abs() <= 0.2, "ratio {ratio}");
}

#[test]
#[ignore = "the averaged exact/J₀² ratio over [500, 1000] settles near 0.71, not 1 ± 0.2"]
fn origin_survival_ratio_averages_to_one() {
    let (exact, bessel) = origin_series();
    let e: f64 = (500..=1000).map(|t| exact.samples()[t].1).sum();
    let b: f64 = (500..=1000).map(|t| bessel[t]).sum();
    assert!((e / b - 1.0).abs() <= 0.2, "ratio of means {}", e / b);
}
