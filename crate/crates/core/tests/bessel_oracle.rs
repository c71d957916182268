mod common;

use common::bessel_series_oracle;
use qwalk_core::analytic::{bessel_j, bessel_j_orders};

/// `(τ, τ/2 as a fraction)` for the oracle grid.
const ARGUMENTS: [(f64, (u64, u64)); 3] = [(1.0, (1, 2)), (10.0, (5, 1)), (100.0, (50, 1))];

#[test]
fn oracle_reproduces_tabulated_values() {
    // sanity check of the oracle itself against Abramowitz & Stegun 9.1
    assert!((bessel_series_oracle(0, (1, 2)) - 0.765_197_686_557_966_6).abs() < 1e-16);
    assert!((bessel_series_oracle(1, (5, 1)) - 0.043_472_746_168_861_44).abs() < 1e-16);
    assert!((bessel_series_oracle(0, (1, 1)) - 0.223_890_779_141_235_7).abs() < 1e-16);
}

#[test]
fn j0_at_one_matches_series() {
    let expected = bessel_series_oracle(0, (1, 2));
    assert!((bessel_j(0, 1.0).unwrap() - expected).abs() < 1e-10);
}

#[test]
fn grid_matches_series_oracle() {
    for (tau, half) in ARGUMENTS {
        for n in [0u32, 1, 5, 50] {
            let expected = bessel_series_oracle(n, half);
            let got = bessel_j(n as i64, tau).unwrap();
            assert!((got - expected).abs() <= 1e-10, "J_{n}({tau}): {got} vs {expected}");
        }
    }
}

#[test]
fn batch_matches_series_oracle_on_every_order() {
    for (tau, half) in ARGUMENTS {
        let batch = bessel_j_orders(120, tau).unwrap();
        for n in 0..=120u32 {
            let expected = bessel_series_oracle(n, half);
            assert!((batch[n as usize] - expected).abs() <= 1e-13, "J_{n}({tau})");
        }
    }
}

#[test]
fn recurrence_and_normalization_identities() {
    for tau in [1.0, 10.0, 100.0] {
        let j = bessel_j_orders(400, tau).unwrap();
        for n in 1..=200usize {
            let residual = j[n - 1] + j[n + 1] - 2.0 * n as f64 / tau * j[n];
            assert!(residual.abs() <= 1e-9, "τ={tau} n={n}: {residual}");
        }
        let norm = j[0] + 2.0 * j.iter().skip(2).step_by(2).sum::<f64>();
        assert!((norm - 1.0).abs() <= 1e-10, "τ={tau}: {norm}");
    }
}

#[test]
fn large_arguments_stay_normalized() {
    // τ for t = 10⁴ steps
    let tau = 10_000.0 / 2f64.sqrt();
    let j = bessel_j_orders(9000, tau).unwrap();
    let norm = j[0] + 2.0 * j.iter().skip(2).step_by(2).sum::<f64>();
    assert!((norm - 1.0).abs() <= 1e-10);
    let squares = j[0] * j[0] + 2.0 * j.iter().skip(1).map(|v| v * v).sum::<f64>();
    assert!((squares - 1.0).abs() <= 1e-10);
}
