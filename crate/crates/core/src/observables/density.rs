use num_complex::Complex64;

use super::ObservableError;
use crate::walk::WalkState;

/// Tolerance for Hermiticity, trace and eigenvalue-range checks.
pub const DENSITY_TOLERANCE: f64 = 1e-12;

/// Reduced density matrix of the coin, basis order `(|R⟩, |L⟩)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinDensityMatrix {
    pub elements: [[Complex64; 2]; 2],
}

impl CoinDensityMatrix {
    pub fn new(elements: [[Complex64; 2]; 2]) -> Self {
        Self { elements }
    }

    pub fn diagonal(rr: f64, ll: f64) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Self::new([[Complex64::new(rr, 0.0), zero], [zero, Complex64::new(ll, 0.0)]])
    }

    pub fn trace(&self) -> Complex64 {
        self.elements[0][0] + self.elements[1][1]
    }

    /// Largest deviation from `ρ = ρ†`.
    pub fn hermiticity_error(&self) -> f64 {
        let [[rr, rl], [lr, ll]] = self.elements;
        (rl - lr.conj()).norm().max(rr.im.abs()).max(ll.im.abs())
    }

    /// Eigenvalues `½(1 ± √((ρ_RR − ρ_LL)² + 4|ρ_RL|²))`, largest first,
    /// clamped to `[0, 1]`. Assumes unit trace.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let [[rr, rl], [_, ll]] = self.elements;
        let diff = rr.re - ll.re;
        let root = (diff * diff + 4.0 * rl.norm_sqr()).sqrt();
        let hi = (0.5 * (1.0 + root)).clamp(0.0, 1.0);
        let lo = (0.5 * (1.0 - root)).clamp(0.0, 1.0);
        [hi, lo]
    }

    /// Eigenvalues straight from the closed form, without clamping.
    pub fn raw_eigenvalues(&self) -> [f64; 2] {
        let [[rr, rl], [_, ll]] = self.elements;
        let mean = 0.5 * (rr.re + ll.re);
        let half_diff = 0.5 * (rr.re - ll.re);
        let root = (half_diff * half_diff + rl.norm_sqr()).sqrt();
        [mean + root, mean - root]
    }
}

/// Partial trace over position: `ρ = [[Σ|a|², Σ a b*], [Σ a* b, Σ|b|²]]`.
pub fn coin_density(state: &WalkState) -> CoinDensityMatrix {
    let mut rr = 0.0;
    let mut ll = 0.0;
    let mut rl = Complex64::new(0.0, 0.0);
    for amp in state.support() {
        rr += amp.a.norm_sqr();
        ll += amp.b.norm_sqr();
        rl += amp.a * amp.b.conj();
    }
    CoinDensityMatrix::new([[Complex64::new(rr, 0.0), rl], [rl.conj(), Complex64::new(ll, 0.0)]])
}

/// Von Neumann entropy of the coin in bits, `−Σ λ log₂ λ` with `0 log 0 = 0`.
pub fn entanglement_entropy(rho: &CoinDensityMatrix) -> Result<f64, ObservableError> {
    let herm = rho.hermiticity_error();
    if herm > DENSITY_TOLERANCE {
        return Err(ObservableError::NotHermitian(herm));
    }
    let trace = rho.trace().re;
    if (trace - 1.0).abs() > DENSITY_TOLERANCE {
        return Err(ObservableError::BadTrace(trace));
    }
    let entropy = rho
        .eigenvalues()
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.log2())
        .sum::<f64>();
    // −0 → +0
    Ok(entropy.clamp(0.0, 1.0) + 0.0)
}
