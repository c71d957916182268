//! Bessel-function expressions for the long-time walk distribution.
//!
//! For an initial state with amplitudes `a_y(0)`, `b_y(0)` the distribution is
//! approximated by
//!
//! ```text
//! Pₓ(t) = Σ_{y,y'} (−1)^{y+y'} [a_y a*_{y'} + b_y b*_{y'}] J_{x−y}(τ) J_{x−y'}(τ),   τ = t/√2
//! ```
//!
//! which for the symmetric pairs `|−k⟩ ± |k⟩` reduces to
//! `½ [J_{x+k}(τ) ± J_{x−k}(τ)]²`. These are asymptotic forms: they capture the
//! decay exponents and envelope shapes, not the exact finite-`t` values.

mod bessel;

pub use bessel::{bessel_j, bessel_j_orders, BesselTable, MAX_ORDER};

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use thiserror::Error;

use crate::walk::{InitialCondition, Phase, WalkError, NORM_TOLERANCE};

/// Largest number of occupied sites accepted by the generic double sum.
pub const MAX_ANALYTIC_ENTRIES: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalyticError {
    #[error("Bessel argument must be non-negative (got {0})")]
    NegativeArgument(f64),

    #[error("Bessel argument must be finite (got {0})")]
    NonFiniteArgument(f64),

    #[error("Bessel order {0} exceeds the supported range")]
    OrderOutOfRange(i64),

    #[error("analytic expressions require t >= 1")]
    ZeroTime,

    #[error("pair distance k must be a positive integer (got {0})")]
    InvalidPairDistance(i64),

    #[error("analytic initial state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("analytic initial state has {0} entries; at most {MAX_ANALYTIC_ENTRIES} are supported")]
    TooManyEntries(usize),

    #[error(transparent)]
    Walk(#[from] WalkError),
}

/// Scaled time `τ = t/√2`, the argument of every Bessel factor.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BesselArgument(f64);

impl BesselArgument {
    pub fn new(tau: f64) -> Result<Self, AnalyticError> {
        if !tau.is_finite() {
            return Err(AnalyticError::NonFiniteArgument(tau));
        }
        if tau < 0.0 {
            return Err(AnalyticError::NegativeArgument(tau));
        }
        Ok(Self(tau))
    }

    pub fn from_step(t: u64) -> Self {
        Self(t as f64 * FRAC_1_SQRT_2)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Initial amplitudes `(y, a_y(0), b_y(0))` feeding the double sum.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticInitial {
    entries: Vec<(i64, Complex64, Complex64)>,
}

impl AnalyticInitial {
    pub fn new(entries: Vec<(i64, Complex64, Complex64)>) -> Result<Self, AnalyticError> {
        if entries.len() > MAX_ANALYTIC_ENTRIES {
            return Err(AnalyticError::TooManyEntries(entries.len()));
        }
        let norm: f64 = entries.iter().map(|(_, a, b)| a.norm_sqr() + b.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(AnalyticError::NotNormalized(norm));
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[(i64, Complex64, Complex64)] {
        &self.entries
    }

    fn reach(&self) -> u64 {
        self.entries.iter().map(|(y, _, _)| y.unsigned_abs()).max().unwrap_or(0)
    }
}

impl TryFrom<&InitialCondition> for AnalyticInitial {
    type Error = AnalyticError;

    fn try_from(cond: &InitialCondition) -> Result<Self, Self::Error> {
        let entries = cond.entries()?;
        AnalyticInitial::new(entries.into_iter().map(|(y, amp)| (y, amp.a, amp.b)).collect())
    }
}

fn parity_sign(y: i64) -> f64 {
    if y.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

fn table_for(t: u64, max_order: u64) -> Result<BesselTable, AnalyticError> {
    if t == 0 {
        return Err(AnalyticError::ZeroTime);
    }
    if max_order > MAX_ORDER {
        return Err(AnalyticError::OrderOutOfRange(max_order as i64));
    }
    BesselTable::new(max_order as usize, BesselArgument::from_step(t).value())
}

fn double_sum(x: i64, init: &AnalyticInitial, table: &BesselTable) -> f64 {
    let mut total = Complex64::new(0.0, 0.0);
    for &(y, a, b) in &init.entries {
        let jy = parity_sign(y) * table.get(x - y);
        for &(yp, ap, bp) in &init.entries {
            let jyp = parity_sign(yp) * table.get(x - yp);
            total += (a * ap.conj() + b * bp.conj()) * (jy * jyp);
        }
    }
    total.re
}

/// `Pₓ(t)` from the generic double sum over initial sites.
pub fn analytic_prob(x: i64, t: u64, init: &AnalyticInitial) -> Result<f64, AnalyticError> {
    let table = table_for(t, x.unsigned_abs() + init.reach())?;
    Ok(double_sum(x, init, &table))
}

/// `Σ_{j=−s}^{s} Pⱼ(t)` from the generic double sum.
pub fn analytic_survival(t: u64, s: u64, init: &AnalyticInitial) -> Result<f64, AnalyticError> {
    let table = table_for(t, s + init.reach())?;
    let s = s as i64;
    Ok((-s..=s).map(|x| double_sum(x, init, &table)).sum())
}

fn check_pair(t: u64, k: i64) -> Result<(), AnalyticError> {
    if t == 0 {
        return Err(AnalyticError::ZeroTime);
    }
    if k < 1 {
        return Err(AnalyticError::InvalidPairDistance(k));
    }
    Ok(())
}

#[inline]
fn pair_from_table(x: i64, k: i64, phase: Phase, table: &BesselTable) -> f64 {
    let sum = table.get(x + k) + phase.sign() * table.get(x - k);
    0.5 * sum * sum
}

/// `½ [J_{x+k}(τ) ± J_{x−k}(τ)]²` for the symmetric pair `|−k⟩ ± |k⟩`.
pub fn analytic_prob_pair(x: i64, t: u64, k: i64, phase: Phase) -> Result<f64, AnalyticError> {
    check_pair(t, k)?;
    let table = table_for(t, x.unsigned_abs() + k as u64)?;
    Ok(pair_from_table(x, k, phase, &table))
}

/// Survival in `[−s, s]` from the pair reduction.
pub fn analytic_pair_survival(t: u64, s: u64, k: i64, phase: Phase) -> Result<f64, AnalyticError> {
    check_pair(t, k)?;
    let table = table_for(t, s + k as u64)?;
    let s = s as i64;
    Ok((-s..=s).map(|x| pair_from_table(x, k, phase, &table)).sum())
}

/// `2x² [Jₓ(τ)/τ]²`, the `k = 1`, `+` pair distribution rewritten with the
/// three-term recurrence.
pub fn enhanced_pair_closed_form(x: i64, t: u64) -> Result<f64, AnalyticError> {
    let table = table_for(t, x.unsigned_abs())?;
    let tau = table.tau();
    let ratio = table.get(x) / tau;
    Ok(2.0 * (x * x) as f64 * ratio * ratio)
}

/// `2 [x Jₓ(τ)/τ − J_{x−1}(τ)]²`, the `k = 1`, `−` pair distribution rewritten
/// with the three-term recurrence.
pub fn normal_pair_closed_form(x: i64, t: u64) -> Result<f64, AnalyticError> {
    let table = table_for(t, x.unsigned_abs() + 1)?;
    let tau = table.tau();
    let inner = x as f64 * table.get(x) / tau - table.get(x - 1);
    Ok(2.0 * inner * inner)
}

/// Long-time decay class of the survival probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecayClass {
    /// `t⁻¹`
    Normal,
    /// `t⁻³`
    Enhanced,
}

impl DecayClass {
    pub fn exponent(self) -> i32 {
        match self {
            DecayClass::Normal => -1,
            DecayClass::Enhanced => -3,
        }
    }
}

/// Decay class for the pair `|−k⟩ ± |k⟩`: odd `k` with `+` and even `k` with
/// `−` interfere destructively at the origin.
pub fn asymptotic_decay_class(k: i64, phase: Phase) -> Result<DecayClass, AnalyticError> {
    if k < 1 {
        return Err(AnalyticError::InvalidPairDistance(k));
    }
    let odd = k % 2 == 1;
    Ok(match (odd, phase) {
        (true, Phase::Plus) | (false, Phase::Minus) => DecayClass::Enhanced,
        (true, Phase::Minus) | (false, Phase::Plus) => DecayClass::Normal,
    })
}

pub fn asymptotic_survival_exponent(k: i64, phase: Phase) -> Result<i32, AnalyticError> {
    asymptotic_decay_class(k, phase).map(DecayClass::exponent)
}
