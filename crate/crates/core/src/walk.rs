//! Exact state-vector evolution of the Hadamard walk on the integer line.
//!
//! A walker state is `Σₓ (aₓ|R⟩ + bₓ|L⟩) ⊗ |x⟩`. One step applies the Hadamard
//! coin to every site and then translates the `|R⟩` component one site to the
//! right and the `|L⟩` component one site to the left.
//!
//! Amplitudes live in a dense buffer whose index 0 corresponds to position
//! `origin`. The buffer is sized up front for a caller-supplied horizon so that
//! stepping never reallocates; stepping past the horizon grows the buffer.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

/// Tolerance used when validating that an initial condition has unit norm.
pub const NORM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WalkError {
    #[error("initial state is not normalized (norm² = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("pair distance k must be a positive integer (got {0})")]
    InvalidPairDistance(i64),

    #[error("site {0} appears more than once in the custom initial condition")]
    DuplicateSite(i64),

    #[error("custom initial condition has no entries")]
    EmptyCustom,

    #[error("amplitude at site {0} is not finite")]
    NonFinite(i64),
}

/// Coin amplitudes at a single site: `a` multiplies `|R⟩`, `b` multiplies `|L⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SiteAmplitudes {
    pub a: Complex64,
    pub b: Complex64,
}

impl SiteAmplitudes {
    pub const ZERO: SiteAmplitudes = SiteAmplitudes {
        a: Complex64::new(0.0, 0.0),
        b: Complex64::new(0.0, 0.0),
    };

    pub fn new(a: Complex64, b: Complex64) -> Self {
        Self { a, b }
    }

    /// `|a|² + |b|²`, the probability carried by this site.
    #[inline]
    pub fn norm_sqr(&self) -> f64 {
        self.a.norm_sqr() + self.b.norm_sqr()
    }

    fn is_finite(&self) -> bool {
        self.a.is_finite() && self.b.is_finite()
    }
}

/// The Hadamard coin: `(a, b) ↦ ((a + b)/√2, (a − b)/√2)`.
#[inline]
pub fn hadamard(spinor: SiteAmplitudes) -> SiteAmplitudes {
    SiteAmplitudes {
        a: (spinor.a + spinor.b) * FRAC_1_SQRT_2,
        b: (spinor.a - spinor.b) * FRAC_1_SQRT_2,
    }
}

/// Relative sign between the two occupied sites of a symmetric pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Plus,
    Minus,
}

impl Phase {
    pub fn sign(self) -> f64 {
        match self {
            Phase::Plus => 1.0,
            Phase::Minus => -1.0,
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Plus => "plus",
            Phase::Minus => "minus",
        })
    }
}

/// Declarative description of a starting state.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition {
    /// Coin `α|R⟩ + β|L⟩` at the origin.
    Localized { alpha: Complex64, beta: Complex64 },
    /// `½(|L⟩ + i|R⟩) ⊗ (|−k⟩ ± |k⟩)`.
    SymmetricPair { k: i64, phase: Phase },
    /// Arbitrary finite support, one entry per occupied site.
    Custom(Vec<(i64, SiteAmplitudes)>),
}

impl InitialCondition {
    /// Localized state with the coin `(|L⟩ + i|R⟩)/√2`, the coin factor shared
    /// with the symmetric pairs.
    pub fn default_localized() -> Self {
        InitialCondition::Localized {
            alpha: Complex64::new(0.0, FRAC_1_SQRT_2),
            beta: Complex64::new(FRAC_1_SQRT_2, 0.0),
        }
    }

    pub fn pair(k: i64, phase: Phase) -> Self {
        InitialCondition::SymmetricPair { k, phase }
    }

    /// Occupied sites and their amplitudes, validated for normalization.
    pub fn entries(&self) -> Result<Vec<(i64, SiteAmplitudes)>, WalkError> {
        let entries = match self {
            InitialCondition::Localized { alpha, beta } => {
                vec![(0, SiteAmplitudes::new(*alpha, *beta))]
            }
            InitialCondition::SymmetricPair { k, phase } => {
                if *k < 1 {
                    return Err(WalkError::InvalidPairDistance(*k));
                }
                let coin = SiteAmplitudes::new(Complex64::new(0.0, 0.5), Complex64::new(0.5, 0.0));
                let s = phase.sign();
                let far = SiteAmplitudes::new(coin.a * s, coin.b * s);
                vec![(-k, coin), (*k, far)]
            }
            InitialCondition::Custom(list) => {
                if list.is_empty() {
                    return Err(WalkError::EmptyCustom);
                }
                let mut sorted = list.clone();
                sorted.sort_by_key(|(x, _)| *x);
                for pair in sorted.windows(2) {
                    if pair[0].0 == pair[1].0 {
                        return Err(WalkError::DuplicateSite(pair[0].0));
                    }
                }
                sorted
            }
        };
        if let Some((x, _)) = entries.iter().find(|(_, amp)| !amp.is_finite()) {
            return Err(WalkError::NonFinite(*x));
        }
        let norm_sqr: f64 = entries.iter().map(|(_, amp)| amp.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(WalkError::NotNormalized { norm_sqr });
        }
        Ok(entries)
    }

    /// Largest `|x|` among the occupied sites.
    pub fn reach(&self) -> i64 {
        match self {
            InitialCondition::Localized { .. } => 0,
            InitialCondition::SymmetricPair { k, .. } => k.abs(),
            InitialCondition::Custom(list) => list.iter().map(|(x, _)| x.abs()).max().unwrap_or(0),
        }
    }
}

/// Walker wavefunction at a fixed step count.
///
/// `x_min..=x_max` is the light-cone support: every amplitude outside it is
/// exactly zero. The backing buffer may extend further.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    origin: i64,
    amps: Vec<SiteAmplitudes>,
    x_min: i64,
    x_max: i64,
    t: u64,
}

impl WalkState {
    fn with_bounds(x_min: i64, x_max: i64, horizon: u64) -> Self {
        let margin = horizon as i64;
        let origin = x_min - margin;
        let len = (x_max - x_min + 1 + 2 * margin) as usize;
        Self {
            origin,
            amps: vec![SiteAmplitudes::ZERO; len],
            x_min,
            x_max,
            t: 0,
        }
    }

    #[inline]
    fn index(&self, x: i64) -> usize {
        (x - self.origin) as usize
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn x_min(&self) -> i64 {
        self.x_min
    }

    pub fn x_max(&self) -> i64 {
        self.x_max
    }

    /// Amplitudes at `x`; zero outside the support.
    pub fn get(&self, x: i64) -> SiteAmplitudes {
        if x < self.x_min || x > self.x_max {
            SiteAmplitudes::ZERO
        } else {
            self.amps[self.index(x)]
        }
    }

    /// Amplitudes over `x_min..=x_max`, in order of increasing `x`.
    pub fn support(&self) -> &[SiteAmplitudes] {
        &self.amps[self.index(self.x_min)..=self.index(self.x_max)]
    }

    /// `(x, amplitudes)` pairs over the support.
    pub fn sites(&self) -> impl Iterator<Item = (i64, SiteAmplitudes)> + '_ {
        (self.x_min..).zip(self.support().iter().copied())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.support().iter().map(SiteAmplitudes::norm_sqr).sum()
    }

    /// Number of further steps that fit in the buffer without growing it.
    pub fn headroom(&self) -> u64 {
        let left = self.x_min - self.origin;
        let right = self.origin + self.amps.len() as i64 - 1 - self.x_max;
        left.min(right).max(0) as u64
    }

    fn reserve(&mut self, steps: u64) {
        if self.headroom() >= steps {
            return;
        }
        let extra = steps.max(self.amps.len() as u64 / 2) as i64;
        let mut grown = WalkState::with_bounds(self.x_min, self.x_max, extra as u64);
        grown.t = self.t;
        let start = grown.index(self.x_min);
        grown.amps[start..start + self.support().len()].copy_from_slice(self.support());
        *self = grown;
    }
}

/// Builds the `t = 0` state for `cond` with no preallocated headroom.
pub fn make_initial(cond: &InitialCondition) -> Result<WalkState, WalkError> {
    make_initial_with_horizon(cond, 0)
}

/// Builds the `t = 0` state with a buffer sized for `t_max` steps.
pub fn make_initial_with_horizon(cond: &InitialCondition, t_max: u64) -> Result<WalkState, WalkError> {
    let entries = cond.entries()?;
    let x_min = entries.iter().map(|(x, _)| *x).min().unwrap_or(0);
    let x_max = entries.iter().map(|(x, _)| *x).max().unwrap_or(0);
    let mut state = WalkState::with_bounds(x_min, x_max, t_max);
    for (x, amp) in entries {
        let i = state.index(x);
        state.amps[i] = amp;
    }
    Ok(state)
}

/// Coin-then-shift from `src` into `dst`. `dst` must span the widened support
/// and share `src`'s origin.
fn step_into(src: &WalkState, dst: &mut WalkState) {
    debug_assert_eq!(src.origin, dst.origin);
    debug_assert_eq!(src.amps.len(), dst.amps.len());
    let lo = src.index(src.x_min);
    let hi = src.index(src.x_max);
    debug_assert!(lo >= 1 && hi + 1 < src.amps.len());

    // Only the widened support can hold stale values from the previous use of dst.
    dst.amps[lo - 1..=hi + 1].fill(SiteAmplitudes::ZERO);
    for i in lo..=hi {
        let h = hadamard(src.amps[i]);
        dst.amps[i + 1].a = h.a;
        dst.amps[i - 1].b = h.b;
    }
    dst.x_min = src.x_min - 1;
    dst.x_max = src.x_max + 1;
    dst.t = src.t + 1;
}

/// One application of the walk operator, returning a new state.
pub fn step(state: &WalkState) -> WalkState {
    let mut src = state.clone();
    src.reserve(1);
    let mut dst = WalkState {
        amps: vec![SiteAmplitudes::ZERO; src.amps.len()],
        ..src.clone()
    };
    step_into(&src, &mut dst);
    dst
}

/// `n` applications of the walk operator.
pub fn evolve(state: &WalkState, n: u64) -> WalkState {
    let mut walker = Walker::new(state.clone(), n);
    walker.advance(n);
    walker.into_state()
}

/// Double-buffered stepper for observing every intermediate state.
#[derive(Debug, Clone)]
pub struct Walker {
    current: WalkState,
    scratch: WalkState,
}

impl Walker {
    /// Takes ownership of `state` and makes room for `horizon` more steps.
    pub fn new(mut state: WalkState, horizon: u64) -> Self {
        state.reserve(horizon);
        let scratch = WalkState {
            amps: vec![SiteAmplitudes::ZERO; state.amps.len()],
            ..state.clone()
        };
        Self { current: state, scratch }
    }

    pub fn state(&self) -> &WalkState {
        &self.current
    }

    pub fn into_state(self) -> WalkState {
        self.current
    }

    pub fn step(&mut self) {
        if self.current.headroom() == 0 {
            self.current.reserve(1);
            self.scratch = WalkState {
                amps: vec![SiteAmplitudes::ZERO; self.current.amps.len()],
                ..self.current.clone()
            };
        }
        step_into(&self.current, &mut self.scratch);
        std::mem::swap(&mut self.current, &mut self.scratch);
    }

    pub fn advance(&mut self, n: u64) {
        for _ in 0..n {
            self.step();
        }
    }
}
