//! Moving-boundary finite-difference solver.
//!
//! The support `[x_L(t), x_R(t)]` is mapped onto the fixed domain
//! `ξ = (x − x₀)/x_f ∈ [−1, 1]`, with `x₀ = (x_R + x_L)/2` and
//! `x_f = (x_R − x_L)/2`. In these variables
//!
//! ```text
//! ∂ₜh = x_f⁻² [ (c − 1) ∂ξh ((ξ + 1) ∂ξh(1) − (ξ − 1) ∂ξh(−1)) / 2
//!               + h ∂²ξξh − (c − 1)(∂ξh)² ],
//! ẋ_R = (c − 1) ∂ξh(1)/x_f,   ẋ_L = (c − 1) ∂ξh(−1)/x_f,
//! ```
//!
//! with `h(±1) = 0`. The interface law is the flux-continuity condition and is
//! only meaningful for `c > 1`.

mod ic;
mod run;
mod step;

use alloc::vec::Vec;
use thiserror::Error;

use crate::error::{ensure, DomainError};

pub use ic::{make_nonsymmetric, make_selfsimilar_ic, make_smoothed_block, InitialCondition};
pub use run::{run, RunAborted, RunError};
pub use step::{boundary_slopes, stability_ratio, step, step_explicit, step_implicit};

/// Most negative value that is treated as rounding and clamped to zero.
pub const NEGATIVITY_TOLERANCE: f64 = 1e-12;

/// Explicit steps are refused once `max(h)·dt/(x_f² Δξ²)` exceeds this.
pub const EXPLICIT_STABILITY_BOUND: f64 = 0.5;

/// Uniform grid of `N` subintervals on `[−1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    n: usize,
}

impl Grid {
    /// `N` must be even so that `ξ = 0` is a node, and at least 8.
    pub fn new(n: usize) -> Result<Self, DomainError> {
        ensure(
            n >= 8 && n % 2 == 0,
            "grid needs an even number N >= 8 of subintervals",
            n as f64,
        )?;
        Ok(Self { n })
    }

    /// Number of subintervals.
    pub fn n(&self) -> usize {
        self.n
    }

    /// `Δξ = 2/N`.
    pub fn dxi(&self) -> f64 {
        2.0 / self.n as f64
    }

    /// `ξ_i = −1 + iΔξ`.
    pub fn xi(&self, i: usize) -> f64 {
        -1.0 + 2.0 * i as f64 / self.n as f64
    }

    /// All `N + 1` nodes.
    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.n).map(|i| self.xi(i)).collect()
    }
}

/// Solution state on the transformed domain.
#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    /// Time.
    pub t: f64,
    /// Steps taken since the start of the run.
    pub step: u64,
    /// Level at the `N + 1` grid nodes.
    pub h: Vec<f64>,
    /// Left interface.
    pub x_left: f64,
    /// Right interface.
    pub x_right: f64,
}

impl SimState {
    /// `x_f`.
    pub fn half_width(&self) -> f64 {
        0.5 * (self.x_right - self.x_left)
    }

    /// `x₀`.
    pub fn center(&self) -> f64 {
        0.5 * (self.x_right + self.x_left)
    }

    /// Peak level.
    pub fn h_max(&self) -> f64 {
        self.h.iter().copied().fold(0.0, f64::max)
    }
}

/// Time discretization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Forward Euler, centered differences.
    Explicit,
    /// Diffusion implicit with lagged coefficient, other terms explicit.
    Implicit,
}

impl Scheme {
    /// Lowercase name.
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Explicit => "explicit",
            Scheme::Implicit => "implicit",
        }
    }

    /// Default step for the scheme.
    pub fn default_dt(&self) -> f64 {
        match self {
            Scheme::Explicit => 1e-5,
            Scheme::Implicit => 1e-4,
        }
    }
}

/// When a run ends. The first rule to fire wins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopRule {
    /// Final time.
    pub max_time: f64,
    /// Stop once `x_f < min_halfwidth_frac · x_f(0)`.
    pub min_halfwidth_frac: f64,
    /// Stop once `h_max < min_height_frac · h_max(0)`.
    pub min_height_frac: f64,
    /// Optional cap on the number of steps.
    pub max_steps: Option<u64>,
}

impl Default for StopRule {
    fn default() -> Self {
        Self {
            max_time: f64::INFINITY,
            min_halfwidth_frac: 1e-3,
            min_height_frac: 1e-6,
            max_steps: None,
        }
    }
}

/// Discretization and output settings of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig {
    /// Time discretization.
    pub scheme: Scheme,
    /// Time step.
    pub dt: f64,
    /// Grid subintervals.
    pub n: usize,
    /// Stop rule.
    pub stop: StopRule,
    /// Steps between stored profiles; 0 keeps only the first and last.
    pub snapshot_every: u64,
    /// Steps between stored records.
    pub record_every: u64,
}

impl SchemeConfig {
    /// Defaults for `scheme`: `N = 202` and the scheme's default step.
    pub fn new(scheme: Scheme) -> Self {
        Self {
            scheme,
            dt: scheme.default_dt(),
            n: 202,
            stop: StopRule::default(),
            snapshot_every: 0,
            record_every: 1,
        }
    }

    /// Checks the configuration invariants.
    pub fn validate(&self) -> Result<Grid, DomainError> {
        ensure(
            self.dt.is_finite() && self.dt > 0.0,
            "time step must be positive",
            self.dt,
        )?;
        ensure(
            !(self.stop.max_time.is_nan()),
            "max time must not be NaN",
            self.stop.max_time,
        )?;
        ensure(
            (0.0..1.0).contains(&self.stop.min_halfwidth_frac),
            "half-width stop fraction must lie in [0, 1)",
            self.stop.min_halfwidth_frac,
        )?;
        ensure(
            (0.0..1.0).contains(&self.stop.min_height_frac),
            "height stop fraction must lie in [0, 1)",
            self.stop.min_height_frac,
        )?;
        ensure(
            self.record_every >= 1,
            "record interval must be at least one step",
            self.record_every as f64,
        )?;
        Grid::new(self.n)
    }
}

/// Failure of a single step.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StepError {
    /// Invalid input.
    #[error(transparent)]
    Domain(#[from] DomainError),
    /// The explicit step would exceed the stability bound.
    #[error("explicit stability ratio {ratio} exceeds 0.5")]
    StabilityLimit {
        /// `max(h)·dt/(x_f² Δξ²)`.
        ratio: f64,
    },
    /// A node went negative beyond rounding.
    #[error("negative level {value} at node {node}")]
    InstabilityDetected {
        /// Node index.
        node: usize,
        /// Offending value.
        value: f64,
    },
    /// NaN or infinity in the level or the interfaces.
    #[error("non-finite value at node {node}")]
    NonFinite {
        /// Node index, or `N + 1` for the interfaces.
        node: usize,
    },
    /// The interfaces met.
    #[error("support collapsed (half-width {half_width})")]
    CollapseReached {
        /// Half-width after the step.
        half_width: f64,
    },
    /// The tridiagonal system had a zero pivot.
    #[error("tridiagonal system singular at row {row}")]
    SolverSingular {
        /// Row of the zero pivot.
        row: usize,
    },
}
