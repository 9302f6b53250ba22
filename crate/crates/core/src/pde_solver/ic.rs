use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{Grid, SimState};
use crate::error::{ensure, DomainError};
use crate::selfsimilar::{Regime, SelfSimilarSolution};

/// Initial level distribution, positive on an open interval and zero outside.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition {
    /// Plateau of `height` on `[x_L + w, x_R − w]`, falling to zero at the
    /// endpoints along the cubic smoothstep `3s² − 2s³`.
    SmoothedBlock {
        /// Plateau level.
        height: f64,
        /// Left end of the support.
        x_left: f64,
        /// Right end of the support.
        x_right: f64,
        /// Width `w` of each shoulder.
        width: f64,
    },
    /// `−4x² + 4x` on `[0, 1/2]`, `−(4/9)x² + (4/9)x + 8/9` on `[1/2, 2]`.
    NonsymmetricParabolas,
    /// The collapsing similarity solution at `t_start`.
    SelfSimilarSnapshot {
        /// Solution to sample.
        solution: SelfSimilarSolution,
        /// Sampling time, before `t₀`.
        t_start: f64,
    },
    /// Samples at uniformly spaced points of `[x_left, x_right]`, joined
    /// linearly. End samples are replaced by zero.
    Custom {
        /// Samples, endpoints included.
        values: Vec<f64>,
        /// Left end of the support.
        x_left: f64,
        /// Right end of the support.
        x_right: f64,
    },
}

fn smoothstep(s: f64) -> f64 {
    s * s * (3.0 - 2.0 * s)
}

/// Smoothed block on `[x_left, x_right]` with shoulders of width `w`.
pub fn make_smoothed_block(
    height: f64,
    x_left: f64,
    x_right: f64,
    w: f64,
) -> Result<InitialCondition, DomainError> {
    ensure(
        height.is_finite() && height > 0.0,
        "block height must be positive",
        height,
    )?;
    ensure(
        x_left.is_finite() && x_right.is_finite() && x_right > x_left,
        "block support must have positive length",
        x_right - x_left,
    )?;
    ensure(
        w > 0.0 && w < 0.5 * (x_right - x_left),
        "shoulder width must lie in (0, (x_R - x_L)/2)",
        w,
    )?;
    Ok(InitialCondition::SmoothedBlock {
        height,
        x_left,
        x_right,
        width: w,
    })
}

/// The asymmetric two-parabola distribution on `[0, 2]`.
pub fn make_nonsymmetric() -> InitialCondition {
    InitialCondition::NonsymmetricParabolas
}

/// The collapsing similarity solution with constants `(B, t₀, x₀)` at `t_start`.
pub fn make_selfsimilar_ic(
    b: f64,
    t0: f64,
    t_start: f64,
    c: f64,
    x0: f64,
) -> Result<InitialCondition, DomainError> {
    let solution = SelfSimilarSolution::new(c, b, t0, x0)?;
    ensure(
        solution.regime() == Regime::FiniteTimeCollapse,
        "self-similar initial data need c > 3/2",
        c,
    )?;
    ensure(
        t_start < t0,
        "start time must precede the collapse time",
        t_start,
    )?;
    Ok(InitialCondition::SelfSimilarSnapshot { solution, t_start })
}

impl InitialCondition {
    /// Checks the parameters.
    pub fn validate(&self) -> Result<(), DomainError> {
        match self {
            Self::SmoothedBlock {
                height,
                x_left,
                x_right,
                width,
            } => make_smoothed_block(*height, *x_left, *x_right, *width).map(|_| ()),
            Self::NonsymmetricParabolas => Ok(()),
            Self::SelfSimilarSnapshot { solution, t_start } => make_selfsimilar_ic(
                solution.b(),
                solution.t0(),
                *t_start,
                solution.c(),
                solution.x0(),
            )
            .map(|_| ()),
            Self::Custom {
                values,
                x_left,
                x_right,
            } => {
                ensure(
                    values.len() >= 3,
                    "custom data need at least three samples",
                    values.len() as f64,
                )?;
                ensure(
                    x_right > x_left,
                    "custom support must have positive length",
                    x_right - x_left,
                )?;
                ensure(
                    values.iter().all(|v| v.is_finite() && *v >= 0.0),
                    "custom samples must be finite and nonnegative",
                    values.iter().copied().fold(f64::INFINITY, f64::min),
                )?;
                ensure(
                    values[1..values.len() - 1].iter().any(|v| *v > 0.0),
                    "custom data must be positive somewhere",
                    0.0,
                )
            }
        }
    }

    /// Support `(x_L(0), x_R(0))`.
    pub fn support(&self) -> (f64, f64) {
        match self {
            Self::SmoothedBlock {
                x_left, x_right, ..
            }
            | Self::Custom {
                x_left, x_right, ..
            } => (*x_left, *x_right),
            Self::NonsymmetricParabolas => (0.0, 2.0),
            Self::SelfSimilarSnapshot { solution, t_start } => {
                let xf = solution.half_width(*t_start).unwrap_or(0.0);
                (solution.x0() - xf, solution.x0() + xf)
            }
        }
    }

    /// Time the data refer to.
    pub fn start_time(&self) -> f64 {
        match self {
            Self::SelfSimilarSnapshot { t_start, .. } => *t_start,
            _ => 0.0,
        }
    }

    /// Level at `x`.
    pub fn eval(&self, x: f64) -> f64 {
        let (xl, xr) = self.support();
        if !(x > xl && x < xr) {
            return 0.0;
        }
        match self {
            Self::SmoothedBlock { height, width, .. } => {
                let d = (x - xl).min(xr - x);
                if d >= *width {
                    *height
                } else {
                    height * smoothstep(d / width)
                }
            }
            Self::NonsymmetricParabolas => {
                if x <= 0.5 {
                    -4.0 * x * x + 4.0 * x
                } else {
                    -(4.0 / 9.0) * x * x + (4.0 / 9.0) * x + 8.0 / 9.0
                }
            }
            Self::SelfSimilarSnapshot { solution, t_start } => {
                solution.eval_collapse(x, *t_start).unwrap_or(0.0)
            }
            Self::Custom { values, .. } => {
                let m = values.len() - 1;
                let u = (x - xl) / (xr - xl) * m as f64;
                let j = (u as usize).min(m - 1);
                let w = u - j as f64;
                let at = |k: usize| if k == 0 || k == m { 0.0 } else { values[k] };
                at(j) + w * (at(j + 1) - at(j))
            }
        }
    }

    /// Short description used in run metadata.
    pub fn describe(&self) -> String {
        match self {
            Self::SmoothedBlock {
                height,
                x_left,
                x_right,
                width,
            } => {
                format!(
                    "smoothed_block(height={height},x_left={x_left},x_right={x_right},w={width})"
                )
            }
            Self::NonsymmetricParabolas => "nonsymmetric".into(),
            Self::SelfSimilarSnapshot { solution, t_start } => format!(
                "selfsimilar(B={},t0={},t_start={t_start},c={},x0={})",
                solution.b(),
                solution.t0(),
                solution.c(),
                solution.x0()
            ),
            Self::Custom {
                values,
                x_left,
                x_right,
            } => {
                format!(
                    "custom(samples={},x_left={x_left},x_right={x_right})",
                    values.len()
                )
            }
        }
    }

    /// Samples the data on `grid` at the start time.
    pub fn to_state(&self, grid: &Grid) -> Result<SimState, DomainError> {
        self.validate()?;
        let (xl, xr) = self.support();
        ensure(
            xr > xl,
            "initial support must have positive length",
            xr - xl,
        )?;
        let x0 = 0.5 * (xl + xr);
        let xf = 0.5 * (xr - xl);
        let n = grid.n();
        let mut h: Vec<f64> = (0..=n).map(|i| self.eval(x0 + grid.xi(i) * xf)).collect();
        h[0] = 0.0;
        h[n] = 0.0;
        Ok(SimState {
            t: self.start_time(),
            step: 0,
            h,
            x_left: xl,
            x_right: xr,
        })
    }
}
