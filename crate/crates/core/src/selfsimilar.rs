//! Closed-form self-similar solutions.
//!
//! Seeking `h = A(t₀ − t)^λ F((x − x₀) / (B(t₀ − t)^μ))` with the
//! normalization `A = B²μ` forces `λ = 2μ − 1` and leaves the profile
//! equation
//!
//! ```text
//! F F″ − (c − 1)(F′)² − ξ F′ + ((2μ − 1)/μ) F = 0,
//! F′(0) = 0,   F(1) = 0,   F′(1) = −1/(c − 1),
//! ```
//!
//! whose solution is `F = (1 − ξ²) / (2(c − 1))` with `μ = (c − 1)/(2c − 3)`.
//! For `c > 3/2` the dome collapses at `t₀`; for `1 < c < 3/2` the exponent is
//! negative and the same expression, written with `t₀ + t`, decays as a power
//! law forever. At `c = 3/2` the family degenerates into an exponentially
//! decaying limit solution.
//!
//! All evaluators return zero outside the support unless the solution was
//! built with [`SelfSimilarSolution::strict`], which turns sampling outside the
//! support into an error.

use crate::error::{ensure, DomainError};
use crate::math::{exp, ln, ln_1p, sqrt};

/// Qualitative behaviour of the dome for a given absorption coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `0 ≤ c < 1`: the support expands (slower than the porous-medium case).
    WeakAbsorption,
    /// `c = 1`: degenerate case with no self-similar evaluator here.
    DegenerateUnit,
    /// `1 < c < 3/2`: power-law decay, infinite collapse time.
    PowerLawDecay,
    /// `c = 3/2`: exponential decay limit.
    ExponentialBoundary,
    /// `c > 3/2`: collapse to a point at finite `t₀`.
    FiniteTimeCollapse,
}

/// An absorption coefficient together with its regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbsorptionParams {
    c: f64,
    regime: Regime,
}

impl AbsorptionParams {
    /// The coefficient `c`.
    pub fn c(&self) -> f64 {
        self.c
    }

    /// The regime `c` falls in.
    pub fn regime(&self) -> Regime {
        self.regime
    }
}

/// Classifies `c ≥ 0` into its regime.
pub fn classify(c: f64) -> Result<AbsorptionParams, DomainError> {
    ensure(
        c.is_finite() && c >= 0.0,
        "absorption coefficient must be finite and nonnegative",
        c,
    )?;
    let regime = if c < 1.0 {
        Regime::WeakAbsorption
    } else if c == 1.0 {
        Regime::DegenerateUnit
    } else if c < 1.5 {
        Regime::PowerLawDecay
    } else if c == 1.5 {
        Regime::ExponentialBoundary
    } else {
        Regime::FiniteTimeCollapse
    };
    Ok(AbsorptionParams { c, regime })
}

/// Similarity exponent `μ = (c − 1)/(2c − 3)` of the collapsing solution.
pub fn mu_of_c(c: f64) -> Result<f64, DomainError> {
    ensure(
        c.is_finite() && c > 1.5,
        "collapse exponent requires c > 3/2",
        c,
    )?;
    Ok((c - 1.0) / (2.0 * c - 3.0))
}

/// Exponents of the power-law decay for `1 < c < 3/2`:
/// `h_max ∝ (t₀ + t)^height` and `x_f ∝ (t₀ + t)^width`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayExponents {
    /// `−1/(3 − 2c)`.
    pub height: f64,
    /// `−(c − 1)/(3 − 2c)`.
    pub width: f64,
}

/// Decay exponents for the `1 < c < 3/2` regime.
pub fn decay_exponents(c: f64) -> Result<DecayExponents, DomainError> {
    ensure(
        c.is_finite() && c > 1.0 && c < 1.5,
        "power-law decay requires 1 < c < 3/2",
        c,
    )?;
    let d = 3.0 - 2.0 * c;
    Ok(DecayExponents {
        height: -1.0 / d,
        width: -(c - 1.0) / d,
    })
}

/// Similarity profile `F(ξ) = (1 − ξ²)/(2(c − 1))` on `|ξ| ≤ 1`.
pub fn profile_f(xi: f64, c: f64) -> Result<f64, DomainError> {
    ensure(
        c.is_finite() && c > 1.0,
        "similarity profile requires c > 1",
        c,
    )?;
    ensure(
        xi.abs() <= 1.0,
        "similarity profile is supported on |xi| <= 1",
        xi,
    )?;
    Ok((1.0 - xi * xi) / (2.0 * (c - 1.0)))
}

/// Like [`profile_f`] but identically zero for `|ξ| > 1`.
pub fn profile_f_extended(xi: f64, c: f64) -> Result<f64, DomainError> {
    if xi.is_finite() && xi.abs() > 1.0 {
        ensure(
            c.is_finite() && c > 1.0,
            "similarity profile requires c > 1",
            c,
        )?;
        return Ok(0.0);
    }
    profile_f(xi, c)
}

/// `F′(ξ) = −ξ/(c − 1)`.
pub fn profile_f_prime(xi: f64, c: f64) -> Result<f64, DomainError> {
    ensure(
        c.is_finite() && c > 1.0,
        "similarity profile requires c > 1",
        c,
    )?;
    ensure(
        xi.abs() <= 1.0,
        "similarity profile is supported on |xi| <= 1",
        xi,
    )?;
    Ok(-xi / (c - 1.0))
}

/// Self-similar solution `(c, B, t₀, x₀)` for `c > 3/2` (collapse) or
/// `1 < c < 3/2` (power-law decay).
///
/// `B` is stored as `ln B`: near `c = 3/2` the constants that keep the
/// solution finite are far outside the range of `f64`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfSimilarSolution {
    params: AbsorptionParams,
    ln_b: f64,
    t0: f64,
    x0: f64,
    mu: f64,
    strict: bool,
}

impl SelfSimilarSolution {
    /// Builds the solution from `B > 0`.
    pub fn new(c: f64, b: f64, t0: f64, x0: f64) -> Result<Self, DomainError> {
        ensure(
            b.is_finite() && b > 0.0,
            "similarity constant B must be positive",
            b,
        )?;
        Self::from_ln_b(c, ln(b), t0, x0)
    }

    /// Builds the solution from `ln B`.
    pub fn from_ln_b(c: f64, ln_b: f64, t0: f64, x0: f64) -> Result<Self, DomainError> {
        let params = classify(c)?;
        ensure(
            matches!(
                params.regime,
                Regime::FiniteTimeCollapse | Regime::PowerLawDecay
            ),
            "closed-form solution exists only for 1 < c < 3/2 or c > 3/2",
            c,
        )?;
        ensure(ln_b.is_finite(), "ln B must be finite", ln_b)?;
        ensure(t0.is_finite(), "t0 must be finite", t0)?;
        ensure(x0.is_finite(), "x0 must be finite", x0)?;
        let mu = (c - 1.0) / (2.0 * c - 3.0);
        Ok(Self {
            params,
            ln_b,
            t0,
            x0,
            mu,
            strict: false,
        })
    }

    /// Makes evaluation outside the support an error instead of zero.
    pub fn strict(mut self) -> Self {
        self.strict = true;
        self
    }

    /// Absorption coefficient.
    pub fn c(&self) -> f64 {
        self.params.c
    }

    /// Regime of `c`.
    pub fn regime(&self) -> Regime {
        self.params.regime
    }

    /// `B`; may underflow to zero when built from an extreme `ln B`.
    pub fn b(&self) -> f64 {
        exp(self.ln_b)
    }

    /// `ln B`.
    pub fn ln_b(&self) -> f64 {
        self.ln_b
    }

    /// Collapse time (or additive time constant in the decay regime).
    pub fn t0(&self) -> f64 {
        self.t0
    }

    /// Center of the dome.
    pub fn x0(&self) -> f64 {
        self.x0
    }

    /// `μ = (c − 1)/(2c − 3)`; negative in the decay regime.
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Level exponent `λ = 2μ − 1`.
    pub fn level_exponent(&self) -> f64 {
        2.0 * self.mu - 1.0
    }

    /// `ln A` with `A = B²|μ|`.
    pub fn ln_amplitude(&self) -> f64 {
        2.0 * self.ln_b + ln(self.mu.abs())
    }

    /// Elapsed similarity time `t₀ − t` (collapse) or `t₀ + t` (decay).
    fn tau(&self, t: f64) -> Result<f64, DomainError> {
        ensure(t.is_finite(), "time must be finite", t)?;
        match self.params.regime {
            Regime::FiniteTimeCollapse => {
                let tau = self.t0 - t;
                ensure(tau > 0.0, "collapse solution is defined only for t < t0", t)?;
                Ok(tau)
            }
            _ => {
                let tau = self.t0 + t;
                ensure(
                    tau > 0.0,
                    "decay solution is defined only for t0 + t > 0",
                    t,
                )?;
                Ok(tau)
            }
        }
    }

    /// `ln x_f(t)`.
    pub fn ln_half_width(&self, t: f64) -> Result<f64, DomainError> {
        Ok(self.ln_b + self.mu * ln(self.tau(t)?))
    }

    /// Half-width `x_f(t) = B τ^μ` of the support.
    pub fn half_width(&self, t: f64) -> Result<f64, DomainError> {
        Ok(exp(self.ln_half_width(t)?))
    }

    /// `ln h_max(t)`.
    pub fn ln_h_max(&self, t: f64) -> Result<f64, DomainError> {
        let tau = self.tau(t)?;
        let f0 = 1.0 / (2.0 * (self.params.c - 1.0));
        Ok(self.ln_amplitude() + ln(f0) + self.level_exponent() * ln(tau))
    }

    /// Peak level `h(x₀, t) = B²|μ| τ^(2μ−1) F(0)`.
    pub fn h_max(&self, t: f64) -> Result<f64, DomainError> {
        Ok(exp(self.ln_h_max(t)?))
    }

    fn eval_inner(&self, x: f64, t: f64) -> Result<f64, DomainError> {
        ensure(x.is_finite(), "position must be finite", x)?;
        let xf = self.half_width(t)?;
        let xi = (x - self.x0) / xf;
        if xi.abs() >= 1.0 {
            ensure(
                !self.strict || xi.abs() == 1.0,
                "position outside the support",
                x,
            )?;
            return Ok(0.0);
        }
        Ok(self.h_max(t)? * (1.0 - xi * xi))
    }

    /// Level of the collapsing solution (`c > 3/2`, `t < t₀`).
    pub fn eval_collapse(&self, x: f64, t: f64) -> Result<f64, DomainError> {
        ensure(
            self.params.regime == Regime::FiniteTimeCollapse,
            "collapse evaluator requires c > 3/2",
            self.params.c,
        )?;
        self.eval_inner(x, t)
    }

    /// Level of the decaying solution (`1 < c < 3/2`, `t₀ + t > 0`).
    pub fn eval_decay(&self, x: f64, t: f64) -> Result<f64, DomainError> {
        ensure(
            self.params.regime == Regime::PowerLawDecay,
            "decay evaluator requires 1 < c < 3/2",
            self.params.c,
        )?;
        self.eval_inner(x, t)
    }

    /// Level in whichever regime the solution belongs to.
    pub fn eval(&self, x: f64, t: f64) -> Result<f64, DomainError> {
        self.eval_inner(x, t)
    }
}

/// Exponentially decaying solution at `c = 3/2`:
/// `h = C² e^(−2t/Θ)(1 − (x − x₀)²/(C²Θ e^(−2t/Θ)))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentialLimitSolution {
    amplitude: f64,
    theta: f64,
    x0: f64,
}

impl ExponentialLimitSolution {
    /// Builds the solution from `C > 0` and `Θ > 0`.
    pub fn new(amplitude: f64, theta: f64, x0: f64) -> Result<Self, DomainError> {
        ensure(
            amplitude.is_finite() && amplitude > 0.0,
            "amplitude C must be positive",
            amplitude,
        )?;
        ensure(
            theta.is_finite() && theta > 0.0,
            "e-folding time Theta must be positive",
            theta,
        )?;
        ensure(x0.is_finite(), "x0 must be finite", x0)?;
        Ok(Self {
            amplitude,
            theta,
            x0,
        })
    }

    /// `C`.
    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    /// `Θ`.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Center of the dome.
    pub fn x0(&self) -> f64 {
        self.x0
    }

    /// `x_f = C√Θ e^(−t/Θ)`.
    pub fn half_width(&self, t: f64) -> f64 {
        self.amplitude * sqrt(self.theta) * exp(-t / self.theta)
    }

    /// `h(x₀, t) = C² e^(−2t/Θ)`.
    pub fn h_max(&self, t: f64) -> f64 {
        self.amplitude * self.amplitude * exp(-2.0 * t / self.theta)
    }

    /// Level at `(x, t)`, zero outside the support.
    pub fn eval(&self, x: f64, t: f64) -> f64 {
        let xi = (x - self.x0) / self.half_width(t);
        if xi.abs() >= 1.0 {
            0.0
        } else {
            self.h_max(t) * (1.0 - xi * xi)
        }
    }
}

/// Side from which `c` approaches `3/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitSide {
    /// `c = 3/2 + ε`, collapsing solutions.
    Above,
    /// `c = 3/2 − ε`, power-law decaying solutions.
    Below,
}

/// Collapsing or decaying solution at `c = 3/2 ± ε` whose constants are tuned
/// so that it tends to the exponential solution `(C, Θ)` as `ε → 0`.
///
/// Both sides take `t₀ = Θ/(4ε)`. Above, `B² t₀^(1/(2ε) + 1) = C²Θ`; below,
/// `B t₀^(1/2 − 1/(4ε)) = C√Θ`.
pub fn near_limit_solution(
    eps: f64,
    theta: f64,
    amplitude: f64,
    x0: f64,
    side: LimitSide,
) -> Result<SelfSimilarSolution, DomainError> {
    ensure(
        eps > 0.0 && eps <= 0.1,
        "limit parameter eps must lie in (0, 0.1]",
        eps,
    )?;
    let target = ExponentialLimitSolution::new(amplitude, theta, x0)?;
    let t0 = target.theta / (4.0 * eps);
    let ln_c2_theta = 2.0 * ln(target.amplitude) + ln(target.theta);
    match side {
        LimitSide::Above => {
            // B² t₀^(1/(2ε) + 1) = C²Θ
            let ln_b = 0.5 * (ln_c2_theta - (0.5 / eps + 1.0) * ln(t0));
            SelfSimilarSolution::from_ln_b(1.5 + eps, ln_b, t0, x0)
        }
        LimitSide::Below => {
            // B t₀^(−1/(4ε) + 1/2) = C√Θ
            let ln_b = 0.5 * ln_c2_theta + (0.25 / eps - 0.5) * ln(t0);
            SelfSimilarSolution::from_ln_b(1.5 - eps, ln_b, t0, x0)
        }
    }
}

/// Sup-norm distance between the `c = 3/2 ± ε` solution and its exponential
/// limit on `t ∈ [0, Θ]`, `|x − x₀| ≤ x_f(0)`.
pub fn limit_consistency_check(
    eps: f64,
    theta: f64,
    amplitude: f64,
    side: LimitSide,
) -> Result<f64, DomainError> {
    const NT: usize = 21;
    const NX: usize = 41;
    let x0 = 0.0;
    let near = near_limit_solution(eps, theta, amplitude, x0, side)?;
    let limit = ExponentialLimitSolution::new(amplitude, theta, x0)?;
    let half = limit.half_width(0.0);
    let mut worst: f64 = 0.0;
    for i in 0..NT {
        let t = theta * i as f64 / (NT - 1) as f64;
        for j in 0..NX {
            let x = x0 - half + 2.0 * half * j as f64 / (NX - 1) as f64;
            let d = (near.eval(x, t)? - limit.eval(x, t)).abs();
            worst = worst.max(d);
        }
    }
    Ok(worst)
}

/// `h_max` of the near-limit solution computed directly from the limiting
/// constants, `C² · (1 ∓ t/t₀)^(±1/(2ε))`, avoiding the huge intermediate
/// powers. Used to cross-check the log-domain evaluator.
pub fn near_limit_h_max(eps: f64, theta: f64, amplitude: f64, t: f64, side: LimitSide) -> f64 {
    let t0 = theta / (4.0 * eps);
    let ln_ratio = match side {
        LimitSide::Above => 0.5 / eps * ln_1p(-t / t0),
        LimitSide::Below => -0.5 / eps * ln_1p(t / t0),
    };
    amplitude * amplitude * exp(ln_ratio)
}
