//! Numerical solution of the similarity eigenvalue problem
//!
//! ```text
//! F F″ − (c − 1)(F′)² − ξ F′ + k F = 0,   k = (2μ − 1)/μ,
//! F(1) = 0,   F′(1) = −1/(c − 1),   F′(0) = 0,
//! ```
//!
//! recovering `μ` and `F` without using the closed form.
//!
//! Writing `s = 1 − ξ`, solutions that vanish at the interface with the
//! prescribed slope behave like `F = s/(c − 1) + f₂ s² + … + A s^c + …`. The
//! coefficients `fₙ` are fixed by `μ`; `A` is free, so the three boundary
//! conditions alone do not pin `μ`. The eigenvalue belongs to the branch that
//! is smooth at the interface (`A = 0`).
//!
//! Two solvers impose that:
//!
//! - [`shoot_eigenvalue`] starts on the regular expansion at `ξ = 1 − δ`,
//!   integrates to `ξ = 0` with fixed-step RK4 and bisects on `F′(0)`. For
//!   `c < 2` the smooth branch is the strongly attracting direction at the
//!   interface and marching away from it is well conditioned.
//! - [`collocate_eigenvalue`] expands `F = Σ bₙ (1 − ξ²)ⁿ` with `b₁` set by
//!   the slope condition and solves the collocated equation for `(b₂…b_K, μ)`
//!   by Newton. For `c ≥ 2` the non-smooth mode grows like `s^c` away from
//!   the interface, so marching amplifies round-off by roughly `δ^(1−c)` and a
//!   global method is required.
//!
//! [`solve_eigenvalue`] picks between them.

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::error::{ensure, DomainError};
use crate::math::cos;

/// Failures of the eigenvalue solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EigenError {
    /// Invalid argument.
    #[error(transparent)]
    Domain(#[from] DomainError),
    /// `F` reached zero (or blew up) before `ξ = 0`; `μ` is outside the
    /// admissible range for this start.
    #[error("integration broke down at xi = {xi} (F = {f})")]
    IntegrationBreakdown {
        /// Where the integration stopped.
        xi: f64,
        /// Last value of `F`.
        f: f64,
    },
    /// No sign change of `F′(0)` was found inside the bracket.
    #[error("no sign change of F'(0) in mu bracket [{lo}, {hi}]")]
    Bracket {
        /// Lower end of the bracket.
        lo: f64,
        /// Upper end of the bracket.
        hi: f64,
    },
    /// The iteration did not settle.
    #[error("no convergence after {iterations} iterations")]
    NoConvergence {
        /// Iterations performed.
        iterations: usize,
    },
}

/// Which algorithm produced an [`EigenSolution`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenMethod {
    /// Choose by `c`: shooting below 2, collocation otherwise.
    Auto,
    /// Interface shooting with bisection on `F′(0)`.
    Shooting,
    /// Polynomial collocation with Newton iteration.
    Collocation,
}

/// Parameters of the eigenvalue search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingConfig {
    /// Distance `δ` of the integration start from the interface.
    pub start_offset: f64,
    /// Fixed RK4 step, at most `δ`.
    pub ode_step: f64,
    /// Search interval for `μ`.
    pub mu_bracket: (f64, f64),
    /// Bisection stops when the bracket is narrower than this.
    pub mu_tolerance: f64,
    /// Required `|F′(0)|` at the accepted root.
    pub tolerance: f64,
    /// Terms of the regular interface expansion used for the start values.
    pub expansion_order: usize,
    /// Trial values of `μ` scanned for sign changes.
    pub scan_points: usize,
    /// Iteration cap for bisection and Newton.
    pub max_iterations: usize,
    /// Number of basis functions for collocation.
    pub basis_size: usize,
    /// Samples of the returned profile on `[0, 1]`.
    pub profile_samples: usize,
    /// Algorithm selection.
    pub method: EigenMethod,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        Self {
            start_offset: 1e-3,
            ode_step: 1e-3,
            mu_bracket: (0.500001, 20.0),
            mu_tolerance: 1e-8,
            tolerance: 1e-6,
            expansion_order: 2,
            scan_points: 48,
            max_iterations: 200,
            basis_size: 8,
            profile_samples: 201,
            method: EigenMethod::Auto,
        }
    }
}

impl ShootingConfig {
    /// Checks the configuration invariants.
    pub fn validate(&self) -> Result<(), DomainError> {
        let d = self.start_offset;
        ensure(
            d > 0.0 && d <= 1e-3,
            "start offset must lie in (0, 1e-3]",
            d,
        )?;
        ensure(
            self.ode_step > 0.0 && self.ode_step <= d,
            "ode step must be positive and no larger than the start offset",
            self.ode_step,
        )?;
        let (lo, hi) = self.mu_bracket;
        ensure(
            lo.is_finite() && hi.is_finite() && hi > lo,
            "mu bracket must have positive width",
            hi - lo,
        )?;
        ensure(hi > 0.0, "mu bracket must contain positive values", hi)?;
        ensure(
            self.mu_tolerance > 0.0,
            "mu tolerance must be positive",
            self.mu_tolerance,
        )?;
        ensure(
            self.tolerance > 0.0,
            "tolerance must be positive",
            self.tolerance,
        )?;
        ensure(
            self.expansion_order >= 1,
            "expansion order must be at least 1",
            self.expansion_order as f64,
        )?;
        ensure(
            self.scan_points >= 2,
            "need at least two scan points",
            self.scan_points as f64,
        )?;
        ensure(
            self.basis_size >= 2,
            "need at least two basis functions",
            self.basis_size as f64,
        )?;
        ensure(
            self.profile_samples >= 3,
            "need at least three profile samples",
            self.profile_samples as f64,
        )?;
        Ok(())
    }
}

/// Numerically recovered eigenpair.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSolution {
    /// Recovered similarity exponent.
    pub mu_numeric: f64,
    /// `F` at `profile_samples` uniform points of `[0, 1]`, as `(ξ, F)`.
    pub profile: Vec<(f64, f64)>,
    /// `|F′(0)|` of the accepted solution.
    pub residual_at_zero: f64,
    /// Bisection or Newton iterations spent on the accepted root.
    pub iterations: usize,
    /// Every root found in the bracket, in increasing order.
    pub roots: Vec<f64>,
    /// Algorithm used.
    pub method: EigenMethod,
}

fn check_c(c: f64) -> Result<(), DomainError> {
    ensure(
        c.is_finite() && c > 1.5,
        "eigenvalue problem requires c > 3/2",
        c,
    )
}

fn check_mu(mu: f64) -> Result<(), DomainError> {
    ensure(mu.is_finite() && mu > 0.0, "mu must be positive", mu)
}

/// Coefficients `f₀ = 0, f₁, …, f_order` of the regular expansion
/// `F = Σ fₙ sⁿ`, `s = 1 − ξ`, with `f₁ = 1/(c − 1)`.
///
/// Matching powers of `s` gives `(m + 1)(m f₁ − 1) f_{m+1} = −R_m` where
/// `R_m` collects the lower coefficients. In particular
/// `f₂ = (1 − μ) / (2μ(2 − c))`. When `m f₁ = 1` (integer `c = m + 1`) the
/// coefficient is free and set to zero.
pub fn interface_expansion(c: f64, mu: f64, order: usize) -> Vec<f64> {
    let a = 1.0 / (c - 1.0);
    let k = (2.0 * mu - 1.0) / mu;
    let mut f = alloc::vec![0.0; order.max(1) + 1];
    f[1] = a;
    for m in 1..order {
        let mut rest = 0.0;
        // F F_ss
        for j in 2..=m + 1 {
            let i = m + 2 - j;
            if i == 1 && j == m + 1 {
                continue;
            }
            rest += f[i] * f[j] * (j * (j - 1)) as f64;
        }
        // −(c − 1) F_s²
        for i in 1..=m + 1 {
            let j = m + 2 - i;
            if i == m + 1 || j == m + 1 {
                continue;
            }
            rest -= (c - 1.0) * (i * j) as f64 * f[i] * f[j];
        }
        // (1 − s) F_s + k F
        rest += (k - m as f64) * f[m];
        let den = (m + 1) as f64 * (m as f64 * a - 1.0);
        f[m + 1] = if den.abs() < 1e-12 { 0.0 } else { -rest / den };
    }
    f
}

fn ode_rhs(xi: f64, f: f64, fp: f64, c: f64, k: f64) -> f64 {
    ((c - 1.0) * fp * fp + xi * fp - k * f) / f
}

/// Result of one shot from the interface.
#[derive(Debug, Clone, PartialEq)]
pub struct Shot {
    /// `(ξ, F)` at every RK4 node from `1 − δ` down to `0`.
    pub profile: Vec<(f64, f64)>,
    /// `F′` at the same nodes.
    pub slopes: Vec<f64>,
    /// `F′(0)`.
    pub fprime_at_zero: f64,
}

/// Integrates the profile equation from `ξ = 1 − δ` down to `ξ = 0`.
///
/// Start values come from [`interface_expansion`] truncated at
/// `cfg.expansion_order`; the default order 2 is the two-term start
/// `F = δ/(c − 1) + f₂δ²`.
pub fn integrate_from_interface(c: f64, mu: f64, cfg: &ShootingConfig) -> Result<Shot, EigenError> {
    check_c(c)?;
    check_mu(mu)?;
    cfg.validate()?;
    let k = (2.0 * mu - 1.0) / mu;
    let coeffs = interface_expansion(c, mu, cfg.expansion_order);
    let s = cfg.start_offset;
    let mut f = 0.0;
    let mut fs = 0.0;
    for (n, &fc) in coeffs.iter().enumerate().skip(1).rev() {
        f = f * s + fc;
        fs = fs * s + n as f64 * fc;
    }
    f *= s;
    let mut fp = -fs;
    let mut xi = 1.0 - s;
    let steps = libm::ceil(xi / cfg.ode_step).max(1.0) as usize;
    let h = -xi / steps as f64;
    let mut profile = Vec::with_capacity(steps + 1);
    let mut slopes = Vec::with_capacity(steps + 1);
    profile.push((xi, f));
    slopes.push(fp);
    for step in 0..steps {
        let k1f = fp;
        let k1p = ode_rhs(xi, f, fp, c, k);
        let k2f = fp + 0.5 * h * k1p;
        let k2p = ode_rhs(xi + 0.5 * h, f + 0.5 * h * k1f, k2f, c, k);
        let k3f = fp + 0.5 * h * k2p;
        let k3p = ode_rhs(xi + 0.5 * h, f + 0.5 * h * k2f, k3f, c, k);
        let k4f = fp + h * k3p;
        let k4p = ode_rhs(xi + h, f + h * k3f, k4f, c, k);
        f += h / 6.0 * (k1f + 2.0 * k2f + 2.0 * k3f + k4f);
        fp += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        xi = if step + 1 == steps { 0.0 } else { xi + h };
        if !(f > 0.0) || !f.is_finite() || !fp.is_finite() {
            return Err(EigenError::IntegrationBreakdown { xi, f });
        }
        profile.push((xi, f));
        slopes.push(fp);
    }
    Ok(Shot {
        profile,
        slopes,
        fprime_at_zero: fp,
    })
}

/// Sup-norm over interior nodes of the left side of the profile equation,
/// using centered differences on uniformly spaced samples.
pub fn ode_residual(xi: &[f64], f: &[f64], mu: f64, c: f64) -> f64 {
    assert_eq!(xi.len(), f.len());
    if f.len() < 3 {
        return 0.0;
    }
    let k = (2.0 * mu - 1.0) / mu;
    let dx = xi[1] - xi[0];
    (1..f.len() - 1)
        .map(|i| {
            let d1 = (f[i + 1] - f[i - 1]) / (2.0 * dx);
            let d2 = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / (dx * dx);
            (f[i] * d2 - (c - 1.0) * d1 * d1 - xi[i] * d1 + k * f[i]).abs()
        })
        .fold(0.0, f64::max)
}

/// Cubic Hermite interpolation of a shot onto uniform points of `[0, 1]`.
fn resample(shot: &Shot, c: f64, samples: usize) -> Vec<(f64, f64)> {
    // nodes run from ξ = 1 − δ down to 0; F(1) = 0, F′(1) = −1/(c − 1) closes the interval.
    let mut pts: Vec<(f64, f64, f64)> = shot
        .profile
        .iter()
        .zip(&shot.slopes)
        .rev()
        .map(|(&(x, f), &d)| (x, f, d))
        .collect();
    pts.push((1.0, 0.0, -1.0 / (c - 1.0)));
    let mut out = Vec::with_capacity(samples);
    let mut j = 0;
    for i in 0..samples {
        let x = i as f64 / (samples - 1) as f64;
        while j + 2 < pts.len() && pts[j + 1].0 < x {
            j += 1;
        }
        let (x0, f0, d0) = pts[j];
        let (x1, f1, d1) = pts[j + 1];
        let h = x1 - x0;
        let s = (x - x0) / h;
        let (s2, s3) = (s * s, s * s * s);
        let f = (2.0 * s3 - 3.0 * s2 + 1.0) * f0
            + (s3 - 2.0 * s2 + s) * h * d0
            + (-2.0 * s3 + 3.0 * s2) * f1
            + (s3 - s2) * h * d1;
        out.push((x, f));
    }
    out
}

/// Solves the eigenvalue problem by shooting and bisection on `F′(0)`.
///
/// The bracket is scanned on a geometric grid; every sign change between
/// successful shots is refined by bisection. Changes across a breakdown or
/// a pole (where `|F′(0)|` stays large) are rejected. The root with the
/// smallest residual is returned and all roots are reported.
pub fn shoot_eigenvalue(c: f64, cfg: &ShootingConfig) -> Result<EigenSolution, EigenError> {
    check_c(c)?;
    cfg.validate()?;
    let (lo, hi) = cfg.mu_bracket;
    let lo = lo.max(1e-6);
    let shot = |mu: f64| {
        integrate_from_interface(c, mu, cfg)
            .ok()
            .map(|s| s.fprime_at_zero)
    };

    let ratio = libm::pow(hi / lo, 1.0 / (cfg.scan_points - 1) as f64);
    let grid: Vec<f64> = (0..cfg.scan_points)
        .map(|i| lo * libm::pow(ratio, i as f64))
        .collect();
    let values: Vec<Option<f64>> = grid.iter().map(|&mu| shot(mu)).collect();

    let mut candidates: Vec<(f64, f64, usize)> = Vec::new();
    for w in 0..grid.len() - 1 {
        let (Some(ga), Some(gb)) = (values[w], values[w + 1]) else {
            continue;
        };
        if ga == 0.0 {
            candidates.push((grid[w], 0.0, 0));
            continue;
        }
        if ga * gb > 0.0 {
            continue;
        }
        let (mut a, mut b, mut fa) = (grid[w], grid[w + 1], ga);
        let mut iterations = 0;
        let mut ok = true;
        while b - a > cfg.mu_tolerance * b.max(1.0) {
            if iterations >= cfg.max_iterations {
                return Err(EigenError::NoConvergence { iterations });
            }
            iterations += 1;
            let m = 0.5 * (a + b);
            match shot(m) {
                Some(0.0) => {
                    a = m;
                    b = m;
                }
                Some(fm) if fm * fa < 0.0 => b = m,
                Some(fm) => {
                    a = m;
                    fa = fm;
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let mu = 0.5 * (a + b);
        if let Some(r) = shot(mu) {
            if r.abs() <= cfg.tolerance {
                candidates.push((mu, r.abs(), iterations));
            }
        }
    }
    if candidates.is_empty() {
        return Err(EigenError::Bracket { lo, hi });
    }
    let roots: Vec<f64> = candidates.iter().map(|c| c.0).collect();
    let best = candidates
        .iter()
        .copied()
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .expect("non-empty");
    let shot = integrate_from_interface(c, best.0, cfg)?;
    Ok(EigenSolution {
        mu_numeric: best.0,
        profile: resample(&shot, c, cfg.profile_samples),
        residual_at_zero: shot.fprime_at_zero.abs(),
        iterations: best.2,
        roots,
        method: EigenMethod::Shooting,
    })
}

/// Even polynomial `F = Σ_{n=1..K} bₙ uⁿ`, `u = 1 − ξ²`.
struct EvenPoly<'a> {
    b: &'a [f64],
}

impl EvenPoly<'_> {
    /// `(F, F′, F″)` at `ξ`.
    fn eval(&self, xi: f64) -> (f64, f64, f64) {
        let u = 1.0 - xi * xi;
        let (mut f, mut fu, mut fuu) = (0.0, 0.0, 0.0);
        for (idx, &bn) in self.b.iter().enumerate() {
            let n = (idx + 1) as f64;
            let (p, d1, d2) = basis(u, idx + 1);
            f += bn * p;
            fu += bn * d1;
            fuu += bn * d2;
            let _ = n;
        }
        (f, -2.0 * xi * fu, -2.0 * fu + 4.0 * xi * xi * fuu)
    }
}

/// `(uⁿ, d/du uⁿ, d²/du² uⁿ)`.
fn basis(u: f64, n: usize) -> (f64, f64, f64) {
    let nf = n as f64;
    let p = libm::pow(u, nf);
    let d1 = nf * if n >= 1 { libm::pow(u, nf - 1.0) } else { 0.0 };
    let d2 = nf * (nf - 1.0) * if n >= 2 { libm::pow(u, nf - 2.0) } else { 0.0 };
    (p, d1, d2)
}

/// Solves the eigenvalue problem by collocation in the basis `(1 − ξ²)ⁿ`.
///
/// `F′(0) = 0` and `F(1) = 0` hold for every basis function and
/// `F′(1) = −2b₁` fixes `b₁ = 1/(2(c − 1))`. The remaining `K − 1`
/// coefficients and `μ` are found by Newton on the residual at `K` Chebyshev
/// points of `(0, 1)`, started from each of several `μ` in the bracket with
/// `bₙ = 0`.
pub fn collocate_eigenvalue(c: f64, cfg: &ShootingConfig) -> Result<EigenSolution, EigenError> {
    check_c(c)?;
    cfg.validate()?;
    let kb = cfg.basis_size;
    let b1 = 1.0 / (2.0 * (c - 1.0));
    let nodes: Vec<f64> = (0..kb)
        .map(|j| cos(core::f64::consts::PI * (j as f64 + 0.5) / (2 * kb) as f64))
        .collect();

    let residual = |b: &[f64], mu: f64, xi: f64| -> f64 {
        let k = (2.0 * mu - 1.0) / mu;
        let (f, f1, f2) = EvenPoly { b }.eval(xi);
        f * f2 - (c - 1.0) * f1 * f1 - xi * f1 + k * f
    };

    let newton = |mu0: f64| -> Option<(Vec<f64>, f64, usize)> {
        let mut b = alloc::vec![0.0; kb];
        b[0] = b1;
        let mut mu = mu0;
        for it in 1..=cfg.max_iterations {
            let k = (2.0 * mu - 1.0) / mu;
            let mut jac = DMatrix::<f64>::zeros(kb, kb);
            let mut rhs = DVector::<f64>::zeros(kb);
            for (row, &xi) in nodes.iter().enumerate() {
                let (f, f1, f2) = EvenPoly { b: &b }.eval(xi);
                rhs[row] = -(f * f2 - (c - 1.0) * f1 * f1 - xi * f1 + k * f);
                let u = 1.0 - xi * xi;
                for n in 2..=kb {
                    let (p, d1, d2) = basis(u, n);
                    let p1 = -2.0 * xi * d1;
                    let p2 = -2.0 * d1 + 4.0 * xi * xi * d2;
                    jac[(row, n - 2)] =
                        p * f2 + f * p2 - 2.0 * (c - 1.0) * f1 * p1 - xi * p1 + k * p;
                }
                jac[(row, kb - 1)] = f / (mu * mu);
            }
            let step = jac.lu().solve(&rhs)?;
            let mut damping = 1.0;
            // keep μ positive
            while mu + damping * step[kb - 1] <= 1e-3 {
                damping *= 0.5;
                if damping < 1e-6 {
                    return None;
                }
            }
            for n in 2..=kb {
                b[n - 1] += damping * step[n - 2];
            }
            mu += damping * step[kb - 1];
            if !mu.is_finite() || b.iter().any(|v| !v.is_finite()) {
                return None;
            }
            let size = step.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let res = rhs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if size < 1e-12 * (1.0 + mu.abs()) || (res < 1e-14 && size < 1e-8) {
                return Some((b, mu, it));
            }
        }
        None
    };

    let (lo, hi) = cfg.mu_bracket;
    let lo = lo.max(0.5 + 1e-6);
    let starts = 12;
    let ratio = libm::pow(hi / lo, 1.0 / (starts - 1) as f64);
    let mut found: Vec<(Vec<f64>, f64, usize)> = Vec::new();
    for i in 0..starts {
        let mu0 = lo * libm::pow(ratio, i as f64);
        let Some((b, mu, it)) = newton(mu0) else {
            continue;
        };
        if mu < lo || mu > hi {
            continue;
        }
        let max_res = nodes
            .iter()
            .fold(0.0f64, |m, &x| m.max(residual(&b, mu, x).abs()));
        let positive = (0..50).all(|j| EvenPoly { b: &b }.eval(j as f64 / 50.0).0 > 0.0);
        if max_res > 1e-10 || !positive {
            continue;
        }
        if found
            .iter()
            .all(|(_, m, _)| (m - mu).abs() > 1e-7 * mu.max(1.0))
        {
            found.push((b, mu, it));
        }
    }
    if found.is_empty() {
        return Err(EigenError::Bracket { lo, hi });
    }
    found.sort_by(|x, y| x.1.total_cmp(&y.1));
    let roots: Vec<f64> = found.iter().map(|f| f.1).collect();
    let (b, mu, iterations) = found.swap_remove(0);
    let poly = EvenPoly { b: &b };
    let profile = (0..cfg.profile_samples)
        .map(|i| {
            let xi = i as f64 / (cfg.profile_samples - 1) as f64;
            (xi, poly.eval(xi).0)
        })
        .collect();
    Ok(EigenSolution {
        mu_numeric: mu,
        profile,
        residual_at_zero: poly.eval(0.0).1.abs(),
        iterations,
        roots,
        method: EigenMethod::Collocation,
    })
}

/// Solves the eigenvalue problem with the method selected in `cfg`.
pub fn solve_eigenvalue(c: f64, cfg: &ShootingConfig) -> Result<EigenSolution, EigenError> {
    check_c(c)?;
    match cfg.method {
        EigenMethod::Shooting => shoot_eigenvalue(c, cfg),
        EigenMethod::Collocation => collocate_eigenvalue(c, cfg),
        EigenMethod::Auto if c < 2.0 => shoot_eigenvalue(c, cfg),
        EigenMethod::Auto => collocate_eigenvalue(c, cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::selfsimilar::{mu_of_c, profile_f};

    fn profile_error(sol: &EigenSolution, c: f64) -> f64 {
        sol.profile
            .iter()
            .map(|&(xi, f)| (f - profile_f(xi, c).unwrap()).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn two_term_start_coefficient() {
        for &(c, mu) in &[(1.75, 1.2), (1.6, 3.0), (2.5, 0.9), (4.0, 0.6)] {
            let f = interface_expansion(c, mu, 2);
            assert!((f[1] - 1.0 / (c - 1.0)).abs() < 1e-15);
            let s2 = (1.0 - mu) / (2.0 * mu * (2.0 - c));
            assert!((f[2] - s2).abs() < 1e-13, "c={c}: {} vs {s2}", f[2]);
        }
    }

    #[test]
    fn expansion_of_true_eigenfunction_terminates() {
        // At μ = μ(c) the regular branch is the parabola a s − (a/2) s².
        for &c in &[1.6, 1.75, 2.5, 3.7] {
            let f = interface_expansion(c, mu_of_c(c).unwrap(), 8);
            let a = 1.0 / (c - 1.0);
            assert!((f[2] + 0.5 * a).abs() < 1e-13);
            for &fn_ in &f[3..] {
                assert!(fn_.abs() < 1e-12, "{f:?}");
            }
        }
    }

    #[test]
    fn expansion_satisfies_ode_near_interface() {
        let (c, mu) = (1.8, 1.1);
        let f = interface_expansion(c, mu, 12);
        let k = (2.0 * mu - 1.0) / mu;
        let s: f64 = 0.01;
        let (mut v, mut d1, mut d2) = (0.0, 0.0, 0.0);
        for (n, &a) in f.iter().enumerate() {
            let n = n as i32;
            v += a * s.powi(n);
            if n >= 1 {
                d1 += a * n as f64 * s.powi(n - 1);
            }
            if n >= 2 {
                d2 += a * (n * (n - 1)) as f64 * s.powi(n - 2);
            }
        }
        // in s: F F_ss − (c−1) F_s² + (1 − s) F_s + k F
        let r = v * d2 - (c - 1.0) * d1 * d1 + (1.0 - s) * d1 + k * v;
        assert!(r.abs() < 1e-15, "{r}");
    }

    #[test]
    fn shot_at_true_eigenvalue() {
        let cfg = ShootingConfig::default();
        let shot = integrate_from_interface(1.75, 1.5, &cfg).unwrap();
        assert!(shot.fprime_at_zero.abs() < 1e-6);
        let f0 = shot.profile.last().unwrap();
        assert_eq!(f0.0, 0.0);
        assert!((f0.1 - 2.0 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn shot_sign_structure_brackets_the_eigenvalue() {
        let cfg = ShootingConfig::default();
        let below = integrate_from_interface(1.75, 1.2, &cfg)
            .unwrap()
            .fprime_at_zero;
        let above = match integrate_from_interface(1.75, 3.0, &cfg) {
            Ok(s) => s.fprime_at_zero,
            Err(EigenError::IntegrationBreakdown { .. }) => f64::NAN,
            Err(e) => panic!("{e}"),
        };
        assert!(below.abs() > 1e-3);
        assert!(
            above.is_nan() || above * below < 0.0,
            "below {below}, above {above}"
        );
    }

    #[test]
    fn rejects_bad_config() {
        let mut cfg = ShootingConfig::default();
        cfg.start_offset = 1e-2;
        assert!(matches!(
            integrate_from_interface(1.75, 1.5, &cfg),
            Err(EigenError::Domain(_))
        ));
        cfg = ShootingConfig::default();
        cfg.ode_step = 2e-3;
        assert!(cfg.validate().is_err());
        cfg = ShootingConfig::default();
        cfg.mu_bracket = (2.0, 1.0);
        assert!(cfg.validate().is_err());
        assert!(solve_eigenvalue(1.4, &ShootingConfig::default()).is_err());
    }

    #[test]
    fn bracket_without_root_is_reported() {
        let cfg = ShootingConfig {
            mu_bracket: (0.6, 1.2),
            method: EigenMethod::Shooting,
            ..Default::default()
        };
        assert!(matches!(
            solve_eigenvalue(1.75, &cfg),
            Err(EigenError::Bracket { .. })
        ));
    }

    #[test]
    fn recovers_known_eigenvalues() {
        let cfg = ShootingConfig::default();
        for &(c, expected) in &[(1.75, 1.5), (2.0, 1.0), (5.0, 4.0 / 7.0)] {
            let sol = solve_eigenvalue(c, &cfg).unwrap();
            assert!(
                (sol.mu_numeric - expected).abs() < 1e-6,
                "c={c}: {}",
                sol.mu_numeric
            );
            assert!(profile_error(&sol, c) < 1e-5);
            assert!(sol.profile.iter().all(|&(_, f)| f >= 0.0));
        }
    }

    #[test]
    fn both_methods_agree_where_both_apply() {
        let cfg = ShootingConfig::default();
        for &c in &[1.6, 1.75, 1.9] {
            let s = shoot_eigenvalue(c, &cfg).unwrap();
            let k = collocate_eigenvalue(c, &cfg).unwrap();
            assert!((s.mu_numeric - k.mu_numeric).abs() < 1e-6, "c={c}");
        }
    }

    #[test]
    fn ode_residual_examples() {
        let (c, mu) = (1.75, 1.5);
        let n = 1001;
        let xi: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        let exact: Vec<f64> = xi.iter().map(|&x| profile_f(x, c).unwrap()).collect();
        assert!(ode_residual(&xi, &exact, mu, c) < 1e-6);

        // Residual of F + εξ² against the analytic value of the perturbed
        // left-hand side: with p = εξ², R = pF″ + Fp″ − 2(c−1)F′p′ − (c−1)p′²
        // − ξp′ + kp, maximized over the grid.
        let eps = 1e-2;
        let pert: Vec<f64> = xi
            .iter()
            .zip(&exact)
            .map(|(&x, &f)| f + eps * x * x)
            .collect();
        let k = (2.0 * mu - 1.0) / mu;
        let analytic = xi[1..n - 1]
            .iter()
            .map(|&x| {
                let f = profile_f(x, c).unwrap();
                let (f1, f2) = (-x / (c - 1.0), -1.0 / (c - 1.0));
                let (p, p1, p2) = (eps * x * x, 2.0 * eps * x, 2.0 * eps);
                (p * f2 + f * p2 + p * p2
                    - 2.0 * (c - 1.0) * f1 * p1
                    - (c - 1.0) * p1 * p1
                    - x * p1
                    + k * p)
                    .abs()
            })
            .fold(0.0, f64::max);
        let numeric = ode_residual(&xi, &pert, mu, c);
        assert!(numeric > 1e-3);
        assert!((numeric - analytic).abs() < 1e-6, "{numeric} vs {analytic}");

        let zero = std::vec![0.0; n];
        assert_eq!(ode_residual(&xi, &zero, mu, c), 0.0);
    }
}
