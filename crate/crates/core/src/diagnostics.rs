//! Intermediate-asymptotics diagnostics for simulated time series.
//!
//! Near collapse the similarity solution gives
//!
//! ```text
//! x_f²/h_max = (t₀ − t)/(μF(0)),   ln x_f = ln B + μ ln(t₀ − t),
//! ```
//!
//! so `t₀` is the root of a straight line in `t` and `(μ, ln B)` are the slope
//! and intercept of a straight line in `ln(t₀ − t)`. All regressions are
//! ordinary least squares.

use alloc::vec::Vec;
use thiserror::Error;

use crate::error::{ensure, DomainError};
use crate::math::{exp, ln};
use crate::series::{Record, TimeSeries};

/// Records with `x_f` below this fraction of its initial value are left out
/// of fits.
pub const MIN_FIT_HALFWIDTH_FRAC: f64 = 5e-3;

/// Fits with a coefficient of determination below this are rejected.
pub const MIN_R2: f64 = 0.9;

/// Failures of the fitting routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError {
    /// Invalid argument.
    #[error(transparent)]
    Domain(#[from] DomainError),
    /// Not enough records to fit.
    #[error("need at least {needed} records, have {have}")]
    TooFewRecords {
        /// Required count.
        needed: usize,
        /// Available count.
        have: usize,
    },
    /// `x_f²/h_max` does not decrease.
    #[error("x_f^2/h_max is not decreasing (slope {slope})")]
    NonNegativeSlope {
        /// Fitted slope.
        slope: f64,
    },
    /// The line explains too little of the variance.
    #[error("poor linear fit (r^2 = {r2})")]
    PoorFit {
        /// Achieved `r²`.
        r2: f64,
    },
    /// `t₀` does not lie beyond the window.
    #[error("collapse time {t0} does not exceed the last window time {t_max}")]
    CollapseTimeInWindow {
        /// Supplied collapse time.
        t0: f64,
        /// Latest time in the window.
        t_max: f64,
    },
    /// No stretch of the series is in the power-law regime.
    #[error("no fit window found: {0}")]
    WindowNotFound(&'static str),
}

/// Least-squares line `y = slope·x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    /// Slope.
    pub slope: f64,
    /// Intercept.
    pub intercept: f64,
    /// Coefficient of determination, clamped to `[0, 1]`.
    pub r2: f64,
}

/// Ordinary least squares through `(x, y)`; `None` with fewer than two
/// points or constant `x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Option<LineFit> {
    assert_eq!(x.len(), y.len());
    let n = x.len();
    if n < 2 {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if !(sxx > 0.0) {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy > 0.0 {
        let sse: f64 = x
            .iter()
            .zip(y)
            .map(|(&a, &b)| {
                let e = b - slope * a - intercept;
                e * e
            })
            .sum();
        (1.0 - sse / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Some(LineFit {
        slope,
        intercept,
        r2,
    })
}

/// Closed time interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitWindow {
    /// First time.
    pub start: f64,
    /// Last time.
    pub end: f64,
}

impl FitWindow {
    /// Whether `t` lies in the window.
    pub fn contains(&self, t: f64) -> bool {
        t >= self.start && t <= self.end
    }
}

/// Fitted similarity constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    /// Collapse time.
    pub t0: f64,
    /// Similarity constant `B`.
    pub b: f64,
    /// Exponent `μ`.
    pub mu: f64,
    /// `r²` of the `x_f²/h_max` line.
    pub r2_linear: f64,
    /// `r²` of the log-log line.
    pub r2_loglog: f64,
    /// Records used.
    pub window: FitWindow,
}

fn window_records<'a>(series: &'a TimeSeries, window: &FitWindow) -> Vec<&'a Record> {
    series
        .records
        .iter()
        .filter(|r| window.contains(r.t))
        .collect()
}

fn t0_line(records: &[&Record]) -> Result<(f64, f64), FitError> {
    if records.len() < 10 {
        return Err(FitError::TooFewRecords {
            needed: 10,
            have: records.len(),
        });
    }
    for r in records {
        ensure(
            r.half_width() > 0.0,
            "half-width must be positive",
            r.half_width(),
        )?;
        ensure(r.h_max > 0.0, "peak level must be positive", r.h_max)?;
    }
    let t: Vec<f64> = records.iter().map(|r| r.t).collect();
    let y: Vec<f64> = records
        .iter()
        .map(|r| r.half_width() * r.half_width() / r.h_max)
        .collect();
    let line = linear_fit(&t, &y).ok_or(FitError::TooFewRecords {
        needed: 2,
        have: records.len(),
    })?;
    if line.slope >= 0.0 {
        return Err(FitError::NonNegativeSlope { slope: line.slope });
    }
    if line.r2 < MIN_R2 {
        return Err(FitError::PoorFit { r2: line.r2 });
    }
    Ok((-line.intercept / line.slope, line.r2))
}

/// Collapse time from the line through `(t, x_f²/h_max)`; returns `(t₀, r²)`.
///
/// The slope of the line is `−1/(μF(0)) = −2(2c − 3)`; `c` is only checked
/// for the collapse regime.
pub fn fit_t0(series: &TimeSeries, c: f64, window: &FitWindow) -> Result<(f64, f64), FitError> {
    ensure(c > 1.5, "collapse fits need c > 3/2", c)?;
    t0_line(&window_records(series, window))
}

/// `(μ, B, r²)` from the line through `(ln(t₀ − t), ln x_f)`.
pub fn fit_mu_b(
    series: &TimeSeries,
    t0: f64,
    window: &FitWindow,
) -> Result<(f64, f64, f64), FitError> {
    let records = window_records(series, window);
    if records.len() < 2 {
        return Err(FitError::TooFewRecords {
            needed: 2,
            have: records.len(),
        });
    }
    let t_max = records
        .iter()
        .map(|r| r.t)
        .fold(f64::NEG_INFINITY, f64::max);
    if t0 <= t_max {
        return Err(FitError::CollapseTimeInWindow { t0, t_max });
    }
    let u: Vec<f64> = records.iter().map(|r| ln(t0 - r.t)).collect();
    let v: Vec<f64> = records.iter().map(|r| ln(r.half_width())).collect();
    let line = linear_fit(&u, &v).ok_or(FitError::TooFewRecords {
        needed: 2,
        have: records.len(),
    })?;
    Ok((line.slope, exp(line.intercept), line.r2))
}

const WINDOW_BINS: usize = 10;
const SLOPE_SPREAD: f64 = 0.02;
const MIN_WINDOW_BINS: usize = 3;
const MIN_WINDOW_DECAY: f64 = 2.0;

/// Latest stretch of the series over which `ln x_f` is straight in
/// `ln(t₀ − t)`.
///
/// Records with `x_f < 5·10⁻³ x_f(0)` are dropped. A provisional `t₀` comes
/// from [`fit_t0`] on the last third of the rest. The range of
/// `ln(t₀ − t)` is cut into ten equal bins and a slope fitted in each. Going
/// from the latest bin backwards, the first run of at least three adjacent
/// bins whose slopes spread by less than 2% of their median, and over which
/// `x_f` falls by at least a factor 2, is returned.
pub fn select_fit_window(series: &TimeSeries) -> Result<FitWindow, FitError> {
    let all = &series.records;
    if all.len() < 50 {
        return Err(FitError::TooFewRecords {
            needed: 50,
            have: all.len(),
        });
    }
    let xf0 = all[0].half_width();
    let eligible: Vec<&Record> = all
        .iter()
        .filter(|r| r.half_width() >= MIN_FIT_HALFWIDTH_FRAC * xf0 && r.h_max > 0.0)
        .collect();
    if eligible.len() < 30 {
        return Err(FitError::WindowNotFound("too few records before collapse"));
    }
    let tail = &eligible[eligible.len() - eligible.len() / 3..];
    let (t0, _) =
        t0_line(tail).map_err(|_| FitError::WindowNotFound("no provisional collapse time"))?;
    let pts: Vec<(f64, f64, f64)> = eligible
        .iter()
        .filter(|r| r.t < t0)
        .map(|r| (r.t, ln(t0 - r.t), ln(r.half_width())))
        .collect();
    if pts.len() < 30 {
        return Err(FitError::WindowNotFound(
            "too few records before the provisional collapse time",
        ));
    }
    let u_hi = pts[0].1;
    let u_lo = pts[pts.len() - 1].1;
    if !(u_hi > u_lo) {
        return Err(FitError::WindowNotFound("degenerate time range"));
    }
    let width = (u_hi - u_lo) / WINDOW_BINS as f64;

    // Bin 0 is the latest stretch.
    struct Bin {
        slope: f64,
        t_start: f64,
        t_end: f64,
        xf_start: f64,
        xf_end: f64,
    }
    let mut bins: Vec<Option<Bin>> = Vec::with_capacity(WINDOW_BINS);
    for b in 0..WINDOW_BINS {
        let lo = u_lo + b as f64 * width;
        let hi = if b + 1 == WINDOW_BINS {
            u_hi
        } else {
            lo + width
        };
        let members: Vec<&(f64, f64, f64)> = pts
            .iter()
            .filter(|p| p.1 >= lo && (p.1 < hi || (b + 1 == WINDOW_BINS && p.1 <= hi)))
            .collect();
        if members.len() < 3 {
            bins.push(None);
            continue;
        }
        let u: Vec<f64> = members.iter().map(|p| p.1).collect();
        let v: Vec<f64> = members.iter().map(|p| p.2).collect();
        bins.push(linear_fit(&u, &v).map(|line| Bin {
            slope: line.slope,
            t_start: members[members.len() - 1].0,
            t_end: members[0].0,
            xf_start: exp(members[members.len() - 1].2),
            xf_end: exp(members[0].2),
        }));
    }

    for end in 0..WINDOW_BINS {
        if bins[end].is_none() {
            continue;
        }
        let mut slopes: Vec<f64> = Vec::new();
        let mut last = end;
        for (b, bin) in bins.iter().enumerate().skip(end) {
            let Some(bin) = bin else { break };
            slopes.push(bin.slope);
            if spread(&slopes) >= SLOPE_SPREAD {
                slopes.pop();
                break;
            }
            last = b;
        }
        if slopes.len() < MIN_WINDOW_BINS {
            continue;
        }
        let (first, latest) = (bins[last].as_ref().unwrap(), bins[end].as_ref().unwrap());
        if first.xf_start / latest.xf_end >= MIN_WINDOW_DECAY {
            return Ok(FitWindow {
                start: first.t_start,
                end: latest.t_end,
            });
        }
    }
    Err(FitError::WindowNotFound(
        "no stretch with a steady log-log slope",
    ))
}

fn spread(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let median = if sorted.len() % 2 == 1 {
        sorted[sorted.len() / 2]
    } else {
        0.5 * (sorted[sorted.len() / 2 - 1] + sorted[sorted.len() / 2])
    };
    (sorted[sorted.len() - 1] - sorted[0]) / median.abs()
}

/// Selects a window, then fits `t₀` followed by `(μ, B)`.
pub fn fit_series(series: &TimeSeries, c: f64) -> Result<FitResult, FitError> {
    let window = select_fit_window(series)?;
    let (t0, r2_linear) = fit_t0(series, c, &window)?;
    let (mu, b, r2_loglog) = fit_mu_b(series, t0, &window)?;
    Ok(FitResult {
        t0,
        b,
        mu,
        r2_linear,
        r2_loglog,
        window,
    })
}

/// Peak of a profile on the uniform grid `ξ ∈ [−1, 1]`, refined by the
/// parabola through the largest node and its neighbours: `(ξ*, h*)`.
pub fn profile_peak(h: &[f64]) -> (f64, f64) {
    let n = h.len() - 1;
    let dxi = 2.0 / n as f64;
    let k = h
        .iter()
        .enumerate()
        .fold(0, |best, (i, &v)| if v > h[best] { i } else { best });
    let xi_k = -1.0 + k as f64 * dxi;
    if k == 0 || k == n {
        return (xi_k, h[k]);
    }
    let (a, b, c) = (h[k - 1], h[k], h[k + 1]);
    let curv = a - 2.0 * b + c;
    if !(curv < 0.0) {
        return (xi_k, b);
    }
    let offset = 0.5 * (a - c) / curv;
    (xi_k + offset * dxi, b - 0.25 * (a - c) * offset)
}

/// Linear interpolation of grid data, zero outside `[−1, 1]`.
fn interpolate(h: &[f64], xi: f64) -> f64 {
    if !(-1.0..=1.0).contains(&xi) {
        return 0.0;
    }
    let n = h.len() - 1;
    let u = (xi + 1.0) * 0.5 * n as f64;
    let j = (u as usize).min(n - 1);
    let w = u - j as f64;
    h[j] + w * (h[j + 1] - h[j])
}

/// `sup |h/h* − (1 − (ξ − ξ*)²)|` over the grid nodes, with the peak
/// `(ξ*, h*)` from [`profile_peak`]. The normalized similarity profile is the
/// same parabola for every `c`.
pub fn profile_collapse_error(h: &[f64], c: f64) -> f64 {
    let _ = c;
    let (xi_star, peak) = profile_peak(h);
    if !(peak > 0.0) {
        return f64::NAN;
    }
    let n = h.len() - 1;
    (0..=n)
        .map(|i| {
            let xc = -1.0 + 2.0 * i as f64 / n as f64 - xi_star;
            (h[i] / peak - (1.0 - xc * xc)).abs()
        })
        .fold(0.0, f64::max)
}

/// `sup_u |h(ξ* + u) − h(ξ* − u)| / h*`, with linear interpolation between
/// nodes and `h = 0` outside the grid.
pub fn asymmetry(h: &[f64]) -> f64 {
    let (xi_star, peak) = profile_peak(h);
    if !(peak > 0.0) {
        return f64::NAN;
    }
    let n = h.len() - 1;
    let dxi = 2.0 / n as f64;
    let reach = 1.0 + xi_star.abs();
    let steps = libm::ceil(reach / dxi) as usize;
    (0..=steps)
        .map(|j| {
            let u = j as f64 * dxi;
            (interpolate(h, xi_star + u) - interpolate(h, xi_star - u)).abs() / peak
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_through_collinear_points() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y = [1.0, 3.0, 5.0, 7.0];
        let l = linear_fit(&x, &y).unwrap();
        assert!((l.slope - 2.0).abs() < 1e-15 && (l.intercept - 1.0).abs() < 1e-15 && l.r2 == 1.0);
        assert!(linear_fit(&[1.0, 1.0], &[0.0, 1.0]).is_none());
    }

    #[test]
    fn peak_refinement_on_shifted_parabola() {
        let n = 200;
        let shift = 0.0137;
        let h: Vec<f64> = (0..=n)
            .map(|i| {
                let xi = -1.0 + 2.0 * i as f64 / n as f64;
                2.0 * (1.0 - (xi - shift) * (xi - shift))
            })
            .collect();
        let (xs, hs) = profile_peak(&h);
        assert!((xs - shift).abs() < 1e-12);
        assert!((hs - 2.0).abs() < 1e-12);
    }

    #[test]
    fn symmetric_profile_has_no_asymmetry() {
        let n = 202;
        let h: Vec<f64> = (0..=n)
            .map(|i| {
                let xi = -1.0 + 2.0 * i as f64 / n as f64;
                1.0 - xi * xi
            })
            .collect();
        assert!(asymmetry(&h) < 1e-12);
        assert!(profile_collapse_error(&h, 1.75) < 1e-12);
    }
}
