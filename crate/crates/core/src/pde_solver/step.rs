use alloc::vec;
use alloc::vec::Vec;

use super::{
    Grid, Scheme, SchemeConfig, SimState, StepError, EXPLICIT_STABILITY_BOUND, NEGATIVITY_TOLERANCE,
};
use crate::error::ensure;
use crate::tridiag::solve_tridiagonal;

/// One-sided second-order slopes `(∂ξh(−1), ∂ξh(1))`.
pub fn boundary_slopes(state: &SimState, grid: &Grid) -> (f64, f64) {
    let h = &state.h;
    let n = grid.n();
    let d = 2.0 * grid.dxi();
    let left = (-3.0 * h[0] + 4.0 * h[1] - h[2]) / d;
    let right = (3.0 * h[n] - 4.0 * h[n - 1] + h[n - 2]) / d;
    (left, right)
}

/// `max(h)·dt/(x_f² Δξ²)`.
pub fn stability_ratio(state: &SimState, dt: f64, grid: &Grid) -> f64 {
    let xf = state.half_width();
    state.h_max() * dt / (xf * xf * grid.dxi() * grid.dxi())
}

fn check_inputs(
    state: &SimState,
    c: f64,
    cfg: &SchemeConfig,
    grid: &Grid,
) -> Result<(), StepError> {
    ensure(c.is_finite() && c > 1.0, "interface law needs c > 1", c)?;
    ensure(
        cfg.dt.is_finite() && cfg.dt > 0.0,
        "time step must be positive",
        cfg.dt,
    )?;
    ensure(
        state.h.len() == grid.n() + 1,
        "state length must be N + 1",
        state.h.len() as f64,
    )?;
    ensure(
        state.x_right > state.x_left,
        "interfaces must be ordered",
        state.x_right - state.x_left,
    )?;
    Ok(())
}

/// Explicit part of the right-hand side at interior nodes, without the
/// `h ∂²ξξh` term: advection by the moving frame minus `(c − 1)(∂ξh)²`.
fn first_order_terms(h: &[f64], c: f64, grid: &Grid, slopes: (f64, f64), out: &mut [f64]) {
    let n = grid.n();
    let inv2d = 1.0 / (2.0 * grid.dxi());
    let (sl, sr) = slopes;
    for i in 1..n {
        let xi = grid.xi(i);
        let hx = (h[i + 1] - h[i - 1]) * inv2d;
        out[i] = (c - 1.0) * hx * 0.5 * ((xi + 1.0) * sr - (xi - 1.0) * sl) - (c - 1.0) * hx * hx;
    }
}

fn finish(
    state: &SimState,
    mut h: Vec<f64>,
    c: f64,
    dt: f64,
    slopes: (f64, f64),
) -> Result<SimState, StepError> {
    let n = h.len() - 1;
    h[0] = 0.0;
    h[n] = 0.0;
    for (node, v) in h.iter_mut().enumerate() {
        if !v.is_finite() {
            return Err(StepError::NonFinite { node });
        }
        if *v < 0.0 {
            if *v < -NEGATIVITY_TOLERANCE {
                return Err(StepError::InstabilityDetected { node, value: *v });
            }
            *v = 0.0;
        }
    }
    let xf = state.half_width();
    let x_left = state.x_left + dt * (c - 1.0) * slopes.0 / xf;
    let x_right = state.x_right + dt * (c - 1.0) * slopes.1 / xf;
    if !x_left.is_finite() || !x_right.is_finite() {
        return Err(StepError::NonFinite { node: n + 1 });
    }
    if x_right <= x_left {
        return Err(StepError::CollapseReached {
            half_width: 0.5 * (x_right - x_left),
        });
    }
    Ok(SimState {
        t: state.t + dt,
        step: state.step + 1,
        h,
        x_left,
        x_right,
    })
}

/// Forward-Euler step with centered differences.
pub fn step_explicit(
    state: &SimState,
    c: f64,
    cfg: &SchemeConfig,
    grid: &Grid,
) -> Result<SimState, StepError> {
    check_inputs(state, c, cfg, grid)?;
    let dt = cfg.dt;
    let ratio = stability_ratio(state, dt, grid);
    if ratio > EXPLICIT_STABILITY_BOUND {
        return Err(StepError::StabilityLimit { ratio });
    }
    let n = grid.n();
    let h = &state.h;
    let slopes = boundary_slopes(state, grid);
    let mut rhs = vec![0.0; n + 1];
    first_order_terms(h, c, grid, slopes, &mut rhs);
    let xf = state.half_width();
    let scale = dt / (xf * xf);
    let inv_d2 = 1.0 / (grid.dxi() * grid.dxi());
    let mut next = vec![0.0; n + 1];
    for i in 1..n {
        let hxx = (h[i + 1] - 2.0 * h[i] + h[i - 1]) * inv_d2;
        next[i] = h[i] + scale * (rhs[i] + h[i] * hxx);
    }
    finish(state, next, c, dt, slopes)
}

/// Semi-implicit step: `h ∂²ξξh` with the coefficient `h` frozen at the old
/// level, first-order terms explicit, one tridiagonal solve.
pub fn step_implicit(
    state: &SimState,
    c: f64,
    cfg: &SchemeConfig,
    grid: &Grid,
) -> Result<SimState, StepError> {
    check_inputs(state, c, cfg, grid)?;
    let dt = cfg.dt;
    let n = grid.n();
    let h = &state.h;
    let slopes = boundary_slopes(state, grid);
    let mut explicit = vec![0.0; n + 1];
    first_order_terms(h, c, grid, slopes, &mut explicit);
    let xf = state.half_width();
    let scale = dt / (xf * xf);
    let inv_d2 = 1.0 / (grid.dxi() * grid.dxi());

    let m = n - 1;
    let mut lower = vec![0.0; m];
    let mut diag = vec![0.0; m];
    let mut upper = vec![0.0; m];
    let mut rhs = vec![0.0; m];
    for row in 0..m {
        let i = row + 1;
        let r = scale * h[i] * inv_d2;
        lower[row] = -r;
        diag[row] = 1.0 + 2.0 * r;
        upper[row] = -r;
        rhs[row] = h[i] + scale * explicit[i];
    }
    let mut scratch = vec![0.0; m];
    solve_tridiagonal(&lower, &diag, &upper, &mut rhs, &mut scratch)
        .map_err(|e| StepError::SolverSingular { row: e.row + 1 })?;
    let mut next = vec![0.0; n + 1];
    next[1..n].copy_from_slice(&rhs);
    finish(state, next, c, dt, slopes)
}

/// Step with the scheme selected in `cfg`.
pub fn step(
    state: &SimState,
    c: f64,
    cfg: &SchemeConfig,
    grid: &Grid,
) -> Result<SimState, StepError> {
    match cfg.scheme {
        Scheme::Explicit => step_explicit(state, c, cfg, grid),
        Scheme::Implicit => step_implicit(state, c, cfg, grid),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parabola(grid: &Grid, height: f64, x_left: f64, x_right: f64) -> SimState {
        let h = grid
            .nodes()
            .iter()
            .map(|&x| height * (1.0 - x * x))
            .collect();
        SimState {
            t: 0.0,
            step: 0,
            h,
            x_left,
            x_right,
        }
    }

    #[test]
    fn slopes_exact_on_parabola() {
        let grid = Grid::new(202).unwrap();
        let s = parabola(&grid, 1.0, -1.0, 1.0);
        let (l, r) = boundary_slopes(&s, &grid);
        assert!((r + 2.0).abs() < 1e-11, "{r}");
        assert!((l - 2.0).abs() < 1e-11, "{l}");
        let zero = SimState {
            h: vec![0.0; 203],
            ..s
        };
        assert_eq!(boundary_slopes(&zero, &grid), (0.0, 0.0));
    }

    #[test]
    fn zero_state_is_fixed() {
        let grid = Grid::new(16).unwrap();
        let s = SimState {
            t: 0.0,
            step: 0,
            h: vec![0.0; 17],
            x_left: -1.0,
            x_right: 1.0,
        };
        for scheme in [Scheme::Explicit, Scheme::Implicit] {
            let cfg = SchemeConfig {
                n: 16,
                ..SchemeConfig::new(scheme)
            };
            let next = step(&s, 1.75, &cfg, &grid).unwrap();
            assert!(next.h.iter().all(|&v| v == 0.0));
            assert_eq!((next.x_left, next.x_right), (-1.0, 1.0));
            assert_eq!(next.step, 1);
        }
    }

    #[test]
    fn parabola_contracts() {
        let grid = Grid::new(202).unwrap();
        let s = parabola(&grid, 1.0, -1.0, 1.0);
        let cfg = SchemeConfig::new(Scheme::Explicit);
        let next = step_explicit(&s, 1.75, &cfg, &grid).unwrap();
        assert!(next.x_right < s.x_right);
        assert!(next.x_left > s.x_left);
        assert!(next.h[0] == 0.0 && next.h[202] == 0.0);
    }

    #[test]
    fn explicit_refuses_unstable_step() {
        let grid = Grid::new(202).unwrap();
        let s = parabola(&grid, 1.0, -0.05, 0.05);
        let cfg = SchemeConfig::new(Scheme::Explicit);
        assert!(matches!(
            step_explicit(&s, 1.75, &cfg, &grid),
            Err(StepError::StabilityLimit { .. })
        ));
        let cfg = SchemeConfig::new(Scheme::Implicit);
        assert!(step_implicit(&s, 1.75, &cfg, &grid).is_ok());
    }

    #[test]
    fn rejects_c_at_most_one() {
        let grid = Grid::new(16).unwrap();
        let s = parabola(&grid, 1.0, -1.0, 1.0);
        let cfg = SchemeConfig {
            n: 16,
            ..SchemeConfig::new(Scheme::Explicit)
        };
        assert!(matches!(
            step(&s, 1.0, &cfg, &grid),
            Err(StepError::Domain(_))
        ));
    }

    #[test]
    fn large_negative_aborts() {
        let grid = Grid::new(16).unwrap();
        let mut s = parabola(&grid, 1.0, -1.0, 1.0);
        s.h[8] = -1.0;
        let cfg = SchemeConfig {
            n: 16,
            ..SchemeConfig::new(Scheme::Implicit)
        };
        assert!(matches!(
            step(&s, 1.75, &cfg, &grid),
            Err(StepError::InstabilityDetected { .. })
        ));
    }
}
