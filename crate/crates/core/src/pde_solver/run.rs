use alloc::string::String;
use alloc::vec::Vec;
use thiserror::Error;

use super::{step, InitialCondition, Scheme, SchemeConfig, SimState, StepError};
use crate::error::{ensure, DomainError};
use crate::series::{Record, RunMeta, Snapshot, StopReason, TimeSeries};

/// A run that ended on a step error.
#[derive(Debug, Clone, PartialEq)]
pub struct RunAborted {
    /// The failing step's error.
    pub error: StepError,
    /// Last valid state.
    pub last_state: SimState,
    /// Everything recorded up to and including `last_state`.
    pub series: TimeSeries,
}

/// Failure of [`run`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RunError {
    /// Invalid inputs; nothing was computed.
    #[error(transparent)]
    Domain(#[from] DomainError),
    /// A step failed.
    #[error("run aborted at t = {}: {}", .0.last_state.t, .0.error)]
    Aborted(alloc::boxed::Box<RunAborted>),
}

fn record(state: &SimState) -> Record {
    Record {
        t: state.t,
        x_left: state.x_left,
        x_right: state.x_right,
        h_max: state.h_max(),
    }
}

fn snapshot(state: &SimState) -> Snapshot {
    Snapshot {
        step: state.step,
        t: state.t,
        x_left: state.x_left,
        x_right: state.x_right,
        h: state.h.clone(),
    }
}

/// Integrates from `ic` until the stop rule fires.
///
/// Time is `t_start + k·dt` after `k` steps. Records are kept every
/// `record_every` steps and profiles every `snapshot_every` steps; the initial
/// and final states are always kept. When the explicit scheme reaches its
/// stability bound the run ends normally with [`StopReason::StabilityLimit`].
pub fn run(ic: &InitialCondition, c: f64, cfg: &SchemeConfig) -> Result<TimeSeries, RunError> {
    ensure(c.is_finite() && c > 1.0, "simulation needs c > 1", c)?;
    let grid = cfg.validate()?;
    let mut state = ic.to_state(&grid)?;
    let t_start = state.t;
    let xf0 = state.half_width();
    let hmax0 = state.h_max();
    ensure(
        hmax0 > 0.0,
        "initial data must be positive somewhere on the grid",
        hmax0,
    )?;

    let mut series = TimeSeries {
        meta: RunMeta {
            c,
            scheme: String::from(cfg.scheme.name()),
            n: cfg.n,
            dt: cfg.dt,
            ic: ic.describe(),
        },
        records: Vec::new(),
        snapshots: Vec::new(),
        stop: None,
    };
    series.records.push(record(&state));
    series.snapshots.push(snapshot(&state));

    let stop = cfg.stop;
    let time_eps = 1e-9 * cfg.dt;
    let reason = loop {
        if state.t >= stop.max_time - time_eps {
            break StopReason::MaxTime;
        }
        if state.half_width() < stop.min_halfwidth_frac * xf0 {
            break StopReason::MinHalfWidth;
        }
        if state.h_max() < stop.min_height_frac * hmax0 {
            break StopReason::MinHeight;
        }
        if stop.max_steps.is_some_and(|m| state.step >= m) {
            break StopReason::MaxSteps;
        }
        let mut next = match step(&state, c, cfg, &grid) {
            Ok(next) => next,
            Err(StepError::StabilityLimit { .. }) if cfg.scheme == Scheme::Explicit => {
                break StopReason::StabilityLimit;
            }
            Err(error) => {
                finalize(&mut series, &state);
                return Err(RunError::Aborted(alloc::boxed::Box::new(RunAborted {
                    error,
                    last_state: state,
                    series,
                })));
            }
        };
        next.t = t_start + next.step as f64 * cfg.dt;
        state = next;
        if state.step % cfg.record_every == 0 {
            series.records.push(record(&state));
        }
        if cfg.snapshot_every > 0 && state.step % cfg.snapshot_every == 0 {
            series.snapshots.push(snapshot(&state));
        }
    };
    finalize(&mut series, &state);
    series.stop = Some(reason);
    Ok(series)
}

fn finalize(series: &mut TimeSeries, state: &SimState) {
    if series.records.last().map(|r| r.t) != Some(state.t) {
        series.records.push(record(state));
    }
    if series.snapshots.last().map(|s| s.step) != Some(state.step) {
        series.snapshots.push(snapshot(state));
    }
}
