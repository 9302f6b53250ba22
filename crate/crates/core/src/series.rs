//! Time series produced by a simulation run.

use alloc::string::String;
use alloc::vec::Vec;

/// Per-step record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Record {
    /// Time.
    pub t: f64,
    /// Left interface `x_L`.
    pub x_left: f64,
    /// Right interface `x_R`.
    pub x_right: f64,
    /// Peak level over the grid.
    pub h_max: f64,
}

impl Record {
    /// `x_f = (x_R − x_L)/2`.
    pub fn half_width(&self) -> f64 {
        0.5 * (self.x_right - self.x_left)
    }

    /// `x₀ = (x_R + x_L)/2`.
    pub fn center(&self) -> f64 {
        0.5 * (self.x_right + self.x_left)
    }
}

/// Full profile on the `ξ` grid at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    /// Step index the snapshot was taken at.
    pub step: u64,
    /// Time.
    pub t: f64,
    /// Left interface.
    pub x_left: f64,
    /// Right interface.
    pub x_right: f64,
    /// Level at the uniform nodes `ξ_i = −1 + 2i/N`, `i = 0..=N`.
    pub h: Vec<f64>,
}

impl Snapshot {
    /// Grid coordinate of node `i`.
    pub fn xi(&self, i: usize) -> f64 {
        let n = (self.h.len() - 1) as f64;
        -1.0 + 2.0 * i as f64 / n
    }

    /// `x_f`.
    pub fn half_width(&self) -> f64 {
        0.5 * (self.x_right - self.x_left)
    }

    /// `x₀`.
    pub fn center(&self) -> f64 {
        0.5 * (self.x_right + self.x_left)
    }

    /// Physical coordinate of node `i`.
    pub fn x_phys(&self, i: usize) -> f64 {
        self.center() + self.xi(i) * self.half_width()
    }

    /// Peak level.
    pub fn h_max(&self) -> f64 {
        self.h.iter().copied().fold(0.0, f64::max)
    }
}

/// Why a run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// Reached the configured final time.
    MaxTime,
    /// Half-width fell below the configured fraction of its initial value.
    MinHalfWidth,
    /// Peak level fell below the configured fraction of its initial value.
    MinHeight,
    /// The explicit scheme reached its stability bound.
    StabilityLimit,
    /// Step budget exhausted.
    MaxSteps,
}

/// Description of the run that produced a series.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunMeta {
    /// Absorption coefficient.
    pub c: f64,
    /// `"explicit"` or `"implicit"`.
    pub scheme: String,
    /// Grid subintervals.
    pub n: usize,
    /// Time step.
    pub dt: f64,
    /// Human-readable initial condition tag.
    pub ic: String,
}

/// Records and snapshots of one run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TimeSeries {
    /// Run description.
    pub meta: RunMeta,
    /// Records in increasing time.
    pub records: Vec<Record>,
    /// Profiles taken every `snapshot_every` steps.
    pub snapshots: Vec<Snapshot>,
    /// Why the run ended, if it ended normally.
    pub stop: Option<StopReason>,
}

impl TimeSeries {
    /// Builds a series from bare records.
    pub fn from_records(records: Vec<Record>) -> Self {
        Self {
            records,
            ..Self::default()
        }
    }

    /// Records with `t` inside `[start, end]`.
    pub fn records_in(&self, start: f64, end: f64) -> impl Iterator<Item = &Record> {
        self.records
            .iter()
            .filter(move |r| r.t >= start && r.t <= end)
    }
}
