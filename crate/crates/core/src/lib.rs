//! Self-similar intermediate asymptotics of the filtration-absorption equation
//!
//! ```text
//! ∂ₜh = h ∂²ₓₓh − (c − 1)(∂ₓh)²
//! ```
//!
//! which models the groundwater level `h` in a fissurized porous rock that
//! absorbs part of the draining fluid. For `c > 3/2` a compactly supported
//! groundwater dome collapses in finite time `t₀`, and generic compactly
//! supported data approach the parabolic similarity profile
//!
//! ```text
//! h = B²μ (t₀ − t)^(2μ−1) · (1 − ξ²) / (2(c − 1)),   ξ = (x − x₀) / (B (t₀ − t)^μ),
//! μ = (c − 1) / (2c − 3).
//! ```
//!
//! The crate is split by concern:
//!
//! - [`physmap`] reduces rock/fluid parameters to the single coefficient `c`.
//! - [`selfsimilar`] evaluates the closed-form solution family in every regime.
//! - [`eigenproblem`] recovers `μ` and the profile numerically, without the
//!   closed form.
//! - [`pde_solver`] integrates the moving-boundary problem on the fixed domain
//!   `ξ ∈ [−1, 1]` with explicit and implicit finite differences.
//! - [`diagnostics`] extracts `(t₀, B, μ)` from simulated time series and
//!   measures convergence to the similarity profile.
//!
//! The crate is `no_std` and only needs `alloc`; file formats, configuration
//! and the command line live in the `collapse-sim` companion crate.

#![no_std]
#![deny(missing_docs)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod diagnostics;
pub mod eigenproblem;
mod error;
mod math;
pub mod pde_solver;
pub mod physmap;
pub mod selfsimilar;
pub mod series;
mod tridiag;

pub use error::DomainError;
pub use series::{Record, RunMeta, Snapshot, StopReason, TimeSeries};
pub use tridiag::{solve_tridiagonal, TridiagonalError};
