//! Thomas algorithm for tridiagonal systems.

use thiserror::Error;

/// The forward sweep met a vanishing pivot.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("singular tridiagonal system: zero pivot at row {row}")]
pub struct TridiagonalError {
    /// Row where elimination broke down.
    pub row: usize,
}

/// Solves `A x = rhs` in place for tridiagonal `A`.
///
/// `lower[i]` multiplies `x[i-1]` in row `i` (so `lower[0]` is ignored),
/// `upper[i]` multiplies `x[i+1]` (so `upper[n-1]` is ignored). `scratch`
/// must hold at least `n` entries.
pub fn solve_tridiagonal(
    lower: &[f64],
    diag: &[f64],
    upper: &[f64],
    rhs: &mut [f64],
    scratch: &mut [f64],
) -> Result<(), TridiagonalError> {
    let n = rhs.len();
    assert!(diag.len() == n && lower.len() == n && upper.len() == n && scratch.len() >= n);
    if n == 0 {
        return Ok(());
    }
    let pivot_ok = |p: f64| p.is_finite() && p.abs() > f64::MIN_POSITIVE;

    let mut pivot = diag[0];
    if !pivot_ok(pivot) {
        return Err(TridiagonalError { row: 0 });
    }
    scratch[0] = upper[0] / pivot;
    rhs[0] /= pivot;
    for i in 1..n {
        pivot = diag[i] - lower[i] * scratch[i - 1];
        if !pivot_ok(pivot) {
            return Err(TridiagonalError { row: i });
        }
        scratch[i] = upper[i] / pivot;
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= scratch[i] * rhs[i + 1];
    }
    Ok(())
}
