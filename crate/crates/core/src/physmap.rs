//! Reduction of rock and fluid properties to the canonical equation.
//!
//! Groundwater in a fissurized rock that imbibes part of the draining fluid
//! obeys
//!
//! ```text
//! ∂ₜh = κ / (m(1 − α)) · (h ∂²ₓₓh − (c − 1)(∂ₓh)²),   κ = ρgk/μ_f,   c = α m / m₁.
//! ```
//!
//! Dividing `x` by `√(κ / (m(1 − α)))` leaves the canonical form with the
//! single coefficient `c`. Units are SI and only checked for positivity.

use crate::error::{ensure, DomainError};
use crate::math::sqrt;

/// Conventional standard gravity in m/s², used when none is configured.
pub const STANDARD_GRAVITY: f64 = 9.80665;

/// Physical description of the rock layer and its fluid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RockFluidParams {
    /// Rock permeability `k`, m².
    pub permeability: f64,
    /// Block porosity `m`, in `(0, 1)`.
    pub block_porosity: f64,
    /// Fissure porosity `m₁`, in `(0, m]`.
    pub fissure_porosity: f64,
    /// Fraction `α ∈ [0, 1)` of the draining fluid that the rock absorbs.
    pub absorption_fraction: f64,
    /// Fluid density `ρ`, kg/m³.
    pub density: f64,
    /// Dynamic viscosity `μ_f`, Pa·s.
    pub viscosity: f64,
    /// Gravitational acceleration `g`, m/s².
    pub gravity: f64,
}

impl RockFluidParams {
    /// Checks every field against its admissible range.
    pub fn validate(&self) -> Result<(), DomainError> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        ensure(
            positive(self.permeability),
            "permeability must be positive",
            self.permeability,
        )?;
        ensure(
            positive(self.block_porosity) && self.block_porosity < 1.0,
            "block porosity must lie in (0, 1)",
            self.block_porosity,
        )?;
        ensure(
            positive(self.fissure_porosity),
            "fissure porosity must be positive",
            self.fissure_porosity,
        )?;
        ensure(
            self.fissure_porosity <= self.block_porosity,
            "fissure porosity cannot exceed block porosity",
            self.fissure_porosity,
        )?;
        ensure(
            self.absorption_fraction.is_finite() && self.absorption_fraction >= 0.0,
            "absorption fraction must be nonnegative",
            self.absorption_fraction,
        )?;
        ensure(
            self.absorption_fraction < 1.0,
            "absorption fraction must be below 1",
            self.absorption_fraction,
        )?;
        ensure(
            positive(self.density),
            "density must be positive",
            self.density,
        )?;
        ensure(
            positive(self.viscosity),
            "viscosity must be positive",
            self.viscosity,
        )?;
        ensure(
            positive(self.gravity),
            "gravity must be positive",
            self.gravity,
        )?;
        Ok(())
    }

    /// `κ = ρ g k / μ_f`.
    pub fn kappa(&self) -> f64 {
        self.density * self.gravity * self.permeability / self.viscosity
    }
}

/// The canonical coefficient and the spatial rescaling that produces it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalReduction {
    /// Absorption coefficient `c = α m / m₁`.
    pub c: f64,
    /// `√(κ / (m(1 − α)))`; canonical `x` is physical `x` divided by this.
    pub space_scale: f64,
    /// `κ = ρ g k / μ_f`.
    pub kappa: f64,
}

impl CanonicalReduction {
    /// Maps a physical coordinate to the canonical one.
    pub fn to_canonical_x(&self, x: f64) -> f64 {
        x / self.space_scale
    }

    /// Maps a canonical coordinate back to physical units.
    pub fn to_physical_x(&self, x: f64) -> f64 {
        x * self.space_scale
    }
}

/// Reduces physical parameters to the canonical equation.
pub fn reduce(params: &RockFluidParams) -> Result<CanonicalReduction, DomainError> {
    params.validate()?;
    let kappa = params.kappa();
    let c = params.absorption_fraction * params.block_porosity / params.fissure_porosity;
    let space_scale = sqrt(kappa / (params.block_porosity * (1.0 - params.absorption_fraction)));
    Ok(CanonicalReduction {
        c,
        space_scale,
        kappa,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample(alpha: f64, m: f64, m1: f64) -> RockFluidParams {
        RockFluidParams {
            permeability: 1e-12,
            block_porosity: m,
            fissure_porosity: m1,
            absorption_fraction: alpha,
            density: 1000.0,
            viscosity: 1e-3,
            gravity: STANDARD_GRAVITY,
        }
    }

    #[test]
    fn fissurized_rock_exceeds_unit_absorption() {
        let r = reduce(&sample(0.5, 0.35, 0.1)).unwrap();
        assert!((r.c - 1.75).abs() < 1e-14);
    }

    #[test]
    fn zero_absorption_is_porous_medium() {
        assert_eq!(reduce(&sample(0.0, 0.3, 0.05)).unwrap().c, 0.0);
    }

    #[test]
    fn unfissured_rock_stays_below_one() {
        let r = reduce(&sample(0.6, 0.25, 0.25)).unwrap();
        assert!((r.c - 0.6).abs() < 1e-15);
    }

    #[test]
    fn space_scale_matches_hand_value() {
        let p = sample(0.5, 0.35, 0.1);
        let r = reduce(&p).unwrap();
        let kappa = 1000.0 * STANDARD_GRAVITY * 1e-12 / 1e-3;
        assert!((r.kappa - kappa).abs() < 1e-20);
        let expected = (kappa / (0.35 * 0.5)).sqrt();
        assert!((r.space_scale - expected).abs() < 1e-15 * expected);
        assert!((r.to_physical_x(r.to_canonical_x(3.0)) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_out_of_range_inputs() {
        assert!(reduce(&sample(1.0, 0.3, 0.1)).is_err());
        assert!(reduce(&sample(0.5, 0.3, 0.0)).is_err());
        assert!(reduce(&sample(0.5, 0.3, 0.4)).is_err());
        assert!(reduce(&sample(-0.1, 0.3, 0.1)).is_err());
        let mut p = sample(0.5, 0.3, 0.1);
        p.viscosity = 0.0;
        assert!(reduce(&p).is_err());
        p = sample(0.5, 0.3, 0.1);
        p.gravity = f64::NAN;
        assert!(reduce(&p).is_err());
    }

    proptest! {
        #[test]
        fn equal_porosities_give_c_below_one(alpha in 0.0..0.999f64, m in 0.01..0.99f64) {
            let r = reduce(&sample(alpha, m, m)).unwrap();
            prop_assert!(r.c < 1.0);
            prop_assert!((r.c - alpha).abs() < 1e-15);
        }

        #[test]
        fn porosity_scaling_leaves_c_unchanged(
            alpha in 0.0..0.999f64,
            m in 0.05..0.5f64,
            ratio in 0.01..1.0f64,
            k in 0.1..1.9f64,
        ) {
            let base = reduce(&sample(alpha, m, m * ratio)).unwrap();
            let scaled = reduce(&sample(alpha, m * k, m * ratio * k)).unwrap();
            prop_assert!((base.c - scaled.c).abs() <= 1e-12 * base.c.max(1.0));
        }

        #[test]
        fn strong_absorption_iff_alpha_m_exceeds_m1(
            alpha in 0.0..0.999f64,
            m in 0.01..0.99f64,
            ratio in 0.001..1.0f64,
        ) {
            let m1 = m * ratio;
            let r = reduce(&sample(alpha, m, m1)).unwrap();
            prop_assert_eq!(r.c > 1.0, alpha * m > m1);
        }
    }
}
