//! Free-energy density near a curved conducting foil, on either side.

use crate::error::{CasimirError, Result};
use crate::specialfn::{EULER_GAMMA, ZETA3};
use crate::units::PhysicalScale;
use std::f64::consts::PI;

/// A point at distance `d` from the surface where the signed mean curvature
/// radius is `r_mean` (positive on the convex side).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearSurfacePoint {
    pub d: f64,
    pub r_mean: f64,
}

impl NearSurfacePoint {
    pub fn new(d: f64, r_mean: f64) -> Result<Self> {
        if !(d > 0.0 && d.is_finite()) {
            return Err(CasimirError::Domain(format!("distance must be > 0, got {d}")));
        }
        if !(r_mean != 0.0 && !r_mean.is_nan()) {
            return Err(CasimirError::Domain("curvature radius must be non-zero".into()));
        }
        if d >= r_mean.abs() / 10.0 {
            return Err(CasimirError::Regime(format!("d = {d} is not ≪ |R| = {}", r_mean.abs())));
        }
        Ok(NearSurfacePoint { d, r_mean })
    }

    /// The same point seen from the other side of the foil.
    pub fn opposite(&self) -> Self {
        NearSurfacePoint { d: self.d, r_mean: -self.r_mean }
    }
}

/// f = −ħc/(30π²Rd³) + T³ζ(3)/(2πRħ²c²), valid while d·η < 0.1 (J/m³).
pub fn energy_density_low_t(p: &NearSurfacePoint, t: f64, scale: &PhysicalScale) -> Result<f64> {
    let tau = scale.inverse_length(t);
    let eta = 2.0 * PI * tau;
    if !(t >= 0.0) {
        return Err(CasimirError::Domain(format!("temperature must be >= 0, got {t}")));
    }
    if p.d * eta >= 0.1 {
        return Err(CasimirError::Regime(format!("d·η = {:.3} ≥ 0.1; use the high-temperature form", p.d * eta)));
    }
    let bracket = -1.0 / (30.0 * PI * PI * p.d.powi(3)) + tau.powi(3) * ZETA3 / (2.0 * PI);
    Ok(scale.hbar_c * bracket / p.r_mean)
}

/// f = (T/16πRd²)[ln(2dT/ħc) + γ − 1/4], valid once d·η > 10 (J/m³).
pub fn energy_density_high_t(p: &NearSurfacePoint, t: f64, scale: &PhysicalScale) -> Result<f64> {
    let tau = scale.inverse_length(t);
    let eta = 2.0 * PI * tau;
    if !(p.d * eta > 10.0) {
        return Err(CasimirError::Regime(format!("d·η = {:.3} ≤ 10; use the low-temperature form", p.d * eta)));
    }
    let bracket = ((2.0 * p.d * tau).ln() + EULER_GAMMA - 0.25) / (16.0 * PI * p.d * p.d);
    Ok(scale.k_b * t * bracket / p.r_mean)
}

/// Either regime, or a regime error inside the crossover 0.1 ≤ d·η ≤ 10 where
/// no formula is available.
pub fn energy_density(p: &NearSurfacePoint, t: f64, scale: &PhysicalScale) -> Result<f64> {
    let x = p.d * 2.0 * PI * scale.inverse_length(t);
    if x < 0.1 {
        energy_density_low_t(p, t, scale)
    } else if x > 10.0 {
        energy_density_high_t(p, t, scale)
    } else {
        Err(CasimirError::Regime(format!("d·η = {x:.3} lies between the low- and high-temperature limits")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transfer {
    ConcaveToConvex,
    ConvexToConcave,
}

/// Direction of energy transfer across the foil, read off the sign of the density
/// on the convex side.
pub fn transfer_direction(d: f64, t: f64, scale: &PhysicalScale) -> Result<Transfer> {
    let p = NearSurfacePoint::new(d, 1e6 * d)?;
    let f = energy_density(&p, t, scale)?;
    Ok(if f < 0.0 { Transfer::ConcaveToConvex } else { Transfer::ConvexToConcave })
}
