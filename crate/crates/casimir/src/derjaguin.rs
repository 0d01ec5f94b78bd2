//! Proximity-force (Derjaguin) sphere–plane results built from the plate free energy.

use crate::error::{CasimirError, Result};
use crate::plates::{plate_total_free_energy, PlateConfig};
use crate::quad::integrate_to_inf;
use crate::scattering::energy_two_scatter_sphere_plane;
use crate::specialfn::{ZETA3, ZETA4};
use crate::units::{alpha_of, PhysicalScale};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePlaneConfig {
    pub radius: f64,
    pub gap: f64,
}

impl SpherePlaneConfig {
    pub fn new(radius: f64, gap: f64) -> Result<Self> {
        if !(radius > 0.0 && gap > 0.0 && radius.is_finite() && gap.is_finite()) {
            return Err(CasimirError::Domain(format!("sphere radius and gap must be > 0 (got {radius}, {gap})")));
        }
        Ok(SpherePlaneConfig { radius, gap })
    }

    /// Proximity force needs L ≪ R; false past L/R = 0.1.
    pub fn is_valid(&self) -> bool {
        self.gap / self.radius < 0.1
    }
}

fn per_area(l: f64, t: f64, scale: &PhysicalScale) -> Result<f64> {
    Ok(plate_total_free_energy(&PlateConfig { area: 1.0, gap: l }, t, scale)?.total)
}

/// X = 2πR F(L)/𝒜 in N.
pub fn sphere_plane_force(cfg: &SpherePlaneConfig, t: f64, scale: &PhysicalScale) -> Result<f64> {
    Ok(2.0 * PI * cfg.radius * per_area(cfg.gap, t, scale)?)
}

/// Low-temperature expansion −(π³/360)(Rħc/L³){1 + 720[ζ(3)/2α³ − 2ζ(4)/α⁴]}; needs α ≥ 10.
pub fn sphere_plane_force_low_t(cfg: &SpherePlaneConfig, t: f64, scale: &PhysicalScale) -> Result<f64> {
    let lead = -PI.powi(3) / 360.0 * cfg.radius * scale.hbar_c / cfg.gap.powi(3);
    if t == 0.0 {
        return Ok(lead);
    }
    let a = alpha_of(cfg.gap, t, scale)?.alpha;
    if a < 10.0 {
        return Err(CasimirError::Regime(format!("alpha = {a:.3} < 10; use sphere_plane_force")));
    }
    Ok(lead * (1.0 + thermal_bracket(a)))
}

/// 720[ζ(3)/2α³ − 2ζ(4)/α⁴], the relative thermal correction to the force.
pub fn thermal_bracket(alpha: f64) -> f64 {
    720.0 * (ZETA3 / (2.0 * alpha.powi(3)) - 2.0 * ZETA4 / alpha.powi(4))
}

/// Sphere–plane energy 2πR∫_L^∞ F(l)/𝒜 dl (J).
pub fn sphere_plane_energy(cfg: &SpherePlaneConfig, t: f64, scale: &PhysicalScale) -> Result<f64> {
    if t == 0.0 {
        return Ok(-PI.powi(3) * scale.hbar_c * cfg.radius / (720.0 * cfg.gap * cfg.gap));
    }
    let l = cfg.gap;
    let f = |x: f64| per_area(x, t, scale).unwrap_or(f64::NAN);
    let r = integrate_to_inf(f, l, 0.0, 1e-12);
    if !r.value.is_finite() {
        return Err(CasimirError::NonConvergent("plate free energy integral".into()));
    }
    Ok(2.0 * PI * cfg.radius * r.value)
}

/// Linear sensitivity of the T = 0 force to an uncertainty in R.
pub fn force_uncertainty_from_radius(cfg: &SpherePlaneConfig, d_radius: f64, scale: &PhysicalScale) -> Result<f64> {
    Ok((sphere_plane_force(cfg, 0.0, scale)? / cfg.radius * d_radius).abs())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerjaguinComparison {
    /// Proximity-force energy from the exact plate result, −π³ħcR/720L² (J).
    pub derjaguin_energy: f64,
    /// Closed-form two-scattering energy of sphere and plane (J).
    pub two_scatter_energy: f64,
    /// −ħcR/8πL², the proximity reduction of the two-scattering plate result.
    pub leading: f64,
    /// ħc/8πL.
    pub correction: f64,
    /// |correction/leading| = L/R.
    pub correction_ratio: f64,
    /// two_scatter_energy / derjaguin_energy, → 90/π⁴ as L/R → 0.
    pub ratio: f64,
}

pub fn derjaguin_vs_two_scatter(cfg: &SpherePlaneConfig, scale: &PhysicalScale) -> Result<DerjaguinComparison> {
    let (r, l) = (cfg.radius, cfg.gap);
    let derjaguin_energy = sphere_plane_energy(cfg, 0.0, scale)?;
    let two = energy_two_scatter_sphere_plane(r, l)? * scale.hbar_c;
    let leading = -scale.hbar_c * r / (8.0 * PI * l * l);
    let correction = scale.hbar_c / (8.0 * PI * l);
    Ok(DerjaguinComparison {
        derjaguin_energy,
        two_scatter_energy: two,
        leading,
        correction,
        correction_ratio: (correction / leading).abs(),
        ratio: two / derjaguin_energy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_temperature_closed_form() {
        let s = PhysicalScale::default();
        let c = SpherePlaneConfig::new(98.0e-6, 200e-9).unwrap();
        let f = sphere_plane_force(&c, 0.0, &s).unwrap();
        let expect = -PI.powi(3) / 360.0 * c.radius * s.hbar_c / c.gap.powi(3);
        assert!((f / expect - 1.0).abs() < 1e-14);
        assert_eq!(sphere_plane_force_low_t(&c, 0.0, &s).unwrap(), expect);
    }

    #[test]
    fn low_t_needs_large_alpha() {
        let s = PhysicalScale::default();
        let c = SpherePlaneConfig::new(1e-4, 5e-6).unwrap();
        assert!(matches!(sphere_plane_force_low_t(&c, 300.0, &s), Err(CasimirError::Regime(_))));
        assert!(!c.is_valid() || c.gap / c.radius < 0.1);
        assert!(SpherePlaneConfig::new(0.0, 1.0).is_err());
    }
}
