use super::SurfaceMesh;
use crate::error::{CasimirError, Result};
use std::f64::consts::PI;

/// A straight edge of dihedral angle θ (θ = 2π is the free edge of a foil).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WedgeSpec {
    pub theta: f64,
    pub length: f64,
}

impl WedgeSpec {
    pub fn new(theta: f64, length: f64) -> Result<Self> {
        if !(theta > 0.0 && theta <= 2.0 * PI) || !(length >= 0.0) {
            return Err(CasimirError::Domain(format!("wedge angle must lie in (0, 2π], got {theta}")));
        }
        Ok(WedgeSpec { theta, length })
    }
}

/// Smoothed mode-density terms, kept separate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeylTerms {
    pub volume: f64,
    pub curvature: f64,
    pub wedge: f64,
}

impl WeylTerms {
    pub fn total(&self) -> f64 {
        self.volume + self.curvature + self.wedge
    }
}

/// Per unit edge length, (1/12π²)(π − θ)(π − 5θ)/θ for one region of opening θ.
pub fn wedge_region_density(theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta <= 2.0 * PI) {
        return Err(CasimirError::Domain(format!("wedge angle must lie in (0, 2π], got {theta}")));
    }
    Ok((PI - theta) * (PI - 5.0 * theta) / (12.0 * PI * PI * theta))
}

/// Sum of the region terms around an edge shared by several regions
/// (a foil edge is `[2π]`, a honeycomb junction `[2π/3; 3]`).
pub fn junction_density(thetas: &[f64]) -> Result<f64> {
    let total: f64 = thetas.iter().sum();
    if thetas.is_empty() || (total - 2.0 * PI).abs() > 1e-9 {
        return Err(CasimirError::Domain("region angles around an edge must add up to 2π".into()));
    }
    thetas.iter().map(|&t| wedge_region_density(t)).sum()
}

/// Both sides of a fold of angle θ: (1/6π)(π − θ)²/(θ(2π − θ)).
pub fn two_sided_wedge_density(theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < 2.0 * PI) {
        return Err(CasimirError::Domain(format!("fold angle must lie in (0, 2π), got {theta}")));
    }
    Ok((PI - theta).powi(2) / (6.0 * PI * theta * (2.0 * PI - theta)))
}

pub fn weyl_density(q: f64, volume: f64, mesh: &SurfaceMesh, wedges: &[WedgeSpec]) -> Result<WeylTerms> {
    if !(q > 0.0) {
        return Err(CasimirError::Domain(format!("q must be > 0, got {q}")));
    }
    let mean: f64 = mesh.panels.iter().map(|p| p.mean_curvature() * p.area).sum();
    let mut wedge = 0.0;
    for w in wedges {
        if !(w.theta > 0.0) {
            return Err(CasimirError::Domain("wedge angle must be > 0".into()));
        }
        wedge += w.length * wedge_region_density(w.theta)?;
    }
    Ok(WeylTerms { volume: volume * q * q / (PI * PI), curvature: -2.0 * mean / (3.0 * PI * PI), wedge })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_wedge_vanishes() {
        assert_eq!(wedge_region_density(PI).unwrap(), 0.0);
        assert_eq!(two_sided_wedge_density(PI).unwrap(), 0.0);
    }

    #[test]
    fn right_angle_fold() {
        let v = two_sided_wedge_density(PI / 2.0).unwrap();
        assert!((v - 1.0 / (18.0 * PI)).abs() < 1e-16);
    }

    #[test]
    fn endpoints_rejected() {
        assert!(two_sided_wedge_density(0.0).is_err());
        assert!(two_sided_wedge_density(2.0 * PI).is_err());
        assert!(wedge_region_density(0.0).is_err());
        assert!(junction_density(&[PI, PI / 2.0]).is_err());
    }
}
