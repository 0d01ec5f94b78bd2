use crate::error::{CasimirError, Result};
use std::f64::consts::PI;

pub const HBAR: f64 = 1.054_571_817e-34;
pub const C_LIGHT: f64 = 299_792_458.0;
pub const K_BOLTZMANN: f64 = 1.380_649e-23;

/// SI <-> reduced-unit context. Engines work with ħ = c = k_B = 1 and lengths in metres;
/// energies are converted with `hbar_c` only at the edges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalScale {
    pub hbar_c: f64,
    pub k_b: f64,
    pub c: f64,
}

impl Default for PhysicalScale {
    fn default() -> Self {
        PhysicalScale { hbar_c: HBAR * C_LIGHT, k_b: K_BOLTZMANN, c: C_LIGHT }
    }
}

impl PhysicalScale {
    pub fn new(hbar_c: f64, k_b: f64, c: f64) -> Result<Self> {
        if !(hbar_c > 0.0 && k_b > 0.0 && c > 0.0) {
            return Err(CasimirError::Domain("physical constants must be positive".into()));
        }
        Ok(PhysicalScale { hbar_c, k_b, c })
    }

    /// Temperature as an inverse length, k_B T / ħc.
    pub fn inverse_length(&self, t: f64) -> f64 {
        self.k_b * t / self.hbar_c
    }

    pub fn temperature_of(&self, tau: f64) -> f64 {
        tau * self.hbar_c / self.k_b
    }
}

/// η = 2π k_B T / ħc, the period of the sawtooth in y.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedTemperature {
    pub eta: f64,
}

impl ReducedTemperature {
    pub fn is_zero(&self) -> bool {
        self.eta == 0.0
    }

    /// k_B T / ħc in 1/m.
    pub fn tau(&self) -> f64 {
        self.eta / (2.0 * PI)
    }

    pub fn to_kelvin(&self, scale: &PhysicalScale) -> f64 {
        scale.temperature_of(self.tau())
    }
}

/// α = πħc / (L k_B T).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateAlpha {
    pub alpha: f64,
}

pub fn to_reduced(t: f64, scale: &PhysicalScale) -> Result<ReducedTemperature> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(CasimirError::Domain(format!("temperature must be >= 0, got {t}")));
    }
    Ok(ReducedTemperature { eta: 2.0 * PI * scale.inverse_length(t) })
}

pub fn alpha_of(l: f64, t: f64, scale: &PhysicalScale) -> Result<PlateAlpha> {
    if !(l > 0.0) {
        return Err(CasimirError::Domain(format!("gap must be > 0, got {l}")));
    }
    if t == 0.0 {
        return Err(CasimirError::ZeroTemperature);
    }
    if !(t > 0.0) {
        return Err(CasimirError::Domain(format!("temperature must be >= 0, got {t}")));
    }
    Ok(PlateAlpha { alpha: PI / (l * scale.inverse_length(t)) })
}

/// Temperature at which a gap `l` has the given α.
pub fn temperature_for_alpha(l: f64, alpha: f64, scale: &PhysicalScale) -> f64 {
    scale.temperature_of(PI / (l * alpha))
}
