use crate::error::{CasimirError, Result};
use crate::specialfn::{self, CutoffFamily, ZETA4};
use crate::units::{alpha_of, PhysicalScale};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateConfig {
    pub area: f64,
    pub gap: f64,
}

impl PlateConfig {
    pub fn new(area: f64, gap: f64) -> Result<Self> {
        if !(area > 0.0 && gap > 0.0) {
            return Err(CasimirError::Domain(format!("plate area and gap must be > 0 (got {area}, {gap})")));
        }
        Ok(PlateConfig { area, gap })
    }

    /// The plate formulas assume 𝒜 ≫ L²; this flags configurations where that is doubtful.
    pub fn is_wide(&self) -> bool {
        self.area > 100.0 * self.gap * self.gap
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateFreeEnergy {
    pub zero_point: f64,
    pub thermal: f64,
    pub total: f64,
    pub series_terms_used: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroPointPressure {
    /// Pa
    pub pressure: f64,
    /// pressure·L⁴/ħc, → −π²/240
    pub coefficient: f64,
    /// Σ′g − ∫g at Q₀, 2Q₀, 4Q₀
    pub raw: [f64; 3],
}

/// Regularised zero-point pressure between plates, extrapolated in the cutoff.
/// `chi.q` is the starting cutoff in units of the mode index n.
pub fn plate_zero_point_pressure(l: f64, chi: &CutoffFamily, scale: &PhysicalScale) -> Result<ZeroPointPressure> {
    if !(l > 0.0) {
        return Err(CasimirError::Domain(format!("gap must be > 0, got {l}")));
    }
    if !(chi.q > 0.0) {
        return Err(CasimirError::Domain("cutoff scale must be > 0".into()));
    }
    let mut raw = [0.0; 3];
    for (k, r) in raw.iter_mut().enumerate() {
        let q = chi.q * (1u32 << k) as f64;
        let c = chi.with_q(q);
        let g = |n: f64| n * n * n * specialfn::chi_unchecked(&c, n / q);
        *r = specialfn::sum_minus_integral(&g, q)?.0;
    }
    // deviations run in even powers of 1/Q
    let r1 = (4.0 * raw[1] - raw[0]) / 3.0;
    let r2 = (4.0 * raw[2] - raw[1]) / 3.0;
    let delta = (16.0 * r2 - r1) / 15.0;
    let coefficient = -0.5 * PI * PI * delta;
    Ok(ZeroPointPressure { pressure: coefficient * scale.hbar_c / l.powi(4), coefficient, raw })
}

/// Exact limit −π²ħc/(240 L⁴).
pub fn casimir_pressure(l: f64, scale: &PhysicalScale) -> f64 {
    -PI * PI * scale.hbar_c / (240.0 * l.powi(4))
}

/// Σ′_{n≥0} ψ(αn) + 2ζ(4)/α together with its α-derivative and the number of terms.
fn thermal_sum(alpha: f64) -> (f64, f64, usize) {
    let mut s = 0.5 * specialfn::psi_unchecked(0.0);
    let mut ds = 0.0;
    let mut n = 1usize;
    loop {
        let u = alpha * n as f64;
        let t = specialfn::psi_unchecked(u);
        // d/dα ψ(αn) = −α n² φ(αn)
        let dt = -alpha * (n * n) as f64 * specialfn::phi_unchecked(u);
        s += t;
        ds += dt;
        if t.abs() <= 1e-17 * s.abs() && dt.abs() <= 1e-17 * ds.abs().max(1e-300) || n > 1_000_000 {
            break;
        }
        n += 1;
    }
    (s + 2.0 * ZETA4 / alpha, ds - 2.0 * ZETA4 / (alpha * alpha), n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesPath {
    /// direct summation for α ≥ 2π, duality image otherwise
    Auto,
    Direct,
}

/// 𝒢(α) = [Σ′ψ(αn) + 2ζ(4)/α]/α³ and 𝒢′(α).
pub fn thermal_g(alpha: f64, path: SeriesPath) -> Result<(f64, f64, usize)> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(CasimirError::Domain(format!("alpha must be > 0, got {alpha}")));
    }
    if path == SeriesPath::Auto && alpha < 2.0 * PI {
        // 𝒢(α) = (2π/α)⁴ 𝒢(4π²/α)
        let beta = 4.0 * PI * PI / alpha;
        let (g, dg, n) = thermal_g(beta, SeriesPath::Direct)?;
        let c = (2.0 * PI / alpha).powi(4);
        return Ok((c * g, -4.0 * c * g / alpha - c * dg * beta / alpha, n));
    }
    let (s, ds, n) = thermal_sum(alpha);
    let a3 = alpha.powi(3);
    Ok((s / a3, ds / a3 - 3.0 * s / (a3 * alpha), n))
}

/// Thermal part F̃_T in J.
pub fn plate_thermal_free_energy(cfg: &PlateConfig, t: f64, scale: &PhysicalScale) -> Result<f64> {
    if t == 0.0 {
        return Ok(0.0);
    }
    let a = alpha_of(cfg.gap, t, scale)?.alpha;
    let (g, _, _) = thermal_g(a, SeriesPath::Auto)?;
    Ok(cfg.area * PI * PI * scale.hbar_c / cfg.gap.powi(3) * g)
}

pub fn plate_total_free_energy(cfg: &PlateConfig, t: f64, scale: &PhysicalScale) -> Result<PlateFreeEnergy> {
    let pref = cfg.area * PI * PI * scale.hbar_c / cfg.gap.powi(3);
    let zero_point = -pref / 720.0;
    if t == 0.0 {
        return Ok(PlateFreeEnergy { zero_point, thermal: 0.0, total: zero_point, series_terms_used: 0 });
    }
    let a = alpha_of(cfg.gap, t, scale)?.alpha;
    let (g, _, n) = thermal_g(a, SeriesPath::Auto)?;
    let thermal = pref * g;
    Ok(PlateFreeEnergy { zero_point, thermal, total: zero_point + thermal, series_terms_used: n })
}

/// X = −∂F/∂L in N, from the term-by-term derivative of the series.
pub fn plate_force(cfg: &PlateConfig, t: f64, scale: &PhysicalScale) -> Result<f64> {
    let pref = cfg.area * PI * PI * scale.hbar_c / cfg.gap.powi(4);
    if t == 0.0 {
        return Ok(-pref / 240.0);
    }
    let a = alpha_of(cfg.gap, t, scale)?.alpha;
    let (g, dg, _) = thermal_g(a, SeriesPath::Auto)?;
    Ok(pref * (-1.0 / 240.0 + 3.0 * g + a * dg))
}

/// Ψ(y) = (𝒜y²/2π) ln(1 − e^{−2yL}).
pub fn psi_plates(y: f64, cfg: &PlateConfig) -> Result<f64> {
    if !(y > 0.0) {
        return Err(CasimirError::Domain(format!("y must be > 0, got {y}")));
    }
    Ok(cfg.area * y * y / (2.0 * PI) * specialfn::phi_unchecked(2.0 * y * cfg.gap))
}

/// γ = (1/3)(2π/α)⁴: relative size of the black-body force term at low T.
pub fn blackbody_force_ratio(alpha: f64) -> f64 {
    (2.0 * PI / alpha).powi(4) / 3.0
}
