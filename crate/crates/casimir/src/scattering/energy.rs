use super::profile::{log_grid, PsiProfile};
use super::Method;
use crate::error::{CasimirError, Result};
use crate::plates::{psi_plates, PlateConfig};
use crate::quad::{integrate, integrate_to_inf, QuadResult};
use crate::units::PhysicalScale;
use std::f64::consts::PI;

/// Anything that can be evaluated as Ψ(y) for the free-energy quadratures.
pub trait PsiSource {
    fn psi(&self, y: f64) -> f64;
    fn psi_zero(&self) -> f64;
    fn psi_inf(&self) -> f64;
    /// Ascending y values where quadratures are split.
    fn breakpoints(&self) -> Vec<f64>;
    fn method(&self) -> Method;
    fn check_coverage(&self) -> Result<()> {
        Ok(())
    }
}

impl PsiSource for PsiProfile {
    fn psi(&self, y: f64) -> f64 {
        self.eval(y)
    }
    fn psi_zero(&self) -> f64 {
        self.psi_zero
    }
    fn psi_inf(&self) -> f64 {
        self.psi_inf
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.0).collect()
    }
    fn method(&self) -> Method {
        self.method
    }

    /// The last sample must have settled to within 2% of the profile's range.
    fn check_coverage(&self) -> Result<()> {
        let range = self.samples.iter().map(|s| (s.1 - self.psi_inf).abs()).fold(0.0, f64::max);
        let (y1, p1) = self.samples[self.samples.len() - 1];
        let dev = (p1 - self.psi_inf).abs();
        let tol = 0.02 * range;
        if dev > tol {
            return Err(CasimirError::Coverage { required: y1 * (dev / tol).sqrt() });
        }
        Ok(())
    }
}

/// Ψ given by a closure, for closed forms.
pub struct ClosedFormPsi<F: Fn(f64) -> f64> {
    pub f: F,
    pub psi_zero: f64,
    pub psi_inf: f64,
    /// Characteristic length setting where the breakpoints sit.
    pub length: f64,
    pub method: Method,
}

impl<F: Fn(f64) -> f64> PsiSource for ClosedFormPsi<F> {
    fn psi(&self, y: f64) -> f64 {
        (self.f)(y)
    }
    fn psi_zero(&self) -> f64 {
        self.psi_zero
    }
    fn psi_inf(&self) -> f64 {
        self.psi_inf
    }
    fn breakpoints(&self) -> Vec<f64> {
        log_grid(1e-4 / self.length, 1e2 / self.length, 25)
    }
    fn method(&self) -> Method {
        self.method
    }
}

/// The parallel-plate profile (𝒜y²/2π) ln(1 − e^{−2yL}) as a Ψ source.
pub fn plates_source(cfg: PlateConfig) -> ClosedFormPsi<impl Fn(f64) -> f64> {
    ClosedFormPsi {
        f: move |y: f64| if y > 0.0 { psi_plates(y, &cfg).unwrap_or(0.0) } else { 0.0 },
        psi_zero: 0.0,
        psi_inf: 0.0,
        length: cfg.gap,
        method: Method::PlatesClosedForm,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeEnergyResult {
    pub zero_point: f64,
    pub thermal: f64,
    pub total: f64,
    pub quad_error: f64,
    pub method: Method,
}

const REL: f64 = 1e-11;

fn magnitude<S: PsiSource + ?Sized>(src: &S, bp: &[f64], reference: f64) -> f64 {
    bp.iter().map(|&y| ((src.psi(y) - reference) * y).abs()).fold(0.0, f64::max).max(1e-300)
}

/// (1/π)∫₀^∞ [Ψ − Ψ(∞)] dy, in units of ħc.
fn zero_point<S: PsiSource + ?Sized>(src: &S) -> QuadResult {
    let bp = src.breakpoints();
    let pinf = src.psi_inf();
    let f = |y: f64| src.psi(y) - pinf;
    let abs = 1e-14 * magnitude(src, &bp, pinf);
    let mut acc = integrate(f, 0.0, bp[0], abs, REL);
    for w in bp.windows(2) {
        let r = integrate(f, w[0], w[1], abs, REL);
        acc.value += r.value;
        acc.error += r.error;
    }
    let t = integrate_to_inf(f, bp[bp.len() - 1], abs, REL);
    QuadResult { value: (acc.value + t.value) / PI, error: (acc.error + t.error) / PI }
}

/// Σ_{n≥1} [(n + ½) ln(1 + 1/n) − 1] = ∫_η^∞ g(y)/y dy.
const SAWTOOTH_TAIL: f64 = 0.081_061_466_795_327_26;

fn integrate_split<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, bp: &[f64], abs: f64) -> QuadResult {
    let mut pts = vec![a];
    pts.extend(bp.iter().copied().filter(|&y| y > a && y < b));
    pts.push(b);
    let mut acc = QuadResult { value: 0.0, error: 0.0 };
    for w in pts.windows(2) {
        let r = integrate(f, w[0], w[1], abs, REL);
        acc.value += r.value;
        acc.error += r.error;
    }
    acc
}

const MAX_SEGMENTS: usize = 4_000_000;

/// 2τ∫₀^∞ (dy/y)[Ψ − Ψ(+0)] g(y), in units of ħc.
fn thermal<S: PsiSource + ?Sized>(src: &S, tau: f64) -> Result<QuadResult> {
    let eta = 2.0 * PI * tau;
    let bp = src.breakpoints();
    let (p0, pinf) = (src.psi_zero(), src.psi_inf());
    let abs = 1e-15 * magnitude(src, &bp, pinf).max(magnitude(src, &bp, p0));
    let first = |y: f64| if y > 0.0 { (src.psi(y) - p0) * (0.5 - y / eta) / y } else { 0.0 };
    let mut acc = integrate_split(&first, 0.0, eta, &bp, abs);
    acc.value += (pinf - p0) * SAWTOOTH_TAIL;
    let last_bp = bp[bp.len() - 1];
    let mut quiet = 0;
    for n in 1..=MAX_SEGMENTS {
        let (a, b) = (n as f64 * eta, (n + 1) as f64 * eta);
        let nf = n as f64 + 0.5;
        let f = |y: f64| (src.psi(y) - pinf) * (nf - y / eta) / y;
        let r = integrate_split(&f, a, b, &bp, abs);
        acc.value += r.value;
        acc.error += r.error;
        if a > last_bp && r.value.abs() <= 1e-12 * acc.value.abs().max(abs) {
            quiet += 1;
            if quiet >= 3 {
                return Ok(QuadResult { value: 2.0 * tau * acc.value, error: 2.0 * tau * acc.error });
            }
        } else {
            quiet = 0;
        }
    }
    Err(CasimirError::NonConvergent(format!("sawtooth sum did not settle within {MAX_SEGMENTS} segments")))
}

/// Zero-point and thermal free energy from a Ψ source (J).
pub fn free_energy_of<S: PsiSource + ?Sized>(src: &S, t: f64, scale: &PhysicalScale) -> Result<FreeEnergyResult> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(CasimirError::Domain(format!("temperature must be >= 0, got {t}")));
    }
    src.check_coverage()?;
    let z = zero_point(src);
    let th = if t == 0.0 { QuadResult { value: 0.0, error: 0.0 } } else { thermal(src, scale.inverse_length(t))? };
    let zero_point = z.value * scale.hbar_c;
    let thermal = th.value * scale.hbar_c;
    Ok(FreeEnergyResult {
        zero_point,
        thermal,
        total: zero_point + thermal,
        quad_error: (z.error + th.error) * scale.hbar_c,
        method: src.method(),
    })
}

/// Free energy of a sampled profile; the error includes the change from dropping
/// every other sample.
pub fn casimir_free_energy(profile: &PsiProfile, t: f64, scale: &PhysicalScale) -> Result<FreeEnergyResult> {
    let mut r = free_energy_of(profile, t, scale)?;
    if profile.samples.len() >= 8 {
        let c = free_energy_of(&profile.coarsened()?, t, scale)?;
        r.quad_error += (c.total - r.total).abs();
    }
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowTExpansion {
    /// F(T) − F(0) in J.
    pub free_energy: f64,
    pub dpsi0: f64,
    pub d3psi0: f64,
}

/// F(T) − F(0) ≈ (πT²/3ħc)Ψ′(0) − (π³T⁴/135ħ³c³)Ψ‴(0).
pub fn low_t_expansion(profile: &PsiProfile, t: f64, scale: &PhysicalScale) -> Result<LowTExpansion> {
    let (d1, d3) = match (profile.dpsi0, profile.d3psi0) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            let f = profile.fit_small_y()?;
            (f.coeffs[0], 6.0 * f.coeffs[2])
        }
    };
    let tau = scale.inverse_length(t);
    let f = PI * tau * tau / 3.0 * d1 - PI.powi(3) * tau.powi(4) / 135.0 * d3;
    Ok(LowTExpansion { free_energy: f * scale.hbar_c, dpsi0: d1, d3psi0: d3 })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HighTForm {
    /// Leading high-temperature free energy (J); −𝒞T ln(T/ħc𝒬), or T·𝒞ln𝒬 when 𝒞 = 0.
    pub free_energy: f64,
    pub capacity: f64,
    /// ln 𝒬 with 𝒬 in 1/m; absent when 𝒞 = 0.
    pub ln_q: Option<f64>,
    pub c_ln_q: f64,
}

/// ∫₀^∞ ln y Ψ′(y) dy, integrated by parts around y* so no derivative is needed.
pub fn log_moment<S: PsiSource + ?Sized>(src: &S) -> f64 {
    let bp = src.breakpoints();
    let ys = bp[bp.len() / 2];
    let (p0, pinf) = (src.psi_zero(), src.psi_inf());
    let abs = 1e-14 * magnitude(src, &bp, pinf).max(magnitude(src, &bp, p0)) / ys;
    let lo = |y: f64| if y > 0.0 { (src.psi(y) - p0) / y } else { 0.0 };
    let hi = |y: f64| (src.psi(y) - pinf) / y;
    let below: Vec<f64> = bp.iter().copied().filter(|&y| y < ys).collect();
    let above: Vec<f64> = bp.iter().copied().filter(|&y| y > ys).collect();
    let mut a = integrate(lo, 0.0, below.first().copied().unwrap_or(ys), abs, REL).value;
    let mut pts = below.clone();
    pts.push(ys);
    for w in pts.windows(2) {
        a += integrate(lo, w[0], w[1], abs, REL).value;
    }
    let mut pts = vec![ys];
    pts.extend(above);
    let mut b = 0.0;
    for w in pts.windows(2) {
        b += integrate(hi, w[0], w[1], abs, REL).value;
    }
    b += integrate_to_inf(hi, pts[pts.len() - 1], abs, REL).value;
    ys.ln() * (pinf - p0) - a - b
}

/// High-temperature form F ≈ −𝒞T ln(T/ħc𝒬) with ln𝒬 = −(1/𝒞)∫ ln y Ψ′ dy.
pub fn high_t_form<S: PsiSource + ?Sized>(src: &S, t: f64, scale: &PhysicalScale) -> Result<HighTForm> {
    if !(t > 0.0) {
        return Err(CasimirError::ZeroTemperature);
    }
    src.check_coverage()?;
    let cap = src.psi_zero() - src.psi_inf();
    let moment = log_moment(src);
    let kt = scale.k_b * t;
    let tiny = 1e-12 * (1.0 + src.psi_zero().abs() + src.psi_inf().abs());
    if cap.abs() <= tiny {
        return Ok(HighTForm { free_energy: -kt * moment, capacity: 0.0, ln_q: None, c_ln_q: -moment });
    }
    let ln_q = -moment / cap;
    let tau = scale.inverse_length(t);
    Ok(HighTForm { free_energy: -cap * kt * (tau.ln() - ln_q), capacity: cap, ln_q: Some(ln_q), c_ln_q: -moment })
}
