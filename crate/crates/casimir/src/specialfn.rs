use crate::error::{CasimirError, Result};
use crate::quad;
use num_complex::Complex64;
use std::f64::consts::PI;

pub const ZETA3: f64 = 1.202_056_903_159_594_3;
pub const ZETA4: f64 = PI * PI * PI * PI / 90.0;
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// φ(x) = ln(1 − e^{−x}) for x > 0.
pub fn phi(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(CasimirError::Domain(format!("phi needs x > 0, got {x}")));
    }
    Ok(phi_unchecked(x))
}

#[inline]
pub(crate) fn phi_unchecked(x: f64) -> f64 {
    if x < 0.7 {
        (-(-x).exp_m1()).ln()
    } else {
        (-(-x).exp()).ln_1p()
    }
}

/// φ′(x) = 1/(e^x − 1).
pub fn phi_prime(x: f64) -> f64 {
    1.0 / x.exp_m1()
}

const PSI_TAIL_SWITCH: f64 = 40.0;

/// ψ(u) = ∫_u^∞ x φ(x) dx.
pub fn psi_lower(u: f64) -> Result<f64> {
    if !(u >= 0.0) {
        return Err(CasimirError::Domain(format!("psi needs u >= 0, got {u}")));
    }
    Ok(psi_unchecked(u))
}

pub(crate) fn psi_unchecked(u: f64) -> f64 {
    if u > PSI_TAIL_SWITCH {
        return -(u + 1.0) * (-u).exp();
    }
    let f = |x: f64| if x > 0.0 { x * phi_unchecked(x) } else { 0.0 };
    // the integrand is x ln x near 0 and e^{-x} beyond; split at a few natural scales
    let top = u + 60.0;
    let mut pts = vec![u];
    for b in [1.0, 4.0, 12.0, 30.0] {
        if b > u && b < top {
            pts.push(b);
        }
    }
    pts.push(top);
    quad::integrate_pieces(&f, &pts, 1e-300, 1e-13).value
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SawtoothParams {
    pub eta: f64,
}

/// g(y) = 1/2 − y/η + Σ_{n≥1} θ(y − nη); undefined at the teeth.
pub fn sawtooth_g(y: f64, p: SawtoothParams) -> Result<f64> {
    if !(p.eta > 0.0) {
        return Err(CasimirError::Domain("sawtooth needs eta > 0".into()));
    }
    if !(y > 0.0) {
        return Err(CasimirError::Domain(format!("sawtooth needs y > 0, got {y}")));
    }
    let t = y / p.eta;
    if t.fract() == 0.0 {
        return Err(CasimirError::Domain(format!("y = {y} sits on a tooth; split the integral there")));
    }
    Ok(0.5 - t.fract())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutoffKind {
    Exponential,
    Gaussian,
    Rational,
}

/// Regulator χ(x), x = q/Q. Rational poles and residues are in units of Q.
#[derive(Debug, Clone, PartialEq)]
pub struct CutoffFamily {
    pub kind: CutoffKind,
    pub q: f64,
    pub poles: Vec<Complex64>,
    pub residues: Vec<Complex64>,
}

impl CutoffFamily {
    pub fn exponential(q: f64) -> Self {
        CutoffFamily { kind: CutoffKind::Exponential, q, poles: vec![], residues: vec![] }
    }

    pub fn gaussian(q: f64) -> Self {
        CutoffFamily { kind: CutoffKind::Gaussian, q, poles: vec![], residues: vec![] }
    }

    /// Single pole at e^{iπ/4}: χ(x) = 1/(1 + x⁴).
    pub fn rational_default(q: f64) -> Self {
        let mu = Complex64::from_polar(1.0, PI / 4.0);
        Self::rational(q, vec![mu], vec![Complex64::new(0.0, -0.5)]).expect("default poles are valid")
    }

    pub fn rational(q: f64, poles: Vec<Complex64>, residues: Vec<Complex64>) -> Result<Self> {
        if poles.len() != residues.len() || poles.is_empty() {
            return Err(CasimirError::Domain("rational cutoff needs matching poles and residues".into()));
        }
        if poles.iter().any(|m| !(m.re > 0.0 && m.im > 0.0)) {
            return Err(CasimirError::Domain("poles must lie in the open first quadrant".into()));
        }
        let c = CutoffFamily { kind: CutoffKind::Rational, q, poles, residues };
        let (s0, s1) = c.residue_sums();
        if s0.abs() > 1e-12 || (s1 - 1.0).abs() > 1e-12 {
            return Err(CasimirError::Domain(format!(
                "residues violate normalisation: sum Re a = {s0:e}, -2 sum Re(a/mu^2) = {s1}"
            )));
        }
        Ok(c)
    }

    pub fn with_q(&self, q: f64) -> Self {
        CutoffFamily { q, ..self.clone() }
    }

    /// (Σ Re a_i, −2 Σ Re(a_i/μ_i²)), which must be (0, 1).
    pub fn residue_sums(&self) -> (f64, f64) {
        let s0 = self.residues.iter().map(|a| a.re).sum();
        let s1 = -2.0 * self.poles.iter().zip(&self.residues).map(|(m, a)| (a / (m * m)).re).sum::<f64>();
        (s0, s1)
    }

    /// Power of the algebraic tail χ ~ x^{-p}; None when the decay is exponential.
    pub fn algebraic_decay(&self) -> Option<i32> {
        match self.kind {
            CutoffKind::Rational => Some(4),
            _ => None,
        }
    }
}

pub fn cutoff_eval(chi: &CutoffFamily, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(CasimirError::Domain(format!("cutoff needs x >= 0, got {x}")));
    }
    Ok(chi_unchecked(chi, x))
}

pub(crate) fn chi_unchecked(chi: &CutoffFamily, x: f64) -> f64 {
    match chi.kind {
        CutoffKind::Exponential => (-x).exp(),
        CutoffKind::Gaussian => (-x * x).exp(),
        CutoffKind::Rational => {
            let k2 = x * x;
            chi.poles.iter().zip(&chi.residues).map(|(m, a)| 2.0 * (a / (k2 - m * m)).re).sum()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmDelta {
    /// −f′(0)/12 + f‴(0)/720
    pub two_term: f64,
    /// Σ′_{n≥0} f(n) − ∫_0^∞ f, summed numerically
    pub direct: f64,
    pub intervals: usize,
}

/// Σ′ f(n) − ∫ f summed interval by interval as (trapezoid − integral) over
/// `span` = 40·scale intervals, closed with the Euler–Maclaurin remainder
/// −f′(N)/12 + f‴(N)/720 (which also absorbs algebraic tails). The same sum over
/// twice the span must agree, otherwise the series is reported as divergent.
pub fn sum_minus_integral<F: Fn(f64) -> f64>(f: &F, scale: f64) -> Result<(f64, usize)> {
    let n = (40.0 * scale.max(1.0)).ceil() as usize;
    let peak = (0..=n).step_by((n / 400).max(1)).map(|k| f(k as f64).abs()).fold(0.0, f64::max);
    let f_n = f(n as f64).abs();
    let f_2n = f(2.0 * n as f64).abs();
    if !(f_2n.is_finite() && f_2n <= f_n && f_n <= 0.25 * peak.max(1e-300)) {
        return Err(CasimirError::NonConvergent("summand does not decay".into()));
    }
    let partial = |lo: usize, hi: usize| -> f64 {
        let mut acc = 0.0;
        let mut comp = 0.0;
        for k in lo..hi {
            let a = k as f64;
            let t = 0.5 * (f(a) + f(a + 1.0)) - quad::gk15(f, a, a + 1.0).value;
            // Kahan: the terms are O(f'') while the partial sums are O(1)
            let y = t - comp;
            let s = acc + y;
            comp = (s - acc) - y;
            acc = s;
        }
        acc
    };
    let first = partial(0, n);
    let a = first + em_tail(f, n as f64);
    let b = first + partial(n, 2 * n) + em_tail(f, 2.0 * n as f64);
    // round-off of the interval terms grows like ε·peak·√N
    let floor = 4.0 * f64::EPSILON * peak * ((2 * n) as f64).sqrt();
    if !((a - b).abs() <= 1e-8 * b.abs() + floor + 1e-15) {
        return Err(CasimirError::NonConvergent(format!("sum minus integral unsettled: {a} vs {b}")));
    }
    Ok((b, 2 * n))
}

fn em_tail<F: Fn(f64) -> f64>(f: &F, x: f64) -> f64 {
    let h = 1e-3 * x;
    let d1 = (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h);
    let d3 = (-f(x - 2.0 * h) + 2.0 * f(x - h) - 2.0 * f(x + h) + f(x + 2.0 * h)) / (2.0 * h * h * h);
    -d1 / 12.0 + d3 / 720.0
}

/// Two-term Euler–Maclaurin value plus the numerically summed difference.
pub fn euler_maclaurin_delta<F: Fn(f64) -> f64>(f: F, d1_at_0: f64, d3_at_0: f64) -> Result<EmDelta> {
    let far = f(1e6);
    if !far.is_finite() || far.abs() > f(0.0).abs().max(1.0) * 1e3 {
        return Err(CasimirError::NonConvergent("f does not decay".into()));
    }
    let (direct, intervals) = sum_minus_integral(&f, 1.0)?;
    Ok(EmDelta { two_term: -d1_at_0 / 12.0 + d3_at_0 / 720.0, direct, intervals })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// −[u Li₂(e^{−u}) + Li₃(e^{−u})] by direct series; independent of the quadrature path.
    fn psi_polylog(u: f64) -> f64 {
        if u == 0.0 {
            return -ZETA3;
        }
        let z = (-u).exp();
        let (mut li2, mut li3, mut zk) = (0.0, 0.0, 1.0);
        for k in 1..200_000 {
            zk *= z;
            let kf = k as f64;
            li2 += zk / (kf * kf);
            li3 += zk / (kf * kf * kf);
            if zk < 1e-20 {
                break;
            }
        }
        -(u * li2 + li3)
    }

    #[test]
    fn phi_values() {
        assert!((phi(2f64.ln()).unwrap() + 2f64.ln()).abs() < 1e-15);
        assert!((phi(1.0).unwrap() + 0.458_675_145_387_081_8).abs() < 1e-12);
        assert!((phi(20.0).unwrap() / -2.061_153_6e-9 - 1.0).abs() < 1e-6);
        assert!(phi(0.0).is_err());
        assert!(phi(-1.0).is_err());
    }

    #[test]
    fn psi_values() {
        assert!((psi_lower(0.0).unwrap() + ZETA3).abs() < 1e-11);
        for &u in &[0.01, 0.3, 1.0, 2.5, 10.0, 25.0, 39.0] {
            let q = psi_lower(u).unwrap();
            let s = psi_polylog(u);
            assert!((q / s - 1.0).abs() < 1e-10, "u={u}: {q} vs {s}");
        }
        let p10 = psi_lower(10.0).unwrap();
        assert!((p10 / (-11.0 * (-10f64).exp()) - 1.0).abs() < 1e-3);
        // both sides of the asymptotic switch
        let a = psi_lower(40.0).unwrap();
        let b = psi_lower(40.0 + 1e-9).unwrap();
        assert!((a / b - 1.0).abs() < 1e-6);
    }

    #[test]
    fn psi_integral_is_minus_2_zeta4() {
        let r = quad::integrate_pieces(&|u: f64| psi_unchecked(u), &[0.0, 1.0, 5.0, 20.0, 60.0], 1e-14, 1e-11);
        assert!((r.value + PI.powi(4) / 45.0).abs() < 1e-8, "{}", r.value);
    }

    #[test]
    fn sawtooth_values() {
        let p = SawtoothParams { eta: 3.0 };
        assert!(sawtooth_g(1.5, p).unwrap().abs() < 1e-15);
        assert!((sawtooth_g(0.75, p).unwrap() - 0.25).abs() < 1e-15);
        assert!((sawtooth_g(3.9, p).unwrap() - 0.2).abs() < 1e-12);
        assert!(sawtooth_g(3.0, p).is_err());
        let r = quad::integrate(|y| sawtooth_g(y, p).unwrap(), 1e-12, 3.0 - 1e-12, 1e-15, 1e-14);
        assert!(r.value.abs() < 1e-11);
    }

    #[test]
    fn cutoff_families() {
        for c in [CutoffFamily::exponential(1.0), CutoffFamily::gaussian(1.0), CutoffFamily::rational_default(1.0)] {
            assert!((cutoff_eval(&c, 0.0).unwrap() - 1.0).abs() < 1e-15);
        }
        assert!((cutoff_eval(&CutoffFamily::exponential(1.0), 1.0).unwrap() - (-1f64).exp()).abs() < 1e-16);
        let r = CutoffFamily::rational_default(1.0);
        let (s0, s1) = r.residue_sums();
        assert!(s0.abs() < 1e-15 && (s1 - 1.0).abs() < 1e-15);
        let x = 1.7;
        assert!((cutoff_eval(&r, x).unwrap() - 1.0 / (1.0 + x.powi(4))).abs() < 1e-14);
        let bad = CutoffFamily::rational(1.0, vec![Complex64::new(1.0, 1.0)], vec![Complex64::new(1.0, 0.0)]);
        assert!(bad.is_err());
    }

    #[test]
    fn two_pole_rational() {
        // poles at e^{iπ/4} and 2e^{iπ/3}; pick residues i b1, i b2 fixing the normalisation
        let m1 = Complex64::from_polar(1.0, PI / 4.0);
        let m2 = Complex64::from_polar(2.0, PI / 3.0);
        // Σ Re a = 0 with a = c + i d: take a1 = i b1, a2 = i b2 and solve −2 Σ Re(a/μ²) = 1, plus b2 fixed
        let b2 = 0.3;
        let r2 = -2.0 * (Complex64::new(0.0, b2) / (m2 * m2)).re;
        let u1 = -2.0 * (Complex64::new(0.0, 1.0) / (m1 * m1)).re;
        let b1 = (1.0 - r2) / u1;
        let c =
            CutoffFamily::rational(1.0, vec![m1, m2], vec![Complex64::new(0.0, b1), Complex64::new(0.0, b2)]).unwrap();
        assert!((cutoff_eval(&c, 0.0).unwrap() - 1.0).abs() < 1e-13);
        let big = cutoff_eval(&c, 100.0).unwrap() * 1e8;
        let bigger = cutoff_eval(&c, 200.0).unwrap() * 16e8;
        assert!((big / bigger - 1.0).abs() < 1e-2);
    }

    #[test]
    fn euler_maclaurin_exponential() {
        let d = euler_maclaurin_delta(|n: f64| (-n).exp(), -1.0, -1.0).unwrap();
        assert!((d.two_term - (1.0 / 12.0 - 1.0 / 720.0)).abs() < 1e-15);
        let exact = 1.0 / (1f64.exp() - 1.0) + 0.5 - 1.0;
        assert!((d.direct - exact).abs() < 1e-12, "{} {}", d.direct, exact);
        assert!((d.two_term - 0.081_944).abs() < 1e-5);
        assert!((exact - 0.081_977).abs() < 1e-5);
    }

    #[test]
    fn euler_maclaurin_odd_free() {
        let d = euler_maclaurin_delta(|n: f64| (-n * n).exp(), 0.0, 0.0).unwrap();
        assert_eq!(d.two_term, 0.0);
        // Poisson summation: Σ′e^{−n²} − √π/2 = √π Σ_{k≥1} e^{−π²k²}
        let poisson = PI.sqrt() * ((-PI * PI).exp() + (-4.0 * PI * PI).exp());
        assert!((d.direct - poisson).abs() < 1e-12, "{}", d.direct);
        assert!(euler_maclaurin_delta(|n: f64| n, 1.0, 0.0).is_err());
    }

    #[test]
    fn cubic_with_cutoff_tends_to_one_over_120() {
        let mut prev = f64::NAN;
        for &q in &[4.0, 8.0, 16.0] {
            let c = CutoffFamily::exponential(q);
            let (v, _) = sum_minus_integral(&|n: f64| n.powi(3) * chi_unchecked(&c, n / q), q).unwrap();
            let dev = (v - 1.0 / 120.0).abs();
            if prev.is_finite() {
                let ratio = prev / dev;
                assert!((ratio - 4.0).abs() < 0.3, "Q^-2 scaling broken: {ratio}");
            }
            prev = dev;
        }
    }
}
