use super::cache::{geometry_hash, CacheRead, ProfileCache};
use super::full::{psi_full, FullOptions};
use super::two_scatter::{psi_two_scatter, TwoScatterOptions};
use super::Method;
use crate::error::{CasimirError, Result};
use crate::geometry::{psi_infinity, psi_zero, SurfaceMesh};
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

/// Monotone piecewise-cubic Hermite interpolant (Fritsch–Carlson slopes).
#[derive(Debug, Clone)]
struct Pchip {
    x: Vec<f64>,
    v: Vec<f64>,
    d: Vec<f64>,
}

fn end_slope(h0: f64, h1: f64, m0: f64, m1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    if d.signum() != m0.signum() {
        0.0
    } else if m0.signum() != m1.signum() && d.abs() > 3.0 * m0.abs() {
        3.0 * m0
    } else {
        d
    }
}

impl Pchip {
    fn new(x: Vec<f64>, v: Vec<f64>) -> Self {
        let n = x.len();
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let m: Vec<f64> = (0..n - 1).map(|i| (v[i + 1] - v[i]) / h[i]).collect();
        let mut d = vec![0.0; n];
        if n == 2 {
            d[0] = m[0];
            d[1] = m[0];
        } else {
            for i in 1..n - 1 {
                if m[i - 1] * m[i] > 0.0 {
                    let w1 = 2.0 * h[i] + h[i - 1];
                    let w2 = h[i] + 2.0 * h[i - 1];
                    d[i] = (w1 + w2) / (w1 / m[i - 1] + w2 / m[i]);
                }
            }
            d[0] = end_slope(h[0], h[1], m[0], m[1]);
            d[n - 1] = end_slope(h[n - 2], h[n - 3], m[n - 2], m[n - 3]);
        }
        Pchip { x, v, d }
    }

    fn locate(&self, t: f64) -> usize {
        match self.x.binary_search_by(|p| p.total_cmp(&t)) {
            Ok(i) => i.min(self.x.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.x.len() - 2),
        }
    }

    fn eval(&self, t: f64) -> (f64, f64) {
        let i = self.locate(t);
        let h = self.x[i + 1] - self.x[i];
        let s = (t - self.x[i]) / h;
        let (y0, y1, d0, d1) = (self.v[i], self.v[i + 1], self.d[i] * h, self.d[i + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        let val =
            (2.0 * s3 - 3.0 * s2 + 1.0) * y0 + (s3 - 2.0 * s2 + s) * d0 + (-2.0 * s3 + 3.0 * s2) * y1 + (s3 - s2) * d1;
        let der = ((6.0 * s2 - 6.0 * s) * y0
            + (3.0 * s2 - 4.0 * s + 1.0) * d0
            + (-6.0 * s2 + 6.0 * s) * y1
            + (3.0 * s2 - 2.0 * s) * d1)
            / h;
        (val, der)
    }
}

/// Small-y polynomial fit Ψ − Ψ(+0) ≈ Σ_{k=1..4} c_k y^k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallYFit {
    pub coeffs: [f64; 4],
    pub y_fit: f64,
    pub residual: f64,
}

/// Sampled Ψ(y) with its limits. Between samples Ψ is a monotone cubic in ln y;
/// below the first sample it is linear towards Ψ(+0), above the last it approaches
/// Ψ(∞) as 1/y².
#[derive(Debug, Clone)]
pub struct PsiProfile {
    pub samples: Vec<(f64, f64)>,
    pub psi_zero: f64,
    pub psi_inf: f64,
    pub dpsi0: Option<f64>,
    pub d3psi0: Option<f64>,
    pub interaction_only: bool,
    pub method: Method,
    interp: Pchip,
}

impl PsiProfile {
    pub fn new(
        mut samples: Vec<(f64, f64)>,
        psi_zero: f64,
        psi_inf: f64,
        interaction_only: bool,
        method: Method,
    ) -> Result<Self> {
        if samples.len() < 4 {
            return Err(CasimirError::Domain("a profile needs at least 4 samples".into()));
        }
        if samples.iter().any(|&(y, p)| !(y > 0.0 && y.is_finite() && p.is_finite())) {
            return Err(CasimirError::Domain("profile samples must have y > 0 and finite Ψ".into()));
        }
        if interaction_only && (psi_zero != 0.0 || psi_inf != 0.0) {
            return Err(CasimirError::Domain("interaction-only profiles have Ψ(+0) = Ψ(∞) = 0".into()));
        }
        samples.sort_by(|a, b| a.0.total_cmp(&b.0));
        if samples.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(CasimirError::Domain("duplicate y in profile".into()));
        }
        let interp = Pchip::new(samples.iter().map(|s| s.0.ln()).collect(), samples.iter().map(|s| s.1).collect());
        Ok(PsiProfile { samples, psi_zero, psi_inf, dpsi0: None, d3psi0: None, interaction_only, method, interp })
    }

    pub fn from_fn<F: Fn(f64) -> f64>(
        f: F,
        ys: &[f64],
        psi_zero: f64,
        psi_inf: f64,
        interaction_only: bool,
        method: Method,
    ) -> Result<Self> {
        Self::new(ys.iter().map(|&y| (y, f(y))).collect(), psi_zero, psi_inf, interaction_only, method)
    }

    pub fn y_min(&self) -> f64 {
        self.samples[0].0
    }

    pub fn y_max(&self) -> f64 {
        self.samples[self.samples.len() - 1].0
    }

    pub fn eval(&self, y: f64) -> f64 {
        let (y0, p0) = self.samples[0];
        let (y1, p1) = self.samples[self.samples.len() - 1];
        if y <= y0 {
            self.psi_zero + (p0 - self.psi_zero) * y / y0
        } else if y >= y1 {
            self.psi_inf + (p1 - self.psi_inf) * (y1 / y).powi(2)
        } else {
            self.interp.eval(y.ln()).0
        }
    }

    /// dΨ/dy of the interpolant.
    pub fn derivative(&self, y: f64) -> f64 {
        let (y0, p0) = self.samples[0];
        let (y1, p1) = self.samples[self.samples.len() - 1];
        if y <= y0 {
            (p0 - self.psi_zero) / y0
        } else if y >= y1 {
            -2.0 * (p1 - self.psi_inf) * y1 * y1 / (y * y * y)
        } else {
            self.interp.eval(y.ln()).1 / y
        }
    }

    /// Every other sample, keeping both ends; used to estimate interpolation error.
    pub fn coarsened(&self) -> Result<PsiProfile> {
        let n = self.samples.len();
        let mut s: Vec<(f64, f64)> = self.samples.iter().step_by(2).copied().collect();
        if !(n - 1).is_multiple_of(2) {
            s.push(self.samples[n - 1]);
        }
        PsiProfile::new(s, self.psi_zero, self.psi_inf, self.interaction_only, self.method)
    }

    /// Same sample points with Ψ rescaled by `a`.
    pub fn scaled(&self, a: f64) -> Result<PsiProfile> {
        let s = self.samples.iter().map(|&(y, p)| (y, a * p)).collect();
        PsiProfile::new(s, a * self.psi_zero, a * self.psi_inf, self.interaction_only, self.method)
    }

    /// Fit Ψ − Ψ(+0) = Σ c_k y^k (k = 1..4) on the longest run of smallest-y samples
    /// whose maximum residual stays below `tol` of the largest |Ψ − Ψ(+0)| in the window.
    /// The tolerance starts at 1e−6 and relaxes to 1e−4: non-analytic terms such as
    /// y⁴ln y bias the cubic coefficient on wide windows, so narrow ones are preferred.
    pub fn fit_small_y(&self) -> Result<SmallYFit> {
        for tol in [1e-6, 1e-5, 1e-4] {
            if let Some(f) = self.fit_with_tolerance(tol) {
                return Ok(f);
            }
        }
        Err(CasimirError::Fit("no small-y window fits a quartic to 1e-4".into()))
    }

    fn fit_with_tolerance(&self, tol: f64) -> Option<SmallYFit> {
        let mut best: Option<SmallYFit> = None;
        for m in 6..=self.samples.len() {
            let win = &self.samples[..m];
            let ys = win[m - 1].0;
            let a = DMatrix::from_fn(m, 4, |i, k| (win[i].0 / ys).powi(k as i32 + 1));
            let b = DVector::from_fn(m, |i, _| win[i].1 - self.psi_zero);
            let scale = b.amax();
            let svd = a.clone().svd(true, true);
            let c = match svd.solve(&b, 1e-14) {
                Ok(c) => c,
                Err(_) => continue,
            };
            let res = (&a * &c - &b).amax();
            if scale == 0.0 {
                best = Some(SmallYFit { coeffs: [0.0; 4], y_fit: ys, residual: 0.0 });
                continue;
            }
            if res <= tol * scale {
                let coeffs = [c[0] / ys, c[1] / ys.powi(2), c[2] / ys.powi(3), c[3] / ys.powi(4)];
                best = Some(SmallYFit { coeffs, y_fit: ys, residual: res / scale });
            } else if best.is_some() {
                break;
            }
        }
        best
    }

    /// Attach Ψ′(0) and Ψ‴(0) from [`fit_small_y`](Self::fit_small_y).
    pub fn with_fit(mut self) -> Result<Self> {
        let f = self.fit_small_y()?;
        self.dpsi0 = Some(f.coeffs[0]);
        self.d3psi0 = Some(6.0 * f.coeffs[2]);
        Ok(self)
    }
}

/// Logarithmic grid over [1e−3, 40]/ℓ.
pub fn default_y_grid(ell: f64, n: usize) -> Vec<f64> {
    log_grid(1e-3 / ell, 40.0 / ell, n)
}

pub fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    let (la, lb) = (a.ln(), b.ln());
    (0..n).map(|i| (la + (lb - la) * i as f64 / (n - 1).max(1) as f64).exp()).collect()
}

#[derive(Debug, Clone, Copy)]
pub enum Engine {
    Full(FullOptions),
    TwoScatter(TwoScatterOptions),
}

impl Engine {
    pub fn method(&self) -> Method {
        match self {
            Engine::Full(_) => Method::Full,
            Engine::TwoScatter(_) => Method::TwoScatter,
        }
    }

    pub fn interaction_only(&self) -> bool {
        match self {
            Engine::Full(o) => o.interaction_only,
            Engine::TwoScatter(o) => o.interaction_only,
        }
    }

    /// Cache tag: method plus the interaction flag.
    pub fn tag(&self) -> String {
        format!("{}{}", self.method().tag(), if self.interaction_only() { "-int" } else { "" })
    }

    pub fn psi(&self, mesh: &SurfaceMesh, y: f64) -> Result<f64> {
        match self {
            Engine::Full(o) => psi_full(mesh, y, o).map(|s| s.psi),
            Engine::TwoScatter(o) => psi_two_scatter(mesh, y, o),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ProfileStats {
    pub computed: usize,
    pub cached: usize,
    pub cache_warning: bool,
}

/// Sample Ψ on `ys`, reusing cached samples when a cache is given.
pub fn compute_profile(
    mesh: &SurfaceMesh,
    ys: &[f64],
    engine: &Engine,
    cache: Option<&ProfileCache>,
) -> Result<(PsiProfile, ProfileStats)> {
    let mut stats = ProfileStats::default();
    let hash = geometry_hash(mesh, &engine.tag());
    let mut known: Vec<(f64, f64)> = Vec::new();
    if let Some(c) = cache {
        match c.load(hash) {
            CacheRead::Hit(s) => known = s,
            CacheRead::Miss => {}
            CacheRead::Corrupt(_) => stats.cache_warning = true,
        }
    }
    let lookup = |y: f64| known.iter().find(|s| s.0.to_bits() == y.to_bits()).map(|s| s.1);
    let missing: Vec<f64> = ys.iter().copied().filter(|&y| lookup(y).is_none()).collect();
    let fresh: Vec<(f64, f64)> =
        missing.par_iter().map(|&y| engine.psi(mesh, y).map(|p| (y, p))).collect::<Result<Vec<_>>>()?;
    stats.computed = fresh.len();
    stats.cached = ys.len() - fresh.len();
    let samples: Vec<(f64, f64)> =
        ys.iter().map(|&y| (y, lookup(y).unwrap_or_else(|| fresh.iter().find(|s| s.0 == y).unwrap().1))).collect();
    if let (Some(c), false) = (cache, fresh.is_empty()) {
        let mut all = known.clone();
        all.extend_from_slice(&fresh);
        all.sort_by(|a, b| a.0.total_cmp(&b.0));
        all.dedup_by(|a, b| a.0.to_bits() == b.0.to_bits());
        c.store(hash, &all, engine.interaction_only())?;
    }
    let io = engine.interaction_only();
    let (p0, pinf) = match (io, engine) {
        (true, _) => (0.0, 0.0),
        (false, Engine::Full(_)) => (psi_zero(mesh), psi_infinity(mesh)),
        (false, Engine::TwoScatter(_)) => (0.0, psi_infinity(mesh)),
    };
    Ok((PsiProfile::new(samples, p0, pinf, io, engine.method())?, stats))
}
