use super::kernel::{tangent_block, tangent_frame, tangent_matrix};
use super::two_scatter::{local_patch_psi, psi_two_scatter, TwoScatterOptions};
use super::PsiSample;
use crate::error::{CasimirError, Result};
use crate::geometry::{SurfaceMesh, V3};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverPath {
    /// Rings when the mesh carries an azimuthal layout, dense otherwise.
    Auto,
    Dense,
    Rings,
}

/// How the short-distance part of the same-sheet kernel is handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalTreatment {
    /// Zero self-blocks, nothing added.
    Bare,
    /// Zero self-blocks plus the analytic two-scattering contribution of each
    /// panel's own curved patch.
    SelfPatch,
    /// Ψ = Ψ⁽²⁾ + Ψ⁽≥⁴⁾: the one-round-trip term from the regularised
    /// two-scattering sum, the rest from ln det(1 − K²) + Tr K² on the mesh.
    /// The two-scattering term carries all of the short-distance structure at
    /// large y, which the panel kernel cannot resolve once y·h ≳ 1.
    Split,
}

#[derive(Debug, Clone, Copy)]
pub struct FullOptions {
    pub interaction_only: bool,
    pub path: SolverPath,
    pub local: LocalTreatment,
    pub check_radius: bool,
}

impl Default for FullOptions {
    fn default() -> Self {
        FullOptions {
            interaction_only: false,
            path: SolverPath::Auto,
            local: LocalTreatment::Split,
            check_radius: true,
        }
    }
}

fn use_rings(mesh: &SurfaceMesh, path: SolverPath) -> Result<bool> {
    match (path, mesh.rings) {
        (SolverPath::Dense, _) => Ok(false),
        (SolverPath::Rings, None) => Err(CasimirError::Mesh("mesh has no ring layout".into())),
        (SolverPath::Rings, Some(_)) | (SolverPath::Auto, Some(_)) => Ok(true),
        (SolverPath::Auto, None) => Ok(false),
    }
}

/// ln det(1 − K²) and Tr K² of one kernel.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LogDet {
    pub log_det: f64,
    pub trace_sq: f64,
}

impl std::ops::Sub for LogDet {
    type Output = LogDet;
    fn sub(self, o: LogDet) -> LogDet {
        LogDet { log_det: self.log_det - o.log_det, trace_sq: self.trace_sq - o.trace_sq }
    }
}

/// D(y) = ln det(1 − K²) with Tr K², or their inter-sheet parts D − Σ D_sheet.
pub fn log_det(mesh: &SurfaceMesh, y: f64, opts: &FullOptions) -> Result<LogDet> {
    if !(y > 0.0) {
        return Err(CasimirError::Domain(format!("y must be > 0, got {y}")));
    }
    let rings = use_rings(mesh, opts.path)?;
    let one = |sheet: Option<usize>| -> Result<LogDet> {
        if rings {
            log_det_rings(mesh, y, sheet, opts.check_radius)
        } else {
            log_det_dense(mesh, y, sheet, opts.check_radius)
        }
    };
    let mut d = one(None)?;
    if opts.interaction_only {
        for s in 0..mesh.sheets.len() {
            d = d - one(Some(s))?;
        }
    }
    Ok(d)
}

fn log_det_dense(mesh: &SurfaceMesh, y: f64, sheet: Option<usize>, check: bool) -> Result<LogDet> {
    let a = tangent_matrix(mesh, y, sheet);
    let n = a.nrows();
    if n == 0 {
        return Ok(LogDet::default());
    }
    if check {
        let rho = spectral_radius_real(&a);
        if rho >= 1.0 {
            return Err(CasimirError::SpectralRadius { y, radius: rho });
        }
    }
    let trace_sq = a.component_mul(&a.transpose()).sum();
    let id = DMatrix::<f64>::identity(n, n);
    let dm = (&id - &a).lu().determinant();
    let dp = (&id + &a).lu().determinant();
    if !(dm > 0.0 && dp > 0.0) {
        // a real eigenvalue of K crossed ±1
        return Err(CasimirError::SpectralRadius { y, radius: 1.0 });
    }
    Ok(LogDet { log_det: dm.ln() + dp.ln(), trace_sq })
}

/// Ring-major meshes are invariant under rotation by 2π/nφ, so the kernel is block
/// circulant and det(1 − K²) factorises over azimuthal orders.
fn log_det_rings(mesh: &SurfaceMesh, y: f64, sheet: Option<usize>, check: bool) -> Result<LogDet> {
    let lay = mesh.rings.ok_or_else(|| CasimirError::Mesh("mesh has no ring layout".into()))?;
    let m = lay.nphi;
    let ring_ids: Vec<usize> =
        (0..lay.rings).filter(|&i| sheet.is_none_or(|s| mesh.panels[i * m].sheet == s)).collect();
    let nr = ring_ids.len();
    if nr == 0 {
        return Ok(LogDet::default());
    }
    let dim = 2 * nr;
    let frames: Vec<(V3, V3)> = mesh.panels.iter().map(tangent_frame).collect();
    // rows[i][(p·dim + col)·m + l] = A[(ring_i, 0, p), (ring_k, l, q)] with col = 2k + q
    let rows: Vec<Vec<f64>> = ring_ids
        .par_iter()
        .map(|&ri| {
            let a = &mesh.panels[ri * m];
            let fa = &frames[ri * m];
            let mut out = vec![0.0; 2 * dim * m];
            for (kk, &rk) in ring_ids.iter().enumerate() {
                for l in 0..m {
                    let bi = rk * m + l;
                    if bi == ri * m {
                        continue;
                    }
                    let blk = tangent_block(a, fa, &mesh.panels[bi], &frames[bi], y);
                    for p in 0..2 {
                        for q in 0..2 {
                            out[(p * dim + 2 * kk + q) * m + l] = blk[(p, q)];
                        }
                    }
                }
            }
            out
        })
        .collect();
    let half = m / 2 + 1;
    let mut bp: Vec<DMatrix<Complex64>> = (0..half).map(|_| DMatrix::zeros(dim, dim)).collect();
    let fft = FftPlanner::<f64>::new().plan_fft_forward(m);
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    for (ii, row) in rows.iter().enumerate() {
        for p in 0..2 {
            for col in 0..dim {
                let src = &row[(p * dim + col) * m..(p * dim + col + 1) * m];
                for (b, &s) in buf.iter_mut().zip(src) {
                    *b = Complex64::new(s, 0.0);
                }
                fft.process(&mut buf);
                for (k, mat) in bp.iter_mut().enumerate() {
                    mat[(2 * ii + p, col)] = buf[k];
                }
            }
        }
    }
    let id = DMatrix::<Complex64>::identity(dim, dim);
    let mut out = LogDet::default();
    for (k, b) in bp.iter().enumerate() {
        if check {
            let rho = spectral_radius_complex(b);
            if rho >= 1.0 {
                return Err(CasimirError::SpectralRadius { y, radius: rho });
            }
        }
        // orders k and m − k are complex conjugates
        let mult = if k == 0 || (m % 2 == 0 && k == m / 2) { 1.0 } else { 2.0 };
        let b2 = b * b;
        out.trace_sq += mult * b2.trace().re;
        out.log_det += mult * (&id - b2).lu().determinant().norm().ln();
    }
    Ok(out)
}

const POWER_STEPS: usize = 60;

fn start_vector(n: usize) -> Vec<f64> {
    // deterministic, not aligned with any mesh symmetry
    (0..n).map(|i| 1.0 + ((i as f64 + 1.0) * 0.618_033_988_749_895).fract()).collect()
}

fn spectral_radius_real(a: &DMatrix<f64>) -> f64 {
    let mut x = DVector::from_vec(start_vector(a.nrows()));
    x /= x.norm();
    let mut logs = Vec::with_capacity(POWER_STEPS);
    for _ in 0..POWER_STEPS {
        x = a * &x;
        let nx = x.norm();
        if nx == 0.0 {
            return 0.0;
        }
        logs.push(nx.ln());
        x /= nx;
    }
    tail_rate(&logs)
}

fn spectral_radius_complex(a: &DMatrix<Complex64>) -> f64 {
    let v: Vec<Complex64> = start_vector(a.nrows()).into_iter().map(|t| Complex64::new(t, 0.3 * t)).collect();
    let mut x = DVector::from_vec(v);
    let n0 = x.norm();
    x /= Complex64::new(n0, 0.0);
    let mut logs = Vec::with_capacity(POWER_STEPS);
    for _ in 0..POWER_STEPS {
        x = a * &x;
        let nx = x.norm();
        if nx == 0.0 {
            return 0.0;
        }
        logs.push(nx.ln());
        x /= Complex64::new(nx, 0.0);
    }
    tail_rate(&logs)
}

/// Mean growth rate over the last half of the iteration; robust against
/// oscillation from complex or ± paired dominant eigenvalues.
fn tail_rate(logs: &[f64]) -> f64 {
    let h = logs.len() / 2;
    (logs[h..].iter().sum::<f64>() / (logs.len() - h) as f64).exp()
}

/// Estimated spectral radius of the tangent kernel at y (dense power iteration).
pub fn spectral_radius(mesh: &SurfaceMesh, y: f64) -> f64 {
    spectral_radius_real(&tangent_matrix(mesh, y, None))
}

/// Ψ(y) = −(y/4) dD/dy by a five-point difference with step y/50; the error is the
/// change on halving the step.
pub fn psi_full(mesh: &SurfaceMesh, y: f64, opts: &FullOptions) -> Result<PsiSample> {
    if !(y > 0.0 && y.is_finite()) {
        return Err(CasimirError::Domain(format!("y must be > 0, got {y}")));
    }
    let split = opts.local == LocalTreatment::Split;
    let d = |t: f64| -> Result<f64> {
        let r = log_det(mesh, t, opts)?;
        Ok(if split { r.log_det + r.trace_sq } else { r.log_det })
    };
    let h = y / 50.0;
    let (m2, m1, mh, ph, p1, p2) =
        (d(y - 2.0 * h)?, d(y - h)?, d(y - 0.5 * h)?, d(y + 0.5 * h)?, d(y + h)?, d(y + 2.0 * h)?);
    let coarse = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
    let fine = (m1 - 8.0 * mh + 8.0 * ph - p1) / (6.0 * h);
    let mut psi = -0.25 * y * fine;
    match opts.local {
        LocalTreatment::Bare => {}
        LocalTreatment::SelfPatch => {
            if !opts.interaction_only {
                psi += mesh.panels.iter().map(|p| local_patch_psi(p, p.area, y)).sum::<f64>();
            }
        }
        LocalTreatment::Split => {
            let o = if opts.interaction_only { TwoScatterOptions::interaction() } else { TwoScatterOptions::default() };
            psi += psi_two_scatter(mesh, y, &o)?;
        }
    }
    Ok(PsiSample { y, psi, error: 0.25 * y * (fine - coarse).abs() })
}

/// Two-scattering truncation of the full solver, ln det(1 − K²) ≈ −Tr K², by the
/// same finite difference as [`psi_full`].
pub fn psi_full_truncated(mesh: &SurfaceMesh, y: f64, interaction_only: bool) -> Result<PsiSample> {
    if !(y > 0.0) {
        return Err(CasimirError::Domain(format!("y must be > 0, got {y}")));
    }
    let opts =
        FullOptions { interaction_only, path: SolverPath::Dense, local: LocalTreatment::Bare, check_radius: false };
    let tr = |t: f64| -> Result<f64> {
        let a = tangent_matrix(mesh, t, None);
        let n = mesh.len();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if opts.interaction_only && mesh.panels[i].sheet == mesh.panels[j].sheet {
                    continue;
                }
                for p in 0..2 {
                    for q in 0..2 {
                        s += a[(2 * i + p, 2 * j + q)] * a[(2 * j + q, 2 * i + p)];
                    }
                }
            }
        }
        Ok(-s)
    };
    let h = y / 50.0;
    let (m2, m1, mh, ph, p1, p2) =
        (tr(y - 2.0 * h)?, tr(y - h)?, tr(y - 0.5 * h)?, tr(y + 0.5 * h)?, tr(y + h)?, tr(y + 2.0 * h)?);
    let coarse = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
    let fine = (m1 - 8.0 * mh + 8.0 * ph - p1) / (6.0 * h);
    // Richardson on the h⁴ error term
    let deriv = (16.0 * fine - coarse) / 15.0;
    Ok(PsiSample { y, psi: -0.25 * y * deriv, error: 0.25 * y * (fine - coarse).abs() / 15.0 })
}
