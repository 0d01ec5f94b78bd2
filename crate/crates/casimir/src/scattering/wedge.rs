use super::cache::ProfileCache;
use super::energy::casimir_free_energy;
use super::profile::{compute_profile, log_grid, Engine};
use super::two_scatter::TwoScatterOptions;
use crate::error::{CasimirError, Result};
use crate::geometry::{make_wedge_pair_with, SurfaceMesh, WedgeMeshParams, V3};
use crate::units::PhysicalScale;
use std::f64::consts::PI;

/// Exact two-wedge interaction −ħc tan²θ/(4π²L) (J).
pub fn wedge_pair_exact(theta: f64, l: f64, scale: &PhysicalScale) -> f64 {
    -scale.hbar_c * theta.tan().powi(2) / (4.0 * PI * PI * l)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WedgeRun {
    pub guard: f64,
    pub size: f64,
    pub panels: usize,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WedgeReport {
    pub theta: f64,
    pub gap: f64,
    pub runs: Vec<WedgeRun>,
    /// Extrapolated to zero guard band and infinite faces (J).
    pub energy: f64,
    pub exact: f64,
    /// Relative shifts supplied by the guard and size extrapolations.
    pub guard_shift: f64,
    pub size_shift: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct WedgeOptions {
    /// Face extent in units of the gap.
    pub size: f64,
    /// Guard band in units of the gap.
    pub guard: f64,
    pub order: usize,
    pub ratio: f64,
    pub n_y: usize,
}

impl Default for WedgeOptions {
    fn default() -> Self {
        WedgeOptions { size: 25.0, guard: 0.05, order: 2, ratio: 2.0, n_y: 40 }
    }
}

/// T = 0 interaction energy of one wedge-pair mesh (J).
pub fn wedge_mesh_energy(
    mesh: &SurfaceMesh,
    l: f64,
    n_y: usize,
    scale: &PhysicalScale,
    cache: Option<&ProfileCache>,
) -> Result<f64> {
    let ys = log_grid(1e-3 / l, 40.0 / l, n_y);
    let (prof, _) = compute_profile(mesh, &ys, &Engine::TwoScatter(TwoScatterOptions::interaction()), cache)?;
    Ok(casimir_free_energy(&prof, 0.0, scale)?.total)
}

fn run(theta: f64, l: f64, guard: f64, size: f64, o: &WedgeOptions, scale: &PhysicalScale) -> Result<WedgeRun> {
    let p = WedgeMeshParams { theta, gap: l, size, guard, order: o.order, ratio: o.ratio };
    let mesh = make_wedge_pair_with(&p)?;
    let energy = wedge_mesh_energy(&mesh, l, o.n_y, scale, None)?;
    Ok(WedgeRun { guard, size, panels: mesh.len(), energy })
}

/// Two perpendicular wedges of half-angle θ with apexes a distance L apart.
/// The truncated meshes err linearly in the guard band g and in 1/S for face
/// extent S, so three runs (g, S), (g/2, S), (g, 2S) extrapolate both away.
pub fn wedge_pair_energy_with(theta: f64, l: f64, scale: &PhysicalScale, o: &WedgeOptions) -> Result<WedgeReport> {
    if !(theta > 0.0 && theta < PI / 2.0) {
        return Err(CasimirError::Domain(format!("wedge half-angle must be in (0, π/2), got {theta}")));
    }
    if !(l > 0.0) {
        return Err(CasimirError::Domain("gap must be > 0".into()));
    }
    let (g, s) = (o.guard * l, o.size * l);
    let base = run(theta, l, g, s, o, scale)?;
    let half_g = run(theta, l, 0.5 * g, s, o, scale)?;
    let double_s = run(theta, l, g, 2.0 * s, o, scale)?;
    let dg = 2.0 * (half_g.energy - base.energy);
    let ds = 2.0 * (double_s.energy - base.energy);
    let energy = base.energy + dg + ds;
    let report = WedgeReport {
        theta,
        gap: l,
        runs: vec![base, half_g, double_s],
        energy,
        exact: wedge_pair_exact(theta, l, scale),
        guard_shift: dg / energy,
        size_shift: ds / energy,
    };
    if !(report.guard_shift.abs() < 0.3 && report.size_shift.abs() < 0.3) {
        return Err(CasimirError::NonConvergent(format!("wedge extrapolation not settled: {report:?}")));
    }
    Ok(report)
}

pub fn wedge_pair_energy(theta: f64, l: f64, scale: &PhysicalScale) -> Result<WedgeReport> {
    wedge_pair_energy_with(theta, l, scale, &WedgeOptions::default())
}

#[derive(Debug, Clone, PartialEq)]
pub struct FarFieldFit {
    pub exponent: f64,
    pub r_squared: f64,
    /// (L, interaction free energy in J)
    pub energies: Vec<(f64, f64)>,
}

/// Interaction free energy of `body2` displaced by L along z from `body1`, fitted
/// as |F| ∝ L^p on a log-log scale.
pub fn far_field_scaling(
    body1: &SurfaceMesh,
    body2: &SurfaceMesh,
    seps: &[f64],
    t: f64,
    scale: &PhysicalScale,
) -> Result<FarFieldFit> {
    if seps.len() < 3 {
        return Err(CasimirError::Domain("need at least 3 separations".into()));
    }
    let mut energies = Vec::with_capacity(seps.len());
    for &l in seps {
        let pair = body1.merged(&body2.translated(V3::new(0.0, 0.0, l)));
        let gap = pair.min_inter_sheet_distance();
        let ys = log_grid(1e-3 / gap, 40.0 / gap, 48);
        let (prof, _) = compute_profile(&pair, &ys, &Engine::TwoScatter(TwoScatterOptions::interaction()), None)?;
        energies.push((l, casimir_free_energy(&prof, t, scale)?.total));
    }
    let pts: Vec<(f64, f64)> = energies.iter().map(|&(l, e)| (l.ln(), e.abs().ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r2 = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    if !(r2 >= 0.999) {
        return Err(CasimirError::Fit(format!("log-log fit R² = {r2:.6} below 0.999")));
    }
    Ok(FarFieldFit { exponent: slope, r_squared: r2, energies })
}
