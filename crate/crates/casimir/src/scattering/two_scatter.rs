use super::kernel::tangent_frame;
use crate::error::{CasimirError, Result};
use crate::geometry::{Panel, SurfaceMesh};
use crate::quad::integrate;
use rayon::prelude::*;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regularization {
    /// Keep every off-diagonal pair.
    None,
    /// Drop same-sheet pairs closer than `factor` panel diameters and, if
    /// `local_patch`, put back the dropped neighbourhood analytically from the
    /// local curvature.
    Cutoff { factor: f64, local_patch: bool },
    /// Subtract the local quadratic-surface model of the integrand, windowed by
    /// exp(−r²/w²) with w = `width` panel diameters, from every same-sheet pair and
    /// add its integral back exactly. No pair is dropped.
    Subtract { width: f64 },
}

#[derive(Debug, Clone, Copy)]
pub struct TwoScatterOptions {
    pub interaction_only: bool,
    pub regularization: Regularization,
}

impl Default for TwoScatterOptions {
    fn default() -> Self {
        TwoScatterOptions { interaction_only: false, regularization: Regularization::Subtract { width: 2.0 } }
    }
}

impl TwoScatterOptions {
    pub fn interaction() -> Self {
        TwoScatterOptions { interaction_only: true, ..Default::default() }
    }
}

/// Near a point, (n_α·ρ)(n_β·ρ) ≈ −q̄ r⁴ after averaging over directions.
fn qbar(p: &Panel) -> f64 {
    (3.0 * p.kappa1 * p.kappa1 + 2.0 * p.kappa1 * p.kappa2 + 3.0 * p.kappa2 * p.kappa2) / 32.0
}

/// Two-scattering contribution of a disk of area `patch` around panel `p`, counted
/// from `p`'s side.
pub(crate) fn local_patch_psi(p: &Panel, patch: f64, y: f64) -> f64 {
    let t = 2.0 * y * (patch / PI).sqrt();
    let e = (-t).exp();
    let y2j = (1.0 - e * (1.0 + t)) / 4.0 + (2.0 - e * (2.0 + 2.0 * t + t * t)) / 8.0;
    -qbar(p) * p.area / (2.0 * PI) * y2j
}

#[inline]
fn pair(a: &Panel, b: &Panel, y: f64) -> (f64, f64) {
    let rho = a.centroid - b.centroid;
    let r2 = rho.norm_squared();
    let r = r2.sqrt();
    let v = a.normal.dot(&rho) * b.normal.dot(&rho) * (1.0 + y * r) * (-2.0 * y * r).exp() / (r2 * r2);
    (v * a.area * b.area, r)
}

/// ∫₀^∞ r(1 + yr)e^{−2yr}e^{−r²/w²} dr
fn windowed_radial(y: f64, w: f64) -> f64 {
    let f = |r: f64| r * (1.0 + y * r) * (-2.0 * y * r - (r / w).powi(2)).exp();
    let end = (8.0 * w).min(40.0 / y);
    let mid = (1.0 / y).min(end);
    integrate(f, 0.0, mid, 0.0, 1e-12).value + integrate(f, mid, end, 0.0, 1e-12).value
}

fn row_subtracted(mesh: &SurfaceMesh, i: usize, y: f64, width: f64, interaction_only: bool) -> f64 {
    let a = &mesh.panels[i];
    let w = width * mesh.panel_diameter(i);
    let (t1, t2) = tangent_frame(a);
    let mut sum = 0.0;
    for (j, b) in mesh.panels.iter().enumerate() {
        if j == i {
            continue;
        }
        let same = b.sheet == a.sheet;
        if same && interaction_only {
            continue;
        }
        let (v, r) = pair(a, b, y);
        sum += v;
        if same && r < 7.0 * w {
            let d = b.centroid - a.centroid;
            let (u1, u2) = (t1.dot(&d), t2.dot(&d));
            let h = 0.5 * (a.kappa1 * u1 * u1 + a.kappa2 * u2 * u2);
            let r2 = r * r;
            sum += h * h * (1.0 + y * r) * (-2.0 * y * r - r2 / (w * w)).exp() / (r2 * r2) * a.area * b.area;
        }
    }
    let mut out = y * y / (4.0 * PI * PI) * sum;
    if !interaction_only && qbar(a) != 0.0 {
        out -= y * y / (2.0 * PI) * qbar(a) * a.area * windowed_radial(y, w);
    }
    out
}

fn row(mesh: &SurfaceMesh, i: usize, y: f64, opts: &TwoScatterOptions) -> f64 {
    if let Regularization::Subtract { width } = opts.regularization {
        return row_subtracted(mesh, i, y, width, opts.interaction_only);
    }
    let a = &mesh.panels[i];
    let (rc, patch) = match opts.regularization {
        Regularization::None => (0.0, false),
        Regularization::Cutoff { factor, local_patch } => (factor * mesh.panel_diameter(i), local_patch),
        Regularization::Subtract { .. } => unreachable!(),
    };
    let mut sum = 0.0;
    let mut dropped = a.area;
    for (j, b) in mesh.panels.iter().enumerate() {
        if j == i {
            continue;
        }
        let same = b.sheet == a.sheet;
        if same && opts.interaction_only {
            continue;
        }
        let (v, r) = pair(a, b, y);
        if same && r < rc {
            dropped += b.area;
            continue;
        }
        sum += v;
    }
    let mut out = y * y / (4.0 * PI * PI) * sum;
    if patch && !opts.interaction_only {
        out += local_patch_psi(a, dropped, y);
    }
    out
}

/// Ψ⁽²⁾(y) = (y²/4π²) Σ_{α≠β} w_α w_β (n_α·ρ)(n_β·ρ)(1 + yr) e^{−2yr}/r⁴.
pub fn psi_two_scatter(mesh: &SurfaceMesh, y: f64, opts: &TwoScatterOptions) -> Result<f64> {
    if !(y > 0.0 && y.is_finite()) {
        return Err(CasimirError::Domain(format!("y must be > 0, got {y}")));
    }
    match opts.regularization {
        Regularization::Cutoff { factor, .. } if !(factor >= 0.0) => {
            return Err(CasimirError::Domain("cutoff factor must be >= 0".into()));
        }
        Regularization::Subtract { width } if !(width > 0.0) => {
            return Err(CasimirError::Domain("subtraction width must be > 0".into()));
        }
        _ => {}
    }
    if let Some(lay) = mesh.rings {
        // every panel of a ring sees the same row sum
        // collect before summing so the result does not depend on the thread count
        let rows: Vec<f64> = (0..lay.rings).into_par_iter().map(|k| row(mesh, k * lay.nphi, y, opts)).collect();
        let s: f64 = rows.iter().sum();
        return Ok(s * lay.nphi as f64);
    }
    let rows: Vec<f64> = (0..mesh.len()).into_par_iter().map(|i| row(mesh, i, y, opts)).collect();
    Ok(rows.iter().sum())
}

/// Closed-form Ψ⁽²⁾ between a sphere of radius R and an infinite plane at gap L.
pub fn psi_two_scatter_sphere_plane(r: f64, l: f64, y: f64) -> Result<f64> {
    if !(r > 0.0 && l > 0.0 && y >= 0.0) {
        return Err(CasimirError::Domain("sphere-plane needs R, L > 0 and y >= 0".into()));
    }
    Ok((0.25 - 0.5 * r * y) * (-2.0 * y * l).exp() - (0.25 + 0.5 * r * y) * (-2.0 * y * (l + 2.0 * r)).exp())
}

/// T = 0 two-scattering sphere-plane energy in units of ħc.
pub fn energy_two_scatter_sphere_plane(r: f64, l: f64) -> Result<f64> {
    if !(r > 0.0 && l > 0.0) {
        return Err(CasimirError::Domain("sphere-plane needs R, L > 0".into()));
    }
    let d = l + 2.0 * r;
    Ok((1.0 / l - r / (l * l) - 1.0 / d - r / (d * d)) / (8.0 * PI))
}
