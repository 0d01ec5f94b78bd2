//! Panelised conducting surfaces, generators, curvature invariants and Weyl terms.

mod generators;
mod io;
mod weyl;

pub use generators::*;
pub use io::{canonical_bytes, parse_mesh, read_mesh, write_mesh};
pub use weyl::*;

use crate::error::{CasimirError, Result};
use nalgebra::Vector3;
use std::f64::consts::PI;

pub type V3 = Vector3<f64>;

/// One quadrature node of the surface: collocation point, unit normal, weight and
/// principal curvatures (sign convention: positive when the surface bends away
/// from the normal, so a sphere with outward normal has κ = +1/R).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Panel {
    pub centroid: V3,
    pub normal: V3,
    pub area: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub sheet: usize,
}

impl Panel {
    pub fn mean_curvature(&self) -> f64 {
        0.5 * (self.kappa1 + self.kappa2)
    }

    pub fn gauss_curvature(&self) -> f64 {
        self.kappa1 * self.kappa2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sheet {
    pub genus: u32,
    pub closed: bool,
}

/// Panels stored ring-major: panel `r * nphi + j` is panel `r * nphi` rotated by
/// 2πj/nphi about the z axis. Lets the solvers use the rotational symmetry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RingLayout {
    pub nphi: usize,
    pub rings: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceMesh {
    pub panels: Vec<Panel>,
    pub sheets: Vec<Sheet>,
    pub rings: Option<RingLayout>,
}

impl SurfaceMesh {
    pub fn new(panels: Vec<Panel>, sheets: Vec<Sheet>) -> Result<Self> {
        let m = SurfaceMesh { panels, sheets, rings: None };
        m.validate()?;
        Ok(m)
    }

    pub fn len(&self) -> usize {
        self.panels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.panels.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        for (i, p) in self.panels.iter().enumerate() {
            if !((p.normal.norm() - 1.0).abs() < 1e-12) {
                return Err(CasimirError::Mesh(format!("panel {i}: normal is not unit length")));
            }
            if !(p.area > 0.0) || !p.centroid.iter().all(|c| c.is_finite()) {
                return Err(CasimirError::Mesh(format!("panel {i}: bad area or centroid")));
            }
            if p.sheet >= self.sheets.len() {
                return Err(CasimirError::Mesh(format!("panel {i}: sheet {} out of range", p.sheet)));
            }
        }
        if let Some(r) = self.rings {
            if r.nphi * r.rings != self.panels.len() {
                return Err(CasimirError::Mesh("ring layout does not cover the panels".into()));
            }
        }
        Ok(())
    }

    pub fn total_area(&self) -> f64 {
        self.panels.iter().map(|p| p.area).sum()
    }

    pub fn sheet_area(&self, s: usize) -> f64 {
        self.panels.iter().filter(|p| p.sheet == s).map(|p| p.area).sum()
    }

    /// Σ κ₁κ₂·area / 4π per sheet; 1 − n for a closed sheet of genus n.
    pub fn gauss_bonnet(&self, s: usize) -> f64 {
        self.panels.iter().filter(|p| p.sheet == s).map(|p| p.gauss_curvature() * p.area).sum::<f64>() / (4.0 * PI)
    }

    pub fn translated(&self, d: V3) -> SurfaceMesh {
        let mut m = self.clone();
        for p in &mut m.panels {
            p.centroid += d;
        }
        if d.x != 0.0 || d.y != 0.0 {
            m.rings = None;
        }
        m
    }

    /// Flip every normal (and with it the curvature signs).
    pub fn flipped(&self) -> SurfaceMesh {
        let mut m = self.clone();
        for p in &mut m.panels {
            p.normal = -p.normal;
            p.kappa1 = -p.kappa1;
            p.kappa2 = -p.kappa2;
        }
        m
    }

    /// Concatenate meshes; sheet ids of `other` are shifted. Ring structure survives
    /// when both sides carry it with the same nphi.
    pub fn merged(&self, other: &SurfaceMesh) -> SurfaceMesh {
        let off = self.sheets.len();
        let mut panels = self.panels.clone();
        panels.extend(other.panels.iter().map(|p| Panel { sheet: p.sheet + off, ..*p }));
        let mut sheets = self.sheets.clone();
        sheets.extend_from_slice(&other.sheets);
        let rings = match (self.rings, other.rings) {
            (Some(a), Some(b)) if a.nphi == b.nphi => Some(RingLayout { nphi: a.nphi, rings: a.rings + b.rings }),
            _ => None,
        };
        SurfaceMesh { panels, sheets, rings }
    }

    /// Typical panel diameter around each panel, √area.
    pub fn panel_diameter(&self, i: usize) -> f64 {
        self.panels[i].area.sqrt()
    }

    pub fn min_inter_sheet_distance(&self) -> f64 {
        let mut best = f64::INFINITY;
        for (i, a) in self.panels.iter().enumerate() {
            for b in &self.panels[i + 1..] {
                if a.sheet != b.sheet {
                    best = best.min((a.centroid - b.centroid).norm());
                }
            }
        }
        best
    }
}

/// 𝒞 = (1/32π) Σ [3H² − κ₁κ₂]·area − Σ n.
pub fn curvature_capacity(mesh: &SurfaceMesh) -> f64 {
    let s: f64 = mesh.panels.iter().map(|p| (3.0 * p.mean_curvature().powi(2) - p.gauss_curvature()) * p.area).sum();
    s / (32.0 * PI) - mesh.sheets.iter().map(|s| s.genus as f64).sum::<f64>()
}

/// Large-y plateau Ψ(∞) = (1/32π) Σ [κ₁κ₂ − 3H²]·area.
pub fn psi_infinity(mesh: &SurfaceMesh) -> f64 {
    mesh.panels.iter().map(|p| (p.gauss_curvature() - 3.0 * p.mean_curvature().powi(2)) * p.area).sum::<f64>()
        / (32.0 * PI)
}

/// Small-y limit Ψ(+0): −n for closed sheets of genus n.
pub fn psi_zero(mesh: &SurfaceMesh) -> f64 {
    -mesh.sheets.iter().filter(|s| s.closed).map(|s| s.genus as f64).sum::<f64>()
}
