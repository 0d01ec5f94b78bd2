use super::{Panel, RingLayout, Sheet, SurfaceMesh, V3};
use crate::error::{CasimirError, Result};
use crate::quad::gauss_legendre;
use std::f64::consts::PI;

fn check_dims(vals: &[f64], target: usize) -> Result<()> {
    if vals.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(CasimirError::Mesh("dimensions must be positive and finite".into()));
    }
    if target < 24 {
        return Err(CasimirError::Mesh(format!("need at least 24 panels, asked for {target}")));
    }
    Ok(())
}

/// One meridian node of a surface of revolution about z.
#[derive(Debug, Clone, Copy)]
pub struct MeridianNode {
    pub rho: f64,
    pub z: f64,
    /// normal in the (ρ, z) half-plane
    pub n_rho: f64,
    pub n_z: f64,
    /// weight per radian of azimuth (already includes the ρ Jacobian)
    pub weight: f64,
    pub kappa1: f64,
    pub kappa2: f64,
}

/// Spin meridian nodes into rings of `nphi` panels at φ_j = (j + ½)·2π/nphi.
pub fn revolve(nodes: &[MeridianNode], nphi: usize, sheet: Sheet) -> SurfaceMesh {
    let dphi = 2.0 * PI / nphi as f64;
    let mut panels = Vec::with_capacity(nodes.len() * nphi);
    for nd in nodes {
        for j in 0..nphi {
            let phi = (j as f64 + 0.5) * dphi;
            let (s, c) = phi.sin_cos();
            let nrm = V3::new(nd.n_rho * c, nd.n_rho * s, nd.n_z).normalize();
            panels.push(Panel {
                centroid: V3::new(nd.rho * c, nd.rho * s, nd.z),
                normal: nrm,
                area: nd.weight * dphi,
                kappa1: nd.kappa1,
                kappa2: nd.kappa2,
                sheet: 0,
            });
        }
    }
    SurfaceMesh { panels, sheets: vec![sheet], rings: Some(RingLayout { nphi, rings: nodes.len() }) }
}

fn facet_area(a: V3, b: V3, c: V3, d: V3) -> f64 {
    // vector area of the quad a-b-c-d
    0.5 * (c - a).cross(&(d - b)).norm()
}

fn sph(r: f64, th: f64, ph: f64) -> V3 {
    V3::new(r * th.sin() * ph.cos(), r * th.sin() * ph.sin(), r * th.cos())
}

/// Lat-long sphere centred at the origin with planar facet areas and radial normals.
pub fn make_sphere(r: f64, target_panels: usize) -> Result<SurfaceMesh> {
    check_dims(&[r], target_panels)?;
    let nth = ((target_panels as f64 / 2.0).sqrt().round() as usize).max(3);
    make_sphere_grid(r, nth, 2 * nth)
}

pub fn make_sphere_grid(r: f64, nth: usize, nphi: usize) -> Result<SurfaceMesh> {
    if nth < 2 || nphi < 3 || !(r > 0.0) {
        return Err(CasimirError::Mesh("sphere grid too coarse".into()));
    }
    let dth = PI / nth as f64;
    let dphi = 2.0 * PI / nphi as f64;
    let mut nodes = Vec::with_capacity(nth);
    for i in 0..nth {
        let (t0, t1) = (i as f64 * dth, (i + 1) as f64 * dth);
        let tc = 0.5 * (t0 + t1);
        let (p0, p1) = (-0.5 * dphi, 0.5 * dphi);
        let area = facet_area(sph(r, t0, p0), sph(r, t1, p0), sph(r, t1, p1), sph(r, t0, p1));
        nodes.push(MeridianNode {
            rho: r * tc.sin(),
            z: r * tc.cos(),
            n_rho: tc.sin(),
            n_z: tc.cos(),
            weight: area / dphi,
            kappa1: 1.0 / r,
            kappa2: 1.0 / r,
        });
    }
    Ok(revolve(&nodes, nphi, Sheet { genus: 0, closed: true }))
}

/// Open lateral cylinder surface, axis z, centred at the origin, outward normals.
pub fn make_cylinder(r: f64, len: f64, target_panels: usize) -> Result<SurfaceMesh> {
    check_dims(&[r, len], target_panels)?;
    let nphi = ((target_panels as f64 * 2.0 * PI * r / len).sqrt().round() as usize).max(6);
    let nz = ((target_panels as f64 / nphi as f64).round() as usize).max(2);
    make_cylinder_grid(r, len, nphi, nz)
}

pub fn make_cylinder_grid(r: f64, len: f64, nphi: usize, nz: usize) -> Result<SurfaceMesh> {
    if nphi < 3 || nz < 1 || !(r > 0.0 && len > 0.0) {
        return Err(CasimirError::Mesh("cylinder grid too coarse".into()));
    }
    let dz = len / nz as f64;
    let nodes: Vec<_> = (0..nz)
        .map(|k| MeridianNode {
            rho: r,
            z: -0.5 * len + (k as f64 + 0.5) * dz,
            n_rho: 1.0,
            n_z: 0.0,
            weight: r * dz,
            kappa1: 1.0 / r,
            kappa2: 0.0,
        })
        .collect();
    Ok(revolve(&nodes, nphi, Sheet { genus: 0, closed: false }))
}

/// Flat a×b rectangle in z = 0 centred at the origin, normal +z.
pub fn make_rect_plate(a: f64, b: f64, target_panels: usize) -> Result<SurfaceMesh> {
    check_dims(&[a, b], target_panels)?;
    let nx = ((target_panels as f64 * a / b).sqrt().round() as usize).max(1);
    let ny = ((target_panels as f64 / nx as f64).round() as usize).max(1);
    make_rect_grid(a, b, nx, ny)
}

pub fn make_rect_grid(a: f64, b: f64, nx: usize, ny: usize) -> Result<SurfaceMesh> {
    if nx == 0 || ny == 0 || !(a > 0.0 && b > 0.0) {
        return Err(CasimirError::Mesh("plate grid too coarse".into()));
    }
    let (hx, hy) = (a / nx as f64, b / ny as f64);
    let mut panels = Vec::with_capacity(nx * ny);
    for i in 0..nx {
        for j in 0..ny {
            panels.push(Panel {
                centroid: V3::new(-0.5 * a + (i as f64 + 0.5) * hx, -0.5 * b + (j as f64 + 0.5) * hy, 0.0),
                normal: V3::new(0.0, 0.0, 1.0),
                area: hx * hy,
                kappa1: 0.0,
                kappa2: 0.0,
                sheet: 0,
            });
        }
    }
    SurfaceMesh::new(panels, vec![Sheet { genus: 0, closed: false }])
}

/// Two square plates of side `a`, z = 0 and z = L, normals facing each other.
pub fn make_parallel_plates(a: f64, l: f64, n_side: usize) -> Result<SurfaceMesh> {
    if !(l > 0.0) {
        return Err(CasimirError::Mesh("gap must be positive".into()));
    }
    let lower = make_rect_grid(a, a, n_side, n_side)?;
    let upper = lower.translated(V3::new(0.0, 0.0, l)).flipped();
    Ok(lower.merged(&upper))
}

/// Element edges from `a` to `b`: first width `h0`, growing by `ratio`, capped at `hmax`.
pub fn graded_edges(a: f64, b: f64, h0: f64, ratio: f64, hmax: f64) -> Vec<f64> {
    let mut e = vec![a];
    let mut h = h0;
    let mut x = a;
    while x + h < b - 0.3 * h {
        x += h;
        e.push(x);
        h = (h * ratio).min(hmax);
    }
    e.push(b);
    e
}

/// Gauss–Legendre nodes of the given order on each interval of `edges`.
pub fn gauss_nodes(edges: &[f64], order: usize) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(order);
    let mut out = Vec::with_capacity(order * edges.len());
    for e in edges.windows(2) {
        let (c, h) = (0.5 * (e[0] + e[1]), 0.5 * (e[1] - e[0]));
        for k in 0..order {
            out.push((c + h * x[k], h * w[k]));
        }
    }
    out
}

/// Sphere of radius R centred at (0, 0, zc) with Gauss nodes in polar angle θ
/// (θ measured from +z), exact spherical measure, outward normals.
pub fn make_sphere_gauss(r: f64, zc: f64, theta_edges: &[f64], order: usize, nphi: usize) -> SurfaceMesh {
    let nodes: Vec<_> = gauss_nodes(theta_edges, order)
        .into_iter()
        .map(|(t, w)| MeridianNode {
            rho: r * t.sin(),
            z: zc + r * t.cos(),
            n_rho: t.sin(),
            n_z: t.cos(),
            weight: r * r * t.sin() * w,
            kappa1: 1.0 / r,
            kappa2: 1.0 / r,
        })
        .collect();
    revolve(&nodes, nphi, Sheet { genus: 0, closed: true })
}

/// Disk in z = 0 (normal +z) with Gauss nodes in ρ over `rho_edges`.
pub fn make_disk_gauss(rho_edges: &[f64], order: usize, nphi: usize) -> SurfaceMesh {
    let nodes: Vec<_> = gauss_nodes(rho_edges, order)
        .into_iter()
        .map(|(p, w)| MeridianNode { rho: p, z: 0.0, n_rho: 0.0, n_z: 1.0, weight: p * w, kappa1: 0.0, kappa2: 0.0 })
        .collect();
    revolve(&nodes, nphi, Sheet { genus: 0, closed: false })
}

/// Sphere of radius R above the plane z = 0 with closest gap L. The plane is a disk
/// of radius `plane_radius`; both meshes are graded towards the point of closest
/// approach with first element `h0`.
pub fn make_sphere_plane(r: f64, l: f64, h0: f64, plane_radius: f64, order: usize, nphi: usize) -> Result<SurfaceMesh> {
    if !(r > 0.0 && l > 0.0 && h0 > 0.0 && plane_radius > 0.0) || order == 0 || nphi < 4 {
        return Err(CasimirError::Mesh("bad sphere-plane parameters".into()));
    }
    // measure polar angle from the bottom pole: θ = π − t
    let t_edges = graded_edges(0.0, PI, h0 / r, 1.25, 0.15);
    let theta_edges: Vec<f64> = t_edges.iter().rev().map(|t| PI - t).collect();
    let sphere = make_sphere_gauss(r, l + r, &theta_edges, order, nphi);
    let rho_edges = graded_edges(0.0, plane_radius, h0, 1.2, 0.25 * r.max(l));
    let disk = make_disk_gauss(&rho_edges, order, nphi);
    Ok(disk.merged(&sphere))
}

/// Two spheres of radius `a` on the z axis with centres a distance `sep` apart.
pub fn make_sphere_pair(a: f64, sep: f64, order: usize, elements: usize, nphi: usize) -> Result<SurfaceMesh> {
    if !(a > 0.0 && sep > 2.0 * a) {
        return Err(CasimirError::Mesh("spheres must not overlap".into()));
    }
    let edges: Vec<f64> = (0..=elements).map(|k| PI * k as f64 / elements as f64).collect();
    let s1 = make_sphere_gauss(a, 0.0, &edges, order, nphi);
    let s2 = make_sphere_gauss(a, sep, &edges, order, nphi);
    Ok(s1.merged(&s2))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WedgeMeshParams {
    /// half opening angle θ (dihedral angle 2θ)
    pub theta: f64,
    pub gap: f64,
    /// extent of the faces away from the edges and along them
    pub size: f64,
    /// guard band excluded next to each edge
    pub guard: f64,
    pub order: usize,
    /// growth ratio of the graded elements
    pub ratio: f64,
}

impl WedgeMeshParams {
    pub fn new(theta: f64, gap: f64, size: f64) -> Self {
        WedgeMeshParams { theta, gap, size, guard: gap / 20.0, order: 4, ratio: 2.0 }
    }
}

/// Two wedges of dihedral angle 2θ facing each other with perpendicular edges:
/// wedge 1 has its edge on the x axis and opens towards −z, wedge 2 has its edge
/// along y at z = L and opens towards +z. Outward normals; faces start a guard
/// band g away from each edge.
pub fn make_wedge_pair_with(p: &WedgeMeshParams) -> Result<SurfaceMesh> {
    let WedgeMeshParams { theta, gap, size, guard, order, ratio } = *p;
    if !(theta > 0.0 && theta < PI / 2.0) {
        return Err(CasimirError::Mesh("wedge half-angle must lie in (0, π/2)".into()));
    }
    if !(gap > 0.0 && size > 10.0 * gap && guard > 0.0 && guard < gap) {
        return Err(CasimirError::Mesh("bad wedge dimensions".into()));
    }
    let (st, ct) = theta.sin_cos();
    let h0 = guard.min(gap / 8.0);
    let s_nodes = gauss_nodes(&graded_edges(guard, size, h0, ratio, f64::INFINITY), order);
    let half = graded_edges(0.0, size, gap / 4.0, ratio, f64::INFINITY);
    let mut x_edges: Vec<f64> = half.iter().rev().map(|x| -x).collect();
    x_edges.extend_from_slice(&half[1..]);
    let x_nodes = gauss_nodes(&x_edges, order);
    let mut panels = Vec::with_capacity(4 * s_nodes.len() * x_nodes.len());
    for sigma in [1.0, -1.0] {
        // wedge 1 face: (x, σ s sinθ, −s cosθ), outward normal (0, σ cosθ, sinθ)
        let n = V3::new(0.0, sigma * ct, st);
        for &(s, ws) in &s_nodes {
            for &(x, wx) in &x_nodes {
                panels.push(Panel {
                    centroid: V3::new(x, sigma * s * st, -s * ct),
                    normal: n,
                    area: ws * wx,
                    kappa1: 0.0,
                    kappa2: 0.0,
                    sheet: 0,
                });
            }
        }
    }
    for tau in [1.0, -1.0] {
        // wedge 2 face: (τ t sinθ, y, L + t cosθ), outward normal (τ cosθ, 0, −sinθ)
        let n = V3::new(tau * ct, 0.0, -st);
        for &(t, wt) in &s_nodes {
            for &(y, wy) in &x_nodes {
                panels.push(Panel {
                    centroid: V3::new(tau * t * st, y, gap + t * ct),
                    normal: n,
                    area: wt * wy,
                    kappa1: 0.0,
                    kappa2: 0.0,
                    sheet: 1,
                });
            }
        }
    }
    SurfaceMesh::new(panels, vec![Sheet { genus: 0, closed: false }; 2])
}

/// Wedge pair with default grading; `target_panels` sets the Gauss order per element.
pub fn make_wedge_pair(theta: f64, l: f64, size: f64, target_panels: usize) -> Result<SurfaceMesh> {
    check_dims(&[l, size], target_panels)?;
    let mut p = WedgeMeshParams::new(theta, l, size);
    let base = make_wedge_pair_with(&WedgeMeshParams { order: 1, ..p })?.len();
    p.order = ((target_panels as f64 / base as f64).sqrt().round() as usize).clamp(1, 8);
    make_wedge_pair_with(&p)
}
