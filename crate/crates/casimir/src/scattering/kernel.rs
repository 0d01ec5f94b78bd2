use crate::error::{CasimirError, Result};
use crate::geometry::{Panel, SurfaceMesh, V3};
use nalgebra::{DMatrix, Matrix2, Matrix3};
use std::f64::consts::PI;

/// g′(r) for g = e^{−yr}/(4πr).
#[inline]
pub fn green_derivative(r: f64, y: f64) -> f64 {
    -(-y * r).exp() * (1.0 + y * r) / (4.0 * PI * r * r)
}

/// K(α, β) as a 3×3 block, K_ij = 2[u_i n_j − δ_ij (n·u)] with u = ∇_α g and n = n_α.
pub fn kernel_block(alpha: &Panel, beta: &Panel, y: f64) -> Result<Matrix3<f64>> {
    let rho = alpha.centroid - beta.centroid;
    let r = rho.norm();
    if !(r > 0.0) {
        return Err(CasimirError::Domain("coincident panels have no kernel block".into()));
    }
    if !(y > 0.0) {
        return Err(CasimirError::Domain(format!("y must be > 0, got {y}")));
    }
    let u = rho * (green_derivative(r, y) / r);
    let n = alpha.normal;
    Ok(2.0 * (u * n.transpose() - Matrix3::identity() * n.dot(&u)))
}

/// Orthonormal tangent basis (t₁, t₂) with t₁ along the azimuthal direction about z
/// when that is defined, so that ring meshes get rotation-equivariant frames.
pub fn tangent_frame(p: &Panel) -> (V3, V3) {
    let n = p.normal;
    let c = p.centroid;
    let mut t1 = V3::new(-c.y, c.x, 0.0);
    t1 -= n * n.dot(&t1);
    if t1.norm() < 1e-9 * (1.0 + c.norm()) {
        let trial = if n.x.abs() < 0.9 { V3::x() } else { V3::y() };
        t1 = trial - n * n.dot(&trial);
    }
    let t1 = t1.normalize();
    (t1, n.cross(&t1))
}

/// Tangent-projected block T_αᵀ K(α, β) T_β scaled by the weight of β. Since K maps
/// into the tangent plane at α and only tangential currents are physical, det(1 − K²)
/// over these 2×2 blocks equals the 3×3 version.
#[inline]
pub(crate) fn tangent_block(a: &Panel, ta: &(V3, V3), b: &Panel, tb: &(V3, V3), y: f64) -> Matrix2<f64> {
    let rho = a.centroid - b.centroid;
    let r = rho.norm();
    let u = rho * (green_derivative(r, y) / r);
    let nu = a.normal.dot(&u);
    let s = 2.0 * b.area;
    let au = [ta.0.dot(&u), ta.1.dot(&u)];
    let nb = [a.normal.dot(&tb.0), a.normal.dot(&tb.1)];
    let tt = [[ta.0.dot(&tb.0), ta.0.dot(&tb.1)], [ta.1.dot(&tb.0), ta.1.dot(&tb.1)]];
    Matrix2::new(
        s * (au[0] * nb[0] - tt[0][0] * nu),
        s * (au[0] * nb[1] - tt[0][1] * nu),
        s * (au[1] * nb[0] - tt[1][0] * nu),
        s * (au[1] * nb[1] - tt[1][1] * nu),
    )
}

/// Dense kernel with 3×3 blocks K(α_i, β_j)·w_j and zero diagonal blocks.
#[derive(Debug, Clone)]
pub struct KernelMatrix {
    pub y: f64,
    pub blocks: DMatrix<f64>,
    pub sheet_of: Vec<usize>,
}

impl KernelMatrix {
    pub fn assemble(mesh: &SurfaceMesh, y: f64) -> Result<Self> {
        let n = mesh.len();
        let mut m = DMatrix::zeros(3 * n, 3 * n);
        for (i, a) in mesh.panels.iter().enumerate() {
            for (j, b) in mesh.panels.iter().enumerate() {
                if i == j {
                    continue;
                }
                let k = kernel_block(a, b, y)? * b.area;
                m.fixed_view_mut::<3, 3>(3 * i, 3 * j).copy_from(&k);
            }
        }
        Ok(KernelMatrix { y, blocks: m, sheet_of: mesh.panels.iter().map(|p| p.sheet).collect() })
    }
}

/// Tangent-projected dense kernel (2N × 2N), optionally restricted to one sheet.
pub fn tangent_matrix(mesh: &SurfaceMesh, y: f64, sheet: Option<usize>) -> DMatrix<f64> {
    let idx: Vec<usize> = (0..mesh.len()).filter(|&i| sheet.is_none_or(|s| mesh.panels[i].sheet == s)).collect();
    let frames: Vec<_> = idx.iter().map(|&i| tangent_frame(&mesh.panels[i])).collect();
    let n = idx.len();
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for (p, &i) in idx.iter().enumerate() {
        for (q, &j) in idx.iter().enumerate() {
            if i == j {
                continue;
            }
            let blk = tangent_block(&mesh.panels[i], &frames[p], &mesh.panels[j], &frames[q], y);
            m.fixed_view_mut::<2, 2>(2 * p, 2 * q).copy_from(&blk);
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn panel(c: V3, n: V3) -> Panel {
        Panel { centroid: c, normal: n.normalize(), area: 1.0, kappa1: 0.0, kappa2: 0.0, sheet: 0 }
    }

    #[test]
    fn coplanar_trace_vanishes() {
        let a = panel(V3::new(0.0, 0.0, 0.0), V3::z());
        let b = panel(V3::new(0.7, -0.3, 0.0), V3::z());
        let k = kernel_block(&a, &b, 1.3).unwrap() * kernel_block(&b, &a, 1.3).unwrap();
        assert!(k.trace().abs() < 1e-16);
    }

    #[test]
    fn trace_identity() {
        // tr K(α,β)K(β,α) = −8 (n_α·u)(n_β·u)
        let a = panel(V3::new(0.1, 0.2, 0.3), V3::new(0.3, -0.2, 1.0));
        let b = panel(V3::new(-0.4, 0.5, 1.1), V3::new(-0.1, 0.4, -1.0));
        let y = 0.8;
        let kk = kernel_block(&a, &b, y).unwrap() * kernel_block(&b, &a, y).unwrap();
        let rho = a.centroid - b.centroid;
        let u = rho * (green_derivative(rho.norm(), y) / rho.norm());
        assert!((kk.trace() + 8.0 * a.normal.dot(&u) * b.normal.dot(&u)).abs() < 1e-14);
    }

    #[test]
    fn decay_ratio() {
        let a = panel(V3::zeros(), V3::new(0.2, 0.1, 1.0));
        let d = V3::new(0.3, 0.4, 0.5).normalize();
        let y = 2.0;
        let b5 = panel(d * (5.0 / y), V3::x());
        let b10 = panel(d * (10.0 / y), V3::x());
        let n5 = kernel_block(&a, &b5, y).unwrap().norm();
        let n10 = kernel_block(&a, &b10, y).unwrap().norm();
        // e^{-yr}(1+yr)/r²: 11/100 e^{-10} vs 6/25 e^{-5}
        let expect = (11.0 / 100.0) / (6.0 / 25.0) * (-5f64).exp();
        assert!((n10 / n5 / expect - 1.0).abs() < 1e-12);
        assert!(n10 / n5 <= (-5f64).exp() / 2.0 * 1.0001);
    }

    #[test]
    fn range_is_tangent() {
        let a = panel(V3::new(0.1, 0.2, 0.3), V3::new(0.3, -0.2, 1.0));
        let b = panel(V3::new(-0.4, 0.5, 1.1), V3::new(-0.1, 0.4, -1.0));
        let k = kernel_block(&a, &b, 0.5).unwrap();
        let out = k.transpose() * a.normal;
        assert!(out.norm() < 1e-15);
        assert!(kernel_block(&a, &a, 1.0).is_err());
    }
}
