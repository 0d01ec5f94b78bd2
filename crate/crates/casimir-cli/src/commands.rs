use crate::record::{quantity, Column, Record, Table};
use crate::{
    DensityArgs, MeshArgs, MethodArg, ModesArgs, PlatesArgs, Shape, SpherePlaneArgs, SweepArgs, SweepTarget, WedgeArgs,
};
use anyhow::{anyhow, bail, Context, Result};
use casimir::density::{energy_density, transfer_direction, NearSurfacePoint, Transfer};
use casimir::derjaguin::{sphere_plane_energy, sphere_plane_force, SpherePlaneConfig};
use casimir::geometry::{
    make_cylinder, make_parallel_plates, make_sphere, make_sphere_gauss, make_sphere_pair, make_sphere_plane,
    read_mesh, two_sided_wedge_density, wedge_region_density, weyl_density, SurfaceMesh,
};
use casimir::plates::{plate_force, plate_total_free_energy, PlateConfig};
use casimir::scattering::{
    casimir_free_energy, compute_profile, free_energy_of, geometry_hash, high_t_form, log_grid, plates_source,
    psi_two_scatter_sphere_plane, wedge_pair_energy_with, ClosedFormPsi, Engine, FullOptions, Method, ProfileCache,
    TwoScatterOptions, WedgeOptions,
};
use casimir::units::alpha_of;
use casimir::PhysicalScale;
use serde_json::json;
use std::f64::consts::PI;
use std::path::Path;

fn need(v: Option<f64>, name: &str) -> Result<f64> {
    let x = v.ok_or_else(|| anyhow!("missing --{name}"))?;
    if !(x > 0.0 && x.is_finite()) {
        bail!("--{name} must be > 0, got {x}");
    }
    Ok(x)
}

fn temperature(v: Option<f64>) -> Result<f64> {
    let t = v.unwrap_or(0.0);
    if !(t >= 0.0 && t.is_finite()) {
        bail!("--temp must be >= 0, got {t}");
    }
    Ok(t)
}

fn check_method(m: MethodArg, allowed: &[MethodArg], command: &str) -> Result<()> {
    if !allowed.contains(&m) {
        let names: Vec<&str> = allowed.iter().map(|m| m.tag()).collect();
        bail!("method `{}` is not available for {command} (use one of: {})", m.tag(), names.join(", "));
    }
    Ok(())
}

/// Free energy (J) of a closed-form Ψ and its force −∂F/∂L (N) by a five-point
/// difference in L; errors include the quadrature estimate.
fn closed_form_energy_force<F, S>(make: F, l: f64, t: f64, scale: &PhysicalScale) -> Result<(f64, f64, f64, f64)>
where
    F: Fn(f64) -> S,
    S: casimir::scattering::PsiSource,
{
    let at = |x: f64| free_energy_of(&make(x), t, scale);
    let e = at(l)?;
    let h = 1e-3 * l;
    let f = |k: f64| at(l + k * h).map(|r| r.total);
    let (fp1, fm1, fp2, fm2) = (f(1.0)?, f(-1.0)?, f(2.0)?, f(-2.0)?);
    let d5 = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h);
    let d3 = (fp1 - fm1) / (2.0 * h);
    let force_err = (d5 - d3).abs() + 2.0 * e.quad_error / h;
    Ok((e.total, e.quad_error, -d5, force_err))
}

fn plates_two_scatter_source(area: f64, l: f64) -> ClosedFormPsi<impl Fn(f64) -> f64> {
    ClosedFormPsi {
        f: move |y: f64| -area * y * y / (2.0 * PI) * (-2.0 * y * l).exp(),
        psi_zero: 0.0,
        psi_inf: 0.0,
        length: l,
        method: Method::TwoScatter,
    }
}

struct PlatePoint {
    pressure: f64,
    pressure_err: f64,
    free_energy: f64,
    free_energy_err: f64,
}

fn plate_point(area: f64, l: f64, t: f64, method: MethodArg, scale: &PhysicalScale) -> Result<PlatePoint> {
    let cfg = PlateConfig::new(area, l)?;
    Ok(match method {
        MethodArg::Exact => {
            let f = plate_force(&cfg, t, scale)?;
            let e = plate_total_free_energy(&cfg, t, scale)?;
            PlatePoint { pressure: f / area, pressure_err: 0.0, free_energy: e.total, free_energy_err: 0.0 }
        }
        MethodArg::Full => {
            let (e, de, f, df) =
                closed_form_energy_force(|x| plates_source(PlateConfig { area, gap: x }), l, t, scale)?;
            PlatePoint { pressure: f / area, pressure_err: df / area, free_energy: e, free_energy_err: de }
        }
        MethodArg::TwoScatter => {
            let (e, de, f, df) = closed_form_energy_force(|x| plates_two_scatter_source(area, x), l, t, scale)?;
            PlatePoint { pressure: f / area, pressure_err: df / area, free_energy: e, free_energy_err: de }
        }
        MethodArg::Derjaguin => unreachable!("rejected by check_method"),
    })
}

pub fn plates(a: &PlatesArgs) -> Result<Record> {
    let l = need(a.gap, "gap")?;
    let t = temperature(a.temp)?;
    let area = a.area.map_or(Ok(1.0), |x| need(Some(x), "area"))?;
    let method = a.method.unwrap_or(MethodArg::Exact);
    check_method(method, &[MethodArg::Exact, MethodArg::Full, MethodArg::TwoScatter], "plates")?;
    let scale = PhysicalScale::default();
    let p = plate_point(area, l, t, method, &scale)?;
    let mut r = Record::new("plates", method.tag());
    r.input("gap", l, "m");
    r.input("temperature", t, "K");
    r.input("area", area, "m^2");
    r.output_with_error("pressure", p.pressure, p.pressure_err, "Pa");
    r.output_with_error("force", p.pressure * area, p.pressure_err * area, "N");
    r.output_with_error("free_energy", p.free_energy, p.free_energy_err, "J");
    if t > 0.0 {
        r.output("alpha", alpha_of(l, t, &scale)?.alpha, "1");
    }
    if !PlateConfig::new(area, l)?.is_wide() {
        r.warnings.push("area is not much larger than gap²; edge effects are ignored".into());
    }
    Ok(r)
}

struct SpherePoint {
    force: f64,
    force_err: f64,
    energy: f64,
    energy_err: f64,
}

fn sphere_plane_point(radius: f64, l: f64, t: f64, method: MethodArg, scale: &PhysicalScale) -> Result<SpherePoint> {
    let cfg = SpherePlaneConfig::new(radius, l)?;
    Ok(match method {
        MethodArg::Derjaguin => SpherePoint {
            force: sphere_plane_force(&cfg, t, scale)?,
            force_err: 0.0,
            energy: sphere_plane_energy(&cfg, t, scale)?,
            energy_err: 0.0,
        },
        MethodArg::TwoScatter => {
            let make = |x: f64| ClosedFormPsi {
                f: move |y: f64| psi_two_scatter_sphere_plane(radius, x, y).unwrap_or(0.0),
                psi_zero: 0.0,
                psi_inf: 0.0,
                length: x,
                method: Method::TwoScatter,
            };
            let (e, de, f, df) = closed_form_energy_force(make, l, t, scale)?;
            SpherePoint { force: f, force_err: df, energy: e, energy_err: de }
        }
        _ => unreachable!("rejected by check_method"),
    })
}

pub fn sphere_plane(a: &SpherePlaneArgs) -> Result<Record> {
    let radius = need(a.radius, "radius")?;
    let l = need(a.gap, "gap")?;
    let t = temperature(a.temp)?;
    let method = a.method.unwrap_or(MethodArg::Derjaguin);
    if method == MethodArg::Full {
        bail!("method `full` for sphere-plane runs on a mesh: use `mesh --shape sphere-plane --method full`");
    }
    check_method(method, &[MethodArg::Derjaguin, MethodArg::TwoScatter], "sphere-plane")?;
    let scale = PhysicalScale::default();
    let p = sphere_plane_point(radius, l, t, method, &scale)?;
    let mut r = Record::new("sphere-plane", method.tag());
    r.input("radius", radius, "m");
    r.input("gap", l, "m");
    r.input("temperature", t, "K");
    r.output_with_error("force", p.force, p.force_err, "N");
    r.output_with_error("energy", p.energy, p.energy_err, "J");
    if method == MethodArg::Derjaguin && !SpherePlaneConfig::new(radius, l)?.is_valid() {
        r.warnings.push(format!("L/R = {:.3} is not small; the proximity approximation is unreliable", l / radius));
    }
    Ok(r)
}

fn sphere_mesh(radius: f64, panels: usize) -> SurfaceMesh {
    // order-4 Gauss elements in θ, about eight azimuthal panels per element and order
    let elements = ((panels as f64 / 32.0).sqrt().round() as usize).max(2);
    let nphi = 8 * elements;
    let edges: Vec<f64> = (0..=elements).map(|k| PI * k as f64 / elements as f64).collect();
    make_sphere_gauss(radius, 0.0, &edges, 4, nphi)
}

fn build_mesh(a: &MeshArgs) -> Result<(SurfaceMesh, f64)> {
    let shape = a.shape.ok_or_else(|| anyhow!("missing --shape"))?;
    let panels = a.panels.unwrap_or(768);
    if panels < 16 {
        bail!("--panels must be at least 16");
    }
    Ok(match shape {
        Shape::Sphere => {
            let r = need(a.radius, "radius")?;
            (sphere_mesh(r, panels), r)
        }
        Shape::Cylinder => {
            let r = need(a.radius, "radius")?;
            let len = need(a.length, "length")?;
            (make_cylinder(r, len, panels)?, r)
        }
        Shape::Plates => {
            let side = need(a.side, "side")?;
            let l = need(a.gap, "gap")?;
            let n = ((panels as f64 / 2.0).sqrt().round() as usize).max(2);
            (make_parallel_plates(side, l, n)?, l)
        }
        Shape::SpherePlane => {
            let r = need(a.radius, "radius")?;
            let l = need(a.gap, "gap")?;
            let nphi = 32;
            (make_sphere_plane(r, l, 0.25 * l, 6.0 * (r * (r + l)).sqrt().min(6.0 * r), 2, nphi)?, l)
        }
        Shape::SpherePair => {
            let r = need(a.radius, "radius")?;
            let l = need(a.gap, "gap")?;
            let elements = ((panels as f64 / 64.0).sqrt().round() as usize).max(2);
            (make_sphere_pair(r, 2.0 * r + l, 4, elements, 8 * elements)?, l)
        }
        Shape::File => {
            let path = a.file.as_ref().ok_or_else(|| anyhow!("--shape file needs --file"))?;
            let m = read_mesh(path).with_context(|| format!("reading mesh {}", path.display()))?;
            let ell =
                if m.sheets.len() > 1 { m.min_inter_sheet_distance() } else { (m.total_area() / (4.0 * PI)).sqrt() };
            (m, ell)
        }
    })
}

pub fn mesh(a: &MeshArgs, cache_dir: Option<&Path>) -> Result<Record> {
    let (mesh, ell) = build_mesh(a)?;
    let t = temperature(a.temp)?;
    let method = a.method.unwrap_or(MethodArg::TwoScatter);
    check_method(method, &[MethodArg::TwoScatter, MethodArg::Full], "mesh")?;
    let interaction = a.interaction_only.unwrap_or(mesh.sheets.len() > 1);
    if interaction && mesh.sheets.len() < 2 {
        bail!("--interaction-only needs at least two sheets");
    }
    let n_y = a.n_y.unwrap_or(40);
    if n_y < 8 {
        bail!("--n-y must be at least 8");
    }
    let y_max = a.y_max.unwrap_or(40.0);
    if y_max.is_nan() || y_max <= 1e-3 {
        bail!("--y-max must exceed 1e-3");
    }
    let engine = match method {
        MethodArg::Full => Engine::Full(FullOptions { interaction_only: interaction, ..Default::default() }),
        _ => Engine::TwoScatter(if interaction {
            TwoScatterOptions::interaction()
        } else {
            TwoScatterOptions::default()
        }),
    };
    let cache = cache_dir.map(ProfileCache::new).transpose()?;
    let ys = log_grid(1e-3 / ell, y_max / ell, n_y);
    let (prof, stats) = compute_profile(&mesh, &ys, &engine, cache.as_ref())?;
    let scale = PhysicalScale::default();

    let mut r = Record::new("mesh", method.tag());
    r.input_text("shape", &format!("{:?}", a.shape.expect("checked")).to_lowercase());
    for (name, v) in [("radius", a.radius), ("length", a.length), ("gap", a.gap), ("side", a.side)] {
        if let Some(v) = v {
            r.input(name, v, "m");
        }
    }
    if let Some(f) = &a.file {
        r.input_text("file", &f.display().to_string());
    }
    r.input("temperature", t, "K");
    r.input("y_min", ys[0], "1/m");
    r.input("y_max", ys[ys.len() - 1], "1/m");
    r.input_text("interaction_only", if interaction { "true" } else { "false" });

    match casimir_free_energy(&prof, t, &scale) {
        Ok(fe) => {
            r.output_with_error("free_energy", fe.total, fe.quad_error, "J");
            r.output("zero_point_energy", fe.zero_point, "J");
            r.output("thermal_free_energy", fe.thermal, "J");
        }
        Err(e) => r.warnings.push(format!("free energy not available: {e}")),
    }
    r.output("psi_zero", prof.psi_zero, "1");
    r.output("psi_infinity", prof.psi_inf, "1");
    let cap = prof.psi_zero - prof.psi_inf;
    r.output("curvature_capacity", cap, "1");
    if cap.abs() > 1e-12 {
        match high_t_form(&prof, 1.0, &scale) {
            Ok(h) => {
                if let Some(lq) = h.ln_q {
                    r.output("ln_q", lq, "ln(1/m)");
                }
            }
            Err(e) => r.warnings.push(format!("high-temperature constant not available: {e}")),
        }
    }
    match prof.fit_small_y() {
        Ok(f) => {
            r.output("dpsi_dy_at_zero", f.coeffs[0], "m");
            r.output("d3psi_dy3_at_zero", 6.0 * f.coeffs[2], "m^3");
        }
        Err(e) => r.warnings.push(format!("small-y fit failed: {e}")),
    }
    r.mesh = Some(json!({
        "panels": mesh.len(),
        "sheets": mesh.sheets.len(),
        "total_area": quantity(mesh.total_area(), "m^2"),
        "geometry_hash": format!("{:016x}", geometry_hash(&mesh, &engine.tag())),
    }));
    // kept out of the record so that a cached rerun writes the same bytes
    eprintln!("psi samples: {} computed, {} from cache", stats.computed, stats.cached);
    if stats.cache_warning {
        eprintln!("warning: cache file was unreadable; recomputed");
        r.warnings.push("cache file was unreadable and has been recomputed".into());
    }
    r.table = Some(Table {
        columns: [Column::new("y", "1/m"), Column::new("psi", "1"), Column::new("error", "1")],
        rows: prof.samples.iter().map(|&(y, p)| [y, p, 0.0]).collect(),
    });
    Ok(r)
}

pub fn wedge(a: &WedgeArgs) -> Result<Record> {
    let theta = need(a.theta, "theta")?;
    let l = need(a.gap, "gap")?;
    let mut o = WedgeOptions::default();
    if let Some(s) = a.size {
        o.size = s;
    }
    if let Some(g) = a.guard {
        o.guard = g;
    }
    let scale = PhysicalScale::default();
    let rep = wedge_pair_energy_with(theta, l, &scale, &o)?;
    let mut r = Record::new("wedge", "two-scatter");
    r.input("theta", theta, "rad");
    r.input("gap", l, "m");
    r.input("size", o.size * l, "m");
    r.input("guard", o.guard * l, "m");
    let err = (rep.guard_shift.abs() + rep.size_shift.abs()) * rep.energy.abs() / 4.0;
    r.output_with_error("energy", rep.energy, err, "J");
    r.output("exact", rep.exact, "J");
    r.output("relative_deviation", rep.energy / rep.exact - 1.0, "1");
    r.output("guard_shift", rep.guard_shift, "1");
    r.output("size_shift", rep.size_shift, "1");
    let runs: Vec<_> = rep
        .runs
        .iter()
        .map(|w| {
            json!({
                "guard": quantity(w.guard, "m"),
                "size": quantity(w.size, "m"),
                "panels": w.panels,
                "energy": quantity(w.energy, "J"),
            })
        })
        .collect();
    r.output_value("runs", json!(runs));
    Ok(r)
}

pub fn density(a: &DensityArgs) -> Result<Record> {
    let d = need(a.distance, "distance")?;
    let rm = a.curvature_radius.ok_or_else(|| anyhow!("missing --curvature-radius"))?;
    let t = temperature(a.temp)?;
    let scale = PhysicalScale::default();
    let p = NearSurfacePoint::new(d, rm)?;
    let f = energy_density(&p, t, &scale)?;
    let g = energy_density(&p.opposite(), t, &scale)?;
    let mut r = Record::new("density", "exact");
    r.input("distance", d, "m");
    r.input("curvature_radius", rm, "m");
    r.input("temperature", t, "K");
    r.output("density", f, "J/m^3");
    r.output("opposite_side_density", g, "J/m^3");
    let x = d * 2.0 * PI * scale.inverse_length(t);
    r.output_value("regime", json!(if x < 0.1 { "low-temperature" } else { "high-temperature" }));
    let dir = match transfer_direction(d, t, &scale)? {
        Transfer::ConcaveToConvex => "concave-to-convex",
        Transfer::ConvexToConcave => "convex-to-concave",
    };
    r.output_value("transfer", json!(dir));
    Ok(r)
}

pub fn modes(a: &ModesArgs) -> Result<Record> {
    let mut r = Record::new("modes", "exact");
    if a.theta.is_none() && a.q.is_none() {
        bail!("give --theta (fold angle) and/or --q with --radius (sphere)");
    }
    if let Some(th) = a.theta {
        r.input("theta", th, "rad");
        r.output("region_density", wedge_region_density(th)?, "1/m");
        if th < 2.0 * PI {
            r.output("two_sided_density", two_sided_wedge_density(th)?, "1/m");
        }
    }
    if let Some(q) = a.q {
        let radius = need(a.radius, "radius")?;
        r.input("q", q, "1/m");
        r.input("radius", radius, "m");
        let mesh = make_sphere(radius, 2000)?;
        let w = weyl_density(q, 4.0 * PI * radius.powi(3) / 3.0, &mesh, &[])?;
        r.output("volume_term", w.volume, "m");
        r.output("curvature_term", w.curvature, "m");
        r.output("total", w.total(), "m");
    }
    Ok(r)
}

/// `start:stop:count`, linear and inclusive, or a single value.
pub fn parse_range(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |x: &str| x.trim().parse::<f64>().map_err(|e| anyhow!("bad number `{x}` in range: {e}"));
    let v = match parts.as_slice() {
        [x] => vec![num(x)?],
        [a, b, n] => {
            let (a, b) = (num(a)?, num(b)?);
            let n: usize = n.trim().parse().map_err(|e| anyhow!("bad count `{n}` in range: {e}"))?;
            if n < 2 {
                bail!("a range needs at least 2 points");
            }
            (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
        }
        _ => bail!("range must be `start:stop:count` or a single value, got `{s}`"),
    };
    if v.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        bail!("range values must be > 0");
    }
    Ok(v)
}

pub fn sweep(a: &SweepArgs) -> Result<Record> {
    let target = a.target.ok_or_else(|| anyhow!("sweep needs a target: plates or sphere-plane"))?;
    let gaps = parse_range(a.gap.as_deref().ok_or_else(|| anyhow!("missing --gap"))?)?;
    let t = temperature(a.temp)?;
    let scale = PhysicalScale::default();
    let mut rows = Vec::with_capacity(gaps.len());
    let (r, col) = match target {
        SweepTarget::Plates => {
            let area = a.area.map_or(Ok(1.0), |x| need(Some(x), "area"))?;
            let method = a.method.unwrap_or(MethodArg::Exact);
            check_method(method, &[MethodArg::Exact, MethodArg::Full, MethodArg::TwoScatter], "plates")?;
            for &l in &gaps {
                let p = plate_point(area, l, t, method, &scale)?;
                rows.push([l, p.pressure * area, p.pressure_err * area]);
            }
            let mut r = Record::new("sweep", method.tag());
            r.input_text("target", "plates");
            r.input("area", area, "m^2");
            (r, ("force", "N"))
        }
        SweepTarget::SpherePlane => {
            let radius = need(a.radius, "radius")?;
            let method = a.method.unwrap_or(MethodArg::Derjaguin);
            check_method(method, &[MethodArg::Derjaguin, MethodArg::TwoScatter], "sphere-plane")?;
            for &l in &gaps {
                let p = sphere_plane_point(radius, l, t, method, &scale)?;
                rows.push([l, p.force, p.force_err]);
            }
            let mut r = Record::new("sweep", method.tag());
            r.input_text("target", "sphere-plane");
            r.input("radius", radius, "m");
            (r, ("force", "N"))
        }
    };
    let mut r = r;
    r.input("temperature", t, "K");
    r.input("gap_start", gaps[0], "m");
    r.input("gap_stop", gaps[gaps.len() - 1], "m");
    r.input("points", gaps.len() as f64, "1");
    r.table = Some(Table {
        columns: [Column::new("gap", "m"), Column::new(col.0, col.1), Column::new("error", col.1)],
        rows,
    });
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        let v = parse_range("0.12e-6:0.5e-6:20").unwrap();
        assert_eq!(v.len(), 20);
        assert_eq!(v[0], 0.12e-6);
        assert!((v[19] - 0.5e-6).abs() < 1e-20);
        assert_eq!(parse_range("1e-6").unwrap(), vec![1e-6]);
        assert!(parse_range("1:2").is_err());
        assert!(parse_range("1:2:1").is_err());
        assert!(parse_range("-1:2:3").is_err());
    }
}
