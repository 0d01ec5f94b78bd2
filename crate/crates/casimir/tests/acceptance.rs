//! Acceptance criteria, one test each. Every test prints a single
//! `criterion N [PASS|FAIL] ...` line before asserting; run with
//! `cargo test --test acceptance -- --nocapture --test-threads=1` to see them in order.

use casimir::density::{energy_density_high_t, energy_density_low_t, transfer_direction, NearSurfacePoint, Transfer};
use casimir::derjaguin::{sphere_plane_force, SpherePlaneConfig};
use casimir::geometry::*;
use casimir::plates::*;
use casimir::scattering::*;
use casimir::specialfn::{CutoffFamily, ZETA3};
use casimir::PhysicalScale;
use std::f64::consts::PI;
use std::time::Instant;

fn natural() -> PhysicalScale {
    PhysicalScale::new(1.0, 1.0, 1.0).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

fn verdict(n: u32, title: &str, pass: bool, detail: &str) {
    println!("criterion {n:>2} [{}] {title}: {detail}", if pass { "PASS" } else { "FAIL" });
}

/// Coefficient of a² in the quadratic through (a_i, p_i).
fn area_coefficient(pts: &[(f64, f64); 3]) -> f64 {
    let [(x0, y0), (x1, y1), (x2, y2)] = *pts;
    y0 / ((x0 - x1) * (x0 - x2)) + y1 / ((x1 - x0) * (x1 - x2)) + y2 / ((x2 - x0) * (x2 - x1))
}

#[test]
fn criterion_01_plate_universality() {
    let t0 = Instant::now();
    let s = PhysicalScale::default();
    let exact = -PI * PI / 240.0;
    let mut worst: f64 = 0.0;
    let mut detail = String::new();
    for (name, chi) in [
        ("exponential", CutoffFamily::exponential(8.0)),
        ("gaussian", CutoffFamily::gaussian(8.0)),
        ("rational", CutoffFamily::rational_default(8.0)),
    ] {
        let r = plate_zero_point_pressure(1e-6, &chi, &s).unwrap();
        let e = rel(r.coefficient, exact);
        worst = worst.max(e);
        detail += &format!("{name} {:.3e}; ", e);
    }
    let secs = t0.elapsed().as_secs_f64();
    let pass = worst < 1e-4 && secs < 5.0;
    verdict(1, "plate universality", pass, &format!("{detail}runtime {secs:.2} s"));
    assert!(pass);
}

#[test]
fn criterion_02_plate_free_energy() {
    let t0 = Instant::now();
    let u = natural();
    let cfg = PlateConfig::new(1.0, 1.0).unwrap();
    let src = plates_source(cfg);
    let zp = free_energy_of(&src, 0.0, &u).unwrap().total;
    let zp_err = (zp - -PI * PI / 720.0).abs() / (PI * PI / 720.0);

    // α = πħc/(k_B T L) = 30
    let t = PI / 30.0;
    let th = free_energy_of(&src, t, &u).unwrap().thermal;
    let eq40 = -t.powi(3) * ZETA3 / (2.0 * PI) + PI * PI * t.powi(4) / 45.0;
    let th_err = rel(th, eq40);

    let mut dual: f64 = 0.0;
    for a in [1.0, 3.0, 5.0, 10.0] {
        let g = thermal_g(a, SeriesPath::Direct).unwrap().0;
        let gd = thermal_g(4.0 * PI * PI / a, SeriesPath::Direct).unwrap().0;
        dual = dual.max(rel(g, (2.0 * PI / a).powi(4) * gd));
    }
    let secs = t0.elapsed().as_secs_f64();
    let pass = zp_err < 1e-6 && th_err < 1e-3 && dual < 1e-8 && secs < 10.0;
    verdict(
        2,
        "plate free energy",
        pass,
        &format!("zero-point {zp_err:.2e}, thermal at alpha=30 {th_err:.2e}, duality {dual:.2e}, runtime {secs:.2} s"),
    );
    assert!(pass);
}

#[test]
fn criterion_03_high_t_plates() {
    let u = natural();
    let cfg = PlateConfig::new(1.0, 1.0).unwrap();
    let t = PI / 0.1;
    let f = plate_total_free_energy(&cfg, t, &u).unwrap().total;
    let lead = -ZETA3 * t / (8.0 * PI);
    let e = rel(f, lead);
    let h = high_t_form(&plates_source(cfg), t, &u).unwrap();
    let e_q = rel(h.c_ln_q, -ZETA3 / (8.0 * PI));
    let pass = e < 1e-3 && h.ln_q.is_none() && e_q < 1e-2;
    verdict(3, "high-T plates", pass, &format!("F vs −𝒜ζ(3)T/8πL² {e:.2e}; 𝒞 ln𝒬 from Ψ {e_q:.2e}"));
    assert!(pass);
}

#[test]
fn criterion_04_derjaguin() {
    let t0 = Instant::now();
    let s = PhysicalScale::default();
    let cfg = SpherePlaneConfig::new(98.0e-6, 200e-9).unwrap();
    let x = sphere_plane_force(&cfg, 0.0, &s).unwrap();
    let e_force = rel(x, -33.4e-12);

    let warm = SpherePlaneConfig::new(98.0e-6, 500e-9).unwrap();
    let ratio = sphere_plane_force(&warm, 300.0, &s).unwrap() / sphere_plane_force(&warm, 0.0, &s).unwrap() - 1.0;
    let e_ratio = rel(ratio, 4e-3);
    let gamma = blackbody_force_ratio(48.0);
    let e_gamma = rel(gamma, 0.98e-4);
    let secs = t0.elapsed().as_secs_f64();
    let pass = e_force < 5e-3 && e_ratio < 0.1 && e_gamma < 0.02 && secs < 1.0;
    verdict(
        4,
        "Derjaguin benchmark",
        pass,
        &format!(
            "force {:.3} pN ({e_force:.2e}); thermal ratio {ratio:.3e} ({:.1}%); gamma {gamma:.4e} ({:.2}%); runtime {secs:.3} s",
            x * 1e12,
            100.0 * e_ratio,
            100.0 * e_gamma
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_05_kernel_validation() {
    let t0 = Instant::now();
    // a single flat sheet does not scatter onto itself
    let plate = make_rect_grid(4.0, 4.0, 12, 12).unwrap();
    let mut flat: f64 = 0.0;
    for y in [0.5, 2.0, 8.0] {
        flat = flat.max(psi_full(&plate, y, &FullOptions::default()).unwrap().psi.abs());
    }

    // finite plates: the a² part of Ψ(a) over sides 6L, 8L, 10L is the per-area result
    let opts = FullOptions { interaction_only: true, ..Default::default() };
    let mut worst: f64 = 0.0;
    let mut detail = String::new();
    for yl in [0.3, 0.6, 1.2] {
        let mut pts = [(0.0, 0.0); 3];
        for (k, a) in [6.0, 8.0, 10.0].into_iter().enumerate() {
            let m = make_parallel_plates(a, 1.0, (2.0 * a) as usize).unwrap();
            pts[k] = (a, psi_full(&m, yl, &opts).unwrap().psi);
        }
        let exact = psi_plates(yl, &PlateConfig::new(1.0, 1.0).unwrap()).unwrap();
        let r = area_coefficient(&pts) / exact;
        worst = worst.max((r - 1.0).abs());
        detail += &format!("yL={yl}: {r:.4} (raw side-10 {:.3}); ", pts[2].1 / (100.0 * exact));
    }

    // the K² term of the full solver is the two-scattering sum
    let pair = make_parallel_plates(3.0, 1.0, 10).unwrap();
    assert_eq!(pair.len(), 200);
    let mut trunc: f64 = 0.0;
    for y in [0.3, 1.0, 3.0] {
        let a = psi_full_truncated(&pair, y, true).unwrap().psi;
        let b = psi_two_scatter(&pair, y, &TwoScatterOptions::interaction()).unwrap();
        trunc = trunc.max(rel(a, b));
    }
    let secs = t0.elapsed().as_secs_f64();
    let pass = flat < 1e-12 && worst < 0.05 && trunc < 1e-6 && secs < 180.0;
    verdict(
        5,
        "kernel validation",
        pass,
        &format!("flat |Ψ| {flat:.1e}; plates {detail}truncation {trunc:.2e}; runtime {secs:.1} s"),
    );
    assert!(pass);
}

#[test]
fn criterion_06_two_scattering_plate_ratio() {
    let u = natural();
    let target = 90.0 / PI.powi(4);
    let exact = -PI * PI / 720.0;
    // closed form
    let two = ClosedFormPsi {
        f: |y: f64| -y * y / (2.0 * PI) * (-2.0 * y).exp(),
        psi_zero: 0.0,
        psi_inf: 0.0,
        length: 1.0,
        method: Method::TwoScatter,
    };
    let closed = free_energy_of(&two, 0.0, &u).unwrap().total / exact;
    // meshes: per-area Ψ⁽²⁾ from the a² coefficient over three plate sizes
    let ys = log_grid(1e-3, 40.0, 40);
    let meshes: Vec<(f64, SurfaceMesh)> =
        [6.0, 8.0, 10.0].into_iter().map(|a| (a, make_parallel_plates(a, 1.0, (2.0 * a) as usize).unwrap())).collect();
    let samples: Vec<(f64, f64)> = ys
        .iter()
        .map(|&y| {
            let mut pts = [(0.0, 0.0); 3];
            for (k, (a, m)) in meshes.iter().enumerate() {
                pts[k] = (*a, psi_two_scatter(m, y, &TwoScatterOptions::interaction()).unwrap());
            }
            (y, area_coefficient(&pts))
        })
        .collect();
    let prof = PsiProfile::new(samples, 0.0, 0.0, true, Method::TwoScatter).unwrap();
    let mesh_ratio = casimir_free_energy(&prof, 0.0, &u).unwrap().total / exact;
    let e = rel(mesh_ratio, target);
    let pass = e < 0.02 && rel(closed, target) < 1e-6;
    verdict(
        6,
        "two-scattering plate ratio",
        pass,
        &format!("mesh {mesh_ratio:.4} vs 90/π⁴ = {target:.4} ({:.2}%); closed form {closed:.6}", 100.0 * e),
    );
    assert!(pass);
}

#[test]
fn criterion_07_sphere_plane_two_scattering() {
    let u = natural();
    let (r, l) = (1.0, 0.05);
    let mesh = make_sphere_plane(r, l, 0.25 * l, 6.0, 4, 64).unwrap();
    let opts = TwoScatterOptions::interaction();
    let mut worst: f64 = 0.0;
    for yl in [0.05, 0.3, 1.0, 3.0] {
        let y = yl / l;
        let m = psi_two_scatter(&mesh, y, &opts).unwrap();
        worst = worst.max(rel(m, psi_two_scatter_sphere_plane(r, l, y).unwrap()));
    }
    let ys = log_grid(1e-3 / l, 40.0 / l, 64);
    let (prof, _) = compute_profile(&mesh, &ys, &Engine::TwoScatter(opts), None).unwrap();
    let e = casimir_free_energy(&prof, 0.0, &u).unwrap().total;
    let leading = -r / (8.0 * PI * l * l);
    let correction = 1.0 - e / leading;
    let e_corr = rel(correction, l / r);
    let pass = worst < 0.01 && e_corr < 0.1;
    verdict(
        7,
        "sphere-plane two-scattering",
        pass,
        &format!(
            "Ψ⁽²⁾ vs closed form {worst:.1e}; correction ratio {correction:.4} vs L/R = {} ({:.1}%)",
            l / r,
            100.0 * e_corr
        ),
    );
    assert!(pass);
}

fn sphere_order4(elements: usize, nphi: usize) -> SurfaceMesh {
    let edges: Vec<f64> = (0..=elements).map(|k| PI * k as f64 / elements as f64).collect();
    make_sphere_gauss(1.0, 0.0, &edges, 4, nphi)
}

#[test]
fn criterion_08_sphere_shell() {
    let t0 = Instant::now();
    let u = natural();
    let target = 0.046;
    let mut energies = Vec::new();
    let mut last_q = f64::NAN;
    let mut cap = f64::NAN;
    for (el, nphi) in [(4, 24), (6, 32), (8, 48), (9, 64)] {
        let m = sphere_order4(el, nphi);
        assert!(m.len() <= 2500);
        cap = curvature_capacity(&m);
        // beyond y·h ~ 0.5 the samples are less accurate than the 1/y² tail
        let ys = log_grid(1e-3, 5.0, 40);
        let (prof, _) = compute_profile(&m, &ys, &Engine::Full(FullOptions::default()), None).unwrap();
        energies.push((m.len(), casimir_free_energy(&prof, 0.0, &u).unwrap().total));
        last_q = -high_t_form(&prof, 1.0, &u).unwrap().ln_q.unwrap();
    }
    let errs: Vec<f64> = energies.iter().map(|&(_, e)| (e - target).abs()).collect();
    let trend = errs.windows(2).all(|w| w[1] < w[0]);
    let fine = energies[energies.len() - 1].1;
    let secs = t0.elapsed().as_secs_f64();
    let pass = rel(cap, 0.25) < 0.02 && rel(fine, target) < 0.2 && trend && rel(last_q, 0.769) < 0.1 && secs < 900.0;
    let seq: Vec<String> = energies.iter().map(|(n, e)| format!("{n}:{e:.4}")).collect();
    verdict(
        8,
        "sphere shell",
        pass,
        &format!(
            "𝒞 {cap:.6}; E·R by panels [{}] → {target} (trend {}); −ln𝒬R {last_q:.4} vs 0.769; runtime {secs:.0} s",
            seq.join(", "),
            if trend { "converging" } else { "not monotone" }
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_09_cylinder() {
    let u = natural();
    let len = 100.0;
    let ys = log_grid(1e-3, 40.0, 48);
    let engine = Engine::TwoScatter(TwoScatterOptions::default());
    let fine = make_cylinder_grid(1.0, len, 48, 500).unwrap();
    let coarse = make_cylinder_grid(1.0, len, 32, 500).unwrap();
    let (p, _) = compute_profile(&fine, &ys, &engine, None).unwrap();
    let (pc, _) = compute_profile(&coarse, &ys, &engine, None).unwrap();

    let low = low_t_expansion(&p, 1.0, &u).unwrap();
    let coeff = -PI.powi(3) * low.d3psi0 / 135.0;
    let e_low = rel(coeff, -2.0 * PI.powi(3) * len / 45.0);
    let h = high_t_form(&p, 1.0, &u).unwrap();
    let e_cap = rel(h.capacity / len, 3.0 / 64.0);
    let inner = (-h.ln_q.unwrap()).exp();
    let e_inner = rel(inner, 4.56);
    let e0 = casimir_free_energy(&p, 0.0, &u).unwrap().total;
    let e0c = casimir_free_energy(&pc, 0.0, &u).unwrap().total;
    let floor = (e0 - e0c).abs();
    let pass = e_low < 0.05 && e_cap < 0.05 && e_inner < 0.15 && e0.abs() < floor;
    verdict(
        9,
        "cylinder two-scattering",
        pass,
        &format!(
            "low-T coefficient {:.2}%; 𝒞/ℒ {:.6} ({:.1e}); 1/𝒬R {inner:.3} ({:.1}%); E(T=0)/ℒ {:.2e} vs mesh-noise floor {:.2e}",
            100.0 * e_low,
            h.capacity / len,
            e_cap,
            100.0 * e_inner,
            e0 / len,
            floor / len
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_10_wedges() {
    let edge = wedge_region_density(2.0 * PI).unwrap();
    let honey = junction_density(&[2.0 * PI / 3.0; 3]).unwrap();
    let e_edge = rel(edge, 3.0 / (8.0 * PI));
    let e_honey = rel(honey, -7.0 / (24.0 * PI));
    let t0 = Instant::now();
    let rep = wedge_pair_energy(PI / 4.0, 1.0, &natural()).unwrap();
    let secs = t0.elapsed().as_secs_f64();
    let e_pair = rel(rep.energy, rep.exact);
    for r in &rep.runs {
        println!(
            "    wedge run: guard {:.4} L, size {:.0} L, {} panels, E·L/ħc = {:.6}",
            r.guard, r.size, r.panels, r.energy
        );
    }
    let pass = e_edge < 1e-15 && e_honey < 1e-15 && e_pair < 0.05;
    verdict(
        10,
        "wedges",
        pass,
        &format!(
            "edge {edge:.6} ({e_edge:.0e}); honeycomb {honey:.6} ({e_honey:.0e}); pair {:.5} vs {:.5} ({:.2}%), guard shift {:.3}, size shift {:.3}; runtime {secs:.1} s",
            rep.energy,
            rep.exact,
            100.0 * e_pair,
            rep.guard_shift,
            rep.size_shift
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_11_far_field() {
    let u = natural();
    let edges: Vec<f64> = (0..=4).map(|k| PI * k as f64 / 4.0).collect();
    let ball = make_sphere_gauss(1.0, 0.0, &edges, 3, 16);
    let seps = [10.0, 14.0, 20.0, 28.0, 40.0];
    let cold = far_field_scaling(&ball, &ball, &seps, 0.0, &u).unwrap();
    // ħc/(k_B T) = 0.2 radii: every separation is deep in the classical regime
    let hot = far_field_scaling(&ball, &ball, &seps, 5.0, &u).unwrap();
    let pass = (cold.exponent + 7.0).abs() < 0.2 && (hot.exponent + 6.0).abs() < 0.2;
    verdict(
        11,
        "far-field scaling",
        pass,
        &format!(
            "T = 0 exponent {:.3} (R² {:.6}); high T exponent {:.3} (R² {:.6})",
            cold.exponent, cold.r_squared, hot.exponent, hot.r_squared
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_12_density() {
    let s = PhysicalScale::default();
    let near = NearSurfacePoint::new(1e-8, 2e-6).unwrap();
    let far = NearSurfacePoint::new(1e-3, 1.0).unwrap();
    let mut cancel = true;
    for t in [0.0, 1.0, 4.0] {
        let f = energy_density_low_t(&near, t, &s).unwrap();
        cancel &= f + energy_density_low_t(&near.opposite(), t, &s).unwrap() == 0.0;
    }
    for t in [300.0, 1000.0] {
        let f = energy_density_high_t(&far, t, &s).unwrap();
        cancel &= f + energy_density_high_t(&far.opposite(), t, &s).unwrap() == 0.0;
    }
    let cold = transfer_direction(1e-8, 0.0, &s).unwrap();
    let hot = transfer_direction(1e-3, 300.0, &s).unwrap();
    let pass = cancel && cold == Transfer::ConcaveToConvex && hot == Transfer::ConvexToConcave;
    verdict(
        12,
        "density formulas",
        pass,
        &format!("two-sided sums exactly zero: {cancel}; T = 0 {cold:?}; high T {hot:?}"),
    );
    assert!(pass);
}
