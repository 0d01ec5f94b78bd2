//! Values computed independently (mpmath polylogarithms, Matsubara sums,
//! scipy surface integrals) and frozen here.

use casimir::derjaguin::{sphere_plane_energy, SpherePlaneConfig};
use casimir::geometry::*;
use casimir::plates::*;
use casimir::scattering::*;
use casimir::specialfn::psi_lower;
use casimir::PhysicalScale;
use std::f64::consts::PI;

fn natural() -> PhysicalScale {
    PhysicalScale::new(1.0, 1.0, 1.0).unwrap()
}

fn close(a: f64, b: f64, tol: f64) {
    assert!((a / b - 1.0).abs() < tol, "{a} vs {b} (rel {:.2e})", (a / b - 1.0).abs());
}

#[test]
fn psi_lower_polylog() {
    close(psi_lower(0.5).unwrap(), -1.0327303123794924, 1e-12);
    close(psi_lower(3.0).unwrap(), -0.20136417754974423, 1e-12);
}

#[test]
fn thermal_series() {
    for (a, g) in
        [(1.5, -0.008_760_596_798_955_53), (3.0, -0.003_686_084_353_709_408), (7.0, -0.000_872_018_504_495_568_6)]
    {
        close(thermal_g(a, SeriesPath::Auto).unwrap().0, g, 1e-10);
        close(thermal_g(a, SeriesPath::Direct).unwrap().0, g, 1e-10);
    }
}

// (T/π) Σ′_n ∫_{2πnT}^∞ q ln(1 − e^{−2q}) dq for L = 1
#[test]
fn plate_free_energy_matsubara() {
    let cfg = PlateConfig::new(1.0, 1.0).unwrap();
    for (t, f) in [(0.1, -0.013877164734193063), (0.5, -0.024457449200315572), (2.0, -0.095_656_649_058_374_38)] {
        close(plate_total_free_energy(&cfg, t, &natural()).unwrap().total, f, 1e-10);
    }
}

#[test]
fn plate_force_is_minus_gap_derivative() {
    let s = natural();
    let t = 0.3;
    let f = |l: f64| plate_total_free_energy(&PlateConfig::new(1.0, l).unwrap(), t, &s).unwrap().total;
    let h = 1e-3;
    let fd = -(f(1.0 - 2.0 * h) - 8.0 * f(1.0 - h) + 8.0 * f(1.0 + h) - f(1.0 + 2.0 * h)) / (12.0 * h);
    close(plate_force(&PlateConfig::new(1.0, 1.0).unwrap(), t, &s).unwrap(), fd, 1e-8);
}

#[test]
fn proximity_energy_at_zero_temperature() {
    let s = PhysicalScale::default();
    let cfg = SpherePlaneConfig::new(50e-6, 300e-9).unwrap();
    let exact = -PI.powi(3) * 50e-6 * s.hbar_c / (720.0 * 300e-9 * 300e-9);
    close(sphere_plane_energy(&cfg, 0.0, &s).unwrap(), exact, 1e-8);
}

#[test]
fn plate_profile_closed_form() {
    let cfg = PlateConfig::new(1.0, 1.0).unwrap();
    let y: f64 = 0.7;
    close(psi_plates(y, &cfg).unwrap(), y * y / (2.0 * PI) * (1.0 - (-1.4f64).exp()).ln(), 1e-14);
}

#[test]
fn fold_density() {
    close(two_sided_wedge_density(PI / 2.0).unwrap(), 1.0 / (18.0 * PI), 1e-14);
    // a fold of π is a flat sheet
    assert!(two_sided_wedge_density(PI).unwrap().abs() < 1e-16);
}

// infinite-cylinder Ψ⁽²⁾/ℒ from a scipy double integral. Long cylinders keep the
// rims small at low y; at high y the axial step must stay below ~1/y.
#[test]
fn cylinder_two_scattering_samples() {
    let opts = TwoScatterOptions::default();
    for (len, nz, y, per_len) in
        [(100.0, 500, 0.8355, -5.33707e-2), (40.0, 400, 3.209, -4.81014e-2), (40.0, 400, 12.32, -4.69479e-2)]
    {
        let m = make_cylinder_grid(1.0, len, 64, nz).unwrap();
        close(psi_two_scatter(&m, y, &opts).unwrap() / len, per_len, 0.015);
    }
}
