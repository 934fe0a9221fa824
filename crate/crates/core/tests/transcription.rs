mod common;

use finsler_core::catalog::build_with_residual;
use finsler_core::{CatalogEntry, CatalogId};

#[test]
fn polar_displays_match() {
    for (name, r) in common::polar_residuals(10, 11) {
        assert!(r <= 1e-9, "{name}: {r:e}");
    }
}

#[test]
fn cartesian_and_radial_displays_match() {
    for (name, r) in common::display_residuals(25, 12) {
        assert!(r <= 1e-9, "{name}: {r:e}");
    }
}

#[test]
fn build_reports_small_transcription_residual() {
    for id in CatalogId::ALL {
        for eps in [0.0, 0.4, -0.7] {
            let eps = if id.is_background() { 0.0 } else { eps };
            let (_, r) = build_with_residual(&CatalogEntry::native(id, eps)).unwrap();
            assert!(r <= 1e-10, "{id} ε = {eps}: {r:e}");
        }
    }
}

#[test]
fn sphere_alpha_at_unit_epsilon() {
    // ε = 1 gives α² = (|y|² + (2 + ρ²) w²) / (1 + ρ²).
    let (x, y, u, v) = (0.4, -0.3, 0.7, 0.2);
    let (a, b) = common::cartesian_alpha_beta(CatalogId::SphereFamily, 1.0, x, y, u, v).unwrap();
    let w: f64 = x * v - y * u;
    let r2 = x * x + y * y;
    let want = ((u * u + v * v + (2.0 + r2) * w * w) / (1.0 + r2)).sqrt();
    assert!((a - want).abs() < 1e-14);
    assert!((b + w).abs() < 1e-14);
}
