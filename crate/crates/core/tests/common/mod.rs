//! Hand-transcribed closed forms used as independent references, and the
//! comparisons that run them against the library.

#![allow(dead_code)]

use finsler_core::catalog::{BackgroundKind, CatalogBackground};
use finsler_core::randers::second_covariant_data;
use finsler_core::{
    covariant_data, spray, CatalogEntry, CatalogId, Chart, ChartPoint, Metric, RandersData,
    TangentVector,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type M2 = [[f64; 2]; 2];

/// Polar-chart quantities of a family at `(r, μ, ν)`.
#[derive(Debug, Clone, Copy)]
pub struct PolarDisplay {
    pub a: M2,
    pub b: [f64; 2],
    pub gbar: [f64; 2],
    pub r: M2,
    pub s: M2,
    pub s_up: M2,
    pub s_vec: [f64; 2],
    pub s00: f64,
    pub sk0k: f64,
    pub g: [f64; 2],
}

fn alpha_of(a: &M2, mu: f64, nu: f64) -> f64 {
    (a[0][0] * mu * mu + 2.0 * a[0][1] * mu * nu + a[1][1] * nu * nu).sqrt()
}

fn anti(s12: f64) -> M2 {
    [[0.0, s12], [-s12, 0.0]]
}

pub fn sphere_polar(e: f64, r: f64, mu: f64, nu: f64) -> PolarDisplay {
    let e2 = e * e;
    let r2 = r * r;
    let d = 1.0 + (1.0 - e2) * r2;
    let p = 1.0 + r2;
    let a = [[1.0 / (p * d), 0.0], [0.0, r2 * p / (d * d)]];
    let b = [0.0, -e * r2 / d];
    // The μ² term is negative: a11 decreases in r.
    let gbar = [
        -(1.0 + (1.0 - e2) * (1.0 + 2.0 * r2)) * r / (2.0 * p * d) * mu * mu
            - p * (1.0 + 2.0 * r2 - (1.0 - e2) * r2) * r / (2.0 * d * d) * nu * nu,
        (1.0 + 2.0 * r2 - (1.0 - e2) * r2) / (p * d * r) * mu * nu,
    ];
    let r12 = e.powi(3) * r.powi(3) / (p * d * d);
    let s12 = e * r / (d * d);
    let s_up = [[0.0, e * r * p / d], [-e / (r * p), 0.0]];
    let s_vec = [e2 * r / (p * d), 0.0];
    let alpha = alpha_of(&a, mu, nu);
    let g = [
        gbar[0] - e2 * r / (p * d) * mu * mu + e * r * p / d * alpha * nu,
        gbar[1] - e2 * r / (p * d) * mu * nu - e / (r * p) * alpha * mu,
    ];
    let s00 = e2 * (1.0 - (1.0 - e2) * r2 * r2) / (p * p * d * d) * mu * mu
        + e2 * r2 * (1.0 + (1.0 + e2) * r2) / d.powi(3) * nu * nu;
    let sk0k = -e * (1.0 - e2) * r2 * p * nu / (d * d);
    PolarDisplay {
        a,
        b,
        gbar,
        r: [[0.0, r12], [r12, 0.0]],
        s: anti(s12),
        s_up,
        s_vec,
        s00,
        sk0k,
        g,
    }
}

pub fn klein_polar(e: f64, r: f64, mu: f64, nu: f64) -> PolarDisplay {
    let e2 = e * e;
    let r2 = r * r;
    let d = 1.0 - (1.0 + e2) * r2;
    let q = 1.0 - r2;
    let a = [[1.0 / (d * q), 0.0], [0.0, r2 * q / (d * d)]];
    let b = [0.0, -e * r2 / d];
    let gbar = [
        (1.0 + (1.0 + e2) * (1.0 - 2.0 * r2)) * r / (2.0 * q * d) * mu * mu
            - (1.0 - 2.0 * r2 + (1.0 + e2) * r2) * q * r / (2.0 * d * d) * nu * nu,
        (1.0 - 2.0 * r2 + (1.0 + e2) * r2) / (q * d * r) * mu * nu,
    ];
    let r12 = e.powi(3) * r.powi(3) / (q * d * d);
    let s12 = e * r / (d * d);
    let s_up = [[0.0, e * r * q / d], [-e / (q * r), 0.0]];
    let s_vec = [e2 * r / (q * d), 0.0];
    let alpha = alpha_of(&a, mu, nu);
    let g = [
        gbar[0] - e2 * r / (q * d) * mu * mu + e * r * q / d * alpha * nu,
        gbar[1] - e2 * r / (q * d) * mu * nu - e / (q * r) * alpha * mu,
    ];
    let s00 = e2 * (1.0 - (1.0 + e2) * r2 * r2) / (q * q * d * d) * mu * mu
        + e2 * r2 * (1.0 - (1.0 - e2) * r2) / d.powi(3) * nu * nu;
    let sk0k = e * (1.0 + e2) * r2 * q / (d * d) * nu;
    PolarDisplay {
        a,
        b,
        gbar,
        r: [[0.0, r12], [r12, 0.0]],
        s: anti(s12),
        s_up,
        s_vec,
        s00,
        sk0k,
        g,
    }
}

pub fn funk_polar(e: f64, r: f64, mu: f64, nu: f64) -> PolarDisplay {
    let e2 = e * e;
    let r2 = r * r;
    let d = 1.0 - (1.0 + e2) * r2;
    let d2 = d * d;
    let w = 1.0 - r2 + e2 * r2;
    let a12 = -e * r.powi(3) / d2;
    let a = [[(1.0 - e2 * r2) / d2, a12], [a12, r2 * (1.0 - r2) / d2]];
    let b = [r / d, -e * r2 / d];
    let gbar = [
        (e2 - 5.0 * e2 * r2 - e2 * e2 * r2 + 2.0 - 2.0 * r2) * r / (2.0 * d2) * mu * mu
            + e * w * r2 / d2 * mu * nu
            - w * (1.0 - r2) * r / (2.0 * d2) * nu * nu,
        e * (-3.0 + r2 + 3.0 * e2 * r2) / (2.0 * d2) * mu * mu
            + (1.0 - e2 * r2) * w / (d2 * r) * mu * nu
            - e * w * r2 / (2.0 * d2) * nu * nu,
    ];
    let r12 = -e * (1.0 - e2) * r.powi(3) / d2;
    let rr = [
        [(1.0 - r2 - 3.0 * e2 * r2) / d2, r12],
        [r12, w * r2 / d2],
    ];
    let s12 = e * r / d2;
    let s11_up = -e2 * r2 / d;
    let s_up = [
        [s11_up, e * r * (1.0 - r2) / d],
        [-e * (1.0 - e2 * r2) / (d * r), -s11_up],
    ];
    let s_vec = [e2 * r / d, e * r2 / d];
    let alpha = alpha_of(&a, mu, nu);
    let beta = b[0] * mu + b[1] * nu;
    let g = [
        gbar[0] + 0.5 * (alpha - beta) * mu - e * r * (e * mu + r * nu) / d * mu
            - e * r * (e * r * mu - nu + r2 * nu) / d * alpha,
        gbar[1] + 0.5 * (alpha - beta) * nu - e * r * (e * mu + r * nu) / d * nu
            - e * (mu - e2 * r2 * mu - e * r.powi(3) * nu) / (r * d) * alpha,
    ];
    let d3 = d2 * d;
    let s00 = e2 * (1.0 + r2 - e2 * r2) / d3 * mu * mu - 4.0 * e.powi(3) * r.powi(3) / d3 * mu * nu
        + e2 * r2 * w / d3 * nu * nu;
    let sk0k = -e2 * (1.0 + e2) * r.powi(3) / d2 * mu + e * (1.0 + e2) * r2 * (1.0 - r2) / d2 * nu;
    PolarDisplay {
        a,
        b,
        gbar,
        r: rr,
        s: anti(s12),
        s_up,
        s_vec,
        s00,
        sk0k,
        g,
    }
}

/// `(α, β)` of the cartesian displays at `(x, y; u, v)`.
pub fn cartesian_alpha_beta(id: CatalogId, e: f64, x: f64, y: f64, u: f64, v: f64) -> Option<(f64, f64)> {
    let e2 = e * e;
    let rho2 = x * x + y * y;
    let w = x * v - y * u;
    let xy = x * u + y * v;
    let uv = u * u + v * v;
    Some(match id {
        CatalogId::SphereFamily => {
            let d = 1.0 + (1.0 - e2) * rho2;
            let alpha = (d * uv + (1.0 + e2 + rho2) * w * w).sqrt() / (d * (1.0 + rho2).sqrt());
            (alpha, -e * w / d)
        }
        CatalogId::KleinFamily => {
            let d = 1.0 - (1.0 + e2) * rho2;
            let alpha = (d * uv - (1.0 - e2 - rho2) * w * w).sqrt() / (d * (1.0 - rho2).sqrt());
            (alpha, -e * w / d)
        }
        CatalogId::FunkFamily => {
            let d = 1.0 - (1.0 + e2) * rho2;
            let alpha = (uv - (e * xy + w).powi(2)).sqrt() / d;
            (alpha, (xy - e * w) / d)
        }
        CatalogId::KMinusFour => {
            let q = 1.0 + rho2;
            let d = 1.0 - e2 * rho2 * q;
            let alpha = (uv + (2.0 + rho2) * w * w - e2 * xy * xy * q).sqrt() / (q.sqrt() * d);
            (alpha, -e * q * w / d)
        }
        _ => return None,
    })
}

/// `F = α + β` of the funk family written directly as one expression.
pub fn funk_family_f(e: f64, x: f64, y: f64, u: f64, v: f64) -> f64 {
    let w = x * v - y * u;
    let xy = x * u + y * v;
    ((u * u + v * v - (e * xy + w).powi(2)).sqrt() + xy - e * w) / (1.0 - (1.0 + e * e) * (x * x + y * y))
}

pub fn poincare_deformed_f(e: f64, x: f64, y: f64, u: f64, v: f64) -> f64 {
    let w = x * v - y * u;
    let rho2 = x * x + y * y;
    let q = 0.25 * (1.0 - rho2).powi(2) - e * e * rho2;
    ((e * e * w * w + (u * u + v * v) * q).sqrt() - e * w) / q
}

/// Radial forms in `(r, θ; u, v)`; `sphere` selects sin over sinh.
pub fn radial_f(sphere: bool, e: f64, r: f64, u: f64, v: f64) -> f64 {
    let s2 = if sphere { r.sin().powi(2) } else { r.sinh().powi(2) };
    let l = 1.0 - e * e * s2;
    ((l * u * u + s2 * v * v).sqrt() - e * s2 * v) / l
}

pub fn background_phi(kind: BackgroundKind, x: f64, y: f64, u: f64, v: f64) -> f64 {
    let rho2 = x * x + y * y;
    let w = x * v - y * u;
    let uv = u * u + v * v;
    match kind {
        BackgroundKind::RoundSphere => (uv + w * w).sqrt() / (1.0 + rho2),
        BackgroundKind::Klein => (uv - w * w).sqrt() / (1.0 - rho2),
        BackgroundKind::Funk => ((uv - w * w).sqrt() + x * u + y * v) / (1.0 - rho2),
        BackgroundKind::Poincare => 2.0 * uv.sqrt() / (1.0 - rho2),
        BackgroundKind::MinusFour => ((uv + w * w) / (1.0 + rho2) + w * w).sqrt(),
        // (x, y) = (r, θ) here.
        BackgroundKind::RadialSphere => (u * u + (x.sin() * v).powi(2)).sqrt(),
        BackgroundKind::RadialHyperbolic => (u * u + (x.sinh() * v).powi(2)).sqrt(),
    }
}

pub fn rel_scalar(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(f64::MIN_POSITIVE)
}

pub fn rel_vec(got: &[f64; 2], want: &[f64; 2]) -> f64 {
    let d = (got[0] - want[0]).hypot(got[1] - want[1]);
    d / want[0].hypot(want[1]).max(f64::MIN_POSITIVE)
}

pub fn rel_mat(got: &M2, want: &M2) -> f64 {
    let mut d = 0.0;
    let mut n = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            d += (got[i][j] - want[i][j]).powi(2);
            n += want[i][j].powi(2);
        }
    }
    (d / n.max(f64::MIN_POSITIVE)).sqrt()
}

/// Worst relative error of each polar display over `n` random `(r, ε)` draws.
pub fn polar_residuals(n: usize, seed: u64) -> Vec<(String, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let families: [(CatalogId, fn(f64, f64, f64, f64) -> PolarDisplay); 3] = [
        (CatalogId::SphereFamily, sphere_polar),
        (CatalogId::KleinFamily, klein_polar),
        (CatalogId::FunkFamily, funk_polar),
    ];
    let names = ["a", "b", "gbar", "r", "s", "s_up", "s_vec", "s00", "sk0k", "G"];
    let mut out = Vec::new();
    for (id, display) in families {
        let mut worst = [0.0_f64; 10];
        for _ in 0..n {
            let e: f64 = rng.gen_range(0.1..1.2) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let entry = CatalogEntry::new(id, e, Chart::Polar);
            let r_max = (0.9 * entry.domain_radius()).min(2.0);
            let r = rng.gen_range(0.05..r_max);
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            let mu = rng.gen_range(0.3..1.5) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let nu = rng.gen_range(0.3..1.5) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let built = entry.build().expect("entry builds");
            let p = ChartPoint::polar(r, theta).unwrap();
            let tv = TangentVector::new(p, [mu, nu]).unwrap();
            let cd = covariant_data(&built, &p).unwrap();
            let y = [mu, nu];
            let q = |m: &M2| m[0][0] * y[0] * y[0] + (m[0][1] + m[1][0]) * y[0] * y[1] + m[1][1] * y[1] * y[1];
            let gbar = [0.5 * q(&cd.gamma[0]), 0.5 * q(&cd.gamma[1])];
            let (s00, sk0k) = second_covariant_data(&built, &tv).unwrap();
            let g = spray(&built.metric(), &tv).unwrap().coefficients;
            let want = display(e, r, mu, nu);
            let res = [
                rel_mat(&cd.a, &want.a),
                rel_vec(&cd.b, &want.b),
                rel_vec(&gbar, &want.gbar),
                rel_mat(&cd.r, &want.r),
                rel_mat(&cd.s, &want.s),
                rel_mat(&cd.s_up, &want.s_up),
                rel_vec(&cd.s_vec, &want.s_vec),
                rel_scalar(s00, want.s00),
                rel_scalar(sk0k, want.sk0k),
                rel_vec(&g, &want.g),
            ];
            for (w, r) in worst.iter_mut().zip(res) {
                *w = if r.is_nan() { f64::NAN } else { w.max(r) };
            }
        }
        for (name, w) in names.iter().zip(worst) {
            out.push((format!("{id} {name}"), w));
        }
    }
    out
}

/// Worst relative error of the cartesian and radial displays of every entry.
pub fn display_residuals(n: usize, seed: u64) -> Vec<(String, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for id in CatalogId::ALL {
        let mut worst: f64 = 0.0;
        for _ in 0..n {
            let e: f64 = if id.is_background() { 0.0 } else { rng.gen_range(-1.2..1.2) };
            let entry = CatalogEntry::native(id, e);
            let built = entry.build().expect("entry builds");
            let r = rng.gen_range(0.05..(0.9 * entry.domain_radius()).min(2.0));
            let t = rng.gen_range(0.0..std::f64::consts::TAU);
            let (u, v) = (rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
            let f_lib = built.metric().value(
                match id.native_chart() {
                    Chart::Cartesian => [r * t.cos(), r * t.sin()],
                    Chart::Polar => [r, t],
                },
                [u, v],
            );
            let (x, y) = (r * t.cos(), r * t.sin());
            let want = match id {
                CatalogId::SphereRadial => radial_f(true, e, r, u, v),
                CatalogId::HyperbolicRadial => radial_f(false, e, r, u, v),
                CatalogId::PoincareDeformed => poincare_deformed_f(e, x, y, u, v),
                CatalogId::FunkFamily => {
                    let (a, b) = cartesian_alpha_beta(id, e, x, y, u, v).unwrap();
                    worst = worst.max(rel_scalar(a + b, funk_family_f(e, x, y, u, v)));
                    a + b
                }
                _ if id.is_background() => background_phi(id.background(), x, y, u, v),
                _ => {
                    let (a, b) = cartesian_alpha_beta(id, e, x, y, u, v).unwrap();
                    let c = built.coefficients(&[x, y]);
                    let alpha = (c.a[0][0] * u * u + 2.0 * c.a[0][1] * u * v + c.a[1][1] * v * v).sqrt();
                    let beta = c.b[0] * u + c.b[1] * v;
                    worst = worst.max(rel_scalar(alpha, a)).max(rel_scalar(beta, b));
                    a + b
                }
            };
            worst = worst.max(rel_scalar(f_lib, want));
        }
        out.push((format!("{id} display"), worst));
    }
    // Backgrounds written as metric functions.
    for kind in finsler_core::catalog::BackgroundKind::ALL {
        let bg = CatalogBackground { kind };
        let mut worst: f64 = 0.0;
        for _ in 0..n {
            let polar = bg.chart() == Chart::Polar;
            let r = rng.gen_range(0.05..0.9);
            let t = rng.gen_range(0.0..std::f64::consts::TAU);
            let (u, v) = (rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
            let x = if polar { [r, t] } else { [r * t.cos(), r * t.sin()] };
            worst = worst.max(rel_scalar(bg.value(x, [u, v]), background_phi(kind, x[0], x[1], u, v)));
        }
        out.push((format!("{kind} background"), worst));
    }
    out
}
