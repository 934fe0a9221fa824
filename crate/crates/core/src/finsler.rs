//! Curvature of an arbitrary two-dimensional Finsler metric.
//!
//! Everything here is computed from `F` alone by nested forward-mode jets:
//!
//! * `g_ij = ½ [F²]_{y^i y^j}`
//! * `G^i = ¼ g^{il} ([F²]_{x^k y^l} y^k − [F²]_{x^l})`
//! * `R^i_k = 2 ∂G^i/∂x^k − y^j ∂²G^i/∂x^j∂y^k + 2 G^j ∂²G^i/∂y^j∂y^k − ∂G^i/∂y^j ∂G^j/∂y^k`
//!
//! The spray only consumes second derivatives of `F²`, so the Riemann operator
//! needs fourth derivatives overall: the spray is itself evaluated over
//! [`FibreJet`]s, and inside it `F` is evaluated over `FibreJet<FibreJet<f64>>`.
//!
//! The Busemann–Hausdorff density is a quadrature over the indicatrix and its
//! base-point gradient (needed for the S-curvature) is taken by central
//! differences.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::chart::{Chart, ChartPoint, TangentVector, DEFAULT_R_MIN};
use crate::error::{FinslerError, Result};
use crate::jets::{seed_fibre, FibreJet, FibrePartials, Jet, Scalar};
use crate::linalg::{det, frobenius, inverse, mat_vec, norm2, quad, Mat2, Vec2};
use crate::metric::Metric;

/// Nodes of the periodic trapezoid rule over the indicatrix.
pub const INDICATRIX_NODES: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FundamentalTensor {
    pub g: Mat2<f64>,
    pub base: TangentVector,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SprayCoefficients {
    pub coefficients: Vec2<f64>,
    pub base: TangentVector,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RiemannOperator {
    /// `r[i][k] = R^i_k`
    pub r: Mat2<f64>,
    pub base: TangentVector,
}

impl RiemannOperator {
    pub fn trace(&self) -> f64 {
        self.r[0][0] + self.r[1][1]
    }
}

/// Everything the engine knows about `F` at one `(x, y)` sample.
#[derive(Clone, Debug, Serialize)]
pub struct CurvatureReport {
    pub point: ChartPoint,
    pub direction: Vec2<f64>,
    pub f: f64,
    pub g: Mat2<f64>,
    pub spray: Vec2<f64>,
    pub riemann: Mat2<f64>,
    pub flag_curvature: f64,
    pub ricci: f64,
    pub s_curvature: f64,
    pub volume_density: f64,
    pub residuals: BTreeMap<String, f64>,
}

pub(crate) fn check_point<M: Metric>(m: &M, p: &ChartPoint) -> Result<()> {
    if p.chart != m.chart() {
        return Err(FinslerError::ChartMismatch {
            expected: m.chart(),
            found: p.chart,
        });
    }
    if p.chart == Chart::Polar && !(p.coords[0] >= DEFAULT_R_MIN) {
        return Err(FinslerError::PolarGuard {
            r: p.coords[0],
            r_min: DEFAULT_R_MIN,
        });
    }
    if !m.contains(p.coords) {
        return Err(FinslerError::OutsideDomain { point: p.coords });
    }
    Ok(())
}

pub(crate) fn check_vector<M: Metric>(m: &M, v: &TangentVector) -> Result<()> {
    if v.components == [0.0, 0.0] {
        return Err(FinslerError::ZeroVector);
    }
    check_point(m, &v.base)
}

fn values<T: Scalar>(v: &[T; 2]) -> [f64; 2] {
    [v[0].value(), v[1].value()]
}

/// Spray coefficients over any scalar type, so they can be differentiated again.
pub(crate) fn spray_generic<M: Metric, T: Scalar>(m: &M, x: [T; 2], y: [T; 2]) -> Result<[T; 2]> {
    let (xs, ys): ([FibreJet<T>; 2], _) = seed_fibre(x, y);
    let f = m.eval(&xs, &ys);
    let fv = f.value();
    if !(fv > 0.0 && fv.is_finite()) {
        return Err(FinslerError::NonPositiveMetric {
            point: values(&x),
            direction: values(&y),
            value: fv,
        });
    }
    let l = FibrePartials::extract(&(f * f));
    let g: Mat2<T> = [
        [l.dydy[0][0] * 0.5, l.dydy[0][1] * 0.5],
        [l.dydy[1][0] * 0.5, l.dydy[1][1] * 0.5],
    ];
    let d = det(&g).value();
    if !(d > 0.0 && g[0][0].value() > 0.0) {
        return Err(FinslerError::NonConvex {
            point: values(&x),
            direction: values(&y),
            det: d,
        });
    }
    let g_inv = inverse(&g).ok_or(FinslerError::Singular {
        what: "fundamental tensor",
        det: d,
    })?;
    let rhs: [T; 2] =
        std::array::from_fn(|j| l.dxdy[0][j] * y[0] + l.dxdy[1][j] * y[1] - l.dx[j]);
    let s = mat_vec(&g_inv, &rhs);
    Ok([s[0] * 0.25, s[1] * 0.25])
}

/// `F` and its fibre gradient `F_{y^k}`.
pub fn fibre_gradient<M: Metric>(m: &M, x: [f64; 2], y: [f64; 2]) -> (f64, [f64; 2]) {
    let xs = x.map(Jet::<f64, 2>::constant);
    let ys = [Jet::variable(y[0], 0), Jet::variable(y[1], 1)];
    let f = m.eval(&xs, &ys);
    (f.v, f.d)
}

pub fn fundamental_tensor<M: Metric>(m: &M, v: &TangentVector) -> Result<FundamentalTensor> {
    check_vector(m, v)?;
    let (xs, ys) = seed_fibre(v.x(), v.y());
    let f = m.eval(&xs, &ys);
    if !(f.value() > 0.0 && f.value().is_finite()) {
        return Err(FinslerError::NonPositiveMetric {
            point: v.x(),
            direction: v.y(),
            value: f.value(),
        });
    }
    let l = FibrePartials::extract(&(f * f));
    let g = [
        [l.dydy[0][0] * 0.5, l.dydy[0][1] * 0.5],
        [l.dydy[1][0] * 0.5, l.dydy[1][1] * 0.5],
    ];
    let d = det(&g);
    if !(d > 0.0 && g[0][0] > 0.0) {
        return Err(FinslerError::NonConvex {
            point: v.x(),
            direction: v.y(),
            det: d,
        });
    }
    Ok(FundamentalTensor { g, base: *v })
}

pub fn spray<M: Metric>(m: &M, v: &TangentVector) -> Result<SprayCoefficients> {
    check_vector(m, v)?;
    Ok(SprayCoefficients {
        coefficients: spray_generic(m, v.x(), v.y())?,
        base: *v,
    })
}

/// Spray coefficients together with their first and mixed second partials.
fn spray_jet<M: Metric>(m: &M, x: [f64; 2], y: [f64; 2]) -> Result<[FibrePartials<f64>; 2]> {
    let (xs, ys) = seed_fibre(x, y);
    let g = spray_generic(m, xs, ys)?;
    Ok([FibrePartials::extract(&g[0]), FibrePartials::extract(&g[1])])
}

fn riemann_from_spray(y: &[f64; 2], g: &[FibrePartials<f64>; 2]) -> Mat2<f64> {
    std::array::from_fn(|i| {
        std::array::from_fn(|k| {
            let mut r = 2.0 * g[i].dx[k];
            for j in 0..2 {
                r -= y[j] * g[i].dxdy[j][k];
                r += 2.0 * g[j].val * g[i].dydy[j][k];
                r -= g[i].dy[j] * g[j].dy[k];
            }
            r
        })
    })
}

pub fn riemann<M: Metric>(m: &M, v: &TangentVector) -> Result<RiemannOperator> {
    check_vector(m, v)?;
    let g = spray_jet(m, v.x(), v.y())?;
    Ok(RiemannOperator {
        r: riemann_from_spray(&v.y(), &g),
        base: *v,
    })
}

/// `K = Ric / F²`, exact in dimension two.
pub fn flag_curvature<M: Metric>(m: &M, v: &TangentVector) -> Result<f64> {
    let r = riemann(m, v)?;
    let f = m.value(v.x(), v.y());
    Ok(r.trace() / (f * f))
}

/// `λ (F² δ^i_k − F F_{y^k} y^i)`, the Riemann operator of constant curvature `λ`.
pub fn constant_curvature_form(f: f64, f_y: [f64; 2], y: [f64; 2], lambda: f64) -> Mat2<f64> {
    std::array::from_fn(|i| {
        std::array::from_fn(|k| {
            let delta = if i == k { 1.0 } else { 0.0 };
            lambda * (f * f * delta - f * f_y[k] * y[i])
        })
    })
}

/// Busemann–Hausdorff density `σ(p) = π / area{y : F(p, y) < 1}`.
pub fn bh_volume_density<M: Metric>(m: &M, p: &ChartPoint) -> Result<f64> {
    check_point(m, p)?;
    volume_density_unchecked(m, p.coords)
}

/// Whitening passes before the final quadrature, and their node count.
const WHITENING_PASSES: usize = 2;
const WHITENING_NODES: usize = 128;

/// Area and second moment `∫ z zᵀ dz` of `{z : F(x, L z) < 1}`.
fn indicatrix_moments<M: Metric>(
    m: &M,
    x: [f64; 2],
    l: &Mat2<f64>,
    n: usize,
) -> Result<(f64, Mat2<f64>)> {
    let h = 2.0 * std::f64::consts::PI / n as f64;
    let mut area = 0.0;
    let mut moment = [[0.0; 2]; 2];
    // Periodic integrand: the equal-weight rule converges geometrically.
    for k in 0..n {
        let t = k as f64 * h;
        let u = [t.cos(), t.sin()];
        let y = mat_vec(l, &u);
        let f = m.value(x, y);
        if !(f > 0.0 && f.is_finite()) {
            return Err(FinslerError::NonPositiveMetric {
                point: x,
                direction: y,
                value: f,
            });
        }
        let rho2 = 1.0 / (f * f);
        area += 0.5 * rho2;
        for a in 0..2 {
            for b in 0..2 {
                moment[a][b] += 0.25 * rho2 * rho2 * u[a] * u[b];
            }
        }
    }
    Ok((area * h, moment.map(|row| row.map(|v| v * h))))
}

/// Symmetric square root of a positive definite 2×2 matrix.
fn sqrt_spd(m: &Mat2<f64>) -> Mat2<f64> {
    let s = det(m).sqrt();
    let t = (m[0][0] + m[1][1] + 2.0 * s).sqrt();
    [
        [(m[0][0] + s) / t, m[0][1] / t],
        [m[1][0] / t, (m[1][1] + s) / t],
    ]
}

/// The indicatrix is first mapped to a near-disk by its own second moment, so
/// the angular rule stays accurate when it is long and thin.
fn volume_density_unchecked<M: Metric>(m: &M, x: [f64; 2]) -> Result<f64> {
    let mut l = [[1.0, 0.0], [0.0, 1.0]];
    let mut jac = 1.0;
    for _ in 0..WHITENING_PASSES {
        let (_, moment) = indicatrix_moments(m, x, &l, WHITENING_NODES)?;
        if !(det(&moment) > 0.0) {
            break;
        }
        let w = sqrt_spd(&moment);
        l = crate::linalg::mat_mul(&l, &w);
        jac *= det(&w);
    }
    let (area, _) = indicatrix_moments(m, x, &l, INDICATRIX_NODES)?;
    Ok(std::f64::consts::PI / (area * jac))
}

/// Central-difference gradient of `ln σ`. The step is `1e-5 (1 + ‖x‖)` in the
/// cartesian chart; in the polar chart it is `1e-5 r` along `r` and `1e-5` along `θ`.
pub fn ln_volume_gradient<M: Metric>(m: &M, x: [f64; 2]) -> Result<[f64; 2]> {
    let steps = match m.chart() {
        Chart::Cartesian => [1e-5 * (1.0 + norm2(&x)); 2],
        Chart::Polar => [1e-5 * x[0], 1e-5],
    };
    let mut grad = [0.0; 2];
    for (i, g) in grad.iter_mut().enumerate() {
        let h = steps[i];
        let mut fwd = x;
        let mut bwd = x;
        fwd[i] += h;
        bwd[i] -= h;
        for p in [fwd, bwd] {
            if !m.contains(p) {
                return Err(FinslerError::OutsideDomain { point: p });
            }
        }
        let sp = volume_density_unchecked(m, fwd)?;
        let sm = volume_density_unchecked(m, bwd)?;
        *g = (sp.ln() - sm.ln()) / (2.0 * h);
    }
    Ok(grad)
}

fn spray_divergence<M: Metric>(m: &M, x: [f64; 2], y: [f64; 2]) -> Result<f64> {
    let xs = x.map(Jet::<f64, 2>::constant);
    let ys = [Jet::variable(y[0], 0), Jet::variable(y[1], 1)];
    let g = spray_generic(m, xs, ys)?;
    Ok(g[0].d[0] + g[1].d[1])
}

/// `S(y) = ∂G^i/∂y^i − y^i ∂(ln σ)/∂x^i`.
pub fn s_curvature<M: Metric>(m: &M, v: &TangentVector) -> Result<f64> {
    check_vector(m, v)?;
    let div = spray_divergence(m, v.x(), v.y())?;
    let grad = ln_volume_gradient(m, v.x())?;
    let y = v.y();
    Ok(div - y[0] * grad[0] - y[1] * grad[1])
}

pub fn curvature_report<M: Metric>(m: &M, v: &TangentVector) -> Result<CurvatureReport> {
    let tensor = fundamental_tensor(m, v)?;
    let (x, y) = (v.x(), v.y());
    let g = spray_jet(m, x, y)?;
    let r = riemann_from_spray(&y, &g);
    let (f, f_y) = fibre_gradient(m, x, y);
    let f2 = f * f;
    let ricci = r[0][0] + r[1][1];
    let k = ricci / f2;
    let sigma = volume_density_unchecked(m, x)?;
    let grad = ln_volume_gradient(m, x)?;
    let div = g[0].dy[0] + g[1].dy[1];
    let s = div - y[0] * grad[0] - y[1] * grad[1];

    let mut residuals = BTreeMap::new();
    residuals.insert(
        "euler".to_string(),
        (quad(&tensor.g, &y) - f2).abs() / f2,
    );
    let ry = mat_vec(&r, &y);
    residuals.insert(
        "riemann_kernel".to_string(),
        norm2(&ry) / (frobenius(&r).max(f64::MIN_POSITIVE) * norm2(&y)),
    );
    let model = constant_curvature_form(f, f_y, y, k);
    let diff: Mat2<f64> = std::array::from_fn(|i| std::array::from_fn(|j| r[i][j] - model[i][j]));
    residuals.insert("constant_curvature_form".to_string(), frobenius(&diff) / f2);

    Ok(CurvatureReport {
        point: v.base,
        direction: y,
        f,
        g: tensor.g,
        spray: [g[0].val, g[1].val],
        riemann: r,
        flag_curvature: k,
        ricci,
        s_curvature: s,
        volume_density: sigma,
        residuals,
    })
}

/// Fixed-step RK4 solution of `ẍ + 2G(x, ẋ) = 0`.
#[derive(Clone, Debug, Serialize)]
pub struct GeodesicPath {
    pub times: Vec<f64>,
    pub states: Vec<TangentVector>,
    /// The integration stopped early because the path left the domain.
    pub exited: bool,
}

pub fn geodesic_flow<M: Metric>(
    m: &M,
    v0: &TangentVector,
    t_end: f64,
    step: f64,
) -> Result<GeodesicPath> {
    check_vector(m, v0)?;
    let chart = m.chart();
    let inside = |x: [f64; 2]| {
        x.iter().all(|c| c.is_finite())
            && (chart == Chart::Cartesian || x[0] >= DEFAULT_R_MIN)
            && m.contains(x)
    };
    let rhs = |x: [f64; 2], y: [f64; 2]| -> Option<([f64; 2], [f64; 2])> {
        if !inside(x) {
            return None;
        }
        let g = spray_generic(m, x, y).ok()?;
        Some((y, [-2.0 * g[0], -2.0 * g[1]]))
    };
    let axpy = |a: [f64; 2], s: f64, b: [f64; 2]| [a[0] + s * b[0], a[1] + s * b[1]];

    let steps = (t_end / step).round().max(0.0) as usize;
    let mut times = vec![0.0];
    let mut states = vec![*v0];
    let (mut x, mut y) = (v0.x(), v0.y());
    let mut exited = false;
    for n in 0..steps {
        let stage = (|| {
            let (k1x, k1y) = rhs(x, y)?;
            let (k2x, k2y) = rhs(axpy(x, 0.5 * step, k1x), axpy(y, 0.5 * step, k1y))?;
            let (k3x, k3y) = rhs(axpy(x, 0.5 * step, k2x), axpy(y, 0.5 * step, k2y))?;
            let (k4x, k4y) = rhs(axpy(x, step, k3x), axpy(y, step, k3y))?;
            let comb = |a: [f64; 2], k1: [f64; 2], k2: [f64; 2], k3: [f64; 2], k4: [f64; 2]| {
                std::array::from_fn(|i| {
                    a[i] + step / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
                })
            };
            let nx: [f64; 2] = comb(x, k1x, k2x, k3x, k4x);
            let ny: [f64; 2] = comb(y, k1y, k2y, k3y, k4y);
            inside(nx).then_some((nx, ny))
        })();
        match stage {
            Some((nx, ny)) => {
                x = nx;
                y = ny;
                times.push((n + 1) as f64 * step);
                states.push(TangentVector {
                    base: ChartPoint {
                        chart,
                        coords: x,
                    },
                    components: y,
                });
            }
            None => {
                exited = true;
                break;
            }
        }
    }
    Ok(GeodesicPath {
        times,
        states,
        exited,
    })
}
