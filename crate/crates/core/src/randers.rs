//! Closed-form machinery for Randers metrics `F = α + β`.
//!
//! The covariant derivatives of `β` along the Levi-Civita connection of `α` are
//! assembled from the coefficient functions `a_ij(x)`, `b_i(x)` by evaluating
//! them over jets in `x`. No finite differences are involved unless the data
//! itself comes from a [`FdRanders`] model.

use serde::Serialize;

use crate::chart::{
    cartesian_jacobian, cartesian_to_polar, polar_jacobian, polar_to_cartesian, Chart,
    ChartPoint, TangentVector, DEFAULT_R_MIN,
};
use crate::error::{FinslerError, Result};
use crate::finsler::{check_point, check_vector, RiemannOperator, SprayCoefficients};
use crate::jets::{Jet, Scalar};
use crate::linalg::{congruence, det, frobenius, inverse, mat_vec, quad, Mat2, Vec2};
use crate::metric::RandersMetric;

/// `a_ij` and `b_i` at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coefficients<S> {
    pub a: Mat2<S>,
    pub b: Vec2<S>,
}

/// Source of Randers coefficients, generic over the scalar so the
/// connection and its derivatives can be obtained with jets.
pub trait RandersData: Sync {
    fn chart(&self) -> Chart;
    fn contains(&self, x: [f64; 2]) -> bool;
    fn coefficients<S: Scalar>(&self, x: &[S; 2]) -> Coefficients<S>;
}

impl<R: RandersData + ?Sized> RandersData for &R {
    fn chart(&self) -> Chart {
        (**self).chart()
    }
    fn contains(&self, x: [f64; 2]) -> bool {
        (**self).contains(x)
    }
    fn coefficients<S: Scalar>(&self, x: &[S; 2]) -> Coefficients<S> {
        (**self).coefficients(x)
    }
}

/// The same Randers data written in another chart (`a ↦ Jᵀ a J`, `b ↦ Jᵀ b`).
#[derive(Clone, Debug)]
pub struct RandersInChart<R> {
    pub inner: R,
    pub chart: Chart,
}

impl<R: RandersData> RandersInChart<R> {
    pub fn new(inner: R, chart: Chart) -> Self {
        RandersInChart { inner, chart }
    }
}

impl<R: RandersData> RandersData for RandersInChart<R> {
    fn chart(&self) -> Chart {
        self.chart
    }

    fn contains(&self, x: [f64; 2]) -> bool {
        match (self.chart, self.inner.chart()) {
            (a, b) if a == b => self.inner.contains(x),
            (Chart::Polar, _) => x[0] >= DEFAULT_R_MIN && self.inner.contains(polar_to_cartesian(&x)),
            (Chart::Cartesian, _) => {
                let p = cartesian_to_polar(&x);
                p[0] >= DEFAULT_R_MIN && self.inner.contains(p)
            }
        }
    }

    fn coefficients<S: Scalar>(&self, x: &[S; 2]) -> Coefficients<S> {
        let (c, j) = match (self.chart, self.inner.chart()) {
            (a, b) if a == b => return self.inner.coefficients(x),
            (Chart::Polar, _) => (
                self.inner.coefficients(&polar_to_cartesian(x)),
                polar_jacobian(x),
            ),
            (Chart::Cartesian, _) => (
                self.inner.coefficients(&cartesian_to_polar(x)),
                cartesian_jacobian(x),
            ),
        };
        Coefficients {
            a: congruence(&c.a, &j),
            b: [
                j[0][0] * c.b[0] + j[1][0] * c.b[1],
                j[0][1] * c.b[0] + j[1][1] * c.b[1],
            ],
        }
    }
}

/// Drops `β`, leaving the Riemannian metric `α`.
#[derive(Clone, Debug)]
pub struct AlphaOnly<R>(pub R);

impl<R: RandersData> RandersData for AlphaOnly<R> {
    fn chart(&self) -> Chart {
        self.0.chart()
    }
    fn contains(&self, x: [f64; 2]) -> bool {
        self.0.contains(x)
    }
    fn coefficients<S: Scalar>(&self, x: &[S; 2]) -> Coefficients<S> {
        Coefficients {
            a: self.0.coefficients(x).a,
            b: [S::zero(); 2],
        }
    }
}

/// First-order covariant quantities, generic so they can be differentiated once more.
#[derive(Clone, Copy, Debug)]
struct FirstOrder<S> {
    a: Mat2<S>,
    b: Vec2<S>,
    /// `gamma[k][i][j] = Γ^k_ij`
    gamma: [Mat2<S>; 2],
    b_cov: Mat2<S>,
    r: Mat2<S>,
    s: Mat2<S>,
    s_up: Mat2<S>,
    s_vec: Vec2<S>,
    e: Mat2<S>,
}

fn first_order<R: RandersData, S: Scalar>(m: &R, x: [S; 2]) -> Result<FirstOrder<S>> {
    let xs = [Jet::<S, 2>::variable(x[0], 0), Jet::variable(x[1], 1)];
    let c = m.coefficients(&xs);
    let a: Mat2<S> = std::array::from_fn(|i| std::array::from_fn(|j| c.a[i][j].v));
    // da[l][i][j] = ∂_l a_ij
    let da: [Mat2<S>; 2] =
        std::array::from_fn(|l| std::array::from_fn(|i| std::array::from_fn(|j| c.a[i][j].d[l])));
    let b: Vec2<S> = [c.b[0].v, c.b[1].v];
    let a_inv = inverse(&a).ok_or(FinslerError::Singular {
        what: "Riemannian coefficient",
        det: det(&a).value(),
    })?;
    // Christoffel symbols of the first kind, lowered[l][i][j] = Γ_{l,ij}
    let lowered: [Mat2<S>; 2] = std::array::from_fn(|l| {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| (da[i][l][j] + da[j][l][i] - da[l][i][j]) * 0.5)
        })
    });
    let gamma: [Mat2<S>; 2] = std::array::from_fn(|k| {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| a_inv[k][0] * lowered[0][i][j] + a_inv[k][1] * lowered[1][i][j])
        })
    });
    let b_cov: Mat2<S> = std::array::from_fn(|i| {
        std::array::from_fn(|j| c.b[i].d[j] - b[0] * gamma[0][i][j] - b[1] * gamma[1][i][j])
    });
    let r: Mat2<S> =
        std::array::from_fn(|i| std::array::from_fn(|j| (b_cov[i][j] + b_cov[j][i]) * 0.5));
    let s: Mat2<S> =
        std::array::from_fn(|i| std::array::from_fn(|j| (b_cov[i][j] - b_cov[j][i]) * 0.5));
    let s_up: Mat2<S> = std::array::from_fn(|i| {
        std::array::from_fn(|j| a_inv[i][0] * s[0][j] + a_inv[i][1] * s[1][j])
    });
    let s_vec: Vec2<S> = std::array::from_fn(|j| b[0] * s_up[0][j] + b[1] * s_up[1][j]);
    let e: Mat2<S> = std::array::from_fn(|i| {
        std::array::from_fn(|j| r[i][j] + b[i] * s_vec[j] + b[j] * s_vec[i])
    });
    Ok(FirstOrder {
        a,
        b,
        gamma,
        b_cov,
        r,
        s,
        s_up,
        s_vec,
        e,
    })
}

/// Covariant derivatives of `β` at one point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CovariantData {
    pub point: ChartPoint,
    pub a: Mat2<f64>,
    pub b: Vec2<f64>,
    /// `gamma[k][i][j] = Γ^k_ij` of `α`
    pub gamma: [Mat2<f64>; 2],
    /// `dgamma[l][k][i][j] = ∂_l Γ^k_ij`
    pub dgamma: [[Mat2<f64>; 2]; 2],
    /// `b_{i|j}`
    pub b_cov: Mat2<f64>,
    pub r: Mat2<f64>,
    pub s: Mat2<f64>,
    /// `s^i_j`
    pub s_up: Mat2<f64>,
    /// `s_j`
    pub s_vec: Vec2<f64>,
    pub e: Mat2<f64>,
    /// `s_{i|j}`; `s_{0|0}` is its quadratic form.
    pub s_cov: Mat2<f64>,
    /// `s_up_cov[i][j][k] = s^i_{j|k}`
    pub s_up_cov: [Mat2<f64>; 2],
    /// `s^k_{j|k}`; `s^k_{0|k}` is its contraction with `y`.
    pub sk0k: Vec2<f64>,
}

pub fn covariant_data<R: RandersData>(m: &R, p: &ChartPoint) -> Result<CovariantData> {
    let metric = RandersMetric::new(m);
    check_point(&metric, p)?;
    covariant_unchecked(m, p)
}

fn covariant_unchecked<R: RandersData>(m: &R, p: &ChartPoint) -> Result<CovariantData> {
    let x = p.coords;
    let xs = [Jet::<f64, 2>::variable(x[0], 0), Jet::variable(x[1], 1)];
    let fo = first_order(m, xs)?;
    let v = |mm: &Mat2<Jet<f64, 2>>| -> Mat2<f64> {
        std::array::from_fn(|i| std::array::from_fn(|j| mm[i][j].v))
    };
    let gamma = [v(&fo.gamma[0]), v(&fo.gamma[1])];
    let dgamma: [[Mat2<f64>; 2]; 2] = std::array::from_fn(|l| {
        std::array::from_fn(|k| {
            std::array::from_fn(|i| std::array::from_fn(|j| fo.gamma[k][i][j].d[l]))
        })
    });
    let s_vec = [fo.s_vec[0].v, fo.s_vec[1].v];
    let s_up = v(&fo.s_up);
    let s_cov: Mat2<f64> = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            fo.s_vec[i].d[j] - s_vec[0] * gamma[0][i][j] - s_vec[1] * gamma[1][i][j]
        })
    });
    let s_up_cov: [Mat2<f64>; 2] = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            std::array::from_fn(|k| {
                let mut t = fo.s_up[i][j].d[k];
                for mi in 0..2 {
                    t += s_up[mi][j] * gamma[i][mi][k] - s_up[i][mi] * gamma[mi][j][k];
                }
                t
            })
        })
    });
    let sk0k = std::array::from_fn(|j| s_up_cov[0][j][0] + s_up_cov[1][j][1]);
    Ok(CovariantData {
        point: *p,
        a: v(&fo.a),
        b: [fo.b[0].v, fo.b[1].v],
        gamma,
        dgamma,
        b_cov: v(&fo.b_cov),
        r: v(&fo.r),
        s: v(&fo.s),
        s_up,
        s_vec,
        e: v(&fo.e),
        s_cov,
        s_up_cov,
        sk0k,
    })
}

/// `(s_{0|0}, s^k_{0|k})` in direction `v`.
pub fn second_covariant_data<R: RandersData>(m: &R, v: &TangentVector) -> Result<(f64, f64)> {
    check_vector(&RandersMetric::new(m), v)?;
    let cd = covariant_unchecked(m, &v.base)?;
    let y = v.y();
    Ok((quad(&cd.s_cov, &y), cd.sk0k[0] * y[0] + cd.sk0k[1] * y[1]))
}

/// `R̄^i_k` of `α` from the connection data.
fn riemannian_curvature(cd: &CovariantData, y: &[f64; 2]) -> Mat2<f64> {
    let g = &cd.gamma;
    let dg = &cd.dgamma;
    let g0: Mat2<f64> = std::array::from_fn(|i| mat_vec(&g[i], y));
    let g00: Vec2<f64> = std::array::from_fn(|i| quad(&g[i], y));
    std::array::from_fn(|i| {
        std::array::from_fn(|k| {
            let mut r = quad(&dg[k][i], y);
            for j in 0..2 {
                r -= y[j] * (dg[j][i][k][0] * y[0] + dg[j][i][k][1] * y[1]);
                r += g00[j] * g[i][j][k];
                r -= g0[i][j] * g0[j][k];
            }
            r
        })
    })
}

/// Gauss curvature of `α` at `p`.
pub fn gauss_curvature_riemannian<R: RandersData>(m: &R, p: &ChartPoint) -> Result<f64> {
    check_point(&RandersMetric::new(m), p)?;
    let cd = covariant_unchecked(m, p)?;
    let y = [1.0, 0.0];
    let r = riemannian_curvature(&cd, &y);
    Ok((r[0][0] + r[1][1]) / quad(&cd.a, &y))
}

fn alpha_spray(cd: &CovariantData, y: &[f64; 2]) -> Vec2<f64> {
    [0.5 * quad(&cd.gamma[0], y), 0.5 * quad(&cd.gamma[1], y)]
}

/// `G^i = Ḡ^i + (e_00 / 2F) y^i − s_0 y^i + α s^i_0`.
pub fn randers_spray<R: RandersData>(m: &R, v: &TangentVector) -> Result<SprayCoefficients> {
    spray_with(m, v, |cd, y, alpha, beta| quad(&cd.e, y) / (2.0 * (alpha + beta)))
}

/// The spray under `S = 3cF`, with `c(α − β)` in place of `e_00 / 2F`.
pub fn randers_spray_isotropic<R: RandersData>(
    m: &R,
    v: &TangentVector,
    c: f64,
) -> Result<SprayCoefficients> {
    spray_with(m, v, |_, _, alpha, beta| c * (alpha - beta))
}

fn spray_with<R: RandersData>(
    m: &R,
    v: &TangentVector,
    radial: impl Fn(&CovariantData, &[f64; 2], f64, f64) -> f64,
) -> Result<SprayCoefficients> {
    let metric = RandersMetric::new(m);
    check_vector(&metric, v)?;
    let cd = covariant_unchecked(m, &v.base)?;
    let y = v.y();
    let alpha = quad(&cd.a, &y).sqrt();
    let beta = cd.b[0] * y[0] + cd.b[1] * y[1];
    if !(alpha + beta > 0.0) {
        return Err(FinslerError::NonPositiveMetric {
            point: v.x(),
            direction: y,
            value: alpha + beta,
        });
    }
    let gbar = alpha_spray(&cd, &y);
    let p = radial(&cd, &y, alpha, beta);
    let s0 = cd.s_vec[0] * y[0] + cd.s_vec[1] * y[1];
    let s_i0 = mat_vec(&cd.s_up, &y);
    Ok(SprayCoefficients {
        coefficients: std::array::from_fn(|i| gbar[i] + (p - s0) * y[i] + alpha * s_i0[i]),
        base: *v,
    })
}

/// Relative residual of `e_ij = 2c(a_ij − b_i b_j)` at one point.
fn isotropy_residual(cd: &CovariantData, c: f64) -> f64 {
    let diff: Mat2<f64> = std::array::from_fn(|i| {
        std::array::from_fn(|j| cd.e[i][j] - 2.0 * c * (cd.a[i][j] - cd.b[i] * cd.b[j]))
    });
    frobenius(&diff) / frobenius(&cd.a).max(frobenius(&cd.e))
}

/// Residual above which the constant-`c` formulas refuse to run.
pub const ISOTROPY_TOLERANCE: f64 = 1e-9;

fn isotropic_data<R: RandersData>(m: &R, v: &TangentVector, c: f64) -> Result<CovariantData> {
    check_vector(&RandersMetric::new(m), v)?;
    let cd = covariant_unchecked(m, &v.base)?;
    let residual = isotropy_residual(&cd, c);
    if !(residual <= ISOTROPY_TOLERANCE) {
        return Err(FinslerError::NotIsotropic { c, residual });
    }
    Ok(cd)
}

/// Contractions of the covariant data with one direction `y`.
struct Contracted {
    alpha2: f64,
    beta: f64,
    y_low: Vec2<f64>,
    s0: f64,
    s0_up: Vec2<f64>,
    s_k0: Vec2<f64>,
    sj_sj0: f64,
    sj_sjk: Vec2<f64>,
    s00: f64,
    s0_k: Vec2<f64>,
    sk_0: Vec2<f64>,
    ss: Mat2<f64>,
    ss0: Vec2<f64>,
    s_i0k: Mat2<f64>,
    s_i00: Vec2<f64>,
    s_ik0: Mat2<f64>,
    sk0k: f64,
}

fn contract(cd: &CovariantData, y: &[f64; 2]) -> Contracted {
    let s0_up = mat_vec(&cd.s_up, y);
    let sc = &cd.s_cov;
    let suc = &cd.s_up_cov;
    Contracted {
        alpha2: quad(&cd.a, y),
        beta: cd.b[0] * y[0] + cd.b[1] * y[1],
        y_low: mat_vec(&cd.a, y),
        s0: cd.s_vec[0] * y[0] + cd.s_vec[1] * y[1],
        s0_up,
        s_k0: mat_vec(&cd.s, y),
        sj_sj0: cd.s_vec[0] * s0_up[0] + cd.s_vec[1] * s0_up[1],
        sj_sjk: std::array::from_fn(|k| cd.s_vec[0] * cd.s_up[0][k] + cd.s_vec[1] * cd.s_up[1][k]),
        s00: quad(sc, y),
        s0_k: std::array::from_fn(|k| sc[0][k] * y[0] + sc[1][k] * y[1]),
        sk_0: mat_vec(sc, y),
        ss: std::array::from_fn(|i| {
            std::array::from_fn(|k| cd.s_up[i][0] * cd.s_up[0][k] + cd.s_up[i][1] * cd.s_up[1][k])
        }),
        ss0: mat_vec(&cd.s_up, &s0_up),
        s_i0k: std::array::from_fn(|i| {
            std::array::from_fn(|k| suc[i][0][k] * y[0] + suc[i][1][k] * y[1])
        }),
        s_i00: std::array::from_fn(|i| quad(&suc[i], y)),
        s_ik0: std::array::from_fn(|i| mat_vec(&suc[i], y)),
        sk0k: cd.sk0k[0] * y[0] + cd.sk0k[1] * y[1],
    }
}

/// Riemann operator of a Randers metric with `S = 3cF`, `c` constant.
pub fn randers_riemann<R: RandersData>(
    m: &R,
    v: &TangentVector,
    c: f64,
) -> Result<RiemannOperator> {
    let cd = isotropic_data(m, v, c)?;
    let y = v.y();
    let rbar = riemannian_curvature(&cd, &y);
    let t = contract(&cd, &y);
    let alpha = t.alpha2.sqrt();
    let (a2, beta, c2) = (t.alpha2, t.beta, c * c);
    let b = cd.b;
    let r = std::array::from_fn(|i| {
        std::array::from_fn(|k| {
            let d = if i == k { 1.0 } else { 0.0 };
            let yk = t.y_low[k];
            let mut out = rbar[i][k] + 3.0 * c2 * (a2 * d - y[i] * yk)
                - c2 * beta * (beta * d - b[k] * y[i])
                + (t.s00 * d - t.s0_k[k] * y[i])
                + t.s0 * (t.s0 * d - cd.s_vec[k] * y[i])
                + (t.sk_0[k] - t.s0_k[k]) * y[i]
                - (a2 * t.ss[i][k] - yk * t.ss0[i])
                + 6.0 * c * t.s_k0[k] * y[i]
                + 3.0 * t.s_k0[k] * t.s0_up[i];
            let brace = (c2 * beta + 2.0 * c * t.s0 + t.sj_sj0) * (a2 * d - yk * y[i])
                + c2 * a2 * (beta * d - b[k] * y[i])
                + 2.0 * c * a2 * (t.s0 * d - cd.s_vec[k] * y[i])
                - (a2 * t.s_i0k[i][k] - yk * t.s_i00[i])
                + a2 * (t.sj_sj0 * d - t.sj_sjk[k] * y[i])
                + a2 * (t.s_ik0[i][k] - t.s_i0k[i][k]);
            out -= brace / alpha;
            out
        })
    });
    Ok(RiemannOperator { r, base: *v })
}

/// Ricci scalar `Ric = R^k_k` of a Randers metric with `S = 3cF`, `c` constant.
pub fn randers_ricci<R: RandersData>(m: &R, v: &TangentVector, c: f64) -> Result<f64> {
    let cd = isotropic_data(m, v, c)?;
    let y = v.y();
    let rbar = riemannian_curvature(&cd, &y);
    let t = contract(&cd, &y);
    let alpha = t.alpha2.sqrt();
    let (a2, beta, c2) = (t.alpha2, t.beta, c * c);
    let ric_bar = rbar[0][0] + rbar[1][1];
    let s_k0_sk0 = t.s_k0[0] * t.s0_up[0] + t.s_k0[1] * t.s0_up[1];
    let trace_ss = t.ss[0][0] + t.ss[1][1];
    Ok(ric_bar
        + (c2 * (a2 + beta * beta) + 2.0 * c2 * (a2 - beta * beta) + t.s00 + t.s0 * t.s0)
        + 2.0 * s_k0_sk0
        - a2 * trace_ss
        + (2.0 * t.sk0k - (4.0 * c * t.s0 + 2.0 * t.sj_sj0 + 2.0 * c2 * beta)) * alpha)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SCurvatureClass {
    ZeroC,
    ConstantC { c: f64, residual: f64 },
    NonIsotropic { best_c: f64, residual: f64 },
}

impl SCurvatureClass {
    /// The constant `c` for which the isotropic formulas apply.
    pub fn c(&self) -> Option<f64> {
        match *self {
            SCurvatureClass::ZeroC => Some(0.0),
            SCurvatureClass::ConstantC { c, .. } => Some(c),
            SCurvatureClass::NonIsotropic { .. } => None,
        }
    }
}

pub const MIN_CLASSIFY_SAMPLES: usize = 8;

/// Least-squares fit of `e_ij = 2c(a_ij − b_i b_j)` over the samples.
pub fn classify_s_curvature<R: RandersData>(
    m: &R,
    samples: &[ChartPoint],
) -> Result<SCurvatureClass> {
    if samples.len() < MIN_CLASSIFY_SAMPLES {
        return Err(FinslerError::InsufficientSamples {
            needed: MIN_CLASSIFY_SAMPLES,
            got: samples.len(),
        });
    }
    let data = samples
        .iter()
        .map(|p| covariant_data(m, p))
        .collect::<Result<Vec<_>>>()?;
    let mut e_norm2 = 0.0;
    let mut a_norm2 = 0.0;
    let mut num = 0.0;
    let mut den = 0.0;
    for cd in &data {
        for i in 0..2 {
            for j in 0..2 {
                let q = 2.0 * (cd.a[i][j] - cd.b[i] * cd.b[j]);
                num += cd.e[i][j] * q;
                den += q * q;
                e_norm2 += cd.e[i][j] * cd.e[i][j];
                a_norm2 += cd.a[i][j] * cd.a[i][j];
            }
        }
    }
    if e_norm2.sqrt() <= ISOTROPY_TOLERANCE * a_norm2.sqrt() {
        return Ok(SCurvatureClass::ZeroC);
    }
    let c = num / den;
    let mut res2 = 0.0;
    for cd in &data {
        for i in 0..2 {
            for j in 0..2 {
                let d = cd.e[i][j] - 2.0 * c * (cd.a[i][j] - cd.b[i] * cd.b[j]);
                res2 += d * d;
            }
        }
    }
    let residual = (res2 / e_norm2).sqrt();
    if residual <= ISOTROPY_TOLERANCE {
        Ok(SCurvatureClass::ConstantC { c, residual })
    } else {
        Ok(SCurvatureClass::NonIsotropic {
            best_c: c,
            residual,
        })
    }
}

/// Necessary-condition flags on `β`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Diagnostics {
    /// `s_ij ≡ 0`. When false the metric is not locally projectively flat in this chart.
    pub beta_closed: bool,
    /// `r_ij ≡ 0`
    pub beta_killing: bool,
    /// `‖β‖²_α` is the same at every sample.
    pub constant_length: bool,
    pub max_s: f64,
    pub max_r: f64,
    pub length_spread: f64,
}

pub const DIAGNOSTIC_TOLERANCE: f64 = 1e-9;

pub fn diagnostics<R: RandersData>(m: &R, samples: &[ChartPoint]) -> Result<Diagnostics> {
    if samples.len() < MIN_CLASSIFY_SAMPLES {
        return Err(FinslerError::InsufficientSamples {
            needed: MIN_CLASSIFY_SAMPLES,
            got: samples.len(),
        });
    }
    let mut max_s: f64 = 0.0;
    let mut max_r: f64 = 0.0;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for p in samples {
        let cd = covariant_data(m, p)?;
        let scale = frobenius(&cd.a);
        max_s = max_s.max(frobenius(&cd.s) / scale);
        max_r = max_r.max(frobenius(&cd.r) / scale);
        let a_inv = inverse(&cd.a).ok_or(FinslerError::Singular {
            what: "Riemannian coefficient",
            det: det(&cd.a),
        })?;
        let len2 = quad(&a_inv, &cd.b);
        lo = lo.min(len2);
        hi = hi.max(len2);
    }
    let spread = hi - lo;
    Ok(Diagnostics {
        beta_closed: max_s <= DIAGNOSTIC_TOLERANCE,
        beta_killing: max_r <= DIAGNOSTIC_TOLERANCE,
        constant_length: spread <= DIAGNOSTIC_TOLERANCE,
        max_s,
        max_r,
        length_spread: spread,
    })
}

/// Second-order Taylor model of a plain `f64` function, expanded at the
/// evaluation point with derivatives taken by central differences.
struct QuadraticModel<const K: usize> {
    value: [f64; K],
    grad: [[f64; 2]; K],
    hess: [Mat2<f64>; K],
}

impl<const K: usize> QuadraticModel<K> {
    fn fit(f: impl Fn([f64; 2]) -> [f64; K], x: [f64; 2]) -> Self {
        let h = 1e-4 * (1.0 + x[0].hypot(x[1]));
        let at = |dx: f64, dy: f64| f([x[0] + dx, x[1] + dy]);
        let f0 = f(x);
        let steps = [[h, 0.0], [0.0, h]];
        let fp: [[f64; K]; 2] = std::array::from_fn(|l| at(steps[l][0], steps[l][1]));
        let fm: [[f64; K]; 2] = std::array::from_fn(|l| at(-steps[l][0], -steps[l][1]));
        let fpp = at(h, h);
        let fpm = at(h, -h);
        let fmp = at(-h, h);
        let fmm = at(-h, -h);
        QuadraticModel {
            value: f0,
            grad: std::array::from_fn(|q| {
                std::array::from_fn(|l| (fp[l][q] - fm[l][q]) / (2.0 * h))
            }),
            hess: std::array::from_fn(|q| {
                let dxx = (fp[0][q] - 2.0 * f0[q] + fm[0][q]) / (h * h);
                let dyy = (fp[1][q] - 2.0 * f0[q] + fm[1][q]) / (h * h);
                let dxy = (fpp[q] - fpm[q] - fmp[q] + fmm[q]) / (4.0 * h * h);
                [[dxx, dxy], [dxy, dyy]]
            }),
        }
    }

    fn eval<S: Scalar>(&self, dx: &[S; 2]) -> [S; K] {
        std::array::from_fn(|q| {
            let g = &self.grad[q];
            let hm = &self.hess[q];
            S::cst(self.value[q])
                + dx[0] * g[0]
                + dx[1] * g[1]
                + (dx[0] * dx[0] * hm[0][0] + dx[0] * dx[1] * (2.0 * hm[0][1]) + dx[1] * dx[1] * hm[1][1])
                    * 0.5
        })
    }
}

/// Randers data given by plain functions without derivatives. The
/// derivatives needed by the covariant machinery come from central
/// differences, so results are only good to about `1e-5`.
pub struct FdRanders<A, B> {
    pub chart: Chart,
    pub a: A,
    pub b: B,
    /// Open disk (cartesian) or radial bound (polar) of the domain.
    pub radius: f64,
}

impl<A, B> RandersData for FdRanders<A, B>
where
    A: Fn([f64; 2]) -> Mat2<f64> + Sync,
    B: Fn([f64; 2]) -> Vec2<f64> + Sync,
{
    fn chart(&self) -> Chart {
        self.chart
    }

    fn contains(&self, x: [f64; 2]) -> bool {
        match self.chart {
            Chart::Cartesian => x[0].hypot(x[1]) < self.radius,
            Chart::Polar => x[0] >= DEFAULT_R_MIN && x[0] < self.radius,
        }
    }

    fn coefficients<S: Scalar>(&self, x: &[S; 2]) -> Coefficients<S> {
        let x0 = [x[0].value(), x[1].value()];
        let model = QuadraticModel::fit(
            |p| {
                let a = (self.a)(p);
                let b = (self.b)(p);
                [a[0][0], a[0][1], a[1][1], b[0], b[1]]
            },
            x0,
        );
        let v = model.eval(&[x[0] - x0[0], x[1] - x0[1]]);
        Coefficients {
            a: [[v[0], v[1]], [v[1], v[2]]],
            b: [v[3], v[4]],
        }
    }
}
