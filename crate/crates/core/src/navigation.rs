//! Zermelo navigation: deform a background metric `Φ` by a wind `εv`.
//!
//! The deformed metric `F` is defined by `Φ(x, y/F(y) − εv) = 1`. For a
//! Riemannian background `h` the solution is the Randers metric
//!
//! ```text
//! λ = 1 − ε² h(v, v),   v♭ = h v
//! a_ij = (ε² v♭_i v♭_j + λ h_ij) / λ²,   b_i = −ε v♭_i / λ
//! ```
//!
//! and for any other background the equation is solved for `F` pointwise.

use crate::chart::{Chart, TangentVector, DEFAULT_R_MIN};
use crate::error::{FinslerError, Result};
use crate::finsler::check_vector;
use crate::jets::{Jet, Scalar};
use crate::linalg::{dot, mat_vec, quad, Mat2};
use crate::metric::{Euclidean, Metric};
use crate::randers::{Coefficients, RandersData};

/// Target for `|Φ(y/F − εv) − 1|`.
pub const ROOT_TOLERANCE: f64 = 1e-10;
pub const MAX_ROOT_ITERATIONS: usize = 100;

pub trait VectorField: Sync {
    fn chart(&self) -> Chart;
    fn eval<S: Scalar>(&self, x: &[S; 2]) -> [S; 2];

    /// The infinitesimal rotation about the origin, for which catalog
    /// backgrounds know their solvability radius in closed form.
    fn is_rotation(&self) -> bool {
        false
    }
}

impl<V: VectorField + ?Sized> VectorField for &V {
    fn chart(&self) -> Chart {
        (**self).chart()
    }
    fn eval<S: Scalar>(&self, x: &[S; 2]) -> [S; 2] {
        (**self).eval(x)
    }
    fn is_rotation(&self) -> bool {
        (**self).is_rotation()
    }
}

/// `(−y, x)` in cartesian coordinates, `∂_θ` in polar ones.
#[derive(Clone, Copy, Debug)]
pub struct Rotation {
    pub chart: Chart,
}

impl VectorField for Rotation {
    fn chart(&self) -> Chart {
        self.chart
    }

    fn eval<S: Scalar>(&self, x: &[S; 2]) -> [S; 2] {
        match self.chart {
            Chart::Cartesian => [-x[1], x[0]],
            Chart::Polar => [S::zero(), S::one()],
        }
    }

    fn is_rotation(&self) -> bool {
        true
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ConstantWind {
    pub chart: Chart,
    pub v: [f64; 2],
}

impl VectorField for ConstantWind {
    fn chart(&self) -> Chart {
        self.chart
    }

    fn eval<S: Scalar>(&self, _x: &[S; 2]) -> [S; 2] {
        [S::cst(self.v[0]), S::cst(self.v[1])]
    }
}

/// A metric that can serve as the navigation background.
pub trait Background: Metric {
    /// `h_ij(x)` when the background is Riemannian.
    fn riemannian_matrix<S: Scalar>(&self, x: &[S; 2]) -> Option<Mat2<S>>;

    fn is_riemannian(&self) -> bool {
        self.riemannian_matrix(&[0.5f64, 0.5]).is_some()
    }

    /// Chart radius of the region where the rotation wind of strength `ε`
    /// can be navigated, if known in closed form.
    fn rotational_domain(&self, _epsilon: f64) -> Option<f64> {
        None
    }

    /// Chart radius of the background's own domain.
    fn domain_radius(&self) -> f64 {
        f64::INFINITY
    }
}

impl<B: Background + ?Sized> Background for &B {
    fn riemannian_matrix<S: Scalar>(&self, x: &[S; 2]) -> Option<Mat2<S>> {
        (**self).riemannian_matrix(x)
    }
    fn is_riemannian(&self) -> bool {
        (**self).is_riemannian()
    }
    fn rotational_domain(&self, epsilon: f64) -> Option<f64> {
        (**self).rotational_domain(epsilon)
    }
    fn domain_radius(&self) -> f64 {
        (**self).domain_radius()
    }
}

impl Background for Euclidean {
    fn riemannian_matrix<S: Scalar>(&self, x: &[S; 2]) -> Option<Mat2<S>> {
        Some(match self.chart {
            Chart::Cartesian => [[S::one(), S::zero()], [S::zero(), S::one()]],
            Chart::Polar => [[S::one(), S::zero()], [S::zero(), x[0] * x[0]]],
        })
    }

    fn rotational_domain(&self, epsilon: f64) -> Option<f64> {
        Some(if epsilon == 0.0 {
            f64::INFINITY
        } else {
            1.0 / epsilon.abs()
        })
    }
}

#[derive(Clone, Debug)]
pub struct NavigationProblem<B, W> {
    pub background: B,
    pub wind: W,
    pub epsilon: f64,
}

/// Number of rays used when the solvability radius has to be searched for.
const DOMAIN_RAYS: usize = 64;

impl<B: Background, W: VectorField> NavigationProblem<B, W> {
    pub fn new(background: B, wind: W, epsilon: f64) -> Result<Self> {
        if background.chart() != wind.chart() {
            return Err(FinslerError::ChartMismatch {
                expected: background.chart(),
                found: wind.chart(),
            });
        }
        Ok(NavigationProblem {
            background,
            wind,
            epsilon,
        })
    }

    pub fn chart(&self) -> Chart {
        self.background.chart()
    }

    /// `Φ(x, −εv)`, which must stay below one.
    pub fn wind_norm(&self, x: [f64; 2]) -> f64 {
        if self.epsilon == 0.0 {
            return 0.0;
        }
        let v = self.wind.eval(&x);
        self.background
            .value(x, [-self.epsilon * v[0], -self.epsilon * v[1]])
    }

    pub fn solvable_at(&self, x: [f64; 2]) -> bool {
        self.background.contains(x) && self.wind_norm(x) < 1.0
    }

    fn unsolvable(&self, x: [f64; 2]) -> FinslerError {
        let n = self.wind_norm(x);
        FinslerError::Unsolvable {
            point: x,
            wind_norm: n,
            max_epsilon: self.epsilon.abs() / n,
        }
    }

    /// Chart radius of the region on which the problem is solvable.
    pub fn deformed_domain(&self) -> f64 {
        let outer = self.background.domain_radius();
        if self.epsilon == 0.0 {
            return outer;
        }
        if self.wind.is_rotation() {
            if let Some(r) = self.background.rotational_domain(self.epsilon) {
                return r.min(outer);
            }
        }
        self.search_domain(outer)
    }

    /// The solvability radius found by bisection along rays, ignoring any closed form.
    pub fn searched_domain(&self) -> f64 {
        let outer = self.background.domain_radius();
        if self.epsilon == 0.0 {
            return outer;
        }
        self.search_domain(outer)
    }

    fn ray_point(&self, r: f64, theta: f64) -> [f64; 2] {
        match self.chart() {
            Chart::Cartesian => [r * theta.cos(), r * theta.sin()],
            Chart::Polar => [r, theta],
        }
    }

    /// Smallest radius along a fan of rays at which solvability first fails.
    fn search_domain(&self, outer: f64) -> f64 {
        let r0 = DEFAULT_R_MIN;
        let hi = if outer.is_finite() {
            outer * (1.0 - 1e-12)
        } else {
            1e3
        };
        let marks = 256;
        let mut best = outer;
        for k in 0..DOMAIN_RAYS {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / DOMAIN_RAYS as f64;
            let ok = |r: f64| self.solvable_at(self.ray_point(r, theta));
            if !ok(r0) {
                return 0.0;
            }
            let mut prev = r0;
            for j in 1..=marks {
                let r = r0 + (hi - r0) * j as f64 / marks as f64;
                if !ok(r) {
                    let (mut lo, mut up) = (prev, r);
                    for _ in 0..80 {
                        let mid = 0.5 * (lo + up);
                        if ok(mid) {
                            lo = mid;
                        } else {
                            up = mid;
                        }
                    }
                    best = best.min(lo);
                    break;
                }
                prev = r;
            }
        }
        best
    }

    /// The closed-form Randers solution for a Riemannian background.
    pub fn solve_riemannian(
        &self,
        requested_radius: Option<f64>,
    ) -> Result<ZermeloRanders<&B, &W>> {
        if !self.background.is_riemannian() {
            return Err(FinslerError::NotRiemannian);
        }
        let radius = self.deformed_domain();
        if let Some(requested) = requested_radius {
            if requested > radius {
                return Err(FinslerError::DomainTooLarge {
                    requested,
                    max_radius: radius,
                });
            }
        }
        Ok(ZermeloRanders {
            background: &self.background,
            wind: &self.wind,
            epsilon: self.epsilon,
            radius,
        })
    }

    /// Owning variant of [`solve_riemannian`](Self::solve_riemannian).
    pub fn into_randers(self) -> Result<ZermeloRanders<B, W>> {
        let radius = self.solve_riemannian(None)?.radius;
        Ok(ZermeloRanders {
            background: self.background,
            wind: self.wind,
            epsilon: self.epsilon,
            radius,
        })
    }

    /// `F(w)`: the unique `t > 0` with `Φ(w/t − εv) = 1`.
    pub fn solve_general(&self, w: &TangentVector) -> Result<f64> {
        check_vector(&self.background, w)?;
        let x = w.x();
        if !self.solvable_at(x) {
            return Err(self.unsolvable(x));
        }
        solve_root(&self.background, x, w.y(), self.wind_vector(x))
    }

    fn wind_vector(&self, x: [f64; 2]) -> [f64; 2] {
        let v = self.wind.eval(&x);
        [self.epsilon * v[0], self.epsilon * v[1]]
    }

    /// `|Φ(y/F − εv) − 1|` for a candidate `F`.
    pub fn defining_residual<M: Metric>(&self, f: &M, x: [f64; 2], y: [f64; 2]) -> f64 {
        let t = f.value(x, y);
        let e = self.wind_vector(x);
        (self.background.value(x, [y[0] / t - e[0], y[1] / t - e[1]]) - 1.0).abs()
    }

    /// The deformed metric evaluated by root finding.
    pub fn general(&self) -> GeneralNavigation<&B, &W> {
        GeneralNavigation {
            problem: NavigationProblem {
                background: &self.background,
                wind: &self.wind,
                epsilon: self.epsilon,
            },
        }
    }

    pub fn into_general(self) -> GeneralNavigation<B, W> {
        GeneralNavigation { problem: self }
    }
}

/// `t ↦ Φ(x, y/t − e)` with its derivative in `t`.
fn root_function<B: Metric>(phi: &B, x: [f64; 2], y: [f64; 2], e: [f64; 2], t: f64) -> (f64, f64) {
    let tj = Jet::<f64, 1>::variable(t, 0);
    let xs = x.map(Jet::constant);
    let z = [y[0] / tj - e[0], y[1] / tj - e[1]];
    let f = phi.eval(&xs, &z);
    (f.v, f.d[0])
}

fn solve_root<B: Metric>(phi: &B, x: [f64; 2], y: [f64; 2], e: [f64; 2]) -> Result<f64> {
    let value = |t: f64| root_function(phi, x, y, e, t).0;
    let py = phi.value(x, y);
    let pe = phi.value(x, e);
    let pme = phi.value(x, [-e[0], -e[1]]);
    let mut lo = py / (1.0 + pe);
    let mut hi = py / (1.0 - pme);
    // The bracket is exact in exact arithmetic; widen it if rounding disagrees.
    for _ in 0..60 {
        if value(lo) >= 1.0 {
            break;
        }
        lo *= 0.5;
    }
    for _ in 0..60 {
        if value(hi) <= 1.0 {
            break;
        }
        hi *= 2.0;
    }
    if !(value(lo) >= 1.0 && value(hi) <= 1.0) {
        return Err(FinslerError::NonMonotone { lo, hi });
    }
    // `Φ(sy − e)` is convex in `s = 1/t` and starts below one, so `φ − 1`
    // changes sign exactly once; `φ` itself need not be monotone past the root.
    let mut below = false;
    for k in 1..=8 {
        let t = lo + (hi - lo) * k as f64 / 9.0;
        let v = value(t);
        if below && v > 1.0 {
            return Err(FinslerError::NonMonotone { lo, hi });
        }
        below |= v <= 1.0;
    }

    let mut t = 0.5 * (lo + hi);
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_ROOT_ITERATIONS {
        let (f, df) = root_function(phi, x, y, e, t);
        let g = f - 1.0;
        residual = g.abs();
        if residual <= 1e-15 {
            return Ok(t);
        }
        if g > 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        let newton = t - g / df;
        let next = if df < 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - t).abs() <= 4.0 * f64::EPSILON * t {
            t = next;
            residual = (value(t) - 1.0).abs();
            break;
        }
        t = next;
    }
    if residual <= ROOT_TOLERANCE {
        Ok(t)
    } else {
        Err(FinslerError::NoConvergence {
            iterations: MAX_ROOT_ITERATIONS,
            residual,
        })
    }
}

/// Randers data of the navigation solution over a Riemannian background.
#[derive(Clone, Debug)]
pub struct ZermeloRanders<B, W> {
    pub background: B,
    pub wind: W,
    pub epsilon: f64,
    /// Chart radius of the solvability region.
    pub radius: f64,
}

impl<B: Background, W: VectorField> RandersData for ZermeloRanders<B, W> {
    fn chart(&self) -> Chart {
        self.background.chart()
    }

    fn contains(&self, x: [f64; 2]) -> bool {
        if !self.background.contains(x) {
            return false;
        }
        let v = self.wind.eval(&x);
        if let Some(h) = self.background.riemannian_matrix(&x) {
            1.0 - self.epsilon * self.epsilon * quad(&h, &v) > 0.0
        } else {
            false
        }
    }

    fn coefficients<S: Scalar>(&self, x: &[S; 2]) -> Coefficients<S> {
        let h = self
            .background
            .riemannian_matrix(x)
            .expect("background checked to be Riemannian");
        let v = self.wind.eval(x);
        let vb = mat_vec(&h, &v);
        let e2 = self.epsilon * self.epsilon;
        let lambda = S::one() - dot(&vb, &v) * e2;
        let l2 = lambda * lambda;
        Coefficients {
            a: std::array::from_fn(|i| {
                std::array::from_fn(|j| (vb[i] * vb[j] * e2 + lambda * h[i][j]) / l2)
            }),
            b: [vb[0] * (-self.epsilon) / lambda, vb[1] * (-self.epsilon) / lambda],
        }
    }
}

/// The navigation metric over an arbitrary background, evaluated by solving
/// the defining equation. Jet inputs are handled by a few chord iterations
/// with the converged slope, which reproduces the implicit derivatives
/// exactly up to the jet's order.
#[derive(Clone, Debug)]
pub struct GeneralNavigation<B, W> {
    pub problem: NavigationProblem<B, W>,
}

impl<B: Background, W: VectorField> Metric for GeneralNavigation<B, W> {
    fn chart(&self) -> Chart {
        self.problem.chart()
    }

    fn contains(&self, x: [f64; 2]) -> bool {
        self.problem.solvable_at(x)
    }

    fn eval<S: Scalar>(&self, x: &[S; 2], y: &[S; 2]) -> S {
        let p = &self.problem;
        let x0 = [x[0].value(), x[1].value()];
        let y0 = [y[0].value(), y[1].value()];
        if !p.solvable_at(x0) || y0 == [0.0, 0.0] {
            return S::cst(f64::NAN);
        }
        let e0 = p.wind_vector(x0);
        let t0 = match solve_root(&p.background, x0, y0, e0) {
            Ok(t) => t,
            Err(_) => return S::cst(f64::NAN),
        };
        if S::DEPTH == 0 {
            return S::cst(t0);
        }
        let slope = root_function(&p.background, x0, y0, e0, t0).1;
        let v = p.wind.eval(x);
        let e = [v[0] * p.epsilon, v[1] * p.epsilon];
        let mut t = S::cst(t0);
        for _ in 0..=S::DEPTH {
            let z = [y[0] / t - e[0], y[1] / t - e[1]];
            t -= (p.background.eval(x, &z) - 1.0) / slope;
        }
        t
    }
}
