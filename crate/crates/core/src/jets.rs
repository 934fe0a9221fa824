//! Truncated-Taylor scalars for nested forward-mode differentiation.
//!
//! A [`Jet<T, N>`] carries a value and `N` directional partials, each of type
//! `T`. Nesting jets (`Jet<Jet<f64, 2>, 4>` and deeper) yields exact mixed
//! partials: every level seeds its own directions and the chain rule is applied
//! level by level, so no finite differencing is involved anywhere.
//!
//! Code that should be differentiable is written once, generically over
//! [`Scalar`], and then evaluated with whatever jet type supplies the
//! derivatives it needs.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::error::{FinslerError, Result};

/// Real scalar arithmetic shared by `f64` and every jet type.
pub trait Scalar:
    Copy
    + Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    /// Number of nested jet levels (0 for `f64`).
    const DEPTH: usize;

    fn cst(v: f64) -> Self;
    /// The plain real value, stripped of every derivative layer.
    fn value(&self) -> f64;

    fn sqrt(self) -> Self;
    fn recip(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn sinh(self) -> Self;
    fn cosh(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    /// Four-quadrant arctangent of `self / x`.
    fn atan2(self, x: Self) -> Self;
    fn powi(self, n: i32) -> Self;

    /// Appends every coefficient, value first, in nesting order.
    fn flatten(&self, out: &mut Vec<f64>);

    #[inline]
    fn zero() -> Self {
        Self::cst(0.0)
    }

    #[inline]
    fn one() -> Self {
        Self::cst(1.0)
    }

    #[inline]
    fn square(self) -> Self {
        self * self
    }
}

impl Scalar for f64 {
    const DEPTH: usize = 0;

    #[inline]
    fn cst(v: f64) -> Self {
        v
    }
    #[inline]
    fn value(&self) -> f64 {
        *self
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline]
    fn recip(self) -> Self {
        f64::recip(self)
    }
    #[inline]
    fn sin(self) -> Self {
        f64::sin(self)
    }
    #[inline]
    fn cos(self) -> Self {
        f64::cos(self)
    }
    #[inline]
    fn sinh(self) -> Self {
        f64::sinh(self)
    }
    #[inline]
    fn cosh(self) -> Self {
        f64::cosh(self)
    }
    #[inline]
    fn exp(self) -> Self {
        f64::exp(self)
    }
    #[inline]
    fn ln(self) -> Self {
        f64::ln(self)
    }
    #[inline]
    fn atan2(self, x: Self) -> Self {
        f64::atan2(self, x)
    }
    #[inline]
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
    fn flatten(&self, out: &mut Vec<f64>) {
        out.push(*self);
    }
}

/// Value plus `N` first-order partials, each itself a scalar of type `T`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet<T, const N: usize> {
    pub v: T,
    pub d: [T; N],
}

impl<T: Scalar, const N: usize> Jet<T, N> {
    #[inline]
    pub fn constant(v: T) -> Self {
        Jet {
            v,
            d: [T::zero(); N],
        }
    }

    /// Independent variable seeded along direction `k`.
    #[inline]
    pub fn variable(v: T, k: usize) -> Self {
        let mut d = [T::zero(); N];
        d[k] = T::one();
        Jet { v, d }
    }

    #[inline]
    fn chain(self, f: T, df: T) -> Self {
        Jet {
            v: f,
            d: self.d.map(|x| x * df),
        }
    }
}

impl<T: Scalar, const N: usize> Add for Jet<T, N> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Jet {
            v: self.v + o.v,
            d: std::array::from_fn(|i| self.d[i] + o.d[i]),
        }
    }
}

impl<T: Scalar, const N: usize> Sub for Jet<T, N> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Jet {
            v: self.v - o.v,
            d: std::array::from_fn(|i| self.d[i] - o.d[i]),
        }
    }
}

impl<T: Scalar, const N: usize> Mul for Jet<T, N> {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        Jet {
            v: self.v * o.v,
            d: std::array::from_fn(|i| self.v * o.d[i] + self.d[i] * o.v),
        }
    }
}

impl<T: Scalar, const N: usize> Div for Jet<T, N> {
    type Output = Self;
    #[inline]
    fn div(self, o: Self) -> Self {
        let inv = o.v.recip();
        let q = self.v * inv;
        Jet {
            v: q,
            d: std::array::from_fn(|i| (self.d[i] - q * o.d[i]) * inv),
        }
    }
}

impl<T: Scalar, const N: usize> Neg for Jet<T, N> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Jet {
            v: -self.v,
            d: self.d.map(|x| -x),
        }
    }
}

impl<T: Scalar, const N: usize> Add<f64> for Jet<T, N> {
    type Output = Self;
    #[inline]
    fn add(self, o: f64) -> Self {
        Jet {
            v: self.v + o,
            d: self.d,
        }
    }
}

impl<T: Scalar, const N: usize> Sub<f64> for Jet<T, N> {
    type Output = Self;
    #[inline]
    fn sub(self, o: f64) -> Self {
        Jet {
            v: self.v - o,
            d: self.d,
        }
    }
}

impl<T: Scalar, const N: usize> Mul<f64> for Jet<T, N> {
    type Output = Self;
    #[inline]
    fn mul(self, o: f64) -> Self {
        Jet {
            v: self.v * o,
            d: self.d.map(|x| x * o),
        }
    }
}

impl<T: Scalar, const N: usize> Div<f64> for Jet<T, N> {
    type Output = Self;
    #[inline]
    fn div(self, o: f64) -> Self {
        self * o.recip()
    }
}

impl<T: Scalar, const N: usize> Add<Jet<T, N>> for f64 {
    type Output = Jet<T, N>;
    #[inline]
    fn add(self, o: Jet<T, N>) -> Jet<T, N> {
        o + self
    }
}

impl<T: Scalar, const N: usize> Sub<Jet<T, N>> for f64 {
    type Output = Jet<T, N>;
    #[inline]
    fn sub(self, o: Jet<T, N>) -> Jet<T, N> {
        -o + self
    }
}

impl<T: Scalar, const N: usize> Mul<Jet<T, N>> for f64 {
    type Output = Jet<T, N>;
    #[inline]
    fn mul(self, o: Jet<T, N>) -> Jet<T, N> {
        o * self
    }
}

impl<T: Scalar, const N: usize> Div<Jet<T, N>> for f64 {
    type Output = Jet<T, N>;
    #[inline]
    fn div(self, o: Jet<T, N>) -> Jet<T, N> {
        o.recip() * self
    }
}

impl<T: Scalar, const N: usize> AddAssign for Jet<T, N> {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Scalar, const N: usize> SubAssign for Jet<T, N> {
    #[inline]
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl<T: Scalar, const N: usize> MulAssign for Jet<T, N> {
    #[inline]
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
    }
}

impl<T: Scalar, const N: usize> Scalar for Jet<T, N> {
    const DEPTH: usize = T::DEPTH + 1;

    #[inline]
    fn cst(v: f64) -> Self {
        Jet::constant(T::cst(v))
    }

    #[inline]
    fn value(&self) -> f64 {
        self.v.value()
    }

    #[inline]
    fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        self.chain(s, (s * 2.0).recip())
    }

    #[inline]
    fn recip(self) -> Self {
        let r = self.v.recip();
        self.chain(r, -(r * r))
    }

    #[inline]
    fn sin(self) -> Self {
        self.chain(self.v.sin(), self.v.cos())
    }

    #[inline]
    fn cos(self) -> Self {
        self.chain(self.v.cos(), -self.v.sin())
    }

    #[inline]
    fn sinh(self) -> Self {
        self.chain(self.v.sinh(), self.v.cosh())
    }

    #[inline]
    fn cosh(self) -> Self {
        self.chain(self.v.cosh(), self.v.sinh())
    }

    #[inline]
    fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e)
    }

    #[inline]
    fn ln(self) -> Self {
        self.chain(self.v.ln(), self.v.recip())
    }

    fn atan2(self, x: Self) -> Self {
        let r2_inv = (x.v * x.v + self.v * self.v).recip();
        Jet {
            v: self.v.atan2(x.v),
            d: std::array::from_fn(|i| (x.v * self.d[i] - self.v * x.d[i]) * r2_inv),
        }
    }

    fn powi(self, n: i32) -> Self {
        match n {
            0 => Self::one(),
            1 => self,
            _ => self.chain(self.v.powi(n), self.v.powi(n - 1) * n as f64),
        }
    }

    fn flatten(&self, out: &mut Vec<f64>) {
        self.v.flatten(out);
        for d in &self.d {
            d.flatten(out);
        }
    }
}

/// Jets that carry value, first partials in all four `(x, y)` directions, and
/// mixed partials against the two fibre (`y`) directions.
///
/// This is the shape the spray and curvature code needs: `F²` differentiated
/// twice with at least one fibre derivative.
pub type FibreJet<T> = Jet<Jet<T, 2>, 4>;

/// Partial derivatives of one scalar extracted from a [`FibreJet`].
#[derive(Clone, Copy, Debug)]
pub struct FibrePartials<T> {
    pub val: T,
    pub dx: [T; 2],
    pub dy: [T; 2],
    /// `dxdy[k][j] = ∂²/∂x^k∂y^j`
    pub dxdy: [[T; 2]; 2],
    /// `dydy[l][j] = ∂²/∂y^l∂y^j`
    pub dydy: [[T; 2]; 2],
}

/// Seeds base coordinates `x` and fibre coordinates `y` as [`FibreJet`]
/// variables; directions 0,1 are `x`, 2,3 are `y`.
pub fn seed_fibre<T: Scalar>(x: [T; 2], y: [T; 2]) -> ([FibreJet<T>; 2], [FibreJet<T>; 2]) {
    let outer = |a: usize| -> [Jet<T, 2>; 4] {
        std::array::from_fn(|b| Jet::constant(if a == b { T::one() } else { T::zero() }))
    };
    let xs = std::array::from_fn(|k| Jet {
        v: Jet::constant(x[k]),
        d: outer(k),
    });
    let ys = std::array::from_fn(|j| Jet {
        v: Jet::variable(y[j], j),
        d: outer(2 + j),
    });
    (xs, ys)
}

impl<T: Scalar> FibrePartials<T> {
    pub fn extract(j: &FibreJet<T>) -> Self {
        FibrePartials {
            val: j.v.v,
            dx: [j.d[0].v, j.d[1].v],
            dy: [j.v.d[0], j.v.d[1]],
            dxdy: [[j.d[0].d[0], j.d[0].d[1]], [j.d[1].d[0], j.d[1].d[1]]],
            dydy: [[j.d[2].d[0], j.d[2].d[1]], [j.d[3].d[0], j.d[3].d[1]]],
        }
    }
}

/// A scalar field on `Rⁿ` written generically so it can be evaluated over jets.
pub trait ScalarField {
    fn eval<S: Scalar>(&self, p: &[S]) -> S;
}

/// Deepest seeded nesting [`lift`] supports.
pub const MAX_LIFT_DEPTH: usize = 4;

/// Result of [`lift`]: the value and every mixed directional partial over
/// subsets of the seed list.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftedJet {
    depth: usize,
    coeffs: Vec<f64>,
}

impl LiftedJet {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// Mixed directional partial along the seeds named by index. Repeated
    /// indices are not meaningful: pass each seed at most once.
    pub fn partial(&self, seeds: &[usize]) -> f64 {
        let mask = seeds.iter().fold(0usize, |m, &s| m | (1 << s));
        self.coeffs[mask]
    }

    /// Partial along every seed at once.
    pub fn mixed(&self) -> f64 {
        self.coeffs[self.coeffs.len() - 1]
    }
}

fn raise<T: Scalar>(xs: &[T], seed: &[f64]) -> Vec<Jet<T, 1>> {
    xs.iter()
        .zip(seed)
        .map(|(&x, &s)| Jet {
            v: x,
            d: [T::cst(s)],
        })
        .collect()
}

/// Evaluates `f` at `point` with one nested jet level per seed direction.
///
/// Seed `i` is applied at nesting level `i`; seeding the same direction twice
/// yields second derivatives along it.
pub fn lift<F: ScalarField>(f: &F, point: &[f64], seeds: &[Vec<f64>]) -> Result<LiftedJet> {
    let depth = seeds.len();
    if depth > MAX_LIFT_DEPTH {
        return Err(FinslerError::UnsupportedOrder {
            requested: depth,
            max: MAX_LIFT_DEPTH,
        });
    }
    if let Some(bad) = seeds.iter().find(|s| s.len() != point.len()) {
        return Err(FinslerError::DimensionMismatch {
            expected: point.len(),
            found: bad.len(),
        });
    }
    let mut coeffs = Vec::with_capacity(1 << depth);
    match depth {
        0 => f.eval(point).flatten(&mut coeffs),
        1 => f.eval(&raise(point, &seeds[0])).flatten(&mut coeffs),
        2 => f
            .eval(&raise(&raise(point, &seeds[0]), &seeds[1]))
            .flatten(&mut coeffs),
        3 => f
            .eval(&raise(&raise(&raise(point, &seeds[0]), &seeds[1]), &seeds[2]))
            .flatten(&mut coeffs),
        _ => f
            .eval(&raise(
                &raise(&raise(&raise(point, &seeds[0]), &seeds[1]), &seeds[2]),
                &seeds[3],
            ))
            .flatten(&mut coeffs),
    }
    Ok(LiftedJet { depth, coeffs })
}
