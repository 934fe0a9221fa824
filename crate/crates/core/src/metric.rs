//! Metric functions `F(x, y)` on a two-dimensional chart.

use crate::chart::{
    cartesian_jacobian, cartesian_to_polar, polar_jacobian, polar_to_cartesian, Chart,
    DEFAULT_R_MIN,
};
use crate::jets::Scalar;
use crate::linalg::{dot, mat_vec, quad};
use crate::randers::RandersData;

/// A positively 1-homogeneous function `F(x, y)` on `TM \ 0`, written
/// generically so the curvature engine can differentiate it with jets.
pub trait Metric: Sync {
    fn chart(&self) -> Chart;

    /// Whether the base point lies inside the region where `F` is a Finsler metric.
    fn contains(&self, x: [f64; 2]) -> bool;

    fn eval<S: Scalar>(&self, x: &[S; 2], y: &[S; 2]) -> S;

    fn value(&self, x: [f64; 2], y: [f64; 2]) -> f64 {
        self.eval(&x, &y)
    }
}

impl<M: Metric + ?Sized> Metric for &M {
    fn chart(&self) -> Chart {
        (**self).chart()
    }
    fn contains(&self, x: [f64; 2]) -> bool {
        (**self).contains(x)
    }
    fn eval<S: Scalar>(&self, x: &[S; 2], y: &[S; 2]) -> S {
        (**self).eval(x, y)
    }
}

/// The flat metric of the plane, in either chart.
#[derive(Clone, Copy, Debug)]
pub struct Euclidean {
    pub chart: Chart,
}

impl Metric for Euclidean {
    fn chart(&self) -> Chart {
        self.chart
    }

    fn contains(&self, x: [f64; 2]) -> bool {
        match self.chart {
            Chart::Cartesian => x.iter().all(|c| c.is_finite()),
            Chart::Polar => x[0] >= DEFAULT_R_MIN,
        }
    }

    fn eval<S: Scalar>(&self, x: &[S; 2], y: &[S; 2]) -> S {
        match self.chart {
            Chart::Cartesian => (y[0] * y[0] + y[1] * y[1]).sqrt(),
            Chart::Polar => (y[0] * y[0] + (x[0] * y[1]).square()).sqrt(),
        }
    }
}

/// `F = α + β` built from Riemannian coefficients and a one-form.
#[derive(Clone, Debug)]
pub struct RandersMetric<R> {
    pub data: R,
}

impl<R: RandersData> RandersMetric<R> {
    pub fn new(data: R) -> Self {
        RandersMetric { data }
    }
}

impl<R: RandersData> Metric for RandersMetric<R> {
    fn chart(&self) -> Chart {
        self.data.chart()
    }

    fn contains(&self, x: [f64; 2]) -> bool {
        self.data.contains(x)
    }

    fn eval<S: Scalar>(&self, x: &[S; 2], y: &[S; 2]) -> S {
        let c = self.data.coefficients(x);
        quad(&c.a, y).sqrt() + dot(&c.b, y)
    }
}

/// Re-expresses a metric in another chart by composing with the coordinate change.
#[derive(Clone, Debug)]
pub struct InChart<M> {
    pub inner: M,
    pub chart: Chart,
}

impl<M: Metric> InChart<M> {
    pub fn new(inner: M, chart: Chart) -> Self {
        InChart { inner, chart }
    }
}

impl<M: Metric> Metric for InChart<M> {
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

    fn eval<S: Scalar>(&self, x: &[S; 2], y: &[S; 2]) -> S {
        match (self.chart, self.inner.chart()) {
            (a, b) if a == b => self.inner.eval(x, y),
            (Chart::Polar, _) => {
                let j = polar_jacobian(x);
                self.inner.eval(&polar_to_cartesian(x), &mat_vec(&j, y))
            }
            (Chart::Cartesian, _) => {
                let j = cartesian_jacobian(x);
                self.inner.eval(&cartesian_to_polar(x), &mat_vec(&j, y))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euclidean_agrees_across_charts() {
        let polar = InChart::new(Euclidean { chart: Chart::Cartesian }, Chart::Polar);
        let direct = Euclidean { chart: Chart::Polar };
        let (x, y) = ([1.3, 0.4], [0.2, -0.7]);
        assert!((polar.value(x, y) - direct.value(x, y)).abs() < 1e-15);
    }
}
