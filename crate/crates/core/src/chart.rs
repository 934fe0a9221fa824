//! Coordinate charts on the plane: cartesian `(x, y)` and polar `(r, θ)`.

use serde::{Deserialize, Serialize};

use crate::error::{FinslerError, Result};
use crate::jets::Scalar;
use crate::linalg::{Mat2, Vec2};

/// Polar points closer to the origin than this are rejected.
pub const DEFAULT_R_MIN: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    Cartesian,
    Polar,
}

impl std::str::FromStr for Chart {
    type Err = FinslerError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cartesian" => Ok(Chart::Cartesian),
            "polar" => Ok(Chart::Polar),
            other => Err(FinslerError::UnknownId(other.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint {
    pub chart: Chart,
    pub coords: [f64; 2],
}

impl ChartPoint {
    pub fn cartesian(x: f64, y: f64) -> Self {
        ChartPoint {
            chart: Chart::Cartesian,
            coords: [x, y],
        }
    }

    pub fn polar(r: f64, theta: f64) -> Result<Self> {
        Self::polar_with_guard(r, theta, DEFAULT_R_MIN)
    }

    pub fn polar_with_guard(r: f64, theta: f64, r_min: f64) -> Result<Self> {
        if !(r >= r_min) {
            return Err(FinslerError::PolarGuard { r, r_min });
        }
        Ok(ChartPoint {
            chart: Chart::Polar,
            coords: [r, theta],
        })
    }

    /// Distance from the origin in chart coordinates.
    pub fn radius(&self) -> f64 {
        match self.chart {
            Chart::Cartesian => self.coords[0].hypot(self.coords[1]),
            Chart::Polar => self.coords[0],
        }
    }

    pub fn to_chart(&self, chart: Chart) -> Result<ChartPoint> {
        match (self.chart, chart) {
            (a, b) if a == b => Ok(*self),
            (Chart::Polar, Chart::Cartesian) => {
                let [r, t] = self.coords;
                Ok(ChartPoint::cartesian(r * t.cos(), r * t.sin()))
            }
            _ => {
                let [x, y] = self.coords;
                ChartPoint::polar(x.hypot(y), y.atan2(x))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangentVector {
    pub base: ChartPoint,
    pub components: [f64; 2],
}

impl TangentVector {
    pub fn new(base: ChartPoint, components: [f64; 2]) -> Result<Self> {
        if components == [0.0, 0.0] {
            return Err(FinslerError::ZeroVector);
        }
        Ok(TangentVector { base, components })
    }

    pub fn x(&self) -> [f64; 2] {
        self.base.coords
    }

    pub fn y(&self) -> [f64; 2] {
        self.components
    }

    pub fn scaled(&self, lambda: f64) -> TangentVector {
        TangentVector {
            base: self.base,
            components: [self.components[0] * lambda, self.components[1] * lambda],
        }
    }

    pub fn to_chart(&self, chart: Chart) -> Result<TangentVector> {
        if chart == self.base.chart {
            return Ok(*self);
        }
        let base = self.base.to_chart(chart)?;
        let [a, b] = self.components;
        let components = match chart {
            Chart::Cartesian => {
                let [r, t] = self.base.coords;
                [a * t.cos() - r * b * t.sin(), a * t.sin() + r * b * t.cos()]
            }
            Chart::Polar => {
                let [x, y] = self.base.coords;
                let r2 = x * x + y * y;
                let r = r2.sqrt();
                [(x * a + y * b) / r, (x * b - y * a) / r2]
            }
        };
        TangentVector::new(base, components)
    }
}

/// Jacobian `∂(x, y)/∂(r, θ)` at a polar point; columns are `∂_r`, `∂_θ`.
pub fn polar_jacobian<S: Scalar>(p: &Vec2<S>) -> Mat2<S> {
    let (c, s) = (p[1].cos(), p[1].sin());
    [[c, -(p[0] * s)], [s, p[0] * c]]
}

/// Jacobian `∂(r, θ)/∂(x, y)` at a cartesian point.
pub fn cartesian_jacobian<S: Scalar>(p: &Vec2<S>) -> Mat2<S> {
    let r2 = p[0] * p[0] + p[1] * p[1];
    let r = r2.sqrt();
    [[p[0] / r, p[1] / r], [-p[1] / r2, p[0] / r2]]
}

pub fn polar_to_cartesian<S: Scalar>(p: &Vec2<S>) -> Vec2<S> {
    [p[0] * p[1].cos(), p[0] * p[1].sin()]
}

pub fn cartesian_to_polar<S: Scalar>(p: &Vec2<S>) -> Vec2<S> {
    [(p[0] * p[0] + p[1] * p[1]).sqrt(), p[1].atan2(p[0])]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polar_guard() {
        assert!(matches!(
            ChartPoint::polar(1e-4, 0.0),
            Err(FinslerError::PolarGuard { .. })
        ));
        assert!(ChartPoint::polar(1e-3, 0.0).is_ok());
    }

    #[test]
    fn zero_vector_rejected() {
        let p = ChartPoint::cartesian(0.1, 0.2);
        assert_eq!(TangentVector::new(p, [0.0, 0.0]), Err(FinslerError::ZeroVector));
    }

    #[test]
    fn vector_round_trip_between_charts() {
        let v = TangentVector::new(ChartPoint::cartesian(0.3, -0.5), [0.7, 1.1]).unwrap();
        let back = v.to_chart(Chart::Polar).unwrap().to_chart(Chart::Cartesian).unwrap();
        for i in 0..2 {
            assert!((back.base.coords[i] - v.base.coords[i]).abs() < 1e-15);
            assert!((back.components[i] - v.components[i]).abs() < 1e-14);
        }
    }
}
