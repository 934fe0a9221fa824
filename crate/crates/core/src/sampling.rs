//! Sample points and directions over a disk in either chart.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chart::{Chart, ChartPoint, TangentVector, DEFAULT_R_MIN};

pub const DEFAULT_SEED: u64 = 1729;

/// Radial × angular × direction counts of a structured grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    pub radial: usize,
    pub angular: usize,
    pub directions: usize,
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            radial: 20,
            angular: 16,
            directions: 8,
        }
    }
}

impl Grid {
    pub fn len(&self) -> usize {
        self.radial * self.angular * self.directions
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Smallest radius used by samplers, as a fraction of the sampling radius.
const INNER_FRACTION: f64 = 0.02;

fn point(chart: Chart, r: f64, theta: f64) -> ChartPoint {
    match chart {
        Chart::Cartesian => ChartPoint::cartesian(r * theta.cos(), r * theta.sin()),
        Chart::Polar => ChartPoint {
            chart,
            coords: [r, theta],
        },
    }
}

fn inner_radius(radius: f64) -> f64 {
    (INNER_FRACTION * radius).max(2.0 * DEFAULT_R_MIN)
}

/// Grid points `r_i = R (i + 1) / n_r` (floored at a small inner radius), evenly
/// spaced angles, and unit chart directions.
pub fn grid_samples(chart: Chart, radius: f64, grid: &Grid) -> Vec<TangentVector> {
    let mut out = Vec::with_capacity(grid.len());
    let r_in = inner_radius(radius);
    for i in 0..grid.radial {
        let r = (radius * (i + 1) as f64 / grid.radial as f64).max(r_in);
        for j in 0..grid.angular {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / grid.angular as f64;
            let base = point(chart, r, theta);
            for k in 0..grid.directions {
                let phi = 0.1 + 2.0 * std::f64::consts::PI * k as f64 / grid.directions as f64;
                out.push(TangentVector {
                    base,
                    components: [phi.cos(), phi.sin()],
                });
            }
        }
    }
    out
}

/// Points uniform in area over the annulus between the inner radius and `radius`.
pub fn random_points(chart: Chart, radius: f64, n: usize, seed: u64) -> Vec<ChartPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r_in = inner_radius(radius);
    (0..n)
        .map(|_| {
            let u: f64 = rng.gen();
            let r = (r_in * r_in + u * (radius * radius - r_in * r_in)).sqrt();
            let theta = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
            point(chart, r, theta)
        })
        .collect()
}

/// Random points with random directions of random length in `[0.2, 2]`.
pub fn random_samples(chart: Chart, radius: f64, n: usize, seed: u64) -> Vec<TangentVector> {
    let points = random_points(chart, radius, n, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    points
        .into_iter()
        .map(|base| {
            let phi: f64 = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
            let len: f64 = rng.gen_range(0.2..2.0);
            TangentVector {
                base,
                components: [len * phi.cos(), len * phi.sin()],
            }
        })
        .collect()
}
