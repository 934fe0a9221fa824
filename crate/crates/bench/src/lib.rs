//! Fixtures shared by the benchmarks.

use finsler_core::catalog::CatalogRanders;
use finsler_core::{CatalogEntry, CatalogId, Chart, ChartPoint, RandersMetric, TangentVector};

/// A built catalog metric with one representative tangent vector.
pub struct Fixture {
    pub name: &'static str,
    pub randers: CatalogRanders,
    pub metric: RandersMetric<CatalogRanders>,
    pub sample: TangentVector,
}

pub fn fixture(name: &'static str, id: CatalogId, epsilon: f64, chart: Chart) -> Fixture {
    let randers = CatalogEntry::new(id, epsilon, chart)
        .build()
        .expect("catalog entry builds");
    let r = 0.4 * randers.entry.sampling_radius().min(1.0);
    let base = ChartPoint::cartesian(r * 0.6_f64.cos(), r * 0.6_f64.sin())
        .to_chart(chart)
        .expect("point converts");
    let sample = TangentVector {
        base,
        components: [0.8, -0.35],
    };
    Fixture {
        name,
        metric: randers.metric(),
        randers,
        sample,
    }
}

pub fn fixtures() -> Vec<Fixture> {
    vec![
        fixture("sphere_0.5", CatalogId::SphereFamily, 0.5, Chart::Cartesian),
        fixture("klein_0.5", CatalogId::KleinFamily, 0.5, Chart::Cartesian),
        fixture("funk_0.5", CatalogId::FunkFamily, 0.5, Chart::Cartesian),
        fixture("sphere_radial_0.3", CatalogId::SphereRadial, 0.3, Chart::Polar),
    ]
}
