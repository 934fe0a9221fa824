//! Theorem-verification runs: every catalog claim is checked numerically over
//! a structured grid and over seeded random samples.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{build_with_residual, CatalogEntry, CatalogId, CatalogRanders};
use crate::chart::{Chart, ChartPoint, TangentVector};
use crate::error::{FinslerError, Result};
use crate::finsler::{bh_volume_density, curvature_report, riemann, spray};
use crate::linalg::{frobenius, norm2, sub_mat};
use crate::metric::InChart;
use crate::navigation::Background;
use crate::randers::{
    classify_s_curvature, diagnostics, gauss_curvature_riemannian, randers_ricci, randers_riemann,
    randers_spray, Diagnostics, SCurvatureClass, DIAGNOSTIC_TOLERANCE,
};
use crate::sampling::{grid_samples, random_points, random_samples, Grid, DEFAULT_SEED};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Theorem {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "3")]
    Three,
    #[serde(rename = "remarks")]
    Remarks,
}

impl Theorem {
    pub fn entries(&self) -> &'static [CatalogId] {
        match self {
            Theorem::One => &[CatalogId::SphereFamily],
            Theorem::Two => &[CatalogId::KleinFamily],
            Theorem::Three => &[CatalogId::FunkFamily],
            Theorem::Remarks => &[
                CatalogId::SphereRadial,
                CatalogId::HyperbolicRadial,
                CatalogId::PoincareDeformed,
                CatalogId::KMinusFour,
            ],
        }
    }

    pub fn default_epsilons(&self) -> Vec<f64> {
        match self {
            Theorem::One => vec![0.0, 0.3, 0.5, 0.9, 1.0, 1.5],
            Theorem::Two | Theorem::Three => vec![0.0, 0.3, 0.5, 0.9, 1.0],
            Theorem::Remarks => vec![0.0, 0.3, 0.5, 0.9],
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Theorem::One => "1",
            Theorem::Two => "2",
            Theorem::Three => "3",
            Theorem::Remarks => "remarks",
        })
    }
}

impl FromStr for Theorem {
    type Err = FinslerError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "1" => Ok(Theorem::One),
            "2" => Ok(Theorem::Two),
            "3" => Ok(Theorem::Three),
            "remarks" | "r" => Ok(Theorem::Remarks),
            _ => Err(FinslerError::UnknownId(s.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Absolute, on flag curvature and the constant-curvature form.
    pub curvature: f64,
    /// Relative to `F`.
    pub s_curvature: f64,
    /// Relative, on the Gauss curvature of `α`.
    pub gauss: f64,
    pub volume: f64,
    /// Closed-form Randers formulas against the generic engine.
    pub oracle: f64,
    pub transcription: f64,
    /// Euler identity, `R y = 0`, and the fitted isotropy constant.
    pub identity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            curvature: 1e-7,
            s_curvature: 1e-6,
            gauss: 1e-9,
            volume: 1e-7,
            oracle: 1e-7,
            transcription: 1e-12,
            identity: 1e-9,
        }
    }
}

pub const MIN_GRID: Grid = Grid {
    radial: 5,
    angular: 5,
    directions: 4,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub theorem: Theorem,
    pub epsilons: Vec<f64>,
    pub grid: Grid,
    pub seed: u64,
    /// Random points for the volume, classification and diagnostics checks.
    pub random_points: usize,
    /// Random tangent vectors for the closed-form vs engine comparison.
    pub oracle_samples: usize,
    /// Chart to verify in; `None` uses each entry's native chart.
    pub chart: Option<Chart>,
    pub tolerances: Tolerances,
}

impl VerifyConfig {
    pub fn new(theorem: Theorem) -> Self {
        VerifyConfig {
            theorem,
            epsilons: theorem.default_epsilons(),
            grid: Grid::default(),
            seed: DEFAULT_SEED,
            random_points: 50,
            oracle_samples: 100,
            chart: None,
            tolerances: Tolerances::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.grid;
        if g.radial < MIN_GRID.radial || g.angular < MIN_GRID.angular || g.directions < MIN_GRID.directions {
            return Err(FinslerError::InvalidConfig(format!(
                "grid {}x{}x{} is smaller than {}x{}x{}",
                g.radial, g.angular, g.directions, MIN_GRID.radial, MIN_GRID.angular, MIN_GRID.directions
            )));
        }
        if self.epsilons.is_empty() {
            return Err(FinslerError::InvalidConfig("empty epsilon list".into()));
        }
        if self.random_points < crate::randers::MIN_CLASSIFY_SAMPLES {
            return Err(FinslerError::InvalidConfig(format!(
                "need at least {} random points",
                crate::randers::MIN_CLASSIFY_SAMPLES
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub name: String,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckSummary {
    fn within(name: &str, residuals: &[f64], tolerance: f64) -> Self {
        // NaN propagates to a failure.
        let max_residual = residuals
            .iter()
            .fold(0.0_f64, |m, &r| if r.is_nan() || m.is_nan() { f64::NAN } else { m.max(r) });
        CheckSummary {
            name: name.to_string(),
            samples: residuals.len(),
            max_residual,
            tolerance,
            passed: max_residual <= tolerance,
        }
    }
}

/// Condensed curvature report for one grid sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    pub point: [f64; 2],
    pub direction: [f64; 2],
    pub f: f64,
    pub flag_curvature: f64,
    pub s_over_f: f64,
    pub euler: f64,
    pub riemann_kernel: f64,
    pub constant_curvature_form: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryRun {
    pub entry: CatalogEntry,
    pub domain_radius: f64,
    pub sampling_radius: f64,
    pub checks: Vec<CheckSummary>,
    pub s_class: Option<SCurvatureClass>,
    pub diagnostics: Option<Diagnostics>,
    pub errors: Vec<String>,
    pub samples: Vec<SampleSummary>,
    pub passed: bool,
}

impl EntryRun {
    pub fn check(&self, name: &str) -> Option<&CheckSummary> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationRun {
    pub config: VerifyConfig,
    pub runs: Vec<EntryRun>,
    /// Worst residual of each check over all runs.
    pub max_residuals: BTreeMap<String, f64>,
    pub passed: bool,
}

impl VerificationRun {
    /// Pass/fail of every check, keyed by `(id, ε, check)` in run order.
    pub fn verdicts(&self) -> Vec<(String, f64, String, bool)> {
        self.runs
            .iter()
            .flat_map(|r| {
                r.checks
                    .iter()
                    .map(move |c| (r.entry.id.to_string(), r.entry.epsilon, c.name.clone(), c.passed))
            })
            .collect()
    }
}

/// The parts of a written report needed to replay it.
#[derive(Clone, Debug, Deserialize)]
pub struct RecordedRun {
    pub config: VerifyConfig,
    pub runs: Vec<RecordedEntry>,
    pub passed: bool,
}

#[derive(Clone, Debug, Deserialize)]
pub struct RecordedEntry {
    pub entry: CatalogEntry,
    pub checks: Vec<RecordedCheck>,
}

/// Residuals may have been written as `null`, so only the verdict is read back.
#[derive(Clone, Debug, Deserialize)]
pub struct RecordedCheck {
    pub name: String,
    pub passed: bool,
}

impl RecordedRun {
    pub fn verdicts(&self) -> Vec<(String, f64, String, bool)> {
        self.runs
            .iter()
            .flat_map(|r| {
                r.checks
                    .iter()
                    .map(move |c| (r.entry.id.to_string(), r.entry.epsilon, c.name.clone(), c.passed))
            })
            .collect()
    }
}

pub fn run(config: &VerifyConfig) -> Result<VerificationRun> {
    config.validate()?;
    let mut runs = Vec::new();
    for &id in config.theorem.entries() {
        for &epsilon in &config.epsilons {
            let chart = config.chart.unwrap_or(id.native_chart());
            runs.push(verify_entry(&CatalogEntry::new(id, epsilon, chart), config)?);
        }
    }
    let mut max_residuals: BTreeMap<String, f64> = BTreeMap::new();
    for c in runs.iter().flat_map(|r| &r.checks) {
        let slot = max_residuals.entry(c.name.clone()).or_insert(0.0);
        if c.max_residual.is_nan() || *slot < c.max_residual {
            *slot = c.max_residual;
        }
    }
    let passed = runs.iter().all(|r| r.passed);
    Ok(VerificationRun {
        config: config.clone(),
        runs,
        max_residuals,
        passed,
    })
}

/// Seed for one entry, so adding entries does not reshuffle the others.
fn entry_seed(seed: u64, entry: &CatalogEntry) -> u64 {
    let idx = CatalogId::ALL.iter().position(|&i| i == entry.id).unwrap_or(0) as u64;
    seed ^ idx.wrapping_mul(0x1000_0000_01b3) ^ entry.epsilon.to_bits().rotate_left(17)
}

fn rel(diff: f64, scale: f64) -> f64 {
    diff / scale.max(f64::MIN_POSITIVE)
}

/// The full suite for one entry. Construction errors propagate; errors at
/// individual samples are recorded and fail the run.
pub fn verify_entry(entry: &CatalogEntry, config: &VerifyConfig) -> Result<EntryRun> {
    let tol = &config.tolerances;
    let expected = entry.expected();
    let (built, transcription) = build_with_residual(entry)?;
    let metric = built.metric();
    let radius = entry.sampling_radius();
    let seed = entry_seed(config.seed, entry);
    let mut checks = vec![CheckSummary::within(
        "transcription",
        &[transcription],
        // The root-found route carries the solver residual.
        if entry.navigation().background.is_riemannian() {
            tol.transcription
        } else {
            tol.transcription.max(crate::catalog::ROOT_TRANSCRIPTION_TOLERANCE)
        },
    )];
    let mut errors = Vec::new();

    // Grid: flag curvature, S-curvature, identities.
    let grid = grid_samples(entry.chart, radius, &config.grid);
    let reports: Vec<_> = grid.par_iter().map(|v| curvature_report(&metric, v)).collect();
    let mut samples = Vec::with_capacity(grid.len());
    for (v, r) in grid.iter().zip(reports) {
        match r {
            Ok(r) => samples.push(SampleSummary {
                point: r.point.coords,
                direction: r.direction,
                f: r.f,
                flag_curvature: r.flag_curvature,
                s_over_f: r.s_curvature / r.f,
                euler: r.residuals["euler"],
                riemann_kernel: r.residuals["riemann_kernel"],
                constant_curvature_form: r.residuals["constant_curvature_form"],
            }),
            Err(e) => errors.push(format!("grid sample {:?} {:?}: {e}", v.base.coords, v.components)),
        }
    }
    let col = |f: &dyn Fn(&SampleSummary) -> f64| samples.iter().map(f).collect::<Vec<_>>();
    checks.push(CheckSummary::within(
        "flag_curvature",
        &col(&|s| (s.flag_curvature - expected.flag_k).abs()),
        tol.curvature,
    ));
    checks.push(CheckSummary::within(
        "s_curvature",
        &col(&|s| (s.s_over_f - expected.s_coeff).abs()),
        tol.s_curvature,
    ));
    checks.push(CheckSummary::within(
        "constant_curvature_form",
        &col(&|s| s.constant_curvature_form),
        tol.curvature,
    ));
    checks.push(CheckSummary::within("euler", &col(&|s| s.euler), tol.identity));
    checks.push(CheckSummary::within(
        "riemann_kernel",
        &col(&|s| s.riemann_kernel),
        tol.identity,
    ));

    // Gauss curvature of α at the grid points.
    let points: Vec<ChartPoint> = grid
        .iter()
        .step_by(config.grid.directions.max(1))
        .map(|v| v.base)
        .collect();
    if let Some(formula) = expected.gauss_formula {
        let res = collect_residuals(&points, &mut errors, "gauss", |p| {
            let k = gauss_curvature_riemannian(&built, p)?;
            let want = formula.eval(entry.epsilon, p.radius());
            Ok((k - want).abs() / want.abs().max(1.0))
        });
        checks.push(CheckSummary::within("gauss_curvature", &res, tol.gauss));
    }
    if entry.id == CatalogId::FunkFamily {
        let klein = CatalogEntry::new(CatalogId::KleinFamily, entry.epsilon, entry.chart).build()?;
        let res = collect_residuals(&points, &mut errors, "gauss_equality", |p| {
            let a = gauss_curvature_riemannian(&built, p)?;
            let b = gauss_curvature_riemannian(&klein, p)?;
            Ok((a - b).abs() / b.abs().max(1.0))
        });
        checks.push(CheckSummary::within("gauss_equality", &res, tol.gauss));
    }

    // Volume invariance against the undeformed background.
    let random = random_points(entry.chart, radius, config.random_points, seed);
    let background = InChart::new(entry.navigation().background, entry.chart);
    let res = collect_residuals(&random, &mut errors, "volume", |p| {
        let a = bh_volume_density(&metric, p)?;
        let b = bh_volume_density(&background, p)?;
        Ok(rel((a - b).abs(), b))
    });
    checks.push(CheckSummary::within("volume_invariance", &res, tol.volume));

    // Closed-form Randers formulas against the generic engine.
    let c = expected.s_coeff / 3.0;
    let oracle = random_samples(entry.chart, radius, config.oracle_samples, seed.wrapping_add(1));
    let rows: Vec<Result<[f64; 4]>> = oracle
        .par_iter()
        .map(|v| oracle_residuals(&built, v, c, expected.flag_k))
        .collect();
    let mut table: [Vec<f64>; 4] = Default::default();
    for (v, row) in oracle.iter().zip(rows) {
        match row {
            Ok(r) => {
                for k in 0..4 {
                    table[k].push(r[k]);
                }
            }
            Err(e) => errors.push(format!("oracle sample {:?} {:?}: {e}", v.base.coords, v.components)),
        }
    }
    for (k, name) in ["oracle_spray", "oracle_riemann", "oracle_ricci", "ricci_identity"]
        .iter()
        .enumerate()
    {
        checks.push(CheckSummary::within(name, &table[k], tol.oracle));
    }

    // S-curvature class and β flags.
    let s_class = match classify_s_curvature(&built, &random) {
        Ok(class) => {
            let residual = class.c().map_or(f64::INFINITY, |got| (got - c).abs());
            checks.push(CheckSummary::within("s_class", &[residual], tol.identity));
            Some(class)
        }
        Err(e) => {
            errors.push(format!("classification: {e}"));
            None
        }
    };
    let diag = match diagnostics(&built, &random) {
        Ok(d) => {
            // β is closed exactly for the undeformed metric.
            let want_closed = entry.epsilon == 0.0;
            checks.push(CheckSummary {
                name: "beta_closed".into(),
                samples: random.len(),
                max_residual: d.max_s,
                tolerance: DIAGNOSTIC_TOLERANCE,
                passed: d.beta_closed == want_closed,
            });
            Some(d)
        }
        Err(e) => {
            errors.push(format!("diagnostics: {e}"));
            None
        }
    };

    let passed = errors.is_empty() && checks.iter().all(|c| c.passed);
    Ok(EntryRun {
        entry: *entry,
        domain_radius: entry.domain_radius(),
        sampling_radius: radius,
        checks,
        s_class,
        diagnostics: diag,
        errors,
        samples,
        passed,
    })
}

fn collect_residuals<T: Sync, F>(items: &[T], errors: &mut Vec<String>, what: &str, f: F) -> Vec<f64>
where
    F: Fn(&T) -> Result<f64> + Sync + Send,
{
    let mut out = Vec::with_capacity(items.len());
    for r in items.par_iter().map(f).collect::<Vec<_>>() {
        match r {
            Ok(v) => out.push(v),
            Err(e) => errors.push(format!("{what}: {e}")),
        }
    }
    out
}

/// Relative errors of the closed-form spray, Riemann operator and Ricci scalar
/// against the engine, and of the Ricci scalar against `K F²`.
pub fn oracle_residuals(built: &CatalogRanders, v: &TangentVector, c: f64, k: f64) -> Result<[f64; 4]> {
    let metric = built.metric();
    let f = crate::metric::Metric::value(&metric, v.x(), v.y());
    let f2 = f * f;
    let g_ad = spray(&metric, v)?.coefficients;
    let g_cf = randers_spray(built, v)?.coefficients;
    let r_ad = riemann(&metric, v)?;
    let r_cf = randers_riemann(built, v, c)?;
    let ric = randers_ricci(built, v, c)?;
    let dg = [g_cf[0] - g_ad[0], g_cf[1] - g_ad[1]];
    Ok([
        rel(norm2(&dg), norm2(&g_ad).max(f2)),
        rel(frobenius(&sub_mat(&r_cf.r, &r_ad.r)), frobenius(&r_ad.r).max(f2)),
        rel((ric - r_ad.trace()).abs(), r_ad.trace().abs().max(f2)),
        rel((ric - k * f2).abs(), f2),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_small_grid() {
        let mut cfg = VerifyConfig::new(Theorem::One);
        cfg.grid = Grid {
            radial: 4,
            angular: 5,
            directions: 4,
        };
        assert!(matches!(run(&cfg), Err(FinslerError::InvalidConfig(_))));
    }

    #[test]
    fn theorem_round_trip() {
        for t in [Theorem::One, Theorem::Two, Theorem::Three, Theorem::Remarks] {
            assert_eq!(t.to_string().parse::<Theorem>().unwrap(), t);
        }
    }

    #[test]
    fn small_sphere_run_passes() {
        let mut cfg = VerifyConfig::new(Theorem::One);
        cfg.epsilons = vec![0.5];
        cfg.grid = MIN_GRID;
        cfg.random_points = 10;
        cfg.oracle_samples = 10;
        let run = run(&cfg).unwrap();
        assert!(run.passed, "{:#?}", run.runs[0].checks);
    }
}
