use std::fmt::Write as _;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use serde::Serialize;

use finsler_core::catalog::{BackgroundKind, CatalogBackground, Expected};
use finsler_core::chart::{Chart, ChartPoint, TangentVector};
use finsler_core::navigation::{Background, ConstantWind, NavigationProblem, Rotation, VectorField};
use finsler_core::sampling::{grid_samples, random_points, Grid, DEFAULT_SEED};
use finsler_core::verify::{self, RecordedRun, Theorem, Tolerances, VerificationRun, VerifyConfig};
use finsler_core::{
    curvature_report, gauss_curvature_riemannian, geodesic_flow, CatalogEntry, CatalogId,
    CurvatureReport, Metric, RandersMetric,
};

use crate::args::{parse_grid, EvalArgs, GeodesicArgs, NavigateArgs, ScanArgs, VerifyArgs};
use crate::output::{csv_row, emit, fmt_f64, to_json};

/// Exit status for a failed verification.
pub const EXIT_FAIL: u8 = 1;

fn required<T>(v: Option<T>, flag: &str) -> anyhow::Result<T> {
    v.ok_or_else(|| anyhow!("missing required flag --{flag}"))
}

fn parse_chart(s: Option<&str>) -> anyhow::Result<Option<Chart>> {
    s.map(|c| c.parse::<Chart>().map_err(|e| anyhow!("{e}")))
        .transpose()
}

fn pair(v: Vec<f64>, flag: &str) -> anyhow::Result<[f64; 2]> {
    <[f64; 2]>::try_from(v).map_err(|_| anyhow!("--{flag} takes two numbers"))
}

fn entry(metric: Option<String>, eps: Option<f64>, chart: Chart) -> anyhow::Result<CatalogEntry> {
    let id: CatalogId = required(metric, "metric")?.parse()?;
    Ok(CatalogEntry::new(id, eps.unwrap_or(0.0), chart))
}

/// The tangent vector given by `--point`/`--polar` and `--dir`, expressed in
/// `chart` (or the chart it was given in).
fn tangent(
    point: Option<Vec<f64>>,
    polar: Option<Vec<f64>>,
    dir: Option<Vec<f64>>,
    chart: Option<Chart>,
) -> anyhow::Result<(Chart, TangentVector)> {
    let base = match (point, polar) {
        (Some(p), None) => {
            let [x, y] = pair(p, "point")?;
            ChartPoint::cartesian(x, y)
        }
        (None, Some(p)) => {
            let [r, t] = pair(p, "polar")?;
            ChartPoint::polar(r, t)?
        }
        (None, None) => bail!("give the base point with --point X Y or --polar R THETA"),
        (Some(_), Some(_)) => bail!("--point and --polar are exclusive"),
    };
    let dir = pair(required(dir, "dir")?, "dir")?;
    let chart = chart.unwrap_or(base.chart);
    let v = TangentVector::new(base, dir)?.to_chart(chart)?;
    Ok((chart, v))
}

#[derive(Serialize)]
struct EvalOutput {
    entry: CatalogEntry,
    expected: Expected,
    report: CurvatureReport,
    s_over_f: f64,
    gauss_curvature_alpha: f64,
    expected_gauss_curvature_alpha: Option<f64>,
}

pub fn eval(a: EvalArgs) -> anyhow::Result<ExitCode> {
    let chart = parse_chart(a.chart.as_deref())?;
    let (chart, v) = tangent(a.point, a.polar, a.dir, chart)?;
    let entry = entry(a.metric, a.eps, chart)?;
    let built = entry.build()?;
    let report = curvature_report(&built.metric(), &v)?;
    let out = EvalOutput {
        entry,
        expected: entry.expected(),
        s_over_f: report.s_curvature / report.f,
        gauss_curvature_alpha: gauss_curvature_riemannian(&built, &v.base)?,
        expected_gauss_curvature_alpha: entry.expected_gauss(v.base.radius()),
        report,
    };
    emit(&to_json(&out)?, a.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn apply_tolerances(t: &mut Tolerances, overrides: &[String]) -> anyhow::Result<()> {
    for o in overrides {
        let (name, value) = o
            .split_once('=')
            .ok_or_else(|| anyhow!("tolerance override {o:?} is not NAME=VALUE"))?;
        let value: f64 = value
            .trim()
            .parse()
            .with_context(|| format!("tolerance {name} = {value:?}"))?;
        let slot = match name.trim() {
            "curvature" => &mut t.curvature,
            "s_curvature" | "s-curvature" => &mut t.s_curvature,
            "gauss" => &mut t.gauss,
            "volume" => &mut t.volume,
            "oracle" => &mut t.oracle,
            "transcription" => &mut t.transcription,
            "identity" => &mut t.identity,
            other => bail!("unknown tolerance {other:?}"),
        };
        *slot = value;
    }
    Ok(())
}

fn verify_config(a: &VerifyArgs) -> anyhow::Result<VerifyConfig> {
    let theorem: Theorem = required(a.theorem.as_deref(), "theorem")?.parse()?;
    let mut cfg = VerifyConfig::new(theorem);
    if let Some(eps) = &a.eps {
        cfg.epsilons = eps.clone();
    }
    if let Some(g) = &a.grid {
        cfg.grid = parse_grid(g)?;
    }
    cfg.seed = a.seed.unwrap_or(DEFAULT_SEED);
    if let Some(n) = a.samples {
        cfg.random_points = n;
    }
    if let Some(n) = a.oracle_samples {
        cfg.oracle_samples = n;
    }
    cfg.chart = parse_chart(a.chart.as_deref())?;
    apply_tolerances(&mut cfg.tolerances, a.tol.as_deref().unwrap_or(&[]))?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn table(run: &VerificationRun) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<20} {:>8}  {:<26} {:>24} {:>10}  verdict",
        "entry", "eps", "check", "max_residual", "tolerance"
    );
    for r in &run.runs {
        for c in &r.checks {
            let _ = writeln!(
                s,
                "{:<20} {:>8}  {:<26} {:>24} {:>10.1e}  {}",
                r.entry.id.as_str(),
                r.entry.epsilon,
                c.name,
                fmt_f64(c.max_residual),
                c.tolerance,
                if c.passed { "pass" } else { "FAIL" }
            );
        }
        for e in &r.errors {
            let _ = writeln!(s, "{:<20} {:>8}  error: {e}", r.entry.id.as_str(), r.entry.epsilon);
        }
    }
    let _ = writeln!(
        s,
        "theorem {}: {}",
        run.config.theorem,
        if run.passed { "PASS" } else { "FAIL" }
    );
    s
}

pub fn verify(a: VerifyArgs) -> anyhow::Result<ExitCode> {
    if let Some(path) = &a.replay {
        return replay(path, a.out.as_deref());
    }
    let cfg = verify_config(&a)?;
    let run = verify::run(&cfg)?;
    print!("{}", table(&run));
    if let Some(out) = &a.out {
        emit(&to_json(&run)?, Some(out))?;
    }
    Ok(if run.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    })
}

fn replay(path: &std::path::Path, out: Option<&std::path::Path>) -> anyhow::Result<ExitCode> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let recorded: RecordedRun =
        serde_json::from_str(&text).with_context(|| format!("{} is not a verify report", path.display()))?;
    let run = verify::run(&recorded.config)?;
    print!("{}", table(&run));
    if let Some(out) = out {
        emit(&to_json(&run)?, Some(out))?;
    }
    let before = recorded.verdicts();
    let after = run.verdicts();
    let differences: Vec<_> = before
        .iter()
        .zip(&after)
        .filter(|(b, a)| b != a)
        .collect();
    if differences.is_empty() && before.len() == after.len() && recorded.passed == run.passed {
        println!("replay: {} verdicts identical", after.len());
        Ok(ExitCode::SUCCESS)
    } else {
        for (b, a) in &differences {
            println!("replay: {} eps={} {}: recorded {} now {}", b.0, b.1, b.2, b.3, a.3);
        }
        if before.len() != after.len() {
            println!("replay: recorded {} checks, now {}", before.len(), after.len());
        }
        Ok(ExitCode::from(EXIT_FAIL))
    }
}

pub fn geodesic(a: GeodesicArgs) -> anyhow::Result<ExitCode> {
    let chart = parse_chart(a.chart.as_deref())?;
    let (chart, v) = tangent(a.point, a.polar, a.dir, chart)?;
    let entry = entry(a.metric, a.eps, chart)?;
    let metric = entry.build()?.metric();
    let t_end = a.t_end.unwrap_or(5.0);
    let step = a.step.unwrap_or(1e-3);
    let path = geodesic_flow(&metric, &v, t_end, step)?;
    let mut csv = String::from("t,x1,x2,y1,y2,F\n");
    for (t, s) in path.times.iter().zip(&path.states) {
        let (x, y) = (s.x(), s.y());
        csv.push_str(&csv_row(&[*t, x[0], x[1], y[0], y[1], metric.value(x, y)]));
    }
    emit(&csv, a.out.as_deref())?;
    if path.exited {
        eprintln!(
            "geodesic left the domain at t = {}",
            path.times.last().copied().unwrap_or(0.0)
        );
    }
    Ok(ExitCode::SUCCESS)
}

const NAV_DIRECTIONS: [[f64; 2]; 3] = [[1.0, 0.0], [0.3, -1.1], [-0.7, 0.45]];

#[derive(Serialize)]
struct NavDirection {
    direction: [f64; 2],
    background: f64,
    general: f64,
    general_residual: f64,
    riemannian: Option<f64>,
    riemannian_residual: Option<f64>,
    closed_form: Option<f64>,
}

#[derive(Serialize)]
struct NavSample {
    point: [f64; 2],
    a: Option<[[f64; 2]; 2]>,
    b: Option<[f64; 2]>,
    directions: Vec<NavDirection>,
}

#[derive(Serialize)]
struct NavOutput {
    background: BackgroundKind,
    wind: String,
    epsilon: f64,
    chart: Chart,
    riemannian_background: bool,
    domain_radius: f64,
    searched_domain_radius: f64,
    closed_form_entry: Option<CatalogId>,
    max_defining_residual: f64,
    max_solver_disagreement: Option<f64>,
    max_closed_form_disagreement: Option<f64>,
    samples: Vec<NavSample>,
}

pub fn navigate(a: NavigateArgs) -> anyhow::Result<ExitCode> {
    let kind: BackgroundKind = required(a.background.as_deref(), "background")?.parse()?;
    let background = CatalogBackground { kind };
    let chart = background.chart();
    let eps = a.eps.unwrap_or(0.0);
    let wind = a.wind.as_deref().unwrap_or("rotation");
    match wind {
        "rotation" => navigate_with(&a, background, Rotation { chart }, eps, "rotation".into()),
        "constant" => {
            let v = pair(required(a.wind_vector.clone(), "wind-vector")?, "wind-vector")?;
            navigate_with(
                &a,
                background,
                ConstantWind { chart, v },
                eps,
                format!("constant({}, {})", v[0], v[1]),
            )
        }
        other => bail!("unknown wind {other:?}; expected rotation or constant"),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn navigate_with<W: VectorField>(
    a: &NavigateArgs,
    background: CatalogBackground,
    wind: W,
    eps: f64,
    wind_name: String,
) -> anyhow::Result<ExitCode> {
    let is_rotation = wind.is_rotation();
    let problem = NavigationProblem::new(background, wind, eps)?;
    let chart = problem.chart();

    let requested: Vec<[f64; 2]> = a
        .point
        .as_deref()
        .unwrap_or(&[])
        .chunks(2)
        .map(|c| [c[0], c[1]])
        .collect();
    for x in &requested {
        let p = ChartPoint { chart, coords: *x };
        let probe = TangentVector::new(p, [1.0, 0.0])?;
        if let Err(e) = problem.solve_general(&probe) {
            return Err(e).context(format!("navigation at {x:?}"));
        }
    }

    let domain = problem.deformed_domain();
    if !(domain > 0.0) {
        let probe = TangentVector::new(
            ChartPoint {
                chart,
                coords: [finsler_core::chart::DEFAULT_R_MIN, 0.0],
            },
            [1.0, 0.0],
        )?;
        problem.solve_general(&probe)?;
        bail!("navigation domain is empty");
    }
    let radius = (0.95 * domain).min(3.0);
    let mut points = requested.clone();
    points.extend(
        random_points(chart, radius, a.samples.unwrap_or(8), a.seed.unwrap_or(DEFAULT_SEED))
            .into_iter()
            .map(|p| p.coords),
    );

    let riemannian = problem.background.is_riemannian();
    let zermelo = if riemannian {
        Some(RandersMetric::new(problem.solve_riemannian(None)?))
    } else {
        None
    };
    let general = problem.general();
    let closed_entry = is_rotation.then(|| CatalogEntry::native(background.kind.family(), eps));
    let closed = match closed_entry {
        Some(e) => Some(e.build()?.metric()),
        None => None,
    };

    let mut max_residual: f64 = 0.0;
    let mut max_solver: Option<f64> = None;
    let mut max_closed: Option<f64> = None;
    let mut samples = Vec::new();
    for x in points {
        let mut dirs = Vec::new();
        for y in NAV_DIRECTIONS {
            let g = general.value(x, y);
            let general_residual = problem.defining_residual(&general, x, y);
            max_residual = max_residual.max(general_residual);
            let r = zermelo.as_ref().map(|z| z.value(x, y));
            let r_res = zermelo.as_ref().map(|z| problem.defining_residual(z, x, y));
            if let (Some(r), Some(res)) = (r, r_res) {
                max_residual = max_residual.max(res);
                max_solver = Some(max_solver.unwrap_or(0.0).max(rel(g, r)));
            }
            let c = closed.as_ref().map(|m| m.value(x, y));
            if let Some(c) = c {
                max_closed = Some(max_closed.unwrap_or(0.0).max(rel(g, c)));
            }
            dirs.push(NavDirection {
                direction: y,
                background: problem.background.value(x, y),
                general: g,
                general_residual,
                riemannian: r,
                riemannian_residual: r_res,
                closed_form: c,
            });
        }
        let coeffs = zermelo.as_ref().map(|z| finsler_core::RandersData::coefficients(&z.data, &x));
        samples.push(NavSample {
            point: x,
            a: coeffs.map(|c| c.a),
            b: coeffs.map(|c| c.b),
            directions: dirs,
        });
    }

    let out = NavOutput {
        background: background.kind,
        wind: wind_name,
        epsilon: eps,
        chart,
        riemannian_background: riemannian,
        domain_radius: domain,
        searched_domain_radius: problem.searched_domain(),
        closed_form_entry: closed_entry.map(|e| e.id),
        max_defining_residual: max_residual,
        max_solver_disagreement: max_solver,
        max_closed_form_disagreement: max_closed,
        samples,
    };
    emit(&to_json(&out)?, a.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

pub fn scan(a: ScanArgs) -> anyhow::Result<ExitCode> {
    let id: CatalogId = required(a.metric.as_deref(), "metric")?.parse()?;
    let chart = parse_chart(a.chart.as_deref())?.unwrap_or(id.native_chart());
    let entry = CatalogEntry::new(id, a.eps.unwrap_or(0.0), chart);
    let metric = entry.build()?.metric();
    let grid = match &a.grid {
        Some(g) => parse_grid(g)?,
        None => Grid {
            radial: 10,
            angular: 16,
            directions: 4,
        },
    };
    if grid.is_empty() {
        bail!("scan grid is empty");
    }
    let samples = grid_samples(chart, entry.sampling_radius(), &grid);
    let mut csv = String::from("x1,x2,y1,y2,F,K,S,S_over_F\n");
    for v in &samples {
        let (x, y) = (v.x(), v.y());
        let row = match curvature_report(&metric, v) {
            Ok(r) => [x[0], x[1], y[0], y[1], r.f, r.flag_curvature, r.s_curvature, r.s_curvature / r.f],
            Err(_) => [x[0], x[1], y[0], y[1], f64::NAN, f64::NAN, f64::NAN, f64::NAN],
        };
        csv.push_str(&csv_row(&row));
    }
    emit(&csv, a.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}
