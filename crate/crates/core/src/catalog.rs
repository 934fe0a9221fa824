//! The concrete metrics: three navigation families, their radial and
//! Poincaré variants, the `K = −4` deformation, and the undeformed backgrounds.
//!
//! Every entry is a Randers metric with closed-form coefficients. Building an
//! entry also solves its navigation problem and checks that both routes give
//! the same metric; a disagreement means a transcription error.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::chart::{
    cartesian_jacobian, cartesian_to_polar, polar_jacobian, polar_to_cartesian, Chart,
    DEFAULT_R_MIN,
};
use crate::error::{FinslerError, Result};
use crate::jets::Scalar;
use crate::linalg::{congruence, frobenius, quad, rotation_square, sub_mat, Mat2};
use crate::metric::{Metric, RandersMetric};
use crate::navigation::{Background, NavigationProblem, Rotation};
use crate::randers::{Coefficients, RandersData};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CatalogId {
    SphereFamily,
    KleinFamily,
    FunkFamily,
    SphereRadial,
    HyperbolicRadial,
    PoincareDeformed,
    KMinusFour,
    FunkBackground,
    KleinBackground,
    RoundSphereBackground,
}

impl CatalogId {
    pub const ALL: [CatalogId; 10] = [
        CatalogId::SphereFamily,
        CatalogId::KleinFamily,
        CatalogId::FunkFamily,
        CatalogId::SphereRadial,
        CatalogId::HyperbolicRadial,
        CatalogId::PoincareDeformed,
        CatalogId::KMinusFour,
        CatalogId::FunkBackground,
        CatalogId::KleinBackground,
        CatalogId::RoundSphereBackground,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CatalogId::SphereFamily => "sphere_family",
            CatalogId::KleinFamily => "klein_family",
            CatalogId::FunkFamily => "funk_family",
            CatalogId::SphereRadial => "sphere_radial",
            CatalogId::HyperbolicRadial => "hyperbolic_radial",
            CatalogId::PoincareDeformed => "poincare_deformed",
            CatalogId::KMinusFour => "k_minus_four",
            CatalogId::FunkBackground => "funk_background",
            CatalogId::KleinBackground => "klein_background",
            CatalogId::RoundSphereBackground => "round_sphere_background",
        }
    }

    /// The chart the closed forms are written in.
    pub fn native_chart(&self) -> Chart {
        match self {
            CatalogId::SphereRadial | CatalogId::HyperbolicRadial => Chart::Polar,
            _ => Chart::Cartesian,
        }
    }

    pub fn is_background(&self) -> bool {
        matches!(
            self,
            CatalogId::FunkBackground | CatalogId::KleinBackground | CatalogId::RoundSphereBackground
        )
    }

    pub fn background(&self) -> BackgroundKind {
        match self {
            CatalogId::SphereFamily | CatalogId::RoundSphereBackground => BackgroundKind::RoundSphere,
            CatalogId::KleinFamily | CatalogId::KleinBackground => BackgroundKind::Klein,
            CatalogId::FunkFamily | CatalogId::FunkBackground => BackgroundKind::Funk,
            CatalogId::SphereRadial => BackgroundKind::RadialSphere,
            CatalogId::HyperbolicRadial => BackgroundKind::RadialHyperbolic,
            CatalogId::PoincareDeformed => BackgroundKind::Poincare,
            CatalogId::KMinusFour => BackgroundKind::MinusFour,
        }
    }

    /// Flag curvature and S-curvature coefficient (`S = s_coeff · F`).
    pub fn expected(&self) -> Expected {
        let (flag_k, s_coeff) = match self {
            CatalogId::SphereFamily | CatalogId::SphereRadial | CatalogId::RoundSphereBackground => {
                (1.0, 0.0)
            }
            CatalogId::KleinFamily
            | CatalogId::HyperbolicRadial
            | CatalogId::PoincareDeformed
            | CatalogId::KleinBackground => (-1.0, 0.0),
            CatalogId::FunkFamily | CatalogId::FunkBackground => (-0.25, 1.5),
            CatalogId::KMinusFour => (-4.0, 0.0),
        };
        let gauss_formula = match self {
            CatalogId::SphereFamily | CatalogId::RoundSphereBackground => Some(GaussFormula::Sphere),
            CatalogId::KleinFamily
            | CatalogId::FunkFamily
            | CatalogId::KleinBackground
            | CatalogId::FunkBackground => Some(GaussFormula::Hyperbolic),
            _ => None,
        };
        Expected {
            flag_k,
            s_coeff,
            gauss_formula,
        }
    }
}

impl fmt::Display for CatalogId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CatalogId {
    type Err = FinslerError;

    fn from_str(s: &str) -> Result<Self> {
        CatalogId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| FinslerError::UnknownId(s.to_string()))
    }
}

/// Closed forms for the Gauss curvature of `α` in terms of the chart radius.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GaussFormula {
    /// `(1 − 5ε² + (1 − ε⁴) r²) / (1 + (1 − ε²) r²)`
    Sphere,
    /// `(−1 − 5ε² + (1 − ε⁴) r²) / (1 − (1 + ε²) r²)`
    Hyperbolic,
}

impl GaussFormula {
    pub fn eval(&self, epsilon: f64, r: f64) -> f64 {
        let (e2, r2) = (epsilon * epsilon, r * r);
        match self {
            GaussFormula::Sphere => (1.0 - 5.0 * e2 + (1.0 - e2 * e2) * r2) / (1.0 + (1.0 - e2) * r2),
            GaussFormula::Hyperbolic => {
                (-1.0 - 5.0 * e2 + (1.0 - e2 * e2) * r2) / (1.0 - (1.0 + e2) * r2)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Expected {
    pub flag_k: f64,
    pub s_coeff: f64,
    pub gauss_formula: Option<GaussFormula>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: CatalogId,
    pub epsilon: f64,
    pub chart: Chart,
}

impl CatalogEntry {
    pub fn new(id: CatalogId, epsilon: f64, chart: Chart) -> Self {
        CatalogEntry { id, epsilon, chart }
    }

    /// The entry in its native chart.
    pub fn native(id: CatalogId, epsilon: f64) -> Self {
        CatalogEntry::new(id, epsilon, id.native_chart())
    }

    pub fn expected(&self) -> Expected {
        self.id.expected()
    }

    /// Chart radius of the domain of definition (the same number in both charts).
    pub fn domain_radius(&self) -> f64 {
        self.navigation().deformed_domain()
    }

    /// Radius inside which random samples are drawn.
    pub fn sampling_radius(&self) -> f64 {
        (0.95 * self.domain_radius()).min(3.0)
    }

    /// Expected Gauss curvature of `α` at chart radius `r`, where a closed form exists.
    pub fn expected_gauss(&self, r: f64) -> Option<f64> {
        self.expected()
            .gauss_formula
            .map(|g| g.eval(self.epsilon, r))
    }

    pub fn build(&self) -> Result<CatalogRanders> {
        build(self)
    }

    /// The navigation problem this entry solves (trivial for backgrounds).
    pub fn navigation(&self) -> NavigationProblem<CatalogBackground, Rotation> {
        let chart = self.id.native_chart();
        NavigationProblem {
            background: CatalogBackground {
                kind: self.id.background(),
            },
            wind: Rotation { chart },
            epsilon: self.epsilon,
        }
    }
}

/// Closed-form Randers coefficients of a catalog entry, in the entry's chart.
#[derive(Clone, Copy, Debug)]
pub struct CatalogRanders {
    pub entry: CatalogEntry,
    pub radius: f64,
}

impl CatalogRanders {
    pub fn metric(&self) -> RandersMetric<CatalogRanders> {
        RandersMetric::new(*self)
    }

    /// The same entry written in polar coordinates.
    pub fn polar_form(&self) -> CatalogRanders {
        CatalogRanders {
            entry: CatalogEntry {
                chart: Chart::Polar,
                ..self.entry
            },
            radius: self.radius,
        }
    }

    pub fn in_chart(&self, chart: Chart) -> CatalogRanders {
        CatalogRanders {
            entry: CatalogEntry {
                chart,
                ..self.entry
            },
            radius: self.radius,
        }
    }

    /// Coefficients obtained by pulling the native closed form through the
    /// chart change, ignoring any closed form in the target chart.
    pub fn pulled_back<S: Scalar>(&self, x: &[S; 2]) -> Coefficients<S> {
        let (id, eps) = (self.entry.id, self.entry.epsilon);
        if self.entry.chart == id.native_chart() {
            return native_coefficients(id, eps, x);
        }
        let (c, j) = match self.entry.chart {
            Chart::Polar => (native_coefficients(id, eps, &polar_to_cartesian(x)), polar_jacobian(x)),
            Chart::Cartesian => (
                native_coefficients(id, eps, &cartesian_to_polar(x)),
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

impl RandersData for CatalogRanders {
    fn chart(&self) -> Chart {
        self.entry.chart
    }

    fn contains(&self, x: [f64; 2]) -> bool {
        if !(x[0].is_finite() && x[1].is_finite()) {
            return false;
        }
        let r = match self.entry.chart {
            Chart::Cartesian => x[0].hypot(x[1]),
            Chart::Polar => {
                if x[0] < DEFAULT_R_MIN {
                    return false;
                }
                x[0]
            }
        };
        if self.entry.id.native_chart() == Chart::Polar && r < DEFAULT_R_MIN {
            return false;
        }
        r < self.radius
    }

    fn coefficients<S: Scalar>(&self, x: &[S; 2]) -> Coefficients<S> {
        if self.entry.chart == Chart::Polar {
            if let Some(c) = polar_coefficients(self.entry.id, self.entry.epsilon, x) {
                return c;
            }
        }
        self.pulled_back(x)
    }
}

fn check_epsilon(entry: &CatalogEntry) -> Result<()> {
    let bad = !entry.epsilon.is_finite() || (entry.id.is_background() && entry.epsilon != 0.0);
    if bad {
        return Err(FinslerError::EpsilonOutOfRange {
            id: entry.id.to_string(),
            epsilon: entry.epsilon,
        });
    }
    Ok(())
}

/// Relative agreement demanded between the closed forms and the navigation solution.
pub const TRANSCRIPTION_TOLERANCE: f64 = 1e-12;
/// The same for the root-finding route, whose answer carries the solver's residual.
pub const ROOT_TRANSCRIPTION_TOLERANCE: f64 = 1e-10;

/// Deterministic probe points on a spiral inside the sampling disk.
fn probe_points(entry: &CatalogEntry, chart: Chart) -> Vec<[f64; 2]> {
    let rho = entry.sampling_radius();
    (0..12)
        .map(|k| {
            let r = rho * (0.08 + 0.9 * (k as f64 + 0.5) / 12.0);
            let t = 0.7 + 2.39996 * k as f64;
            match chart {
                Chart::Cartesian => [r * t.cos(), r * t.sin()],
                Chart::Polar => [r, t],
            }
        })
        .collect()
}

const PROBE_DIRECTIONS: [[f64; 2]; 3] = [[1.0, 0.0], [0.3, -1.1], [-0.7, 0.45]];

fn rel_mat(a: &Mat2<f64>, b: &Mat2<f64>) -> f64 {
    frobenius(&sub_mat(a, b)) / frobenius(b).max(f64::MIN_POSITIVE)
}

fn rel_vec(a: &[f64; 2], b: &[f64; 2]) -> f64 {
    let d = (a[0] - b[0]).hypot(a[1] - b[1]);
    d / b[0].hypot(b[1]).max(1.0)
}

/// Validates `ε`, then checks the closed forms against the navigation solution.
pub fn build(entry: &CatalogEntry) -> Result<CatalogRanders> {
    build_with_residual(entry).map(|(built, _)| built)
}

/// Like [`build`], also returning the largest relative disagreement found.
pub fn build_with_residual(entry: &CatalogEntry) -> Result<(CatalogRanders, f64)> {
    check_epsilon(entry)?;
    let built = CatalogRanders {
        entry: *entry,
        radius: entry.domain_radius(),
    };
    let native = built.in_chart(entry.id.native_chart());
    let problem = entry.navigation();
    let points = probe_points(entry, entry.id.native_chart());
    let mismatch = |what: &str, rel: f64| FinslerError::TranscriptionMismatch {
        what: format!("{} {what}", entry.id),
        rel,
    };
    let mut worst: f64 = 0.0;

    if problem.background.is_riemannian() {
        let zermelo = problem.solve_riemannian(None)?;
        for x in &points {
            let closed = native.coefficients(x);
            let nav = zermelo.coefficients(x);
            let rel = rel_mat(&closed.a, &nav.a).max(rel_vec(&closed.b, &nav.b));
            if !(rel <= TRANSCRIPTION_TOLERANCE) {
                return Err(mismatch("Randers coefficients", rel));
            }
            worst = worst.max(rel);
        }
    } else {
        let general = problem.general();
        let closed = native.metric();
        for x in &points {
            for y in PROBE_DIRECTIONS {
                let a = closed.value(*x, y);
                let b = general.value(*x, y);
                let rel = (a - b).abs() / b.abs();
                if !(rel <= ROOT_TRANSCRIPTION_TOLERANCE) {
                    return Err(mismatch("metric value", rel));
                }
                worst = worst.max(rel);
            }
        }
    }

    // Where a polar closed form exists it must agree with the pulled-back native one.
    if entry.chart == Chart::Polar && entry.id.native_chart() == Chart::Cartesian {
        for x in probe_points(entry, Chart::Polar) {
            if let Some(closed) = polar_coefficients(entry.id, entry.epsilon, &x) {
                let pulled = built.pulled_back(&x);
                let rel = rel_mat(&closed.a, &pulled.a).max(rel_vec(&closed.b, &pulled.b));
                if !(rel <= TRANSCRIPTION_TOLERANCE) {
                    return Err(mismatch("polar form", rel));
                }
                worst = worst.max(rel);
            }
        }
    }
    Ok((built, worst))
}

fn diag<S: Scalar>(a: S, b: S) -> Mat2<S> {
    [[a, S::zero()], [S::zero(), b]]
}

fn scale<S: Scalar>(m: Mat2<S>, s: S) -> Mat2<S> {
    m.map(|row| row.map(|v| v * s))
}

fn identity_plus<S: Scalar>(w: Mat2<S>, k: S) -> Mat2<S> {
    [
        [S::one() + w[0][0] * k, w[0][1] * k],
        [w[1][0] * k, S::one() + w[1][1] * k],
    ]
}

/// Closed-form coefficients in the entry's native chart.
fn native_coefficients<S: Scalar>(id: CatalogId, eps: f64, x: &[S; 2]) -> Coefficients<S> {
    let e2 = eps * eps;
    let rho2 = x[0] * x[0] + x[1] * x[1];
    let (px, py) = (x[0], x[1]);
    let rotation_b = |denominator: S| [py * eps / denominator, -(px * eps) / denominator];
    match id {
        CatalogId::SphereFamily => {
            let a_ = rho2 * (1.0 - e2) + 1.0;
            let b_ = rho2 + (1.0 + e2);
            let q = a_ * a_ * (rho2 + 1.0);
            let a = [
                [a_ + b_ * py * py, -(b_ * px * py)],
                [-(b_ * px * py), a_ + b_ * px * px],
            ];
            Coefficients {
                a: scale(a, q.recip()),
                b: rotation_b(a_),
            }
        }
        CatalogId::KleinFamily => {
            let a_ = S::one() - rho2 * (1.0 + e2);
            let c_ = S::cst(1.0 - e2) - rho2;
            let q = a_ * a_ * (S::one() - rho2);
            let a = [
                [a_ - c_ * py * py, c_ * px * py],
                [c_ * px * py, a_ - c_ * px * px],
            ];
            Coefficients {
                a: scale(a, q.recip()),
                b: rotation_b(a_),
            }
        }
        CatalogId::FunkFamily => {
            let d = S::one() - rho2 * (1.0 + e2);
            let c = [px * eps - py, py * eps + px];
            let a = [
                [S::one() - c[0] * c[0], -(c[0] * c[1])],
                [-(c[0] * c[1]), S::one() - c[1] * c[1]],
            ];
            Coefficients {
                a: scale(a, (d * d).recip()),
                b: [(px + py * eps) / d, (py - px * eps) / d],
            }
        }
        CatalogId::PoincareDeformed => {
            let d = (S::one() - rho2).square() * 0.25 - rho2 * e2;
            let a = [
                [d + py * py * e2, -(px * py * e2)],
                [-(px * py * e2), d + px * px * e2],
            ];
            Coefficients {
                a: scale(a, (d * d).recip()),
                b: rotation_b(d),
            }
        }
        CatalogId::KMinusFour => {
            let e = rho2 + 1.0;
            let l = S::one() - rho2 * e * e2;
            let k = rho2 + 2.0;
            let den = (e * l * l).recip();
            let off = -((k + e * e2) * px * py) * den;
            let a = [
                [(S::one() + k * py * py - e * px * px * e2) * den, off],
                [off, (S::one() + k * px * px - e * py * py * e2) * den],
            ];
            Coefficients {
                a,
                b: [e * py * eps / l, -(e * px * eps) / l],
            }
        }
        CatalogId::SphereRadial | CatalogId::HyperbolicRadial => {
            let s = if id == CatalogId::SphereRadial {
                x[0].sin()
            } else {
                x[0].sinh()
            };
            let s2 = s * s;
            let l = S::one() - s2 * e2;
            Coefficients {
                a: diag(l.recip(), s2 / (l * l)),
                b: [S::zero(), -(s2 * eps) / l],
            }
        }
        CatalogId::RoundSphereBackground => Coefficients {
            a: scale(
                identity_plus(rotation_square(x), S::one()),
                (rho2 + 1.0).square().recip(),
            ),
            b: [S::zero(); 2],
        },
        CatalogId::KleinBackground => Coefficients {
            a: klein_h(x),
            b: [S::zero(); 2],
        },
        CatalogId::FunkBackground => {
            let d = S::one() - rho2;
            Coefficients {
                a: klein_h(x),
                b: [px / d, py / d],
            }
        }
    }
}

fn klein_h<S: Scalar>(x: &[S; 2]) -> Mat2<S> {
    let rho2 = x[0] * x[0] + x[1] * x[1];
    scale(
        identity_plus(rotation_square(x), -S::one()),
        (S::one() - rho2).square().recip(),
    )
}

/// The polar displays of the three main families.
fn polar_coefficients<S: Scalar>(id: CatalogId, eps: f64, x: &[S; 2]) -> Option<Coefficients<S>> {
    let e2 = eps * eps;
    let r = x[0];
    let r2 = r * r;
    Some(match id {
        CatalogId::SphereFamily => {
            let a_ = r2 * (1.0 - e2) + 1.0;
            Coefficients {
                a: diag(
                    ((r2 + 1.0) * a_).recip(),
                    r2 * (r2 + 1.0) / (a_ * a_),
                ),
                b: [S::zero(), -(r2 * eps) / a_],
            }
        }
        CatalogId::KleinFamily => {
            let a_ = S::one() - r2 * (1.0 + e2);
            Coefficients {
                a: diag(
                    (a_ * (S::one() - r2)).recip(),
                    r2 * (S::one() - r2) / (a_ * a_),
                ),
                b: [S::zero(), -(r2 * eps) / a_],
            }
        }
        CatalogId::FunkFamily => {
            let d = S::one() - r2 * (1.0 + e2);
            let d2 = d * d;
            let a12 = -(r2 * r * eps) / d2;
            Coefficients {
                a: [
                    [(S::one() - r2 * e2) / d2, a12],
                    [a12, r2 * (S::one() - r2) / d2],
                ],
                b: [r / d, -(r2 * eps) / d],
            }
        }
        _ => return None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackgroundKind {
    RoundSphere,
    Klein,
    Funk,
    Poincare,
    MinusFour,
    RadialSphere,
    RadialHyperbolic,
}

impl BackgroundKind {
    pub const ALL: [BackgroundKind; 7] = [
        BackgroundKind::RoundSphere,
        BackgroundKind::Klein,
        BackgroundKind::Funk,
        BackgroundKind::Poincare,
        BackgroundKind::MinusFour,
        BackgroundKind::RadialSphere,
        BackgroundKind::RadialHyperbolic,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            BackgroundKind::RoundSphere => "round_sphere",
            BackgroundKind::Klein => "klein",
            BackgroundKind::Funk => "funk",
            BackgroundKind::Poincare => "poincare",
            BackgroundKind::MinusFour => "minus_four",
            BackgroundKind::RadialSphere => "radial_sphere",
            BackgroundKind::RadialHyperbolic => "radial_hyperbolic",
        }
    }

    /// The catalog entry obtained by navigating this background under rotation.
    pub fn family(&self) -> CatalogId {
        match self {
            BackgroundKind::RoundSphere => CatalogId::SphereFamily,
            BackgroundKind::Klein => CatalogId::KleinFamily,
            BackgroundKind::Funk => CatalogId::FunkFamily,
            BackgroundKind::Poincare => CatalogId::PoincareDeformed,
            BackgroundKind::MinusFour => CatalogId::KMinusFour,
            BackgroundKind::RadialSphere => CatalogId::SphereRadial,
            BackgroundKind::RadialHyperbolic => CatalogId::HyperbolicRadial,
        }
    }
}

impl fmt::Display for BackgroundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Accepts the short names and the catalog background ids.
impl FromStr for BackgroundKind {
    type Err = FinslerError;

    fn from_str(s: &str) -> Result<Self> {
        let short = s.strip_suffix("_background").unwrap_or(s);
        BackgroundKind::ALL
            .into_iter()
            .find(|k| k.as_str() == short)
            .ok_or_else(|| FinslerError::UnknownId(s.to_string()))
    }
}

/// A navigation background, written directly from its metric function.
#[derive(Clone, Copy, Debug)]
pub struct CatalogBackground {
    pub kind: BackgroundKind,
}

impl Metric for CatalogBackground {
    fn chart(&self) -> Chart {
        match self.kind {
            BackgroundKind::RadialSphere | BackgroundKind::RadialHyperbolic => Chart::Polar,
            _ => Chart::Cartesian,
        }
    }

    fn contains(&self, x: [f64; 2]) -> bool {
        let r = match self.chart() {
            Chart::Cartesian => x[0].hypot(x[1]),
            Chart::Polar => {
                if x[0] < DEFAULT_R_MIN {
                    return false;
                }
                x[0]
            }
        };
        r < self.domain_radius()
    }

    fn eval<S: Scalar>(&self, x: &[S; 2], y: &[S; 2]) -> S {
        let rho2 = x[0] * x[0] + x[1] * x[1];
        let y2 = y[0] * y[0] + y[1] * y[1];
        let w = x[0] * y[1] - x[1] * y[0];
        let xy = x[0] * y[0] + x[1] * y[1];
        match self.kind {
            BackgroundKind::RoundSphere => (y2 + w * w).sqrt() / (rho2 + 1.0),
            BackgroundKind::Klein => (y2 - w * w).sqrt() / (S::one() - rho2),
            BackgroundKind::Funk => ((y2 - w * w).sqrt() + xy) / (S::one() - rho2),
            BackgroundKind::Poincare => y2.sqrt() * 2.0 / (S::one() - rho2),
            BackgroundKind::MinusFour => ((y2 + w * w) / (rho2 + 1.0) + w * w).sqrt(),
            BackgroundKind::RadialSphere => (y[0] * y[0] + (x[0].sin() * y[1]).square()).sqrt(),
            BackgroundKind::RadialHyperbolic => {
                (y[0] * y[0] + (x[0].sinh() * y[1]).square()).sqrt()
            }
        }
    }
}

impl Background for CatalogBackground {
    fn riemannian_matrix<S: Scalar>(&self, x: &[S; 2]) -> Option<Mat2<S>> {
        let rho2 = x[0] * x[0] + x[1] * x[1];
        Some(match self.kind {
            BackgroundKind::RoundSphere => scale(
                identity_plus(rotation_square(x), S::one()),
                (rho2 + 1.0).square().recip(),
            ),
            BackgroundKind::Klein => klein_h(x),
            BackgroundKind::Funk => return None,
            BackgroundKind::Poincare => {
                let c = (S::one() - rho2).square().recip() * 4.0;
                diag(c, c)
            }
            BackgroundKind::MinusFour => scale(
                identity_plus(rotation_square(x), rho2 + 2.0),
                (rho2 + 1.0).recip(),
            ),
            BackgroundKind::RadialSphere => diag(S::one(), x[0].sin().square()),
            BackgroundKind::RadialHyperbolic => diag(S::one(), x[0].sinh().square()),
        })
    }

    fn is_riemannian(&self) -> bool {
        self.kind != BackgroundKind::Funk
    }

    fn rotational_domain(&self, epsilon: f64) -> Option<f64> {
        let e = epsilon.abs();
        let e2 = e * e;
        if e == 0.0 {
            return Some(self.domain_radius());
        }
        Some(match self.kind {
            BackgroundKind::RoundSphere => {
                if e <= 1.0 {
                    f64::INFINITY
                } else {
                    1.0 / (e2 - 1.0).sqrt()
                }
            }
            BackgroundKind::Klein | BackgroundKind::Funk => 1.0 / (1.0 + e2).sqrt(),
            BackgroundKind::Poincare => (1.0 + e2).sqrt() - e,
            BackgroundKind::MinusFour => ((-1.0 + (1.0 + 4.0 / e2).sqrt()) / 2.0).sqrt(),
            BackgroundKind::RadialSphere => {
                if e < 1.0 {
                    std::f64::consts::PI
                } else {
                    (1.0 / e).asin()
                }
            }
            BackgroundKind::RadialHyperbolic => (1.0 / e).asinh(),
        })
    }

    fn domain_radius(&self) -> f64 {
        match self.kind {
            BackgroundKind::Klein | BackgroundKind::Funk | BackgroundKind::Poincare => 1.0,
            BackgroundKind::RadialSphere => std::f64::consts::PI,
            _ => f64::INFINITY,
        }
    }
}

/// `h(y, y)` for Riemannian backgrounds, used to check `eval` against `riemannian_matrix`.
pub fn background_quadratic(bg: &CatalogBackground, x: [f64; 2], y: [f64; 2]) -> Option<f64> {
    bg.riemannian_matrix(&x).map(|h| quad(&h, &y))
}
