//! Reports: classification, numerical verification and truncation results for
//! one scenario, as typed values that serialize to deterministic JSON.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classifier::{
    essential_spectrum, generator_point_spectrum, generator_spectrum, operator_point_spectrum,
    operator_radius, operator_spectrum, Certainty, GammaProfile, OperatorRadius, SpectralRegion,
    SpectrumCase,
};
use crate::error::{Error, Result};
use crate::expr::AnalyticExpr;
use crate::grid::disk_grid;
use crate::number::Num;
use crate::numerics::eigen::{eigen_identity_residual, eigenfunction};
use crate::numerics::growth::coboundary_growth_exponent;
use crate::numerics::membership::{
    ap_norm_rings, growth_envelope, MembershipStatus, MembershipVerdict, QuadratureGrid,
    VERDICT_BAND,
};
use crate::numerics::orbit::{Direction, OrbitOptions, CHUNK};
use crate::numerics::resolvent::{
    choose_anchor, default_base, nonsurjectivity_witness, orbit_integral_k, residual_check,
    resolvent_apply, CertificateRegion, ResolventCertificate,
};
use crate::numerics::Func;
use crate::scenario::{ExtComplex, Model, Role, Scenario};
use crate::truncation::{
    build_matrix, eigen_cloud, gelfand_radius, GelfandEstimate, TruncationGrid,
};

/// A complex number with both parts rounded for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CNum {
    pub re: Num,
    pub im: Num,
}

impl From<Complex64> for CNum {
    fn from(z: Complex64) -> Self {
        CNum {
            re: Num::new(z.re),
            im: Num::new(z.im),
        }
    }
}

impl CNum {
    pub fn get(&self) -> Complex64 {
        Complex64::new(self.re.get(), self.im.get())
    }
}

/// Result of one classifier query: a value, an item outside the covered
/// hypotheses, or another failure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Outcome<T> {
    Unsupported { unsupported: String },
    Error { error: String },
    Value(T),
}

impl<T> Outcome<T> {
    pub fn from_result(r: Result<T>) -> Self {
        match r {
            Ok(v) => Outcome::Value(v),
            Err(Error::Unsupported(m)) => Outcome::Unsupported { unsupported: m },
            Err(e) => Outcome::Error {
                error: e.to_string(),
            },
        }
    }

    pub fn value(&self) -> Option<&T> {
        match self {
            Outcome::Value(v) => Some(v),
            _ => None,
        }
    }

    fn unsupported(&self) -> Option<&str> {
        match self {
            Outcome::Unsupported { unsupported } => Some(unsupported),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointEcho {
    pub zeta: CNum,
    pub alpha: Num,
    /// `re` is `-inf` for an infinitely negative boundary value.
    pub beta: CNum,
    pub role: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightsEcho {
    pub c: Num,
    pub s: Num,
    pub d: Num,
}

/// The parsed scenario as the tool understood it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioEcho {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    pub model: String,
    pub p: Num,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<WeightsEcho>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_expr: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v_expr: Option<String>,
    pub fixed_points: Vec<FixedPointEcho>,
}

impl ScenarioEcho {
    pub fn of(s: &Scenario, source: Option<&str>) -> Self {
        let (mut a, mut weights, mut h_expr, mut v_expr) = (None, None, None, None);
        match s.model() {
            Model::BuiltIn { kind, weights: w } => {
                if let crate::scenario::BuiltIn::StripFlow { a: x } = kind {
                    a = Some(Num::new(*x));
                }
                weights = Some(WeightsEcho {
                    c: Num::new(w.c),
                    s: Num::new(w.s),
                    d: Num::new(w.d),
                });
            }
            Model::Expression { h, v } => {
                h_expr = Some(h.to_string());
                v_expr = Some(v.to_string());
            }
            Model::Parametric => {}
        }
        let fixed_points = s
            .fixed_points()
            .iter()
            .map(|fp| FixedPointEcho {
                zeta: fp.zeta.into(),
                alpha: Num::new(fp.alpha),
                beta: match fp.beta {
                    ExtComplex::Finite(b) => b.into(),
                    ExtComplex::NegInfinity => CNum {
                        re: Num::new(f64::NEG_INFINITY),
                        im: Num::new(0.0),
                    },
                },
                role: match fp.role {
                    Role::DenjoyWolff => "denjoy_wolff".into(),
                    Role::Repelling => "repelling".into(),
                },
            })
            .collect();
        ScenarioEcho {
            source: source.map(str::to_string),
            model: s.model_name().to_string(),
            p: Num::new(s.p()),
            a,
            weights,
            h_expr,
            v_expr,
            fixed_points,
        }
    }
}

/// Regions of a single operator `T_t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorRegions {
    pub t: Num,
    pub spectrum: Outcome<SpectralRegion>,
    pub point_spectrum: Outcome<SpectralRegion>,
    pub radius: Outcome<OperatorRadius>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Regions {
    pub generator_spectrum: Outcome<SpectralRegion>,
    pub essential_spectrum: Outcome<SpectralRegion>,
    pub point_spectrum: SpectralRegion,
    pub operators: Vec<OperatorRegions>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificateEcho {
    pub anchor: usize,
    pub region: CertificateRegion,
    pub k: CNum,
    pub base: CNum,
    pub t_end: Num,
    pub tail_bound: Num,
    pub quadrature_error: Num,
    pub tolerance: Num,
}

impl From<&ResolventCertificate> for CertificateEcho {
    fn from(c: &ResolventCertificate) -> Self {
        CertificateEcho {
            anchor: c.anchor,
            region: c.region,
            k: c.k.into(),
            base: c.base.into(),
            t_end: Num::new(c.t_end),
            tail_bound: Num::new(c.tail_bound),
            quadrature_error: Num::new(c.quadrature_error),
            tolerance: Num::new(c.tolerance),
        }
    }
}

/// One numerical cross-check. `hard` checks decide the exit status.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<CNum>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Num>,
    pub status: CheckStatus,
    pub hard: bool,
    pub value: Option<Num>,
    pub tolerance: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub membership: Option<MembershipVerdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateEcho>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<CNum>,
}

impl CheckResult {
    fn new(name: &str, lambda: Option<Complex64>, hard: bool) -> Self {
        CheckResult {
            name: name.to_string(),
            lambda: lambda.map(CNum::from),
            t: None,
            status: CheckStatus::Inconclusive,
            hard,
            value: None,
            tolerance: None,
            expected: None,
            note: None,
            membership: None,
            certificate: None,
            values: Vec::new(),
        }
    }

    /// `value <= tolerance` passes.
    fn below(mut self, value: f64, tolerance: f64) -> Self {
        self.value = Some(Num::new(value));
        self.tolerance = Some(Num::new(tolerance));
        self.status = if value <= tolerance {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        self
    }

    fn failed(mut self, e: &Error) -> Self {
        self.status = CheckStatus::Fail;
        self.note = Some(e.to_string());
        self
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn is_hard_failure(&self) -> bool {
        self.hard && self.status == CheckStatus::Fail
    }
}

/// Thresholds of the numerical checks; each has a `--tol-*` flag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Semigroup identity for eigenfunctions.
    pub identity: f64,
    /// `(λ - A)F` for eigenfunctions, expected zero.
    pub eigen_residual: f64,
    /// `(λ - A)F - f` for resolvent solutions.
    pub resolvent: f64,
    /// Smallest witness modulus read as nonzero.
    pub witness: f64,
    /// Relative slack on growth exponents.
    pub growth: f64,
    /// Allowed ratio of the Gelfand estimate to the operator radius.
    pub radius_ratio: f64,
    /// Allowed ratio of the sampled pointwise envelope to the norm.
    pub envelope_ratio: f64,
    /// `|Re λ - γ_j|` below which a membership test may stay inconclusive.
    pub membership_margin: f64,
    /// Orbit integral target.
    pub orbit: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            identity: 1e-9,
            eigen_residual: 1e-8,
            resolvent: 1e-5,
            witness: 1e-6,
            growth: 0.05,
            radius_ratio: 1.05,
            envelope_ratio: 1.05,
            membership_margin: 0.2,
            orbit: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationReport {
    pub t: Num,
    pub n: usize,
    pub n_max: usize,
    pub grid: TruncationGrid,
    pub aliasing_bound: Num,
    pub gelfand: GelfandEstimate,
    pub operator_radius: Outcome<OperatorRadius>,
    /// Gelfand estimate over the operator radius.
    pub bound_ratio: Option<Num>,
    /// Eigenvalues of the finite section, by decreasing modulus. Indicative only.
    pub eigen_cloud: Vec<CNum>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub version: String,
    pub tolerances: Tolerances,
    pub membership_grid: QuadratureGrid,
    pub orbit_chunk: f64,
    pub identity_grid: (usize, f64),
    pub residual_grid: (usize, f64),
    pub envelope: (usize, f64),
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<Num>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: ScenarioEcho,
    pub gamma_profile: GammaProfile,
    pub case: SpectrumCase,
    pub regions: Regions,
    pub verification: Vec<CheckResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<TruncationReport>,
    pub provenance: Provenance,
}

impl Report {
    /// Names of the queries outside the covered hypotheses.
    pub fn unsupported_items(&self) -> Vec<String> {
        let r = &self.regions;
        let mut out = Vec::new();
        let mut push = |what: &str, why: Option<&str>| {
            if let Some(why) = why {
                out.push(format!("{what}: {why}"));
            }
        };
        push("generator_spectrum", r.generator_spectrum.unsupported());
        push("essential_spectrum", r.essential_spectrum.unsupported());
        for op in &r.operators {
            let t = op.t;
            push(&format!("operator_spectrum(t={t})"), op.spectrum.unsupported());
            push(&format!("operator_point_spectrum(t={t})"), op.point_spectrum.unsupported());
            push(&format!("operator_radius(t={t})"), op.radius.unsupported());
        }
        out
    }

    pub fn failed_checks(&self) -> Vec<&CheckResult> {
        self.verification.iter().filter(|c| c.is_hard_failure()).collect()
    }

    /// 1 on a failed hard check, otherwise 3 when some query is unsupported, else 0.
    pub fn exit_code(&self) -> i32 {
        if !self.failed_checks().is_empty() {
            1
        } else if !self.unsupported_items().is_empty() {
            3
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Report> {
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("report JSON: {e}")))
    }

    /// The value a reader of the JSON output sees.
    fn canonical(self) -> Report {
        Report::from_json(&self.to_json()).expect("report JSON round-trips")
    }
}

/// Finite-section request.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationRequest {
    pub t: f64,
    pub n: usize,
    pub n_max: usize,
}

/// Everything a run may compute besides the classification.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunOptions {
    pub ts: Vec<f64>,
    pub lambdas: Vec<Complex64>,
    /// Fit the weight growth along orbits into each fixed point.
    pub growth: bool,
    pub truncation: Option<TruncationRequest>,
    pub tolerances: Tolerances,
    pub grid: QuadratureGrid,
    pub timing: bool,
}

const IDENTITY_GRID: (usize, f64) = (100, 0.95);
const RESIDUAL_GRID: (usize, f64) = (20, 0.9);
const ENVELOPE: (usize, f64) = (256, 0.99);
/// Absolute slack on growth exponents; covers the transient of the fit window.
const GROWTH_FLOOR: f64 = 1e-3;
/// Default time for identity checks when no `t` is requested.
const DEFAULT_T: f64 = 1.0;

/// Constant complex number in the expression syntax, e.g. `0.5+0i` or `-3`.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let e = AnalyticExpr::parse(&text.replace('\u{2212}', "-"))?;
    e.constant_value()
        .filter(|z| z.is_finite())
        .ok_or_else(|| Error::Invalid(format!("`{text}` is not a finite constant")))
}

fn validate(opts: &RunOptions) -> Result<()> {
    if let Some(t) = opts.ts.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return Err(Error::Invalid(format!("t = {t} must be finite and >= 0")));
    }
    if let Some(l) = opts.lambdas.iter().find(|l| !l.is_finite()) {
        return Err(Error::Invalid(format!("λ = {l} is not finite")));
    }
    Ok(())
}

/// Classifies `s` and runs the requested checks.
pub fn run(s: &Scenario, source: Option<&str>, opts: &RunOptions) -> Result<Report> {
    validate(opts)?;
    let start = std::time::Instant::now();
    let g = s.gamma_profile();
    let regions = Regions {
        generator_spectrum: Outcome::from_result(generator_spectrum(&g)),
        essential_spectrum: Outcome::from_result(essential_spectrum(&g)),
        point_spectrum: generator_point_spectrum(&g),
        operators: opts
            .ts
            .iter()
            .map(|&t| OperatorRegions {
                t: Num::new(t),
                spectrum: Outcome::from_result(operator_spectrum(&g, t)),
                point_spectrum: Outcome::from_result(operator_point_spectrum(&g, t)),
                radius: Outcome::from_result(operator_radius(&g, t)),
            })
            .collect(),
    };

    let mut verification = Vec::new();
    for &lambda in &opts.lambdas {
        verify_lambda(s, &g, &regions, lambda, opts, &mut verification);
    }
    if opts.growth {
        growth_checks(s, &opts.tolerances, &mut verification);
    }
    let truncation = match opts.truncation {
        Some(req) => Some(truncate(s, &g, &req, &opts.tolerances, &mut verification)?),
        None => None,
    };

    let report = Report {
        scenario: ScenarioEcho::of(s, source),
        case: SpectrumCase::of(&g),
        gamma_profile: g,
        regions,
        verification,
        truncation,
        provenance: Provenance {
            version: env!("CARGO_PKG_VERSION").to_string(),
            tolerances: opts.tolerances,
            membership_grid: opts.grid,
            orbit_chunk: CHUNK,
            identity_grid: IDENTITY_GRID,
            residual_grid: RESIDUAL_GRID,
            envelope: ENVELOPE,
            wall_time_s: opts.timing.then(|| Num::new(start.elapsed().as_secs_f64())),
        },
    };
    Ok(report.canonical())
}

fn one(_: Complex64) -> Result<Complex64> {
    Ok(Complex64::new(1.0, 0.0))
}

fn zero(_: Complex64) -> Result<Complex64> {
    Ok(Complex64::new(0.0, 0.0))
}

fn orbit_options(tol: &Tolerances) -> OrbitOptions {
    OrbitOptions {
        tol: tol.orbit,
        chunk: CHUNK,
    }
}

fn verify_lambda(
    s: &Scenario,
    g: &GammaProfile,
    regions: &Regions,
    lambda: Complex64,
    opts: &RunOptions,
    out: &mut Vec<CheckResult>,
) {
    let tol = &opts.tolerances;
    if !s.is_evaluable() {
        out.push(
            CheckResult::new("numerics", Some(lambda), false)
                .with_note("parametric scenario: no h or v to evaluate"),
        );
        return;
    }
    let interior = regions.point_spectrum.certainty_at(lambda) == Some(Certainty::Certified);

    let ts: Vec<f64> = if opts.ts.is_empty() {
        vec![DEFAULT_T]
    } else {
        opts.ts.clone()
    };
    if interior {
        for &t in &ts {
            let mut c = CheckResult::new("eigen_identity", Some(lambda), true);
            c.t = Some(Num::new(t));
            let grid = disk_grid(IDENTITY_GRID.0, IDENTITY_GRID.1);
            out.push(match eigen_identity_residual(s, lambda, t, &grid) {
                Ok(r) => c.below(r, tol.identity),
                Err(e) => c.failed(&e),
            });
        }
        let c = CheckResult::new("eigen_residual", Some(lambda), true);
        let grid = disk_grid(RESIDUAL_GRID.0, RESIDUAL_GRID.1);
        let r = eigenfunction(s, lambda)
            .and_then(|f| residual_check(s, lambda, &zero, &f, &grid));
        out.push(match r {
            Ok(r) => c.below(r, tol.eigen_residual),
            Err(e) => c.failed(&e),
        });
    }
    membership_checks(s, g, lambda, interior, opts, out);

    if let Some(spec) = regions.generator_spectrum.value() {
        if !spec.contains(lambda) {
            out.push(resolvent_check(s, lambda, tol));
        }
    }
    let repelling = s
        .fixed_points()
        .iter()
        .filter(|fp| fp.role == Role::Repelling)
        .count();
    if repelling >= 2 && g.g2().is_finite() && lambda.re < g.g2().value() {
        out.push(witness_check(s, lambda, tol));
    }
}

fn membership_checks(
    s: &Scenario,
    g: &GammaProfile,
    lambda: Complex64,
    interior: bool,
    opts: &RunOptions,
    out: &mut Vec<CheckResult>,
) {
    let tol = &opts.tolerances;
    let mut c = CheckResult::new("membership", Some(lambda), true);
    let f = match eigenfunction(s, lambda) {
        Ok(f) => f,
        Err(e) => {
            out.push(c.failed(&e));
            return;
        }
    };
    let verdict = match ap_norm_rings(s, &f, s.p(), &opts.grid) {
        Ok(v) => v,
        Err(e) => {
            out.push(c.failed(&e));
            return;
        }
    };
    c.value = Some(verdict.fitted_exponent);
    c.tolerance = Some(Num::new(VERDICT_BAND));
    let near_line = g
        .all()
        .filter(|x| x.is_finite())
        .any(|x| (lambda.re - x.value()).abs() <= tol.membership_margin);
    c.status = match (interior, verdict.status) {
        (true, MembershipStatus::Convergent) => CheckStatus::Pass,
        (true, _) => CheckStatus::Fail,
        (false, MembershipStatus::Convergent) => CheckStatus::Fail,
        (false, MembershipStatus::Divergent) => CheckStatus::Pass,
        (false, MembershipStatus::Inconclusive) if near_line => CheckStatus::Inconclusive,
        (false, MembershipStatus::Inconclusive) => CheckStatus::Fail,
    };
    c.note = Some(if interior {
        "eigenvalue: expected convergent".into()
    } else {
        "not an eigenvalue: expected divergent".into()
    });
    let norm = verdict.norm(s.p());
    c.membership = Some(verdict);
    out.push(c);

    if let (true, Some(norm)) = (interior, norm) {
        let mut c = CheckResult::new("growth_bound", Some(lambda), true);
        let f: &Func = &f;
        match growth_envelope(f, s.p(), ENVELOPE.1, ENVELOPE.0) {
            Ok(env) => {
                c = c.below(env / norm, tol.envelope_ratio);
                c.note = Some(format!("sampled envelope {} over norm {}", Num::new(env), Num::new(norm)));
            }
            Err(e) => c = c.failed(&e),
        }
        out.push(c);
    }
}

fn resolvent_check(s: &Scenario, lambda: Complex64, tol: &Tolerances) -> CheckResult {
    let c = CheckResult::new("resolvent_residual", Some(lambda), true);
    let opts = orbit_options(tol);
    let cert = choose_anchor(s, lambda)
        .and_then(|a| orbit_integral_k(s, lambda, &one, a, default_base(s, a)?, &opts));
    let cert = match cert {
        Ok(cert) => cert,
        Err(e) => return c.failed(&e),
    };
    let f = |z: Complex64| resolvent_apply(s, &one, &cert, z);
    let grid = disk_grid(RESIDUAL_GRID.0, RESIDUAL_GRID.1);
    let mut c = match residual_check(s, lambda, &one, &f, &grid) {
        Ok(r) => c.below(r, tol.resolvent),
        Err(e) => c.failed(&e),
    };
    c.certificate = Some((&cert).into());
    c.note = Some("right-hand side f = 1".into());
    c
}

fn witness_check(s: &Scenario, lambda: Complex64, tol: &Tolerances) -> CheckResult {
    let mut c = CheckResult::new("nonsurjectivity_witness", Some(lambda), true);
    let opts = orbit_options(tol);
    let family: [(&str, &Func); 3] = [
        ("1", &one),
        ("z", &|z: Complex64| Ok(z)),
        ("z^2", &|z: Complex64| Ok(z * z)),
    ];
    let mut best = 0.0f64;
    for (_, f) in family {
        match nonsurjectivity_witness(s, lambda, f, &opts) {
            Ok(w) => {
                best = best.max(w.value.norm());
                c.values.push(w.value.into());
            }
            Err(e) => return c.failed(&e),
        }
    }
    c.value = Some(Num::new(best));
    c.tolerance = Some(Num::new(tol.witness));
    c.status = if best > tol.witness {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    };
    c.note = Some("largest |∫ω| between the two leading repelling points over f = 1, z, z^2".into());
    c
}

fn growth_checks(s: &Scenario, tol: &Tolerances, out: &mut Vec<CheckResult>) {
    if !s.is_evaluable() {
        return;
    }
    for (i, fp) in s.fixed_points().iter().enumerate() {
        let ExtComplex::Finite(beta) = fp.beta else {
            continue;
        };
        let direction = match fp.role {
            Role::DenjoyWolff => Direction::Forward,
            Role::Repelling if s.petal_anchor(i).is_some() => Direction::Backward,
            Role::Repelling => continue,
        };
        let mut c = CheckResult::new("growth_exponent", None, true)
            .with_note(format!("fixed point {i} ({direction:?} orbit)").to_lowercase());
        c.expected = Some(Num::new(beta.re));
        let allowed = tol.growth * beta.re.abs() + GROWTH_FLOOR;
        c = match coboundary_growth_exponent(s, i, direction) {
            Ok(fit) => {
                let mut c = c.below((fit.slope.get() - beta.re).abs(), allowed);
                c.values.push(Complex64::new(fit.slope.get(), 0.0).into());
                c
            }
            Err(e) => c.failed(&e),
        };
        out.push(c);
    }
}

fn truncate(
    s: &Scenario,
    g: &GammaProfile,
    req: &TruncationRequest,
    tol: &Tolerances,
    out: &mut Vec<CheckResult>,
) -> Result<TruncationReport> {
    let grid = TruncationGrid::default();
    let m = build_matrix(s, req.t, req.n, &grid)?;
    let gelfand = gelfand_radius(&m, req.n_max)?;
    let cloud = eigen_cloud(&m)?;
    let radius = operator_radius(g, req.t);
    let ratio = radius.as_ref().ok().and_then(|r| {
        let v = r.value.get();
        (v > 0.0).then(|| Num::new(gelfand.minimum.get() / v))
    });
    let mut c = CheckResult::new("gelfand_radius_bound", None, true);
    c.t = Some(Num::new(req.t));
    c = match &radius {
        Ok(r) => {
            let mut c = c.below(gelfand.minimum.get(), tol.radius_ratio * r.value.get());
            c.expected = Some(r.value);
            c
        }
        Err(e) => c.failed(e),
    };
    if !gelfand.unconverged.is_empty() {
        c.note = Some(format!("norm iteration capped for powers {:?}", gelfand.unconverged));
    }
    out.push(c);
    Ok(TruncationReport {
        t: Num::new(req.t),
        n: req.n,
        n_max: req.n_max,
        grid,
        aliasing_bound: m.metadata.aliasing_bound,
        gelfand,
        operator_radius: Outcome::from_result(radius),
        bound_ratio: ratio,
        eigen_cloud: cloud.into_iter().map(CNum::from).collect(),
    })
}
