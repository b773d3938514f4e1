//! Hyperbolic semiflows and semicocycles through their canonical model.
//!
//! A [`Scenario`] bundles the Bergman exponent `p`, the Koenigs function `h`
//! (with `h∘φ_t = h + t`), the semicoboundary `v` (with `u_t = v∘φ_t / v`)
//! and the declared boundary fixed-point data. Scenarios are immutable once
//! built; Newton seed grids are computed up front and only read afterwards.

mod boundary;
mod builtin;
mod config;

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

pub use boundary::{alpha_at, beta_at, richardson_to_zero, AlphaEstimate, BOUNDARY_TOLERANCE};
pub use builtin::BuiltIn;
pub use config::parse_scenario;

use crate::classifier::{gammas_from, GammaProfile};
use crate::error::{Error, Result};
use crate::expr::AnalyticExpr;
use crate::grid::disk_grid;
use crate::jet::Jet;

/// Complex number extended by a `-∞` sentinel (used for `β`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtComplex {
    Finite(Complex64),
    NegInfinity,
}

impl ExtComplex {
    /// Real part, `-∞` for the sentinel.
    pub fn re(&self) -> f64 {
        match self {
            ExtComplex::Finite(c) => c.re,
            ExtComplex::NegInfinity => f64::NEG_INFINITY,
        }
    }
}

impl fmt::Display for ExtComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtComplex::Finite(c) => write!(f, "{c}"),
            ExtComplex::NegInfinity => write!(f, "-inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    DenjoyWolff,
    Repelling,
}

/// Spectral data attached to one boundary fixed point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointDatum {
    pub zeta: Complex64,
    pub alpha: f64,
    /// Boundary value of the cocycle generator `g`; `u_t(ζ) = e^{β t}`.
    pub beta: ExtComplex,
    pub role: Role,
}

/// Parameters of the weight `v = e^{c h} (h')^{-s} (z - ζ*)^d`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Weights {
    pub c: f64,
    pub s: f64,
    pub d: f64,
}

impl Weights {
    pub fn is_zero(&self) -> bool {
        self.c == 0.0 && self.s == 0.0 && self.d == 0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    BuiltIn { kind: BuiltIn, weights: Weights },
    Expression { h: AnalyticExpr, v: AnalyticExpr },
    Parametric,
}

#[derive(Debug, Clone)]
enum Inverse {
    ClosedForm(BuiltIn),
    Newton(Vec<(Complex64, Complex64)>),
}

#[derive(Debug, Clone)]
struct Evaluator {
    h: AnalyticExpr,
    v: AnalyticExpr,
    inverse: Inverse,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    p: f64,
    model: Model,
    fixed_points: Vec<FixedPointDatum>,
    /// `(fixed point index, base point in the petal)` for each repelling point.
    petal_anchors: Vec<(usize, Complex64)>,
    evaluator: Option<Evaluator>,
}

const NEWTON_BUDGET: usize = 50;
const SEED_RINGS: usize = 64;
const SEED_RAYS: usize = 64;
/// Closest approach to the unit circle allowed for Newton-inverted orbit points.
pub const ORBIT_PRECISION_FLOOR: f64 = 1e-13;
/// Real part used for built-in petal anchors `h^{-1}(-M + i·midline)`.
pub const PETAL_DEPTH: f64 = 8.0;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn finite(z: Complex64, what: &str) -> Result<Complex64> {
    if z.is_finite() {
        Ok(z)
    } else {
        Err(Error::Evaluation(format!("{what} is not finite")))
    }
}

impl Scenario {
    pub fn builtin(kind: BuiltIn, p: f64, weights: Weights) -> Result<Self> {
        check_p(p)?;
        if let BuiltIn::StripFlow { a } = kind {
            if !(a > 0.0 && a.is_finite()) {
                return Err(Error::Invalid(format!("strip_flow needs a > 0, got {a}")));
            }
        }
        if kind.weight_carrier().is_none() && weights.d != 0.0 {
            return Err(Error::Invalid(format!(
                "{} has no repelling point to carry the d factor",
                kind.name()
            )));
        }
        let h = AnalyticExpr::parse(&kind.h_source())?;
        let v = builtin_weight(&kind, &weights)?;
        let fixed_points = kind.fixed_points(&weights);
        let mut s = Scenario {
            p,
            model: Model::BuiltIn { kind, weights },
            fixed_points,
            petal_anchors: Vec::new(),
            evaluator: Some(Evaluator {
                h,
                v,
                inverse: Inverse::ClosedForm(kind),
            }),
        };
        let mut anchors = Vec::new();
        for (j, fp) in s.fixed_points.iter().enumerate() {
            if fp.role == Role::Repelling {
                let w = c(-PETAL_DEPTH, kind.petal_midline(fp.zeta));
                anchors.push((j, s.h_inverse(w)?));
            }
        }
        s.petal_anchors = anchors;
        Ok(s)
    }

    pub fn expression(
        p: f64,
        h: AnalyticExpr,
        v: AnalyticExpr,
        fixed_points: Vec<FixedPointDatum>,
        petal_anchors: Vec<Complex64>,
    ) -> Result<Self> {
        check_p(p)?;
        validate_fixed_points(&fixed_points)?;
        let repelling: Vec<usize> = fixed_points
            .iter()
            .enumerate()
            .filter(|(_, fp)| fp.role == Role::Repelling)
            .map(|(j, _)| j)
            .collect();
        if !petal_anchors.is_empty() && petal_anchors.len() != repelling.len() {
            return Err(Error::Invalid(format!(
                "{} petal anchors given for {} repelling fixed points",
                petal_anchors.len(),
                repelling.len()
            )));
        }
        for a in &petal_anchors {
            if a.norm() >= 1.0 {
                return Err(Error::Invalid(format!("petal anchor {a} is not in the disk")));
            }
        }
        let seeds = seed_grid(&h);
        let s = Scenario {
            p,
            model: Model::Expression {
                h: h.clone(),
                v: v.clone(),
            },
            fixed_points,
            petal_anchors: repelling.into_iter().zip(petal_anchors).collect(),
            evaluator: Some(Evaluator {
                h,
                v,
                inverse: Inverse::Newton(seeds),
            }),
        };
        s.round_trip_smoke_test()?;
        Ok(s)
    }

    pub fn parametric(p: f64, fixed_points: Vec<FixedPointDatum>) -> Result<Self> {
        check_p(p)?;
        validate_fixed_points(&fixed_points)?;
        Ok(Scenario {
            p,
            model: Model::Parametric,
            fixed_points,
            petal_anchors: Vec::new(),
            evaluator: None,
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn model_name(&self) -> &'static str {
        match &self.model {
            Model::BuiltIn { kind, .. } => kind.name(),
            Model::Expression { .. } => "expression",
            Model::Parametric => "parametric",
        }
    }

    pub fn fixed_points(&self) -> &[FixedPointDatum] {
        &self.fixed_points
    }

    pub fn denjoy_wolff_index(&self) -> usize {
        self.fixed_points
            .iter()
            .position(|fp| fp.role == Role::DenjoyWolff)
            .expect("validated: exactly one Denjoy-Wolff point")
    }

    /// Base point inside the petal attached to repelling fixed point `index`.
    pub fn petal_anchor(&self, index: usize) -> Option<Complex64> {
        self.petal_anchors
            .iter()
            .find(|(j, _)| *j == index)
            .map(|(_, a)| *a)
    }

    pub fn is_evaluable(&self) -> bool {
        self.evaluator.is_some()
    }

    pub fn gamma_profile(&self) -> GammaProfile {
        gammas_from(&self.fixed_points, self.p)
    }

    /// Copy of this scenario with a different exponent `p`.
    pub fn with_p(&self, p: f64) -> Result<Self> {
        check_p(p)?;
        let mut s = self.clone();
        s.p = p;
        Ok(s)
    }

    fn evaluator(&self) -> Result<&Evaluator> {
        self.evaluator.as_ref().ok_or(Error::NotEvaluable)
    }

    fn check_disk(z: Complex64) -> Result<()> {
        if z.is_finite() && z.norm() < 1.0 {
            Ok(())
        } else {
            Err(Error::OutsideDisk(z.to_string()))
        }
    }

    /// `(h, h', h'')` at `z`.
    pub fn h_jet(&self, z: Complex64) -> Result<Jet> {
        let ev = self.evaluator()?;
        Self::check_disk(z)?;
        let j = ev.h.jet(z);
        if j.is_finite() {
            Ok(j)
        } else {
            Err(Error::Evaluation(format!("h is not finite at {z}")))
        }
    }

    /// `(v, v', v'')` at `z`.
    pub fn v_jet(&self, z: Complex64) -> Result<Jet> {
        let ev = self.evaluator()?;
        Self::check_disk(z)?;
        let j = ev.v.jet(z);
        if j.is_finite() {
            Ok(j)
        } else {
            Err(Error::Evaluation(format!("v is not finite at {z}")))
        }
    }

    pub fn h(&self, z: Complex64) -> Result<Complex64> {
        let ev = self.evaluator()?;
        Self::check_disk(z)?;
        finite(ev.h.eval(z), "h")
    }

    pub fn h_prime(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.h_jet(z)?.d1)
    }

    pub fn v(&self, z: Complex64) -> Result<Complex64> {
        let ev = self.evaluator()?;
        Self::check_disk(z)?;
        finite(ev.v.eval(z), "v")
    }

    pub fn v_prime(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.v_jet(z)?.d1)
    }

    /// Infinitesimal generator of the semiflow, `G = 1/h'`; built-in models use
    /// their explicit algebraic form.
    #[allow(non_snake_case)]
    pub fn generator_G(&self, z: Complex64) -> Result<Complex64> {
        if let Model::BuiltIn { kind, .. } = &self.model {
            Self::check_disk(z)?;
            return finite(kind.generator(z), "G");
        }
        finite(self.h_prime(z)?.inv(), "G")
    }

    /// `G' = -h''/h'^2`.
    #[allow(non_snake_case)]
    pub fn generator_G_prime(&self, z: Complex64) -> Result<Complex64> {
        if let Model::BuiltIn { kind, .. } = &self.model {
            Self::check_disk(z)?;
            return finite(kind.generator_derivative(z), "G'");
        }
        let j = self.h_jet(z)?;
        finite(-j.d2 / (j.d1 * j.d1), "G'")
    }

    /// Generator of the semicocycle, `g = v'/(v h')`.
    pub fn generator_g(&self, z: Complex64) -> Result<Complex64> {
        let ev = self.evaluator()?;
        let hj = self.h_jet(z)?;
        finite(ev.v.log_derivative(z) / hj.d1, "g")
    }

    /// Solves `h(z) = w` for `z` in the disk.
    pub fn h_inverse(&self, w: Complex64) -> Result<Complex64> {
        let ev = self.evaluator()?;
        if !w.is_finite() {
            return Err(Error::OutsideOmega);
        }
        match &ev.inverse {
            Inverse::ClosedForm(kind) => {
                if !kind.in_omega(w) {
                    return Err(Error::OutsideOmega);
                }
                let z = kind.inverse(w);
                if !z.is_finite() || z.norm() >= 1.0 {
                    return Err(Error::BoundaryPrecision);
                }
                Ok(self.polish(&ev.h, z, w))
            }
            Inverse::Newton(seeds) => newton_inverse(&ev.h, seeds, w),
        }
    }

    /// A few Newton steps on a closed-form inverse, keeping only improvements.
    fn polish(&self, h: &AnalyticExpr, mut z: Complex64, w: Complex64) -> Complex64 {
        if z.norm() > 0.99 {
            return z;
        }
        let mut best = (h.eval(z) - w).norm();
        let tol = 1e-14 * (1.0 + w.norm());
        for _ in 0..3 {
            if best <= tol {
                break;
            }
            let j = h.jet(z);
            let cand = z - (j.value - w) / j.d1;
            if !(cand.norm() < 1.0) {
                break;
            }
            let r = (h.eval(cand) - w).norm();
            if r < best {
                best = r;
                z = cand;
            } else {
                break;
            }
        }
        z
    }

    /// `φ_t(z) = h^{-1}(h(z) + t)`. Negative `t` follows the backward orbit and
    /// fails with [`Error::PetalExit`] once `h(z) + t` leaves the model domain.
    pub fn flow(&self, t: f64, z: Complex64) -> Result<Complex64> {
        Self::check_disk(z)?;
        if t == 0.0 {
            return Ok(z);
        }
        let w = self.h(z)? + t;
        match self.h_inverse(w) {
            Err(Error::OutsideOmega) if t < 0.0 => Err(Error::PetalExit),
            other => other,
        }
    }

    /// Point with `h`-coordinate `w`, for orbit walks that run arbitrarily
    /// close to a boundary fixed point.
    ///
    /// Closed-form models may return points rounded onto the unit circle;
    /// only [`Scenario::orbit_generator_g`] and user integrands are evaluated
    /// there. Newton-based models stop at [`ORBIT_PRECISION_FLOOR`].
    pub(crate) fn orbit_point(&self, w: Complex64) -> Result<Complex64> {
        let ev = self.evaluator()?;
        match &ev.inverse {
            Inverse::ClosedForm(kind) => {
                if !w.is_finite() || !kind.in_omega(w) {
                    return Err(Error::OutsideOmega);
                }
                let z = kind.inverse(w);
                if z.is_finite() {
                    Ok(z)
                } else {
                    Err(Error::BoundaryPrecision)
                }
            }
            Inverse::Newton(_) => {
                let z = self.h_inverse(w)?;
                if 1.0 - z.norm() < ORBIT_PRECISION_FLOOR {
                    Err(Error::BoundaryPrecision)
                } else {
                    Ok(z)
                }
            }
        }
    }

    /// Cocycle generator for orbit walks; see [`Scenario::orbit_point`].
    pub(crate) fn orbit_generator_g(&self, z: Complex64) -> Result<Complex64> {
        match &self.model {
            Model::BuiltIn { kind, weights } => Ok(kind.cocycle_generator(weights, z)),
            _ => self.generator_g(z),
        }
    }

    /// `u_t(z) = v(φ_t(z)) / v(z)`.
    pub fn cocycle(&self, t: f64, z: Complex64) -> Result<Complex64> {
        Self::check_disk(z)?;
        if t == 0.0 {
            return Ok(c(1.0, 0.0));
        }
        let zt = self.flow(t, z)?;
        finite(self.v(zt)? / self.v(z)?, "u_t")
    }

    fn round_trip_smoke_test(&self) -> Result<()> {
        for z in disk_grid(200, 0.95) {
            let w = self.h(z)?;
            let back = self.h_inverse(w)?;
            if (back - z).norm() > 1e-8 {
                return Err(Error::Invalid(format!(
                    "h is not inverted consistently at {z} (got {back}); check branch cuts"
                )));
            }
        }
        Ok(())
    }
}

fn check_p(p: f64) -> Result<()> {
    if p.is_finite() && p >= 1.0 {
        Ok(())
    } else {
        Err(Error::Invalid(format!("p must be >= 1, got {p}")))
    }
}

pub(crate) fn validate_fixed_points(fps: &[FixedPointDatum]) -> Result<()> {
    let dw = fps.iter().filter(|f| f.role == Role::DenjoyWolff).count();
    if dw != 1 {
        return Err(Error::Invalid(format!(
            "exactly one Denjoy-Wolff point required, found {dw}"
        )));
    }
    for (j, fp) in fps.iter().enumerate() {
        if (fp.zeta.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::Invalid(format!(
                "fixed point {j} at {} is not on the unit circle",
                fp.zeta
            )));
        }
        let ok = match fp.role {
            Role::DenjoyWolff => fp.alpha > 0.0,
            Role::Repelling => fp.alpha < 0.0,
        };
        if !ok || !fp.alpha.is_finite() {
            return Err(Error::Invalid(format!(
                "fixed point {j}: alpha = {} has the wrong sign for its role",
                fp.alpha
            )));
        }
        if let ExtComplex::Finite(b) = fp.beta {
            if !b.is_finite() {
                return Err(Error::Invalid(format!("fixed point {j}: beta is not finite")));
            }
        }
    }
    Ok(())
}

fn builtin_weight(kind: &BuiltIn, w: &Weights) -> Result<AnalyticExpr> {
    let mut factors: Vec<String> = Vec::new();
    let mut exponent: Vec<String> = Vec::new();
    if w.c != 0.0 {
        exponent.push(format!("({:?})*({})", w.c, kind.h_source()));
    }
    if w.s != 0.0 {
        exponent.push(format!("(-({:?}))*({})", w.s, kind.log_derivative_source()));
    }
    if !exponent.is_empty() {
        factors.push(format!("exp({})", exponent.join(" + ")));
    }
    if w.d != 0.0 {
        let q = kind.weight_carrier().expect("checked by caller");
        factors.push(format!("pow(z - ({:?}+{:?}i), {:?})", q.re, q.im, w.d));
    }
    if factors.is_empty() {
        return Ok(AnalyticExpr::Const(c(1.0, 0.0)));
    }
    AnalyticExpr::parse(&factors.join(" * "))
}

fn seed_grid(h: &AnalyticExpr) -> Vec<(Complex64, Complex64)> {
    let mut seeds = vec![(c(0.0, 0.0), h.eval(c(0.0, 0.0)))];
    for i in 1..SEED_RINGS {
        // radii accumulate toward the boundary: 1 - r runs from 1 down to 1e-6
        let r = 1.0 - 10f64.powf(-6.0 * i as f64 / (SEED_RINGS - 1) as f64);
        for k in 0..SEED_RAYS {
            let th = 2.0 * PI * k as f64 / SEED_RAYS as f64;
            let z = Complex64::from_polar(r, th);
            let w = h.eval(z);
            if w.is_finite() {
                seeds.push((z, w));
            }
        }
    }
    seeds
}

/// Damped Newton iteration for `h(z) = w` from `z`; returns the best iterate and residual.
fn newton(h: &AnalyticExpr, mut z: Complex64, w: Complex64, budget: usize) -> (Complex64, f64) {
    let tol = 1e-13 * (1.0 + w.norm());
    let mut best = (z, f64::INFINITY);
    for _ in 0..budget {
        let j = h.jet(z);
        let r = j.value - w;
        let rn = r.norm();
        if rn.is_finite() && rn < best.1 {
            best = (z, rn);
        }
        if rn <= tol {
            break;
        }
        let mut step = r / j.d1;
        if !step.is_finite() {
            break;
        }
        let mut next = z - step;
        let mut halvings = 0;
        while !(next.norm() < 1.0) && halvings < 60 {
            step *= 0.5;
            next = z - step;
            halvings += 1;
        }
        if !(next.norm() < 1.0) {
            break;
        }
        z = next;
    }
    best
}

fn newton_inverse(
    h: &AnalyticExpr,
    seeds: &[(Complex64, Complex64)],
    w: Complex64,
) -> Result<Complex64> {
    let (z0, w0) = seeds
        .iter()
        .min_by(|a, b| (a.1 - w).norm().total_cmp(&(b.1 - w).norm()))
        .copied()
        .unwrap_or((c(0.0, 0.0), h.eval(c(0.0, 0.0))));
    let accept = 1e-12 * (1.0 + w.norm());
    let mut best = newton(h, z0, w, NEWTON_BUDGET);
    // Fall back to continuation along the segment from the seed value to w.
    for substeps in [8usize, 64, 512] {
        if best.1 <= accept {
            break;
        }
        let mut z = z0;
        for i in 1..=substeps {
            let target = w0 + (w - w0) * (i as f64 / substeps as f64);
            z = newton(h, z, target, 8).0;
        }
        let candidate = newton(h, z, w, NEWTON_BUDGET);
        if candidate.1 < best.1 {
            best = candidate;
        }
    }
    let (zb, residual) = best;
    if residual <= accept {
        return Ok(zb);
    }
    if 1.0 - zb.norm() < 1e-6 {
        return Err(Error::OutsideOmega);
    }
    Err(Error::InversionFailure { residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strip() -> Scenario {
        Scenario::builtin(BuiltIn::StripFlow { a: 1.0 }, 2.0, Weights::default()).unwrap()
    }

    fn trident(w: Weights) -> Scenario {
        Scenario::builtin(BuiltIn::Trident, 2.0, w).unwrap()
    }

    #[test]
    fn strip_flow_values() {
        let s = strip();
        assert_eq!(s.h(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert!((s.h(c(0.5, 0.0)).unwrap().re - 1.0986123).abs() < 1e-7);
        assert!((s.h_inverse(c(1.0, 0.0)).unwrap().re - 0.4621172).abs() < 1e-7);
        assert!((s.flow(1.0, c(0.0, 0.0)).unwrap().re - 0.5f64.tanh()).abs() < 1e-15);
        assert!((s.generator_G(c(0.0, 0.0)).unwrap() - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn trident_values() {
        let s = trident(Weights::default());
        assert!(s.h(c(0.0, 0.0)).unwrap().norm() < 1e-16);
        assert!((s.generator_G(c(0.0, 0.0)).unwrap() - c(-1.0, 0.0)).norm() < 1e-14);
        let z = c(0.3, 0.2);
        let back = s.h_inverse(s.h(z).unwrap()).unwrap();
        assert!((back - z).norm() < 1e-12);
        let a = s.flow(0.7, s.flow(0.3, c(0.0, 0.1)).unwrap()).unwrap();
        let b = s.flow(1.0, c(0.0, 0.1)).unwrap();
        assert!((a - b).norm() < 1e-10);
    }

    #[test]
    fn unweighted_cocycle_is_one() {
        let s = trident(Weights::default());
        assert_eq!(s.cocycle(0.8, c(0.1, 0.4)).unwrap(), c(1.0, 0.0));
        assert_eq!(s.generator_g(c(0.1, 0.4)).unwrap(), c(0.0, 0.0));
        assert_eq!(s.cocycle(0.0, c(0.1, 0.4)).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn exponential_weight_gives_constant_cocycle() {
        let s = Scenario::builtin(
            BuiltIn::StripFlow { a: 1.0 },
            2.0,
            Weights {
                c: 1.0,
                s: 0.0,
                d: 0.0,
            },
        )
        .unwrap();
        for z in [c(0.0, 0.0), c(0.4, -0.3), c(-0.7, 0.1)] {
            let u = s.cocycle(1.3, z).unwrap();
            assert!((u - c(1.3f64.exp(), 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn explicit_cocycle_generator_matches_expression() {
        for (kind, w) in [
            (BuiltIn::StripFlow { a: 1.0 }, Weights { c: 0.4, s: 0.7, d: 0.3 }),
            (BuiltIn::Trident, Weights { c: -0.2, s: 0.5, d: 0.5 }),
            (BuiltIn::HalfStrip, Weights { c: 0.1, s: -0.4, d: 0.0 }),
        ] {
            let s = Scenario::builtin(kind, 2.0, w).unwrap();
            for z in [c(0.3, 0.2), c(-0.5, 0.1), c(0.1, -0.8)] {
                let a = s.generator_g(z).unwrap();
                let b = s.orbit_generator_g(z).unwrap();
                assert!((a - b).norm() < 1e-12, "{kind:?} {z}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn rejects_points_outside_disk() {
        let s = strip();
        assert!(matches!(s.h(c(1.0, 0.0)), Err(Error::OutsideDisk(_))));
        assert!(matches!(s.flow(1.0, c(0.0, 1.2)), Err(Error::OutsideDisk(_))));
    }

    #[test]
    fn outside_omega_and_petal_exit() {
        let s = Scenario::builtin(BuiltIn::HalfStrip, 2.0, Weights::default()).unwrap();
        assert!(matches!(s.h_inverse(c(-3.0, 0.0)), Err(Error::OutsideOmega)));
        assert!(matches!(s.flow(-5.0, c(0.0, 0.0)), Err(Error::PetalExit)));
        let t = trident(Weights::default());
        assert!(matches!(t.h_inverse(c(-2.0, 0.0)), Err(Error::OutsideOmega)));
    }

    #[test]
    fn petal_anchors_sit_near_their_fixed_points() {
        let t = trident(Weights::default());
        let a1 = t.petal_anchor(1).unwrap();
        let a2 = t.petal_anchor(2).unwrap();
        assert!((a1 - c(0.0, 1.0)).norm() < 1e-3, "{a1}");
        assert!((a2 - c(0.0, -1.0)).norm() < 1e-3, "{a2}");
        let s = strip();
        assert!((s.petal_anchor(1).unwrap() - c(-1.0, 0.0)).norm() < 1e-3);
        assert!(t.petal_anchor(0).is_none());
    }

    #[test]
    fn builtin_beta_from_weights() {
        let s = Scenario::builtin(
            BuiltIn::StripFlow { a: 1.0 },
            2.0,
            Weights {
                c: 0.4,
                s: 0.7,
                d: 0.0,
            },
        )
        .unwrap();
        assert_eq!(s.fixed_points()[0].beta.re(), 0.4 - 0.7);
        assert!((s.fixed_points()[1].beta.re() - 1.1).abs() < 1e-15);
        let t = trident(Weights {
            c: 0.0,
            s: 0.0,
            d: 0.5,
        });
        let betas: Vec<f64> = t.fixed_points().iter().map(|f| f.beta.re()).collect();
        assert_eq!(betas, vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn invalid_configurations() {
        assert!(Scenario::builtin(BuiltIn::StripFlow { a: 1.0 }, 0.5, Weights::default()).is_err());
        assert!(Scenario::builtin(BuiltIn::StripFlow { a: -1.0 }, 2.0, Weights::default()).is_err());
        let w = Weights {
            c: 0.0,
            s: 0.0,
            d: 1.0,
        };
        assert!(Scenario::builtin(BuiltIn::HalfStrip, 2.0, w).is_err());
        let two_dw = vec![
            FixedPointDatum {
                zeta: c(1.0, 0.0),
                alpha: 1.0,
                beta: ExtComplex::Finite(c(0.0, 0.0)),
                role: Role::DenjoyWolff,
            };
            2
        ];
        assert!(Scenario::parametric(2.0, two_dw).is_err());
    }

    #[test]
    fn expression_scenario_newton_inverse() {
        let h = AnalyticExpr::parse("log((1+z)/(1-z))").unwrap();
        let v = AnalyticExpr::parse("1").unwrap();
        let fps = strip().fixed_points().to_vec();
        let s = Scenario::expression(2.0, h, v, fps, vec![c(-0.99, 0.0)]).unwrap();
        let w = c(1.0, 0.3);
        let z = s.h_inverse(w).unwrap();
        assert!((s.h(z).unwrap() - w).norm() < 1e-12);
        assert!((z - (w * 0.5).tanh()).norm() < 1e-12);
        assert!(matches!(s.h_inverse(c(0.0, 2.0)), Err(Error::OutsideOmega) | Err(Error::InversionFailure { .. })));
    }
}
