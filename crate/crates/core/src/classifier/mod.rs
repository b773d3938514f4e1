//! Spectral sets of the generator and of the individual operators, computed
//! exactly from the exponents `γ_j = 2α_j/p + Re β_j`.

mod region;

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use region::{interval_union, Axis, Certainty, Component, Interval, Shape, SpectralRegion};

use crate::error::{Error, Result};
use crate::number::Num;
use crate::scenario::{FixedPointDatum, Role};

/// A real number or `-∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtReal(f64);

impl ExtReal {
    pub const NEG_INFINITY: ExtReal = ExtReal(f64::NEG_INFINITY);

    /// Panics on NaN or `+∞`.
    pub fn new(x: f64) -> Self {
        assert!(!x.is_nan() && x != f64::INFINITY, "ExtReal must be finite or -inf, got {x}");
        ExtReal(x)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    /// `e^{x t}`, with `e^{-∞ t} = 0` for `t > 0`.
    pub fn exp_times(self, t: f64) -> f64 {
        if t == 0.0 {
            1.0
        } else {
            (self.0 * t).exp()
        }
    }
}

impl Eq for ExtReal {}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl std::ops::Add<f64> for ExtReal {
    type Output = ExtReal;
    fn add(self, c: f64) -> ExtReal {
        ExtReal::new(self.0 + c)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Num::new(self.0))
    }
}

impl Serialize for ExtReal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Num::new(self.0).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let n = Num::deserialize(d)?;
        if n.get().is_nan() || n.get() == f64::INFINITY {
            return Err(serde::de::Error::custom("expected a real or -inf"));
        }
        Ok(ExtReal(n.get()))
    }
}

/// `γ_0` and the repelling exponents in non-increasing order, padded with `-∞`
/// so that at least two are present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaProfile {
    pub p: Num,
    pub gamma0: ExtReal,
    pub gammas: Vec<ExtReal>,
}

impl GammaProfile {
    pub fn new(p: f64, gamma0: ExtReal, mut gammas: Vec<ExtReal>) -> Self {
        gammas.sort_by(|a, b| b.cmp(a));
        while gammas.len() < 2 {
            gammas.push(ExtReal::NEG_INFINITY);
        }
        GammaProfile {
            p: Num::new(p),
            gamma0,
            gammas,
        }
    }

    /// Profile from plain reals (`f64::NEG_INFINITY` for `-∞`).
    pub fn from_values(p: f64, gamma0: f64, gammas: &[f64]) -> Self {
        GammaProfile::new(
            p,
            ExtReal::new(gamma0),
            gammas.iter().map(|&g| ExtReal::new(g)).collect(),
        )
    }

    pub fn g0(&self) -> ExtReal {
        self.gamma0
    }

    pub fn g1(&self) -> ExtReal {
        self.gammas[0]
    }

    pub fn g2(&self) -> ExtReal {
        self.gammas[1]
    }

    /// `γ_0, γ_1, γ_2, …`.
    pub fn all(&self) -> impl Iterator<Item = ExtReal> + '_ {
        std::iter::once(self.gamma0).chain(self.gammas.iter().copied())
    }

    pub fn max(&self) -> ExtReal {
        self.all().max().expect("profile is nonempty")
    }

    pub fn translate(&self, c: f64) -> GammaProfile {
        GammaProfile {
            p: self.p,
            gamma0: self.gamma0 + c,
            gammas: self.gammas.iter().map(|&g| g + c).collect(),
        }
    }
}

/// Which of the three orderings of `γ_0, γ_1, γ_2` applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumCase {
    /// `γ_0 >= γ_1`.
    AttractingDominant,
    /// `γ_2 < γ_0 < γ_1`.
    Gap,
    /// `γ_0 <= γ_2`.
    RepellingDominant,
}

impl SpectrumCase {
    pub fn of(g: &GammaProfile) -> SpectrumCase {
        if g.g0() >= g.g1() {
            SpectrumCase::AttractingDominant
        } else if g.g0() > g.g2() {
            SpectrumCase::Gap
        } else {
            SpectrumCase::RepellingDominant
        }
    }
}

/// `γ_j = 2α_j/p + Re β_j` for every declared fixed point.
pub fn gammas_from(fixed_points: &[FixedPointDatum], p: f64) -> GammaProfile {
    let gamma = |fp: &FixedPointDatum| ExtReal::new(2.0 * fp.alpha / p + fp.beta.re());
    let mut gamma0 = ExtReal::NEG_INFINITY;
    let mut rest = Vec::new();
    for fp in fixed_points {
        match fp.role {
            Role::DenjoyWolff => gamma0 = gamma(fp),
            Role::Repelling => rest.push(gamma(fp)),
        }
    }
    GammaProfile::new(p, gamma0, rest)
}

fn strip(a: ExtReal, b: ExtReal) -> Component {
    Component::certified(Shape::VStrip {
        a: a.value(),
        b: b.value(),
    })
}

fn half_plane(b: ExtReal) -> Component {
    Component::certified(Shape::HalfPlaneLeft { b: b.value() })
}

fn require_attracting_exponent(g: &GammaProfile, what: &str) -> Result<()> {
    if g.g0().is_finite() {
        Ok(())
    } else {
        Err(Error::Unsupported(format!(
            "{what} is not described when the Denjoy-Wolff exponent is -inf"
        )))
    }
}

/// Spectrum of the generator.
pub fn generator_spectrum(g: &GammaProfile) -> Result<SpectralRegion> {
    require_attracting_exponent(g, "the generator spectrum")?;
    let (g0, g1, g2) = (g.g0(), g.g1(), g.g2());
    let parts = match SpectrumCase::of(g) {
        SpectrumCase::AttractingDominant => vec![half_plane(g2), strip(g1, g0)],
        SpectrumCase::Gap => vec![half_plane(g2), strip(g0, g1)],
        SpectrumCase::RepellingDominant => vec![half_plane(g1)],
    };
    Ok(SpectralRegion::new(parts))
}

/// Essential spectrum: the vertical lines through the finite exponents.
pub fn essential_spectrum(g: &GammaProfile) -> Result<SpectralRegion> {
    if !g.g0().is_finite() || !g.g1().is_finite() {
        return Err(Error::Unsupported(
            "essential spectrum needs finite exponents at the Denjoy-Wolff point and at the \
             leading repelling point"
                .into(),
        ));
    }
    Ok(SpectralRegion::new(
        g.all()
            .filter(|x| x.is_finite())
            .map(|x| Component::certified(Shape::VLine { c: x.value() }))
            .collect(),
    ))
}

/// Point spectrum of the generator, with unresolved boundary lines.
pub fn generator_point_spectrum(g: &GammaProfile) -> SpectralRegion {
    let (g0, g1) = (g.g0(), g.g1());
    if !g0.is_finite() || g1 > g0 {
        return SpectralRegion::empty();
    }
    let unresolved = |x: ExtReal| {
        Component::new(Shape::VLine { c: x.value() }, Certainty::BoundaryUnresolved)
    };
    if g1 == g0 {
        return SpectralRegion::new(vec![unresolved(g0)]);
    }
    let mut parts = vec![
        Component::certified(Shape::OpenVStripInterior {
            a: g1.value(),
            b: g0.value(),
        }),
        unresolved(g0),
    ];
    if g1.is_finite() {
        parts.push(unresolved(g1));
    }
    SpectralRegion::new(parts)
}

/// Spectrum and point spectrum for an unweighted composition semigroup.
pub fn composition_spectrum(alphas: &[f64], p: f64) -> Result<(SpectralRegion, SpectralRegion)> {
    let Some((&a0, rest)) = alphas.split_first() else {
        return Err(Error::Precondition("at least one spectral value required".into()));
    };
    if !(a0 > 0.0) || rest.iter().any(|&a| !(a < 0.0)) {
        return Err(Error::Precondition(
            "expected alpha_0 > 0 followed by negative values".into(),
        ));
    }
    let gamma0 = ExtReal::new(2.0 * a0 / p);
    let rest = rest.iter().map(|&a| ExtReal::new(2.0 * a / p)).collect();
    let g = GammaProfile::new(p, gamma0, rest);
    Ok((generator_spectrum(&g)?, generator_point_spectrum(&g)))
}

/// Spectral radius of a single operator of the semigroup.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatorRadius {
    pub value: Num,
    /// All exponents are `-∞` (radius zero).
    pub quasinilpotent: bool,
}

pub fn operator_radius(g: &GammaProfile, t: f64) -> Result<OperatorRadius> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Precondition(format!("t must be >= 0, got {t}")));
    }
    let max = g.max();
    if t == 0.0 {
        return Ok(OperatorRadius {
            value: Num::new(1.0),
            quasinilpotent: false,
        });
    }
    Ok(OperatorRadius {
        value: Num::new(max.exp_times(t)),
        quasinilpotent: !max.is_finite(),
    })
}

/// Spectrum of the single operator at time `t > 0`.
pub fn operator_spectrum(g: &GammaProfile, t: f64) -> Result<SpectralRegion> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Precondition(format!("t must be > 0, got {t}")));
    }
    require_attracting_exponent(g, "the operator spectrum")?;
    let (g0, g1, g2) = (g.g0(), g.g1(), g.g2());
    let radius = g.max().exp_times(t);
    if g2 >= g0 || g2 == g1 {
        return Ok(SpectralRegion::new(vec![Component::certified(Shape::Disk {
            r: radius,
        })]));
    }
    let (e0, e1, e2) = (g0.exp_times(t), g1.exp_times(t), g2.exp_times(t));
    let inner = e0.min(e1);
    Ok(SpectralRegion::new(vec![
        Component::certified(Shape::Disk { r: e2 }),
        Component::certified(Shape::ClosedAnnulus {
            r1: inner,
            r2: e0.max(e1),
        }),
        Component::new(
            Shape::OpenAnnulusInterior { r1: e2, r2: inner },
            Certainty::UnknownOpenAnnulus,
        ),
    ]))
}

/// Point spectrum of the single operator at time `t >= 0`.
pub fn operator_point_spectrum(g: &GammaProfile, t: f64) -> Result<SpectralRegion> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Precondition(format!("t must be >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(SpectralRegion::new(vec![Component::new(
            Shape::Circle { r: 1.0 },
            Certainty::BoundaryUnresolved,
        )]));
    }
    let (g0, g1) = (g.g0(), g.g1());
    if !g0.is_finite() || g1 > g0 {
        return Ok(SpectralRegion::empty());
    }
    let circle = |x: ExtReal| {
        Component::new(Shape::Circle { r: x.exp_times(t) }, Certainty::BoundaryUnresolved)
    };
    if g1 == g0 {
        return Ok(SpectralRegion::new(vec![circle(g0)]));
    }
    Ok(SpectralRegion::new(vec![
        Component::certified(Shape::OpenAnnulusInterior {
            r1: g1.exp_times(t),
            r2: g0.exp_times(t),
        }),
        circle(g0),
        circle(g1),
    ]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Member,
    NonMember,
    Unresolved,
}

/// Whether `e^{μh}` is locally `p`-integrable near the fixed point `fp`.
pub fn membership_rule(mu: Complex64, fp: &FixedPointDatum, p: f64) -> Membership {
    let threshold = 2.0 * fp.alpha / p;
    let order = mu.re.total_cmp(&threshold);
    match (fp.role, order) {
        (_, Ordering::Equal) => Membership::Unresolved,
        (Role::DenjoyWolff, Ordering::Less) | (Role::Repelling, Ordering::Greater) => {
            Membership::Member
        }
        _ => Membership::NonMember,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::ExtComplex;
    use Shape::*;

    const NINF: f64 = f64::NEG_INFINITY;

    fn prof(g0: f64, rest: &[f64]) -> GammaProfile {
        GammaProfile::from_values(2.0, g0, rest)
    }

    fn shapes(r: &SpectralRegion) -> Vec<(Shape, Certainty)> {
        r.components().iter().map(|c| (c.shape, c.certainty)).collect()
    }

    fn certified(s: &[Shape]) -> Vec<(Shape, Certainty)> {
        s.iter().map(|x| (*x, Certainty::Certified)).collect()
    }

    fn fp(zeta: f64, alpha: f64, beta: f64, role: Role) -> FixedPointDatum {
        FixedPointDatum {
            zeta: Complex64::new(zeta, 0.0),
            alpha,
            beta: ExtComplex::Finite(Complex64::new(beta, 0.0)),
            role,
        }
    }

    #[test]
    fn profile_sorting_and_padding() {
        let g = gammas_from(
            &[
                fp(1.0, 1.0, 0.0, Role::DenjoyWolff),
                fp(-1.0, -1.0, 0.0, Role::Repelling),
            ],
            2.0,
        );
        assert_eq!(g.g0().value(), 1.0);
        assert_eq!(g.g1().value(), -1.0);
        assert_eq!(g.g2(), ExtReal::NEG_INFINITY);
        let g = prof(0.0, &[-3.0, 2.0, 1.0]);
        let v: Vec<f64> = g.gammas.iter().map(|x| x.value()).collect();
        assert_eq!(v, vec![2.0, 1.0, -3.0]);
    }

    #[test]
    fn three_cases() {
        let r = generator_spectrum(&prof(1.0, &[-1.0])).unwrap();
        assert_eq!(shapes(&r), certified(&[VStrip { a: -1.0, b: 1.0 }]));
        let r = generator_spectrum(&prof(0.5, &[1.0, -0.3])).unwrap();
        assert_eq!(
            shapes(&r),
            certified(&[HalfPlaneLeft { b: -0.3 }, VStrip { a: 0.5, b: 1.0 }])
        );
        let r = generator_spectrum(&prof(-1.0, &[2.0, 0.0])).unwrap();
        assert_eq!(shapes(&r), certified(&[HalfPlaneLeft { b: 2.0 }]));
    }

    #[test]
    fn attracting_exponent_minus_infinity_is_unsupported() {
        let g = prof(NINF, &[1.0]);
        assert!(matches!(generator_spectrum(&g), Err(Error::Unsupported(_))));
        assert!(generator_point_spectrum(&g).is_empty());
    }

    #[test]
    fn essential_lines() {
        let r = essential_spectrum(&prof(1.0, &[-1.0])).unwrap();
        assert_eq!(shapes(&r), certified(&[VLine { c: -1.0 }, VLine { c: 1.0 }]));
        let r = essential_spectrum(&prof(1.0, &[-2.0, -2.0])).unwrap();
        assert_eq!(shapes(&r), certified(&[VLine { c: -2.0 }, VLine { c: 1.0 }]));
        assert!(matches!(
            essential_spectrum(&prof(1.0, &[])),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn point_spectrum_cases() {
        let r = generator_point_spectrum(&prof(1.0, &[-1.0]));
        assert_eq!(r.certainty_at(Complex64::new(0.0, 3.0)), Some(Certainty::Certified));
        assert_eq!(
            r.certainty_at(Complex64::new(1.0, 0.0)),
            Some(Certainty::BoundaryUnresolved)
        );
        assert!(generator_point_spectrum(&prof(0.5, &[1.0, -0.3])).is_empty());
        let tie = generator_point_spectrum(&prof(0.0, &[0.0]));
        assert_eq!(
            shapes(&tie),
            vec![(VLine { c: 0.0 }, Certainty::BoundaryUnresolved)]
        );
    }

    #[test]
    fn compositions() {
        let (s, p) = composition_spectrum(&[1.0, -1.0], 2.0).unwrap();
        assert_eq!(shapes(&s), certified(&[VStrip { a: -1.0, b: 1.0 }]));
        assert!(p.contains(Complex64::new(0.99, 0.0)));
        let (s, p) = composition_spectrum(&[1.0], 2.0).unwrap();
        assert_eq!(shapes(&s), certified(&[HalfPlaneLeft { b: 1.0 }]));
        assert_eq!(
            p.with_certainty(Certainty::Certified).components()[0].shape,
            OpenVStripInterior { a: NINF, b: 1.0 }
        );
        let (s, p) = composition_spectrum(&[1.0, -2.0, -2.0], 2.0).unwrap();
        assert_eq!(shapes(&s), certified(&[HalfPlaneLeft { b: 1.0 }]));
        assert_eq!(
            p.with_certainty(Certainty::Certified).components()[0].shape,
            OpenVStripInterior { a: -2.0, b: 1.0 }
        );
        assert!(composition_spectrum(&[-1.0, -2.0], 2.0).is_err());
    }

    #[test]
    fn radius() {
        let e2 = operator_radius(&prof(1.0, &[-1.0]), 2.0).unwrap();
        assert_eq!(e2.value, Num::new(2f64.exp()));
        assert_eq!(operator_radius(&prof(1.0, &[]), 0.0).unwrap().value.get(), 1.0);
        let q = operator_radius(&prof(NINF, &[]), 1.0).unwrap();
        assert!(q.quasinilpotent);
        assert_eq!(q.value.get(), 0.0);
    }

    #[test]
    fn operator_spectrum_cases() {
        let r = operator_spectrum(&prof(0.0, &[1.0, 0.0]), 1.0).unwrap();
        assert_eq!(shapes(&r), certified(&[Disk { r: 1f64.exp() }]));
        let r = operator_spectrum(&prof(1.0, &[-1.0]), 1.0).unwrap();
        let e = 1f64.exp();
        assert_eq!(
            shapes(&r),
            vec![
                (OpenAnnulusInterior { r1: 0.0, r2: 1.0 / e }, Certainty::UnknownOpenAnnulus),
                (ClosedAnnulus { r1: 1.0 / e, r2: e }, Certainty::Certified),
            ]
        );
        assert!(operator_spectrum(&prof(1.0, &[-1.0]), 0.0).is_err());
    }

    #[test]
    fn operator_point_spectrum_cases() {
        let e = 1f64.exp();
        let r = operator_point_spectrum(&prof(1.0, &[-1.0]), 1.0).unwrap();
        assert!(r.contains(Complex64::new(1.0, 0.0)));
        assert_eq!(
            r.with_certainty(Certainty::Certified).components()[0].shape,
            OpenAnnulusInterior { r1: 1.0 / e, r2: e }
        );
        assert!(operator_point_spectrum(&prof(0.5, &[1.0]), 1.0).unwrap().is_empty());
        let id = operator_point_spectrum(&prof(0.5, &[1.0]), 0.0).unwrap();
        assert_eq!(shapes(&id), vec![(Circle { r: 1.0 }, Certainty::BoundaryUnresolved)]);
    }

    #[test]
    fn membership() {
        let dw = fp(1.0, 1.0, 0.0, Role::DenjoyWolff);
        let rep = fp(-1.0, -2.0, 0.0, Role::Repelling);
        let c = |x: f64| Complex64::new(x, 0.0);
        assert_eq!(membership_rule(c(0.5), &dw, 2.0), Membership::Member);
        assert_eq!(membership_rule(c(1.5), &dw, 2.0), Membership::NonMember);
        assert_eq!(membership_rule(c(1.0), &dw, 2.0), Membership::Unresolved);
        assert_eq!(membership_rule(c(-1.0), &rep, 2.0), Membership::Member);
        assert_eq!(membership_rule(c(-3.0), &rep, 2.0), Membership::NonMember);
    }
}
