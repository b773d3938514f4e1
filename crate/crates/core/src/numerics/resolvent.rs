//! Resolvent construction `F = (λ - A)^{-1} f` and its residual check.
//!
//! With `ω = e^{-λh} h' v f dz`, the solution is
//! `F(z) = e^{λh(z)}/v(z) · (K - ∫_0^z ω)`, where `K` is the integral of `ω`
//! from 0 to a boundary fixed point, computed along an orbit.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::orbit::{orbit_integral, Direction, OrbitNode, OrbitOptions};
use super::quadrature::{integrate, Tolerance};
use super::Func;
use crate::error::{Error, Result};
use crate::scenario::{Role, Scenario};

/// Location of `Re λ` relative to the spectral values, as used by a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateRegion {
    RightOfGamma0,
    GapBetweenGamma2AndMin,
    LeftOfGamma2,
}

/// A computed integration constant `K` with its error budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolventCertificate {
    pub lambda: Complex64,
    pub region: CertificateRegion,
    pub k: Complex64,
    pub tail_bound: f64,
    pub quadrature_error: f64,
    pub tolerance: f64,
    /// Index of the fixed point the constant integral runs to.
    pub anchor: usize,
    pub base: Complex64,
    pub t_end: f64,
}

/// Largest `|z|` accepted by [`resolvent_apply`].
pub const APPLY_RADIUS: f64 = 0.999;
/// Cauchy circle used for derivatives in [`residual_check`].
pub const CAUCHY_RADIUS: f64 = 0.02;
pub const CAUCHY_POINTS: usize = 16;
const EPSILON: f64 = 0.05;

/// `γ_j = 2α_j/p + Re β_j` for one fixed point.
pub fn gamma_of(s: &Scenario, index: usize) -> Result<f64> {
    let fp = s
        .fixed_points()
        .get(index)
        .ok_or_else(|| Error::Invalid(format!("no fixed point with index {index}")))?;
    Ok(2.0 * fp.alpha / s.p() + fp.beta.re())
}

/// `e^{-λh(z)} v(z)` as a single exponential.
fn omega_weight(s: &Scenario, lambda: Complex64, z: Complex64) -> Result<Complex64> {
    Ok((-lambda * s.h(z)? + s.v(z)?.ln()).exp())
}

/// `∫_0^z ω` along the straight segment.
pub fn segment_integral(
    s: &Scenario,
    lambda: Complex64,
    f: &Func,
    z: Complex64,
    tol: f64,
) -> Result<Complex64> {
    if z == Complex64::new(0.0, 0.0) {
        return Ok(z);
    }
    let r = integrate(
        |u| {
            let x = z * u;
            Ok(omega_weight(s, lambda, x)? * s.h_prime(x)? * f(x)? * z)
        },
        0.0,
        1.0,
        8,
        Tolerance::new(0.1 * tol, 1e-13),
    )?;
    if !(r.error <= 0.1 * tol || r.error <= 1e-13 * r.value.norm()) {
        return Err(Error::ToleranceFailure { achieved: r.error });
    }
    Ok(r.value)
}

/// Integration constant `K = ∫_0^{ζ} ω` for the fixed point `anchor`, reached
/// along the forward orbit of `base` (attracting point, `Re λ > γ_0`) or the
/// backward orbit of `base` (repelling point, `Re λ < γ_j`, `base` in its petal).
pub fn orbit_integral_k(
    s: &Scenario,
    lambda: Complex64,
    f: &Func,
    anchor: usize,
    base: Complex64,
    opts: &OrbitOptions,
) -> Result<ResolventCertificate> {
    let fp = *s
        .fixed_points()
        .get(anchor)
        .ok_or_else(|| Error::Invalid(format!("no fixed point with index {anchor}")))?;
    let gamma = gamma_of(s, anchor)?;
    let re = lambda.re;
    let (direction, rate, region) = match fp.role {
        Role::DenjoyWolff => {
            if !(re > gamma) {
                return Err(Error::DivergentOrbitIntegral(format!(
                    "Re λ = {re} must exceed γ = {gamma} at the attracting point"
                )));
            }
            let eps = EPSILON.min(0.5 * (re - gamma));
            (Direction::Forward, gamma - re + eps, CertificateRegion::RightOfGamma0)
        }
        Role::Repelling => {
            if !(re < gamma) {
                return Err(Error::DivergentOrbitIntegral(format!(
                    "Re λ = {re} must be below γ = {gamma} at fixed point {anchor}"
                )));
            }
            let eps = EPSILON.min(0.5 * (gamma - re));
            let g2 = s.gamma_profile().g2().value();
            let region = if re > g2 {
                CertificateRegion::GapBetweenGamma2AndMin
            } else {
                CertificateRegion::LeftOfGamma2
            };
            (Direction::Backward, re - gamma + eps, region)
        }
    };
    let sign = direction.sign();
    let prefactor = omega_weight(s, lambda, base)?;
    let orbit = orbit_integral(s, base, direction, rate, prefactor.norm(), opts, |n: &OrbitNode| {
        Ok((n.log_ratio - sign * lambda * n.t).exp() * f(n.z)?)
    })?;
    let head = segment_integral(s, lambda, f, base, opts.tol)?;
    Ok(ResolventCertificate {
        lambda,
        region,
        k: head + sign * prefactor * orbit.value,
        tail_bound: orbit.tail_bound,
        quadrature_error: orbit.quadrature_error,
        tolerance: opts.tol,
        anchor,
        base,
        t_end: orbit.t_end,
    })
}

/// Base point used for orbit integrals toward fixed point `index`.
pub fn default_base(s: &Scenario, index: usize) -> Result<Complex64> {
    match s.fixed_points().get(index).map(|fp| fp.role) {
        Some(Role::DenjoyWolff) => Ok(Complex64::new(0.0, 0.0)),
        Some(Role::Repelling) => s
            .petal_anchor(index)
            .ok_or_else(|| Error::Precondition(format!("fixed point {index} has no petal anchor"))),
        None => Err(Error::Invalid(format!("no fixed point with index {index}"))),
    }
}

/// Fixed point whose constant makes `F` analytic in `A^p`: the attracting
/// point right of `γ_0`, otherwise the repelling point with the largest `γ_j`
/// exceeding `Re λ`.
pub fn choose_anchor(s: &Scenario, lambda: Complex64) -> Result<usize> {
    let dw = s.denjoy_wolff_index();
    if lambda.re > gamma_of(s, dw)? {
        return Ok(dw);
    }
    let mut best: Option<(usize, f64)> = None;
    for (i, fp) in s.fixed_points().iter().enumerate() {
        if fp.role == Role::Repelling {
            let g = gamma_of(s, i)?;
            if lambda.re < g && best.is_none_or(|(_, b)| g > b) {
                best = Some((i, g));
            }
        }
    }
    best.map(|(i, _)| i).ok_or_else(|| {
        Error::DivergentOrbitIntegral(format!("no fixed point admits Re λ = {}", lambda.re))
    })
}

/// `F(z) = e^{λh(z)}/v(z) · (K - ∫_0^z ω)`.
pub fn resolvent_apply(
    s: &Scenario,
    f: &Func,
    cert: &ResolventCertificate,
    z: Complex64,
) -> Result<Complex64> {
    if !(z.norm() <= APPLY_RADIUS) {
        return Err(Error::Precondition(format!(
            "|z| = {} exceeds {APPLY_RADIUS}",
            z.norm()
        )));
    }
    let lambda = cert.lambda;
    let inner = segment_integral(s, lambda, f, z, cert.tolerance)?;
    Ok((cert.k - inner) / omega_weight(s, lambda, z)?)
}

/// `F'(z)` by the trapezoid rule on a Cauchy circle.
pub fn cauchy_derivative(f: &Func, z: Complex64) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..CAUCHY_POINTS {
        let e = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / CAUCHY_POINTS as f64);
        acc += f(z + CAUCHY_RADIUS * e)? / e;
    }
    Ok(acc / (CAUCHY_POINTS as f64 * CAUCHY_RADIUS))
}

/// Largest `|λF - F'/h' - gF - f|` over `grid`.
pub fn residual_check(
    s: &Scenario,
    lambda: Complex64,
    f: &Func,
    big_f: &Func,
    grid: &[Complex64],
) -> Result<f64> {
    if let Some(z) = grid.iter().find(|z| z.norm() > 0.9) {
        return Err(Error::Precondition(format!("grid point {z} outside |z| ≤ 0.9")));
    }
    let rs = grid
        .par_iter()
        .map(|&z| {
            let fz = big_f(z)?;
            let d = cauchy_derivative(big_f, z)?;
            let af = d / s.h_prime(z)? + s.generator_g(z)? * fz;
            Ok((lambda * fz - af - f(z)?).norm())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(rs.into_iter().fold(0.0, f64::max))
}

/// `∫_{ζ_1}^{ζ_2} ω` between the two repelling points with the largest `γ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub value: Complex64,
    pub first: ResolventCertificate,
    pub second: ResolventCertificate,
}

/// Difference of the constants anchored at the two leading repelling points;
/// nonzero values show `λ - A` is not onto. Requires `Re λ` below both `γ`.
pub fn nonsurjectivity_witness(
    s: &Scenario,
    lambda: Complex64,
    f: &Func,
    opts: &OrbitOptions,
) -> Result<Witness> {
    let mut reps: Vec<(usize, f64)> = Vec::new();
    for (i, fp) in s.fixed_points().iter().enumerate() {
        if fp.role == Role::Repelling {
            reps.push((i, gamma_of(s, i)?));
        }
    }
    if reps.len() < 2 {
        return Err(Error::Precondition(
            "a witness needs two repelling fixed points".into(),
        ));
    }
    reps.sort_by(|a, b| b.1.total_cmp(&a.1));
    let (first, second) = (reps[0], reps[1]);
    if !(lambda.re < second.1) {
        return Err(Error::Precondition(format!(
            "Re λ = {} must be below γ_2 = {}",
            lambda.re, second.1
        )));
    }
    let k1 = orbit_integral_k(s, lambda, f, first.0, default_base(s, first.0)?, opts)?;
    let k2 = orbit_integral_k(s, lambda, f, second.0, default_base(s, second.0)?, opts)?;
    Ok(Witness {
        value: k2.k - k1.k,
        first: k1,
        second: k2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::disk_grid;
    use crate::numerics::eigen::eigenfunction;
    use crate::scenario::{BuiltIn, Weights};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn one(_: Complex64) -> Result<Complex64> {
        Ok(Complex64::new(1.0, 0.0))
    }

    fn strip() -> Scenario {
        Scenario::builtin(BuiltIn::StripFlow { a: 1.0 }, 2.0, Weights::default()).unwrap()
    }

    #[test]
    fn strip_constants_in_closed_form() {
        let s = strip();
        let opts = OrbitOptions::default();
        for (lam, k) in [(2.0, 0.5), (3.0, 1.0 / 3.0)] {
            let cert = orbit_integral_k(&s, c(lam, 0.0), &one, 0, c(0.0, 0.0), &opts).unwrap();
            assert!((cert.k - c(k, 0.0)).norm() < 1e-10, "{cert:?}");
            assert_eq!(cert.region, CertificateRegion::RightOfGamma0);
        }
    }

    #[test]
    fn strip_resolvent_is_constant() {
        let s = strip();
        let cert =
            orbit_integral_k(&s, c(2.0, 0.0), &one, 0, c(0.0, 0.0), &OrbitOptions::default())
                .unwrap();
        for z in disk_grid(20, 0.9) {
            let f = resolvent_apply(&s, &one, &cert, z).unwrap();
            assert!((f - c(0.5, 0.0)).norm() < 1e-8, "{z}: {f}");
        }
    }

    #[test]
    fn residual_of_constant_and_eigenfunction() {
        let s = strip();
        let half = |_: Complex64| Ok(c(0.5, 0.0));
        let r = residual_check(&s, c(2.0, 0.0), &one, &half, &disk_grid(20, 0.9)).unwrap();
        assert!(r < 1e-10, "{r}");
        let lam = c(0.5, 0.0);
        let e = eigenfunction(&s, lam).unwrap();
        let zero = |_: Complex64| Ok(c(0.0, 0.0));
        let r = residual_check(&s, lam, &zero, &e, &disk_grid(20, 0.9)).unwrap();
        assert!(r < 1e-8, "{r}");
    }

    #[test]
    fn wrong_side_is_divergent() {
        let s = strip();
        let r = orbit_integral_k(&s, c(0.5, 0.0), &one, 0, c(0.0, 0.0), &OrbitOptions::default());
        assert!(matches!(r, Err(Error::DivergentOrbitIntegral(_))));
    }

    #[test]
    fn trident_gap_resolvent() {
        let w = Weights { c: 0.0, s: 0.0, d: 0.5 };
        let s = Scenario::builtin(BuiltIn::Trident, 2.0, w).unwrap();
        let lam = c(-1.5, 0.0);
        let anchor = choose_anchor(&s, lam).unwrap();
        assert_eq!(s.fixed_points()[anchor].zeta, c(0.0, 1.0));
        let opts = OrbitOptions::default();
        let cert = orbit_integral_k(&s, lam, &one, anchor, default_base(&s, anchor).unwrap(), &opts)
            .unwrap();
        assert_eq!(cert.region, CertificateRegion::GapBetweenGamma2AndMin);
        let f = |z: Complex64| resolvent_apply(&s, &one, &cert, z);
        let r = residual_check(&s, lam, &one, &f, &disk_grid(20, 0.9)).unwrap();
        assert!(r < 1e-5, "{r}");
    }

    #[test]
    fn witness_needs_low_lambda() {
        let s = Scenario::builtin(BuiltIn::Trident, 2.0, Weights::default()).unwrap();
        let r = nonsurjectivity_witness(&s, c(0.0, 0.0), &one, &OrbitOptions::default());
        assert!(matches!(r, Err(Error::Precondition(_))));
    }
}
