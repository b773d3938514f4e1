//! Bergman-norm ring integrals and the convergence verdict drawn from them.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::quadrature::{integrate_panels, GaussLegendre, Tolerance};
use super::Func;
use crate::error::{Error, Result};
use crate::number::Num;
use crate::scenario::Scenario;

/// Rings fitted by the verdict rule.
pub const FIT_RINGS: usize = 6;
/// Fitted exponents above this are convergent, below its negative divergent.
pub const VERDICT_BAND: f64 = 0.1;

/// Node layout for the ring integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureGrid {
    /// Gauss–Legendre nodes across each ring.
    pub radial_nodes: usize,
    /// Initial equal angular panels (a power of two), refined adaptively.
    pub angular_panels: usize,
    /// Relative tolerance of each angular integral.
    pub angular_tol: f64,
    /// Number of rings; ring `k` ends at `r_k = 1 - 2^{-k}`.
    pub k_max: usize,
}

impl Default for QuadratureGrid {
    fn default() -> Self {
        QuadratureGrid {
            radial_nodes: 12,
            angular_panels: 64,
            angular_tol: 1e-11,
            k_max: 14,
        }
    }
}

impl QuadratureGrid {
    /// Same grid with radial and angular node counts doubled.
    pub fn doubled(&self) -> Self {
        QuadratureGrid {
            radial_nodes: 2 * self.radial_nodes,
            angular_panels: 2 * self.angular_panels,
            ..*self
        }
    }

    /// Ring radii `r_k = 1 - 2^{-k}`, `k = 1..=k_max`.
    pub fn radii(&self) -> Vec<f64> {
        (1..=self.k_max).map(|k| 1.0 - 0.5f64.powi(k as i32)).collect()
    }

    fn validate(&self) -> Result<()> {
        if self.radial_nodes == 0
            || !self.angular_panels.is_power_of_two()
            || self.k_max < FIT_RINGS + 1
            || !(self.angular_tol > 0.0)
        {
            return Err(Error::Invalid(format!("bad quadrature grid {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MembershipStatus {
    Convergent,
    Divergent,
    Inconclusive,
}

/// Outcome of a ring-integral convergence test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipVerdict {
    pub status: MembershipStatus,
    /// Decay exponent `τ` of the ring increments, `ΔI_k ∝ 2^{-kτ}`.
    pub fitted_exponent: Num,
    /// Cumulative integrals `I_1, I_2, ...`.
    pub ring_integrals: Vec<Num>,
    /// `I_K` plus a geometric tail estimate, for convergent verdicts.
    pub limit: Option<Num>,
}

impl MembershipVerdict {
    /// Applies the decision rule to cumulative ring integrals.
    pub fn from_rings(rings: &[f64]) -> Self {
        let deltas: Vec<f64> = rings.windows(2).map(|w| w[1] - w[0]).collect();
        let window = &deltas[deltas.len().saturating_sub(FIT_RINGS)..];
        let first_k = deltas.len() - window.len() + 1;
        let tau = if window.iter().all(|d| *d == 0.0) {
            f64::INFINITY
        } else {
            let pts: Vec<(f64, f64)> = window
                .iter()
                .enumerate()
                .map(|(i, d)| ((first_k + i) as f64, d.max(f64::MIN_POSITIVE).log2()))
                .collect();
            -least_squares_slope(&pts)
        };
        let status = if tau > VERDICT_BAND {
            MembershipStatus::Convergent
        } else if tau < -VERDICT_BAND {
            MembershipStatus::Divergent
        } else {
            MembershipStatus::Inconclusive
        };
        let limit = (status == MembershipStatus::Convergent).then(|| {
            let last = *rings.last().unwrap_or(&0.0);
            let d = *deltas.last().unwrap_or(&0.0);
            // The local ratio of the last two increments tracks the tail
            // better than the fitted exponent when increments are not exactly geometric.
            let n = deltas.len();
            let local = if n >= 2 { deltas[n - 1] / deltas[n - 2] } else { f64::NAN };
            let ratio = if local > 0.0 && local < 1.0 { local } else { 2f64.powf(-tau) };
            Num::new(last + d * ratio / (1.0 - ratio))
        });
        MembershipVerdict {
            status,
            fitted_exponent: Num::new(tau),
            ring_integrals: rings.iter().copied().map(Num::new).collect(),
            limit,
        }
    }

    fn divergent_overflow(rings: &[f64]) -> Self {
        MembershipVerdict {
            status: MembershipStatus::Divergent,
            fitted_exponent: Num::new(f64::NEG_INFINITY),
            ring_integrals: rings.iter().copied().map(Num::new).collect(),
            limit: None,
        }
    }

    /// `(limit)^{1/p}` when convergent.
    pub fn norm(&self, p: f64) -> Option<f64> {
        self.limit.map(|l| l.get().powf(1.0 / p))
    }
}

/// Least-squares slope of `y` against `x`.
pub fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// `∫ |f|^p` over `[lo, hi]` in `x` with angular integrals over `[a(x), b(x)]`,
/// radial Jacobian `x`. Returns `None` on overflow.
fn band<P>(
    f: &Func,
    p: f64,
    rule: &GaussLegendre,
    lo: f64,
    hi: f64,
    grid: &QuadratureGrid,
    angular_breaks: &(dyn Fn(f64) -> Vec<f64> + Sync),
    point: P,
) -> Result<Option<f64>>
where
    P: Fn(f64, f64) -> Complex64 + Sync,
{
    let nodes: Vec<(f64, f64)> = rule.on(lo, hi).collect();
    let tol = Tolerance::new(0.0, grid.angular_tol);
    let parts: Vec<f64> = nodes
        .par_iter()
        .map(|&(x, w)| {
            let breaks = angular_breaks(x);
            let r = integrate_panels(
                |theta| {
                    let v = f(point(x, theta))?;
                    Ok(Complex64::new(v.norm().powf(p), 0.0))
                },
                &breaks,
                tol,
            )?;
            Ok(w * x * r.value.re)
        })
        .collect::<Result<Vec<f64>>>()?;
    let total: f64 = parts.iter().sum();
    Ok(total.is_finite().then_some(total))
}

fn uniform_breaks(a: f64, b: f64, n: usize, extra: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = (0..=n).map(|k| a + (b - a) * k as f64 / n as f64).collect();
    v.extend(extra.iter().copied().filter(|x| *x > a && *x < b));
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Ring integrals `I_k = ∫_{|z| < r_k} |f|^p dV` and the verdict.
///
/// Angular panels get extra break points at the declared fixed points, where
/// `|f|^p` concentrates.
pub fn ap_norm_rings(
    s: &Scenario,
    f: &Func,
    p: f64,
    grid: &QuadratureGrid,
) -> Result<MembershipVerdict> {
    grid.validate()?;
    if !(p >= 1.0) {
        return Err(Error::Invalid(format!("p = {p} must be at least 1")));
    }
    let angles: Vec<f64> = s
        .fixed_points()
        .iter()
        .map(|fp| fp.zeta.arg().rem_euclid(2.0 * PI))
        .collect();
    let breaks = |_r: f64| uniform_breaks(0.0, 2.0 * PI, grid.angular_panels, &angles);
    let rule = GaussLegendre::new(grid.radial_nodes);
    let mut rings = Vec::with_capacity(grid.k_max);
    let mut inner = 0.0;
    let mut total = 0.0;
    for r in grid.radii() {
        match band(f, p, &rule, inner, r, grid, &breaks, |x, th| {
            Complex64::from_polar(x, th)
        })? {
            Some(v) => total += v,
            None => return Ok(MembershipVerdict::divergent_overflow(&rings)),
        }
        if !total.is_finite() {
            return Ok(MembershipVerdict::divergent_overflow(&rings));
        }
        rings.push(total);
        inner = r;
    }
    Ok(MembershipVerdict::from_rings(&rings))
}

/// Ring integrals over `𝔻 ∩ {ρ_{k+1} ≤ |z - ζ| < 1/2}`, `ρ_k = 2^{-k}`, growing
/// toward `ζ`; the verdict decides local membership at the boundary point `ζ`.
pub fn local_membership(
    f: &Func,
    zeta: Complex64,
    p: f64,
    grid: &QuadratureGrid,
) -> Result<MembershipVerdict> {
    grid.validate()?;
    if (zeta.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Precondition(format!("|ζ| = {} is not 1", zeta.norm())));
    }
    if !(p >= 1.0) {
        return Err(Error::Invalid(format!("p = {p} must be at least 1")));
    }
    let panels = (grid.angular_panels / 4).max(2);
    // z = ζ(1 - ρ e^{iψ}) lies in the disk iff cos ψ > ρ/2.
    let breaks = |rho: f64| {
        let m = (0.5 * rho).acos();
        uniform_breaks(-m, m, panels, &[0.0])
    };
    let rule = GaussLegendre::new(grid.radial_nodes);
    let mut rings = Vec::with_capacity(grid.k_max);
    let mut total = 0.0;
    for k in 1..=grid.k_max as i32 {
        let (lo, hi) = (0.5f64.powi(k + 1), 0.5f64.powi(k));
        match band(f, p, &rule, lo, hi, grid, &breaks, |rho, psi| {
            zeta * (1.0 - Complex64::from_polar(rho, psi))
        })? {
            Some(v) => total += v,
            None => return Ok(MembershipVerdict::divergent_overflow(&rings)),
        }
        if !total.is_finite() {
            return Ok(MembershipVerdict::divergent_overflow(&rings));
        }
        rings.push(total);
    }
    Ok(MembershipVerdict::from_rings(&rings))
}

/// Largest sampled `|f(z)| (1 - |z|^2)^{2/p}` on the circle of radius `r`.
pub fn growth_envelope(f: &Func, p: f64, r: f64, samples: usize) -> Result<f64> {
    let weight = (1.0 - r * r).powf(2.0 / p);
    let values = crate::grid::circle_grid(samples, r)
        .into_iter()
        .map(|z| Ok(f(z)?.norm() * weight))
        .collect::<Result<Vec<f64>>>()?;
    Ok(values.into_iter().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{BuiltIn, Weights};

    fn strip() -> Scenario {
        Scenario::builtin(BuiltIn::StripFlow { a: 1.0 }, 2.0, Weights::default()).unwrap()
    }

    #[test]
    fn unit_function_has_area_pi() {
        let one = |_z: Complex64| Ok(Complex64::new(1.0, 0.0));
        let v = ap_norm_rings(&strip(), &one, 2.0, &QuadratureGrid::default()).unwrap();
        assert_eq!(v.status, MembershipStatus::Convergent);
        assert!((v.fitted_exponent.get() - 1.0).abs() < 0.01);
        assert!((v.limit.unwrap().get() - PI).abs() < 1e-7, "{:?}", v.limit);
    }

    #[test]
    fn rule_on_synthetic_rings() {
        let conv: Vec<f64> = (1..=14).map(|k| 1.0 - 0.5f64.powi(k)).collect();
        assert_eq!(MembershipVerdict::from_rings(&conv).status, MembershipStatus::Convergent);
        let div: Vec<f64> = (1..=14).map(|k| 2f64.powi(k)).collect();
        assert_eq!(MembershipVerdict::from_rings(&div).status, MembershipStatus::Divergent);
        let log: Vec<f64> = (1..=14).map(|k| k as f64).collect();
        assert_eq!(MembershipVerdict::from_rings(&log).status, MembershipStatus::Inconclusive);
    }

    #[test]
    fn local_unit_function_decays_like_area() {
        let one = |_z: Complex64| Ok(Complex64::new(1.0, 0.0));
        let v = local_membership(&one, Complex64::new(0.0, 1.0), 2.0, &QuadratureGrid::default())
            .unwrap();
        assert_eq!(v.status, MembershipStatus::Convergent);
        assert!((v.fitted_exponent.get() - 2.0).abs() < 0.01);
    }

    #[test]
    fn overflow_is_divergent() {
        let huge = |z: Complex64| Ok(Complex64::new(1.0, 0.0) / (1.0 - z).powi(400));
        let v = ap_norm_rings(&strip(), &huge, 2.0, &QuadratureGrid::default()).unwrap();
        assert_eq!(v.status, MembershipStatus::Divergent);
    }

    #[test]
    fn local_point_must_be_on_circle() {
        let one = |_z: Complex64| Ok(Complex64::new(1.0, 0.0));
        let r = local_membership(&one, Complex64::new(0.5, 0.0), 2.0, &QuadratureGrid::default());
        assert!(matches!(r, Err(Error::Precondition(_))));
    }
}
