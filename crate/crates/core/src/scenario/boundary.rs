//! Boundary limits at declared fixed points by radial extrapolation.

use num_complex::Complex64;

use super::{ExtComplex, Scenario};
use crate::error::{Error, Result};

/// Agreement required between declared and numerically recovered data.
pub const BOUNDARY_TOLERANCE: f64 = 1e-4;

const K_FIRST: i32 = 4;
const K_LAST: i32 = 14;
const FIT_POINTS: usize = 4;
const MINUS_INFINITY_LEVEL: f64 = -1e3;

/// Both numerical routes to the spectral value `alpha` at one fixed point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaEstimate {
    pub declared: f64,
    /// From the difference quotient `-log[(ζ - φ_1(rζ)) / (ζ - rζ)]`.
    pub quotient: f64,
    /// From `-Re G'(rζ)`.
    pub derivative: f64,
}

impl AlphaEstimate {
    pub fn value(&self) -> f64 {
        self.derivative
    }

    pub fn discrepancy(&self) -> f64 {
        (self.quotient - self.declared)
            .abs()
            .max((self.derivative - self.declared).abs())
    }
}

/// Polynomial (Neville) extrapolation of `ys` sampled at `xs` to `x = 0`.
pub fn richardson_to_zero(xs: &[f64], ys: &[Complex64]) -> Complex64 {
    assert_eq!(xs.len(), ys.len());
    let mut t: Vec<Complex64> = ys.to_vec();
    let n = t.len();
    for m in 1..n {
        for i in 0..n - m {
            let (xi, xj) = (xs[i], xs[i + m]);
            t[i] = (xj * t[i] - xi * t[i + 1]) / (xj - xi);
        }
    }
    t[0]
}

/// Samples `f(r_k ζ)` for `r_k = 1 - 2^{-k}`, `k = 4..=14`.
fn radial_samples(
    zeta: Complex64,
    mut f: impl FnMut(Complex64) -> Result<Complex64>,
) -> Result<(Vec<f64>, Vec<Complex64>)> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for k in K_FIRST..=K_LAST {
        let gap = 2f64.powi(-k);
        let y = f(zeta * (1.0 - gap))?;
        xs.push(gap);
        ys.push(y);
    }
    Ok((xs, ys))
}

fn tail(xs: &[f64], ys: &[Complex64], skip_last: usize) -> Complex64 {
    let end = xs.len() - skip_last;
    let start = end - FIT_POINTS;
    richardson_to_zero(&xs[start..end], &ys[start..end])
}

fn fixed_point_index(s: &Scenario, index: usize) -> Result<Complex64> {
    s.fixed_points()
        .get(index)
        .map(|fp| fp.zeta)
        .ok_or_else(|| Error::Invalid(format!("no fixed point with index {index}")))
}

/// Recovers `alpha` at fixed point `index` and checks it against the declared value.
pub fn alpha_at(s: &Scenario, index: usize) -> Result<AlphaEstimate> {
    let zeta = fixed_point_index(s, index)?;
    let declared = s.fixed_points()[index].alpha;
    let (xs, q) = radial_samples(zeta, |z| {
        let moved = s.flow(1.0, z)?;
        Ok(-((zeta - moved) / (zeta - z)).ln())
    })?;
    let (_, d) = radial_samples(zeta, |z| Ok(-s.generator_G_prime(z)?))?;
    let est = AlphaEstimate {
        declared,
        quotient: tail(&xs, &q, 0).re,
        derivative: tail(&xs, &d, 0).re,
    };
    for numeric in [est.quotient, est.derivative] {
        if !((numeric - declared).abs() <= BOUNDARY_TOLERANCE) {
            return Err(Error::ModelInconsistency {
                index,
                declared,
                numeric,
            });
        }
    }
    Ok(est)
}

/// Radial limit of the cocycle generator `g` at fixed point `index`.
pub fn beta_at(s: &Scenario, index: usize) -> Result<ExtComplex> {
    let zeta = fixed_point_index(s, index)?;
    let (xs, ys) = radial_samples(zeta, |z| s.generator_g(z))?;
    let last = ys[ys.len() - 1].re;
    let decreasing = ys
        .windows(2)
        .rev()
        .take(FIT_POINTS)
        .all(|w| w[1].re < w[0].re);
    if last < MINUS_INFINITY_LEVEL && decreasing {
        return Ok(ExtComplex::NegInfinity);
    }
    let fine = tail(&xs, &ys, 0);
    let coarse = tail(&xs, &ys, 1);
    if !fine.is_finite() || (fine - coarse).norm() > 1e-3 * fine.norm().max(1.0) {
        return Err(Error::NoBoundaryLimit(index));
    }
    Ok(ExtComplex::Finite(fine))
}
