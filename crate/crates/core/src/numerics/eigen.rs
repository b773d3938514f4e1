//! Eigenfunction candidates `e^{λh}/v` and the semigroup identity they satisfy.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scenario::Scenario;

/// `z ↦ e^{λ h(z)} / v(z)`, evaluated as a single exponential.
pub fn eigenfunction(
    s: &Scenario,
    lambda: Complex64,
) -> Result<impl Fn(Complex64) -> Result<Complex64> + Sync + '_> {
    if !s.is_evaluable() {
        return Err(Error::NotEvaluable);
    }
    Ok(move |z: Complex64| {
        let e = (lambda * s.h(z)? - s.v(z)?.ln()).exp();
        if e.is_finite() {
            Ok(e)
        } else {
            Err(Error::Evaluation(format!("eigenfunction overflow at {z}")))
        }
    })
}

/// Largest `|u_t(z) F(φ_t(z)) - e^{λt} F(z)|` over `grid`, `F` the eigenfunction.
pub fn eigen_identity_residual(
    s: &Scenario,
    lambda: Complex64,
    t: f64,
    grid: &[Complex64],
) -> Result<f64> {
    if let Some(z) = grid.iter().find(|z| z.norm() > 0.95) {
        return Err(Error::Precondition(format!("grid point {z} outside |z| ≤ 0.95")));
    }
    let f = eigenfunction(s, lambda)?;
    let growth = (lambda * t).exp();
    let rs = grid
        .par_iter()
        .map(|&z| {
            let zt = s.flow(t, z)?;
            Ok((s.cocycle(t, z)? * f(zt)? - growth * f(z)?).norm())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(rs.into_iter().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::disk_grid;
    use crate::scenario::{BuiltIn, Weights};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn strip_half_power() {
        let s = Scenario::builtin(BuiltIn::StripFlow { a: 1.0 }, 2.0, Weights::default()).unwrap();
        let f = eigenfunction(&s, c(0.5, 0.0)).unwrap();
        for z in disk_grid(20, 0.9) {
            let want = ((1.0 + z) / (1.0 - z)).sqrt();
            assert!((f(z).unwrap() - want).norm() < 1e-12);
        }
    }

    #[test]
    fn trident_carrier_weight() {
        let w = Weights { c: 0.0, s: 0.0, d: 0.5 };
        let s = Scenario::builtin(BuiltIn::Trident, 2.0, w).unwrap();
        let f = eigenfunction(&s, c(0.0, 0.0)).unwrap();
        // v is fixed only up to a constant; compare ratios.
        let z0 = c(0.2, 0.1);
        let k = f(z0).unwrap() * (z0 - c(0.0, 1.0)).sqrt();
        for z in disk_grid(20, 0.9) {
            let want = k / (z - c(0.0, 1.0)).sqrt();
            assert!((f(z).unwrap() - want).norm() < 1e-12 * want.norm().max(1.0));
        }
    }

    #[test]
    fn identity_holds() {
        let s = Scenario::builtin(BuiltIn::StripFlow { a: 1.0 }, 2.0, Weights::default()).unwrap();
        let r = eigen_identity_residual(&s, c(0.5, 0.0), 1.0, &disk_grid(50, 0.95)).unwrap();
        assert!(r < 1e-9, "{r}");
        let w = Weights { c: 0.0, s: 0.0, d: 0.5 };
        let s = Scenario::builtin(BuiltIn::Trident, 2.0, w).unwrap();
        let r = eigen_identity_residual(&s, c(-1.5, 0.0), 0.7, &disk_grid(50, 0.95)).unwrap();
        assert!(r < 1e-9, "{r}");
    }
}
