//! Candidate eigenfunctions `e^{λh}/v` on the strip flow: the semigroup
//! identity and the Bergman-norm verdict on either side of the threshold.

use bergspec::grid::disk_grid;
use bergspec::numerics::eigen::{eigen_identity_residual, eigenfunction};
use bergspec::numerics::membership::{ap_norm_rings, QuadratureGrid};
use bergspec::scenario::{BuiltIn, Scenario, Weights};
use num_complex::Complex64;

fn main() -> bergspec::Result<()> {
    let s = Scenario::builtin(BuiltIn::StripFlow { a: 1.0 }, 2.0, Weights::default())?;
    let grid = QuadratureGrid::default();
    for re in [0.5, 1.0, 1.5] {
        let lambda = Complex64::new(re, 0.0);
        let f = eigenfunction(&s, lambda)?;
        let identity = eigen_identity_residual(&s, lambda, 1.0, &disk_grid(100, 0.95))?;
        let v = ap_norm_rings(&s, &f, 2.0, &grid)?;
        println!(
            "lambda = {re}: identity residual {identity:.1e}, {:?} (tau = {}), norm {:?}",
            v.status,
            v.fitted_exponent,
            v.norm(2.0)
        );
    }
    Ok(())
}
