//! Solving `(λ - A)F = f` with orbit-integral constants, and the obstruction
//! to solvability left of every repelling exponent.

use bergspec::grid::disk_grid;
use bergspec::numerics::orbit::OrbitOptions;
use bergspec::numerics::resolvent::{
    choose_anchor, default_base, nonsurjectivity_witness, orbit_integral_k, residual_check,
    resolvent_apply,
};
use bergspec::scenario::{BuiltIn, Scenario, Weights};
use num_complex::Complex64;

fn one(_: Complex64) -> bergspec::Result<Complex64> {
    Ok(Complex64::new(1.0, 0.0))
}

fn main() -> bergspec::Result<()> {
    let opts = OrbitOptions::default();
    let cases = [
        (BuiltIn::StripFlow { a: 1.0 }, Weights::default(), 2.0),
        (BuiltIn::Trident, Weights { c: 0.0, s: 0.0, d: 0.5 }, -1.5),
    ];
    for (kind, w, re) in cases {
        let s = Scenario::builtin(kind, 2.0, w)?;
        let lambda = Complex64::new(re, 0.0);
        let anchor = choose_anchor(&s, lambda)?;
        let cert = orbit_integral_k(&s, lambda, &one, anchor, default_base(&s, anchor)?, &opts)?;
        let big_f = |z| resolvent_apply(&s, &one, &cert, z);
        let r = residual_check(&s, lambda, &one, &big_f, &disk_grid(20, 0.9))?;
        println!(
            "{} lambda = {re}: anchor {} ({:?}), K = {:.10}, F(0.3) = {:.10}, residual {r:.1e}",
            kind.name(),
            s.fixed_points()[anchor].zeta,
            cert.region,
            cert.k,
            big_f(Complex64::new(0.3, 0.0))?
        );
    }

    let s = Scenario::builtin(BuiltIn::Trident, 2.0, Weights::default())?;
    let lambda = Complex64::new(-3.0, 0.0);
    for (label, f) in [
        ("1", &one as &bergspec::numerics::Func),
        ("z", &|z: Complex64| Ok(z)),
    ] {
        let w = nonsurjectivity_witness(&s, lambda, f, &opts)?;
        println!("trident lambda = -3, f = {label}: witness {:.3e}", w.value);
    }
    Ok(())
}
