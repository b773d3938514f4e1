//! The built-in flows: fixed-point data and the semigroup and cocycle laws.

use bergspec::grid::disk_grid;
use bergspec::scenario::{BuiltIn, Scenario, Weights};

fn main() -> bergspec::Result<()> {
    let w = Weights { c: 0.4, s: 0.7, d: 0.0 };
    for kind in [BuiltIn::StripFlow { a: 1.0 }, BuiltIn::HalfStrip, BuiltIn::Trident] {
        let s = Scenario::builtin(kind, 2.0, w)?;
        println!("{}", kind.name());
        for fp in s.fixed_points() {
            println!(
                "  zeta = {:>8.4}  alpha = {:>5}  beta = {}  {:?}",
                fp.zeta, fp.alpha, fp.beta, fp.role
            );
        }
        println!("  gammas: {:?}", s.gamma_profile().all().map(|g| g.value()).collect::<Vec<_>>());

        let (t, u) = (0.7, 1.3);
        let mut flow_err: f64 = 0.0;
        let mut cocycle_err: f64 = 0.0;
        for z in disk_grid(100, 0.95) {
            let a = s.flow(t + u, z)?;
            let b = s.flow(t, s.flow(u, z)?)?;
            flow_err = flow_err.max((a - b).norm());
            let ca = s.cocycle(t + u, z)?;
            let cb = s.cocycle(u, z)? * s.cocycle(t, s.flow(u, z)?)?;
            cocycle_err = cocycle_err.max((ca - cb).norm() / ca.norm().max(1.0));
        }
        println!("  semigroup law error {flow_err:.2e}, cocycle law error {cocycle_err:.2e}");
    }
    Ok(())
}
