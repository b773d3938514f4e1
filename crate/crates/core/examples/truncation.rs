//! Finite sections of `T_1` on `A^2`: Gelfand estimates against the
//! operator radius and the leading eigenvalues.

use bergspec::classifier::operator_radius;
use bergspec::scenario::{BuiltIn, Scenario, Weights};
use bergspec::truncation::{build_matrix, eigen_cloud, gelfand_radius, TruncationGrid};

fn main() -> bergspec::Result<()> {
    let grid = TruncationGrid::default();
    for (kind, w) in [
        (BuiltIn::StripFlow { a: 1.0 }, Weights::default()),
        (BuiltIn::Trident, Weights::default()),
        (BuiltIn::StripFlow { a: 1.0 }, Weights { c: 0.3, s: -0.2, d: 0.0 }),
    ] {
        let s = Scenario::builtin(kind, 2.0, w)?;
        let m = build_matrix(&s, 1.0, 60, &grid)?;
        let g = gelfand_radius(&m, 24)?;
        let bound = operator_radius(&s.gamma_profile(), 1.0)?.value.get();
        let cloud = eigen_cloud(&m)?;
        println!(
            "{} {w:?}: gelfand {:.4}, operator radius {bound:.4}, ratio {:.3}, top eigenvalues {:.4} {:.4}",
            kind.name(),
            g.minimum.get(),
            g.minimum.get() / bound,
            cloud[0],
            cloud[1]
        );
    }
    Ok(())
}
