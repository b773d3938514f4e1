//! Spectral regions for a few exponent profiles, one per ordering case.

use bergspec::classifier::{
    essential_spectrum, generator_point_spectrum, generator_spectrum, operator_spectrum,
    GammaProfile, SpectrumCase,
};

fn main() -> bergspec::Result<()> {
    let ninf = f64::NEG_INFINITY;
    let profiles = [
        ("attracting dominant", GammaProfile::from_values(2.0, 1.0, &[-1.0, -2.0])),
        ("gap", GammaProfile::from_values(2.0, 0.5, &[1.0, -0.3])),
        ("repelling dominant", GammaProfile::from_values(2.0, -2.0, &[1.0, -1.0])),
        ("one repelling point", GammaProfile::from_values(2.0, 1.0, &[-1.0, ninf])),
    ];
    for (label, g) in &profiles {
        println!("{label}: {:?}", SpectrumCase::of(g));
        println!("  sigma(A)   = {}", generator_spectrum(g)?);
        match essential_spectrum(g) {
            Ok(r) => println!("  sigma_e(A) = {r}"),
            Err(e) => println!("  sigma_e(A): {e}"),
        }
        println!("  sigma_p(A) = {}", generator_point_spectrum(g));
        println!("  sigma(T_1) = {}", operator_spectrum(g, 1.0)?);
    }
    Ok(())
}
