//! Writes SVG plots of the generator and operator spectra of a gap profile.

use bergspec::classifier::{generator_spectrum, operator_spectrum, GammaProfile};
use bergspec::svg::{render_svg, Viewport};

fn main() -> bergspec::Result<()> {
    let g = GammaProfile::from_values(2.0, 0.5, &[1.0, -0.3]);
    let dir = std::env::temp_dir();
    let generator = generator_spectrum(&g)?;
    let operator = operator_spectrum(&g, 1.0)?;
    for (name, region, view) in [
        ("generator", &generator, Viewport::new(-2.0, 2.0, -1.5, 1.5)),
        ("operator", &operator, Viewport::fit(&operator)),
    ] {
        let path = dir.join(format!("gap.{name}.svg"));
        std::fs::write(&path, render_svg(region, &view))?;
        println!("{region} -> {}", path.display());
    }
    Ok(())
}
