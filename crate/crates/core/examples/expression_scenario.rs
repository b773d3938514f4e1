//! A scenario given by formulas instead of a built-in model. Here
//! `v = e^{0.2 h}`, so the cocycle is the constant `e^{0.2 t}`.

use bergspec::classifier::generator_spectrum;
use bergspec::report::{run, RunOptions};
use bergspec::scenario::parse_scenario;
use num_complex::Complex64;

const CONFIG: &str = "
p = 2
model = expression
h_expr = 0.5*log((1+z)/(1-z))
v_expr = pow((1+z)/(1-z), 0.1)
fp = (1, 2, 0.2, dw)
fp = (-1, -2, 0.2, rep)
";

fn main() -> bergspec::Result<()> {
    let s = parse_scenario(CONFIG)?;
    println!("sigma(A) = {}", generator_spectrum(&s.gamma_profile())?);
    let z = Complex64::new(0.3, 0.2);
    println!("phi_1({z}) = {:.6}, u_1 = {:.6}", s.flow(1.0, z)?, s.cocycle(1.0, z)?);
    let opts = RunOptions {
        ts: vec![1.0],
        lambdas: vec![Complex64::new(1.0, 0.0)],
        ..Default::default()
    };
    let report = run(&s, None, &opts)?;
    for c in &report.verification {
        println!("{} {:?}: {:?} {:?}", c.name, c.lambda.map(|l| l.get()), c.status, c.value);
    }
    Ok(())
}
