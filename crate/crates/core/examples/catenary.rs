//! The hanging chain: u = a cosh(x/a) solves 1 + u'^2 = a^2 u''^2 with u(0) = a, u'(0) = 0.

use sia::calculus::QuadratureConfig;
use sia::geometry::{arclength, catenary_residual, CurveSpec};
use sia::parse;

pub fn run_example() -> sia::Result<()> {
    let u = parse("a*cosh(x/a)")?;
    for a in [0.5, 1.0, 3.0] {
        let xs: Vec<f64> = (0..41).map(|i| -2.0 * a + 4.0 * a * i as f64 / 40.0).collect();
        let report = catenary_residual(&u, "x", a, &xs)?;
        let x = 1.5 * a;
        let len = arclength(&CurveSpec::new(u.bind("a", a), "x", 0.0, x)?, &QuadratureConfig::default())?;
        println!(
            "a = {a}: max residual {:e}, u(0) - a = {}, u'(0) = {}, length to {x} = {len} (a sinh(x/a) = {})",
            report.max_residual(),
            report.initial_offset,
            report.initial_slope,
            a * (x / a).sinh()
        );
    }

    // A parabola is not a catenary.
    let wrong = catenary_residual(&parse("1 + x^2/2")?, "x", 1.0, &[0.0, 0.5, 1.0])?;
    println!("parabola residuals: {:?}", wrong.residuals);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
