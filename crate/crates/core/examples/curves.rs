//! Lengths, areas and volumes of curves and solids of revolution.

use std::f64::consts::PI;

use sia::calculus::QuadratureConfig;
use sia::geometry::{
    arclength, cone_partial_surface, polar_arclength, surface_of_revolution, volume_of_revolution, CurveSpec,
};
use sia::parse;

pub fn run_example() -> sia::Result<()> {
    let cfg = QuadratureConfig::default();

    let segment = CurveSpec::new(parse("3*x")?, "x", 0.0, 1.0)?;
    println!("length of y = 3x on [0, 1]: {} (sqrt 10 = {})", arclength(&segment, &cfg)?, 10f64.sqrt());

    // Rotating y = m x about the x-axis gives a cone.
    let (m, xb) = (0.75, 2.0);
    let cone = CurveSpec::new(parse(&format!("{m}*x"))?, "x", 0.0, xb)?;
    let (r, slant) = (m * xb, xb * (1.0 + m * m).sqrt());
    println!(
        "cone surface {} against pi r l = {}",
        surface_of_revolution(&cone, &cfg)?.area,
        cone_partial_surface(r, slant, 2.0 * PI)?
    );
    println!("cone volume {} against pi r^2 h / 3 = {}", volume_of_revolution(&cone, &cfg)?, PI * r * r * xb / 3.0);

    let cardioid = CurveSpec::new(parse("1 + cos(theta)")?, "theta", 0.0, 2.0 * PI)?;
    println!("cardioid perimeter {} (exact 8)", polar_arclength(&cardioid, &cfg)?);

    let dip = CurveSpec::new(parse("x - 1")?, "x", 0.0, 3.0)?;
    let s = surface_of_revolution(&dip, &cfg)?;
    println!("y = x - 1 on [0, 3]: signed area {}, crosses the axis: {}", s.area, s.negative_radius);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
