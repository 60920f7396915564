//! The fundamental theorem of calculus as Stokes' theorem for a 0-form on [0, 1].

use sia::forms::{ftc_case, FormQuadrature};
use sia::parse;

pub fn run_example() -> sia::Result<()> {
    let germs = [(0.3, 1.7), (0.9, -0.4)];
    for src in ["x^2/2", "sin(x)", "exp(x)*cos(3*x)"] {
        let r = ftc_case(&parse(src)?, "x", &germs, &FormQuadrature::default())?;
        println!(
            "F = {src}: int dF = {} (boundary definition), {} (coordinates), F(1) - F(0) = {}",
            r.integral_sia, r.integral_coord, r.endpoint_difference
        );
        for g in &r.germs {
            let sign = if g.a < 0.0 { '-' } else { '+' };
            println!("  g(d) = {} {sign} {} d: d~F(g) = {}, F'(g(0)) a = {}", g.g0, g.a.abs(), g.sia, g.expected);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
