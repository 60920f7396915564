//! Adaptive Gauss-Legendre quadrature and antiderivatives that accept infinitesimals.

use sia::calculus::{integrate, integrate_fn, Antiderivative, QuadratureConfig};
use sia::{parse, MultiDual};

pub fn run_example() -> sia::Result<()> {
    let cfg = QuadratureConfig::default();
    let gauss = parse("exp(-x^2)")?;
    let half = integrate(&gauss, "x", 0.0, 10.0, &cfg)?;
    println!("int_0^10 exp(-x^2) = {half} (sqrt(pi)/2 = {})", std::f64::consts::PI.sqrt() / 2.0);

    let wiggly = integrate_fn(|x| Ok((50.0 * x).sin() * x), 0.0, 1.0, &cfg)?;
    println!("int_0^1 x sin(50x) = {wiggly}");

    // G(x) = int_0^x cos, evaluated at 1 + e: G(1) + cos(1) e
    let g = Antiderivative::new(parse("cos(t)")?, "t", 0.0, cfg);
    let v = g.eval_nilpotent(&MultiDual::variable(1.0, &[1.0])?)?;
    println!("G(1 + e) = {v}  (sin 1 = {}, cos 1 = {})", 1f64.sin(), 1f64.cos());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
