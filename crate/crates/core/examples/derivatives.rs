//! Exact derivatives: evaluate on `x + e` with `e * e = 0` and read off the slope.

use sia::calculus::{derivative, derivatives_upto, nth_derivative};
use sia::{parse, MultiDual, Primitive};

pub fn run_example() -> sia::Result<()> {
    // The algebra itself: (2 + e)^2 = 4 + 4e, nothing else survives.
    let x = MultiDual::variable(2.0, &[1.0])?;
    println!("(2 + e)^2 = {}", x.powi(2)?);
    println!("sin(2 + e) = {}", x.lift(Primitive::Sin)?);

    let f = parse("x^3 * exp(-x) / (1 + x^2)")?;
    println!("f(x) = {f}");
    println!("f'(0.5)   = {}", derivative(&f, "x", 0.5)?);
    println!("f'''(0.5) = {}", nth_derivative(&f, "x", 0.5, 3)?);

    // Several generators carry a whole Taylor jet at once.
    let jet = derivatives_upto(&parse("exp(2*x)")?, "x", 0.0, 5)?;
    println!("derivatives of exp(2x) at 0: {jet:?}");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
