//! Gradients from D(n) and Hessians from two independent generators.

use sia::calculus::{eval_micro, find_stationary, hessian, is_stationary};
use sia::parse;

pub fn run_example() -> sia::Result<()> {
    let f = parse("x^2*y + sin(x*y) - y^3/3")?;
    let vars = ["x", "y"];
    let p = [0.8, -0.4];

    let micro = eval_micro(&f, &vars, &p)?;
    println!("f{p:?} = {}", micro.value);
    println!("grad f = {:?}", micro.grad);
    for row in hessian(&f, &vars, &p)? {
        println!("hessian row {row:?}");
    }

    let bowl = parse("(x - 1)^2 + 2*(y + 0.5)^2 + x*y")?;
    let s = find_stationary(&bowl, &vars, &[0.0, 0.0], 1e-12)?;
    println!("stationary point of the bowl: {s:?}");
    println!("f(s + d) = f(s) for all d in D(2): {}", is_stationary(&bowl, &vars, &s, 1e-10)?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
