//! Smallest surface area of a closed can of fixed volume: the optimum has h = 2r.

use std::f64::consts::PI;

use sia::calculus::{constrained_stationary, verify_constrained};
use sia::parse;

pub fn run_example() -> sia::Result<()> {
    let area = parse("2*pi*r*h + 2*pi*r^2")?;
    let volume = parse("pi*r^2*h")?;
    let k = 16.0 * PI;
    let vars = ["r", "h"];

    for guess in [[1.0, 1.0], [3.0, 0.5]] {
        let sol = constrained_stationary(&area, &volume, k, &vars, &guess, 1e-12)?;
        let (r, h) = (sol.point[0], sol.point[1]);
        println!(
            "from {guess:?}: r = {r}, h = {h}, h - 2r = {:e}, lambda = {}, {} iterations",
            h - 2.0 * r,
            sol.multiplier,
            sol.iterations
        );
        println!("  stationary along the constraint: {}", verify_constrained(&area, &volume, &vars, &sol.point, 1e-8)?);
        println!("  same test at (r, r): {}", verify_constrained(&area, &volume, &vars, &[r, r], 1e-8)?);
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
