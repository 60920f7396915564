//! Random smooth expressions for property sweeps.
//!
//! Every generated expression is defined on all of `R`: divisions, logarithms and
//! square roots only ever see arguments bounded away from zero.

use rand::Rng;

use super::{BinOp, Expr};
use crate::nilpotent::Primitive;

/// Generates a random expression over `vars` with nesting depth at most `depth`.
pub fn smooth_expr<R: Rng + ?Sized>(rng: &mut R, vars: &[&str], depth: usize) -> Expr {
    if depth == 0 || rng.gen_bool(0.25) {
        return leaf(rng, vars);
    }
    let sub = |rng: &mut R| smooth_expr(rng, vars, depth - 1);
    match rng.gen_range(0..12) {
        0 => Expr::binary(BinOp::Add, sub(rng), sub(rng)),
        1 => Expr::binary(BinOp::Sub, sub(rng), sub(rng)),
        2 | 3 => Expr::binary(BinOp::Mul, sub(rng), sub(rng)),
        4 => {
            // a / (2 + sin(b))
            let den = Expr::binary(BinOp::Add, Expr::Num(2.0), Expr::call(Primitive::Sin, sub(rng)));
            Expr::binary(BinOp::Div, sub(rng), den)
        }
        5 => Expr::call(Primitive::Sin, sub(rng)),
        6 => Expr::call(Primitive::Cos, sub(rng)),
        7 => {
            // exp of a bounded argument
            Expr::call(Primitive::Exp, Expr::call(Primitive::Tanh, sub(rng)))
        }
        8 => Expr::call(Primitive::Log, one_plus_square(sub(rng))),
        9 => Expr::call(Primitive::Sqrt, one_plus_square(sub(rng))),
        10 => Expr::Neg(Box::new(sub(rng))),
        _ => Expr::Pow(Box::new(sub(rng)), rng.gen_range(2..=3) as f64),
    }
}

/// A random polynomial `sum_k c_k x^k` of the given degree, returned with its
/// coefficients (lowest order first).
pub fn polynomial<R: Rng + ?Sized>(rng: &mut R, var: &str, degree: usize) -> (Expr, Vec<f64>) {
    let coeffs: Vec<f64> = (0..=degree).map(|_| rng.gen_range(-3.0..3.0)).collect();
    let mut e = Expr::Num(coeffs[0]);
    for (k, &c) in coeffs.iter().enumerate().skip(1) {
        let monomial = if k == 1 { Expr::var(var) } else { Expr::Pow(Box::new(Expr::var(var)), k as f64) };
        e = Expr::binary(BinOp::Add, e, Expr::binary(BinOp::Mul, Expr::Num(c), monomial));
    }
    (e, coeffs)
}

fn one_plus_square(e: Expr) -> Expr {
    Expr::binary(BinOp::Add, Expr::Num(1.0), Expr::Pow(Box::new(e), 2.0))
}

fn leaf<R: Rng + ?Sized>(rng: &mut R, vars: &[&str]) -> Expr {
    if vars.is_empty() || rng.gen_bool(0.3) {
        let v: f64 = rng.gen_range(0.0..3.0);
        Expr::Num((v * 100.0).round() / 100.0)
    } else {
        Expr::var(vars[rng.gen_range(0..vars.len())])
    }
}
