//! A seeded property sweep over the whole library, run by `sia selftest`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::calculus::{constrained_stationary, derivative, verify_constrained};
use crate::error::Result;
use crate::expr::{parse, random::smooth_expr, BinOp, Expr};
use crate::forms::{
    eval_form, exterior_derivative_sia, ftc_case, permutation_sign, random, verify_generalized_stokes, Boundary, Chain,
    FiniteCube, Form, FormQuadrature, InfinitesimalCube,
};
use crate::nilpotent::{MultiDual, Primitive, DEFAULT_IMPURITY_TOL};

pub const DEFAULT_SEED: u64 = 1729;

/// Outcome of one property over all of its cases.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// Largest observed error, in the property's own measure.
    pub worst: f64,
    /// First failure, if any.
    pub detail: Option<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

/// Runs `cases` instances of a property. Each instance returns its error and whether
/// that error is acceptable; a library error counts as a failure.
fn sweep<F>(name: &'static str, cases: usize, rng: &mut ChaCha8Rng, mut case: F) -> Check
where
    F: FnMut(&mut ChaCha8Rng) -> Result<(f64, bool)>,
{
    let mut check = Check { name, cases, failures: 0, worst: 0.0, detail: None };
    for i in 0..cases {
        let (err, ok, note) = match case(rng) {
            Ok((err, ok)) => (err, ok, format!("case {i}: error {err:e}")),
            Err(e) => (f64::INFINITY, false, format!("case {i}: {e}")),
        };
        if err.is_nan() || err > check.worst {
            check.worst = err;
        }
        if !ok {
            check.failures += 1;
            check.detail.get_or_insert(note);
        }
    }
    check
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
}

fn max_diff(a: &MultiDual, b: &MultiDual) -> f64 {
    let scale = a.coeffs().iter().chain(b.coeffs()).fold(1f64, |m, c| m.max(c.abs()));
    a.coeffs().iter().zip(b.coeffs()).fold(0f64, |m, (x, y)| m.max((x - y).abs())) / scale
}

fn random_element(rng: &mut ChaCha8Rng, n: usize) -> MultiDual {
    let coeffs = (0..1usize << n).map(|_| rng.gen_range(-2.0..2.0)).collect();
    MultiDual::from_coeffs(n, coeffs).expect("small generator count")
}

pub fn run(seed: u64) -> SelftestReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    let bound = |err: f64, tol: f64| Ok((err, err <= tol));

    checks.push(sweep("ring laws", 100, &mut rng, |rng| {
        let (a, b, c) = (random_element(rng, 3), random_element(rng, 3), random_element(rng, 3));
        let comm = max_diff(&a.try_mul(&b)?, &b.try_mul(&a)?);
        let assoc = max_diff(&a.try_mul(&b)?.try_mul(&c)?, &a.try_mul(&b.try_mul(&c)?)?);
        let dist = max_diff(&a.try_mul(&b.try_add(&c)?)?, &a.try_mul(&b)?.try_add(&a.try_mul(&c)?)?);
        bound(comm.max(assoc).max(dist), 1e-12)
    }));

    checks.push(sweep("inverse", 100, &mut rng, |rng| {
        let mut a = random_element(rng, 3);
        let shift = if a.standard_part() < 0.0 { -1.0 } else { 1.0 };
        a = a.try_add(&MultiDual::constant(3, shift)?)?;
        let one = a.try_mul(&a.invert()?)?;
        bound(max_diff(&one, &MultiDual::constant(3, 1.0)?), 1e-12)
    }));

    checks.push(sweep("exp and log", 100, &mut rng, |rng| {
        let a = random_element(rng, 3).scale(0.5);
        let back = a.lift(Primitive::Exp)?.lift(Primitive::Log)?;
        bound(max_diff(&back, &a), 1e-12)
    }));

    checks.push(sweep("derivative rules", 100, &mut rng, |rng| {
        let f = smooth_expr(rng, &["x"], 3);
        let g = smooth_expr(rng, &["x"], 3);
        let x = rng.gen_range(-1.5..1.5);
        let (fx, gx) = (f.eval_real(&[("x", x)])?, g.eval_real(&[("x", x)])?);
        let (df, dg) = (derivative(&f, "x", x)?, derivative(&g, "x", x)?);
        let d = |op: BinOp| derivative(&Expr::binary(op, f.clone(), g.clone()), "x", x);
        let mut err = rel(d(BinOp::Add)?, df + dg).max(rel(d(BinOp::Mul)?, df * gx + fx * dg));
        if gx.abs() >= 0.1 {
            err = err.max(rel(d(BinOp::Div)?, (df * gx - fx * dg) / (gx * gx)));
        }
        let chain = derivative(&f.substitute("x", &g), "x", x)?;
        err = err.max(rel(chain, derivative(&f, "x", gx)? * dg));
        bound(err, 1e-10)
    }));

    checks.push(sweep("boundary of a boundary", 60, &mut rng, |rng| {
        let n = rng.gen_range(1..=4);
        let empty = if rng.gen_bool(0.5) {
            let m = rng.gen_range(1..=3);
            let scalings = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let cube = InfinitesimalCube::new(scalings, random::germ(rng, n, m))?;
            Chain::single(cube).boundary()?.boundary()?.is_empty()
        } else {
            let m = rng.gen_range(n..=n + 1);
            let cube = random::polynomial_cube(rng, n, m, 2);
            Chain::single(cube).boundary()?.boundary()?.is_empty()
        };
        Ok((if empty { 0.0 } else { 1.0 }, empty))
    }));

    checks.push(sweep("form axioms", 60, &mut rng, |rng| {
        let m = rng.gen_range(1..=3);
        let n = rng.gen_range(1..=m);
        let omega = random::polynomial_form(rng, n, m, 3);
        let germ = random::germ(rng, n, m);
        let base = eval_form(&omega, &InfinitesimalCube::unit(germ.clone()))?;
        // homogeneity
        let i = rng.gen_range(0..n);
        let a = rng.gen_range(-3.0..3.0);
        let scaled = eval_form(&omega, &InfinitesimalCube::unit(germ.scale_coordinate(i, a)?))?;
        let homogeneity = rel(scaled, a * base);
        // alternation, exact
        let mut sigma: Vec<usize> = (0..n).collect();
        for k in (1..n).rev() {
            sigma.swap(k, rng.gen_range(0..=k));
        }
        let permuted = omega.tilde(&germ.permute_coordinates(&sigma)?)?.standard_part();
        let alternation = permuted == permutation_sign(&sigma) * base;
        // degeneracy, exact
        let mut scalings = vec![1.0; n];
        scalings[rng.gen_range(0..n)] = 0.0;
        let degenerate = eval_form(&omega, &InfinitesimalCube::new(scalings, germ)?)? == 0.0;
        Ok((homogeneity, homogeneity <= 1e-12 && alternation && degenerate))
    }));

    checks.push(sweep("exterior derivative: boundary vs coordinates", 60, &mut rng, |rng| {
        let m = rng.gen_range(1..=3);
        let degree = rng.gen_range(0..m.min(3));
        let omega = random::polynomial_form(rng, degree, m, 3);
        let germ = random::germ(rng, degree + 1, m);
        let sia = exterior_derivative_sia(&omega, &germ, DEFAULT_IMPURITY_TOL)?;
        let coord = omega.exterior_derivative()?.tilde(&germ)?.standard_part();
        bound(rel(sia, coord), 1e-10)
    }));

    checks.push(sweep("d of d", 30, &mut rng, |rng| {
        let degree = rng.gen_range(0..=1);
        let dd = random::polynomial_form(rng, degree, 3, 3).exterior_derivative()?.exterior_derivative()?;
        let germ = random::germ(rng, degree + 2, 3);
        bound(dd.tilde(&germ)?.standard_part().abs(), 1e-10)
    }));

    checks.push(sweep("generalized Stokes", 15, &mut rng, |rng| {
        let degree = rng.gen_range(0..=2);
        let m = degree + rng.gen_range(1..=2);
        let omega = random::polynomial_form(rng, degree, m, 3);
        let cube = random::polynomial_cube(rng, degree + 1, m, 2);
        bound(verify_generalized_stokes(&omega, &cube, &FormQuadrature::default())?.gap, 1e-8)
    }));

    checks.push(sweep("fundamental theorem", 10, &mut rng, |rng| {
        let f = smooth_expr(rng, &["x"], 3);
        let germs: Vec<(f64, f64)> = (0..5).map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-2.0..2.0))).collect();
        let report = ftc_case(&f, "x", &germs, &FormQuadrature::Adaptive(Default::default()))?;
        let err = (report.gap / report.endpoint_difference.abs().max(1.0)).max(report.germ_gap);
        bound(err, 1e-9)
    }));

    checks.push(sweep("constrained can", 2, &mut rng, |_| {
        let f = parse("2*pi*r*h + 2*pi*r^2")?;
        let g = parse("pi*r^2*h")?;
        let k = 16.0 * std::f64::consts::PI;
        let p = constrained_stationary(&f, &g, k, &["r", "h"], &[1.0, 1.0], 1e-12)?;
        let ratio = (p.point[1] - 2.0 * p.point[0]).abs();
        let verified = verify_constrained(&f, &g, &["r", "h"], &p.point, 1e-8)?;
        let rejected = !verify_constrained(&f, &g, &["r", "h"], &[p.point[0], p.point[0]], 1e-8)?;
        Ok((ratio, ratio <= 1e-8 && verified && rejected))
    }));

    checks.push(sweep("finite cube faces", 1, &mut rng, |_| {
        // the unit square's four edges carry the signs -, +, +, -
        let signs: Vec<f64> = FiniteCube::identity(2).boundary()?.terms().iter().map(|t| t.0).collect();
        let ok = signs == [-1.0, 1.0, 1.0, -1.0];
        Ok((if ok { 0.0 } else { 1.0 }, ok))
    }));

    SelftestReport { seed, checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_seed_passes() {
        let report = run(DEFAULT_SEED);
        for c in &report.checks {
            assert!(c.passed(), "{} failed: {:?}", c.name, c.detail);
        }
    }
}
