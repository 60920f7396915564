//! Random germs, cubes and polynomial forms for property sweeps.

use rand::Rng;

use super::cube::{FiniteCube, Germ};
use super::form::{default_coords, Coeff, CoordForm};
use crate::expr::{BinOp, Expr};
use crate::nilpotent::MultiDual;

fn coefficient<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    (rng.gen_range(-2.0f64..2.0) * 64.0).round() / 64.0
}

/// A germ `D^n -> R^m` with every multilinear coefficient drawn from `[-2, 2]`.
pub fn germ<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> Germ {
    let comps = (0..m)
        .map(|_| {
            let coeffs = (0..1usize << n).map(|_| rng.gen_range(-2.0..2.0)).collect();
            MultiDual::from_coeffs(n, coeffs).expect("n within the generator cap")
        })
        .collect();
    Germ::new(comps).expect("m >= 1")
}

/// A random polynomial of total degree at most `degree` in `vars`, built from
/// monomials with dyadic coefficients.
pub fn polynomial<R: Rng + ?Sized>(rng: &mut R, vars: &[String], degree: usize) -> Expr {
    let n_terms = rng.gen_range(1..=4);
    let mut out: Option<Expr> = None;
    for _ in 0..n_terms {
        let mut term = Expr::Num(coefficient(rng));
        let d = rng.gen_range(0..=degree);
        let mut powers = vec![0usize; vars.len()];
        for _ in 0..d {
            if vars.is_empty() {
                break;
            }
            powers[rng.gen_range(0..vars.len())] += 1;
        }
        for (v, &k) in vars.iter().zip(&powers) {
            let factor = match k {
                0 => continue,
                1 => Expr::var(v.as_str()),
                k => Expr::Pow(Box::new(Expr::var(v.as_str())), k as f64),
            };
            term = Expr::binary(BinOp::Mul, term, factor);
        }
        out = Some(match out {
            None => term,
            Some(acc) => Expr::binary(BinOp::Add, acc, term),
        });
    }
    out.expect("at least one term")
}

/// A `degree`-form on `R^m` with random polynomial coefficients on a random
/// nonempty subset of the index tuples.
pub fn polynomial_form<R: Rng + ?Sized>(rng: &mut R, degree: usize, m: usize, coeff_degree: usize) -> CoordForm {
    let coords = default_coords(m);
    let tuples = index_tuples(m, degree);
    let mut terms = Vec::new();
    for t in &tuples {
        if terms.is_empty() || rng.gen_bool(0.7) {
            terms.push((t.clone(), Coeff::expr(polynomial(rng, &coords, coeff_degree))));
        }
    }
    CoordForm::new(degree, coords, terms).expect("well-formed random form")
}

/// All strictly increasing `k`-tuples from `0..m`.
pub fn index_tuples(m: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for t in index_tuples(m, k - 1) {
        let start = t.last().map_or(0, |&l| l + 1);
        for j in start..m {
            let mut u = t.clone();
            u.push(j);
            out.push(u);
        }
    }
    out
}

/// A polynomial map `[0, 1]^n -> R^m` of total degree at most `degree`: the
/// identity-like part `t_i` on the first coordinates plus a random perturbation.
pub fn polynomial_cube<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize, degree: usize) -> FiniteCube {
    let params = FiniteCube::default_params(n);
    let map = (0..m)
        .map(|k| {
            let wobble = Expr::binary(BinOp::Mul, Expr::Num(0.25), polynomial(rng, &params, degree));
            if k < n {
                Expr::binary(BinOp::Add, Expr::var(params[k].as_str()), wobble)
            } else {
                wobble
            }
        })
        .collect();
    FiniteCube::new(params, map).expect("dimension within the cap")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tuples() {
        assert_eq!(index_tuples(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(index_tuples(2, 0), vec![Vec::<usize>::new()]);
        assert!(index_tuples(2, 3).is_empty());
    }

    #[test]
    fn generated_objects_are_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let w = polynomial_form(&mut rng, 1, 3, 3);
            assert_eq!(w.degree(), 1);
            assert!(!w.is_zero());
            let c = polynomial_cube(&mut rng, 2, 3, 2);
            assert!(c.eval(&[0.5, 0.5]).is_ok());
            assert_eq!(germ(&mut rng, 3, 2).dim(), 3);
        }
    }
}
