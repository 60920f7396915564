//! Stationary and constrained-stationary points.
//!
//! A point is stationary when `f(p + d) = f(p)` for every `d` in `D(n)`; by extended
//! microcancellation that is exactly `grad f(p) = 0`, which damped Newton solves.
//! A constrained stationary point only needs the equality for infinitesimals that
//! keep `g` fixed, which is the Lagrange system `grad f = lambda grad g, g = k`.

use nalgebra::{DMatrix, DVector};

use super::diff::{eval_micro, gradient, hessian};
use crate::error::{Error, Result};
use crate::expr::Expr;

pub const MAX_NEWTON_ITERATIONS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct ConstrainedPoint {
    pub point: Vec<f64>,
    pub multiplier: f64,
    pub iterations: usize,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn solve(jac: Vec<Vec<f64>>, rhs: &[f64]) -> Result<Vec<f64>> {
    let n = rhs.len();
    let m = DMatrix::from_fn(n, n, |i, j| jac[i][j]);
    let scale = m.amax();
    let lu = m.lu();
    let u = lu.u();
    let min_pivot = (0..n).map(|i| u[(i, i)].abs()).fold(f64::INFINITY, f64::min);
    if !(min_pivot > 1e-13 * scale.max(f64::MIN_POSITIVE)) {
        return Err(Error::Singular(format!("Newton matrix has pivot {min_pivot:e}")));
    }
    let x = lu.solve(&DVector::from_column_slice(rhs)).ok_or_else(|| Error::Singular("LU solve failed".into()))?;
    Ok(x.iter().copied().collect())
}

/// Damped Newton on `residual(z) = 0`, with a backtracking line search on `|residual|_2`.
///
/// A small residual alone is not enough: `exp(x)` has residual below any tolerance
/// far out on the negative axis. Convergence also needs the Newton step to be short,
/// `|step| <= sqrt(tol) (1 + |z|)`; a singular Jacobian at a tiny residual (a
/// degenerate root hit exactly) is accepted.
fn damped_newton<R, J>(mut z: Vec<f64>, tol: f64, residual: R, jacobian: J) -> Result<(Vec<f64>, usize)>
where
    R: Fn(&[f64]) -> Result<Vec<f64>>,
    J: Fn(&[f64]) -> Result<Vec<Vec<f64>>>,
{
    let mut r = residual(&z)?;
    for it in 0..=MAX_NEWTON_ITERATIONS {
        let rn = norm(&r);
        let neg: Vec<f64> = r.iter().map(|x| -x).collect();
        let step = match solve(jacobian(&z)?, &neg) {
            Ok(step) => step,
            Err(Error::Singular(_)) if rn <= tol => return Ok((z, it)),
            Err(e) => return Err(e),
        };
        if rn <= tol && norm(&step) <= tol.sqrt() * (1.0 + norm(&z)) {
            return Ok((z, it));
        }
        if it == MAX_NEWTON_ITERATIONS {
            break;
        }
        let mut t = 1.0;
        loop {
            let trial: Vec<f64> = z.iter().zip(&step).map(|(a, s)| a + t * s).collect();
            if let Ok(rt) = residual(&trial) {
                let tn = norm(&rt);
                if tn.is_finite() && (tn <= (1.0 - 1e-4 * t) * rn || t < 1e-10) {
                    z = trial;
                    r = rt;
                    break;
                }
            }
            t *= 0.5;
            if t < 1e-12 {
                return Err(Error::NonConvergence("line search failed to reduce the residual".into()));
            }
        }
    }
    Err(Error::NonConvergence(format!(
        "no convergence in {MAX_NEWTON_ITERATIONS} Newton iterations (residual {:e})",
        norm(&r)
    )))
}

/// A point near `guess` with `|grad f| <= tol`.
pub fn find_stationary<V: AsRef<str>>(f: &Expr, vars: &[V], guess: &[f64], tol: f64) -> Result<Vec<f64>> {
    let (p, _) = damped_newton(guess.to_vec(), tol, |z| gradient(f, vars, z), |z| hessian(f, vars, z))?;
    Ok(p)
}

/// Checks the defining property directly: every gradient slot of `f(p + d)`, `d` in
/// `D(n)`, is within `tol` of zero.
pub fn is_stationary<V: AsRef<str>>(f: &Expr, vars: &[V], p: &[f64], tol: f64) -> Result<bool> {
    Ok(eval_micro(f, vars, p)?.grad.iter().all(|g| g.abs() <= tol))
}

/// Solves `grad f = lambda grad g`, `g = k` from `guess`.
pub fn constrained_stationary<V: AsRef<str>>(
    f: &Expr,
    g: &Expr,
    k: f64,
    vars: &[V],
    guess: &[f64],
    tol: f64,
) -> Result<ConstrainedPoint> {
    let n = vars.len();
    let gf = gradient(f, vars, guess)?;
    let gg = gradient(g, vars, guess)?;
    let gg2: f64 = gg.iter().map(|x| x * x).sum();
    if gg2 == 0.0 {
        return Err(Error::DegenerateConstraint);
    }
    let lambda0 = gf.iter().zip(&gg).map(|(a, b)| a * b).sum::<f64>() / gg2;
    let mut z0 = guess.to_vec();
    z0.push(lambda0);

    let residual = |z: &[f64]| -> Result<Vec<f64>> {
        let (x, lambda) = (&z[..n], z[n]);
        let df = gradient(f, vars, x)?;
        let gm = eval_micro(g, vars, x)?;
        let mut r: Vec<f64> = df.iter().zip(&gm.grad).map(|(a, b)| a - lambda * b).collect();
        r.push(gm.value - k);
        Ok(r)
    };
    let jacobian = |z: &[f64]| -> Result<Vec<Vec<f64>>> {
        let (x, lambda) = (&z[..n], z[n]);
        let hf = hessian(f, vars, x)?;
        let hg = hessian(g, vars, x)?;
        let dg = gradient(g, vars, x)?;
        let mut jac = vec![vec![0.0; n + 1]; n + 1];
        for i in 0..n {
            for j in 0..n {
                jac[i][j] = hf[i][j] - lambda * hg[i][j];
            }
            jac[i][n] = -dg[i];
            jac[n][i] = dg[i];
        }
        Ok(jac)
    };
    let (z, iterations) = damped_newton(z0, tol, residual, jacobian)?;
    if gradient(g, vars, &z[..n])?.iter().all(|&c| c == 0.0) {
        return Err(Error::DegenerateConstraint);
    }
    Ok(ConstrainedPoint { point: z[..n].to_vec(), multiplier: z[n], iterations })
}

/// Unit vectors spanning the null space of `grad g(p)`: the first-order directions
/// that keep `g` constant.
pub fn constraint_tangents<V: AsRef<str>>(g: &Expr, vars: &[V], p: &[f64]) -> Result<Vec<Vec<f64>>> {
    let dg = gradient(g, vars, p)?;
    let (pivot, &big) =
        dg.iter().enumerate().max_by(|a, b| a.1.abs().total_cmp(&b.1.abs())).ok_or(Error::DegenerateConstraint)?;
    if big == 0.0 {
        return Err(Error::DegenerateConstraint);
    }
    Ok((0..dg.len())
        .filter(|&j| j != pivot)
        .map(|j| {
            // d_pivot = -(g_j / g_pivot) d_j
            let mut w = vec![0.0; dg.len()];
            w[j] = 1.0;
            w[pivot] = -dg[j] / big;
            let len = norm(&w);
            w.iter().map(|c| c / len).collect()
        })
        .collect())
}

/// Whether `p` is a stationary point of `f` constrained by `g`: `grad f(p) . w` is
/// within `tol` of zero for every tangent direction `w` of the constraint.
pub fn verify_constrained<V: AsRef<str>>(f: &Expr, g: &Expr, vars: &[V], p: &[f64], tol: f64) -> Result<bool> {
    let tangents = constraint_tangents(g, vars, p)?;
    let df = gradient(f, vars, p)?;
    Ok(tangents.iter().all(|w| w.iter().zip(&df).map(|(a, b)| a * b).sum::<f64>().abs() <= tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use std::f64::consts::PI;

    fn e(s: &str) -> Expr {
        parse(s).unwrap()
    }

    #[test]
    fn unconstrained_examples() {
        let p = find_stationary(&e("(x-1)^2 + (y+2)^2"), &["x", "y"], &[0.0, 0.0], 1e-12).unwrap();
        assert!((p[0] - 1.0).abs() < 1e-12 && (p[1] + 2.0).abs() < 1e-12);
        let p = find_stationary(&e("x^2 - x"), &["x"], &[0.0], 1e-12).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-12);
        let p = find_stationary(&e("cos(x)"), &["x"], &[3.0], 1e-12).unwrap();
        assert!((p[0] - PI).abs() < 1e-12);
        assert!(is_stationary(&e("cos(x)"), &["x"], &p, 1e-12).unwrap());
    }

    #[test]
    fn singular_hessian() {
        let r = find_stationary(&e("x + y"), &["x", "y"], &[0.0, 0.0], 1e-12);
        assert!(matches!(r, Err(Error::Singular(_))));
    }

    #[test]
    fn vanishing_gradient_at_infinity_is_not_a_root() {
        let r = find_stationary(&e("exp(x)"), &["x"], &[0.0], 1e-12);
        assert!(matches!(r, Err(Error::NonConvergence(_))));
        let p = find_stationary(&e("x^3"), &["x"], &[1.0], 1e-12).unwrap();
        assert!(p[0].abs() < 1e-6);
    }

    #[test]
    fn can_problem() {
        let f = e("2*pi*r*h + 2*pi*r^2");
        let g = e("pi*r^2*h");
        let sol = constrained_stationary(&f, &g, 16.0 * PI, &["r", "h"], &[1.0, 1.0], 1e-10).unwrap();
        assert!((sol.point[0] - 2.0).abs() < 1e-9);
        assert!((sol.point[1] - 4.0).abs() < 1e-9);
        assert!(verify_constrained(&f, &g, &["r", "h"], &sol.point, 1e-8).unwrap());
        assert!(!verify_constrained(&f, &g, &["r", "h"], &[1.0, 1.0], 1e-8).unwrap());
    }

    #[test]
    fn circle_and_linear() {
        let sol = constrained_stationary(&e("x + y"), &e("x^2 + y^2"), 2.0, &["x", "y"], &[1.0, 0.5], 1e-12).unwrap();
        assert!((sol.point[0] - 1.0).abs() < 1e-10 && (sol.point[1] - 1.0).abs() < 1e-10);
        assert!((sol.multiplier - 0.5).abs() < 1e-10);

        let sol = constrained_stationary(&e("x"), &e("x"), 3.0, &["x"], &[0.0], 1e-12).unwrap();
        assert!((sol.point[0] - 3.0).abs() < 1e-12 && (sol.multiplier - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_constraint() {
        let r = constrained_stationary(&e("x"), &e("x^2"), 1.0, &["x"], &[0.0], 1e-12);
        assert_eq!(r, Err(Error::DegenerateConstraint));
        let r = verify_constrained(&e("x"), &e("x^2"), &["x"], &[0.0], 1e-12);
        assert_eq!(r, Err(Error::DegenerateConstraint));
    }

    #[test]
    fn objective_equal_to_constraint() {
        let f = e("x*y + sin(y)");
        for p in [[0.3, 1.0], [2.0, -1.0]] {
            assert!(verify_constrained(&f, &f, &["x", "y"], &p, 1e-12).unwrap());
        }
    }
}
