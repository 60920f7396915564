use crate::error::{Error, Result};
use crate::expr::{Env, Expr};
use crate::nilpotent::{MicroVector, MultiDual, MAX_GENERATORS};

/// `f'(x0)`: evaluates `f(x0 + e)` with `e^2 = 0` and reads off the coefficient of `e`.
pub fn derivative(f: &Expr, var: &str, x0: f64) -> Result<f64> {
    let mut env = Env::<MultiDual>::new(1);
    env.insert(var, MultiDual::variable(x0, &[1.0])?);
    env.evaluate(f)?.coefficient(&[0])
}

/// `f^(k)(x0)` as the coefficient of `e_1 ... e_k` in `f(x0 + e_1 + ... + e_k)`.
pub fn nth_derivative(f: &Expr, var: &str, x0: f64, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidArgument("derivative order must be at least 1".into()));
    }
    if k > MAX_GENERATORS {
        return Err(Error::dim(format!("derivative order {k} exceeds the generator cap {MAX_GENERATORS}")));
    }
    let mut env = Env::<MultiDual>::new(k);
    env.insert(var, MultiDual::variable(x0, &vec![1.0; k])?);
    Ok(env.evaluate(f)?.top_coefficient())
}

/// `f` and its first `k` derivatives at `x0`, from a single evaluation.
pub fn derivatives_upto(f: &Expr, var: &str, x0: f64, k: usize) -> Result<Vec<f64>> {
    if k > MAX_GENERATORS {
        return Err(Error::dim(format!("order {k} exceeds {MAX_GENERATORS}")));
    }
    let mut env = Env::<MultiDual>::new(k);
    env.insert(var, MultiDual::variable(x0, &vec![1.0; k])?);
    let v = env.evaluate(f)?;
    // coefficient of any j generators equals f^(j); take the lowest j bits.
    Ok((0..=k).map(|j| v.coeff_mask((1usize << j) - 1)).collect())
}

fn check_point<V: AsRef<str>>(vars: &[V], p: &[f64]) -> Result<()> {
    if vars.len() != p.len() {
        return Err(Error::dim(format!("{} variables but a point with {} coordinates", vars.len(), p.len())));
    }
    Ok(())
}

/// Evaluates `f` on `p + d` with `d` ranging over `D(n)`: one gradient slot per variable.
pub fn eval_micro<V: AsRef<str>>(f: &Expr, vars: &[V], p: &[f64]) -> Result<MicroVector> {
    check_point(vars, p)?;
    let n = vars.len();
    let mut env = Env::<MicroVector>::new(n);
    for (i, (v, &x)) in vars.iter().zip(p).enumerate() {
        env.insert(v.as_ref(), MicroVector::variable(x, i, n));
    }
    env.evaluate(f)
}

/// The gradient of `f` at `p`, with respect to `vars` in order.
pub fn gradient<V: AsRef<str>>(f: &Expr, vars: &[V], p: &[f64]) -> Result<Vec<f64>> {
    Ok(eval_micro(f, vars, p)?.grad)
}

/// Value, gradient and Hessian of `f` at `p`.
///
/// Entry `(i, j)` is the coefficient of `e_1 e_2` in `f(p + e_1 u_i + e_2 u_j)`.
pub fn hessian<V: AsRef<str>>(f: &Expr, vars: &[V], p: &[f64]) -> Result<Vec<Vec<f64>>> {
    check_point(vars, p)?;
    let n = vars.len();
    let mut h = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let mut env = Env::<MultiDual>::new(2);
            for (k, (v, &x)) in vars.iter().zip(p).enumerate() {
                let slopes = [f64::from(u8::from(k == i)), f64::from(u8::from(k == j))];
                env.insert(v.as_ref(), MultiDual::variable(x, &slopes)?);
            }
            let hij = env.evaluate(f)?.coeff_mask(0b11);
            h[i][j] = hij;
            h[j][i] = hij;
        }
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn e(s: &str) -> Expr {
        parse(s).unwrap()
    }

    #[test]
    fn first_derivatives() {
        assert_eq!(derivative(&e("x^2"), "x", 3.0).unwrap(), 6.0);
        assert_eq!(derivative(&e("sin(x)"), "x", 0.0).unwrap(), 1.0);
        let x: f64 = 1.3;
        let d = derivative(&e("x*sin(x)"), "x", x).unwrap();
        assert!((d - (x.sin() + x * x.cos())).abs() < 1e-15);
    }

    #[test]
    fn higher_derivatives() {
        assert_eq!(nth_derivative(&e("x^3"), "x", 2.0, 2).unwrap(), 12.0);
        assert_eq!(nth_derivative(&e("cosh(x)"), "x", 0.0, 2).unwrap(), 1.0);
        let d3 = nth_derivative(&e("exp(2*x)"), "x", 0.5, 3).unwrap();
        assert!((d3 - 8.0 * std::f64::consts::E).abs() < 1e-12);
        assert!(matches!(nth_derivative(&e("x"), "x", 0.0, 9), Err(Error::Dimension(_))));
        assert!(nth_derivative(&e("x"), "x", 0.0, 0).is_err());
        let all = derivatives_upto(&e("x^3"), "x", 2.0, 4).unwrap();
        assert_eq!(all, vec![8.0, 12.0, 12.0, 6.0, 0.0]);
    }

    #[test]
    fn gradients() {
        assert_eq!(gradient(&e("x^2*y"), &["x", "y"], &[1.0, 2.0]).unwrap(), vec![4.0, 1.0]);
        let (r, h) = (1.5, 2.5);
        let g = gradient(&e("2*pi*r*h + 2*pi*r^2"), &["r", "h"], &[r, h]).unwrap();
        let pi = std::f64::consts::PI;
        assert!((g[0] - 2.0 * pi * (h + 2.0 * r)).abs() < 1e-12);
        assert!((g[1] - 2.0 * pi * r).abs() < 1e-12);
        assert!(gradient(&e("x"), &["x"], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn hessian_of_quadratic() {
        let h = hessian(&e("x^2*y + 3*x*y"), &["x", "y"], &[1.0, 2.0]).unwrap();
        assert_eq!(h, vec![vec![4.0, 5.0], vec![5.0, 0.0]]);
    }
}
