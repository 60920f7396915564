use super::diff::derivatives_upto;
use super::quadrature::{integrate, QuadratureConfig};
use crate::error::Result;
use crate::expr::Expr;
use crate::nilpotent::MultiDual;

/// `G(x) = int_lower^x f(t) dt` as a function object that also accepts nilpotent
/// arguments.
///
/// At `x0 + u` with `u` nilpotent, `G(x0 + u) = G(x0) + sum_{j>=1} f^(j-1)(x0) u^j / j!`:
/// the standard part comes from quadrature and the tail from the Taylor jet of `f`.
#[derive(Debug, Clone)]
pub struct Antiderivative {
    f: Expr,
    var: String,
    lower: f64,
    cfg: QuadratureConfig,
}

impl Antiderivative {
    pub fn new(f: Expr, var: impl Into<String>, lower: f64, cfg: QuadratureConfig) -> Self {
        Self { f, var: var.into(), lower, cfg }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        integrate(&self.f, &self.var, self.lower, x, &self.cfg)
    }

    pub fn eval_nilpotent(&self, x: &MultiDual) -> Result<MultiDual> {
        let n = x.n_generators();
        let x0 = x.standard_part();
        let u = x.nilpotent_part();
        let jet = if n == 0 { Vec::new() } else { derivatives_upto(&self.f, &self.var, x0, n - 1)? };
        let mut out = MultiDual::constant(n, self.eval(x0)?)?;
        let mut power = MultiDual::constant(n, 1.0)?;
        let mut factorial = 1.0;
        for (j, dj) in jet.iter().enumerate().map(|(i, d)| (i + 1, d)) {
            power = power.try_mul(&u)?;
            factorial *= j as f64;
            out = out.try_add(&power.scale(dj / factorial))?;
        }
        Ok(out)
    }

    /// `G'(x0)`, read off `G(x0 + e)`.
    pub fn derivative(&self, x0: f64) -> Result<f64> {
        let x = MultiDual::variable(x0, &[1.0])?;
        self.eval_nilpotent(&x)?.coefficient(&[0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn derivative_of_integral_is_integrand() {
        let f = parse("exp(-t^2) * cos(t)").unwrap();
        let g = Antiderivative::new(f.clone(), "t", 0.0, QuadratureConfig::default());
        for x in [-1.0, 0.3, 2.0] {
            let d = g.derivative(x).unwrap();
            let fx = f.eval_real(&[("t", x)]).unwrap();
            assert!((d - fx).abs() < 1e-12);
        }
    }

    #[test]
    fn second_order_tail() {
        let g = Antiderivative::new(parse("t^2").unwrap(), "t", 0.0, QuadratureConfig::default());
        // G(x) = x^3/3, so G'' = 2x
        let x = MultiDual::variable(1.5, &[1.0, 1.0]).unwrap();
        let v = g.eval_nilpotent(&x).unwrap();
        assert!((v.standard_part() - 1.125).abs() < 1e-14);
        assert!((v.top_coefficient() - 3.0).abs() < 1e-14);
    }
}
