use super::chain::Chain;
use super::cube::FiniteCube;
use super::form::Form;
use crate::calculus::{GaussRule, Integrator, QuadratureConfig};
use crate::error::{Error, Result};

/// How integrals over `[0, 1]^n` are computed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FormQuadrature {
    /// Tensor-product Gauss-Legendre with this many nodes per axis; exact for
    /// polynomial integrands of degree `< 2 * nodes` in each variable.
    Tensor(usize),
    /// Nested adaptive quadrature, one axis at a time.
    Adaptive(QuadratureConfig),
}

impl Default for FormQuadrature {
    fn default() -> Self {
        FormQuadrature::Tensor(12)
    }
}

/// `int_{[0,1]^n} g` for a function of `n` parameters.
pub fn integrate_cube<G>(n: usize, quad: &FormQuadrature, mut g: G) -> Result<f64>
where
    G: FnMut(&[f64]) -> Result<f64>,
{
    let mut t = vec![0.0; n];
    match quad {
        FormQuadrature::Tensor(order) => {
            if *order == 0 {
                return Err(Error::InvalidArgument("tensor quadrature needs at least one node".into()));
            }
            let rule = GaussRule::legendre(*order);
            let nodes: Vec<f64> = rule.nodes.iter().map(|x| 0.5 * (x + 1.0)).collect();
            let weights: Vec<f64> = rule.weights.iter().map(|w| 0.5 * w).collect();
            tensor(&nodes, &weights, &mut t, 0, &mut g)
        }
        FormQuadrature::Adaptive(cfg) => {
            let integrator = Integrator::new(*cfg)?;
            nested(&integrator, &mut t, 0, &mut g)
        }
    }
}

fn tensor<G>(nodes: &[f64], weights: &[f64], t: &mut [f64], axis: usize, g: &mut G) -> Result<f64>
where
    G: FnMut(&[f64]) -> Result<f64>,
{
    if axis == t.len() {
        return g(t);
    }
    let mut sum = 0.0;
    for (x, w) in nodes.iter().zip(weights) {
        t[axis] = *x;
        sum += w * tensor(nodes, weights, t, axis + 1, g)?;
    }
    Ok(sum)
}

fn nested<G>(integrator: &Integrator, t: &mut Vec<f64>, axis: usize, g: &mut G) -> Result<f64>
where
    G: FnMut(&[f64]) -> Result<f64>,
{
    if axis == t.len() {
        return g(t);
    }
    integrator.integrate(
        |x| {
            t[axis] = x;
            nested(integrator, t, axis + 1, g)
        },
        0.0,
        1.0,
    )
}

/// `int_M omega = int_{[0,1]^n} tilde(omega)(d -> M(t + d)) dt`.
pub fn integrate_form<F: Form + ?Sized>(omega: &F, cube: &FiniteCube, quad: &FormQuadrature) -> Result<f64> {
    if omega.degree() != cube.dim() || omega.ambient() != cube.ambient() {
        return Err(Error::dim(format!(
            "{}-form on R^{} integrated over a {}-cube in R^{}",
            omega.degree(),
            omega.ambient(),
            cube.dim(),
            cube.ambient()
        )));
    }
    integrate_cube(cube.dim(), quad, |t| Ok(omega.tilde(&cube.jet(t)?)?.standard_part()))
}

/// Integral of a form over a chain of finite cubes.
pub fn integrate_chain<F: Form + ?Sized>(omega: &F, chain: &Chain<FiniteCube>, quad: &FormQuadrature) -> Result<f64> {
    chain.integrate(|cube| integrate_form(omega, cube, quad))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{default_coords, CoordForm};

    fn form(src: &str, m: usize) -> CoordForm {
        CoordForm::parse(src, default_coords(m)).unwrap()
    }

    #[test]
    fn simple_integrals() {
        let q = FormQuadrature::default();
        let seg = FiniteCube::identity(1);
        assert!((integrate_form(&form("dx", 1), &seg, &q).unwrap() - 1.0).abs() < 1e-15);
        assert!((integrate_form(&form("x*dx", 1), &seg, &q).unwrap() - 0.5).abs() < 1e-15);
        let sq = FiniteCube::identity(2);
        assert!((integrate_form(&form("dx^dy", 2), &sq, &q).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_matches_tensor() {
        let w = form("exp(x)*cos(y)*dx^dy", 2);
        let sq = FiniteCube::identity(2);
        let exact = (1f64.exp() - 1.0) * 1f64.sin();
        let a = integrate_form(&w, &sq, &FormQuadrature::Adaptive(QuadratureConfig::default())).unwrap();
        let t = integrate_form(&w, &sq, &FormQuadrature::Tensor(12)).unwrap();
        assert!((a - exact).abs() < 1e-12);
        assert!((t - exact).abs() < 1e-12);
    }

    #[test]
    fn zero_dimensional_integral_is_evaluation() {
        let f = form("x^2 + y", 2);
        let p = FiniteCube::point(&[3.0, 1.0]);
        assert_eq!(integrate_form(&f, &p, &FormQuadrature::default()).unwrap(), 10.0);
    }

    #[test]
    fn dimension_mismatch() {
        let sq = FiniteCube::identity(2);
        assert!(integrate_form(&form("dx", 2), &sq, &FormQuadrature::default()).is_err());
    }
}
