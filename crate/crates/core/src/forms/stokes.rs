use serde::Serialize;

use super::chain::Boundary;
use super::cube::{FiniteCube, Germ};
use super::form::{exterior_derivative_sia, CoordForm, SiaDerivative};
use super::integrate::{integrate_chain, integrate_form, FormQuadrature};
use super::vector::{curl_flux, divergence_volume, flux_chain, line_integral_chain, VectorField};
use crate::calculus::derivative;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::nilpotent::DEFAULT_IMPURITY_TOL;

/// Both sides of an integral identity and their distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StokesReport {
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
}

impl StokesReport {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        Self { lhs, rhs, gap: (lhs - rhs).abs() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassicalTheorem {
    /// Flux of `curl F` through a surface against the circulation around its boundary.
    Stokes,
    /// Flux of `F` out of a solid's boundary against the volume integral of `div F`.
    Divergence,
}

pub fn verify_classical(
    theorem: ClassicalTheorem,
    f: &VectorField,
    region: &FiniteCube,
    quad: &FormQuadrature,
) -> Result<StokesReport> {
    let boundary = region.boundary()?;
    match theorem {
        ClassicalTheorem::Stokes => {
            Ok(StokesReport::new(curl_flux(f, region, quad)?, line_integral_chain(f, &boundary, quad)?))
        }
        ClassicalTheorem::Divergence => {
            Ok(StokesReport::new(flux_chain(f, &boundary, quad)?, divergence_volume(f, region, quad)?))
        }
    }
}

/// `int_{boundary M} omega` against `int_M d omega`, with `d` from the coordinate
/// formula.
pub fn verify_generalized_stokes(omega: &CoordForm, cube: &FiniteCube, quad: &FormQuadrature) -> Result<StokesReport> {
    if cube.dim() != omega.degree() + 1 {
        return Err(Error::dim(format!(
            "a {}-form needs a {}-cube, got dimension {}",
            omega.degree(),
            omega.degree() + 1,
            cube.dim()
        )));
    }
    let lhs = integrate_chain(omega, &cube.boundary()?, quad)?;
    let rhs = integrate_form(&omega.exterior_derivative()?, cube, quad)?;
    Ok(StokesReport::new(lhs, rhs))
}

/// One germ-level check `d~F(g) = F'(g(0)) a` for `g(d) = g0 + a d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GermCheck {
    pub g0: f64,
    pub a: f64,
    pub sia: f64,
    pub expected: f64,
    pub gap: f64,
}

/// The fundamental theorem of calculus as the 1-dimensional Stokes theorem.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FtcReport {
    /// `int_[0,1] dF` with `dF` from the boundary definition.
    pub integral_sia: f64,
    /// `int_[0,1] dF` with `dF` from the coordinate formula.
    pub integral_coord: f64,
    /// `F(1) - F(0)`.
    pub endpoint_difference: f64,
    /// Larger of the two integral gaps against `F(1) - F(0)`.
    pub gap: f64,
    pub germs: Vec<GermCheck>,
    pub germ_gap: f64,
}

/// Runs the fundamental-theorem checks for `F(var)` on `[0, 1]` and on the germs
/// `g(d) = g0 + a d` given as `(g0, a)` pairs.
pub fn ftc_case(f: &Expr, var: &str, germs: &[(f64, f64)], quad: &FormQuadrature) -> Result<FtcReport> {
    let omega = CoordForm::function(f.clone(), vec![var.to_string()])?;
    let unit = FiniteCube::new(vec!["t".into()], vec![Expr::var("t")])?;
    let integral_sia = integrate_form(&SiaDerivative::new(&omega), &unit, quad)?;
    let integral_coord = integrate_form(&omega.exterior_derivative()?, &unit, quad)?;
    let endpoint_difference = f.eval_real(&[(var, 1.0)])? - f.eval_real(&[(var, 0.0)])?;
    let gap = (integral_sia - endpoint_difference).abs().max((integral_coord - endpoint_difference).abs());
    let mut checks = Vec::with_capacity(germs.len());
    for &(g0, a) in germs {
        let sia = exterior_derivative_sia(&omega, &Germ::affine(&[g0], &[vec![a]])?, DEFAULT_IMPURITY_TOL)?;
        let expected = derivative(f, var, g0)? * a;
        checks.push(GermCheck { g0, a, sia, expected, gap: (sia - expected).abs() });
    }
    let germ_gap = checks.iter().map(|c| c.gap).fold(0.0, f64::max);
    Ok(FtcReport { integral_sia, integral_coord, endpoint_difference, gap, germs: checks, germ_gap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::default_coords;
    use crate::parse;

    fn field(s: &str) -> VectorField {
        VectorField::parse(s).unwrap()
    }

    #[test]
    fn green_on_unit_square() {
        let r = verify_classical(
            ClassicalTheorem::Stokes,
            &field("-y, x, 0"),
            &FiniteCube::unit_square_3d(),
            &FormQuadrature::default(),
        )
        .unwrap();
        assert!((r.lhs - 2.0).abs() < 1e-14 && (r.rhs - 2.0).abs() < 1e-14);

        let w = CoordForm::parse("-y*dx + x*dy", default_coords(2)).unwrap();
        let g = verify_generalized_stokes(&w, &FiniteCube::identity(2), &FormQuadrature::default()).unwrap();
        assert!((g.lhs - 2.0).abs() < 1e-14 && (g.rhs - 2.0).abs() < 1e-14);
    }

    #[test]
    fn divergence_on_unit_cube() {
        let r = verify_classical(
            ClassicalTheorem::Divergence,
            &field("x, y, z"),
            &FiniteCube::identity(3),
            &FormQuadrature::default(),
        )
        .unwrap();
        assert!((r.lhs - 3.0).abs() < 1e-13, "{r:?}");
        assert!((r.rhs - 3.0).abs() < 1e-13, "{r:?}");
    }

    #[test]
    fn gradient_field_has_no_circulation() {
        // phi = x^2 y + sin(z)
        let r = verify_classical(
            ClassicalTheorem::Stokes,
            &field("2*x*y, x^2, cos(z)"),
            &FiniteCube::new(
                vec!["u".into(), "v".into()],
                vec![parse("u").unwrap(), parse("v").unwrap(), parse("u*v + u^2").unwrap()],
            )
            .unwrap(),
            &FormQuadrature::default(),
        )
        .unwrap();
        assert!(r.lhs.abs() < 1e-12 && r.rhs.abs() < 1e-12, "{r:?}");
    }

    #[test]
    fn zero_form_and_zero_form_degree() {
        let f = CoordForm::function(parse("x^3 - x").unwrap(), default_coords(1)).unwrap();
        let r = verify_generalized_stokes(&f, &FiniteCube::identity(1), &FormQuadrature::default()).unwrap();
        assert!((r.lhs - 0.0).abs() < 1e-15 && r.gap < 1e-15);

        let zero = CoordForm::zero(1, default_coords(2)).unwrap();
        let r = verify_generalized_stokes(&zero, &FiniteCube::identity(2), &FormQuadrature::default()).unwrap();
        assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
    }

    #[test]
    fn ftc_examples() {
        let q = FormQuadrature::default();
        let r = ftc_case(&parse("x^2/2").unwrap(), "x", &[], &q).unwrap();
        assert!((r.endpoint_difference - 0.5).abs() < 1e-15 && r.gap < 1e-14);
        let r = ftc_case(&parse("sin(x)").unwrap(), "x", &[(0.3, 1.7)], &q).unwrap();
        assert!((r.integral_coord - 1f64.sin()).abs() < 1e-14);
        let r = ftc_case(&parse("exp(x)").unwrap(), "x", &[(0.3, 1.7)], &q).unwrap();
        assert!((r.germs[0].sia - 0.3f64.exp() * 1.7).abs() < 1e-14);
    }
}
