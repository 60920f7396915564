//! Integral formulas obtained by looking at an infinitesimal piece of a curve.
//!
//! Over `[x, x + d]` with `d^2 = 0` the graph of `f` is a straight segment, so each
//! quantity `Q` below satisfies `Q(x + d) - Q(x) = d * q(x)` for an explicit `q`; by
//! microcancellation `Q' = q`, and `Q` is the integral of `q`:
//!
//! | quantity | `q(x)` |
//! |---|---|
//! | arclength | `sqrt(1 + f'(x)^2)` |
//! | surface of revolution | `2 pi f(x) sqrt(1 + f'(x)^2)` (frustum of slant `d sqrt(1 + f'^2)`) |
//! | volume of revolution | `pi f(x)^2` (slab of thickness `d`) |
//! | polar arclength | `sqrt(f(t)^2 + f'(t)^2)` |
//! | signed area | `f(x)` |
//!
//! The catenary is handled differently: the ODE `1 + u'^2 = a^2 u''^2` is checked
//! pointwise with nilpotent second derivatives rather than solved.

use std::f64::consts::PI;

use crate::calculus::{derivatives_upto, integrate_fn, QuadratureConfig};
use crate::error::{Error, Result};
use crate::expr::{Env, Expr};
use crate::nilpotent::MultiDual;

/// The graph of `y = f(var)` over `[a, b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSpec {
    pub f: Expr,
    pub var: String,
    pub a: f64,
    pub b: f64,
}

impl CurveSpec {
    pub fn new(f: Expr, var: impl Into<String>, a: f64, b: f64) -> Result<Self> {
        let var = var.into();
        if !(a <= b) {
            return Err(Error::InvalidArgument(format!("interval [{a}, {b}] is reversed")));
        }
        if let Some(p) = f.parameters().into_iter().find(|p| *p != var) {
            return Err(Error::UnboundVariable(p));
        }
        Ok(Self { f, var, a, b })
    }

    /// `(f(t), f'(t))` from one nilpotent evaluation.
    pub fn jet(&self, t: f64) -> Result<(f64, f64)> {
        let mut env = Env::<MultiDual>::new(1);
        env.insert(self.var.as_str(), MultiDual::variable(t, &[1.0])?);
        let v = env.evaluate(&self.f)?;
        Ok((v.standard_part(), v.coeff_mask(1)))
    }

    fn integrate<F>(&self, cfg: &QuadratureConfig, mut q: F) -> Result<f64>
    where
        F: FnMut(f64, f64) -> f64,
    {
        integrate_fn(
            |t| {
                let (f, df) = self.jet(t)?;
                Ok(q(f, df))
            },
            self.a,
            self.b,
            cfg,
        )
    }
}

pub fn arclength(c: &CurveSpec, cfg: &QuadratureConfig) -> Result<f64> {
    c.integrate(cfg, |_, df| (1.0 + df * df).sqrt())
}

/// Area of the surface swept by rotating the graph about the x-axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RevolutionSurface {
    pub area: f64,
    /// Set when `f` was seen below zero at a quadrature node; the area is then signed.
    pub negative_radius: bool,
}

pub fn surface_of_revolution(c: &CurveSpec, cfg: &QuadratureConfig) -> Result<RevolutionSurface> {
    let mut negative_radius = false;
    let integral = c.integrate(cfg, |f, df| {
        negative_radius |= f < 0.0;
        f * (1.0 + df * df).sqrt()
    })?;
    Ok(RevolutionSurface { area: 2.0 * PI * integral, negative_radius })
}

pub fn volume_of_revolution(c: &CurveSpec, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(PI * c.integrate(cfg, |f, _| f * f)?)
}

/// Length of the polar curve `r = f(theta)` over the curve's interval.
pub fn polar_arclength(c: &CurveSpec, cfg: &QuadratureConfig) -> Result<f64> {
    c.integrate(cfg, |f, df| (f * f + df * df).sqrt())
}

pub fn area_under_curve(c: &CurveSpec, cfg: &QuadratureConfig) -> Result<f64> {
    c.integrate(cfg, |f, _| f)
}

/// Surface of a cone of base radius `r` and slant height `slant` swept through angle
/// `theta`: `A(theta) = theta * r * slant / 2`, so the full cone is `pi r slant`.
pub fn cone_partial_surface(r: f64, slant: f64, theta: f64) -> Result<f64> {
    if !(r > 0.0 && slant > 0.0) {
        return Err(Error::InvalidArgument("cone radius and slant height must be positive".into()));
    }
    if !(0.0..=2.0 * PI).contains(&theta) {
        return Err(Error::InvalidArgument(format!("angle {theta} outside [0, 2pi]")));
    }
    Ok(0.5 * theta * r * slant)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatenaryReport {
    /// `1 + u'(x)^2 - a^2 u''(x)^2` at each sample.
    pub residuals: Vec<f64>,
    /// `u(0) - a`.
    pub initial_offset: f64,
    /// `u'(0)`.
    pub initial_slope: f64,
}

impl CatenaryReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m, r| m.max(r.abs()))
    }
}

/// Checks `u` against the catenary equation with parameter `a`. If `u` mentions a
/// parameter named `a` it is bound to the given value.
pub fn catenary_residual(u: &Expr, var: &str, a: f64, xs: &[f64]) -> Result<CatenaryReport> {
    if !(a > 0.0) {
        return Err(Error::InvalidArgument("catenary parameter a must be positive".into()));
    }
    let u = if var != "a" { u.bind("a", a) } else { u.clone() };
    let residuals = xs
        .iter()
        .map(|&x| {
            let d = derivatives_upto(&u, var, x, 2)?;
            Ok(1.0 + d[1] * d[1] - a * a * d[2] * d[2])
        })
        .collect::<Result<Vec<f64>>>()?;
    let at0 = derivatives_upto(&u, var, 0.0, 1)?;
    Ok(CatenaryReport { residuals, initial_offset: at0[0] - a, initial_slope: at0[1] })
}
