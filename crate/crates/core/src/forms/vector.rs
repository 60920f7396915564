use super::chain::Chain;
use super::cube::FiniteCube;
use super::form::{default_coords, Coeff, CoordForm};
use super::integrate::{integrate_cube, FormQuadrature};
use crate::calculus::eval_micro;
use crate::error::{Error, Result};
use crate::expr::{parse, Env, Expr};

/// A vector field `F = <M, N, P>` on `R^3` in the coordinates `x, y, z`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    pub comps: [Expr; 3],
}

const XYZ: [&str; 3] = ["x", "y", "z"];

impl VectorField {
    pub fn new(comps: [Expr; 3]) -> Result<Self> {
        for c in &comps {
            if let Some(v) = c.parameters().into_iter().find(|v| !XYZ.contains(&v.as_str())) {
                return Err(Error::UnboundVariable(v));
            }
        }
        Ok(Self { comps })
    }

    /// Parses `"M, N, P"`.
    pub fn parse(src: &str) -> Result<Self> {
        let parts: Vec<&str> = src.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidArgument(format!(
                "a vector field needs 3 comma-separated components, got {}",
                parts.len()
            )));
        }
        let mut offset = 0;
        let mut comps = Vec::with_capacity(3);
        for p in parts {
            comps.push(parse(p).map_err(|e| shift_offset(e, offset))?);
            offset += p.len() + 1;
        }
        let [m, n, p]: [Expr; 3] = comps.try_into().expect("three components");
        Self::new([m, n, p])
    }

    pub fn eval(&self, p: [f64; 3]) -> Result<[f64; 3]> {
        let mut env = Env::<f64>::new(());
        for (name, v) in XYZ.iter().zip(p) {
            env.insert(*name, v);
        }
        Ok([env.evaluate(&self.comps[0])?, env.evaluate(&self.comps[1])?, env.evaluate(&self.comps[2])?])
    }

    /// `M dx + N dy + P dz`.
    pub fn to_one_form(&self) -> CoordForm {
        let terms = (0..3).map(|i| (vec![i], Coeff::expr(self.comps[i].clone()))).collect();
        CoordForm::new(1, default_coords(3), terms).expect("valid 1-form")
    }

    /// `M dy^dz + N dz^dx + P dx^dy`, whose integral over a surface is the flux.
    pub fn to_two_form(&self) -> CoordForm {
        let terms = vec![
            (vec![1, 2], Coeff::expr(self.comps[0].clone())),
            (vec![2, 0], Coeff::expr(self.comps[1].clone())),
            (vec![0, 1], Coeff::expr(self.comps[2].clone())),
        ];
        CoordForm::new(2, default_coords(3), terms).expect("valid 2-form")
    }
}

fn shift_offset(e: Error, by: usize) -> Error {
    match e {
        Error::Syntax { offset, message } => Error::Syntax { offset: offset + by, message },
        Error::UnknownPrimitive { name, offset } => Error::UnknownPrimitive { name, offset: offset + by },
        Error::NonLiteralExponent { offset } => Error::NonLiteralExponent { offset: offset + by },
        other => other,
    }
}

/// Curl and divergence at `p`, from one gradient per component.
pub fn curl_div(f: &VectorField, p: [f64; 3]) -> Result<([f64; 3], f64)> {
    let g: Vec<Vec<f64>> = f.comps.iter().map(|c| Ok(eval_micro(c, &XYZ[..], &p)?.grad)).collect::<Result<_>>()?;
    let curl = [g[2][1] - g[1][2], g[0][2] - g[2][0], g[1][0] - g[0][1]];
    Ok((curl, g[0][0] + g[1][1] + g[2][2]))
}

fn check_cube(cube: &FiniteCube, n: usize) -> Result<()> {
    if cube.dim() != n || cube.ambient() != 3 {
        return Err(Error::dim(format!(
            "expected a {n}-cube in R^3, got a {}-cube in R^{}",
            cube.dim(),
            cube.ambient()
        )));
    }
    Ok(())
}

/// Point and first partials of a cube at `t`.
fn frame(cube: &FiniteCube, t: &[f64]) -> Result<([f64; 3], Vec<[f64; 3]>)> {
    let germ = cube.jet(t)?;
    let c = germ.components();
    let point = [c[0].standard_part(), c[1].standard_part(), c[2].standard_part()];
    let partials = (0..t.len())
        .map(|i| {
            let m = 1usize << i;
            [c[0].coeff_mask(m), c[1].coeff_mask(m), c[2].coeff_mask(m)]
        })
        .collect();
    Ok((point, partials))
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// `int_0^1 F(C(t)) . C'(t) dt`.
pub fn line_integral(f: &VectorField, curve: &FiniteCube, quad: &FormQuadrature) -> Result<f64> {
    check_cube(curve, 1)?;
    integrate_cube(1, quad, |t| {
        let (p, d) = frame(curve, t)?;
        Ok(dot(f.eval(p)?, d[0]))
    })
}

pub fn line_integral_chain(f: &VectorField, chain: &Chain<FiniteCube>, quad: &FormQuadrature) -> Result<f64> {
    chain.integrate(|c| line_integral(f, c, quad))
}

#[derive(Debug, Clone, Copy)]
pub enum SurfaceIntegrand<'a> {
    /// `f(S) |S_u x S_v|`.
    Scalar(&'a Expr),
    /// `F(S) . (S_u x S_v)`.
    Flux(&'a VectorField),
}

pub fn surface_integral(kind: SurfaceIntegrand<'_>, surface: &FiniteCube, quad: &FormQuadrature) -> Result<f64> {
    check_cube(surface, 2)?;
    if let SurfaceIntegrand::Scalar(e) = kind {
        if let Some(v) = e.parameters().into_iter().find(|v| !XYZ.contains(&v.as_str())) {
            return Err(Error::UnboundVariable(v));
        }
    }
    integrate_cube(2, quad, |uv| {
        let (p, d) = frame(surface, uv)?;
        let normal = cross(d[0], d[1]);
        match kind {
            SurfaceIntegrand::Scalar(e) => {
                let len = dot(normal, normal).sqrt();
                if len == 0.0 {
                    return Err(Error::DegenerateParametrization(format!(
                        "S_u x S_v vanishes at (u, v) = ({}, {})",
                        uv[0], uv[1]
                    )));
                }
                Ok(e.eval_real(&[("x", p[0]), ("y", p[1]), ("z", p[2])])? * len)
            }
            SurfaceIntegrand::Flux(f) => Ok(dot(f.eval(p)?, normal)),
        }
    })
}

/// `sum_faces sign * flux(F, face)` over a chain of 2-cubes.
pub fn flux_chain(f: &VectorField, chain: &Chain<FiniteCube>, quad: &FormQuadrature) -> Result<f64> {
    chain.integrate(|c| surface_integral(SurfaceIntegrand::Flux(f), c, quad))
}

/// `int curl F . (S_u x S_v) du dv`.
pub fn curl_flux(f: &VectorField, surface: &FiniteCube, quad: &FormQuadrature) -> Result<f64> {
    check_cube(surface, 2)?;
    integrate_cube(2, quad, |uv| {
        let (p, d) = frame(surface, uv)?;
        let (curl, _) = curl_div(f, p)?;
        Ok(dot(curl, cross(d[0], d[1])))
    })
}

/// `int div F(M(t)) det M'(t) dt` over a 3-cube.
pub fn divergence_volume(f: &VectorField, solid: &FiniteCube, quad: &FormQuadrature) -> Result<f64> {
    check_cube(solid, 3)?;
    integrate_cube(3, quad, |t| {
        let (p, d) = frame(solid, t)?;
        let (_, div) = curl_div(f, p)?;
        Ok(div * dot(d[0], cross(d[1], d[2])))
    })
}
