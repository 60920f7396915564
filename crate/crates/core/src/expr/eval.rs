use std::collections::HashMap;

use super::{BinOp, Expr};
use crate::error::{Error, Result};
use crate::nilpotent::Smooth;

/// Predefined constants, used when the environment does not bind the name.
pub const CONSTANTS: [(&str, f64); 2] = [("pi", std::f64::consts::PI), ("e", std::f64::consts::E)];

/// Variable bindings over one ring, plus the shape used to build constants.
#[derive(Debug, Clone)]
pub struct Env<T: Smooth> {
    shape: T::Shape,
    vars: HashMap<String, T>,
}

impl<T: Smooth> Env<T> {
    pub fn new(shape: T::Shape) -> Self {
        Self { shape, vars: HashMap::new() }
    }

    pub fn insert(&mut self, name: impl Into<String>, value: T) -> &mut Self {
        self.vars.insert(name.into(), value);
        self
    }

    /// Binds a name to a constant of this environment's ring.
    pub fn insert_real(&mut self, name: impl Into<String>, value: f64) -> &mut Self {
        let v = T::constant(value, &self.shape);
        self.insert(name, v)
    }

    pub fn get(&self, name: &str) -> Option<&T> {
        self.vars.get(name)
    }

    pub fn shape(&self) -> &T::Shape {
        &self.shape
    }

    /// Evaluates `e`; '/' uses ring inversion and primitives use the ring's lift.
    pub fn evaluate(&self, e: &Expr) -> Result<T> {
        match e {
            Expr::Num(v) => Ok(T::constant(*v, &self.shape)),
            Expr::Var(name) => {
                if let Some(v) = self.vars.get(name) {
                    if v.shape() != self.shape {
                        return Err(Error::dim(format!("variable `{name}` lives in a different ring")));
                    }
                    return Ok(v.clone());
                }
                CONSTANTS
                    .iter()
                    .find(|(c, _)| c == name)
                    .map(|(_, v)| T::constant(*v, &self.shape))
                    .ok_or_else(|| Error::UnboundVariable(name.clone()))
            }
            Expr::Neg(a) => Ok(self.evaluate(a)?.negate()),
            Expr::Binary(op, a, b) => {
                let a = self.evaluate(a)?;
                let b = self.evaluate(b)?;
                match op {
                    BinOp::Add => a.try_add(&b),
                    BinOp::Sub => a.try_sub(&b),
                    BinOp::Mul => a.try_mul(&b),
                    BinOp::Div => a.try_mul(&b.try_recip()?),
                }
            }
            Expr::Pow(a, p) => {
                let base = self.evaluate(a)?;
                if p.fract() == 0.0 && p.abs() <= 64.0 {
                    int_pow(&base, *p as i32)
                } else {
                    base.powf(*p)
                }
            }
            Expr::Call(prim, a) => self.evaluate(a)?.lift(*prim),
        }
    }
}

/// Integer power by repeated multiplication (inverting first for negative powers).
fn int_pow<T: Smooth>(base: &T, k: i32) -> Result<T> {
    let mut sq = if k < 0 { base.try_recip()? } else { base.clone() };
    let mut e = k.unsigned_abs();
    let mut acc = T::constant(1.0, &base.shape());
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.try_mul(&sq)?;
        }
        e >>= 1;
        if e > 0 {
            sq = sq.try_mul(&sq)?;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::nilpotent::{MicroVector, MultiDual};

    #[test]
    fn plain_and_nilpotent_square() {
        let e = parse("x^2").unwrap();
        assert_eq!(e.eval_real(&[("x", 3.0)]).unwrap(), 9.0);

        let mut env = Env::<MultiDual>::new(1);
        env.insert("x", MultiDual::variable(3.0, &[1.0]).unwrap());
        let v = env.evaluate(&e).unwrap();
        assert_eq!(v.coeffs(), &[9.0, 6.0]);
    }

    #[test]
    fn division_by_pure_infinitesimal() {
        let e = parse("1/x").unwrap();
        let mut env = Env::<MultiDual>::new(1);
        env.insert("x", MultiDual::generator(1, 0).unwrap());
        assert_eq!(env.evaluate(&e), Err(Error::NotInvertible));
    }

    #[test]
    fn unbound_and_constants() {
        let e = parse("pi * y").unwrap();
        assert_eq!(e.eval_real(&[]), Err(Error::UnboundVariable("y".into())));
        assert_eq!(parse("pi").unwrap().eval_real(&[]).unwrap(), std::f64::consts::PI);
        // a binding shadows the constant
        assert_eq!(parse("e").unwrap().eval_real(&[("e", 2.0)]).unwrap(), 2.0);
    }

    #[test]
    fn mixed_rings_rejected() {
        let e = parse("x + y").unwrap();
        let mut env = Env::<MicroVector>::new(2);
        env.insert("x", MicroVector::variable(1.0, 0, 2));
        env.insert("y", MicroVector::variable(1.0, 0, 3));
        assert!(matches!(env.evaluate(&e), Err(Error::Dimension(_))));
    }

    #[test]
    fn negative_and_fractional_powers() {
        let v = parse("x^-2 + x^0.5").unwrap().eval_real(&[("x", 4.0)]).unwrap();
        assert!((v - (1.0 / 16.0 + 2.0)).abs() < 1e-15);
        assert!(parse("x^0.5").unwrap().eval_real(&[("x", -1.0)]).is_err());
        assert_eq!(parse("x^-1").unwrap().eval_real(&[("x", 0.0)]), Err(Error::NotInvertible));
    }
}
