use std::fmt;

use super::primitive::{pow_derivatives, Primitive};
use crate::error::{Error, Result};

/// A value paired with a gradient: `value + sum_i grad[i] * d_i` where every product
/// `d_i d_j` (including `i = j`) vanishes.
///
/// This is the first-order, multi-variable case. It is cheaper than a
/// [`MultiDual`](super::MultiDual) with one generator per variable because the mixed
/// terms are never stored.
#[derive(Clone, PartialEq)]
pub struct MicroVector {
    pub value: f64,
    pub grad: Vec<f64>,
}

impl MicroVector {
    pub fn constant(value: f64, dim: usize) -> Self {
        Self { value, grad: vec![0.0; dim] }
    }

    /// The coordinate `value + d_index` among `dim` independent directions.
    pub fn variable(value: f64, index: usize, dim: usize) -> Self {
        let mut grad = vec![0.0; dim];
        grad[index] = 1.0;
        Self { value, grad }
    }

    pub fn dim(&self) -> usize {
        self.grad.len()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.grad.len() != other.grad.len() {
            return Err(Error::dim(format!("gradient lengths differ: {} vs {}", self.grad.len(), other.grad.len())));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self {
            value: self.value + other.value,
            grad: self.grad.iter().zip(&other.grad).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self {
            value: self.value - other.value,
            grad: self.grad.iter().zip(&other.grad).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self {
            value: self.value * other.value,
            grad: self.grad.iter().zip(&other.grad).map(|(a, b)| a * other.value + self.value * b).collect(),
        })
    }

    pub fn scale(&self, k: f64) -> Self {
        Self { value: self.value * k, grad: self.grad.iter().map(|g| g * k).collect() }
    }

    pub fn invert(&self) -> Result<Self> {
        if self.value == 0.0 {
            return Err(Error::NotInvertible);
        }
        let inv = 1.0 / self.value;
        Ok(self.chain(inv, -inv * inv))
    }

    pub fn lift(&self, p: Primitive) -> Result<Self> {
        let d = p.derivatives(self.value, self.order())?;
        Ok(self.chain(d[0], d.get(1).copied().unwrap_or(0.0)))
    }

    pub fn powf(&self, p: f64) -> Result<Self> {
        let d = pow_derivatives(self.value, p, self.order())?;
        Ok(self.chain(d[0], d.get(1).copied().unwrap_or(0.0)))
    }

    fn order(&self) -> usize {
        usize::from(self.grad.iter().any(|&g| g != 0.0))
    }

    fn chain(&self, value: f64, slope: f64) -> Self {
        Self { value, grad: self.grad.iter().map(|g| g * slope).collect() }
    }
}

impl fmt::Debug for MicroVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MicroVector({} ; {:?})", self.value, self.grad)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_rule_without_mixed_terms() {
        let x = MicroVector::variable(1.0, 0, 2);
        let y = MicroVector::variable(2.0, 1, 2);
        let p = x.try_mul(&x).unwrap().try_mul(&y).unwrap();
        assert_eq!(p.value, 2.0);
        assert_eq!(p.grad, vec![4.0, 1.0]);
    }

    #[test]
    fn inversion_and_lift() {
        let x = MicroVector::variable(2.0, 0, 1);
        assert_eq!(x.invert().unwrap().grad, vec![-0.25]);
        assert_eq!(MicroVector::constant(0.0, 1).invert(), Err(Error::NotInvertible));
        let s = MicroVector::variable(0.0, 0, 1).lift(Primitive::Sin).unwrap();
        assert_eq!((s.value, s.grad[0]), (0.0, 1.0));
    }

    #[test]
    fn mismatched_lengths() {
        let a = MicroVector::constant(1.0, 1);
        let b = MicroVector::constant(1.0, 2);
        assert!(matches!(a.try_add(&b), Err(Error::Dimension(_))));
    }
}
