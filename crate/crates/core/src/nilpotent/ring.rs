use std::fmt::Debug;

use super::micro::MicroVector;
use super::multidual::MultiDual;
use super::primitive::{pow_derivatives, Primitive};
use crate::error::{Error, Result};

/// A commutative ring with the smooth primitives lifted onto it.
///
/// Expressions are evaluated generically over this trait, so the same parsed
/// expression runs on plain reals, on [`MicroVector`] for gradients, and on
/// [`MultiDual`] for higher and mixed derivatives.
pub trait Smooth: Clone + Debug {
    /// Everything needed to build a constant of the same ring (e.g. generator count).
    type Shape: Clone + Debug + PartialEq;

    fn shape(&self) -> Self::Shape;
    fn constant(value: f64, shape: &Self::Shape) -> Self;
    fn standard_part(&self) -> f64;

    fn try_add(&self, rhs: &Self) -> Result<Self>;
    fn try_sub(&self, rhs: &Self) -> Result<Self>;
    fn try_mul(&self, rhs: &Self) -> Result<Self>;
    fn negate(&self) -> Self;
    fn try_recip(&self) -> Result<Self>;
    fn lift(&self, p: Primitive) -> Result<Self>;
    /// Real power through the `x^p` derivative table.
    fn powf(&self, p: f64) -> Result<Self>;
}

impl Smooth for f64 {
    type Shape = ();

    fn shape(&self) {}

    fn constant(value: f64, _: &()) -> Self {
        value
    }

    fn standard_part(&self) -> f64 {
        *self
    }

    fn try_add(&self, rhs: &Self) -> Result<Self> {
        Ok(self + rhs)
    }

    fn try_sub(&self, rhs: &Self) -> Result<Self> {
        Ok(self - rhs)
    }

    fn try_mul(&self, rhs: &Self) -> Result<Self> {
        Ok(self * rhs)
    }

    fn negate(&self) -> Self {
        -self
    }

    fn try_recip(&self) -> Result<Self> {
        if *self == 0.0 {
            Err(Error::NotInvertible)
        } else {
            Ok(1.0 / self)
        }
    }

    fn lift(&self, p: Primitive) -> Result<Self> {
        Ok(p.derivatives(*self, 0)?[0])
    }

    fn powf(&self, p: f64) -> Result<Self> {
        Ok(pow_derivatives(*self, p, 0)?[0])
    }
}

impl Smooth for MicroVector {
    type Shape = usize;

    fn shape(&self) -> usize {
        self.dim()
    }

    fn constant(value: f64, dim: &usize) -> Self {
        MicroVector::constant(value, *dim)
    }

    fn standard_part(&self) -> f64 {
        self.value
    }

    fn try_add(&self, rhs: &Self) -> Result<Self> {
        MicroVector::try_add(self, rhs)
    }

    fn try_sub(&self, rhs: &Self) -> Result<Self> {
        MicroVector::try_sub(self, rhs)
    }

    fn try_mul(&self, rhs: &Self) -> Result<Self> {
        MicroVector::try_mul(self, rhs)
    }

    fn negate(&self) -> Self {
        self.scale(-1.0)
    }

    fn try_recip(&self) -> Result<Self> {
        self.invert()
    }

    fn lift(&self, p: Primitive) -> Result<Self> {
        MicroVector::lift(self, p)
    }

    fn powf(&self, p: f64) -> Result<Self> {
        MicroVector::powf(self, p)
    }
}

impl Smooth for MultiDual {
    type Shape = usize;

    fn shape(&self) -> usize {
        self.n_generators()
    }

    // Shapes come from existing elements, so the generator count is within the cap.
    fn constant(value: f64, n: &usize) -> Self {
        MultiDual::constant(*n, value).expect("generator count within cap")
    }

    fn standard_part(&self) -> f64 {
        MultiDual::standard_part(self)
    }

    fn try_add(&self, rhs: &Self) -> Result<Self> {
        MultiDual::try_add(self, rhs)
    }

    fn try_sub(&self, rhs: &Self) -> Result<Self> {
        MultiDual::try_sub(self, rhs)
    }

    fn try_mul(&self, rhs: &Self) -> Result<Self> {
        MultiDual::try_mul(self, rhs)
    }

    fn negate(&self) -> Self {
        MultiDual::negate(self)
    }

    fn try_recip(&self) -> Result<Self> {
        self.invert()
    }

    fn lift(&self, p: Primitive) -> Result<Self> {
        MultiDual::lift(self, p)
    }

    fn powf(&self, p: f64) -> Result<Self> {
        MultiDual::powf(self, p)
    }
}
