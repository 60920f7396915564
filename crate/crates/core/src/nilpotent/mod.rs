//! The truncated nilpotent algebra: reals extended by square-zero infinitesimals.
//!
//! [`MultiDual`] models maps out of `D^n` (mixed products of distinct generators
//! survive); [`MicroVector`] models `D(n)` (all pairwise products vanish) and is the
//! cheap path for gradients. Both implement [`Smooth`], the ring interface the
//! expression evaluator runs on.

mod micro;
mod multidual;
mod primitive;
mod ring;

pub use micro::MicroVector;
pub use multidual::{mask_to_subset, MultiDual, DEFAULT_IMPURITY_TOL, MAX_GENERATORS};
pub use primitive::{pow_derivatives, Primitive, MAX_DERIVATIVE_ORDER};
pub use ring::Smooth;
