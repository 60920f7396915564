//! Exact calculus over nilpotent infinitesimals.
//!
//! Numbers carrying square-zero infinitesimals ([`nilpotent::MultiDual`],
//! [`nilpotent::MicroVector`]) make differentiation exact: `f(x + d) = f(x) + f'(x) d`
//! is evaluated literally and the derivative is read off as a coefficient. On top of
//! that sit adaptive quadrature, stationary-point solvers, the classical integral
//! formulas of single-variable calculus, and a cubical exterior calculus that checks
//! Stokes' theorem numerically.

pub mod calculus;
pub mod cli;
pub mod error;
pub mod expr;
pub mod forms;
pub mod geometry;
pub mod json;
pub mod nilpotent;
pub mod selftest;

pub use error::{Error, Result};
pub use expr::{parse, Env, Expr};
pub use nilpotent::{MicroVector, MultiDual, Primitive, Smooth};
