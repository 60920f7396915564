//! Differentiation by nilpotent evaluation, adaptive quadrature, and stationary-point
//! solvers.

mod antiderivative;
mod diff;
mod optimize;
pub mod quadrature;

pub use antiderivative::Antiderivative;
pub use diff::{derivative, derivatives_upto, eval_micro, gradient, hessian, nth_derivative};
pub use optimize::{
    constrained_stationary, constraint_tangents, find_stationary, is_stationary, verify_constrained, ConstrainedPoint,
    MAX_NEWTON_ITERATIONS,
};
pub use quadrature::{integrate, integrate_fn, GaussRule, Integrator, QuadratureConfig};
