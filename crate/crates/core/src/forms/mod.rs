//! Cubical exterior calculus.
//!
//! Infinitesimal cubes are pairs of displacement scalings and germs `D^n -> R^m`;
//! finite cubes are expression maps `[0, 1]^n -> R^m`. Both have a signed boundary,
//! and chains of either normalize so that `boundary(boundary(c))` is exactly empty.
//!
//! Forms are coordinate forms `sum_I a_I dx_I`. Their value on an infinitesimal cube
//! factors as `d_1 ... d_n * tilde(f)`, where `tilde` only sees the 1-jet of `f`. The
//! exterior derivative is available twice: through the boundary of an infinitesimal
//! cube ([`exterior_derivative_sia`]) and through the coordinate formula
//! ([`CoordForm::exterior_derivative`]); the two are checked against each other.

mod chain;
mod cube;
mod form;
mod integrate;
pub mod random;
mod stokes;
mod vector;

pub use chain::{Boundary, Chain};
pub use cube::{permutation_sign, FiniteCube, Germ, InfinitesimalCube, OneJet, Pin};
pub use form::{
    default_coords, eval_form, eval_form_nilpotent, exterior_derivative_sia, Coeff, CoeffTerm, CoordForm, Form,
    FormTerm, SiaDerivative,
};
pub use integrate::{integrate_chain, integrate_cube, integrate_form, FormQuadrature};
pub use stokes::{
    ftc_case, verify_classical, verify_generalized_stokes, ClassicalTheorem, FtcReport, GermCheck, StokesReport,
};
pub use vector::{
    curl_div, curl_flux, divergence_volume, flux_chain, line_integral, line_integral_chain, surface_integral,
    SurfaceIntegrand, VectorField,
};
