//! Stokes' theorem in its classical and generalized forms, checked numerically.

use sia::forms::{
    default_coords, verify_classical, verify_generalized_stokes, ClassicalTheorem, CoordForm, FiniteCube,
    FormQuadrature, VectorField,
};
use sia::parse;

pub fn run_example() -> sia::Result<()> {
    let quad = FormQuadrature::default();

    let swirl = VectorField::parse("-y, x, 0")?;
    let r = verify_classical(ClassicalTheorem::Stokes, &swirl, &FiniteCube::unit_square_3d(), &quad)?;
    println!("curl flux {} vs circulation {} on the flat square", r.lhs, r.rhs);

    // A saddle surface z = u^2 - v^2.
    let saddle = FiniteCube::new(vec!["u".into(), "v".into()], vec![parse("u")?, parse("v")?, parse("u^2 - v^2")?])?;
    let field = VectorField::parse("y*z, x^2, sin(x) + z")?;
    let r = verify_classical(ClassicalTheorem::Stokes, &field, &saddle, &FormQuadrature::Tensor(20))?;
    println!("saddle: curl flux {} vs circulation {} (gap {:e})", r.lhs, r.rhs, r.gap);

    let r = verify_classical(
        ClassicalTheorem::Divergence,
        &VectorField::parse("x, y, z")?,
        &FiniteCube::identity(3),
        &quad,
    )?;
    println!("unit cube: outward flux {} vs int div {}", r.lhs, r.rhs);

    let omega = CoordForm::parse("x*y*dy^dz + z^2*dx^dy", default_coords(3))?;
    let solid = FiniteCube::new(
        vec!["u".into(), "v".into(), "w".into()],
        vec![parse("u + v*w/4")?, parse("v")?, parse("w + u^2/3")?],
    )?;
    let r = verify_generalized_stokes(&omega, &solid, &quad)?;
    println!("int over boundary {} vs int of d omega {} (gap {:e})", r.lhs, r.rhs, r.gap);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
