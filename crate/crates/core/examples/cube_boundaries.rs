//! Cubes, chains and the boundary operator. The boundary of a boundary is empty.

use sia::forms::{Boundary, Chain, FiniteCube, Germ, InfinitesimalCube};
use sia::MultiDual;

pub fn run_example() -> sia::Result<()> {
    let square = FiniteCube::identity(2);
    println!("boundary of the unit square:");
    for (sign, edge) in square.boundary()?.terms() {
        let ends = (edge.eval(&[0.0])?, edge.eval(&[1.0])?);
        println!("  {sign:+} edge from {:?} to {:?}", ends.0, ends.1);
    }
    let solid = Chain::single(FiniteCube::identity(3));
    println!("faces of the unit cube: {}", solid.boundary()?.len());
    println!("boundary of those faces is empty: {}", solid.boundary()?.boundary()?.is_empty());

    // An infinitesimal 2-cube: f(d1, d2) = (d1 + d1 d2, 2 d2) with displacements 0.5, 3.
    let comps = vec![
        MultiDual::from_coeffs(2, vec![0.0, 1.0, 0.0, 1.0])?,
        MultiDual::from_coeffs(2, vec![0.0, 0.0, 2.0, 0.0])?,
    ];
    let cube = InfinitesimalCube::new(vec![0.5, 3.0], Germ::new(comps)?)?;
    for (sign, face) in cube.boundary()?.terms() {
        let pins: Vec<_> = face.germ.pins().iter().map(|p| (p.generator, p.far)).collect();
        println!("  {sign:+} face with pinned (generator, far end) {pins:?}, scaling {:?}", face.scalings);
    }
    println!("second boundary is empty: {}", Chain::single(cube).boundary()?.boundary()?.is_empty());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
