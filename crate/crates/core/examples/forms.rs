//! Differential forms on infinitesimal cubes, and the exterior derivative computed two ways.

use sia::forms::{default_coords, eval_form, exterior_derivative_sia, CoordForm, Form, Germ, InfinitesimalCube};
use sia::json::parse_form;
use sia::nilpotent::DEFAULT_IMPURITY_TOL;
use sia::MultiDual;

pub fn run_example() -> sia::Result<()> {
    let omega = CoordForm::parse("x*y^2*dx + sin(x)*dy", default_coords(2))?;
    println!("omega = {omega}");

    // A curved germ D^2 -> R^2 with mixed terms.
    let germ = Germ::new(vec![
        MultiDual::from_coeffs(2, vec![0.4, 1.3, -0.2, 0.9])?,
        MultiDual::from_coeffs(2, vec![-0.6, 0.5, 2.1, -1.4])?,
    ])?;
    let d_omega = omega.exterior_derivative()?;
    println!("d omega (coordinates) = {d_omega}");
    println!("d~omega from the boundary definition: {}", exterior_derivative_sia(&omega, &germ, DEFAULT_IMPURITY_TOL)?);
    println!("d~omega from the coordinate formula:  {}", d_omega.tilde(&germ)?.standard_part());

    // The three axioms on the area form.
    let area = CoordForm::parse("dx^dy", default_coords(2))?;
    let cube = InfinitesimalCube::new(vec![2.0, 0.5], germ.clone())?;
    println!("area(d, f) = {}", eval_form(&area, &cube)?);
    println!(
        "scaling coordinate 0 by 3: {}",
        eval_form(&area, &InfinitesimalCube::new(vec![2.0, 0.5], germ.scale_coordinate(0, 3.0)?)?)?
    );
    println!(
        "swapping coordinates: {}",
        eval_form(&area, &InfinitesimalCube::new(vec![2.0, 0.5], germ.permute_coordinates(&[1, 0])?)?)?
    );
    println!("zero displacement: {}", eval_form(&area, &InfinitesimalCube::new(vec![0.0, 0.5], germ)?)?);

    // Forms also load from JSON.
    let from_json = parse_form(r#"{"degree": 2, "ambient": 3, "terms": [{"indices": [0, 1], "coeff": "z"}]}"#)?;
    println!("from JSON: {from_json}, d = {}", from_json.exterior_derivative()?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
