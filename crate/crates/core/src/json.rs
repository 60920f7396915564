//! JSON encodings of forms and finite cubes.
//!
//! A form:
//!
//! ```json
//! {"degree": 1, "coords": ["x", "y"], "terms": [{"indices": [0], "coeff": "-y"},
//!                                               {"indices": [1], "coeff": "x"}]}
//! ```
//!
//! `indices` are 0-based coordinate positions. `coords` may be replaced by
//! `"ambient": m`, which picks the default names (`x, y, z`, or `x1 .. xm`).
//!
//! A cube `[0, 1]^n -> R^m`:
//!
//! ```json
//! {"dims": [2, 3], "params": ["u", "v"], "components": ["u", "v", "u*v"]}
//! ```
//!
//! `params` defaults to `t` for curves, `u, v` for surfaces and `u, v, w` for solids.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::parse;
use crate::forms::{default_coords, Coeff, CoordForm, FiniteCube};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub indices: Vec<usize>,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormJson {
    pub degree: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient: Option<usize>,
    pub terms: Vec<TermJson>,
}

impl FormJson {
    pub fn to_form(&self) -> Result<CoordForm> {
        let coords = match (&self.coords, self.ambient) {
            (Some(c), Some(m)) if c.len() != m => {
                return Err(Error::dim(format!("{} coordinate names for ambient dimension {m}", c.len())))
            }
            (Some(c), _) => c.clone(),
            (None, Some(m)) => default_coords(m),
            (None, None) => return Err(Error::InvalidArgument("form needs `coords` or `ambient`".into())),
        };
        let terms = self
            .terms
            .iter()
            .map(|t| Ok((t.indices.clone(), Coeff::expr(parse(&t.coeff)?))))
            .collect::<Result<Vec<_>>>()?;
        CoordForm::new(self.degree, coords, terms)
    }

    /// Encodes a form whose coefficients are plain expressions (not derivatives).
    pub fn from_form(form: &CoordForm) -> Result<Self> {
        let terms = form
            .terms()
            .iter()
            .map(|t| match t.coeff.terms.as_slice() {
                [c] if c.partials.is_empty() && c.scale == 1.0 => {
                    Ok(TermJson { indices: t.indices.clone(), coeff: c.expr.to_string() })
                }
                _ => Err(Error::InvalidArgument(
                    "only forms with plain expression coefficients have a JSON encoding".into(),
                )),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { degree: form.degree(), coords: Some(form.coords().to_vec()), ambient: None, terms })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CubeJson {
    pub dims: [usize; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Vec<String>>,
    pub components: Vec<String>,
}

impl CubeJson {
    pub fn to_cube(&self) -> Result<FiniteCube> {
        let [n, m] = self.dims;
        if self.components.len() != m {
            return Err(Error::dim(format!("{} components for ambient dimension {m}", self.components.len())));
        }
        let params = self.params.clone().unwrap_or_else(|| FiniteCube::default_params(n));
        if params.len() != n {
            return Err(Error::dim(format!("{} parameter names for a {n}-cube", params.len())));
        }
        let map = self.components.iter().map(|c| parse(c)).collect::<Result<Vec<_>>>()?;
        for e in &map {
            if let Some(v) = e.parameters().into_iter().find(|v| !params.contains(v)) {
                return Err(Error::UnboundVariable(v));
            }
        }
        FiniteCube::new(params, map)
    }

    pub fn from_cube(cube: &FiniteCube) -> Self {
        Self {
            dims: [cube.dim(), cube.ambient()],
            params: Some(cube.params.clone()),
            components: cube.map.iter().map(|e| e.to_string()).collect(),
        }
    }
}

pub fn parse_form(json: &str) -> Result<CoordForm> {
    serde_json::from_str::<FormJson>(json).map_err(|e| Error::InvalidArgument(format!("form JSON: {e}")))?.to_form()
}

pub fn parse_cube(json: &str) -> Result<FiniteCube> {
    serde_json::from_str::<CubeJson>(json).map_err(|e| Error::InvalidArgument(format!("cube JSON: {e}")))?.to_cube()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::Form;

    #[test]
    fn form_round_trip() {
        let src = r#"{"degree": 1, "ambient": 2, "terms": [{"indices": [0], "coeff": "-y"}, {"indices": [1], "coeff": "x"}]}"#;
        let form = parse_form(src).unwrap();
        assert_eq!(form, CoordForm::parse("-y*dx + x*dy", default_coords(2)).unwrap());
        let back = FormJson::from_form(&form).unwrap().to_form().unwrap();
        assert_eq!(back.coefficients_at(&[1.0, 2.0]).unwrap(), form.coefficients_at(&[1.0, 2.0]).unwrap());
        assert!(FormJson::from_form(&form.exterior_derivative().unwrap()).is_err());
        assert_eq!(Form::degree(&back), 1);
    }

    #[test]
    fn cube_round_trip() {
        let cube = parse_cube(r#"{"dims": [2, 3], "components": ["u", "v", "u*v"]}"#).unwrap();
        assert_eq!(cube.params, ["u", "v"]);
        assert_eq!(CubeJson::from_cube(&cube).to_cube().unwrap(), cube);
        assert!(parse_cube(r#"{"dims": [1, 2], "components": ["t"]}"#).is_err());
        assert!(matches!(parse_cube(r#"{"dims": [1, 1], "components": ["s"]}"#), Err(Error::UnboundVariable(_))));
    }
}
