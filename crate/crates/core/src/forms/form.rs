use std::fmt;

use super::chain::Boundary;
use super::cube::{Germ, InfinitesimalCube, OneJet};
use crate::error::{Error, Result};
use crate::expr::{lex, parse_tokens, Env, Expr, Tok};
use crate::nilpotent::{MultiDual, DEFAULT_IMPURITY_TOL, MAX_GENERATORS};

/// Anything that assigns a value to infinitesimal cubes through its `tilde` factor:
/// `omega(d, f) = d_1 ... d_n * tilde(f)`.
pub trait Form {
    fn degree(&self) -> usize;
    fn ambient(&self) -> usize;

    /// `tilde(f)`, valued in the algebra of the germ's pinned generators (numbered in
    /// ascending generator order, see [`OneJet::pinned`]).
    fn tilde(&self, germ: &Germ) -> Result<MultiDual>;
}

/// `scale * (d^k expr / dx_{partials[0]} ... dx_{partials[k-1]})`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffTerm {
    pub scale: f64,
    pub expr: Expr,
    /// Ambient coordinate indices, sorted.
    pub partials: Vec<usize>,
}

/// A coefficient function: a sum of (possibly differentiated) expressions.
///
/// Partial derivatives stay unevaluated and are computed with fresh generators at
/// evaluation time. Keeping them sorted lets mixed partials cancel exactly, which is
/// what makes `d(d omega)` normalize to the zero form.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Coeff {
    pub terms: Vec<CoeffTerm>,
}

impl Coeff {
    pub fn expr(e: Expr) -> Self {
        Self { terms: vec![CoeffTerm { scale: 1.0, expr: e, partials: Vec::new() }] }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, k: f64) -> Self {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.scale *= k;
        }
        out.normalize()
    }

    pub fn add(&self, other: &Coeff) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self { terms }.normalize()
    }

    /// `d/dx_j` of the coefficient.
    pub fn partial(&self, j: usize) -> Self {
        let mut out = self.clone();
        for t in &mut out.terms {
            let pos = t.partials.partition_point(|&p| p <= j);
            t.partials.insert(pos, j);
        }
        out
    }

    /// Merges terms that differ only in scale and drops zero terms.
    pub fn normalize(&self) -> Self {
        let mut out: Vec<CoeffTerm> = Vec::new();
        for t in &self.terms {
            match out.iter_mut().find(|o| o.expr == t.expr && o.partials == t.partials) {
                Some(o) => o.scale += t.scale,
                None => out.push(t.clone()),
            }
        }
        out.retain(|t| t.scale != 0.0);
        Self { terms: out }
    }

    /// Evaluates at a point whose coordinates live in a common `p`-generator algebra.
    pub fn eval_at(&self, coords: &[String], base: &[MultiDual]) -> Result<MultiDual> {
        let p = base.first().map_or(0, MultiDual::n_generators);
        let mut total = MultiDual::zero(p)?;
        for t in &self.terms {
            let k = t.partials.len();
            if p + k > MAX_GENERATORS {
                return Err(Error::dim(format!(
                    "{p} pinned generators plus {k} partial derivatives exceed {MAX_GENERATORS}"
                )));
            }
            let mut point = base.iter().map(|b| b.embed(p + k)).collect::<Result<Vec<_>>>()?;
            for (r, &j) in t.partials.iter().enumerate() {
                point[j] = point[j].try_add(&MultiDual::generator(p + k, p + r)?)?;
            }
            let mut env = Env::<MultiDual>::new(p + k);
            for (name, v) in coords.iter().zip(point) {
                env.insert(name.as_str(), v);
            }
            let v = env.evaluate(&t.expr)?.extract_top(p)?;
            total = total.try_add(&v.scale(t.scale))?;
        }
        Ok(total)
    }

    pub fn eval_real(&self, coords: &[String], x: &[f64]) -> Result<f64> {
        let base = x.iter().map(|&v| MultiDual::constant(0, v)).collect::<Result<Vec<_>>>()?;
        Ok(self.eval_at(coords, &base)?.standard_part())
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if t.scale != 1.0 {
                write!(f, "{}*", t.scale)?;
            }
            if t.partials.is_empty() {
                write!(f, "({})", t.expr)?;
            } else {
                let ps: Vec<String> = t.partials.iter().map(|p| p.to_string()).collect();
                write!(f, "D[{}]({})", ps.join(","), t.expr)?;
            }
        }
        Ok(())
    }
}

/// One term `a_I dx_{i_1} ^ ... ^ dx_{i_n}` with `I` strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct FormTerm {
    pub indices: Vec<usize>,
    pub coeff: Coeff,
}

/// A differential form `sum_I a_I dx_I` on `R^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoordForm {
    degree: usize,
    coords: Vec<String>,
    terms: Vec<FormTerm>,
}

/// Coordinate names used when none are given: `x, y, z` up to three dimensions,
/// `x1 .. xm` beyond.
pub fn default_coords(m: usize) -> Vec<String> {
    if m <= 3 {
        ["x", "y", "z"][..m].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=m).map(|i| format!("x{i}")).collect()
    }
}

/// Sorts `indices` in place and returns the permutation sign, or `None` when an
/// index repeats.
fn sort_with_sign(indices: &mut [usize]) -> Option<f64> {
    let mut sign = 1.0;
    for i in 1..indices.len() {
        let mut j = i;
        while j > 0 && indices[j - 1] > indices[j] {
            indices.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if indices.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

impl CoordForm {
    pub fn zero(degree: usize, coords: Vec<String>) -> Result<Self> {
        if degree > coords.len() {
            return Err(Error::dim(format!("no nonzero {degree}-forms on a {}-dimensional space", coords.len())));
        }
        Ok(Self { degree, coords, terms: Vec::new() })
    }

    /// Builds a form from `(indices, coefficient)` pairs; indices may be in any order
    /// and repeat (a repeated index makes the term vanish).
    pub fn new(degree: usize, coords: Vec<String>, terms: Vec<(Vec<usize>, Coeff)>) -> Result<Self> {
        let mut form = Self::zero(degree, coords)?;
        for (mut indices, coeff) in terms {
            if indices.len() != degree {
                return Err(Error::dim(format!("term with {} differentials in a {degree}-form", indices.len())));
            }
            if let Some(&bad) = indices.iter().find(|&&i| i >= form.coords.len()) {
                return Err(Error::dim(format!("differential index {bad} out of range")));
            }
            for t in &coeff.terms {
                if let Some(v) = t.expr.parameters().into_iter().find(|v| !form.coords.contains(v)) {
                    return Err(Error::UnboundVariable(v));
                }
            }
            if let Some(sign) = sort_with_sign(&mut indices) {
                form.add_term(indices, coeff.scaled(sign));
            }
        }
        Ok(form)
    }

    /// A 0-form (a function).
    pub fn function(f: Expr, coords: Vec<String>) -> Result<Self> {
        Self::new(0, coords, vec![(Vec::new(), Coeff::expr(f))])
    }

    fn add_term(&mut self, indices: Vec<usize>, coeff: Coeff) {
        match self.terms.iter_mut().find(|t| t.indices == indices) {
            Some(t) => t.coeff = t.coeff.add(&coeff),
            None => self.terms.push(FormTerm { indices, coeff: coeff.normalize() }),
        }
        self.terms.retain(|t| !t.coeff.is_zero());
        self.terms.sort_by(|a, b| a.indices.cmp(&b.indices));
    }

    /// Parses text such as `-y*dx + x*dy`, `x*dx^dy`, `dx∧dy∧dz` or `x^2*y` (a
    /// 0-form). Each term is an optional coefficient, then `*`, then wedged
    /// differentials `d<coord>`.
    pub fn parse(src: &str, coords: Vec<String>) -> Result<Self> {
        let src = src.replace('∧', "^");
        let tokens = lex(&src)?;
        if tokens.is_empty() {
            return Err(Error::Syntax { offset: 0, message: "empty form".into() });
        }
        let differential = |t: &Tok| match t {
            Tok::Ident(s) => s.strip_prefix('d').and_then(|c| coords.iter().position(|x| x == c)),
            _ => None,
        };
        let mut degree = None;
        let mut terms = Vec::new();
        for (start, end) in split_terms(&tokens) {
            let term = &tokens[start..end];
            let (indices, coeff) = match term.iter().position(|(_, t)| differential(t).is_some()) {
                None => (Vec::new(), parse_tokens(term.to_vec(), src.len())?),
                Some(first) => {
                    let mut indices = Vec::new();
                    let mut k = first;
                    loop {
                        let (off, t) = &term[k];
                        indices.push(differential(t).ok_or_else(|| Error::Syntax {
                            offset: *off,
                            message: match t {
                                Tok::Ident(s) if s.starts_with('d') => {
                                    format!("`{s}` is not a differential of the coordinates {}", coords.join(", "))
                                }
                                _ => "expected a differential".into(),
                            },
                        })?);
                        k += 1;
                        match term.get(k) {
                            None => break,
                            Some((_, Tok::Caret)) => k += 1,
                            Some((off, _)) => {
                                return Err(Error::Syntax {
                                    offset: *off,
                                    message: "differentials must end the term".into(),
                                })
                            }
                        }
                        if k >= term.len() {
                            return Err(Error::Syntax { offset: src.len(), message: "dangling `^`".into() });
                        }
                    }
                    let prefix = &term[..first];
                    let negations = prefix
                        .iter()
                        .take_while(|(_, t)| matches!(t, Tok::Plus | Tok::Minus))
                        .filter(|(_, t)| *t == Tok::Minus)
                        .count();
                    let signs = prefix.iter().take_while(|(_, t)| matches!(t, Tok::Plus | Tok::Minus)).count();
                    let sign = if negations % 2 == 0 { 1.0 } else { -1.0 };
                    let coeff = if signs == prefix.len() {
                        Expr::Num(sign)
                    } else {
                        match prefix.last() {
                            Some((_, Tok::Star)) => parse_tokens(prefix[..first - 1].to_vec(), prefix[first - 1].0)?,
                            Some(_) => {
                                return Err(Error::Syntax {
                                    offset: term[first].0,
                                    message: "expected `*` before the differentials".into(),
                                })
                            }
                            None => unreachable!(),
                        }
                    };
                    (indices, coeff)
                }
            };
            match degree {
                None => degree = Some(indices.len()),
                Some(d) if d != indices.len() => {
                    return Err(Error::Syntax {
                        offset: tokens[start].0,
                        message: format!("term of degree {} in a {d}-form", indices.len()),
                    })
                }
                Some(_) => {}
            }
            terms.push((indices, Coeff::expr(coeff)));
        }
        Self::new(degree.unwrap_or(0), coords, terms)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn terms(&self) -> &[FormTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient values `a_I(x)` at a real point, one per term.
    pub fn coefficients_at(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_ambient(x.len())?;
        self.terms.iter().map(|t| t.coeff.eval_real(&self.coords, x)).collect()
    }

    fn check_ambient(&self, m: usize) -> Result<()> {
        if m != self.coords.len() {
            return Err(Error::dim(format!("form on R^{} applied in R^{m}", self.coords.len())));
        }
        Ok(())
    }

    /// `tilde(f)` from an already-extracted 1-jet.
    pub fn tilde_from_jet(&self, jet: &OneJet) -> Result<MultiDual> {
        self.check_ambient(jet.base.len())?;
        if jet.partials.len() != self.degree {
            return Err(Error::dim(format!("{}-form applied to a {}-cube", self.degree, jet.partials.len())));
        }
        let p = jet.pinned.len();
        let mut total = MultiDual::zero(p)?;
        for t in &self.terms {
            let a = t.coeff.eval_at(&self.coords, &jet.base)?;
            let minor: Vec<Vec<MultiDual>> =
                jet.partials.iter().map(|row| t.indices.iter().map(|&i| row[i].clone()).collect()).collect();
            total = total.try_add(&a.try_mul(&determinant(&minor, p)?)?)?;
        }
        Ok(total)
    }

    /// The coordinate exterior derivative `sum_I sum_j (d a_I / d x_j) dx_j ^ dx_I`.
    pub fn exterior_derivative(&self) -> Result<CoordForm> {
        let m = self.coords.len();
        if self.degree >= m {
            return Err(Error::dim(format!("d of a {}-form on R^{m} has degree above the dimension", self.degree)));
        }
        let mut out = Self::zero(self.degree + 1, self.coords.clone())?;
        for t in &self.terms {
            for j in 0..m {
                if t.indices.contains(&j) {
                    continue;
                }
                let mut indices = vec![j];
                indices.extend(&t.indices);
                let sign = sort_with_sign(&mut indices).expect("j is not in I");
                out.add_term(indices, t.coeff.partial(j).scaled(sign));
            }
        }
        Ok(out)
    }
}

impl Form for CoordForm {
    fn degree(&self) -> usize {
        self.degree
    }

    fn ambient(&self) -> usize {
        self.coords.len()
    }

    /// Rows of the Jacobian minor are taken in ascending generator order and the
    /// permutation sign applied afterwards, so alternation holds bit for bit.
    fn tilde(&self, germ: &Germ) -> Result<MultiDual> {
        let (canonical, sign) = germ.canonical();
        let v = self.tilde_from_jet(&canonical.one_jet()?)?;
        Ok(if sign < 0.0 { v.negate() } else { v })
    }
}

impl fmt::Display for CoordForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if t.coeff.terms.len() > 1 {
                write!(f, "[{}]", t.coeff)?;
            } else {
                write!(f, "{}", t.coeff)?;
            }
            let ds: Vec<String> = t.indices.iter().map(|&i| format!("d{}", self.coords[i])).collect();
            if !ds.is_empty() {
                write!(f, "*{}", ds.join("^"))?;
            }
        }
        Ok(())
    }
}

/// Splits a token run at top-level binary `+`/`-`; each returned range keeps its
/// leading sign.
fn split_terms(tokens: &[(usize, Tok)]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, (_, t)) in tokens.iter().enumerate() {
        match t {
            Tok::LParen => depth += 1,
            Tok::RParen => depth -= 1,
            Tok::Plus | Tok::Minus if depth == 0 && i > start => {
                let binary = matches!(tokens[i - 1].1, Tok::Num(_) | Tok::Ident(_) | Tok::RParen);
                if binary {
                    out.push((start, i));
                    start = i;
                }
            }
            _ => {}
        }
    }
    out.push((start, tokens.len()));
    out
}

/// Determinant by cofactor expansion along the first row.
pub(crate) fn determinant(rows: &[Vec<MultiDual>], p: usize) -> Result<MultiDual> {
    let n = rows.len();
    match n {
        0 => MultiDual::constant(p, 1.0),
        1 => Ok(rows[0][0].clone()),
        2 => rows[0][0].try_mul(&rows[1][1])?.try_sub(&rows[0][1].try_mul(&rows[1][0])?),
        _ => {
            let mut total = MultiDual::zero(p)?;
            for col in 0..n {
                let minor: Vec<Vec<MultiDual>> = rows[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(c, _)| *c != col).map(|(_, v)| v.clone()).collect())
                    .collect();
                let term = rows[0][col].try_mul(&determinant(&minor, p)?)?;
                total = if col % 2 == 0 { total.try_add(&term)? } else { total.try_sub(&term)? };
            }
            Ok(total)
        }
    }
}

/// `omega(d, f)` for a cube whose germ has no pinned coordinates.
pub fn eval_form<F: Form + ?Sized>(omega: &F, cube: &InfinitesimalCube) -> Result<f64> {
    check_cube(omega, cube)?;
    if cube.germ.is_pinned() {
        return Err(Error::InvalidArgument("germ has pinned coordinates; use eval_form_nilpotent".into()));
    }
    let scale: f64 = cube.scalings.iter().product();
    Ok(scale * omega.tilde(&cube.germ)?.standard_part())
}

/// `omega(d, f) = prod_j (lambda_j e_j) * tilde(f)` in the germ's full algebra.
pub fn eval_form_nilpotent<F: Form + ?Sized>(omega: &F, cube: &InfinitesimalCube) -> Result<MultiDual> {
    check_cube(omega, cube)?;
    let jet = cube.germ.one_jet()?;
    let tilde = jet_expand(omega, cube, &jet)?;
    cube.volume_element()?.try_mul(&tilde)
}

fn jet_expand<F: Form + ?Sized>(omega: &F, cube: &InfinitesimalCube, jet: &OneJet) -> Result<MultiDual> {
    jet.expand(&omega.tilde(&cube.germ)?, cube.germ.n_generators())
}

fn check_cube<F: Form + ?Sized>(omega: &F, cube: &InfinitesimalCube) -> Result<()> {
    if omega.degree() != cube.germ.dim() || omega.ambient() != cube.germ.ambient() {
        return Err(Error::dim(format!(
            "{}-form on R^{} applied to a {}-cube in R^{}",
            omega.degree(),
            omega.ambient(),
            cube.germ.dim(),
            cube.germ.ambient()
        )));
    }
    Ok(())
}

/// `d~omega(f)`, defined by evaluating `omega` on the boundary of the unit cube
/// `(e, f)` and cancelling the common factor `e_1 ... e_{n+1}`.
pub fn exterior_derivative_sia<F: Form + ?Sized>(omega: &F, germ: &Germ, tol: f64) -> Result<f64> {
    if germ.is_pinned() {
        return Err(Error::InvalidArgument("exterior derivative needs an unpinned germ".into()));
    }
    if germ.dim() != omega.degree() + 1 {
        return Err(Error::dim(format!(
            "d of a {}-form is evaluated on {}-germs, got {}",
            omega.degree(),
            omega.degree() + 1,
            germ.dim()
        )));
    }
    let cube = InfinitesimalCube::unit(germ.clone());
    let mut total = MultiDual::zero(germ.n_generators())?;
    for (sign, face) in cube.boundary()?.terms() {
        total = total.try_add(&eval_form_nilpotent(omega, face)?.scale(*sign))?;
    }
    total.microcancel(tol)
}

/// The exterior derivative computed through [`exterior_derivative_sia`], usable
/// wherever a [`Form`] is expected. Only unpinned germs are supported.
#[derive(Debug, Clone)]
pub struct SiaDerivative<'a, F: Form + ?Sized> {
    pub inner: &'a F,
    pub tol: f64,
}

impl<'a, F: Form + ?Sized> SiaDerivative<'a, F> {
    pub fn new(inner: &'a F) -> Self {
        Self { inner, tol: DEFAULT_IMPURITY_TOL }
    }
}

impl<F: Form + ?Sized> Form for SiaDerivative<'_, F> {
    fn degree(&self) -> usize {
        self.inner.degree() + 1
    }

    fn ambient(&self) -> usize {
        self.inner.ambient()
    }

    fn tilde(&self, germ: &Germ) -> Result<MultiDual> {
        MultiDual::constant(0, exterior_derivative_sia(self.inner, germ, self.tol)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Vec<String> {
        default_coords(2)
    }

    fn form(src: &str, m: usize) -> CoordForm {
        CoordForm::parse(src, default_coords(m)).unwrap()
    }

    #[test]
    fn parse_forms() {
        let w = form("-y*dx + x*dy", 2);
        assert_eq!(w.degree(), 1);
        assert_eq!(w.terms().len(), 2);
        assert_eq!(w.terms()[0].indices, vec![0]);
        assert_eq!(w.coefficients_at(&[2.0, 3.0]).unwrap(), vec![-3.0, 2.0]);

        let v = form("dy^dx", 2);
        assert_eq!(v.coefficients_at(&[0.0, 0.0]).unwrap(), vec![-1.0]);
        assert!(form("x*dx^dx", 2).is_zero());
        assert_eq!(form("dx∧dy∧dz", 3).degree(), 3);
        assert_eq!(form("x^2*y - 3", 2).degree(), 0);
        assert_eq!(form("(x+y)*dx - dx", 2).coefficients_at(&[1.0, 1.0]).unwrap(), vec![1.0]);
        assert!(CoordForm::parse("x*dx + dy^dz", default_coords(3)).is_err());
        assert!(CoordForm::parse("dx x", xy()).is_err());
        assert!(matches!(CoordForm::parse("w*dx", xy()), Err(Error::UnboundVariable(_))));
    }

    #[test]
    fn eval_form_examples() {
        let dx = form("dx", 1);
        let g = Germ::affine(&[0.4], &[vec![2.5]]).unwrap();
        assert_eq!(eval_form(&dx, &InfinitesimalCube::unit(g)).unwrap(), 2.5);

        let area = form("dx^dy", 2);
        let id = Germ::affine(&[0.0, 0.0], &[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(eval_form(&area, &InfinitesimalCube::unit(id)).unwrap(), 1.0);

        let xarea = form("x*dx^dy", 2);
        let g = Germ::affine(&[0.7, -1.2], &[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(eval_form(&xarea, &InfinitesimalCube::unit(g.clone())).unwrap(), 0.7);
        let c = InfinitesimalCube::new(vec![2.0, 3.0], g).unwrap();
        assert!((eval_form(&xarea, &c).unwrap() - 4.2).abs() < 1e-15);
    }

    #[test]
    fn coordinate_derivative() {
        let d = form("x*dy", 2).exterior_derivative().unwrap();
        assert_eq!(d.degree(), 2);
        assert_eq!(d.coefficients_at(&[0.3, 0.9]).unwrap(), vec![1.0]);

        let d = form("-y*dx + x*dy", 2).exterior_derivative().unwrap();
        assert_eq!(d.coefficients_at(&[5.0, -1.0]).unwrap(), vec![2.0]);

        let d = form("7", 2).exterior_derivative().unwrap();
        assert_eq!(d.degree(), 1);
        assert!(d.coefficients_at(&[1.0, 2.0]).unwrap().iter().all(|&c| c == 0.0));

        let dd = form("x^2*y*z + sin(x*z)", 3).exterior_derivative().unwrap().exterior_derivative().unwrap();
        assert!(dd.is_zero());
        let dd = form("x*y*dz + exp(y)*dx", 3).exterior_derivative().unwrap().exterior_derivative().unwrap();
        assert!(dd.is_zero());
        assert!(form("dx^dy", 2).exterior_derivative().is_err());
    }

    #[test]
    fn sia_derivative_of_function() {
        let f = CoordForm::function(crate::parse("exp(x)").unwrap(), default_coords(1)).unwrap();
        let g = Germ::affine(&[0.3], &[vec![1.7]]).unwrap();
        let v = exterior_derivative_sia(&f, &g, 1e-12).unwrap();
        assert!((v - 0.3f64.exp() * 1.7).abs() < 1e-14);
    }

    #[test]
    fn sia_matches_coordinates_on_curved_germ() {
        let w = form("x*y^2*dx + sin(x)*dy", 2);
        let dw = w.exterior_derivative().unwrap();
        let comps = vec![
            MultiDual::from_coeffs(2, vec![0.4, 1.3, -0.2, 0.9]).unwrap(),
            MultiDual::from_coeffs(2, vec![-0.6, 0.5, 2.1, -1.4]).unwrap(),
        ];
        let g = Germ::new(comps).unwrap();
        let sia = exterior_derivative_sia(&w, &g, 1e-12).unwrap();
        let coord = dw.tilde(&g).unwrap().standard_part();
        assert!((sia - coord).abs() < 1e-13, "{sia} vs {coord}");

        let id = Germ::affine(&[0.2, 0.5], &[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(exterior_derivative_sia(&form("x*dy", 2), &id, 1e-12).unwrap(), 1.0);
    }

    #[test]
    fn sia_two_forms_in_three_dimensions() {
        let w = form("x*y*dx^dy + z^2*dx^dz + cos(y)*dy^dz", 3);
        let dw = w.exterior_derivative().unwrap();
        let comps = (0..3)
            .map(|k| {
                let c = (0..8).map(|s| ((s * 5 + k * 11) % 7) as f64 * 0.3 - 0.8).collect();
                MultiDual::from_coeffs(3, c).unwrap()
            })
            .collect();
        let g = Germ::new(comps).unwrap();
        let sia = exterior_derivative_sia(&w, &g, 1e-12).unwrap();
        let coord = dw.tilde(&g).unwrap().standard_part();
        assert!((sia - coord).abs() < 1e-12, "{sia} vs {coord}");
    }

    #[test]
    fn determinant_small() {
        let c = |v: f64| MultiDual::constant(0, v).unwrap();
        let m = vec![vec![c(2.0), c(0.0), c(1.0)], vec![c(1.0), c(3.0), c(2.0)], vec![c(1.0), c(1.0), c(2.0)]];
        assert_eq!(determinant(&m, 0).unwrap().standard_part(), 6.0);
    }
}
