use super::chain::Boundary;
use crate::error::{Error, Result};
use crate::expr::{Env, Expr};
use crate::nilpotent::{MultiDual, MAX_GENERATORS};

/// A coordinate of a germ frozen at `0` or at the displacement `scale * e_generator`.
///
/// Faces of an infinitesimal cube keep the frozen displacement symbolic, so the face
/// germ takes values in the algebra generated by the frozen generators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pin {
    pub generator: usize,
    pub far: bool,
    pub scale: f64,
}

/// A map `D^n -> R^m`, stored as `m` multilinear polynomials in the algebra's
/// generators.
///
/// `coords` lists the generators that act as the germ's own coordinates, in order;
/// every other generator is pinned (see [`Pin`]). A freshly built germ has all of its
/// generators as coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Germ {
    comps: Vec<MultiDual>,
    coords: Vec<usize>,
    pins: Vec<Pin>,
}

impl Germ {
    pub fn new(comps: Vec<MultiDual>) -> Result<Self> {
        let n = comps.first().ok_or_else(|| Error::dim("a germ needs at least one component"))?.n_generators();
        if comps.iter().any(|c| c.n_generators() != n) {
            return Err(Error::dim("germ components must share a generator count"));
        }
        Ok(Self { comps, coords: (0..n).collect(), pins: Vec::new() })
    }

    /// The affine germ `d -> base + sum_j d_j columns[j]`.
    pub fn affine(base: &[f64], columns: &[Vec<f64>]) -> Result<Self> {
        let n = columns.len();
        if columns.iter().any(|c| c.len() != base.len()) {
            return Err(Error::dim("every column needs one entry per component"));
        }
        let comps = (0..base.len())
            .map(|k| {
                let slopes: Vec<f64> = columns.iter().map(|c| c[k]).collect();
                MultiDual::variable(base[k], &slopes)
            })
            .collect::<Result<Vec<_>>>()?;
        debug_assert_eq!(comps[0].n_generators(), n);
        Self::new(comps)
    }

    /// Number of coordinates (the cube dimension `n`).
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Ambient dimension `m`.
    pub fn ambient(&self) -> usize {
        self.comps.len()
    }

    pub fn n_generators(&self) -> usize {
        self.comps[0].n_generators()
    }

    pub fn coords(&self) -> &[usize] {
        &self.coords
    }

    pub fn pins(&self) -> &[Pin] {
        &self.pins
    }

    pub fn is_pinned(&self) -> bool {
        !self.pins.is_empty()
    }

    /// Raw components, before pins are applied.
    pub fn components(&self) -> &[MultiDual] {
        &self.comps
    }

    /// Components with every pin substituted.
    pub fn realized(&self) -> Vec<MultiDual> {
        let mut comps = self.comps.clone();
        for pin in &self.pins {
            let bit = 1usize << pin.generator;
            for c in &mut comps {
                for mask in 0..c.coeffs().len() {
                    if mask & bit != 0 {
                        let v = if pin.far { c.coeff_mask(mask) * pin.scale } else { 0.0 };
                        c.set_mask(mask, v);
                    }
                }
            }
        }
        comps
    }

    /// Base point and first-order coefficients, in the algebra of the pinned
    /// generators (renumbered `0..p` in ascending generator order).
    pub fn one_jet(&self) -> Result<OneJet> {
        let comps = self.realized();
        let pinned: Vec<usize> = self.pins.iter().map(|p| p.generator).collect();
        let p = pinned.len();
        let spread = |local: usize| -> usize {
            pinned.iter().enumerate().filter(|(j, _)| local & (1 << j) != 0).map(|(_, g)| 1usize << g).sum()
        };
        let project = |c: &MultiDual, extra: usize| -> Result<MultiDual> {
            let coeffs = (0..1usize << p).map(|s| c.coeff_mask(spread(s) | extra)).collect();
            MultiDual::from_coeffs(p, coeffs)
        };
        let base = comps.iter().map(|c| project(c, 0)).collect::<Result<Vec<_>>>()?;
        let partials = self
            .coords
            .iter()
            .map(|&g| comps.iter().map(|c| project(c, 1 << g)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(OneJet { base, partials, pinned })
    }

    /// `g(d) = f(d_1, ..., a d_i, ..., d_n)`.
    pub fn scale_coordinate(&self, i: usize, a: f64) -> Result<Self> {
        let g = *self.coords.get(i).ok_or_else(|| Error::dim(format!("coordinate {i} out of range")))?;
        let mut out = self.clone();
        for c in &mut out.comps {
            for mask in 0..c.coeffs().len() {
                if mask & (1 << g) != 0 {
                    c.set_mask(mask, c.coeff_mask(mask) * a);
                }
            }
        }
        Ok(out)
    }

    /// `(sigma f)(x_1, ..., x_n) = f(x_sigma(1), ..., x_sigma(n))`, with `sigma` given
    /// 0-based as `sigma[k]`.
    pub fn permute_coordinates(&self, sigma: &[usize]) -> Result<Self> {
        check_permutation(sigma, self.dim())?;
        // Old coordinate k now reads new coordinate sigma[k].
        let mut coords = vec![0; self.dim()];
        for (k, &s) in sigma.iter().enumerate() {
            coords[s] = self.coords[k];
        }
        Ok(Self { coords, ..self.clone() })
    }

    /// The same germ with its coordinates in ascending generator order, and the sign
    /// of the permutation that sorts them.
    pub fn canonical(&self) -> (Self, f64) {
        let sign = permutation_sign(&self.coords);
        let mut out = self.clone();
        out.coords.sort_unstable();
        (out, sign)
    }

    fn face(&self, i: usize, far: bool, scale: f64) -> Self {
        let mut out = self.clone();
        let generator = out.coords.remove(i);
        let pos = out.pins.partition_point(|p| p.generator < generator);
        out.pins.insert(pos, Pin { generator, far, scale });
        out
    }
}

/// Base point and first-order coefficients of a germ.
#[derive(Debug, Clone, PartialEq)]
pub struct OneJet {
    /// `f(0)`, one entry per ambient coordinate.
    pub base: Vec<MultiDual>,
    /// `partials[j][k]`: coefficient of coordinate `j` in component `k`.
    pub partials: Vec<Vec<MultiDual>>,
    /// Original generator index of each local algebra generator.
    pub pinned: Vec<usize>,
}

impl OneJet {
    /// Re-expresses an element of the pinned algebra in the germ's full algebra.
    pub fn expand(&self, v: &MultiDual, n_total: usize) -> Result<MultiDual> {
        let mut out = MultiDual::zero(n_total)?;
        for (s, &c) in v.coeffs().iter().enumerate() {
            if c != 0.0 {
                let mask: usize =
                    self.pinned.iter().enumerate().filter(|(j, _)| s & (1 << j) != 0).map(|(_, g)| 1usize << g).sum();
                out.set_mask(mask, c);
            }
        }
        Ok(out)
    }
}

pub(crate) fn check_permutation(sigma: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if sigma.len() != n {
        return Err(Error::dim("permutation length differs from the dimension"));
    }
    for &s in sigma {
        if s >= n || seen[s] {
            return Err(Error::InvalidArgument(format!("{sigma:?} is not a permutation")));
        }
        seen[s] = true;
    }
    Ok(())
}

/// Sign of the permutation that sorts `sigma` (distinct entries), e.g. a 0-based
/// image list.
pub fn permutation_sign(sigma: &[usize]) -> f64 {
    let mut inversions = 0;
    for i in 0..sigma.len() {
        for j in i + 1..sigma.len() {
            if sigma[i] > sigma[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// An infinitesimal `n`-cube `(d, f)`: displacement `d_i = scalings[i] * e_i` along
/// each coordinate generator, and a germ `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct InfinitesimalCube {
    pub scalings: Vec<f64>,
    pub germ: Germ,
}

impl InfinitesimalCube {
    pub fn new(scalings: Vec<f64>, germ: Germ) -> Result<Self> {
        if scalings.len() != germ.dim() {
            return Err(Error::dim(format!("{} scalings for a germ of dimension {}", scalings.len(), germ.dim())));
        }
        Ok(Self { scalings, germ })
    }

    /// All displacements equal to the bare generators.
    pub fn unit(germ: Germ) -> Self {
        Self { scalings: vec![1.0; germ.dim()], germ }
    }

    /// `prod_i scalings[i] * e_{coord i}` in the germ's algebra.
    pub fn volume_element(&self) -> Result<MultiDual> {
        let mask: usize = self.germ.coords.iter().map(|g| 1usize << g).sum();
        let scale: f64 = self.scalings.iter().product();
        let mut out = MultiDual::zero(self.germ.n_generators())?;
        out.set_mask(mask, scale);
        Ok(out)
    }

    /// For a 0-cube, the point it sits at (nilpotent-valued for faces).
    pub fn point(&self) -> Vec<MultiDual> {
        self.germ
            .realized()
            .iter()
            .map(|c| {
                // drop any remaining coordinate dependence
                let mut p = c.clone();
                for &g in &self.germ.coords {
                    for mask in 0..p.coeffs().len() {
                        if mask & (1 << g) != 0 {
                            p.set_mask(mask, 0.0);
                        }
                    }
                }
                p
            })
            .collect()
    }
}

impl Boundary for InfinitesimalCube {
    fn dim(&self) -> usize {
        self.germ.dim()
    }

    /// Face `x_i = alpha * d_i`, with `d_i` kept as a symbolic displacement.
    fn face(&self, i: usize, far: bool) -> Result<Self> {
        if i >= self.dim() {
            return Err(Error::dim(format!("face index {i} out of range")));
        }
        let mut scalings = self.scalings.clone();
        let scale = scalings.remove(i);
        Ok(Self { scalings, germ: self.germ.face(i, far, scale) })
    }
}

/// A map `[0, 1]^n -> R^m` given by one expression per ambient coordinate in the
/// parameters `params`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteCube {
    pub params: Vec<String>,
    pub map: Vec<Expr>,
}

impl FiniteCube {
    pub fn new(params: Vec<String>, map: Vec<Expr>) -> Result<Self> {
        if map.is_empty() {
            return Err(Error::dim("a cube needs at least one component"));
        }
        if params.len() > MAX_GENERATORS {
            return Err(Error::dim(format!("cube dimension {} exceeds {MAX_GENERATORS}", params.len())));
        }
        Ok(Self { params, map })
    }

    /// Default parameter names: `t` for curves, `u, v` for surfaces, `u, v, w` for
    /// solids, `t1..tn` otherwise.
    pub fn default_params(n: usize) -> Vec<String> {
        match n {
            1 => vec!["t".into()],
            2 => vec!["u".into(), "v".into()],
            3 => vec!["u".into(), "v".into(), "w".into()],
            _ => (1..=n).map(|i| format!("t{i}")).collect(),
        }
    }

    /// The identity map of `[0, 1]^n` into `R^n`.
    pub fn identity(n: usize) -> Self {
        let params = Self::default_params(n);
        let map = if n == 0 { vec![Expr::Num(0.0)] } else { params.iter().map(Expr::var).collect() };
        Self { params, map }
    }

    /// The unit square placed in the `z = 0` plane of `R^3`.
    pub fn unit_square_3d() -> Self {
        let params = Self::default_params(2);
        Self { map: vec![Expr::var("u"), Expr::var("v"), Expr::Num(0.0)], params }
    }

    /// A point of `R^m` as a 0-cube.
    pub fn point(coords: &[f64]) -> Self {
        Self { params: Vec::new(), map: coords.iter().map(|&c| Expr::Num(c)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.params.len()
    }

    pub fn ambient(&self) -> usize {
        self.map.len()
    }

    /// `M(t)`.
    pub fn eval(&self, t: &[f64]) -> Result<Vec<f64>> {
        self.check_params(t)?;
        let mut env = Env::<f64>::new(());
        for (p, &v) in self.params.iter().zip(t) {
            env.insert(p.as_str(), v);
        }
        self.map.iter().map(|e| env.evaluate(e)).collect()
    }

    /// The germ `d -> M(t + d)` over `D^n`.
    pub fn jet(&self, t: &[f64]) -> Result<Germ> {
        self.check_params(t)?;
        let n = self.dim();
        let mut env = Env::<MultiDual>::new(n);
        for (i, (p, &v)) in self.params.iter().zip(t).enumerate() {
            env.insert(p.as_str(), MultiDual::variable(v, &unit(n, i))?);
        }
        Germ::new(self.map.iter().map(|e| env.evaluate(e)).collect::<Result<Vec<_>>>()?)
    }

    fn check_params(&self, t: &[f64]) -> Result<()> {
        if t.len() != self.dim() {
            return Err(Error::dim(format!("cube of dimension {} evaluated at {} parameters", self.dim(), t.len())));
        }
        Ok(())
    }
}

fn unit(n: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[i] = 1.0;
    v
}

impl Boundary for FiniteCube {
    fn dim(&self) -> usize {
        self.params.len()
    }

    fn face(&self, i: usize, far: bool) -> Result<Self> {
        if i >= self.params.len() {
            return Err(Error::dim(format!("face index {i} out of range")));
        }
        let mut params = self.params.clone();
        let name = params.remove(i);
        let value = Expr::Num(if far { 1.0 } else { 0.0 });
        Ok(Self { params, map: self.map.iter().map(|e| e.substitute(&name, &value)).collect() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::Chain;

    fn sample_germ() -> Germ {
        // f(d1, d2) = (1 + 2 d1 + 3 d1 d2, 4 d2)
        let a = MultiDual::from_coeffs(2, vec![1.0, 2.0, 0.0, 3.0]).unwrap();
        let b = MultiDual::from_coeffs(2, vec![0.0, 0.0, 4.0, 0.0]).unwrap();
        Germ::new(vec![a, b]).unwrap()
    }

    #[test]
    fn one_cube_boundary_is_endpoint_difference() {
        let g = Germ::affine(&[0.5], &[vec![2.0]]).unwrap();
        let cube = InfinitesimalCube::new(vec![0.25], g).unwrap();
        let b = cube.boundary().unwrap();
        assert_eq!(b.len(), 2);
        let (s0, near) = &b.terms()[0];
        let (s1, far) = &b.terms()[1];
        assert_eq!((*s0, *s1), (-1.0, 1.0));
        // g(0) = 0.5 ; g(d) = 0.5 + 2 * 0.25 e
        assert_eq!(near.point()[0].coeffs(), &[0.5, 0.0]);
        assert_eq!(far.point()[0].coeffs(), &[0.5, 0.5]);
    }

    #[test]
    fn two_cube_faces_match_signed_formula() {
        let cube = InfinitesimalCube::new(vec![1.0, 1.0], sample_germ()).unwrap();
        let b = cube.boundary().unwrap();
        let signs: Vec<f64> = b.terms().iter().map(|t| t.0).collect();
        // faces in order: f(0, .), f(d1, .), f(., 0), f(., d2)
        assert_eq!(signs, vec![-1.0, 1.0, 1.0, -1.0]);
        let faces: Vec<_> = b.terms().iter().map(|t| &t.1).collect();
        assert_eq!(faces[0].germ.coords(), &[1]);
        assert_eq!(faces[2].germ.coords(), &[0]);
        // f(d1, .) has first component 1 + 2 d1 + 3 d1 d2
        let j = faces[1].germ.one_jet().unwrap();
        assert_eq!(j.base[0].coeffs(), &[1.0, 2.0]);
        assert_eq!(j.partials[0][0].coeffs(), &[0.0, 3.0]);
        assert_eq!(j.partials[0][1].coeffs(), &[4.0, 0.0]);
        // f(., d2)
        let j = faces[3].germ.one_jet().unwrap();
        assert_eq!(j.partials[0][0].coeffs(), &[2.0, 3.0]);
    }

    #[test]
    fn boundary_twice_vanishes_on_three_cube() {
        let comps = (0..3)
            .map(|k| {
                let coeffs = (0..8).map(|s| (s * 7 + k * 3) as f64 * 0.37 - 1.0).collect();
                MultiDual::from_coeffs(3, coeffs).unwrap()
            })
            .collect();
        let cube = InfinitesimalCube::new(vec![0.3, 1.7, -2.0], Germ::new(comps).unwrap()).unwrap();
        let once = Chain::single(cube).boundary().unwrap();
        assert_eq!(once.len(), 6);
        assert!(once.boundary().unwrap().is_empty());
    }

    #[test]
    fn finite_boundaries() {
        let sq = FiniteCube::identity(2);
        let b = sq.boundary().unwrap();
        let faces: Vec<(f64, Vec<f64>)> = b.terms().iter().map(|(s, c)| (*s, c.eval(&[0.25]).unwrap())).collect();
        assert_eq!(
            faces,
            vec![(-1.0, vec![0.0, 0.25]), (1.0, vec![1.0, 0.25]), (1.0, vec![0.25, 0.0]), (-1.0, vec![0.25, 1.0]),]
        );
        let seg = FiniteCube::identity(1);
        let b = seg.boundary().unwrap();
        assert_eq!(b.terms()[0], (-1.0, FiniteCube::point(&[0.0])));
        assert_eq!(b.terms()[1], (1.0, FiniteCube::point(&[1.0])));
        assert!(Chain::single(FiniteCube::identity(3)).boundary().unwrap().boundary().unwrap().is_empty());
        assert!(FiniteCube::point(&[1.0]).boundary().is_err());
    }

    #[test]
    fn jets_of_finite_cubes() {
        let c = FiniteCube::new(
            vec!["u".into(), "v".into()],
            vec![crate::parse("u*v").unwrap(), crate::parse("u^2").unwrap()],
        )
        .unwrap();
        let g = c.jet(&[2.0, 3.0]).unwrap();
        let j = g.one_jet().unwrap();
        assert_eq!(j.base[0].standard_part(), 6.0);
        assert_eq!(j.partials[0][0].standard_part(), 3.0);
        assert_eq!(j.partials[1][0].standard_part(), 2.0);
        assert_eq!(j.partials[0][1].standard_part(), 4.0);
        assert_eq!(g.components()[0].coeff_mask(0b11), 1.0);
    }

    #[test]
    fn permutations() {
        assert_eq!(permutation_sign(&[0, 1, 2]), 1.0);
        assert_eq!(permutation_sign(&[1, 0, 2]), -1.0);
        assert_eq!(permutation_sign(&[1, 2, 0]), 1.0);
        assert!(sample_germ().permute_coordinates(&[0, 0]).is_err());
        let p = sample_germ().permute_coordinates(&[1, 0]).unwrap();
        assert_eq!(p.coords(), &[1, 0]);
    }
}
