use crate::error::Result;

/// A formal real-linear combination of cubes.
///
/// Two terms are merged by [`Chain::normalize`] only when their cubes compare equal
/// structurally; cubes that describe the same map in different ways stay separate.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain<C> {
    terms: Vec<(f64, C)>,
}

impl<C> Default for Chain<C> {
    fn default() -> Self {
        Self { terms: Vec::new() }
    }
}

impl<C: Clone + PartialEq> Chain<C> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(cube: C) -> Self {
        Self { terms: vec![(1.0, cube)] }
    }

    pub fn push(&mut self, coefficient: f64, cube: C) {
        self.terms.push((coefficient, cube));
    }

    pub fn terms(&self) -> &[(f64, C)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self { terms: self.terms.iter().map(|(c, q)| (c * k, q.clone())).collect() }
    }

    pub fn extend(&mut self, other: Chain<C>) {
        self.terms.extend(other.terms);
    }

    /// Merges equal cubes (keeping first-occurrence order) and drops zero terms.
    pub fn normalize(&self) -> Self {
        let mut out: Vec<(f64, C)> = Vec::new();
        for (c, cube) in &self.terms {
            match out.iter_mut().find(|(_, q)| q == cube) {
                Some(slot) => slot.0 += c,
                None => out.push((*c, cube.clone())),
            }
        }
        out.retain(|(c, _)| *c != 0.0);
        Self { terms: out }
    }

    /// Applies a linear functional term by term.
    pub fn integrate<F>(&self, mut f: F) -> Result<f64>
    where
        F: FnMut(&C) -> Result<f64>,
    {
        let mut total = 0.0;
        for (c, cube) in &self.terms {
            total += c * f(cube)?;
        }
        Ok(total)
    }
}

/// Cubes with a signed boundary `sum_i sum_alpha (-1)^(i + alpha) face(i, alpha)`,
/// with faces counted from 1.
pub trait Boundary: Sized + Clone + PartialEq {
    fn dim(&self) -> usize;

    /// The face with coordinate `i` (0-based) pinned to its near (`far = false`) or far end.
    fn face(&self, i: usize, far: bool) -> Result<Self>;

    fn boundary(&self) -> Result<Chain<Self>> {
        let n = self.dim();
        if n == 0 {
            return Err(crate::Error::dim("a 0-cube has no boundary"));
        }
        let mut chain = Chain::new();
        for i in 0..n {
            for far in [false, true] {
                // (-1)^(i + alpha) with i counted from 1
                let sign = if (i + 1 + usize::from(far)) % 2 == 0 { 1.0 } else { -1.0 };
                chain.push(sign, self.face(i, far)?);
            }
        }
        Ok(chain)
    }
}

impl<C: Boundary> Chain<C> {
    /// Boundary of a chain, normalized. Points have zero boundary at the chain
    /// level, so a chain of 0-cubes maps to the empty chain.
    pub fn boundary(&self) -> Result<Self> {
        let mut out = Chain::new();
        for (c, cube) in &self.terms {
            if cube.dim() == 0 {
                continue;
            }
            out.extend(cube.boundary()?.scaled(*c));
        }
        Ok(out.normalize())
    }
}
