use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::primitive::{pow_derivatives, Primitive};
use crate::error::{Error, Result};

/// Maximum number of square-zero generators a [`MultiDual`] may carry.
pub const MAX_GENERATORS: usize = 8;

/// Default absolute tolerance for [`MultiDual::microcancel`].
pub const DEFAULT_IMPURITY_TOL: f64 = 1e-9;

/// An element of the truncated algebra `R[e_0, ..., e_{n-1}] / (e_i^2)`.
///
/// Coefficients are stored densely, indexed by bitmask: bit `i` of the index marks the
/// presence of generator `e_i` in the monomial. Index 0 is the standard part. Since a
/// subset cannot contain a generator twice, `e_i^2 = 0` holds by construction.
///
/// Generators are numbered from 0 in this API.
#[derive(Clone, PartialEq)]
pub struct MultiDual {
    n: usize,
    coeffs: Vec<f64>,
}

impl MultiDual {
    /// The zero element with `n` generators.
    pub fn zero(n: usize) -> Result<Self> {
        Self::constant(n, 0.0)
    }

    pub fn constant(n: usize, value: f64) -> Result<Self> {
        check_generators(n)?;
        let mut coeffs = vec![0.0; 1 << n];
        coeffs[0] = value;
        Ok(Self { n, coeffs })
    }

    /// The generator `e_i` itself.
    pub fn generator(n: usize, i: usize) -> Result<Self> {
        Self::monomial(n, &[i], 1.0)
    }

    /// `value * prod_{i in subset} e_i`. A repeated index yields zero.
    pub fn monomial(n: usize, subset: &[usize], value: f64) -> Result<Self> {
        let mut out = Self::zero(n)?;
        if let Some(mask) = out.mask_of(subset)? {
            out.coeffs[mask] = value;
        }
        Ok(out)
    }

    /// `value + sum_i slopes[i] * e_i`, with one generator per slope.
    pub fn variable(value: f64, slopes: &[f64]) -> Result<Self> {
        let mut out = Self::constant(slopes.len(), value)?;
        for (i, &s) in slopes.iter().enumerate() {
            out.coeffs[1 << i] = s;
        }
        Ok(out)
    }

    /// Builds an element from a dense coefficient vector of length `2^n`.
    pub fn from_coeffs(n: usize, coeffs: Vec<f64>) -> Result<Self> {
        check_generators(n)?;
        if coeffs.len() != 1 << n {
            return Err(Error::dim(format!(
                "{} coefficients given for {n} generators (need {})",
                coeffs.len(),
                1usize << n
            )));
        }
        Ok(Self { n, coeffs })
    }

    pub fn n_generators(&self) -> usize {
        self.n
    }

    /// Dense coefficients, indexed by generator bitmask.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn standard_part(&self) -> f64 {
        self.coeffs[0]
    }

    /// True when every nilpotent coefficient is zero.
    pub fn is_standard(&self) -> bool {
        self.coeffs[1..].iter().all(|&c| c == 0.0)
    }

    pub fn is_invertible(&self) -> bool {
        self.coeffs[0] != 0.0
    }

    /// Coefficient of `prod_{i in subset} e_i`; zero if the subset repeats an index.
    pub fn coefficient(&self, subset: &[usize]) -> Result<f64> {
        Ok(match self.mask_of(subset)? {
            Some(mask) => self.coeffs[mask],
            None => 0.0,
        })
    }

    /// Coefficient by bitmask.
    pub fn coeff_mask(&self, mask: usize) -> f64 {
        self.coeffs.get(mask).copied().unwrap_or(0.0)
    }

    pub(crate) fn set_mask(&mut self, mask: usize, value: f64) {
        self.coeffs[mask] = value;
    }

    /// Coefficient of the product of all generators.
    pub fn top_coefficient(&self) -> f64 {
        self.coeffs[self.coeffs.len() - 1]
    }

    fn mask_of(&self, subset: &[usize]) -> Result<Option<usize>> {
        let mut mask = 0usize;
        let mut repeated = false;
        for &i in subset {
            if i >= self.n {
                return Err(Error::dim(format!("generator index {i} out of range for {} generators", self.n)));
            }
            if mask & (1 << i) != 0 {
                repeated = true;
            }
            mask |= 1 << i;
        }
        Ok(if repeated { None } else { Some(mask) })
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::dim(format!("generator counts differ: {} vs {}", self.n, other.n)));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Self { n: self.n, coeffs })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(Self { n: self.n, coeffs })
    }

    /// Truncated product: the terms indexed by `S` and `T` meet only when `S ∩ T = ∅`.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let full = self.coeffs.len() - 1;
        let mut out = vec![0.0; self.coeffs.len()];
        for (s, &a) in self.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            let comp = full & !s;
            let mut t = comp;
            loop {
                let b = other.coeffs[t];
                if b != 0.0 {
                    out[s | t] += a * b;
                }
                if t == 0 {
                    break;
                }
                t = (t - 1) & comp;
            }
        }
        Ok(Self { n: self.n, coeffs: out })
    }

    pub fn scale(&self, k: f64) -> Self {
        Self { n: self.n, coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    pub fn negate(&self) -> Self {
        self.scale(-1.0)
    }

    /// Copy of `self` with the standard part removed.
    pub fn nilpotent_part(&self) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = 0.0;
        out
    }

    /// Multiplicative inverse by the finite geometric series
    /// `(a0 (1 + u))^-1 = a0^-1 sum_{j <= n} (-u)^j`.
    pub fn invert(&self) -> Result<Self> {
        let a0 = self.coeffs[0];
        if a0 == 0.0 {
            return Err(Error::NotInvertible);
        }
        let u = self.nilpotent_part().scale(-1.0 / a0);
        let mut sum = Self::constant(self.n, 1.0)?;
        let mut power = sum.clone();
        for _ in 0..self.n {
            power = power.try_mul(&u)?;
            sum = sum.try_add(&power)?;
        }
        Ok(sum.scale(1.0 / a0))
    }

    /// Square root with positive standard part; `self` must have standard part > 0.
    pub fn sqrt(&self) -> Result<Self> {
        if self.coeffs[0] <= 0.0 {
            return Err(Error::domain(format!("sqrt needs a positive standard part, got {}", self.coeffs[0])));
        }
        self.compose(&pow_derivatives(self.coeffs[0], 0.5, self.taylor_order())?)
    }

    /// Lifts a smooth primitive: `f(x0 + u) = sum_j f^(j)(x0) u^j / j!`.
    pub fn lift(&self, p: Primitive) -> Result<Self> {
        if p == Primitive::Sqrt {
            return self.sqrt();
        }
        self.compose(&p.derivatives(self.coeffs[0], self.taylor_order())?)
    }

    /// `self^p` for a real exponent, through the derivative table of `x^p`.
    pub fn powf(&self, p: f64) -> Result<Self> {
        self.compose(&pow_derivatives(self.coeffs[0], p, self.taylor_order())?)
    }

    /// Integer power by repeated multiplication; negative powers invert first.
    pub fn powi(&self, k: i32) -> Result<Self> {
        let base = if k < 0 { self.invert()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::constant(self.n, 1.0)?;
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.try_mul(&sq)?;
            }
        }
        Ok(acc)
    }

    // Highest power of the nilpotent part that can be nonzero.
    fn taylor_order(&self) -> usize {
        if self.is_standard() {
            0
        } else {
            self.n
        }
    }

    /// Evaluates `sum_j derivs[j] / j! * u^j` by Horner's rule with `u` the nilpotent part.
    fn compose(&self, derivs: &[f64]) -> Result<Self> {
        let u = self.nilpotent_part();
        let mut factorial = vec![1.0; derivs.len()];
        for j in 1..derivs.len() {
            factorial[j] = factorial[j - 1] * j as f64;
        }
        let last = derivs.len() - 1;
        let mut acc = Self::constant(self.n, derivs[last] / factorial[last])?;
        for j in (0..last).rev() {
            acc = acc.try_mul(&u)?;
            acc.coeffs[0] += derivs[j] / factorial[j];
        }
        Ok(acc)
    }

    /// Extracts the coefficient of `e_0 ... e_{n-1}` from an element that should be a
    /// pure multiple of it. Any other coefficient above `tol` in magnitude is reported
    /// as an impure infinitesimal.
    pub fn microcancel(&self, tol: f64) -> Result<f64> {
        let top = self.coeffs.len() - 1;
        for (mask, &c) in self.coeffs.iter().enumerate().take(top) {
            if c.abs() > tol || c.is_nan() {
                return Err(Error::ImpureInfinitesimal { subset: mask_to_subset(mask), value: c, tol });
            }
        }
        Ok(self.coeffs[top])
    }

    /// Re-embeds `self` into an algebra with `n_new >= n` generators; the extra
    /// generators are appended after the existing ones.
    pub fn embed(&self, n_new: usize) -> Result<Self> {
        if n_new < self.n {
            return Err(Error::dim(format!("cannot embed {} generators into {n_new}", self.n)));
        }
        let mut out = Self::zero(n_new)?;
        out.coeffs[..self.coeffs.len()].copy_from_slice(&self.coeffs);
        Ok(out)
    }

    /// Splits off the generators in `mask`: returns the coefficient of
    /// `prod_{i in mask} e_i` as an element of the algebra on the remaining low
    /// generators. `mask` must cover exactly the top generators `keep..n`.
    pub(crate) fn extract_top(&self, keep: usize) -> Result<Self> {
        if keep > self.n {
            return Err(Error::dim("extract_top: keep exceeds generator count"));
        }
        let high = ((1usize << self.n) - 1) & !((1usize << keep) - 1);
        let coeffs = (0..1usize << keep).map(|s| self.coeffs[s | high]).collect();
        Self::from_coeffs(keep, coeffs)
    }
}

/// Expands a bitmask into the ascending list of generator indices it contains.
pub fn mask_to_subset(mask: usize) -> Vec<usize> {
    (0..usize::BITS as usize).filter(|i| mask & (1 << i) != 0).collect()
}

fn check_generators(n: usize) -> Result<()> {
    if n > MAX_GENERATORS {
        return Err(Error::dim(format!("{n} generators requested, at most {MAX_GENERATORS} supported")));
    }
    Ok(())
}

impl fmt::Debug for MultiDual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiDual<{}>({self})", self.n)
    }
}

impl fmt::Display for MultiDual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coeffs[0])?;
        for (mask, &c) in self.coeffs.iter().enumerate().skip(1) {
            if c == 0.0 {
                continue;
            }
            let sign = if c < 0.0 { '-' } else { '+' };
            write!(f, " {sign} {}", c.abs())?;
            for i in mask_to_subset(mask) {
                write!(f, "·e{}", i + 1)?;
            }
        }
        Ok(())
    }
}

// Operator forms panic on mismatched generator counts; use the `try_*` methods when
// the shapes are not known to agree.
macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr<&MultiDual> for &MultiDual {
            type Output = MultiDual;
            fn $m(self, rhs: &MultiDual) -> MultiDual {
                self.$f(rhs).expect("generator counts must agree")
            }
        }
        impl $tr for MultiDual {
            type Output = MultiDual;
            fn $m(self, rhs: MultiDual) -> MultiDual {
                (&self).$f(&rhs).expect("generator counts must agree")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Mul<f64> for &MultiDual {
    type Output = MultiDual;
    fn mul(self, k: f64) -> MultiDual {
        self.scale(k)
    }
}

impl Neg for &MultiDual {
    type Output = MultiDual;
    fn neg(self) -> MultiDual {
        self.negate()
    }
}

impl Neg for MultiDual {
    type Output = MultiDual;
    fn neg(self) -> MultiDual {
        self.negate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn md(n: usize, terms: &[(&[usize], f64)]) -> MultiDual {
        let mut out = MultiDual::zero(n).unwrap();
        for (s, v) in terms {
            out = out + MultiDual::monomial(n, s, *v).unwrap();
        }
        out
    }

    fn assert_close(a: &MultiDual, b: &MultiDual, tol: f64) {
        assert_eq!(a.n_generators(), b.n_generators());
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            assert!((x - y).abs() <= tol, "{a} vs {b}");
        }
    }

    #[test]
    fn square_of_one_plus_e1() {
        let a = md(1, &[(&[], 1.0), (&[0], 1.0)]);
        assert_eq!(&a * &a, md(1, &[(&[], 1.0), (&[0], 2.0)]));
    }

    #[test]
    fn distinct_generators_survive() {
        let e1 = MultiDual::generator(2, 0).unwrap();
        let e2 = MultiDual::generator(2, 1).unwrap();
        assert_eq!(&e1 * &e2, md(2, &[(&[0, 1], 1.0)]));
        assert_eq!((&e1 * &e1).coeffs(), &[0.0; 4]);
    }

    #[test]
    fn hand_expanded_product() {
        // (2 + 3e1 + e2)(1 + e1) = 2 + 2e1 + 3e1 + e2 + e1e2
        let a = md(2, &[(&[], 2.0), (&[0], 3.0), (&[1], 1.0)]);
        let b = md(2, &[(&[], 1.0), (&[0], 1.0)]);
        let expect = md(2, &[(&[], 2.0), (&[0], 5.0), (&[1], 1.0), (&[0, 1], 1.0)]);
        assert_eq!(&a * &b, expect);
    }

    #[test]
    fn mismatched_generators() {
        let a = MultiDual::constant(1, 1.0).unwrap();
        let b = MultiDual::constant(2, 1.0).unwrap();
        assert!(matches!(a.try_mul(&b), Err(Error::Dimension(_))));
        assert!(matches!(a.try_add(&b), Err(Error::Dimension(_))));
    }

    #[test]
    fn generator_cap() {
        assert!(MultiDual::zero(8).is_ok());
        assert!(matches!(MultiDual::zero(9), Err(Error::Dimension(_))));
    }

    #[test]
    fn inverses() {
        assert_eq!(MultiDual::constant(0, 2.0).unwrap().invert().unwrap().standard_part(), 0.5);
        let a = md(1, &[(&[], 1.0), (&[0], 1.0)]);
        assert_eq!(a.invert().unwrap(), md(1, &[(&[], 1.0), (&[0], -1.0)]));
        let a = md(2, &[(&[], 2.0), (&[0], 1.0), (&[1], 1.0)]);
        let inv = a.invert().unwrap();
        assert_close(&inv, &md(2, &[(&[], 0.5), (&[0], -0.25), (&[1], -0.25), (&[0, 1], 0.25)]), 1e-15);
        assert_close(&(&a * &inv), &MultiDual::constant(2, 1.0).unwrap(), 1e-15);
        assert_eq!(MultiDual::generator(1, 0).unwrap().invert(), Err(Error::NotInvertible));
    }

    #[test]
    fn square_roots() {
        assert_eq!(MultiDual::constant(1, 4.0).unwrap().sqrt().unwrap().standard_part(), 2.0);
        let a = md(1, &[(&[], 1.0), (&[0], 1.0)]);
        assert_close(&a.sqrt().unwrap(), &md(1, &[(&[], 1.0), (&[0], 0.5)]), 1e-15);
        let a = md(2, &[(&[], 4.0), (&[0], 1.0), (&[1], 1.0)]);
        let r = a.sqrt().unwrap();
        assert_close(&r, &md(2, &[(&[], 2.0), (&[0], 0.25), (&[1], 0.25), (&[0, 1], -1.0 / 32.0)]), 1e-15);
        assert_close(&(&r * &r), &a, 1e-15);
        assert!(matches!(MultiDual::constant(1, 0.0).unwrap().sqrt(), Err(Error::Domain(_))));
        assert!(md(1, &[(&[], -1.0)]).sqrt().is_err());
    }

    #[test]
    fn lifted_primitives() {
        let e1 = MultiDual::generator(1, 0).unwrap();
        assert_close(&e1.lift(Primitive::Exp).unwrap(), &md(1, &[(&[], 1.0), (&[0], 1.0)]), 1e-15);
        let u = md(2, &[(&[0], 1.0), (&[1], 1.0)]);
        assert_close(&u.lift(Primitive::Cos).unwrap(), &md(2, &[(&[], 1.0), (&[0, 1], -1.0)]), 1e-15);
        assert_close(&u.lift(Primitive::Sin).unwrap(), &md(2, &[(&[0], 1.0), (&[1], 1.0)]), 1e-15);
        let zero = MultiDual::zero(1).unwrap();
        assert!(matches!(zero.lift(Primitive::Log), Err(Error::Domain(_))));
    }

    #[test]
    fn coefficients() {
        let a = md(1, &[(&[], 1.0), (&[0], 2.0)]);
        assert_eq!(a.coefficient(&[0]).unwrap(), 2.0);
        assert_eq!(a.coefficient(&[]).unwrap(), 1.0);
        let b = md(2, &[(&[0, 1], 1.0)]);
        assert_eq!(b.coefficient(&[0]).unwrap(), 0.0);
        assert_eq!(b.coefficient(&[1, 0]).unwrap(), 1.0);
        assert_eq!(b.coefficient(&[0, 0]).unwrap(), 0.0);
        assert!(matches!(b.coefficient(&[2]), Err(Error::Dimension(_))));
    }

    #[test]
    fn microcancellation() {
        assert_eq!(md(1, &[(&[0], 6.0)]).microcancel(1e-9).unwrap(), 6.0);
        assert_eq!(MultiDual::zero(1).unwrap().microcancel(1e-9).unwrap(), 0.0);
        let err = md(1, &[(&[], 3.0), (&[0], 6.0)]).microcancel(1e-9).unwrap_err();
        assert!(matches!(err, Error::ImpureInfinitesimal { ref subset, .. } if subset.is_empty()));
    }

    #[test]
    fn powers() {
        let a = md(1, &[(&[], 3.0), (&[0], 1.0)]);
        assert_eq!(a.powi(2).unwrap(), md(1, &[(&[], 9.0), (&[0], 6.0)]));
        assert_close(&a.powi(-1).unwrap(), &a.invert().unwrap(), 1e-16);
        assert_close(&a.powf(2.0).unwrap(), &a.powi(2).unwrap(), 1e-14);
        assert_eq!(a.powi(0).unwrap(), MultiDual::constant(1, 1.0).unwrap());
    }

    #[test]
    fn embed_and_extract() {
        let a = md(1, &[(&[], 1.0), (&[0], 2.0)]);
        let b = a.embed(3).unwrap();
        assert_eq!(b.coefficient(&[0]).unwrap(), 2.0);
        let c = md(3, &[(&[2], 5.0), (&[0, 2], 7.0), (&[1], 1.0)]);
        let top = c.extract_top(2).unwrap();
        assert_eq!(top, md(2, &[(&[], 5.0), (&[0], 7.0)]));
    }
}
