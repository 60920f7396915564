//! Adaptive panel-subdivision Gauss-Legendre quadrature.
//!
//! Each panel is integrated with an `n`-point Gauss-Legendre rule; the panel error is
//! estimated against the `(n-1)/2`-point rule on the same panel. The panel with the
//! largest estimate is bisected until the summed estimate meets the tolerance. Panel
//! values are summed in left-to-right order so results do not depend on the order
//! in which panels were refined.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::expr::{Env, Expr};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Gauss nodes per panel; odd and at least 3.
    pub nodes: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 1e-12, max_subdivisions: 1 << 20, nodes: 15 }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::InvalidArgument("quadrature tolerances must be positive".into()));
        }
        if self.nodes < 3 || self.nodes.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "quadrature node count must be odd and >= 3, got {}",
                self.nodes
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidArgument("max_subdivisions must be positive".into()));
        }
        Ok(())
    }

    /// Same configuration with both tolerances scaled by `factor`.
    pub fn tightened(&self, factor: f64) -> Self {
        Self { rel_tol: self.rel_tol * factor, abs_tol: self.abs_tol * factor, ..*self }
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    /// Nodes are the roots of `P_n`, found by Newton's method from the Chebyshev-like
    /// initial guesses `cos(pi (i + 3/4) / (n + 1/2))`.
    pub fn legendre(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_eval(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_eval(n, x);
            if d.is_finite() {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Applies the rule on `[a, b]`.
    pub fn integrate<F>(&self, f: &mut F, a: f64, b: f64) -> Result<f64>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut sum = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let v = f(mid + half * x)?;
            if !v.is_finite() {
                return Err(Error::domain(format!("integrand not finite at {}", mid + half * x)));
            }
            sum += w * v;
        }
        Ok(sum * half)
    }
}

fn legendre_eval(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let prev = if n == 0 { 0.0 } else { p0 };
    let d = n as f64 * (x * p - prev) / (x * x - 1.0);
    (p, d)
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err).then_with(|| other.a.total_cmp(&self.a))
    }
}

/// An adaptive integrator with its Gauss rules precomputed.
#[derive(Debug, Clone)]
pub struct Integrator {
    cfg: QuadratureConfig,
    fine: GaussRule,
    coarse: GaussRule,
}

impl Integrator {
    pub fn new(cfg: QuadratureConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self { cfg, fine: GaussRule::legendre(cfg.nodes), coarse: GaussRule::legendre((cfg.nodes - 1) / 2) })
    }

    pub fn config(&self) -> &QuadratureConfig {
        &self.cfg
    }

    fn panel<F>(&self, f: &mut F, a: f64, b: f64) -> Result<Panel>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let value = self.fine.integrate(f, a, b)?;
        let rough = self.coarse.integrate(f, a, b)?;
        Ok(Panel { a, b, value, err: (value - rough).abs() })
    }

    /// `int_a^b f`, oriented: swapping the limits flips the sign.
    pub fn integrate<F>(&self, mut f: F, a: f64, b: f64) -> Result<f64>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidArgument("integration limits must be finite".into()));
        }
        if a == b {
            return Ok(0.0);
        }
        if a > b {
            return Ok(-self.integrate(f, b, a)?);
        }
        let first = self.panel(&mut f, a, b)?;
        let mut total = first.value;
        let mut total_err = first.err;
        let mut heap = BinaryHeap::new();
        let mut settled = Vec::new();
        heap.push(first);
        let mut splits = 0usize;
        while total_err > self.cfg.abs_tol.max(self.cfg.rel_tol * total.abs()) {
            let Some(worst) = heap.pop() else { break };
            let mid = 0.5 * (worst.a + worst.b);
            // Panels too narrow to bisect meaningfully are accepted as they are.
            if mid <= worst.a
                || mid >= worst.b
                || (worst.b - worst.a) <= 1e-13 * worst.b.abs().max(worst.a.abs()).max(1.0)
            {
                total_err -= worst.err;
                settled.push(worst);
                continue;
            }
            if splits >= self.cfg.max_subdivisions {
                return Err(Error::NonConvergence(format!(
                    "quadrature on [{a}, {b}] hit {} subdivisions (error estimate {total_err:e})",
                    self.cfg.max_subdivisions
                )));
            }
            splits += 1;
            let left = self.panel(&mut f, worst.a, mid)?;
            let right = self.panel(&mut f, mid, worst.b)?;
            total += left.value + right.value - worst.value;
            total_err += left.err + right.err - worst.err;
            heap.push(left);
            heap.push(right);
        }
        settled.extend(heap);
        settled.sort_by(|p, q| p.a.total_cmp(&q.a));
        Ok(settled.iter().map(|p| p.value).sum())
    }
}

/// Integrates a closure over `[a, b]` with the given configuration.
pub fn integrate_fn<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    Integrator::new(*cfg)?.integrate(f, a, b)
}

/// `int_a^b f(var) d var` for an expression in one free variable.
pub fn integrate(f: &Expr, var: &str, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let mut env = Env::<f64>::new(());
    integrate_fn(
        |t| {
            env.insert(var, t);
            env.evaluate(f)
        },
        a,
        b,
        cfg,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        for n in [1, 3, 7, 12, 15] {
            let rule = GaussRule::legendre(n);
            let wsum: f64 = rule.weights.iter().sum();
            assert!((wsum - 2.0).abs() < 1e-14, "n = {n}");
            let deg = 2 * n - 1;
            let v = rule.integrate(&mut |x| Ok(x.powi(deg as i32 - 1)), 0.0, 1.0).unwrap();
            assert!((v - 1.0 / deg as f64).abs() < 1e-14, "n = {n}");
        }
    }

    #[test]
    fn basic_integrals() {
        let cfg = QuadratureConfig::default();
        let v = integrate(&parse("x^2").unwrap(), "x", 0.0, 1.0, &cfg).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-14);
        let v = integrate(&parse("sin(t)").unwrap(), "t", 0.0, std::f64::consts::PI, &cfg).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn orientation() {
        let cfg = QuadratureConfig::default();
        let f = parse("exp(x)").unwrap();
        let ab = integrate(&f, "x", 0.0, 2.0, &cfg).unwrap();
        let ba = integrate(&f, "x", 2.0, 0.0, &cfg).unwrap();
        assert_eq!(ab, -ba);
        assert_eq!(integrate(&f, "x", 1.0, 1.0, &cfg).unwrap(), 0.0);
    }

    #[test]
    fn config_validation() {
        let bad = QuadratureConfig { nodes: 4, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = QuadratureConfig { rel_tol: 0.0, ..Default::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn subdivision_limit() {
        let cfg = QuadratureConfig { max_subdivisions: 3, nodes: 3, ..Default::default() };
        let r = integrate(&parse("sin(50*x)").unwrap(), "x", 0.0, 10.0, &cfg);
        assert!(matches!(r, Err(Error::NonConvergence(_))));
    }

    #[test]
    fn domain_errors_propagate() {
        let cfg = QuadratureConfig::default();
        let r = integrate(&parse("log(x)").unwrap(), "x", -1.0, 1.0, &cfg);
        assert!(matches!(r, Err(Error::Domain(_))));
    }
}
