//! Smooth primitives and their closed-form derivative tables.
//!
//! Lifting a primitive to a nilpotent argument `x0 + u` uses the finite Taylor sum
//! `f(x0 + u) = sum_j f^(j)(x0) u^j / j!`, which is exact because `u^(n+1) = 0` in an
//! algebra with `n` generators. Every table here supports orders up to
//! [`MAX_DERIVATIVE_ORDER`].

use std::fmt;

use crate::error::{Error, Result};

/// Highest derivative order any table is asked for (matches the generator cap).
pub const MAX_DERIVATIVE_ORDER: usize = 8;

/// The one-argument C-infinity functions the expression language can call.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Primitive {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sinh,
    Cosh,
    Tanh,
    Sqrt,
}

impl Primitive {
    pub const ALL: [Primitive; 9] = [
        Primitive::Sin,
        Primitive::Cos,
        Primitive::Tan,
        Primitive::Exp,
        Primitive::Log,
        Primitive::Sinh,
        Primitive::Cosh,
        Primitive::Tanh,
        Primitive::Sqrt,
    ];

    /// Looks up a primitive by the name used in expressions. `ln` is accepted for `log`.
    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => Primitive::Sin,
            "cos" => Primitive::Cos,
            "tan" => Primitive::Tan,
            "exp" => Primitive::Exp,
            "log" | "ln" => Primitive::Log,
            "sinh" => Primitive::Sinh,
            "cosh" => Primitive::Cosh,
            "tanh" => Primitive::Tanh,
            "sqrt" => Primitive::Sqrt,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Primitive::Sin => "sin",
            Primitive::Cos => "cos",
            Primitive::Tan => "tan",
            Primitive::Exp => "exp",
            Primitive::Log => "log",
            Primitive::Sinh => "sinh",
            Primitive::Cosh => "cosh",
            Primitive::Tanh => "tanh",
            Primitive::Sqrt => "sqrt",
        }
    }

    /// Returns `[f(x), f'(x), ..., f^(order)(x)]`.
    pub fn derivatives(self, x: f64, order: usize) -> Result<Vec<f64>> {
        check_order(order)?;
        let out: Vec<f64> = match self {
            Primitive::Sin => {
                let (s, c) = x.sin_cos();
                (0..=order).map(|j| [s, c, -s, -c][j % 4]).collect()
            }
            Primitive::Cos => {
                let (s, c) = x.sin_cos();
                (0..=order).map(|j| [c, -s, -c, s][j % 4]).collect()
            }
            Primitive::Exp => vec![x.exp(); order + 1],
            Primitive::Sinh => {
                let (s, c) = (x.sinh(), x.cosh());
                (0..=order).map(|j| if j % 2 == 0 { s } else { c }).collect()
            }
            Primitive::Cosh => {
                let (s, c) = (x.sinh(), x.cosh());
                (0..=order).map(|j| if j % 2 == 0 { c } else { s }).collect()
            }
            Primitive::Log => {
                if x <= 0.0 {
                    return Err(Error::domain(format!("log of non-positive value {x}")));
                }
                let mut out = vec![x.ln()];
                let mut fact = 1.0;
                for j in 1..=order {
                    if j > 1 {
                        fact *= (j - 1) as f64;
                    }
                    let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
                    out.push(sign * fact / x.powi(j as i32));
                }
                out
            }
            Primitive::Tan => {
                let c = x.cos();
                if c.abs() < 1e-300 {
                    return Err(Error::domain(format!("tan undefined at {x}")));
                }
                tangent_like(x.tan(), order, 1.0)
            }
            Primitive::Tanh => tangent_like(x.tanh(), order, -1.0),
            Primitive::Sqrt => {
                if x < 0.0 || (x == 0.0 && order > 0) {
                    return Err(Error::domain(format!("sqrt needs a positive argument, got {x}")));
                }
                return pow_derivatives(x, 0.5, order);
            }
        };
        finite(out, self.name(), x)
    }
}

impl fmt::Display for Primitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Derivatives of `x^p` for a real exponent.
///
/// Integer exponents accept any base (negative powers still need `x != 0`); other
/// exponents need `x > 0`, except the plain value `0^p` for `p > 0`.
pub fn pow_derivatives(x: f64, p: f64, order: usize) -> Result<Vec<f64>> {
    check_order(order)?;
    let integral = p.fract() == 0.0;
    if !integral && x < 0.0 {
        return Err(Error::domain(format!("{x}^{p} with a negative base")));
    }
    let mut out = Vec::with_capacity(order + 1);
    let mut falling = 1.0;
    for j in 0..=order {
        if j > 0 {
            falling *= p - (j - 1) as f64;
        }
        let e = p - j as f64;
        let v = if falling == 0.0 {
            0.0
        } else if x == 0.0 {
            if e > 0.0 {
                0.0
            } else if e == 0.0 {
                falling
            } else {
                return Err(Error::domain(format!("{x}^{p} derivative of order {j} is singular")));
            }
        } else if integral {
            falling * x.powi(e as i32)
        } else {
            falling * x.powf(e)
        };
        out.push(v);
    }
    finite(out, "pow", x)
}

// tan and tanh: f' = 1 + s*f^2, so every derivative is a polynomial in f.
fn tangent_like(t: f64, order: usize, s: f64) -> Vec<f64> {
    let mut poly = vec![0.0, 1.0];
    let mut out = Vec::with_capacity(order + 1);
    for _ in 0..=order {
        out.push(poly.iter().rev().fold(0.0, |acc, &c| acc * t + c));
        // P' * (1 + s t^2)
        let deriv: Vec<f64> = poly.iter().enumerate().skip(1).map(|(k, &c)| k as f64 * c).collect();
        let mut next = vec![0.0; deriv.len() + 2];
        for (k, &c) in deriv.iter().enumerate() {
            next[k] += c;
            next[k + 2] += s * c;
        }
        poly = next;
    }
    out
}

fn check_order(order: usize) -> Result<()> {
    if order > MAX_DERIVATIVE_ORDER {
        return Err(Error::dim(format!("derivative order {order} exceeds {MAX_DERIVATIVE_ORDER}")));
    }
    Ok(())
}

fn finite(values: Vec<f64>, name: &str, x: f64) -> Result<Vec<f64>> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(values)
    } else {
        Err(Error::domain(format!("{name} is not finite at {x}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn tan_derivatives_match_known_forms() {
        let x: f64 = 0.4;
        let t = x.tan();
        let d = Primitive::Tan.derivatives(x, 3).unwrap();
        assert!(close(d[1], 1.0 + t * t, 1e-14));
        assert!(close(d[2], 2.0 * t * (1.0 + t * t), 1e-14));
        assert!(close(d[3], (1.0 + t * t) * (2.0 + 6.0 * t * t), 1e-13));
    }

    #[test]
    fn tanh_second_derivative() {
        let x: f64 = -0.7;
        let t = x.tanh();
        let d = Primitive::Tanh.derivatives(x, 2).unwrap();
        assert!(close(d[1], 1.0 - t * t, 1e-14));
        assert!(close(d[2], -2.0 * t * (1.0 - t * t), 1e-14));
    }

    #[test]
    fn log_table() {
        let d = Primitive::Log.derivatives(2.0, 4).unwrap();
        assert!(close(d[1], 0.5, 1e-15));
        assert!(close(d[2], -0.25, 1e-15));
        assert!(close(d[3], 2.0 / 8.0, 1e-15));
        assert!(close(d[4], -6.0 / 16.0, 1e-15));
        assert!(Primitive::Log.derivatives(0.0, 1).is_err());
    }

    #[test]
    fn pow_tables() {
        let d = pow_derivatives(2.0, 3.0, 4).unwrap();
        assert_eq!(d, vec![8.0, 12.0, 12.0, 6.0, 0.0]);
        let d = pow_derivatives(-2.0, 2.0, 2).unwrap();
        assert_eq!(d, vec![4.0, -4.0, 2.0]);
        assert!(pow_derivatives(-1.0, 0.5, 0).is_err());
        assert!(pow_derivatives(0.0, -1.0, 0).is_err());
        assert_eq!(pow_derivatives(0.0, 2.0, 3).unwrap(), vec![0.0, 0.0, 2.0, 0.0]);
    }

    #[test]
    fn order_cap() {
        assert!(Primitive::Exp.derivatives(0.0, 9).is_err());
    }

    #[test]
    fn names_round_trip() {
        for p in Primitive::ALL {
            assert_eq!(Primitive::from_name(p.name()), Some(p));
        }
        assert_eq!(Primitive::from_name("ln"), Some(Primitive::Log));
        assert_eq!(Primitive::from_name("abs"), None);
    }
}
