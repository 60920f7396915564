//! Smooth scalar expressions: parsing, printing and evaluation over any [`Smooth`] ring.
//!
//! Grammar (whitespace is ignored):
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary (('*' | '/') unary)*
//! unary    := ('-' | '+') unary | power
//! power    := atom ('^' exponent)?
//! exponent := ('-' | '+')? NUMBER ('^' exponent)? | '(' exponent ')'
//! atom     := NUMBER | IDENT | IDENT '(' expr ')' | '(' expr ')'
//! ```
//!
//! `^` is right-associative and takes a real literal only; `-x^2` is `-(x^2)`.
//! `pi` and `e` are predefined constants unless the environment binds them.
//!
//! [`Smooth`]: crate::nilpotent::Smooth

mod eval;
mod parse;
pub mod random;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::nilpotent::Primitive;

pub use eval::{Env, CONSTANTS};
pub use parse::parse;
pub(crate) use parse::{lex, parse_tokens, Tok};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }
}

/// A parsed smooth expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(String),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    /// Base raised to a real literal.
    Pow(Box<Expr>, f64),
    Call(Primitive, Box<Expr>),
}

impl Expr {
    pub fn num(v: f64) -> Self {
        Expr::Num(v)
    }

    pub fn var(name: impl Into<String>) -> Self {
        Expr::Var(name.into())
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Self {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn call(p: Primitive, arg: Expr) -> Self {
        Expr::Call(p, Box::new(arg))
    }

    /// All variable names, including predefined constants such as `pi`.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    /// Free variables that are not predefined constants.
    pub fn parameters(&self) -> BTreeSet<String> {
        let mut vars = self.free_vars();
        vars.retain(|v| !CONSTANTS.iter().any(|(c, _)| c == v));
        vars
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Num(_) => {}
            Expr::Var(name) => {
                out.insert(name.clone());
            }
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.collect_vars(out),
            Expr::Binary(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Replaces every occurrence of variable `name` with `value`.
    pub fn substitute(&self, name: &str, value: &Expr) -> Expr {
        match self {
            Expr::Var(v) if v == name => value.clone(),
            Expr::Num(_) | Expr::Var(_) => self.clone(),
            Expr::Neg(a) => Expr::Neg(Box::new(a.substitute(name, value))),
            Expr::Pow(a, p) => Expr::Pow(Box::new(a.substitute(name, value)), *p),
            Expr::Call(f, a) => Expr::Call(*f, Box::new(a.substitute(name, value))),
            Expr::Binary(op, a, b) => {
                Expr::Binary(*op, Box::new(a.substitute(name, value)), Box::new(b.substitute(name, value)))
            }
        }
    }

    /// Fixes a parameter to a real value.
    pub fn bind(&self, name: &str, value: f64) -> Expr {
        self.substitute(name, &Expr::Num(value))
    }

    /// Evaluates over plain reals with the given bindings.
    pub fn eval_real(&self, bindings: &[(&str, f64)]) -> Result<f64> {
        let mut env = Env::new(());
        for (k, v) in bindings {
            env.insert(*k, *v);
        }
        env.evaluate(self)
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(op, ..) => op.precedence(),
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Num(_) | Expr::Var(_) | Expr::Call(..) => 5,
        }
    }

    fn write_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let needs = self.precedence() < min || matches!(self, Expr::Num(v) if v.is_sign_negative());
        if needs {
            f.write_str("(")?;
        }
        match self {
            Expr::Num(v) => write!(f, "{v}")?,
            Expr::Var(name) => f.write_str(name)?,
            Expr::Neg(a) => {
                f.write_str("-")?;
                a.write_prec(f, 3)?;
            }
            Expr::Binary(op, a, b) => {
                a.write_prec(f, op.precedence())?;
                write!(f, " {} ", op.symbol())?;
                b.write_prec(f, op.precedence() + 1)?;
            }
            Expr::Pow(a, p) => {
                a.write_prec(f, 5)?;
                if p.is_sign_negative() {
                    write!(f, "^({p})")?;
                } else {
                    write!(f, "^{p}")?;
                }
            }
            Expr::Call(p, a) => {
                write!(f, "{p}(")?;
                a.write_prec(f, 0)?;
                f.write_str(")")?;
            }
        }
        if needs {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_prec(f, 0)
    }
}

impl FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printing_keeps_structure() {
        for src in [
            "a - (b - c)",
            "a / (b * c)",
            "-x^2",
            "(-x)^2",
            "(x^2)^3",
            "x^(-1.5)",
            "2 * -x",
            "sin(x + y) * cos(-x)",
            "a - -b",
        ] {
            let e = parse(src).unwrap();
            let printed = e.to_string();
            assert_eq!(parse(&printed).unwrap(), e, "{src} -> {printed}");
        }
    }

    #[test]
    fn free_variables_and_parameters() {
        let e = parse("2*pi*r*h + 2*pi*r^2").unwrap();
        let fv: Vec<_> = e.free_vars().into_iter().collect();
        assert_eq!(fv, ["h", "pi", "r"]);
        let ps: Vec<_> = e.parameters().into_iter().collect();
        assert_eq!(ps, ["h", "r"]);
    }

    #[test]
    fn bind_parameter() {
        let e = parse("a*cosh(x/a)").unwrap().bind("a", 2.0);
        assert_eq!(e.parameters().into_iter().collect::<Vec<_>>(), ["x"]);
        assert_eq!(e.eval_real(&[("x", 0.0)]).unwrap(), 2.0);
    }
}
