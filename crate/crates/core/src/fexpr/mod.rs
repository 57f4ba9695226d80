//! A small single-variable expression language used to describe the function `f`.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor (('*' | '/') factor)*
//! factor   := '-' factor | base ('^' exponent)?
//! exponent := int ('^' exponent)?          (right-associative, folded to one integer)
//! int      := '-'? digits | '(' '-'? digits ')'
//! base     := number | 'x' | 'pi' | ident '(' expr ')' | '(' expr ')'
//! ident    := 'exp' | 'sin' | 'cos' | 'abs' | 'sqrt'
//! ```
//!
//! Binding strength is `^` > unary `-` > `*`,`/` > `+`,`-`, so `-x^2` is `-(x^2)`.

mod diff;
mod function;
mod parse;

use std::fmt;

use crate::error::{Error, Result};

pub use diff::differentiate;
pub use function::{FunctionBody, FunctionSpec};
pub use parse::parse;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Sin,
    Cos,
    Abs,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Abs => "abs",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "exp" => Func::Exp,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "abs" => Func::Abs,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn eval(&self, t: f64) -> Result<f64> {
        eval_expr(self, t)
    }

    pub fn contains_abs(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Var => false,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.contains_abs() || b.contains_abs()
            }
            Expr::Pow(a, _) => a.contains_abs(),
            Expr::Call(f, a) => *f == Func::Abs || a.contains_abs(),
        }
    }

    /// Points where the expression may fail to be smooth: zeros of affine arguments of
    /// `abs` and `sqrt`. Nonaffine arguments are not analysed.
    pub fn kinks(&self) -> Vec<f64> {
        let mut out = Vec::new();
        self.collect_kinks(&mut out);
        out
    }

    fn collect_kinks(&self, out: &mut Vec<f64>) {
        match self {
            Expr::Const(_) | Expr::Var => {}
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_kinks(out);
                b.collect_kinks(out);
            }
            Expr::Pow(a, _) => a.collect_kinks(out),
            Expr::Call(f, a) => {
                a.collect_kinks(out);
                if matches!(f, Func::Abs | Func::Sqrt) {
                    if let Some(root) = affine_root(a) {
                        out.push(root);
                    }
                }
            }
        }
    }

    /// `e` when `self` is `-1 * e` with non-constant `e`, the form unary minus parses to.
    fn negated(&self) -> Option<&Expr> {
        match self {
            Expr::Mul(a, b) if **a == Expr::Const(-1.0) && !matches!(**b, Expr::Const(_)) => Some(b),
            _ => None,
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) if self.negated().is_some() => 3,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Pow(..) => 4,
            Expr::Const(c) if c.is_sign_negative() => 3,
            Expr::Const(_) | Expr::Var | Expr::Call(..) => 5,
        }
    }
}

fn affine_root(arg: &Expr) -> Option<f64> {
    if arg.contains_abs() {
        return None;
    }
    let second = differentiate(arg, 2).ok()?;
    if second != Expr::Const(0.0) {
        return None;
    }
    let slope = differentiate(arg, 1).ok()?.eval(0.0).ok()?;
    let intercept = arg.eval(0.0).ok()?;
    (slope != 0.0).then(|| -intercept / slope)
}

/// Evaluates `e` at `t`.
pub fn eval_expr(e: &Expr, t: f64) -> Result<f64> {
    let fail = |reason: &str| Error::Eval { node: e.to_string(), reason: reason.to_string() };
    Ok(match e {
        Expr::Const(c) => *c,
        Expr::Var => t,
        Expr::Add(a, b) => eval_expr(a, t)? + eval_expr(b, t)?,
        Expr::Sub(a, b) => eval_expr(a, t)? - eval_expr(b, t)?,
        Expr::Mul(a, b) => eval_expr(a, t)? * eval_expr(b, t)?,
        Expr::Div(a, b) => {
            let den = eval_expr(b, t)?;
            if den == 0.0 {
                return Err(fail("division by zero"));
            }
            eval_expr(a, t)? / den
        }
        Expr::Pow(a, p) => {
            let base = eval_expr(a, t)?;
            if base == 0.0 && *p < 0 {
                return Err(fail("division by zero"));
            }
            base.powi(*p)
        }
        Expr::Call(f, a) => {
            let v = eval_expr(a, t)?;
            match f {
                Func::Exp => v.exp(),
                Func::Sin => v.sin(),
                Func::Cos => v.cos(),
                Func::Abs => v.abs(),
                Func::Sqrt => {
                    if v < 0.0 {
                        return Err(fail("square root of a negative number"));
                    }
                    v.sqrt()
                }
            }
        }
    })
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Operands are parenthesised whenever reparsing would otherwise associate them
        // differently, so `parse(e.to_string()) == e`.
        fn operand(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            Expr::Const(c) if c.fract() == 0.0 && c.abs() < 1e15 => write!(f, "{c}"),
            Expr::Const(c) => write!(f, "{c:?}"),
            Expr::Var => write!(f, "x"),
            Expr::Add(a, b) => {
                operand(f, a, 1)?;
                write!(f, " + ")?;
                operand(f, b, 2)
            }
            Expr::Sub(a, b) => {
                operand(f, a, 1)?;
                write!(f, " - ")?;
                operand(f, b, 2)
            }
            Expr::Mul(..) if self.negated().is_some() => {
                write!(f, "-")?;
                operand(f, self.negated().expect("checked by guard"), 4)
            }
            Expr::Mul(a, b) => {
                operand(f, a, 2)?;
                write!(f, "*")?;
                operand(f, b, 3)
            }
            Expr::Div(a, b) => {
                operand(f, a, 2)?;
                write!(f, "/")?;
                operand(f, b, 4)
            }
            Expr::Pow(a, p) => {
                operand(f, a, 5)?;
                if *p < 0 {
                    write!(f, "^({p})")
                } else {
                    write!(f, "^{p}")
                }
            }
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}
