//! A small expression language for declaring curves and curvature functions
//! in config files.
//!
//! Grammar (EBNF, also documented in `docs/expression-grammar.md`):
//!
//! ```text
//! expr    = term { ("+" | "-") term } ;
//! term    = unary { ("*" | "/") unary } ;
//! unary   = "-" unary | power ;
//! power   = atom [ "^" unary ] ;          (* right-associative *)
//! atom    = number | name | name "(" expr { "," expr } ")" | "(" expr ")" ;
//! ```
//!
//! `t` is the curve parameter; every other bare name is a constant that must
//! be bound at evaluation time. Functions: `sin cos tan exp ln sqrt atan2
//! abs sgn`.

mod deriv;
mod eval;
mod parse;

pub use deriv::NotDifferentiable;
pub use eval::EvalError;
pub use parse::ParseError;

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Ln,
    Sqrt,
    Atan2,
    Abs,
    Sgn,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
            Func::Atan2 => "atan2",
            Func::Abs => "abs",
            Func::Sgn => "sgn",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Func::Atan2 => 2,
            _ => 1,
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sqrt" => Func::Sqrt,
            "atan2" => Func::Atan2,
            "abs" => Func::Abs,
            "sgn" => Func::Sgn,
            _ => return None,
        })
    }
}

/// Abstract syntax tree of one expression. Immutable after parsing.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    /// The curve parameter `t`.
    Param,
    /// A named constant, bound at evaluation time.
    Const(String),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr, ParseError> {
        parse::parse(src)
    }

    pub fn eval(&self, t: f64, constants: &BTreeMap<String, f64>) -> Result<f64, EvalError> {
        eval::eval(self, t, constants)
    }

    /// Symbolic derivative of the given order (1 to 3) with respect to `t`.
    pub fn derivative(&self, order: u32) -> Result<Expr, NotDifferentiable> {
        assert!((1..=3).contains(&order), "order must be 1, 2 or 3");
        let mut e = deriv::differentiate(self)?;
        for _ in 1..order {
            e = deriv::differentiate(&e)?;
        }
        Ok(e)
    }

    pub(crate) fn num(v: f64) -> Expr {
        Expr::Num(v)
    }

    /// Constant-folding smart constructors keep derivative trees small
    /// without rewriting anything a user wrote.
    pub(crate) fn add(a: Expr, b: Expr) -> Expr {
        match (a, b) {
            (Expr::Num(x), Expr::Num(y)) => Expr::Num(x + y),
            (Expr::Num(x), b) if x == 0.0 => b,
            (a, Expr::Num(y)) if y == 0.0 => a,
            (a, b) => Expr::Bin(BinOp::Add, Box::new(a), Box::new(b)),
        }
    }

    pub(crate) fn sub(a: Expr, b: Expr) -> Expr {
        match (a, b) {
            (Expr::Num(x), Expr::Num(y)) => Expr::Num(x - y),
            (a, Expr::Num(y)) if y == 0.0 => a,
            (Expr::Num(x), b) if x == 0.0 => Expr::neg(b),
            (a, b) => Expr::Bin(BinOp::Sub, Box::new(a), Box::new(b)),
        }
    }

    pub(crate) fn mul(a: Expr, b: Expr) -> Expr {
        match (a, b) {
            (Expr::Num(x), Expr::Num(y)) => Expr::Num(x * y),
            (Expr::Num(x), _) | (_, Expr::Num(x)) if x == 0.0 => Expr::Num(0.0),
            (Expr::Num(x), b) if x == 1.0 => b,
            (a, Expr::Num(y)) if y == 1.0 => a,
            (a, b) => Expr::Bin(BinOp::Mul, Box::new(a), Box::new(b)),
        }
    }

    pub(crate) fn div(a: Expr, b: Expr) -> Expr {
        match (a, b) {
            (Expr::Num(x), b) if x == 0.0 && !matches!(b, Expr::Num(y) if y == 0.0) => {
                Expr::Num(0.0)
            }
            (a, Expr::Num(y)) if y == 1.0 => a,
            (a, b) => Expr::Bin(BinOp::Div, Box::new(a), Box::new(b)),
        }
    }

    pub(crate) fn pow(a: Expr, b: Expr) -> Expr {
        match (a, b) {
            (a, Expr::Num(y)) if y == 1.0 => a,
            (a, b) => Expr::Bin(BinOp::Pow, Box::new(a), Box::new(b)),
        }
    }

    pub(crate) fn neg(a: Expr) -> Expr {
        match a {
            Expr::Num(x) => Expr::Num(-x),
            Expr::Neg(inner) => *inner,
            a => Expr::Neg(Box::new(a)),
        }
    }

    pub(crate) fn call1(f: Func, a: Expr) -> Expr {
        Expr::Call(f, vec![a])
    }
}

impl FromStr for Expr {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Expr::parse(s)
    }
}

// Pretty-printer with minimal parentheses; `parse(to_string(e))` evaluates
// identically to `e`.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl Expr {
    // precedence levels: 0 add/sub, 1 mul/div, 2 unary minus, 3 pow, 4 atom
    fn prec(&self) -> u8 {
        match self {
            Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 0,
            Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 1,
            Expr::Neg(_) => 2,
            Expr::Bin(BinOp::Pow, ..) => 3,
            Expr::Num(v) if *v < 0.0 => 2,
            _ => 4,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let p = self.prec();
        let parens = p < min;
        if parens {
            write!(f, "(")?;
        }
        match self {
            Expr::Num(v) => {
                if v.fract() == 0.0 && v.abs() < 1e15 {
                    write!(f, "{v:.1}")?;
                } else {
                    write!(f, "{v}")?;
                }
            }
            Expr::Param => write!(f, "t")?,
            Expr::Const(name) => write!(f, "{name}")?,
            Expr::Neg(e) => {
                write!(f, "-")?;
                e.fmt_prec(f, 3)?;
            }
            Expr::Bin(op, a, b) => {
                let (sym, la, lb) = match op {
                    BinOp::Add => ("+", 0, 1),
                    BinOp::Sub => ("-", 0, 1),
                    BinOp::Mul => ("*", 1, 2),
                    BinOp::Div => ("/", 1, 2),
                    // right-associative, binds tighter than unary minus
                    BinOp::Pow => ("^", 4, 3),
                };
                a.fmt_prec(f, la)?;
                write!(f, " {sym} ")?;
                b.fmt_prec(f, lb)?;
            }
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    a.fmt_prec(f, 0)?;
                }
                write!(f, ")")?;
            }
        }
        if parens {
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// A parametric space curve declared by three coordinate expressions.
#[derive(Debug, Clone)]
pub struct CurveSpec {
    pub x: Expr,
    pub y: Expr,
    pub z: Expr,
    pub t0: f64,
    pub t1: f64,
    pub constants: BTreeMap<String, f64>,
}

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum CurveSpecError {
    #[error("interval is degenerate: t0 = {t0}, t1 = {t1}")]
    DegenerateInterval { t0: f64, t1: f64 },
}

impl CurveSpec {
    pub fn new(
        x: Expr,
        y: Expr,
        z: Expr,
        t0: f64,
        t1: f64,
        constants: BTreeMap<String, f64>,
    ) -> Result<CurveSpec, CurveSpecError> {
        if !(t1 > t0) {
            return Err(CurveSpecError::DegenerateInterval { t0, t1 });
        }
        Ok(CurveSpec {
            x,
            y,
            z,
            t0,
            t1,
            constants,
        })
    }

    /// Convenience constructor from source strings.
    pub fn from_strs(
        x: &str,
        y: &str,
        z: &str,
        t0: f64,
        t1: f64,
        constants: BTreeMap<String, f64>,
    ) -> Result<CurveSpec, CurveSpecParseError> {
        let parse = |axis: &'static str, src: &str| {
            Expr::parse(src).map_err(|source| CurveSpecParseError::Component { axis, source })
        };
        let spec = CurveSpec::new(
            parse("x", x)?,
            parse("y", y)?,
            parse("z", z)?,
            t0,
            t1,
            constants,
        )?;
        Ok(spec)
    }

    pub fn position(&self, t: f64) -> Result<crate::geom::Vec3, EvalError> {
        Ok(crate::geom::Vec3::new(
            self.x.eval(t, &self.constants)?,
            self.y.eval(t, &self.constants)?,
            self.z.eval(t, &self.constants)?,
        ))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CurveSpecParseError {
    #[error("component {axis}: {source}")]
    Component {
        axis: &'static str,
        source: ParseError,
    },
    #[error(transparent)]
    Spec(#[from] CurveSpecError),
}

/// Serialized form used by the JSON job format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveSpecSource {
    pub x: String,
    pub y: String,
    pub z: String,
    pub t0: f64,
    pub t1: f64,
    #[serde(default)]
    pub constants: BTreeMap<String, f64>,
}

impl CurveSpecSource {
    pub fn compile(&self) -> Result<CurveSpec, CurveSpecParseError> {
        CurveSpec::from_strs(
            &self.x,
            &self.y,
            &self.z,
            self.t0,
            self.t1,
            self.constants.clone(),
        )
    }
}
