//! Expression evaluation with IEEE semantics and non-finite reporting.

use super::{BinOp, Expr, Func};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("unbound name `{0}`")]
    UnboundName(String),
    #[error("expression evaluated to a non-finite value at t = {param}")]
    NonFinite { param: f64 },
}

pub fn eval(e: &Expr, t: f64, constants: &BTreeMap<String, f64>) -> Result<f64, EvalError> {
    eval_raw(e, t, constants)
}

// Non-finite intermediates are reported where they arise rather than being
// allowed to wash out downstream (e.g. atan2(1/0, 1) would be finite).
fn eval_raw(e: &Expr, t: f64, constants: &BTreeMap<String, f64>) -> Result<f64, EvalError> {
    let v = eval_node(e, t, constants)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::NonFinite { param: t })
    }
}

fn eval_node(e: &Expr, t: f64, constants: &BTreeMap<String, f64>) -> Result<f64, EvalError> {
    Ok(match e {
        Expr::Num(v) => *v,
        Expr::Param => t,
        Expr::Const(name) => *constants
            .get(name)
            .ok_or_else(|| EvalError::UnboundName(name.clone()))?,
        Expr::Neg(inner) => -eval_raw(inner, t, constants)?,
        Expr::Bin(op, a, b) => {
            let x = eval_raw(a, t, constants)?;
            let y = eval_raw(b, t, constants)?;
            match op {
                BinOp::Add => x + y,
                BinOp::Sub => x - y,
                BinOp::Mul => x * y,
                BinOp::Div => x / y,
                BinOp::Pow => x.powf(y),
            }
        }
        Expr::Call(func, args) => {
            let x = eval_raw(&args[0], t, constants)?;
            match func {
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Tan => x.tan(),
                Func::Exp => x.exp(),
                Func::Ln => x.ln(),
                Func::Sqrt => x.sqrt(),
                Func::Abs => x.abs(),
                Func::Sgn => {
                    if x > 0.0 {
                        1.0
                    } else if x < 0.0 {
                        -1.0
                    } else {
                        0.0
                    }
                }
                Func::Atan2 => {
                    let y = eval_raw(&args[1], t, constants)?;
                    x.atan2(y)
                }
            }
        }
    })
}
