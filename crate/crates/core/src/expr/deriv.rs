//! Symbolic differentiation with respect to the parameter `t`.

use super::{BinOp, Expr, Func};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("`{0}` is not differentiable")]
pub struct NotDifferentiable(pub &'static str);

pub fn differentiate(e: &Expr) -> Result<Expr, NotDifferentiable> {
    Ok(match e {
        Expr::Num(_) | Expr::Const(_) => Expr::num(0.0),
        Expr::Param => Expr::num(1.0),
        Expr::Neg(inner) => Expr::neg(differentiate(inner)?),
        Expr::Bin(op, a, b) => {
            let (a, b) = (a.as_ref(), b.as_ref());
            match op {
                BinOp::Add => Expr::add(differentiate(a)?, differentiate(b)?),
                BinOp::Sub => Expr::sub(differentiate(a)?, differentiate(b)?),
                BinOp::Mul => Expr::add(
                    Expr::mul(differentiate(a)?, b.clone()),
                    Expr::mul(a.clone(), differentiate(b)?),
                ),
                BinOp::Div => Expr::div(
                    Expr::sub(
                        Expr::mul(differentiate(a)?, b.clone()),
                        Expr::mul(a.clone(), differentiate(b)?),
                    ),
                    Expr::pow(b.clone(), Expr::num(2.0)),
                ),
                BinOp::Pow => match b {
                    // power rule for constant exponents; avoids ln of a
                    // possibly negative base
                    Expr::Num(k) => Expr::mul(
                        Expr::mul(Expr::num(*k), Expr::pow(a.clone(), Expr::num(k - 1.0))),
                        differentiate(a)?,
                    ),
                    _ => {
                        // d(a^b) = a^b (b' ln a + b a'/a)
                        let da = differentiate(a)?;
                        let db = differentiate(b)?;
                        Expr::mul(
                            Expr::pow(a.clone(), b.clone()),
                            Expr::add(
                                Expr::mul(db, Expr::call1(Func::Ln, a.clone())),
                                Expr::div(Expr::mul(b.clone(), da), a.clone()),
                            ),
                        )
                    }
                },
            }
        }
        Expr::Call(func, args) => {
            let u = &args[0];
            let du = || differentiate(u);
            match func {
                Func::Sin => Expr::mul(Expr::call1(Func::Cos, u.clone()), du()?),
                Func::Cos => Expr::neg(Expr::mul(Expr::call1(Func::Sin, u.clone()), du()?)),
                Func::Tan => {
                    // 1 + tan^2
                    let sec2 = Expr::add(
                        Expr::num(1.0),
                        Expr::pow(Expr::call1(Func::Tan, u.clone()), Expr::num(2.0)),
                    );
                    Expr::mul(sec2, du()?)
                }
                Func::Exp => Expr::mul(Expr::call1(Func::Exp, u.clone()), du()?),
                Func::Ln => Expr::div(du()?, u.clone()),
                Func::Sqrt => Expr::div(
                    du()?,
                    Expr::mul(Expr::num(2.0), Expr::call1(Func::Sqrt, u.clone())),
                ),
                Func::Atan2 => {
                    // d atan2(y, x) = (y' x - y x') / (x^2 + y^2)
                    let y = u;
                    let x = &args[1];
                    let dy = differentiate(y)?;
                    let dx = differentiate(x)?;
                    Expr::div(
                        Expr::sub(Expr::mul(dy, x.clone()), Expr::mul(y.clone(), dx)),
                        Expr::add(
                            Expr::pow(x.clone(), Expr::num(2.0)),
                            Expr::pow(y.clone(), Expr::num(2.0)),
                        ),
                    )
                }
                Func::Abs => return Err(NotDifferentiable("abs")),
                Func::Sgn => return Err(NotDifferentiable("sgn")),
            }
        }
    })
}
