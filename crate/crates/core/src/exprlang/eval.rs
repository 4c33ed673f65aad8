use std::fmt;

use thiserror::Error;

use super::{BinOp, Func, Node, NodeDisplay};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalErrorKind {
    LogNonPositive,
    SqrtNegative,
    ZeroToNegativePower,
    DivisionByZero,
    /// An operation produced NaN (e.g. `inf / inf` after overflow, or a
    /// negative base raised to a fractional power).
    NotANumber,
}

impl fmt::Display for EvalErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EvalErrorKind::LogNonPositive => "log of a nonpositive value",
            EvalErrorKind::SqrtNegative => "sqrt of a negative value",
            EvalErrorKind::ZeroToNegativePower => "zero raised to a negative power",
            EvalErrorKind::DivisionByZero => "division by zero",
            EvalErrorKind::NotANumber => "result is not a number",
        })
    }
}

/// A domain fault raised while evaluating an expression.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{kind} in `{node}` at {var} = {input}")]
pub struct EvalError {
    pub kind: EvalErrorKind,
    /// Rendering of the offending subexpression.
    pub node: String,
    pub var: String,
    pub input: f64,
}

pub(super) fn eval_node(node: &Node, x: f64, var: &str) -> Result<f64, EvalError> {
    let fail = |kind| EvalError {
        kind,
        node: NodeDisplay(node, var).to_string(),
        var: var.to_string(),
        input: x,
    };
    let v = match node {
        Node::Number(v) => *v,
        Node::Var => x,
        Node::Neg(e) => -eval_node(e, x, var)?,
        Node::Binary(op, l, r) => {
            let a = eval_node(l, x, var)?;
            let b = eval_node(r, x, var)?;
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    if b == 0.0 {
                        return Err(fail(EvalErrorKind::DivisionByZero));
                    }
                    a / b
                }
                BinOp::Pow => {
                    if a == 0.0 && b < 0.0 {
                        return Err(fail(EvalErrorKind::ZeroToNegativePower));
                    }
                    pow(a, b)
                }
            }
        }
        Node::Call(func, e) => {
            let a = eval_node(e, x, var)?;
            match func {
                Func::Exp => a.exp(),
                Func::Log => {
                    if a <= 0.0 {
                        return Err(fail(EvalErrorKind::LogNonPositive));
                    }
                    a.ln()
                }
                Func::Sin => a.sin(),
                Func::Cos => a.cos(),
                Func::Sqrt => {
                    if a < 0.0 {
                        return Err(fail(EvalErrorKind::SqrtNegative));
                    }
                    a.sqrt()
                }
                Func::Abs => a.abs(),
            }
        }
    };
    if v.is_nan() {
        return Err(fail(EvalErrorKind::NotANumber));
    }
    Ok(v)
}

/// Integer exponents use repeated multiplication so `u^2` is exactly `u*u`.
fn pow(base: f64, exponent: f64) -> f64 {
    if exponent.fract() == 0.0 && exponent.abs() <= 64.0 {
        base.powi(exponent as i32)
    } else {
        base.powf(exponent)
    }
}
