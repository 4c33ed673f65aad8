//! Scalar expressions in one free variable, used for the weight `a(t)` and
//! the nonlinearity `f(u)`.
//!
//! Grammar (whitespace is ignored between tokens):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?
//! atom   := number | var | func '(' expr ')' | '(' expr ')'
//! func   := exp | log | sin | cos | sqrt | abs
//! ```
//!
//! `^` is right-associative (`2^3^2 == 512`) and binds tighter than unary
//! minus on its left (`-u^2 == -(u^2)`), while `2^-1` is accepted.

mod eval;
mod parser;

use std::fmt;
use std::sync::Arc;

pub use eval::{EvalError, EvalErrorKind};
pub use parser::ParseError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Sqrt,
    Abs,
}

impl Func {
    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Number(f64),
    Var,
    Neg(Box<Node>),
    Binary(BinOp, Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

impl Node {
    fn mentions_var(&self) -> bool {
        match self {
            Node::Number(_) => false,
            Node::Var => true,
            Node::Neg(e) | Node::Call(_, e) => e.mentions_var(),
            Node::Binary(_, l, r) => l.mentions_var() || r.mentions_var(),
        }
    }
}

/// A parsed expression bound to a single variable name.
///
/// Immutable once built; clones share the tree.
#[derive(Debug, Clone)]
pub struct Expression {
    root: Arc<Node>,
    varname: Arc<str>,
    source: Arc<str>,
}

impl Expression {
    pub fn parse(source: &str, varname: &str) -> Result<Expression, ParseError> {
        parse(source, varname)
    }

    pub fn eval(&self, x: f64) -> Result<f64, EvalError> {
        eval::eval_node(&self.root, x, &self.varname)
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn varname(&self) -> &str {
        &self.varname
    }

    /// The text this expression was parsed from.
    pub fn source(&self) -> &str {
        &self.source
    }

    /// True when the free variable does not occur.
    pub fn is_constant(&self) -> bool {
        !self.root.mentions_var()
    }
}

/// Parses `source` with `varname` as the only permitted identifier.
pub fn parse(source: &str, varname: &str) -> Result<Expression, ParseError> {
    let root = parser::Parser::new(source, varname).parse()?;
    Ok(Expression {
        root: Arc::new(root),
        varname: Arc::from(varname),
        source: Arc::from(source),
    })
}

pub fn eval(e: &Expression, x: f64) -> Result<f64, EvalError> {
    e.eval(x)
}

/// Fully parenthesized rendering; reparses to an identical tree.
impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_node(f, &self.root, &self.varname)
    }
}

pub(crate) fn write_node(f: &mut fmt::Formatter<'_>, node: &Node, var: &str) -> fmt::Result {
    match node {
        Node::Number(v) => {
            let mut buf = ryu::Buffer::new();
            f.write_str(buf.format_finite(*v))
        }
        Node::Var => f.write_str(var),
        Node::Neg(e) => {
            f.write_str("(-")?;
            write_node(f, e, var)?;
            f.write_str(")")
        }
        Node::Binary(op, l, r) => {
            f.write_str("(")?;
            write_node(f, l, var)?;
            write!(f, " {} ", op.symbol())?;
            write_node(f, r, var)?;
            f.write_str(")")
        }
        Node::Call(func, e) => {
            write!(f, "{}(", func.name())?;
            write_node(f, e, var)?;
            f.write_str(")")
        }
    }
}

pub(crate) struct NodeDisplay<'a>(pub &'a Node, pub &'a str);

impl fmt::Display for NodeDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_node(f, self.0, self.1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(src: &str, var: &str, x: f64) -> f64 {
        parse(src, var).unwrap().eval(x).unwrap()
    }

    #[test]
    fn basic_values() {
        assert_eq!(ev("u^2", "u", 3.0), 9.0);
        assert_eq!(ev("t", "t", 0.7), 0.7);
        assert_eq!(ev("1-1/(1+u^2)", "u", 0.0), 0.0);
        assert_eq!(ev("u*(1-1/(1+u^2))", "u", 1.0), 0.5);
    }

    #[test]
    fn exp_ratio_at_one() {
        // 5 e^2 / (8 + e + e^2), evaluated independently in extended form
        let e = std::f64::consts::E;
        let oracle = 5.0 * e * e / (8.0 + e + e * e);
        let v = ev("5*u*exp(2*u)/(8+exp(u)+exp(2*u))", "u", 1.0);
        assert!((v - 2.0403485).abs() < 5e-8, "{v}");
        assert!((v - oracle).abs() < 1e-14);
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(ev("2+3*4", "u", 0.0), 14.0);
        assert_eq!(ev("2^3^2", "u", 0.0), 512.0);
        assert_eq!(ev("-u^2", "u", 3.0), -9.0);
        assert_eq!(ev("2^-1", "u", 0.0), 0.5);
        assert_eq!(ev("--u", "u", 3.0), 3.0);
        assert_eq!(ev("8/4/2", "u", 0.0), 1.0);
        assert_eq!(ev("8-4-2", "u", 0.0), 2.0);
        assert_eq!(ev(" ( 1 + u ) * 2 ", "u", 1.0), 4.0);
        assert_eq!(ev("1.5e2 + .5", "u", 0.0), 150.5);
    }

    #[test]
    fn functions() {
        assert_eq!(ev("abs(-u)", "u", 2.0), 2.0);
        assert_eq!(ev("sqrt(u)", "u", 16.0), 4.0);
        assert_eq!(ev("log(exp(u))", "u", 1.5), 1.5);
        assert_eq!(ev("sin(u)^2+cos(u)^2", "u", 0.3), 1.0);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse("u + v", "u"),
            Err(ParseError::UnknownIdentifier { ref name, offset: 4 }) if name == "v"
        ));
        assert!(matches!(
            parse("tan(u)", "u"),
            Err(ParseError::UnknownFunction { ref name, offset: 0 }) if name == "tan"
        ));
        assert!(matches!(
            parse("", "u"),
            Err(ParseError::Syntax { offset: 0, .. })
        ));
        assert!(matches!(
            parse("1 +", "u"),
            Err(ParseError::Syntax { offset: 3, .. })
        ));
        assert!(matches!(
            parse("(u", "u"),
            Err(ParseError::Syntax { offset: 2, .. })
        ));
        assert!(matches!(
            parse("u u", "u"),
            Err(ParseError::Syntax { offset: 2, .. })
        ));
        assert!(matches!(
            parse("u $ 2", "u"),
            Err(ParseError::Syntax { offset: 2, .. })
        ));
        // a function name without a call is not a variable
        assert!(matches!(parse("exp", "u"), Err(ParseError::Syntax { .. })));
        // bound variable of the other expression kind
        assert!(parse("t", "u").is_err());
    }

    #[test]
    fn domain_faults() {
        let e = parse("log(u)", "u").unwrap();
        let err = e.eval(0.0).unwrap_err();
        assert_eq!(err.kind, EvalErrorKind::LogNonPositive);
        assert_eq!(err.input, 0.0);
        assert!(err.node.contains("log"));
        assert!(parse("sqrt(u)", "u").unwrap().eval(-1.0).is_err());
        assert!(parse("u^-1", "u").unwrap().eval(0.0).is_err());
        assert!(parse("1/u", "u").unwrap().eval(0.0).is_err());
        assert!(parse("u^0.5", "u").unwrap().eval(-4.0).is_err());
        // overflow to infinity followed by inf/inf
        assert!(parse("exp(u)/exp(u)", "u").unwrap().eval(1000.0).is_err());
        // plain overflow keeps IEEE semantics
        assert_eq!(
            parse("exp(u)", "u").unwrap().eval(1000.0).unwrap(),
            f64::INFINITY
        );
    }

    #[test]
    fn display_reparses() {
        let src = "5*u*exp(2*u)/(8+exp(u)+exp(2*u)) - -u^2^0.5 + abs(sin(u))";
        let e = parse(src, "u").unwrap();
        let printed = e.to_string();
        let again = parse(&printed, "u").unwrap();
        assert_eq!(e.root(), again.root());
    }

    #[test]
    fn constants() {
        assert!(parse("1/3", "t").unwrap().is_constant());
        assert!(!parse("0*t+1", "t").unwrap().is_constant());
    }
}
