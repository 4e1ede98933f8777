//! Coordinate expressions: parsing, evaluation and exact 2-jets.
//!
//! Grammar, loosest binding first:
//!
//! | level   | forms                                   |
//! |---------|-----------------------------------------|
//! | sum     | `a + b`, `a - b`                        |
//! | product | `a * b`, `a / b`                        |
//! | unary   | `-a`                                    |
//! | power   | `a ^ k` (`k` integer or half-integer)   |
//! | atom    | literals, names, `f(a)`, `(a)`          |
//!
//! Functions: `sin cos sinh cosh sqrt`. Exponents are folded at parse time
//! and must be constant, e.g. `x^2`, `x^(1/2)`, `x^-3`. There is no implicit
//! multiplication. Error offsets are 1-based byte positions.

mod ast;
mod jet;
mod lexer;
mod parser;
mod vector;

use std::fmt;
use std::sync::Arc;

pub use ast::{Exponent, Func, Node, ScalarExpr};
pub use jet::Jet2;
pub use vector::{parse_vector, VectorExpr};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Empty,
    UnknownToken(char),
    BadNumber(String),
    UnexpectedEnd,
    Unexpected(String),
    MissingOperand(String),
    Unbalanced,
    UnknownVariable(String),
    UnknownFunction(String),
    BadExponent,
    NotLinear(String),
    MixedTerms,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Empty => write!(f, "empty expression"),
            Self::UnknownToken(c) => write!(f, "unknown character '{c}'"),
            Self::BadNumber(s) => write!(f, "malformed number '{s}'"),
            Self::UnexpectedEnd => write!(f, "unexpected end of expression"),
            Self::Unexpected(s) => write!(f, "unexpected {s}"),
            Self::MissingOperand(op) => write!(f, "operator {op} is missing its operand"),
            Self::Unbalanced => write!(f, "unbalanced parenthesis"),
            Self::UnknownVariable(v) => write!(f, "unknown variable '{v}'"),
            Self::UnknownFunction(v) => write!(f, "unknown function '{v}'"),
            Self::BadExponent => {
                write!(f, "exponent must be a constant integer or half-integer")
            }
            Self::NotLinear(what) => write!(f, "not linear in the basis symbols: {what}"),
            Self::MixedTerms => write!(f, "sum mixes scalar and basis terms"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("parse error at offset {offset}: {kind}")]
pub struct ParseError {
    /// 1-based byte offset into the source.
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DomainErrorKind {
    SqrtNegative,
    SqrtZero,
    DivisionByZero,
}

impl fmt::Display for DomainErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::SqrtNegative => "square root of a negative number",
            Self::SqrtZero => "square root is not differentiable at zero",
            Self::DivisionByZero => "division by zero",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{kind} in '{subexpr}'")]
pub struct DomainError {
    pub kind: DomainErrorKind,
    /// The offending subexpression, printed back in expression syntax.
    pub subexpr: String,
}

/// Parse `source` as a function of `params`.
pub fn parse(source: &str, params: &[String]) -> Result<ScalarExpr, ParseError> {
    let node = parser::Parser::new(source, params)?.parse_all()?;
    let vars: Arc<[String]> = params.to_vec().into();
    Ok(ScalarExpr::from_node(node, vars))
}

/// Value, gradient and Hessian of `f` at `p`.
pub fn eval_jet2(f: &ScalarExpr, p: &[f64]) -> Result<Jet2, DomainError> {
    f.eval(&Jet2::seed(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn product_of_calls() {
        let f = parse("cos(w5)*cosh(w6)", &names(&["w5", "w6"])).unwrap();
        assert_eq!(
            f.node(),
            &Node::Mul(
                Box::new(Node::Call(Func::Cos, Box::new(Node::Var(0)))),
                Box::new(Node::Call(Func::Cosh, Box::new(Node::Var(1))))
            )
        );
    }

    #[test]
    fn sqrt_of_difference() {
        let f = parse("sqrt(z^2 - x3^2)", &names(&["x3", "z"])).unwrap();
        assert!(
            matches!(f.node(), Node::Call(Func::Sqrt, inner) if matches!(**inner, Node::Sub(..)))
        );
        assert!((f.value(&[3.0, 5.0]).unwrap() - 4.0).abs() < 1e-15);
    }

    #[test]
    fn missing_operand_reports_operator_offset() {
        let err = parse("w1 +* w2", &names(&["w1", "w2"])).unwrap_err();
        assert_eq!(err.offset, 4);
        assert!(matches!(err.kind, ParseErrorKind::MissingOperand(_)));
    }

    #[test]
    fn precedence_and_associativity() {
        let v = names(&["x"]);
        let f = parse("-x^2", &v).unwrap();
        assert_eq!(f.value(&[3.0]).unwrap(), -9.0);
        let f = parse("2^3^2", &v).unwrap();
        assert_eq!(f.value(&[0.0]).unwrap(), 512.0);
        let err = parse("2^x", &v).unwrap_err();
        assert_eq!((err.offset, err.kind), (3, ParseErrorKind::BadExponent));
        assert!(parse("x^0.3", &v).is_err());
        let f = parse("1 - 2 - 3", &v).unwrap();
        assert_eq!(f.value(&[0.0]).unwrap(), -4.0);
        let f = parse("8/2/2", &v).unwrap();
        assert_eq!(f.value(&[0.0]).unwrap(), 2.0);
        let f = parse("x^(1/2)", &v).unwrap();
        assert!(matches!(f.node(), Node::Pow(_, Exponent::Half(1))));
        let f = parse("x^-1", &v).unwrap();
        assert_eq!(f.value(&[4.0]).unwrap(), 0.25);
    }

    #[test]
    fn rejects_unknown_names_and_implicit_products() {
        let v = names(&["x"]);
        assert_eq!(
            parse("x + y", &v).unwrap_err(),
            ParseError {
                offset: 5,
                kind: ParseErrorKind::UnknownVariable("y".into())
            }
        );
        assert!(matches!(
            parse("tan(x)", &v).unwrap_err().kind,
            ParseErrorKind::UnknownFunction(_)
        ));
        assert!(parse("2 x", &v).is_err());
        assert!(parse("(x", &v).is_err());
        assert!(parse("x)", &v).is_err());
        assert_eq!(parse("", &v).unwrap_err().kind, ParseErrorKind::Empty);
    }

    #[test]
    fn constant_jet() {
        let f = parse("7", &names(&["a", "b"])).unwrap();
        let j = eval_jet2(&f, &[0.3, -2.0]).unwrap();
        assert_eq!(j.value, 7.0);
        assert!(j.grad.iter().all(|g| *g == 0.0));
        assert!(j.hess.iter().all(|h| *h == 0.0));
    }

    #[test]
    fn bilinear_jet() {
        let f = parse("w1*w2", &names(&["w1", "w2"])).unwrap();
        let j = eval_jet2(&f, &[2.0, 3.0]).unwrap();
        assert_eq!(j.value, 6.0);
        assert_eq!(j.grad, vec![3.0, 2.0]);
        assert_eq!(j.hess, vec![0.0, 1.0, 1.0, 0.0]);
    }

    #[test]
    fn domain_errors_name_the_subexpression() {
        let v = names(&["x", "z"]);
        let f = parse("sqrt(z^2 - x^2)", &v).unwrap();
        let err = f.value(&[2.0, 1.0]).unwrap_err();
        assert_eq!(err.kind, DomainErrorKind::SqrtNegative);
        assert_eq!(err.subexpr, "z^2 - x^2");
        assert!(f.value(&[1.0, 1.0]).is_ok());
        assert_eq!(
            eval_jet2(&f, &[1.0, 1.0]).unwrap_err().kind,
            DomainErrorKind::SqrtZero
        );
        let g = parse("1/(x - z)", &v).unwrap();
        let err = g.value(&[1.0, 1.0]).unwrap_err();
        assert_eq!(err.kind, DomainErrorKind::DivisionByZero);
        assert_eq!(err.subexpr, "x - z");
    }

    #[test]
    fn display_round_trips_through_parser() {
        let v = names(&["a", "b"]);
        for src in ["-(a + b)^2*sin(a)/b", "a - (b - a)", "(a/b)^(3/2)", "-a^-1"] {
            let f = parse(src, &v).unwrap();
            let again = parse(&f.to_string(), &v).unwrap();
            assert_eq!(f, again, "{src} printed as {f}");
        }
    }
}
