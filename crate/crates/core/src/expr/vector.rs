//! Vector and covector expressions written over basis symbols.
//!
//! A vector field on coordinates `(x, y, z)` is written with the symbols
//! `dx, dy, dz` standing for the coordinate basis, e.g. `2*(dx + y*dz)`.
//! The same notation is used for 1-forms. The expression must be linear in
//! the basis symbols; each component becomes a [`ScalarExpr`] over the
//! coordinates.

use std::sync::Arc;

use super::ast::{Node, ScalarExpr};
use super::parser::Parser;
use super::{ParseError, ParseErrorKind};
use crate::scalar::Scalar;

/// A vector (or covector) of scalar expressions, one per coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorExpr {
    components: Vec<ScalarExpr>,
    source: String,
}

impl VectorExpr {
    pub fn from_components(components: Vec<ScalarExpr>, source: impl Into<String>) -> Self {
        Self {
            components,
            source: source.into(),
        }
    }

    pub fn components(&self) -> &[ScalarExpr] {
        &self.components
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn eval<S: Scalar>(&self, point: &[S]) -> Result<Vec<S>, super::DomainError> {
        self.components.iter().map(|c| c.eval(point)).collect()
    }
}

enum Linear {
    Scalar(Node),
    Vector(Vec<Option<Node>>),
}

fn basis_name(coord: &str) -> String {
    format!("d{coord}")
}

/// Parse `source` as a linear combination of the basis symbols `d<coord>`.
pub fn parse_vector(source: &str, coords: &[String]) -> Result<VectorExpr, ParseError> {
    let n = coords.len();
    let mut names: Vec<String> = coords.to_vec();
    for c in coords {
        let b = basis_name(c);
        if !coords.contains(&b) {
            names.push(b);
        }
    }
    let basis_index = |var: usize| -> Option<usize> {
        if var < n {
            return None;
        }
        let name = &names[var];
        coords.iter().position(|c| basis_name(c) == *name)
    };
    let node = Parser::new(source, &names)?.parse_all()?;
    let split = split(&node, n, &basis_index).map_err(|kind| ParseError { offset: 1, kind })?;
    let vars: Arc<[String]> = coords.to_vec().into();
    let components = match split {
        Linear::Vector(parts) => parts
            .into_iter()
            .map(|p| ScalarExpr::from_node(p.unwrap_or(Node::Const(0.0)), vars.clone()))
            .collect(),
        Linear::Scalar(node) if node.is_zero() => (0..n)
            .map(|_| ScalarExpr::constant(0.0, vars.clone()))
            .collect(),
        Linear::Scalar(_) => {
            return Err(ParseError {
                offset: 1,
                kind: ParseErrorKind::NotLinear("no basis symbol appears".into()),
            })
        }
    };
    Ok(VectorExpr {
        components,
        source: source.to_string(),
    })
}

fn add(a: Option<Node>, b: Option<Node>, negate_b: bool) -> Option<Node> {
    match (a, b) {
        (None, None) => None,
        (Some(a), None) => Some(a),
        (None, Some(b)) if negate_b => Some(Node::Neg(Box::new(b))),
        (None, Some(b)) => Some(b),
        (Some(a), Some(b)) if negate_b => Some(Node::Sub(Box::new(a), Box::new(b))),
        (Some(a), Some(b)) => Some(Node::Add(Box::new(a), Box::new(b))),
    }
}

fn scale(parts: Vec<Option<Node>>, by: &Node, divide: bool, left: bool) -> Vec<Option<Node>> {
    parts
        .into_iter()
        .map(|p| {
            p.map(|p| {
                if divide {
                    Node::Div(Box::new(p), Box::new(by.clone()))
                } else if left {
                    Node::Mul(Box::new(by.clone()), Box::new(p))
                } else {
                    Node::Mul(Box::new(p), Box::new(by.clone()))
                }
            })
        })
        .collect()
}

fn split(
    node: &Node,
    n: usize,
    basis_index: &dyn Fn(usize) -> Option<usize>,
) -> Result<Linear, ParseErrorKind> {
    let nonlinear = |what: &str| ParseErrorKind::NotLinear(what.to_string());
    Ok(match node {
        Node::Const(_) => Linear::Scalar(node.clone()),
        Node::Var(i) => match basis_index(*i) {
            Some(k) => {
                let mut parts = vec![None; n];
                parts[k] = Some(Node::Const(1.0));
                Linear::Vector(parts)
            }
            None => Linear::Scalar(node.clone()),
        },
        Node::Add(a, b) | Node::Sub(a, b) => {
            let neg = matches!(node, Node::Sub(..));
            match (split(a, n, basis_index)?, split(b, n, basis_index)?) {
                (Linear::Scalar(x), Linear::Scalar(y)) => Linear::Scalar(if neg {
                    Node::Sub(Box::new(x), Box::new(y))
                } else {
                    Node::Add(Box::new(x), Box::new(y))
                }),
                (Linear::Vector(x), Linear::Vector(y)) => {
                    Linear::Vector(x.into_iter().zip(y).map(|(p, q)| add(p, q, neg)).collect())
                }
                (Linear::Scalar(s), Linear::Vector(v)) | (Linear::Vector(v), Linear::Scalar(s))
                    if s.is_zero() =>
                {
                    let v = if neg && matches!(**a, Node::Const(_)) {
                        v.into_iter().map(|p| add(None, p, true)).collect()
                    } else {
                        v
                    };
                    Linear::Vector(v)
                }
                _ => return Err(ParseErrorKind::MixedTerms),
            }
        }
        Node::Mul(a, b) => match (split(a, n, basis_index)?, split(b, n, basis_index)?) {
            (Linear::Scalar(x), Linear::Scalar(y)) => {
                Linear::Scalar(Node::Mul(Box::new(x), Box::new(y)))
            }
            (Linear::Scalar(s), Linear::Vector(v)) => Linear::Vector(scale(v, &s, false, true)),
            (Linear::Vector(v), Linear::Scalar(s)) => Linear::Vector(scale(v, &s, false, false)),
            _ => return Err(nonlinear("product of two basis terms")),
        },
        Node::Div(a, b) => match (split(a, n, basis_index)?, split(b, n, basis_index)?) {
            (Linear::Scalar(x), Linear::Scalar(y)) => {
                Linear::Scalar(Node::Div(Box::new(x), Box::new(y)))
            }
            (Linear::Vector(v), Linear::Scalar(s)) => Linear::Vector(scale(v, &s, true, false)),
            _ => return Err(nonlinear("division by a basis term")),
        },
        Node::Neg(a) => match split(a, n, basis_index)? {
            Linear::Scalar(x) => Linear::Scalar(Node::Neg(Box::new(x))),
            Linear::Vector(v) => {
                Linear::Vector(v.into_iter().map(|p| add(None, p, true)).collect())
            }
        },
        Node::Pow(a, e) => match split(a, n, basis_index)? {
            Linear::Scalar(x) => Linear::Scalar(Node::Pow(Box::new(x), *e)),
            Linear::Vector(_) => return Err(nonlinear("power of a basis term")),
        },
        Node::Call(f, a) => match split(a, n, basis_index)? {
            Linear::Scalar(x) => Linear::Scalar(Node::Call(*f, Box::new(x))),
            Linear::Vector(_) => return Err(nonlinear("function of a basis term")),
        },
    })
}
