use std::fmt;
use std::sync::Arc;

use crate::scalar::Scalar;

use super::{DomainError, DomainErrorKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Sinh,
    Cosh,
    Sqrt,
}

impl Func {
    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Sqrt => "sqrt",
        }
    }
}

/// Exponent of a power node. `Half(k)` means `k/2` with `k` odd.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exponent {
    Int(i32),
    Half(i32),
}

impl Exponent {
    pub fn value(self) -> f64 {
        match self {
            Exponent::Int(k) => f64::from(k),
            Exponent::Half(k) => f64::from(k) / 2.0,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Int(k) if *k >= 0 => write!(f, "{k}"),
            Exponent::Int(k) => write!(f, "({k})"),
            Exponent::Half(k) => write!(f, "({k}/2)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Const(f64),
    Var(usize),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Neg(Box<Node>),
    Pow(Box<Node>, Exponent),
    Call(Func, Box<Node>),
}

impl Node {
    pub fn is_const(&self) -> bool {
        match self {
            Node::Const(_) => true,
            Node::Var(_) => false,
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                a.is_const() && b.is_const()
            }
            Node::Neg(a) | Node::Pow(a, _) | Node::Call(_, a) => a.is_const(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Node::Const(c) if *c == 0.0)
    }

    /// Largest variable index referenced, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Node::Const(_) => None,
            Node::Var(i) => Some(*i),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                a.max_var().max(b.max_var())
            }
            Node::Neg(a) | Node::Pow(a, _) | Node::Call(_, a) => a.max_var(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Node::Add(..) | Node::Sub(..) => 1,
            Node::Mul(..) | Node::Div(..) => 2,
            Node::Neg(_) => 3,
            Node::Pow(..) => 4,
            Node::Const(c) if *c < 0.0 => 3,
            Node::Const(_) | Node::Var(_) | Node::Call(..) => 5,
        }
    }

    pub(crate) fn write(&self, names: &[String], f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let child = |n: &Node, min: u8, f: &mut fmt::Formatter<'_>| -> fmt::Result {
            if n.precedence() < min {
                write!(f, "(")?;
                n.write(names, f)?;
                write!(f, ")")
            } else {
                n.write(names, f)
            }
        };
        match self {
            Node::Const(c) => write!(f, "{c}"),
            Node::Var(i) => match names.get(*i) {
                Some(n) => write!(f, "{n}"),
                None => write!(f, "#{i}"),
            },
            Node::Add(a, b) => {
                child(a, 1, f)?;
                write!(f, " + ")?;
                child(b, 2, f)
            }
            Node::Sub(a, b) => {
                child(a, 1, f)?;
                write!(f, " - ")?;
                child(b, 2, f)
            }
            Node::Mul(a, b) => {
                child(a, 2, f)?;
                write!(f, "*")?;
                child(b, 3, f)
            }
            Node::Div(a, b) => {
                child(a, 2, f)?;
                write!(f, "/")?;
                child(b, 3, f)
            }
            Node::Neg(a) => {
                write!(f, "-")?;
                child(a, 3, f)
            }
            Node::Pow(a, e) => {
                child(a, 5, f)?;
                write!(f, "^{e}")
            }
            Node::Call(func, a) => {
                write!(f, "{}(", func.name())?;
                a.write(names, f)?;
                write!(f, ")")
            }
        }
    }

    pub(crate) fn eval<S: Scalar>(
        &self,
        vars: &[S],
        template: &S,
        names: &[String],
    ) -> Result<S, DomainError> {
        let domain = |kind, node: &Node| DomainError {
            kind,
            subexpr: Displayed(node, names).to_string(),
        };
        Ok(match self {
            Node::Const(c) => template.lift(*c),
            Node::Var(i) => vars[*i].clone(),
            Node::Add(a, b) => a.eval(vars, template, names)? + b.eval(vars, template, names)?,
            Node::Sub(a, b) => a.eval(vars, template, names)? - b.eval(vars, template, names)?,
            Node::Mul(a, b) => a.eval(vars, template, names)? * b.eval(vars, template, names)?,
            Node::Div(a, b) => {
                let num = a.eval(vars, template, names)?;
                let den = b.eval(vars, template, names)?;
                if den.re() == 0.0 {
                    return Err(domain(DomainErrorKind::DivisionByZero, b));
                }
                num / den
            }
            Node::Neg(a) => -a.eval(vars, template, names)?,
            Node::Pow(a, e) => {
                let base = a.eval(vars, template, names)?;
                match *e {
                    Exponent::Int(k) => {
                        if k < 0 && base.re() == 0.0 {
                            return Err(domain(DomainErrorKind::DivisionByZero, self));
                        }
                        base.powi(k)
                    }
                    Exponent::Half(k) => {
                        let root = checked_sqrt::<S>(&base, a, names)?;
                        if k < 0 && root.re() == 0.0 {
                            return Err(domain(DomainErrorKind::DivisionByZero, self));
                        }
                        root.powi(k)
                    }
                }
            }
            Node::Call(func, a) => {
                let x = a.eval(vars, template, names)?;
                match func {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Sinh => x.sinh(),
                    Func::Cosh => x.cosh(),
                    Func::Sqrt => checked_sqrt::<S>(&x, a, names)?,
                }
            }
        })
    }
}

fn checked_sqrt<S: Scalar>(x: &S, arg: &Node, names: &[String]) -> Result<S, DomainError> {
    let v = x.re();
    let kind = if v < 0.0 || v.is_nan() {
        Some(DomainErrorKind::SqrtNegative)
    } else if v == 0.0 && S::HAS_DERIVATIVES {
        Some(DomainErrorKind::SqrtZero)
    } else {
        None
    };
    match kind {
        Some(kind) => Err(DomainError {
            kind,
            subexpr: Displayed(arg, names).to_string(),
        }),
        None => Ok(x.sqrt()),
    }
}

pub(crate) struct Displayed<'a>(pub &'a Node, pub &'a [String]);

impl fmt::Display for Displayed<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.write(self.1, f)
    }
}

/// A parsed smooth real function of a fixed list of named variables.
#[derive(Clone, Debug)]
pub struct ScalarExpr {
    node: Node,
    vars: Arc<[String]>,
}

impl PartialEq for ScalarExpr {
    fn eq(&self, other: &Self) -> bool {
        self.node == other.node && self.vars == other.vars
    }
}

impl ScalarExpr {
    pub fn from_node(node: Node, vars: Arc<[String]>) -> Self {
        Self { node, vars }
    }

    pub fn constant(c: f64, vars: Arc<[String]>) -> Self {
        Self::from_node(Node::Const(c), vars)
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn shared_vars(&self) -> Arc<[String]> {
        self.vars.clone()
    }

    pub fn is_const(&self) -> bool {
        self.node.is_const()
    }

    pub fn is_zero(&self) -> bool {
        self.node.is_zero()
    }

    /// Evaluate at `point`, which must have one entry per variable.
    ///
    /// # Panics
    /// If `point` is empty or shorter than the variable list.
    pub fn eval<S: Scalar>(&self, point: &[S]) -> Result<S, DomainError> {
        assert!(
            point.len() >= self.vars.len() && !point.is_empty(),
            "expression over {} variables evaluated at a point of length {}",
            self.vars.len(),
            point.len()
        );
        self.node.eval(point, &point[0], &self.vars)
    }

    pub fn value(&self, point: &[f64]) -> Result<f64, DomainError> {
        self.eval(point)
    }
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.node.write(&self.vars, f)
    }
}
