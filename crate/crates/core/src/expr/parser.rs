use super::ast::{Exponent, Func, Node};
use super::lexer::{tokenize, Spanned, Tok};
use super::{ParseError, ParseErrorKind};

/// Recursive-descent parser over the token stream.
///
/// ```text
/// expr    := term (('+' | '-') term)*
/// term    := unary (('*' | '/') unary)*
/// unary   := '-' unary | '+' unary | power
/// power   := primary ('^' unary)?
/// primary := number | name | func '(' expr ')' | '(' expr ')'
/// ```
pub(crate) struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    vars: &'a [String],
    src_len: usize,
}

impl<'a> Parser<'a> {
    pub fn new(src: &str, vars: &'a [String]) -> Result<Self, ParseError> {
        Ok(Self {
            toks: tokenize(src)?,
            pos: 0,
            vars,
            src_len: src.len(),
        })
    }

    pub fn parse_all(mut self) -> Result<Node, ParseError> {
        if self.toks.is_empty() {
            return Err(ParseError {
                offset: 1,
                kind: ParseErrorKind::Empty,
            });
        }
        let node = self.expr(None)?;
        if let Some(t) = self.peek() {
            let kind = if t.tok == Tok::RParen {
                ParseErrorKind::Unbalanced
            } else {
                ParseErrorKind::Unexpected(t.tok.describe())
            };
            return Err(ParseError {
                offset: t.offset,
                kind,
            });
        }
        Ok(node)
    }

    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn end_offset(&self) -> usize {
        self.src_len + 1
    }

    fn starts_operand(tok: &Tok) -> bool {
        matches!(
            tok,
            Tok::Num(_) | Tok::Ident(_) | Tok::LParen | Tok::Minus | Tok::Plus
        )
    }

    /// Fails at the operator `op` when no operand follows it.
    fn require_operand(&self, op: Option<&Spanned>) -> Result<(), ParseError> {
        let ok = self.peek().is_some_and(|t| Self::starts_operand(&t.tok));
        if ok {
            return Ok(());
        }
        Err(match op {
            Some(op) => ParseError {
                offset: op.offset,
                kind: ParseErrorKind::MissingOperand(op.tok.describe()),
            },
            None => match self.peek() {
                Some(t) => ParseError {
                    offset: t.offset,
                    kind: ParseErrorKind::Unexpected(t.tok.describe()),
                },
                None => ParseError {
                    offset: self.end_offset(),
                    kind: ParseErrorKind::UnexpectedEnd,
                },
            },
        })
    }

    fn expr(&mut self, lead: Option<&Spanned>) -> Result<Node, ParseError> {
        self.require_operand(lead)?;
        let mut lhs = self.term()?;
        while let Some(t) = self.peek().cloned() {
            let make: fn(Box<Node>, Box<Node>) -> Node = match t.tok {
                Tok::Plus => Node::Add,
                Tok::Minus => Node::Sub,
                _ => break,
            };
            self.bump();
            self.require_operand(Some(&t))?;
            let rhs = self.term()?;
            lhs = make(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.unary()?;
        while let Some(t) = self.peek().cloned() {
            let make: fn(Box<Node>, Box<Node>) -> Node = match t.tok {
                Tok::Star => Node::Mul,
                Tok::Slash => Node::Div,
                _ => break,
            };
            self.bump();
            self.require_operand(Some(&t))?;
            let rhs = self.unary()?;
            lhs = make(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Node, ParseError> {
        match self.peek().cloned() {
            Some(t) if t.tok == Tok::Minus => {
                self.bump();
                self.require_operand(Some(&t))?;
                let inner = self.unary()?;
                Ok(match inner {
                    Node::Const(c) => Node::Const(-c),
                    other => Node::Neg(Box::new(other)),
                })
            }
            Some(t) if t.tok == Tok::Plus => {
                self.bump();
                self.require_operand(Some(&t))?;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Node, ParseError> {
        let base = self.primary()?;
        match self.peek().cloned() {
            Some(t) if t.tok == Tok::Caret => {
                self.bump();
                self.require_operand(Some(&t))?;
                let start = self.peek().map_or(self.end_offset(), |s| s.offset);
                let exp = self.unary()?;
                let exponent = fold_exponent(&exp).ok_or(ParseError {
                    offset: start,
                    kind: ParseErrorKind::BadExponent,
                })?;
                Ok(Node::Pow(Box::new(base), exponent))
            }
            _ => Ok(base),
        }
    }

    fn primary(&mut self) -> Result<Node, ParseError> {
        let Some(t) = self.bump() else {
            return Err(ParseError {
                offset: self.end_offset(),
                kind: ParseErrorKind::UnexpectedEnd,
            });
        };
        match t.tok {
            Tok::Num(v) => Ok(Node::Const(v)),
            Tok::LParen => {
                let inner = self.expr(None)?;
                self.close(t.offset)?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                if self.peek().is_some_and(|n| n.tok == Tok::LParen) {
                    let func = Func::from_name(&name).ok_or(ParseError {
                        offset: t.offset,
                        kind: ParseErrorKind::UnknownFunction(name.clone()),
                    })?;
                    let open = self.bump().map_or(t.offset, |o| o.offset);
                    let arg = self.expr(None)?;
                    self.close(open)?;
                    return Ok(Node::Call(func, Box::new(arg)));
                }
                match self.vars.iter().position(|v| *v == name) {
                    Some(i) => Ok(Node::Var(i)),
                    None if Func::from_name(&name).is_some() => Err(ParseError {
                        offset: t.offset,
                        kind: ParseErrorKind::Unexpected(format!("function '{name}' without '('")),
                    }),
                    None => Err(ParseError {
                        offset: t.offset,
                        kind: ParseErrorKind::UnknownVariable(name),
                    }),
                }
            }
            other => Err(ParseError {
                offset: t.offset,
                kind: ParseErrorKind::Unexpected(other.describe()),
            }),
        }
    }

    fn close(&mut self, open: usize) -> Result<(), ParseError> {
        match self.bump() {
            Some(t) if t.tok == Tok::RParen => Ok(()),
            Some(t) => Err(ParseError {
                offset: t.offset,
                kind: ParseErrorKind::Unexpected(t.tok.describe()),
            }),
            None => Err(ParseError {
                offset: open,
                kind: ParseErrorKind::Unbalanced,
            }),
        }
    }
}

fn fold_exponent(node: &Node) -> Option<Exponent> {
    if !node.is_const() {
        return None;
    }
    let v: f64 = node.eval::<f64>(&[], &0.0, &[]).ok()?;
    let twice = 2.0 * v;
    let k = twice.round();
    if !v.is_finite() || (twice - k).abs() > 1e-12 || k.abs() > f64::from(i32::MAX) {
        return None;
    }
    let k = k as i32;
    Some(if k % 2 == 0 {
        Exponent::Int(k / 2)
    } else {
        Exponent::Half(k)
    })
}
