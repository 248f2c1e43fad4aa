//! Recursive-descent parser for the expression grammar.
//!
//! Precedence, loosest to tightest: `||`, `&&`, `==`/`!=`, relationals,
//! additive, multiplicative (which also hosts the method-call dot), unary
//! `+ - !`, power `^`, primaries. `true`/`false` parse as Boolean literals;
//! other bare identifiers stay `Var` until the type checker resolves
//! enumeration values.
//!
//! The grammar tokenizes `& | << ~` and brackets a `ListExpression`, but
//! assigns them no value semantics; they are rejected here with a dedicated
//! error.

use super::lexer::{tokenize, LexError, Token, TokenKind};
use super::{Expr, ExprKind, Pos};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ParseErrorKind {
    #[error("lexical error: {0}")]
    Lex(#[from] LexError),
    #[error("{pos}: expected {expected}, found {found}")]
    Unexpected { pos: Pos, expected: String, found: String },
    #[error("{pos}: unexpected end of expression (expected {expected})")]
    Eof { pos: Pos, expected: String },
    #[error("{pos}: operator {op} is tokenized but has no semantics and is not supported")]
    UnsupportedOperator { pos: Pos, op: String },
    #[error("{pos}: expected a method call after `.`")]
    ExpectedMethodCall { pos: Pos },
    #[error("{pos}: trailing input after expression: {found}")]
    TrailingInput { pos: Pos, found: String },
}

#[derive(Debug, Clone, Error, PartialEq)]
#[error("{kind}")]
pub struct ParseExprError {
    pub kind: ParseErrorKind,
}

impl From<ParseErrorKind> for ParseExprError {
    fn from(kind: ParseErrorKind) -> Self {
        ParseExprError { kind }
    }
}

impl From<LexError> for ParseExprError {
    fn from(e: LexError) -> Self {
        ParseExprError { kind: ParseErrorKind::Lex(e) }
    }
}

/// Convenience: tokenize and parse a complete source string.
pub fn parse_str(source: &str) -> Result<Expr, ParseExprError> {
    parse(&tokenize(source)?)
}

/// Parses a complete token stream into an expression.
pub fn parse(tokens: &[Token]) -> Result<Expr, ParseExprError> {
    let mut p = Parser { tokens, at: 0 };
    let expr = p.expression()?;
    if let Some(t) = p.peek() {
        return Err(ParseErrorKind::TrailingInput {
            pos: t.pos,
            found: t.kind.describe(),
        }
        .into());
    }
    Ok(expr)
}

struct Parser<'t> {
    tokens: &'t [Token],
    at: usize,
}

impl<'t> Parser<'t> {
    fn peek(&self) -> Option<&'t Token> {
        self.tokens.get(self.at)
    }

    fn bump(&mut self) -> Option<&'t Token> {
        let t = self.tokens.get(self.at);
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    fn last_pos(&self) -> Pos {
        self.tokens.last().map(|t| t.pos).unwrap_or_default()
    }

    fn expect(&mut self, kind: &TokenKind, what: &str) -> Result<&'t Token, ParseExprError> {
        match self.peek() {
            Some(t) if &t.kind == kind => Ok(self.bump().unwrap()),
            Some(t) => Err(ParseErrorKind::Unexpected {
                pos: t.pos,
                expected: what.into(),
                found: t.kind.describe(),
            }
            .into()),
            None => Err(ParseErrorKind::Eof { pos: self.last_pos(), expected: what.into() }.into()),
        }
    }

    fn expression(&mut self) -> Result<Expr, ParseExprError> {
        let mut left = self.and_expression()?;
        while matches!(self.peek().map(|t| &t.kind), Some(TokenKind::OrOr)) {
            let pos = self.bump().unwrap().pos;
            let right = self.and_expression()?;
            left = Expr::new(ExprKind::Or(Box::new(left), Box::new(right)), pos);
        }
        Ok(left)
    }

    fn and_expression(&mut self) -> Result<Expr, ParseExprError> {
        let mut left = self.equality_expression()?;
        while matches!(self.peek().map(|t| &t.kind), Some(TokenKind::AndAnd)) {
            let pos = self.bump().unwrap().pos;
            let right = self.equality_expression()?;
            left = Expr::new(ExprKind::And(Box::new(left), Box::new(right)), pos);
        }
        Ok(left)
    }

    fn equality_expression(&mut self) -> Result<Expr, ParseExprError> {
        let mut left = self.relational_expression()?;
        loop {
            let make = match self.peek().map(|t| &t.kind) {
                Some(TokenKind::EqEq) => ExprKind::Eq as fn(_, _) -> _,
                Some(TokenKind::Ne) => ExprKind::Ne as fn(_, _) -> _,
                _ => break,
            };
            let pos = self.bump().unwrap().pos;
            let right = self.relational_expression()?;
            left = Expr::new(make(Box::new(left), Box::new(right)), pos);
        }
        Ok(left)
    }

    fn relational_expression(&mut self) -> Result<Expr, ParseExprError> {
        let mut left = self.additive_expression()?;
        loop {
            let make = match self.peek().map(|t| &t.kind) {
                Some(TokenKind::Lt) => ExprKind::Lt as fn(_, _) -> _,
                Some(TokenKind::Gt) => ExprKind::Gt as fn(_, _) -> _,
                Some(TokenKind::Le) => ExprKind::Le as fn(_, _) -> _,
                Some(TokenKind::Ge) => ExprKind::Ge as fn(_, _) -> _,
                _ => break,
            };
            let pos = self.bump().unwrap().pos;
            let right = self.additive_expression()?;
            left = Expr::new(make(Box::new(left), Box::new(right)), pos);
        }
        Ok(left)
    }

    fn additive_expression(&mut self) -> Result<Expr, ParseExprError> {
        let mut left = self.multiplicative_expression()?;
        loop {
            let make = match self.peek().map(|t| &t.kind) {
                Some(TokenKind::Plus) => ExprKind::Add as fn(_, _) -> _,
                Some(TokenKind::Minus) => ExprKind::Sub as fn(_, _) -> _,
                _ => break,
            };
            let pos = self.bump().unwrap().pos;
            let right = self.multiplicative_expression()?;
            left = Expr::new(make(Box::new(left), Box::new(right)), pos);
        }
        Ok(left)
    }

    /// Multiplicative level; the method-call dot lives here per the grammar,
    /// so calls left-associate with `*`, `/` and `%`.
    fn multiplicative_expression(&mut self) -> Result<Expr, ParseExprError> {
        let mut left = self.unary_expression()?;
        loop {
            match self.peek().map(|t| &t.kind) {
                Some(TokenKind::Star) | Some(TokenKind::Slash) | Some(TokenKind::Percent) => {
                    let tok = self.bump().unwrap();
                    let right = self.unary_expression()?;
                    let kind = match tok.kind {
                        TokenKind::Star => ExprKind::Mul(Box::new(left), Box::new(right)),
                        TokenKind::Slash => ExprKind::Div(Box::new(left), Box::new(right)),
                        _ => ExprKind::Mod(Box::new(left), Box::new(right)),
                    };
                    left = Expr::new(kind, tok.pos);
                }
                Some(TokenKind::Dot) => {
                    let pos = self.bump().unwrap().pos;
                    left = self.method_call(left, pos)?;
                }
                _ => break,
            }
        }
        Ok(left)
    }

    fn method_call(&mut self, recv: Expr, dot_pos: Pos) -> Result<Expr, ParseExprError> {
        let name = match self.peek() {
            Some(Token { kind: TokenKind::Ident(name), .. }) => {
                let name = name.clone();
                self.bump();
                name
            }
            _ => return Err(ParseErrorKind::ExpectedMethodCall { pos: dot_pos }.into()),
        };
        if !matches!(self.peek().map(|t| &t.kind), Some(TokenKind::LParen)) {
            return Err(ParseErrorKind::ExpectedMethodCall { pos: dot_pos }.into());
        }
        self.bump();
        let mut args = Vec::new();
        if !matches!(self.peek().map(|t| &t.kind), Some(TokenKind::RParen)) {
            loop {
                args.push(self.expression()?);
                match self.peek().map(|t| &t.kind) {
                    Some(TokenKind::Comma) => {
                        self.bump();
                    }
                    _ => break,
                }
            }
        }
        self.expect(&TokenKind::RParen, "`)`")?;
        Ok(Expr::new(
            ExprKind::Call { recv: Box::new(recv), op: name, args },
            dot_pos,
        ))
    }

    fn unary_expression(&mut self) -> Result<Expr, ParseExprError> {
        match self.peek().map(|t| &t.kind) {
            Some(TokenKind::Plus) => {
                self.bump();
                self.unary_expression()
            }
            Some(TokenKind::Minus) => {
                let pos = self.bump().unwrap().pos;
                let inner = self.unary_expression()?;
                Ok(Expr::new(ExprKind::Neg(Box::new(inner)), pos))
            }
            Some(TokenKind::Not) => {
                let pos = self.bump().unwrap().pos;
                let inner = self.unary_expression()?;
                Ok(Expr::new(ExprKind::Not(Box::new(inner)), pos))
            }
            Some(TokenKind::Tilde) | Some(TokenKind::BitAnd) | Some(TokenKind::BitOr)
            | Some(TokenKind::Shl) => {
                let t = self.peek().unwrap();
                Err(ParseErrorKind::UnsupportedOperator {
                    pos: t.pos,
                    op: t.kind.describe(),
                }
                .into())
            }
            _ => self.power_expression(),
        }
    }

    fn power_expression(&mut self) -> Result<Expr, ParseExprError> {
        let base = self.primary()?;
        if matches!(self.peek().map(|t| &t.kind), Some(TokenKind::Caret)) {
            let pos = self.bump().unwrap().pos;
            let exp = self.unary_expression()?;
            return Ok(Expr::new(ExprKind::Pow(Box::new(base), Box::new(exp)), pos));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseExprError> {
        let t = match self.peek() {
            Some(t) => t,
            None => {
                return Err(ParseErrorKind::Eof {
                    pos: self.last_pos(),
                    expected: "an expression".into(),
                }
                .into())
            }
        };
        let pos = t.pos;
        match &t.kind {
            TokenKind::IntLit(v) => {
                let v = v.clone();
                self.bump();
                Ok(Expr::new(ExprKind::IntLit(v), pos))
            }
            TokenKind::RealLit(v) => {
                let v = v.clone();
                self.bump();
                Ok(Expr::new(ExprKind::RealLit(v), pos))
            }
            TokenKind::StrLit(v) => {
                let v = v.clone();
                self.bump();
                Ok(Expr::new(ExprKind::StrLit(v), pos))
            }
            TokenKind::CharLit(v) => {
                let v = *v;
                self.bump();
                Ok(Expr::new(ExprKind::CharLit(v), pos))
            }
            TokenKind::Ident(name) => {
                let name = name.clone();
                self.bump();
                match name.as_str() {
                    "true" => Ok(Expr::new(ExprKind::BoolLit(true), pos)),
                    "false" => Ok(Expr::new(ExprKind::BoolLit(false), pos)),
                    _ => Ok(Expr::new(ExprKind::Var(name), pos)),
                }
            }
            TokenKind::LParen => {
                self.bump();
                let inner = self.expression()?;
                self.expect(&TokenKind::RParen, "`)`")?;
                Ok(inner)
            }
            TokenKind::LBrace => {
                self.bump();
                let mut elements = Vec::new();
                if !matches!(self.peek().map(|t| &t.kind), Some(TokenKind::RBrace)) {
                    loop {
                        elements.push(self.expression()?);
                        match self.peek().map(|t| &t.kind) {
                            Some(TokenKind::Comma) => {
                                self.bump();
                            }
                            _ => break,
                        }
                    }
                }
                self.expect(&TokenKind::RBrace, "`}`")?;
                Ok(Expr::new(ExprKind::SetLit(elements), pos))
            }
            TokenKind::LBracket => Err(ParseErrorKind::UnsupportedOperator {
                pos,
                op: "bracketed list expression `[...]`".into(),
            }
            .into()),
            other => Err(ParseErrorKind::Unexpected {
                pos,
                expected: "an expression".into(),
                found: other.describe(),
            }
            .into()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::pretty;

    fn p(src: &str) -> Expr {
        parse_str(src).unwrap()
    }

    #[test]
    fn addition_binds_tighter_than_relational() {
        let e = p("SA<SB+SC");
        match &e.kind {
            ExprKind::Lt(l, r) => {
                assert!(matches!(l.kind, ExprKind::Var(ref n) if n == "SA"));
                assert!(matches!(r.kind, ExprKind::Add(_, _)));
            }
            other => panic!("expected Lt, got {other:?}"),
        }
    }

    #[test]
    fn and_binds_tighter_than_or() {
        let e = p("a && b || c");
        match &e.kind {
            ExprKind::Or(l, r) => {
                assert!(matches!(l.kind, ExprKind::And(_, _)));
                assert!(matches!(r.kind, ExprKind::Var(ref n) if n == "c"));
            }
            other => panic!("expected Or, got {other:?}"),
        }
    }

    #[test]
    fn nested_method_calls() {
        let e = p("!(InputString.contains(InputCharacter.asString()))");
        match &e.kind {
            ExprKind::Not(inner) => match &inner.kind {
                ExprKind::Call { recv, op, args } => {
                    assert_eq!(op, "contains");
                    assert!(matches!(recv.kind, ExprKind::Var(ref n) if n == "InputString"));
                    assert_eq!(args.len(), 1);
                    assert!(matches!(
                        args[0].kind,
                        ExprKind::Call { ref op, .. } if op == "asString"
                    ));
                }
                other => panic!("expected call, got {other:?}"),
            },
            other => panic!("expected Not, got {other:?}"),
        }
    }

    #[test]
    fn method_call_chains_left() {
        let e = p("S.substring(1).contains(T)");
        match &e.kind {
            ExprKind::Call { recv, op, .. } => {
                assert_eq!(op, "contains");
                assert!(matches!(recv.kind, ExprKind::Call { ref op, .. } if op == "substring"));
            }
            other => panic!("expected call, got {other:?}"),
        }
    }

    #[test]
    fn boolean_literals() {
        assert!(matches!(p("true").kind, ExprKind::BoolLit(true)));
        assert!(matches!(
            p("S.contains(T)==false").kind,
            ExprKind::Eq(_, ref r) if matches!(r.kind, ExprKind::BoolLit(false))
        ));
    }

    #[test]
    fn set_literal() {
        match p("{1, 4, 7, 16}").kind {
            ExprKind::SetLit(els) => assert_eq!(els.len(), 4),
            other => panic!("expected set literal, got {other:?}"),
        }
        match p("{}").kind {
            ExprKind::SetLit(els) => assert!(els.is_empty()),
            other => panic!("expected set literal, got {other:?}"),
        }
    }

    #[test]
    fn unsupported_operators_rejected() {
        for src in ["a & b", "a | b", "a << b", "~a", "[1, 2]"] {
            match parse_str(src) {
                Err(ParseExprError { kind: ParseErrorKind::UnsupportedOperator { .. } }) => {}
                other => panic!("{src}: expected UnsupportedOperator, got {other:?}"),
            }
        }
    }

    #[test]
    fn power_is_tighter_than_unary_minus() {
        let e = p("-2^2");
        assert!(matches!(e.kind, ExprKind::Neg(ref inner)
            if matches!(inner.kind, ExprKind::Pow(_, _))));
    }

    #[test]
    fn parse_error_has_position() {
        match parse_str("SA >") {
            Err(ParseExprError { kind: ParseErrorKind::Eof { .. } }) => {}
            other => panic!("expected eof error, got {other:?}"),
        }
    }

    #[test]
    fn print_parse_round_trip() {
        for src in [
            "SA>0 && SA<SB+SC",
            "(a || b) && !c",
            "S.substring(S.indexOf(C.asString())+1).contains(C.asString())==true",
            "Set1.intersection(Set2).isEmpty()",
            "x % 400 == 0 || (x % 4 == 0 && x % 100 != 0)",
            "-SA + 3 * -2 ^ 2",
            "{1, 2, 3}.size() > 0",
        ] {
            let e1 = p(src);
            let e2 = p(&pretty(&e1));
            assert!(e1.structurally_eq(&e2), "round trip failed for {src}");
        }
    }
}
