//! The choice-expression language: lexer, parser, type checker, printer and
//! reference interpreter.
//!
//! Choice sub-domains are written as Java-style Boolean expressions over the
//! specification's parameters (`SA > 0 && SA < SB + SC`), with per-type method
//! catalogs for strings, characters and integer sets. Selectors use the same
//! syntax restricted to property identifiers.

mod eval;
mod lexer;
mod parser;
mod print;
mod types;

pub use eval::{evaluate, expr_holds, free_vars, EvalContext, EvalError};
pub use lexer::{tokenize, LexError, Token, TokenKind};
pub use parser::{parse, parse_str, ParseErrorKind, ParseExprError};
pub use print::pretty;
pub use types::{type_check, type_check_selector, TypeEnv, TypeError};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

/// Line/column position in the source text, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Semantic type of an expression node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SemType {
    Bool,
    Int,
    Real,
    Str,
    Char,
    IntSet,
    /// Enumeration type, identified by the declaring parameter's type name.
    Enum(String),
}

impl SemType {
    pub fn is_numeric(&self) -> bool {
        matches!(self, SemType::Int | SemType::Real)
    }
}

impl fmt::Display for SemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemType::Bool => write!(f, "Boolean"),
            SemType::Int => write!(f, "Integer"),
            SemType::Real => write!(f, "Real"),
            SemType::Str => write!(f, "String"),
            SemType::Char => write!(f, "Character"),
            SemType::IntSet => write!(f, "IntegerSet"),
            SemType::Enum(name) => write!(f, "Enumeration({name})"),
        }
    }
}

/// A runtime value of the expression language.
///
/// Integers are arbitrary precision and reals are exact rationals so the
/// interpreter can serve as an oracle for the solver backends.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Value {
    Bool(bool),
    Int(BigInt),
    Real(BigRational),
    Str(String),
    Char(char),
    IntSet(BTreeSet<BigInt>),
    Enum { ty: String, value: String },
}

impl Value {
    pub fn sem_type(&self) -> SemType {
        match self {
            Value::Bool(_) => SemType::Bool,
            Value::Int(_) => SemType::Int,
            Value::Real(_) => SemType::Real,
            Value::Str(_) => SemType::Str,
            Value::Char(_) => SemType::Char,
            Value::IntSet(_) => SemType::IntSet,
            Value::Enum { ty, .. } => SemType::Enum(ty.clone()),
        }
    }

    pub fn int(v: i64) -> Value {
        Value::Int(BigInt::from(v))
    }

    /// Renders the value the way test cases print it: integers base-10, reals
    /// as reduced fractions, sets as ascending comma-separated elements.
    pub fn render(&self) -> String {
        match self {
            Value::Bool(b) => b.to_string(),
            Value::Int(i) => i.to_string(),
            Value::Real(r) => {
                if r.is_integer() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Value::Str(s) => s.clone(),
            Value::Char(c) => c.to_string(),
            Value::IntSet(els) => {
                let parts: Vec<String> = els.iter().map(|e| e.to_string()).collect();
                parts.join(", ")
            }
            Value::Enum { value, .. } => value.clone(),
        }
    }
}

/// Expression node kinds. Binary operators keep the grammar's precedence
/// structure; method calls are `Call` with the receiver expression and a
/// canonical builtin-operation name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ExprKind {
    Or(Box<Expr>, Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Eq(Box<Expr>, Box<Expr>),
    Ne(Box<Expr>, Box<Expr>),
    Lt(Box<Expr>, Box<Expr>),
    Le(Box<Expr>, Box<Expr>),
    Gt(Box<Expr>, Box<Expr>),
    Ge(Box<Expr>, Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Mod(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Not(Box<Expr>),
    IntLit(BigInt),
    RealLit(BigRational),
    StrLit(String),
    CharLit(char),
    BoolLit(bool),
    /// `{e1, ..., en}` — integer set literal.
    SetLit(Vec<Expr>),
    Var(String),
    /// A bare identifier resolved to an enumeration value by the type checker.
    EnumLit { ty: String, value: String },
    /// `receiver.op(args)` — builtin operation call.
    Call {
        recv: Box<Expr>,
        op: String,
        args: Vec<Expr>,
    },
}

/// An expression with position info and the type inferred by `type_check`
/// (`None` until checked).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
    pub ty: Option<SemType>,
}

impl Expr {
    pub fn new(kind: ExprKind, pos: Pos) -> Expr {
        Expr { kind, pos, ty: None }
    }

    /// Structural equality ignoring positions and inferred types.
    pub fn structurally_eq(&self, other: &Expr) -> bool {
        use ExprKind::*;
        match (&self.kind, &other.kind) {
            (Or(a, b), Or(c, d))
            | (And(a, b), And(c, d))
            | (Eq(a, b), Eq(c, d))
            | (Ne(a, b), Ne(c, d))
            | (Lt(a, b), Lt(c, d))
            | (Le(a, b), Le(c, d))
            | (Gt(a, b), Gt(c, d))
            | (Ge(a, b), Ge(c, d))
            | (Add(a, b), Add(c, d))
            | (Sub(a, b), Sub(c, d))
            | (Mul(a, b), Mul(c, d))
            | (Div(a, b), Div(c, d))
            | (Mod(a, b), Mod(c, d))
            | (Pow(a, b), Pow(c, d)) => a.structurally_eq(c) && b.structurally_eq(d),
            (Neg(a), Neg(b)) | (Not(a), Not(b)) => a.structurally_eq(b),
            (IntLit(a), IntLit(b)) => a == b,
            (RealLit(a), RealLit(b)) => a == b,
            (StrLit(a), StrLit(b)) => a == b,
            (CharLit(a), CharLit(b)) => a == b,
            (BoolLit(a), BoolLit(b)) => a == b,
            (SetLit(a), SetLit(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.structurally_eq(y))
            }
            (Var(a), Var(b)) => a == b,
            // An unresolved identifier and its enum resolution denote the same
            // source text.
            (Var(a), EnumLit { value, .. }) | (EnumLit { value, .. }, Var(a)) => a == value,
            (EnumLit { value: a, .. }, EnumLit { value: b, .. }) => a == b,
            (
                Call { recv: r1, op: o1, args: a1 },
                Call { recv: r2, op: o2, args: a2 },
            ) => {
                o1 == o2
                    && r1.structurally_eq(r2)
                    && a1.len() == a2.len()
                    && a1.iter().zip(a2).all(|(x, y)| x.structurally_eq(y))
            }
            _ => false,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", pretty(self))
    }
}
