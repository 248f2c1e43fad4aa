//! Reference interpreter for the expression language.
//!
//! Evaluation is dynamically typed over `Value` and total on well-typed
//! inputs except for the documented partial operations (division by zero,
//! out-of-range `charAt`/`substring`, negative prefix lengths, negative power
//! exponents), which return `EvalError` — the caller reads that as "this
//! binding does not satisfy the expression", not as a crash.
//!
//! Semantics pinned here, where the operation tables are silent:
//! - one-argument `substring(i)` takes the suffix starting at `i` (`0 <= i <=
//!   length`); the two-argument form is `[begin, end)` with `0 <= begin <=
//!   end <= length`;
//! - `indexOf` returns -1 when absent; the two-argument form returns -1 for a
//!   start offset outside `[0, length]`;
//! - hexadecimal characters are exactly `[0-9a-fA-F]`; zero of them is an
//!   even number; the `...inFirstChars(i)` family inspects the first
//!   `min(i, length)` characters and errors on `i < 0`;
//! - `MixedCase` needs at least one lowercase and one uppercase letter;
//!   `Alphanumeric` needs a non-empty all-alphanumeric string; `isLegal` is
//!   letter, digit or space;
//! - `A.includes(B)` holds when `B` is a non-empty subset of `A` (this is the
//!   reading every worked example requires: an empty set is never reported as
//!   included);
//! - `%` and `/` on integers truncate toward zero; `^` needs a non-negative
//!   integer exponent; mixed Int/Real arithmetic is exact rational.

use super::{Expr, ExprKind, Pos, Value};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum EvalError {
    #[error("{pos}: division by zero")]
    DivisionByZero { pos: Pos },
    #[error("{pos}: {op}: index {index} out of range")]
    IndexOutOfRange { pos: Pos, op: String, index: String },
    #[error("{pos}: unbound variable `{name}`")]
    UnboundVariable { pos: Pos, name: String },
    #[error("{pos}: {op}: negative argument {value}")]
    NegativeArgument { pos: Pos, op: String, value: String },
    #[error("{pos}: type mismatch in {op}: {detail}")]
    TypeMismatch { pos: Pos, op: String, detail: String },
}

/// Evaluation context: variable bindings plus the enumeration tables used to
/// resolve bare identifiers in not-yet-type-checked trees.
#[derive(Debug, Clone, Default)]
pub struct EvalContext {
    pub bindings: BTreeMap<String, Value>,
    pub enums: BTreeMap<String, Vec<String>>,
}

impl EvalContext {
    pub fn new(bindings: BTreeMap<String, Value>) -> Self {
        EvalContext { bindings, enums: BTreeMap::new() }
    }

    fn lookup(&self, name: &str, pos: Pos) -> Result<Value, EvalError> {
        if let Some(v) = self.bindings.get(name) {
            return Ok(v.clone());
        }
        for (ty, values) in &self.enums {
            if values.iter().any(|v| v == name) {
                return Ok(Value::Enum { ty: ty.clone(), value: name.to_string() });
            }
        }
        Err(EvalError::UnboundVariable { pos, name: name.to_string() })
    }
}

/// Evaluates `expr` under `ctx`. Deterministic; errors signal an infeasible
/// binding for the partial operations.
pub fn evaluate(expr: &Expr, ctx: &EvalContext) -> Result<Value, EvalError> {
    use ExprKind::*;
    let pos = expr.pos;
    match &expr.kind {
        Or(l, r) => {
            // Short circuit: the right side is not evaluated when the left
            // already decides, so partial-operation errors cannot leak out of
            // an unreachable branch.
            if as_bool(evaluate(l, ctx)?, pos, "||")? {
                Ok(Value::Bool(true))
            } else {
                Ok(Value::Bool(as_bool(evaluate(r, ctx)?, pos, "||")?))
            }
        }
        And(l, r) => {
            if !as_bool(evaluate(l, ctx)?, pos, "&&")? {
                Ok(Value::Bool(false))
            } else {
                Ok(Value::Bool(as_bool(evaluate(r, ctx)?, pos, "&&")?))
            }
        }
        Not(inner) => Ok(Value::Bool(!as_bool(evaluate(inner, ctx)?, pos, "!")?)),
        Eq(l, r) => Ok(Value::Bool(values_equal(
            &evaluate(l, ctx)?,
            &evaluate(r, ctx)?,
        ))),
        Ne(l, r) => Ok(Value::Bool(!values_equal(
            &evaluate(l, ctx)?,
            &evaluate(r, ctx)?,
        ))),
        Lt(l, r) => compare(evaluate(l, ctx)?, evaluate(r, ctx)?, pos, "<", |o| o.is_lt()),
        Le(l, r) => compare(evaluate(l, ctx)?, evaluate(r, ctx)?, pos, "<=", |o| o.is_le()),
        Gt(l, r) => compare(evaluate(l, ctx)?, evaluate(r, ctx)?, pos, ">", |o| o.is_gt()),
        Ge(l, r) => compare(evaluate(l, ctx)?, evaluate(r, ctx)?, pos, ">=", |o| o.is_ge()),
        Add(l, r) => arith(evaluate(l, ctx)?, evaluate(r, ctx)?, pos, ArithOp::Add),
        Sub(l, r) => arith(evaluate(l, ctx)?, evaluate(r, ctx)?, pos, ArithOp::Sub),
        Mul(l, r) => arith(evaluate(l, ctx)?, evaluate(r, ctx)?, pos, ArithOp::Mul),
        Div(l, r) => arith(evaluate(l, ctx)?, evaluate(r, ctx)?, pos, ArithOp::Div),
        Mod(l, r) => arith(evaluate(l, ctx)?, evaluate(r, ctx)?, pos, ArithOp::Mod),
        Pow(l, r) => {
            let base = evaluate(l, ctx)?;
            let exp = evaluate(r, ctx)?;
            let e = match exp {
                Value::Int(i) if !i.is_negative() => i,
                Value::Int(i) => {
                    return Err(EvalError::NegativeArgument {
                        pos,
                        op: "^".into(),
                        value: i.to_string(),
                    })
                }
                other => {
                    return Err(EvalError::TypeMismatch {
                        pos,
                        op: "^".into(),
                        detail: format!("exponent must be a non-negative integer, got {other:?}"),
                    })
                }
            };
            let e = e.to_u32().ok_or_else(|| EvalError::NegativeArgument {
                pos,
                op: "^".into(),
                value: "exponent too large".into(),
            })?;
            match base {
                Value::Int(b) => Ok(Value::Int(b.pow(e))),
                Value::Real(b) => Ok(Value::Real(num_traits::pow::Pow::pow(b, e as i32))),
                other => Err(EvalError::TypeMismatch {
                    pos,
                    op: "^".into(),
                    detail: format!("base must be numeric, got {other:?}"),
                }),
            }
        }
        Neg(inner) => match evaluate(inner, ctx)? {
            Value::Int(i) => Ok(Value::Int(-i)),
            Value::Real(r) => Ok(Value::Real(-r)),
            other => Err(EvalError::TypeMismatch {
                pos,
                op: "-".into(),
                detail: format!("expected a number, got {other:?}"),
            }),
        },
        IntLit(v) => Ok(Value::Int(v.clone())),
        RealLit(v) => Ok(Value::Real(v.clone())),
        StrLit(v) => Ok(Value::Str(v.clone())),
        CharLit(v) => Ok(Value::Char(*v)),
        BoolLit(v) => Ok(Value::Bool(*v)),
        SetLit(els) => {
            let mut set = BTreeSet::new();
            for e in els {
                match evaluate(e, ctx)? {
                    Value::Int(i) => {
                        set.insert(i);
                    }
                    other => {
                        return Err(EvalError::TypeMismatch {
                            pos,
                            op: "set literal".into(),
                            detail: format!("elements must be integers, got {other:?}"),
                        })
                    }
                }
            }
            Ok(Value::IntSet(set))
        }
        Var(name) => ctx.lookup(name, pos),
        EnumLit { ty, value } => Ok(Value::Enum { ty: ty.clone(), value: value.clone() }),
        Call { recv, op, args } => {
            let recv_v = evaluate(recv, ctx)?;
            let mut arg_vs = Vec::with_capacity(args.len());
            for a in args {
                arg_vs.push(evaluate(a, ctx)?);
            }
            builtin_call(&recv_v, op, &arg_vs, pos)
        }
    }
}

/// True iff `expr` evaluates to Boolean true; evaluation errors and non-true
/// results both count as "does not hold".
pub fn expr_holds(expr: &Expr, ctx: &EvalContext) -> bool {
    matches!(evaluate(expr, ctx), Ok(Value::Bool(true)))
}

/// Collects the free variable names of an expression. Enumeration literals
/// resolved by the type checker are excluded; on unchecked trees a bare
/// enumeration identifier still reads as a variable.
pub fn free_vars(expr: &Expr) -> BTreeSet<String> {
    fn walk(expr: &Expr, out: &mut BTreeSet<String>) {
        use ExprKind::*;
        match &expr.kind {
            Or(l, r) | And(l, r) | Eq(l, r) | Ne(l, r) | Lt(l, r) | Le(l, r) | Gt(l, r)
            | Ge(l, r) | Add(l, r) | Sub(l, r) | Mul(l, r) | Div(l, r) | Mod(l, r)
            | Pow(l, r) => {
                walk(l, out);
                walk(r, out);
            }
            Neg(e) | Not(e) => walk(e, out),
            SetLit(els) => els.iter().for_each(|e| walk(e, out)),
            Var(name) => {
                out.insert(name.clone());
            }
            Call { recv, args, .. } => {
                walk(recv, out);
                args.iter().for_each(|a| walk(a, out));
            }
            IntLit(_) | RealLit(_) | StrLit(_) | CharLit(_) | BoolLit(_) | EnumLit { .. } => {}
        }
    }
    let mut out = BTreeSet::new();
    walk(expr, &mut out);
    out
}

fn as_bool(v: Value, pos: Pos, op: &str) -> Result<bool, EvalError> {
    match v {
        Value::Bool(b) => Ok(b),
        other => Err(EvalError::TypeMismatch {
            pos,
            op: op.into(),
            detail: format!("expected Boolean, got {other:?}"),
        }),
    }
}

fn values_equal(a: &Value, b: &Value) -> bool {
    match (a, b) {
        // Int/Real comparisons promote exactly.
        (Value::Int(i), Value::Real(r)) | (Value::Real(r), Value::Int(i)) => {
            r == &BigRational::from(i.clone())
        }
        _ => a == b,
    }
}

fn compare(
    l: Value,
    r: Value,
    pos: Pos,
    op: &str,
    f: impl Fn(std::cmp::Ordering) -> bool,
) -> Result<Value, EvalError> {
    let ord = match (&l, &r) {
        (Value::Int(a), Value::Int(b)) => a.cmp(b),
        (Value::Real(a), Value::Real(b)) => a.cmp(b),
        (Value::Int(a), Value::Real(b)) => BigRational::from(a.clone()).cmp(b),
        (Value::Real(a), Value::Int(b)) => a.cmp(&BigRational::from(b.clone())),
        _ => {
            return Err(EvalError::TypeMismatch {
                pos,
                op: op.into(),
                detail: format!("relational operands must be numeric, got {l:?} and {r:?}"),
            })
        }
    };
    Ok(Value::Bool(f(ord)))
}

enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
}

fn arith(l: Value, r: Value, pos: Pos, op: ArithOp) -> Result<Value, EvalError> {
    use ArithOp::*;
    match (&l, &r) {
        (Value::Int(a), Value::Int(b)) => match op {
            Add => Ok(Value::Int(a + b)),
            Sub => Ok(Value::Int(a - b)),
            Mul => Ok(Value::Int(a * b)),
            Div => {
                if b.is_zero() {
                    return Err(EvalError::DivisionByZero { pos });
                }
                // Truncated (Java) division.
                Ok(Value::Int(a / b))
            }
            Mod => {
                if b.is_zero() {
                    return Err(EvalError::DivisionByZero { pos });
                }
                Ok(Value::Int(a % b))
            }
        },
        _ => {
            let a = to_rational(&l, pos)?;
            let b = to_rational(&r, pos)?;
            match op {
                Add => Ok(Value::Real(a + b)),
                Sub => Ok(Value::Real(a - b)),
                Mul => Ok(Value::Real(a * b)),
                Div => {
                    if b.is_zero() {
                        return Err(EvalError::DivisionByZero { pos });
                    }
                    Ok(Value::Real(a / b))
                }
                Mod => {
                    if b.is_zero() {
                        return Err(EvalError::DivisionByZero { pos });
                    }
                    // Truncated remainder over rationals.
                    let q = (&a / &b).trunc();
                    Ok(Value::Real(a - b * q))
                }
            }
        }
    }
}

fn to_rational(v: &Value, pos: Pos) -> Result<BigRational, EvalError> {
    match v {
        Value::Int(i) => Ok(BigRational::from(i.clone())),
        Value::Real(r) => Ok(r.clone()),
        other => Err(EvalError::TypeMismatch {
            pos,
            op: "arithmetic".into(),
            detail: format!("expected a number, got {other:?}"),
        }),
    }
}

fn is_hex(c: char) -> bool {
    c.is_ascii_hexdigit()
}

/// Counts hexadecimal characters among the first `min(limit, len)` chars.
fn hex_count_prefix(s: &str, limit: usize) -> usize {
    s.chars().take(limit).filter(|c| is_hex(*c)).count()
}

fn builtin_call(recv: &Value, op: &str, args: &[Value], pos: Pos) -> Result<Value, EvalError> {
    match recv {
        Value::Str(s) => string_op(s, op, args, pos),
        Value::Char(c) => char_op(*c, op, args, pos),
        Value::IntSet(set) => set_op(set, op, args, pos),
        other => Err(EvalError::TypeMismatch {
            pos,
            op: op.into(),
            detail: format!("type {:?} has no operations", other.sem_type()),
        }),
    }
}

fn want_str<'a>(args: &'a [Value], i: usize, op: &str, pos: Pos) -> Result<&'a str, EvalError> {
    match args.get(i) {
        Some(Value::Str(s)) => Ok(s),
        other => Err(EvalError::TypeMismatch {
            pos,
            op: op.into(),
            detail: format!("argument {i} must be a string, got {other:?}"),
        }),
    }
}

fn want_int(args: &[Value], i: usize, op: &str, pos: Pos) -> Result<BigInt, EvalError> {
    match args.get(i) {
        Some(Value::Int(v)) => Ok(v.clone()),
        other => Err(EvalError::TypeMismatch {
            pos,
            op: op.into(),
            detail: format!("argument {i} must be an integer, got {other:?}"),
        }),
    }
}

fn want_set<'a>(
    args: &'a [Value],
    i: usize,
    op: &str,
    pos: Pos,
) -> Result<&'a BTreeSet<BigInt>, EvalError> {
    match args.get(i) {
        Some(Value::IntSet(s)) => Ok(s),
        other => Err(EvalError::TypeMismatch {
            pos,
            op: op.into(),
            detail: format!("argument {i} must be an integer set, got {other:?}"),
        }),
    }
}

/// Resolves the string to search in a `str.indexOf`-style operation.
fn index_of(s: &str, needle: &str, from: i64) -> i64 {
    let chars: Vec<char> = s.chars().collect();
    let needle_chars: Vec<char> = needle.chars().collect();
    if from < 0 || from as usize > chars.len() {
        return -1;
    }
    let start = from as usize;
    if needle_chars.is_empty() {
        return from;
    }
    if needle_chars.len() > chars.len() {
        return -1;
    }
    for i in start..=(chars.len().saturating_sub(needle_chars.len())) {
        if chars[i..i + needle_chars.len()] == needle_chars[..] {
            return i as i64;
        }
    }
    -1
}

fn string_op(s: &str, op: &str, args: &[Value], pos: Pos) -> Result<Value, EvalError> {
    let chars: Vec<char> = s.chars().collect();
    let len = chars.len();
    let b = Value::Bool;
    let lc = op.to_ascii_lowercase();

    // Helper for the ...inFirstChars(i) family: first min(i, len) chars;
    // negative i is an error (an infeasible binding, by convention).
    let prefix_limit = |i: &BigInt| -> Result<usize, EvalError> {
        if i.is_negative() {
            return Err(EvalError::NegativeArgument {
                pos,
                op: op.into(),
                value: i.to_string(),
            });
        }
        Ok(i.to_usize().unwrap_or(usize::MAX).min(len))
    };

    match lc.as_str() {
        "charat" => {
            let i = want_int(args, 0, op, pos)?;
            let idx = i.to_i64().unwrap_or(-1);
            if idx < 0 || idx as usize >= len {
                return Err(EvalError::IndexOutOfRange {
                    pos,
                    op: "charAt".into(),
                    index: i.to_string(),
                });
            }
            Ok(Value::Char(chars[idx as usize]))
        }
        "concat" => Ok(Value::Str(format!("{s}{}", want_str(args, 0, op, pos)?))),
        "contains" => Ok(b(index_of(s, want_str(args, 0, op, pos)?, 0) >= 0)),
        "endswith" => Ok(b(s.ends_with(want_str(args, 0, op, pos)?))),
        "equals" => Ok(b(s == want_str(args, 0, op, pos)?)),
        "equalsignorecase" => Ok(b(s.eq_ignore_ascii_case(want_str(args, 0, op, pos)?))),
        "indexof" => {
            let needle = want_str(args, 0, op, pos)?;
            let from = if args.len() > 1 {
                want_int(args, 1, op, pos)?.to_i64().unwrap_or(-1)
            } else {
                0
            };
            Ok(Value::Int(BigInt::from(index_of(s, needle, from))))
        }
        "isempty" => Ok(b(len == 0)),
        "lastindexof" => {
            let needle: Vec<char> = want_str(args, 0, op, pos)?.chars().collect();
            if needle.is_empty() {
                return Ok(Value::Int(BigInt::from(len as i64)));
            }
            let mut found = -1i64;
            if needle.len() <= len {
                for i in (0..=(len - needle.len())).rev() {
                    if chars[i..i + needle.len()] == needle[..] {
                        found = i as i64;
                        break;
                    }
                }
            }
            Ok(Value::Int(BigInt::from(found)))
        }
        "length" => Ok(Value::Int(BigInt::from(len as i64))),
        "startswith" => Ok(b(s.starts_with(want_str(args, 0, op, pos)?))),
        "substring" => {
            let begin = want_int(args, 0, op, pos)?;
            let begin_i = begin.to_i64().unwrap_or(-1);
            let end_i = if args.len() > 1 {
                want_int(args, 1, op, pos)?.to_i64().unwrap_or(-1)
            } else {
                len as i64
            };
            if begin_i < 0 || end_i < begin_i || end_i > len as i64 {
                return Err(EvalError::IndexOutOfRange {
                    pos,
                    op: "substring".into(),
                    index: format!("{begin_i}..{end_i}"),
                });
            }
            Ok(Value::Str(
                chars[begin_i as usize..end_i as usize].iter().collect(),
            ))
        }
        "alphanumeric" => Ok(b(len > 0 && chars.iter().all(|c| c.is_ascii_alphanumeric()))),
        "alllowercasecharacters" => Ok(b(chars.iter().all(|c| c.is_ascii_lowercase()))),
        "alluppercasecharacters" => Ok(b(chars.iter().all(|c| c.is_ascii_uppercase()))),
        "allnumericalcharacters" => Ok(b(len > 0 && chars.iter().all(|c| c.is_ascii_digit()))),
        "mixedcase" => Ok(b(chars.iter().any(|c| c.is_ascii_lowercase())
            && chars.iter().any(|c| c.is_ascii_uppercase()))),
        "mixedcasehexadecimalcharacters" => Ok(b(chars
            .iter()
            .any(|c| is_hex(*c) && c.is_ascii_lowercase())
            && chars.iter().any(|c| is_hex(*c) && c.is_ascii_uppercase()))),
        "alllowercasehexadecimal" => {
            Ok(b(chars.iter().all(|c| is_hex(*c) && !c.is_ascii_uppercase())))
        }
        "alluppercasehexadecimal" => {
            Ok(b(chars.iter().all(|c| is_hex(*c) && !c.is_ascii_lowercase())))
        }
        "nohexadecimalcharacters" => Ok(b(!chars.iter().any(|c| is_hex(*c)))),
        "allhexadecimalcharacters" => Ok(b(chars.iter().all(|c| is_hex(*c)))),
        "oddnumberofhexadecimalcharacters" => Ok(b(hex_count_prefix(s, len) % 2 == 1)),
        "evennumberofhexadecimalcharacters" => Ok(b(hex_count_prefix(s, len) % 2 == 0)),
        "mixhexadecimalnonhexadecimalcharacters" => Ok(b(chars.iter().any(|c| is_hex(*c))
            && chars.iter().any(|c| !is_hex(*c)))),
        "nohexadecimalcharactersinfirstchars" => {
            let limit = prefix_limit(&want_int(args, 0, op, pos)?)?;
            Ok(b(hex_count_prefix(s, limit) == 0))
        }
        "allhexadecimalcharactersinfirstchars" => {
            let limit = prefix_limit(&want_int(args, 0, op, pos)?)?;
            Ok(b(hex_count_prefix(s, limit) == limit))
        }
        "mixhexadecimalnonhexadecimalcharactersinfirstchars" => {
            let limit = prefix_limit(&want_int(args, 0, op, pos)?)?;
            let hex = hex_count_prefix(s, limit);
            Ok(b(hex > 0 && hex < limit))
        }
        "evennumberofhexadecimalcharactersinfirstchars" => {
            let limit = prefix_limit(&want_int(args, 0, op, pos)?)?;
            Ok(b(hex_count_prefix(s, limit) % 2 == 0))
        }
        "oddnumberofhexadecimalcharactersinfirstchars" => {
            let limit = prefix_limit(&want_int(args, 0, op, pos)?)?;
            Ok(b(hex_count_prefix(s, limit) % 2 == 1))
        }
        _ => Err(EvalError::TypeMismatch {
            pos,
            op: op.into(),
            detail: "unknown string operation".into(),
        }),
    }
}

fn char_op(c: char, op: &str, args: &[Value], pos: Pos) -> Result<Value, EvalError> {
    if !args.is_empty() {
        return Err(EvalError::TypeMismatch {
            pos,
            op: op.into(),
            detail: "character operations take no arguments".into(),
        });
    }
    let b = Value::Bool;
    match op.to_ascii_lowercase().as_str() {
        "isdigit" => Ok(b(c.is_ascii_digit())),
        "isletter" => Ok(b(c.is_ascii_alphabetic())),
        "isletterordigit" => Ok(b(c.is_ascii_alphanumeric())),
        "islowercase" => Ok(b(c.is_ascii_lowercase())),
        "islegal" => Ok(b(c.is_ascii_alphanumeric() || c == ' ')),
        "isuppercase" => Ok(b(c.is_ascii_uppercase())),
        "isspace" => Ok(b(c == ' ')),
        "ishexadecimal" => Ok(b(is_hex(c))),
        "asstring" => Ok(Value::Str(c.to_string())),
        _ => Err(EvalError::TypeMismatch {
            pos,
            op: op.into(),
            detail: "unknown character operation".into(),
        }),
    }
}

fn set_op(set: &BTreeSet<BigInt>, op: &str, args: &[Value], pos: Pos) -> Result<Value, EvalError> {
    match op.to_ascii_lowercase().as_str() {
        "includes" => {
            let other = want_set(args, 0, op, pos)?;
            Ok(Value::Bool(!other.is_empty() && other.is_subset(set)))
        }
        "intersection" => {
            let other = want_set(args, 0, op, pos)?;
            Ok(Value::IntSet(set.intersection(other).cloned().collect()))
        }
        "difference" => {
            let other = want_set(args, 0, op, pos)?;
            Ok(Value::IntSet(set.difference(other).cloned().collect()))
        }
        "union" => {
            let other = want_set(args, 0, op, pos)?;
            Ok(Value::IntSet(set.union(other).cloned().collect()))
        }
        "size" => Ok(Value::Int(BigInt::from(set.len() as i64))),
        "isempty" => Ok(Value::Bool(set.is_empty())),
        _ => Err(EvalError::TypeMismatch {
            pos,
            op: op.into(),
            detail: "unknown set operation".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_str;

    fn ctx(pairs: &[(&str, Value)]) -> EvalContext {
        EvalContext::new(pairs.iter().map(|(n, v)| (n.to_string(), v.clone())).collect())
    }

    fn eval_bool(src: &str, c: &EvalContext) -> bool {
        match evaluate(&parse_str(src).unwrap(), c) {
            Ok(Value::Bool(b)) => b,
            other => panic!("{src}: expected bool, got {other:?}"),
        }
    }

    #[test]
    fn triangle_first_test_case() {
        let c = ctx(&[
            ("SA", Value::int(3)),
            ("SB", Value::int(2)),
            ("SC", Value::int(4)),
        ]);
        assert!(eval_bool("SA>0 && SA<SB+SC", &c));
        assert!(eval_bool("SA!=SB && SB!=SC && SC!=SA", &c));
    }

    #[test]
    fn empty_string_is_empty() {
        let c = ctx(&[("S", Value::Str(String::new()))]);
        assert!(eval_bool("S.isEmpty()", &c));
        assert!(eval_bool("S.length()==0", &c));
    }

    #[test]
    fn hex_count_in_first_chars() {
        // 'Gb3' with RLEN=3 has two hex chars ('b' and '3'): an even number.
        let c = ctx(&[("stringS", Value::Str("Gb3".into())), ("RLEN", Value::int(3))]);
        assert!(eval_bool(
            "stringS.EvenNumberOfHexadecimalCharactersinFirstChars(RLEN)",
            &c
        ));
        assert!(eval_bool(
            "stringS.MixHexadecimalNonHexadecimalCharactersinFirstChars(RLEN)",
            &c
        ));
        assert!(!eval_bool(
            "stringS.AllHexadecimalCharactersinFirstChars(RLEN)",
            &c
        ));
    }

    #[test]
    fn substring_suffix_semantics() {
        let c = ctx(&[("S", Value::Str("0MM".into())), ("C", Value::Char('M'))]);
        // One occurrence after index 1: "MM".contains("M") via the suffix.
        assert!(eval_bool(
            "S.substring(S.indexOf(C.asString())+1).contains(C.asString())",
            &c
        ));
        // Two-argument form is [begin, end).
        let c2 = ctx(&[("S", Value::Str("abcd".into()))]);
        assert!(eval_bool("S.substring(1, 3).equals(\"bc\")", &c2));
    }

    #[test]
    fn substring_out_of_range_is_error() {
        let c = ctx(&[("S", Value::Str("ab".into()))]);
        let e = parse_str("S.substring(5).isEmpty()").unwrap();
        assert!(matches!(
            evaluate(&e, &c),
            Err(EvalError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn division_semantics() {
        let c = ctx(&[("a", Value::int(-7)), ("b", Value::int(2))]);
        // Truncated toward zero, like Java.
        assert!(eval_bool("a / b == -3", &c));
        assert!(eval_bool("a % b == -1", &c));
        let e = parse_str("1 / (a + 7) > 0").unwrap();
        assert!(matches!(evaluate(&e, &c), Err(EvalError::DivisionByZero { .. })));
    }

    #[test]
    fn short_circuit_guards_partial_ops() {
        let c = ctx(&[("S", Value::Str(String::new()))]);
        // charAt(0) on "" errors, but the left side already decides.
        assert!(!eval_bool("!S.isEmpty() && S.charAt(0).isDigit()", &c));
    }

    #[test]
    fn set_operations() {
        let s1: BTreeSet<BigInt> = [0, 1, 2, 3].iter().map(|i| BigInt::from(*i)).collect();
        let s2: BTreeSet<BigInt> = [1, 4].iter().map(|i| BigInt::from(*i)).collect();
        let c = ctx(&[("Set1", Value::IntSet(s1)), ("Set2", Value::IntSet(s2))]);
        assert!(eval_bool("Set1.intersection(Set2).size() == 1", &c));
        assert!(eval_bool("Set1.difference(Set2).size() == 3", &c));
        assert!(eval_bool("Set1.union(Set2).size() == 5", &c));
        assert!(!eval_bool("Set1.includes(Set2)", &c));
        assert!(eval_bool("Set1.includes({1, 2})", &c));
        // The empty set is never "included".
        assert!(!eval_bool("Set1.includes({})", &c));
        assert!(eval_bool("{}.isEmpty()", &c));
    }

    #[test]
    fn indexof_with_offset() {
        let c = ctx(&[("S", Value::Str("abcabc".into()))]);
        assert!(eval_bool("S.indexOf(\"bc\") == 1", &c));
        assert!(eval_bool("S.indexOf(\"bc\", 2) == 4", &c));
        assert!(eval_bool("S.indexOf(\"zz\") == -1", &c));
        assert!(eval_bool("S.indexOf(\"a\", -1) == -1", &c));
        assert!(eval_bool("S.lastIndexOf(\"abc\") == 3", &c));
    }

    #[test]
    fn mixed_arithmetic_is_exact_rational() {
        let c = ctx(&[("W", Value::Real(BigRational::new(1.into(), 2.into())))]);
        assert!(eval_bool("W * 2 == 1", &c));
        assert!(eval_bool("W + W == 1", &c));
        assert!(eval_bool("W > 0 && W <= 10", &c));
    }

    #[test]
    fn power_requires_nonnegative_integer_exponent() {
        let c = ctx(&[]);
        assert!(eval_bool("2 ^ 10 == 1024", &c));
        let e = parse_str("2 ^ -1 == 0").unwrap();
        assert!(matches!(
            evaluate(&e, &c),
            Err(EvalError::NegativeArgument { .. })
        ));
    }

    #[test]
    fn char_predicates() {
        let c = ctx(&[("c", Value::Char('F')), ("d", Value::Char(' '))]);
        assert!(eval_bool("c.isHexadecimal() && c.isUpperCase() && c.isLetter()", &c));
        assert!(eval_bool("d.isSpace() && d.isLegal() && !d.isLetterOrDigit()", &c));
        assert!(eval_bool("c.asString().length() == 1", &c));
    }

    #[test]
    fn free_vars_collects_variables() {
        let e = parse_str("stringS.AllHexadecimalCharactersinFirstChars(RLEN)").unwrap();
        let vars: Vec<String> = free_vars(&e).into_iter().collect();
        assert_eq!(vars, vec!["RLEN".to_string(), "stringS".to_string()]);
        assert!(free_vars(&parse_str("5 > 3").unwrap()).is_empty());
    }

    #[test]
    fn mixed_case_families() {
        let yes = ctx(&[("s", Value::Str("aB3".into()))]);
        assert!(eval_bool("s.MixedCase()", &yes));
        assert!(eval_bool("s.Alphanumeric()", &yes));
        let hexmix = ctx(&[("s", Value::Str("aF".into()))]);
        assert!(eval_bool("s.MixedCaseHexadecimalCharacters()", &hexmix));
        let empty = ctx(&[("s", Value::Str(String::new()))]);
        assert!(!eval_bool("s.Alphanumeric()", &empty));
        assert!(!eval_bool("s.MixHexadecimalNonHexadecimalCharacters()", &empty));
        // All-lowercase-hex on the empty string is vacuously true.
        assert!(eval_bool("s.AllLowercaseHexadecimal()", &empty));
    }
}
