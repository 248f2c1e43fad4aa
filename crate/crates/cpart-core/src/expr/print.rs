//! Canonical expression rendering: spaces around binary operators, no
//! redundant parentheses. The output re-parses to a structurally equal tree.

use super::{Expr, ExprKind};

/// Binding strength used to decide where parentheses are needed. Mirrors the
/// parser's precedence ladder.
fn level(kind: &ExprKind) -> u8 {
    use ExprKind::*;
    match kind {
        Or(_, _) => 1,
        And(_, _) => 2,
        Eq(_, _) | Ne(_, _) => 3,
        Lt(_, _) | Le(_, _) | Gt(_, _) | Ge(_, _) => 4,
        Add(_, _) | Sub(_, _) => 5,
        // The method-call dot lives at the multiplicative level, so `Call`
        // shares it; as a right operand of `*` it needs parentheses.
        Mul(_, _) | Div(_, _) | Mod(_, _) | Call { .. } => 6,
        Neg(_) | Not(_) => 7,
        Pow(_, _) => 8,
        _ => 9,
    }
}

pub fn pretty(expr: &Expr) -> String {
    let mut out = String::new();
    write(expr, &mut out);
    out
}

fn write(expr: &Expr, out: &mut String) {
    use ExprKind::*;
    let lv = level(&expr.kind);
    // All binary levels are left-associative: the left child may share the
    // parent's level, the right child must bind strictly tighter.
    let mut bin = |l: &Expr, op: &str, r: &Expr, out: &mut String| {
        child(l, lv, out);
        out.push_str(" ");
        out.push_str(op);
        out.push_str(" ");
        child(r, lv + 1, out);
    };
    match &expr.kind {
        Or(l, r) => bin(l, "||", r, out),
        And(l, r) => bin(l, "&&", r, out),
        Eq(l, r) => bin(l, "==", r, out),
        Ne(l, r) => bin(l, "!=", r, out),
        Lt(l, r) => bin(l, "<", r, out),
        Le(l, r) => bin(l, "<=", r, out),
        Gt(l, r) => bin(l, ">", r, out),
        Ge(l, r) => bin(l, ">=", r, out),
        Add(l, r) => bin(l, "+", r, out),
        Sub(l, r) => bin(l, "-", r, out),
        Mul(l, r) => bin(l, "*", r, out),
        Div(l, r) => bin(l, "/", r, out),
        Mod(l, r) => bin(l, "%", r, out),
        Pow(l, r) => {
            // Power is `UnaryExpressionNotPlusMinus ^ UnaryExpression`: the
            // base must be a primary, the exponent may be unary.
            child(l, 9, out);
            out.push_str(" ^ ");
            child(r, 7, out);
        }
        Neg(inner) => {
            out.push('-');
            child(inner, 7, out);
        }
        Not(inner) => {
            out.push('!');
            child(inner, 7, out);
        }
        IntLit(v) => out.push_str(&v.to_string()),
        RealLit(v) => out.push_str(&render_real(v)),
        StrLit(s) => {
            out.push('"');
            for c in s.chars() {
                match c {
                    '\n' => out.push_str("\\n"),
                    '\t' => out.push_str("\\t"),
                    '\r' => out.push_str("\\r"),
                    '\x08' => out.push_str("\\b"),
                    '\x0c' => out.push_str("\\f"),
                    '\\' => out.push_str("\\\\"),
                    '"' => out.push_str("\\\""),
                    other => out.push(other),
                }
            }
            out.push('"');
        }
        CharLit(c) => {
            out.push('\'');
            out.push(*c);
            out.push('\'');
        }
        BoolLit(b) => out.push_str(if *b { "true" } else { "false" }),
        SetLit(els) => {
            out.push('{');
            for (i, e) in els.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write(e, out);
            }
            out.push('}');
        }
        Var(name) => out.push_str(name),
        EnumLit { value, .. } => out.push_str(value),
        Call { recv, op, args } => {
            // The dot sits at multiplicative level; receivers at or above
            // that level print bare, anything looser gets parentheses.
            child(recv, 6, out);
            out.push('.');
            out.push_str(op);
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write(a, out);
            }
            out.push(')');
        }
    }
}

fn child(expr: &Expr, min_level: u8, out: &mut String) {
    if level(&expr.kind) < min_level {
        out.push('(');
        write(expr, out);
        out.push(')');
    } else {
        write(expr, out);
    }
}

/// Renders an exact rational as a source-form real literal. Rationals whose
/// denominator is not of the form 2^a·5^b have no finite decimal expansion;
/// those cannot be produced by the lexer and render as a division that
/// evaluates to the same value.
fn render_real(v: &num_rational::BigRational) -> String {
    use num_bigint::BigInt;
    use num_traits::{Signed, Zero};
    if v.is_integer() {
        return format!("{}.0", v.numer());
    }
    let mut den = v.denom().abs();
    let mut twos = 0u32;
    let mut fives = 0u32;
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if den != BigInt::from(1) {
        return format!("({}.0 / {}.0)", v.numer(), v.denom());
    }
    let k = twos.max(fives);
    let scaled = (v.numer() * BigInt::from(10).pow(k)) / v.denom();
    let neg = scaled.is_negative();
    let digits = scaled.abs().to_string();
    let digits = if digits.len() <= k as usize {
        format!("{}{}", "0".repeat(k as usize + 1 - digits.len()), digits)
    } else {
        digits
    };
    let split = digits.len() - k as usize;
    format!(
        "{}{}.{}",
        if neg { "-" } else { "" },
        &digits[..split],
        &digits[split..]
    )
}
