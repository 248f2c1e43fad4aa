//! Type checking against the builtin operation catalog.
//!
//! Top-level choice expressions and selectors must be Boolean. Int promotes
//! to Real in mixed arithmetic and comparisons; there is no other implicit
//! coercion. `==`/`!=` accept any same-type pair, relationals only numbers.
//!
//! Builtin method names are matched case-insensitively: the catalog has no
//! two names differing only by case, and specifications in the wild spell
//! the long hexadecimal-family names with inconsistent capitalization.

use super::{Expr, ExprKind, Pos, SemType};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum TypeError {
    #[error("{pos}: unknown identifier `{name}`")]
    UnknownIdentifier { pos: Pos, name: String },
    #[error("expression has type {found}, expected Boolean")]
    NotBoolean { found: SemType },
    #[error("{pos}: bad argument for {op}: expected {expected}, found {found}")]
    BadArgument { pos: Pos, op: String, expected: String, found: String },
    #[error("{pos}: type {recv} has no operation `{name}` with {argc} argument(s)")]
    UnknownOperation { pos: Pos, recv: SemType, name: String, argc: usize },
}

/// Typing environment: free-variable types plus the enumeration value tables
/// (type name -> ordered value names).
#[derive(Debug, Clone, Default)]
pub struct TypeEnv {
    pub vars: BTreeMap<String, SemType>,
    pub enums: BTreeMap<String, Vec<String>>,
}

impl TypeEnv {
    /// Resolves a bare identifier as an enumeration value of the expected
    /// type, when one is known from the context.
    fn enum_value(&self, expected: Option<&SemType>, name: &str) -> Option<(String, String)> {
        match expected {
            Some(SemType::Enum(ty)) => {
                let values = self.enums.get(ty)?;
                values
                    .iter()
                    .find(|v| v.as_str() == name)
                    .map(|v| (ty.clone(), v.clone()))
            }
            _ => {
                // No expected type: accept only if the name is unambiguous
                // across all declared enumerations.
                let mut hit = None;
                for (ty, values) in &self.enums {
                    if values.iter().any(|v| v == name) {
                        if hit.is_some() {
                            return None;
                        }
                        hit = Some((ty.clone(), name.to_string()));
                    }
                }
                hit
            }
        }
    }
}

/// Signature of a builtin operation: receiver type, canonical name, argument
/// types, result type.
pub(crate) struct OpSig {
    pub(crate) recv: SemType,
    pub(crate) name: &'static str,
    pub(crate) args: &'static [SemType],
    pub(crate) result: SemType,
}

fn catalog() -> &'static [OpSig] {
    use SemType::*;
    const S: SemType = Str;
    const I: SemType = Int;
    const C: SemType = Char;
    const B: SemType = Bool;
    const SET: SemType = IntSet;
    static CATALOG: &[OpSig] = &[
        // string operations
        OpSig { recv: S, name: "charAt", args: &[I], result: C },
        OpSig { recv: S, name: "concat", args: &[S], result: S },
        OpSig { recv: S, name: "contains", args: &[S], result: B },
        OpSig { recv: S, name: "endsWith", args: &[S], result: B },
        OpSig { recv: S, name: "equals", args: &[S], result: B },
        OpSig { recv: S, name: "equalsIgnoreCase", args: &[S], result: B },
        OpSig { recv: S, name: "indexOf", args: &[S], result: I },
        OpSig { recv: S, name: "indexOf", args: &[S, I], result: I },
        OpSig { recv: S, name: "isEmpty", args: &[], result: B },
        OpSig { recv: S, name: "lastIndexOf", args: &[S], result: I },
        OpSig { recv: S, name: "length", args: &[], result: I },
        OpSig { recv: S, name: "startsWith", args: &[S], result: B },
        OpSig { recv: S, name: "substring", args: &[I], result: S },
        OpSig { recv: S, name: "substring", args: &[I, I], result: S },
        OpSig { recv: S, name: "Alphanumeric", args: &[], result: B },
        OpSig { recv: S, name: "AllLowercaseCharacters", args: &[], result: B },
        OpSig { recv: S, name: "AllUppercaseCharacters", args: &[], result: B },
        OpSig { recv: S, name: "AllNumericalCharacters", args: &[], result: B },
        OpSig { recv: S, name: "MixedCase", args: &[], result: B },
        OpSig { recv: S, name: "MixedCaseHexadecimalCharacters", args: &[], result: B },
        OpSig { recv: S, name: "AllLowercaseHexadecimal", args: &[], result: B },
        OpSig { recv: S, name: "AllUppercaseHexadecimal", args: &[], result: B },
        OpSig { recv: S, name: "NoHexadecimalCharacters", args: &[], result: B },
        OpSig { recv: S, name: "AllHexadecimalCharacters", args: &[], result: B },
        OpSig { recv: S, name: "OddNumberOfHexadecimalCharacters", args: &[], result: B },
        OpSig { recv: S, name: "EvenNumberOfHexadecimalCharacters", args: &[], result: B },
        OpSig { recv: S, name: "MixHexadecimalNonHexadecimalCharacters", args: &[], result: B },
        OpSig { recv: S, name: "NoHexadecimalCharactersinFirstChars", args: &[I], result: B },
        OpSig { recv: S, name: "AllHexadecimalCharactersinFirstChars", args: &[I], result: B },
        OpSig {
            recv: S,
            name: "MixHexadecimalNonHexadecimalCharactersinFirstChars",
            args: &[I],
            result: B,
        },
        OpSig {
            recv: S,
            name: "EvenNumberOfHexadecimalCharactersinFirstChars",
            args: &[I],
            result: B,
        },
        OpSig {
            recv: S,
            name: "OddNumberOfHexadecimalCharactersinFirstChars",
            args: &[I],
            result: B,
        },
        // character operations
        OpSig { recv: C, name: "isDigit", args: &[], result: B },
        OpSig { recv: C, name: "isLetter", args: &[], result: B },
        OpSig { recv: C, name: "isLetterOrDigit", args: &[], result: B },
        OpSig { recv: C, name: "isLowerCase", args: &[], result: B },
        OpSig { recv: C, name: "isLegal", args: &[], result: B },
        OpSig { recv: C, name: "isUpperCase", args: &[], result: B },
        OpSig { recv: C, name: "isSpace", args: &[], result: B },
        OpSig { recv: C, name: "isHexadecimal", args: &[], result: B },
        OpSig { recv: C, name: "asString", args: &[], result: S },
        // integer set operations
        OpSig { recv: SET, name: "includes", args: &[SET], result: B },
        OpSig { recv: SET, name: "intersection", args: &[SET], result: SET },
        OpSig { recv: SET, name: "difference", args: &[SET], result: SET },
        OpSig { recv: SET, name: "union", args: &[SET], result: SET },
        OpSig { recv: SET, name: "size", args: &[], result: I },
        OpSig { recv: SET, name: "isEmpty", args: &[], result: B },
    ];
    CATALOG
}

/// Looks up a builtin by receiver type, case-insensitive name and arity,
/// returning the canonical name and signature.
pub(crate) fn lookup_op(recv: &SemType, name: &str, argc: usize) -> Option<&'static OpSig> {
    catalog()
        .iter()
        .find(|sig| &sig.recv == recv && sig.args.len() == argc && sig.name.eq_ignore_ascii_case(name))
}

/// Type-checks `expr` against `env`, requiring the top level to be Boolean.
/// Returns a new tree with every node's `ty` filled in and bare identifiers
/// resolved to enumeration literals where appropriate.
pub fn type_check(expr: &Expr, env: &TypeEnv) -> Result<Expr, TypeError> {
    let typed = infer(expr, env, None)?;
    match typed.ty.as_ref() {
        Some(SemType::Bool) => Ok(typed),
        Some(other) => Err(TypeError::NotBoolean { found: other.clone() }),
        None => unreachable!("inference always sets a type"),
    }
}

/// Type-checks a selector: every free identifier is a Boolean property.
pub fn type_check_selector(
    expr: &Expr,
    properties: &std::collections::BTreeSet<String>,
) -> Result<Expr, TypeError> {
    let env = TypeEnv {
        vars: properties
            .iter()
            .map(|p| (p.clone(), SemType::Bool))
            .collect(),
        enums: BTreeMap::new(),
    };
    type_check(expr, &env)
}

fn infer(expr: &Expr, env: &TypeEnv, expected: Option<&SemType>) -> Result<Expr, TypeError> {
    use ExprKind::*;
    let pos = expr.pos;
    let with = |kind: ExprKind, ty: SemType| Expr { kind, pos, ty: Some(ty) };

    match &expr.kind {
        Or(l, r) | And(l, r) => {
            let lt = infer_expect(l, env, &SemType::Bool, binop_name(&expr.kind))?;
            let rt = infer_expect(r, env, &SemType::Bool, binop_name(&expr.kind))?;
            let kind = if matches!(expr.kind, Or(_, _)) {
                Or(Box::new(lt), Box::new(rt))
            } else {
                And(Box::new(lt), Box::new(rt))
            };
            Ok(with(kind, SemType::Bool))
        }
        Not(inner) => {
            let it = infer_expect(inner, env, &SemType::Bool, "!")?;
            Ok(with(Not(Box::new(it)), SemType::Bool))
        }
        Eq(l, r) | Ne(l, r) => {
            // Infer one side first so a bare enum literal on the other side
            // can resolve against it.
            let (lt, rt) = infer_pair(l, r, env)?;
            let (a, b) = (lt.ty.clone().unwrap(), rt.ty.clone().unwrap());
            let compatible = a == b || (a.is_numeric() && b.is_numeric());
            if !compatible {
                return Err(TypeError::BadArgument {
                    pos,
                    op: binop_name(&expr.kind).into(),
                    expected: format!("both sides of the same type, left is {a}"),
                    found: b.to_string(),
                });
            }
            let kind = if matches!(expr.kind, Eq(_, _)) {
                Eq(Box::new(lt), Box::new(rt))
            } else {
                Ne(Box::new(lt), Box::new(rt))
            };
            Ok(with(kind, SemType::Bool))
        }
        Lt(l, r) | Le(l, r) | Gt(l, r) | Ge(l, r) => {
            let lt = infer(l, env, None)?;
            let rt = infer(r, env, None)?;
            for side in [&lt, &rt] {
                let t = side.ty.as_ref().unwrap();
                if !t.is_numeric() {
                    return Err(TypeError::BadArgument {
                        pos,
                        op: binop_name(&expr.kind).into(),
                        expected: "Integer or Real".into(),
                        found: t.to_string(),
                    });
                }
            }
            let kind = clone_binop(&expr.kind, lt, rt);
            Ok(with(kind, SemType::Bool))
        }
        Add(l, r) | Sub(l, r) | Mul(l, r) | Div(l, r) | Mod(l, r) | Pow(l, r) => {
            let lt = infer(l, env, None)?;
            let rt = infer(r, env, None)?;
            for side in [&lt, &rt] {
                let t = side.ty.as_ref().unwrap();
                if !t.is_numeric() {
                    return Err(TypeError::BadArgument {
                        pos,
                        op: binop_name(&expr.kind).into(),
                        expected: "Integer or Real".into(),
                        found: t.to_string(),
                    });
                }
            }
            let result = if lt.ty == Some(SemType::Int) && rt.ty == Some(SemType::Int) {
                SemType::Int
            } else {
                SemType::Real
            };
            let kind = clone_binop(&expr.kind, lt, rt);
            Ok(with(kind, result))
        }
        Neg(inner) => {
            let it = infer(inner, env, None)?;
            let t = it.ty.clone().unwrap();
            if !t.is_numeric() {
                return Err(TypeError::BadArgument {
                    pos,
                    op: "-".into(),
                    expected: "Integer or Real".into(),
                    found: t.to_string(),
                });
            }
            Ok(with(Neg(Box::new(it)), t))
        }
        IntLit(v) => Ok(with(IntLit(v.clone()), SemType::Int)),
        RealLit(v) => Ok(with(RealLit(v.clone()), SemType::Real)),
        StrLit(v) => Ok(with(StrLit(v.clone()), SemType::Str)),
        CharLit(v) => Ok(with(CharLit(*v), SemType::Char)),
        BoolLit(v) => Ok(with(BoolLit(*v), SemType::Bool)),
        SetLit(els) => {
            let mut typed = Vec::with_capacity(els.len());
            for e in els {
                typed.push(infer_expect(e, env, &SemType::Int, "integer set literal")?);
            }
            Ok(with(SetLit(typed), SemType::IntSet))
        }
        Var(name) => {
            if let Some(t) = env.vars.get(name) {
                return Ok(with(Var(name.clone()), t.clone()));
            }
            if let Some((ty, value)) = env.enum_value(expected, name) {
                let t = SemType::Enum(ty.clone());
                return Ok(with(EnumLit { ty, value }, t));
            }
            Err(TypeError::UnknownIdentifier { pos, name: name.clone() })
        }
        EnumLit { ty, value } => Ok(with(
            EnumLit { ty: ty.clone(), value: value.clone() },
            SemType::Enum(ty.clone()),
        )),
        Call { recv, op, args } => {
            let recv_t = infer(recv, env, None)?;
            let rt = recv_t.ty.clone().unwrap();
            let sig = lookup_op(&rt, op, args.len()).ok_or_else(|| TypeError::UnknownOperation {
                pos,
                recv: rt.clone(),
                name: op.clone(),
                argc: args.len(),
            })?;
            let mut typed_args = Vec::with_capacity(args.len());
            for (arg, want) in args.iter().zip(sig.args) {
                typed_args.push(infer_expect(arg, env, want, sig.name)?);
            }
            Ok(with(
                Call {
                    recv: Box::new(recv_t),
                    op: sig.name.to_string(),
                    args: typed_args,
                },
                sig.result.clone(),
            ))
        }
    }
}

/// Infers both sides of an equality, letting either side's type resolve a
/// bare enumeration identifier on the other.
fn infer_pair(l: &Expr, r: &Expr, env: &TypeEnv) -> Result<(Expr, Expr), TypeError> {
    match infer(l, env, None) {
        Ok(lt) => {
            let want = lt.ty.clone().unwrap();
            let rt = infer(r, env, Some(&want))?;
            Ok((lt, rt))
        }
        Err(first) => {
            // The left side may itself be a bare enum literal; try resolving
            // it against the right side's type.
            let rt = infer(r, env, None).map_err(|_| first.clone())?;
            let want = rt.ty.clone().unwrap();
            let lt = infer(l, env, Some(&want)).map_err(|_| first)?;
            Ok((lt, rt))
        }
    }
}

fn infer_expect(
    expr: &Expr,
    env: &TypeEnv,
    want: &SemType,
    op: &str,
) -> Result<Expr, TypeError> {
    let typed = infer(expr, env, Some(want))?;
    let got = typed.ty.as_ref().unwrap();
    let ok = got == want || (want == &SemType::Real && got == &SemType::Int);
    if !ok {
        return Err(TypeError::BadArgument {
            pos: typed.pos,
            op: op.into(),
            expected: want.to_string(),
            found: got.to_string(),
        });
    }
    Ok(typed)
}

fn binop_name(kind: &ExprKind) -> &'static str {
    use ExprKind::*;
    match kind {
        Or(_, _) => "||",
        And(_, _) => "&&",
        Eq(_, _) => "==",
        Ne(_, _) => "!=",
        Lt(_, _) => "<",
        Le(_, _) => "<=",
        Gt(_, _) => ">",
        Ge(_, _) => ">=",
        Add(_, _) => "+",
        Sub(_, _) => "-",
        Mul(_, _) => "*",
        Div(_, _) => "/",
        Mod(_, _) => "%",
        Pow(_, _) => "^",
        _ => "?",
    }
}

fn clone_binop(kind: &ExprKind, l: Expr, r: Expr) -> ExprKind {
    use ExprKind::*;
    let (l, r) = (Box::new(l), Box::new(r));
    match kind {
        Lt(_, _) => Lt(l, r),
        Le(_, _) => Le(l, r),
        Gt(_, _) => Gt(l, r),
        Ge(_, _) => Ge(l, r),
        Add(_, _) => Add(l, r),
        Sub(_, _) => Sub(l, r),
        Mul(_, _) => Mul(l, r),
        Div(_, _) => Div(l, r),
        Mod(_, _) => Mod(l, r),
        Pow(_, _) => Pow(l, r),
        _ => unreachable!("clone_binop on non-binary kind"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_str;

    fn env(pairs: &[(&str, SemType)]) -> TypeEnv {
        TypeEnv {
            vars: pairs.iter().map(|(n, t)| (n.to_string(), t.clone())).collect(),
            enums: BTreeMap::new(),
        }
    }

    #[test]
    fn string_length_comparison_is_bool() {
        let e = parse_str("stringS.length()>0").unwrap();
        let t = type_check(&e, &env(&[("stringS", SemType::Str)])).unwrap();
        assert_eq!(t.ty, Some(SemType::Bool));
    }

    #[test]
    fn arithmetic_on_bool_rejected() {
        let e = parse_str("SA + true").unwrap();
        let err = type_check(&e, &env(&[("SA", SemType::Int)])).unwrap_err();
        assert!(matches!(err, TypeError::BadArgument { .. }), "{err}");
    }

    #[test]
    fn set_chain_is_bool() {
        let e = parse_str("Set1.intersection(Set2).isEmpty()").unwrap();
        let t = type_check(
            &e,
            &env(&[("Set1", SemType::IntSet), ("Set2", SemType::IntSet)]),
        )
        .unwrap();
        assert_eq!(t.ty, Some(SemType::Bool));
    }

    #[test]
    fn non_boolean_top_level_rejected() {
        let e = parse_str("SA + 1").unwrap();
        let err = type_check(&e, &env(&[("SA", SemType::Int)])).unwrap_err();
        assert!(matches!(err, TypeError::NotBoolean { .. }));
    }

    #[test]
    fn unknown_identifier_reported() {
        let e = parse_str("Missing > 0").unwrap();
        let err = type_check(&e, &env(&[])).unwrap_err();
        assert!(matches!(err, TypeError::UnknownIdentifier { ref name, .. } if name == "Missing"));
    }

    #[test]
    fn enum_literal_resolves_against_variable() {
        let e = parse_str("ItemType == OrdinaryItem").unwrap();
        let mut env = env(&[("ItemType", SemType::Enum("ItemType".into()))]);
        env.enums.insert(
            "ItemType".into(),
            vec!["OrdinaryItem".into(), "WeightItem".into()],
        );
        let t = type_check(&e, &env).unwrap();
        assert_eq!(t.ty, Some(SemType::Bool));
        match &t.kind {
            ExprKind::Eq(_, r) => {
                assert!(matches!(r.kind, ExprKind::EnumLit { ref value, .. } if value == "OrdinaryItem"))
            }
            other => panic!("expected Eq, got {other:?}"),
        }
    }

    #[test]
    fn enum_value_names_shared_across_types_resolve_by_context() {
        let mut env = env(&[
            ("Other_RAC", SemType::Enum("Other_RAC".into())),
            ("Climb_Inhibit", SemType::Enum("Climb_Inhibit".into())),
        ]);
        env.enums.insert("Other_RAC".into(), vec!["Zero".into(), "One".into(), "Two".into()]);
        env.enums.insert("Climb_Inhibit".into(), vec!["Zero".into(), "One".into()]);
        for src in ["Other_RAC == One", "Climb_Inhibit == One"] {
            let e = parse_str(src).unwrap();
            assert_eq!(type_check(&e, &env).unwrap().ty, Some(SemType::Bool), "{src}");
        }
    }

    #[test]
    fn relational_on_strings_rejected() {
        let e = parse_str("S < T").unwrap();
        let err =
            type_check(&e, &env(&[("S", SemType::Str), ("T", SemType::Str)])).unwrap_err();
        assert!(matches!(err, TypeError::BadArgument { .. }));
    }

    #[test]
    fn equality_on_same_type_pairs_allowed() {
        let cases: Vec<(&str, Vec<(&str, SemType)>)> = vec![
            ("S == T", vec![("S", SemType::Str), ("T", SemType::Str)]),
            ("a == b", vec![("a", SemType::Char), ("b", SemType::Char)]),
            ("A == B", vec![("A", SemType::IntSet), ("B", SemType::IntSet)]),
            ("x == 1.5", vec![("x", SemType::Real)]),
            ("b == true", vec![("b", SemType::Bool)]),
        ];
        for (src, vars) in cases {
            let e = parse_str(src).unwrap();
            assert!(type_check(&e, &env(&vars)).is_ok(), "{src}");
        }
    }

    #[test]
    fn case_insensitive_builtin_lookup() {
        let e = parse_str("s.oddNumberofHexadecimalCharactersinFirstChars(3)").unwrap();
        let t = type_check(&e, &env(&[("s", SemType::Str)])).unwrap();
        match &t.kind {
            ExprKind::Call { op, .. } => {
                assert_eq!(op, "OddNumberOfHexadecimalCharactersinFirstChars")
            }
            other => panic!("expected call, got {other:?}"),
        }
    }

    #[test]
    fn unknown_operation_reported() {
        let e = parse_str("s.reverse()").unwrap();
        let err = type_check(&e, &env(&[("s", SemType::Str)])).unwrap_err();
        assert!(matches!(err, TypeError::UnknownOperation { .. }));
    }

    #[test]
    fn selector_env_is_all_bool() {
        let e = parse_str("!noOccurence && (nominal || small)").unwrap();
        let props = ["noOccurence", "nominal", "small"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert!(type_check_selector(&e, &props).is_ok());
    }
}
