//! The category-partition specification model.
//!
//! A specification holds parameters and environment variables; each has a
//! type and one or more categories; each category partitions an implicit
//! value domain into choices. A choice carries a Boolean expression defining
//! its sub-domain, optional properties it declares, an optional selector over
//! properties gating its use in frames, and an optional error/single marker.

use crate::expr::{self, Expr, SemType};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

/// Parameter or environment-variable type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParamType {
    Boolean,
    Character,
    Enumeration(Vec<String>),
    Integer,
    IntegerSet,
    Real,
    String,
}

impl ParamType {
    /// Maps the declaration to the expression-language type. Enumerations are
    /// typed by the owning parameter's name.
    pub fn sem_type(&self, param_name: &str) -> SemType {
        match self {
            ParamType::Boolean => SemType::Bool,
            ParamType::Character => SemType::Char,
            ParamType::Enumeration(_) => SemType::Enum(param_name.to_string()),
            ParamType::Integer => SemType::Int,
            ParamType::IntegerSet => SemType::IntSet,
            ParamType::Real => SemType::Real,
            ParamType::String => SemType::Str,
        }
    }
}

impl fmt::Display for ParamType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamType::Boolean => write!(f, "Boolean"),
            ParamType::Character => write!(f, "Character"),
            ParamType::Enumeration(values) => write!(f, "Enumeration({})", values.join(", ")),
            ParamType::Integer => write!(f, "Integer"),
            ParamType::IntegerSet => write!(f, "IntegerSet"),
            ParamType::Real => write!(f, "Real"),
            ParamType::String => write!(f, "String"),
        }
    }
}

/// Error/single special-case marker on a choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Special {
    #[default]
    None,
    Error,
    Single,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Choice {
    /// 1-based index within the category.
    pub index: u32,
    pub description: String,
    /// Boolean expression defining the choice's sub-domain.
    pub expression: Expr,
    /// Properties this choice declares (true in a frame containing it).
    pub properties: BTreeSet<String>,
    /// Selector over property identifiers gating frame membership.
    pub selector: Option<Expr>,
    pub special: Special,
}

impl Choice {
    pub fn is_error(&self) -> bool {
        self.special == Special::Error
    }

    pub fn is_single(&self) -> bool {
        self.special == Special::Single
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Category {
    /// 1-based index within the parameter.
    pub index: u32,
    pub description: String,
    pub choices: Vec<Choice>,
    /// Index into `choices` (not the 1-based choice index) of the base choice.
    pub base: Option<usize>,
}

impl Category {
    pub fn base_choice(&self) -> Option<&Choice> {
        self.base.map(|i| &self.choices[i])
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Parameter {
    /// Unique positive integer identifier, used in frame listings.
    pub id: u64,
    pub name: String,
    pub ptype: ParamType,
    /// True for environment variables.
    pub is_env: bool,
    pub categories: Vec<Category>,
}

/// A full category-partition specification.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CpSpec {
    pub name: String,
    /// Parameters first, then environment variables, in declaration order.
    pub parameters: Vec<Parameter>,
}

/// Reference to a choice: parameter id, 1-based category index, 1-based
/// choice index. This is the identity used throughout frame listings.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub struct ChoiceRef {
    pub param_id: u64,
    pub cat_index: u32,
    pub choice_index: u32,
}

impl fmt::Display for ChoiceRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}Cat{}Ch{}", self.param_id, self.cat_index, self.choice_index)
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
#[error("choice {reference} not found in the specification")]
pub struct NotFound {
    pub reference: ChoiceRef,
}

impl CpSpec {
    pub fn parameter_by_id(&self, id: u64) -> Option<&Parameter> {
        self.parameters.iter().find(|p| p.id == id)
    }

    pub fn parameter_by_name(&self, name: &str) -> Option<&Parameter> {
        self.parameters.iter().find(|p| p.name == name)
    }

    /// Resolves a choice reference; dangling references are an error, never a
    /// panic.
    pub fn resolve(&self, r: ChoiceRef) -> Result<&Choice, NotFound> {
        let err = NotFound { reference: r };
        let param = self.parameter_by_id(r.param_id).ok_or(err.clone())?;
        if r.cat_index == 0 || r.choice_index == 0 {
            return Err(err);
        }
        let cat = param.categories.get(r.cat_index as usize - 1).ok_or(err.clone())?;
        if cat.index != r.cat_index {
            return Err(err);
        }
        cat.choices.get(r.choice_index as usize - 1).ok_or(err)
    }

    /// The parameter owning a reference, when it resolves.
    pub fn resolve_parameter(&self, r: ChoiceRef) -> Result<&Parameter, NotFound> {
        self.resolve(r)?;
        Ok(self.parameter_by_id(r.param_id).expect("checked by resolve"))
    }

    /// Iterates `(parameter, category)` pairs in declaration order.
    pub fn categories(&self) -> impl Iterator<Item = (&Parameter, &Category)> {
        self.parameters
            .iter()
            .flat_map(|p| p.categories.iter().map(move |c| (p, c)))
    }

    /// Iterates every choice with its reference, in declaration order.
    pub fn choices(&self) -> impl Iterator<Item = (ChoiceRef, &Choice)> {
        self.categories().flat_map(|(p, c)| {
            c.choices.iter().map(move |ch| {
                (
                    ChoiceRef {
                        param_id: p.id,
                        cat_index: c.index,
                        choice_index: ch.index,
                    },
                    ch,
                )
            })
        })
    }

    /// All property names declared by any choice.
    pub fn declared_properties(&self) -> BTreeSet<String> {
        self.choices()
            .flat_map(|(_, ch)| ch.properties.iter().cloned())
            .collect()
    }

    /// Property name -> references of the choices declaring it.
    pub fn property_declarers(&self) -> BTreeMap<String, Vec<ChoiceRef>> {
        let mut map: BTreeMap<String, Vec<ChoiceRef>> = BTreeMap::new();
        for (r, ch) in self.choices() {
            for p in &ch.properties {
                map.entry(p.clone()).or_default().push(r);
            }
        }
        map
    }

    /// The expression-language typing environment induced by the declared
    /// parameters: variable types plus enumeration tables.
    pub fn type_env(&self) -> expr::TypeEnv {
        let mut env = expr::TypeEnv::default();
        for p in &self.parameters {
            env.vars.insert(p.name.clone(), p.ptype.sem_type(&p.name));
            if let ParamType::Enumeration(values) = &p.ptype {
                env.enums.insert(p.name.clone(), values.clone());
            }
        }
        env
    }

    /// Enumeration tables alone, for the evaluator.
    pub fn enum_tables(&self) -> BTreeMap<String, Vec<String>> {
        self.parameters
            .iter()
            .filter_map(|p| match &p.ptype {
                ParamType::Enumeration(values) => Some((p.name.clone(), values.clone())),
                _ => None,
            })
            .collect()
    }
}

/// Stable 32-bit FNV-1a hash of a name, used to assign ids to parameters
/// declared without one. Masked into the positive range.
pub fn stable_id(name: &str) -> u64 {
    let mut hash: u32 = 0x811c9dc5;
    for b in name.as_bytes() {
        hash ^= *b as u32;
        hash = hash.wrapping_mul(0x0100_0193);
    }
    ((hash & 0x7fff_ffff) | 1) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::load_spec;

    const MINI: &str = "\
Parameter(1): A of type Integer
  Category 1 - values
    *Ch 1.1: positive
      A>0
    Ch 1.2: rest
      A<=0
";

    #[test]
    fn resolve_dangling_refs() {
        let spec = load_spec(MINI).unwrap();
        let ok = ChoiceRef { param_id: 1, cat_index: 1, choice_index: 2 };
        assert_eq!(spec.resolve(ok).unwrap().description, "rest");
        for bad in [
            ChoiceRef { param_id: 1, cat_index: 0, choice_index: 1 },
            ChoiceRef { param_id: 1, cat_index: 9, choice_index: 1 },
            ChoiceRef { param_id: 1, cat_index: 1, choice_index: 3 },
            ChoiceRef { param_id: 7, cat_index: 1, choice_index: 1 },
        ] {
            assert!(spec.resolve(bad).is_err(), "{bad} should not resolve");
        }
    }

    #[test]
    fn stable_id_is_positive_and_stable() {
        let a = stable_id("SA");
        assert_eq!(a, stable_id("SA"));
        assert!(a > 0);
        assert!(a <= i32::MAX as u64);
        assert_ne!(stable_id("SA"), stable_id("SB"));
    }
}
