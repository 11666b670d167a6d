//! Innovation and creativity of a design relative to a knowledge base.
//!
//! A knowledge base constrains named design variables to domains. A design
//! instance assigns values to variables. Known variables whose value falls
//! outside the domain are *unexpected* and drive the innovation index I;
//! variables the knowledge base has never seen are *new* and drive the
//! creativity index C. Both share the instance's variable count as
//! denominator, so `I + C <= 1`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::{ratio, Rational};
use crate::{Error, Result};

/// A JSON scalar value of a design variable.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Bool(bool),
    Number(f64),
    Text(String),
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Bool(b) => write!(f, "{b}"),
            Scalar::Number(n) => write!(f, "{n}"),
            Scalar::Text(s) => write!(f, "{s:?}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Bool(b) => s.serialize_bool(*b),
            // Integral values go back out as integers so files round-trip unchanged.
            Scalar::Number(n) if n.fract() == 0.0 && n.abs() < 9.0e15 => s.serialize_i64(*n as i64),
            Scalar::Number(n) => s.serialize_f64(*n),
            Scalar::Text(t) => s.serialize_str(t),
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde_json::Value;
        match Value::deserialize(d)? {
            Value::Bool(b) => Ok(Scalar::Bool(b)),
            Value::Number(n) => n
                .as_f64()
                .map(Scalar::Number)
                .ok_or_else(|| serde::de::Error::custom("number out of range")),
            Value::String(s) => Ok(Scalar::Text(s)),
            other => Err(serde::de::Error::custom(format!(
                "expected a scalar value, found {other}"
            ))),
        }
    }
}

impl From<f64> for Scalar {
    fn from(n: f64) -> Self {
        Scalar::Number(n)
    }
}

impl From<i32> for Scalar {
    fn from(n: i32) -> Self {
        Scalar::Number(n.into())
    }
}

impl From<bool> for Scalar {
    fn from(b: bool) -> Self {
        Scalar::Bool(b)
    }
}

impl From<&str> for Scalar {
    fn from(s: &str) -> Self {
        Scalar::Text(s.to_string())
    }
}

/// Values a variable is expected to take.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum VariableDomain {
    Set(Vec<Scalar>),
    /// Closed numeric interval `[lo, hi]`.
    Interval(f64, f64),
    /// A constraint stated only in prose. Nothing can be checked against it,
    /// so no value is ever unexpected.
    Predicate(String),
    /// Produced when absorbing a non-numeric value into an interval.
    Union(Vec<VariableDomain>),
}

impl VariableDomain {
    pub fn contains(&self, value: &Scalar) -> bool {
        match self {
            VariableDomain::Set(values) => values.contains(value),
            VariableDomain::Interval(lo, hi) => {
                matches!(value, Scalar::Number(n) if lo <= n && n <= hi)
            }
            VariableDomain::Predicate(_) => true,
            VariableDomain::Union(parts) => parts.iter().any(|d| d.contains(value)),
        }
    }

    /// The smallest extension of this domain that also admits `value`.
    fn extended(&self, value: &Scalar) -> VariableDomain {
        if self.contains(value) {
            return self.clone();
        }
        match (self, value) {
            (VariableDomain::Set(values), _) => {
                let mut values = values.clone();
                values.push(value.clone());
                VariableDomain::Set(values)
            }
            (VariableDomain::Interval(lo, hi), Scalar::Number(n)) => {
                VariableDomain::Interval(lo.min(*n), hi.max(*n))
            }
            (VariableDomain::Union(parts), _) => {
                let mut parts = parts.clone();
                match parts.iter_mut().find(|p| matches!(p, VariableDomain::Set(_))) {
                    Some(set) => *set = set.extended(value),
                    None => parts.push(VariableDomain::Set(vec![value.clone()])),
                }
                VariableDomain::Union(parts)
            }
            (other, _) => {
                VariableDomain::Union(vec![other.clone(), VariableDomain::Set(vec![value.clone()])])
            }
        }
    }

    fn check(&self) -> std::result::Result<(), String> {
        match self {
            VariableDomain::Set(values) if values.is_empty() => Err("empty value set".into()),
            // Also rejects NaN bounds.
            VariableDomain::Interval(lo, hi) if lo.partial_cmp(hi).is_none_or(|o| o.is_gt()) => {
                Err(format!("interval lower bound {lo} exceeds upper bound {hi}"))
            }
            VariableDomain::Union(parts) if parts.is_empty() => Err("empty union".into()),
            VariableDomain::Union(parts) => parts.iter().try_for_each(VariableDomain::check),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignVariable {
    pub name: String,
    pub domain: VariableDomain,
    /// Subfunction the variable belongs to, if grouped.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subfunction: Option<String>,
}

/// Design knowledge known a priori: one domain per variable name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KnowledgeBase {
    variables: BTreeMap<String, DesignVariable>,
}

impl KnowledgeBase {
    pub fn new(variables: impl IntoIterator<Item = DesignVariable>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, var) in variables.into_iter().enumerate() {
            var.domain
                .check()
                .map_err(|m| Error::parse(format!("variables[{i}].domain"), m))?;
            if map.contains_key(&var.name) {
                return Err(Error::parse(
                    format!("variables[{i}].name"),
                    format!("duplicate variable `{}`", var.name),
                ));
            }
            map.insert(var.name.clone(), var);
        }
        Ok(KnowledgeBase { variables: map })
    }

    pub fn get(&self, name: &str) -> Option<&DesignVariable> {
        self.variables.get(name)
    }

    pub fn variables(&self) -> impl Iterator<Item = &DesignVariable> {
        self.variables.values()
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        serde_json::from_slice(bytes).map_err(Error::json)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawKnowledgeBase {
    variables: Vec<DesignVariable>,
}

impl Serialize for KnowledgeBase {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawKnowledgeBase {
            variables: self.variables.values().cloned().collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for KnowledgeBase {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawKnowledgeBase::deserialize(d)?;
        KnowledgeBase::new(raw.variables).map_err(|e| serde::de::Error::custom(e.to_string()))
    }
}

/// A concrete candidate design: variable values plus an optional verdict on
/// whether it is feasible (valuable).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignInstance {
    assignments: BTreeMap<String, Scalar>,
    #[serde(skip_serializing_if = "Option::is_none")]
    feasible: Option<bool>,
}

impl DesignInstance {
    pub fn new(
        assignments: impl IntoIterator<Item = (String, Scalar)>,
        feasible: Option<bool>,
    ) -> Result<Self> {
        let assignments: BTreeMap<_, _> = assignments.into_iter().collect();
        if assignments.is_empty() {
            return Err(Error::parse(
                "assignments",
                "a design needs at least one assignment",
            ));
        }
        Ok(DesignInstance {
            assignments,
            feasible,
        })
    }

    pub fn assignments(&self) -> &BTreeMap<String, Scalar> {
        &self.assignments
    }

    pub fn feasible(&self) -> Option<bool> {
        self.feasible
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        serde_json::from_slice(bytes).map_err(Error::json)
    }
}

impl<'de> Deserialize<'de> for DesignInstance {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            assignments: BTreeMap<String, Scalar>,
            #[serde(default)]
            feasible: Option<bool>,
        }
        let raw = Raw::deserialize(d)?;
        DesignInstance::new(raw.assignments, raw.feasible)
            .map_err(|e| serde::de::Error::custom(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoveltyCategory {
    Routine,
    Innovative,
    Creative,
    NotValuable,
}

impl fmt::Display for NoveltyCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NoveltyCategory::Routine => "routine",
            NoveltyCategory::Innovative => "innovative",
            NoveltyCategory::Creative => "creative",
            NoveltyCategory::NotValuable => "not_valuable",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoveltyReport {
    #[serde(with = "crate::rational::text")]
    pub innovation: Rational,
    #[serde(with = "crate::rational::text")]
    pub creativity: Rational,
    pub category: NoveltyCategory,
    /// Known variables whose value lies outside their domain.
    pub unexpected: Vec<String>,
    /// Variables absent from the knowledge base.
    pub new: Vec<String>,
}

fn unexpected<'a>(kb: &'a KnowledgeBase, design: &'a DesignInstance) -> impl Iterator<Item = &'a str> {
    design
        .assignments
        .iter()
        .filter(|(name, value)| kb.get(name).is_some_and(|v| !v.domain.contains(value)))
        .map(|(name, _)| name.as_str())
}

fn new_names<'a>(kb: &'a KnowledgeBase, design: &'a DesignInstance) -> impl Iterator<Item = &'a str> {
    design
        .assignments
        .keys()
        .filter(|name| kb.get(name).is_none())
        .map(String::as_str)
}

/// I: share of the design's variables that are known but take an unexpected value.
pub fn innovation_index(kb: &KnowledgeBase, design: &DesignInstance) -> Rational {
    ratio(unexpected(kb, design).count(), design.len())
}

/// C: share of the design's variables that the knowledge base does not know.
pub fn creativity_index(kb: &KnowledgeBase, design: &DesignInstance) -> Rational {
    ratio(new_names(kb, design).count(), design.len())
}

/// Computes both indices and files the design into a category. An infeasible
/// design is `not_valuable` whatever its indices; otherwise any new variable
/// makes it creative, and any unexpected value innovative.
pub fn assess(kb: &KnowledgeBase, design: &DesignInstance, feasible: bool) -> NoveltyReport {
    let innovation = innovation_index(kb, design);
    let creativity = creativity_index(kb, design);
    let category = if !feasible {
        NoveltyCategory::NotValuable
    } else if *creativity.numer() > 0 {
        NoveltyCategory::Creative
    } else if *innovation.numer() > 0 {
        NoveltyCategory::Innovative
    } else {
        NoveltyCategory::Routine
    };
    NoveltyReport {
        innovation,
        creativity,
        category,
        unexpected: unexpected(kb, design).map(str::to_string).collect(),
        new: new_names(kb, design).map(str::to_string).collect(),
    }
}

/// Returns a knowledge base that treats everything in `design` as known:
/// unexpected values are merged into their domains and new variables are
/// added with singleton domains.
pub fn absorb(kb: &KnowledgeBase, design: &DesignInstance) -> KnowledgeBase {
    let mut variables = kb.variables.clone();
    for (name, value) in &design.assignments {
        match variables.get_mut(name) {
            Some(var) => var.domain = var.domain.extended(value),
            None => {
                variables.insert(
                    name.clone(),
                    DesignVariable {
                        name: name.clone(),
                        domain: VariableDomain::Set(vec![value.clone()]),
                        subfunction: None,
                    },
                );
            }
        }
    }
    KnowledgeBase { variables }
}
