//! Which synthesis method suits which kind of design problem.
//!
//! The capability matrix is plain data and can be loaded from JSON. The
//! built-in matrix requires decomposability for every method, grades
//! analogy as limited for innovation, and gives no method any creativity.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize};

use crate::novelty::NoveltyCategory;
use crate::rational::{self, ratio, Rational};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Novelty {
    Routine,
    Innovative,
    Creative,
}

impl fmt::Display for Novelty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Novelty::Routine => "routine",
            Novelty::Innovative => "innovative",
            Novelty::Creative => "creative",
        })
    }
}

impl TryFrom<NoveltyCategory> for Novelty {
    type Error = Error;

    fn try_from(c: NoveltyCategory) -> Result<Self> {
        match c {
            NoveltyCategory::Routine => Ok(Novelty::Routine),
            NoveltyCategory::Innovative => Ok(Novelty::Innovative),
            NoveltyCategory::Creative => Ok(Novelty::Creative),
            NoveltyCategory::NotValuable => Err(Error::InvalidProfile(
                "an infeasible design has no novelty level".into(),
            )),
        }
    }
}

/// What is known about a problem before picking a method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProblemProfile {
    decomposable: bool,
    #[serde(with = "rational::opt_text", skip_serializing_if = "Option::is_none")]
    pi: Option<Rational>,
    novelty: Novelty,
}

impl ProblemProfile {
    /// A decomposable problem needs its PI in `[0, 1]`. A black box may
    /// carry its 0-or-1 PI as an annotation.
    pub fn new(decomposable: bool, pi: Option<Rational>, novelty: Novelty) -> Result<Self> {
        match (decomposable, pi) {
            (true, None) => return Err(Error::InvalidProfile("a decomposable problem needs a pi".into())),
            (true, Some(p)) if p > ratio(1, 1) => {
                return Err(Error::InvalidProfile(format!(
                    "pi {} exceeds 1",
                    rational::format(&p)
                )))
            }
            (false, Some(p)) if p != ratio(0, 1) && p != ratio(1, 1) => {
                return Err(Error::InvalidProfile(format!(
                    "a black box has pi 0 or 1, not {}",
                    rational::format(&p)
                )))
            }
            _ => {}
        }
        Ok(ProblemProfile {
            decomposable,
            pi,
            novelty,
        })
    }

    pub fn decomposable(&self) -> bool {
        self.decomposable
    }

    pub fn pi(&self) -> Option<Rational> {
        self.pi
    }

    pub fn novelty(&self) -> Novelty {
        self.novelty
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        serde_json::from_slice(bytes).map_err(Error::json)
    }
}

impl<'de> Deserialize<'de> for ProblemProfile {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            decomposable: bool,
            #[serde(default, with = "rational::opt_text")]
            pi: Option<Rational>,
            novelty: Novelty,
        }
        let raw = Raw::deserialize(d)?;
        ProblemProfile::new(raw.decomposable, raw.pi, raw.novelty).map_err(serde::de::Error::custom)
    }
}

/// Ordered `None < Limited < Full`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CapabilityLevel {
    None,
    Limited,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    GrammarBased,
    FunctionalSynthesis,
    AnalogyBased,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::GrammarBased => "grammar_based",
            Method::FunctionalSynthesis => "functional_synthesis",
            Method::AnalogyBased => "analogy_based",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodCapabilities {
    pub method: Method,
    pub requires_decomposable: bool,
    pub handles_interdependencies: CapabilityLevel,
    pub handles_innovation: CapabilityLevel,
    pub handles_creativity: CapabilityLevel,
}

impl MethodCapabilities {
    /// Capability at a novelty level. Every method handles routine design.
    pub fn at(&self, novelty: Novelty) -> CapabilityLevel {
        match novelty {
            Novelty::Routine => CapabilityLevel::Full,
            Novelty::Innovative => self.handles_innovation,
            Novelty::Creative => self.handles_creativity,
        }
    }
}

pub fn default_matrix() -> Vec<MethodCapabilities> {
    let row = |method, innovation| MethodCapabilities {
        method,
        requires_decomposable: true,
        handles_interdependencies: CapabilityLevel::Full,
        handles_innovation: innovation,
        handles_creativity: CapabilityLevel::None,
    };
    vec![
        row(Method::GrammarBased, CapabilityLevel::Full),
        row(Method::FunctionalSynthesis, CapabilityLevel::Full),
        row(Method::AnalogyBased, CapabilityLevel::Limited),
    ]
}

/// Reads a matrix override: a non-empty array with each method at most once.
pub fn parse_matrix(bytes: &[u8]) -> Result<Vec<MethodCapabilities>> {
    let rows: Vec<MethodCapabilities> = serde_json::from_slice(bytes).map_err(Error::json)?;
    if rows.is_empty() {
        return Err(Error::parse("matrix", "no methods"));
    }
    let mut seen = HashSet::new();
    for (i, r) in rows.iter().enumerate() {
        if !seen.insert(r.method) {
            return Err(Error::parse(
                format!("[{i}].method"),
                format!("`{}` listed twice", r.method),
            ));
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Inapplicable,
    Limited,
    Applicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Inapplicable => "inapplicable",
            Verdict::Limited => "limited",
            Verdict::Applicable => "applicable",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MethodVerdict {
    pub method: Method,
    pub verdict: Verdict,
    pub rationale: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MethodReport {
    pub profile: ProblemProfile,
    pub methods: Vec<MethodVerdict>,
}

impl MethodReport {
    pub fn applicable(&self) -> impl Iterator<Item = &MethodVerdict> {
        self.methods.iter().filter(|m| m.verdict == Verdict::Applicable)
    }

    /// True when no method is usable, not even with limits.
    pub fn is_empty(&self) -> bool {
        self.methods.iter().all(|m| m.verdict == Verdict::Inapplicable)
    }
}

/// Grades each method in `matrix` against `profile`.
///
/// A method needing decomposition is out for a black box. Otherwise the
/// verdict follows its capability at the profile's novelty level, capped by
/// its interdependency handling when the problem has interdependencies.
pub fn recommend(profile: &ProblemProfile, matrix: &[MethodCapabilities]) -> MethodReport {
    let pi_note = match profile.pi {
        Some(p) if profile.decomposable => format!("; PI = {}", rational::format(&p)),
        Some(p) => format!("; black-box PI = {}", rational::format(&p)),
        None => String::new(),
    };
    let interdependent = profile.decomposable && profile.pi.is_some_and(|p| p > ratio(0, 1));
    let methods = matrix
        .iter()
        .map(|row| {
            let (verdict, why) = if row.requires_decomposable && !profile.decomposable {
                (
                    Verdict::Inapplicable,
                    "needs a decomposed function structure and the problem is not decomposable".to_string(),
                )
            } else {
                let at_novelty = row.at(profile.novelty);
                let level = if interdependent {
                    at_novelty.min(row.handles_interdependencies)
                } else {
                    at_novelty
                };
                let verdict = match level {
                    CapabilityLevel::Full => Verdict::Applicable,
                    CapabilityLevel::Limited => Verdict::Limited,
                    CapabilityLevel::None => Verdict::Inapplicable,
                };
                let why = if profile.novelty == Novelty::Creative && at_novelty == CapabilityLevel::None {
                    "cannot introduce new design variables, so it cannot produce creative designs".to_string()
                } else if level < at_novelty {
                    format!(
                        "{:?} at {} design but only {:?} with interdependencies",
                        at_novelty, profile.novelty, row.handles_interdependencies
                    )
                    .to_lowercase()
                } else {
                    format!("{:?} capability for {} design", level, profile.novelty).to_lowercase()
                };
                (verdict, why)
            };
            MethodVerdict {
                method: row.method,
                verdict,
                rationale: format!("{why}{pi_note}"),
            }
        })
        .collect();
    MethodReport {
        profile: *profile,
        methods,
    }
}
