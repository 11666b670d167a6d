//! Case-based design: retrieve, reuse, revise, retain.
//!
//! Similarity between two function structures blends three terms, each in
//! `[0, 1]`:
//!
//! * multiset Jaccard of the subfunction (vertex) labels,
//! * multiset Jaccard of the flow labels,
//! * `1 - |PI(a) - PI(b)|`.
//!
//! The weights are exact rationals summing to one, so scores are exact and
//! ties are real ties, broken by case id.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize};

use crate::funcstruct::FunctionStructure;
use crate::rational::{self, ratio, Rational};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceDomain {
    #[default]
    Technical,
    /// Biology-inspired solutions live in the same base, tagged.
    Biological,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Component {
    pub name: String,
    /// Ids of the case's function vertices this component realizes.
    #[serde(default)]
    pub realizes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Solution {
    pub description: String,
    pub components: Vec<Component>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Case {
    pub id: String,
    #[serde(default)]
    pub source: SourceDomain,
    pub problem: FunctionStructure,
    pub solution: Solution,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct CaseBase {
    cases: Vec<Case>,
}

impl CaseBase {
    /// Checks id uniqueness and that every problem is a valid structure.
    pub fn new(cases: Vec<Case>) -> Result<Self> {
        let mut ids = HashSet::new();
        for (i, case) in cases.iter().enumerate() {
            if !ids.insert(case.id.as_str()) {
                return Err(Error::DuplicateCase(case.id.clone()));
            }
            let report = case.problem.validate();
            if !report.is_valid() {
                return Err(Error::parse(format!("[{i}].problem"), report));
            }
        }
        Ok(CaseBase { cases })
    }

    pub fn cases(&self) -> &[Case] {
        &self.cases
    }

    pub fn get(&self, id: &str) -> Option<&Case> {
        self.cases.iter().find(|c| c.id == id)
    }

    pub fn len(&self) -> usize {
        self.cases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cases.is_empty()
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        serde_json::from_slice(bytes).map_err(Error::json)
    }
}

impl<'de> Deserialize<'de> for CaseBase {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        CaseBase::new(Vec::<Case>::deserialize(d)?).map_err(|e| serde::de::Error::custom(e.to_string()))
    }
}

/// Weights of the three similarity terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SimilaritySpec {
    #[serde(with = "rational::text")]
    function: Rational,
    #[serde(with = "rational::text")]
    flow: Rational,
    #[serde(with = "rational::text")]
    structure: Rational,
}

impl SimilaritySpec {
    pub fn new(function: Rational, flow: Rational, structure: Rational) -> Result<Self> {
        let sum = function + flow + structure;
        if sum != ratio(1, 1) {
            return Err(Error::InvalidWeights(format!(
                "weights sum to {}, not 1",
                rational::format(&sum)
            )));
        }
        Ok(SimilaritySpec {
            function,
            flow,
            structure,
        })
    }

    pub fn function(&self) -> Rational {
        self.function
    }

    pub fn flow(&self) -> Rational {
        self.flow
    }

    pub fn structure(&self) -> Rational {
        self.structure
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        serde_json::from_slice(bytes).map_err(Error::json)
    }
}

impl Default for SimilaritySpec {
    fn default() -> Self {
        SimilaritySpec {
            function: ratio(1, 2),
            flow: ratio(3, 10),
            structure: ratio(1, 5),
        }
    }
}

impl<'de> Deserialize<'de> for SimilaritySpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            #[serde(with = "rational::text")]
            function: Rational,
            #[serde(with = "rational::text")]
            flow: Rational,
            #[serde(with = "rational::text")]
            structure: Rational,
        }
        let raw = Raw::deserialize(d)?;
        SimilaritySpec::new(raw.function, raw.flow, raw.structure)
            .map_err(|e| serde::de::Error::custom(e.to_string()))
    }
}

/// `Σ min(count) / Σ max(count)`; two empty multisets are identical.
pub fn multiset_jaccard<'a>(
    a: impl IntoIterator<Item = &'a str>,
    b: impl IntoIterator<Item = &'a str>,
) -> Rational {
    let mut counts: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for x in a {
        counts.entry(x).or_default().0 += 1;
    }
    for x in b {
        counts.entry(x).or_default().1 += 1;
    }
    let (min, max) = counts
        .values()
        .fold((0, 0), |(lo, hi), &(x, y)| (lo + x.min(y), hi + x.max(y)));
    if max == 0 {
        ratio(1, 1)
    } else {
        ratio(min, max)
    }
}

/// Weighted similarity of two valid function structures, in `[0, 1]`.
pub fn similarity(spec: &SimilaritySpec, a: &FunctionStructure, b: &FunctionStructure) -> Result<Rational> {
    let functions = multiset_jaccard(
        a.vertices().iter().map(|v| v.label.as_str()),
        b.vertices().iter().map(|v| v.label.as_str()),
    );
    let flows = multiset_jaccard(
        a.flows().iter().map(|f| f.label.as_str()),
        b.flows().iter().map(|f| f.label.as_str()),
    );
    let pi_gap = rational::abs_diff(a.interdependency_index()?, b.interdependency_index()?);
    Ok(spec.function * functions + spec.flow * flows + spec.structure * (ratio(1, 1) - pi_gap))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ranked {
    pub id: String,
    #[serde(with = "rational::text")]
    pub score: Rational,
}

/// Cases ordered by descending score, ties by ascending id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RetrievalResult {
    pub ranking: Vec<Ranked>,
}

impl RetrievalResult {
    pub fn best(&self) -> Option<&Ranked> {
        self.ranking.first()
    }
}

/// The `k` cases most similar to `query`.
pub fn retrieve(
    base: &CaseBase,
    spec: &SimilaritySpec,
    query: &FunctionStructure,
    k: usize,
) -> Result<RetrievalResult> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if base.is_empty() {
        return Err(Error::EmptyCaseBase);
    }
    let report = query.validate();
    if !report.is_valid() {
        return Err(Error::InvalidStructure(report));
    }
    let mut ranking = base
        .cases
        .par_iter()
        .map(|case| {
            Ok(Ranked {
                id: case.id.clone(),
                score: similarity(spec, query, &case.problem)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ranking.sort_by(|a, b| b.score.cmp(&a.score).then_with(|| a.id.cmp(&b.id)));
    ranking.truncate(k);
    Ok(RetrievalResult { ranking })
}

fn words(label: &str) -> BTreeSet<String> {
    label.split_whitespace().map(str::to_lowercase).collect()
}

/// Word-set Jaccard of two subfunction labels.
pub fn label_similarity(a: &str, b: &str) -> Rational {
    let (a, b) = (words(a), words(b));
    let union = a.union(&b).count();
    if union == 0 {
        return ratio(1, 1);
    }
    ratio(a.intersection(&b).count(), union)
}

/// A query subfunction aligned with a case subfunction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Alignment {
    pub query_vertex: String,
    pub case_vertex: String,
    #[serde(with = "rational::text")]
    pub score: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DraftComponent {
    pub name: String,
    /// Query subfunction ids this component is reused for, in query order.
    pub serves: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DraftSolution {
    pub case_id: String,
    pub description: String,
    pub components: Vec<DraftComponent>,
    pub alignments: Vec<Alignment>,
    /// Query subfunctions nothing in the case could be aligned with.
    pub gaps: Vec<String>,
}

/// Adapts a retrieved case to `query`.
///
/// Query and case subfunctions are paired one-to-one, greedily by
/// descending label similarity (ties by query order, then case order); pairs
/// with no shared word are never made. Each case component is then annotated
/// with the query subfunctions whose partner it realizes.
pub fn reuse(case: &Case, query: &FunctionStructure) -> DraftSolution {
    let qv = query.vertices();
    let cv = case.problem.vertices();
    let mut pairs: Vec<(Rational, usize, usize)> = Vec::new();
    for (i, q) in qv.iter().enumerate() {
        for (j, c) in cv.iter().enumerate() {
            let s = label_similarity(&q.label, &c.label);
            if *s.numer() > 0 {
                pairs.push((s, i, j));
            }
        }
    }
    pairs.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut query_taken = vec![None; qv.len()];
    let mut case_taken = vec![false; cv.len()];
    for (score, i, j) in pairs {
        if query_taken[i].is_none() && !case_taken[j] {
            query_taken[i] = Some((j, score));
            case_taken[j] = true;
        }
    }

    let alignments: Vec<Alignment> = query_taken
        .iter()
        .enumerate()
        .filter_map(|(i, m)| {
            m.map(|(j, score)| Alignment {
                query_vertex: qv[i].id.clone(),
                case_vertex: cv[j].id.clone(),
                score,
            })
        })
        .collect();
    let gaps = query_taken
        .iter()
        .enumerate()
        .filter(|(_, m)| m.is_none())
        .map(|(i, _)| qv[i].id.clone())
        .collect();
    let components = case
        .solution
        .components
        .iter()
        .map(|comp| DraftComponent {
            name: comp.name.clone(),
            serves: alignments
                .iter()
                .filter(|a| comp.realizes.contains(&a.case_vertex))
                .map(|a| a.query_vertex.clone())
                .collect(),
        })
        .collect();

    DraftSolution {
        case_id: case.id.clone(),
        description: case.solution.description.clone(),
        components,
        alignments,
        gaps,
    }
}

/// What a requirement asks of a draft.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// A component with this name (case-insensitive) is present.
    HasComponent(String),
    LacksComponent(String),
    MinComponents(usize),
    MaxComponents(usize),
    /// The query subfunction with this id is served by some component.
    Covers(String),
    NoGaps(bool),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Requirement {
    pub name: String,
    #[serde(flatten)]
    pub check: Check,
}

impl Requirement {
    pub fn new(name: impl Into<String>, check: Check) -> Self {
        Requirement {
            name: name.into(),
            check,
        }
    }

    pub fn satisfied_by(&self, draft: &DraftSolution) -> bool {
        let has = |name: &str| draft.components.iter().any(|c| c.name.eq_ignore_ascii_case(name));
        match &self.check {
            Check::HasComponent(name) => has(name),
            Check::LacksComponent(name) => !has(name),
            Check::MinComponents(n) => draft.components.len() >= *n,
            Check::MaxComponents(n) => draft.components.len() <= *n,
            Check::Covers(id) => draft.components.iter().any(|c| c.serves.contains(id)),
            Check::NoGaps(wanted) => draft.gaps.is_empty() == *wanted,
        }
    }
}

/// Reads a JSON array of requirements.
pub fn parse_requirements(bytes: &[u8]) -> Result<Vec<Requirement>> {
    serde_json::from_slice(bytes).map_err(Error::json)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RequirementStatus {
    pub name: String,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RevisedSolution {
    pub draft: DraftSolution,
    pub checks: Vec<RequirementStatus>,
    /// Requirements the draft violates, left open for the designer.
    pub open_tasks: Vec<Requirement>,
}

/// Checks a draft against requirements. Violations become open tasks; no
/// repair is attempted.
pub fn revise(draft: DraftSolution, requirements: &[Requirement]) -> RevisedSolution {
    let checks: Vec<RequirementStatus> = requirements
        .iter()
        .map(|r| RequirementStatus {
            name: r.name.clone(),
            satisfied: r.satisfied_by(&draft),
        })
        .collect();
    let open_tasks = requirements
        .iter()
        .zip(&checks)
        .filter(|(_, s)| !s.satisfied)
        .map(|(r, _)| r.clone())
        .collect();
    RevisedSolution {
        draft,
        checks,
        open_tasks,
    }
}

/// A new base with `case` added.
pub fn retain(base: &CaseBase, case: Case) -> Result<CaseBase> {
    if base.get(&case.id).is_some() {
        return Err(Error::DuplicateCase(case.id));
    }
    let report = case.problem.validate();
    if !report.is_valid() {
        return Err(Error::InvalidStructure(report));
    }
    let mut cases = base.cases.clone();
    cases.push(case);
    Ok(CaseBase { cases })
}
