//! Attributed graph grammars.
//!
//! A [`Grammar`] bundles a [`Vocabulary`] (node labels with attribute
//! schemas, edge labels), an ordered list of [`Rule`]s and an axiom
//! [`Design`]. A rule's left-hand side is a pattern graph; wherever it embeds
//! injectively into a design (see [`find_matches`]) the rule can rewrite the
//! matched part into its right-hand side ([`apply`]). [`generate`] explores
//! rule applications breadth-first from the axiom and deduplicates the
//! results up to isomorphism via [`canonical_form`].

mod canon;
mod generate;
mod io;
mod matching;
mod rewrite;

use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use canon::canonical_form;
pub use generate::{generate, modify, replay, Generated, GrammarEdit, Limits};
pub use io::{parse_grammar, to_dot};
pub use matching::find_matches;
pub use rewrite::apply;

/// A scalar attribute value.
#[derive(Debug, Clone, PartialEq)]
pub enum AttrValue {
    Int(i64),
    Real(f64),
    Bool(bool),
    Text(String),
}

impl AttrValue {
    fn as_f64(&self) -> Option<f64> {
        match self {
            AttrValue::Int(i) => Some(*i as f64),
            AttrValue::Real(r) => Some(*r),
            _ => None,
        }
    }

    /// Type-tagged encoding used by canonical forms; distinct values never
    /// share an encoding.
    pub(crate) fn encode(&self, out: &mut String) {
        use std::fmt::Write;
        match self {
            AttrValue::Int(i) => write!(out, "i{i}"),
            AttrValue::Real(r) => write!(out, "r{:016x}", r.to_bits()),
            AttrValue::Bool(b) => write!(out, "b{}", u8::from(*b)),
            AttrValue::Text(t) => write!(out, "t{}:{t}", t.len()),
        }
        .expect("writing to a String cannot fail");
    }
}

impl Hash for AttrValue {
    fn hash<H: Hasher>(&self, state: &mut H) {
        std::mem::discriminant(self).hash(state);
        match self {
            AttrValue::Int(i) => i.hash(state),
            AttrValue::Real(r) => r.to_bits().hash(state),
            AttrValue::Bool(b) => b.hash(state),
            AttrValue::Text(t) => t.hash(state),
        }
    }
}

impl fmt::Display for AttrValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttrValue::Int(i) => write!(f, "{i}"),
            AttrValue::Real(r) => write!(f, "{r}"),
            AttrValue::Bool(b) => write!(f, "{b}"),
            AttrValue::Text(t) => write!(f, "{t}"),
        }
    }
}

impl From<i64> for AttrValue {
    fn from(i: i64) -> Self {
        AttrValue::Int(i)
    }
}

impl From<&str> for AttrValue {
    fn from(s: &str) -> Self {
        AttrValue::Text(s.into())
    }
}

/// Allowed values of one attribute.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttrDomain {
    Int(i64, i64),
    Real(f64, f64),
    Bool,
    Enum(Vec<String>),
}

impl AttrDomain {
    pub fn admits(&self, value: &AttrValue) -> bool {
        match (self, value) {
            (AttrDomain::Int(lo, hi), AttrValue::Int(v)) => lo <= v && v <= hi,
            (AttrDomain::Real(lo, hi), v) => v.as_f64().is_some_and(|x| *lo <= x && x <= *hi),
            (AttrDomain::Bool, AttrValue::Bool(_)) => true,
            (AttrDomain::Enum(options), AttrValue::Text(t)) => options.contains(t),
            _ => false,
        }
    }
}

pub type AttrSchema = BTreeMap<String, AttrDomain>;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Vocabulary {
    /// Node label → attribute schema. Every node with that label carries
    /// exactly these attributes.
    pub nodes: BTreeMap<String, AttrSchema>,
    pub edges: BTreeSet<String>,
}

impl Vocabulary {
    /// Checks that `design` uses only known labels and well-typed attributes.
    pub fn check_design(&self, design: &Design) -> Result<()> {
        for (i, node) in design.nodes.iter().enumerate() {
            let schema = self
                .nodes
                .get(&node.label)
                .ok_or_else(|| Error::Vocabulary(format!("node {i}: unknown label `{}`", node.label)))?;
            for (name, domain) in schema {
                match node.attrs.get(name) {
                    None => {
                        return Err(Error::Vocabulary(format!(
                            "node {i} (`{}`): missing attribute `{name}`",
                            node.label
                        )))
                    }
                    Some(v) if !domain.admits(v) => {
                        return Err(Error::Vocabulary(format!(
                            "node {i} (`{}`): `{name}` = {v} is outside its domain",
                            node.label
                        )))
                    }
                    Some(_) => {}
                }
            }
            if let Some(extra) = node.attrs.keys().find(|k| !schema.contains_key(*k)) {
                return Err(Error::Vocabulary(format!(
                    "node {i} (`{}`): undeclared attribute `{extra}`",
                    node.label
                )));
            }
        }
        for (i, edge) in design.edges.iter().enumerate() {
            if !self.edges.contains(&edge.label) {
                return Err(Error::Vocabulary(format!(
                    "edge {i}: unknown label `{}`",
                    edge.label
                )));
            }
            if edge.from >= design.nodes.len() || edge.to >= design.nodes.len() {
                return Err(Error::DanglingEdge(format!("edge {i} points outside the design")));
            }
        }
        Ok(())
    }

    fn check_rule(&self, rule: &Rule) -> Result<()> {
        let bad = |msg: String| Err(Error::Vocabulary(format!("rule `{}`: {msg}", rule.name)));
        let lhs_len = rule.lhs.nodes.len();
        for (i, n) in rule.lhs.nodes.iter().enumerate() {
            let Some(schema) = self.nodes.get(&n.label) else {
                return bad(format!("lhs node {i}: unknown label `{}`", n.label));
            };
            if let Some(p) = n.predicates.iter().find(|p| !schema.contains_key(&p.attr)) {
                return bad(format!(
                    "lhs node {i}: `{}` has no attribute `{}`",
                    n.label, p.attr
                ));
            }
        }
        let mut kept = HashSet::new();
        for (i, n) in rule.rhs.nodes.iter().enumerate() {
            let Some(schema) = self.nodes.get(&n.label) else {
                return bad(format!("rhs node {i}: unknown label `{}`", n.label));
            };
            if let Some(attr) = n.set.keys().find(|a| !schema.contains_key(*a)) {
                return bad(format!("rhs node {i}: `{}` has no attribute `{attr}`", n.label));
            }
            match n.keeps {
                Some(k) if k >= lhs_len => return bad(format!("rhs node {i} keeps unknown lhs node {k}")),
                Some(k) if !kept.insert(k) => return bad(format!("lhs node {k} is kept twice")),
                Some(_) => {}
                None => {
                    if let Some(missing) = schema.keys().find(|a| !n.set.contains_key(*a)) {
                        return bad(format!("new rhs node {i} does not set `{missing}`"));
                    }
                }
            }
            for expr in n.set.values() {
                if let AttrExpr::Copy { node, .. } | AttrExpr::Add { node, .. } = expr {
                    if *node >= lhs_len {
                        return bad(format!("rhs node {i} reads unknown lhs node {node}"));
                    }
                }
            }
        }
        for (side, edges, len) in [
            ("lhs", &rule.lhs.edges, lhs_len),
            ("rhs", &rule.rhs.edges, rule.rhs.nodes.len()),
        ] {
            for (i, e) in edges.iter().enumerate() {
                if !self.edges.contains(&e.label) {
                    return bad(format!("{side} edge {i}: unknown label `{}`", e.label));
                }
                if e.from >= len || e.to >= len {
                    return bad(format!("{side} edge {i} points outside the pattern"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Hash)]
pub struct Node {
    pub label: String,
    pub attrs: BTreeMap<String, AttrValue>,
}

impl Node {
    pub fn new(label: impl Into<String>) -> Self {
        Node {
            label: label.into(),
            attrs: BTreeMap::new(),
        }
    }

    pub fn with(mut self, attr: &str, value: impl Into<AttrValue>) -> Self {
        self.attrs.insert(attr.to_string(), value.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub label: String,
}

impl Edge {
    pub fn new(from: usize, to: usize, label: impl Into<String>) -> Self {
        Edge {
            from,
            to,
            label: label.into(),
        }
    }
}

/// An attributed, labeled directed multigraph. Nodes are addressed by
/// position.
#[derive(Debug, Clone, Default, PartialEq, Hash)]
pub struct Design {
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
}

impl Design {
    pub fn new(nodes: Vec<Node>, edges: Vec<Edge>) -> Self {
        Design { nodes, edges }
    }

    pub fn count_label(&self, label: &str) -> usize {
        self.nodes.iter().filter(|n| n.label == label).count()
    }

    /// Identity of this exact design value, used to detect stale matches.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.hash(&mut h);
        h.finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

/// `attr op value` on a pattern node.
#[derive(Debug, Clone, PartialEq)]
pub struct Predicate {
    pub attr: String,
    pub op: CmpOp,
    pub value: AttrValue,
}

impl Predicate {
    pub fn holds(&self, node: &Node) -> bool {
        let Some(actual) = node.attrs.get(&self.attr) else {
            return false;
        };
        let ord = match (actual.as_f64(), self.value.as_f64()) {
            (Some(a), Some(b)) => a.partial_cmp(&b),
            _ if actual == &self.value => Some(Ordering::Equal),
            _ => None,
        };
        match (self.op, ord) {
            (CmpOp::Eq, o) => o == Some(Ordering::Equal),
            (CmpOp::Ne, o) => o != Some(Ordering::Equal),
            (_, None) => false,
            (CmpOp::Lt, Some(o)) => o == Ordering::Less,
            (CmpOp::Le, Some(o)) => o != Ordering::Greater,
            (CmpOp::Gt, Some(o)) => o == Ordering::Greater,
            (CmpOp::Ge, Some(o)) => o != Ordering::Less,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatternNode {
    pub label: String,
    pub predicates: Vec<Predicate>,
}

impl PatternNode {
    pub fn new(label: impl Into<String>) -> Self {
        PatternNode {
            label: label.into(),
            predicates: Vec::new(),
        }
    }

    pub fn accepts(&self, node: &Node) -> bool {
        node.label == self.label && self.predicates.iter().all(|p| p.holds(node))
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Pattern {
    pub nodes: Vec<PatternNode>,
    pub edges: Vec<Edge>,
}

/// Value of an attribute on a right-hand-side node, computed from the
/// matched left-hand side.
#[derive(Debug, Clone, PartialEq)]
pub enum AttrExpr {
    Const(AttrValue),
    Copy {
        node: usize,
        attr: String,
    },
    Add {
        node: usize,
        attr: String,
        by: AttrValue,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RhsNode {
    pub label: String,
    /// The left-hand-side node this node preserves, if any. Preserved nodes
    /// keep their attributes unless overridden by `set`.
    pub keeps: Option<usize>,
    pub set: BTreeMap<String, AttrExpr>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Replacement {
    pub nodes: Vec<RhsNode>,
    pub edges: Vec<Edge>,
}

/// `lhs → rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub name: String,
    pub lhs: Pattern,
    pub rhs: Replacement,
}

impl Rule {
    /// Left-hand-side nodes that the rule deletes.
    pub fn deleted_nodes(&self) -> Vec<usize> {
        let kept: HashSet<usize> = self.rhs.nodes.iter().filter_map(|n| n.keeps).collect();
        (0..self.lhs.nodes.len()).filter(|i| !kept.contains(i)).collect()
    }
}

/// One embedding of a rule's left-hand side into a specific design.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Match {
    pub rule: String,
    /// Design node for each lhs node.
    pub nodes: Vec<usize>,
    /// Design edge for each lhs edge.
    pub edges: Vec<usize>,
    pub fingerprint: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grammar {
    vocabulary: Vocabulary,
    rules: Vec<Rule>,
    axiom: Design,
}

impl Grammar {
    pub fn new(vocabulary: Vocabulary, rules: Vec<Rule>, axiom: Design) -> Result<Self> {
        vocabulary.check_design(&axiom)?;
        let mut names = HashSet::new();
        for rule in &rules {
            if !names.insert(rule.name.as_str()) {
                return Err(Error::DuplicateRule(rule.name.clone()));
            }
            vocabulary.check_rule(rule)?;
        }
        Ok(Grammar {
            vocabulary,
            rules,
            axiom,
        })
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, name: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.name == name)
    }

    pub fn axiom(&self) -> &Design {
        &self.axiom
    }
}

/// One rewriting step, replayable from the design it was taken on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub rule: String,
    pub nodes: Vec<usize>,
    pub edges: Vec<usize>,
}

/// Rule applications leading from the axiom to a design.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Derivation {
    pub steps: Vec<Step>,
}
