//! `.grammar.json` format and DOT rendering.
//!
//! Graph nodes are referenced by string ids inside a file; in memory they
//! are positions. Written designs use ids `n0`, `n1`, ...

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{
    AttrExpr, AttrValue, CmpOp, Design, Edge, Grammar, Node, Pattern, PatternNode, Predicate, Replacement,
    RhsNode, Rule, Vocabulary,
};
use crate::{Error, Result};

impl Serialize for AttrValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            AttrValue::Int(i) => s.serialize_i64(*i),
            AttrValue::Real(r) => s.serialize_f64(*r),
            AttrValue::Bool(b) => s.serialize_bool(*b),
            AttrValue::Text(t) => s.serialize_str(t),
        }
    }
}

impl<'de> Deserialize<'de> for AttrValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde_json::Value;
        match Value::deserialize(d)? {
            Value::Bool(b) => Ok(AttrValue::Bool(b)),
            Value::Number(n) => match n.as_i64() {
                Some(i) => Ok(AttrValue::Int(i)),
                None => n
                    .as_f64()
                    .map(AttrValue::Real)
                    .ok_or_else(|| serde::de::Error::custom("number out of range")),
            },
            Value::String(s) => Ok(AttrValue::Text(s)),
            other => Err(serde::de::Error::custom(format!(
                "expected a scalar, found {other}"
            ))),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNode {
    id: String,
    label: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    attrs: BTreeMap<String, AttrValue>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEdge {
    from: String,
    to: String,
    label: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDesign {
    nodes: Vec<RawNode>,
    #[serde(default)]
    edges: Vec<RawEdge>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPredicate {
    attr: String,
    op: CmpOp,
    value: AttrValue,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPatternNode {
    id: String,
    label: String,
    #[serde(default, rename = "where", skip_serializing_if = "Vec::is_empty")]
    predicates: Vec<RawPredicate>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPattern {
    nodes: Vec<RawPatternNode>,
    #[serde(default)]
    edges: Vec<RawEdge>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
enum RawExpr {
    Const(AttrValue),
    Copy {
        node: String,
        attr: String,
    },
    Add {
        node: String,
        attr: String,
        by: AttrValue,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRhsNode {
    id: String,
    label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    keeps: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    set: BTreeMap<String, RawExpr>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawReplacement {
    nodes: Vec<RawRhsNode>,
    #[serde(default)]
    edges: Vec<RawEdge>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRule {
    name: String,
    lhs: RawPattern,
    rhs: RawReplacement,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrammar {
    vocabulary: Vocabulary,
    rules: Vec<RawRule>,
    axiom: RawDesign,
}

fn id_table<'a>(ids: impl Iterator<Item = &'a String>, at: &str) -> Result<HashMap<String, usize>> {
    let mut table = HashMap::new();
    for (i, id) in ids.enumerate() {
        if table.insert(id.clone(), i).is_some() {
            return Err(Error::parse(
                format!("{at}.nodes[{i}].id"),
                format!("duplicate id `{id}`"),
            ));
        }
    }
    Ok(table)
}

fn lookup(table: &HashMap<String, usize>, id: &str, at: impl FnOnce() -> String) -> Result<usize> {
    table
        .get(id)
        .copied()
        .ok_or_else(|| Error::parse(at(), format!("unknown node id `{id}`")))
}

fn edges(raw: &[RawEdge], table: &HashMap<String, usize>, at: &str) -> Result<Vec<Edge>> {
    raw.iter()
        .enumerate()
        .map(|(i, e)| {
            Ok(Edge::new(
                lookup(table, &e.from, || format!("{at}.edges[{i}].from"))?,
                lookup(table, &e.to, || format!("{at}.edges[{i}].to"))?,
                e.label.clone(),
            ))
        })
        .collect()
}

fn design_from_raw(raw: RawDesign, at: &str) -> Result<Design> {
    let table = id_table(raw.nodes.iter().map(|n| &n.id), at)?;
    let edges = edges(&raw.edges, &table, at)?;
    let nodes = raw
        .nodes
        .into_iter()
        .map(|n| Node {
            label: n.label,
            attrs: n.attrs,
        })
        .collect();
    Ok(Design { nodes, edges })
}

fn design_to_raw(design: &Design) -> RawDesign {
    RawDesign {
        nodes: design
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| RawNode {
                id: format!("n{i}"),
                label: n.label.clone(),
                attrs: n.attrs.clone(),
            })
            .collect(),
        edges: design
            .edges
            .iter()
            .map(|e| RawEdge {
                from: format!("n{}", e.from),
                to: format!("n{}", e.to),
                label: e.label.clone(),
            })
            .collect(),
    }
}

fn rule_from_raw(raw: RawRule, at: &str) -> Result<Rule> {
    let lhs_at = format!("{at}.lhs");
    let rhs_at = format!("{at}.rhs");
    let lhs_ids = id_table(raw.lhs.nodes.iter().map(|n| &n.id), &lhs_at)?;
    let rhs_ids = id_table(raw.rhs.nodes.iter().map(|n| &n.id), &rhs_at)?;
    let lhs = Pattern {
        edges: edges(&raw.lhs.edges, &lhs_ids, &lhs_at)?,
        nodes: raw
            .lhs
            .nodes
            .into_iter()
            .map(|n| PatternNode {
                label: n.label,
                predicates: n
                    .predicates
                    .into_iter()
                    .map(|p| Predicate {
                        attr: p.attr,
                        op: p.op,
                        value: p.value,
                    })
                    .collect(),
            })
            .collect(),
    };
    let rhs_edges = edges(&raw.rhs.edges, &rhs_ids, &rhs_at)?;
    let mut rhs_nodes = Vec::with_capacity(raw.rhs.nodes.len());
    for (i, n) in raw.rhs.nodes.into_iter().enumerate() {
        let here = || format!("{rhs_at}.nodes[{i}]");
        let keeps = n
            .keeps
            .map(|k| lookup(&lhs_ids, &k, || format!("{}.keeps", here())))
            .transpose()?;
        let mut set = BTreeMap::new();
        for (attr, expr) in n.set {
            let where_ = || format!("{}.set.{attr}", here());
            let expr = match expr {
                RawExpr::Const(v) => AttrExpr::Const(v),
                RawExpr::Copy { node, attr } => AttrExpr::Copy {
                    node: lookup(&lhs_ids, &node, where_)?,
                    attr,
                },
                RawExpr::Add { node, attr, by } => AttrExpr::Add {
                    node: lookup(&lhs_ids, &node, where_)?,
                    attr,
                    by,
                },
            };
            set.insert(attr, expr);
        }
        rhs_nodes.push(RhsNode {
            label: n.label,
            keeps,
            set,
        });
    }
    Ok(Rule {
        name: raw.name,
        lhs,
        rhs: Replacement {
            nodes: rhs_nodes,
            edges: rhs_edges,
        },
    })
}

fn rule_to_raw(rule: &Rule) -> RawRule {
    let lid = |i: usize| format!("l{i}");
    let rid = |i: usize| format!("r{i}");
    let raw_edges = |edges: &[Edge], id: &dyn Fn(usize) -> String| {
        edges
            .iter()
            .map(|e| RawEdge {
                from: id(e.from),
                to: id(e.to),
                label: e.label.clone(),
            })
            .collect()
    };
    RawRule {
        name: rule.name.clone(),
        lhs: RawPattern {
            nodes: rule
                .lhs
                .nodes
                .iter()
                .enumerate()
                .map(|(i, n)| RawPatternNode {
                    id: lid(i),
                    label: n.label.clone(),
                    predicates: n
                        .predicates
                        .iter()
                        .map(|p| RawPredicate {
                            attr: p.attr.clone(),
                            op: p.op,
                            value: p.value.clone(),
                        })
                        .collect(),
                })
                .collect(),
            edges: raw_edges(&rule.lhs.edges, &lid),
        },
        rhs: RawReplacement {
            nodes: rule
                .rhs
                .nodes
                .iter()
                .enumerate()
                .map(|(i, n)| RawRhsNode {
                    id: rid(i),
                    label: n.label.clone(),
                    keeps: n.keeps.map(lid),
                    set: n
                        .set
                        .iter()
                        .map(|(attr, e)| {
                            let raw = match e {
                                AttrExpr::Const(v) => RawExpr::Const(v.clone()),
                                AttrExpr::Copy { node, attr } => RawExpr::Copy {
                                    node: lid(*node),
                                    attr: attr.clone(),
                                },
                                AttrExpr::Add { node, attr, by } => RawExpr::Add {
                                    node: lid(*node),
                                    attr: attr.clone(),
                                    by: by.clone(),
                                },
                            };
                            (attr.clone(), raw)
                        })
                        .collect(),
                })
                .collect(),
            edges: raw_edges(&rule.rhs.edges, &rid),
        },
    }
}

impl Serialize for Design {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        design_to_raw(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Design {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        design_from_raw(RawDesign::deserialize(d)?, "design")
            .map_err(|e| serde::de::Error::custom(e.to_string()))
    }
}

impl Serialize for Rule {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        rule_to_raw(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Rule {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        rule_from_raw(RawRule::deserialize(d)?, "rule").map_err(|e| serde::de::Error::custom(e.to_string()))
    }
}

impl Serialize for Grammar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawGrammar {
            vocabulary: self.vocabulary.clone(),
            rules: self.rules.iter().map(rule_to_raw).collect(),
            axiom: design_to_raw(&self.axiom),
        }
        .serialize(s)
    }
}

/// Parses and checks a `.grammar.json` document.
pub fn parse_grammar(bytes: &[u8]) -> Result<Grammar> {
    if bytes.iter().all(u8::is_ascii_whitespace) {
        return Err(Error::parse("document", "empty document"));
    }
    let raw: RawGrammar = serde_json::from_slice(bytes).map_err(Error::json)?;
    let rules = raw
        .rules
        .into_iter()
        .enumerate()
        .map(|(i, r)| rule_from_raw(r, &format!("rules[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let axiom = design_from_raw(raw.axiom, "axiom")?;
    Grammar::new(raw.vocabulary, rules, axiom)
}

impl<'de> Deserialize<'de> for Grammar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(d)?;
        let bytes = serde_json::to_vec(&value).map_err(serde::de::Error::custom)?;
        parse_grammar(&bytes).map_err(|e| serde::de::Error::custom(e.to_string()))
    }
}

/// Graphviz rendering of a design, one statement per line.
pub fn to_dot(design: &Design, name: &str) -> String {
    let mut out = format!("digraph \"{}\" {{\n", escape(name));
    for (i, n) in design.nodes.iter().enumerate() {
        let mut label = n.label.clone();
        for (k, v) in &n.attrs {
            let _ = write!(label, "\\n{k}={v}");
        }
        let _ = writeln!(
            out,
            "  n{i} [label=\"{}\"];",
            escape(&label).replace("\\\\n", "\\n")
        );
    }
    for e in &design.edges {
        let _ = writeln!(
            out,
            "  n{} -> n{} [label=\"{}\"];",
            e.from,
            e.to,
            escape(&e.label)
        );
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
