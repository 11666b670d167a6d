use std::collections::HashSet;

use super::{AttrExpr, AttrValue, Design, Edge, Match, Node, Rule, Vocabulary};
use crate::{Error, Result};

/// Rewrites `design` at `m`: deletes the matched edges and the unpreserved
/// matched nodes, updates preserved nodes, then adds the new right-hand-side
/// nodes and edges.
///
/// Surviving nodes keep their relative order; new nodes are appended in
/// right-hand-side order. A match taken on a different design is rejected as
/// stale, and so is any rewrite that would leave an unmatched edge attached
/// to a deleted node.
pub fn apply(vocabulary: &Vocabulary, rule: &Rule, design: &Design, m: &Match) -> Result<Design> {
    check_match(rule, design, m)?;
    let result = rewrite(rule, design, m)?;
    vocabulary.check_design(&result).map_err(|e| match e {
        Error::Vocabulary(msg) => {
            Error::Vocabulary(format!("rule `{}` produced an invalid design: {msg}", rule.name))
        }
        other => other,
    })?;
    Ok(result)
}

fn check_match(rule: &Rule, design: &Design, m: &Match) -> Result<()> {
    let stale = |why: &str| Err(Error::StaleMatch(format!("rule `{}`: {why}", rule.name)));
    if m.rule != rule.name {
        return stale(&format!("match was found for rule `{}`", m.rule));
    }
    if m.fingerprint != design.fingerprint() {
        return stale("design changed since the match was found");
    }
    if m.nodes.len() != rule.lhs.nodes.len() || m.edges.len() != rule.lhs.edges.len() {
        return stale("match does not fit the rule's left-hand side");
    }
    let distinct: HashSet<_> = m.nodes.iter().collect();
    if distinct.len() != m.nodes.len() {
        return stale("node images are not distinct");
    }
    for (p, &d) in rule.lhs.nodes.iter().zip(&m.nodes) {
        if !design.nodes.get(d).is_some_and(|n| p.accepts(n)) {
            return stale(&format!("design node {d} no longer fits the pattern"));
        }
    }
    let distinct: HashSet<_> = m.edges.iter().collect();
    if distinct.len() != m.edges.len() {
        return stale("edge images are not distinct");
    }
    for (pe, &d) in rule.lhs.edges.iter().zip(&m.edges) {
        let fits = design
            .edges
            .get(d)
            .is_some_and(|e| e.from == m.nodes[pe.from] && e.to == m.nodes[pe.to] && e.label == pe.label);
        if !fits {
            return stale(&format!("design edge {d} no longer fits the pattern"));
        }
    }
    Ok(())
}

fn eval(expr: &AttrExpr, design: &Design, m: &Match, rule: &str) -> Result<AttrValue> {
    let read = |node: usize, attr: &str| {
        design.nodes[m.nodes[node]]
            .attrs
            .get(attr)
            .cloned()
            .ok_or_else(|| {
                Error::Vocabulary(format!(
                    "rule `{rule}`: matched node {node} has no attribute `{attr}`"
                ))
            })
    };
    match expr {
        AttrExpr::Const(v) => Ok(v.clone()),
        AttrExpr::Copy { node, attr } => read(*node, attr),
        AttrExpr::Add { node, attr, by } => match (read(*node, attr)?, by) {
            (AttrValue::Int(a), AttrValue::Int(b)) => a
                .checked_add(*b)
                .map(AttrValue::Int)
                .ok_or_else(|| Error::Vocabulary(format!("rule `{rule}`: `{attr}` overflows"))),
            (a, b) => match (a.as_f64(), b.as_f64()) {
                (Some(a), Some(b)) => Ok(AttrValue::Real(a + b)),
                _ => Err(Error::Vocabulary(format!(
                    "rule `{rule}`: cannot add to non-numeric `{attr}`"
                ))),
            },
        },
    }
}

fn rewrite(rule: &Rule, design: &Design, m: &Match) -> Result<Design> {
    let deleted: HashSet<usize> = rule.deleted_nodes().into_iter().map(|i| m.nodes[i]).collect();
    let removed_edges: HashSet<usize> = m.edges.iter().copied().collect();

    for (i, e) in design.edges.iter().enumerate() {
        if removed_edges.contains(&i) {
            continue;
        }
        if deleted.contains(&e.from) || deleted.contains(&e.to) {
            return Err(Error::DanglingEdge(format!(
                "rule `{}` would delete a node still attached by edge {i} ({} -> {}, `{}`)",
                rule.name, e.from, e.to, e.label
            )));
        }
    }

    // Old index -> new index for surviving nodes.
    let mut remap = vec![usize::MAX; design.nodes.len()];
    let mut nodes = Vec::with_capacity(design.nodes.len() + rule.rhs.nodes.len());
    for (i, node) in design.nodes.iter().enumerate() {
        if !deleted.contains(&i) {
            remap[i] = nodes.len();
            nodes.push(node.clone());
        }
    }

    let mut rhs_index = Vec::with_capacity(rule.rhs.nodes.len());
    for rhs in &rule.rhs.nodes {
        let mut attrs = match rhs.keeps {
            Some(k) => design.nodes[m.nodes[k]].attrs.clone(),
            None => Default::default(),
        };
        for (attr, expr) in &rhs.set {
            attrs.insert(attr.clone(), eval(expr, design, m, &rule.name)?);
        }
        let node = Node {
            label: rhs.label.clone(),
            attrs,
        };
        match rhs.keeps {
            Some(k) => {
                let at = remap[m.nodes[k]];
                nodes[at] = node;
                rhs_index.push(at);
            }
            None => {
                rhs_index.push(nodes.len());
                nodes.push(node);
            }
        }
    }

    let mut edges: Vec<Edge> = design
        .edges
        .iter()
        .enumerate()
        .filter(|(i, _)| !removed_edges.contains(i))
        .map(|(_, e)| Edge::new(remap[e.from], remap[e.to], e.label.clone()))
        .collect();
    edges.extend(
        rule.rhs
            .edges
            .iter()
            .map(|e| Edge::new(rhs_index[e.from], rhs_index[e.to], e.label.clone())),
    );
    Ok(Design { nodes, edges })
}
