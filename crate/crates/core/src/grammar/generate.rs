use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use super::matching::matches_unchecked;
use super::rewrite::apply;
use super::{canonical_form, Derivation, Design, Grammar, Match, Rule, Step};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of rule applications from the axiom.
    pub max_depth: usize,
    /// Maximum number of designs returned, axiom included.
    pub max_designs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Generated {
    #[serde(skip)]
    pub design: Design,
    pub derivation: Derivation,
    pub canonical: String,
}

impl Generated {
    pub fn depth(&self) -> usize {
        self.derivation.steps.len()
    }
}

/// Breadth-first closure of rule application from the axiom.
///
/// Level `d` holds the designs first reached after `d` applications.
/// Within a level, candidates are ordered by parent, then rule order, then
/// match order; a candidate is kept only if its canonical form is new.
/// Rewrites the engine rejects (dangling edges, vocabulary violations) are
/// skipped. Frontier expansion runs in parallel but the merge is sequential,
/// so the output is identical to a single-threaded run.
pub fn generate(grammar: &Grammar, limits: Limits) -> Result<Vec<Generated>> {
    if limits.max_depth == 0 || limits.max_designs == 0 {
        return Err(Error::ZeroLimit);
    }
    let axiom = Generated {
        design: grammar.axiom.clone(),
        derivation: Derivation::default(),
        canonical: canonical_form(&grammar.axiom),
    };
    let mut seen: HashSet<String> = HashSet::from([axiom.canonical.clone()]);
    let mut out = vec![axiom];
    let mut frontier = vec![0usize];

    for _ in 0..limits.max_depth {
        if frontier.is_empty() || out.len() >= limits.max_designs {
            break;
        }
        let expansions: Vec<Vec<(Step, Design, String)>> = frontier
            .par_iter()
            .map(|&parent| expand(grammar, &out[parent].design))
            .collect();
        let mut next = Vec::new();
        'merge: for (&parent, children) in frontier.iter().zip(expansions) {
            for (step, design, canonical) in children {
                if !seen.insert(canonical.clone()) {
                    continue;
                }
                let mut derivation = out[parent].derivation.clone();
                derivation.steps.push(step);
                next.push(out.len());
                out.push(Generated {
                    design,
                    derivation,
                    canonical,
                });
                if out.len() >= limits.max_designs {
                    break 'merge;
                }
            }
        }
        frontier = next;
    }
    Ok(out)
}

fn expand(grammar: &Grammar, design: &Design) -> Vec<(Step, Design, String)> {
    let mut children = Vec::new();
    for rule in &grammar.rules {
        for m in matches_unchecked(rule, design) {
            if let Ok(child) = apply(&grammar.vocabulary, rule, design, &m) {
                let canonical = canonical_form(&child);
                let step = Step {
                    rule: m.rule,
                    nodes: m.nodes,
                    edges: m.edges,
                };
                children.push((step, child, canonical));
            }
        }
    }
    children
}

/// Re-runs a derivation from the axiom.
pub fn replay(grammar: &Grammar, derivation: &Derivation) -> Result<Design> {
    let mut design = grammar.axiom.clone();
    for step in &derivation.steps {
        let rule = grammar
            .rule(&step.rule)
            .ok_or_else(|| Error::UnknownRule(step.rule.clone()))?;
        let m = Match {
            rule: step.rule.clone(),
            nodes: step.nodes.clone(),
            edges: step.edges.clone(),
            fingerprint: design.fingerprint(),
        };
        design = apply(&grammar.vocabulary, rule, &design, &m)?;
    }
    Ok(design)
}

#[derive(Debug, Clone, PartialEq)]
pub enum GrammarEdit {
    /// Inserts a rule at `position` (clamped to the end), or appends it.
    AddRule {
        rule: Rule,
        position: Option<usize>,
    },
    RemoveRule(String),
    ReplaceAxiom(Design),
}

/// Returns an edited copy of `grammar`.
pub fn modify(grammar: &Grammar, edit: GrammarEdit) -> Result<Grammar> {
    let mut rules = grammar.rules.clone();
    let mut axiom = grammar.axiom.clone();
    match edit {
        GrammarEdit::AddRule { rule, position } => {
            let at = position.unwrap_or(rules.len()).min(rules.len());
            rules.insert(at, rule);
        }
        GrammarEdit::RemoveRule(name) => {
            let at = rules
                .iter()
                .position(|r| r.name == name)
                .ok_or(Error::UnknownRule(name))?;
            rules.remove(at);
        }
        GrammarEdit::ReplaceAxiom(design) => axiom = design,
    }
    Grammar::new(grammar.vocabulary.clone(), rules, axiom)
}
