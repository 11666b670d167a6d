use super::{Design, Match, Rule, Vocabulary};
use crate::Result;

/// All injective embeddings of `rule`'s left-hand side into `design`.
///
/// Node images must carry the pattern's label and satisfy its predicates;
/// every pattern edge maps to a distinct design edge with the same label
/// between the images of its endpoints. Unmatched context in the design is
/// ignored. Matches come out in lexicographic order of their node images,
/// then edge images.
pub fn find_matches(vocabulary: &Vocabulary, rule: &Rule, design: &Design) -> Result<Vec<Match>> {
    vocabulary.check_rule(rule)?;
    vocabulary.check_design(design)?;
    Ok(matches_unchecked(rule, design))
}

pub(crate) fn matches_unchecked(rule: &Rule, design: &Design) -> Vec<Match> {
    let mut search = Search {
        rule,
        design,
        node_map: Vec::with_capacity(rule.lhs.nodes.len()),
        used_nodes: vec![false; design.nodes.len()],
        edge_map: Vec::with_capacity(rule.lhs.edges.len()),
        used_edges: vec![false; design.edges.len()],
        fingerprint: design.fingerprint(),
        out: Vec::new(),
    };
    search.nodes();
    search.out
}

struct Search<'a> {
    rule: &'a Rule,
    design: &'a Design,
    node_map: Vec<usize>,
    used_nodes: Vec<bool>,
    edge_map: Vec<usize>,
    used_edges: Vec<bool>,
    fingerprint: u64,
    out: Vec<Match>,
}

impl Search<'_> {
    fn nodes(&mut self) {
        let depth = self.node_map.len();
        if depth == self.rule.lhs.nodes.len() {
            self.edges();
            return;
        }
        let pattern = &self.rule.lhs.nodes[depth];
        for candidate in 0..self.design.nodes.len() {
            if self.used_nodes[candidate] || !pattern.accepts(&self.design.nodes[candidate]) {
                continue;
            }
            self.node_map.push(candidate);
            if self.edges_still_possible(depth) {
                self.used_nodes[candidate] = true;
                self.nodes();
                self.used_nodes[candidate] = false;
            }
            self.node_map.pop();
        }
    }

    /// Every pattern edge whose endpoints are now both mapped, with one of
    /// them being `newest`, must have at least one candidate image.
    fn edges_still_possible(&self, newest: usize) -> bool {
        self.rule.lhs.edges.iter().all(|pe| {
            if (pe.from != newest && pe.to != newest) || pe.from > newest || pe.to > newest {
                return true;
            }
            let (from, to) = (self.node_map[pe.from], self.node_map[pe.to]);
            self.design
                .edges
                .iter()
                .any(|e| e.from == from && e.to == to && e.label == pe.label)
        })
    }

    fn edges(&mut self) {
        let depth = self.edge_map.len();
        if depth == self.rule.lhs.edges.len() {
            self.out.push(Match {
                rule: self.rule.name.clone(),
                nodes: self.node_map.clone(),
                edges: self.edge_map.clone(),
                fingerprint: self.fingerprint,
            });
            return;
        }
        let pe = &self.rule.lhs.edges[depth];
        let (from, to) = (self.node_map[pe.from], self.node_map[pe.to]);
        for (i, e) in self.design.edges.iter().enumerate() {
            if self.used_edges[i] || e.from != from || e.to != to || e.label != pe.label {
                continue;
            }
            self.used_edges[i] = true;
            self.edge_map.push(i);
            self.edges();
            self.edge_map.pop();
            self.used_edges[i] = false;
        }
    }
}
