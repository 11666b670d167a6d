//! Canonical forms by colour refinement plus individualization.
//!
//! Nodes start coloured by label and attributes. Refinement splits colour
//! classes by the multiset of (direction, edge label, neighbour colour) until
//! stable. If classes remain that hold several nodes, the first such class is
//! split by individualizing each of its members in turn, and the smallest
//! encoding over all branches wins. Colours are ranks of isomorphism-invariant
//! keys, so isomorphic designs reach the same set of leaf encodings.

use std::collections::BTreeMap;

use super::Design;

/// A string that is equal for two designs iff they are isomorphic,
/// respecting node labels, attributes, edge labels and edge multiplicity.
pub fn canonical_form(design: &Design) -> String {
    let signatures: Vec<String> = design.nodes.iter().map(node_signature).collect();
    let colours = rank(&signatures);
    let colours = refine(design, colours);
    let mut best = None;
    search(design, &signatures, colours, &mut best);
    best.unwrap_or_default()
}

fn node_signature(node: &super::Node) -> String {
    let mut s = format!("{}:{}", node.label.len(), node.label);
    for (k, v) in &node.attrs {
        s.push_str(&format!("|{}:{k}=", k.len()));
        v.encode(&mut s);
    }
    s
}

/// Dense ranks of `keys` in sorted order.
fn rank<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let distinct: BTreeMap<K, usize> = {
        let mut sorted: Vec<K> = keys.to_vec();
        sorted.sort();
        sorted.dedup();
        sorted.into_iter().enumerate().map(|(i, k)| (k, i)).collect()
    };
    keys.iter().map(|k| distinct[k]).collect()
}

fn count(colours: &[usize]) -> usize {
    colours.iter().max().map_or(0, |m| m + 1)
}

/// Edge direction, label, neighbour colour.
type Arc<'a> = (u8, &'a str, usize);

fn refine(design: &Design, mut colours: Vec<usize>) -> Vec<usize> {
    loop {
        let before = count(&colours);
        let mut keys: Vec<(usize, Vec<Arc<'_>>)> = colours.iter().map(|&c| (c, Vec::new())).collect();
        for e in &design.edges {
            keys[e.from].1.push((0, e.label.as_str(), colours[e.to]));
            keys[e.to].1.push((1, e.label.as_str(), colours[e.from]));
        }
        for k in &mut keys {
            k.1.sort_unstable();
        }
        colours = rank(&keys);
        if count(&colours) == before {
            return colours;
        }
    }
}

fn search(design: &Design, signatures: &[String], colours: Vec<usize>, best: &mut Option<String>) {
    let n = colours.len();
    if count(&colours) == n {
        let encoded = encode(design, signatures, &colours);
        if best.as_ref().is_none_or(|b| encoded < *b) {
            *best = Some(encoded);
        }
        return;
    }
    let mut sizes = vec![0usize; n];
    for &c in &colours {
        sizes[c] += 1;
    }
    let target = (0..n)
        .find(|&c| sizes[c] > 1)
        .expect("a non-singleton class exists");
    for v in (0..n).filter(|&v| colours[v] == target) {
        let keys: Vec<(usize, bool)> = colours.iter().enumerate().map(|(u, &c)| (c, u != v)).collect();
        search(design, signatures, refine(design, rank(&keys)), best);
    }
}

/// Nodes listed in colour order, then edges sorted by (from, to, label).
fn encode(design: &Design, signatures: &[String], colours: &[usize]) -> String {
    let mut order = vec![0; colours.len()];
    for (v, &c) in colours.iter().enumerate() {
        order[c] = v;
    }
    let mut out = String::new();
    for &v in &order {
        out.push_str(&signatures[v]);
        out.push(';');
    }
    let mut edges: Vec<(usize, usize, &str)> = design
        .edges
        .iter()
        .map(|e| (colours[e.from], colours[e.to], e.label.as_str()))
        .collect();
    edges.sort_unstable();
    out.push('#');
    for (a, b, label) in edges {
        out.push_str(&format!("{a}>{b}:{}:{label};", label.len()));
    }
    out
}
