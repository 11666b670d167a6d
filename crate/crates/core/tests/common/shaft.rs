//! Independent model of the shaft language: a chain of sections ending in an
//! open or closed end. Only `to_state` and `from_state` touch the engine's
//! types, and neither uses the rewriting code.

use std::collections::BTreeSet;

use designcat::grammar::{Design, Edge, Node};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct ShaftState {
    /// (grooved, diameter, length) from the first section to the last.
    pub sections: Vec<(bool, i64, i64)>,
    pub closed: bool,
}

pub fn oracle_successors(s: &ShaftState) -> Vec<ShaftState> {
    let mut out = Vec::new();
    let last = *s.sections.last().unwrap();
    if !s.closed && !last.0 {
        let mut t = s.clone();
        t.sections.push((false, last.1, 20));
        out.push(t);
    }
    for i in 0..s.sections.len() {
        let (grooved, d, l) = s.sections[i];
        if grooved {
            continue;
        }
        let mut t = s.clone();
        t.sections[i].0 = true;
        out.push(t);
        if d <= 40 {
            let mut t = s.clone();
            t.sections[i].1 = d + 10;
            out.push(t);
        }
        if l <= 80 {
            let mut t = s.clone();
            t.sections[i].2 = l + 20;
            out.push(t);
        }
    }
    if !s.closed {
        let mut t = s.clone();
        t.closed = true;
        out.push(t);
    }
    out
}

pub fn oracle_reachable(depth: usize) -> BTreeSet<ShaftState> {
    fn walk(s: &ShaftState, left: usize, acc: &mut BTreeSet<ShaftState>) {
        acc.insert(s.clone());
        if left > 0 {
            for t in oracle_successors(s) {
                walk(&t, left - 1, acc);
            }
        }
    }
    let axiom = ShaftState {
        sections: vec![(false, 20, 20)],
        closed: false,
    };
    let mut acc = BTreeSet::new();
    walk(&axiom, depth, &mut acc);
    acc
}

/// Reads a shaft design back into the oracle model by walking the chain.
pub fn to_state(d: &Design) -> ShaftState {
    let n = d.nodes.len();
    let mut next = vec![None; n];
    let mut has_pred = vec![false; n];
    for e in &d.edges {
        assert_eq!(e.label, "adjacent");
        assert!(next[e.from].replace(e.to).is_none(), "branching shaft");
        has_pred[e.to] = true;
    }
    let mut at = (0..n).find(|&i| !has_pred[i]).expect("chain head");
    let mut sections = Vec::new();
    loop {
        let node = &d.nodes[at];
        match node.label.as_str() {
            "section" | "grooved" => {
                let int = |k: &str| match node.attrs[k] {
                    designcat::grammar::AttrValue::Int(v) => v,
                    ref other => panic!("{other:?}"),
                };
                sections.push((node.label == "grooved", int("diameter"), int("length")));
                at = next[at].expect("sections are followed by something");
            }
            "open_end" | "closed_end" => {
                assert!(next[at].is_none());
                assert_eq!(sections.len() + 1, n);
                return ShaftState {
                    sections,
                    closed: node.label == "closed_end",
                };
            }
            other => panic!("unexpected label {other}"),
        }
    }
}

/// The design a state stands for, built directly.
pub fn from_state(s: &ShaftState) -> Design {
    let mut nodes: Vec<Node> = s
        .sections
        .iter()
        .map(|&(g, d, l)| {
            Node::new(if g { "grooved" } else { "section" })
                .with("diameter", d)
                .with("length", l)
        })
        .collect();
    nodes.push(Node::new(if s.closed { "closed_end" } else { "open_end" }));
    let edges = (0..s.sections.len())
        .map(|i| Edge::new(i, i + 1, "adjacent"))
        .collect();
    Design::new(nodes, edges)
}
