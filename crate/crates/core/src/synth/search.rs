//! Exhaustive gate-level search.
//!
//! Assignment search walks the slots in order and tries gates in
//! [`GateType::ALL`] order, so the first complete hit is the
//! lexicographically first assignment. A slot's column is final as soon as
//! its gate is chosen, so output slots are checked against their targets
//! immediately.
//!
//! Topology search enumerates gate-free "skeletons" by size. Within a size,
//! skeletons are generated in canonical order: slot keys `(depth, inputs)`
//! never decrease, binary inputs are sorted, and no more slots may be left
//! unconsumed than there are distinct target columns. Every DAG has at least
//! one such ordering (sort level by level), so nothing is missed. Size-specific pruning (no two
//! slots with the same column, no buffer of a primary input that is not an
//! output) only discards circuits that could be shrunk, and since sizes are
//! tried in increasing order those never matter.

use rayon::prelude::*;

use super::{input_column, row_mask, Circuit, GateType, Output, Requirement, Signal, Slot, Topology};
use crate::{Error, Result};

/// Depth, first input, second input. Canonical skeletons never decrease it.
type SlotKey = (usize, usize, Option<usize>);

/// Lexicographically first gate assignment making `topology` meet `req`,
/// or `None` when there is none.
pub fn synthesize_assignment(topology: &Topology, req: &Requirement) -> Result<Option<Circuit>> {
    let n = topology.inputs().len();
    if n != req.inputs().len() || topology.outputs().len() != req.outputs().len() {
        return Err(Error::ArityMismatch(format!(
            "topology has {} inputs and {} outputs, requirement has {} and {}",
            n,
            topology.outputs().len(),
            req.inputs().len(),
            req.outputs().len()
        )));
    }
    let mut wanted: Vec<Vec<u64>> = vec![Vec::new(); topology.slots().len()];
    for (o, &t) in topology.outputs().iter().zip(req.tables()) {
        wanted[o.slot].push(t);
    }
    let shapes: Vec<Shape> = topology
        .slots()
        .iter()
        .map(|s| {
            let flat = |sig: &Signal| match *sig {
                Signal::Input(k) => k,
                Signal::Slot(k) => n + k,
            };
            Shape {
                a: flat(&s.inputs[0]),
                b: s.inputs.get(1).map(flat),
            }
        })
        .collect();
    let check = |slot: usize, col: u64, _: &[u64]| wanted[slot].iter().all(|&t| t == col);
    let gates = backtrack(n, &shapes, &check);
    Ok(gates.map(|g| {
        verified(
            Circuit::new(topology.clone(), g).expect("arity-matched by construction"),
            req,
        )
    }))
}

/// Smallest circuit meeting `req` with at most `max_gates` gates, taking the
/// first canonical skeleton that admits an assignment.
pub fn synthesize_topology(req: &Requirement, max_gates: usize) -> Result<Option<Circuit>> {
    if max_gates == 0 {
        return Err(Error::InvalidArgument("max_gates must be at least 1".into()));
    }
    let n = req.inputs().len();
    let mut targets: Vec<u64> = req.tables().to_vec();
    targets.sort_unstable();
    targets.dedup();
    let inputs: Vec<u64> = (0..n).map(|i| input_column(n, i)).collect();

    for k in 1..=max_gates {
        let skeletons = skeletons(n, k, targets.len());
        let found = skeletons.par_iter().find_map_first(|sk| {
            let consumed = consumed(n, sk);
            let check = |slot: usize, col: u64, earlier: &[u64]| {
                let fits = if consumed[slot] {
                    !earlier.contains(&col) && !inputs.contains(&col)
                } else {
                    targets.binary_search(&col).is_ok()
                };
                fits && (slot + 1 < k || targets.iter().all(|t| *t == col || earlier.contains(t)))
            };
            backtrack(n, sk, &check).map(|g| (sk, g))
        });
        if let Some((sk, gates)) = found {
            return Ok(Some(verified(build(req, sk, gates), req)));
        }
    }
    Ok(None)
}

/// Gate inputs as indices into `inputs ++ slots`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Shape {
    a: usize,
    b: Option<usize>,
}

impl Shape {
    fn arity(&self) -> usize {
        1 + self.b.is_some() as usize
    }
}

fn verified(c: Circuit, req: &Requirement) -> Circuit {
    assert!(
        c.satisfies(req),
        "search returned a circuit that fails its requirement"
    );
    c
}

/// Depth-first over gate choices. `accept(slot, column, earlier columns)`
/// prunes as soon as a column is known.
fn backtrack(
    n: usize,
    shapes: &[Shape],
    accept: &dyn Fn(usize, u64, &[u64]) -> bool,
) -> Option<Vec<GateType>> {
    let mask = row_mask(n);
    let mut cols: Vec<u64> = (0..n).map(|i| input_column(n, i)).collect();
    let mut gates = Vec::with_capacity(shapes.len());

    fn go(
        n: usize,
        mask: u64,
        shapes: &[Shape],
        accept: &dyn Fn(usize, u64, &[u64]) -> bool,
        cols: &mut Vec<u64>,
        gates: &mut Vec<GateType>,
    ) -> bool {
        let slot = gates.len();
        let Some(shape) = shapes.get(slot) else {
            return true;
        };
        let a = cols[shape.a];
        let b = shape.b.map(|b| cols[b]).unwrap_or(0);
        for &g in GateType::of_arity(shape.arity()) {
            let col = g.apply(a, b) & mask;
            if !accept(slot, col, &cols[n..]) {
                continue;
            }
            cols.push(col);
            gates.push(g);
            if go(n, mask, shapes, accept, cols, gates) {
                return true;
            }
            cols.pop();
            gates.pop();
        }
        false
    }

    go(n, mask, shapes, accept, &mut cols, &mut gates).then_some(gates)
}

fn consumed(n: usize, shapes: &[Shape]) -> Vec<bool> {
    let mut used = vec![false; shapes.len()];
    for s in shapes {
        for x in [Some(s.a), s.b].into_iter().flatten() {
            if x >= n {
                used[x - n] = true;
            }
        }
    }
    used
}

/// Canonical skeletons with `k` slots over `n` inputs leaving at most
/// `max_sinks` slots unconsumed, in generation order.
fn skeletons(n: usize, k: usize, max_sinks: usize) -> Vec<Vec<Shape>> {
    struct Gen {
        n: usize,
        k: usize,
        max_sinks: usize,
        depth: Vec<usize>,
        unused: Vec<bool>,
        current: Vec<Shape>,
        out: Vec<Vec<Shape>>,
    }

    impl Gen {
        fn key(&self, s: Shape) -> SlotKey {
            let d = 1 + self.depth[s.a].max(s.b.map(|b| self.depth[b]).unwrap_or(0));
            (d, s.a, s.b)
        }

        fn push(&mut self, s: Shape) -> [bool; 2] {
            let was = [self.unused[s.a], s.b.map(|b| self.unused[b]).unwrap_or(false)];
            let d = self.key(s).0;
            self.unused[s.a] = false;
            if let Some(b) = s.b {
                self.unused[b] = false;
            }
            self.depth.push(d);
            self.unused.push(true);
            self.current.push(s);
            was
        }

        fn pop(&mut self, was: [bool; 2]) {
            let s = self.current.pop().unwrap();
            self.depth.pop();
            self.unused.pop();
            if let Some(b) = s.b {
                self.unused[b] = was[1];
            }
            self.unused[s.a] = was[0];
        }

        fn run(&mut self) {
            let placed = self.current.len();
            let open = self.unused[self.n..].iter().filter(|&&u| u).count();
            // Each remaining slot can close at most one net dangling slot.
            if open > self.max_sinks + (self.k - placed) {
                return;
            }
            if placed == self.k {
                self.out.push(self.current.clone());
                return;
            }
            let signals = self.n + placed;
            let floor = self.current.last().map(|&s| {
                let d = self.depth[self.n + placed - 1];
                (d, s.a, s.b)
            });
            let mut candidates: Vec<Shape> = Vec::new();
            for a in 0..signals {
                candidates.push(Shape { a, b: None });
                for b in a..signals {
                    candidates.push(Shape { a, b: Some(b) });
                }
            }
            let mut keyed: Vec<(SlotKey, Shape)> = candidates.into_iter().map(|s| (self.key(s), s)).collect();
            keyed.sort_by_key(|&(key, _)| key);
            for (key, s) in keyed {
                if floor.is_some_and(|f| key < f) {
                    continue;
                }
                let was = self.push(s);
                self.run();
                self.pop(was);
            }
        }
    }

    let mut g = Gen {
        n,
        k,
        max_sinks,
        depth: vec![0; n],
        unused: vec![false; n],
        current: Vec::new(),
        out: Vec::new(),
    };
    g.run();
    g.out
}

fn build(req: &Requirement, shapes: &[Shape], gates: Vec<GateType>) -> Circuit {
    let n = req.inputs().len();
    let signal = |x: usize| {
        if x < n {
            Signal::Input(x)
        } else {
            Signal::Slot(x - n)
        }
    };
    let slots: Vec<Slot> = shapes
        .iter()
        .enumerate()
        .map(|(i, s)| Slot {
            id: format!("g{}", i + 1),
            inputs: [Some(s.a), s.b].into_iter().flatten().map(signal).collect(),
        })
        .collect();
    let mut cols: Vec<u64> = Vec::new();
    for (s, g) in shapes.iter().zip(&gates) {
        let read = |x: usize| if x < n { input_column(n, x) } else { cols[x - n] };
        let col = g.apply(read(s.a), s.b.map(read).unwrap_or(0)) & row_mask(n);
        cols.push(col);
    }
    let outputs = req
        .outputs()
        .iter()
        .zip(req.tables())
        .map(|(name, t)| Output {
            name: name.clone(),
            slot: cols.iter().position(|c| c == t).expect("every target has a slot"),
        })
        .collect();
    let topology =
        Topology::new(req.inputs().to_vec(), slots, outputs).expect("canonical skeletons are valid");
    Circuit::new(topology, gates).expect("arity-matched by construction")
}
