//! Boolean circuit synthesis over a fixed five-gate vocabulary.
//!
//! Truth tables are bitsets: row `r` of an `n`-input table assigns input `i`
//! the bit `(r >> (n - 1 - i)) & 1`, so the first input is the most
//! significant. With at most six inputs a whole column fits in one `u64`,
//! and a gate is evaluated on every row with a single machine operation.

mod io;
mod search;

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::funcstruct::{BoundaryTerminal, Flow, FunctionStructure, FunctionVertex, TerminalKind};
use crate::{Error, Result};

pub use search::{synthesize_assignment, synthesize_topology};

/// Widest requirement the bitset representation supports.
pub const MAX_INPUTS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum GateType {
    Identity,
    Not,
    And,
    Or,
    Xor,
}

impl GateType {
    /// Search order. Also the tie-break order for assignments.
    pub const ALL: [GateType; 5] = [
        GateType::Identity,
        GateType::Not,
        GateType::And,
        GateType::Or,
        GateType::Xor,
    ];

    pub fn arity(self) -> usize {
        match self {
            GateType::Identity | GateType::Not => 1,
            GateType::And | GateType::Or | GateType::Xor => 2,
        }
    }

    pub fn of_arity(arity: usize) -> &'static [GateType] {
        match arity {
            1 => &Self::ALL[..2],
            2 => &Self::ALL[2..],
            _ => &[],
        }
    }

    /// Applies the gate column-wise. `b` is ignored for unary gates; the
    /// caller masks off rows past the table.
    pub fn apply(self, a: u64, b: u64) -> u64 {
        match self {
            GateType::Identity => a,
            GateType::Not => !a,
            GateType::And => a & b,
            GateType::Or => a | b,
            GateType::Xor => a ^ b,
        }
    }
}

impl fmt::Display for GateType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GateType::Identity => "IDENTITY",
            GateType::Not => "NOT",
            GateType::And => "AND",
            GateType::Or => "OR",
            GateType::Xor => "XOR",
        };
        f.write_str(s)
    }
}

/// Where a gate input comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Signal {
    Input(usize),
    Slot(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slot {
    pub id: String,
    /// One or two sources; the length is the slot's arity.
    pub inputs: Vec<Signal>,
}

impl Slot {
    pub fn arity(&self) -> usize {
        self.inputs.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub name: String,
    pub slot: usize,
}

/// A gate network with the gate types left open.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    inputs: Vec<String>,
    slots: Vec<Slot>,
    outputs: Vec<Output>,
}

impl Topology {
    /// Checks that references point backwards, arities are 1 or 2, names
    /// are distinct and every slot feeds some output.
    pub fn new(inputs: Vec<String>, slots: Vec<Slot>, outputs: Vec<Output>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidTopology(msg));
        if outputs.is_empty() {
            return bad("no primary outputs".into());
        }
        let mut names = HashSet::new();
        let all_names = inputs
            .iter()
            .chain(slots.iter().map(|s| &s.id))
            .chain(outputs.iter().map(|o| &o.name));
        for name in all_names {
            if name.is_empty() {
                return bad("empty name".into());
            }
            if !names.insert(name.as_str()) {
                return bad(format!("name `{name}` used twice"));
            }
        }
        for (i, slot) in slots.iter().enumerate() {
            if !(1..=2).contains(&slot.arity()) {
                return bad(format!(
                    "slot `{}` has {} inputs, expected 1 or 2",
                    slot.id,
                    slot.arity()
                ));
            }
            for s in &slot.inputs {
                match *s {
                    Signal::Input(k) if k >= inputs.len() => {
                        return bad(format!("slot `{}` reads missing input {k}", slot.id))
                    }
                    Signal::Slot(k) if k >= i => {
                        return bad(format!("slot `{}` reads a later or its own slot", slot.id))
                    }
                    _ => {}
                }
            }
        }
        let mut used = vec![false; slots.len()];
        for o in &outputs {
            if o.slot >= slots.len() {
                return bad(format!("output `{}` reads missing slot {}", o.name, o.slot));
            }
            used[o.slot] = true;
        }
        for i in (0..slots.len()).rev() {
            if !used[i] {
                return bad(format!("slot `{}` does not reach any output", slots[i].id));
            }
            for s in &slots[i].inputs {
                if let Signal::Slot(k) = *s {
                    used[k] = true;
                }
            }
        }
        Ok(Topology {
            inputs,
            slots,
            outputs,
        })
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn outputs(&self) -> &[Output] {
        &self.outputs
    }

    fn signal_name(&self, s: Signal) -> &str {
        match s {
            Signal::Input(k) => &self.inputs[k],
            Signal::Slot(k) => &self.slots[k].id,
        }
    }
}

/// A complete truth table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Requirement {
    inputs: Vec<String>,
    outputs: Vec<String>,
    /// One column per output.
    tables: Vec<u64>,
}

impl Requirement {
    /// Builds a requirement from output columns in the bitset layout.
    pub fn from_tables(inputs: Vec<String>, outputs: Vec<String>, tables: Vec<u64>) -> Result<Self> {
        let n = inputs.len();
        if n == 0 || n > MAX_INPUTS {
            return Err(Error::InvalidRequirement(format!(
                "{n} inputs; between 1 and {MAX_INPUTS} are supported"
            )));
        }
        if outputs.is_empty() || outputs.len() != tables.len() {
            return Err(Error::InvalidRequirement(
                "need one table per output, and at least one".into(),
            ));
        }
        let mask = row_mask(n);
        Ok(Requirement {
            inputs,
            outputs,
            tables: tables.into_iter().map(|t| t & mask).collect(),
        })
    }

    /// Tabulates `f` over every input row.
    pub fn from_fn(inputs: &[&str], outputs: &[&str], f: impl Fn(&[bool]) -> Vec<bool>) -> Result<Self> {
        let n = inputs.len();
        if n > MAX_INPUTS {
            return Err(Error::InvalidRequirement(format!(
                "more than {MAX_INPUTS} inputs"
            )));
        }
        let mut tables = vec![0u64; outputs.len()];
        for r in 0..1usize << n {
            let out = f(&row_bits(n, r));
            if out.len() != outputs.len() {
                return Err(Error::InvalidRequirement(format!(
                    "row {r} has {} outputs",
                    out.len()
                )));
            }
            for (t, bit) in tables.iter_mut().zip(out) {
                *t |= (bit as u64) << r;
            }
        }
        Self::from_tables(
            inputs.iter().map(|s| s.to_string()).collect(),
            outputs.iter().map(|s| s.to_string()).collect(),
            tables,
        )
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[String] {
        &self.outputs
    }

    pub fn tables(&self) -> &[u64] {
        &self.tables
    }

    pub fn rows(&self) -> usize {
        1 << self.inputs.len()
    }

    /// Expected outputs for one input row.
    pub fn expected(&self, row: usize) -> Vec<bool> {
        self.tables.iter().map(|t| t >> row & 1 == 1).collect()
    }
}

pub(crate) fn row_mask(n: usize) -> u64 {
    if n >= MAX_INPUTS {
        u64::MAX
    } else {
        (1u64 << (1 << n)) - 1
    }
}

/// Input bits of row `r`, first input most significant.
pub fn row_bits(n: usize, r: usize) -> Vec<bool> {
    (0..n).map(|i| r >> (n - 1 - i) & 1 == 1).collect()
}

/// The column of input `i` among `n`.
pub(crate) fn input_column(n: usize, i: usize) -> u64 {
    (0..1usize << n)
        .filter(|&r| r >> (n - 1 - i) & 1 == 1)
        .fold(0, |acc, r| acc | 1 << r)
}

/// A topology with a gate type in every slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    topology: Topology,
    gates: Vec<GateType>,
}

impl Circuit {
    pub fn new(topology: Topology, gates: Vec<GateType>) -> Result<Self> {
        if gates.len() != topology.slots.len() {
            return Err(Error::ArityMismatch(format!(
                "{} gates for {} slots",
                gates.len(),
                topology.slots.len()
            )));
        }
        for (slot, gate) in topology.slots.iter().zip(&gates) {
            if slot.arity() != gate.arity() {
                return Err(Error::ArityMismatch(format!(
                    "slot `{}` has {} inputs but {gate} takes {}",
                    slot.id,
                    slot.arity(),
                    gate.arity()
                )));
            }
        }
        Ok(Circuit { topology, gates })
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn gates(&self) -> &[GateType] {
        &self.gates
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    /// Output columns over all `2^n` rows.
    pub fn tables(&self) -> Vec<u64> {
        let n = self.topology.inputs.len();
        let cols = slot_columns(&self.topology, &self.gates);
        self.topology
            .outputs
            .iter()
            .map(|o| cols[o.slot] & row_mask(n))
            .collect()
    }

    /// Checks every row against `req`.
    pub fn satisfies(&self, req: &Requirement) -> bool {
        self.topology.inputs.len() == req.inputs.len()
            && self.topology.outputs.len() == req.outputs.len()
            && (0..req.rows())
                .all(|r| self.evaluate(&row_bits(req.inputs.len(), r)).ok() == Some(req.expected(r)))
    }

    /// Evaluates one input row, gate by gate.
    pub fn evaluate(&self, bits: &[bool]) -> Result<Vec<bool>> {
        let n = self.topology.inputs.len();
        if bits.len() != n {
            return Err(Error::WidthMismatch {
                expected: n,
                got: bits.len(),
            });
        }
        let mut values: Vec<bool> = Vec::with_capacity(self.gates.len());
        for (slot, gate) in self.topology.slots.iter().zip(&self.gates) {
            let read = |s: &Signal| match *s {
                Signal::Input(k) => bits[k],
                Signal::Slot(k) => values[k],
            };
            let a = read(&slot.inputs[0]);
            let b = slot.inputs.get(1).map(read).unwrap_or(false);
            values.push(gate.apply(a as u64, b as u64) & 1 == 1);
        }
        Ok(self.topology.outputs.iter().map(|o| values[o.slot]).collect())
    }

    /// One vertex per gate, one flow per wire, and a terminal per primary
    /// input and output.
    pub fn to_function_structure(&self) -> FunctionStructure {
        let t = &self.topology;
        let vertices = t
            .slots
            .iter()
            .zip(&self.gates)
            .map(|(s, g)| FunctionVertex {
                id: s.id.clone(),
                label: g.to_string(),
            })
            .collect();
        let terminals = t
            .inputs
            .iter()
            .map(|name| (name, TerminalKind::Input))
            .chain(t.outputs.iter().map(|o| (&o.name, TerminalKind::Output)))
            .map(|(name, kind)| BoundaryTerminal {
                id: name.clone(),
                kind,
                label: name.as_str().into(),
            })
            .collect();
        let mut flows = Vec::new();
        for slot in &t.slots {
            for s in &slot.inputs {
                let src = t.signal_name(*s);
                flows.push(Flow::new(src, slot.id.clone(), src));
            }
        }
        for o in &t.outputs {
            flows.push(Flow::new(
                t.slots[o.slot].id.clone(),
                o.name.clone(),
                o.name.as_str(),
            ));
        }
        FunctionStructure::new(vertices, terminals, flows)
    }
}

/// Column of every slot, unmasked.
pub(crate) fn slot_columns(t: &Topology, gates: &[GateType]) -> Vec<u64> {
    let n = t.inputs.len();
    let mut cols: Vec<u64> = Vec::with_capacity(gates.len());
    for (slot, gate) in t.slots.iter().zip(gates) {
        let read = |s: &Signal| match *s {
            Signal::Input(k) => input_column(n, k),
            Signal::Slot(k) => cols[k],
        };
        let a = read(&slot.inputs[0]);
        let b = slot.inputs.get(1).map(read).unwrap_or(0);
        cols.push(gate.apply(a, b));
    }
    cols
}
