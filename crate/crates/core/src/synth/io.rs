//! JSON forms of topologies, circuits and truth tables. Signals are referred
//! to by name: a primary input name or an earlier slot id.

use std::collections::HashMap;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Circuit, GateType, Output, Requirement, Signal, Slot, Topology};
use crate::{Error, Result};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSlot {
    id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gate: Option<GateType>,
    inputs: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    name: String,
    slot: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNetwork {
    inputs: Vec<String>,
    slots: Vec<RawSlot>,
    outputs: Vec<RawOutput>,
}

fn to_raw(t: &Topology, gates: Option<&[GateType]>) -> RawNetwork {
    RawNetwork {
        inputs: t.inputs.clone(),
        slots: t
            .slots
            .iter()
            .enumerate()
            .map(|(i, s)| RawSlot {
                id: s.id.clone(),
                gate: gates.map(|g| g[i]),
                inputs: s.inputs.iter().map(|x| t.signal_name(*x).to_string()).collect(),
            })
            .collect(),
        outputs: t
            .outputs
            .iter()
            .map(|o| RawOutput {
                name: o.name.clone(),
                slot: t.slots[o.slot].id.clone(),
            })
            .collect(),
    }
}

/// Resolves names; gate fields are returned separately.
fn from_raw(raw: RawNetwork) -> Result<(Topology, Vec<Option<GateType>>)> {
    let mut known: HashMap<String, Signal> = raw
        .inputs
        .iter()
        .enumerate()
        .map(|(i, n)| (n.clone(), Signal::Input(i)))
        .collect();
    let mut slots = Vec::with_capacity(raw.slots.len());
    let mut gates = Vec::with_capacity(raw.slots.len());
    for (i, s) in raw.slots.into_iter().enumerate() {
        let mut inputs = Vec::with_capacity(s.inputs.len());
        for (j, name) in s.inputs.iter().enumerate() {
            match known.get(name) {
                Some(sig) => inputs.push(*sig),
                None => {
                    return Err(Error::parse(
                        format!("slots[{i}].inputs[{j}]"),
                        format!("`{name}` is not a primary input or an earlier slot"),
                    ))
                }
            }
        }
        known.entry(s.id.clone()).or_insert(Signal::Slot(i));
        gates.push(s.gate);
        slots.push(Slot { id: s.id, inputs });
    }
    let mut outputs = Vec::with_capacity(raw.outputs.len());
    for (i, o) in raw.outputs.into_iter().enumerate() {
        match known.get(&o.slot) {
            Some(Signal::Slot(k)) => outputs.push(Output {
                name: o.name,
                slot: *k,
            }),
            _ => {
                return Err(Error::parse(
                    format!("outputs[{i}].slot"),
                    format!("no slot `{}`", o.slot),
                ))
            }
        }
    }
    Ok((Topology::new(raw.inputs, slots, outputs)?, gates))
}

impl Serialize for Topology {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        to_raw(self, None).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Topology {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (t, gates) = from_raw(RawNetwork::deserialize(d)?).map_err(D::Error::custom)?;
        if let Some(i) = gates.iter().position(Option::is_some) {
            return Err(D::Error::custom(format!(
                "slots[{i}].gate: a topology leaves gates open"
            )));
        }
        Ok(t)
    }
}

impl Serialize for Circuit {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        to_raw(&self.topology, Some(&self.gates)).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Circuit {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (t, gates) = from_raw(RawNetwork::deserialize(d)?).map_err(D::Error::custom)?;
        let gates = gates
            .into_iter()
            .enumerate()
            .map(|(i, g)| g.ok_or_else(|| D::Error::custom(format!("slots[{i}].gate: missing"))))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Circuit::new(t, gates).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRow {
    #[serde(rename = "in")]
    input: Vec<u8>,
    out: Vec<u8>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRequirement {
    inputs: Vec<String>,
    outputs: Vec<String>,
    rows: Vec<RawRow>,
}

fn bits_to_row(bits: &[u8]) -> Option<usize> {
    bits.iter()
        .try_fold(0usize, |acc, &b| (b <= 1).then_some(acc << 1 | b as usize))
}

impl Serialize for Requirement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.inputs.len();
        RawRequirement {
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
            rows: (0..self.rows())
                .map(|r| RawRow {
                    input: super::row_bits(n, r).into_iter().map(u8::from).collect(),
                    out: self.expected(r).into_iter().map(u8::from).collect(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Requirement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawRequirement::deserialize(d)?;
        let (n, m) = (raw.inputs.len(), raw.outputs.len());
        if n == 0 || n > super::MAX_INPUTS {
            return Err(D::Error::custom(format!(
                "inputs: {n} inputs; between 1 and {} are supported",
                super::MAX_INPUTS
            )));
        }
        let mut seen = vec![false; 1 << n];
        let mut tables = vec![0u64; m];
        for (i, row) in raw.rows.iter().enumerate() {
            if row.input.len() != n {
                return Err(D::Error::custom(format!(
                    "rows[{i}].in: expected {n} bits, got {}",
                    row.input.len()
                )));
            }
            if row.out.len() != m {
                return Err(D::Error::custom(format!(
                    "rows[{i}].out: expected {m} bits, got {}",
                    row.out.len()
                )));
            }
            let (Some(r), Some(_)) = (bits_to_row(&row.input), bits_to_row(&row.out)) else {
                return Err(D::Error::custom(format!("rows[{i}]: bits must be 0 or 1")));
            };
            if std::mem::replace(&mut seen[r], true) {
                return Err(D::Error::custom(format!("rows[{i}]: duplicate input row")));
            }
            for (t, &b) in tables.iter_mut().zip(&row.out) {
                *t |= (b as u64) << r;
            }
        }
        if let Some(r) = seen.iter().position(|s| !s) {
            let missing: Vec<String> = super::row_bits(n, r)
                .iter()
                .map(|&b| (b as u8).to_string())
                .collect();
            return Err(D::Error::custom(format!(
                "rows: missing input row [{}]",
                missing.join(",")
            )));
        }
        Requirement::from_tables(raw.inputs, raw.outputs, tables).map_err(D::Error::custom)
    }
}

macro_rules! from_json {
    ($($t:ty),*) => {$(
        impl $t {
            pub fn from_json(bytes: &[u8]) -> Result<Self> {
                serde_json::from_slice(bytes).map_err(Error::json)
            }
        }
    )*};
}

from_json!(Topology, Circuit, Requirement);
