//! `.fs.json` reading and writing.
//!
//! ```json
//! {"kind": "structure", "vertices": [{"id", "label"}],
//!  "terminals": [{"id", "kind", "label"}], "flows": [{"source", "target", "label"}]}
//! {"kind": "blackbox", "label": "...", "inputs": [...], "outputs": [...]}
//! ```

use std::collections::HashSet;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use super::{BlackBox, BoundaryTerminal, DesignProblem, Flow, FlowLabel, FunctionStructure, FunctionVertex};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Structure,
    Blackbox,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStructure {
    kind: Kind,
    vertices: Vec<FunctionVertex>,
    terminals: Vec<BoundaryTerminal>,
    flows: Vec<Flow>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBlackBox {
    kind: Kind,
    label: String,
    inputs: Vec<FlowLabel>,
    outputs: Vec<FlowLabel>,
}

fn check_structure(raw: RawStructure) -> std::result::Result<FunctionStructure, String> {
    if raw.kind != Kind::Structure {
        return Err("expected `\"kind\": \"structure\"`".into());
    }
    let mut seen = HashSet::new();
    for (i, v) in raw.vertices.iter().enumerate() {
        if v.id.is_empty() {
            return Err(format!("vertices[{i}].id: empty id"));
        }
        if !seen.insert(v.id.as_str()) {
            return Err(format!("vertices[{i}].id: duplicate id `{}`", v.id));
        }
    }
    for (i, t) in raw.terminals.iter().enumerate() {
        if t.id.is_empty() {
            return Err(format!("terminals[{i}].id: empty id"));
        }
        if !seen.insert(t.id.as_str()) {
            return Err(format!("terminals[{i}].id: duplicate id `{}`", t.id));
        }
        if t.label.as_str().is_empty() {
            return Err(format!("terminals[{i}].label: empty flow label"));
        }
    }
    for (i, f) in raw.flows.iter().enumerate() {
        if f.label.as_str().is_empty() {
            return Err(format!("flows[{i}].label: empty flow label"));
        }
        for (field, id) in [("source", &f.source), ("target", &f.target)] {
            if !seen.contains(id.as_str()) {
                return Err(format!("flows[{i}].{field}: unknown id `{id}`"));
            }
        }
    }
    Ok(FunctionStructure::new(raw.vertices, raw.terminals, raw.flows))
}

fn check_black_box(raw: RawBlackBox) -> std::result::Result<BlackBox, String> {
    if raw.kind != Kind::Blackbox {
        return Err("expected `\"kind\": \"blackbox\"`".into());
    }
    if raw.inputs.is_empty() {
        return Err("inputs: a black box needs at least one input".into());
    }
    if raw.outputs.is_empty() {
        return Err("outputs: a black box needs at least one output".into());
    }
    for (field, labels) in [("inputs", &raw.inputs), ("outputs", &raw.outputs)] {
        if let Some(i) = labels.iter().position(|l| l.as_str().is_empty()) {
            return Err(format!("{field}[{i}]: empty flow label"));
        }
    }
    Ok(BlackBox {
        label: raw.label,
        inputs: raw.inputs,
        outputs: raw.outputs,
    })
}

impl Serialize for FunctionStructure {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawStructure {
            kind: Kind::Structure,
            vertices: self.vertices.clone(),
            terminals: self.terminals.clone(),
            flows: self.flows.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FunctionStructure {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        check_structure(RawStructure::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl Serialize for BlackBox {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawBlackBox {
            kind: Kind::Blackbox,
            label: self.label.clone(),
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BlackBox {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        check_black_box(RawBlackBox::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl Serialize for DesignProblem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            DesignProblem::BlackBox(bb) => bb.serialize(s),
            DesignProblem::Structure(fs) => fs.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for DesignProblem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let value = Value::deserialize(d)?;
        from_value(value).map_err(|e| serde::de::Error::custom(e.to_string()))
    }
}

fn from_value(value: Value) -> Result<DesignProblem> {
    let kind = match value.get("kind") {
        None => return Err(Error::parse("kind", "missing field `kind`")),
        Some(Value::String(k)) => k.clone(),
        Some(other) => return Err(Error::parse("kind", format!("expected a string, found {other}"))),
    };
    let at = |e: serde_json::Error| Error::parse("document", e);
    match kind.as_str() {
        "structure" => serde_json::from_value(value)
            .map(DesignProblem::Structure)
            .map_err(at),
        "blackbox" => serde_json::from_value(value)
            .map(DesignProblem::BlackBox)
            .map_err(at),
        other => Err(Error::parse(
            "kind",
            format!("unknown kind `{other}`, expected `structure` or `blackbox`"),
        )),
    }
}

/// Parses an `.fs.json` document.
pub fn parse_structure(bytes: &[u8]) -> Result<DesignProblem> {
    if bytes.iter().all(u8::is_ascii_whitespace) {
        return Err(Error::parse("document", "empty document"));
    }
    let value: Value = serde_json::from_slice(bytes).map_err(Error::json)?;
    if !value.is_object() {
        return Err(Error::parse("document", "expected a JSON object"));
    }
    from_value(value)
}

/// Pretty-printed `.fs.json` bytes, newline-terminated.
pub fn serialize_structure(problem: &DesignProblem) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(problem).expect("design problems always serialize");
    out.push(b'\n');
    out
}
