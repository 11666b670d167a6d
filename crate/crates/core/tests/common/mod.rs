#![allow(dead_code, clippy::needless_range_loop)]

pub mod circuits;
pub mod shaft;

use std::path::PathBuf;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn fixture(name: &str) -> Vec<u8> {
    let path = fixture_path(name);
    std::fs::read(&path).unwrap_or_else(|e| panic!("reading {}: {e}", path.display()))
}

use designcat::funcstruct::{BoundaryTerminal, Flow, FunctionVertex, TerminalKind};
use designcat::FunctionStructure;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

const VERB_POOL: &[&str] = &[
    "import", "transmit", "convert", "store", "guide", "wind", "cut", "export",
];
const NOUN_POOL: &[&str] = &["wire", "torque", "electricity", "signal", "line"];

/// A random valid structure: vertices 0..n in topological order, forward
/// flows only, and boundary flows wherever a vertex would otherwise be
/// unfed or undrained. Parallel flows happen.
pub fn random_structure(rng: &mut ChaCha8Rng, max_vertices: usize) -> FunctionStructure {
    let n = rng.gen_range(1..=max_vertices);
    let label = |rng: &mut ChaCha8Rng| {
        format!(
            "{} {}",
            VERB_POOL.choose(rng).unwrap(),
            NOUN_POOL.choose(rng).unwrap()
        )
    };
    let vertices: Vec<FunctionVertex> = (0..n)
        .map(|i| FunctionVertex {
            id: format!("v{i}"),
            label: label(rng),
        })
        .collect();
    let terminals = vec![
        BoundaryTerminal {
            id: "in".into(),
            kind: TerminalKind::Input,
            label: "material".into(),
        },
        BoundaryTerminal {
            id: "out".into(),
            kind: TerminalKind::Output,
            label: "product".into(),
        },
    ];
    let density = rng.gen_range(0.0..0.6);
    let mut flows = Vec::new();
    let mut has_in = vec![false; n];
    let mut has_out = vec![false; n];
    for a in 0..n {
        for b in a + 1..n {
            while rng.gen_bool(density) {
                flows.push(Flow::new(
                    format!("v{a}"),
                    format!("v{b}"),
                    *NOUN_POOL.choose(rng).unwrap(),
                ));
                has_out[a] = true;
                has_in[b] = true;
            }
        }
    }
    for i in 0..n {
        if !has_in[i] || rng.gen_bool(0.1) {
            flows.push(Flow::new("in", format!("v{i}"), "material"));
        }
        if !has_out[i] || rng.gen_bool(0.1) {
            flows.push(Flow::new(format!("v{i}"), "out", "product"));
        }
    }
    FunctionStructure::new(vertices, terminals, flows)
}

/// Same graph under fresh vertex ids and shuffled vertex and flow order.
pub fn relabel(fs: &FunctionStructure, rng: &mut ChaCha8Rng) -> FunctionStructure {
    let mut names: Vec<usize> = (0..fs.vertices().len()).collect();
    names.shuffle(rng);
    let rename = |id: &str| -> String {
        match fs.vertices().iter().position(|v| v.id == id) {
            Some(i) => format!("x{}", names[i]),
            None => id.to_string(),
        }
    };
    let mut vertices: Vec<FunctionVertex> = fs
        .vertices()
        .iter()
        .map(|v| FunctionVertex {
            id: rename(&v.id),
            label: v.label.clone(),
        })
        .collect();
    vertices.shuffle(rng);
    let mut flows: Vec<Flow> = fs
        .flows()
        .iter()
        .map(|f| Flow::new(rename(&f.source), rename(&f.target), f.label.clone()))
        .collect();
    flows.shuffle(rng);
    FunctionStructure::new(vertices, fs.terminals().to_vec(), flows)
}
