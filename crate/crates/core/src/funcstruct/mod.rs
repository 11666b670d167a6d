//! Design problems as black boxes or function structures, and the
//! interdependency index PI.
//!
//! PI is the share of function vertices whose total degree (in + out,
//! boundary flows included) is strictly greater than two. Boundary terminals
//! contribute to degrees but are not vertices themselves.

mod io;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::rational::{ratio, Rational};
use crate::{Error, Result};

pub use io::{parse_structure, serialize_structure};

/// Name of a material, energy or signal flow ("boiled water", "torque").
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FlowLabel(String);

impl FlowLabel {
    pub fn new(name: impl Into<String>) -> Self {
        FlowLabel(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for FlowLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for FlowLabel {
    fn from(s: &str) -> Self {
        FlowLabel::new(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionVertex {
    pub id: String,
    pub label: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TerminalKind {
    Input,
    Output,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryTerminal {
    pub id: String,
    pub kind: TerminalKind,
    pub label: FlowLabel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Flow {
    pub source: String,
    pub target: String,
    pub label: FlowLabel,
}

impl Flow {
    pub fn new(source: impl Into<String>, target: impl Into<String>, label: impl Into<FlowLabel>) -> Self {
        Flow {
            source: source.into(),
            target: target.into(),
            label: label.into(),
        }
    }
}

/// A decomposed overall function: subfunction vertices joined by flows, with
/// boundary terminals for what enters and leaves the system.
///
/// Construction does not check invariants; call [`FunctionStructure::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionStructure {
    vertices: Vec<FunctionVertex>,
    terminals: Vec<BoundaryTerminal>,
    flows: Vec<Flow>,
}

/// An undecomposed overall function, known only by its boundary flows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlackBox {
    pub label: String,
    pub inputs: Vec<FlowLabel>,
    pub outputs: Vec<FlowLabel>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DesignProblem {
    BlackBox(BlackBox),
    Structure(FunctionStructure),
}

impl DesignProblem {
    /// Decomposability follows the representation chosen for the problem.
    pub fn is_decomposable(&self) -> bool {
        matches!(self, DesignProblem::Structure(_))
    }

    pub fn as_structure(&self) -> Option<&FunctionStructure> {
        match self {
            DesignProblem::Structure(fs) => Some(fs),
            DesignProblem::BlackBox(_) => None,
        }
    }
}

impl From<FunctionStructure> for DesignProblem {
    fn from(fs: FunctionStructure) -> Self {
        DesignProblem::Structure(fs)
    }
}

impl From<BlackBox> for DesignProblem {
    fn from(bb: BlackBox) -> Self {
        DesignProblem::BlackBox(bb)
    }
}

/// One broken invariant of a [`FunctionStructure`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    NoVertices,
    DuplicateId(String),
    EmptyLabel(String),
    UnknownEndpoint {
        flow: usize,
        id: String,
    },
    TerminalToTerminal {
        flow: usize,
    },
    FlowIntoInput {
        flow: usize,
        terminal: String,
    },
    FlowOutOfOutput {
        flow: usize,
        terminal: String,
    },
    /// Vertices lying on at least one directed cycle.
    Cycle(Vec<String>),
    NotFedByInput(String),
    NoPathToOutput(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoVertices => write!(f, "structure has no function vertices"),
            Violation::DuplicateId(id) => write!(f, "id `{id}` is used more than once"),
            Violation::EmptyLabel(at) => write!(f, "{at} has an empty flow label"),
            Violation::UnknownEndpoint { flow, id } => {
                write!(f, "flows[{flow}] refers to unknown id `{id}`")
            }
            Violation::TerminalToTerminal { flow } => {
                write!(f, "flows[{flow}] connects two boundary terminals")
            }
            Violation::FlowIntoInput { flow, terminal } => {
                write!(f, "flows[{flow}] enters input terminal `{terminal}`")
            }
            Violation::FlowOutOfOutput { flow, terminal } => {
                write!(f, "flows[{flow}] leaves output terminal `{terminal}`")
            }
            Violation::Cycle(ids) => write!(f, "cycle through vertices {}", ids.join(", ")),
            Violation::NotFedByInput(id) => {
                write!(f, "vertex `{id}` is not reachable from any input terminal")
            }
            Violation::NoPathToOutput(id) => {
                write!(f, "vertex `{id}` has no path to any output terminal")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Node {
    Vertex(usize),
    Terminal(TerminalKind),
}

impl FunctionStructure {
    pub fn new(vertices: Vec<FunctionVertex>, terminals: Vec<BoundaryTerminal>, flows: Vec<Flow>) -> Self {
        FunctionStructure {
            vertices,
            terminals,
            flows,
        }
    }

    pub fn vertices(&self) -> &[FunctionVertex] {
        &self.vertices
    }

    pub fn terminals(&self) -> &[BoundaryTerminal] {
        &self.terminals
    }

    pub fn flows(&self) -> &[Flow] {
        &self.flows
    }

    pub fn vertex(&self, id: &str) -> Option<&FunctionVertex> {
        self.vertices.iter().find(|v| v.id == id)
    }

    /// Distinct flow labels, in sorted order.
    pub fn label_table(&self) -> BTreeSet<&FlowLabel> {
        self.flows
            .iter()
            .map(|f| &f.label)
            .chain(self.terminals.iter().map(|t| &t.label))
            .collect()
    }

    fn node_index(&self) -> HashMap<&str, Node> {
        let mut index = HashMap::new();
        for t in &self.terminals {
            index.insert(t.id.as_str(), Node::Terminal(t.kind));
        }
        for (i, v) in self.vertices.iter().enumerate() {
            index.insert(v.id.as_str(), Node::Vertex(i));
        }
        index
    }

    /// Checks every structural invariant and lists all violations found.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if self.vertices.is_empty() {
            violations.push(Violation::NoVertices);
        }

        let mut seen = HashSet::new();
        let mut dups = BTreeSet::new();
        let ids = self
            .vertices
            .iter()
            .map(|v| &v.id)
            .chain(self.terminals.iter().map(|t| &t.id));
        for id in ids {
            if !seen.insert(id.as_str()) {
                dups.insert(id.clone());
            }
        }
        violations.extend(dups.into_iter().map(Violation::DuplicateId));

        for t in &self.terminals {
            if t.label.as_str().is_empty() {
                violations.push(Violation::EmptyLabel(format!("terminal `{}`", t.id)));
            }
        }

        let index = self.node_index();
        let n = self.vertices.len();
        // Adjacency over vertices only, plus boundary attachment flags.
        let mut succ = vec![Vec::new(); n];
        let mut pred = vec![Vec::new(); n];
        let mut fed = vec![false; n];
        let mut drains = vec![false; n];

        for (i, flow) in self.flows.iter().enumerate() {
            if flow.label.as_str().is_empty() {
                violations.push(Violation::EmptyLabel(format!("flows[{i}]")));
            }
            let src = index.get(flow.source.as_str()).copied();
            let dst = index.get(flow.target.as_str()).copied();
            if src.is_none() {
                violations.push(Violation::UnknownEndpoint {
                    flow: i,
                    id: flow.source.clone(),
                });
            }
            if dst.is_none() {
                violations.push(Violation::UnknownEndpoint {
                    flow: i,
                    id: flow.target.clone(),
                });
            }
            let (Some(src), Some(dst)) = (src, dst) else {
                continue;
            };
            if let Node::Terminal(TerminalKind::Output) = src {
                violations.push(Violation::FlowOutOfOutput {
                    flow: i,
                    terminal: flow.source.clone(),
                });
            }
            if let Node::Terminal(TerminalKind::Input) = dst {
                violations.push(Violation::FlowIntoInput {
                    flow: i,
                    terminal: flow.target.clone(),
                });
            }
            match (src, dst) {
                (Node::Terminal(_), Node::Terminal(_)) => {
                    violations.push(Violation::TerminalToTerminal { flow: i })
                }
                (Node::Vertex(a), Node::Vertex(b)) => {
                    succ[a].push(b);
                    pred[b].push(a);
                }
                (Node::Terminal(TerminalKind::Input), Node::Vertex(b)) => fed[b] = true,
                (Node::Vertex(a), Node::Terminal(TerminalKind::Output)) => drains[a] = true,
                _ => {}
            }
        }

        let on_cycle = vertices_on_cycles(&succ);
        if !on_cycle.is_empty() {
            violations.push(Violation::Cycle(
                on_cycle.iter().map(|&i| self.vertices[i].id.clone()).collect(),
            ));
        }

        let from_input = closure(&succ, fed);
        let to_output = closure(&pred, drains);
        for (i, v) in self.vertices.iter().enumerate() {
            if !from_input[i] {
                violations.push(Violation::NotFedByInput(v.id.clone()));
            }
            if !to_output[i] {
                violations.push(Violation::NoPathToOutput(v.id.clone()));
            }
        }

        ValidationReport { violations }
    }

    /// In-degree plus out-degree of `vertex`, counting boundary flows and
    /// each parallel flow separately.
    pub fn degree(&self, vertex: &str) -> Result<usize> {
        if self.vertex(vertex).is_none() {
            return Err(Error::UnknownVertex(vertex.to_string()));
        }
        Ok(self
            .flows
            .iter()
            .map(|f| usize::from(f.source == vertex) + usize::from(f.target == vertex))
            .sum())
    }

    /// Degrees of all vertices, in vertex order.
    pub fn degrees(&self) -> Vec<usize> {
        let mut position = HashMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            position.entry(v.id.as_str()).or_insert(i);
        }
        let mut deg = vec![0; self.vertices.len()];
        for f in &self.flows {
            if let Some(&i) = position.get(f.source.as_str()) {
                deg[i] += 1;
            }
            if let Some(&i) = position.get(f.target.as_str()) {
                deg[i] += 1;
            }
        }
        deg
    }

    /// Ids of vertices with degree > 2.
    pub fn interdependent_vertices(&self) -> Vec<&str> {
        self.vertices
            .iter()
            .zip(self.degrees())
            .filter(|(_, d)| *d > 2)
            .map(|(v, _)| v.id.as_str())
            .collect()
    }

    /// PI of a valid structure.
    pub fn interdependency_index(&self) -> Result<Rational> {
        let report = self.validate();
        if !report.is_valid() {
            return Err(Error::InvalidStructure(report));
        }
        Ok(ratio(self.interdependent_vertices().len(), self.vertices.len()))
    }
}

impl BlackBox {
    /// A black box is a single vertex: PI is 1 if it has more than two
    /// boundary flows and 0 otherwise.
    pub fn interdependency_index(&self) -> Rational {
        if self.inputs.len() + self.outputs.len() > 2 {
            ratio(1, 1)
        } else {
            ratio(0, 1)
        }
    }
}

pub fn interdependency_index(problem: &DesignProblem) -> Result<Rational> {
    match problem {
        DesignProblem::BlackBox(bb) => Ok(bb.interdependency_index()),
        DesignProblem::Structure(fs) => fs.interdependency_index(),
    }
}

fn closure(edges: &[Vec<usize>], mut mark: Vec<bool>) -> Vec<bool> {
    let mut stack: Vec<usize> = (0..mark.len()).filter(|&i| mark[i]).collect();
    while let Some(v) = stack.pop() {
        for &w in &edges[v] {
            if !mark[w] {
                mark[w] = true;
                stack.push(w);
            }
        }
    }
    mark
}

/// Vertices that can reach themselves, in index order.
fn vertices_on_cycles(succ: &[Vec<usize>]) -> Vec<usize> {
    // Kahn's algorithm strips everything that is not on or behind a cycle.
    let n = succ.len();
    let mut indeg = vec![0usize; n];
    for out in succ {
        for &w in out {
            indeg[w] += 1;
        }
    }
    let mut queue: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    let mut removed = vec![false; n];
    while let Some(v) = queue.pop() {
        removed[v] = true;
        for &w in &succ[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                queue.push(w);
            }
        }
    }
    (0..n)
        .filter(|&v| !removed[v])
        .filter(|&v| {
            let mut start = vec![false; n];
            for &w in &succ[v] {
                start[w] = true;
            }
            closure(succ, start)[v]
        })
        .collect()
}
