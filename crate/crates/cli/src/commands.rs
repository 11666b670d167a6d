use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use designcat::casebase::{parse_requirements, retrieve, reuse, revise, CaseBase, SimilaritySpec};
use designcat::classify::{default_matrix, parse_matrix, recommend, ProblemProfile};
use designcat::funcstruct::{parse_structure, serialize_structure};
use designcat::grammar::{generate, parse_grammar, to_dot, Limits};
use designcat::novelty::{assess, DesignInstance, KnowledgeBase};
use designcat::rational::format as rat;
use designcat::synth::{synthesize_assignment, synthesize_topology, Circuit, Requirement, Topology};
use designcat::{DesignProblem, FunctionStructure};
use serde::Serialize;

use crate::{CbrCommand, Cli, Command, Format, RetrieveArgs};

pub enum Failure {
    /// The run worked and the answer is negative; carries the report.
    Negative(String),
    /// Unreadable or invalid input.
    Input(String),
}

type Outcome = Result<String, Failure>;

pub fn run(cli: Cli) -> Outcome {
    let text = cli.format.unwrap_or(Format::Text) == Format::Text;
    match cli.command {
        Command::Metrics { problem } => metrics(&problem, text),
        Command::Novelty {
            knowledge_base,
            design,
            feasible,
        } => novelty(&knowledge_base, &design, feasible, text),
        Command::GrammarGenerate {
            grammar,
            max_depth,
            max_designs,
            dot_dir,
        } => grammar_generate(
            &grammar,
            Limits {
                max_depth,
                max_designs,
            },
            dot_dir.as_deref(),
            text,
        ),
        Command::CbrRetrieve(args)
        | Command::Cbr {
            command: CbrCommand::Retrieve(args),
        } => cbr_retrieve(&args, text),
        Command::Synth {
            requirement,
            topology,
            max_gates,
            emit_fs,
        } => synth(
            &requirement,
            topology.as_deref(),
            max_gates,
            emit_fs.as_deref(),
            cli.format != Some(Format::Text),
        ),
        Command::Classify { profile, matrix } => classify(&profile, matrix.as_deref(), text),
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load<T>(path: &Path, parse: impl FnOnce(&[u8]) -> designcat::Result<T>) -> Result<T, Failure> {
    parse(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn structure(path: &Path) -> Result<FunctionStructure, Failure> {
    match load(path, parse_structure)? {
        DesignProblem::Structure(fs) => Ok(fs),
        DesignProblem::BlackBox(_) => Err(Failure::Input(format!(
            "{}: a black box has no subfunctions to compare",
            path.display()
        ))),
    }
}

#[derive(Serialize)]
struct MetricsReport {
    decomposable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    vertices: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    interdependent: Option<Vec<String>>,
    pi: String,
}

fn metrics(path: &Path, text: bool) -> Outcome {
    let problem = load(path, parse_structure)?;
    let report = match &problem {
        DesignProblem::BlackBox(bb) => MetricsReport {
            decomposable: false,
            vertices: None,
            interdependent: None,
            pi: rat(&bb.interdependency_index()),
        },
        DesignProblem::Structure(fs) => {
            let pi = fs
                .interdependency_index()
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            MetricsReport {
                decomposable: true,
                vertices: Some(fs.vertices().len()),
                interdependent: Some(
                    fs.interdependent_vertices()
                        .into_iter()
                        .map(String::from)
                        .collect(),
                ),
                pi: rat(&pi),
            }
        }
    };
    if !text {
        return Ok(json(&report));
    }
    let mut out = String::new();
    match (&problem, &report.interdependent) {
        (DesignProblem::BlackBox(bb), _) => {
            let _ = writeln!(
                out,
                "PI = {} (black box: {} inputs, {} outputs)",
                report.pi,
                bb.inputs.len(),
                bb.outputs.len()
            );
            let _ = writeln!(out, "decomposable: no");
        }
        (_, Some(high)) => {
            let _ = writeln!(
                out,
                "PI = {} ({} of {} vertices have degree > 2)",
                report.pi,
                high.len(),
                report.vertices.unwrap_or(0)
            );
            let _ = writeln!(out, "decomposable: yes");
            if !high.is_empty() {
                let _ = writeln!(out, "interdependent: {}", high.join(", "));
            }
        }
        _ => unreachable!(),
    }
    Ok(out)
}

fn novelty(kb: &Path, design: &Path, feasible: Option<bool>, text: bool) -> Outcome {
    let kb = load(kb, KnowledgeBase::from_json)?;
    let path = design;
    let design = load(path, DesignInstance::from_json)?;
    let Some(feasible) = feasible.or(design.feasible()) else {
        return Err(Failure::Input(format!(
            "{}: feasibility unknown; add \"feasible\" to the design or pass --feasible",
            path.display()
        )));
    };
    let report = assess(&kb, &design, feasible);
    if !text {
        return Ok(json(&report));
    }
    let list = |v: &[String]| {
        if v.is_empty() {
            "none".to_string()
        } else {
            v.join(", ")
        }
    };
    Ok(format!(
        "I = {}\nC = {}\ncategory: {}\nunexpected: {}\nnew: {}\n",
        rat(&report.innovation),
        rat(&report.creativity),
        report.category,
        list(&report.unexpected),
        list(&report.new)
    ))
}

fn grammar_generate(path: &Path, limits: Limits, dot_dir: Option<&Path>, text: bool) -> Outcome {
    let grammar = load(path, parse_grammar)?;
    let designs = generate(&grammar, limits).map_err(|e| Failure::Input(e.to_string()))?;
    if let Some(dir) = dot_dir {
        fs::create_dir_all(dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
        for (i, g) in designs.iter().enumerate() {
            let file = dir.join(format!("design_{i:04}.dot"));
            fs::write(&file, to_dot(&g.design, &format!("design_{i}")))
                .map_err(|e| Failure::Input(format!("{}: {e}", file.display())))?;
        }
    }
    if !text {
        #[derive(Serialize)]
        struct Entry<'a> {
            depth: usize,
            derivation: Vec<&'a str>,
            design: &'a designcat::grammar::Design,
        }
        let entries: Vec<Entry> = designs
            .iter()
            .map(|g| Entry {
                depth: g.depth(),
                derivation: g.derivation.steps.iter().map(|s| s.rule.as_str()).collect(),
                design: &g.design,
            })
            .collect();
        return Ok(json(&entries));
    }
    let mut out = format!("{} designs (max depth {})\n", designs.len(), limits.max_depth);
    for (i, g) in designs.iter().enumerate() {
        let rules: Vec<&str> = g.derivation.steps.iter().map(|s| s.rule.as_str()).collect();
        let path = if rules.is_empty() {
            "axiom".to_string()
        } else {
            rules.join(" > ")
        };
        let nodes: Vec<String> = g
            .design
            .nodes
            .iter()
            .map(|n| {
                if n.attrs.is_empty() {
                    n.label.clone()
                } else {
                    let attrs: Vec<String> = n.attrs.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    format!("{}({})", n.label, attrs.join(", "))
                }
            })
            .collect();
        let _ = writeln!(out, "#{i} [{path}] {}", nodes.join(" | "));
    }
    Ok(out)
}

fn cbr_retrieve(args: &RetrieveArgs, text: bool) -> Outcome {
    let base = load(&args.base, CaseBase::from_json)?;
    let query = structure(&args.query)?;
    let spec = match &args.simspec {
        Some(p) => load(p, SimilaritySpec::from_json)?,
        None => SimilaritySpec::default(),
    };
    let requirements = match &args.requirements {
        Some(p) => Some(load(p, parse_requirements)?),
        None => None,
    };
    let ranking = match retrieve(&base, &spec, &query, args.k) {
        Ok(r) => r,
        Err(designcat::Error::EmptyCaseBase) => {
            return Err(Failure::Negative(if text {
                "case base is empty\n".into()
            } else {
                json(&serde_json::json!({ "ranking": [] }))
            }))
        }
        Err(e) => return Err(Failure::Input(e.to_string())),
    };
    let revised = match requirements {
        Some(reqs) => {
            let id = args.case.as_deref().unwrap_or(&ranking.ranking[0].id);
            let case = base
                .get(id)
                .ok_or_else(|| Failure::Input(format!("{}: no case `{id}`", args.base.display())))?;
            Some(revise(reuse(case, &query), &reqs))
        }
        None => None,
    };
    if !text {
        #[derive(Serialize)]
        struct Report<'a> {
            ranking: &'a [designcat::casebase::Ranked],
            #[serde(skip_serializing_if = "Option::is_none")]
            revision: Option<&'a designcat::casebase::RevisedSolution>,
        }
        return Ok(json(&Report {
            ranking: &ranking.ranking,
            revision: revised.as_ref(),
        }));
    }
    let mut out = String::new();
    for (i, r) in ranking.ranking.iter().enumerate() {
        let approx = *r.score.numer() as f64 / *r.score.denom() as f64;
        let _ = writeln!(out, "{}. {}  {:.4}  ({})", i + 1, r.id, approx, rat(&r.score));
    }
    if let Some(rev) = revised {
        let d = &rev.draft;
        let _ = writeln!(out, "\nreuse of {}: {}", d.case_id, d.description);
        for c in &d.components {
            let serves = if c.serves.is_empty() {
                "-".to_string()
            } else {
                c.serves.join(", ")
            };
            let _ = writeln!(out, "  {}: {}", c.name, serves);
        }
        let _ = writeln!(
            out,
            "  gaps: {}",
            if d.gaps.is_empty() {
                "none".into()
            } else {
                d.gaps.join(", ")
            }
        );
        for s in &rev.checks {
            let _ = writeln!(out, "  [{}] {}", if s.satisfied { "ok" } else { "open" }, s.name);
        }
        let _ = writeln!(out, "open tasks: {}", rev.open_tasks.len());
    }
    Ok(out)
}

fn circuit_text(c: &Circuit) -> String {
    let t = c.topology();
    let name = |s: &designcat::synth::Signal| match *s {
        designcat::synth::Signal::Input(k) => t.inputs()[k].clone(),
        designcat::synth::Signal::Slot(k) => t.slots()[k].id.clone(),
    };
    let mut out = format!("{} gates over inputs {}\n", c.gate_count(), t.inputs().join(", "));
    for (slot, gate) in t.slots().iter().zip(c.gates()) {
        let args: Vec<String> = slot.inputs.iter().map(name).collect();
        let _ = writeln!(out, "  {} = {gate}({})", slot.id, args.join(", "));
    }
    for o in t.outputs() {
        let _ = writeln!(out, "  {} <- {}", o.name, t.slots()[o.slot].id);
    }
    out
}

fn synth(
    req: &Path,
    topology: Option<&Path>,
    max_gates: usize,
    emit_fs: Option<&Path>,
    as_json: bool,
) -> Outcome {
    let requirement = load(req, Requirement::from_json)?;
    let found = match topology {
        Some(p) => {
            let t = load(p, Topology::from_json)?;
            synthesize_assignment(&t, &requirement)
                .map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?
        }
        None => synthesize_topology(&requirement, max_gates).map_err(|e| Failure::Input(e.to_string()))?,
    };
    let Some(circuit) = found else {
        let why = match topology {
            Some(_) => "UNSAT: no gate assignment for this topology".to_string(),
            None => format!("UNSAT: no circuit with at most {max_gates} gates"),
        };
        return Err(Failure::Negative(if as_json {
            json(&serde_json::json!({ "unsat": why }))
        } else {
            format!("{why}\n")
        }));
    };
    if let Some(p) = emit_fs {
        let fs = DesignProblem::Structure(circuit.to_function_structure());
        std::fs::write(p, serialize_structure(&fs))
            .map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
    }
    Ok(if as_json {
        json(&circuit)
    } else {
        circuit_text(&circuit)
    })
}

fn classify(profile: &Path, matrix: Option<&Path>, text: bool) -> Outcome {
    let profile = load(profile, ProblemProfile::from_json)?;
    let matrix = match matrix {
        Some(p) => load(p, parse_matrix)?,
        None => default_matrix(),
    };
    let report = recommend(&profile, &matrix);
    let out = if text {
        let mut out = String::new();
        for m in &report.methods {
            let _ = writeln!(out, "{}: {} ({})", m.method, m.verdict, m.rationale);
        }
        if report.is_empty() {
            out.push_str("no applicable method\n");
        }
        out
    } else {
        json(&report)
    };
    if report.is_empty() {
        Err(Failure::Negative(out))
    } else {
        Ok(out)
    }
}
