//! One line per acceptance criterion. Exits non-zero if any fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use designcat::casebase::{retrieve, similarity, CaseBase, SimilaritySpec};
use designcat::classify::{default_matrix, recommend, Novelty, ProblemProfile};
use designcat::funcstruct::{interdependency_index, parse_structure};
use designcat::grammar::{apply, canonical_form, find_matches, generate, parse_grammar, Limits};
use designcat::novelty::{absorb, assess, creativity_index, innovation_index, DesignInstance, KnowledgeBase};
use designcat::novelty::{DesignVariable, NoveltyCategory, Scalar, VariableDomain};
use designcat::rational::ratio;
use designcat::synth::{synthesize_assignment, synthesize_topology, Circuit, Requirement, Topology};
use designcat::{DesignProblem, FunctionStructure, Rational};
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn structure(name: &str) -> FunctionStructure {
    match parse_structure(&common::fixture(name)).unwrap() {
        DesignProblem::Structure(fs) => fs,
        DesignProblem::BlackBox(_) => panic!("{name} is a black box"),
    }
}

fn pi_exactness() -> Outcome {
    let pi = |name| interdependency_index(&parse_structure(&common::fixture(name)).unwrap()).unwrap();
    let cases = [
        ("full_subtractor.fs.json", ratio(5, 7)),
        ("coil_winder.fs.json", ratio(3, 7)),
        ("bridge.fs.json", ratio(1, 1)),
        ("rope.fs.json", ratio(0, 1)),
    ];
    for (name, want) in cases {
        let got = pi(name);
        ensure(got == want, format!("{name}: PI {got}, expected {want}"))?;
    }
    let coil = structure("coil_winder.fs.json");
    ensure(
        coil.vertices().len() == 28 && coil.interdependent_vertices().len() == 12,
        "coil winder is not 12 of 28",
    )?;
    Ok("subtractor 5/7, coil winder 3/7 (12 of 28), bridge 1, rope 0".into())
}

fn subtractor_rows(bits: &[bool]) -> Vec<bool> {
    let diff = bits[0] as i32 - bits[1] as i32 - bits[2] as i32;
    vec![diff.rem_euclid(2) == 1, diff < 0]
}

fn circuit_synthesis() -> Outcome {
    let req = Requirement::from_json(&common::fixture("subtractor.req.json")).unwrap();
    let c = synthesize_topology(&req, 7)
        .unwrap()
        .ok_or("UNSAT within 7 gates")?;
    for r in 0..8usize {
        let bits: Vec<bool> = (0..3).map(|i| r >> (2 - i) & 1 == 1).collect();
        ensure(
            c.evaluate(&bits).unwrap() == subtractor_rows(&bits),
            format!("row {bits:?} wrong"),
        )?;
    }
    let topo = Topology::from_json(&common::fixture("full_subtractor.topo.json")).unwrap();
    let standard = synthesize_assignment(&topo, &req)
        .unwrap()
        .ok_or("standard topology UNSAT")?;
    let pi = standard.to_function_structure().interdependency_index().unwrap();
    ensure(pi == ratio(5, 7), format!("standard topology PI {pi}"))?;
    Ok(format!(
        "{}-gate circuit passes 8/8 rows; standard topology PI 5/7",
        c.gate_count()
    ))
}

fn synthesis_oracle() -> Outcome {
    let mut sat = 0;
    for table in 0u8..16 {
        let f = |b: &[bool]| vec![table >> (b[0] as u8 | (b[1] as u8) << 1) & 1 == 1];
        let req = Requirement::from_fn(&["a", "b"], &["y"], f).unwrap();
        for max in 1..=3 {
            let got = synthesize_topology(&req, max)
                .unwrap()
                .map(|c: Circuit| c.gate_count());
            let want = common::circuits::oracle_min_gates(2, 1, f, max);
            ensure(
                got.is_some() == want.is_some(),
                format!("table {table:04b}, max {max}: verdicts differ"),
            )?;
            sat += got.is_some() as usize;
        }
    }
    Ok(format!(
        "16 tables x 3 bounds agree ({sat} SAT, {} UNSAT)",
        48 - sat
    ))
}

fn grammar_determinism() -> Outcome {
    let g = parse_grammar(&common::fixture("shaft.grammar.json")).unwrap();
    let limits = Limits {
        max_depth: 3,
        max_designs: 100_000,
    };
    let first = generate(&g, limits).unwrap();
    let second = generate(&g, limits).unwrap();
    let generated: BTreeSet<String> = first.iter().map(|x| x.canonical.clone()).collect();
    let oracle: BTreeSet<String> = common::shaft::oracle_reachable(3)
        .iter()
        .map(|s| canonical_form(&common::shaft::from_state(s)))
        .collect();
    ensure(generated.len() == first.len(), "duplicate designs in output")?;
    ensure(
        generated == oracle,
        format!(
            "{} generated vs {} from the oracle",
            generated.len(),
            oracle.len()
        ),
    )?;
    for x in &first {
        g.vocabulary()
            .check_design(&x.design)
            .map_err(|e| e.to_string())?;
    }
    let bytes = |v| serde_json::to_vec(v).unwrap();
    ensure(bytes(&first) == bytes(&second), "runs differ")?;
    Ok(format!(
        "{} designs equal the oracle set; all valid; runs byte-identical",
        first.len()
    ))
}

fn novelty_metrics() -> Outcome {
    let kb = |n| KnowledgeBase::from_json(&common::fixture(n)).unwrap();
    let design = |n| DesignInstance::from_json(&common::fixture(n)).unwrap();
    let (heli, quad) = (kb("helicopter.kb.json"), design("quadrocopter.design.json"));
    let q = assess(&heli, &quad, true);
    ensure(
        q.innovation == ratio(1, 1) && q.category == NoveltyCategory::Innovative,
        "quadrocopter",
    )?;
    let (signal, radio) = (kb("signal.kb.json"), design("radio.design.json"));
    let r = assess(&signal, &radio, true);
    ensure(
        r.creativity == ratio(1, 3) && r.category == NoveltyCategory::Creative,
        "radio",
    )?;
    for (k, d) in [(&heli, &quad), (&signal, &radio)] {
        ensure(
            assess(&absorb(k, d), d, true).category == NoveltyCategory::Routine,
            "absorb then assess",
        )?;
    }
    Ok("quadrocopter I = 1 innovative; radio C = 1/3 creative; absorbed designs routine".into())
}

fn cbr_properties() -> Outcome {
    let spec = SimilaritySpec::default();
    let mut rng = common::rng(6);
    for i in 0..100 {
        let a = common::random_structure(&mut rng, 12);
        let b = common::random_structure(&mut rng, 12);
        ensure(
            similarity(&spec, &a, &a).unwrap() == ratio(1, 1),
            format!("pair {i}: self-similarity"),
        )?;
        let (ab, ba) = (
            similarity(&spec, &a, &b).unwrap(),
            similarity(&spec, &b, &a).unwrap(),
        );
        ensure(ab == ba, format!("pair {i}: asymmetric"))?;
    }
    let base = CaseBase::from_json(&common::fixture("coil_winder.cases.json")).unwrap();
    let query = structure("coil_winder.fs.json");
    let got: Vec<(String, Rational)> = retrieve(&base, &spec, &query, 4)
        .unwrap()
        .ranking
        .into_iter()
        .map(|r| (r.id, r.score))
        .collect();
    let mut oracle: Vec<(String, Rational)> = base
        .cases()
        .iter()
        .map(|c| (c.id.clone(), similarity(&spec, &query, &c.problem).unwrap()))
        .collect();
    oracle.sort_by(|x, y| y.1.cmp(&x.1).then(x.0.cmp(&y.0)));
    ensure(got == oracle, "ranking differs from the sorted scores")?;
    let order: Vec<&str> = got.iter().map(|(id, _)| id.as_str()).collect();
    Ok(format!(
        "100 random pairs reflexive and symmetric; ranking {order:?}"
    ))
}

fn classification_gap() -> Outcome {
    let mut checked = 0;
    for decomposable in [false, true] {
        for novelty in [Novelty::Routine, Novelty::Innovative, Novelty::Creative] {
            let pi = decomposable.then(|| ratio(3, 7));
            let report = recommend(
                &ProblemProfile::new(decomposable, pi, novelty).unwrap(),
                &default_matrix(),
            );
            if novelty == Novelty::Creative {
                ensure(
                    report.applicable().count() == 0,
                    format!("creative, decomposable = {decomposable}"),
                )?;
            }
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} profiles; creative ones have no applicable method"
    ))
}

fn invariant_suite() -> Outcome {
    let mut rng = common::rng(8);
    for i in 0..500 {
        let fs = common::random_structure(&mut rng, 14);
        let pi = fs.interdependency_index().unwrap();
        ensure(pi <= ratio(1, 1), format!("dag {i}: PI {pi} > 1"))?;
        let renamed = common::relabel(&fs, &mut rng);
        ensure(
            renamed.interdependency_index().unwrap() == pi,
            format!("dag {i}: relabeling changed PI"),
        )?;
    }
    let names = ["a", "b", "c", "d", "e"];
    for i in 0..500 {
        let mut vars = Vec::new();
        let mut pairs = Vec::new();
        for n in names {
            if rng.gen_bool(0.5) {
                vars.push(DesignVariable {
                    name: n.into(),
                    domain: VariableDomain::Interval(0.0, rng.gen_range(0..5) as f64),
                    subfunction: None,
                });
            }
            if rng.gen_bool(0.6) {
                pairs.push((n.to_string(), Scalar::Number(rng.gen_range(0..8) as f64)));
            }
        }
        if pairs.is_empty() {
            pairs.push(("a".into(), Scalar::Number(1.0)));
        }
        let kb = KnowledgeBase::new(vars).unwrap();
        let d = DesignInstance::new(pairs, None).unwrap();
        let sum = innovation_index(&kb, &d) + creativity_index(&kb, &d);
        ensure(sum <= ratio(1, 1), format!("pair {i}: I + C = {sum}"))?;
    }
    let mut applications = 0;
    for name in ["shaft.grammar.json", "gearbox.grammar.json"] {
        let g = parse_grammar(&common::fixture(name)).unwrap();
        let designs = generate(
            &g,
            Limits {
                max_depth: 2,
                max_designs: 100_000,
            },
        )
        .unwrap();
        for x in &designs {
            for r in g.rules() {
                for m in find_matches(g.vocabulary(), r, &x.design).unwrap() {
                    if let Ok(d) = apply(g.vocabulary(), r, &x.design, &m) {
                        let n = d.nodes.len();
                        ensure(
                            d.edges.iter().all(|e| e.from < n && e.to < n),
                            format!("{name}: dangling edge"),
                        )?;
                        applications += 1;
                    }
                }
            }
        }
    }
    Ok(format!(
        "500 DAGs, 500 KB/design pairs, {applications} rule applications without dangling edges"
    ))
}

/// Name, time limit, check.
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (
            "interdependency index exactness",
            Duration::from_secs(1),
            pi_exactness,
        ),
        ("circuit synthesis", Duration::from_secs(60), circuit_synthesis),
        (
            "synthesis oracle equivalence",
            Duration::from_secs(60),
            synthesis_oracle,
        ),
        (
            "grammar determinism and validity",
            Duration::from_secs(10),
            grammar_determinism,
        ),
        ("novelty metrics", Duration::from_secs(1), novelty_metrics),
        ("CBR properties", Duration::from_secs(5), cbr_properties),
        ("classification gap", Duration::from_secs(1), classification_gap),
        ("invariant suite", Duration::from_secs(30), invariant_suite),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if took > limit => Err(format!("{detail}; took {took:.2?}, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} [{took:.2?}] {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} [{took:.2?}] {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
