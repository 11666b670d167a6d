mod common;

use std::collections::BTreeSet;

use common::shaft::{oracle_reachable, to_state, ShaftState};

use designcat::grammar::{
    apply, canonical_form, find_matches, generate, modify, parse_grammar, replay, to_dot, Design, Edge,
    Grammar, GrammarEdit, Limits, Node, Rule,
};
use designcat::Error;
use proptest::prelude::*;

fn shaft() -> Grammar {
    parse_grammar(&common::fixture("shaft.grammar.json")).unwrap()
}

fn gearbox() -> Grammar {
    parse_grammar(&common::fixture("gearbox.grammar.json")).unwrap()
}

fn rule(json: &str) -> Rule {
    serde_json::from_str(json).unwrap()
}

fn section(d: i64, l: i64) -> Node {
    Node::new("section").with("diameter", d).with("length", l)
}

/// section -> section -> section -> open_end
fn three_section_shaft() -> Design {
    Design::new(
        vec![
            section(20, 20),
            section(20, 40),
            section(30, 20),
            Node::new("open_end"),
        ],
        (0..3).map(|i| Edge::new(i, i + 1, "adjacent")).collect(),
    )
}

fn apply_first(g: &Grammar, rule_name: &str, design: &Design) -> Design {
    let r = g.rule(rule_name).unwrap();
    let m = find_matches(g.vocabulary(), r, design).unwrap().remove(0);
    apply(g.vocabulary(), r, design, &m).unwrap()
}

// ---------------------------------------------------------------------------
// Brute-force isomorphism for canonical-form checks.

fn isomorphic(a: &Design, b: &Design) -> bool {
    if a.nodes.len() != b.nodes.len() || a.edges.len() != b.edges.len() {
        return false;
    }
    let mut sorted_b: Vec<(usize, usize, &str)> =
        b.edges.iter().map(|e| (e.from, e.to, e.label.as_str())).collect();
    sorted_b.sort();
    let n = a.nodes.len();
    let mut perm = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(
        a: &Design,
        b: &Design,
        sorted_b: &[(usize, usize, &str)],
        perm: &mut Vec<usize>,
        used: &mut [bool],
    ) -> bool {
        let i = perm.len();
        if i == a.nodes.len() {
            let mut mapped: Vec<(usize, usize, &str)> = a
                .edges
                .iter()
                .map(|e| (perm[e.from], perm[e.to], e.label.as_str()))
                .collect();
            mapped.sort();
            return mapped == sorted_b;
        }
        for j in 0..b.nodes.len() {
            if !used[j] && a.nodes[i] == b.nodes[j] {
                used[j] = true;
                perm.push(j);
                if rec(a, b, sorted_b, perm, used) {
                    return true;
                }
                perm.pop();
                used[j] = false;
            }
        }
        false
    }
    rec(a, b, &sorted_b, &mut perm, &mut used)
}

// ---------------------------------------------------------------------------

#[test]
fn fixture_grammars_parse_and_round_trip() {
    for g in [shaft(), gearbox()] {
        let json = serde_json::to_vec(&g).unwrap();
        assert_eq!(parse_grammar(&json).unwrap(), g);
    }
    assert_eq!(shaft().rules().len(), 5);
}

#[test]
fn single_node_lhs_matches_every_section() {
    let g = shaft();
    let groove = g.rule("groove_section").unwrap();
    let matches = find_matches(g.vocabulary(), groove, &three_section_shaft()).unwrap();
    assert_eq!(matches.len(), 3);
    assert_eq!(
        matches.iter().map(|m| m.nodes[0]).collect::<Vec<_>>(),
        vec![0, 1, 2]
    );
}

#[test]
fn absent_label_gives_no_matches() {
    let g = shaft();
    let groove = g.rule("groove_section").unwrap();
    let closed = Design::new(vec![Node::new("closed_end")], vec![]);
    assert!(find_matches(g.vocabulary(), groove, &closed).unwrap().is_empty());
}

#[test]
fn chain_pattern_matches_agree_with_enumeration() {
    let g = shaft();
    let pair = rule(
        r#"{"name":"pair","lhs":{"nodes":[{"id":"a","label":"section"},{"id":"b","label":"section"}],
            "edges":[{"from":"a","to":"b","label":"adjacent"}]},
            "rhs":{"nodes":[{"id":"a","label":"section","keeps":"a"},{"id":"b","label":"section","keeps":"b"}],
            "edges":[{"from":"a","to":"b","label":"adjacent"}]}}"#,
    );
    let design = Design::new(
        vec![section(20, 20), section(20, 20), section(20, 20)],
        vec![Edge::new(0, 1, "adjacent"), Edge::new(1, 2, "adjacent")],
    );
    let found: Vec<(usize, usize)> = find_matches(g.vocabulary(), &pair, &design)
        .unwrap()
        .iter()
        .map(|m| (m.nodes[0], m.nodes[1]))
        .collect();
    // Every ordered pair of distinct nodes joined by an edge a -> b.
    let mut expected = Vec::new();
    for a in 0..3 {
        for b in 0..3 {
            if a != b && design.edges.iter().any(|e| e.from == a && e.to == b) {
                expected.push((a, b));
            }
        }
    }
    assert_eq!(found, expected);
    assert_eq!(found.len(), 2);
}

#[test]
fn vocabulary_mismatch_is_an_error() {
    let g = shaft();
    let stranger = rule(r#"{"name":"x","lhs":{"nodes":[{"id":"a","label":"bolt"}]},"rhs":{"nodes":[]}}"#);
    assert!(matches!(
        find_matches(g.vocabulary(), &stranger, g.axiom()),
        Err(Error::Vocabulary(_))
    ));
    let odd = Design::new(vec![Node::new("bolt")], vec![]);
    let groove = g.rule("groove_section").unwrap();
    assert!(matches!(
        find_matches(g.vocabulary(), groove, &odd),
        Err(Error::Vocabulary(_))
    ));
}

#[test]
fn add_section_grows_the_shaft() {
    let g = shaft();
    let two = apply_first(&g, "add_section", g.axiom());
    assert_eq!(two.count_label("section"), 2);
    assert_eq!(two.nodes.len(), 3);
    g.vocabulary().check_design(&two).unwrap();
    assert_eq!(to_state(&two).sections, vec![(false, 20, 20), (false, 20, 20)]);
}

#[test]
fn groove_section_relabels_in_place() {
    let g = shaft();
    let grooved = apply_first(&g, "groove_section", g.axiom());
    assert_eq!(grooved.nodes[0].label, "grooved");
    assert_eq!(grooved.nodes[0].attrs, g.axiom().nodes[0].attrs);
    assert_eq!(grooved.edges, g.axiom().edges);
}

#[test]
fn authored_inverses_restore_the_design() {
    let g = shaft();
    let ungroove = rule(
        r#"{"name":"ungroove","lhs":{"nodes":[{"id":"s","label":"grooved"}]},
            "rhs":{"nodes":[{"id":"s","label":"section","keeps":"s"}]}}"#,
    );
    let remove = rule(
        r#"{"name":"remove_section","lhs":{"nodes":[{"id":"s","label":"section"},{"id":"n","label":"section"},
            {"id":"e","label":"open_end"}],"edges":[{"from":"s","to":"n","label":"adjacent"},
            {"from":"n","to":"e","label":"adjacent"}]},
            "rhs":{"nodes":[{"id":"s","label":"section","keeps":"s"},{"id":"e","label":"open_end","keeps":"e"}],
            "edges":[{"from":"s","to":"e","label":"adjacent"}]}}"#,
    );
    let g = modify(
        &g,
        GrammarEdit::AddRule {
            rule: ungroove,
            position: None,
        },
    )
    .unwrap();
    let g = modify(
        &g,
        GrammarEdit::AddRule {
            rule: remove,
            position: None,
        },
    )
    .unwrap();

    let grooved = apply_first(&g, "groove_section", g.axiom());
    assert_eq!(&apply_first(&g, "ungroove", &grooved), g.axiom());

    let longer = apply_first(&g, "add_section", g.axiom());
    assert_eq!(&apply_first(&g, "remove_section", &longer), g.axiom());
}

#[test]
fn stale_matches_are_rejected() {
    let g = shaft();
    let groove = g.rule("groove_section").unwrap();
    let m = find_matches(g.vocabulary(), groove, g.axiom()).unwrap().remove(0);
    let other = apply_first(&g, "set_length", g.axiom());
    assert!(matches!(
        apply(g.vocabulary(), groove, &other, &m),
        Err(Error::StaleMatch(_))
    ));
    let terminate = g.rule("terminate").unwrap();
    assert!(matches!(
        apply(g.vocabulary(), terminate, g.axiom(), &m),
        Err(Error::StaleMatch(_))
    ));
}

#[test]
fn dangling_edges_are_rejected() {
    let g = shaft();
    let delete =
        rule(r#"{"name":"delete","lhs":{"nodes":[{"id":"s","label":"section"}]},"rhs":{"nodes":[]}}"#);
    let m = designcat::grammar::find_matches(g.vocabulary(), &delete, g.axiom())
        .unwrap()
        .remove(0);
    assert!(matches!(
        apply(g.vocabulary(), &delete, g.axiom(), &m),
        Err(Error::DanglingEdge(_))
    ));
}

#[test]
fn rewrites_violating_the_vocabulary_are_rejected() {
    let g = shaft();
    let widen = rule(
        r#"{"name":"widen","lhs":{"nodes":[{"id":"s","label":"section"}]},
            "rhs":{"nodes":[{"id":"s","label":"section","keeps":"s","set":{"diameter":{"add":{"node":"s","attr":"diameter","by":100}}}}]}}"#,
    );
    let m = find_matches(g.vocabulary(), &widen, g.axiom()).unwrap().remove(0);
    assert!(matches!(
        apply(g.vocabulary(), &widen, g.axiom(), &m),
        Err(Error::Vocabulary(_))
    ));
}

#[test]
fn generation_edge_cases() {
    let g = shaft();
    let bare = g.rules().iter().fold(g.clone(), |acc, r| {
        modify(&acc, GrammarEdit::RemoveRule(r.name.clone())).unwrap()
    });
    let out = generate(
        &bare,
        Limits {
            max_depth: 5,
            max_designs: 100,
        },
    )
    .unwrap();
    assert_eq!(out.len(), 1);
    assert_eq!(&out[0].design, g.axiom());

    let out = generate(
        &g,
        Limits {
            max_depth: 3,
            max_designs: 1,
        },
    )
    .unwrap();
    assert_eq!(out.len(), 1);
    assert_eq!(&out[0].design, g.axiom());

    assert!(matches!(
        generate(
            &g,
            Limits {
                max_depth: 0,
                max_designs: 5
            }
        ),
        Err(Error::ZeroLimit)
    ));
    assert!(matches!(
        generate(
            &g,
            Limits {
                max_depth: 2,
                max_designs: 0
            }
        ),
        Err(Error::ZeroLimit)
    ));

    let capped = generate(
        &g,
        Limits {
            max_depth: 3,
            max_designs: 7,
        },
    )
    .unwrap();
    assert_eq!(capped.len(), 7);
}

/// Number of distinct shaft designs within three rule applications.
const SHAFT_DEPTH3_DESIGNS: usize = 80;

#[test]
fn shaft_depth_three_matches_the_oracle() {
    let g = shaft();
    let out = generate(
        &g,
        Limits {
            max_depth: 3,
            max_designs: 10_000,
        },
    )
    .unwrap();
    let generated: BTreeSet<ShaftState> = out.iter().map(|x| to_state(&x.design)).collect();
    let expected = oracle_reachable(3);
    assert_eq!(generated.len(), out.len(), "two outputs map to the same shaft");
    assert_eq!(generated, expected);
    assert_eq!(out.len(), SHAFT_DEPTH3_DESIGNS);
}

#[test]
fn generated_designs_are_valid_replayable_and_unique() {
    for g in [shaft(), gearbox()] {
        let out = generate(
            &g,
            Limits {
                max_depth: 3,
                max_designs: 10_000,
            },
        )
        .unwrap();
        let mut canon = BTreeSet::new();
        for x in &out {
            g.vocabulary().check_design(&x.design).unwrap();
            assert!(canon.insert(x.canonical.clone()));
            assert_eq!(x.canonical, canonical_form(&x.design));
            let replayed = replay(&g, &x.derivation).unwrap();
            assert_eq!(canonical_form(&replayed), x.canonical);
            assert!(x.depth() <= 3);
        }
        let again = generate(
            &g,
            Limits {
                max_depth: 3,
                max_designs: 10_000,
            },
        )
        .unwrap();
        assert_eq!(out, again);
    }
}

#[test]
fn no_fixture_rule_leaves_dangling_edges() {
    for g in [shaft(), gearbox()] {
        for x in generate(
            &g,
            Limits {
                max_depth: 2,
                max_designs: 10_000,
            },
        )
        .unwrap()
        {
            for r in g.rules() {
                for m in find_matches(g.vocabulary(), r, &x.design).unwrap() {
                    if let Ok(d) = apply(g.vocabulary(), r, &x.design, &m) {
                        assert!(d
                            .edges
                            .iter()
                            .all(|e| e.from < d.nodes.len() && e.to < d.nodes.len()));
                    }
                }
            }
        }
    }
}

#[test]
fn modify_semantics() {
    let g = shaft();
    let limits = Limits {
        max_depth: 3,
        max_designs: 10_000,
    };
    let baseline: Vec<String> = generate(&g, limits)
        .unwrap()
        .into_iter()
        .map(|x| x.canonical)
        .collect();

    let pos = g.rules().iter().position(|r| r.name == "set_diameter").unwrap();
    let removed = modify(&g, GrammarEdit::RemoveRule("set_diameter".into())).unwrap();
    assert_eq!(removed.rules().len(), 4);
    assert_eq!(g.rules().len(), 5, "original untouched");
    let restored = modify(
        &removed,
        GrammarEdit::AddRule {
            rule: g.rule("set_diameter").unwrap().clone(),
            position: Some(pos),
        },
    )
    .unwrap();
    assert_eq!(restored, g);
    let again: Vec<String> = generate(&restored, limits)
        .unwrap()
        .into_iter()
        .map(|x| x.canonical)
        .collect();
    assert_eq!(again, baseline);

    let never = rule(
        r#"{"name":"never","lhs":{"nodes":[{"id":"s","label":"section","where":[{"attr":"diameter","op":"gt","value":1000}]}]},
            "rhs":{"nodes":[{"id":"s","label":"grooved","keeps":"s"}]}}"#,
    );
    let padded = modify(
        &g,
        GrammarEdit::AddRule {
            rule: never,
            position: None,
        },
    )
    .unwrap();
    let same: Vec<String> = generate(&padded, limits)
        .unwrap()
        .into_iter()
        .map(|x| x.canonical)
        .collect();
    assert_eq!(same, baseline);

    assert!(matches!(
        modify(&g, GrammarEdit::RemoveRule("nope".into())),
        Err(Error::UnknownRule(_))
    ));
    let dup = g.rule("terminate").unwrap().clone();
    assert!(matches!(
        modify(
            &g,
            GrammarEdit::AddRule {
                rule: dup,
                position: None
            }
        ),
        Err(Error::DuplicateRule(_))
    ));
    let bad_axiom = Design::new(vec![section(5, 20)], vec![]);
    assert!(matches!(
        modify(&g, GrammarEdit::ReplaceAxiom(bad_axiom)),
        Err(Error::Vocabulary(_))
    ));
    let new_axiom = three_section_shaft();
    assert_eq!(
        modify(&g, GrammarEdit::ReplaceAxiom(new_axiom.clone()))
            .unwrap()
            .axiom(),
        &new_axiom
    );
}

#[test]
fn canonical_form_agrees_with_brute_force_on_fixture_designs() {
    let mut designs: Vec<Design> = Vec::new();
    for g in [shaft(), gearbox()] {
        designs.extend(
            generate(
                &g,
                Limits {
                    max_depth: 3,
                    max_designs: 10_000,
                },
            )
            .unwrap()
            .into_iter()
            .map(|x| x.design)
            .filter(|d| d.nodes.len() <= 8),
        );
    }
    // Shuffled copies give isomorphic pairs too.
    let shuffled: Vec<Design> = designs
        .iter()
        .map(|d| permute(d, &reversal(d.nodes.len())))
        .collect();
    designs.extend(shuffled);
    let forms: Vec<String> = designs.iter().map(canonical_form).collect();
    for i in 0..designs.len() {
        for j in i + 1..designs.len() {
            assert_eq!(
                forms[i] == forms[j],
                isomorphic(&designs[i], &designs[j]),
                "designs {i} and {j}"
            );
        }
    }
}

#[test]
fn dot_output_mentions_every_node_and_edge() {
    let d = three_section_shaft();
    let dot = to_dot(&d, "shaft");
    assert!(dot.starts_with("digraph \"shaft\" {"));
    assert_eq!(dot.matches("->").count(), 3);
    assert!(dot.contains("n3 [label=\"open_end\"]"));
    assert!(dot.contains("diameter=30"));
}

fn reversal(n: usize) -> Vec<usize> {
    (0..n).rev().collect()
}

/// Moves node `i` to position `perm[i]`.
fn permute(d: &Design, perm: &[usize]) -> Design {
    let mut nodes = vec![Node::new(""); d.nodes.len()];
    for (i, n) in d.nodes.iter().enumerate() {
        nodes[perm[i]] = n.clone();
    }
    let mut edges: Vec<Edge> = d
        .edges
        .iter()
        .map(|e| Edge::new(perm[e.from], perm[e.to], e.label.clone()))
        .collect();
    edges.reverse();
    Design::new(nodes, edges)
}

fn arb_design() -> impl Strategy<Value = Design> {
    (1usize..=6).prop_flat_map(|n| {
        let labels = prop::collection::vec(prop::sample::select(vec!["a", "b"]), n);
        let edges = prop::collection::vec((0..n, 0..n, prop::sample::select(vec!["x", "y"])), 0..=8);
        (labels, edges).prop_map(|(labels, edges)| {
            Design::new(
                labels.into_iter().map(Node::new).collect(),
                edges.into_iter().map(|(a, b, l)| Edge::new(a, b, l)).collect(),
            )
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonical_form_is_relabeling_invariant(d in arb_design(), seed in any::<u64>()) {
        let n = d.nodes.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(canonical_form(&d), canonical_form(&permute(&d, &perm)));
    }

    #[test]
    fn canonical_form_separates_non_isomorphic(a in arb_design(), b in arb_design()) {
        prop_assert_eq!(canonical_form(&a) == canonical_form(&b), isomorphic(&a, &b));
    }
}
