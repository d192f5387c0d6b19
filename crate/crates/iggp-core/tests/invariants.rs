//! Cross-module invariants: printer/parser round trips, stratification
//! against an independent cycle oracle, engine monotonicity, and whole-game
//! properties of the bundled descriptions.

mod common;

use iggp_core::bundles::{load_bundle, BUNDLES};
use iggp_core::dataset::CountedTriple;
use iggp_core::evaluate::Hypothesis;
use iggp_core::extract::{extract_trace, flatten_program, static_background};
use iggp_core::gdl::dependency_graph;
use iggp_core::pipeline::generate_game_dataset;
use iggp_core::trace::{derived_rng, generate_traces, EpisodeConfig};
use iggp_core::{
    minimal_model, parse_program, stratify, Atom, EngineConfig, FactSet, Symbol, Term,
};
use proptest::prelude::*;
use std::collections::BTreeSet;

// ---- printer/parser round trip ------------------------------------------

/// Names carry their arity so every generated program is arity-consistent.
fn functor_pool() -> Vec<(&'static str, usize)> {
    vec![("f", 1), ("g", 2), ("cell", 3), ("s", 1)]
}

fn predicate_pool() -> Vec<(&'static str, usize)> {
    vec![("p", 1), ("q", 2), ("r", 0), ("edge", 2), ("mark", 3), ("flag", 0)]
}

fn constant_pool() -> Vec<&'static str> {
    vec!["a", "b", "c", "one", "two"]
}

fn variable_pool() -> Vec<&'static str> {
    vec!["x", "y", "z", "w"]
}

fn term_strategy(ground: bool) -> impl Strategy<Value = Term> {
    let leaf = if ground {
        prop::sample::select(constant_pool())
            .prop_map(Term::constant)
            .boxed()
    } else {
        prop_oneof![
            prop::sample::select(constant_pool()).prop_map(Term::constant),
            prop::sample::select(variable_pool()).prop_map(Term::variable),
        ]
        .boxed()
    };
    leaf.prop_recursive(2, 8, 3, |inner| {
        prop::sample::select(functor_pool()).prop_flat_map(move |(name, arity)| {
            prop::collection::vec(inner.clone(), arity)
                .prop_map(move |args| Term::compound(name, args))
        })
    })
}

fn atom_strategy(ground: bool) -> impl Strategy<Value = Atom> {
    prop::sample::select(predicate_pool()).prop_flat_map(move |(name, arity)| {
        prop::collection::vec(term_strategy(ground), arity)
            .prop_map(move |args| Atom::new(name, args))
    })
}

fn program_text_strategy() -> impl Strategy<Value = String> {
    let fact = atom_strategy(true).prop_map(|a| atom_to_sexpr(&a));
    let literal = prop_oneof![
        atom_strategy(false).prop_map(|a| atom_to_sexpr(&a)),
        atom_strategy(false).prop_map(|a| format!("(not {})", atom_to_sexpr(&a))),
    ];
    let rule = (atom_strategy(false), prop::collection::vec(literal, 1..4)).prop_map(
        |(head, body)| format!("(<= {} {})", atom_to_sexpr(&head), body.join(" ")),
    );
    let statement = prop_oneof![fact, rule];
    prop::collection::vec(statement, 0..12).prop_map(|stmts| stmts.join("\n"))
}

fn term_to_sexpr(term: &Term) -> String {
    match term {
        Term::Constant(c) => c.to_string(),
        Term::Variable(v) => format!("?{v}"),
        Term::Compound(f, args) => format!(
            "({f} {})",
            args.iter().map(term_to_sexpr).collect::<Vec<_>>().join(" ")
        ),
    }
}

fn atom_to_sexpr(atom: &Atom) -> String {
    if atom.args.is_empty() {
        atom.predicate.to_string()
    } else {
        format!(
            "({} {})",
            atom.predicate,
            atom.args.iter().map(term_to_sexpr).collect::<Vec<_>>().join(" ")
        )
    }
}

proptest! {
    #[test]
    fn printing_then_parsing_is_identity(text in program_text_strategy()) {
        let program = parse_program(&text).expect("generated text parses");
        let reparsed = parse_program(&program.to_gdl_string()).expect("printed text parses");
        prop_assert_eq!(&reparsed, &program);
        // and printing is a fixed point from then on
        prop_assert_eq!(reparsed.to_gdl_string(), program.to_gdl_string());
    }

    #[test]
    fn flat_atom_display_parses_back(
        name in prop::sample::select(vec!["next_score", "true_count", "terminal", "legal_say"]),
        args in prop::collection::vec(prop::sample::select(vec!["p1", "0", "fizz", "c9"]), 0..4),
    ) {
        use iggp_core::FlatAtom;
        let atom = FlatAtom {
            predicate: Symbol::new(name),
            args: args.into_iter().map(Symbol::new).collect(),
        };
        prop_assert_eq!(FlatAtom::parse(&format!("{atom}.")), Some(atom));
    }
}

// ---- stratification vs. an independent cycle oracle ----------------------

#[test]
fn stratify_errs_exactly_on_cycles_through_negation() {
    let mut rng = derived_rng(555, &[b"strata-oracle"]);
    let mut stratified = 0;
    let mut rejected = 0;
    for _ in 0..400 {
        let program = common::random_program(&mut rng);
        let graph = dependency_graph(&program);
        let oracle_says_cyclic = common::has_cycle_through_negation(&graph);
        match stratify(&program) {
            Ok(strata) => {
                assert!(
                    !oracle_says_cyclic,
                    "stratify accepted a program with a negated cycle:\n{}",
                    program.to_gdl_string()
                );
                stratified += 1;
                // the strata invariant, checked literally against every rule
                for rule in &program.rules {
                    let head = strata.stratum_of(&rule.head.predicate);
                    for lit in &rule.body {
                        let body = strata.stratum_of(&lit.atom().predicate);
                        if lit.is_positive() {
                            assert!(body <= head);
                        } else {
                            assert!(body < head);
                        }
                    }
                }
            }
            Err(_) => {
                assert!(
                    oracle_says_cyclic,
                    "stratify rejected a stratifiable program:\n{}",
                    program.to_gdl_string()
                );
                rejected += 1;
            }
        }
    }
    assert!(stratified > 0 && rejected > 0, "generator should produce both kinds");
}

// ---- engine properties ----------------------------------------------------

#[test]
fn model_is_sound_every_satisfied_ground_rule_fires() {
    let mut rng = derived_rng(808, &[b"soundness"]);
    let mut checked = 0;
    while checked < 40 {
        let program = common::random_program(&mut rng);
        let Ok(strata) = stratify(&program) else { continue };
        let model = minimal_model(&program, &strata, &FactSet::new(), EngineConfig::default()).unwrap();
        // the naive oracle saturates: nothing derivable is missing
        let oracle = common::naive_model(&program, &strata);
        let atoms: BTreeSet<Atom> = model.iter().cloned().collect();
        assert_eq!(atoms, oracle);
        checked += 1;
    }
}

#[test]
fn adding_bottom_stratum_facts_is_monotone_there() {
    let mut rng = derived_rng(909, &[b"monotone"]);
    let mut checked = 0;
    while checked < 40 {
        let program = common::random_program(&mut rng);
        let Ok(strata) = stratify(&program) else { continue };
        let base = minimal_model(&program, &strata, &FactSet::new(), EngineConfig::default()).unwrap();
        // pick a bottom-stratum predicate and toss in a new fact
        let Some(pred) = program
            .predicates()
            .find(|p| strata.stratum_of(p) == 0 && program.predicate_arity(p.as_str()) == Some(1))
            .cloned()
        else {
            continue;
        };
        let mut extra = FactSet::new();
        extra.insert(Atom::new(pred.as_str(), vec![Term::constant("fresh")]));
        let extended =
            minimal_model(&program, &strata, &extra, EngineConfig::default()).unwrap();
        for atom in base.iter() {
            if strata.stratum_of(&atom.predicate) == 0 {
                assert!(
                    extended.contains(atom),
                    "bottom-stratum atom {atom} vanished after adding a bottom-stratum fact in\n{}",
                    program.to_gdl_string()
                );
            }
        }
        checked += 1;
    }
}

// ---- bundled game properties ----------------------------------------------

#[test]
fn bundles_play_out_with_total_rewards_and_legal_moves() {
    for bundle in BUNDLES {
        let loaded = load_bundle(bundle.name).unwrap();
        let cfg = EpisodeConfig {
            max_traces: 5,
            max_time: 100,
            master_seed: 11,
        };
        let traces = generate_traces(&loaded.game, &cfg).unwrap();
        for trace in &traces {
            assert!(
                trace.terminated,
                "{}: every bundled game reaches terminal within 100 states",
                bundle.name
            );
            for pair in trace.steps.windows(2) {
                let action = pair[0].action.as_ref().unwrap();
                assert_eq!(
                    loaded.game.step(&pair[0].state, action).unwrap(),
                    pair[1].state,
                    "{}: consecutive states disagree with the transition function",
                    bundle.name
                );
            }
            for (i, step) in trace.steps.iter().enumerate() {
                let info = loaded.game.state_info(&step.state).unwrap();
                iggp_core::game::rewards_from_goals(loaded.game.roles(), &info.goals)
                    .unwrap_or_else(|e| panic!("{}: state {i}: {e}", bundle.name));
                if !info.terminal {
                    for (role, moves) in &info.legal {
                        assert!(
                            !moves.is_empty(),
                            "{}: role {role} stuck in a non-terminal state",
                            bundle.name
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn reference_rules_cover_every_triple_of_their_own_traces() {
    // every extracted triple, not just the test split
    for name in ["rock_paper_scissors", "minimal_decay", "buttons_and_lights"] {
        let loaded = load_bundle(name).unwrap();
        let statics = static_background(&loaded.game).unwrap();
        let cfg = EpisodeConfig {
            max_traces: 4,
            max_time: 30,
            master_seed: 3,
        };
        let flat = flatten_program(loaded.game.program(), &loaded.signature).unwrap();
        let hypothesis = Hypothesis::new(flat).unwrap();
        for trace in generate_traces(&loaded.game, &cfg).unwrap() {
            for triple in extract_trace(&trace, &loaded.game, &loaded.signature, &statics).unwrap() {
                for atom in &triple.positive {
                    assert!(
                        hypothesis.classify(&triple, atom).unwrap(),
                        "{name}: reference misses positive {atom}"
                    );
                }
                for atom in &triple.negative {
                    assert!(
                        !hypothesis.classify(&triple, atom).unwrap(),
                        "{name}: reference wrongly covers negative {atom}"
                    );
                }
            }
        }
    }
}

#[test]
fn dataset_counts_follow_the_extraction_index_ranges() {
    // a trace with n states yields n triples for each single-state target
    // and n-1 for next, before deduplication
    let loaded = load_bundle("rock_paper_scissors").unwrap();
    let statics = static_background(&loaded.game).unwrap();
    let cfg = EpisodeConfig {
        max_traces: 1,
        max_time: 30,
        master_seed: 2,
    };
    let trace = &generate_traces(&loaded.game, &cfg).unwrap()[0];
    let n = trace.steps.len();
    assert_eq!(n, 4, "three rounds plus the initial state");
    let triples = extract_trace(trace, &loaded.game, &loaded.signature, &statics).unwrap();
    assert_eq!(triples.len(), 3 * n + (n - 1), "4+4+4+3 triples for a 4-state trace");
    for target in iggp_core::Target::ALL {
        let expected = if target == iggp_core::Target::Next { n - 1 } else { n };
        assert_eq!(triples.iter().filter(|t| t.target == target).count(), expected);
    }
}

#[test]
fn generated_splits_have_disjoint_well_formed_triples() {
    let loaded = load_bundle("buttons_and_lights").unwrap();
    let cfg = EpisodeConfig {
        max_traces: 12,
        max_time: 10,
        master_seed: 13,
    };
    let dataset = generate_game_dataset(&loaded, &cfg, None).unwrap();
    let game = &dataset.games["buttons_and_lights"];
    for (target, splits) in &game.targets {
        let all: Vec<&CountedTriple> = splits
            .train
            .iter()
            .chain(&splits.validate)
            .chain(&splits.test)
            .collect();
        let mut seen = BTreeSet::new();
        for counted in &all {
            assert!(counted.count >= 1);
            assert!(
                seen.insert(&counted.triple),
                "{target}: duplicate triple across splits"
            );
            assert!(
                counted.triple.positive.is_disjoint(&counted.triple.negative),
                "{target}: positives and negatives overlap"
            );
            let family: BTreeSet<&str> = counted
                .triple
                .positive
                .iter()
                .chain(&counted.triple.negative)
                .map(|a| a.predicate.as_str())
                .collect();
            for pred in family {
                let root = target.as_str();
                assert!(
                    pred == root || pred.starts_with(&format!("{root}_")),
                    "{target}: example atom predicate {pred} outside the target family"
                );
                // background never mentions the example space
                for bk in &counted.triple.background {
                    assert_ne!(bk.predicate.as_str(), pred);
                }
            }
        }
    }
}

// ---- reference fixtures against the bundled games --------------------------

#[test]
fn rps_dependency_graph_contains_the_expected_edges() {
    let loaded = load_bundle("rock_paper_scissors").unwrap();
    let graph = dependency_graph(loaded.game.program());
    for (from, to) in [
        ("next", "true"),
        ("next", "succ"),
        ("wins", "does"),
        ("wins", "beats"),
        ("draws", "does"),
        ("loses", "beats"),
        ("goal", "true"),
        ("terminal", "true"),
        ("legal", "role"),
    ] {
        assert!(graph.has_edge(from, to, false), "missing edge {from} -> {to}");
    }
    assert!(
        graph.edges.iter().all(|e| !e.negated),
        "the reference rules use no negation"
    );
}

#[test]
fn rps_transition_model_derives_round_outcome_atoms() {
    use iggp_core::query;
    let loaded = load_bundle("rock_paper_scissors").unwrap();
    let state = iggp_core::GameState::from_terms([
        Term::compound("score", vec![Term::constant("p1"), Term::constant("0")]),
        Term::compound("score", vec![Term::constant("p2"), Term::constant("0")]),
        Term::compound("step", vec![Term::constant("0")]),
    ]);
    let action = iggp_core::JointAction {
        moves: [
            (Symbol::new("p1"), Term::constant("stone")),
            (Symbol::new("p2"), Term::constant("paper")),
        ]
        .into(),
    };
    let model = loaded.game.transition_model(&state, &action).unwrap();
    let shown = |pred: &str| -> Vec<String> {
        query(&model, &Symbol::new(pred)).iter().map(|a| a.to_string()).collect()
    };
    assert_eq!(shown("wins"), ["wins(p2)"]);
    assert_eq!(shown("loses"), ["loses(p1)"]);
    assert_eq!(shown("draws"), Vec::<String>::new());
    assert_eq!(
        shown("next"),
        [
            "next(score(p1,0))",
            "next(score(p2,1))",
            "next(step(1))"
        ]
    );
}

#[test]
fn rps_draw_keeps_scores_and_increments_step() {
    let loaded = load_bundle("rock_paper_scissors").unwrap();
    let state = iggp_core::GameState::from_terms([
        Term::compound("score", vec![Term::constant("p1"), Term::constant("1")]),
        Term::compound("score", vec![Term::constant("p2"), Term::constant("0")]),
        Term::compound("step", vec![Term::constant("1")]),
    ]);
    let both_paper = iggp_core::JointAction {
        moves: [
            (Symbol::new("p1"), Term::constant("paper")),
            (Symbol::new("p2"), Term::constant("paper")),
        ]
        .into(),
    };
    let next = loaded.game.step(&state, &both_paper).unwrap();
    let expected = iggp_core::GameState::from_terms([
        Term::compound("score", vec![Term::constant("p1"), Term::constant("1")]),
        Term::compound("score", vec![Term::constant("p2"), Term::constant("0")]),
        Term::compound("step", vec![Term::constant("2")]),
    ]);
    assert_eq!(next, expected);
}

#[test]
fn rps_rewards_mirror_the_score_fluents() {
    let loaded = load_bundle("rock_paper_scissors").unwrap();
    let state = iggp_core::GameState::from_terms([
        Term::compound("score", vec![Term::constant("p1"), Term::constant("1")]),
        Term::compound("score", vec![Term::constant("p2"), Term::constant("2")]),
        Term::compound("step", vec![Term::constant("3")]),
    ]);
    let rewards = loaded.game.rewards(&state).unwrap();
    assert_eq!(rewards.rewards[&Symbol::new("p1")], Symbol::new("1"));
    assert_eq!(rewards.rewards[&Symbol::new("p2")], Symbol::new("2"));
}

#[test]
fn rps_stone_paper_triple_matches_the_reference_layout() {
    use iggp_core::extract::triple_transition;
    use iggp_core::FlatAtom;
    let loaded = load_bundle("rock_paper_scissors").unwrap();
    let statics = static_background(&loaded.game).unwrap();
    let state = iggp_core::GameState::from_terms([
        Term::compound("score", vec![Term::constant("p1"), Term::constant("0")]),
        Term::compound("score", vec![Term::constant("p2"), Term::constant("0")]),
        Term::compound("step", vec![Term::constant("0")]),
    ]);
    let action = iggp_core::JointAction {
        moves: [
            (Symbol::new("p1"), Term::constant("stone")),
            (Symbol::new("p2"), Term::constant("paper")),
        ]
        .into(),
    };
    let next = loaded.game.step(&state, &action).unwrap();
    let triple = triple_transition(&state, &action, &next, &statics, &loaded.signature).unwrap();

    for expected in [
        "true_score(p1,0)",
        "true_score(p2,0)",
        "true_step(0)",
        "does(p1,stone)",
        "does(p2,paper)",
        "beats(paper,stone)",
        "succ(0,1)",
        "role(p1)",
    ] {
        assert!(
            triple.background.contains(&FlatAtom::parse(expected).unwrap()),
            "background missing {expected}"
        );
    }
    let atoms = |names: &[&str]| -> BTreeSet<iggp_core::FlatAtom> {
        names.iter().map(|n| FlatAtom::parse(n).unwrap()).collect()
    };
    assert_eq!(
        triple.positive,
        atoms(&["next_score(p1,0)", "next_score(p2,1)", "next_step(1)"])
    );
    assert_eq!(
        triple.negative,
        atoms(&[
            "next_score(p2,0)",
            "next_score(p1,1)",
            "next_score(p1,2)",
            "next_score(p2,2)",
            "next_score(p1,3)",
            "next_score(p2,3)",
            "next_step(0)",
            "next_step(2)",
            "next_step(3)",
        ])
    );
}

#[test]
fn fizz_buzz_next_triple_matches_the_reference_layout() {
    use iggp_core::extract::triple_transition;
    use iggp_core::FlatAtom;
    let loaded = load_bundle("fizz_buzz").unwrap();
    let statics = static_background(&loaded.game).unwrap();
    let state = iggp_core::GameState::from_terms([
        Term::compound("count", vec![Term::constant("12")]),
        Term::compound("success", vec![Term::constant("3")]),
    ]);
    let action = iggp_core::JointAction {
        moves: [(
            Symbol::new("player"),
            Term::compound("say", vec![Term::constant("buzz")]),
        )]
        .into(),
    };
    let next = loaded.game.step(&state, &action).unwrap();
    let triple = triple_transition(&state, &action, &next, &statics, &loaded.signature).unwrap();
    for expected in ["does_say(player,buzz)", "true_count(12)", "true_success(3)"] {
        assert!(triple.background.contains(&FlatAtom::parse(expected).unwrap()));
    }
    let positives: BTreeSet<String> = triple.positive.iter().map(|a| a.to_string()).collect();
    assert_eq!(
        positives,
        BTreeSet::from(["next_count(13)".to_string(), "next_success(3)".to_string()])
    );
    // ground(next) covers two int-valued fluents over 0..=31
    assert_eq!(triple.positive.len() + triple.negative.len(), 64);
}

#[test]
fn fizz_buzz_statics_are_exactly_the_common_background_families() {
    let loaded = load_bundle("fizz_buzz").unwrap();
    let statics = static_background(&loaded.game).unwrap();
    let families: BTreeSet<&str> = statics.iter().map(|a| a.predicate.as_str()).collect();
    assert_eq!(
        families,
        BTreeSet::from([
            "divisible",
            "input_say",
            "int",
            "less_than",
            "minus",
            "positive_int",
            "role",
            "succ",
        ])
    );
}

#[test]
fn fizz_buzz_legal_ground_set_has_34_atoms() {
    let loaded = load_bundle("fizz_buzz").unwrap();
    let ground = loaded.signature.ground_atoms(&Symbol::new("legal")).unwrap();
    assert_eq!(ground.len(), 34, "one agent times 31 numerals and 3 words");
}

#[test]
fn fizz_buzz_legal_moves_at_count_ten() {
    let loaded = load_bundle("fizz_buzz").unwrap();
    let state = iggp_core::GameState::from_terms([
        Term::compound("count", vec![Term::constant("10")]),
        Term::compound("success", vec![Term::constant("2")]),
    ]);
    let legal = loaded.game.legal_moves(&state).unwrap();
    let say = |w: &str| Term::compound("say", vec![Term::constant(w)]);
    assert_eq!(
        legal[&Symbol::new("player")],
        BTreeSet::from([say("10"), say("buzz"), say("fizz"), say("fizzbuzz")])
    );
}

#[test]
fn flattened_rps_reference_classifies_the_reference_triple() {
    use iggp_core::FlatAtom;
    let loaded = load_bundle("rock_paper_scissors").unwrap();
    let flat = flatten_program(loaded.game.program(), &loaded.signature).unwrap();
    let hypothesis = Hypothesis::new(flat).unwrap();
    let atoms = |names: &[&str]| -> BTreeSet<FlatAtom> {
        names.iter().map(|n| FlatAtom::parse(n).unwrap()).collect()
    };
    let triple = iggp_core::Triple {
        target: iggp_core::Target::Next,
        background: atoms(&[
            "beats(paper,stone)",
            "beats(scissors,paper)",
            "beats(stone,scissors)",
            "role(p1)",
            "role(p2)",
            "succ(0,1)",
            "succ(1,2)",
            "succ(2,3)",
            "does(p1,stone)",
            "does(p2,paper)",
            "true_score(p1,0)",
            "true_score(p2,0)",
            "true_step(0)",
        ]),
        positive: atoms(&["next_score(p1,0)", "next_score(p2,1)", "next_step(1)"]),
        negative: atoms(&["next_score(p1,1)", "next_score(p2,0)"]),
    };
    let classify = |name: &str| {
        hypothesis
            .classify(&triple, &FlatAtom::parse(name).unwrap())
            .unwrap()
    };
    assert!(classify("next_score(p2,1)"));
    assert!(!classify("next_score(p1,1)"));
}

#[test]
fn flattened_fizz_buzz_goal_rules_classify_the_success_band() {
    use iggp_core::FlatAtom;
    let loaded = load_bundle("fizz_buzz").unwrap();
    let statics = static_background(&loaded.game).unwrap();
    let flat = flatten_program(loaded.game.program(), &loaded.signature).unwrap();
    let hypothesis = Hypothesis::new(flat).unwrap();
    let mut background = statics.clone();
    background.insert(FlatAtom::parse("true_count(31)").unwrap());
    background.insert(FlatAtom::parse("true_success(20)").unwrap());
    let triple = iggp_core::Triple {
        target: iggp_core::Target::Goal,
        background,
        positive: BTreeSet::new(),
        negative: BTreeSet::new(),
    };
    let classify = |name: &str| {
        hypothesis
            .classify(&triple, &FlatAtom::parse(name).unwrap())
            .unwrap()
    };
    assert!(classify("goal(player,50)"));
    assert!(!classify("goal(player,25)"));
    assert!(!classify("goal(player,100)"));
}

#[test]
fn single_state_trace_yields_no_next_triples() {
    let loaded = load_bundle("minimal_decay").unwrap();
    let statics = static_background(&loaded.game).unwrap();
    let cfg = EpisodeConfig {
        max_traces: 1,
        max_time: 1,
        master_seed: 0,
    };
    let trace = &generate_traces(&loaded.game, &cfg).unwrap()[0];
    assert_eq!(trace.steps.len(), 1);
    let triples = extract_trace(trace, &loaded.game, &loaded.signature, &statics).unwrap();
    assert_eq!(triples.len(), 3);
    assert!(triples.iter().all(|t| t.target != iggp_core::Target::Next));
}

#[test]
fn rps_default_config_runs_one_thousand_episodes_to_termination() {
    let loaded = load_bundle("rock_paper_scissors").unwrap();
    let cfg = EpisodeConfig::default();
    assert_eq!((cfg.max_traces, cfg.max_time), (1000, 100));
    let traces = generate_traces(&loaded.game, &cfg).unwrap();
    assert_eq!(traces.len(), 1000);
    for trace in &traces {
        assert!(trace.terminated, "three rounds always end the game");
        assert_eq!(trace.steps.len(), 4);
    }
}

#[test]
fn flattened_fizz_buzz_next_rules_predict_the_successor_state() {
    use iggp_core::FlatAtom;
    let loaded = load_bundle("fizz_buzz").unwrap();
    let statics = static_background(&loaded.game).unwrap();
    let flat = flatten_program(loaded.game.program(), &loaded.signature).unwrap();
    let hypothesis = Hypothesis::new(flat).unwrap();
    let mut background = statics.clone();
    for atom in ["does_say(player,buzz)", "true_count(12)", "true_success(3)"] {
        background.insert(FlatAtom::parse(atom).unwrap());
    }
    let triple = iggp_core::Triple {
        target: iggp_core::Target::Next,
        background,
        positive: BTreeSet::new(),
        negative: BTreeSet::new(),
    };
    assert!(hypothesis
        .classify(&triple, &FlatAtom::parse("next_count(13)").unwrap())
        .unwrap());
    assert!(hypothesis
        .classify(&triple, &FlatAtom::parse("next_success(3)").unwrap())
        .unwrap());
    // saying buzz at 12 is wrong, so no other success value is entailed
    for n in 0..=31 {
        if n == 3 {
            continue;
        }
        assert!(
            !hypothesis
                .classify(&triple, &FlatAtom::parse(&format!("next_success({n})")).unwrap())
                .unwrap(),
            "next_success({n}) should not hold"
        );
    }
}
