//! Shared helpers for the integration suites: a seeded random-program
//! generator and evaluation oracles that stay independent of the engine's
//! semi-naive machinery.

// each test target uses a different subset of these helpers
#![allow(dead_code)]

use iggp_core::gdl::{parse_program, DepGraph, Literal, Program, Strata};
use iggp_core::{Atom, Symbol, Term};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};

pub const CONSTANTS: [&str; 4] = ["a", "b", "c", "d"];

/// Generate a random program: up to 6 predicates, 20 facts, and 8 rules,
/// safe by construction. Stratifiability is not guaranteed; callers filter.
pub fn random_program(rng: &mut ChaCha8Rng) -> Program {
    let n_preds = rng.gen_range(1..=6);
    let arities: Vec<usize> = (0..n_preds).map(|_| rng.gen_range(0..=2)).collect();
    let mut text = String::new();

    let fact_count = rng.gen_range(0..=20);
    for _ in 0..fact_count {
        let p = rng.gen_range(0..n_preds);
        if arities[p] == 0 {
            text.push_str(&format!("p{p}\n"));
        } else {
            let args: Vec<&str> = (0..arities[p])
                .map(|_| CONSTANTS[rng.gen_range(0..CONSTANTS.len())])
                .collect();
            text.push_str(&format!("(p{p} {})\n", args.join(" ")));
        }
    }

    let rule_count = rng.gen_range(0..=8);
    for _ in 0..rule_count {
        let head = rng.gen_range(0..n_preds);
        let n_pos = rng.gen_range(1..=3);
        let mut bound: Vec<String> = Vec::new();
        let mut body: Vec<String> = Vec::new();
        for _ in 0..n_pos {
            let p = rng.gen_range(0..n_preds);
            let mut args = Vec::new();
            for _ in 0..arities[p] {
                if rng.gen_bool(0.6) {
                    let v = format!("x{}", rng.gen_range(0..3));
                    if !bound.contains(&v) {
                        bound.push(v.clone());
                    }
                    args.push(format!("?{v}"));
                } else {
                    args.push(CONSTANTS[rng.gen_range(0..CONSTANTS.len())].to_string());
                }
            }
            body.push(literal_text(p, &args));
        }
        let n_neg = rng.gen_range(0..=2);
        for _ in 0..n_neg {
            let p = rng.gen_range(0..n_preds);
            let mut args = Vec::new();
            for _ in 0..arities[p] {
                if !bound.is_empty() && rng.gen_bool(0.6) {
                    args.push(format!("?{}", bound[rng.gen_range(0..bound.len())]));
                } else {
                    args.push(CONSTANTS[rng.gen_range(0..CONSTANTS.len())].to_string());
                }
            }
            body.push(format!("(not {})", literal_text(p, &args)));
        }
        if bound.len() >= 2 && rng.gen_bool(0.3) {
            let i = rng.gen_range(0..bound.len());
            let mut j = rng.gen_range(0..bound.len());
            if i == j {
                j = (j + 1) % bound.len();
            }
            body.push(format!("(distinct ?{} ?{})", bound[i], bound[j]));
        }
        let mut head_args = Vec::new();
        for _ in 0..arities[head] {
            if !bound.is_empty() && rng.gen_bool(0.7) {
                head_args.push(format!("?{}", bound[rng.gen_range(0..bound.len())]));
            } else {
                head_args.push(CONSTANTS[rng.gen_range(0..CONSTANTS.len())].to_string());
            }
        }
        text.push_str(&format!(
            "(<= {} {})\n",
            literal_text(head, &head_args),
            body.join(" ")
        ));
    }

    parse_program(&text).expect("generated program parses")
}

fn literal_text(pred: usize, args: &[String]) -> String {
    if args.is_empty() {
        format!("p{pred}")
    } else {
        format!("(p{pred} {})", args.join(" "))
    }
}

fn ground_atom(atom: &Atom, subst: &BTreeMap<Symbol, Symbol>) -> Atom {
    let args = atom
        .args
        .iter()
        .map(|t| match t {
            Term::Constant(c) => Term::Constant(c.clone()),
            Term::Variable(v) => Term::Constant(subst[v].clone()),
            Term::Compound(..) => unreachable!("generator emits flat terms"),
        })
        .collect();
    Atom {
        predicate: atom.predicate.clone(),
        args,
    }
}

fn rule_variables(rule: &iggp_core::Rule) -> Vec<Symbol> {
    let mut vars = rule.head.variables();
    for lit in &rule.body {
        for v in lit.atom().variables() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
    }
    vars
}

/// Naive oracle: ground every rule over the constants appearing in the
/// program and saturate stratum by stratum. No deltas, no scheduling.
pub fn naive_model(program: &Program, strata: &Strata) -> BTreeSet<Atom> {
    let mut constants: BTreeSet<Symbol> = BTreeSet::new();
    let mut collect = |term: &Term| {
        if let Term::Constant(c) = term {
            constants.insert(c.clone());
        }
    };
    for fact in &program.facts {
        fact.args.iter().for_each(&mut collect);
    }
    for rule in &program.rules {
        rule.head.args.iter().for_each(&mut collect);
        for lit in &rule.body {
            lit.atom().args.iter().for_each(&mut collect);
        }
    }
    let constants: Vec<Symbol> = constants.into_iter().collect();

    let mut db: BTreeSet<Atom> = program.facts.iter().cloned().collect();
    let max_level = program
        .rules
        .iter()
        .map(|r| strata.stratum_of(&r.head.predicate))
        .max();
    let Some(max_level) = max_level else {
        return db;
    };

    for level in 0..=max_level {
        loop {
            let mut added = false;
            for rule in &program.rules {
                if strata.stratum_of(&rule.head.predicate) != level {
                    continue;
                }
                let vars = rule_variables(rule);
                let mut assignment = vec![0usize; vars.len()];
                loop {
                    if vars.is_empty() || !constants.is_empty() {
                        let subst: BTreeMap<Symbol, Symbol> = vars
                            .iter()
                            .zip(&assignment)
                            .map(|(v, &i)| (v.clone(), constants[i].clone()))
                            .collect();
                        let satisfied = rule.body.iter().all(|lit| match lit {
                            Literal::Pos(atom) if atom.predicate.as_str() == "distinct" => {
                                let g = ground_atom(atom, &subst);
                                g.args[0] != g.args[1]
                            }
                            Literal::Pos(atom) => db.contains(&ground_atom(atom, &subst)),
                            Literal::Neg(atom) => !db.contains(&ground_atom(atom, &subst)),
                        });
                        if satisfied {
                            added |= db.insert(ground_atom(&rule.head, &subst));
                        }
                    }
                    // advance the assignment odometer
                    let mut pos = vars.len();
                    loop {
                        if pos == 0 {
                            break;
                        }
                        pos -= 1;
                        assignment[pos] += 1;
                        if assignment[pos] < constants.len() {
                            break;
                        }
                        assignment[pos] = 0;
                        if pos == 0 {
                            pos = usize::MAX;
                            break;
                        }
                    }
                    if pos == usize::MAX || vars.is_empty() {
                        break;
                    }
                    if constants.is_empty() {
                        break;
                    }
                }
            }
            if !added {
                break;
            }
        }
    }
    db
}

/// Independent stratifiability oracle: a program is unstratifiable exactly
/// when some negated edge closes a cycle, i.e. the edge's target reaches its
/// source.
pub fn has_cycle_through_negation(graph: &DepGraph) -> bool {
    graph
        .edges
        .iter()
        .filter(|e| e.negated)
        .any(|e| reaches(graph, &e.to, &e.from))
}

fn reaches(graph: &DepGraph, from: &Symbol, to: &Symbol) -> bool {
    let mut seen = BTreeSet::new();
    let mut queue = vec![from.clone()];
    while let Some(node) = queue.pop() {
        if &node == to {
            return true;
        }
        if !seen.insert(node.clone()) {
            continue;
        }
        for edge in &graph.edges {
            if edge.from == node && !seen.contains(&edge.to) {
                queue.push(edge.to.clone());
            }
        }
    }
    false
}
