//! Predicate dependency graph, stratification, and rule safety.
//!
//! A program stratifies when its dependency graph has no cycle through a
//! negated edge; evaluation then proceeds stratum by stratum with negation
//! resolved against fully computed lower strata.

use super::{Literal, Program, DISTINCT};
use crate::symbol::Symbol;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// One dependency edge: a rule with head `from` references `to` in its body.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct DepEdge {
    pub from: Symbol,
    pub to: Symbol,
    pub negated: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DepGraph {
    pub nodes: BTreeSet<Symbol>,
    pub edges: BTreeSet<DepEdge>,
}

impl DepGraph {
    pub fn has_edge(&self, from: &str, to: &str, negated: bool) -> bool {
        self.edges.contains(&DepEdge {
            from: Symbol::new(from),
            to: Symbol::new(to),
            negated,
        })
    }
}

/// Build the dependency graph: an edge from `p` to `q` for every rule with
/// head predicate `p` and a body literal with predicate `q`, labelled with
/// the literal's sign.
pub fn dependency_graph(program: &Program) -> DepGraph {
    let mut graph = DepGraph::default();
    for rule in &program.rules {
        graph.nodes.insert(rule.head.predicate.clone());
        for lit in &rule.body {
            let atom = lit.atom();
            graph.nodes.insert(atom.predicate.clone());
            graph.edges.insert(DepEdge {
                from: rule.head.predicate.clone(),
                to: atom.predicate.clone(),
                negated: !lit.is_positive(),
            });
        }
    }
    graph
}

/// An ordered partition of predicates into strata. Every positively
/// referenced body predicate sits at or below its head's stratum; every
/// negatively referenced one sits strictly below.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strata {
    levels: Vec<Vec<Symbol>>,
    index: BTreeMap<Symbol, usize>,
}

impl Strata {
    /// Stratum of a predicate. Predicates unknown to the graph (pure facts,
    /// externally supplied atoms) live in the bottom stratum.
    pub fn stratum_of(&self, predicate: &Symbol) -> usize {
        self.index.get(predicate).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn levels(&self) -> &[Vec<Symbol>] {
        &self.levels
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratifyError {
    /// A predicate on a dependency cycle that passes through a negated edge.
    pub predicate: Symbol,
}

impl fmt::Display for StratifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "program is not stratifiable: predicate `{}` lies on a dependency cycle through negation",
            self.predicate
        )
    }
}

impl std::error::Error for StratifyError {}

/// Assign each predicate its minimal stratum, or fail when some cycle passes
/// through a negated edge.
pub fn stratify(program: &Program) -> Result<Strata, StratifyError> {
    let graph = dependency_graph(program);
    let mut level: BTreeMap<Symbol, usize> = graph.nodes.iter().map(|p| (p.clone(), 0)).collect();
    let bound = graph.nodes.len().max(1);

    // Least fixpoint from zero; a level can only exceed the predicate count
    // when a negated edge lies on a cycle.
    loop {
        let mut changed = false;
        for edge in &graph.edges {
            let required = level[&edge.to] + usize::from(edge.negated);
            let current = level.get_mut(&edge.from).expect("node present");
            if required > *current {
                *current = required;
                if required > bound {
                    return Err(StratifyError {
                        predicate: edge.from.clone(),
                    });
                }
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let depth = level.values().max().map_or(0, |m| m + 1);
    let mut levels = vec![Vec::new(); depth];
    for (pred, l) in &level {
        levels[*l].push(pred.clone());
    }
    Ok(Strata {
        index: level,
        levels,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SafetyError {
    pub rule: String,
    pub variable: Symbol,
}

impl fmt::Display for SafetyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unsafe rule `{}`: variable `?{}` does not occur in any positive body literal",
            self.rule, self.variable
        )
    }
}

impl std::error::Error for SafetyError {}

/// Check rule safety: every variable in the head, in a negative literal, or
/// in a `distinct` argument must occur in a positive non-`distinct` body
/// literal, so evaluation binds it before any test runs.
pub fn validate_safety(program: &Program) -> Result<(), SafetyError> {
    for rule in &program.rules {
        let mut bound: BTreeSet<Symbol> = BTreeSet::new();
        for lit in &rule.body {
            if let Literal::Pos(atom) = lit {
                if atom.predicate.as_str() != DISTINCT {
                    bound.extend(atom.variables());
                }
            }
        }
        let mut required: Vec<Symbol> = rule.head.variables();
        for lit in &rule.body {
            let atom = lit.atom();
            if !lit.is_positive() || atom.predicate.as_str() == DISTINCT {
                for v in atom.variables() {
                    if !required.contains(&v) {
                        required.push(v);
                    }
                }
            }
        }
        for v in required {
            if !bound.contains(&v) {
                return Err(SafetyError {
                    rule: rule.to_string(),
                    variable: v,
                });
            }
        }
    }
    Ok(())
}
