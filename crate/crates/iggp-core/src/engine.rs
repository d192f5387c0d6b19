//! Forward-chaining evaluation of stratified programs.
//!
//! [`minimal_model`] computes the unique least model of a program's facts
//! plus caller-supplied ground atoms, stratum by stratum, semi-naively.
//! Negative literals are tested only against fully computed lower strata;
//! `distinct` succeeds when its ground arguments differ syntactically.
//! Evaluation is a pure function of its inputs: identical inputs yield
//! identical models regardless of thread or iteration order.

use crate::gdl::{Atom, Literal, Program, Rule, Strata, Term, DISTINCT};
use crate::symbol::Symbol;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Ground atoms indexed by predicate. Iteration order is deterministic.
/// Per-predicate sets are shared on clone and copied only when written, so
/// seeding an evaluation from a large fixed fact base is cheap.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FactSet {
    by_pred: BTreeMap<Symbol, std::sync::Arc<BTreeSet<Atom>>>,
    len: usize,
}

impl FactSet {
    pub fn new() -> FactSet {
        FactSet::default()
    }

    /// Insert a ground atom; returns true when it was not already present.
    pub fn insert(&mut self, atom: Atom) -> bool {
        debug_assert!(atom.is_ground(), "FactSet holds ground atoms only");
        let set = self.by_pred.entry(atom.predicate.clone()).or_default();
        let added = std::sync::Arc::make_mut(set).insert(atom);
        if added {
            self.len += 1;
        }
        added
    }

    pub fn contains(&self, atom: &Atom) -> bool {
        self.by_pred
            .get(&atom.predicate)
            .is_some_and(|set| set.contains(atom))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn has_predicate(&self, predicate: &Symbol) -> bool {
        self.by_pred
            .get(predicate)
            .is_some_and(|set| !set.is_empty())
    }

    /// All atoms with the given predicate (the `query` operation).
    pub fn with_predicate(&self, predicate: &Symbol) -> impl Iterator<Item = &Atom> {
        self.by_pred
            .get(predicate)
            .into_iter()
            .flat_map(|set| set.iter())
    }

    pub fn iter(&self) -> impl Iterator<Item = &Atom> {
        self.by_pred.values().flat_map(|set| set.iter())
    }
}

impl FromIterator<Atom> for FactSet {
    fn from_iter<I: IntoIterator<Item = Atom>>(iter: I) -> Self {
        let mut set = FactSet::new();
        for atom in iter {
            set.insert(atom);
        }
        set
    }
}

/// The subset of a model using `predicate`, as an owned set.
pub fn query(model: &FactSet, predicate: &Symbol) -> BTreeSet<Atom> {
    model.with_predicate(predicate).cloned().collect()
}

/// Guards that turn non-terminating descriptions into errors instead of
/// divergence.
#[derive(Clone, Copy, Debug)]
pub struct EngineConfig {
    /// Maximum nesting depth of any derived term.
    pub max_term_depth: usize,
    /// Maximum number of distinct derived atoms.
    pub max_derivations: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            max_term_depth: 8,
            max_derivations: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EngineError {
    /// A derived term exceeded the depth cap: the description's function
    /// symbols are not finitely restricted.
    TermDepthExceeded { atom: String, max_depth: usize },
    /// The derivation cap tripped before reaching a fixpoint.
    IterationCapExceeded { max_derivations: usize },
    /// `distinct` was reached with an unbound argument (unsafe rule).
    DistinctNotGround { rule: String },
    /// A head variable was never bound (unsafe rule slipped past validation).
    UnboundHeadVariable { rule: String, variable: Symbol },
    /// An extra fact was not ground.
    NonGroundExtra { atom: String },
}

impl fmt::Display for EngineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineError::TermDepthExceeded { atom, max_depth } => {
                write!(f, "derived atom `{atom}` exceeds term depth cap {max_depth}")
            }
            EngineError::IterationCapExceeded { max_derivations } => {
                write!(f, "evaluation exceeded the cap of {max_derivations} derivations")
            }
            EngineError::DistinctNotGround { rule } => {
                write!(f, "`distinct` reached with unbound arguments in `{rule}`")
            }
            EngineError::UnboundHeadVariable { rule, variable } => {
                write!(f, "head variable `?{variable}` unbound when deriving `{rule}`")
            }
            EngineError::NonGroundExtra { atom } => {
                write!(f, "extra fact `{atom}` is not ground")
            }
        }
    }
}

impl std::error::Error for EngineError {}

enum Filter<'a> {
    Distinct(&'a Term, &'a Term),
    Negative(&'a Atom),
}

struct CompiledRule<'a> {
    rule: &'a Rule,
    positives: Vec<&'a Atom>,
    filters: Vec<Filter<'a>>,
}

impl<'a> CompiledRule<'a> {
    fn new(rule: &'a Rule) -> CompiledRule<'a> {
        let mut positives = Vec::new();
        let mut filters = Vec::new();
        for lit in &rule.body {
            match lit {
                Literal::Pos(atom) if atom.predicate.as_str() == DISTINCT => {
                    filters.push(Filter::Distinct(&atom.args[0], &atom.args[1]));
                }
                Literal::Pos(atom) => positives.push(atom),
                Literal::Neg(atom) => filters.push(Filter::Negative(atom)),
            }
        }
        CompiledRule {
            rule,
            positives,
            filters,
        }
    }
}

type Bindings = Vec<(Symbol, Term)>;

fn lookup<'b>(bindings: &'b Bindings, var: &Symbol) -> Option<&'b Term> {
    bindings.iter().find(|(v, _)| v == var).map(|(_, t)| t)
}

/// Match a rule pattern against one ground fact, extending `bindings`.
/// Returns the number of bindings pushed so the caller can backtrack.
fn match_term(pattern: &Term, fact: &Term, bindings: &mut Bindings) -> Option<usize> {
    match (pattern, fact) {
        (Term::Constant(a), Term::Constant(b)) => (a == b).then_some(0),
        (Term::Variable(v), t) => match lookup(bindings, v) {
            Some(bound) => (bound == t).then_some(0),
            None => {
                bindings.push((v.clone(), t.clone()));
                Some(1)
            }
        },
        (Term::Compound(f, fargs), Term::Compound(g, gargs)) => {
            if f != g || fargs.len() != gargs.len() {
                return None;
            }
            let mut pushed = 0;
            for (p, t) in fargs.iter().zip(gargs) {
                match match_term(p, t, bindings) {
                    Some(n) => pushed += n,
                    None => {
                        bindings.truncate(bindings.len() - pushed);
                        return None;
                    }
                }
            }
            Some(pushed)
        }
        _ => None,
    }
}

fn match_atom(pattern: &Atom, fact: &Atom, bindings: &mut Bindings) -> Option<usize> {
    if pattern.predicate != fact.predicate || pattern.args.len() != fact.args.len() {
        return None;
    }
    let mut pushed = 0;
    for (p, t) in pattern.args.iter().zip(&fact.args) {
        match match_term(p, t, bindings) {
            Some(n) => pushed += n,
            None => {
                bindings.truncate(bindings.len() - pushed);
                return None;
            }
        }
    }
    Some(pushed)
}

fn substitute(term: &Term, bindings: &Bindings) -> Result<Term, Symbol> {
    match term {
        Term::Constant(_) => Ok(term.clone()),
        Term::Variable(v) => lookup(bindings, v).cloned().ok_or_else(|| v.clone()),
        Term::Compound(f, args) => {
            let args = args
                .iter()
                .map(|a| substitute(a, bindings))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Term::Compound(f.clone(), args))
        }
    }
}

/// Check the rule's `distinct` and negative filters under the bindings.
/// Negatives are looked up in `db`; their predicates live in lower strata,
/// so their extent is final by the time these run.
fn check_filters(db: &FactSet, compiled: &CompiledRule<'_>, bindings: &Bindings) -> Result<bool, EngineError> {
    for filter in &compiled.filters {
        match filter {
            Filter::Distinct(left, right) => {
                let l = substitute(left, bindings).map_err(|_| EngineError::DistinctNotGround {
                    rule: compiled.rule.to_string(),
                })?;
                let r = substitute(right, bindings).map_err(|_| EngineError::DistinctNotGround {
                    rule: compiled.rule.to_string(),
                })?;
                if l == r {
                    return Ok(false);
                }
            }
            Filter::Negative(atom) => {
                let args = atom
                    .args
                    .iter()
                    .map(|t| substitute(t, bindings))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|variable| EngineError::UnboundHeadVariable {
                        rule: compiled.rule.to_string(),
                        variable,
                    })?;
                let ground = Atom {
                    predicate: atom.predicate.clone(),
                    args,
                };
                if db.contains(&ground) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn derive_head(
    db: &FactSet,
    config: &EngineConfig,
    compiled: &CompiledRule<'_>,
    bindings: &Bindings,
    out: &mut Vec<Atom>,
) -> Result<(), EngineError> {
    if !check_filters(db, compiled, bindings)? {
        return Ok(());
    }
    let args = compiled
        .rule
        .head
        .args
        .iter()
        .map(|t| substitute(t, bindings))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|variable| EngineError::UnboundHeadVariable {
            rule: compiled.rule.to_string(),
            variable,
        })?;
    let atom = Atom {
        predicate: compiled.rule.head.predicate.clone(),
        args,
    };
    if atom.args.iter().any(|t| t.depth() > config.max_term_depth) {
        return Err(EngineError::TermDepthExceeded {
            atom: atom.to_string(),
            max_depth: config.max_term_depth,
        });
    }
    out.push(atom);
    Ok(())
}

/// Backtracking join over the rule's positive literals. `delta`, when set,
/// restricts that one position to the latest delta so each pass derives
/// from at least one new fact.
fn join(
    db: &FactSet,
    config: &EngineConfig,
    compiled: &CompiledRule<'_>,
    delta: Option<(&FactSet, usize)>,
    index: usize,
    bindings: &mut Bindings,
    out: &mut Vec<Atom>,
) -> Result<(), EngineError> {
    if index == compiled.positives.len() {
        return derive_head(db, config, compiled, bindings, out);
    }
    let pattern = compiled.positives[index];
    let source = match delta {
        Some((delta_set, pos)) if pos == index => delta_set,
        _ => db,
    };
    for fact in source.with_predicate(&pattern.predicate) {
        if let Some(pushed) = match_atom(pattern, fact, bindings) {
            join(db, config, compiled, delta, index + 1, bindings, out)?;
            bindings.truncate(bindings.len() - pushed);
        }
    }
    Ok(())
}

fn apply_rule(
    db: &FactSet,
    config: &EngineConfig,
    compiled: &CompiledRule<'_>,
    delta: Option<(&FactSet, usize)>,
) -> Result<Vec<Atom>, EngineError> {
    let mut bindings = Vec::new();
    let mut out = Vec::new();
    join(db, config, compiled, delta, 0, &mut bindings, &mut out)?;
    Ok(out)
}

/// Compute the least model of `program.facts ∪ extra` under `program.rules`.
///
/// Preconditions: the program passes [`crate::gdl::validate_safety`] and
/// `strata` comes from [`crate::gdl::stratify`] on the same program. Extra
/// atoms must be ground; their predicates are treated as bottom-stratum.
pub fn minimal_model(
    program: &Program,
    strata: &Strata,
    extra: &FactSet,
    config: EngineConfig,
) -> Result<FactSet, EngineError> {
    let mut base = FactSet::new();
    for fact in &program.facts {
        base.insert(fact.clone());
    }
    minimal_model_from(program, strata, base, extra, config)
}

/// [`minimal_model`] seeded with a prebuilt copy of the program's facts.
/// Callers evaluating many states of one program build the base once and
/// clone it per call (clones share per-predicate storage).
pub fn minimal_model_from(
    program: &Program,
    strata: &Strata,
    mut db: FactSet,
    extra: &FactSet,
    config: EngineConfig,
) -> Result<FactSet, EngineError> {
    for atom in extra.iter() {
        if !atom.is_ground() {
            return Err(EngineError::NonGroundExtra {
                atom: atom.to_string(),
            });
        }
        db.insert(atom.clone());
    }

    let stratum_count = strata.len().max(1);
    let mut rules_by_stratum: Vec<Vec<CompiledRule<'_>>> = (0..stratum_count).map(|_| Vec::new()).collect();
    for rule in &program.rules {
        let s = strata.stratum_of(&rule.head.predicate);
        rules_by_stratum[s].push(CompiledRule::new(rule));
    }

    let mut derivations = 0usize;
    for stratum_rules in &rules_by_stratum {
        if stratum_rules.is_empty() {
            continue;
        }
        // First pass: naive over the whole database.
        let mut delta = FactSet::new();
        for compiled in stratum_rules {
            for atom in apply_rule(&db, &config, compiled, None)? {
                if !db.contains(&atom) {
                    delta.insert(atom);
                }
            }
        }
        // Semi-naive passes: each derivation must touch at least one fact
        // from the previous pass's delta.
        while !delta.is_empty() {
            derivations += delta.len();
            if derivations > config.max_derivations {
                return Err(EngineError::IterationCapExceeded {
                    max_derivations: config.max_derivations,
                });
            }
            for atom in delta.iter() {
                db.insert(atom.clone());
            }
            let mut next_delta = FactSet::new();
            for compiled in stratum_rules {
                for (pos, pattern) in compiled.positives.iter().enumerate() {
                    if !delta.has_predicate(&pattern.predicate) {
                        continue;
                    }
                    for atom in apply_rule(&db, &config, compiled, Some((&delta, pos)))? {
                        if !db.contains(&atom) && !delta.contains(&atom) {
                            next_delta.insert(atom);
                        }
                    }
                }
            }
            delta = next_delta;
        }
    }

    Ok(db)
}
