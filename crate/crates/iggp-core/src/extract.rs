//! Turn traces into flattened, function-free (background, positive,
//! negative) induction triples for the targets `legal`, `goal`, `terminal`,
//! and `next`.
//!
//! Flattening rewrites `wrapper(f(t1..tn))` into the fused predicate
//! `wrapper_f(t1..tn)`, e.g. `true(count(9))` becomes `true_count(9)` and
//! `next(score(p1,1))` becomes `next_score(p1,1)`; atoms that are already
//! function-free pass through unchanged. Negative examples come from the
//! closed-world assumption: every well-typed ground atom of the target
//! family not observed positive is negative.

use crate::engine::FactSet;
use crate::game::{Game, GameError, GameState, JointAction, DISTINGUISHED};
use crate::gdl::{Atom, Term};
use crate::signature::{SignatureError, TypeSignature, BOOL};
use crate::symbol::Symbol;
use crate::trace::Trace;
use std::collections::BTreeSet;
use std::fmt;

/// A function-free ground atom.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FlatAtom {
    pub predicate: Symbol,
    pub args: Vec<Symbol>,
}

impl FlatAtom {
    pub fn new(predicate: &str, args: &[&str]) -> FlatAtom {
        FlatAtom {
            predicate: Symbol::new(predicate),
            args: args.iter().map(|a| Symbol::new(a)).collect(),
        }
    }

    /// Parse `pred(a,b)` or bare `pred`, with an optional trailing period.
    pub fn parse(text: &str) -> Option<FlatAtom> {
        let text = text.trim().strip_suffix('.').unwrap_or(text.trim()).trim();
        if text.is_empty() {
            return None;
        }
        match text.split_once('(') {
            None => {
                if text.contains(|c: char| c.is_whitespace() || c == ')' || c == ',') {
                    None
                } else {
                    Some(FlatAtom {
                        predicate: Symbol::new(text),
                        args: Vec::new(),
                    })
                }
            }
            Some((name, rest)) => {
                let inner = rest.strip_suffix(')')?;
                let name = name.trim();
                if name.is_empty() || name.contains(char::is_whitespace) {
                    return None;
                }
                let mut args = Vec::new();
                for piece in inner.split(',') {
                    let piece = piece.trim();
                    if piece.is_empty() || piece.contains(['(', ')']) || piece.contains(char::is_whitespace) {
                        return None;
                    }
                    args.push(Symbol::new(piece));
                }
                if args.is_empty() {
                    return None;
                }
                Some(FlatAtom {
                    predicate: Symbol::new(name),
                    args,
                })
            }
        }
    }

    /// The corresponding ground atom over the flat predicate.
    pub fn to_atom(&self) -> Atom {
        Atom {
            predicate: self.predicate.clone(),
            args: self.args.iter().map(|a| Term::Constant(a.clone())).collect(),
        }
    }
}

impl fmt::Display for FlatAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.predicate)?;
        if !self.args.is_empty() {
            write!(f, "(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// The four learning targets extracted from every trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Target {
    Legal,
    Goal,
    Terminal,
    Next,
}

impl Target {
    pub const ALL: [Target; 4] = [Target::Legal, Target::Goal, Target::Terminal, Target::Next];

    pub fn as_str(self) -> &'static str {
        match self {
            Target::Legal => "legal",
            Target::Goal => "goal",
            Target::Terminal => "terminal",
            Target::Next => "next",
        }
    }

    pub fn predicate(self) -> Symbol {
        Symbol::new(self.as_str())
    }

    pub fn parse(text: &str) -> Option<Target> {
        Target::ALL.into_iter().find(|t| t.as_str() == text)
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One induction instance. The positive and negative examples are disjoint
/// and together cover the flattened target family; the background never
/// mentions it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Triple {
    pub target: Target,
    pub background: BTreeSet<FlatAtom>,
    pub positive: BTreeSet<FlatAtom>,
    pub negative: BTreeSet<FlatAtom>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtractError {
    /// An atom nests deeper than one functor beneath the wrapper, or has
    /// more than one compound argument.
    NestingTooDeep { atom: String },
    /// A fused name would be ambiguous or shadow a declared predicate.
    NameCollision { name: Symbol },
    Signature(SignatureError),
    Game(GameError),
    /// The model derives a target atom the signature cannot generate.
    TargetOutsideSignature { atom: String, detail: String },
    /// A rule variable sits where the flat language splits per functor.
    VariableWrapper { atom: String, position: usize },
    /// The flattened program is not itself a valid program.
    Unflattenable { detail: String },
}

impl fmt::Display for ExtractError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtractError::NestingTooDeep { atom } => {
                write!(f, "cannot flatten `{atom}`: nesting deeper than one functor")
            }
            ExtractError::NameCollision { name } => {
                write!(f, "flattened name `{name}` collides with another predicate")
            }
            ExtractError::Signature(e) => write!(f, "{e}"),
            ExtractError::Game(e) => write!(f, "{e}"),
            ExtractError::TargetOutsideSignature { atom, detail } => {
                write!(f, "model atom `{atom}` is outside the signature's ground set: {detail}")
            }
            ExtractError::VariableWrapper { atom, position } => {
                write!(
                    f,
                    "cannot flatten `{atom}`: the variable at position {position} ranges over compound terms"
                )
            }
            ExtractError::Unflattenable { detail } => {
                write!(f, "program cannot be flattened: {detail}")
            }
        }
    }
}

impl std::error::Error for ExtractError {}

impl From<SignatureError> for ExtractError {
    fn from(e: SignatureError) -> Self {
        ExtractError::Signature(e)
    }
}

impl From<GameError> for ExtractError {
    fn from(e: GameError) -> Self {
        ExtractError::Game(e)
    }
}

/// Flatten one ground atom. At most one argument may be a compound, and its
/// own arguments must be constants.
pub fn flatten(atom: &Atom) -> Result<FlatAtom, ExtractError> {
    let mut fused: Option<(usize, &Symbol)> = None;
    for (i, arg) in atom.args.iter().enumerate() {
        if let Term::Compound(functor, inner) = arg {
            if fused.is_some() || inner.iter().any(|t| !matches!(t, Term::Constant(_))) {
                return Err(ExtractError::NestingTooDeep {
                    atom: atom.to_string(),
                });
            }
            fused = Some((i, functor));
        }
    }
    let constant = |t: &Term| match t {
        Term::Constant(c) => Ok(c.clone()),
        _ => Err(ExtractError::NestingTooDeep {
            atom: atom.to_string(),
        }),
    };
    match fused {
        None => Ok(FlatAtom {
            predicate: atom.predicate.clone(),
            args: atom.args.iter().map(constant).collect::<Result<_, _>>()?,
        }),
        Some((pos, functor)) => {
            let mut args = Vec::new();
            for (i, arg) in atom.args.iter().enumerate() {
                if i == pos {
                    let inner = match arg {
                        Term::Compound(_, inner) => inner,
                        _ => unreachable!(),
                    };
                    for t in inner {
                        args.push(constant(t)?);
                    }
                } else {
                    args.push(constant(arg)?);
                }
            }
            Ok(FlatAtom {
                predicate: Symbol::new(&format!("{}_{}", atom.predicate, functor)),
                args,
            })
        }
    }
}

/// Check that flattening is injective over the signature: every fused name a
/// predicate/functor pair can produce is distinct from every declared
/// predicate and from every other feasible fusion.
pub fn verify_flattening(sig: &TypeSignature) -> Result<(), ExtractError> {
    let mut origins: std::collections::BTreeMap<Symbol, (Symbol, Option<Symbol>)> =
        std::collections::BTreeMap::new();
    for (pred, _) in sig.predicates() {
        origins.insert(pred.clone(), (pred.clone(), None));
    }
    for (pred, decl) in sig.predicates() {
        for (functor, fdecl) in sig.declarations() {
            if fdecl.args.is_empty() || fdecl.result.as_str() == BOOL {
                continue;
            }
            let feasible = decl
                .args
                .iter()
                .filter(|arg_ty| sig.subtype(&fdecl.result, arg_ty).unwrap_or(false))
                .count();
            if feasible == 0 {
                continue;
            }
            let fused = Symbol::new(&format!("{pred}_{functor}"));
            let origin = (pred.clone(), Some(functor.clone()));
            if feasible > 1 {
                return Err(ExtractError::NameCollision { name: fused });
            }
            if let Some(existing) = origins.get(&fused) {
                if *existing != origin {
                    return Err(ExtractError::NameCollision { name: fused });
                }
            }
            origins.insert(fused, origin);
        }
    }
    Ok(())
}

/// Flatten an atom that may still contain variables (rule heads and bodies).
/// A variable standing where the signature admits compound terms cannot be
/// flattened, because the flat language splits that predicate per functor.
fn flatten_pattern(atom: &Atom, sig: &TypeSignature) -> Result<Atom, ExtractError> {
    if atom.predicate.as_str() == crate::gdl::DISTINCT {
        if atom.args.iter().any(|t| matches!(t, Term::Compound(..))) {
            return Err(ExtractError::NestingTooDeep {
                atom: atom.to_string(),
            });
        }
        return Ok(atom.clone());
    }
    let decl = sig.declaration(&atom.predicate);
    let mut fused: Option<(usize, &Symbol, &Vec<Term>)> = None;
    for (i, arg) in atom.args.iter().enumerate() {
        match arg {
            Term::Compound(functor, inner) => {
                if fused.is_some() || inner.iter().any(|t| matches!(t, Term::Compound(..))) {
                    return Err(ExtractError::NestingTooDeep {
                        atom: atom.to_string(),
                    });
                }
                fused = Some((i, functor, inner));
            }
            Term::Variable(_) => {
                let admits = decl
                    .and_then(|d| d.args.get(i))
                    .is_some_and(|ty| sig.type_admits_compounds(ty));
                if admits {
                    return Err(ExtractError::VariableWrapper {
                        atom: atom.to_string(),
                        position: i + 1,
                    });
                }
            }
            Term::Constant(_) => {}
        }
    }
    match fused {
        None => Ok(atom.clone()),
        Some((pos, functor, inner)) => {
            let mut args = Vec::new();
            for (i, arg) in atom.args.iter().enumerate() {
                if i == pos {
                    args.extend(inner.iter().cloned());
                } else {
                    args.push(arg.clone());
                }
            }
            Ok(Atom {
                predicate: Symbol::new(&format!("{}_{}", atom.predicate, functor)),
                args,
            })
        }
    }
}

/// Rewrite a whole program into the flattened, function-free language: facts
/// and rule atoms fuse wrapper predicates with their argument functors. The
/// result plays the reference-hypothesis role when scoring datasets the
/// program itself generated.
pub fn flatten_program(program: &crate::gdl::Program, sig: &TypeSignature) -> Result<crate::gdl::Program, ExtractError> {
    let mut text = String::new();
    for fact in &program.facts {
        let flat = flatten(fact)?;
        text.push_str(&flat_to_sexpr(&flat.to_atom()));
        text.push('\n');
    }
    for rule in &program.rules {
        text.push_str("(<= ");
        text.push_str(&flat_to_sexpr(&flatten_pattern(&rule.head, sig)?));
        for lit in &rule.body {
            text.push(' ');
            match lit {
                crate::gdl::Literal::Pos(a) => text.push_str(&flat_to_sexpr(&flatten_pattern(a, sig)?)),
                crate::gdl::Literal::Neg(a) => {
                    text.push_str("(not ");
                    text.push_str(&flat_to_sexpr(&flatten_pattern(a, sig)?));
                    text.push(')');
                }
            }
        }
        text.push_str(")\n");
    }
    crate::gdl::parse_program(&text).map_err(|e| ExtractError::Unflattenable {
        detail: e.to_string(),
    })
}

fn flat_to_sexpr(atom: &Atom) -> String {
    if atom.args.is_empty() {
        return atom.predicate.to_string();
    }
    let mut s = format!("({}", atom.predicate);
    for arg in &atom.args {
        match arg {
            Term::Constant(c) => {
                s.push(' ');
                s.push_str(c.as_str());
            }
            Term::Variable(v) => {
                s.push_str(" ?");
                s.push_str(v.as_str());
            }
            Term::Compound(..) => unreachable!("flattened atoms are function-free"),
        }
    }
    s.push(')');
    s
}

/// The game's static background: the model of the bare program (no `true`,
/// no `does`), minus the distinguished predicates other than `role`,
/// flattened. These atoms hold in every state.
pub fn static_background(game: &Game) -> Result<BTreeSet<FlatAtom>, ExtractError> {
    let model = game.state_model(&GameState::default())?;
    let excluded: BTreeSet<&str> = DISTINGUISHED
        .iter()
        .copied()
        .filter(|p| *p != "role")
        .collect();
    let mut out = BTreeSet::new();
    for atom in model.iter() {
        if excluded.contains(atom.predicate.as_str()) {
            continue;
        }
        out.insert(flatten(atom)?);
    }
    Ok(out)
}

/// The flattened ground set of a target family.
pub fn flat_ground(sig: &TypeSignature, target: Target) -> Result<BTreeSet<FlatAtom>, ExtractError> {
    sig.ground_atoms(&target.predicate())?
        .iter()
        .map(flatten)
        .collect()
}

fn wrap_state(state: &GameState) -> impl Iterator<Item = Atom> + '_ {
    state
        .fluents
        .iter()
        .map(|f| Atom::new("true", vec![f.clone()]))
}

fn closed_world(
    target: Target,
    positive: BTreeSet<FlatAtom>,
    ground: &BTreeSet<FlatAtom>,
    background: BTreeSet<FlatAtom>,
) -> Result<Triple, ExtractError> {
    if let Some(stray) = positive.difference(ground).next() {
        return Err(ExtractError::TargetOutsideSignature {
            atom: stray.to_string(),
            detail: format!("not among the {} ground atoms of `{target}`", ground.len()),
        });
    }
    let negative = ground.difference(&positive).cloned().collect();
    Ok(Triple {
        target,
        background,
        positive,
        negative,
    })
}

/// Single-state triple for `legal`, `goal`, or `terminal`: positives are the
/// target atoms of the state's model, negatives the rest of the ground set,
/// and the background is the statics plus the state's `true` atoms.
pub fn triple_single(
    state: &GameState,
    model: &FactSet,
    statics: &BTreeSet<FlatAtom>,
    target: Target,
    sig: &TypeSignature,
) -> Result<Triple, ExtractError> {
    let positive: BTreeSet<FlatAtom> = model
        .with_predicate(&target.predicate())
        .map(flatten)
        .collect::<Result<_, _>>()?;
    let ground = flat_ground(sig, target)?;
    let mut background = statics.clone();
    for atom in wrap_state(state) {
        background.insert(flatten(&atom)?);
    }
    closed_world(target, positive, &ground, background)
}

/// Transition triple for `next`: the earlier state's `true` atoms and the
/// joint action's `does` atoms join the background; the later state's
/// fluents, rewrapped as `next`, are the positives.
pub fn triple_transition(
    state: &GameState,
    action: &JointAction,
    next_state: &GameState,
    statics: &BTreeSet<FlatAtom>,
    sig: &TypeSignature,
) -> Result<Triple, ExtractError> {
    let mut background = statics.clone();
    for atom in wrap_state(state) {
        background.insert(flatten(&atom)?);
    }
    for (role, act) in &action.moves {
        let does = Atom::new("does", vec![Term::Constant(role.clone()), act.clone()]);
        background.insert(flatten(&does)?);
    }
    let positive: BTreeSet<FlatAtom> = next_state
        .fluents
        .iter()
        .map(|f| flatten(&Atom::new("next", vec![f.clone()])))
        .collect::<Result<_, _>>()?;
    let ground = flat_ground(sig, Target::Next)?;
    closed_world(Target::Next, positive, &ground, background)
}

/// Extract every triple a trace yields: one `legal`, `goal`, and `terminal`
/// triple per state, and one `next` triple per consecutive state pair.
pub fn extract_trace(
    trace: &Trace,
    game: &Game,
    sig: &TypeSignature,
    statics: &BTreeSet<FlatAtom>,
) -> Result<Vec<Triple>, ExtractError> {
    let mut out = Vec::new();
    let models: Vec<FactSet> = trace
        .steps
        .iter()
        .map(|step| game.state_model(&step.state))
        .collect::<Result<_, _>>()?;
    for target in [Target::Legal, Target::Goal, Target::Terminal] {
        for (step, model) in trace.steps.iter().zip(&models) {
            out.push(triple_single(&step.state, model, statics, target, sig)?);
        }
    }
    for pair in trace.steps.windows(2) {
        let action = pair[0]
            .action
            .as_ref()
            .expect("non-final trace steps carry actions");
        out.push(triple_transition(
            &pair[0].state,
            action,
            &pair[1].state,
            statics,
            sig,
        )?);
    }
    Ok(out)
}
