//! Markov-game view of a game description: initial state, per-role legal
//! moves, deterministic transition, rewards, termination.
//!
//! A state is the set of ground fluent terms `f` with `true(f)` holding;
//! wrapping and unwrapping happens at the engine boundary. All operations
//! are pure; a [`Game`] is immutable and can be shared across threads.

use crate::engine::{minimal_model_from, EngineConfig, EngineError, FactSet};
use crate::gdl::{stratify, validate_safety, Atom, Program, SafetyError, Strata, StratifyError, Term};
use crate::symbol::Symbol;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// A set of ground fluents.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct GameState {
    pub fluents: BTreeSet<Term>,
}

impl GameState {
    pub fn new(fluents: BTreeSet<Term>) -> GameState {
        GameState { fluents }
    }

    pub fn from_terms<I: IntoIterator<Item = Term>>(terms: I) -> GameState {
        GameState {
            fluents: terms.into_iter().collect(),
        }
    }
}

impl fmt::Display for GameState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, t) in self.fluents.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, "}}")
    }
}

/// One ground action per role.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct JointAction {
    pub moves: BTreeMap<Symbol, Term>,
}

impl JointAction {
    pub fn single(role: &str, action: Term) -> JointAction {
        JointAction {
            moves: BTreeMap::from([(Symbol::new(role), action)]),
        }
    }
}

/// One reward symbol per role. Rewards are opaque constants; any numeric
/// reading belongs to reporting.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RewardAssignment {
    pub rewards: BTreeMap<Symbol, Symbol>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GameError {
    NoRoles,
    Unstratifiable(StratifyError),
    Unsafe(SafetyError),
    Engine(EngineError),
    /// A role has no legal move in a non-terminal state.
    DeadEnd { role: Symbol },
    IllegalAction { role: Symbol, action: String },
    MissingAction { role: Symbol },
    UnknownRole { role: Symbol },
    MissingReward { role: Symbol },
    DuplicateReward { role: Symbol },
    /// A `goal` value or `role` name was not a constant.
    NonConstantValue { atom: String },
}

impl fmt::Display for GameError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameError::NoRoles => write!(f, "game declares no roles"),
            GameError::Unstratifiable(e) => write!(f, "{e}"),
            GameError::Unsafe(e) => write!(f, "{e}"),
            GameError::Engine(e) => write!(f, "{e}"),
            GameError::DeadEnd { role } => {
                write!(f, "dead end: role `{role}` has no legal move in a non-terminal state")
            }
            GameError::IllegalAction { role, action } => {
                write!(f, "action `{action}` is not legal for role `{role}`")
            }
            GameError::MissingAction { role } => {
                write!(f, "joint action does not cover role `{role}`")
            }
            GameError::UnknownRole { role } => {
                write!(f, "joint action names unknown role `{role}`")
            }
            GameError::MissingReward { role } => {
                write!(f, "no goal atom for role `{role}`")
            }
            GameError::DuplicateReward { role } => {
                write!(f, "conflicting goal atoms for role `{role}`")
            }
            GameError::NonConstantValue { atom } => {
                write!(f, "`{atom}`: expected a constant argument")
            }
        }
    }
}

impl std::error::Error for GameError {}

impl From<EngineError> for GameError {
    fn from(e: EngineError) -> Self {
        GameError::Engine(e)
    }
}

const TRUE: &str = "true";
const DOES: &str = "does";
const INIT: &str = "init";
const NEXT: &str = "next";
const LEGAL: &str = "legal";
const GOAL: &str = "goal";
const TERMINAL: &str = "terminal";
const ROLE: &str = "role";

/// Distinguished predicates with special meaning to the game semantics.
pub const DISTINGUISHED: &[&str] = &[TRUE, DOES, INIT, NEXT, LEGAL, GOAL, TERMINAL, ROLE];

/// Everything the simulator needs about one state's model: legal moves per
/// role, goal atoms, and the terminal flag.
#[derive(Clone, Debug)]
pub struct StateInfo {
    pub legal: BTreeMap<Symbol, BTreeSet<Term>>,
    pub goals: Vec<Atom>,
    pub terminal: bool,
}

/// A validated, stratified program ready to simulate.
#[derive(Clone, Debug)]
pub struct Game {
    program: Program,
    strata: Strata,
    config: EngineConfig,
    /// The program's facts, prebuilt so every model call starts from a
    /// cheap clone.
    base: FactSet,
}

impl Game {
    /// Validate safety and stratification once; operations reuse the strata.
    pub fn new(program: Program) -> Result<Game, GameError> {
        Game::with_config(program, EngineConfig::default())
    }

    pub fn with_config(program: Program, config: EngineConfig) -> Result<Game, GameError> {
        if program.roles.is_empty() {
            return Err(GameError::NoRoles);
        }
        validate_safety(&program).map_err(GameError::Unsafe)?;
        let strata = stratify(&program).map_err(GameError::Unstratifiable)?;
        let base = program.facts.iter().cloned().collect();
        Ok(Game {
            program,
            strata,
            config,
            base,
        })
    }

    pub fn program(&self) -> &Program {
        &self.program
    }

    pub fn strata(&self) -> &Strata {
        &self.strata
    }

    /// Roles in declaration order.
    pub fn roles(&self) -> &[Symbol] {
        &self.program.roles
    }

    /// Model of the program plus `true(f)` for every fluent of `state`.
    pub fn state_model(&self, state: &GameState) -> Result<FactSet, GameError> {
        let extra: FactSet = state
            .fluents
            .iter()
            .map(|f| Atom::new(TRUE, vec![f.clone()]))
            .collect();
        Ok(minimal_model_from(
            &self.program,
            &self.strata,
            self.base.clone(),
            &extra,
            self.config,
        )?)
    }

    /// Model of the program plus the state's `true` atoms and the joint
    /// action's `does` atoms.
    pub fn transition_model(&self, state: &GameState, action: &JointAction) -> Result<FactSet, GameError> {
        let mut extra: FactSet = state
            .fluents
            .iter()
            .map(|f| Atom::new(TRUE, vec![f.clone()]))
            .collect();
        for (role, act) in &action.moves {
            extra.insert(Atom::new(
                DOES,
                vec![Term::Constant(role.clone()), act.clone()],
            ));
        }
        Ok(minimal_model_from(
            &self.program,
            &self.strata,
            self.base.clone(),
            &extra,
            self.config,
        )?)
    }

    /// Fluents holding initially: `{f | init(f)}` in the model of the bare
    /// program.
    pub fn initial_state(&self) -> Result<GameState, GameError> {
        let model = minimal_model_from(
            &self.program,
            &self.strata,
            self.base.clone(),
            &FactSet::new(),
            self.config,
        )?;
        let mut fluents = BTreeSet::new();
        for atom in model.with_predicate(&Symbol::new(INIT)) {
            if let [f] = atom.args.as_slice() {
                fluents.insert(f.clone());
            }
        }
        Ok(GameState { fluents })
    }

    /// Legal moves, goal atoms, and terminality from one state model.
    pub fn state_info(&self, state: &GameState) -> Result<StateInfo, GameError> {
        let model = self.state_model(state)?;
        Ok(self.info_from_model(&model))
    }

    pub fn info_from_model(&self, model: &FactSet) -> StateInfo {
        let mut legal: BTreeMap<Symbol, BTreeSet<Term>> = self
            .roles()
            .iter()
            .map(|r| (r.clone(), BTreeSet::new()))
            .collect();
        for atom in model.with_predicate(&Symbol::new(LEGAL)) {
            if let [Term::Constant(role), action] = atom.args.as_slice() {
                if let Some(set) = legal.get_mut(role) {
                    set.insert(action.clone());
                }
            }
        }
        let goals = model.with_predicate(&Symbol::new(GOAL)).cloned().collect();
        let terminal = model.contains(&Atom::nullary(TERMINAL));
        StateInfo {
            legal,
            goals,
            terminal,
        }
    }

    /// Per-role legal moves. Availability depends on the state only. A role
    /// with no legal move in a non-terminal state is a dead end.
    pub fn legal_moves(&self, state: &GameState) -> Result<BTreeMap<Symbol, BTreeSet<Term>>, GameError> {
        let info = self.state_info(state)?;
        if !info.terminal {
            for (role, moves) in &info.legal {
                if moves.is_empty() {
                    return Err(GameError::DeadEnd { role: role.clone() });
                }
            }
        }
        Ok(info.legal)
    }

    /// Deterministic transition. Every chosen action must be legal in
    /// `state`; legality is checked against the state alone, so one role's
    /// options never depend on what the others are about to do.
    pub fn step(&self, state: &GameState, action: &JointAction) -> Result<GameState, GameError> {
        let info = self.state_info(state)?;
        self.validate_action(&info, action)?;
        let model = self.transition_model(state, action)?;
        Ok(next_state_from_model(&model))
    }

    pub fn validate_action(&self, info: &StateInfo, action: &JointAction) -> Result<(), GameError> {
        for role in action.moves.keys() {
            if !self.roles().contains(role) {
                return Err(GameError::UnknownRole { role: role.clone() });
            }
        }
        for role in self.roles() {
            match action.moves.get(role) {
                None => return Err(GameError::MissingAction { role: role.clone() }),
                Some(act) => {
                    let legal = info.legal.get(role).is_some_and(|set| set.contains(act));
                    if !legal {
                        return Err(GameError::IllegalAction {
                            role: role.clone(),
                            action: act.to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Reward per role from the state's `goal` atoms; exactly one per role.
    pub fn rewards(&self, state: &GameState) -> Result<RewardAssignment, GameError> {
        let info = self.state_info(state)?;
        rewards_from_goals(self.roles(), &info.goals)
    }

    pub fn is_terminal(&self, state: &GameState) -> Result<bool, GameError> {
        Ok(self.state_info(state)?.terminal)
    }
}

/// Unwrap `next(f)` atoms into the successor state.
pub fn next_state_from_model(model: &FactSet) -> GameState {
    let mut fluents = BTreeSet::new();
    for atom in model.with_predicate(&Symbol::new(NEXT)) {
        if let [f] = atom.args.as_slice() {
            fluents.insert(f.clone());
        }
    }
    GameState { fluents }
}

pub fn rewards_from_goals(roles: &[Symbol], goals: &[Atom]) -> Result<RewardAssignment, GameError> {
    let mut rewards: BTreeMap<Symbol, Symbol> = BTreeMap::new();
    for atom in goals {
        match atom.args.as_slice() {
            [Term::Constant(role), Term::Constant(value)] => {
                if let Some(previous) = rewards.insert(role.clone(), value.clone()) {
                    if previous != *value {
                        return Err(GameError::DuplicateReward { role: role.clone() });
                    }
                }
            }
            _ => {
                return Err(GameError::NonConstantValue {
                    atom: atom.to_string(),
                })
            }
        }
    }
    for role in roles {
        if !rewards.contains_key(role) {
            return Err(GameError::MissingReward { role: role.clone() });
        }
    }
    Ok(RewardAssignment { rewards })
}
