//! Seeded random-playout trace generation.
//!
//! Every episode draws from its own random stream, derived by hashing the
//! master seed with the episode index, so generation is reproducible
//! byte-for-byte no matter how episodes are scheduled across threads.

use crate::game::{Game, GameError, GameState, JointAction};
use crate::symbol::Symbol;
use crate::gdl::Term;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EpisodeConfig {
    /// Number of traces to generate.
    pub max_traces: usize,
    /// Maximum number of states in one trace.
    pub max_time: usize,
    pub master_seed: u64,
}

impl Default for EpisodeConfig {
    fn default() -> Self {
        EpisodeConfig {
            max_traces: 1000,
            max_time: 100,
            master_seed: DEFAULT_SEED,
        }
    }
}

/// Fixed default seed so plain runs reproduce; randomized runs must ask for a
/// different seed explicitly.
pub const DEFAULT_SEED: u64 = 0;

/// One step of a trace. The final step of every trace has no action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub state: GameState,
    pub action: Option<JointAction>,
}

/// A playout: consecutive states under the game's transition function,
/// stopping at the first terminal state or at the state cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
    pub terminated: bool,
}

impl Trace {
    pub fn states(&self) -> impl Iterator<Item = &GameState> {
        self.steps.iter().map(|s| &s.state)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceError {
    /// A role ran out of legal moves mid-episode.
    DeadEnd { episode: usize, step: usize, role: Symbol },
    Game { episode: usize, step: usize, error: GameError },
}

impl fmt::Display for TraceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceError::DeadEnd { episode, step, role } => {
                write!(f, "episode {episode}, step {step}: role `{role}` has no legal move")
            }
            TraceError::Game { episode, step, error } => {
                write!(f, "episode {episode}, step {step}: {error}")
            }
        }
    }
}

impl std::error::Error for TraceError {}

/// Per-episode stream: a keyed hash of the master seed and the episode
/// index, so parallel generation order cannot influence the draws.
pub fn episode_rng(master_seed: u64, episode: u64) -> ChaCha8Rng {
    derived_rng(master_seed, &[b"episode", &episode.to_le_bytes()])
}

/// Derive a named random stream from the master seed.
pub fn derived_rng(master_seed: u64, parts: &[&[u8]]) -> ChaCha8Rng {
    let mut hasher = Sha256::new();
    hasher.update(master_seed.to_le_bytes());
    for part in parts {
        hasher.update((part.len() as u64).to_le_bytes());
        hasher.update(part);
    }
    let digest = hasher.finalize();
    let mut seed = [0u8; 32];
    seed.copy_from_slice(&digest);
    ChaCha8Rng::from_seed(seed)
}

/// Pick one legal action per role, each uniformly at random over the
/// canonically sorted action list. Roles are visited in sorted order.
pub fn choose_joint_action<R: Rng>(
    rng: &mut R,
    legal: &BTreeMap<Symbol, BTreeSet<Term>>,
) -> Option<JointAction> {
    let mut moves = BTreeMap::new();
    for (role, actions) in legal {
        if actions.is_empty() {
            return None;
        }
        let index = rng.gen_range(0..actions.len());
        let action = actions.iter().nth(index).expect("index in range");
        moves.insert(role.clone(), action.clone());
    }
    Some(JointAction { moves })
}

fn run_episode(game: &Game, cfg: &EpisodeConfig, episode: usize) -> Result<Trace, TraceError> {
    let mut rng = episode_rng(cfg.master_seed, episode as u64);
    let mut state = game.initial_state().map_err(|error| TraceError::Game {
        episode,
        step: 0,
        error,
    })?;
    let mut steps: Vec<TraceStep> = Vec::new();
    loop {
        let info = game.state_info(&state).map_err(|error| TraceError::Game {
            episode,
            step: steps.len(),
            error,
        })?;
        let at_cap = steps.len() + 1 >= cfg.max_time;
        if info.terminal || at_cap {
            steps.push(TraceStep {
                state,
                action: None,
            });
            return Ok(Trace {
                steps,
                terminated: info.terminal,
            });
        }
        if let Some((role, _)) = info.legal.iter().find(|(_, moves)| moves.is_empty()) {
            return Err(TraceError::DeadEnd {
                episode,
                step: steps.len(),
                role: role.clone(),
            });
        }
        let action = choose_joint_action(&mut rng, &info.legal).expect("checked nonempty");
        let model = game
            .transition_model(&state, &action)
            .map_err(|error| TraceError::Game {
                episode,
                step: steps.len(),
                error,
            })?;
        let next = crate::game::next_state_from_model(&model);
        steps.push(TraceStep {
            state,
            action: Some(action),
        });
        state = next;
    }
}

/// Generate `cfg.max_traces` independent episodes, in episode order.
pub fn generate_traces(game: &Game, cfg: &EpisodeConfig) -> Result<Vec<Trace>, TraceError> {
    (0..cfg.max_traces)
        .into_par_iter()
        .map(|episode| run_episode(game, cfg, episode))
        .collect()
}
