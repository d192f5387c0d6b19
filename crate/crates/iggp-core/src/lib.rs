//! Interpret game descriptions, simulate them as deterministic Markov games,
//! extract (background, positive, negative) induction tasks from random-play
//! traces, and score predictors and candidate rule sets.

pub mod bundles;
pub mod dataset;
pub mod baselines;
pub mod engine;
pub mod evaluate;
pub mod extract;
pub mod game;
pub mod gdl;
pub mod load;
pub mod pipeline;
pub mod signature;
pub mod symbol;
pub mod trace;

pub use baselines::{distance, Method, Predictor};
pub use dataset::{read_dataset, write_dataset, CountedTriple, Dataset, DatasetError, GameData, TargetData};
pub use engine::{minimal_model, query, EngineConfig, EngineError, FactSet};
pub use evaluate::{balanced_accuracy, score_baseline, score_hypothesis, score_reference, EvalError, EvalReport, Hypothesis, TaskScore};
pub use extract::{FlatAtom, Target, Triple};
pub use game::{Game, GameError, GameState, JointAction, RewardAssignment};
pub use gdl::{
    dependency_graph, parse_program, stratify, validate_safety, Atom, DepGraph, Literal, Program,
    Rule, Strata, Term,
};
pub use pipeline::{generate_game_dataset, simulate_to_file, PipelineError, RunManifest};
pub use load::{load_game_files, load_game_from_texts, LoadError, LoadedGame};
pub use signature::{parse_signature, SignatureError, TypeSignature};
pub use symbol::Symbol;
pub use trace::{generate_traces, EpisodeConfig, Trace, TraceError};
