//! End-to-end runs: simulate traces, generate split datasets, and emit the
//! run manifests that make every output reproducible.
//!
//! A manifest records the command, its inputs, the seed and configuration,
//! the tool version, and a digest of the produced files. It deliberately
//! omits the output path and the `--jobs` width: neither influences the
//! bytes produced, so re-running a manifest anywhere at any parallelism
//! reproduces the digest.

use crate::dataset::{dedup_counted, split_triples, Dataset, DatasetError, GameData};
use crate::extract::{extract_trace, static_background, ExtractError, Target, Triple};
use crate::load::{LoadError, LoadedGame};
use crate::trace::{generate_traces, EpisodeConfig, Trace, TraceError};
use rayon::prelude::*;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Debug)]
pub enum PipelineError {
    Load(LoadError),
    Trace(TraceError),
    Extract(ExtractError),
    Dataset(DatasetError),
    Io { path: String, error: std::io::Error },
}

impl fmt::Display for PipelineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PipelineError::Load(e) => write!(f, "{e}"),
            PipelineError::Trace(e) => write!(f, "{e}"),
            PipelineError::Extract(e) => write!(f, "{e}"),
            PipelineError::Dataset(e) => write!(f, "{e}"),
            PipelineError::Io { path, error } => write!(f, "{path}: {error}"),
        }
    }
}

impl std::error::Error for PipelineError {}

impl From<LoadError> for PipelineError {
    fn from(e: LoadError) -> Self {
        PipelineError::Load(e)
    }
}

impl From<TraceError> for PipelineError {
    fn from(e: TraceError) -> Self {
        PipelineError::Trace(e)
    }
}

impl From<ExtractError> for PipelineError {
    fn from(e: ExtractError) -> Self {
        PipelineError::Extract(e)
    }
}

impl From<DatasetError> for PipelineError {
    fn from(e: DatasetError) -> Self {
        PipelineError::Dataset(e)
    }
}

fn io_err(path: &Path, error: std::io::Error) -> PipelineError {
    PipelineError::Io {
        path: path.display().to_string(),
        error,
    }
}

/// Run `f` on a dedicated thread pool of the requested width; `None` uses
/// the global pool. Output never depends on the width.
pub fn run_with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match jobs {
        None => f(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("thread pool")
            .install(f),
    }
}

/// Generate traces and extract one game's split dataset.
pub fn generate_game_dataset(
    loaded: &LoadedGame,
    cfg: &EpisodeConfig,
    jobs: Option<usize>,
) -> Result<Dataset, PipelineError> {
    let statics = static_background(&loaded.game)?;
    let (traces, extracted) = run_with_jobs(jobs, || -> Result<_, PipelineError> {
        let traces = generate_traces(&loaded.game, cfg)?;
        let extracted: Vec<Vec<Triple>> = traces
            .par_iter()
            .map(|trace| extract_trace(trace, &loaded.game, &loaded.signature, &statics))
            .collect::<Result<_, _>>()?;
        Ok((traces, extracted))
    })?;
    drop(traces);

    let mut per_target: BTreeMap<Target, Vec<Triple>> =
        Target::ALL.iter().map(|t| (*t, Vec::new())).collect();
    for batch in extracted {
        for triple in batch {
            per_target.get_mut(&triple.target).expect("all targets present").push(triple);
        }
    }
    let mut targets = BTreeMap::new();
    for (target, triples) in per_target {
        let counted = dedup_counted(triples);
        targets.insert(
            target,
            split_triples(counted, cfg.master_seed, &loaded.name, target),
        );
    }
    let game_data = GameData {
        gdl_text: loaded.gdl_text.clone(),
        sig_text: loaded.sig_text.clone(),
        targets,
    };
    Ok(Dataset {
        games: BTreeMap::from([(loaded.name.clone(), game_data)]),
    })
}

/// Render traces as a text dump: one record per episode, states and actions
/// as flattened atom lines.
pub fn traces_to_text(traces: &[Trace]) -> Result<String, PipelineError> {
    use crate::gdl::{Atom, Term};
    let mut out = String::new();
    for (i, trace) in traces.iter().enumerate() {
        out.push_str(&format!("#episode {i}\n"));
        for (j, step) in trace.steps.iter().enumerate() {
            out.push_str(&format!("#state {j}\n"));
            for fluent in &step.state.fluents {
                let atom = Atom::new("true", vec![fluent.clone()]);
                out.push_str(&crate::extract::flatten(&atom)?.to_string());
                out.push_str(".\n");
            }
            if let Some(action) = &step.action {
                out.push_str(&format!("#action {j}\n"));
                for (role, act) in &action.moves {
                    let atom = Atom::new("does", vec![Term::Constant(role.clone()), act.clone()]);
                    out.push_str(&crate::extract::flatten(&atom)?.to_string());
                    out.push_str(".\n");
                }
            }
        }
        out.push_str(&format!("#terminated {}\n", trace.terminated));
    }
    Ok(out)
}

/// Generate traces and write the dump atomically to `out`.
pub fn simulate_to_file(
    loaded: &LoadedGame,
    cfg: &EpisodeConfig,
    jobs: Option<usize>,
    out: &Path,
) -> Result<(), PipelineError> {
    let traces = run_with_jobs(jobs, || generate_traces(&loaded.game, cfg))?;
    let text = traces_to_text(&traces)?;
    write_atomic(out, text.as_bytes())
}

/// Write via a temp file in the destination directory plus rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), PipelineError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    if let Some(dir) = dir {
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    }
    let tmp = path.with_extension(format!("tmp-{}", std::process::id()));
    fs::write(&tmp, bytes).map_err(|e| io_err(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| io_err(path, e))
}

/// Reproducibility sidecar for one run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunManifest {
    pub entries: Vec<(String, String)>,
}

impl RunManifest {
    pub fn new(command: &str) -> RunManifest {
        let mut manifest = RunManifest::default();
        manifest.push("command", command);
        manifest.push("version", env!("CARGO_PKG_VERSION"));
        manifest
    }

    pub fn push(&mut self, key: &str, value: impl fmt::Display) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            out.push_str(&format!("{k} = {v}\n"));
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<(), PipelineError> {
        write_atomic(path, self.render().as_bytes())
    }
}

/// Hex sha-256 of one file.
pub fn digest_file(path: &Path) -> Result<String, PipelineError> {
    let bytes = fs::read(path).map_err(|e| io_err(path, e))?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    Ok(hex::encode(hasher.finalize()))
}

/// Hex sha-256 over a directory tree: relative paths in sorted order, each
/// hashed with its contents.
pub fn digest_tree(root: &Path) -> Result<String, PipelineError> {
    fn walk(dir: &Path, root: &Path, files: &mut Vec<PathBuf>) -> Result<(), PipelineError> {
        let entries = fs::read_dir(dir).map_err(|e| io_err(dir, e))?;
        for entry in entries {
            let entry = entry.map_err(|e| io_err(dir, e))?;
            let path = entry.path();
            if path.is_dir() {
                walk(&path, root, files)?;
            } else {
                files.push(path.strip_prefix(root).expect("under root").to_path_buf());
            }
        }
        Ok(())
    }
    let mut files = Vec::new();
    walk(root, root, &mut files)?;
    files.sort();
    let mut hasher = Sha256::new();
    for rel in files {
        let full = root.join(&rel);
        let bytes = fs::read(&full).map_err(|e| io_err(&full, e))?;
        let name = rel.to_string_lossy().replace('\\', "/");
        hasher.update((name.len() as u64).to_le_bytes());
        hasher.update(name.as_bytes());
        hasher.update((bytes.len() as u64).to_le_bytes());
        hasher.update(&bytes);
    }
    Ok(hex::encode(hasher.finalize()))
}
