//! Command-line frontend: parse and check games, simulate seeded playouts,
//! generate induction-task datasets, and score baselines or candidate rule
//! sets. Game arguments accept either a file path or a bundled game name
//! (`rock_paper_scissors`, `fizz_buzz`, `minimal_decay`, `buttons_and_lights`).

use clap::{Parser, Subcommand};
use iggp_core::baselines::Method;
use iggp_core::bundles;
use iggp_core::dataset::{read_dataset, write_dataset, DatasetError};
use iggp_core::evaluate::{score_baseline, score_hypothesis, score_reference, EvalReport, Hypothesis};
use iggp_core::load::{load_game_files, load_game_from_texts, LoadError, LoadedGame};
use iggp_core::pipeline::{
    digest_file, digest_tree, generate_game_dataset, simulate_to_file, write_atomic, PipelineError,
    RunManifest,
};
use iggp_core::trace::{EpisodeConfig, DEFAULT_SEED};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "iggp", version, about = "Game-description toolkit: simulate games and generate induction tasks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a game description and report safety and stratification.
    Parse {
        /// Game file path or bundled game name.
        game: String,
    },
    /// Generate seeded random playout traces and dump them to a file.
    Simulate {
        /// Game file path or bundled game name.
        #[arg(long)]
        game: String,
        /// Type signature path (defaults to the bundle's signature).
        #[arg(long)]
        sig: Option<PathBuf>,
        /// Number of episodes.
        #[arg(long, default_value_t = 1000)]
        traces: usize,
        /// Maximum number of states per episode.
        #[arg(long = "max-steps", default_value_t = 100)]
        max_steps: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Output trace file.
        #[arg(long)]
        out: PathBuf,
        /// Parallel episode workers (output is identical for every value).
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Generate a split induction-task dataset from random playouts.
    Gen {
        /// Game file path or bundled game name.
        #[arg(long)]
        game: String,
        /// Type signature path (defaults to the bundle's signature).
        #[arg(long)]
        sig: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        traces: usize,
        #[arg(long = "max-steps", default_value_t = 100)]
        max_steps: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Output dataset directory.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Fit a baseline on each task's training split and score its test split.
    Baseline {
        /// Dataset directory produced by `gen`.
        #[arg(long)]
        dataset: PathBuf,
        /// One of: true, inertia, mean, knn1, knn5, knn<k>, knn (with --k).
        #[arg(long)]
        method: String,
        /// Neighbour count when the method is plain `knn`.
        #[arg(long)]
        k: Option<usize>,
        /// Report file (tab-separated).
        #[arg(long, default_value = "report.tsv")]
        out: PathBuf,
    },
    /// Score a hypothesis program against every task's test split.
    Eval {
        #[arg(long)]
        dataset: PathBuf,
        /// Hypothesis file over flattened predicates, same syntax as games.
        #[arg(long, conflicts_with = "reference")]
        hypothesis: Option<PathBuf>,
        /// Score each game's own flattened rules instead.
        #[arg(long, default_value_t = false)]
        reference: bool,
        #[arg(long, default_value = "report.tsv")]
        out: PathBuf,
    },
}

/// 0 on success, 1 for domain errors, 2 for I/O and usage errors.
fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}

struct CliError {
    message: String,
    code: u8,
}

fn domain(message: impl std::fmt::Display) -> CliError {
    CliError {
        message: message.to_string(),
        code: 1,
    }
}

fn io_error(message: impl std::fmt::Display) -> CliError {
    CliError {
        message: message.to_string(),
        code: 2,
    }
}

fn from_load(err: LoadError) -> CliError {
    match err {
        LoadError::Io { .. } => io_error(err),
        other => domain(other),
    }
}

fn from_pipeline(err: PipelineError) -> CliError {
    match err {
        PipelineError::Io { .. } => io_error(err),
        PipelineError::Load(e) => from_load(e),
        PipelineError::Dataset(DatasetError::Io { .. }) => io_error(err),
        other => domain(other),
    }
}

fn from_dataset(err: DatasetError) -> CliError {
    match err {
        DatasetError::Io { .. } => io_error(err),
        other => domain(other),
    }
}

/// Resolve a game argument: an existing path wins, then a bundle name.
fn resolve_game(game: &str, sig: Option<&Path>) -> Result<LoadedGame, CliError> {
    let path = Path::new(game);
    if path.is_file() {
        let sig = sig.ok_or_else(|| {
            io_error(format!("--sig is required when --game is a file path ({game})"))
        })?;
        return load_game_files(path, sig).map_err(from_load);
    }
    if let Some(bundle) = bundles::find_bundle(game) {
        if let Some(sig_path) = sig {
            let sig_text = std::fs::read_to_string(sig_path)
                .map_err(|e| io_error(format!("{}: {e}", sig_path.display())))?;
            return load_game_from_texts(bundle.name, bundle.gdl, &sig_text).map_err(from_load);
        }
        return bundles::load_bundle(game).map_err(from_load);
    }
    Err(io_error(format!(
        "`{game}` is neither a file nor a bundled game (bundles: {})",
        bundles::bundle_names().join(", ")
    )))
}

/// Simulate does not need a signature; fall back to a signature-free load
/// for plain game files.
fn resolve_game_lenient(game: &str, sig: Option<&Path>) -> Result<LoadedGame, CliError> {
    let path = Path::new(game);
    if path.is_file() && sig.is_none() {
        let gdl_text =
            std::fs::read_to_string(path).map_err(|e| io_error(format!("{game}: {e}")))?;
        let program = iggp_core::parse_program(&gdl_text).map_err(domain)?;
        let parsed = iggp_core::Game::new(program).map_err(domain)?;
        return Ok(LoadedGame {
            name: iggp_core::load::game_name_from_path(path),
            game: parsed,
            signature: iggp_core::TypeSignature::default(),
            gdl_text,
            sig_text: String::new(),
        });
    }
    resolve_game(game, sig)
}

fn manifest_sidecar(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest");
    out.with_file_name(name)
}

fn emit_report(
    report: &EvalReport,
    out: &Path,
    command: &str,
    extras: &[(&str, String)],
) -> Result<(), CliError> {
    print!("{}", report.to_table());
    write_atomic(out, report.to_tsv().as_bytes()).map_err(from_pipeline)?;
    let mut manifest = RunManifest::new(command);
    for (key, value) in extras {
        manifest.push(key, value);
    }
    manifest.push("digest", digest_file(out).map_err(from_pipeline)?);
    manifest.write(&manifest_sidecar(out)).map_err(from_pipeline)?;
    println!("report: {}", out.display());
    Ok(())
}

fn cmd_parse(game: &str) -> Result<(), CliError> {
    let path = Path::new(game);
    let (text, label) = if path.is_file() {
        (
            std::fs::read_to_string(path).map_err(|e| io_error(format!("{game}: {e}")))?,
            game.to_string(),
        )
    } else if let Some(bundle) = bundles::find_bundle(game) {
        (bundle.gdl.to_string(), format!("bundled {game}"))
    } else {
        return Err(io_error(format!("`{game}`: no such file or bundled game")));
    };
    let program = iggp_core::parse_program(&text).map_err(domain)?;
    println!(
        "{label}: {} facts, {} rules, roles: [{}]",
        program.facts.len(),
        program.rules.len(),
        program
            .roles
            .iter()
            .map(|r| r.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    );
    iggp_core::validate_safety(&program).map_err(domain)?;
    println!("safety: ok");
    let strata = iggp_core::stratify(&program).map_err(domain)?;
    println!("stratified: yes, strata: {}", strata.len());
    Ok(())
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Parse { game } => cmd_parse(&game),
        Command::Simulate {
            game,
            sig,
            traces,
            max_steps,
            seed,
            out,
            jobs,
        } => {
            let loaded = resolve_game_lenient(&game, sig.as_deref())?;
            let cfg = EpisodeConfig {
                max_traces: traces,
                max_time: max_steps,
                master_seed: seed,
            };
            simulate_to_file(&loaded, &cfg, jobs, &out).map_err(from_pipeline)?;
            let mut manifest = RunManifest::new("simulate");
            manifest.push("game", &game);
            manifest.push("traces", traces);
            manifest.push("max_steps", max_steps);
            manifest.push("seed", seed);
            manifest.push("digest", digest_file(&out).map_err(from_pipeline)?);
            let manifest_path = manifest_sidecar(&out);
            manifest.write(&manifest_path).map_err(from_pipeline)?;
            println!("wrote {} episodes to {}", traces, out.display());
            println!("manifest: {}", manifest_path.display());
            Ok(())
        }
        Command::Gen {
            game,
            sig,
            traces,
            max_steps,
            seed,
            out,
            jobs,
        } => {
            let loaded = resolve_game(&game, sig.as_deref())?;
            let cfg = EpisodeConfig {
                max_traces: traces,
                max_time: max_steps,
                master_seed: seed,
            };
            let dataset = generate_game_dataset(&loaded, &cfg, jobs).map_err(from_pipeline)?;
            write_dataset(&dataset, &out).map_err(from_dataset)?;
            let game_dir = out.join(&loaded.name);
            let mut manifest = RunManifest::new("gen");
            manifest.push("game", &game);
            if let Some(sig) = &sig {
                manifest.push("sig", sig.display());
            }
            manifest.push("traces", traces);
            manifest.push("max_steps", max_steps);
            manifest.push("seed", seed);
            manifest.push("digest", digest_tree(&game_dir).map_err(from_pipeline)?);
            let manifest_path = out.join(format!("{}.manifest", loaded.name));
            manifest.write(&manifest_path).map_err(from_pipeline)?;
            for data in dataset.games.values() {
                for (target, splits) in &data.targets {
                    println!(
                        "{target}: {} train / {} validate / {} test{}",
                        splits.train.len(),
                        splits.validate.len(),
                        splits.test.len(),
                        if splits.underfilled() {
                            " (underfilled: all in train)"
                        } else {
                            ""
                        },
                    );
                }
            }
            println!("dataset: {}", game_dir.display());
            println!("manifest: {}", manifest_path.display());
            Ok(())
        }
        Command::Baseline {
            dataset,
            method,
            k,
            out,
        } => {
            let method = match (Method::parse(&method), k) {
                (Ok(Method::Knn(_)), Some(k)) if k >= 1 => Method::Knn(k),
                (Ok(m), _) => m,
                (Err(_), Some(k)) if method == "knn" && k >= 1 => Method::Knn(k),
                (Err(e), _) => return Err(domain(e)),
            };
            let data = read_dataset(&dataset).map_err(from_dataset)?;
            let report = score_baseline(&data, method).map_err(domain)?;
            emit_report(
                &report,
                &out,
                "baseline",
                &[
                    ("dataset_digest", digest_tree(&dataset).map_err(from_pipeline)?),
                    ("method", method.to_string()),
                ],
            )
        }
        Command::Eval {
            dataset,
            hypothesis,
            reference,
            out,
        } => {
            let data = read_dataset(&dataset).map_err(from_dataset)?;
            let (report, source) = if reference {
                (score_reference(&data).map_err(domain)?, "reference".to_string())
            } else {
                let path = hypothesis
                    .ok_or_else(|| io_error("eval needs --hypothesis <file> or --reference"))?;
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| io_error(format!("{}: {e}", path.display())))?;
                let hyp = Hypothesis::parse(&text).map_err(domain)?;
                let label = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().to_string())
                    .unwrap_or_else(|| "hypothesis".to_string());
                (
                    score_hypothesis(&data, &hyp, &label).map_err(domain)?,
                    path.display().to_string(),
                )
            };
            emit_report(
                &report,
                &out,
                "eval",
                &[
                    ("dataset_digest", digest_tree(&dataset).map_err(from_pipeline)?),
                    ("hypothesis", source),
                ],
            )
        }
    }
}
