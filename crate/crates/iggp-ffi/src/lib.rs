//! C ABI over the game toolkit: load games (from files or the built-in
//! bundle set), simulate seeded playouts, generate induction-task datasets,
//! and score baselines or hypothesis programs.
//!
//! Conventions:
//! - Games are opaque [`IggpGame`] handles; free them with
//!   [`iggp_game_free`].
//! - Fallible calls return an [`IggpStatus`]; on failure,
//!   [`iggp_last_error`] copies a description of the most recent error on
//!   the calling thread.
//! - All strings are NUL-terminated UTF-8.
//!
//! The generated header lives at `include/iggp.h`.

use iggp_core::baselines::Method;
use iggp_core::dataset::{read_dataset, write_dataset, DatasetError};
use iggp_core::evaluate::{score_baseline, score_hypothesis, score_reference, Hypothesis};
use iggp_core::load::{load_game_files, LoadError, LoadedGame};
use iggp_core::pipeline::{
    generate_game_dataset, simulate_to_file, write_atomic, PipelineError,
};
use iggp_core::trace::EpisodeConfig;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::Path;

/// Opaque game handle.
pub struct IggpGame {
    inner: LoadedGame,
}

/// Result of a fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum IggpStatus {
    /// The call succeeded.
    IggpOk = 0,
    /// The inputs were readable but semantically invalid.
    IggpDomainError = 1,
    /// A file could not be read or written.
    IggpIoError = 2,
    /// A null pointer or malformed string argument.
    IggpInvalidArgument = 3,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl std::fmt::Display) {
    let text = CString::new(message.to_string().replace('\0', " "))
        .unwrap_or_else(|_| CString::new("error").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn load_status(err: &LoadError) -> IggpStatus {
    match err {
        LoadError::Io { .. } => IggpStatus::IggpIoError,
        _ => IggpStatus::IggpDomainError,
    }
}

fn pipeline_status(err: &PipelineError) -> IggpStatus {
    match err {
        PipelineError::Io { .. } => IggpStatus::IggpIoError,
        PipelineError::Load(e) => load_status(e),
        PipelineError::Dataset(DatasetError::Io { .. }) => IggpStatus::IggpIoError,
        _ => IggpStatus::IggpDomainError,
    }
}

fn dataset_status(err: &DatasetError) -> IggpStatus {
    match err {
        DatasetError::Io { .. } => IggpStatus::IggpIoError,
        _ => IggpStatus::IggpDomainError,
    }
}

/// # Safety
/// `ptr` must be NUL-terminated and valid for reads, or null.
unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, IggpStatus> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(IggpStatus::IggpInvalidArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        IggpStatus::IggpInvalidArgument
    })
}

unsafe fn game_ref<'a>(game: *const IggpGame) -> Result<&'a LoadedGame, IggpStatus> {
    if game.is_null() {
        set_error("null game handle");
        return Err(IggpStatus::IggpInvalidArgument);
    }
    Ok(&(*game).inner)
}

fn into_handle(loaded: LoadedGame) -> *mut IggpGame {
    Box::into_raw(Box::new(IggpGame { inner: loaded }))
}

/// Version string of the library; static storage, do not free.
#[no_mangle]
pub extern "C" fn iggp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Length in bytes (excluding NUL) of the last error message on this
/// thread; 0 when there is none.
#[no_mangle]
pub extern "C" fn iggp_last_error_length() -> usize {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map(|s| s.as_bytes().len())
            .unwrap_or(0)
    })
}

/// Copy the last error message (NUL-terminated, possibly truncated) into
/// `buf`. Returns the number of bytes written excluding the NUL, or 0 when
/// there is no pending error or no room.
///
/// # Safety
/// `buf` must point to at least `cap` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn iggp_last_error(buf: *mut c_char, cap: usize) -> usize {
    if buf.is_null() || cap == 0 {
        return 0;
    }
    LAST_ERROR.with(|slot| match slot.borrow().as_ref() {
        None => 0,
        Some(message) => {
            let bytes = message.as_bytes();
            let len = bytes.len().min(cap - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf as *mut u8, len);
            *buf.add(len) = 0;
            len
        }
    })
}

/// Load and validate a game description plus its type signature.
/// Returns null on failure (see [`iggp_last_error`]).
///
/// # Safety
/// Both arguments must be NUL-terminated strings valid for reads.
#[no_mangle]
pub unsafe extern "C" fn iggp_game_load(
    gdl_path: *const c_char,
    sig_path: *const c_char,
) -> *mut IggpGame {
    clear_error();
    let (Ok(gdl), Ok(sig)) = (read_str(gdl_path), read_str(sig_path)) else {
        return std::ptr::null_mut();
    };
    match load_game_files(Path::new(gdl), Path::new(sig)) {
        Ok(loaded) => into_handle(loaded),
        Err(e) => {
            set_error(e);
            std::ptr::null_mut()
        }
    }
}

/// Load one of the built-in games by name. Returns null on failure.
///
/// # Safety
/// `name` must be a NUL-terminated string valid for reads.
#[no_mangle]
pub unsafe extern "C" fn iggp_game_load_bundled(name: *const c_char) -> *mut IggpGame {
    clear_error();
    let Ok(name) = read_str(name) else {
        return std::ptr::null_mut();
    };
    match iggp_core::bundles::load_bundle(name) {
        Ok(loaded) => into_handle(loaded),
        Err(e) => {
            set_error(e);
            std::ptr::null_mut()
        }
    }
}

/// Free a game handle. Null is a no-op.
///
/// # Safety
/// `game` must have come from a load function and not been freed before.
#[no_mangle]
pub unsafe extern "C" fn iggp_game_free(game: *mut IggpGame) {
    if !game.is_null() {
        drop(Box::from_raw(game));
    }
}

/// Number of roles in the game; 0 on a null handle.
///
/// # Safety
/// `game` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn iggp_game_role_count(game: *const IggpGame) -> usize {
    match game_ref(game) {
        Ok(loaded) => loaded.game.roles().len(),
        Err(_) => 0,
    }
}

/// Copy the NUL-terminated name of role `index` into `buf`. Returns the
/// byte length written excluding the NUL, or 0 when the index is out of
/// range or the buffer too small.
///
/// # Safety
/// `game` must be a live handle; `buf` must point to `cap` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn iggp_game_role_name(
    game: *const IggpGame,
    index: usize,
    buf: *mut c_char,
    cap: usize,
) -> usize {
    let Ok(loaded) = game_ref(game) else { return 0 };
    let Some(role) = loaded.game.roles().get(index) else {
        return 0;
    };
    let bytes = role.as_str().as_bytes();
    if buf.is_null() || cap <= bytes.len() {
        return 0;
    }
    std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf as *mut u8, bytes.len());
    *buf.add(bytes.len()) = 0;
    bytes.len()
}

fn episode_config(traces: usize, max_steps: usize, seed: u64) -> EpisodeConfig {
    EpisodeConfig {
        max_traces: traces,
        max_time: max_steps,
        master_seed: seed,
    }
}

/// Generate `traces` seeded random playouts and write the dump to
/// `out_path`.
///
/// # Safety
/// `game` must be a live handle; `out_path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn iggp_simulate(
    game: *const IggpGame,
    traces: usize,
    max_steps: usize,
    seed: u64,
    out_path: *const c_char,
) -> IggpStatus {
    clear_error();
    let loaded = match game_ref(game) {
        Ok(l) => l,
        Err(status) => return status,
    };
    let out = match read_str(out_path) {
        Ok(s) => s,
        Err(status) => return status,
    };
    let cfg = episode_config(traces, max_steps, seed);
    match simulate_to_file(loaded, &cfg, None, Path::new(out)) {
        Ok(()) => IggpStatus::IggpOk,
        Err(e) => {
            let status = pipeline_status(&e);
            set_error(e);
            status
        }
    }
}

/// Generate a split dataset under `out_dir` (one subdirectory per game).
/// `jobs` bounds worker threads; 0 means the library default. Output bytes
/// are identical for every `jobs` value.
///
/// # Safety
/// `game` must be a live handle; `out_dir` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn iggp_generate_dataset(
    game: *const IggpGame,
    traces: usize,
    max_steps: usize,
    seed: u64,
    jobs: usize,
    out_dir: *const c_char,
) -> IggpStatus {
    clear_error();
    let loaded = match game_ref(game) {
        Ok(l) => l,
        Err(status) => return status,
    };
    let out = match read_str(out_dir) {
        Ok(s) => s,
        Err(status) => return status,
    };
    let cfg = episode_config(traces, max_steps, seed);
    let jobs = (jobs > 0).then_some(jobs);
    let dataset = match generate_game_dataset(loaded, &cfg, jobs) {
        Ok(d) => d,
        Err(e) => {
            let status = pipeline_status(&e);
            set_error(e);
            return status;
        }
    };
    match write_dataset(&dataset, Path::new(out)) {
        Ok(()) => IggpStatus::IggpOk,
        Err(e) => {
            let status = dataset_status(&e);
            set_error(e);
            status
        }
    }
}

unsafe fn run_report(
    dataset_dir: *const c_char,
    out_tsv: *const c_char,
    score: impl FnOnce(&iggp_core::dataset::Dataset) -> Result<iggp_core::evaluate::EvalReport, iggp_core::evaluate::EvalError>,
) -> IggpStatus {
    clear_error();
    let dir = match read_str(dataset_dir) {
        Ok(s) => s,
        Err(status) => return status,
    };
    let out = match read_str(out_tsv) {
        Ok(s) => s,
        Err(status) => return status,
    };
    let dataset = match read_dataset(Path::new(dir)) {
        Ok(d) => d,
        Err(e) => {
            let status = dataset_status(&e);
            set_error(e);
            return status;
        }
    };
    let report = match score(&dataset) {
        Ok(r) => r,
        Err(e) => {
            set_error(e);
            return IggpStatus::IggpDomainError;
        }
    };
    match write_atomic(Path::new(out), report.to_tsv().as_bytes()) {
        Ok(()) => IggpStatus::IggpOk,
        Err(e) => {
            let status = pipeline_status(&e);
            set_error(e);
            status
        }
    }
}

/// Score a baseline (`"true"`, `"inertia"`, `"mean"`, `"knn<k>"`) on a
/// dataset directory; writes a TSV report.
///
/// # Safety
/// All pointers must be NUL-terminated strings valid for reads.
#[no_mangle]
pub unsafe extern "C" fn iggp_baseline(
    dataset_dir: *const c_char,
    method: *const c_char,
    out_tsv: *const c_char,
) -> IggpStatus {
    let method = match read_str(method) {
        Ok(s) => s,
        Err(status) => return status,
    };
    let method = match Method::parse(method) {
        Ok(m) => m,
        Err(e) => {
            set_error(e);
            return IggpStatus::IggpDomainError;
        }
    };
    run_report(dataset_dir, out_tsv, |dataset| score_baseline(dataset, method))
}

/// Score a hypothesis file against a dataset directory; writes a TSV
/// report.
///
/// # Safety
/// All pointers must be NUL-terminated strings valid for reads.
#[no_mangle]
pub unsafe extern "C" fn iggp_eval_hypothesis(
    dataset_dir: *const c_char,
    hypothesis_path: *const c_char,
    out_tsv: *const c_char,
) -> IggpStatus {
    let path = match read_str(hypothesis_path) {
        Ok(s) => s,
        Err(status) => return status,
    };
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            set_error(format!("{path}: {e}"));
            return IggpStatus::IggpIoError;
        }
    };
    let hypothesis = match Hypothesis::parse(&text) {
        Ok(h) => h,
        Err(e) => {
            set_error(e);
            return IggpStatus::IggpDomainError;
        }
    };
    run_report(dataset_dir, out_tsv, |dataset| {
        score_hypothesis(dataset, &hypothesis, "hypothesis")
    })
}

/// Score each game's own flattened rules against the dataset it generated;
/// writes a TSV report.
///
/// # Safety
/// All pointers must be NUL-terminated strings valid for reads.
#[no_mangle]
pub unsafe extern "C" fn iggp_eval_reference(
    dataset_dir: *const c_char,
    out_tsv: *const c_char,
) -> IggpStatus {
    run_report(dataset_dir, out_tsv, score_reference)
}
