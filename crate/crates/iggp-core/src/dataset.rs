//! Split datasets and their on-disk form.
//!
//! Layout, one directory per game:
//!
//! ```text
//! <game>/game.gdl
//! <game>/signature.sig
//! <game>/<target>/{train,validate,test}.triples
//! <game>/<target>/{train,validate,test}.counts
//! ```
//!
//! A `.triples` file is a sequence of records, each introduced by a line
//! `#triple <index>` and carrying `#bk`, `#pos`, and `#neg` sections of flat
//! atom lines like `next_score(p1,0).`. Atoms are written in canonical
//! sorted order, so re-serialization is byte-identical. A `.counts` sidecar
//! records how many times each record occurred before deduplication.

use crate::extract::{FlatAtom, Target, Triple};
use crate::trace::derived_rng;
use rand::Rng;
use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

/// A deduplicated triple plus its pre-deduplication multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountedTriple {
    pub triple: Triple,
    pub count: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TargetData {
    pub train: Vec<CountedTriple>,
    pub validate: Vec<CountedTriple>,
    pub test: Vec<CountedTriple>,
}

impl TargetData {
    /// True when the target had fewer than six triples, so everything went
    /// to the training split.
    pub fn underfilled(&self) -> bool {
        self.validate.is_empty() && self.test.is_empty()
    }

    pub fn len(&self) -> usize {
        self.train.len() + self.validate.len() + self.test.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameData {
    pub gdl_text: String,
    pub sig_text: String,
    pub targets: BTreeMap<Target, TargetData>,
}

/// Per-game, per-target split data; a dataset directory may hold several
/// games side by side.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Dataset {
    pub games: BTreeMap<String, GameData>,
}

#[derive(Debug)]
pub enum DatasetError {
    Io { path: String, error: std::io::Error },
    Malformed { path: String, line: usize, message: String },
    NoGames { path: String },
}

impl fmt::Display for DatasetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DatasetError::Io { path, error } => write!(f, "{path}: {error}"),
            DatasetError::Malformed { path, line, message } => {
                write!(f, "{path}:{line}: {message}")
            }
            DatasetError::NoGames { path } => {
                write!(f, "{path}: no game directories found (expected <game>/game.gdl)")
            }
        }
    }
}

impl std::error::Error for DatasetError {}

fn io_err(path: &Path, error: std::io::Error) -> DatasetError {
    DatasetError::Io {
        path: path.display().to_string(),
        error,
    }
}

/// Deduplicate triples, keeping first-occurrence order and counting
/// multiplicity.
pub fn dedup_counted<I: IntoIterator<Item = Triple>>(triples: I) -> Vec<CountedTriple> {
    let mut order: Vec<CountedTriple> = Vec::new();
    let mut index: BTreeMap<Triple, usize> = BTreeMap::new();
    for triple in triples {
        match index.get(&triple) {
            Some(&i) => order[i].count += 1,
            None => {
                index.insert(triple.clone(), order.len());
                order.push(CountedTriple { triple, count: 1 });
            }
        }
    }
    order
}

/// Seeded shuffle, then a 4:1:1 split rounding toward train. Fewer than six
/// triples all land in train (the caller can see this via `underfilled`).
pub fn split_triples(mut triples: Vec<CountedTriple>, seed: u64, game: &str, target: Target) -> TargetData {
    let mut rng = derived_rng(seed, &[b"split", game.as_bytes(), target.as_str().as_bytes()]);
    for i in (1..triples.len()).rev() {
        let j = rng.gen_range(0..=i);
        triples.swap(i, j);
    }
    let n = triples.len();
    if n < 6 {
        return TargetData {
            train: triples,
            validate: Vec::new(),
            test: Vec::new(),
        };
    }
    let validate_len = n / 6;
    let test_len = n / 6;
    let train_len = n - validate_len - test_len;
    let test = triples.split_off(train_len + validate_len);
    let validate = triples.split_off(train_len);
    TargetData {
        train: triples,
        validate,
        test,
    }
}

fn write_triples_text(triples: &[CountedTriple]) -> String {
    let mut out = String::new();
    for (i, counted) in triples.iter().enumerate() {
        out.push_str(&format!("#triple {i}\n"));
        for (section, atoms) in [
            ("#bk", &counted.triple.background),
            ("#pos", &counted.triple.positive),
            ("#neg", &counted.triple.negative),
        ] {
            out.push_str(section);
            out.push('\n');
            for atom in atoms {
                out.push_str(&atom.to_string());
                out.push_str(".\n");
            }
        }
    }
    out
}

fn write_counts_text(triples: &[CountedTriple]) -> String {
    let mut out = String::new();
    for (i, counted) in triples.iter().enumerate() {
        out.push_str(&format!("{i} {}\n", counted.count));
    }
    out
}

fn parse_triples_text(path: &Path, text: &str, target: Target) -> Result<Vec<CountedTriple>, DatasetError> {
    let malformed = |line: usize, message: String| DatasetError::Malformed {
        path: path.display().to_string(),
        line,
        message,
    };
    let mut triples: Vec<CountedTriple> = Vec::new();
    let mut current: Option<Triple> = None;
    let mut section: Option<&str> = None;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("#triple") {
            rest.trim()
                .parse::<usize>()
                .map_err(|_| malformed(lineno, format!("bad record header `{line}`")))?;
            if let Some(done) = current.take() {
                triples.push(CountedTriple { triple: done, count: 1 });
            }
            current = Some(Triple {
                target,
                background: Default::default(),
                positive: Default::default(),
                negative: Default::default(),
            });
            section = None;
        } else if line == "#bk" || line == "#pos" || line == "#neg" {
            if current.is_none() {
                return Err(malformed(lineno, format!("`{line}` before any `#triple` header")));
            }
            section = Some(match line {
                "#bk" => "bk",
                "#pos" => "pos",
                _ => "neg",
            });
        } else {
            let triple = current
                .as_mut()
                .ok_or_else(|| malformed(lineno, "atom before any `#triple` header".to_string()))?;
            let atom = FlatAtom::parse(line)
                .ok_or_else(|| malformed(lineno, format!("cannot parse atom `{line}`")))?;
            match section {
                Some("bk") => triple.background.insert(atom),
                Some("pos") => triple.positive.insert(atom),
                Some("neg") => triple.negative.insert(atom),
                _ => return Err(malformed(lineno, "atom outside any section".to_string())),
            };
        }
    }
    if let Some(done) = current.take() {
        triples.push(CountedTriple { triple: done, count: 1 });
    }
    Ok(triples)
}

fn apply_counts(path: &Path, text: &str, triples: &mut [CountedTriple]) -> Result<(), DatasetError> {
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let parse = |s: Option<&str>| {
            s.and_then(|x| x.parse::<usize>().ok()).ok_or(DatasetError::Malformed {
                path: path.display().to_string(),
                line: i + 1,
                message: format!("bad count line `{line}`"),
            })
        };
        let index = parse(parts.next())?;
        let count = parse(parts.next())?;
        if index >= triples.len() {
            return Err(DatasetError::Malformed {
                path: path.display().to_string(),
                line: i + 1,
                message: format!("count index {index} out of range"),
            });
        }
        triples[index].count = count as u32;
    }
    Ok(())
}

const SPLITS: [&str; 3] = ["train", "validate", "test"];

fn split_of<'a>(data: &'a TargetData, name: &str) -> &'a [CountedTriple] {
    match name {
        "train" => &data.train,
        "validate" => &data.validate,
        _ => &data.test,
    }
}

/// Write a dataset under `root`, one directory per game. Each game directory
/// is assembled in a temporary sibling and moved into place, so interrupted
/// runs never leave partial games behind.
pub fn write_dataset(dataset: &Dataset, root: &Path) -> Result<(), DatasetError> {
    fs::create_dir_all(root).map_err(|e| io_err(root, e))?;
    for (name, game) in &dataset.games {
        let staging = root.join(format!(".tmp-{}-{name}", std::process::id()));
        if staging.exists() {
            fs::remove_dir_all(&staging).map_err(|e| io_err(&staging, e))?;
        }
        fs::create_dir_all(&staging).map_err(|e| io_err(&staging, e))?;
        let write_file = |path: PathBuf, text: &str| -> Result<(), DatasetError> {
            let mut f = fs::File::create(&path).map_err(|e| io_err(&path, e))?;
            f.write_all(text.as_bytes()).map_err(|e| io_err(&path, e))
        };
        write_file(staging.join("game.gdl"), &game.gdl_text)?;
        write_file(staging.join("signature.sig"), &game.sig_text)?;
        for (target, data) in &game.targets {
            let dir = staging.join(target.as_str());
            fs::create_dir_all(&dir).map_err(|e| io_err(&dir, e))?;
            for split in SPLITS {
                let triples = split_of(data, split);
                write_file(dir.join(format!("{split}.triples")), &write_triples_text(triples))?;
                write_file(dir.join(format!("{split}.counts")), &write_counts_text(triples))?;
            }
        }
        let final_dir = root.join(name);
        if final_dir.exists() {
            fs::remove_dir_all(&final_dir).map_err(|e| io_err(&final_dir, e))?;
        }
        fs::rename(&staging, &final_dir).map_err(|e| io_err(&final_dir, e))?;
    }
    Ok(())
}

/// Read every game directory under `root`.
pub fn read_dataset(root: &Path) -> Result<Dataset, DatasetError> {
    let mut games = BTreeMap::new();
    let entries = fs::read_dir(root).map_err(|e| io_err(root, e))?;
    let mut names: Vec<String> = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| io_err(root, e))?;
        let path = entry.path();
        let name = entry.file_name().to_string_lossy().to_string();
        // dot-prefixed directories are abandoned staging areas
        if path.is_dir() && !name.starts_with('.') && path.join("game.gdl").is_file() {
            names.push(name);
        }
    }
    names.sort();
    for name in names {
        let dir = root.join(&name);
        let read_file = |path: PathBuf| -> Result<String, DatasetError> {
            fs::read_to_string(&path).map_err(|e| io_err(&path, e))
        };
        let gdl_text = read_file(dir.join("game.gdl"))?;
        let sig_text = read_file(dir.join("signature.sig"))?;
        let mut targets = BTreeMap::new();
        for target in Target::ALL {
            let tdir = dir.join(target.as_str());
            if !tdir.is_dir() {
                continue;
            }
            let mut data = TargetData::default();
            for split in SPLITS {
                let tpath = tdir.join(format!("{split}.triples"));
                if !tpath.is_file() {
                    continue;
                }
                let mut triples = parse_triples_text(&tpath, &read_file(tpath.clone())?, target)?;
                let cpath = tdir.join(format!("{split}.counts"));
                if cpath.is_file() {
                    apply_counts(&cpath, &read_file(cpath.clone())?, &mut triples)?;
                }
                match split {
                    "train" => data.train = triples,
                    "validate" => data.validate = triples,
                    _ => data.test = triples,
                }
            }
            targets.insert(target, data);
        }
        games.insert(
            name,
            GameData {
                gdl_text,
                sig_text,
                targets,
            },
        );
    }
    if games.is_empty() {
        return Err(DatasetError::NoGames {
            path: root.display().to_string(),
        });
    }
    Ok(Dataset { games })
}
