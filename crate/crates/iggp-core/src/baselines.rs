//! Baseline predictors over flattened propositional atoms.
//!
//! Each predictor is a boolean function of (background, atom); Mean and KNN
//! additionally fit on training triples. They operate purely at the
//! propositional level: no generalization across constants.

use crate::extract::{FlatAtom, Triple};
use crate::symbol::Symbol;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Symmetric-difference distance between two atom sets, `|A - B| + |B - A|`.
/// Computed by encoding both sets over a shared bit universe, xoring, and
/// counting set bits.
pub fn distance(a: &BTreeSet<FlatAtom>, b: &BTreeSet<FlatAtom>) -> usize {
    let universe: Vec<&FlatAtom> = a.union(b).collect();
    let index: BTreeMap<&FlatAtom, usize> = universe.iter().enumerate().map(|(i, x)| (*x, i)).collect();
    let mut bits_a = Bitset::zeros(universe.len());
    let mut bits_b = Bitset::zeros(universe.len());
    for atom in a {
        bits_a.set(index[atom]);
    }
    for atom in b {
        bits_b.set(index[atom]);
    }
    bits_a.hamming(&bits_b)
}

/// Fixed-width bit vector with xor/popcount distance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bitset {
    words: Vec<u64>,
}

impl Bitset {
    pub fn zeros(bits: usize) -> Bitset {
        Bitset {
            words: vec![0; bits.div_ceil(64)],
        }
    }

    pub fn set(&mut self, bit: usize) {
        self.words[bit / 64] |= 1u64 << (bit % 64);
    }

    pub fn hamming(&self, other: &Bitset) -> usize {
        debug_assert_eq!(self.words.len(), other.words.len());
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaselineError {
    EmptyTraining,
    KTooLarge { k: usize, training: usize },
    UnknownMethod { name: String },
}

impl fmt::Display for BaselineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaselineError::EmptyTraining => write!(f, "predictor needs at least one training triple"),
            BaselineError::KTooLarge { k, training } => {
                write!(f, "k = {k} exceeds the {training} available training triples")
            }
            BaselineError::UnknownMethod { name } => write!(f, "unknown baseline method `{name}`"),
        }
    }
}

impl std::error::Error for BaselineError {}

/// Which predictor to run; `knn1`, `knn5`, or any `knn<k>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    True,
    Inertia,
    Mean,
    Knn(usize),
}

impl Method {
    pub fn parse(name: &str) -> Result<Method, BaselineError> {
        match name {
            "true" => Ok(Method::True),
            "inertia" => Ok(Method::Inertia),
            "mean" => Ok(Method::Mean),
            _ => {
                if let Some(k) = name.strip_prefix("knn") {
                    if let Ok(k) = k.parse::<usize>() {
                        if k >= 1 {
                            return Ok(Method::Knn(k));
                        }
                    }
                }
                Err(BaselineError::UnknownMethod {
                    name: name.to_string(),
                })
            }
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::True => write!(f, "true"),
            Method::Inertia => write!(f, "inertia"),
            Method::Mean => write!(f, "mean"),
            Method::Knn(k) => write!(f, "knn{k}"),
        }
    }
}

/// Always true.
pub fn predict_true(_background: &BTreeSet<FlatAtom>, _atom: &FlatAtom) -> bool {
    true
}

/// Map a flat atom of the `next` family onto its `true`-family counterpart.
fn next_to_true(atom: &FlatAtom) -> Option<FlatAtom> {
    let name = atom.predicate.as_str();
    let renamed = if name == "next" {
        "true".to_string()
    } else {
        format!("true_{}", name.strip_prefix("next_")?)
    };
    Some(FlatAtom {
        predicate: Symbol::new(&renamed),
        args: atom.args.clone(),
    })
}

/// For `next`-family atoms, true iff the corresponding `true`-family atom is
/// in the background; identical to [`predict_true`] for every other target.
pub fn predict_inertia(background: &BTreeSet<FlatAtom>, atom: &FlatAtom) -> bool {
    match next_to_true(atom) {
        Some(counterpart) => background.contains(&counterpart),
        None => true,
    }
}

/// Per-atom positive counts over the training triples.
#[derive(Clone, Debug)]
pub struct MeanPredictor {
    positive_counts: BTreeMap<FlatAtom, usize>,
    training_len: usize,
}

impl MeanPredictor {
    pub fn fit(training: &[Triple]) -> Result<MeanPredictor, BaselineError> {
        if training.is_empty() {
            return Err(BaselineError::EmptyTraining);
        }
        let mut positive_counts: BTreeMap<FlatAtom, usize> = BTreeMap::new();
        for triple in training {
            for atom in &triple.positive {
                *positive_counts.entry(atom.clone()).or_default() += 1;
            }
        }
        Ok(MeanPredictor {
            positive_counts,
            training_len: training.len(),
        })
    }

    /// True iff the atom is positive in at least half the training triples.
    pub fn predict(&self, _background: &BTreeSet<FlatAtom>, atom: &FlatAtom) -> bool {
        let count = self.positive_counts.get(atom).copied().unwrap_or(0);
        2 * count >= self.training_len
    }
}

/// Training triples with backgrounds encoded as bitsets over the canonical
/// sorted atom universe (training backgrounds plus the example space).
#[derive(Clone, Debug)]
pub struct KnnPredictor {
    k: usize,
    universe: BTreeMap<FlatAtom, usize>,
    encoded: Vec<Bitset>,
    positives: Vec<BTreeSet<FlatAtom>>,
}

impl KnnPredictor {
    pub fn fit(training: &[Triple], k: usize) -> Result<KnnPredictor, BaselineError> {
        if training.is_empty() {
            return Err(BaselineError::EmptyTraining);
        }
        if k == 0 || k > training.len() {
            return Err(BaselineError::KTooLarge {
                k,
                training: training.len(),
            });
        }
        let mut atoms: BTreeSet<FlatAtom> = BTreeSet::new();
        for triple in training {
            atoms.extend(triple.background.iter().cloned());
            atoms.extend(triple.positive.iter().cloned());
            atoms.extend(triple.negative.iter().cloned());
        }
        let universe: BTreeMap<FlatAtom, usize> =
            atoms.into_iter().enumerate().map(|(i, a)| (a, i)).collect();
        let encoded = training
            .iter()
            .map(|t| Self::encode(&universe, &t.background).0)
            .collect();
        let positives = training.iter().map(|t| t.positive.clone()).collect();
        Ok(KnnPredictor {
            k,
            universe,
            encoded,
            positives,
        })
    }

    /// Bits for known atoms plus the count of atoms outside the universe.
    /// Unknown atoms contribute the same amount to the distance against
    /// every training background, so rankings are unaffected.
    fn encode(universe: &BTreeMap<FlatAtom, usize>, set: &BTreeSet<FlatAtom>) -> (Bitset, usize) {
        let mut bits = Bitset::zeros(universe.len());
        let mut unknown = 0;
        for atom in set {
            match universe.get(atom) {
                Some(&i) => bits.set(i),
                None => unknown += 1,
            }
        }
        (bits, unknown)
    }

    /// Indices of the k nearest training triples; distance ties break toward
    /// the lowest training index.
    fn nearest(&self, background: &BTreeSet<FlatAtom>) -> Vec<usize> {
        let (bits, unknown) = Self::encode(&self.universe, background);
        let mut ranked: Vec<(usize, usize)> = self
            .encoded
            .iter()
            .enumerate()
            .map(|(i, train_bits)| (train_bits.hamming(&bits) + unknown, i))
            .collect();
        ranked.sort();
        ranked.into_iter().take(self.k).map(|(_, i)| i).collect()
    }

    /// True iff the atom is positive in at least half of the k nearest
    /// training triples.
    pub fn predict(&self, background: &BTreeSet<FlatAtom>, atom: &FlatAtom) -> bool {
        let hits = self
            .nearest(background)
            .into_iter()
            .filter(|&i| self.positives[i].contains(atom))
            .count();
        2 * hits >= self.k
    }
}

/// A fitted predictor of any method.
#[derive(Clone, Debug)]
pub enum Predictor {
    True,
    Inertia,
    Mean(MeanPredictor),
    Knn(KnnPredictor),
}

impl Predictor {
    pub fn fit(method: Method, training: &[Triple]) -> Result<Predictor, BaselineError> {
        match method {
            Method::True => Ok(Predictor::True),
            Method::Inertia => Ok(Predictor::Inertia),
            Method::Mean => Ok(Predictor::Mean(MeanPredictor::fit(training)?)),
            Method::Knn(k) => Ok(Predictor::Knn(KnnPredictor::fit(training, k)?)),
        }
    }

    pub fn predict(&self, background: &BTreeSet<FlatAtom>, atom: &FlatAtom) -> bool {
        match self {
            Predictor::True => predict_true(background, atom),
            Predictor::Inertia => predict_inertia(background, atom),
            Predictor::Mean(m) => m.predict(background, atom),
            Predictor::Knn(k) => k.predict(background, atom),
        }
    }
}
