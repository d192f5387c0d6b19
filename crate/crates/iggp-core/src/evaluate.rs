//! Score predictors and candidate rule sets against split datasets.
//!
//! A task is one (game, target) pair. Counts are pooled over all its test
//! triples before computing balanced accuracy `(tp/p + tn/n)/2`; a task is
//! perfectly solved when every test atom is classified correctly.

use crate::baselines::{BaselineError, Method, Predictor};
use crate::dataset::{CountedTriple, Dataset};
use crate::engine::{minimal_model, EngineConfig, EngineError, FactSet};
use crate::extract::{flatten_program, ExtractError, FlatAtom, Target, Triple};
use crate::gdl::{parse_program, stratify, validate_safety, ParseError, Program, SafetyError, Strata, StratifyError};
use crate::load::{load_game_from_texts, LoadError};

use std::fmt;

#[derive(Debug)]
pub enum EvalError {
    Parse(ParseError),
    Unsafe(SafetyError),
    Unstratifiable(StratifyError),
    Engine { triple_index: usize, error: EngineError },
    Baseline(BaselineError),
    DegenerateCounts,
    Load(LoadError),
    Extract(ExtractError),
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::Parse(e) => write!(f, "{e}"),
            EvalError::Unsafe(e) => write!(f, "{e}"),
            EvalError::Unstratifiable(e) => write!(f, "{e}"),
            EvalError::Engine { triple_index, error } => {
                write!(f, "evaluating triple {triple_index}: {error}")
            }
            EvalError::Baseline(e) => write!(f, "{e}"),
            EvalError::DegenerateCounts => {
                write!(f, "balanced accuracy undefined: no positive and no negative examples")
            }
            EvalError::Load(e) => write!(f, "{e}"),
            EvalError::Extract(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for EvalError {}

impl From<BaselineError> for EvalError {
    fn from(e: BaselineError) -> Self {
        EvalError::Baseline(e)
    }
}

impl From<LoadError> for EvalError {
    fn from(e: LoadError) -> Self {
        EvalError::Load(e)
    }
}

impl From<ExtractError> for EvalError {
    fn from(e: ExtractError) -> Self {
        EvalError::Extract(e)
    }
}

/// A candidate rule set over flattened predicates, validated and stratified
/// once so it can classify many triples.
#[derive(Clone, Debug)]
pub struct Hypothesis {
    program: Program,
    strata: Strata,
}

impl Hypothesis {
    pub fn new(program: Program) -> Result<Hypothesis, EvalError> {
        validate_safety(&program).map_err(EvalError::Unsafe)?;
        let strata = stratify(&program).map_err(EvalError::Unstratifiable)?;
        Ok(Hypothesis { program, strata })
    }

    /// Parse hypothesis text in the same prefix syntax as game files.
    pub fn parse(text: &str) -> Result<Hypothesis, EvalError> {
        Hypothesis::new(parse_program(text).map_err(EvalError::Parse)?)
    }

    /// The model of the hypothesis plus one triple's background.
    fn model_for(&self, triple: &Triple, index: usize) -> Result<FactSet, EvalError> {
        let extra: FactSet = triple.background.iter().map(FlatAtom::to_atom).collect();
        minimal_model(&self.program, &self.strata, &extra, EngineConfig::default())
            .map_err(|error| EvalError::Engine {
                triple_index: index,
                error,
            })
    }

    /// True iff the hypothesis together with the triple's background entails
    /// the atom.
    pub fn classify(&self, triple: &Triple, atom: &FlatAtom) -> Result<bool, EvalError> {
        Ok(self.model_for(triple, 0)?.contains(&atom.to_atom()))
    }
}

/// Pooled classification counts for one task.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TaskCounts {
    pub tp: usize,
    pub p: usize,
    pub tn: usize,
    pub n: usize,
}

impl TaskCounts {
    pub fn perfectly_solved(&self) -> bool {
        self.tp == self.p && self.tn == self.n
    }

    pub fn single_class(&self) -> bool {
        self.p == 0 || self.n == 0
    }
}

/// `(tp/p + tn/n) / 2`, degenerating to the defined side when one class is
/// empty. Errors when both are.
pub fn balanced_accuracy(tp: usize, p: usize, tn: usize, n: usize) -> Result<f64, EvalError> {
    match (p, n) {
        (0, 0) => Err(EvalError::DegenerateCounts),
        (0, _) => Ok(tn as f64 / n as f64),
        (_, 0) => Ok(tp as f64 / p as f64),
        _ => Ok((tp as f64 / p as f64 + tn as f64 / n as f64) / 2.0),
    }
}

/// Balanced accuracy for a whole task; an empty test set counts as perfect
/// (nothing was misclassified).
pub fn task_balanced_accuracy(counts: &TaskCounts) -> f64 {
    balanced_accuracy(counts.tp, counts.p, counts.tn, counts.n).unwrap_or(1.0)
}

enum Scorer<'a> {
    Predictor(&'a Predictor),
    Hypothesis(&'a Hypothesis),
}

type Classifier<'a> = Box<dyn FnMut(&FlatAtom) -> Result<bool, EvalError> + 'a>;

fn score_triples(scorer: &Scorer<'_>, triples: &[CountedTriple]) -> Result<TaskCounts, EvalError> {
    let mut counts = TaskCounts::default();
    for (index, counted) in triples.iter().enumerate() {
        let triple = &counted.triple;
        let mut classify: Classifier<'_> = match scorer {
            Scorer::Predictor(p) => {
                let background = &triple.background;
                Box::new(move |atom| Ok(p.predict(background, atom)))
            }
            Scorer::Hypothesis(h) => {
                let model = h.model_for(triple, index)?;
                Box::new(move |atom| Ok(model.contains(&atom.to_atom())))
            }
        };
        for atom in &triple.positive {
            counts.p += 1;
            if classify(atom)? {
                counts.tp += 1;
            }
        }
        for atom in &triple.negative {
            counts.n += 1;
            if !classify(atom)? {
                counts.tn += 1;
            }
        }
    }
    Ok(counts)
}

/// One row of an evaluation report.
#[derive(Clone, Debug)]
pub struct TaskScore {
    pub game: String,
    pub target: Target,
    pub method: String,
    pub counts: TaskCounts,
    pub balanced_accuracy: f64,
    pub perfectly_solved: bool,
    /// One class (or the whole test set) was empty.
    pub single_class: bool,
    /// The target had too few triples for a real split; scored on an empty
    /// test set.
    pub underfilled: bool,
}

/// All task rows of one run plus the aggregates.
#[derive(Clone, Debug, Default)]
pub struct EvalReport {
    pub rows: Vec<TaskScore>,
}

impl EvalReport {
    pub fn mean_balanced_accuracy(&self) -> f64 {
        if self.rows.is_empty() {
            return 0.0;
        }
        self.rows.iter().map(|r| r.balanced_accuracy).sum::<f64>() / self.rows.len() as f64
    }

    pub fn percent_perfectly_solved(&self) -> f64 {
        if self.rows.is_empty() {
            return 0.0;
        }
        100.0 * self.rows.iter().filter(|r| r.perfectly_solved).count() as f64 / self.rows.len() as f64
    }

    /// Machine-readable rows: tab-separated, one line per task.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("game\ttarget\tmethod\ttp\tp\ttn\tn\tba\tperfectly_solved\tsingle_class\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.6}\t{}\t{}\n",
                row.game,
                row.target,
                row.method,
                row.counts.tp,
                row.counts.p,
                row.counts.tn,
                row.counts.n,
                row.balanced_accuracy,
                row.perfectly_solved,
                row.single_class,
            ));
        }
        out
    }

    /// Human summary table.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<22} {:<9} {:<9} {:>6} {:>6} {:>6} {:>6} {:>8}  {}\n",
            "game", "target", "method", "tp", "p", "tn", "n", "ba", "solved"
        ));
        for row in &self.rows {
            out.push_str(&format!(
                "{:<22} {:<9} {:<9} {:>6} {:>6} {:>6} {:>6} {:>8.4}  {}{}\n",
                row.game,
                row.target.as_str(),
                row.method,
                row.counts.tp,
                row.counts.p,
                row.counts.tn,
                row.counts.n,
                row.balanced_accuracy,
                if row.perfectly_solved { "yes" } else { "no" },
                if row.single_class { " (single-class)" } else { "" },
            ));
        }
        out.push_str(&format!(
            "mean balanced accuracy: {:.4}; perfectly solved: {:.1}%\n",
            self.mean_balanced_accuracy(),
            self.percent_perfectly_solved(),
        ));
        out
    }
}

fn push_row(
    report: &mut EvalReport,
    game: &str,
    target: Target,
    method: String,
    counts: TaskCounts,
    underfilled: bool,
) {
    report.rows.push(TaskScore {
        game: game.to_string(),
        target,
        method,
        balanced_accuracy: task_balanced_accuracy(&counts),
        perfectly_solved: counts.perfectly_solved(),
        single_class: counts.single_class(),
        underfilled,
        counts,
    });
}

/// Fit the baseline on each task's training split and score its test split.
pub fn score_baseline(dataset: &Dataset, method: Method) -> Result<EvalReport, EvalError> {
    let mut report = EvalReport::default();
    for (game, data) in &dataset.games {
        for (target, splits) in &data.targets {
            let training: Vec<Triple> = splits.train.iter().map(|c| c.triple.clone()).collect();
            let predictor = Predictor::fit(method, &training)?;
            let counts = score_triples(&Scorer::Predictor(&predictor), &splits.test)?;
            push_row(&mut report, game, *target, method.to_string(), counts, splits.underfilled());
        }
    }
    Ok(report)
}

/// Score a hypothesis program on every task's test split.
pub fn score_hypothesis(dataset: &Dataset, hypothesis: &Hypothesis, label: &str) -> Result<EvalReport, EvalError> {
    let mut report = EvalReport::default();
    for (game, data) in &dataset.games {
        for (target, splits) in &data.targets {
            let counts = score_triples(&Scorer::Hypothesis(hypothesis), &splits.test)?;
            push_row(&mut report, game, *target, label.to_string(), counts, splits.underfilled());
        }
    }
    Ok(report)
}

/// Score each game's own rules, flattened, against the dataset it generated.
pub fn score_reference(dataset: &Dataset) -> Result<EvalReport, EvalError> {
    let mut report = EvalReport::default();
    for (game, data) in &dataset.games {
        let loaded = load_game_from_texts(game, &data.gdl_text, &data.sig_text)?;
        let flat = flatten_program(loaded.game.program(), &loaded.signature)?;
        let hypothesis = Hypothesis::new(flat)?;
        for (target, splits) in &data.targets {
            let counts = score_triples(&Scorer::Hypothesis(&hypothesis), &splits.test)?;
            push_row(&mut report, game, *target, "reference".to_string(), counts, splits.underfilled());
        }
    }
    Ok(report)
}
