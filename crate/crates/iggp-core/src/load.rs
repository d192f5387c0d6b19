//! Load and cross-validate a game description with its type signature.

use crate::extract::{verify_flattening, ExtractError};
use crate::game::{Game, GameError};
use crate::gdl::{parse_program, Literal, ParseError, Program, Term};
use crate::signature::{parse_signature, SignatureError, TypeSignature, BOOL};
use crate::symbol::Symbol;
use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

#[derive(Debug)]
pub enum LoadError {
    Io { path: String, error: std::io::Error },
    Parse(ParseError),
    Signature(SignatureError),
    Game(GameError),
    Extract(ExtractError),
    UndeclaredSymbol { symbol: Symbol, kind: &'static str },
    DeclarationMismatch { symbol: Symbol, detail: String },
    UnknownBundle { name: String },
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoadError::Io { path, error } => write!(f, "{path}: {error}"),
            LoadError::Parse(e) => write!(f, "{e}"),
            LoadError::Signature(e) => write!(f, "{e}"),
            LoadError::Game(e) => write!(f, "{e}"),
            LoadError::Extract(e) => write!(f, "{e}"),
            LoadError::UndeclaredSymbol { symbol, kind } => {
                write!(f, "{kind} `{symbol}` is used in the game but not declared in the signature")
            }
            LoadError::DeclarationMismatch { symbol, detail } => {
                write!(f, "declaration of `{symbol}` does not match its use: {detail}")
            }
            LoadError::UnknownBundle { name } => write!(f, "unknown bundled game `{name}`"),
        }
    }
}

impl std::error::Error for LoadError {}

impl From<ParseError> for LoadError {
    fn from(e: ParseError) -> Self {
        LoadError::Parse(e)
    }
}

impl From<SignatureError> for LoadError {
    fn from(e: SignatureError) -> Self {
        LoadError::Signature(e)
    }
}

impl From<GameError> for LoadError {
    fn from(e: GameError) -> Self {
        LoadError::Game(e)
    }
}

impl From<ExtractError> for LoadError {
    fn from(e: ExtractError) -> Self {
        LoadError::Extract(e)
    }
}

/// A validated game/signature pair plus the original file texts (datasets
/// embed them verbatim).
#[derive(Clone, Debug)]
pub struct LoadedGame {
    pub name: String,
    pub game: Game,
    pub signature: TypeSignature,
    pub gdl_text: String,
    pub sig_text: String,
}

fn collect_constants(term: &Term, out: &mut BTreeSet<Symbol>) {
    match term {
        Term::Constant(c) => {
            out.insert(c.clone());
        }
        Term::Variable(_) => {}
        Term::Compound(_, args) => {
            for a in args {
                collect_constants(a, out);
            }
        }
    }
}

/// Every predicate, functor, and constant of the program must be declared in
/// the signature with a matching shape; flattened names must be injective.
pub fn check_signature_covers(program: &Program, sig: &TypeSignature) -> Result<(), LoadError> {
    for pred in program.predicates() {
        if pred.as_str() == crate::gdl::DISTINCT {
            continue;
        }
        let arity = program.predicate_arity(pred.as_str()).unwrap_or(0);
        let decl = sig.declaration(pred).ok_or_else(|| LoadError::UndeclaredSymbol {
            symbol: pred.clone(),
            kind: "predicate",
        })?;
        if decl.result.as_str() != BOOL {
            return Err(LoadError::DeclarationMismatch {
                symbol: pred.clone(),
                detail: format!("expected result type `bool`, declared `{}`", decl.result),
            });
        }
        if decl.args.len() != arity {
            return Err(LoadError::DeclarationMismatch {
                symbol: pred.clone(),
                detail: format!("used with {arity} arguments, declared with {}", decl.args.len()),
            });
        }
    }
    for (functor, arity) in program.functors() {
        let decl = sig.declaration(functor).ok_or_else(|| LoadError::UndeclaredSymbol {
            symbol: functor.clone(),
            kind: "function",
        })?;
        if decl.args.len() != arity {
            return Err(LoadError::DeclarationMismatch {
                symbol: functor.clone(),
                detail: format!("used with {arity} arguments, declared with {}", decl.args.len()),
            });
        }
    }
    let mut constants = BTreeSet::new();
    for fact in &program.facts {
        for term in &fact.args {
            collect_constants(term, &mut constants);
        }
    }
    for rule in &program.rules {
        for term in &rule.head.args {
            collect_constants(term, &mut constants);
        }
        for lit in &rule.body {
            let atom = match lit {
                Literal::Pos(a) | Literal::Neg(a) => a,
            };
            for term in &atom.args {
                collect_constants(term, &mut constants);
            }
        }
    }
    for constant in constants {
        let decl = sig
            .declaration(&constant)
            .ok_or_else(|| LoadError::UndeclaredSymbol {
                symbol: constant.clone(),
                kind: "constant",
            })?;
        if !decl.args.is_empty() {
            return Err(LoadError::DeclarationMismatch {
                symbol: constant.clone(),
                detail: format!("used as a constant, declared with {} arguments", decl.args.len()),
            });
        }
    }
    Ok(())
}

/// Build a validated game from raw texts: parse both, check safety and
/// stratification, check signature coverage, check flattening injectivity,
/// and type-check the program's facts.
pub fn load_game_from_texts(name: &str, gdl_text: &str, sig_text: &str) -> Result<LoadedGame, LoadError> {
    let program = parse_program(gdl_text)?;
    let signature = parse_signature(sig_text)?;
    check_signature_covers(&program, &signature)?;
    verify_flattening(&signature)?;
    for fact in &program.facts {
        signature.well_formed_atom(fact)?;
    }
    let game = Game::new(program)?;
    Ok(LoadedGame {
        name: name.to_string(),
        game,
        signature,
        gdl_text: gdl_text.to_string(),
        sig_text: sig_text.to_string(),
    })
}

/// Load `game.gdl` + `signature.sig` style paths from disk. The game's name
/// is the GDL file's stem unless the file sits in a directory named after
/// the game.
pub fn load_game_files(gdl_path: &Path, sig_path: &Path) -> Result<LoadedGame, LoadError> {
    let read = |path: &Path| {
        std::fs::read_to_string(path).map_err(|error| LoadError::Io {
            path: path.display().to_string(),
            error,
        })
    };
    let gdl_text = read(gdl_path)?;
    let sig_text = read(sig_path)?;
    let name = game_name_from_path(gdl_path);
    load_game_from_texts(&name, &gdl_text, &sig_text)
}

pub fn game_name_from_path(gdl_path: &Path) -> String {
    let stem = gdl_path
        .file_stem()
        .map(|s| s.to_string_lossy().to_string())
        .unwrap_or_else(|| "game".to_string());
    if stem == "game" {
        if let Some(dir) = gdl_path.parent().and_then(|d| d.file_name()) {
            return dir.to_string_lossy().to_string();
        }
    }
    stem
}
