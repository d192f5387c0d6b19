//! Type signatures: declarations of constants, functions, and predicates
//! with a subtype preorder, used to enumerate every well-typed ground atom
//! of a predicate.
//!
//! File syntax, one statement per `.`-terminated line:
//!
//! ```text
//! true, next :: prop -> bool.
//! at :: pos -> pos -> cell -> prop.
//! red, black :: agent.
//! 1, 2, 3, 4, 5 :: pos.
//! blank :: cell.
//! agent :> cell.
//! ```
//!
//! `f :: t1 -> ... -> tn -> t` declares `f` with argument types `t1..tn` and
//! result type `t`; a bare `f :: t` declares a constant. `a :> b` declares
//! `a` to be a subtype of `b`; the subtype relation `⊑` is the reflexive
//! transitive closure of the declared pairs. Predicates are declarations
//! whose result type is `bool`. Lines starting with `#` are comments.

use crate::gdl::{Atom, Term};
use crate::symbol::Symbol;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub const BOOL: &str = "bool";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Declaration {
    pub args: Vec<Symbol>,
    pub result: Symbol,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TypeSignature {
    decls: BTreeMap<Symbol, Declaration>,
    declared_subtypes: BTreeSet<(Symbol, Symbol)>,
    /// Reflexive transitive closure: type -> all its supertypes (incl. self).
    supertypes: BTreeMap<Symbol, BTreeSet<Symbol>>,
    types: BTreeSet<Symbol>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SignatureError {
    Syntax { line: usize, col: usize, message: String },
    DuplicateDeclaration { symbol: Symbol },
    UnknownSupertype { line: usize, name: Symbol },
    CyclicSubtypes { involving: Symbol },
    UnknownType { name: Symbol },
    UndeclaredSymbol { symbol: Symbol },
    NotAPredicate { symbol: Symbol, result: Symbol },
    ArityMismatch { symbol: Symbol, declared: usize, used: usize },
    IllTyped { term: String, position: usize, expected: Symbol, found: Symbol },
    RecursiveSignature { type_name: Symbol },
    GroundAtomCapExceeded { predicate: Symbol, cap: usize },
}

impl fmt::Display for SignatureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignatureError::Syntax { line, col, message } => write!(f, "{line}:{col}: {message}"),
            SignatureError::DuplicateDeclaration { symbol } => {
                write!(f, "symbol `{symbol}` declared more than once")
            }
            SignatureError::UnknownSupertype { line, name } => {
                write!(f, "line {line}: unknown type name `{name}` on the right of `:>`")
            }
            SignatureError::CyclicSubtypes { involving } => {
                write!(f, "cyclic `:>` chain involving type `{involving}`")
            }
            SignatureError::UnknownType { name } => write!(f, "unknown type `{name}`"),
            SignatureError::UndeclaredSymbol { symbol } => {
                write!(f, "symbol `{symbol}` is not declared in the signature")
            }
            SignatureError::NotAPredicate { symbol, result } => {
                write!(f, "`{symbol}` has result type `{result}`, not `bool`")
            }
            SignatureError::ArityMismatch { symbol, declared, used } => {
                write!(f, "`{symbol}` declared with {declared} arguments but used with {used}")
            }
            SignatureError::IllTyped { term, position, expected, found } => {
                write!(f, "ill-typed term `{term}` at position {position}: expected `{expected}`, found `{found}`")
            }
            SignatureError::RecursiveSignature { type_name } => {
                write!(f, "type `{type_name}` admits unboundedly nested terms; enumeration would not terminate")
            }
            SignatureError::GroundAtomCapExceeded { predicate, cap } => {
                write!(f, "enumerating ground atoms of `{predicate}` exceeds the cap of {cap}")
            }
        }
    }
}

impl std::error::Error for SignatureError {}

/// Parse a signature file and validate it: no duplicate declarations, known
/// supertype names, acyclic `:>` chains.
pub fn parse_signature(text: &str) -> Result<TypeSignature, SignatureError> {
    let mut decls: BTreeMap<Symbol, Declaration> = BTreeMap::new();
    let mut declared_subtypes: BTreeSet<(Symbol, Symbol)> = BTreeSet::new();
    let mut subtype_lines: Vec<(usize, Symbol, Symbol)> = Vec::new();
    let mut types: BTreeSet<Symbol> = BTreeSet::new();
    types.insert(Symbol::new(BOOL));

    let mut statement = String::new();
    let mut statement_start = 0usize;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() && statement.is_empty() {
            continue;
        }
        if statement.is_empty() {
            statement_start = lineno + 1;
        }
        statement.push_str(line);
        statement.push(' ');
        while let Some(dot) = statement.find('.') {
            let stmt: String = statement[..dot].to_string();
            statement = statement[dot + 1..].to_string();
            parse_statement(
                stmt.trim(),
                statement_start,
                &mut decls,
                &mut subtype_lines,
                &mut types,
            )?;
            statement_start = lineno + 1;
        }
    }
    if !statement.trim().is_empty() {
        return Err(SignatureError::Syntax {
            line: statement_start,
            col: 1,
            message: "statement not terminated by `.`".to_string(),
        });
    }

    for (lineno, sub, sup) in &subtype_lines {
        if !types.contains(sup) {
            return Err(SignatureError::UnknownSupertype {
                line: *lineno,
                name: sup.clone(),
            });
        }
        declared_subtypes.insert((sub.clone(), sup.clone()));
    }

    // Reject non-reflexive cycles in the declared subtype graph.
    let closure = transitive_closure(&types, &declared_subtypes);
    for (t, supers) in &closure {
        for s in supers {
            if s != t && closure.get(s).is_some_and(|back| back.contains(t)) {
                return Err(SignatureError::CyclicSubtypes { involving: t.clone() });
            }
        }
    }

    Ok(TypeSignature {
        decls,
        declared_subtypes,
        supertypes: closure,
        types,
    })
}

fn parse_statement(
    stmt: &str,
    line: usize,
    decls: &mut BTreeMap<Symbol, Declaration>,
    subtype_lines: &mut Vec<(usize, Symbol, Symbol)>,
    types: &mut BTreeSet<Symbol>,
) -> Result<(), SignatureError> {
    if stmt.is_empty() {
        return Ok(());
    }
    if let Some((left, right)) = stmt.split_once("::") {
        let names: Vec<&str> = left.split(',').map(str::trim).collect();
        let chain: Vec<&str> = right.split("->").map(str::trim).collect();
        if names.iter().any(|n| n.is_empty()) || chain.iter().any(|t| t.is_empty()) {
            return Err(SignatureError::Syntax {
                line,
                col: 1,
                message: format!("malformed declaration `{stmt}`"),
            });
        }
        let (result, args) = chain.split_last().expect("chain nonempty");
        let decl = Declaration {
            args: args.iter().map(|t| Symbol::new(t)).collect(),
            result: Symbol::new(result),
        };
        for t in &chain {
            types.insert(Symbol::new(t));
        }
        for name in names {
            let symbol = Symbol::new(name);
            if decls.insert(symbol.clone(), decl.clone()).is_some() {
                return Err(SignatureError::DuplicateDeclaration { symbol });
            }
        }
        Ok(())
    } else if let Some((sub, sup)) = stmt.split_once(":>") {
        let sub = sub.trim();
        let sup = sup.trim();
        if sub.is_empty() || sup.is_empty() {
            return Err(SignatureError::Syntax {
                line,
                col: 1,
                message: format!("malformed subtype statement `{stmt}`"),
            });
        }
        subtype_lines.push((line, Symbol::new(sub), Symbol::new(sup)));
        Ok(())
    } else {
        Err(SignatureError::Syntax {
            line,
            col: 1,
            message: format!("expected `::` or `:>` in `{stmt}`"),
        })
    }
}

fn transitive_closure(
    types: &BTreeSet<Symbol>,
    pairs: &BTreeSet<(Symbol, Symbol)>,
) -> BTreeMap<Symbol, BTreeSet<Symbol>> {
    let mut closure: BTreeMap<Symbol, BTreeSet<Symbol>> = types
        .iter()
        .map(|t| (t.clone(), BTreeSet::from([t.clone()])))
        .collect();
    for (sub, sup) in pairs {
        closure.entry(sub.clone()).or_default().insert(sup.clone());
        closure.entry(sup.clone()).or_insert_with(|| BTreeSet::from([sup.clone()]));
    }
    loop {
        let mut changed = false;
        let snapshot = closure.clone();
        for supers in closure.values_mut() {
            let mut extra = BTreeSet::new();
            for s in supers.iter() {
                if let Some(up) = snapshot.get(s) {
                    extra.extend(up.iter().cloned());
                }
            }
            let before = supers.len();
            supers.extend(extra);
            changed |= supers.len() != before;
        }
        if !changed {
            return closure;
        }
    }
}

impl TypeSignature {
    pub fn declaration(&self, symbol: &Symbol) -> Option<&Declaration> {
        self.decls.get(symbol)
    }

    pub fn declarations(&self) -> impl Iterator<Item = (&Symbol, &Declaration)> {
        self.decls.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.decls.is_empty()
    }

    /// Predicates: declared symbols whose result type is `bool`.
    pub fn predicates(&self) -> impl Iterator<Item = (&Symbol, &Declaration)> {
        self.decls.iter().filter(|(_, d)| d.result.as_str() == BOOL)
    }

    /// True iff `t1 ⊑ t2` under the reflexive transitive closure of `:>`.
    pub fn subtype(&self, t1: &Symbol, t2: &Symbol) -> Result<bool, SignatureError> {
        for t in [t1, t2] {
            if !self.types.contains(t) {
                return Err(SignatureError::UnknownType { name: t.clone() });
            }
        }
        Ok(self
            .supertypes
            .get(t1)
            .is_some_and(|supers| supers.contains(t2)))
    }

    /// True when some declared function with arguments produces a term of a
    /// subtype of `t`, i.e. positions of type `t` can hold compound terms.
    pub fn type_admits_compounds(&self, t: &Symbol) -> bool {
        self.decls.values().any(|decl| {
            !decl.args.is_empty()
                && decl.result.as_str() != BOOL
                && self.subtype_unchecked(&decl.result, t)
        })
    }

    fn subtype_unchecked(&self, t1: &Symbol, t2: &Symbol) -> bool {
        t1 == t2
            || self
                .supertypes
                .get(t1)
                .is_some_and(|supers| supers.contains(t2))
    }

    /// Result type of a ground term when it is well-formed: the declared
    /// result of its outermost symbol, with every argument's result type a
    /// subtype of the corresponding declared argument type.
    pub fn well_formed(&self, term: &Term) -> Result<Symbol, SignatureError> {
        match term {
            Term::Variable(v) => Err(SignatureError::UndeclaredSymbol { symbol: v.clone() }),
            Term::Constant(c) => {
                let decl = self
                    .decls
                    .get(c)
                    .ok_or_else(|| SignatureError::UndeclaredSymbol { symbol: c.clone() })?;
                if !decl.args.is_empty() {
                    return Err(SignatureError::ArityMismatch {
                        symbol: c.clone(),
                        declared: decl.args.len(),
                        used: 0,
                    });
                }
                Ok(decl.result.clone())
            }
            Term::Compound(f, args) => {
                let decl = self
                    .decls
                    .get(f)
                    .ok_or_else(|| SignatureError::UndeclaredSymbol { symbol: f.clone() })?;
                if decl.args.len() != args.len() {
                    return Err(SignatureError::ArityMismatch {
                        symbol: f.clone(),
                        declared: decl.args.len(),
                        used: args.len(),
                    });
                }
                for (i, (arg, expected)) in args.iter().zip(&decl.args).enumerate() {
                    let found = self.well_formed(arg)?;
                    if !self.subtype_unchecked(&found, expected) {
                        return Err(SignatureError::IllTyped {
                            term: term.to_string(),
                            position: i + 1,
                            expected: expected.clone(),
                            found,
                        });
                    }
                }
                Ok(decl.result.clone())
            }
        }
    }

    /// Atoms are terms of type `bool`.
    pub fn well_formed_atom(&self, atom: &Atom) -> Result<(), SignatureError> {
        let result = if atom.args.is_empty() {
            let decl = self
                .decls
                .get(&atom.predicate)
                .ok_or_else(|| SignatureError::UndeclaredSymbol {
                    symbol: atom.predicate.clone(),
                })?;
            decl.result.clone()
        } else {
            self.well_formed(&Term::Compound(atom.predicate.clone(), atom.args.clone()))?
        };
        if result.as_str() != BOOL {
            return Err(SignatureError::NotAPredicate {
                symbol: atom.predicate.clone(),
                result,
            });
        }
        Ok(())
    }

    /// All ground terms whose result type is a subtype of `wanted`.
    /// Signatures admitting unboundedly nested terms are rejected.
    fn inhabitants(
        &self,
        wanted: &Symbol,
        memo: &mut BTreeMap<Symbol, Vec<Term>>,
        in_progress: &mut BTreeSet<Symbol>,
        cap: usize,
    ) -> Result<Vec<Term>, SignatureError> {
        if let Some(hit) = memo.get(wanted) {
            return Ok(hit.clone());
        }
        if !in_progress.insert(wanted.clone()) {
            return Err(SignatureError::RecursiveSignature {
                type_name: wanted.clone(),
            });
        }
        let mut out: Vec<Term> = Vec::new();
        for (symbol, decl) in &self.decls {
            if decl.result.as_str() == BOOL || !self.subtype_unchecked(&decl.result, wanted) {
                continue;
            }
            if decl.args.is_empty() {
                out.push(Term::Constant(symbol.clone()));
            } else {
                let per_arg = decl
                    .args
                    .iter()
                    .map(|t| self.inhabitants(t, memo, in_progress, cap))
                    .collect::<Result<Vec<_>, _>>()?;
                for args in arg_product(&per_arg, cap, symbol)? {
                    out.push(Term::Compound(symbol.clone(), args));
                }
            }
            if out.len() > cap {
                return Err(SignatureError::GroundAtomCapExceeded {
                    predicate: symbol.clone(),
                    cap,
                });
            }
        }
        in_progress.remove(wanted);
        memo.insert(wanted.clone(), out.clone());
        Ok(out)
    }

    /// Every well-formed ground atom of `predicate`, in canonical order.
    pub fn ground_atoms(&self, predicate: &Symbol) -> Result<BTreeSet<Atom>, SignatureError> {
        self.ground_atoms_capped(predicate, DEFAULT_GROUND_ATOM_CAP)
    }

    pub fn ground_atoms_capped(
        &self,
        predicate: &Symbol,
        cap: usize,
    ) -> Result<BTreeSet<Atom>, SignatureError> {
        let decl = self
            .decls
            .get(predicate)
            .ok_or_else(|| SignatureError::UndeclaredSymbol {
                symbol: predicate.clone(),
            })?;
        if decl.result.as_str() != BOOL {
            return Err(SignatureError::NotAPredicate {
                symbol: predicate.clone(),
                result: decl.result.clone(),
            });
        }
        let mut memo = BTreeMap::new();
        let mut in_progress = BTreeSet::new();
        let per_arg = decl
            .args
            .iter()
            .map(|t| self.inhabitants(t, &mut memo, &mut in_progress, cap))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(arg_product(&per_arg, cap, predicate)?
            .into_iter()
            .map(|args| Atom {
                predicate: predicate.clone(),
                args,
            })
            .collect())
    }
}

/// Cartesian product of per-position term choices, capped. The empty product
/// yields one empty tuple (nullary predicates have exactly one ground atom).
fn arg_product(
    per_arg: &[Vec<Term>],
    cap: usize,
    context: &Symbol,
) -> Result<Vec<Vec<Term>>, SignatureError> {
    let mut count: usize = 1;
    for choices in per_arg {
        count = count.saturating_mul(choices.len());
    }
    if count > cap {
        return Err(SignatureError::GroundAtomCapExceeded {
            predicate: context.clone(),
            cap,
        });
    }
    let mut tuples: Vec<Vec<Term>> = vec![Vec::new()];
    for choices in per_arg {
        let mut next = Vec::with_capacity(tuples.len() * choices.len());
        for prefix in &tuples {
            for choice in choices {
                let mut tuple = prefix.clone();
                tuple.push(choice.clone());
                next.push(tuple);
            }
        }
        tuples = next;
    }
    Ok(tuples)
}

pub const DEFAULT_GROUND_ATOM_CAP: usize = 10_000_000;
