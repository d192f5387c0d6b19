//! Game description language core: terms, atoms, rules, validated programs.
//!
//! A program is a set of ground facts plus rules with optional negated body
//! literals. Surface syntax is prefix S-expressions: `(succ 0 1)` is a fact,
//! `(<= (next (step ?n)) (true (step ?m)) (succ ?m ?n))` is a rule, `(not x)`
//! marks a negative literal, and tokens beginning with `?` are variables.

mod parse;
mod strata;

pub use parse::{parse_program, ParseError};
pub use strata::{dependency_graph, stratify, validate_safety, DepEdge, DepGraph, SafetyError, Strata, StratifyError};

use crate::symbol::Symbol;
use std::collections::BTreeMap;
use std::fmt;

/// A first-order term. Compound arity is at least 1; nullary applications are
/// constants.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Constant(Symbol),
    Variable(Symbol),
    Compound(Symbol, Vec<Term>),
}

impl Term {
    pub fn constant(name: &str) -> Term {
        Term::Constant(Symbol::new(name))
    }

    pub fn variable(name: &str) -> Term {
        Term::Variable(Symbol::new(name))
    }

    pub fn compound(functor: &str, args: Vec<Term>) -> Term {
        Term::Compound(Symbol::new(functor), args)
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Constant(_) => true,
            Term::Variable(_) => false,
            Term::Compound(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Nesting depth: constants and variables are 0, a compound is one more
    /// than its deepest argument.
    pub fn depth(&self) -> usize {
        match self {
            Term::Constant(_) | Term::Variable(_) => 0,
            Term::Compound(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub(crate) fn collect_variables(&self, out: &mut Vec<Symbol>) {
        match self {
            Term::Constant(_) => {}
            Term::Variable(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Compound(_, args) => {
                for a in args {
                    a.collect_variables(out);
                }
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Constant(c) => write!(f, "{c}"),
            Term::Variable(v) => write!(f, "?{v}"),
            Term::Compound(functor, args) => {
                write!(f, "{functor}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A predicate applied to terms. `args` may be empty (nullary `terminal`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub predicate: Symbol,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: &str, args: Vec<Term>) -> Atom {
        Atom {
            predicate: Symbol::new(predicate),
            args,
        }
    }

    pub fn nullary(predicate: &str) -> Atom {
        Atom::new(predicate, Vec::new())
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn variables(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        for a in &self.args {
            a.collect_variables(&mut out);
        }
        out
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.predicate)?;
        if !self.args.is_empty() {
            write!(f, "(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// A body literal: an atom, possibly negated.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Literal {
    Pos(Atom),
    Neg(Atom),
}

impl Literal {
    pub fn atom(&self) -> &Atom {
        match self {
            Literal::Pos(a) | Literal::Neg(a) => a,
        }
    }

    pub fn is_positive(&self) -> bool {
        matches!(self, Literal::Pos(_))
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Pos(a) => write!(f, "{a}"),
            Literal::Neg(a) => write!(f, "not {a}"),
        }
    }
}

/// A rule `head :- body`. The body is never empty; bodyless statements parse
/// as facts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    pub head: Atom,
    pub body: Vec<Literal>,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} :- ", self.head)?;
        for (i, lit) in self.body.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{lit}")?;
        }
        Ok(())
    }
}

/// The builtin inequality predicate. It may appear only in rule bodies and is
/// evaluated syntactically on ground arguments.
pub const DISTINCT: &str = "distinct";

/// A validated game description: ground facts, stratifiable rules, and the
/// declared roles. Immutable after construction and safe to share across
/// threads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    pub facts: Vec<Atom>,
    pub rules: Vec<Rule>,
    pub roles: Vec<Symbol>,
    predicate_arity: BTreeMap<Symbol, usize>,
    functor_arity: BTreeMap<Symbol, usize>,
}

impl Program {
    pub(crate) fn from_parts(
        facts: Vec<Atom>,
        rules: Vec<Rule>,
        roles: Vec<Symbol>,
        predicate_arity: BTreeMap<Symbol, usize>,
        functor_arity: BTreeMap<Symbol, usize>,
    ) -> Program {
        Program {
            facts,
            rules,
            roles,
            predicate_arity,
            functor_arity,
        }
    }

    pub fn predicate_arity(&self, predicate: &str) -> Option<usize> {
        self.predicate_arity.get(predicate).copied()
    }

    pub fn predicates(&self) -> impl Iterator<Item = &Symbol> {
        self.predicate_arity.keys()
    }

    pub fn functors(&self) -> impl Iterator<Item = (&Symbol, usize)> {
        self.functor_arity.iter().map(|(f, a)| (f, *a))
    }

    /// Canonical surface form; feeding it back to [`parse_program`] yields a
    /// structurally equal program.
    pub fn to_gdl_string(&self) -> String {
        let mut out = String::new();
        for fact in &self.facts {
            out.push_str(&sexpr_atom(fact));
            out.push('\n');
        }
        for rule in &self.rules {
            out.push_str("(<= ");
            out.push_str(&sexpr_atom(&rule.head));
            for lit in &rule.body {
                out.push(' ');
                match lit {
                    Literal::Pos(a) => out.push_str(&sexpr_atom(a)),
                    Literal::Neg(a) => {
                        out.push_str("(not ");
                        out.push_str(&sexpr_atom(a));
                        out.push(')');
                    }
                }
            }
            out.push_str(")\n");
        }
        out
    }
}

fn sexpr_term(term: &Term) -> String {
    match term {
        Term::Constant(c) => c.to_string(),
        Term::Variable(v) => format!("?{v}"),
        Term::Compound(functor, args) => {
            let mut s = format!("({functor}");
            for a in args {
                s.push(' ');
                s.push_str(&sexpr_term(a));
            }
            s.push(')');
            s
        }
    }
}

fn sexpr_atom(atom: &Atom) -> String {
    if atom.args.is_empty() {
        return atom.predicate.to_string();
    }
    let mut s = format!("({}", atom.predicate);
    for a in &atom.args {
        s.push(' ');
        s.push_str(&sexpr_term(a));
    }
    s.push(')');
    s
}
