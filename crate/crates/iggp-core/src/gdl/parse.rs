//! Prefix-notation reader for game descriptions.
//!
//! Lines starting with `;` are comments. Validation performed here covers
//! structure only (arity consistency, ground facts, well-formed rule shapes);
//! safety and stratification are separate passes.

use super::{Atom, Literal, Program, Rule, Term, DISTINCT};
use crate::symbol::Symbol;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    UnbalancedParens { line: usize, col: usize },
    UnexpectedCloseParen { line: usize, col: usize },
    EmptyList { line: usize, col: usize },
    NonAtomHead { line: usize, col: usize, found: String },
    EmptyRuleBody { line: usize, col: usize },
    NonGroundFact { line: usize, col: usize, fact: String },
    ArityMismatch { symbol: Symbol, first: usize, second: usize },
    ReservedWord { line: usize, col: usize, word: String },
    UnsupportedConnective { line: usize, col: usize, word: String },
    NullaryCompound { line: usize, col: usize, functor: String },
    VariableOutsideRule { line: usize, col: usize, name: String },
    EmptyVariableName { line: usize, col: usize },
    DistinctInHead { line: usize, col: usize },
    BadDistinctArity { line: usize, col: usize, arity: usize },
    RoleNotConstant { fact: String },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::UnbalancedParens { line, col } => {
                write!(f, "{line}:{col}: unbalanced parentheses (missing `)`)")
            }
            ParseError::UnexpectedCloseParen { line, col } => {
                write!(f, "{line}:{col}: unexpected `)`")
            }
            ParseError::EmptyList { line, col } => write!(f, "{line}:{col}: empty list `()`"),
            ParseError::NonAtomHead { line, col, found } => {
                write!(f, "{line}:{col}: rule head must be an atom, found `{found}`")
            }
            ParseError::EmptyRuleBody { line, col } => {
                write!(f, "{line}:{col}: rule marker `<=` requires at least one body literal")
            }
            ParseError::NonGroundFact { line, col, fact } => {
                write!(f, "{line}:{col}: fact `{fact}` contains variables")
            }
            ParseError::ArityMismatch { symbol, first, second } => {
                write!(f, "symbol `{symbol}` used with conflicting arities {first} and {second}")
            }
            ParseError::ReservedWord { line, col, word } => {
                write!(f, "{line}:{col}: `{word}` cannot be used as a predicate or functor")
            }
            ParseError::UnsupportedConnective { line, col, word } => {
                write!(f, "{line}:{col}: connective `{word}` is not supported; write plain rules")
            }
            ParseError::NullaryCompound { line, col, functor } => {
                write!(f, "{line}:{col}: `({functor})` is not a term; write the bare constant")
            }
            ParseError::VariableOutsideRule { line, col, name } => {
                write!(f, "{line}:{col}: variable `?{name}` cannot stand alone as an atom")
            }
            ParseError::EmptyVariableName { line, col } => {
                write!(f, "{line}:{col}: `?` must be followed by a variable name")
            }
            ParseError::DistinctInHead { line, col } => {
                write!(f, "{line}:{col}: `distinct` cannot be a rule head")
            }
            ParseError::BadDistinctArity { line, col, arity } => {
                write!(f, "{line}:{col}: `distinct` takes 2 arguments, found {arity}")
            }
            ParseError::RoleNotConstant { fact } => {
                write!(f, "role fact `{fact}` must name a single constant")
            }
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug)]
enum SExpr {
    Sym(String, usize, usize),
    List(Vec<SExpr>, usize, usize),
}

impl SExpr {
    fn pos(&self) -> (usize, usize) {
        match self {
            SExpr::Sym(_, l, c) | SExpr::List(_, l, c) => (*l, *c),
        }
    }
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Reader<'a> {
    fn new(text: &'a str) -> Self {
        Reader {
            chars: text.chars().peekable(),
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == ';' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn read_all(&mut self) -> Result<Vec<SExpr>, ParseError> {
        let mut out = Vec::new();
        loop {
            self.skip_trivia();
            if self.chars.peek().is_none() {
                return Ok(out);
            }
            out.push(self.read_expr()?);
        }
    }

    fn read_expr(&mut self) -> Result<SExpr, ParseError> {
        self.skip_trivia();
        let (line, col) = (self.line, self.col);
        match self.chars.peek() {
            None => Err(ParseError::UnbalancedParens { line, col }),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.chars.peek() {
                        None => return Err(ParseError::UnbalancedParens { line, col }),
                        Some(')') => {
                            self.bump();
                            return Ok(SExpr::List(items, line, col));
                        }
                        Some(_) => items.push(self.read_expr()?),
                    }
                }
            }
            Some(')') => Err(ParseError::UnexpectedCloseParen { line, col }),
            Some(_) => {
                let mut tok = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    tok.push(c);
                    self.bump();
                }
                Ok(SExpr::Sym(tok, line, col))
            }
        }
    }
}

const RESERVED: &[&str] = &["<=", "not"];
const CONNECTIVES: &[&str] = &["or", "and", "if", "=>"];

struct Builder {
    predicate_arity: BTreeMap<Symbol, usize>,
    functor_arity: BTreeMap<Symbol, usize>,
}

impl Builder {
    fn record(map: &mut BTreeMap<Symbol, usize>, name: &Symbol, arity: usize) -> Result<(), ParseError> {
        match map.get(name) {
            Some(&seen) if seen != arity => Err(ParseError::ArityMismatch {
                symbol: name.clone(),
                first: seen,
                second: arity,
            }),
            Some(_) => Ok(()),
            None => {
                map.insert(name.clone(), arity);
                Ok(())
            }
        }
    }

    fn check_name(word: &str, line: usize, col: usize) -> Result<(), ParseError> {
        if CONNECTIVES.contains(&word) {
            return Err(ParseError::UnsupportedConnective {
                line,
                col,
                word: word.to_string(),
            });
        }
        if RESERVED.contains(&word) {
            return Err(ParseError::ReservedWord {
                line,
                col,
                word: word.to_string(),
            });
        }
        Ok(())
    }

    fn term(&mut self, expr: &SExpr) -> Result<Term, ParseError> {
        match expr {
            SExpr::Sym(tok, line, col) => {
                if let Some(name) = tok.strip_prefix('?') {
                    if name.is_empty() {
                        return Err(ParseError::EmptyVariableName { line: *line, col: *col });
                    }
                    Ok(Term::Variable(Symbol::new(name)))
                } else {
                    Ok(Term::Constant(Symbol::new(tok)))
                }
            }
            SExpr::List(items, line, col) => {
                let (functor, rest) = match items.split_first() {
                    None => return Err(ParseError::EmptyList { line: *line, col: *col }),
                    Some(split) => split,
                };
                let name = match functor {
                    SExpr::Sym(tok, fl, fc) => {
                        if tok.starts_with('?') {
                            return Err(ParseError::NonAtomHead {
                                line: *fl,
                                col: *fc,
                                found: tok.clone(),
                            });
                        }
                        Self::check_name(tok, *fl, *fc)?;
                        Symbol::new(tok)
                    }
                    SExpr::List(_, fl, fc) => {
                        return Err(ParseError::NonAtomHead {
                            line: *fl,
                            col: *fc,
                            found: "(...)".to_string(),
                        })
                    }
                };
                if rest.is_empty() {
                    return Err(ParseError::NullaryCompound {
                        line: *line,
                        col: *col,
                        functor: name.to_string(),
                    });
                }
                let args = rest.iter().map(|e| self.term(e)).collect::<Result<Vec<_>, _>>()?;
                Self::record(&mut self.functor_arity, &name, args.len())?;
                Ok(Term::Compound(name, args))
            }
        }
    }

    fn atom(&mut self, expr: &SExpr) -> Result<Atom, ParseError> {
        match expr {
            SExpr::Sym(tok, line, col) => {
                if let Some(name) = tok.strip_prefix('?') {
                    return Err(ParseError::VariableOutsideRule {
                        line: *line,
                        col: *col,
                        name: name.to_string(),
                    });
                }
                Self::check_name(tok, *line, *col)?;
                let atom = Atom::nullary(tok);
                Self::record(&mut self.predicate_arity, &atom.predicate, 0)?;
                Ok(atom)
            }
            SExpr::List(items, line, col) => {
                let (head, rest) = match items.split_first() {
                    None => return Err(ParseError::EmptyList { line: *line, col: *col }),
                    Some(split) => split,
                };
                let name = match head {
                    SExpr::Sym(tok, hl, hc) => {
                        if tok.starts_with('?') {
                            return Err(ParseError::NonAtomHead {
                                line: *hl,
                                col: *hc,
                                found: tok.clone(),
                            });
                        }
                        Self::check_name(tok, *hl, *hc)?;
                        Symbol::new(tok)
                    }
                    SExpr::List(_, hl, hc) => {
                        return Err(ParseError::NonAtomHead {
                            line: *hl,
                            col: *hc,
                            found: "(...)".to_string(),
                        })
                    }
                };
                // `(terminal)` and bare `terminal` denote the same nullary atom.
                let args = rest.iter().map(|e| self.term(e)).collect::<Result<Vec<_>, _>>()?;
                if name.as_str() == DISTINCT && args.len() != 2 {
                    return Err(ParseError::BadDistinctArity {
                        line: *line,
                        col: *col,
                        arity: args.len(),
                    });
                }
                if name.as_str() != DISTINCT {
                    Self::record(&mut self.predicate_arity, &name, args.len())?;
                }
                Ok(Atom { predicate: name, args })
            }
        }
    }
}

fn is_rule_marker(expr: &SExpr) -> bool {
    match expr {
        SExpr::List(items, _, _) => matches!(items.first(), Some(SExpr::Sym(tok, _, _)) if tok == "<="),
        SExpr::Sym(_, _, _) => false,
    }
}

/// Rename variables to `v0`, `v1`, ... in first-occurrence order (head first,
/// then body literals left to right), so structural equality on rules is
/// alpha-equivalence.
fn normalize_rule(rule: Rule) -> Rule {
    let mut order: Vec<Symbol> = Vec::new();
    rule.head.args.iter().for_each(|t| t.collect_variables(&mut order));
    for lit in &rule.body {
        for t in &lit.atom().args {
            t.collect_variables(&mut order);
        }
    }
    let renames: BTreeMap<Symbol, Symbol> = order
        .iter()
        .enumerate()
        .map(|(i, v)| (v.clone(), Symbol::new(&format!("v{i}"))))
        .collect();
    fn rename_term(t: &Term, renames: &BTreeMap<Symbol, Symbol>) -> Term {
        match t {
            Term::Constant(c) => Term::Constant(c.clone()),
            Term::Variable(v) => Term::Variable(renames[v].clone()),
            Term::Compound(f, args) => {
                Term::Compound(f.clone(), args.iter().map(|a| rename_term(a, renames)).collect())
            }
        }
    }
    let rename_atom = |a: &Atom| Atom {
        predicate: a.predicate.clone(),
        args: a.args.iter().map(|t| rename_term(t, &renames)).collect(),
    };
    Rule {
        head: rename_atom(&rule.head),
        body: rule
            .body
            .iter()
            .map(|lit| match lit {
                Literal::Pos(a) => Literal::Pos(rename_atom(a)),
                Literal::Neg(a) => Literal::Neg(rename_atom(a)),
            })
            .collect(),
    }
}

/// Parse a full game description. The result is validated for structure:
/// fixed arities, ground facts, non-empty rule bodies, `distinct` only in
/// bodies. Safety and stratification are checked by [`super::validate_safety`]
/// and [`super::stratify`].
pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let exprs = Reader::new(text).read_all()?;
    let mut builder = Builder {
        predicate_arity: BTreeMap::new(),
        functor_arity: BTreeMap::new(),
    };
    let mut facts: Vec<Atom> = Vec::new();
    let mut rules: Vec<Rule> = Vec::new();
    let mut seen_facts = std::collections::BTreeSet::new();

    for expr in &exprs {
        if is_rule_marker(expr) {
            let (items, line, col) = match expr {
                SExpr::List(items, l, c) => (items, *l, *c),
                SExpr::Sym(..) => unreachable!(),
            };
            let head_expr = items.get(1).ok_or(ParseError::NonAtomHead {
                line,
                col,
                found: "<nothing>".to_string(),
            })?;
            if let SExpr::List(head_items, hl, hc) = head_expr {
                if let Some(SExpr::Sym(tok, ..)) = head_items.first() {
                    if tok == "not" {
                        return Err(ParseError::NonAtomHead {
                            line: *hl,
                            col: *hc,
                            found: "(not ...)".to_string(),
                        });
                    }
                    if tok == DISTINCT {
                        return Err(ParseError::DistinctInHead { line: *hl, col: *hc });
                    }
                }
            }
            let head = builder.atom(head_expr)?;
            let body_exprs = &items[2..];
            if body_exprs.is_empty() {
                return Err(ParseError::EmptyRuleBody { line, col });
            }
            let mut body = Vec::with_capacity(body_exprs.len());
            for be in body_exprs {
                let negated = match be {
                    SExpr::List(sub, ..) => {
                        matches!(sub.first(), Some(SExpr::Sym(tok, _, _)) if tok == "not")
                    }
                    SExpr::Sym(..) => false,
                };
                if negated {
                    let sub = match be {
                        SExpr::List(sub, ..) => sub,
                        SExpr::Sym(..) => unreachable!(),
                    };
                    let (line, col) = be.pos();
                    if sub.len() != 2 {
                        return Err(ParseError::NonAtomHead {
                            line,
                            col,
                            found: "(not ...)".to_string(),
                        });
                    }
                    body.push(Literal::Neg(builder.atom(&sub[1])?));
                } else {
                    body.push(Literal::Pos(builder.atom(be)?));
                }
            }
            rules.push(normalize_rule(Rule { head, body }));
        } else {
            let (line, col) = expr.pos();
            let atom = builder.atom(expr)?;
            if atom.predicate.as_str() == DISTINCT {
                return Err(ParseError::DistinctInHead { line, col });
            }
            if !atom.is_ground() {
                return Err(ParseError::NonGroundFact {
                    line,
                    col,
                    fact: atom.to_string(),
                });
            }
            if seen_facts.insert(atom.clone()) {
                facts.push(atom);
            }
        }
    }

    let mut roles = Vec::new();
    for fact in &facts {
        if fact.predicate.as_str() == "role" {
            match fact.args.as_slice() {
                [Term::Constant(name)] => roles.push(name.clone()),
                _ => {
                    return Err(ParseError::RoleNotConstant {
                        fact: fact.to_string(),
                    })
                }
            }
        }
    }

    Ok(Program::from_parts(
        facts,
        rules,
        roles,
        builder.predicate_arity,
        builder.functor_arity,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fact() {
        let p = parse_program("(succ 0 1)").unwrap();
        assert_eq!(
            p.facts,
            vec![Atom::new("succ", vec![Term::constant("0"), Term::constant("1")])]
        );
        assert!(p.rules.is_empty());
    }

    #[test]
    fn parses_rule_with_variables() {
        let p = parse_program("(<= (next (step ?n)) (true (step ?m)) (succ ?m ?n))").unwrap();
        assert_eq!(p.rules.len(), 1);
        let rule = &p.rules[0];
        // normalized: head variable first => ?n -> v0, ?m -> v1
        assert_eq!(rule.to_string(), "next(step(?v0)) :- true(step(?v1)), succ(?v1,?v0)");
    }

    #[test]
    fn empty_text_gives_empty_program() {
        let p = parse_program("").unwrap();
        assert!(p.facts.is_empty());
        assert!(p.rules.is_empty());
        assert!(p.roles.is_empty());
    }

    #[test]
    fn comments_are_ignored() {
        let p = parse_program("; a comment\n(succ 0 1) ; trailing\n").unwrap();
        assert_eq!(p.facts.len(), 1);
    }

    #[test]
    fn unbalanced_parens_error() {
        assert!(matches!(
            parse_program("(succ 0 1"),
            Err(ParseError::UnbalancedParens { .. })
        ));
        assert!(matches!(
            parse_program("(succ 0 1))"),
            Err(ParseError::UnexpectedCloseParen { .. })
        ));
    }

    #[test]
    fn arity_collision_is_rejected() {
        let err = parse_program("(succ 0 1)\n(succ 0 1 2)").unwrap_err();
        assert!(matches!(err, ParseError::ArityMismatch { ref symbol, first: 2, second: 3 } if symbol.as_str() == "succ"));
    }

    #[test]
    fn non_ground_fact_is_rejected() {
        assert!(matches!(
            parse_program("(succ ?x 1)"),
            Err(ParseError::NonGroundFact { .. })
        ));
    }

    #[test]
    fn rule_without_body_is_rejected() {
        assert!(matches!(
            parse_program("(<= (p a))"),
            Err(ParseError::EmptyRuleBody { .. })
        ));
    }

    #[test]
    fn variable_head_is_rejected() {
        assert!(matches!(
            parse_program("(<= ?x (p a))"),
            Err(ParseError::VariableOutsideRule { .. })
        ));
        assert!(matches!(
            parse_program("(<= (?x a) (p a))"),
            Err(ParseError::NonAtomHead { .. })
        ));
        assert!(matches!(
            parse_program("(<= (not (p a)) (q a))"),
            Err(ParseError::NonAtomHead { .. })
        ));
    }

    #[test]
    fn or_connective_is_rejected() {
        assert!(matches!(
            parse_program("(<= (p ?x) (or (q ?x) (r ?x)))"),
            Err(ParseError::UnsupportedConnective { .. })
        ));
    }

    #[test]
    fn distinct_cannot_be_a_head_or_fact() {
        assert!(matches!(
            parse_program("(<= (distinct a b) (p a))"),
            Err(ParseError::DistinctInHead { .. })
        ));
        assert!(matches!(
            parse_program("(distinct a b)"),
            Err(ParseError::DistinctInHead { .. })
        ));
    }

    #[test]
    fn roles_in_declaration_order() {
        let p = parse_program("(role p2) (role p1)").unwrap();
        let names: Vec<&str> = p.roles.iter().map(|s| s.as_str()).collect();
        assert_eq!(names, ["p2", "p1"]);
    }

    #[test]
    fn duplicate_facts_collapse() {
        let p = parse_program("(succ 0 1) (succ 0 1)").unwrap();
        assert_eq!(p.facts.len(), 1);
    }

    #[test]
    fn round_trip_preserves_structure() {
        let text = r#"
            (role p1) (role p2)
            (succ 0 1)
            (beats paper stone)
            (<= (next (step ?n)) (true (step ?m)) (succ ?m ?n))
            (<= (wins ?p) (does ?p ?a1) (does ?q ?a2) (distinct ?p ?q) (beats ?a1 ?a2))
            (<= terminal (true (step 3)))
            (<= (p) (not (q a)) (r a))
        "#;
        let p = parse_program(text).unwrap();
        let reparsed = parse_program(&p.to_gdl_string()).unwrap();
        assert_eq!(p, reparsed);
    }

    #[test]
    fn alpha_equivalent_rules_are_equal() {
        let a = parse_program("(<= (p ?x ?y) (q ?x) (r ?y))").unwrap();
        let b = parse_program("(<= (p ?foo ?bar) (q ?foo) (r ?bar))").unwrap();
        assert_eq!(a.rules, b.rules);
    }

    #[test]
    fn nullary_atom_paren_and_bare_forms_agree() {
        let a = parse_program("(<= (terminal) (true (step 3)))").unwrap();
        let b = parse_program("(<= terminal (true (step 3)))").unwrap();
        assert_eq!(a.rules, b.rules);
    }
}
