//! Symbols, terms and formulas of a formal mathematical system.
//!
//! Argument lists are ordinary first-order terms built from variables,
//! constants, element names and function applications. Concrete syntax is
//! s-expression based: `?x` is a variable, `#d` the name of the universe
//! element `d`, and connectives are written in prefix position.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::sexp::{self, Sexp, SexpError};

/// Keywords that can never be used as symbol names.
pub const RESERVED: &[&str] = &["=", "not", "->", "<->", "and", "or", "forall", "exists"];

/// A variable identifier, printed with a leading `?`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Var(pub String);

impl Var {
    pub fn new(name: impl Into<String>) -> Self {
        Var(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.0)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Self {
        Var(s.to_string())
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Term {
    Var(Var),
    Const(String),
    /// The name of a universe element; denotes that element in every model.
    Name(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Var::new(name))
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(name.to_string())
    }

    pub fn name(id: &str) -> Term {
        Term::Name(id.to_string())
    }

    pub fn app(f: &str, args: Vec<Term>) -> Term {
        Term::App(f.to_string(), args)
    }

    /// Collects `var(t)` into `out`.
    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) | Term::Name(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn mentions(&self, x: &Var) -> bool {
        match self {
            Term::Var(v) => v == x,
            Term::Const(_) | Term::Name(_) => false,
            Term::App(_, args) => args.iter().any(|a| a.mentions(x)),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(_) | Term::Name(_) => true,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn contains_names(&self) -> bool {
        match self {
            Term::Name(_) => true,
            Term::Var(_) | Term::Const(_) => false,
            Term::App(_, args) => args.iter().any(Term::contains_names),
        }
    }

    fn collect_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Name(n) => {
                out.insert(n.clone());
            }
            Term::Var(_) | Term::Const(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.collect_names(out)),
        }
    }

    /// Nesting depth of function applications; atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
            _ => 0,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
            _ => 1,
        }
    }

    fn push_vars_in_order(&self, out: &mut Vec<Var>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Const(_) | Term::Name(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.push_vars_in_order(out)),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Const(c) => f.write_str(c),
            Term::Name(n) => write!(f, "#{n}"),
            Term::App(g, args) => {
                write!(f, "({g}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum BinOp {
    Imp,
    Iff,
    And,
    Or,
}

impl BinOp {
    pub const ALL: [BinOp; 4] = [BinOp::Imp, BinOp::Iff, BinOp::And, BinOp::Or];

    pub fn keyword(self) -> &'static str {
        match self {
            BinOp::Imp => "->",
            BinOp::Iff => "<->",
            BinOp::And => "and",
            BinOp::Or => "or",
        }
    }

    pub fn apply(self, a: bool, b: bool) -> bool {
        match self {
            BinOp::Imp => !a || b,
            BinOp::Iff => a == b,
            BinOp::And => a && b,
            BinOp::Or => a || b,
        }
    }

    pub fn is_commutative(self) -> bool {
        !matches!(self, BinOp::Imp)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Quantifier {
    Forall,
    Exists,
}

impl Quantifier {
    pub fn keyword(self) -> &'static str {
        match self {
            Quantifier::Forall => "forall",
            Quantifier::Exists => "exists",
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Formula {
    Eq(Term, Term),
    Pred(String, Vec<Term>),
    Not(Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
}

impl Formula {
    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Eq(a, b)
    }

    pub fn pred(p: &str, args: Vec<Term>) -> Formula {
        Formula::Pred(p.to_string(), args)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn forall(x: &str, body: Formula) -> Formula {
        Formula::Forall(Var::new(x), Box::new(body))
    }

    pub fn exists(x: &str, body: Formula) -> Formula {
        Formula::Exists(Var::new(x), Box::new(body))
    }

    pub fn binary(op: BinOp, a: Formula, b: Formula) -> Formula {
        let (a, b) = (Box::new(a), Box::new(b));
        match op {
            BinOp::Imp => Formula::Imp(a, b),
            BinOp::Iff => Formula::Iff(a, b),
            BinOp::And => Formula::And(a, b),
            BinOp::Or => Formula::Or(a, b),
        }
    }

    pub fn quantified(q: Quantifier, x: Var, body: Formula) -> Formula {
        match q {
            Quantifier::Forall => Formula::Forall(x, Box::new(body)),
            Quantifier::Exists => Formula::Exists(x, Box::new(body)),
        }
    }

    pub fn as_binary(&self) -> Option<(BinOp, &Formula, &Formula)> {
        match self {
            Formula::Imp(a, b) => Some((BinOp::Imp, a, b)),
            Formula::Iff(a, b) => Some((BinOp::Iff, a, b)),
            Formula::And(a, b) => Some((BinOp::And, a, b)),
            Formula::Or(a, b) => Some((BinOp::Or, a, b)),
            _ => None,
        }
    }

    pub fn as_quantified(&self) -> Option<(Quantifier, &Var, &Formula)> {
        match self {
            Formula::Forall(x, body) => Some((Quantifier::Forall, x, body)),
            Formula::Exists(x, body) => Some((Quantifier::Exists, x, body)),
            _ => None,
        }
    }

    pub fn is_prime(&self) -> bool {
        matches!(self, Formula::Eq(..) | Formula::Pred(..))
    }

    /// Immediate subformulas, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Eq(..) | Formula::Pred(..) => vec![],
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => vec![a],
            Formula::Imp(a, b) | Formula::Iff(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                vec![a, b]
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Eq(a, b) => {
                for t in [a, b] {
                    for v in t.vars() {
                        if !bound.contains(&v) {
                            out.insert(v);
                        }
                    }
                }
            }
            Formula::Pred(_, args) => {
                for t in args {
                    for v in t.vars() {
                        if !bound.contains(&v) {
                            out.insert(v);
                        }
                    }
                }
            }
            Formula::Not(a) => a.collect_free(bound, out),
            Formula::Imp(a, b) | Formula::Iff(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                bound.push(x.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Whether `x` has a free occurrence.
    pub fn is_free(&self, x: &Var) -> bool {
        match self {
            Formula::Eq(a, b) => a.mentions(x) || b.mentions(x),
            Formula::Pred(_, args) => args.iter().any(|t| t.mentions(x)),
            Formula::Not(a) => a.is_free(x),
            Formula::Imp(a, b) | Formula::Iff(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                a.is_free(x) || b.is_free(x)
            }
            Formula::Forall(y, body) | Formula::Exists(y, body) => y != x && body.is_free(x),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Every variable occurring anywhere, bound or free, including binders.
    pub fn all_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit_terms(&mut |t| t.collect_vars(&mut out));
        self.visit_binders(&mut |x| {
            out.insert(x.clone());
        });
        out
    }

    /// Free variables in order of first free occurrence, reading the prefix
    /// form left to right.
    pub fn free_vars_in_order(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.push_free_in_order(&mut Vec::new(), &mut out);
        out
    }

    fn push_free_in_order(&self, bound: &mut Vec<Var>, out: &mut Vec<Var>) {
        let push = |t: &Term, bound: &Vec<Var>, out: &mut Vec<Var>| {
            let mut seen = Vec::new();
            t.push_vars_in_order(&mut seen);
            for v in seen {
                if !bound.contains(&v) && !out.contains(&v) {
                    out.push(v);
                }
            }
        };
        match self {
            Formula::Eq(a, b) => {
                push(a, bound, out);
                push(b, bound, out);
            }
            Formula::Pred(_, args) => args.iter().for_each(|t| push(t, bound, out)),
            Formula::Not(a) => a.push_free_in_order(bound, out),
            Formula::Imp(a, b) | Formula::Iff(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                a.push_free_in_order(bound, out);
                b.push_free_in_order(bound, out);
            }
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                bound.push(x.clone());
                body.push_free_in_order(bound, out);
                bound.pop();
            }
        }
    }

    /// Prime formulas have degree 0; each connective or quantifier adds one
    /// to the largest degree among its immediate subformulas.
    pub fn degree(&self) -> usize {
        match self {
            Formula::Eq(..) | Formula::Pred(..) => 0,
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => a.degree() + 1,
            Formula::Imp(a, b) | Formula::Iff(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                a.degree().max(b.degree()) + 1
            }
        }
    }

    /// Node count, counting every term node and every connective.
    pub fn size(&self) -> usize {
        match self {
            Formula::Eq(a, b) => 1 + a.size() + b.size(),
            Formula::Pred(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => 1 + a.size(),
            Formula::Imp(a, b) | Formula::Iff(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    /// Universal closure over the free variables in first-occurrence order:
    /// the first variable becomes the outermost quantifier.
    pub fn gen(&self) -> Formula {
        self.free_vars_in_order()
            .into_iter()
            .rev()
            .fold(self.clone(), |acc, x| Formula::Forall(x, Box::new(acc)))
    }

    pub fn visit_terms(&self, f: &mut impl FnMut(&Term)) {
        match self {
            Formula::Eq(a, b) => {
                f(a);
                f(b);
            }
            Formula::Pred(_, args) => args.iter().for_each(&mut *f),
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => a.visit_terms(f),
            Formula::Imp(a, b) | Formula::Iff(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                a.visit_terms(f);
                b.visit_terms(f);
            }
        }
    }

    fn visit_binders(&self, f: &mut impl FnMut(&Var)) {
        match self {
            Formula::Eq(..) | Formula::Pred(..) => {}
            Formula::Not(a) => a.visit_binders(f),
            Formula::Imp(a, b) | Formula::Iff(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                a.visit_binders(f);
                b.visit_binders(f);
            }
            Formula::Forall(x, a) | Formula::Exists(x, a) => {
                f(x);
                a.visit_binders(f);
            }
        }
    }

    pub fn contains_names(&self) -> bool {
        let mut found = false;
        self.visit_terms(&mut |t| found |= t.contains_names());
        found
    }

    pub fn names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_terms(&mut |t| t.collect_names(&mut out));
        out
    }

    pub fn max_term_depth(&self) -> usize {
        let mut depth = 0;
        self.visit_terms(&mut |t| depth = depth.max(t.depth()));
        depth
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Eq(a, b) => write!(f, "(= {a} {b})"),
            Formula::Pred(p, args) if args.is_empty() => f.write_str(p),
            Formula::Pred(p, args) => {
                write!(f, "({p}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
            Formula::Not(a) => write!(f, "(not {a})"),
            Formula::Forall(x, a) => write!(f, "(forall {x} {a})"),
            Formula::Exists(x, a) => write!(f, "(exists {x} {a})"),
            other => {
                let (op, a, b) = other.as_binary().expect("remaining variants are binary");
                write!(f, "({} {a} {b})", op.keyword())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error(transparent)]
    Sexp(#[from] SexpError),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("`{symbol}` expects {expected} argument(s), found {found}")]
    Arity {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("malformed {what}: `{text}`")]
    Malformed { what: &'static str, text: String },
    #[error("quantifier binder must be a variable, found `{0}`")]
    BadBinder(String),
    #[error("invalid symbol name `{0}`")]
    BadSymbolName(String),
    #[error("symbol `{0}` declared more than once")]
    DuplicateSymbol(String),
    #[error("basis axiom {index} mentions element names")]
    NameInAxiom { index: usize },
    #[error("basis axiom {index}: {source}")]
    Axiom {
        index: usize,
        #[source]
        source: Box<SyntaxError>,
    },
}

fn malformed(what: &'static str, s: &Sexp) -> SyntaxError {
    SyntaxError::Malformed {
        what,
        text: s.to_string(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolKind {
    Constant,
    Function(usize),
    Predicate(usize),
}

/// Declared constants, function symbols and predicate symbols.
///
/// Names live in their own `#` namespace and variables in the `?`
/// namespace, so neither can clash with a declared symbol.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymbolTable {
    constants: BTreeSet<String>,
    functions: BTreeMap<String, usize>,
    predicates: BTreeMap<String, usize>,
}

fn valid_symbol_name(name: &str) -> bool {
    !name.is_empty()
        && !name.starts_with('?')
        && !name.starts_with('#')
        && !RESERVED.contains(&name)
        && name
            .chars()
            .all(|c| !(c.is_whitespace() || matches!(c, '(' | ')' | '"' | ';')))
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    fn check_new(&self, name: &str) -> Result<(), SyntaxError> {
        if !valid_symbol_name(name) {
            return Err(SyntaxError::BadSymbolName(name.to_string()));
        }
        if self.kind(name).is_some() {
            return Err(SyntaxError::DuplicateSymbol(name.to_string()));
        }
        Ok(())
    }

    pub fn add_constant(&mut self, name: &str) -> Result<(), SyntaxError> {
        self.check_new(name)?;
        self.constants.insert(name.to_string());
        Ok(())
    }

    pub fn add_function(&mut self, name: &str, arity: usize) -> Result<(), SyntaxError> {
        if arity == 0 {
            return self.add_constant(name);
        }
        self.check_new(name)?;
        self.functions.insert(name.to_string(), arity);
        Ok(())
    }

    pub fn add_predicate(&mut self, name: &str, arity: usize) -> Result<(), SyntaxError> {
        self.check_new(name)?;
        self.predicates.insert(name.to_string(), arity);
        Ok(())
    }

    /// Builder-style helpers for tests and generators; panic on invalid input.
    pub fn with_constant(mut self, name: &str) -> Self {
        self.add_constant(name).expect("valid constant");
        self
    }

    pub fn with_function(mut self, name: &str, arity: usize) -> Self {
        self.add_function(name, arity).expect("valid function");
        self
    }

    pub fn with_predicate(mut self, name: &str, arity: usize) -> Self {
        self.add_predicate(name, arity).expect("valid predicate");
        self
    }

    pub fn kind(&self, name: &str) -> Option<SymbolKind> {
        if self.constants.contains(name) {
            Some(SymbolKind::Constant)
        } else if let Some(&n) = self.functions.get(name) {
            Some(SymbolKind::Function(n))
        } else {
            self.predicates.get(name).map(|&n| SymbolKind::Predicate(n))
        }
    }

    pub fn constants(&self) -> impl Iterator<Item = &str> {
        self.constants.iter().map(String::as_str)
    }

    pub fn functions(&self) -> impl Iterator<Item = (&str, usize)> {
        self.functions.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn predicates(&self) -> impl Iterator<Item = (&str, usize)> {
        self.predicates.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn predicate_arity(&self, name: &str) -> Option<usize> {
        self.predicates.get(name).copied()
    }

    pub fn function_arity(&self, name: &str) -> Option<usize> {
        self.functions.get(name).copied()
    }

    pub fn is_constant(&self, name: &str) -> bool {
        self.constants.contains(name)
    }

    /// Checks that a programmatically built term respects declared arities.
    pub fn check_term(&self, t: &Term) -> Result<(), SyntaxError> {
        match t {
            Term::Var(_) | Term::Name(_) => Ok(()),
            Term::Const(c) => match self.kind(c) {
                Some(SymbolKind::Constant) => Ok(()),
                Some(SymbolKind::Function(n)) => Err(SyntaxError::Arity {
                    symbol: c.clone(),
                    expected: n,
                    found: 0,
                }),
                _ => Err(SyntaxError::UnknownSymbol(c.clone())),
            },
            Term::App(g, args) => {
                match self.kind(g) {
                    Some(SymbolKind::Function(n)) if n == args.len() => {}
                    Some(SymbolKind::Function(n)) => {
                        return Err(SyntaxError::Arity {
                            symbol: g.clone(),
                            expected: n,
                            found: args.len(),
                        })
                    }
                    Some(SymbolKind::Constant) => {
                        return Err(SyntaxError::Arity {
                            symbol: g.clone(),
                            expected: 0,
                            found: args.len(),
                        })
                    }
                    _ => return Err(SyntaxError::UnknownSymbol(g.clone())),
                }
                args.iter().try_for_each(|a| self.check_term(a))
            }
        }
    }

    pub fn check_formula(&self, f: &Formula) -> Result<(), SyntaxError> {
        match f {
            Formula::Eq(a, b) => {
                self.check_term(a)?;
                self.check_term(b)
            }
            Formula::Pred(p, args) => {
                match self.predicate_arity(p) {
                    Some(n) if n == args.len() => {}
                    Some(n) => {
                        return Err(SyntaxError::Arity {
                            symbol: p.clone(),
                            expected: n,
                            found: args.len(),
                        })
                    }
                    None => return Err(SyntaxError::UnknownSymbol(p.clone())),
                }
                args.iter().try_for_each(|a| self.check_term(a))
            }
            other => other
                .children()
                .into_iter()
                .try_for_each(|c| self.check_formula(c)),
        }
    }

    pub fn term_from_sexp(&self, s: &Sexp) -> Result<Term, SyntaxError> {
        match s {
            Sexp::Atom(a) => {
                if let Some(v) = a.strip_prefix('?') {
                    if v.is_empty() {
                        return Err(malformed("variable", s));
                    }
                    Ok(Term::Var(Var::new(v)))
                } else if let Some(n) = a.strip_prefix('#') {
                    if n.is_empty() {
                        return Err(malformed("name", s));
                    }
                    Ok(Term::Name(n.to_string()))
                } else {
                    match self.kind(a) {
                        Some(SymbolKind::Constant) => Ok(Term::Const(a.clone())),
                        Some(SymbolKind::Function(n)) => Err(SyntaxError::Arity {
                            symbol: a.clone(),
                            expected: n,
                            found: 0,
                        }),
                        _ => Err(SyntaxError::UnknownSymbol(a.clone())),
                    }
                }
            }
            Sexp::List(items) => {
                let head = items
                    .first()
                    .and_then(Sexp::as_atom)
                    .ok_or_else(|| malformed("term", s))?;
                let args = items[1..]
                    .iter()
                    .map(|a| self.term_from_sexp(a))
                    .collect::<Result<Vec<_>, _>>()?;
                let t = Term::App(head.to_string(), args);
                self.check_term(&t)?;
                Ok(t)
            }
            Sexp::Str(_) => Err(malformed("term", s)),
        }
    }

    pub fn formula_from_sexp(&self, s: &Sexp) -> Result<Formula, SyntaxError> {
        let items = match s {
            Sexp::Atom(a) => {
                return match self.predicate_arity(a) {
                    Some(0) => Ok(Formula::Pred(a.clone(), vec![])),
                    Some(n) => Err(SyntaxError::Arity {
                        symbol: a.clone(),
                        expected: n,
                        found: 0,
                    }),
                    None => Err(SyntaxError::UnknownSymbol(a.clone())),
                }
            }
            Sexp::Str(_) => return Err(malformed("formula", s)),
            Sexp::List(items) => items,
        };
        let head = items
            .first()
            .and_then(Sexp::as_atom)
            .ok_or_else(|| malformed("formula", s))?;
        let rest = &items[1..];
        let expect = |n: usize| {
            if rest.len() == n {
                Ok(())
            } else {
                Err(SyntaxError::Arity {
                    symbol: head.to_string(),
                    expected: n,
                    found: rest.len(),
                })
            }
        };
        match head {
            "=" => {
                expect(2)?;
                Ok(Formula::Eq(
                    self.term_from_sexp(&rest[0])?,
                    self.term_from_sexp(&rest[1])?,
                ))
            }
            "not" => {
                expect(1)?;
                Ok(Formula::not(self.formula_from_sexp(&rest[0])?))
            }
            "->" | "<->" | "and" | "or" => {
                expect(2)?;
                let op = BinOp::ALL
                    .into_iter()
                    .find(|op| op.keyword() == head)
                    .expect("keyword matched above");
                Ok(Formula::binary(
                    op,
                    self.formula_from_sexp(&rest[0])?,
                    self.formula_from_sexp(&rest[1])?,
                ))
            }
            "forall" | "exists" => {
                expect(2)?;
                let binder = rest[0]
                    .as_atom()
                    .and_then(|a| a.strip_prefix('?'))
                    .filter(|v| !v.is_empty())
                    .ok_or_else(|| SyntaxError::BadBinder(rest[0].to_string()))?;
                let body = self.formula_from_sexp(&rest[1])?;
                let q = if head == "forall" {
                    Quantifier::Forall
                } else {
                    Quantifier::Exists
                };
                Ok(Formula::quantified(q, Var::new(binder), body))
            }
            p => {
                let args = rest
                    .iter()
                    .map(|a| self.term_from_sexp(a))
                    .collect::<Result<Vec<_>, _>>()?;
                let f = Formula::Pred(p.to_string(), args);
                self.check_formula(&f)?;
                Ok(f)
            }
        }
    }

    pub fn parse_term(&self, text: &str) -> Result<Term, SyntaxError> {
        self.term_from_sexp(&sexp::parse_one(text)?)
    }

    pub fn parse_formula(&self, text: &str) -> Result<Formula, SyntaxError> {
        self.formula_from_sexp(&sexp::parse_one(text)?)
    }
}

pub fn parse_term(text: &str, symbols: &SymbolTable) -> Result<Term, SyntaxError> {
    symbols.parse_term(text)
}

pub fn parse_formula(text: &str, symbols: &SymbolTable) -> Result<Formula, SyntaxError> {
    symbols.parse_formula(text)
}

/// A formal system: its signature and name-free basis axioms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SystemSpec {
    pub symbols: SymbolTable,
    pub basis_axioms: Vec<Formula>,
}

impl SystemSpec {
    pub fn new(symbols: SymbolTable, basis_axioms: Vec<Formula>) -> Result<Self, SyntaxError> {
        for (index, ax) in basis_axioms.iter().enumerate() {
            symbols
                .check_formula(ax)
                .map_err(|e| SyntaxError::Axiom {
                    index,
                    source: Box::new(e),
                })?;
            if ax.contains_names() {
                return Err(SyntaxError::NameInAxiom { index });
            }
        }
        Ok(SystemSpec {
            symbols,
            basis_axioms,
        })
    }

    /// Reads a `.fms` system file.
    pub fn parse(text: &str) -> Result<Self, SyntaxError> {
        let top = sexp::parse_one(text)?;
        let items = match top.as_list() {
            Some(items) if top.head() == Some("system") => &items[1..],
            _ => return Err(malformed("system file", &top)),
        };
        let mut symbols = SymbolTable::new();
        let mut axiom_texts = Vec::new();
        for section in items {
            let entries = section
                .as_list()
                .ok_or_else(|| malformed("system section", section))?;
            let decl = |e: &Sexp| -> Result<(String, usize), SyntaxError> {
                match e.as_list() {
                    Some([Sexp::Atom(name), Sexp::Atom(n)]) => n
                        .parse()
                        .map(|n| (name.clone(), n))
                        .map_err(|_| malformed("arity", e)),
                    _ => Err(malformed("declaration", e)),
                }
            };
            match section.head() {
                Some("constants") => {
                    for e in &entries[1..] {
                        let (name, n) = decl(e)?;
                        if n != 0 {
                            return Err(SyntaxError::Arity {
                                symbol: name,
                                expected: 0,
                                found: n,
                            });
                        }
                        symbols.add_constant(&name)?;
                    }
                }
                Some("functions") => {
                    for e in &entries[1..] {
                        let (name, n) = decl(e)?;
                        if n == 0 {
                            return Err(malformed("function arity", e));
                        }
                        symbols.add_function(&name, n)?;
                    }
                }
                Some("predicates") => {
                    for e in &entries[1..] {
                        let (name, n) = decl(e)?;
                        symbols.add_predicate(&name, n)?;
                    }
                }
                Some("axioms") => {
                    for e in &entries[1..] {
                        let text = e.as_str().ok_or_else(|| malformed("axiom", e))?;
                        axiom_texts.push(text.to_string());
                    }
                }
                _ => return Err(malformed("system section", section)),
            }
        }
        let axioms = axiom_texts
            .iter()
            .enumerate()
            .map(|(index, t)| {
                symbols.parse_formula(t).map_err(|e| SyntaxError::Axiom {
                    index,
                    source: Box::new(e),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        SystemSpec::new(symbols, axioms)
    }
}

impl fmt::Display for SystemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "(system")?;
        write!(f, "  (constants")?;
        for c in self.symbols.constants() {
            write!(f, " ({c} 0)")?;
        }
        writeln!(f, ")")?;
        write!(f, "  (functions")?;
        for (g, n) in self.symbols.functions() {
            write!(f, " ({g} {n})")?;
        }
        writeln!(f, ")")?;
        write!(f, "  (predicates")?;
        for (p, n) in self.symbols.predicates() {
            write!(f, " ({p} {n})")?;
        }
        writeln!(f, ")")?;
        write!(f, "  (axioms")?;
        for ax in &self.basis_axioms {
            write!(f, "\n    {}", sexp::quote(&ax.to_string()))?;
        }
        writeln!(f, "))")
    }
}
