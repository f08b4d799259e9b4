//! Seeded random generators for signatures, models, terms and formulas.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::Model;
use crate::syntax::{BinOp, Formula, Quantifier, SymbolTable, Term, Var};

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A small signature: up to two constants, up to two functions of arity 1
/// or 2, and one to three predicates of arity 0 to 2.
pub fn random_signature(rng: &mut impl Rng) -> SymbolTable {
    let mut s = SymbolTable::new();
    for c in ["a", "b"].iter().take(rng.gen_range(0..=2)) {
        s.add_constant(c).expect("fresh symbol");
    }
    for f in ["f", "g"].iter().take(rng.gen_range(0..=2)) {
        s.add_function(f, rng.gen_range(1..=2)).expect("fresh symbol");
    }
    for p in ["p", "q", "r"].iter().take(rng.gen_range(1..=3)) {
        s.add_predicate(p, rng.gen_range(0..=2)).expect("fresh symbol");
    }
    s
}

/// A model of `symbols` with `size` elements `d0 ..` and uniformly random
/// interpretations.
pub fn random_model(symbols: &SymbolTable, size: usize, rng: &mut impl Rng) -> Model {
    let mut m = Model::with_size(size).expect("size is positive");
    for c in symbols.constants() {
        m.set_constant(c, rng.gen_range(0..size)).expect("fresh symbol");
    }
    for (f, n) in symbols.functions() {
        let values = (0..size.pow(n as u32)).map(|_| rng.gen_range(0..size)).collect();
        m.set_function(f, n, values).expect("fresh symbol");
    }
    for (p, n) in symbols.predicates() {
        let holds = (0..size.pow(n as u32)).map(|_| rng.gen_bool(0.5)).collect();
        m.set_predicate(p, n, holds).expect("fresh symbol");
    }
    m
}

/// Atom choices for term generation: variables in scope, element names and
/// constants.
pub fn random_term(
    symbols: &SymbolTable,
    vars: &[Var],
    names: &[String],
    max_depth: usize,
    rng: &mut impl Rng,
) -> Term {
    let functions: Vec<(&str, usize)> = symbols.functions().collect();
    let constants: Vec<&str> = symbols.constants().collect();
    let atoms = vars.len() + names.len() + constants.len();
    if max_depth > 0 && !functions.is_empty() && (atoms == 0 || rng.gen_bool(0.35)) {
        let &(f, n) = functions.choose(rng).expect("nonempty");
        let args = (0..n)
            .map(|_| random_term(symbols, vars, names, max_depth - 1, rng))
            .collect();
        return Term::app(f, args);
    }
    assert!(atoms > 0, "no term atoms available");
    let mut i = rng.gen_range(0..atoms);
    if i < vars.len() {
        return Term::Var(vars[i].clone());
    }
    i -= vars.len();
    if i < names.len() {
        return Term::Name(names[i].clone());
    }
    Term::Const(constants[i - names.len()].to_string())
}

/// A random prime formula. Without any term atom only 0-ary predicates
/// qualify; returns `None` if there are none.
pub fn random_prime(
    symbols: &SymbolTable,
    vars: &[Var],
    names: &[String],
    max_depth: usize,
    rng: &mut impl Rng,
) -> Option<Formula> {
    let has_atoms = !vars.is_empty() || !names.is_empty() || symbols.constants().next().is_some();
    let preds: Vec<(&str, usize)> = symbols
        .predicates()
        .filter(|&(_, n)| has_atoms || n == 0)
        .collect();
    if has_atoms && (preds.is_empty() || rng.gen_bool(0.3)) {
        return Some(Formula::Eq(
            random_term(symbols, vars, names, max_depth, rng),
            random_term(symbols, vars, names, max_depth, rng),
        ));
    }
    let &(p, n) = preds.choose(rng)?;
    Some(Formula::pred(
        p,
        (0..n)
            .map(|_| random_term(symbols, vars, names, max_depth, rng))
            .collect(),
    ))
}

/// Bounds and variable pools for [`random_formula`].
#[derive(Clone, Debug)]
pub struct FormulaShape<'a> {
    /// Variables that may occur free.
    pub free: &'a [Var],
    /// Variables that quantifiers may bind.
    pub binders: &'a [Var],
    pub names: &'a [String],
    pub max_degree: usize,
    pub max_depth: usize,
}

/// A random formula whose free variables lie in `shape.free`. Atoms may use
/// a bound variable only under its binder. Terms need at least one atom
/// source among the free variables, names and constants.
pub fn random_formula(symbols: &SymbolTable, shape: &FormulaShape<'_>, rng: &mut impl Rng) -> Formula {
    let mut scope = shape.free.to_vec();
    gen_formula(symbols, shape, shape.max_degree, &mut scope, rng)
}

fn gen_formula(
    symbols: &SymbolTable,
    shape: &FormulaShape<'_>,
    degree: usize,
    scope: &mut Vec<Var>,
    rng: &mut impl Rng,
) -> Formula {
    if degree == 0 || rng.gen_bool(0.25) {
        if let Some(f) = random_prime(symbols, scope, shape.names, shape.max_depth, rng) {
            return f;
        }
        assert!(degree > 0 && !shape.binders.is_empty(), "no prime formula can be built");
    }
    let d = degree - 1;
    let has_atoms = !scope.is_empty() || !shape.names.is_empty() || symbols.constants().next().is_some();
    if !shape.binders.is_empty() && (!has_atoms || rng.gen_bool(0.35)) {
        let x = shape.binders.choose(rng).expect("nonempty").clone();
        scope.push(x.clone());
        let body = gen_formula(symbols, shape, d, scope, rng);
        scope.pop();
        let q = if rng.gen_bool(0.5) {
            Quantifier::Forall
        } else {
            Quantifier::Exists
        };
        return Formula::quantified(q, x, body);
    }
    if rng.gen_bool(0.25) {
        return Formula::not(gen_formula(symbols, shape, d, scope, rng));
    }
    let op = *BinOp::ALL.choose(rng).expect("nonempty");
    let a = gen_formula(symbols, shape, d, scope, rng);
    let b = gen_formula(symbols, shape, d, scope, rng);
    Formula::binary(op, a, b)
}

pub fn vars(names: &[&str]) -> Vec<Var> {
    names.iter().map(|n| Var::new(*n)).collect()
}
