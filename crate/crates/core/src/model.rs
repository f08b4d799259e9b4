//! Finite structures, term denotation and truth evaluation.
//!
//! Elements are addressed internally by their position in the universe
//! list. Every element id doubles as a name: the term `#id` denotes it.
//! Quantifiers range over the names, which suffices because a formula with
//! a ground term substituted has the same truth value as the formula with
//! the name of that term's denotation substituted.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::sexp::{self, Sexp, SexpError};
use crate::subst::subst_unchecked;
use crate::syntax::{Formula, SymbolKind, SymbolTable, SyntaxError, SystemSpec, Term, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TruthValue {
    Bottom,
    Top,
}

impl TruthValue {
    pub fn is_top(self) -> bool {
        self == TruthValue::Top
    }
}

impl From<bool> for TruthValue {
    fn from(b: bool) -> Self {
        if b {
            TruthValue::Top
        } else {
            TruthValue::Bottom
        }
    }
}

impl From<TruthValue> for bool {
    fn from(v: TruthValue) -> bool {
        v.is_top()
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TruthValue::Top => "⊤",
            TruthValue::Bottom => "⊥",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error(transparent)]
    Sexp(#[from] SexpError),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("the universe must be nonempty")]
    EmptyUniverse,
    #[error("element `{0}` listed twice")]
    DuplicateElement(String),
    #[error("invalid element id `{0}`")]
    BadElementId(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("symbol `{0}` is not interpreted")]
    Uninterpreted(String),
    #[error("symbol `{0}` is interpreted more than once")]
    DuplicateInterpretation(String),
    #[error("symbol `{symbol}` has arity {expected}, interpretation has arity {found}")]
    Arity {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("function `{symbol}` is undefined at ({})", .args.join(" "))]
    PartialFunction { symbol: String, args: Vec<String> },
    #[error("function `{symbol}` has conflicting values at ({})", .args.join(" "))]
    ConflictingEntry { symbol: String, args: Vec<String> },
    #[error("malformed {what}: `{text}`")]
    Malformed { what: &'static str, text: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("formula is not closed; free variables: {}", display_vars(.0))]
    OpenFormula(Vec<Var>),
    #[error("term is not ground: variable {0} is unbound")]
    Unbound(Var),
    #[error("symbol `{0}` is not interpreted")]
    Uninterpreted(String),
    #[error("`#{0}` does not name an element")]
    UnknownName(String),
    #[error("symbol `{symbol}` applied to {found} argument(s), interpretation takes {expected}")]
    Arity {
        symbol: String,
        expected: usize,
        found: usize,
    },
}

fn display_vars(vs: &[Var]) -> String {
    vs.iter().map(Var::to_string).collect::<Vec<_>>().join(" ")
}

fn tuple_index(args: &[usize], n: usize) -> usize {
    args.iter().fold(0, |acc, &a| acc * n + a)
}

/// Decodes a table index into its argument tuple, first argument most
/// significant.
pub fn tuple_at(mut index: usize, arity: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = index % n;
        index /= n;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionTable {
    pub arity: usize,
    /// Values indexed by the argument tuple read as a base-|U| numeral.
    pub values: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub arity: usize,
    pub holds: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    elements: Vec<String>,
    index: HashMap<String, usize>,
    constants: BTreeMap<String, usize>,
    functions: BTreeMap<String, FunctionTable>,
    predicates: BTreeMap<String, Relation>,
}

fn valid_element_id(id: &str) -> bool {
    !id.is_empty()
        && !id.starts_with('?')
        && !id.starts_with('#')
        && sexp::parse_one(id).ok().and_then(|s| s.as_atom().map(|a| a == id)) == Some(true)
}

impl Model {
    pub fn new<S: Into<String>>(elements: impl IntoIterator<Item = S>) -> Result<Model, ModelError> {
        let elements: Vec<String> = elements.into_iter().map(Into::into).collect();
        if elements.is_empty() {
            return Err(ModelError::EmptyUniverse);
        }
        let mut index = HashMap::new();
        for (i, e) in elements.iter().enumerate() {
            if !valid_element_id(e) {
                return Err(ModelError::BadElementId(e.clone()));
            }
            if index.insert(e.clone(), i).is_some() {
                return Err(ModelError::DuplicateElement(e.clone()));
            }
        }
        Ok(Model {
            elements,
            index,
            constants: BTreeMap::new(),
            functions: BTreeMap::new(),
            predicates: BTreeMap::new(),
        })
    }

    /// A universe `d0 .. d{n-1}` with no interpretations yet.
    pub fn with_size(n: usize) -> Result<Model, ModelError> {
        Model::new((0..n).map(|i| format!("d{i}")))
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &str {
        &self.elements[i]
    }

    pub fn element_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn name_of(&self, i: usize) -> Term {
        Term::Name(self.elements[i].clone())
    }

    fn check_fresh(&self, symbol: &str) -> Result<(), ModelError> {
        if self.constants.contains_key(symbol)
            || self.functions.contains_key(symbol)
            || self.predicates.contains_key(symbol)
        {
            return Err(ModelError::DuplicateInterpretation(symbol.to_string()));
        }
        Ok(())
    }

    pub fn set_constant(&mut self, c: &str, value: usize) -> Result<(), ModelError> {
        self.check_fresh(c)?;
        assert!(value < self.size(), "constant value out of range");
        self.constants.insert(c.to_string(), value);
        Ok(())
    }

    /// `values` is indexed by argument tuples, first argument most significant.
    pub fn set_function(&mut self, f: &str, arity: usize, values: Vec<usize>) -> Result<(), ModelError> {
        self.check_fresh(f)?;
        assert_eq!(values.len(), self.size().pow(arity as u32), "function table size");
        assert!(values.iter().all(|&v| v < self.size()), "function value out of range");
        self.functions
            .insert(f.to_string(), FunctionTable { arity, values });
        Ok(())
    }

    pub fn set_predicate(&mut self, p: &str, arity: usize, holds: Vec<bool>) -> Result<(), ModelError> {
        self.check_fresh(p)?;
        assert_eq!(holds.len(), self.size().pow(arity as u32), "relation table size");
        self.predicates
            .insert(p.to_string(), Relation { arity, holds });
        Ok(())
    }

    pub fn constant(&self, c: &str) -> Option<usize> {
        self.constants.get(c).copied()
    }

    pub fn function(&self, f: &str) -> Option<&FunctionTable> {
        self.functions.get(f)
    }

    pub fn predicate(&self, p: &str) -> Option<&Relation> {
        self.predicates.get(p)
    }

    pub fn apply(&self, f: &str, args: &[usize]) -> Result<usize, EvalError> {
        let table = self
            .functions
            .get(f)
            .ok_or_else(|| EvalError::Uninterpreted(f.to_string()))?;
        if table.arity != args.len() {
            return Err(EvalError::Arity {
                symbol: f.to_string(),
                expected: table.arity,
                found: args.len(),
            });
        }
        Ok(table.values[tuple_index(args, self.size())])
    }

    pub fn holds(&self, p: &str, args: &[usize]) -> Result<bool, EvalError> {
        let rel = self
            .predicates
            .get(p)
            .ok_or_else(|| EvalError::Uninterpreted(p.to_string()))?;
        if rel.arity != args.len() {
            return Err(EvalError::Arity {
                symbol: p.to_string(),
                expected: rel.arity,
                found: args.len(),
            });
        }
        Ok(rel.holds[tuple_index(args, self.size())])
    }

    /// Checks that every symbol of `symbols` is interpreted with its arity.
    pub fn check_interprets(&self, symbols: &SymbolTable) -> Result<(), ModelError> {
        for c in symbols.constants() {
            if !self.constants.contains_key(c) {
                return Err(ModelError::Uninterpreted(c.to_string()));
            }
        }
        for (f, n) in symbols.functions() {
            let table = self
                .functions
                .get(f)
                .ok_or_else(|| ModelError::Uninterpreted(f.to_string()))?;
            if table.arity != n {
                return Err(ModelError::Arity {
                    symbol: f.to_string(),
                    expected: n,
                    found: table.arity,
                });
            }
        }
        for (p, n) in symbols.predicates() {
            let rel = self
                .predicates
                .get(p)
                .ok_or_else(|| ModelError::Uninterpreted(p.to_string()))?;
            if rel.arity != n {
                return Err(ModelError::Arity {
                    symbol: p.to_string(),
                    expected: n,
                    found: rel.arity,
                });
            }
        }
        Ok(())
    }

    /// The signature this model interprets.
    pub fn signature(&self) -> SymbolTable {
        let mut s = SymbolTable::new();
        for c in self.constants.keys() {
            s.add_constant(c).expect("model symbols are distinct");
        }
        for (f, t) in &self.functions {
            s.add_function(f, t.arity).expect("model symbols are distinct");
        }
        for (p, r) in &self.predicates {
            s.add_predicate(p, r.arity).expect("model symbols are distinct");
        }
        s
    }

    /// Denotation of a term under an assignment of elements to variables.
    /// Later bindings shadow earlier ones.
    pub fn eval_term_env(&self, t: &Term, env: &[(Var, usize)]) -> Result<usize, EvalError> {
        match t {
            Term::Var(v) => env
                .iter()
                .rev()
                .find(|(w, _)| w == v)
                .map(|&(_, d)| d)
                .ok_or_else(|| EvalError::Unbound(v.clone())),
            Term::Const(c) => self
                .constant(c)
                .ok_or_else(|| EvalError::Uninterpreted(c.clone())),
            Term::Name(n) => self
                .element_index(n)
                .ok_or_else(|| EvalError::UnknownName(n.clone())),
            Term::App(f, args) => {
                let vals = args
                    .iter()
                    .map(|a| self.eval_term_env(a, env))
                    .collect::<Result<Vec<_>, _>>()?;
                self.apply(f, &vals)
            }
        }
    }

    /// Denotation of a ground term.
    pub fn eval_term(&self, t: &Term) -> Result<usize, EvalError> {
        self.eval_term_env(t, &[])
    }

    /// Truth of `f` under an assignment covering its free variables.
    pub fn eval_env(&self, f: &Formula, env: &mut Vec<(Var, usize)>) -> Result<bool, EvalError> {
        match f {
            Formula::Eq(a, b) => Ok(self.eval_term_env(a, env)? == self.eval_term_env(b, env)?),
            Formula::Pred(p, args) => {
                let vals = args
                    .iter()
                    .map(|a| self.eval_term_env(a, env))
                    .collect::<Result<Vec<_>, _>>()?;
                self.holds(p, &vals)
            }
            Formula::Not(a) => Ok(!self.eval_env(a, env)?),
            Formula::Imp(a, b) => Ok(!self.eval_env(a, env)? || self.eval_env(b, env)?),
            Formula::Iff(a, b) => Ok(self.eval_env(a, env)? == self.eval_env(b, env)?),
            Formula::And(a, b) => Ok(self.eval_env(a, env)? && self.eval_env(b, env)?),
            Formula::Or(a, b) => Ok(self.eval_env(a, env)? || self.eval_env(b, env)?),
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                let want = matches!(f, Formula::Exists(..));
                for d in 0..self.size() {
                    env.push((x.clone(), d));
                    let r = self.eval_env(body, env);
                    env.pop();
                    if r? == want {
                        return Ok(want);
                    }
                }
                Ok(!want)
            }
        }
    }

    /// Truth value of a closed formula.
    pub fn eval_formula(&self, f: &Formula) -> Result<TruthValue, EvalError> {
        let free = f.free_vars();
        if !free.is_empty() {
            return Err(EvalError::OpenFormula(free.into_iter().collect()));
        }
        self.eval_env(f, &mut Vec::new()).map(TruthValue::from)
    }

    /// Evaluates a closed formula by literally substituting names for bound
    /// variables, with no variable environment. Slow; used as a cross-check
    /// of [`Model::eval_formula`].
    pub fn eval_by_substitution(&self, f: &Formula) -> Result<TruthValue, EvalError> {
        let free = f.free_vars();
        if !free.is_empty() {
            return Err(EvalError::OpenFormula(free.into_iter().collect()));
        }
        self.eval_subst_rec(f).map(TruthValue::from)
    }

    fn eval_subst_rec(&self, f: &Formula) -> Result<bool, EvalError> {
        match f {
            Formula::Eq(..) | Formula::Pred(..) => self.eval_env(f, &mut Vec::new()),
            Formula::Not(a) => Ok(!self.eval_subst_rec(a)?),
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                let want = matches!(f, Formula::Exists(..));
                for d in 0..self.size() {
                    let inst = subst_unchecked(body, &self.name_of(d), x);
                    if self.eval_subst_rec(&inst)? == want {
                        return Ok(want);
                    }
                }
                Ok(!want)
            }
            other => {
                let (op, a, b) = other.as_binary().expect("remaining variants are binary");
                Ok(op.apply(self.eval_subst_rec(a)?, self.eval_subst_rec(b)?))
            }
        }
    }

    /// Validity: truth of the universal closure.
    pub fn is_valid(&self, f: &Formula) -> Result<TruthValue, EvalError> {
        self.eval_formula(&f.gen())
    }

    /// The first assignment (in lexicographic order over the universe, the
    /// first free variable most significant) falsifying `f`, if any.
    pub fn counterexample(&self, f: &Formula) -> Result<Option<Vec<(Var, usize)>>, EvalError> {
        let vars = f.free_vars_in_order();
        let n = self.size();
        let k = vars.len();
        let total = n.checked_pow(k as u32).expect("assignment count overflows");
        for idx in 0..total {
            let point = tuple_at(idx, k, n);
            let mut env: Vec<(Var, usize)> = vars.iter().cloned().zip(point).collect();
            if !self.eval_env(f, &mut env)? {
                return Ok(Some(env));
            }
        }
        Ok(None)
    }

    /// Checks every basis axiom of `sys`, reporting each failing axiom with
    /// its first counterexample.
    pub fn validate(&self, sys: &SystemSpec) -> Result<Vec<AxiomFailure>, ModelError> {
        self.check_interprets(&sys.symbols)?;
        let mut failures = Vec::new();
        for (index, ax) in sys.basis_axioms.iter().enumerate() {
            let found = self
                .counterexample(ax)
                .expect("axioms are well-formed over an interpreted signature");
            if let Some(env) = found {
                failures.push(AxiomFailure {
                    index,
                    axiom: ax.clone(),
                    assignment: env
                        .into_iter()
                        .map(|(v, d)| (v, self.elements[d].clone()))
                        .collect(),
                });
            }
        }
        Ok(failures)
    }

    /// The substructure on `kept`, which must contain every constant and be
    /// closed under every function. Elements keep their host order.
    pub fn substructure(&self, kept: &[usize]) -> Model {
        let mut kept = kept.to_vec();
        kept.sort_unstable();
        kept.dedup();
        let mut pos = vec![usize::MAX; self.size()];
        for (i, &d) in kept.iter().enumerate() {
            pos[d] = i;
        }
        let m = kept.len();
        let mut sub = Model::new(kept.iter().map(|&d| self.elements[d].clone()))
            .expect("kept elements are distinct and nonempty");
        for (c, &d) in &self.constants {
            assert!(pos[d] != usize::MAX, "constant outside kept set");
            sub.constants.insert(c.clone(), pos[d]);
        }
        for (f, table) in &self.functions {
            let values = (0..m.pow(table.arity as u32))
                .map(|i| {
                    let args: Vec<usize> = tuple_at(i, table.arity, m).into_iter().map(|a| kept[a]).collect();
                    let v = table.values[tuple_index(&args, self.size())];
                    assert!(pos[v] != usize::MAX, "kept set not closed under {f}");
                    pos[v]
                })
                .collect();
            sub.functions.insert(
                f.clone(),
                FunctionTable {
                    arity: table.arity,
                    values,
                },
            );
        }
        for (p, rel) in &self.predicates {
            let holds = (0..m.pow(rel.arity as u32))
                .map(|i| {
                    let args: Vec<usize> = tuple_at(i, rel.arity, m).into_iter().map(|a| kept[a]).collect();
                    rel.holds[tuple_index(&args, self.size())]
                })
                .collect();
            sub.predicates.insert(
                p.clone(),
                Relation {
                    arity: rel.arity,
                    holds,
                },
            );
        }
        sub
    }

    /// Reads a `.fmm` model file. Arities come from `symbols`, and every
    /// declared symbol must be interpreted.
    pub fn parse(text: &str, symbols: &SymbolTable) -> Result<Model, ModelError> {
        let top = sexp::parse_one(text)?;
        let malformed = |what: &'static str, s: &Sexp| ModelError::Malformed {
            what,
            text: s.to_string(),
        };
        let items = match top.as_list() {
            Some(items) if top.head() == Some("model") => &items[1..],
            _ => return Err(malformed("model file", &top)),
        };
        let universe = items
            .iter()
            .find(|s| s.head() == Some("universe"))
            .ok_or_else(|| malformed("model file (no universe)", &top))?;
        let ids = universe.as_list().expect("head implies list")[1..]
            .iter()
            .map(|s| s.as_atom().map(str::to_string).ok_or_else(|| malformed("element id", s)))
            .collect::<Result<Vec<_>, _>>()?;
        let mut model = Model::new(ids)?;
        let n = model.size();
        let elem = |model: &Model, s: &Sexp| -> Result<usize, ModelError> {
            let id = s.as_atom().ok_or_else(|| malformed("element", s))?;
            model
                .element_index(id)
                .ok_or_else(|| ModelError::UnknownElement(id.to_string()))
        };
        let tuple = |model: &Model, s: &Sexp, arity: usize, symbol: &str| -> Result<Vec<usize>, ModelError> {
            let list = s.as_list().ok_or_else(|| malformed("tuple", s))?;
            if list.len() != arity {
                return Err(ModelError::Arity {
                    symbol: symbol.to_string(),
                    expected: arity,
                    found: list.len(),
                });
            }
            list.iter().map(|a| elem(model, a)).collect()
        };
        let mut universe_seen = false;
        for item in items {
            let list = item.as_list().ok_or_else(|| malformed("model section", item))?;
            let symbol_of = |i: usize| -> Result<&str, ModelError> {
                list.get(i).and_then(Sexp::as_atom).ok_or_else(|| malformed("model section", item))
            };
            match item.head() {
                Some("universe") => {
                    if universe_seen {
                        return Err(malformed("model file (two universes)", item));
                    }
                    universe_seen = true;
                }
                Some("const") => {
                    let c = symbol_of(1)?;
                    if list.len() != 3 {
                        return Err(malformed("const", item));
                    }
                    match symbols.kind(c) {
                        Some(SymbolKind::Constant) => {}
                        _ => return Err(SyntaxError::UnknownSymbol(c.to_string()).into()),
                    }
                    let d = elem(&model, &list[2])?;
                    model.set_constant(c, d)?;
                }
                Some("fun") => {
                    let f = symbol_of(1)?;
                    let arity = symbols
                        .function_arity(f)
                        .ok_or_else(|| SyntaxError::UnknownSymbol(f.to_string()))?;
                    let mut values = vec![None; n.pow(arity as u32)];
                    for entry in &list[2..] {
                        let (args, value) = match entry.as_list() {
                            Some([args, value]) => (tuple(&model, args, arity, f)?, elem(&model, value)?),
                            _ => return Err(malformed("function entry", entry)),
                        };
                        let slot = &mut values[tuple_index(&args, n)];
                        if slot.is_some_and(|v| v != value) {
                            return Err(ModelError::ConflictingEntry {
                                symbol: f.to_string(),
                                args: args.iter().map(|&a| model.elements[a].clone()).collect(),
                            });
                        }
                        *slot = Some(value);
                    }
                    let values = values
                        .iter()
                        .enumerate()
                        .map(|(i, v)| {
                            v.ok_or_else(|| ModelError::PartialFunction {
                                symbol: f.to_string(),
                                args: tuple_at(i, arity, n)
                                    .into_iter()
                                    .map(|a| model.elements[a].clone())
                                    .collect(),
                            })
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    model.set_function(f, arity, values)?;
                }
                Some("pred") => {
                    let p = symbol_of(1)?;
                    let arity = symbols
                        .predicate_arity(p)
                        .ok_or_else(|| SyntaxError::UnknownSymbol(p.to_string()))?;
                    if arity == 0 {
                        return Err(malformed("pred (use pred0 for 0-ary predicates)", item));
                    }
                    let mut holds = vec![false; n.pow(arity as u32)];
                    for entry in &list[2..] {
                        holds[tuple_index(&tuple(&model, entry, arity, p)?, n)] = true;
                    }
                    model.set_predicate(p, arity, holds)?;
                }
                Some("pred0") => {
                    let p = symbol_of(1)?;
                    match symbols.predicate_arity(p) {
                        Some(0) => {}
                        Some(k) => {
                            return Err(ModelError::Arity {
                                symbol: p.to_string(),
                                expected: k,
                                found: 0,
                            })
                        }
                        None => return Err(SyntaxError::UnknownSymbol(p.to_string()).into()),
                    }
                    let value = match list.get(2).and_then(Sexp::as_atom) {
                        Some("true") if list.len() == 3 => true,
                        Some("false") if list.len() == 3 => false,
                        _ => return Err(malformed("pred0", item)),
                    };
                    model.set_predicate(p, 0, vec![value])?;
                }
                _ => return Err(malformed("model section", item)),
            }
        }
        model.check_interprets(symbols)?;
        Ok(model)
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.size();
        writeln!(f, "(model")?;
        write!(f, "  (universe")?;
        for e in &self.elements {
            write!(f, " {e}")?;
        }
        write!(f, ")")?;
        for (c, &d) in &self.constants {
            write!(f, "\n  (const {c} {})", self.elements[d])?;
        }
        for (name, table) in &self.functions {
            write!(f, "\n  (fun {name}")?;
            for (i, &v) in table.values.iter().enumerate() {
                let args: Vec<&str> = tuple_at(i, table.arity, n)
                    .into_iter()
                    .map(|a| self.elements[a].as_str())
                    .collect();
                write!(f, " (({}) {})", args.join(" "), self.elements[v])?;
            }
            write!(f, ")")?;
        }
        for (name, rel) in &self.predicates {
            if rel.arity == 0 {
                write!(f, "\n  (pred0 {name} {})", rel.holds[0])?;
                continue;
            }
            write!(f, "\n  (pred {name}")?;
            for (i, _) in rel.holds.iter().enumerate().filter(|(_, &h)| h) {
                let args: Vec<&str> = tuple_at(i, rel.arity, n)
                    .into_iter()
                    .map(|a| self.elements[a].as_str())
                    .collect();
                write!(f, " ({})", args.join(" "))?;
            }
            write!(f, ")")?;
        }
        writeln!(f, ")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomFailure {
    pub index: usize,
    pub axiom: Formula,
    /// Free variables in first-occurrence order, each with an element id.
    pub assignment: Vec<(Var, String)>,
}

impl fmt::Display for AxiomFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(fails {} {}", self.index, sexp::quote(&self.axiom.to_string()))?;
        for (v, d) in &self.assignment {
            write!(f, " ({v} #{d})")?;
        }
        write!(f, ")")
    }
}

pub fn eval_term(m: &Model, t: &Term) -> Result<usize, EvalError> {
    m.eval_term(t)
}

pub fn eval_formula(m: &Model, f: &Formula) -> Result<TruthValue, EvalError> {
    m.eval_formula(f)
}

pub fn is_valid(m: &Model, f: &Formula) -> Result<TruthValue, EvalError> {
    m.is_valid(f)
}

pub fn validate_model(m: &Model, sys: &SystemSpec) -> Result<Vec<AxiomFailure>, ModelError> {
    m.validate(sys)
}
