//! Henkin witnesses on finite models, submodel extraction and bounded
//! elementary equivalence.
//!
//! The exhaustive checks range over every formula within the bounds. They
//! go through [`semantic_classes`]: each check depends only on the value a
//! formula defines, so one representative per value covers all formulas.
//! Representatives are re-evaluated directly as a cross-check of the class
//! engine.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use crate::classes::{
    semantic_classes, terms_up_to, ClassQuery, ClassSet, ClassStats, Domain, GroundTermDomain, ModelDomain,
};
use crate::model::{AxiomFailure, EvalError, Model, ModelError};
use crate::sexp::quote;
use crate::subst::{subst_formula, subst_unchecked};
use crate::syntax::{BinOp, Formula, Quantifier, SymbolTable, SystemSpec, Term, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HenkinError {
    #[error("formula `{formula}` has free variables other than {x}")]
    OpenFormula { formula: Formula, x: Var },
    #[error("host model does not satisfy the system: {}", .0.iter().map(|f| f.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidHost(Vec<AxiomFailure>),
    #[error("model does not match the signature: {0}")]
    Signature(#[from] ModelError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_rank: usize,
    pub max_degree: usize,
    pub max_depth: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_rank: 3,
            max_degree: 2,
            max_depth: 1,
        }
    }
}

/// A witness constant for the closed existential `target`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HenkinConstant {
    pub rank: usize,
    pub target: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessEntry {
    pub constant: HenkinConstant,
    /// Element id of the witness.
    pub name: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessTable {
    pub entries: Vec<WitnessEntry>,
    /// Last rank that was computed.
    pub frontier: usize,
    pub bounds: Bounds,
}

/// One checked closed formula with its value in both models.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditLine {
    pub formula: Formula,
    pub left: bool,
    pub right: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub max_degree: usize,
    pub max_depth: usize,
    /// One representative per joint truth value.
    pub checked: Vec<AuditLine>,
    pub disagreements: Vec<AuditLine>,
    /// Representatives whose direct evaluation contradicts the class value.
    pub inconsistent: Vec<Formula>,
    pub stats: ClassStats,
}

impl EquivalenceReport {
    pub fn agrees(&self) -> bool {
        self.disagreements.is_empty() && self.inconsistent.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct SubmodelResult {
    pub submodel: Model,
    /// Host element ids, in host order.
    pub kept_elements: Vec<String>,
    pub witness_table: WitnessTable,
    pub audit: EquivalenceReport,
    /// Basis axioms the submodel fails.
    pub validation: Vec<AxiomFailure>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HenkinReport {
    pub witness_classes: usize,
    /// Formulas whose witness biconditional is false, with the witness.
    pub witness_failures: Vec<(Formula, String)>,
    pub closed_classes: usize,
    pub closed_failures: Vec<Formula>,
    pub inconsistent: Vec<Formula>,
}

impl HenkinReport {
    pub fn passes(&self) -> bool {
        self.witness_failures.is_empty() && self.closed_failures.is_empty() && self.inconsistent.is_empty()
    }
}

/// Binder for a quantifier node of degree `k`, avoiding `x`.
fn binder(k: usize, x: &Var) -> Var {
    let v = Var::new(format!("y{k}"));
    if &v == x {
        Var::new(format!("z{k}"))
    } else {
        v
    }
}

struct Enumerator<'a> {
    symbols: &'a SymbolTable,
    names: &'a [String],
    x: Var,
    max_depth: usize,
    /// Formulas of exactly the given degree over the given scope.
    memo: BTreeMap<(usize, Vec<Var>), Vec<Formula>>,
}

impl Enumerator<'_> {
    fn exact(&mut self, k: usize, scope: &[Var]) -> Vec<Formula> {
        let key = (k, scope.to_vec());
        if let Some(fs) = self.memo.get(&key) {
            return fs.clone();
        }
        let out = if k == 0 {
            let terms = terms_up_to(self.symbols, scope, self.names, self.max_depth);
            let mut out = Vec::new();
            for a in &terms {
                for b in &terms {
                    out.push(Formula::Eq(a.clone(), b.clone()));
                }
            }
            for (p, n) in self.symbols.predicates() {
                let mut idx = vec![0; n];
                'tuples: loop {
                    out.push(Formula::pred(p, idx.iter().map(|&i| terms[i].clone()).collect()));
                    let mut i = n;
                    loop {
                        if i == 0 {
                            break 'tuples;
                        }
                        i -= 1;
                        idx[i] += 1;
                        if idx[i] < terms.len() {
                            break;
                        }
                        idx[i] = 0;
                    }
                }
            }
            out
        } else {
            let top = self.exact(k - 1, scope);
            let mut lower = Vec::new();
            for d in 0..k - 1 {
                lower.extend(self.exact(d, scope));
            }
            let mut out: Vec<Formula> = top.iter().cloned().map(Formula::not).collect();
            for op in BinOp::ALL {
                for a in &top {
                    for b in top.iter().chain(&lower) {
                        out.push(Formula::binary(op, a.clone(), b.clone()));
                    }
                }
                for a in &lower {
                    for b in &top {
                        out.push(Formula::binary(op, a.clone(), b.clone()));
                    }
                }
            }
            let y = binder(k, &self.x);
            let mut inner = scope.to_vec();
            inner.push(y.clone());
            for body in self.exact(k - 1, &inner) {
                for q in [Quantifier::Forall, Quantifier::Exists] {
                    out.push(Formula::quantified(q, y.clone(), body.clone()));
                }
            }
            out
        };
        self.memo.insert(key, out.clone());
        out
    }
}

/// Every formula with free variables among `{x}`, degree at most
/// `max_degree` and term depth at most `max_depth`, ordered by degree,
/// size, then structure. A quantifier node of degree `k` binds `y<k>`, so
/// alphabetic variants are listed once.
pub fn enumerate_formulas(
    symbols: &SymbolTable,
    names: &[String],
    x: &Var,
    max_degree: usize,
    max_depth: usize,
) -> Vec<Formula> {
    let mut e = Enumerator {
        symbols,
        names,
        x: x.clone(),
        max_depth,
        memo: BTreeMap::new(),
    };
    let scope = [x.clone()];
    let mut out = Vec::new();
    for k in 0..=max_degree {
        let mut fs = e.exact(k, &scope);
        fs.sort_by(|a, b| a.size().cmp(&b.size()).then_with(|| a.cmp(b)));
        out.extend(fs);
    }
    out
}

fn check_only_x(f: &Formula, x: &Var) -> Result<(), HenkinError> {
    if f.free_vars().iter().any(|v| v != x) {
        return Err(HenkinError::OpenFormula {
            formula: f.clone(),
            x: x.clone(),
        });
    }
    Ok(())
}

fn satisfying(m: &Model, x: &Var, f: &Formula) -> Result<Vec<bool>, HenkinError> {
    (0..m.size())
        .map(|d| Ok(m.eval_env(f, &mut vec![(x.clone(), d)])?))
        .collect()
}

/// The least element satisfying `f`, or the least element if none does.
pub fn find_witness(m: &Model, x: &Var, f: &Formula) -> Result<String, HenkinError> {
    check_only_x(f, x)?;
    let sat = satisfying(m, x, f)?;
    let d = sat.iter().position(|&b| b).unwrap_or(0);
    Ok(m.element(d).to_string())
}

/// `(∃x F) ↔ F[#w/x]`.
pub fn witness_biconditional(x: &Var, f: &Formula, w: &str) -> Formula {
    let inst = subst_formula(f, &Term::Name(w.to_string()), x).expect("names never get captured");
    Formula::iff(Formula::quantified(Quantifier::Exists, x.clone(), f.clone()), inst)
}

fn one_var_classes(m: &Model, symbols: &SymbolTable, names: &[String], x: &Var, degree: usize, depth: usize) -> ClassSet {
    let base = [x.clone()];
    let q = ClassQuery {
        symbols,
        names,
        base: &base,
        max_degree: degree,
        max_depth: depth,
    };
    semantic_classes(&[&ModelDomain(m) as &dyn Domain], &q)
}

/// Bounded check that the closed formulas true in `m`, with every element
/// named, form a complete Henkin system: each formula over `x` has a named
/// witness, and each closed formula or its negation holds.
pub fn check_complete_henkin(
    m: &Model,
    symbols: &SymbolTable,
    max_degree: usize,
    max_depth: usize,
) -> Result<HenkinReport, HenkinError> {
    m.check_interprets(symbols)?;
    let names = m.elements().to_vec();
    let x = Var::new("x");
    let mut report = HenkinReport::default();

    let set = one_var_classes(m, symbols, &names, &x, max_degree, max_depth);
    report.witness_classes = set.classes.len();
    for class in &set.classes {
        let f = &class.representative;
        let sat = satisfying(m, &x, f)?;
        if (0..m.size()).any(|d| sat[d] != set.holds(class, 0, d)) {
            report.inconsistent.push(f.clone());
        }
        let w = find_witness(m, &x, f)?;
        if !m.eval_formula(&witness_biconditional(&x, f, &w))?.is_top() {
            report.witness_failures.push((f.clone(), w));
        }
    }

    let q = ClassQuery {
        symbols,
        names: &names,
        base: &[],
        max_degree,
        max_depth,
    };
    let closed = semantic_classes(&[&ModelDomain(m) as &dyn Domain], &q);
    report.closed_classes = closed.classes.len();
    for class in &closed.classes {
        let g = &class.representative;
        let pos = m.eval_formula(g)?.is_top();
        let neg = m.eval_formula(&Formula::not(g.clone()))?.is_top();
        if pos != closed.holds(class, 0, 0) {
            report.inconsistent.push(g.clone());
        }
        if pos == neg {
            report.closed_failures.push(g.clone());
        }
    }
    Ok(report)
}

/// Compares two models on every closed formula over `symbols` (no names)
/// within the bounds.
pub fn check_equivalence(
    a: &Model,
    b: &Model,
    symbols: &SymbolTable,
    max_degree: usize,
    max_depth: usize,
) -> Result<EquivalenceReport, HenkinError> {
    a.check_interprets(symbols)?;
    b.check_interprets(symbols)?;
    let q = ClassQuery {
        symbols,
        names: &[],
        base: &[],
        max_degree,
        max_depth,
    };
    let set = semantic_classes(&[&ModelDomain(a) as &dyn Domain, &ModelDomain(b)], &q);
    let mut report = EquivalenceReport {
        max_degree,
        max_depth,
        checked: Vec::new(),
        disagreements: Vec::new(),
        inconsistent: Vec::new(),
        stats: set.stats.clone(),
    };
    for class in &set.classes {
        let f = &class.representative;
        let line = AuditLine {
            formula: f.clone(),
            left: a.eval_formula(f)?.is_top(),
            right: b.eval_formula(f)?.is_top(),
        };
        if line.left != set.holds(class, 0, 0) || line.right != set.holds(class, 1, 0) {
            report.inconsistent.push(f.clone());
        }
        if line.left != line.right {
            report.disagreements.push(line.clone());
        }
        report.checked.push(line);
    }
    Ok(report)
}

/// Truth of a closed formula when quantifiers range over `terms`, each
/// instance obtained by literal substitution.
pub fn eval_over_terms(m: &Model, terms: &[Term], f: &Formula) -> Result<bool, HenkinError> {
    if f.is_prime() {
        return Ok(m.eval_formula(f)?.is_top());
    }
    if let Formula::Not(a) = f {
        return Ok(!eval_over_terms(m, terms, a)?);
    }
    if let Some((op, a, b)) = f.as_binary() {
        return Ok(op.apply(eval_over_terms(m, terms, a)?, eval_over_terms(m, terms, b)?));
    }
    let (q, y, body) = f.as_quantified().expect("formula shapes are exhaustive");
    let mut any = false;
    let mut all = true;
    for t in terms {
        let v = eval_over_terms(m, terms, &subst_unchecked(body, t, y))?;
        any |= v;
        all &= v;
    }
    Ok(match q {
        Quantifier::Forall => all,
        Quantifier::Exists => any,
    })
}

/// Compares name semantics (quantifiers over elements) with ground-term
/// semantics (quantifiers over ground terms of depth at most
/// `ground_depth`) on every closed formula with element names within the
/// bounds. `left` is the name semantics.
pub fn check_name_reduction(
    m: &Model,
    symbols: &SymbolTable,
    max_degree: usize,
    max_depth: usize,
    ground_depth: usize,
) -> Result<EquivalenceReport, HenkinError> {
    m.check_interprets(symbols)?;
    let names = m.elements().to_vec();
    let ground = GroundTermDomain::new(m, symbols, &names, ground_depth);
    let q = ClassQuery {
        symbols,
        names: &names,
        base: &[],
        max_degree,
        max_depth,
    };
    let set = semantic_classes(&[&ModelDomain(m) as &dyn Domain, &ground], &q);
    let mut report = EquivalenceReport {
        max_degree,
        max_depth,
        checked: Vec::new(),
        disagreements: Vec::new(),
        inconsistent: Vec::new(),
        stats: set.stats.clone(),
    };
    for class in &set.classes {
        let f = &class.representative;
        let line = AuditLine {
            formula: f.clone(),
            left: m.eval_formula(f)?.is_top(),
            right: eval_over_terms(m, ground.terms(), f)?,
        };
        if line.left != set.holds(class, 0, 0) || line.right != set.holds(class, 1, 0) {
            report.inconsistent.push(f.clone());
        }
        if line.left != line.right {
            report.disagreements.push(line.clone());
        }
        report.checked.push(line);
    }
    Ok(report)
}

fn rank_of(term: &Term, rank: &BTreeMap<usize, usize>, m: &Model) -> usize {
    match term {
        Term::Name(id) => m.element_index(id).and_then(|d| rank.get(&d).copied()).unwrap_or(0),
        Term::App(_, args) => args.iter().map(|t| rank_of(t, rank, m)).max().unwrap_or(0),
        _ => 0,
    }
}

/// Extracts the substructure generated by bounded Henkin witnesses.
///
/// Rank 1 collects witnesses for every formula over the base language;
/// rank `r` repeats with the names found so far, recording only formulas
/// whose value needs a name found at rank `r - 1`, plus `∃x (= t x)` for
/// ground terms `t` mentioning such a name. The kept names are then closed
/// under the functions.
pub fn extract_submodel(m: &Model, sys: &SystemSpec, bounds: Bounds) -> Result<SubmodelResult, HenkinError> {
    let symbols = &sys.symbols;
    m.check_interprets(symbols)?;
    let failures = m.validate(sys)?;
    if !failures.is_empty() {
        return Err(HenkinError::InvalidHost(failures));
    }
    let x = Var::new("x");
    let mut table = WitnessTable {
        entries: Vec::new(),
        frontier: 0,
        bounds,
    };
    // Element index -> rank at which it was first named.
    let mut named: BTreeMap<usize, usize> = BTreeMap::new();
    let mut seen: HashSet<Vec<bool>> = HashSet::new();
    for r in 1..=bounds.max_rank {
        table.frontier = r;
        let names: Vec<String> = named.keys().map(|&d| m.element(d).to_string()).collect();
        let set = one_var_classes(m, symbols, &names, &x, bounds.max_degree, bounds.max_depth);
        let mut fresh = BTreeSet::new();
        for class in &set.classes {
            let bits: Vec<bool> = (0..m.size()).map(|d| set.holds(class, 0, d)).collect();
            if !seen.insert(bits.clone()) {
                continue;
            }
            let d = bits.iter().position(|&b| b).unwrap_or(0);
            table.entries.push(WitnessEntry {
                constant: HenkinConstant {
                    rank: r,
                    target: Formula::quantified(Quantifier::Exists, x.clone(), class.representative.clone()),
                },
                name: m.element(d).to_string(),
            });
            if !named.contains_key(&d) {
                fresh.insert(d);
            }
        }
        for t in terms_up_to(symbols, &[], &names, bounds.max_depth) {
            // Each term is recorded at the rank right after its newest name.
            if rank_of(&t, &named, m) + 1 != r {
                continue;
            }
            let d = m.eval_term(&t)?;
            table.entries.push(WitnessEntry {
                constant: HenkinConstant {
                    rank: r,
                    target: Formula::quantified(Quantifier::Exists, x.clone(), Formula::Eq(t, Term::Var(x.clone()))),
                },
                name: m.element(d).to_string(),
            });
            if !named.contains_key(&d) {
                fresh.insert(d);
            }
        }
        if fresh.is_empty() {
            break;
        }
        for d in fresh {
            named.insert(d, r);
        }
    }

    let kept = close_under_functions(m, symbols, named.keys().copied().collect());
    let submodel = m.substructure(&kept);
    let audit = check_equivalence(m, &submodel, symbols, bounds.max_degree, bounds.max_depth)?;
    let validation = submodel.validate(sys)?;
    Ok(SubmodelResult {
        kept_elements: kept.iter().map(|&d| m.element(d).to_string()).collect(),
        submodel,
        witness_table: table,
        audit,
        validation,
    })
}

/// Smallest superset of `start` containing the constants and closed under
/// the functions, in host order.
fn close_under_functions(m: &Model, symbols: &SymbolTable, start: BTreeSet<usize>) -> Vec<usize> {
    let mut kept = start;
    for c in symbols.constants() {
        kept.insert(m.constant(c).expect("interpreted"));
    }
    loop {
        let cur: Vec<usize> = kept.iter().copied().collect();
        let before = kept.len();
        for (f, n) in symbols.functions() {
            let mut idx = vec![0usize; n];
            'tuples: loop {
                let args: Vec<usize> = idx.iter().map(|&i| cur[i]).collect();
                kept.insert(m.apply(f, &args).expect("interpreted"));
                let mut i = n;
                loop {
                    if i == 0 {
                        break 'tuples;
                    }
                    i -= 1;
                    idx[i] += 1;
                    if idx[i] < cur.len() {
                        break;
                    }
                    idx[i] = 0;
                }
            }
        }
        if kept.len() == before {
            return kept.into_iter().collect();
        }
    }
}

/// The `.fmr` sidecar report of an extraction.
pub struct FmrReport<'a>(pub &'a SubmodelResult);

impl fmt::Display for FmrReport<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.0;
        let b = r.witness_table.bounds;
        writeln!(f, "(report")?;
        writeln!(
            f,
            "  (bounds (max-rank {}) (max-degree {}) (max-depth {}))",
            b.max_rank, b.max_degree, b.max_depth
        )?;
        writeln!(f, "  (frontier {})", r.witness_table.frontier)?;
        writeln!(f, "  (kept {})", r.kept_elements.join(" "))?;
        write!(f, "  (witnesses")?;
        let mut rank = 0;
        for e in &r.witness_table.entries {
            if e.constant.rank != rank {
                if rank != 0 {
                    write!(f, ")")?;
                }
                rank = e.constant.rank;
                write!(f, "\n    (rank {rank}")?;
            }
            let (_, x, body) = e.constant.target.as_quantified().expect("existential target");
            write!(f, "\n      ((exists {x} {}) -> #{})", quote(&body.to_string()), e.name)?;
        }
        if rank != 0 {
            write!(f, ")")?;
        }
        writeln!(f, ")")?;
        writeln!(f, "  (audit")?;
        writeln!(f, "    (classes-checked {})", r.audit.checked.len())?;
        write!(f, "    (disagreements {})", r.audit.disagreements.len())?;
        for line in &r.audit.checked {
            write!(
                f,
                "\n    (formula {} (host {}) (submodel {}))",
                quote(&line.formula.to_string()),
                line.left,
                line.right
            )?;
        }
        writeln!(f, ")")?;
        write!(f, "  (axiom-failures {}))", r.validation.len())
    }
}
