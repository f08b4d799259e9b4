//! Hilbert-style proofs and their checker.
//!
//! Axioms are basis axioms, propositional tautology instances, three
//! equality schemas and three quantifier schemas; the rules are modus
//! ponens, substitution and generalization. Step references inside a
//! [`Proof`] are 0-based; the `.fmp` file format numbers steps from 1.

use std::fmt;

use thiserror::Error;

use crate::sexp::{self, Sexp, SexpError};
use crate::subst::{subst_formula, subst_unchecked, SubstError};
use crate::syntax::{BinOp, Formula, SymbolTable, SyntaxError, SystemSpec, Term, Var};

/// Default cap on distinct atoms in a propositional skeleton.
pub const MAX_TAUTOLOGY_ATOMS: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Justification {
    AxiomBasis(usize),
    AxiomTaut,
    AxiomEqRefl,
    AxiomEqSubst { lambda: Term, mu: Term, x: Var, y: Var },
    AxiomEqCong { predicate: String, arity: usize },
    AxiomForallInst(Var),
    AxiomForallImpDist(Var),
    AxiomExistsDef(Var),
    /// `ModusPonens(i, j)`: step `j` is `(-> step_i current)`.
    ModusPonens(usize, usize),
    Subst { premise: usize, term: Term, var: Var },
    Gen { premise: usize, var: Var },
}

impl Justification {
    pub fn premises(&self) -> Vec<usize> {
        match self {
            Justification::ModusPonens(i, j) => vec![*i, *j],
            Justification::Subst { premise, .. } | Justification::Gen { premise, .. } => vec![*premise],
            _ => vec![],
        }
    }

    /// The same justification with every premise index shifted through `f`.
    pub fn map_premises(&self, f: impl Fn(usize) -> usize) -> Justification {
        match self {
            Justification::ModusPonens(i, j) => Justification::ModusPonens(f(*i), f(*j)),
            Justification::Subst { premise, term, var } => Justification::Subst {
                premise: f(*premise),
                term: term.clone(),
                var: var.clone(),
            },
            Justification::Gen { premise, var } => Justification::Gen {
                premise: f(*premise),
                var: var.clone(),
            },
            other => other.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    pub formula: Formula,
    pub justification: Justification,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Proof {
    pub steps: Vec<Step>,
}

impl Proof {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, formula: Formula, justification: Justification) -> usize {
        self.steps.push(Step {
            formula,
            justification,
        });
        self.steps.len() - 1
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("propositional skeleton has {found} atoms, more than the cap of {cap}")]
pub struct TooManyAtoms {
    pub found: usize,
    pub cap: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StepError {
    #[error("step refers to step {premise}, which is not earlier")]
    ForwardReference { premise: usize },
    #[error("basis axiom {0} does not exist")]
    NoSuchBasisAxiom(usize),
    #[error("formula is not basis axiom {0}")]
    NotBasisAxiom(usize),
    #[error("formula is not an instance of the {0} schema")]
    SchemaMismatch(&'static str),
    #[error("{0}")]
    SideCondition(&'static str),
    #[error("premise mismatch: {0}")]
    PremiseMismatch(&'static str),
    #[error(transparent)]
    Capture(#[from] SubstError),
    #[error(transparent)]
    TooManyAtoms(#[from] TooManyAtoms),
    #[error("ill-formed: {0}")]
    IllFormed(#[from] SyntaxError),
}

/// A failed proof step, with its 0-based index.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {} rejected: {error}", .index + 1)]
pub struct Violation {
    pub index: usize,
    pub error: StepError,
}

enum Skeleton {
    Atom(usize),
    Not(Box<Skeleton>),
    Bin(BinOp, Box<Skeleton>, Box<Skeleton>),
}

fn skeleton<'a>(f: &'a Formula, atoms: &mut Vec<&'a Formula>) -> Skeleton {
    match f {
        Formula::Not(a) => Skeleton::Not(Box::new(skeleton(a, atoms))),
        Formula::Imp(..) | Formula::Iff(..) | Formula::And(..) | Formula::Or(..) => {
            let (op, a, b) = f.as_binary().expect("binary variant");
            Skeleton::Bin(op, Box::new(skeleton(a, atoms)), Box::new(skeleton(b, atoms)))
        }
        _ => {
            let i = atoms.iter().position(|a| *a == f).unwrap_or_else(|| {
                atoms.push(f);
                atoms.len() - 1
            });
            Skeleton::Atom(i)
        }
    }
}

const ATOM_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Truth table of `s` over all valuations of `k` atoms, packed 64 rows per
/// word. Row `r` gives atom `i` the value of bit `i` of `r`.
fn truth_table(s: &Skeleton, k: usize) -> Vec<u64> {
    let words = if k <= 6 { 1 } else { 1 << (k - 6) };
    match s {
        Skeleton::Atom(i) if *i < 6 => vec![ATOM_PATTERNS[*i]; words],
        Skeleton::Atom(i) => (0..words)
            .map(|w| if (w >> (i - 6)) & 1 == 1 { u64::MAX } else { 0 })
            .collect(),
        Skeleton::Not(a) => truth_table(a, k).into_iter().map(|w| !w).collect(),
        Skeleton::Bin(op, a, b) => {
            let (ta, tb) = (truth_table(a, k), truth_table(b, k));
            ta.into_iter()
                .zip(tb)
                .map(|(x, y)| match op {
                    BinOp::Imp => !x | y,
                    BinOp::Iff => !(x ^ y),
                    BinOp::And => x & y,
                    BinOp::Or => x | y,
                })
                .collect()
        }
    }
}

/// The maximal prime or quantified subformulas of `f`, in order of first
/// occurrence, identical subformulas counted once.
pub fn skeleton_atoms(f: &Formula) -> Vec<&Formula> {
    let mut atoms = Vec::new();
    skeleton(f, &mut atoms);
    atoms
}

/// Whether the propositional skeleton of `f` is true under every valuation.
pub fn is_tautology_instance(f: &Formula) -> Result<bool, TooManyAtoms> {
    is_tautology_instance_capped(f, MAX_TAUTOLOGY_ATOMS)
}

pub fn is_tautology_instance_capped(f: &Formula, cap: usize) -> Result<bool, TooManyAtoms> {
    let mut atoms = Vec::new();
    let s = skeleton(f, &mut atoms);
    let k = atoms.len();
    if k > cap.min(30) {
        return Err(TooManyAtoms { found: k, cap });
    }
    let table = truth_table(&s, k);
    let mask = if k >= 6 { u64::MAX } else { (1u64 << (1 << k)) - 1 };
    Ok(table.iter().all(|&w| w & mask == mask))
}

fn as_var(t: &Term) -> Option<&Var> {
    match t {
        Term::Var(v) => Some(v),
        _ => None,
    }
}

/// `(= ?x ?x)`.
pub fn match_eq_refl(f: &Formula) -> Option<Var> {
    match f {
        Formula::Eq(Term::Var(x), Term::Var(y)) if x == y => Some(x.clone()),
        _ => None,
    }
}

/// The equality substitution instance for `lambda`, `mu`, `x`, `y`:
/// `(-> (= lambda mu)[?x/?y] (-> (= ?x ?y) (= lambda mu)))`.
pub fn eq_subst_instance(lambda: &Term, mu: &Term, x: &Var, y: &Var) -> Formula {
    let consequent = Formula::Eq(lambda.clone(), mu.clone());
    let antecedent = subst_unchecked(&consequent, &Term::Var(x.clone()), y);
    Formula::imp(
        antecedent,
        Formula::imp(Formula::Eq(Term::Var(x.clone()), Term::Var(y.clone())), consequent),
    )
}

/// Reads `(lambda, mu, x, y)` off an equality substitution instance.
pub fn match_eq_subst(f: &Formula) -> Option<(Term, Term, Var, Var)> {
    let Formula::Imp(_, rest) = f else { return None };
    let Formula::Imp(eq, consequent) = rest.as_ref() else { return None };
    let Formula::Eq(Term::Var(x), Term::Var(y)) = eq.as_ref() else { return None };
    let Formula::Eq(lambda, mu) = consequent.as_ref() else { return None };
    if x == y || eq_subst_instance(lambda, mu, x, y) != *f {
        return None;
    }
    Some((lambda.clone(), mu.clone(), x.clone(), y.clone()))
}

/// The congruence instance `(-> (= x1 y1) ... (-> (p x1 ..) (p y1 ..)))`.
pub fn eq_cong_instance(p: &str, xs: &[Var], ys: &[Var]) -> Formula {
    let args = |vs: &[Var]| vs.iter().cloned().map(Term::Var).collect::<Vec<_>>();
    let core = Formula::imp(Formula::pred(p, args(xs)), Formula::pred(p, args(ys)));
    xs.iter().zip(ys).rev().fold(core, |acc, (x, y)| {
        Formula::imp(Formula::Eq(Term::Var(x.clone()), Term::Var(y.clone())), acc)
    })
}

/// Reads `(p, xs, ys)` off a congruence instance whose predicate has the
/// declared arity; both argument lists must consist of variables.
pub fn match_eq_cong(f: &Formula, symbols: &SymbolTable) -> Option<(String, Vec<Var>, Vec<Var>)> {
    let mut pairs: Vec<(Var, Var)> = Vec::new();
    let mut cur = f;
    loop {
        let Formula::Imp(a, b) = cur else { return None };
        match (a.as_ref(), b.as_ref()) {
            (Formula::Pred(p, xs), Formula::Pred(q, ys)) if p == q => {
                let n = symbols.predicate_arity(p)?;
                if xs.len() != n || ys.len() != n || pairs.len() != n {
                    return None;
                }
                for ((x, y), (px, py)) in xs.iter().zip(ys).zip(&pairs) {
                    if as_var(x)? != px || as_var(y)? != py {
                        return None;
                    }
                }
                let (xs, ys) = pairs.into_iter().unzip();
                return Some((p.clone(), xs, ys));
            }
            (Formula::Eq(Term::Var(x), Term::Var(y)), _) => {
                pairs.push((x.clone(), y.clone()));
                cur = b;
            }
            _ => return None,
        }
    }
}

pub fn is_equality_axiom(f: &Formula, symbols: &SymbolTable) -> bool {
    match_eq_refl(f).is_some() || match_eq_subst(f).is_some() || match_eq_cong(f, symbols).is_some()
}

/// `(-> (forall ?x G) G)`.
pub fn match_forall_inst(f: &Formula) -> Option<Var> {
    let Formula::Imp(a, b) = f else { return None };
    let Formula::Forall(x, g) = a.as_ref() else { return None };
    (g == b).then(|| x.clone())
}

/// `(-> (forall ?x (-> G H)) (-> G (forall ?x H)))` with `x` not free in `G`.
pub fn match_forall_imp_dist(f: &Formula) -> Option<Var> {
    let Formula::Imp(a, b) = f else { return None };
    let Formula::Forall(x, inner) = a.as_ref() else { return None };
    let Formula::Imp(g, h) = inner.as_ref() else { return None };
    let Formula::Imp(g2, rest) = b.as_ref() else { return None };
    let Formula::Forall(x2, h2) = rest.as_ref() else { return None };
    (x == x2 && g == g2 && h == h2 && !g.is_free(x)).then(|| x.clone())
}

/// `(<-> (not (forall ?x (not G))) (exists ?x G))`.
pub fn match_exists_def(f: &Formula) -> Option<Var> {
    let Formula::Iff(a, b) = f else { return None };
    let Formula::Not(inner) = a.as_ref() else { return None };
    let Formula::Forall(x, neg) = inner.as_ref() else { return None };
    let Formula::Not(g) = neg.as_ref() else { return None };
    let Formula::Exists(x2, g2) = b.as_ref() else { return None };
    (x == x2 && g == g2).then(|| x.clone())
}

pub fn is_quantifier_axiom(f: &Formula) -> bool {
    match_forall_inst(f).is_some() || match_forall_imp_dist(f).is_some() || match_exists_def(f).is_some()
}

fn expect_binder(found: Option<Var>, want: &Var, schema: &'static str) -> Result<(), StepError> {
    match found {
        Some(x) if &x == want => Ok(()),
        _ => Err(StepError::SchemaMismatch(schema)),
    }
}

/// Checks one step against the steps before it.
pub fn check_step(sys: &SystemSpec, proof: &Proof, index: usize) -> Result<(), StepError> {
    let step = &proof.steps[index];
    let f = &step.formula;
    sys.symbols.check_formula(f)?;
    for p in step.justification.premises() {
        if p >= index {
            return Err(StepError::ForwardReference { premise: p });
        }
    }
    let earlier = |i: usize| &proof.steps[i].formula;
    match &step.justification {
        Justification::AxiomBasis(i) => {
            let ax = sys
                .basis_axioms
                .get(*i)
                .ok_or(StepError::NoSuchBasisAxiom(*i))?;
            if ax != f {
                return Err(StepError::NotBasisAxiom(*i));
            }
        }
        Justification::AxiomTaut => {
            if !is_tautology_instance(f)? {
                return Err(StepError::SchemaMismatch("tautology"));
            }
        }
        Justification::AxiomEqRefl => {
            match_eq_refl(f).ok_or(StepError::SchemaMismatch("eq-refl"))?;
        }
        Justification::AxiomEqSubst { lambda, mu, x, y } => {
            sys.symbols.check_term(lambda)?;
            sys.symbols.check_term(mu)?;
            if x == y {
                return Err(StepError::SideCondition("eq-subst needs distinct variables"));
            }
            if eq_subst_instance(lambda, mu, x, y) != *f {
                return Err(StepError::SchemaMismatch("eq-subst"));
            }
        }
        Justification::AxiomEqCong { predicate, arity } => {
            match match_eq_cong(f, &sys.symbols) {
                Some((p, xs, _)) if &p == predicate && xs.len() == *arity => {}
                _ => return Err(StepError::SchemaMismatch("eq-cong")),
            }
        }
        Justification::AxiomForallInst(x) => expect_binder(match_forall_inst(f), x, "forall-inst")?,
        Justification::AxiomForallImpDist(x) => {
            if let Some(found) = match_forall_imp_dist(f) {
                return expect_binder(Some(found), x, "forall-imp-dist");
            }
            // Distinguish a bound-variable side condition failure from a
            // shape mismatch.
            if let Formula::Imp(a, b) = f {
                if let (Formula::Forall(x1, inner), Formula::Imp(g2, rest)) = (a.as_ref(), b.as_ref()) {
                    if let (Formula::Imp(g, h), Formula::Forall(x2, h2)) = (inner.as_ref(), rest.as_ref()) {
                        if x1 == x2 && g == g2 && h == h2 && x1 == x {
                            return Err(StepError::SideCondition("quantified variable is free in the antecedent"));
                        }
                    }
                }
            }
            return Err(StepError::SchemaMismatch("forall-imp-dist"));
        }
        Justification::AxiomExistsDef(x) => expect_binder(match_exists_def(f), x, "exists-def")?,
        Justification::ModusPonens(i, j) => match earlier(*j) {
            Formula::Imp(a, b) => {
                if a.as_ref() != earlier(*i) {
                    return Err(StepError::PremiseMismatch("antecedent differs from the minor premise"));
                }
                if b.as_ref() != f {
                    return Err(StepError::PremiseMismatch("consequent differs from this step"));
                }
            }
            _ => return Err(StepError::PremiseMismatch("major premise is not an implication")),
        },
        Justification::Subst { premise, term, var } => {
            sys.symbols.check_term(term)?;
            let expected = subst_formula(earlier(*premise), term, var)?;
            if expected != *f {
                return Err(StepError::PremiseMismatch("formula is not the substitution instance"));
            }
        }
        Justification::Gen { premise, var } => match f {
            Formula::Forall(x, body) if x == var && body.as_ref() == earlier(*premise) => {}
            _ => return Err(StepError::PremiseMismatch("formula is not the generalization")),
        },
    }
    Ok(())
}

/// Checks every step, reporting the first violation.
pub fn check_proof(sys: &SystemSpec, proof: &Proof) -> Result<(), Violation> {
    for index in 0..proof.steps.len() {
        check_step(sys, proof, index).map_err(|error| Violation { index, error })?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofFileError {
    #[error(transparent)]
    Sexp(#[from] SexpError),
    #[error("malformed proof file: `{0}`")]
    Malformed(String),
    #[error("step {step}: malformed {what}: `{text}`")]
    MalformedStep {
        step: usize,
        what: &'static str,
        text: String,
    },
    #[error("expected step number {expected}, found `{found}`")]
    StepNumber { expected: usize, found: String },
    #[error("step {step}: {source}")]
    Syntax {
        step: usize,
        #[source]
        source: SyntaxError,
    },
}

impl ProofFileError {
    /// The 1-based step the error was found in, if any.
    pub fn step(&self) -> Option<usize> {
        match self {
            ProofFileError::MalformedStep { step, .. } | ProofFileError::Syntax { step, .. } => Some(*step),
            ProofFileError::StepNumber { expected, .. } => Some(*expected),
            _ => None,
        }
    }
}

fn parse_justification(s: &Sexp, step: usize, symbols: &SymbolTable) -> Result<Justification, ProofFileError> {
    let bad = |what: &'static str| ProofFileError::MalformedStep {
        step,
        what,
        text: s.to_string(),
    };
    let items = s.as_list().ok_or_else(|| bad("justification"))?;
    let atom = |i: usize| items.get(i).and_then(Sexp::as_atom);
    let var = |i: usize| {
        atom(i)
            .and_then(|a| a.strip_prefix('?'))
            .filter(|v| !v.is_empty())
            .map(Var::new)
            .ok_or_else(|| bad("variable"))
    };
    let number = |i: usize| -> Result<usize, ProofFileError> {
        atom(i).and_then(|a| a.parse().ok()).ok_or_else(|| bad("number"))
    };
    // Step references are 1-based; 0 and non-numbers are rejected here,
    // forward references by the checker.
    let reference = |i: usize| -> Result<usize, ProofFileError> {
        match number(i)? {
            0 => Err(bad("step reference")),
            n => Ok(n - 1),
        }
    };
    let term = |i: usize| -> Result<Term, ProofFileError> {
        let text = items.get(i).and_then(Sexp::as_str).ok_or_else(|| bad("term"))?;
        symbols
            .parse_term(text)
            .map_err(|source| ProofFileError::Syntax { step, source })
    };
    let arity = |n: usize| {
        if items.len() == n {
            Ok(())
        } else {
            Err(bad("justification"))
        }
    };
    let j = match (atom(0), atom(1)) {
        (Some("axiom"), Some("taut")) => {
            arity(2)?;
            Justification::AxiomTaut
        }
        (Some("axiom"), Some("basis")) => {
            arity(3)?;
            Justification::AxiomBasis(number(2)?)
        }
        (Some("axiom"), Some("eq-refl")) => {
            arity(2)?;
            Justification::AxiomEqRefl
        }
        (Some("axiom"), Some("eq-subst")) => {
            arity(6)?;
            Justification::AxiomEqSubst {
                lambda: term(2)?,
                mu: term(3)?,
                x: var(4)?,
                y: var(5)?,
            }
        }
        (Some("axiom"), Some("eq-cong")) => {
            arity(4)?;
            Justification::AxiomEqCong {
                predicate: atom(2).ok_or_else(|| bad("predicate"))?.to_string(),
                arity: number(3)?,
            }
        }
        (Some("axiom"), Some("forall-inst")) => {
            arity(3)?;
            Justification::AxiomForallInst(var(2)?)
        }
        (Some("axiom"), Some("forall-imp-dist")) => {
            arity(3)?;
            Justification::AxiomForallImpDist(var(2)?)
        }
        (Some("axiom"), Some("exists-def")) => {
            arity(3)?;
            Justification::AxiomExistsDef(var(2)?)
        }
        (Some("mp"), _) => {
            arity(3)?;
            Justification::ModusPonens(reference(1)?, reference(2)?)
        }
        (Some("subst"), _) => {
            arity(4)?;
            Justification::Subst {
                premise: reference(1)?,
                var: var(2)?,
                term: term(3)?,
            }
        }
        (Some("gen"), _) => {
            arity(3)?;
            Justification::Gen {
                premise: reference(1)?,
                var: var(2)?,
            }
        }
        _ => return Err(bad("justification")),
    };
    Ok(j)
}

impl Proof {
    /// Reads a `.fmp` proof file. Steps must be numbered 1, 2, 3, ...
    pub fn parse(text: &str, symbols: &SymbolTable) -> Result<Proof, ProofFileError> {
        let top = sexp::parse_one(text)?;
        let items = match top.as_list() {
            Some(items) if top.head() == Some("proof") => &items[1..],
            _ => return Err(ProofFileError::Malformed(top.to_string())),
        };
        let mut proof = Proof::new();
        for (i, item) in items.iter().enumerate() {
            let step = i + 1;
            let parts = match item.as_list() {
                Some(parts) if item.head() == Some("step") && parts.len() == 4 => parts,
                _ => {
                    return Err(ProofFileError::MalformedStep {
                        step,
                        what: "step",
                        text: item.to_string(),
                    })
                }
            };
            let label = parts[1].to_string();
            if label != step.to_string() {
                return Err(ProofFileError::StepNumber {
                    expected: step,
                    found: label,
                });
            }
            let justification = parse_justification(&parts[2], step, symbols)?;
            let text = parts[3].as_str().ok_or_else(|| ProofFileError::MalformedStep {
                step,
                what: "formula",
                text: parts[3].to_string(),
            })?;
            let formula = symbols
                .parse_formula(text)
                .map_err(|source| ProofFileError::Syntax { step, source })?;
            proof.push(formula, justification);
        }
        Ok(proof)
    }
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::AxiomBasis(i) => write!(f, "(axiom basis {i})"),
            Justification::AxiomTaut => write!(f, "(axiom taut)"),
            Justification::AxiomEqRefl => write!(f, "(axiom eq-refl)"),
            Justification::AxiomEqSubst { lambda, mu, x, y } => write!(
                f,
                "(axiom eq-subst {} {} {x} {y})",
                sexp::quote(&lambda.to_string()),
                sexp::quote(&mu.to_string())
            ),
            Justification::AxiomEqCong { predicate, arity } => write!(f, "(axiom eq-cong {predicate} {arity})"),
            Justification::AxiomForallInst(x) => write!(f, "(axiom forall-inst {x})"),
            Justification::AxiomForallImpDist(x) => write!(f, "(axiom forall-imp-dist {x})"),
            Justification::AxiomExistsDef(x) => write!(f, "(axiom exists-def {x})"),
            Justification::ModusPonens(i, j) => write!(f, "(mp {} {})", i + 1, j + 1),
            Justification::Subst { premise, term, var } => {
                write!(f, "(subst {} {var} {})", premise + 1, sexp::quote(&term.to_string()))
            }
            Justification::Gen { premise, var } => write!(f, "(gen {} {var})", premise + 1),
        }
    }
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(proof")?;
        for (i, step) in self.steps.iter().enumerate() {
            write!(
                f,
                "\n  (step {} {} {})",
                i + 1,
                step.justification,
                sexp::quote(&step.formula.to_string())
            )?;
        }
        writeln!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> SymbolTable {
        SymbolTable::new()
            .with_constant("e")
            .with_function("s", 1)
            .with_predicate("p", 1)
            .with_predicate("r", 2)
            .with_predicate("q", 0)
    }

    fn f(text: &str) -> Formula {
        sig().parse_formula(text).unwrap()
    }

    fn sys(axioms: &[&str]) -> SystemSpec {
        SystemSpec::new(sig(), axioms.iter().map(|a| f(a)).collect()).unwrap()
    }

    #[test]
    fn tautologies() {
        let a = "(forall ?x (p ?x))";
        assert!(is_tautology_instance(&f(&format!("(-> {a} {a})"))).unwrap());
        assert!(is_tautology_instance(&f(&format!("(or {a} (not {a}))"))).unwrap());
        assert!(!is_tautology_instance(&f("(-> (p ?x) (r ?x ?x))")).unwrap());
        assert!(is_tautology_instance(&f("(-> (-> (-> q (p e)) q) q)")).unwrap());
        assert!(!is_tautology_instance(&f("(p ?x)")).unwrap());
        // Alpha-variants are distinct atoms.
        assert!(!is_tautology_instance(&f("(-> (forall ?x (p ?x)) (forall ?y (p ?y)))")).unwrap());
    }

    #[test]
    fn tautology_atom_cap() {
        // A disjunction of 17 distinct atoms, each implied by itself.
        let atoms: Vec<String> = (0..17).map(|i| format!("(= ?x{i} ?x{i})")).collect();
        let big = atoms
            .iter()
            .skip(1)
            .fold(atoms[0].clone(), |acc, a| format!("(or {acc} {a})"));
        let g = f(&format!("(-> {big} {big})"));
        assert_eq!(
            is_tautology_instance(&g),
            Err(TooManyAtoms { found: 17, cap: 16 })
        );
        assert!(is_tautology_instance_capped(&g, 17).unwrap());
    }

    #[test]
    fn tautologies_with_many_atoms() {
        // Peirce's law and a 10-atom chain exercise the multi-word tables.
        let atoms: Vec<String> = (0..10).map(|i| format!("(= ?x{i} e)")).collect();
        let conj = atoms
            .iter()
            .skip(1)
            .fold(atoms[0].clone(), |acc, a| format!("(and {acc} {a})"));
        assert!(is_tautology_instance(&f(&format!("(-> {conj} {})", atoms[9]))).unwrap());
        assert!(!is_tautology_instance(&f(&format!("(-> {} {conj})", atoms[9]))).unwrap());
    }

    #[test]
    fn equality_schemas() {
        let s = sig();
        assert!(is_equality_axiom(&f("(= ?x ?x)"), &s));
        assert!(is_equality_axiom(
            &f("(-> (= (s ?x) (s ?x)) (-> (= ?x ?y) (= (s ?x) (s ?y))))"),
            &s
        ));
        assert!(!is_equality_axiom(&f("(= ?x ?y)"), &s));
        assert!(is_equality_axiom(
            &f("(-> (= ?x ?y) (-> (= ?u ?v) (-> (r ?x ?u) (r ?y ?v))))"),
            &s
        ));
        assert!(is_equality_axiom(&f("(-> (= ?x ?y) (-> (p ?x) (p ?y)))"), &s));
        assert!(!is_equality_axiom(&f("(-> (= ?x ?y) (-> (p ?y) (p ?x)))"), &s));
        assert!(!is_equality_axiom(&f("(-> (= ?x ?y) (-> (p e) (p ?y)))"), &s));
        // Congruence chain must match the declared arity.
        assert!(!is_equality_axiom(&f("(-> (p ?x) (p ?x))"), &s));
    }

    #[test]
    fn eq_subst_by_hand() {
        let s = sig();
        let lam = s.parse_term("(s ?x)").unwrap();
        let mu = s.parse_term("(s ?y)").unwrap();
        let inst = eq_subst_instance(&lam, &mu, &Var::from("x"), &Var::from("y"));
        assert_eq!(
            inst,
            f("(-> (= (s ?x) (s ?x)) (-> (= ?x ?y) (= (s ?x) (s ?y))))")
        );
        assert_eq!(
            match_eq_subst(&inst),
            Some((lam, mu, Var::from("x"), Var::from("y")))
        );
    }

    #[test]
    fn quantifier_schemas() {
        assert!(is_quantifier_axiom(&f("(-> (forall ?x (p ?x)) (p ?x))")));
        assert!(is_quantifier_axiom(&f(
            "(-> (forall ?x (-> q (p ?x))) (-> q (forall ?x (p ?x))))"
        )));
        assert!(!is_quantifier_axiom(&f(
            "(-> (forall ?x (-> (p ?x) (p ?x))) (-> (p ?x) (forall ?x (p ?x))))"
        )));
        assert!(is_quantifier_axiom(&f(
            "(<-> (not (forall ?x (not (p ?x)))) (exists ?x (p ?x)))"
        )));
        assert!(!is_quantifier_axiom(&f("(-> (forall ?x (p ?x)) (p e))")));
    }

    #[test]
    fn check_step_examples() {
        let sys1 = sys(&["(p e)", "(-> (p e) q)"]);
        let mut pr = Proof::new();
        pr.push(f("(p e)"), Justification::AxiomBasis(0));
        pr.push(f("(-> (p e) q)"), Justification::AxiomBasis(1));
        pr.push(f("q"), Justification::ModusPonens(0, 1));
        assert_eq!(check_proof(&sys1, &pr), Ok(()));

        let sys2 = sys(&["(p ?x)"]);
        let mut pr = Proof::new();
        pr.push(f("(p ?x)"), Justification::AxiomBasis(0));
        pr.push(
            f("(p e)"),
            Justification::Subst {
                premise: 0,
                term: Term::constant("e"),
                var: Var::from("x"),
            },
        );
        assert_eq!(check_proof(&sys2, &pr), Ok(()));

        let mut pr = Proof::new();
        pr.push(f("(p ?x)"), Justification::AxiomBasis(0));
        pr.push(
            f("(forall ?y (p ?x))"),
            Justification::Gen {
                premise: 0,
                var: Var::from("x"),
            },
        );
        assert!(matches!(
            check_proof(&sys2, &pr),
            Err(Violation {
                index: 1,
                error: StepError::PremiseMismatch(_)
            })
        ));
    }

    #[test]
    fn empty_proof_is_accepted() {
        assert_eq!(check_proof(&sys(&[]), &Proof::new()), Ok(()));
    }

    #[test]
    fn substitution_capture_is_rejected() {
        let sys = sys(&["(exists ?y (r ?x ?y))"]);
        let mut pr = Proof::new();
        pr.push(f("(exists ?y (r ?x ?y))"), Justification::AxiomBasis(0));
        pr.push(
            f("(exists ?y (r ?y ?y))"),
            Justification::Subst {
                premise: 0,
                term: Term::var("y"),
                var: Var::from("x"),
            },
        );
        assert!(matches!(
            check_proof(&sys, &pr),
            Err(Violation {
                index: 1,
                error: StepError::Capture(_)
            })
        ));
    }

    #[test]
    fn forward_references_are_rejected() {
        let mut pr = Proof::new();
        pr.push(f("q"), Justification::ModusPonens(0, 1));
        assert!(matches!(
            check_proof(&sys(&[]), &pr),
            Err(Violation {
                index: 0,
                error: StepError::ForwardReference { .. }
            })
        ));
    }

    #[test]
    fn mp_requires_syntactic_antecedent() {
        let sys = sys(&["(-> (-> (forall ?y (p ?y)) (forall ?y (p ?y))) q)"]);
        let mut pr = Proof::new();
        pr.push(f("(-> (forall ?x (p ?x)) (forall ?x (p ?x)))"), Justification::AxiomTaut);
        pr.push(sys.basis_axioms[0].clone(), Justification::AxiomBasis(0));
        pr.push(f("q"), Justification::ModusPonens(0, 1));
        assert!(matches!(
            check_proof(&sys, &pr),
            Err(Violation {
                index: 2,
                error: StepError::PremiseMismatch(_)
            })
        ));
    }

    #[test]
    fn file_round_trip() {
        let s = sig();
        let text = r#"(proof
            (step 1 (axiom taut) "(-> (p ?x) (p ?x))")
            (step 2 (axiom basis 0) "(p ?x)")
            (step 3 (mp 2 1) "(p ?x)")
            (step 4 (subst 3 ?x "(s e)") "(p (s e))")
            (step 5 (gen 4 ?x) "(forall ?x (p (s e)))")
            (step 6 (axiom eq-subst "?x" "e" ?x ?y) "(-> (= ?x e) (-> (= ?x ?y) (= ?x e)))"))"#;
        let pr = Proof::parse(text, &s).unwrap();
        assert_eq!(pr.steps[2].justification, Justification::ModusPonens(1, 0));
        assert_eq!(Proof::parse(&pr.to_string(), &s).unwrap(), pr);
        let sys = SystemSpec::new(s.clone(), vec![f("(p ?x)")]).unwrap();
        assert_eq!(check_proof(&sys, &pr), Ok(()));
    }

    #[test]
    fn file_errors_carry_steps() {
        let s = sig();
        let e = Proof::parse(r#"(proof (step 2 (axiom taut) "q"))"#, &s).unwrap_err();
        assert_eq!(e.step(), Some(1));
        let e = Proof::parse(r#"(proof (step 1 (axiom taut) "(-> q q)") (step 2 (mp 0 1) "q"))"#, &s).unwrap_err();
        assert_eq!(e.step(), Some(2));
        let e = Proof::parse(r#"(proof (step 1 (axiom taut) "(zz)"))"#, &s).unwrap_err();
        assert_eq!(e.step(), Some(1));
    }
}
