//! Random proof generation and the soundness harness built on it.
//!
//! Proofs are grown forward: each step is a random axiom instance or a
//! random application of a rule to earlier steps. Every generated proof
//! passes [`check_proof`] by construction, and over a system whose basis
//! axioms hold in a model every step must be valid in that model.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::calculus::{
    check_proof, eq_cong_instance, eq_subst_instance, is_tautology_instance, Justification, Proof,
    Violation,
};
use crate::model::Model;
use crate::random::{self, random_formula, random_model, random_signature, random_term, FormulaShape};
use crate::subst::{cf_check, subst_unchecked};
use crate::syntax::{Formula, SystemSpec, Term, Var};

const POOL: [&str; 3] = ["x", "y", "z"];

/// Formulas larger than this are not reused as template parts, which keeps
/// skeleton atom counts and proof text small.
const MAX_PART_SIZE: usize = 40;

struct Generator<'a, R: Rng> {
    sys: &'a SystemSpec,
    names: &'a [String],
    pool: Vec<Var>,
    rng: R,
    proof: Proof,
}

impl<R: Rng> Generator<'_, R> {
    fn small_formula(&mut self) -> Formula {
        let shape = FormulaShape {
            free: &self.pool,
            binders: &self.pool,
            names: self.names,
            max_degree: 1,
            max_depth: 1,
        };
        random_formula(&self.sys.symbols, &shape, &mut self.rng)
    }

    /// A template part: an earlier step or a fresh small formula.
    fn part(&mut self) -> Formula {
        if !self.proof.is_empty() && self.rng.gen_bool(0.5) {
            let i = self.rng.gen_range(0..self.proof.len());
            let f = &self.proof.steps[i].formula;
            if f.size() <= MAX_PART_SIZE {
                return f.clone();
            }
        }
        self.small_formula()
    }

    fn term(&mut self, ground: bool) -> Term {
        let vars: &[Var] = if ground { &[] } else { &self.pool };
        let s = &self.sys.symbols;
        if vars.is_empty() && self.names.is_empty() && s.constants().next().is_none() {
            return Term::Var(self.pool[0].clone());
        }
        random_term(s, vars, self.names, 1, &mut self.rng)
    }

    fn var(&mut self) -> Var {
        self.pool.choose(&mut self.rng).expect("nonempty pool").clone()
    }

    fn tautology(&mut self) -> Formula {
        let (a, b, c) = (self.part(), self.part(), self.part());
        let n = |f: Formula| Formula::not(f);
        match self.rng.gen_range(0..10) {
            0 => Formula::imp(a.clone(), a),
            1 => Formula::imp(a.clone(), Formula::imp(b, a)),
            2 => Formula::imp(
                Formula::imp(a.clone(), Formula::imp(b.clone(), c.clone())),
                Formula::imp(Formula::imp(a.clone(), b), Formula::imp(a, c)),
            ),
            3 => Formula::imp(Formula::imp(n(a.clone()), n(b.clone())), Formula::imp(b, a)),
            4 => Formula::or(a.clone(), n(a)),
            5 => Formula::iff(n(n(a.clone())), a),
            6 => Formula::imp(Formula::and(a.clone(), b), a),
            7 => Formula::imp(a.clone(), Formula::or(a, b)),
            8 => Formula::imp(Formula::iff(a.clone(), b.clone()), Formula::imp(a, b)),
            _ => Formula::imp(a.clone(), Formula::imp(b.clone(), Formula::and(a, b))),
        }
    }

    fn try_step(&mut self) -> Option<(Formula, Justification)> {
        let earlier = self.proof.len();
        match self.rng.gen_range(0..14) {
            0 => {
                let n = self.sys.basis_axioms.len();
                (n > 0).then(|| {
                    let i = self.rng.gen_range(0..n);
                    (self.sys.basis_axioms[i].clone(), Justification::AxiomBasis(i))
                })
            }
            1 | 2 => {
                let f = self.tautology();
                matches!(is_tautology_instance(&f), Ok(true)).then_some((f, Justification::AxiomTaut))
            }
            3 => {
                let x = Term::Var(self.var());
                Some((Formula::Eq(x.clone(), x), Justification::AxiomEqRefl))
            }
            4 => {
                let (x, y) = (self.var(), self.var());
                if x == y {
                    return None;
                }
                let (lambda, mu) = (self.term(false), self.term(false));
                let f = eq_subst_instance(&lambda, &mu, &x, &y);
                Some((f, Justification::AxiomEqSubst { lambda, mu, x, y }))
            }
            5 => {
                let preds: Vec<(String, usize)> = self
                    .sys
                    .symbols
                    .predicates()
                    .filter(|&(_, n)| n > 0)
                    .map(|(p, n)| (p.to_string(), n))
                    .collect();
                let (p, n) = preds.choose(&mut self.rng)?.clone();
                let xs: Vec<Var> = (0..n).map(|_| self.var()).collect();
                let ys: Vec<Var> = (0..n).map(|_| self.var()).collect();
                Some((
                    eq_cong_instance(&p, &xs, &ys),
                    Justification::AxiomEqCong { predicate: p, arity: n },
                ))
            }
            6 => {
                let (x, g) = (self.var(), self.part());
                Some((
                    Formula::imp(Formula::Forall(x.clone(), Box::new(g.clone())), g),
                    Justification::AxiomForallInst(x),
                ))
            }
            7 => {
                let (g, h) = (self.part(), self.part());
                let free = g.free_vars();
                let candidates: Vec<Var> = self.pool.iter().filter(|v| !free.contains(v)).cloned().collect();
                let x = candidates.choose(&mut self.rng)?.clone();
                let f = Formula::imp(
                    Formula::Forall(x.clone(), Box::new(Formula::imp(g.clone(), h.clone()))),
                    Formula::imp(g, Formula::Forall(x.clone(), Box::new(h))),
                );
                Some((f, Justification::AxiomForallImpDist(x)))
            }
            8 => {
                let (x, g) = (self.var(), self.part());
                let f = Formula::iff(
                    Formula::not(Formula::Forall(x.clone(), Box::new(Formula::not(g.clone())))),
                    Formula::Exists(x.clone(), Box::new(g)),
                );
                Some((f, Justification::AxiomExistsDef(x)))
            }
            9..=11 => {
                let mut pairs = Vec::new();
                for (j, major) in self.proof.steps.iter().enumerate() {
                    if let Formula::Imp(a, _) = &major.formula {
                        for (i, minor) in self.proof.steps.iter().enumerate() {
                            if &minor.formula == a.as_ref() {
                                pairs.push((i, j));
                            }
                        }
                    }
                }
                let &(i, j) = pairs.choose(&mut self.rng)?;
                let Formula::Imp(_, b) = &self.proof.steps[j].formula else { unreachable!() };
                Some((b.as_ref().clone(), Justification::ModusPonens(i, j)))
            }
            12 => {
                if earlier == 0 {
                    return None;
                }
                let premise = self.rng.gen_range(0..earlier);
                let f = self.proof.steps[premise].formula.clone();
                let free: Vec<Var> = f.free_vars().into_iter().collect();
                let var = free.choose(&mut self.rng).cloned().unwrap_or_else(|| self.var());
                let ground = self.rng.gen_bool(0.5);
                let term = self.term(ground);
                if !cf_check(&f, &term, &var) {
                    return None;
                }
                Some((subst_unchecked(&f, &term, &var), Justification::Subst { premise, term, var }))
            }
            _ => {
                if earlier == 0 {
                    return None;
                }
                let premise = self.rng.gen_range(0..earlier);
                let var = self.var();
                let f = Formula::Forall(var.clone(), Box::new(self.proof.steps[premise].formula.clone()));
                Some((f, Justification::Gen { premise, var }))
            }
        }
    }
}

/// A random proof of at most `max_steps` steps over `sys`, deterministic in
/// `seed`. Terms may mention the given element names.
pub fn random_proof_with_names(sys: &SystemSpec, seed: u64, max_steps: usize, names: &[String]) -> Proof {
    let mut g = Generator {
        sys,
        names,
        pool: random::vars(&POOL),
        rng: random::rng(seed),
        proof: Proof::new(),
    };
    let mut attempts = 0;
    while g.proof.len() < max_steps && attempts < 20 * max_steps {
        attempts += 1;
        if let Some((f, j)) = g.try_step() {
            g.proof.push(f, j);
        }
    }
    // Axiom-only fallback so that the requested length is reached.
    while g.proof.len() < max_steps {
        let x = Term::Var(g.var());
        g.proof.push(Formula::Eq(x.clone(), x), Justification::AxiomEqRefl);
    }
    g.proof
}

pub fn random_proof(sys: &SystemSpec, seed: u64, max_steps: usize) -> Proof {
    random_proof_with_names(sys, seed, max_steps, &[])
}

#[derive(Clone, Debug)]
pub struct SoundnessConfig {
    pub seed: u64,
    /// Number of (system, model) pairs.
    pub pairs: usize,
    pub proofs: usize,
    pub max_steps: usize,
    pub max_universe: usize,
}

impl Default for SoundnessConfig {
    fn default() -> Self {
        SoundnessConfig {
            seed: 0,
            pairs: 20,
            proofs: 500,
            max_steps: 30,
            max_universe: 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SoundnessFailure {
    /// The generator produced a proof the checker rejects.
    Rejected { pair: usize, proof: usize, violation: Violation },
    /// A checked step whose closure is false in the model.
    Invalid { pair: usize, proof: usize, step: usize, formula: Formula },
}

#[derive(Clone, Debug, Default)]
pub struct SoundnessReport {
    pub pairs: usize,
    pub proofs: usize,
    pub steps: usize,
    pub basis_axioms: usize,
    pub failures: Vec<SoundnessFailure>,
}

/// A random system together with a model validating its basis axioms. The
/// axioms are random formulas over `x`, `y` that happen to hold.
pub fn random_system_and_model(rng: &mut impl Rng, max_universe: usize) -> (SystemSpec, Model) {
    let symbols = random_signature(rng);
    let size = rng.gen_range(1..=max_universe);
    let model = random_model(&symbols, size, rng);
    let free = random::vars(&["x", "y"]);
    let shape = FormulaShape {
        free: &free,
        binders: &free,
        names: &[],
        max_degree: 2,
        max_depth: 1,
    };
    let mut axioms = Vec::new();
    for _ in 0..40 {
        if axioms.len() == 3 {
            break;
        }
        let f = random_formula(&symbols, &shape, rng);
        if model.is_valid(&f).expect("formula over the model signature").is_top() && !axioms.contains(&f) {
            axioms.push(f);
        }
    }
    let sys = SystemSpec::new(symbols, axioms).expect("generated axioms are name free");
    (sys, model)
}

/// Generates proofs over random (system, model) pairs and checks that every
/// step is accepted and valid in the model.
pub fn soundness_suite(cfg: &SoundnessConfig) -> SoundnessReport {
    let mut rng = random::rng(cfg.seed);
    let mut report = SoundnessReport {
        pairs: cfg.pairs,
        ..Default::default()
    };
    for pair in 0..cfg.pairs {
        let (sys, model) = random_system_and_model(&mut rng, cfg.max_universe);
        assert!(model.validate(&sys).expect("model interprets its signature").is_empty());
        report.basis_axioms += sys.basis_axioms.len();
        let names = model.elements().to_vec();
        let count = cfg.proofs / cfg.pairs + usize::from(pair < cfg.proofs % cfg.pairs);
        for proof_index in 0..count {
            let steps = rng.gen_range(1..=cfg.max_steps);
            let proof = random_proof_with_names(&sys, rng.gen(), steps, &names);
            report.proofs += 1;
            if let Err(violation) = check_proof(&sys, &proof) {
                report.failures.push(SoundnessFailure::Rejected {
                    pair,
                    proof: proof_index,
                    violation,
                });
                continue;
            }
            for (i, step) in proof.steps.iter().enumerate() {
                report.steps += 1;
                if !model.is_valid(&step.formula).expect("well-formed step").is_top() {
                    report.failures.push(SoundnessFailure::Invalid {
                        pair,
                        proof: proof_index,
                        step: i,
                        formula: step.formula.clone(),
                    });
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::SymbolTable;

    fn sys() -> SystemSpec {
        let s = SymbolTable::new()
            .with_constant("e")
            .with_function("s", 1)
            .with_predicate("p", 1)
            .with_predicate("r", 2);
        let ax = s.parse_formula("(-> (p ?x) (p (s ?x)))").unwrap();
        SystemSpec::new(s, vec![ax]).unwrap()
    }

    #[test]
    fn zero_steps_is_empty() {
        assert!(random_proof(&sys(), 1, 0).is_empty());
    }

    #[test]
    fn generated_proofs_check() {
        let sys = sys();
        for seed in 0..100 {
            let p = random_proof(&sys, seed, 30);
            assert_eq!(p.len(), 30);
            assert_eq!(check_proof(&sys, &p), Ok(()), "seed {seed}\n{p}");
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let sys = sys();
        assert_eq!(random_proof(&sys, 42, 25), random_proof(&sys, 42, 25));
    }

    #[test]
    fn generated_proofs_use_rules() {
        let sys = sys();
        let mut mp = 0;
        let mut subst = 0;
        let mut gen = 0;
        for seed in 0..50 {
            for step in random_proof(&sys, seed, 30).steps {
                match step.justification {
                    Justification::ModusPonens(..) => mp += 1,
                    Justification::Subst { .. } => subst += 1,
                    Justification::Gen { .. } => gen += 1,
                    _ => {}
                }
            }
        }
        assert!(mp > 50 && subst > 50 && gen > 50, "mp {mp} subst {subst} gen {gen}");
    }

    #[test]
    fn small_suite_is_sound() {
        let report = soundness_suite(&SoundnessConfig {
            seed: 3,
            pairs: 4,
            proofs: 20,
            ..Default::default()
        });
        assert_eq!(report.proofs, 20);
        assert!(report.failures.is_empty(), "{:?}", report.failures);
    }
}
