//! Formal mathematical systems over finite structures: terms and formulas,
//! substitution, a Hilbert-style proof checker, finite-model semantics,
//! Henkin witnesses and submodel extraction, and hereditarily finite sets.

pub mod calculus;
pub mod classes;
pub mod fuzz;
pub mod henkin;
pub mod model;
pub mod random;
pub mod settheory;
pub mod sexp;
pub mod subst;
pub mod syntax;

pub use calculus::{
    check_proof, check_step, is_tautology_instance, Justification, Proof, ProofFileError, Step, StepError, Violation,
};
pub use fuzz::{random_proof, soundness_suite, SoundnessConfig, SoundnessReport};
pub use henkin::{
    check_complete_henkin, check_equivalence, enumerate_formulas, extract_submodel, find_witness, Bounds,
    HenkinConstant, SubmodelResult, WitnessTable,
};
pub use model::{eval_formula, eval_term, is_valid, validate_model, Model, TruthValue};
pub use settheory::{
    build_vset, is_extensional, is_subset_friendly, is_transitive, mostowski_collapse, rst_audit, rst_formulas,
    HfSet, MembershipDigraph, SampleProperty,
};
pub use subst::{cf_check, subst_chain, subst_formula, subst_term};
pub use syntax::{parse_formula, parse_term, BinOp, Formula, Quantifier, SymbolTable, SystemSpec, Term, Var};
