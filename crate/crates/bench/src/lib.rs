//! Fixtures shared by the benchmarks.

use fmsys::random::{self, random_model};
use fmsys::{Model, SymbolTable};

/// A random model over one constant, a unary function and two predicates.
pub fn sample_model(size: usize, seed: u64) -> (SymbolTable, Model) {
    let s = SymbolTable::new()
        .with_constant("a")
        .with_function("f", 1)
        .with_predicate("p", 1)
        .with_predicate("r", 2);
    let m = random_model(&s, size, &mut random::rng(seed));
    (s, m)
}
