//! Substitution of terms for variables, and the capture condition that
//! guards it.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::syntax::{Formula, Term, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error("substituting for {x} would capture {binder}")]
    Capture { x: Var, binder: Var },
    #[error("substitution {index} of the chain failed: {source}")]
    Chain {
        index: usize,
        #[source]
        source: Box<SubstError>,
    },
}

/// Replaces every occurrence of `x` in `t` by `mu`.
pub fn subst_term(t: &Term, mu: &Term, x: &Var) -> Term {
    match t {
        Term::Var(v) if v == x => mu.clone(),
        Term::Var(_) | Term::Const(_) | Term::Name(_) => t.clone(),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| subst_term(a, mu, x)).collect()),
    }
}

/// The first binder that would capture a variable of `lambda` when it is
/// substituted for the free occurrences of `x` in `f`.
pub fn capturing_binder(f: &Formula, lambda: &Term, x: &Var) -> Option<Var> {
    let vars = lambda.vars();
    if vars.is_empty() {
        return None;
    }
    find_capture(f, &vars, x, &mut Vec::new())
}

fn find_capture(f: &Formula, vars: &BTreeSet<Var>, x: &Var, scope: &mut Vec<Var>) -> Option<Var> {
    match f {
        Formula::Eq(..) | Formula::Pred(..) => {
            if f.is_free(x) {
                scope.first().cloned()
            } else {
                None
            }
        }
        Formula::Not(a) => find_capture(a, vars, x, scope),
        Formula::Imp(a, b) | Formula::Iff(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
            find_capture(a, vars, x, scope).or_else(|| find_capture(b, vars, x, scope))
        }
        Formula::Forall(y, body) | Formula::Exists(y, body) => {
            if y == x {
                return None;
            }
            let pushed = vars.contains(y);
            if pushed {
                scope.push(y.clone());
            }
            let found = find_capture(body, vars, x, scope);
            if pushed {
                scope.pop();
            }
            found
        }
    }
}

/// Whether `lambda` is substitutable for `x` in `f`: no free occurrence of
/// `x` lies inside a quantifier binding a variable of `lambda`.
pub fn cf_check(f: &Formula, lambda: &Term, x: &Var) -> bool {
    capturing_binder(f, lambda, x).is_none()
}

/// Replaces the free occurrences of `x` in `f` by `mu`. Fails instead of
/// renaming when a binder would capture a variable of `mu`.
pub fn subst_formula(f: &Formula, mu: &Term, x: &Var) -> Result<Formula, SubstError> {
    if let Some(binder) = capturing_binder(f, mu, x) {
        return Err(SubstError::Capture {
            x: x.clone(),
            binder,
        });
    }
    Ok(subst_unchecked(f, mu, x))
}

/// Substitution without the capture check. Callers must know that `mu` is
/// substitutable, e.g. because it is ground.
pub fn subst_unchecked(f: &Formula, mu: &Term, x: &Var) -> Formula {
    match f {
        Formula::Eq(a, b) => Formula::Eq(subst_term(a, mu, x), subst_term(b, mu, x)),
        Formula::Pred(p, args) => {
            Formula::Pred(p.clone(), args.iter().map(|a| subst_term(a, mu, x)).collect())
        }
        Formula::Not(a) => Formula::not(subst_unchecked(a, mu, x)),
        Formula::Forall(y, _) | Formula::Exists(y, _) if y == x => f.clone(),
        Formula::Forall(y, body) => Formula::Forall(y.clone(), Box::new(subst_unchecked(body, mu, x))),
        Formula::Exists(y, body) => Formula::Exists(y.clone(), Box::new(subst_unchecked(body, mu, x))),
        other => {
            let (op, a, b) = other.as_binary().expect("remaining variants are binary");
            Formula::binary(op, subst_unchecked(a, mu, x), subst_unchecked(b, mu, x))
        }
    }
}

/// Applies the substitutions left to right.
pub fn subst_chain(f: &Formula, pairs: &[(Term, Var)]) -> Result<Formula, SubstError> {
    let mut out = f.clone();
    for (index, (mu, x)) in pairs.iter().enumerate() {
        out = subst_formula(&out, mu, x).map_err(|e| SubstError::Chain {
            index,
            source: Box::new(e),
        })?;
    }
    Ok(out)
}
