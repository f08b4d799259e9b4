use std::collections::BTreeSet;

use fmsys::calculus::{
    eq_cong_instance, eq_subst_instance, match_eq_cong, match_eq_subst, match_exists_def, match_forall_imp_dist,
    match_forall_inst,
};
use fmsys::random::{self, random_model};
use fmsys::settheory::{vset, write_collapse};
use fmsys::{
    build_vset, is_tautology_instance, mostowski_collapse, parse_formula, parse_term, subst_formula, subst_term, Formula,
    HfSet, MembershipDigraph, Model, SymbolTable, Term, Var,
};
use proptest::prelude::*;

fn signature() -> SymbolTable {
    SymbolTable::new()
        .with_constant("c")
        .with_function("f", 1)
        .with_function("g", 2)
        .with_predicate("p", 1)
        .with_predicate("r", 2)
        .with_predicate("a", 0)
}

const VARS: [&str; 3] = ["x", "y", "z"];

fn var() -> impl Strategy<Value = Var> {
    prop::sample::select(&VARS[..]).prop_map(Var::new)
}

/// Terms over `c`, `f/1`, `g/2`, names `d0 .. d3` and, if allowed, `x y z`.
fn term(with_vars: bool) -> impl Strategy<Value = Term> {
    let leaf = {
        let mut leaves: Vec<BoxedStrategy<Term>> = vec![
            Just(Term::constant("c")).boxed(),
            (0..4usize).prop_map(|i| Term::name(&format!("d{i}"))).boxed(),
        ];
        if with_vars {
            leaves.push(var().prop_map(Term::Var).boxed());
        }
        prop::strategy::Union::new(leaves)
    };
    leaf.prop_recursive(2, 8, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| Term::app("f", vec![a])),
            (inner.clone(), inner).prop_map(|(a, b)| Term::app("g", vec![a, b])),
        ]
    })
}

fn formula() -> impl Strategy<Value = Formula> {
    let prime = prop_oneof![
        (term(true), term(true)).prop_map(|(a, b)| Formula::Eq(a, b)),
        term(true).prop_map(|a| Formula::pred("p", vec![a])),
        (term(true), term(true)).prop_map(|(a, b)| Formula::pred("r", vec![a, b])),
        Just(Formula::pred("a", vec![])),
    ];
    prime.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (var(), inner.clone()).prop_map(|(x, b)| Formula::forall(x.name(), b)),
            (var(), inner).prop_map(|(x, b)| Formula::exists(x.name(), b)),
        ]
    })
}

/// Renames element names `dK` to `d(K mod size)` so they exist in a model.
fn fit_term(t: &Term, size: usize) -> Term {
    match t {
        Term::Name(n) => {
            let k: usize = n[1..].parse().unwrap();
            Term::name(&format!("d{}", k % size))
        }
        Term::App(f, args) => Term::app(f, args.iter().map(|a| fit_term(a, size)).collect()),
        other => other.clone(),
    }
}

fn fit(f: &Formula, size: usize) -> Formula {
    match f {
        Formula::Eq(a, b) => Formula::Eq(fit_term(a, size), fit_term(b, size)),
        Formula::Pred(p, args) => Formula::pred(p, args.iter().map(|a| fit_term(a, size)).collect()),
        Formula::Not(a) => Formula::not(fit(a, size)),
        _ => {
            if let Some((op, a, b)) = f.as_binary() {
                Formula::binary(op, fit(a, size), fit(b, size))
            } else {
                let (q, x, body) = f.as_quantified().unwrap();
                Formula::quantified(q, x.clone(), fit(body, size))
            }
        }
    }
}

/// Closes every free variable other than `x` existentially.
fn only_x_free(f: Formula) -> Formula {
    let rest: Vec<Var> = f.free_vars().into_iter().filter(|v| v.name() != "x").collect();
    rest.into_iter().fold(f, |acc, v| Formula::exists(v.name(), acc))
}

fn model(seed: u64, size: usize) -> Model {
    random_model(&signature(), size, &mut random::rng(seed))
}

proptest! {
    #[test]
    fn terms_round_trip(t in term(true)) {
        prop_assert_eq!(parse_term(&t.to_string(), &signature()).unwrap(), t);
    }

    #[test]
    fn formulas_round_trip(f in formula()) {
        let s = signature();
        prop_assert_eq!(parse_formula(&f.to_string(), &s).unwrap(), f.clone());
        // Whitespace is not significant.
        let spaced = f.to_string().replace(' ', "\n  ");
        prop_assert_eq!(parse_formula(&spaced, &s).unwrap(), f);
    }

    #[test]
    fn substituting_a_variable_for_itself_is_identity(f in formula(), x in var()) {
        prop_assert_eq!(subst_formula(&f, &Term::Var(x.clone()), &x).unwrap(), f);
    }

    #[test]
    fn substitution_ignores_bound_and_absent_variables(f in formula(), x in var(), t in term(true)) {
        if !f.is_free(&x) {
            prop_assert_eq!(subst_formula(&f, &t, &x).unwrap(), f);
        }
    }

    #[test]
    fn substitution_replaces_free_occurrences(f in formula(), x in var(), t in term(true)) {
        if let Ok(g) = subst_formula(&f, &t, &x) {
            let mut want: BTreeSet<Var> = f.free_vars();
            if want.remove(&x) {
                want.extend(t.vars());
            }
            prop_assert_eq!(g.free_vars(), want);
        }
    }

    #[test]
    fn ground_substitutions_commute(f in formula(), mu in term(false), nu in term(false), x in var(), y in var()) {
        prop_assume!(x != y);
        let a = subst_formula(&subst_formula(&f, &mu, &x).unwrap(), &nu, &y).unwrap();
        let b = subst_formula(&subst_formula(&f, &nu, &y).unwrap(), &mu, &x).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn term_substitution_composes(t in term(true), mu in term(true), nu in term(false), x in var()) {
        // t[mu/x][nu/x] = t[mu[nu/x]/x]
        let lhs = subst_term(&subst_term(&t, &mu, &x), &nu, &x);
        let rhs = subst_term(&t, &subst_term(&mu, &nu, &x), &x);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn ground_term_and_its_name_agree(
        h in formula(),
        mu in term(false),
        seed in any::<u64>(),
        size in 1..=4usize,
    ) {
        let m = model(seed, size);
        let x = Var::new("x");
        let h = only_x_free(fit(&h, size));
        let mu = fit_term(&mu, size);
        let value = m.eval_term(&mu).unwrap();
        let by_term = m.eval_formula(&subst_formula(&h, &mu, &x).unwrap()).unwrap();
        let by_name = m.eval_formula(&subst_formula(&h, &Term::name(m.element(value)), &x).unwrap()).unwrap();
        prop_assert_eq!(by_term, by_name);
    }

    #[test]
    fn tarski_and_substitution_semantics_agree(f in formula(), seed in any::<u64>(), size in 1..=3usize) {
        let m = model(seed, size);
        let f = fit(&f, size).gen();
        prop_assert_eq!(m.eval_formula(&f).unwrap(), m.eval_by_substitution(&f).unwrap());
    }

    #[test]
    fn eq_subst_instances_match(lambda in term(true), mu in term(true), x in var(), y in var()) {
        prop_assume!(x != y);
        let f = eq_subst_instance(&lambda, &mu, &x, &y);
        let (l, m, x2, y2) = match_eq_subst(&f).expect("instance matches");
        prop_assert_eq!(eq_subst_instance(&l, &m, &x2, &y2), f);
    }

    #[test]
    fn eq_cong_instances_match(xs in prop::collection::vec(var(), 2), ys in prop::collection::vec(var(), 2)) {
        let s = signature();
        let f = eq_cong_instance("r", &xs, &ys);
        prop_assert_eq!(match_eq_cong(&f, &s), Some(("r".to_string(), xs.clone(), ys.clone())));
        // An arity that disagrees with the signature is not an instance.
        prop_assert_eq!(match_eq_cong(&eq_cong_instance("r", &xs[..1], &ys[..1]), &s), None);
    }

    #[test]
    fn quantifier_instances_match(g in formula(), h in formula(), x in var()) {
        let inst = Formula::imp(Formula::forall(x.name(), g.clone()), g.clone());
        prop_assert_eq!(match_forall_inst(&inst), Some(x.clone()));
        let dist = Formula::imp(
            Formula::forall(x.name(), Formula::imp(g.clone(), h.clone())),
            Formula::imp(g.clone(), Formula::forall(x.name(), h.clone())),
        );
        prop_assert_eq!(match_forall_imp_dist(&dist).is_some(), !g.is_free(&x));
        let def = Formula::iff(
            Formula::not(Formula::forall(x.name(), Formula::not(g.clone()))),
            Formula::exists(x.name(), g.clone()),
        );
        prop_assert_eq!(match_exists_def(&def), Some(x));
    }

    #[test]
    fn tautologies_agree_with_truth_tables(f in propositional()) {
        // Oracle: the formula holds in every model interpreting the letters.
        let letters = ["a", "b", "c"];
        let mut always = true;
        for bits in 0..8u32 {
            let mut m = Model::with_size(1).unwrap();
            for (i, l) in letters.iter().enumerate() {
                m.set_predicate(l, 0, vec![bits >> i & 1 == 1]).unwrap();
            }
            always &= m.eval_formula(&f).unwrap().is_top();
        }
        prop_assert_eq!(is_tautology_instance(&f).unwrap(), always);
    }

    #[test]
    fn tautologies_survive_substituting_letters(f in propositional(), g in formula(), h in formula()) {
        if is_tautology_instance(&f).unwrap() {
            let inst = replace_letters(&f, &g, &h);
            prop_assert!(is_tautology_instance(&inst).unwrap());
        }
    }

    #[test]
    fn hf_literals_round_trip(code in 0u64..65536) {
        let s = from_code(code);
        prop_assert_eq!(s.ackermann(), Some(code));
        prop_assert_eq!(HfSet::parse(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn hf_order_follows_ackermann_codes(a in 0u64..65536, b in 0u64..65536) {
        prop_assert_eq!(from_code(a).cmp(&from_code(b)), a.cmp(&b));
    }

    #[test]
    fn digraphs_round_trip(k in 1..=6usize, edges in prop::collection::vec((0..6usize, 0..6usize), 0..12)) {
        let edges: Vec<(usize, usize)> = edges.into_iter().filter(|&(a, b)| a < k && b < k).collect();
        let g = MembershipDigraph::from_indices(k, edges);
        prop_assert_eq!(MembershipDigraph::parse(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn collapse_preserves_and_reflects_membership(
        k in 1..=6usize,
        edges in prop::collection::vec((0..6usize, 0..6usize), 0..14),
    ) {
        let edges: Vec<(usize, usize)> = edges.into_iter().filter(|&(a, b)| a < k && b < k).collect();
        let g = MembershipDigraph::from_indices(k, edges);
        if let Ok(map) = mostowski_collapse(&g) {
            for (a, (_, sa)) in map.iter().enumerate() {
                for (b, (_, sb)) in map.iter().enumerate() {
                    prop_assert_eq!(sb.contains(sa), g.has_edge(a, b));
                    prop_assert_eq!(sa == sb, a == b);
                }
                let rank = sa.members().iter().map(|m| m.rank() + 1).max().unwrap_or(0);
                prop_assert_eq!(sa.rank(), rank);
            }
            let image: BTreeSet<&HfSet> = map.iter().map(|(_, s)| s).collect();
            prop_assert!(image.iter().all(|s| s.members().iter().all(|m| image.contains(m))));
            prop_assert!(write_collapse(&map).starts_with("(collapse"));
        }
    }
}

/// Formulas over the letters `a`, `b`, `c`.
fn propositional() -> impl Strategy<Value = Formula> {
    let letters = prop::sample::select(vec!["a", "b", "c"]).prop_map(|l| Formula::pred(l, vec![]));
    letters.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::or(a, b)),
        ]
    })
}

/// Replaces the letter `a` by `g` and `b` by `h`.
fn replace_letters(f: &Formula, g: &Formula, h: &Formula) -> Formula {
    match f {
        Formula::Pred(l, _) if l == "a" => g.clone(),
        Formula::Pred(l, _) if l == "b" => h.clone(),
        Formula::Pred(..) | Formula::Eq(..) => f.clone(),
        Formula::Not(a) => Formula::not(replace_letters(a, g, h)),
        _ => {
            let (op, a, b) = f.as_binary().expect("propositional");
            Formula::binary(op, replace_letters(a, g, h), replace_letters(b, g, h))
        }
    }
}

/// The set with Ackermann code `code`: bit `i` set means member `i`.
fn from_code(code: u64) -> HfSet {
    HfSet::from_members((0..64).filter(|i| code >> i & 1 == 1).map(from_code))
}

#[test]
fn vset_elements_collapse_to_themselves() {
    for n in 1..=4 {
        let m = build_vset(n).unwrap();
        let g = MembershipDigraph::from_model(&m).unwrap();
        for (id, s) in mostowski_collapse(&g).unwrap() {
            assert_eq!(HfSet::parse(&id).unwrap(), s);
        }
        assert_eq!(m.size(), vset(n).len());
    }
}
