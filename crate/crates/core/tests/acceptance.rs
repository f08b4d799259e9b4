//! Acceptance criteria, one pass/fail line each. Exits non-zero if any fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use fmsys::henkin::check_name_reduction;
use fmsys::random::{self, random_formula, random_model, random_signature, random_term, FormulaShape};
use fmsys::{
    build_vset, check_complete_henkin, extract_submodel, mostowski_collapse, rst_audit, soundness_suite, subst_formula,
    Bounds, HfSet, MembershipDigraph, Model, SampleProperty, SoundnessConfig, SymbolTable, SystemSpec, Term, Var,
};
use rand::seq::SliceRandom;
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn within(limit: Duration, elapsed: Duration, detail: String) -> Outcome {
    if elapsed <= limit {
        Ok(detail)
    } else {
        Err(format!("{detail}; took {elapsed:.1?}, limit {limit:?}"))
    }
}

fn soundness() -> Outcome {
    let start = Instant::now();
    let report = soundness_suite(&SoundnessConfig::default());
    let detail = format!(
        "{} pairs, {} proofs, {} steps, {} failures",
        report.pairs,
        report.proofs,
        report.steps,
        report.failures.len()
    );
    if let Some(f) = report.failures.first() {
        return Err(format!("{detail}; first: {f:?}"));
    }
    if report.proofs != 500 {
        return Err(detail);
    }
    within(Duration::from_secs(60), start.elapsed(), detail)
}

/// Substituting a ground term for `x` agrees with substituting the name of
/// its value, and with evaluating under the assignment.
fn ground_name_substitution() -> Outcome {
    let mut r = random::rng(34);
    let x = Var::new("x");
    let free = vec![x.clone()];
    let binders = random::vars(&["x", "y", "z"]);
    let (mut cases, mut models) = (0, 0);
    while cases < 1000 {
        let symbols = random_signature(&mut r);
        let size = r.gen_range(1..=4);
        let m = random_model(&symbols, size, &mut r);
        let names = m.elements().to_vec();
        models += 1;
        for _ in 0..40 {
            let shape = FormulaShape {
                free: &free,
                binders: &binders,
                names: &names,
                max_degree: 3,
                max_depth: 2,
            };
            let h = random_formula(&symbols, &shape, &mut r);
            let mu = random_term(&symbols, &[], &names, 2, &mut r);
            let v = m.eval_term(&mu).map_err(|e| e.to_string())?;
            let by_term = subst_formula(&h, &mu, &x).map_err(|e| e.to_string())?;
            let by_name = subst_formula(&h, &Term::name(m.element(v)), &x).map_err(|e| e.to_string())?;
            let a = m.eval_formula(&by_term).map_err(|e| e.to_string())?.is_top();
            let b = m.eval_formula(&by_name).map_err(|e| e.to_string())?.is_top();
            let c = m.eval_env(&h, &mut vec![(x.clone(), v)]).map_err(|e| e.to_string())?;
            if a != b || a != c {
                return Err(format!("H = {h}, mu = {mu}: {a} / {b} / {c}"));
            }
            cases += 1;
        }
    }
    if models < 20 {
        return Err(format!("only {models} models"));
    }
    Ok(format!("{cases} cases over {models} models"))
}

/// Every model with 1 to 3 elements over two unary functions.
fn unary_models() -> Vec<Model> {
    let mut out = Vec::new();
    for n in 1..=3usize {
        let tables = n.pow(n as u32);
        let decode = |mut code: usize| -> Vec<usize> {
            (0..n)
                .map(|_| {
                    let d = code % n;
                    code /= n;
                    d
                })
                .collect()
        };
        for fi in 0..tables {
            for gi in 0..tables {
                let mut m = Model::with_size(n).unwrap();
                m.set_function("f", 1, decode(fi)).unwrap();
                m.set_function("g", 1, decode(gi)).unwrap();
                out.push(m);
            }
        }
    }
    out
}

fn name_reduction() -> Outcome {
    let symbols = SymbolTable::new().with_function("f", 1).with_function("g", 1);
    let models = unary_models();
    let mut checked = 0;
    for (i, m) in models.iter().enumerate() {
        let report = check_name_reduction(m, &symbols, 2, 2, 3).map_err(|e| e.to_string())?;
        if !report.agrees() {
            return Err(format!("model {i}: {:?}", report.disagreements.first()));
        }
        checked += report.checked.len();
    }
    if models.len() != 746 {
        return Err(format!("{} models", models.len()));
    }
    Ok(format!("{} models, {checked} classes", models.len()))
}

fn complete_henkin() -> Outcome {
    let mut r = random::rng(44);
    let mut classes = 0;
    for i in 0..10 {
        let symbols = random_signature(&mut r);
        let size = r.gen_range(1..=5);
        let m = random_model(&symbols, size, &mut r);
        let report = check_complete_henkin(&m, &symbols, 3, 1).map_err(|e| e.to_string())?;
        if !report.passes() {
            return Err(format!("model {i}: {report:?}"));
        }
        // With every element named the formulas over x define every subset.
        if report.witness_classes != 1 << size {
            return Err(format!("model {i}: {} classes over {size} elements", report.witness_classes));
        }
        classes += report.witness_classes + report.closed_classes;
    }
    Ok(format!("10 models, {classes} classes"))
}

fn submodels() -> Outcome {
    let start = Instant::now();
    let mut r = random::rng(55);
    let free = random::vars(&["x"]);
    let binders = random::vars(&["x", "y"]);
    let bounds = Bounds {
        max_rank: 3,
        max_degree: 3,
        max_depth: 1,
    };
    let mut kept = Vec::new();
    for i in 0..10 {
        let symbols = random_signature(&mut r);
        let size = r.gen_range(1..=6);
        let m = random_model(&symbols, size, &mut r);
        let shape = FormulaShape {
            free: &free,
            binders: &binders,
            names: &[],
            max_degree: 2,
            max_depth: 1,
        };
        let mut axioms = Vec::new();
        for _ in 0..60 {
            if axioms.len() == 3 {
                break;
            }
            let f = random_formula(&symbols, &shape, &mut r);
            if f.gen().degree() <= 3 && m.is_valid(&f).map_err(|e| e.to_string())?.is_top() {
                axioms.push(f);
            }
        }
        let sys = SystemSpec::new(symbols, axioms).map_err(|e| e.to_string())?;
        let res = extract_submodel(&m, &sys, bounds).map_err(|e| e.to_string())?;
        if !res.audit.agrees() {
            return Err(format!("model {i}: audit disagrees on {:?}", res.audit.disagreements.first()));
        }
        if !res.validation.is_empty() {
            return Err(format!("model {i}: submodel fails {:?}", res.validation));
        }
        kept.push(format!("{}/{}", res.kept_elements.len(), size));
    }
    within(
        Duration::from_secs(300),
        start.elapsed(),
        format!("10 models, kept {}", kept.join(" ")),
    )
}

fn acyclic(k: usize, mem: &[Vec<bool>]) -> bool {
    // Kahn's algorithm on the membership edges.
    let mut indeg: Vec<usize> = (0..k).map(|b| (0..k).filter(|&a| mem[a][b]).count()).collect();
    let mut ready: Vec<usize> = (0..k).filter(|&b| indeg[b] == 0).collect();
    let mut done = 0;
    while let Some(a) = ready.pop() {
        done += 1;
        for b in 0..k {
            if mem[a][b] {
                indeg[b] -= 1;
                if indeg[b] == 0 {
                    ready.push(b);
                }
            }
        }
    }
    done == k
}

fn extensional(k: usize, mem: &[Vec<bool>]) -> bool {
    let sets: BTreeSet<Vec<bool>> = (0..k).map(|b| (0..k).map(|a| mem[a][b]).collect()).collect();
    sets.len() == k
}

/// Checks a collapse against the graph: injective, edge-preserving both
/// ways, and onto a transitive family.
fn check_collapse(k: usize, mem: &[Vec<bool>], g: &MembershipDigraph) -> Result<(), String> {
    let ok = acyclic(k, mem) && extensional(k, mem);
    match (mostowski_collapse(g), ok) {
        (Err(_), false) => Ok(()),
        (Err(e), true) => Err(format!("{g}: unexpected error {e}")),
        (Ok(_), false) => Err(format!("{g}: collapsed a cyclic or non-extensional graph")),
        (Ok(map), true) => {
            let image: Vec<&HfSet> = map.iter().map(|(_, s)| s).collect();
            let distinct: BTreeSet<&HfSet> = image.iter().copied().collect();
            if distinct.len() != k {
                return Err(format!("{g}: collapse is not injective"));
            }
            for a in 0..k {
                for b in 0..k {
                    if image[b].contains(image[a]) != mem[a][b] {
                        return Err(format!("{g}: edge ({a}, {b}) not preserved"));
                    }
                }
                if image[a].members().iter().any(|s| !distinct.contains(s)) {
                    return Err(format!("{g}: image is not transitive"));
                }
            }
            Ok(())
        }
    }
}

fn collapse() -> Outcome {
    let mut exhaustive = 0;
    let mut collapsed = 0;
    for k in 1..=4usize {
        for code in 0u32..1 << (k * k) {
            let mem: Vec<Vec<bool>> = (0..k)
                .map(|a| (0..k).map(|b| code >> (a * k + b) & 1 == 1).collect())
                .collect();
            let edges = (0..k).flat_map(|a| (0..k).map(move |b| (a, b))).filter(|&(a, b)| mem[a][b]);
            let g = MembershipDigraph::from_indices(k, edges.collect::<Vec<_>>());
            check_collapse(k, &mem, &g)?;
            exhaustive += 1;
            collapsed += usize::from(acyclic(k, &mem) && extensional(k, &mem));
        }
    }
    let mut r = random::rng(66);
    for _ in 0..200 {
        let k = r.gen_range(1..=7);
        // Build in a topological order with distinct member sets, then relabel.
        let mut by_order: Vec<Vec<usize>> = Vec::new();
        while by_order.len() < k {
            let i = by_order.len();
            let members: Vec<usize> = (0..i).filter(|_| r.gen_bool(0.4)).collect();
            if !by_order.contains(&members) {
                by_order.push(members);
            }
        }
        let mut perm: Vec<usize> = (0..k).collect();
        perm.shuffle(&mut r);
        let mut mem = vec![vec![false; k]; k];
        for (b, members) in by_order.iter().enumerate() {
            for &a in members {
                mem[perm[a]][perm[b]] = true;
            }
        }
        let edges: Vec<(usize, usize)> = (0..k)
            .flat_map(|a| (0..k).map(move |b| (a, b)))
            .filter(|&(a, b)| mem[a][b])
            .collect();
        let g = MembershipDigraph::from_indices(k, edges);
        if !(acyclic(k, &mem) && extensional(k, &mem)) {
            return Err(format!("generator produced {g}"));
        }
        check_collapse(k, &mem, &g)?;
    }
    Ok(format!("{exhaustive} graphs on up to 4 nodes ({collapsed} collapsible), 200 random DAGs"))
}

fn rst_on_v4() -> Outcome {
    let start = Instant::now();
    let m = build_vset(4).map_err(|e| e.to_string())?;
    let verdicts = rst_audit(&m, &SampleProperty::defaults()).map_err(|e| e.to_string())?;
    let holds: Vec<bool> = (1..=6)
        .map(|p| verdicts.iter().filter(|v| v.axiom.principle == p).all(|v| v.holds))
        .collect();
    let shown: Vec<String> = holds
        .iter()
        .enumerate()
        .map(|(i, &h)| format!("P{}{}", i + 1, if h { "⊤" } else { "⊥" }))
        .collect();
    let detail = format!("{} on {} elements", shown.join(" "), m.size());
    if holds != [true, true, true, false, false, true] || m.size() != 16 {
        return Err(detail);
    }
    within(Duration::from_secs(60), start.elapsed(), detail)
}

fn golden_corpus() -> Outcome {
    let out = common::run_corpus();
    let detail = format!(
        "{}/{} proofs accepted, {}/{} mutations rejected at the expected step",
        out.accepted, out.proofs, out.rejected_as_expected, out.mutations
    );
    if !out.failures.is_empty() {
        return Err(format!("{detail}; {}", out.failures.join("; ")));
    }
    if out.proofs < 10 || out.mutations < 30 || !out.every_kind {
        return Err(detail);
    }
    Ok(detail)
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("soundness of random proofs", soundness),
        ("ground term and name substitution", ground_name_substitution),
        ("name semantics vs ground-term semantics", name_reduction),
        ("complete Henkin systems", complete_henkin),
        ("submodel extraction", submodels),
        ("transitive collapse", collapse),
        ("set-theoretic principles on V4", rst_on_v4),
        ("golden proof corpus", golden_corpus),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
