//! Loader for the golden proof corpus under `tests/corpus`.

#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use fmsys::{check_proof, Justification, Proof, SystemSpec};

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("corpus")
}

fn read(name: &str) -> String {
    let path = corpus_dir().join(name);
    fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn rows(name: &str) -> Vec<Vec<String>> {
    read(name)
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.split_whitespace().map(String::from).collect())
        .collect()
}

pub struct Entry {
    pub proof_file: String,
    pub system_file: String,
    pub system: SystemSpec,
    pub text: String,
}

pub fn entries() -> Vec<Entry> {
    rows("proofs.txt")
        .into_iter()
        .map(|r| {
            let system = SystemSpec::parse(&read(&r[1])).unwrap_or_else(|e| panic!("{}: {e}", r[1]));
            Entry {
                text: read(&r[0]),
                proof_file: r[0].clone(),
                system_file: r[1].clone(),
                system,
            }
        })
        .collect()
}

#[derive(Debug)]
pub struct Mutation {
    pub proof_file: String,
    pub step: usize,
    pub token: String,
    pub occurrence: usize,
    pub replacement: String,
    pub reject: usize,
}

pub fn mutations() -> Vec<Mutation> {
    rows("mutations.txt")
        .into_iter()
        .map(|r| Mutation {
            proof_file: r[0].clone(),
            step: r[1].parse().unwrap(),
            token: r[2].clone(),
            occurrence: r[3].parse().unwrap(),
            replacement: r[4].clone(),
            reject: r[5].parse().unwrap(),
        })
        .collect()
}

fn is_token_char(c: char) -> bool {
    !(c.is_whitespace() || matches!(c, '(' | ')' | '"' | ';'))
}

/// Byte ranges of the tokens in `text`.
fn tokens(text: &str) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        match (is_token_char(c), start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                out.push((s, i));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, text.len()));
    }
    out
}

/// Applies `m` to the proof text; panics if the token is not there.
pub fn apply(text: &str, m: &Mutation) -> String {
    let starts: Vec<usize> = text.match_indices("(step ").map(|(i, _)| i).collect();
    let lo = starts[m.step - 1];
    let hi = starts.get(m.step).copied().unwrap_or(text.len());
    let region = &text[lo..hi];
    let (s, e) = tokens(region)
        .into_iter()
        .filter(|&(s, e)| region[s..e] == m.token)
        .nth(m.occurrence - 1)
        .unwrap_or_else(|| panic!("no occurrence {} of `{}` in {m:?}", m.occurrence, m.token));
    format!("{}{}{}{}", &text[..lo], &region[..s], m.replacement, &text[lo + e..])
}

/// Checks a proof text; `Err` carries the 1-based rejected step (0 if the
/// file could not be attributed to a step) and the reason.
pub fn check_text(system: &SystemSpec, text: &str) -> Result<Proof, (usize, String)> {
    let proof = Proof::parse(text, &system.symbols).map_err(|e| (e.step().unwrap_or(0), e.to_string()))?;
    check_proof(system, &proof).map_err(|v| (v.index + 1, v.to_string()))?;
    Ok(proof)
}

/// Kinds of axiom and rule used by a proof.
pub fn kinds(proof: &Proof) -> Vec<&'static str> {
    let mut out: Vec<&'static str> = proof
        .steps
        .iter()
        .map(|s| match s.justification {
            Justification::AxiomBasis(_) => "basis",
            Justification::AxiomTaut => "taut",
            Justification::AxiomEqRefl => "eq-refl",
            Justification::AxiomEqSubst { .. } => "eq-subst",
            Justification::AxiomEqCong { .. } => "eq-cong",
            Justification::AxiomForallInst(_) => "forall-inst",
            Justification::AxiomForallImpDist(_) => "forall-imp-dist",
            Justification::AxiomExistsDef(_) => "exists-def",
            Justification::ModusPonens(..) => "mp",
            Justification::Subst { .. } => "subst",
            Justification::Gen { .. } => "gen",
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

pub const ALL_KINDS: [&str; 11] = [
    "basis",
    "eq-cong",
    "eq-refl",
    "eq-subst",
    "exists-def",
    "forall-imp-dist",
    "forall-inst",
    "gen",
    "mp",
    "subst",
    "taut",
];

pub struct CorpusOutcome {
    pub proofs: usize,
    pub accepted: usize,
    pub every_kind: bool,
    pub mutations: usize,
    pub rejected_as_expected: usize,
    pub failures: Vec<String>,
}

pub fn run_corpus() -> CorpusOutcome {
    let entries = entries();
    let mut out = CorpusOutcome {
        proofs: entries.len(),
        accepted: 0,
        every_kind: false,
        mutations: 0,
        rejected_as_expected: 0,
        failures: Vec::new(),
    };
    for e in &entries {
        match check_text(&e.system, &e.text) {
            Ok(proof) => {
                out.accepted += 1;
                out.every_kind |= kinds(&proof) == ALL_KINDS;
            }
            Err((step, why)) => out.failures.push(format!("{}: {why} (step {step})", e.proof_file)),
        }
    }
    for m in mutations() {
        out.mutations += 1;
        let e = entries
            .iter()
            .find(|e| e.proof_file == m.proof_file)
            .unwrap_or_else(|| panic!("unknown proof {}", m.proof_file));
        let mutated = apply(&e.text, &m);
        match check_text(&e.system, &mutated) {
            Err((step, _)) if step == m.reject => out.rejected_as_expected += 1,
            Err((step, why)) => out.failures.push(format!("{m:?}: rejected at step {step}: {why}")),
            Ok(_) => out.failures.push(format!("{m:?}: accepted")),
        }
    }
    out
}
