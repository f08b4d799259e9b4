//! Hereditarily finite sets, membership structures, Mostowski collapse and
//! an audit of the RST principles on finite models over `in/2`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::model::{EvalError, Model, ModelError};
use crate::sexp::{self, Sexp, SexpError};
use crate::syntax::{Formula, SymbolTable, Term, Var};

pub const VSET_CAP: usize = 4;
pub const MEMBERSHIP: &str = "in";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SetTheoryError {
    #[error("V_0 is empty, and a universe must be nonempty")]
    EmptyVset,
    #[error("V_{n} is too large to build (cap is {cap})")]
    TooLarge { n: usize, cap: usize },
    #[error("invalid set literal `{0}`")]
    BadLiteral(String),
    #[error(transparent)]
    Sexp(#[from] SexpError),
    #[error("malformed {what}: `{text}`")]
    Malformed { what: &'static str, text: String },
    #[error("node `{0}` listed twice")]
    DuplicateNode(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("membership cycle (violates regularity): {}", .0.join(" -> "))]
    Cycle(Vec<String>),
    #[error("`{a}` and `{b}` have the same members")]
    NotExtensional { a: String, b: String },
    #[error("model does not interpret `in` as a binary predicate")]
    NotMembership,
    #[error("sample property `{formula}`: {reason}")]
    SampleProfile { formula: Formula, reason: &'static str },
    #[error("{label}: evaluator says {evaluated}, native checker says {native}")]
    Disagreement { label: String, evaluated: bool, native: bool },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// A hereditarily finite set. Members are kept sorted and distinct, so
/// structural equality is extensional equality.
///
/// The order compares sets as the binary numbers of their Ackermann codes
/// (`code(s) = sum of 2^code(e)` over members `e`), without computing
/// the codes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct HfSet(Vec<HfSet>);

impl Ord for HfSet {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.0.iter().rev();
        let mut b = other.0.iter().rev();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(x), Some(y)) => match x.cmp(y) {
                    Ordering::Equal => continue,
                    o => return o,
                },
            }
        }
    }
}

impl PartialOrd for HfSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl HfSet {
    pub fn empty() -> HfSet {
        HfSet(Vec::new())
    }

    pub fn from_members(members: impl IntoIterator<Item = HfSet>) -> HfSet {
        let mut v: Vec<HfSet> = members.into_iter().collect();
        v.sort();
        v.dedup();
        HfSet(v)
    }

    pub fn members(&self) -> &[HfSet] {
        &self.0
    }

    pub fn contains(&self, x: &HfSet) -> bool {
        self.0.binary_search(x).is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.0.iter().map(|m| m.rank() + 1).max().unwrap_or(0)
    }

    /// The Ackermann code, if it fits in 64 bits.
    pub fn ackermann(&self) -> Option<u64> {
        self.0.iter().try_fold(0u64, |acc, m| {
            let c = m.ackermann()?;
            (c < 64).then(|| acc | (1 << c))
        })
    }

    pub fn is_transitive(&self) -> bool {
        self.0.iter().all(|y| y.0.iter().all(|z| self.contains(z)))
    }

    pub fn parse(text: &str) -> Result<HfSet, SetTheoryError> {
        let bad = || SetTheoryError::BadLiteral(text.to_string());
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let set = parse_set(&chars, &mut pos).ok_or_else(bad)?;
        if pos != chars.len() {
            return Err(bad());
        }
        Ok(set)
    }
}

fn parse_set(chars: &[char], pos: &mut usize) -> Option<HfSet> {
    if chars.get(*pos) != Some(&'{') {
        return None;
    }
    *pos += 1;
    let mut members = Vec::new();
    if chars.get(*pos) == Some(&'}') {
        *pos += 1;
        return Some(HfSet::empty());
    }
    loop {
        members.push(parse_set(chars, pos)?);
        match chars.get(*pos) {
            Some(',') => *pos += 1,
            Some('}') => {
                *pos += 1;
                return Some(HfSet::from_members(members));
            }
            _ => return None,
        }
    }
}

impl fmt::Display for HfSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

/// The sets of rank below `n`, in canonical order.
pub fn vset(n: usize) -> Vec<HfSet> {
    let mut level: Vec<HfSet> = Vec::new();
    for _ in 0..n {
        let k = level.len();
        let mut next = Vec::with_capacity(1 << k);
        for mask in 0u64..(1 << k) {
            next.push(HfSet::from_members(
                (0..k).filter(|i| mask >> i & 1 == 1).map(|i| level[i].clone()),
            ));
        }
        next.sort();
        level = next;
    }
    level
}

pub fn membership_signature() -> SymbolTable {
    SymbolTable::new().with_predicate(MEMBERSHIP, 2)
}

/// `V_n` as a model over `in/2` with the true membership relation. Element
/// ids are set literals.
pub fn build_vset(n: usize) -> Result<Model, SetTheoryError> {
    if n == 0 {
        return Err(SetTheoryError::EmptyVset);
    }
    if n > VSET_CAP {
        return Err(SetTheoryError::TooLarge { n, cap: VSET_CAP });
    }
    Ok(sets_model(&vset(n)))
}

/// The model over `in/2` on the given distinct sets.
pub fn sets_model(sets: &[HfSet]) -> Model {
    let mut m = Model::new(sets.iter().map(|s| s.to_string())).expect("distinct nonempty sets");
    let n = sets.len();
    let mut holds = vec![false; n * n];
    for (a, x) in sets.iter().enumerate() {
        for (b, y) in sets.iter().enumerate() {
            holds[a * n + b] = y.contains(x);
        }
    }
    m.set_predicate(MEMBERSHIP, 2, holds).expect("fresh symbol");
    m
}

/// Membership matrix of a model: `rel[a][b]` iff `a in b`.
fn membership(m: &Model) -> Result<Vec<Vec<bool>>, SetTheoryError> {
    let rel = m.predicate(MEMBERSHIP).ok_or(SetTheoryError::NotMembership)?;
    if rel.arity != 2 {
        return Err(SetTheoryError::NotMembership);
    }
    let n = m.size();
    Ok((0..n)
        .map(|a| (0..n).map(|b| m.holds(MEMBERSHIP, &[a, b]).expect("binary")).collect())
        .collect())
}

fn members_of(rel: &[Vec<bool>], u: usize) -> Vec<usize> {
    (0..rel.len()).filter(|&y| rel[y][u]).collect()
}

fn element(m: &Model, u: &str) -> Result<usize, SetTheoryError> {
    m.element_index(u).ok_or_else(|| SetTheoryError::UnknownNode(u.to_string()))
}

/// Every member of a member of `u` is a member of `u`.
pub fn is_transitive(m: &Model, u: &str) -> Result<bool, SetTheoryError> {
    let rel = membership(m)?;
    let u = element(m, u)?;
    Ok(transitive_at(&rel, u))
}

fn transitive_at(rel: &[Vec<bool>], u: usize) -> bool {
    members_of(rel, u)
        .into_iter()
        .all(|y| members_of(rel, y).into_iter().all(|z| rel[z][u]))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Friendliness {
    Friendly,
    /// The first failing clause (1 to 4) with the elements that witness it.
    Fails { clause: usize, witnesses: Vec<String> },
}

impl Friendliness {
    pub fn holds(&self) -> bool {
        *self == Friendliness::Friendly
    }
}

/// Subset-friendliness of `u`, with power sets and transitive covers sought
/// inside the model's universe.
pub fn is_subset_friendly(m: &Model, u: &str) -> Result<Friendliness, SetTheoryError> {
    let rel = membership(m)?;
    let u = element(m, u)?;
    Ok(friendly_at(m, &rel, u))
}

fn friendly_at(m: &Model, rel: &[Vec<bool>], u: usize) -> Friendliness {
    let name = |i: usize| m.element(i).to_string();
    let fail = |clause, w: Vec<usize>| Friendliness::Fails {
        clause,
        witnesses: w.into_iter().map(name).collect(),
    };
    let n = rel.len();
    let mem = members_of(rel, u);
    if !mem.iter().any(|&e| members_of(rel, e).is_empty()) {
        return fail(1, vec![u]);
    }
    for &y in &mem {
        if let Some(z) = members_of(rel, y).into_iter().find(|&z| !rel[z][u]) {
            return fail(2, vec![y, z]);
        }
    }
    for &y in &mem {
        let ys = members_of(rel, y);
        let power: Vec<usize> = (0..n)
            .filter(|&v| members_of(rel, v).iter().all(|z| ys.contains(z)))
            .collect();
        if !mem.iter().any(|&p| members_of(rel, p) == power) {
            return fail(3, vec![y]);
        }
    }
    for &y in &mem {
        for &z in &mem {
            if !mem.iter().any(|&v| transitive_at(rel, v) && rel[y][v] && rel[z][v]) {
                return fail(4, vec![y, z]);
            }
        }
    }
    Friendliness::Friendly
}

/// A finite directed graph read as membership: an edge `(a, b)` means
/// `a in b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipDigraph {
    nodes: Vec<String>,
    index: BTreeMap<String, usize>,
    edges: BTreeSet<(usize, usize)>,
}

impl MembershipDigraph {
    pub fn new<S: Into<String>>(nodes: impl IntoIterator<Item = S>) -> Result<Self, SetTheoryError> {
        let mut g = MembershipDigraph {
            nodes: Vec::new(),
            index: BTreeMap::new(),
            edges: BTreeSet::new(),
        };
        for n in nodes {
            let n = n.into();
            if sexp::parse_one(&n).ok().and_then(|s| s.as_atom().map(|a| a == n)) != Some(true) {
                return Err(SetTheoryError::Malformed {
                    what: "node id",
                    text: n,
                });
            }
            if g.index.insert(n.clone(), g.nodes.len()).is_some() {
                return Err(SetTheoryError::DuplicateNode(n));
            }
            g.nodes.push(n);
        }
        Ok(g)
    }

    /// Nodes `n0 .. n{k-1}` with edges given by index pairs.
    pub fn from_indices(k: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = MembershipDigraph::new((0..k).map(|i| format!("n{i}"))).expect("distinct ids");
        g.edges.extend(edges.into_iter().inspect(|&(a, b)| assert!(a < k && b < k)));
        g
    }

    pub fn add_edge(&mut self, a: &str, b: &str) -> Result<(), SetTheoryError> {
        let ia = self.node_index(a)?;
        let ib = self.node_index(b)?;
        self.edges.insert((ia, ib));
        Ok(())
    }

    fn node_index(&self, a: &str) -> Result<usize, SetTheoryError> {
        self.index.get(a).copied().ok_or_else(|| SetTheoryError::UnknownNode(a.to_string()))
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.edges.iter().map(|&(a, b)| (self.nodes[a].as_str(), self.nodes[b].as_str()))
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a, b))
    }

    fn members(&self, b: usize) -> Vec<usize> {
        self.edges.iter().filter(|&&(_, y)| y == b).map(|&(x, _)| x).collect()
    }

    /// The membership relation of a model over `in/2`.
    pub fn from_model(m: &Model) -> Result<Self, SetTheoryError> {
        let rel = membership(m)?;
        let mut g = MembershipDigraph::new(m.elements().iter().cloned())?;
        for (a, row) in rel.iter().enumerate() {
            for (b, &h) in row.iter().enumerate() {
                if h {
                    g.edges.insert((a, b));
                }
            }
        }
        Ok(g)
    }

    /// The model over `in/2` with this membership relation.
    pub fn to_model(&self) -> Result<Model, SetTheoryError> {
        let mut m = Model::new(self.nodes.iter().cloned())?;
        let n = self.len();
        let mut holds = vec![false; n * n];
        for &(a, b) in &self.edges {
            holds[a * n + b] = true;
        }
        m.set_predicate(MEMBERSHIP, 2, holds)?;
        Ok(m)
    }

    /// Reads `(digraph (nodes a b c) (edges (a b) (b c)))`.
    pub fn parse(text: &str) -> Result<Self, SetTheoryError> {
        let top = sexp::parse_one(text)?;
        let malformed = |what, s: &Sexp| SetTheoryError::Malformed {
            what,
            text: s.to_string(),
        };
        let items = match top.as_list() {
            Some(items) if top.head() == Some("digraph") => &items[1..],
            _ => return Err(malformed("digraph", &top)),
        };
        let mut nodes = None;
        let mut edges = Vec::new();
        for item in items {
            let list = item.as_list().ok_or_else(|| malformed("digraph section", item))?;
            match item.head() {
                Some("nodes") if nodes.is_none() => {
                    let ids = list[1..]
                        .iter()
                        .map(|s| s.as_atom().map(str::to_string).ok_or_else(|| malformed("node id", s)))
                        .collect::<Result<Vec<_>, _>>()?;
                    nodes = Some(ids);
                }
                Some("edges") => {
                    for e in &list[1..] {
                        match e.as_list() {
                            Some([a, b]) => match (a.as_atom(), b.as_atom()) {
                                (Some(a), Some(b)) => edges.push((a.to_string(), b.to_string())),
                                _ => return Err(malformed("edge", e)),
                            },
                            _ => return Err(malformed("edge", e)),
                        }
                    }
                }
                _ => return Err(malformed("digraph section", item)),
            }
        }
        let mut g = MembershipDigraph::new(nodes.unwrap_or_default())?;
        for (a, b) in edges {
            g.add_edge(&a, &b)?;
        }
        Ok(g)
    }
}

impl fmt::Display for MembershipDigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(digraph (nodes")?;
        for n in &self.nodes {
            write!(f, " {n}")?;
        }
        write!(f, ") (edges")?;
        for (a, b) in self.edges() {
            write!(f, " ({a} {b})")?;
        }
        write!(f, "))")
    }
}

/// Distinct nodes have distinct member sets.
pub fn is_extensional(g: &MembershipDigraph) -> bool {
    extensionality_failure(g).is_none()
}

fn extensionality_failure(g: &MembershipDigraph) -> Option<(usize, usize)> {
    let mut seen: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for b in 0..g.len() {
        if let Some(&a) = seen.get(&g.members(b)) {
            return Some((a, b));
        }
        seen.insert(g.members(b), b);
    }
    None
}

/// A membership cycle, if any, as a node path that returns to its start.
fn find_cycle(g: &MembershipDigraph) -> Option<Vec<usize>> {
    // 0 unvisited, 1 on stack, 2 done.
    fn dfs(g: &MembershipDigraph, v: usize, state: &mut [u8], stack: &mut Vec<usize>) -> Option<Vec<usize>> {
        state[v] = 1;
        stack.push(v);
        for w in g.members(v) {
            if state[w] == 1 {
                let start = stack.iter().position(|&s| s == w).expect("on stack");
                let mut cycle = stack[start..].to_vec();
                cycle.push(w);
                // Report in membership direction: each node is in the next.
                cycle.reverse();
                return Some(cycle);
            }
            if state[w] == 0 {
                if let Some(c) = dfs(g, w, state, stack) {
                    return Some(c);
                }
            }
        }
        stack.pop();
        state[v] = 2;
        None
    }
    let mut state = vec![0u8; g.len()];
    for v in 0..g.len() {
        if state[v] == 0 {
            if let Some(c) = dfs(g, v, &mut state, &mut Vec::new()) {
                return Some(c);
            }
        }
    }
    None
}

/// The transitive collapse `f(b) = { f(a) : a in b }`, for well-founded
/// extensional digraphs. Entries follow node order.
pub fn mostowski_collapse(g: &MembershipDigraph) -> Result<Vec<(String, HfSet)>, SetTheoryError> {
    if let Some(cycle) = find_cycle(g) {
        return Err(SetTheoryError::Cycle(cycle.into_iter().map(|i| g.nodes[i].clone()).collect()));
    }
    if let Some((a, b)) = extensionality_failure(g) {
        return Err(SetTheoryError::NotExtensional {
            a: g.nodes[a].clone(),
            b: g.nodes[b].clone(),
        });
    }
    fn value(g: &MembershipDigraph, v: usize, memo: &mut Vec<Option<HfSet>>) -> HfSet {
        if let Some(s) = &memo[v] {
            return s.clone();
        }
        let s = HfSet::from_members(g.members(v).into_iter().map(|a| value(g, a, memo)).collect::<Vec<_>>());
        memo[v] = Some(s.clone());
        s
    }
    let mut memo = vec![None; g.len()];
    Ok((0..g.len())
        .map(|v| (g.nodes[v].clone(), value(g, v, &mut memo)))
        .collect())
}

/// The collapse as `(collapse (a "{}") (b "{{}}"))`.
pub fn write_collapse(map: &[(String, HfSet)]) -> String {
    let mut out = String::from("(collapse");
    for (n, s) in map {
        out.push_str(&format!("\n  ({n} {})", sexp::quote(&s.to_string())));
    }
    out.push(')');
    out
}

fn v(name: &str) -> Term {
    Term::var(name)
}

fn mem(a: &str, b: &str) -> Formula {
    Formula::pred(MEMBERSHIP, vec![v(a), v(b)])
}

fn forall(x: &str, f: Formula) -> Formula {
    Formula::forall(x, f)
}

fn exists(x: &str, f: Formula) -> Formula {
    Formula::exists(x, f)
}

fn is_empty_f(y: &str, z: &str) -> Formula {
    Formula::not(exists(z, mem(z, y)))
}

fn transitive_f(t: &str, w: &str, s: &str) -> Formula {
    forall(w, Formula::imp(mem(w, t), forall(s, Formula::imp(mem(s, w), mem(s, t)))))
}

/// Subset-friendliness of `?u` as a formula.
fn subset_friendly_f() -> Formula {
    let c1 = exists("e", Formula::and(mem("e", "u"), is_empty_f("e", "z")));
    let c2 = transitive_f("u", "y", "z");
    let c3 = forall(
        "y",
        Formula::imp(
            mem("y", "u"),
            exists(
                "p",
                Formula::and(
                    mem("p", "u"),
                    forall(
                        "v",
                        Formula::iff(mem("v", "p"), forall("z", Formula::imp(mem("z", "v"), mem("z", "y")))),
                    ),
                ),
            ),
        ),
    );
    let c4 = forall(
        "y",
        forall(
            "z",
            Formula::imp(
                Formula::and(mem("y", "u"), mem("z", "u")),
                exists(
                    "v",
                    Formula::and(
                        Formula::and(mem("v", "u"), transitive_f("v", "w", "t")),
                        Formula::and(mem("y", "v"), mem("z", "v")),
                    ),
                ),
            ),
        ),
    );
    Formula::and(Formula::and(c1, c2), Formula::and(c3, c4))
}

/// A property for the subset scheme: a formula in `?y`, possibly with
/// parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SampleProperty {
    /// `y` is empty.
    Empty,
    /// `y` is transitive.
    Transitive,
    /// `y` is a member of the parameter `?p`.
    MemberOfParameter,
    Formula(Formula),
}

impl SampleProperty {
    pub fn defaults() -> Vec<SampleProperty> {
        vec![SampleProperty::Empty, SampleProperty::Transitive, SampleProperty::MemberOfParameter]
    }

    pub fn formula(&self) -> Formula {
        match self {
            SampleProperty::Empty => is_empty_f("y", "z"),
            SampleProperty::Transitive => transitive_f("y", "z", "w"),
            SampleProperty::MemberOfParameter => mem("y", "p"),
            SampleProperty::Formula(f) => f.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RstAxiom {
    /// `A1` .. `A6`, with `A2.k` for subset instances.
    pub label: String,
    /// The principle it formalizes, `P1` .. `P6`.
    pub principle: usize,
    pub formula: Formula,
}

fn subset_instance(f: &Formula) -> Result<Formula, SetTheoryError> {
    let y = Var::new("y");
    let profile = |reason| SetTheoryError::SampleProfile {
        formula: f.clone(),
        reason,
    };
    if !f.is_free(&y) {
        return Err(profile("?y must occur free"));
    }
    let params: Vec<Var> = f.free_vars_in_order().into_iter().filter(|p| p != &y).collect();
    if params.iter().any(|p| p.name() == "a" || p.name() == "u") {
        return Err(profile("parameters ?a and ?u are reserved"));
    }
    let body = forall(
        "a",
        exists("u", forall("y", Formula::iff(mem("y", "u"), Formula::and(mem("y", "a"), f.clone())))),
    );
    Ok(params
        .into_iter()
        .rev()
        .fold(body, |acc, p| Formula::quantified(crate::syntax::Quantifier::Forall, p, acc)))
}

/// First-order sentences over `in/2` for the six principles, with one
/// subset instance per sample property. Parameters of a sample property
/// are universally quantified outermost.
pub fn rst_formulas(samples: &[Formula]) -> Result<Vec<RstAxiom>, SetTheoryError> {
    let ax = |label: &str, principle, formula| RstAxiom {
        label: label.to_string(),
        principle,
        formula,
    };
    let mut out = vec![ax(
        "A1",
        1,
        forall(
            "a",
            forall(
                "b",
                Formula::imp(
                    forall("y", Formula::iff(mem("y", "a"), mem("y", "b"))),
                    Formula::eq(v("a"), v("b")),
                ),
            ),
        ),
    )];
    for (k, f) in samples.iter().enumerate() {
        out.push(ax(&format!("A2.{}", k + 1), 2, subset_instance(f)?));
    }
    out.push(ax(
        "A3",
        3,
        forall(
            "u",
            Formula::imp(
                exists("y", mem("y", "u")),
                exists(
                    "y",
                    Formula::and(mem("y", "u"), Formula::not(exists("z", Formula::and(mem("z", "u"), mem("z", "y"))))),
                ),
            ),
        ),
    ));
    out.push(ax(
        "A4",
        4,
        forall("a", forall("b", exists("u", Formula::and(mem("a", "u"), mem("b", "u"))))),
    ));
    out.push(ax(
        "A5",
        5,
        forall("a", exists("u", Formula::and(mem("a", "u"), subset_friendly_f()))),
    ));
    let nonempty = forall("a", Formula::imp(mem("a", "u"), exists("z", mem("z", "a"))));
    let disjoint = forall(
        "a",
        forall(
            "b",
            Formula::imp(
                Formula::and(
                    Formula::and(mem("a", "u"), mem("b", "u")),
                    Formula::not(Formula::eq(v("a"), v("b"))),
                ),
                Formula::not(exists("z", Formula::and(mem("z", "a"), mem("z", "b")))),
            ),
        ),
    );
    let chooses = exists(
        "y",
        forall(
            "a",
            Formula::imp(
                mem("a", "u"),
                exists(
                    "v",
                    forall("w", Formula::iff(Formula::and(mem("w", "y"), mem("w", "a")), Formula::eq(v("w"), v("v")))),
                ),
            ),
        ),
    );
    out.push(ax(
        "A6",
        6,
        forall("u", Formula::imp(Formula::and(nonempty, disjoint), chooses)),
    ));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RstVerdict {
    pub axiom: RstAxiom,
    pub holds: bool,
    /// Elements witnessing a failure, from the native checker.
    pub witnesses: Vec<String>,
}

/// Native checks of the principles on the membership relation.
struct Native<'a> {
    m: &'a Model,
    rel: Vec<Vec<bool>>,
    members: Vec<Vec<usize>>,
}

impl Native<'_> {
    fn names(&self, xs: &[usize]) -> Vec<String> {
        xs.iter().map(|&i| self.m.element(i).to_string()).collect()
    }

    fn n(&self) -> usize {
        self.rel.len()
    }

    fn p1(&self) -> Option<Vec<usize>> {
        for a in 0..self.n() {
            for b in a + 1..self.n() {
                if self.members[a] == self.members[b] {
                    return Some(vec![a, b]);
                }
            }
        }
        None
    }

    fn p2(&self, prop: &SampleProperty) -> Result<Option<Vec<usize>>, SetTheoryError> {
        let f = prop.formula();
        let params: Vec<Var> = f.free_vars_in_order().into_iter().filter(|p| p.name() != "y").collect();
        let n = self.n();
        let mut assignment = vec![0usize; params.len()];
        loop {
            for a in 0..n {
                let mut target = Vec::new();
                for &y in &self.members[a] {
                    let has = match prop {
                        SampleProperty::Empty => self.members[y].is_empty(),
                        SampleProperty::Transitive => transitive_at(&self.rel, y),
                        SampleProperty::MemberOfParameter => self.rel[y][assignment[0]],
                        SampleProperty::Formula(f) => {
                            let mut env: Vec<(Var, usize)> =
                                params.iter().cloned().zip(assignment.iter().copied()).collect();
                            env.push((Var::new("y"), y));
                            self.m.eval_env(f, &mut env)?
                        }
                    };
                    if has {
                        target.push(y);
                    }
                }
                if !(0..n).any(|u| self.members[u] == target) {
                    let mut w = assignment.clone();
                    w.push(a);
                    return Ok(Some(w));
                }
            }
            let mut i = params.len();
            loop {
                if i == 0 {
                    return Ok(None);
                }
                i -= 1;
                assignment[i] += 1;
                if assignment[i] < n {
                    break;
                }
                assignment[i] = 0;
            }
        }
    }

    fn p3(&self) -> Option<Vec<usize>> {
        (0..self.n())
            .find(|&u| {
                !self.members[u].is_empty()
                    && !self.members[u]
                        .iter()
                        .any(|&y| self.members[y].iter().all(|&z| !self.rel[z][u]))
            })
            .map(|u| vec![u])
    }

    fn p4(&self) -> Option<Vec<usize>> {
        for a in 0..self.n() {
            for b in 0..self.n() {
                if !(0..self.n()).any(|u| self.rel[a][u] && self.rel[b][u]) {
                    return Some(vec![a, b]);
                }
            }
        }
        None
    }

    fn p5(&self) -> Option<Vec<usize>> {
        let friendly: Vec<bool> = (0..self.n()).map(|u| friendly_at(self.m, &self.rel, u).holds()).collect();
        (0..self.n())
            .find(|&a| !(0..self.n()).any(|u| self.rel[a][u] && friendly[u]))
            .map(|a| vec![a])
    }

    fn p6(&self) -> Option<Vec<usize>> {
        let n = self.n();
        for u in 0..n {
            let elems = &self.members[u];
            let nonempty = elems.iter().all(|&a| !self.members[a].is_empty());
            let disjoint = elems.iter().enumerate().all(|(i, &a)| {
                elems[i + 1..]
                    .iter()
                    .all(|&b| self.members[a].iter().all(|z| !self.rel[*z][b]))
            });
            if !(nonempty && disjoint) {
                continue;
            }
            let chooses = (0..n).any(|y| {
                elems
                    .iter()
                    .all(|&a| self.members[a].iter().filter(|&&w| self.rel[w][y]).count() == 1)
            });
            if !chooses {
                return Some(vec![u]);
            }
        }
        None
    }
}

/// Evaluates each RST sentence in `m` and checks the verdict against a
/// direct computation on the membership relation.
pub fn rst_audit(m: &Model, samples: &[SampleProperty]) -> Result<Vec<RstVerdict>, SetTheoryError> {
    let rel = membership(m)?;
    let members = (0..m.size()).map(|u| members_of(&rel, u)).collect();
    let native = Native { m, rel, members };
    let formulas: Vec<Formula> = samples.iter().map(SampleProperty::formula).collect();
    let axioms = rst_formulas(&formulas)?;
    let mut out = Vec::new();
    let mut sample = samples.iter();
    for axiom in axioms {
        let evaluated = m.eval_formula(&axiom.formula)?.is_top();
        let failure = match axiom.principle {
            1 => native.p1(),
            2 => native.p2(sample.next().expect("one instance per sample"))?,
            3 => native.p3(),
            4 => native.p4(),
            5 => native.p5(),
            _ => native.p6(),
        };
        if evaluated != failure.is_none() {
            return Err(SetTheoryError::Disagreement {
                label: axiom.label,
                evaluated,
                native: failure.is_none(),
            });
        }
        out.push(RstVerdict {
            axiom,
            holds: evaluated,
            witnesses: native.names(&failure.unwrap_or_default()),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(s: &str) -> HfSet {
        HfSet::parse(s).unwrap()
    }

    #[test]
    fn canonical_order_matches_ackermann_codes() {
        let v4 = vset(4);
        assert_eq!(v4.len(), 16);
        for (i, s) in v4.iter().enumerate() {
            assert_eq!(s.ackermann(), Some(i as u64));
        }
        let v5 = vset(5);
        for w in v5.windows(2).step_by(97) {
            assert!(w[0].ackermann() < w[1].ackermann());
        }
    }

    #[test]
    fn literals_round_trip() {
        for s in vset(4) {
            assert_eq!(HfSet::parse(&s.to_string()).unwrap(), s);
        }
        assert_eq!(set("{{{}},{}}").to_string(), "{{},{{}}}");
        assert!(HfSet::parse("{{}").is_err());
        assert!(HfSet::parse("{},{}").is_err());
    }

    #[test]
    fn small_vsets() {
        assert_eq!(build_vset(0), Err(SetTheoryError::EmptyVset));
        assert!(matches!(build_vset(5), Err(SetTheoryError::TooLarge { .. })));
        let v1 = build_vset(1).unwrap();
        assert_eq!(v1.elements(), ["{}"]);
        assert!(!v1.holds("in", &[0, 0]).unwrap());
        let v2 = build_vset(2).unwrap();
        assert_eq!(v2.elements(), ["{}", "{{}}"]);
        assert!(v2.holds("in", &[0, 1]).unwrap());
        assert_eq!(build_vset(4).unwrap().size(), 16);
    }

    #[test]
    fn transitivity_and_friendliness() {
        let v4 = build_vset(4).unwrap();
        assert!(is_transitive(&v4, "{}").unwrap());
        assert!(!is_transitive(&v4, "{{{}}}").unwrap());
        assert!(is_transitive(&v4, "{{},{{}}}").unwrap());
        assert_eq!(
            is_subset_friendly(&v4, "{}").unwrap(),
            Friendliness::Fails {
                clause: 1,
                witnesses: vec!["{}".into()]
            }
        );
        assert!(matches!(
            is_subset_friendly(&v4, "{{}}").unwrap(),
            Friendliness::Fails { clause: 3, .. }
        ));
        for e in v4.elements() {
            assert!(!is_subset_friendly(&v4, e).unwrap().holds(), "{e}");
        }
    }

    #[test]
    fn extensionality_examples() {
        assert!(!is_extensional(&MembershipDigraph::from_indices(2, [])));
        assert!(is_extensional(&MembershipDigraph::from_indices(2, [(0, 1)])));
        assert!(is_extensional(&MembershipDigraph::from_indices(3, [(0, 2), (1, 2), (0, 1)])));
    }

    #[test]
    fn collapse_examples() {
        let one = mostowski_collapse(&MembershipDigraph::from_indices(1, [])).unwrap();
        assert_eq!(one[0].1, HfSet::empty());
        let mut g = MembershipDigraph::new(["a", "b", "c"]).unwrap();
        g.add_edge("a", "b").unwrap();
        g.add_edge("a", "c").unwrap();
        g.add_edge("b", "c").unwrap();
        let f = mostowski_collapse(&g).unwrap();
        let lits: Vec<String> = f.iter().map(|(_, s)| s.to_string()).collect();
        assert_eq!(lits, ["{}", "{{}}", "{{},{{}}}"]);
        assert_eq!(
            write_collapse(&f),
            "(collapse\n  (a \"{}\")\n  (b \"{{}}\")\n  (c \"{{},{{}}}\"))"
        );
        let cyc = MembershipDigraph::from_indices(2, [(0, 1), (1, 0)]);
        assert!(matches!(mostowski_collapse(&cyc), Err(SetTheoryError::Cycle(_))));
        let ne = MembershipDigraph::from_indices(3, [(0, 1), (0, 2)]);
        assert!(matches!(mostowski_collapse(&ne), Err(SetTheoryError::NotExtensional { .. })));
    }

    #[test]
    fn digraph_file_round_trip() {
        let g = MembershipDigraph::parse("(digraph (nodes a b c) (edges (a b) (a c) (b c)))").unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(MembershipDigraph::parse(&g.to_string()).unwrap(), g);
        assert!(matches!(
            MembershipDigraph::parse("(digraph (nodes a) (edges (a b)))"),
            Err(SetTheoryError::UnknownNode(_))
        ));
        assert!(MembershipDigraph::parse("(digraph (nodes a a))").is_err());
    }

    #[test]
    fn rst_sentences_transcribe_principles() {
        let ax = rst_formulas(&[SampleProperty::Empty.formula()]).unwrap();
        let text = |label: &str| ax.iter().find(|a| a.label == label).unwrap().formula.to_string();
        assert_eq!(
            text("A1"),
            "(forall ?a (forall ?b (-> (forall ?y (<-> (in ?y ?a) (in ?y ?b))) (= ?a ?b))))"
        );
        assert_eq!(
            text("A2.1"),
            "(forall ?a (exists ?u (forall ?y (<-> (in ?y ?u) (and (in ?y ?a) (not (exists ?z (in ?z ?y))))))))"
        );
        assert_eq!(
            text("A3"),
            "(forall ?u (-> (exists ?y (in ?y ?u)) (exists ?y (and (in ?y ?u) (not (exists ?z (and (in ?z ?u) (in ?z ?y))))))))"
        );
        assert!(ax.iter().all(|a| a.formula.is_closed()));
        let bad = Formula::pred("in", vec![Term::var("a"), Term::var("b")]);
        assert!(matches!(rst_formulas(&[bad]), Err(SetTheoryError::SampleProfile { .. })));
    }

    #[test]
    fn small_vset_audits_agree() {
        for n in 1..=3 {
            let m = build_vset(n).unwrap();
            rst_audit(&m, &SampleProperty::defaults()).unwrap();
        }
    }
}
