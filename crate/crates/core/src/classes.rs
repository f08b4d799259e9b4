//! Semantic classes of bounded formulas.
//!
//! Exhaustive checks over "every formula of degree at most D" cannot
//! enumerate formulas syntactically once D reaches 3. Instead we enumerate
//! the *values* such formulas can take. A value is the relation a formula
//! defines over its scope variables, taken jointly over one or more
//! domains; two formulas with the same value are interchangeable for every
//! check built on truth values. Each class keeps the first formula found
//! with its value as a representative.
//!
//! Layer `D_k(j)` holds the values of formulas of degree at most `k` whose
//! free variables lie in the base variables plus fresh variables
//! `v_1 .. v_j`. It is the union of `D_{k-1}(j)`, negations, binary
//! combinations, quantification of a scope variable, and quantification of
//! `v_{j+1}` in `D_{k-1}(j+1)`. Bound variable names do not matter
//! semantically, so this covers every formula with those free variables.
//!
//! Only layers with `k + j < D` and the target `D_D(0)` are stored. The
//! top layers `D_{D-j}(j)` are streamed straight into their projections.

use std::ops::ControlFlow;

use indexmap::IndexMap;

use crate::model::Model;
use crate::syntax::{BinOp, Formula, Quantifier, SymbolTable, Term, Var};

/// A set of points that variables range over. Terms denote elements of an
/// underlying model, where prime formulas are decided.
#[allow(clippy::len_without_is_empty)]
pub trait Domain {
    fn len(&self) -> usize;
    /// Model element denoted by `t` when `vars[i]` takes the `point[i]`-th
    /// point.
    fn denotation(&self, t: &Term, vars: &[Var], point: &[usize]) -> usize;
    fn relation_holds(&self, p: &str, args: &[usize]) -> bool;

    fn prime_holds(&self, prime: &Formula, vars: &[Var], point: &[usize]) -> bool {
        match prime {
            Formula::Eq(a, b) => self.denotation(a, vars, point) == self.denotation(b, vars, point),
            Formula::Pred(p, args) => {
                let vals: Vec<usize> = args.iter().map(|t| self.denotation(t, vars, point)).collect();
                self.relation_holds(p, &vals)
            }
            _ => panic!("not a prime formula: {prime}"),
        }
    }
}

/// Variables range over the elements of a model.
pub struct ModelDomain<'a>(pub &'a Model);

impl Domain for ModelDomain<'_> {
    fn len(&self) -> usize {
        self.0.size()
    }

    fn denotation(&self, t: &Term, vars: &[Var], point: &[usize]) -> usize {
        match t {
            Term::Var(v) => point[vars.iter().rposition(|w| w == v).expect("variable in scope")],
            Term::App(f, args) => {
                let vals: Vec<usize> = args.iter().map(|a| self.denotation(a, vars, point)).collect();
                self.0.apply(f, &vals).expect("function over the model signature")
            }
            other => self.0.eval_term(other).expect("ground term over the model signature"),
        }
    }

    fn relation_holds(&self, p: &str, args: &[usize]) -> bool {
        self.0.holds(p, args).expect("predicate over the model signature")
    }
}

/// Variables range over ground terms. A term is evaluated with each
/// variable replaced literally by its ground term.
pub struct GroundTermDomain<'a> {
    model: &'a Model,
    terms: Vec<Term>,
}

impl<'a> GroundTermDomain<'a> {
    /// All ground terms of depth at most `max_depth` over the constants and
    /// functions of `symbols` and the given names.
    pub fn new(model: &'a Model, symbols: &SymbolTable, names: &[String], max_depth: usize) -> Self {
        GroundTermDomain {
            model,
            terms: terms_up_to(symbols, &[], names, max_depth),
        }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }
}

impl Domain for GroundTermDomain<'_> {
    fn len(&self) -> usize {
        self.terms.len()
    }

    fn denotation(&self, t: &Term, vars: &[Var], point: &[usize]) -> usize {
        let ground = match t {
            Term::Var(v) => &self.terms[point[vars.iter().rposition(|w| w == v).expect("variable in scope")]],
            Term::App(f, args) => {
                let vals: Vec<usize> = args.iter().map(|a| self.denotation(a, vars, point)).collect();
                return self.model.apply(f, &vals).expect("function over the model signature");
            }
            other => other,
        };
        self.model.eval_term(ground).expect("ground term over the model signature")
    }

    fn relation_holds(&self, p: &str, args: &[usize]) -> bool {
        self.model.holds(p, args).expect("predicate over the model signature")
    }
}

/// Terms of depth at most `max_depth` over the given variables, names and
/// the signature, without duplicates, shallower terms first.
pub fn terms_up_to(symbols: &SymbolTable, vars: &[Var], names: &[String], max_depth: usize) -> Vec<Term> {
    let mut out: Vec<Term> = vars.iter().cloned().map(Term::Var).collect();
    out.extend(symbols.constants().map(Term::constant));
    out.extend(names.iter().map(|n| Term::Name(n.clone())));
    let functions: Vec<(&str, usize)> = symbols.functions().collect();
    let mut prev_len = 0;
    for _ in 0..max_depth {
        let cur_len = out.len();
        let mut next = Vec::new();
        for &(f, n) in &functions {
            for_each_tuple(cur_len, n, |idx| {
                // At least one argument from the previous round, so every
                // term is produced once.
                if idx.iter().any(|&i| i >= prev_len) {
                    next.push(Term::app(f, idx.iter().map(|&i| out[i].clone()).collect()));
                }
            });
        }
        prev_len = cur_len;
        out.extend(next);
    }
    out
}

fn for_each_tuple(n: usize, arity: usize, mut f: impl FnMut(&[usize])) {
    if n == 0 && arity > 0 {
        return;
    }
    let mut idx = vec![0; arity];
    loop {
        f(&idx);
        let mut k = arity;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < n {
                break;
            }
            idx[k] = 0;
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Region {
    n: usize,
    bits: usize,
    offset: usize,
    words: usize,
}

/// Bit layout of values of a given arity: one word-aligned region per
/// domain. Within a region, point `(c_0, .., c_{a-1})` has index
/// `sum c_k n^k`, so the last coordinate is the most significant.
#[derive(Clone, Debug)]
pub struct Layout {
    arity: usize,
    regions: Vec<Region>,
    words: usize,
    total_bits: usize,
}

fn low_mask(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

fn get_bit(v: &[u64], i: usize) -> bool {
    (v[i / 64] >> (i % 64)) & 1 == 1
}

fn set_bit(v: &mut [u64], i: usize, b: bool) {
    if b {
        v[i / 64] |= 1 << (i % 64);
    } else {
        v[i / 64] &= !(1 << (i % 64));
    }
}

impl Layout {
    fn new(sizes: &[usize], arity: usize) -> Layout {
        let mut regions = Vec::new();
        let mut offset = 0;
        let mut total_bits = 0;
        for &n in sizes {
            let bits = n.checked_pow(arity as u32).expect("value size overflows");
            let words = bits.div_ceil(64).max(1);
            regions.push(Region {
                n,
                bits,
                offset,
                words,
            });
            offset += words;
            total_bits += bits;
        }
        Layout {
            arity,
            regions,
            words: offset,
            total_bits,
        }
    }

    fn mask(&self, v: &mut [u64]) {
        for r in &self.regions {
            let used = r.bits - (r.words - 1) * 64;
            v[r.offset + r.words - 1] &= low_mask(used);
        }
    }

    /// Dense key for small layouts: the concatenated region bits.
    fn small_key(&self, v: &[u64]) -> Option<usize> {
        if self.total_bits > 24 {
            return None;
        }
        let mut key = 0usize;
        let mut shift = 0;
        for r in &self.regions {
            key |= (v[r.offset] as usize) << shift;
            shift += r.bits;
        }
        Some(key)
    }

    fn not_into(&self, a: &[u64], out: &mut [u64]) {
        for (o, &x) in out.iter_mut().zip(a) {
            *o = !x;
        }
        self.mask(out);
    }

    fn bin_into(&self, op: BinOp, a: &[u64], b: &[u64], out: &mut [u64]) {
        for ((o, &x), &y) in out.iter_mut().zip(a).zip(b) {
            *o = match op {
                BinOp::Imp => !x | y,
                BinOp::Iff => !(x ^ y),
                BinOp::And => x & y,
                BinOp::Or => x | y,
            };
        }
        if matches!(op, BinOp::Imp | BinOp::Iff) {
            self.mask(out);
        }
    }

    /// Quantifies the last coordinate away; `to` is the layout one arity down.
    fn drop_last_into(&self, to: &Layout, exists: bool, a: &[u64], out: &mut [u64]) {
        for (r, t) in self.regions.iter().zip(&to.regions) {
            let stride = t.bits;
            let src = &a[r.offset..r.offset + r.words];
            let dst = &mut out[t.offset..t.offset + t.words];
            if r.words == 1 {
                let m = low_mask(stride);
                let w = src[0];
                let mut acc = if exists { 0 } else { m };
                for c in 0..r.n {
                    let g = (w >> (c * stride)) & m;
                    acc = if exists { acc | g } else { acc & g };
                }
                dst[0] = acc;
            } else if stride % 64 == 0 {
                let sw = stride / 64;
                for (i, d) in dst.iter_mut().enumerate() {
                    let mut acc = if exists { 0 } else { u64::MAX };
                    for c in 0..r.n {
                        let g = src[c * sw + i];
                        acc = if exists { acc | g } else { acc & g };
                    }
                    *d = acc;
                }
            } else {
                dst.fill(0);
                for lo in 0..stride {
                    let mut acc = !exists;
                    for c in 0..r.n {
                        let b = get_bit(src, lo + c * stride);
                        if b == exists {
                            acc = exists;
                            break;
                        }
                    }
                    set_bit(dst, lo, acc);
                }
            }
        }
    }

    /// Quantifies coordinate `k` while keeping the arity: the result no
    /// longer depends on that coordinate.
    fn quant_keep_into(&self, k: usize, exists: bool, a: &[u64], out: &mut [u64]) {
        out.fill(0);
        for r in &self.regions {
            let stride = r.n.pow(k as u32);
            let src = &a[r.offset..r.offset + r.words];
            let dst = &mut out[r.offset..r.offset + r.words];
            for i in 0..r.bits {
                if (i / stride) % r.n != 0 {
                    continue;
                }
                let mut acc = !exists;
                for c in 0..r.n {
                    if get_bit(src, i + c * stride) == exists {
                        acc = exists;
                        break;
                    }
                }
                if acc {
                    for c in 0..r.n {
                        set_bit(dst, i + c * stride, true);
                    }
                }
            }
        }
    }
}

type RId = u32;

#[derive(Clone, Debug)]
enum Recipe {
    Prime(Formula),
    Not(RId),
    Bin(BinOp, RId, RId),
    Quant(Quantifier, Var, RId),
}

#[derive(Default)]
struct Arena {
    recipes: Vec<Recipe>,
}

impl Arena {
    fn push(&mut self, r: Recipe) -> RId {
        self.recipes.push(r);
        (self.recipes.len() - 1) as RId
    }

    fn build(&self, id: RId) -> Formula {
        match &self.recipes[id as usize] {
            Recipe::Prime(f) => f.clone(),
            Recipe::Not(a) => Formula::not(self.build(*a)),
            Recipe::Bin(op, a, b) => Formula::binary(*op, self.build(*a), self.build(*b)),
            Recipe::Quant(q, x, a) => Formula::quantified(*q, x.clone(), self.build(*a)),
        }
    }
}

type Map = IndexMap<Box<[u64]>, RId>;

/// What to enumerate: formulas over `symbols` and `names`, free variables
/// among `base`, degree at most `max_degree`, term depth at most
/// `max_depth`.
#[derive(Clone, Debug)]
pub struct ClassQuery<'a> {
    pub symbols: &'a SymbolTable,
    pub names: &'a [String],
    pub base: &'a [Var],
    pub max_degree: usize,
    pub max_depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Class {
    pub value: Box<[u64]>,
    pub representative: Formula,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClassStats {
    /// Distinct prime values over all layers.
    pub atoms: usize,
    /// Values stored in intermediate layers.
    pub stored: usize,
    /// Combinations visited in streamed layers.
    pub streamed: u64,
    /// Whether the target reached every possible value early.
    pub saturated: bool,
}

#[derive(Clone, Debug)]
pub struct ClassSet {
    layout: Layout,
    pub base: Vec<Var>,
    pub classes: Vec<Class>,
    pub stats: ClassStats,
}

impl ClassSet {
    /// Truth of `class` in domain `d` at the point with the given index
    /// (see [`ClassSet::point_index`]).
    pub fn holds(&self, class: &Class, d: usize, point: usize) -> bool {
        let r = &self.layout.regions[d];
        get_bit(&class.value[r.offset..r.offset + r.words], point)
    }

    pub fn point_index(&self, d: usize, coords: &[usize]) -> usize {
        let n = self.layout.regions[d].n;
        coords.iter().rev().fold(0, |acc, &c| acc * n + c)
    }

    pub fn points(&self, d: usize) -> usize {
        self.layout.regions[d].bits
    }
}

struct Sink {
    layout: Layout,
    map: Map,
    seen: Option<Vec<bool>>,
    capacity: usize,
}

impl Sink {
    fn new(layout: Layout) -> Sink {
        let seen = (layout.total_bits <= 24).then(|| vec![false; 1 << layout.total_bits]);
        let capacity = if layout.total_bits < 40 {
            1usize << layout.total_bits
        } else {
            usize::MAX
        };
        Sink {
            layout,
            map: Map::new(),
            seen,
            capacity,
        }
    }

    fn offer(&mut self, v: &[u64], arena: &mut Arena, make: &dyn Fn(&mut Arena) -> RId) -> ControlFlow<()> {
        if let Some(seen) = &mut self.seen {
            let key = self.layout.small_key(v).expect("small layout");
            if seen[key] {
                return ControlFlow::Continue(());
            }
            seen[key] = true;
            let id = make(arena);
            self.map.insert(v.into(), id);
        } else if !self.map.contains_key(v) {
            let id = make(arena);
            self.map.insert(v.into(), id);
        }
        if self.map.len() >= self.capacity {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    }

    fn saturated(&self) -> bool {
        self.map.len() >= self.capacity
    }
}

struct Engine<'a> {
    domains: &'a [&'a dyn Domain],
    query: &'a ClassQuery<'a>,
    scope: Vec<Var>,
    layouts: Vec<Layout>,
    stored: std::collections::HashMap<(usize, usize), Map>,
    arena: Arena,
    stats: ClassStats,
}

/// Fresh variable names `y1, y2, ..` skipping any base variable.
fn fresh_vars(base: &[Var], count: usize) -> Vec<Var> {
    let mut out = Vec::new();
    let mut i = 1;
    while out.len() < count {
        let v = Var::new(format!("y{i}"));
        if !base.contains(&v) {
            out.push(v);
        }
        i += 1;
    }
    out
}

impl<'a> Engine<'a> {
    fn base_len(&self) -> usize {
        self.query.base.len()
    }

    fn layout(&self, j: usize) -> &Layout {
        &self.layouts[self.base_len() + j]
    }

    fn scope(&self, j: usize) -> &[Var] {
        &self.scope[..self.base_len() + j]
    }

    fn atoms(&mut self, j: usize) -> Map {
        let vars = self.scope(j).to_vec();
        let q = self.query;
        let terms = terms_up_to(q.symbols, &vars, q.names, q.max_depth);
        let mut primes = Vec::new();
        // Each prime with the indices of its terms.
        for (i, a) in terms.iter().enumerate() {
            for (k, b) in terms.iter().enumerate().skip(i) {
                primes.push((Formula::Eq(a.clone(), b.clone()), vec![i, k]));
            }
        }
        for (p, n) in q.symbols.predicates() {
            for_each_tuple(terms.len(), n, |idx| {
                primes.push((Formula::pred(p, idx.iter().map(|&i| terms[i].clone()).collect()), idx.to_vec()));
            });
        }
        let layout = self.layout(j).clone();
        let arity = layout.arity;
        // denote[d][t][i]: element denoted by term t at point i of region d.
        let mut point = vec![0usize; arity];
        let denote: Vec<Vec<Vec<usize>>> = self
            .domains
            .iter()
            .zip(&layout.regions)
            .map(|(d, r)| {
                terms
                    .iter()
                    .map(|t| {
                        (0..r.bits)
                            .map(|i| {
                                let mut rest = i;
                                for c in point.iter_mut() {
                                    *c = rest % r.n;
                                    rest /= r.n;
                                }
                                d.denotation(t, &vars, &point)
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let mut map = Map::new();
        let mut value = vec![0u64; layout.words];
        let mut args = Vec::new();
        for (prime, idx) in primes {
            value.fill(0);
            for ((d, r), table) in self.domains.iter().zip(&layout.regions).zip(&denote) {
                for i in 0..r.bits {
                    let holds = match &prime {
                        Formula::Eq(..) => table[idx[0]][i] == table[idx[1]][i],
                        Formula::Pred(p, _) => {
                            args.clear();
                            args.extend(idx.iter().map(|&t| table[t][i]));
                            d.relation_holds(p, &args)
                        }
                        _ => unreachable!("atoms are prime"),
                    };
                    if holds {
                        value[r.offset + i / 64] |= 1 << (i % 64);
                    }
                }
            }
            if !map.contains_key(&value[..]) {
                let id = self.arena.push(Recipe::Prime(prime));
                map.insert(value.clone().into(), id);
            }
        }
        self.stats.atoms += map.len();
        map
    }

    /// Distinct projections of a layer-`j+1` map into layer `j`.
    fn project(&mut self, src: &Map, j: usize) -> Map {
        let from = self.layout(j + 1).clone();
        let to = self.layout(j).clone();
        let var = self.scope[self.base_len() + j].clone();
        let mut sink = Sink::new(to.clone());
        sink.capacity = usize::MAX;
        let mut out = vec![0u64; to.words];
        for (v, &id) in src {
            for (q, exists) in [(Quantifier::Forall, false), (Quantifier::Exists, true)] {
                from.drop_last_into(&to, exists, v, &mut out);
                let var = var.clone();
                let _ = sink.offer(&out, &mut self.arena, &move |ar: &mut Arena| {
                    ar.push(Recipe::Quant(q, var.clone(), id))
                });
            }
        }
        sink.map
    }

    /// Stored layer `D_k(j)`, for `k + j < max_degree`.
    fn stored_layer(&mut self, k: usize, j: usize) -> &Map {
        if !self.stored.contains_key(&(k, j)) {
            let map = if k == 0 {
                self.atoms(j)
            } else {
                let prev = self.take_layer(k - 1, j);
                let above = self.take_layer(k - 1, j + 1);
                let extra = self.project(&above, j);
                self.stored.insert((k - 1, j + 1), above);
                let layout = self.layout(j).clone();
                let scope = self.scope(j).to_vec();
                let mut sink = Sink::new(layout.clone());
                sink.capacity = usize::MAX;
                let arena = &mut self.arena;
                let _ = emit_layer(&layout, &scope, &prev, &extra, &mut |v, make| sink.offer(v, arena, make));
                self.stored.insert((k - 1, j), prev);
                sink.map
            };
            self.stats.stored += map.len();
            self.stored.insert((k, j), map);
        }
        &self.stored[&(k, j)]
    }

    fn take_layer(&mut self, k: usize, j: usize) -> Map {
        self.stored_layer(k, j);
        self.stored.remove(&(k, j)).expect("just stored")
    }

    /// Streams the top layer `D_{D-j}(j)` (j >= 1) into `sink`, a sink of
    /// layer `j - 1`, as universal and existential projections.
    fn stream_top(&mut self, j: usize, sink: &mut Sink) -> ControlFlow<()> {
        let d = self.query.max_degree;
        let from = self.layout(j).clone();
        let to = self.layout(j - 1).clone();
        let var = self.scope[self.base_len() + j - 1].clone();
        let (prev, extra) = if j == d {
            (self.take_layer(0, j), Map::new())
        } else {
            let mut above = Sink::new(from.clone());
            above.capacity = usize::MAX;
            let _ = self.stream_top(j + 1, &mut above);
            (self.take_layer(d - j - 1, j), above.map)
        };
        let scope = self.scope(j).to_vec();
        let mut out_f = vec![0u64; to.words];
        let mut out_e = vec![0u64; to.words];
        let arena = &mut self.arena;
        let mut streamed = 0u64;
        let flow = if j == d {
            // The top layer is the atoms themselves.
            let mut flow = ControlFlow::Continue(());
            for (v, &id) in &prev {
                streamed += 1;
                flow = project_both(&from, &to, &var, v, &mut out_f, &mut out_e, sink, arena, &|_| id);
                if flow.is_break() {
                    break;
                }
            }
            flow
        } else {
            emit_layer(&from, &scope, &prev, &extra, &mut |v, make| {
                streamed += 1;
                project_both(&from, &to, &var, v, &mut out_f, &mut out_e, sink, arena, make)
            })
        };
        self.stats.streamed += streamed;
        let key = if j == d { (0, j) } else { (d - j - 1, j) };
        self.stored.insert(key, prev);
        flow
    }
}

#[allow(clippy::too_many_arguments)]
fn project_both(
    from: &Layout,
    to: &Layout,
    var: &Var,
    v: &[u64],
    out_f: &mut [u64],
    out_e: &mut [u64],
    sink: &mut Sink,
    arena: &mut Arena,
    make: &dyn Fn(&mut Arena) -> RId,
) -> ControlFlow<()> {
    from.drop_last_into(to, false, v, out_f);
    from.drop_last_into(to, true, v, out_e);
    for (q, out) in [(Quantifier::Forall, &*out_f), (Quantifier::Exists, &*out_e)] {
        sink.offer(out, arena, &|ar: &mut Arena| {
            let body = make(ar);
            ar.push(Recipe::Quant(q, var.clone(), body))
        })?;
    }
    ControlFlow::Continue(())
}

/// Receives a value and a way to record its recipe if it is new.
type Visit<'a> = dyn FnMut(&[u64], &dyn Fn(&mut Arena) -> RId) -> ControlFlow<()> + 'a;

/// Visits every value of the layer built from `prev` (degree one lower,
/// same scope) and `extra` (projections from the layer above): `prev`
/// itself, negations, binary combinations, scope quantifications, then
/// `extra`.
fn emit_layer(
    layout: &Layout,
    scope: &[Var],
    prev: &Map,
    extra: &Map,
    visit: &mut Visit<'_>,
) -> ControlFlow<()> {
    for (v, &id) in prev {
        visit(v, &|_| id)?;
    }
    let mut out = vec![0u64; layout.words];
    for (v, &id) in prev {
        layout.not_into(v, &mut out);
        visit(&out, &|ar: &mut Arena| ar.push(Recipe::Not(id)))?;
    }
    let entries: Vec<(&[u64], RId)> = prev.iter().map(|(v, &id)| (&v[..], id)).collect();
    for op in BinOp::ALL {
        for (i, &(a, ia)) in entries.iter().enumerate() {
            let start = if op.is_commutative() { i } else { 0 };
            for &(b, ib) in &entries[start..] {
                layout.bin_into(op, a, b, &mut out);
                visit(&out, &|ar: &mut Arena| ar.push(Recipe::Bin(op, ia, ib)))?;
            }
        }
    }
    for (k, x) in scope.iter().enumerate() {
        for (v, &id) in prev {
            for (q, exists) in [(Quantifier::Forall, false), (Quantifier::Exists, true)] {
                layout.quant_keep_into(k, exists, v, &mut out);
                visit(&out, &|ar: &mut Arena| ar.push(Recipe::Quant(q, x.clone(), id)))?;
            }
        }
    }
    for (v, &id) in extra {
        visit(v, &|_| id)?;
    }
    ControlFlow::Continue(())
}

/// Every value taken by formulas within the query bounds, jointly over
/// `domains`, with one representative formula per value.
pub fn semantic_classes(domains: &[&dyn Domain], query: &ClassQuery<'_>) -> ClassSet {
    let d = query.max_degree;
    let sizes: Vec<usize> = domains.iter().map(|dom| dom.len()).collect();
    let mut scope = query.base.to_vec();
    scope.extend(fresh_vars(query.base, d));
    let layouts = (0..=query.base.len() + d).map(|a| Layout::new(&sizes, a)).collect();
    let mut engine = Engine {
        domains,
        query,
        scope,
        layouts,
        stored: Default::default(),
        arena: Arena::default(),
        stats: ClassStats::default(),
    };
    let target_layout = engine.layout(0).clone();
    let mut target = Sink::new(target_layout.clone());
    if d == 0 {
        let atoms = engine.atoms(0);
        for (v, &id) in &atoms {
            let _ = target.offer(v, &mut engine.arena, &|_| id);
        }
    } else {
        let prev = engine.take_layer(d - 1, 0);
        let scope = engine.scope(0).to_vec();
        let arena = &mut engine.arena;
        let flow = emit_layer(&target_layout, &scope, &prev, &Map::new(), &mut |v, make| {
            target.offer(v, arena, make)
        });
        if flow.is_continue() {
            let _ = engine.stream_top(1, &mut target);
        }
    }
    engine.stats.saturated = target.saturated();
    let classes = target
        .map
        .iter()
        .map(|(v, &id)| Class {
            value: v.clone(),
            representative: engine.arena.build(id),
        })
        .collect();
    ClassSet {
        layout: target_layout,
        base: query.base.to_vec(),
        classes,
        stats: engine.stats,
    }
}
