//! Exhaustive search over small models.
//!
//! Every model of a given size is identified by a configuration index: the
//! nominal placement (mixed radix) and a bit string holding the valuation of
//! every proposition at every world followed by every possible relation edge.
//! The searching functions evaluate 64 consecutive bit strings at once, one
//! per bit lane of a `u64`, and only materialize a model when it is a hit.
//! Hits are re-checked with the ordinary evaluators before being returned.

use std::collections::BTreeSet;

use crate::embedding::{eval_el, ElFormula, ElModel};
use crate::relation::Relation;
use crate::semantics::{eval, AkModel, Point};
use crate::syntax::{Atom, Formula, Name, Sort, Vocabulary};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_wa: usize,
    pub max_wk: usize,
    pub max_w: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_wa: 2, max_wk: 2, max_w: 3 }
    }
}

impl Bounds {
    pub fn ak(max_wa: usize, max_wk: usize) -> Self {
        Bounds { max_wa, max_wk, ..Bounds::default() }
    }

    pub fn el(max_w: usize) -> Self {
        Bounds { max_w, ..Bounds::default() }
    }

    fn ak_sizes(&self) -> impl Iterator<Item = (usize, usize)> {
        let wk = self.max_wk;
        (1..=self.max_wa).flat_map(move |na| (1..=wk).map(move |nk| (na, nk)))
    }
}

const LANE_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Lane masks of every bit of a block of 64 consecutive bit strings
/// starting at `block << 6`.
fn bit_masks(bits: usize, block: u64, out: &mut Vec<u64>) {
    out.clear();
    out.extend((0..bits).map(|j| match j {
        0..=5 => LANE_PATTERNS[j],
        _ if (block >> (j - 6)) & 1 == 1 => !0,
        _ => 0,
    }));
}

/// Lanes that correspond to real bit strings when there are fewer than 64.
fn valid_lanes(bits: usize) -> u64 {
    if bits >= 6 {
        !0
    } else {
        (1u64 << (1u32 << bits)) - 1
    }
}

fn blocks(bits: usize) -> u64 {
    assert!(bits <= 64, "search space too large");
    if bits <= 6 {
        1
    } else {
        1 << (bits - 6)
    }
}

/// Configuration layout of AK models with `na` agents and `nk` states.
struct AkSpace {
    na: usize,
    nk: usize,
    vocab: Vocabulary,
    with_r: bool,
    with_s: bool,
}

impl AkSpace {
    fn count(&self, sort: Sort) -> usize {
        self.vocab.of_sort(sort).len()
    }

    fn pk_base(&self) -> usize {
        self.count(Sort::PropA) * self.na
    }

    fn r_base(&self) -> usize {
        self.pk_base() + self.count(Sort::PropK) * self.nk
    }

    fn s_base(&self) -> usize {
        self.r_base() + if self.with_r { self.nk * self.na * self.na } else { 0 }
    }

    fn bits(&self) -> usize {
        self.s_base() + if self.with_s { self.na * self.nk * self.nk } else { 0 }
    }

    fn r_bit(&self, y: usize, x: usize, x2: usize) -> usize {
        self.r_base() + (y * self.na + x) * self.na + x2
    }

    fn s_bit(&self, x: usize, y: usize, y2: usize) -> usize {
        self.s_base() + (x * self.nk + y) * self.nk + y2
    }

    fn nominal_choices(&self) -> u64 {
        (self.na as u64).pow(self.count(Sort::NomA) as u32) * (self.nk as u64).pow(self.count(Sort::NomK) as u32)
    }

    /// Denotations of the `NomA` then `NomK` nominals for placement `idx`.
    fn placement(&self, mut idx: u64) -> Vec<usize> {
        let mut out = Vec::new();
        for (sort, radix) in [(Sort::NomA, self.na), (Sort::NomK, self.nk)] {
            for _ in 0..self.count(sort) {
                out.push((idx % radix as u64) as usize);
                idx /= radix as u64;
            }
        }
        out
    }

    fn decode(&self, placement: u64, bin: u64) -> AkModel {
        let bit = |j: usize| (bin >> j) & 1 == 1;
        let mut m = AkModel::new((0..self.na).map(|i| format!("x{i}")), (0..self.nk).map(|i| format!("y{i}")))
            .expect("distinct ids");
        for (p, name) in self.vocab.prop_a.iter().enumerate() {
            let ext = (0..self.na).filter(|&x| bit(p * self.na + x)).collect();
            m.set_valuation_ix(&Atom::from_name(Sort::PropA, name.clone()), ext);
        }
        for (p, name) in self.vocab.prop_k.iter().enumerate() {
            let ext = (0..self.nk).filter(|&y| bit(self.pk_base() + p * self.nk + y)).collect();
            m.set_valuation_ix(&Atom::from_name(Sort::PropK, name.clone()), ext);
        }
        let place = self.placement(placement);
        let noms = self.vocab.nom_a.iter().map(|n| (Sort::NomA, n)).chain(self.vocab.nom_k.iter().map(|n| (Sort::NomK, n)));
        for ((sort, name), w) in noms.zip(place) {
            m.set_valuation_ix(&Atom::from_name(sort, name.clone()), BTreeSet::from([w]));
        }
        if self.with_r {
            for y in 0..self.nk {
                *m.r_mut(y) = Relation::from_pairs(
                    self.na,
                    (0..self.na)
                        .flat_map(|x| (0..self.na).map(move |x2| (x, x2)))
                        .filter(|&(x, x2)| bit(self.r_bit(y, x, x2))),
                );
            }
        }
        if self.with_s {
            for x in 0..self.na {
                *m.s_mut(x) = Relation::from_pairs(
                    self.nk,
                    (0..self.nk)
                        .flat_map(|y| (0..self.nk).map(move |y2| (y, y2)))
                        .filter(|&(y, y2)| bit(self.s_bit(x, y, y2))),
                );
            }
        }
        m
    }
}

/// Every model over `vocab` up to the bounds, with world ids `x0, x1, ..`
/// and `y0, y1, ..`: all relation families, all proposition valuations and
/// all placements of the nominals. Sizes run `1×1, 1×2, .., 2×1, ..`.
pub fn enumerate_ak(vocab: &Vocabulary, bounds: &Bounds) -> impl Iterator<Item = AkModel> {
    let vocab = vocab.clone();
    bounds.ak_sizes().flat_map(move |(na, nk)| {
        let space = AkSpace { na, nk, vocab: vocab.clone(), with_r: true, with_s: true };
        let total: u64 = 1 << space.bits();
        (0..space.nominal_choices())
            .flat_map(move |pl| (0..total).map(move |bin| (pl, bin)))
            .map(move |(pl, bin)| space.decode(pl, bin))
    })
}

/// Number of models [`enumerate_ak`] yields.
pub fn count_ak(vocab: &Vocabulary, bounds: &Bounds) -> u128 {
    bounds
        .ak_sizes()
        .map(|(na, nk)| {
            let space = AkSpace { na, nk, vocab: vocab.clone(), with_r: true, with_s: true };
            (space.nominal_choices() as u128) << space.bits()
        })
        .sum()
}

#[derive(Clone, Copy, Debug)]
enum Op {
    PropA(usize),
    PropK(usize),
    NomA(usize),
    NomK(usize),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
    BoxA(usize),
    BoxK(usize),
    DiaA(usize),
    DiaK(usize),
    AtA(usize, usize),
    AtK(usize, usize),
}

/// A formula flattened to post-order; operands are earlier node indices and
/// atoms are indices into the sorted vocabulary (nominals: NomA, then NomK).
struct Program {
    ops: Vec<Op>,
}

impl Program {
    fn compile(f: &Formula, vocab: &Vocabulary) -> Program {
        let mut p = Program { ops: Vec::new() };
        p.push(f, vocab);
        p
    }

    fn push(&mut self, f: &Formula, v: &Vocabulary) -> usize {
        let pos = |set: &BTreeSet<Name>, n: &Name| set.iter().position(|m| m == n).expect("in vocabulary");
        let nom_a = |n: &Name| pos(&v.nom_a, n);
        let nom_k = |n: &Name| v.nom_a.len() + pos(&v.nom_k, n);
        let op = match f {
            Formula::Atom(a) => match a.sort() {
                Sort::PropA => Op::PropA(pos(&v.prop_a, a.name())),
                Sort::PropK => Op::PropK(pos(&v.prop_k, a.name())),
                Sort::NomA => Op::NomA(nom_a(a.name())),
                Sort::NomK => Op::NomK(nom_k(a.name())),
            },
            Formula::Not(g) => Op::Not(self.push(g, v)),
            Formula::And(l, r) => Op::And(self.push(l, v), self.push(r, v)),
            Formula::Or(l, r) => Op::Or(self.push(l, v), self.push(r, v)),
            Formula::Implies(l, r) => Op::Implies(self.push(l, v), self.push(r, v)),
            Formula::BoxA(g) => Op::BoxA(self.push(g, v)),
            Formula::BoxK(g) => Op::BoxK(self.push(g, v)),
            Formula::DiaA(g) => Op::DiaA(self.push(g, v)),
            Formula::DiaK(g) => Op::DiaK(self.push(g, v)),
            Formula::AtA(n, g) => Op::AtA(nom_a(n), self.push(g, v)),
            Formula::AtK(n, g) => Op::AtK(nom_k(n), self.push(g, v)),
        };
        self.ops.push(op);
        self.ops.len() - 1
    }

    /// Lane masks of the root at every point `x * nk + y`.
    fn run<'a>(&self, s: &AkSpace, masks: &[u64], place: &[usize], vals: &'a mut Vec<u64>) -> &'a [u64] {
        let (na, nk) = (s.na, s.nk);
        let pts = na * nk;
        vals.clear();
        vals.resize(self.ops.len() * pts, 0);
        let pk_base = s.pk_base();
        for (i, op) in self.ops.iter().enumerate() {
            let (done, rest) = vals.split_at_mut(i * pts);
            let out = &mut rest[..pts];
            let val = |n: usize, x: usize, y: usize| done[n * pts + x * nk + y];
            for x in 0..na {
                for y in 0..nk {
                    out[x * nk + y] = match *op {
                        Op::PropA(p) => masks[p * na + x],
                        Op::PropK(p) => masks[pk_base + p * nk + y],
                        Op::NomA(n) => {
                            if place[n] == x {
                                !0
                            } else {
                                0
                            }
                        }
                        Op::NomK(n) => {
                            if place[n] == y {
                                !0
                            } else {
                                0
                            }
                        }
                        Op::Not(a) => !val(a, x, y),
                        Op::And(a, b) => val(a, x, y) & val(b, x, y),
                        Op::Or(a, b) => val(a, x, y) | val(b, x, y),
                        Op::Implies(a, b) => !val(a, x, y) | val(b, x, y),
                        Op::BoxA(a) if s.with_r => {
                            (0..na).fold(!0, |acc, x2| acc & (!masks[s.r_bit(y, x, x2)] | val(a, x2, y)))
                        }
                        Op::DiaA(a) if s.with_r => {
                            (0..na).fold(0, |acc, x2| acc | (masks[s.r_bit(y, x, x2)] & val(a, x2, y)))
                        }
                        Op::BoxK(a) if s.with_s => {
                            (0..nk).fold(!0, |acc, y2| acc & (!masks[s.s_bit(x, y, y2)] | val(a, x, y2)))
                        }
                        Op::DiaK(a) if s.with_s => {
                            (0..nk).fold(0, |acc, y2| acc | (masks[s.s_bit(x, y, y2)] & val(a, x, y2)))
                        }
                        Op::BoxA(_) | Op::BoxK(_) => !0,
                        Op::DiaA(_) | Op::DiaK(_) => 0,
                        Op::AtA(n, a) => val(a, place[n], y),
                        Op::AtK(n, a) => val(a, x, place[n]),
                    };
                }
            }
        }
        &vals[(self.ops.len() - 1) * pts..]
    }
}

/// The first model and point (in enumeration order) satisfying `f`.
///
/// Only `f`'s own vocabulary is valued, and a relation family that `f`
/// never inspects is left empty, since it cannot affect the result.
/// Panics if one model size needs more than 64 configuration bits; see
/// [`search_space`].
pub fn oracle_sat(f: &Formula, bounds: &Bounds) -> Option<(AkModel, Point)> {
    let vocab = f.vocabulary();
    let (with_r, with_s) = f.modal_families();
    let mut masks = Vec::new();
    let mut vals = Vec::new();
    for (na, nk) in bounds.ak_sizes() {
        let space = AkSpace { na, nk, vocab: vocab.clone(), with_r, with_s };
        let program = Program::compile(f, &space.vocab);
        let bits = space.bits();
        for pl in 0..space.nominal_choices() {
            let place = space.placement(pl);
            for block in 0..blocks(bits) {
                bit_masks(bits, block, &mut masks);
                let root = program.run(&space, &masks, &place, &mut vals);
                let hits = root.iter().fold(0, |acc, &m| acc | m) & valid_lanes(bits);
                if hits == 0 {
                    continue;
                }
                let lane = hits.trailing_zeros() as u64;
                let idx = (0..root.len()).find(|&i| (root[i] >> lane) & 1 == 1).expect("some point");
                let model = space.decode(pl, (block << 6) | lane);
                let pt = Point { x: idx / nk, y: idx % nk };
                assert_eq!(eval(&model, pt, f), Ok(true), "oracle evaluator disagrees with eval");
                return Some((model, pt));
            }
        }
    }
    None
}

/// Number of configurations [`oracle_sat`] may visit for `f`.
pub fn search_space(f: &Formula, bounds: &Bounds) -> u128 {
    let (with_r, with_s) = f.modal_families();
    bounds
        .ak_sizes()
        .map(|(na, nk)| {
            let space = AkSpace { na, nk, vocab: f.vocabulary(), with_r, with_s };
            let bits = space.bits() as u32;
            (space.nominal_choices() as u128).saturating_mul(2u128.checked_pow(bits).unwrap_or(u128::MAX))
        })
        .fold(0u128, u128::saturating_add)
}

/// A model and point falsifying `f`, if one exists within the bounds.
pub fn oracle_countermodel(f: &Formula, bounds: &Bounds) -> Option<(AkModel, Point)> {
    oracle_sat(&Formula::not(f.clone()), bounds)
}

/// Configuration layout of EL models with `n` worlds.
struct ElSpace {
    n: usize,
    props: Vec<Name>,
    agents: Vec<Name>,
}

impl ElSpace {
    fn rel_bit(&self, agent: usize, w: usize, v: usize) -> usize {
        self.props.len() * self.n + (agent * self.n + w) * self.n + v
    }

    fn bits(&self) -> usize {
        (self.props.len() + self.agents.len() * self.n) * self.n
    }

    fn decode(&self, bin: u64) -> ElModel {
        let bit = |j: usize| (bin >> j) & 1 == 1;
        let mut m = ElModel::new((0..self.n).map(|i| format!("w{i}")), &self.agents).expect("distinct ids");
        for (p, name) in self.props.iter().enumerate() {
            m.set_valuation_ix(&**name, (0..self.n).filter(|&w| bit(p * self.n + w)).collect());
        }
        for (a, name) in self.agents.iter().enumerate() {
            let pairs = (0..self.n).flat_map(|w| (0..self.n).map(move |v| (w, v)));
            let rel = Relation::from_pairs(self.n, pairs.filter(|&(w, v)| bit(self.rel_bit(a, w, v))));
            m.set_relation(&**name, rel);
        }
        m
    }
}

/// Every EL model over the given propositions and agents with `1..=bounds.max_w` worlds named `w0, w1, ..`.
pub fn enumerate_el<'a>(
    props: &'a BTreeSet<Name>,
    agents: &'a BTreeSet<Name>,
    bounds: &Bounds,
) -> impl Iterator<Item = ElModel> + 'a {
    (1..=bounds.max_w).flat_map(move |n| {
        let space = ElSpace { n, props: props.iter().cloned().collect(), agents: agents.iter().cloned().collect() };
        let total: u64 = 1 << space.bits();
        (0..total).map(move |bin| space.decode(bin))
    })
}

enum ElOp {
    Prop(usize),
    Not(usize),
    And(usize, usize),
    Know(usize, usize),
}

fn compile_el(f: &ElFormula, s: &ElSpace, ops: &mut Vec<ElOp>) -> usize {
    let op = match f {
        ElFormula::Prop(p) => ElOp::Prop(s.props.iter().position(|q| q == p).expect("in vocabulary")),
        ElFormula::Not(g) => ElOp::Not(compile_el(g, s, ops)),
        ElFormula::And(l, r) => ElOp::And(compile_el(l, s, ops), compile_el(r, s, ops)),
        ElFormula::Know(i, g) => {
            ElOp::Know(s.agents.iter().position(|a| a == i).expect("in vocabulary"), compile_el(g, s, ops))
        }
    };
    ops.push(op);
    ops.len() - 1
}

/// A model and world falsifying `f` among EL models with at most `bounds.max_w` worlds.
pub fn el_countermodel(f: &ElFormula, bounds: &Bounds) -> Option<(ElModel, usize)> {
    let (props, agents) = (f.props(), f.agents());
    let mut masks = Vec::new();
    let mut vals: Vec<u64> = Vec::new();
    for n in 1..=bounds.max_w {
        let space = ElSpace { n, props: props.iter().cloned().collect(), agents: agents.iter().cloned().collect() };
        let mut ops = Vec::new();
        compile_el(f, &space, &mut ops);
        let bits = space.bits();
        for block in 0..blocks(bits) {
            bit_masks(bits, block, &mut masks);
            vals.clear();
            vals.resize(ops.len() * n, 0);
            for (i, op) in ops.iter().enumerate() {
                for w in 0..n {
                    vals[i * n + w] = match *op {
                        ElOp::Prop(p) => masks[p * n + w],
                        ElOp::Not(a) => !vals[a * n + w],
                        ElOp::And(a, b) => vals[a * n + w] & vals[b * n + w],
                        ElOp::Know(ag, a) => {
                            (0..n).fold(!0, |acc, v| acc & (!masks[space.rel_bit(ag, w, v)] | vals[a * n + v]))
                        }
                    };
                }
            }
            let root = &vals[(ops.len() - 1) * n..];
            let misses = root.iter().fold(0, |acc, &m| acc | !m) & valid_lanes(bits);
            if misses == 0 {
                continue;
            }
            let lane = misses.trailing_zeros() as u64;
            let w = (0..n).find(|&w| (root[w] >> lane) & 1 == 0).expect("some world");
            let model = space.decode((block << 6) | lane);
            assert_eq!(eval_el(&model, w, f), Ok(false), "oracle evaluator disagrees with eval_el");
            return Some((model, w));
        }
    }
    None
}

/// No countermodel with at most `bounds.max_w` worlds. This is bounded
/// evidence, not a proof of validity.
pub fn oracle_valid_el(f: &ElFormula, bounds: &Bounds) -> bool {
    el_countermodel(f, bounds).is_none()
}

fn el_atoms(props: &BTreeSet<Name>) -> Vec<ElFormula> {
    props.iter().map(|p| ElFormula::Prop(p.clone())).collect()
}

/// Every EL formula built from `~`, `&` and `K` with at most `max_size` nodes, smallest first.
pub fn el_formulas_by_size(props: &BTreeSet<Name>, agents: &BTreeSet<Name>, max_size: usize) -> Vec<ElFormula> {
    let mut by_size: Vec<Vec<ElFormula>> = vec![Vec::new(), el_atoms(props)];
    for n in 2..=max_size {
        let mut level = Vec::new();
        for g in &by_size[n - 1] {
            level.push(ElFormula::not(g.clone()));
            for i in agents {
                level.push(ElFormula::Know(i.clone(), Box::new(g.clone())));
            }
        }
        for l in 1..n - 1 {
            for a in &by_size[l] {
                for b in &by_size[n - 1 - l] {
                    level.push(ElFormula::and(a.clone(), b.clone()));
                }
            }
        }
        by_size.push(level);
    }
    by_size.into_iter().take(max_size + 1).flatten().collect()
}

/// Every EL formula of nesting depth at most `max_depth`.
pub fn el_formulas_by_depth(props: &BTreeSet<Name>, agents: &BTreeSet<Name>, max_depth: usize) -> Vec<ElFormula> {
    let mut all = el_atoms(props);
    for _ in 0..max_depth {
        let prev = all.clone();
        let mut next: BTreeSet<ElFormula> = prev.iter().cloned().collect();
        for g in &prev {
            next.insert(ElFormula::not(g.clone()));
            for i in agents {
                next.insert(ElFormula::Know(i.clone(), Box::new(g.clone())));
            }
            for h in &prev {
                next.insert(ElFormula::and(g.clone(), h.clone()));
            }
        }
        all = next.into_iter().collect();
    }
    all
}
