use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::syntax::{Atom, Formula, Name, Sort};

/// Nominal pair `(a, k)` used as the prefix `@a @k` of a branch formula.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Prefix {
    pub agent: Name,
    pub state: Name,
}

impl Prefix {
    pub fn new(agent: impl AsRef<str>, state: impl AsRef<str>) -> Self {
        Prefix { agent: Arc::from(agent.as_ref()), state: Arc::from(state.as_ref()) }
    }
}

impl fmt::Display for Prefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "@{}{} @{}{}", Sort::NomA.prefix(), self.agent, Sort::NomK.prefix(), self.state)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Rule {
    Root,
    /// Formula placed by hand when a branch is built directly.
    Given,
    RefA,
    RefK,
    NotNot,
    And,
    OrLeft,
    OrRight,
    DiaA,
    DiaK,
    BoxA,
    BoxK,
    AtA,
    AtK,
    IdA,
    IdK,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::Root => "root",
            Rule::Given => "given",
            Rule::RefA => "Ref_A",
            Rule::RefK => "Ref_K",
            Rule::NotNot => "¬¬",
            Rule::And => "∧",
            Rule::OrLeft => "∨L",
            Rule::OrRight => "∨R",
            Rule::DiaA => "◇_A",
            Rule::DiaK => "◇_K",
            Rule::BoxA => "□_A",
            Rule::BoxK => "□_K",
            Rule::AtA => "@_A",
            Rule::AtK => "@_K",
            Rule::IdA => "Id_A",
            Rule::IdK => "Id_K",
        };
        f.write_str(s)
    }
}

/// How a branch formula came to be: the rule and its premises' sequence numbers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Origin {
    pub rule: Rule,
    pub parents: Vec<usize>,
}

/// A prefixed formula `@a @k body` on a branch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledFormula {
    pub prefix: Prefix,
    pub body: Arc<Formula>,
    /// Set once, by the diamond rules, on the formula naming the fresh witness.
    pub is_accessibility: bool,
    pub seq: usize,
    pub origin: Origin,
}

impl fmt::Display for LabeledFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.prefix, self.body)
    }
}

/// A formula about to be added to a branch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct NewFormula {
    pub prefix: Prefix,
    pub body: Arc<Formula>,
    pub is_accessibility: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum ClosureClause {
    /// `@a@k p_A` and `@a@l ¬p_A`.
    I,
    /// `@a@k p_K` and `@b@k ¬p_K`.
    II,
    /// `@a@k b` and `@a@l ¬b`.
    III,
    /// `@a@k l` and `@b@k ¬l`.
    IV,
}

impl fmt::Display for ClosureClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClosureClause::I => "i",
            ClosureClause::II => "ii",
            ClosureClause::III => "iii",
            ClosureClause::IV => "iv",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureWitness {
    pub clause: ClosureClause,
    pub positive: usize,
    pub negative: usize,
}

/// `(a, k) ≺ (b, l)`: the child pair was created by a diamond rule at the parent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GenerationEdge {
    pub parent: Prefix,
    pub child: Prefix,
    pub rule: Rule,
    /// Sequence number of the diamond formula that fired.
    pub premise: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BranchStatus {
    Open,
    Closed(ClosureWitness),
    Saturated,
}

/// Closure bookkeeping key: a literal's sort, the coordinate it is compared
/// along, and its atom name.
type LitKey = (Sort, Name, Name);

/// One branch of a tableau: an ordered set of prefixed formulas plus the
/// bookkeeping the rules need.
#[derive(Clone, Debug)]
pub struct Branch {
    pub(crate) formulas: Vec<LabeledFormula>,
    index: HashMap<(Prefix, Arc<Formula>), usize>,
    pub(crate) root: Prefix,
    intro: [HashMap<Name, usize>; 2],
    intro_list: [Vec<Name>; 2],
    next_intro: usize,
    /// How many nominals of each sort have had their Ref pairs generated.
    pub(crate) ref_cursor: [usize; 2],
    pub(crate) fresh: [usize; 2],
    pub(crate) applied: BTreeSet<usize>,
    pub(crate) edges: Vec<GenerationEdge>,
    witness: Option<ClosureWitness>,
    literals: HashMap<LitKey, [Option<usize>; 2]>,
    pub(crate) cursor: usize,
    pub(crate) by_agent: HashMap<Name, Vec<usize>>,
    pub(crate) by_state: HashMap<Name, Vec<usize>>,
    pub(crate) by_prefix: HashMap<Prefix, Vec<usize>>,
    /// Formulas `@a@l b` (NomA body), keyed by `a`.
    pub(crate) eq_a: HashMap<Name, Vec<usize>>,
    /// Formulas `@x@k l` (NomK body), keyed by `k`.
    pub(crate) eq_k: HashMap<Name, Vec<usize>>,
    /// Union-find over the equalities seen so far; every root is the
    /// earliest introduced member of its class.
    class_parent: [HashMap<Name, Name>; 2],
}

fn slot(sort: Sort) -> usize {
    match sort {
        Sort::NomA => 0,
        Sort::NomK => 1,
        _ => panic!("not a nominal sort"),
    }
}

/// Literal view of a body: `(atom, positive?)`.
fn literal(body: &Formula) -> Option<(&Atom, bool)> {
    match body {
        Formula::Atom(a) => Some((a, true)),
        Formula::Not(g) => g.as_atom().map(|a| (a, false)),
        _ => None,
    }
}

fn lit_key(prefix: &Prefix, atom: &Atom) -> LitKey {
    let axis = if atom.sort().is_agent_side() { &prefix.agent } else { &prefix.state };
    (atom.sort(), axis.clone(), atom.name().clone())
}

fn clause_of(sort: Sort) -> ClosureClause {
    match sort {
        Sort::PropA => ClosureClause::I,
        Sort::PropK => ClosureClause::II,
        Sort::NomA => ClosureClause::III,
        Sort::NomK => ClosureClause::IV,
    }
}

impl Branch {
    pub(crate) fn empty(root: Prefix) -> Self {
        Branch {
            formulas: Vec::new(),
            index: HashMap::new(),
            root,
            intro: Default::default(),
            intro_list: Default::default(),
            next_intro: 0,
            ref_cursor: [0, 0],
            fresh: [1, 1],
            applied: BTreeSet::new(),
            edges: Vec::new(),
            witness: None,
            literals: HashMap::new(),
            cursor: 0,
            by_agent: HashMap::new(),
            by_state: HashMap::new(),
            by_prefix: HashMap::new(),
            eq_a: HashMap::new(),
            eq_k: HashMap::new(),
            class_parent: Default::default(),
        }
    }

    /// Builds a branch from hand-written prefixed formulas `(agent, state, body, accessibility)`.
    /// The first formula's prefix is taken as the root prefix.
    pub fn from_formulas<I, A, K>(items: I) -> Self
    where
        I: IntoIterator<Item = (A, K, Formula, bool)>,
        A: AsRef<str>,
        K: AsRef<str>,
    {
        let mut b: Option<Branch> = None;
        for (a, k, body, acc) in items {
            let prefix = Prefix::new(a, k);
            let br = b.get_or_insert_with(|| Branch::empty(prefix.clone()));
            br.add(
                NewFormula { prefix, body: Arc::new(body), is_accessibility: acc },
                Origin { rule: Rule::Given, parents: vec![] },
            );
        }
        b.expect("a branch needs at least one formula")
    }

    pub fn formulas(&self) -> &[LabeledFormula] {
        &self.formulas
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    pub fn root_prefix(&self) -> &Prefix {
        &self.root
    }

    pub fn root_formula(&self) -> &LabeledFormula {
        &self.formulas[0]
    }

    /// Sequence numbers of the diamond formulas already expanded.
    pub fn applied(&self) -> &BTreeSet<usize> {
        &self.applied
    }

    pub fn contains(&self, prefix: &Prefix, body: &Formula) -> bool {
        // Arc<Formula> borrows as Formula only through a temporary key.
        self.index.contains_key(&(prefix.clone(), Arc::new(body.clone())))
    }

    pub(crate) fn contains_arc(&self, prefix: &Prefix, body: &Arc<Formula>) -> bool {
        self.index.contains_key(&(prefix.clone(), body.clone()))
    }

    pub fn position(&self, prefix: &Prefix, body: &Formula) -> Option<usize> {
        self.index.get(&(prefix.clone(), Arc::new(body.clone()))).copied()
    }

    /// Introduction rank of a nominal (smaller = earlier), if it occurs.
    pub fn intro_order(&self, sort: Sort, name: &str) -> Option<usize> {
        self.intro[slot(sort)].get(name).copied()
    }

    /// Nominals of a sort occurring on the branch, in introduction order.
    pub fn nominals(&self, sort: Sort) -> &[Name] {
        &self.intro_list[slot(sort)]
    }

    pub fn occurs(&self, sort: Sort, name: &str) -> bool {
        self.intro[slot(sort)].contains_key(name)
    }

    /// The incrementally detected closure witness, if any.
    pub fn witness(&self) -> Option<ClosureWitness> {
        self.witness
    }

    /// Pairs `(a, k)` occurring as prefixes.
    pub fn prefixes(&self) -> BTreeSet<Prefix> {
        self.by_prefix.keys().cloned().collect()
    }

    pub(crate) fn at_prefix(&self, prefix: &Prefix) -> &[usize] {
        self.by_prefix.get(prefix).map_or(&[], Vec::as_slice)
    }

    /// Current urfather of an occurring nominal: the earliest introduced
    /// nominal identified with it by the equalities on the branch so far.
    pub fn urfather_of(&self, sort: Sort, name: &Name) -> Option<&Name> {
        let parents = &self.class_parent[slot(sort)];
        let mut cur = parents.get_key_value(name)?.0;
        while let Some(next) = parents.get(cur).filter(|n| *n != cur) {
            cur = next;
        }
        Some(cur)
    }

    /// Whether both coordinates of the prefix are their own urfathers.
    pub fn is_urfather_prefix(&self, p: &Prefix) -> bool {
        self.urfather_of(Sort::NomA, &p.agent) == Some(&p.agent)
            && self.urfather_of(Sort::NomK, &p.state) == Some(&p.state)
    }

    fn unite(&mut self, sort: Sort, x: &Name, y: &Name) {
        let (rx, ry) = match (self.urfather_of(sort, x), self.urfather_of(sort, y)) {
            (Some(rx), Some(ry)) if rx != ry => (rx.clone(), ry.clone()),
            _ => return,
        };
        let rank = &self.intro[slot(sort)];
        let (keep, drop) = if rank[&rx] < rank[&ry] { (rx, ry) } else { (ry, rx) };
        self.class_parent[slot(sort)].insert(drop, keep);
    }

    fn introduce(&mut self, sort: Sort, name: &Name) {
        if !self.intro[slot(sort)].contains_key(name) {
            self.class_parent[slot(sort)].insert(name.clone(), name.clone());
            self.intro[slot(sort)].insert(name.clone(), self.next_intro);
            self.intro_list[slot(sort)].push(name.clone());
            self.next_intro += 1;
        }
    }

    /// A nominal name of the given sort not yet occurring on the branch.
    pub(crate) fn fresh_nominal(&mut self, sort: Sort) -> Name {
        loop {
            let n = self.fresh[slot(sort)];
            self.fresh[slot(sort)] += 1;
            let name: Name = Arc::from(format!("_g{n}"));
            if !self.occurs(sort, &name) {
                return name;
            }
        }
    }

    /// Adds a formula unless its `(prefix, body)` is already present.
    /// Returns the new sequence number.
    pub(crate) fn add(&mut self, nf: NewFormula, origin: Origin) -> Option<usize> {
        let key = (nf.prefix.clone(), nf.body.clone());
        if self.index.contains_key(&key) {
            return None;
        }
        let seq = self.formulas.len();
        self.index.insert(key, seq);

        self.introduce(Sort::NomA, &nf.prefix.agent);
        self.introduce(Sort::NomK, &nf.prefix.state);
        let mut body_noms = Vec::new();
        nf.body.visit_atoms(&mut |a| {
            if a.sort().is_nominal() {
                body_noms.push(a.clone());
            }
        });
        for a in &body_noms {
            self.introduce(a.sort(), a.name());
        }

        let p = &nf.prefix;
        self.by_agent.entry(p.agent.clone()).or_default().push(seq);
        self.by_state.entry(p.state.clone()).or_default().push(seq);
        self.by_prefix.entry(p.clone()).or_default().push(seq);
        if let Formula::Atom(a) = nf.body.as_ref() {
            match a.sort() {
                Sort::NomA => {
                    self.eq_a.entry(p.agent.clone()).or_default().push(seq);
                    self.unite(Sort::NomA, &p.agent, a.name());
                }
                Sort::NomK => {
                    self.eq_k.entry(p.state.clone()).or_default().push(seq);
                    self.unite(Sort::NomK, &p.state, a.name());
                }
                _ => {}
            }
        }
        if let Some((atom, positive)) = literal(&nf.body) {
            let key = lit_key(p, atom);
            let entry = self.literals.entry(key).or_insert([None, None]);
            let (mine, theirs) = if positive { (0, 1) } else { (1, 0) };
            if entry[mine].is_none() {
                entry[mine] = Some(seq);
            }
            if let (None, Some(other)) = (self.witness, entry[theirs]) {
                let (positive, negative) = if positive { (seq, other) } else { (other, seq) };
                self.witness = Some(ClosureWitness { clause: clause_of(atom.sort()), positive, negative });
            }
        }

        self.formulas.push(LabeledFormula {
            prefix: nf.prefix,
            body: nf.body,
            is_accessibility: nf.is_accessibility,
            seq,
            origin,
        });
        Some(seq)
    }
}

/// The first closure witness in clause order (i)–(iv), then by position.
pub fn is_closed(b: &Branch) -> Option<ClosureWitness> {
    let mut best: Option<ClosureWitness> = None;
    let mut seen: HashMap<LitKey, [Option<usize>; 2]> = HashMap::new();
    for lf in &b.formulas {
        let Some((atom, positive)) = literal(&lf.body) else { continue };
        let entry = seen.entry(lit_key(&lf.prefix, atom)).or_insert([None, None]);
        let (mine, theirs) = if positive { (0, 1) } else { (1, 0) };
        entry[mine].get_or_insert(lf.seq);
        if let Some(other) = entry[theirs] {
            let (p, n) = if positive { (lf.seq, other) } else { (other, lf.seq) };
            let w = ClosureWitness { clause: clause_of(atom.sort()), positive: p, negative: n };
            if best.map_or(true, |b| w.clause < b.clause) {
                best = Some(w);
            }
        }
    }
    best
}
