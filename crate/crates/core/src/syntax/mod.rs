//! Formula language: sorted atoms, the formula AST, its concrete ASCII
//! grammar, negation normal form and a few structural utilities.
//!
//! Atoms are sorted by identifier prefix:
//!
//! | prefix | sort      | true at                              |
//! |--------|-----------|--------------------------------------|
//! | `pa_`  | `PropA`   | a set of agents                      |
//! | `pk_`  | `PropK`   | a set of epistemic states            |
//! | `na_`  | `NomA`    | exactly one agent                    |
//! | `nk_`  | `NomK`    | exactly one epistemic state          |
//!
//! Names whose bare part starts with `_` (e.g. `na__g3`) are reserved for
//! nominals generated by the prover.

mod nnf;
mod parser;
mod printer;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

pub use nnf::{is_nnf, to_nnf};
pub use parser::{parse, ParseError};

/// Shared, cheaply clonable identifier (bare name, without sort prefix).
pub type Name = Arc<str>;

/// Prefix reserved for prover-generated nominal names.
pub const RESERVED_PREFIX: &str = "_";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    PropA,
    PropK,
    NomA,
    NomK,
}

impl Sort {
    pub const ALL: [Sort; 4] = [Sort::PropA, Sort::PropK, Sort::NomA, Sort::NomK];

    pub fn prefix(self) -> &'static str {
        match self {
            Sort::PropA => "pa_",
            Sort::PropK => "pk_",
            Sort::NomA => "na_",
            Sort::NomK => "nk_",
        }
    }

    pub fn is_nominal(self) -> bool {
        matches!(self, Sort::NomA | Sort::NomK)
    }

    /// Whether the atom is interpreted on the agent axis.
    pub fn is_agent_side(self) -> bool {
        matches!(self, Sort::PropA | Sort::NomA)
    }

    /// Splits a prefixed identifier such as `pk_p` into its sort and bare name.
    pub fn split_ident(ident: &str) -> Option<(Sort, &str)> {
        Sort::ALL.into_iter().find_map(|sort| {
            ident
                .strip_prefix(sort.prefix())
                .filter(|rest| !rest.is_empty())
                .map(|rest| (sort, rest))
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    sort: Sort,
    name: Name,
}

impl Atom {
    /// Panics if `name` is empty.
    pub fn new(sort: Sort, name: impl AsRef<str>) -> Self {
        let name = name.as_ref();
        assert!(!name.is_empty(), "atom names must be nonempty");
        Atom { sort, name: Arc::from(name) }
    }

    pub fn from_name(sort: Sort, name: Name) -> Self {
        assert!(!name.is_empty(), "atom names must be nonempty");
        Atom { sort, name }
    }

    /// Parses a prefixed identifier like `na_a`.
    pub fn from_ident(ident: &str) -> Option<Self> {
        let (sort, name) = Sort::split_ident(ident)?;
        if !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return None;
        }
        Some(Atom::new(sort, name))
    }

    pub fn sort(&self) -> Sort {
        self.sort
    }

    pub fn name(&self) -> &Name {
        &self.name
    }

    pub fn is_reserved(&self) -> bool {
        self.name.starts_with(RESERVED_PREFIX)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.sort.prefix(), self.name)
    }
}

/// A formula of agent-knowledge logic.
///
/// `AtA` / `AtK` carry the bare name of a `NomA` / `NomK` nominal, so the
/// sort of a satisfaction operator's nominal is fixed by the variant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    BoxA(Box<Formula>),
    BoxK(Box<Formula>),
    DiaA(Box<Formula>),
    DiaK(Box<Formula>),
    AtA(Name, Box<Formula>),
    AtK(Name, Box<Formula>),
}

/// Atoms of a formula partitioned by sort.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocabulary {
    pub prop_a: BTreeSet<Name>,
    pub prop_k: BTreeSet<Name>,
    pub nom_a: BTreeSet<Name>,
    pub nom_k: BTreeSet<Name>,
}

impl Vocabulary {
    pub fn of_sort(&self, sort: Sort) -> &BTreeSet<Name> {
        match sort {
            Sort::PropA => &self.prop_a,
            Sort::PropK => &self.prop_k,
            Sort::NomA => &self.nom_a,
            Sort::NomK => &self.nom_k,
        }
    }

    fn of_sort_mut(&mut self, sort: Sort) -> &mut BTreeSet<Name> {
        match sort {
            Sort::PropA => &mut self.prop_a,
            Sort::PropK => &mut self.prop_k,
            Sort::NomA => &mut self.nom_a,
            Sort::NomK => &mut self.nom_k,
        }
    }

    pub fn insert(&mut self, sort: Sort, name: Name) {
        self.of_sort_mut(sort).insert(name);
    }

    pub fn extend(&mut self, other: &Vocabulary) {
        for sort in Sort::ALL {
            self.of_sort_mut(sort).extend(other.of_sort(sort).iter().cloned());
        }
    }

    pub fn atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        Sort::ALL.into_iter().flat_map(move |sort| {
            self.of_sort(sort)
                .iter()
                .map(move |name| Atom::from_name(sort, name.clone()))
        })
    }
}

impl Formula {
    pub fn atom(sort: Sort, name: impl AsRef<str>) -> Self {
        Formula::Atom(Atom::new(sort, name))
    }
    pub fn prop_a(name: impl AsRef<str>) -> Self {
        Formula::atom(Sort::PropA, name)
    }
    pub fn prop_k(name: impl AsRef<str>) -> Self {
        Formula::atom(Sort::PropK, name)
    }
    pub fn nom_a(name: impl AsRef<str>) -> Self {
        Formula::atom(Sort::NomA, name)
    }
    pub fn nom_k(name: impl AsRef<str>) -> Self {
        Formula::atom(Sort::NomK, name)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }
    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }
    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::Or(Box::new(l), Box::new(r))
    }
    pub fn implies(l: Formula, r: Formula) -> Self {
        Formula::Implies(Box::new(l), Box::new(r))
    }
    pub fn box_a(f: Formula) -> Self {
        Formula::BoxA(Box::new(f))
    }
    pub fn box_k(f: Formula) -> Self {
        Formula::BoxK(Box::new(f))
    }
    pub fn dia_a(f: Formula) -> Self {
        Formula::DiaA(Box::new(f))
    }
    pub fn dia_k(f: Formula) -> Self {
        Formula::DiaK(Box::new(f))
    }
    pub fn at_a(nominal: impl AsRef<str>, f: Formula) -> Self {
        Formula::AtA(Arc::from(nominal.as_ref()), Box::new(f))
    }
    pub fn at_k(nominal: impl AsRef<str>, f: Formula) -> Self {
        Formula::AtK(Arc::from(nominal.as_ref()), Box::new(f))
    }

    /// `@n f` for a nominal atom of either sort; `None` for non-nominals.
    pub fn at(nominal: &Atom, f: Formula) -> Option<Self> {
        match nominal.sort() {
            Sort::NomA => Some(Formula::AtA(nominal.name().clone(), Box::new(f))),
            Sort::NomK => Some(Formula::AtK(nominal.name().clone(), Box::new(f))),
            _ => None,
        }
    }

    /// Conjunction of a nonempty list, folded to the left.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Option<Self> {
        parts.into_iter().reduce(Formula::and)
    }

    pub fn as_atom(&self) -> Option<&Atom> {
        match self {
            Formula::Atom(a) => Some(a),
            _ => None,
        }
    }

    /// Immediate subformulas, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(_) => vec![],
            Formula::Not(f)
            | Formula::BoxA(f)
            | Formula::BoxK(f)
            | Formula::DiaA(f)
            | Formula::DiaK(f)
            | Formula::AtA(_, f)
            | Formula::AtK(_, f) => vec![f],
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => vec![l, r],
        }
    }

    /// Number of AST nodes. The nominal of `@` is part of its node.
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Formula::size).sum::<usize>()
    }

    /// Nesting depth of constructors; an atom has depth 0.
    pub fn depth(&self) -> usize {
        self.children()
            .into_iter()
            .map(|c| c.depth() + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas(&self, out: &mut BTreeSet<Formula>) {
        if out.insert(self.clone()) {
            for c in self.children() {
                c.collect_subformulas(out);
            }
        }
    }

    pub fn vocabulary(&self) -> Vocabulary {
        let mut v = Vocabulary::default();
        self.visit_atoms(&mut |a| v.insert(a.sort(), a.name().clone()));
        v
    }

    /// Calls `f` on every atom occurrence, including the nominals of `@`,
    /// in left-to-right pre-order.
    pub fn visit_atoms(&self, f: &mut impl FnMut(&Atom)) {
        match self {
            Formula::Atom(a) => f(a),
            Formula::AtA(n, g) => {
                f(&Atom::from_name(Sort::NomA, n.clone()));
                g.visit_atoms(f);
            }
            Formula::AtK(n, g) => {
                f(&Atom::from_name(Sort::NomK, n.clone()));
                g.visit_atoms(f);
            }
            _ => {
                for c in self.children() {
                    c.visit_atoms(f);
                }
            }
        }
    }

    pub fn mentions_reserved(&self) -> Option<Atom> {
        let mut found = None;
        self.visit_atoms(&mut |a| {
            if found.is_none() && a.is_reserved() {
                found = Some(a.clone());
            }
        });
        found
    }

    /// Which modal families the formula mentions: `(uses □_A/◇_A, uses □_K/◇_K)`.
    pub fn modal_families(&self) -> (bool, bool) {
        let (mut a, mut k) = (false, false);
        self.visit(&mut |g| match g {
            Formula::BoxA(_) | Formula::DiaA(_) => a = true,
            Formula::BoxK(_) | Formula::DiaK(_) => k = true,
            _ => {}
        });
        (a, k)
    }

    fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_counts_nodes() {
        assert_eq!(Formula::prop_k("p").size(), 1);
        assert_eq!(Formula::dia_a(Formula::nom_a("b")).size(), 2);
        assert_eq!(Formula::dia_k(Formula::not(Formula::prop_k("p"))).size(), 3);
    }

    #[test]
    fn subformula_sets() {
        let p = Formula::prop_k("p");
        let q = Formula::prop_a("q");
        assert_eq!(p.subformulas(), BTreeSet::from([p.clone()]));
        let conj = Formula::and(p.clone(), q.clone());
        assert_eq!(
            conj.subformulas(),
            BTreeSet::from([conj.clone(), p.clone(), q.clone()])
        );
        let bx = Formula::box_k(p.clone());
        assert_eq!(bx.subformulas(), BTreeSet::from([bx.clone(), p]));
    }

    #[test]
    fn vocabulary_partitions_by_sort() {
        let f = Formula::and(Formula::dia_a(Formula::nom_a("a")), Formula::prop_k("p"));
        let v = f.vocabulary();
        assert!(v.prop_a.is_empty() && v.nom_k.is_empty());
        assert_eq!(v.prop_k, BTreeSet::from([Name::from("p")]));
        assert_eq!(v.nom_a, BTreeSet::from([Name::from("a")]));

        let v = Formula::prop_a("q").vocabulary();
        assert_eq!(v.prop_a, BTreeSet::from([Name::from("q")]));
        assert!(v.prop_k.is_empty() && v.nom_a.is_empty() && v.nom_k.is_empty());

        let v = Formula::at_k("k", Formula::prop_k("p")).vocabulary();
        assert_eq!(v.prop_k, BTreeSet::from([Name::from("p")]));
        assert_eq!(v.nom_k, BTreeSet::from([Name::from("k")]));
        assert!(v.prop_a.is_empty() && v.nom_a.is_empty());
    }

    #[test]
    fn ident_sorting() {
        assert_eq!(Sort::split_ident("pk_p"), Some((Sort::PropK, "p")));
        assert_eq!(Sort::split_ident("na__g0"), Some((Sort::NomA, "_g0")));
        assert_eq!(Sort::split_ident("na_"), None);
        assert_eq!(Sort::split_ident("foo"), None);
        assert!(Atom::from_ident("na__g1").unwrap().is_reserved());
    }
}
