//! Reading a finite model off an open saturated branch.
//!
//! Nominals that the branch identifies are collapsed onto their urfather,
//! the earliest introduced member of their class. Worlds are the urfathers,
//! relations come from accessibility formulas only.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::semantics::{eval, AkModel, Point};
use crate::syntax::{Atom, Formula, Name, Sort};
use crate::tableau::{is_saturated, Branch, ClosureWitness};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ExtractionError {
    #[error("branch is not saturated")]
    NotSaturated,
    #[error("branch is closed (clause {})", .0.clause)]
    BranchClosed(ClosureWitness),
    #[error("nominal {0} does not occur on the branch")]
    UnknownNominal(String),
    #[error("the branch relation on {0:?} nominals is not an equivalence")]
    NotEquivalence(Sort),
    #[error("{0} is forced both true and false at the same world")]
    Inconsistent(String),
}

/// Partition of the occurring nominals of each sort. Classes and their
/// members are listed in introduction order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NominalEquivalence {
    pub classes_a: Vec<Vec<Name>>,
    pub classes_k: Vec<Vec<Name>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Urfathers {
    pub rep_a: BTreeMap<Name, Name>,
    pub rep_k: BTreeMap<Name, Name>,
}

impl Urfathers {
    pub fn of(&self, sort: Sort, name: &str) -> Option<&Name> {
        match sort {
            Sort::NomA => self.rep_a.get(name),
            Sort::NomK => self.rep_k.get(name),
            _ => None,
        }
    }
}

/// The relation as read from the branch, without any closure:
/// `a ~ b` iff some `@a@k b` is present (agents), `k ~ l` iff some `@a@k l` is present (states).
pub fn raw_relation(b: &Branch, sort: Sort) -> BTreeSet<(Name, Name)> {
    let mut out = BTreeSet::new();
    for lf in b.formulas() {
        if let Formula::Atom(atom) = lf.body.as_ref() {
            if atom.sort() == sort {
                let from = match sort {
                    Sort::NomA => &lf.prefix.agent,
                    Sort::NomK => &lf.prefix.state,
                    _ => continue,
                };
                out.insert((from.clone(), atom.name().clone()));
            }
        }
    }
    out
}

/// Whether the raw relation is reflexive on the occurring nominals, symmetric and transitive.
pub fn raw_is_equivalence(b: &Branch, sort: Sort) -> bool {
    let rel = raw_relation(b, sort);
    let reflexive = b.nominals(sort).iter().all(|n| rel.contains(&(n.clone(), n.clone())));
    let symmetric = rel.iter().all(|(x, y)| rel.contains(&(y.clone(), x.clone())));
    let mut succ: HashMap<&Name, Vec<&Name>> = HashMap::new();
    for (x, y) in &rel {
        succ.entry(x).or_default().push(y);
    }
    let transitive = rel.iter().all(|(x, y)| {
        succ.get(y)
            .map_or(true, |zs| zs.iter().all(|z| rel.contains(&(x.clone(), (*z).clone()))))
    });
    reflexive && symmetric && transitive
}

fn check_open_saturated(b: &Branch) -> Result<(), ExtractionError> {
    if let Some(w) = b.witness() {
        return Err(ExtractionError::BranchClosed(w));
    }
    if !is_saturated(b) {
        return Err(ExtractionError::NotSaturated);
    }
    Ok(())
}

fn classes(b: &Branch, sort: Sort, reps: &BTreeMap<Name, Name>) -> Vec<Vec<Name>> {
    let mut by_rep: Vec<(Name, Vec<Name>)> = Vec::new();
    for n in b.nominals(sort) {
        let r = &reps[n];
        match by_rep.iter_mut().find(|(k, _)| k == r) {
            Some((_, members)) => members.push(n.clone()),
            None => by_rep.push((r.clone(), vec![n.clone()])),
        }
    }
    by_rep.into_iter().map(|(_, m)| m).collect()
}

pub fn equivalences(b: &Branch) -> Result<NominalEquivalence, ExtractionError> {
    check_open_saturated(b)?;
    for sort in [Sort::NomA, Sort::NomK] {
        if !raw_is_equivalence(b, sort) {
            return Err(ExtractionError::NotEquivalence(sort));
        }
    }
    let u = urfathers(b);
    Ok(NominalEquivalence {
        classes_a: classes(b, Sort::NomA, &u.rep_a),
        classes_k: classes(b, Sort::NomK, &u.rep_k),
    })
}

/// Urfathers of all occurring nominals, computed over the reflexive,
/// symmetric, transitive closure of the raw relation. On a saturated branch
/// the closure adds nothing.
pub fn urfathers(b: &Branch) -> Urfathers {
    let reps = |sort| crate::tableau::urfather_map(b, sort).into_iter().collect::<BTreeMap<_, _>>();
    Urfathers { rep_a: reps(Sort::NomA), rep_k: reps(Sort::NomK) }
}

pub fn urfather(b: &Branch, sort: Sort, name: &str) -> Result<Name, ExtractionError> {
    urfathers(b)
        .of(sort, name)
        .cloned()
        .ok_or_else(|| ExtractionError::UnknownNominal(format!("{}{name}", sort.prefix())))
}

fn world_id(sort: Sort, name: &str) -> String {
    format!("{}{name}", sort.prefix())
}

/// The generated model of an open saturated branch and its designated point
/// `(u(a0), u(k0))` for the root prefix `@a0 @k0`.
pub fn extract_model(b: &Branch) -> Result<(AkModel, Point), ExtractionError> {
    check_open_saturated(b)?;
    build_model(b, &urfathers(b))
}

fn build_model(b: &Branch, u: &Urfathers) -> Result<(AkModel, Point), ExtractionError> {
    let reps = |sort: Sort| -> Vec<Name> {
        let map = if sort == Sort::NomA { &u.rep_a } else { &u.rep_k };
        b.nominals(sort).iter().filter(|n| map[*n] == **n).cloned().collect()
    };
    let (ra, rk) = (reps(Sort::NomA), reps(Sort::NomK));
    let ax: HashMap<&Name, usize> = ra.iter().enumerate().map(|(i, n)| (n, i)).collect();
    let kx: HashMap<&Name, usize> = rk.iter().enumerate().map(|(i, n)| (n, i)).collect();
    let agent = |n: &Name| ax[&u.rep_a[n]];
    let state = |n: &Name| kx[&u.rep_k[n]];

    let mut m = AkModel::new(
        ra.iter().map(|n| world_id(Sort::NomA, n)),
        rk.iter().map(|n| world_id(Sort::NomK, n)),
    )
    .expect("urfathers are distinct");

    let mut props: [BTreeMap<Name, BTreeSet<usize>>; 2] = Default::default();
    let mut negated: [BTreeMap<Name, BTreeSet<usize>>; 2] = Default::default();
    let mut record_vocab = |atom: &Atom| {
        if !atom.sort().is_nominal() {
            let slot = if atom.sort() == Sort::PropA { 0 } else { 1 };
            props[slot].entry(atom.name().clone()).or_default();
        }
    };
    b.root_formula().body.visit_atoms(&mut record_vocab);
    for lf in b.formulas() {
        lf.body.visit_atoms(&mut record_vocab);
    }

    for lf in b.formulas() {
        let (x, y) = (agent(&lf.prefix.agent), state(&lf.prefix.state));
        // a prefix that lost its urfather status has its diamonds fired again at the urfather
        let live = u.rep_a[&lf.prefix.agent] == lf.prefix.agent && u.rep_k[&lf.prefix.state] == lf.prefix.state;
        match lf.body.as_ref() {
            _ if lf.is_accessibility && !live => {}
            Formula::DiaA(g) if lf.is_accessibility => {
                let target = g.as_atom().expect("accessibility formula names a nominal");
                m.r_mut(y).insert(x, agent(target.name()));
            }
            Formula::DiaK(g) if lf.is_accessibility => {
                let target = g.as_atom().expect("accessibility formula names a nominal");
                m.s_mut(x).insert(y, state(target.name()));
            }
            body => {
                let (atom, positive) = match body {
                    Formula::Atom(a) => (a, true),
                    Formula::Not(g) => match g.as_atom() {
                        Some(a) => (a, false),
                        None => continue,
                    },
                    _ => continue,
                };
                let (slot, w) = match atom.sort() {
                    Sort::PropA => (0, x),
                    Sort::PropK => (1, y),
                    _ => continue,
                };
                let table = if positive { &mut props } else { &mut negated };
                table[slot].entry(atom.name().clone()).or_default().insert(w);
            }
        }
    }

    for (slot, sort) in [(0, Sort::PropA), (1, Sort::PropK)] {
        for (name, worlds) in &props[slot] {
            if let Some(neg) = negated[slot].get(name) {
                if !worlds.is_disjoint(neg) {
                    return Err(ExtractionError::Inconsistent(world_id(sort, name)));
                }
            }
            m.set_valuation_ix(&Atom::new(sort, name.clone()), worlds.clone());
        }
    }
    for n in b.nominals(Sort::NomA) {
        m.set_valuation_ix(&Atom::new(Sort::NomA, n.clone()), BTreeSet::from([agent(n)]));
    }
    for n in b.nominals(Sort::NomK) {
        m.set_valuation_ix(&Atom::new(Sort::NomK, n.clone()), BTreeSet::from([state(n)]));
    }

    let root = b.root_prefix();
    Ok((m, Point { x: agent(&root.agent), y: state(&root.state) }))
}

/// Checks that every non-accessibility formula `@a@k φ` on the branch whose
/// body is a subformula of the root body holds at `(u(a), u(k))`.
pub fn verify_model_existence(b: &Branch, m: &AkModel, pt: Point) -> bool {
    let u = urfathers(b);
    let root_prefix = b.root_prefix();
    let at = |sort: Sort, n: &Name| {
        let rep = u.of(sort, n).unwrap_or(n);
        let id = world_id(sort, rep);
        if sort == Sort::NomA { m.agent_index(&id) } else { m.state_index(&id) }
    };
    // the designated point must be the root's urfather point
    if at(Sort::NomA, &root_prefix.agent) != Some(pt.x) || at(Sort::NomK, &root_prefix.state) != Some(pt.y) {
        return false;
    }
    let subs = b.root_formula().body.subformulas();
    b.formulas().iter().filter(|lf| !lf.is_accessibility && subs.contains(lf.body.as_ref())).all(|lf| {
        match (at(Sort::NomA, &lf.prefix.agent), at(Sort::NomK, &lf.prefix.state)) {
            (Some(x), Some(y)) => eval(m, Point { x, y }, &lf.body).unwrap_or(false),
            _ => false,
        }
    })
}
