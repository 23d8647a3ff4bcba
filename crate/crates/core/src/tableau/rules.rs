//! Rule instances, their side conditions and their conclusions.

use std::collections::HashMap;
use std::sync::Arc;

use super::branch::{Branch, GenerationEdge, NewFormula, Origin, Prefix, Rule};
use crate::syntax::{Atom, Formula, Name, Sort};

/// One applicable use of a rule. Indices are sequence numbers of premises.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RuleInstance {
    RefA(Prefix),
    RefK(Prefix),
    NotNot(usize),
    And(usize),
    Or(usize),
    AtA(usize),
    AtK(usize),
    DiaA(usize),
    DiaK(usize),
    BoxA { major: usize, access: usize },
    BoxK { major: usize, access: usize },
    /// `@a@l b`, `@a@k φ` ⟹ `@b@k φ`.
    IdA { equality: usize, premise: usize },
    /// `@x@k l`, `@a@k φ` ⟹ `@a@l φ`.
    IdK { equality: usize, premise: usize },
}

impl RuleInstance {
    pub fn rule(&self) -> Rule {
        match self {
            RuleInstance::RefA(_) => Rule::RefA,
            RuleInstance::RefK(_) => Rule::RefK,
            RuleInstance::NotNot(_) => Rule::NotNot,
            RuleInstance::And(_) => Rule::And,
            RuleInstance::Or(_) => Rule::OrLeft,
            RuleInstance::AtA(_) => Rule::AtA,
            RuleInstance::AtK(_) => Rule::AtK,
            RuleInstance::DiaA(_) => Rule::DiaA,
            RuleInstance::DiaK(_) => Rule::DiaK,
            RuleInstance::BoxA { .. } => Rule::BoxA,
            RuleInstance::BoxK { .. } => Rule::BoxK,
            RuleInstance::IdA { .. } => Rule::IdA,
            RuleInstance::IdK { .. } => Rule::IdK,
        }
    }

    pub fn premises(&self) -> Vec<usize> {
        match *self {
            RuleInstance::RefA(_) | RuleInstance::RefK(_) => vec![],
            RuleInstance::NotNot(i)
            | RuleInstance::And(i)
            | RuleInstance::Or(i)
            | RuleInstance::AtA(i)
            | RuleInstance::AtK(i)
            | RuleInstance::DiaA(i)
            | RuleInstance::DiaK(i) => vec![i],
            RuleInstance::BoxA { major, access } | RuleInstance::BoxK { major, access } => {
                vec![major, access]
            }
            RuleInstance::IdA { equality, premise } | RuleInstance::IdK { equality, premise } => {
                vec![premise, equality]
            }
        }
    }

    pub fn is_branching(&self) -> bool {
        matches!(self, RuleInstance::Or(_))
    }

    pub fn is_generating(&self) -> bool {
        matches!(self, RuleInstance::DiaA(_) | RuleInstance::DiaK(_))
    }
}

fn nf(prefix: Prefix, body: &Formula) -> NewFormula {
    NewFormula { prefix, body: Arc::new(body.clone()), is_accessibility: false }
}

fn with_agent(p: &Prefix, agent: &Name) -> Prefix {
    Prefix { agent: agent.clone(), state: p.state.clone() }
}

fn with_state(p: &Prefix, state: &Name) -> Prefix {
    Prefix { agent: p.agent.clone(), state: state.clone() }
}

fn nominal_body(body: &Formula, sort: Sort) -> Option<&Name> {
    body.as_atom().filter(|a| a.sort() == sort).map(Atom::name)
}

/// Instances in which formula `i` takes part, with every partner premise at
/// a position `<= i`. Ref instances are not included.
pub(crate) fn instances_for(b: &Branch, i: usize, out: &mut Vec<RuleInstance>) {
    let lf = &b.formulas[i];
    let p = &lf.prefix;
    match lf.body.as_ref() {
        Formula::Not(g) if matches!(**g, Formula::Not(_)) => out.push(RuleInstance::NotNot(i)),
        Formula::And(..) => out.push(RuleInstance::And(i)),
        Formula::Or(..) => out.push(RuleInstance::Or(i)),
        Formula::AtA(..) => out.push(RuleInstance::AtA(i)),
        Formula::AtK(..) => out.push(RuleInstance::AtK(i)),
        Formula::DiaA(_) if !lf.is_accessibility => out.push(RuleInstance::DiaA(i)),
        Formula::DiaK(_) if !lf.is_accessibility => out.push(RuleInstance::DiaK(i)),
        Formula::BoxA(_) | Formula::BoxK(_) => {
            let want_a = matches!(lf.body.as_ref(), Formula::BoxA(_));
            for &j in b.at_prefix(p).iter().take_while(|&&j| j <= i) {
                let other = &b.formulas[j];
                if !other.is_accessibility {
                    continue;
                }
                match (other.body.as_ref(), want_a) {
                    (Formula::DiaA(_), true) => out.push(RuleInstance::BoxA { major: i, access: j }),
                    (Formula::DiaK(_), false) => out.push(RuleInstance::BoxK { major: i, access: j }),
                    _ => {}
                }
            }
        }
        _ => {}
    }

    if lf.is_accessibility {
        // minor premise of the box rules
        let want_a = matches!(lf.body.as_ref(), Formula::DiaA(_));
        for &j in b.at_prefix(p).iter().take_while(|&&j| j <= i) {
            match (b.formulas[j].body.as_ref(), want_a) {
                (Formula::BoxA(_), true) => out.push(RuleInstance::BoxA { major: j, access: i }),
                (Formula::BoxK(_), false) => out.push(RuleInstance::BoxK { major: j, access: i }),
                _ => {}
            }
        }
        return;
    }

    // i as the copied premise
    if let Some(eqs) = b.eq_a.get(&p.agent) {
        for &j in eqs.iter().take_while(|&&j| j <= i) {
            let target = nominal_body(&b.formulas[j].body, Sort::NomA).expect("equality");
            if copy_allowed(b, i, Sort::NomA, target) {
                out.push(RuleInstance::IdA { equality: j, premise: i });
            }
        }
    }
    if let Some(eqs) = b.eq_k.get(&p.state) {
        for &j in eqs.iter().take_while(|&&j| j <= i) {
            let target = nominal_body(&b.formulas[j].body, Sort::NomK).expect("equality");
            if copy_allowed(b, i, Sort::NomK, target) {
                out.push(RuleInstance::IdK { equality: j, premise: i });
            }
        }
    }
    // i as the equality
    if let Some(other) = nominal_body(&lf.body, Sort::NomA) {
        if *other != p.agent {
            for &j in b.by_agent[&p.agent].iter().take_while(|&&j| j < i) {
                if !b.formulas[j].is_accessibility && copy_allowed(b, j, Sort::NomA, other) {
                    out.push(RuleInstance::IdA { equality: i, premise: j });
                }
            }
        }
    }
    if let Some(other) = nominal_body(&lf.body, Sort::NomK) {
        if *other != p.state {
            for &j in b.by_state[&p.state].iter().take_while(|&&j| j < i) {
                if !b.formulas[j].is_accessibility && copy_allowed(b, j, Sort::NomK, other) {
                    out.push(RuleInstance::IdK { equality: i, premise: j });
                }
            }
        }
    }
}

fn child(f: &Formula) -> &Formula {
    f.children()[0]
}

/// Conclusions of a non-generating instance, one list per resulting branch.
pub(crate) fn outcomes(b: &Branch, inst: &RuleInstance) -> Vec<Vec<(NewFormula, Origin)>> {
    let origin = |rule: Rule| Origin { rule, parents: inst.premises() };
    let single = |nfs: Vec<NewFormula>| {
        vec![nfs.into_iter().map(|n| (n, origin(inst.rule()))).collect::<Vec<_>>()]
    };
    match inst {
        RuleInstance::RefA(p) => single(vec![nf(p.clone(), &Formula::nom_a(&*p.agent))]),
        RuleInstance::RefK(p) => single(vec![nf(p.clone(), &Formula::nom_k(&*p.state))]),
        &RuleInstance::NotNot(i) => {
            let lf = &b.formulas[i];
            single(vec![nf(lf.prefix.clone(), child(child(&lf.body)))])
        }
        &RuleInstance::And(i) => {
            let lf = &b.formulas[i];
            let Formula::And(l, r) = lf.body.as_ref() else { unreachable!() };
            single(vec![nf(lf.prefix.clone(), l), nf(lf.prefix.clone(), r)])
        }
        &RuleInstance::Or(i) => {
            let lf = &b.formulas[i];
            let Formula::Or(l, r) = lf.body.as_ref() else { unreachable!() };
            vec![
                vec![(nf(lf.prefix.clone(), l), origin(Rule::OrLeft))],
                vec![(nf(lf.prefix.clone(), r), origin(Rule::OrRight))],
            ]
        }
        &RuleInstance::AtA(i) => {
            let lf = &b.formulas[i];
            let Formula::AtA(n, g) = lf.body.as_ref() else { unreachable!() };
            single(vec![nf(with_agent(&lf.prefix, n), g)])
        }
        &RuleInstance::AtK(i) => {
            let lf = &b.formulas[i];
            let Formula::AtK(n, g) = lf.body.as_ref() else { unreachable!() };
            single(vec![nf(with_state(&lf.prefix, n), g)])
        }
        &RuleInstance::BoxA { major, access } => {
            let body = child(&b.formulas[major].body);
            let acc = &b.formulas[access];
            let target = nominal_body(child(&acc.body), Sort::NomA).expect("accessibility formula");
            single(vec![nf(with_agent(&acc.prefix, target), body)])
        }
        &RuleInstance::BoxK { major, access } => {
            let body = child(&b.formulas[major].body);
            let acc = &b.formulas[access];
            let target = nominal_body(child(&acc.body), Sort::NomK).expect("accessibility formula");
            single(vec![nf(with_state(&acc.prefix, target), body)])
        }
        &RuleInstance::IdA { equality, premise } => {
            let target = nominal_body(&b.formulas[equality].body, Sort::NomA).expect("equality");
            let lf = &b.formulas[premise];
            vec![vec![(
                NewFormula {
                    prefix: with_agent(&lf.prefix, target),
                    body: lf.body.clone(),
                    is_accessibility: false,
                },
                origin(Rule::IdA),
            )]]
        }
        &RuleInstance::IdK { equality, premise } => {
            let target = nominal_body(&b.formulas[equality].body, Sort::NomK).expect("equality");
            let lf = &b.formulas[premise];
            vec![vec![(
                NewFormula {
                    prefix: with_state(&lf.prefix, target),
                    body: lf.body.clone(),
                    is_accessibility: false,
                },
                origin(Rule::IdK),
            )]]
        }
        RuleInstance::DiaA(_) | RuleInstance::DiaK(_) => {
            panic!("diamond instances are fired through fire_diamond")
        }
    }
}

/// Urfather of every nominal of `sort` occurring on `b`: the earliest
/// introduced member of its class under the branch's nominal equalities.
pub(crate) fn urfathers(b: &Branch, sort: Sort) -> HashMap<Name, Name> {
    b.nominals(sort)
        .iter()
        .map(|n| (n.clone(), b.urfather_of(sort, n).expect("occurring nominal").clone()))
        .collect()
}

/// Side conditions of the diamond rule beyond one-shot and non-accessibility:
/// both prefix nominals must be urfathers.
pub(crate) fn diamond_allowed(b: &Branch, i: usize) -> bool {
    let lf = &b.formulas[i];
    !lf.is_accessibility && !b.applied.contains(&i) && b.is_urfather_prefix(&lf.prefix)
}

/// Side condition of the identity rules: equalities themselves are copied
/// both ways, anything else only onto the urfather of the class.
fn copy_allowed(b: &Branch, premise: usize, sort: Sort, target: &Name) -> bool {
    let body = b.formulas[premise].body.as_ref();
    matches!(body, Formula::Atom(a) if a.sort().is_nominal()) || b.urfather_of(sort, target) == Some(target)
}

/// Fires a diamond instance: adds the accessibility formula and the witness
/// formula for a fresh nominal, records the ledger entry and generation edge.
/// Returns the sequence numbers of the added formulas.
pub(crate) fn fire_diamond(b: &mut Branch, inst: &RuleInstance) -> Vec<usize> {
    let (i, sort, rule) = match *inst {
        RuleInstance::DiaA(i) => (i, Sort::NomA, Rule::DiaA),
        RuleInstance::DiaK(i) => (i, Sort::NomK, Rule::DiaK),
        _ => panic!("not a diamond instance"),
    };
    let fresh = b.fresh_nominal(sort);
    let lf = b.formulas[i].clone();
    let witness_body = child(&lf.body).clone();
    let (acc_body, child_prefix) = match sort {
        Sort::NomA => (Formula::dia_a(Formula::nom_a(&*fresh)), with_agent(&lf.prefix, &fresh)),
        _ => (Formula::dia_k(Formula::nom_k(&*fresh)), with_state(&lf.prefix, &fresh)),
    };
    b.applied.insert(i);
    b.edges.push(GenerationEdge {
        parent: lf.prefix.clone(),
        child: child_prefix.clone(),
        rule,
        premise: i,
    });
    let origin = Origin { rule, parents: vec![i] };
    let mut added = Vec::new();
    let acc = NewFormula { prefix: lf.prefix.clone(), body: Arc::new(acc_body), is_accessibility: true };
    added.extend(b.add(acc, origin.clone()));
    added.extend(b.add(nf(child_prefix, &witness_body), origin));
    added
}

fn all_present(b: &Branch, nfs: &[(NewFormula, Origin)]) -> bool {
    nfs.iter().all(|(n, _)| b.contains_arc(&n.prefix, &n.body))
}

/// Whether applying the instance would add nothing new. A disjunction counts
/// as done once either disjunct is on the branch.
pub(crate) fn is_redundant(b: &Branch, inst: &RuleInstance) -> bool {
    match inst {
        RuleInstance::DiaA(i) | RuleInstance::DiaK(i) => b.applied.contains(i),
        RuleInstance::Or(_) => outcomes(b, inst).iter().any(|o| all_present(b, o)),
        _ => all_present(b, &outcomes(b, inst)[0]),
    }
}

/// Every rule instance whose side conditions hold and which would add a new formula.
pub fn applicable_rules(b: &Branch) -> Vec<RuleInstance> {
    let mut out = Vec::new();
    let noms_a = b.nominals(Sort::NomA);
    let noms_k = b.nominals(Sort::NomK);
    for a in noms_a {
        for k in noms_k {
            let p = Prefix { agent: a.clone(), state: k.clone() };
            for inst in [RuleInstance::RefA(p.clone()), RuleInstance::RefK(p)] {
                if !is_redundant(b, &inst) {
                    out.push(inst);
                }
            }
        }
    }
    let mut scratch = Vec::new();
    for i in 0..b.len() {
        scratch.clear();
        instances_for(b, i, &mut scratch);
        for inst in scratch.drain(..) {
            let keep = match inst {
                RuleInstance::DiaA(j) | RuleInstance::DiaK(j) => diamond_allowed(b, j),
                _ => !is_redundant(b, &inst),
            };
            if keep {
                out.push(inst);
            }
        }
    }
    out
}

/// Applies one instance to a copy of the branch. Splits return two branches.
pub fn apply(b: &Branch, inst: &RuleInstance) -> Vec<Branch> {
    let mut base = b.clone();
    if inst.is_generating() {
        fire_diamond(&mut base, inst);
        return vec![base];
    }
    let outs = outcomes(b, inst);
    let mut result = Vec::with_capacity(outs.len());
    for conclusions in outs {
        let mut nb = base.clone();
        for (n, origin) in conclusions {
            nb.add(n, origin);
        }
        result.push(nb);
    }
    result
}
