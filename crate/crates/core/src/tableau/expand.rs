use std::sync::Arc;

use super::branch::{Branch, ClosureWitness, NewFormula, Origin, Prefix, Rule};
use super::rules::{self, RuleInstance};
use super::trace::{Trace, TraceEvent};
use super::TableauError;
use crate::syntax::{to_nnf, Formula, Name, Sort};

/// Name (without sort prefix) of the root nominals `na__g0` / `nk__g0`.
pub const ROOT_NOMINAL: &str = "_g0";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Root is the NNF of the negated formula.
    Prove,
    /// Root is the NNF of the formula itself.
    Sat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Formula additions summed over all branches.
    pub max_nodes: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_nodes: 100_000 }
    }
}

#[derive(Clone, Debug)]
pub enum TableauResult {
    AllClosed(Trace),
    OpenSaturated(Box<Branch>, Trace),
}

impl TableauResult {
    pub fn is_closed(&self) -> bool {
        matches!(self, TableauResult::AllClosed(_))
    }

    pub fn trace(&self) -> &Trace {
        match self {
            TableauResult::AllClosed(t) | TableauResult::OpenSaturated(_, t) => t,
        }
    }
}

/// Every leaf of a fully explored tableau.
#[derive(Clone, Debug, Default)]
pub struct Exploration {
    pub closed: Vec<(Branch, ClosureWitness)>,
    pub open: Vec<Branch>,
    pub trace: Trace,
    pub nodes: usize,
}

pub fn init(f: &Formula, mode: Mode) -> Branch {
    let body = match mode {
        Mode::Prove => to_nnf(&Formula::not(f.clone())),
        Mode::Sat => to_nnf(f),
    };
    let root = Prefix::new(ROOT_NOMINAL, ROOT_NOMINAL);
    let mut b = Branch::empty(root.clone());
    b.add(
        NewFormula { prefix: root, body: Arc::new(body), is_accessibility: false },
        Origin { rule: Rule::Root, parents: vec![] },
    );
    b
}

enum Step {
    Closed(ClosureWitness),
    Saturated,
    Split(usize),
}

struct Engine {
    limits: Limits,
    nodes: usize,
    trace: Trace,
    next_branch: usize,
}

impl Engine {
    fn add(&mut self, b: &mut Branch, id: usize, nf: NewFormula, origin: Origin) -> Result<(), TableauError> {
        if let Some(seq) = b.add(nf, origin) {
            self.record(b, id, seq)?;
        }
        Ok(())
    }

    fn record(&mut self, b: &Branch, id: usize, seq: usize) -> Result<(), TableauError> {
        self.nodes += 1;
        if self.nodes > self.limits.max_nodes {
            return Err(TableauError::BudgetExceeded { limit: self.limits.max_nodes });
        }
        self.trace.events.push(TraceEvent::node(id, &b.formulas[seq]));
        Ok(())
    }

    /// Ref instances for nominals that appeared since the last call.
    fn pending_refs(b: &mut Branch, out: &mut Vec<RuleInstance>) {
        for (slot, sort) in [(0, Sort::NomA), (1, Sort::NomK)] {
            while b.ref_cursor[slot] < b.nominals(sort).len() {
                let n = b.nominals(sort)[b.ref_cursor[slot]].clone();
                b.ref_cursor[slot] += 1;
                let others: Vec<Name> = b.nominals(if slot == 0 { Sort::NomK } else { Sort::NomA }).to_vec();
                for o in others {
                    let p = if slot == 0 {
                        Prefix { agent: n.clone(), state: o }
                    } else {
                        Prefix { agent: o, state: n.clone() }
                    };
                    out.push(RuleInstance::RefA(p.clone()));
                    out.push(RuleInstance::RefK(p));
                }
            }
        }
    }

    /// Runs deterministic rules to exhaustion, then reports the next decision.
    fn run(&mut self, b: &mut Branch, id: usize) -> Result<Step, TableauError> {
        let mut insts = Vec::new();
        loop {
            if let Some(w) = b.witness() {
                return Ok(Step::Closed(w));
            }
            if b.cursor < b.len() {
                let i = b.cursor;
                b.cursor += 1;
                insts.clear();
                Self::pending_refs(b, &mut insts);
                rules::instances_for(b, i, &mut insts);
                for inst in &insts {
                    if inst.is_branching() || inst.is_generating() {
                        continue;
                    }
                    let outcome = rules::outcomes(b, inst).swap_remove(0);
                    for (nf, origin) in outcome {
                        self.add(b, id, nf, origin)?;
                    }
                    if b.witness().is_some() {
                        break;
                    }
                }
                continue;
            }
            if let Some(i) = first_open_disjunction(b) {
                return Ok(Step::Split(i));
            }
            let next = (0..b.len()).find(|&i| {
                matches!(*b.formulas[i].body, Formula::DiaA(_) | Formula::DiaK(_))
                    && rules::diamond_allowed(b, i)
            });
            match next {
                Some(i) => {
                    let inst = match *b.formulas[i].body {
                        Formula::DiaA(_) => RuleInstance::DiaA(i),
                        _ => RuleInstance::DiaK(i),
                    };
                    for seq in rules::fire_diamond(b, &inst) {
                        self.record(b, id, seq)?;
                    }
                }
                None => return Ok(Step::Saturated),
            }
        }
    }

    fn explore(&mut self, root: Branch, stop_at_open: bool) -> Result<Exploration, TableauError> {
        let mut out = Exploration::default();
        for seq in 0..root.len() {
            self.record(&root, 0, seq)?;
        }
        self.next_branch = 1;
        // each entry carries the disjunct still to be added to it
        let mut stack = vec![(root, 0usize, Vec::new())];
        while let Some((mut b, id, pending)) = stack.pop() {
            for (nf, origin) in pending {
                self.add(&mut b, id, nf, origin)?;
            }
            match self.run(&mut b, id)? {
                Step::Closed(w) => {
                    self.trace.events.push(TraceEvent::Closed {
                        branch: id,
                        clause: w.clause,
                        positive: w.positive,
                        negative: w.negative,
                    });
                    out.closed.push((b, w));
                }
                Step::Saturated => {
                    self.trace.events.push(TraceEvent::Saturated { branch: id });
                    out.open.push(b);
                    if stop_at_open {
                        break;
                    }
                }
                Step::Split(i) => {
                    let (left_id, right_id) = (self.next_branch, self.next_branch + 1);
                    self.next_branch += 2;
                    self.trace.events.push(TraceEvent::Split {
                        parent: id,
                        premise: i,
                        left: left_id,
                        right: right_id,
                    });
                    let mut sides = rules::outcomes(&b, &RuleInstance::Or(i));
                    let right_side = sides.pop().expect("two sides");
                    let left_side = sides.pop().expect("two sides");
                    stack.push((b.clone(), right_id, right_side));
                    stack.push((b, left_id, left_side));
                }
            }
        }
        out.nodes = self.nodes;
        out.trace = std::mem::take(&mut self.trace);
        Ok(out)
    }
}

fn first_open_disjunction(b: &Branch) -> Option<usize> {
    (0..b.len()).find(|&i| {
        matches!(*b.formulas[i].body, Formula::Or(..)) && !rules::is_redundant(b, &RuleInstance::Or(i))
    })
}

fn engine(limits: &Limits) -> Engine {
    Engine { limits: *limits, nodes: 0, trace: Trace::default(), next_branch: 0 }
}

/// Expands depth-first, left disjunct first, and stops at the first open
/// saturated branch.
pub fn expand(root: Branch, limits: &Limits) -> Result<TableauResult, TableauError> {
    let mut ex = engine(limits).explore(root, true)?;
    Ok(match ex.open.pop() {
        Some(b) => TableauResult::OpenSaturated(Box::new(b), ex.trace),
        None => TableauResult::AllClosed(ex.trace),
    })
}

/// Expands every branch, including those after the first open one.
pub fn expand_all(root: Branch, limits: &Limits) -> Result<Exploration, TableauError> {
    engine(limits).explore(root, false)
}

/// Whether no rule instance adds anything new.
pub fn is_saturated(b: &Branch) -> bool {
    rules::applicable_rules(b).is_empty()
}

pub fn generation_graph(b: &Branch) -> Vec<super::GenerationEdge> {
    b.edges.clone()
}

/// Largest body size under the prefix `(agent, state)`.
pub fn m_measure(b: &Branch, pair: &Prefix) -> Result<usize, TableauError> {
    b.at_prefix(pair)
        .iter()
        .map(|&i| b.formulas[i].body.size())
        .max()
        .ok_or_else(|| TableauError::NoSuchPrefix(pair.clone()))
}
