use std::fmt;

use serde::Serialize;

use super::branch::{ClosureClause, LabeledFormula, Rule};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum TraceEvent {
    /// A formula added to a branch.
    Node {
        branch: usize,
        seq: usize,
        rule: Rule,
        parents: Vec<usize>,
        agent: String,
        state: String,
        body: String,
        accessibility: bool,
    },
    /// Branch `parent` split on the disjunction at `premise`.
    Split { parent: usize, premise: usize, left: usize, right: usize },
    Closed { branch: usize, clause: ClosureClause, positive: usize, negative: usize },
    Saturated { branch: usize },
}

impl TraceEvent {
    pub(crate) fn node(branch: usize, lf: &LabeledFormula) -> Self {
        TraceEvent::Node {
            branch,
            seq: lf.seq,
            rule: lf.origin.rule,
            parents: lf.origin.parents.clone(),
            agent: lf.prefix.agent.to_string(),
            state: lf.prefix.state.to_string(),
            body: lf.body.to_string(),
            accessibility: lf.is_accessibility,
        }
    }
}

/// Record of a tableau run, in the order things happened.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Trace {
    pub events: Vec<TraceEvent>,
}

impl Trace {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes")
    }

    pub fn node_count(&self) -> usize {
        self.events.iter().filter(|e| matches!(e, TraceEvent::Node { .. })).count()
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut current = None;
        for ev in &self.events {
            match ev {
                TraceEvent::Node { branch, seq, rule, parents, agent, state, body, accessibility } => {
                    if current != Some(*branch) {
                        writeln!(f, "-- branch {branch}")?;
                        current = Some(*branch);
                    }
                    write!(f, "N{seq} [{rule}")?;
                    if !parents.is_empty() {
                        let ps: Vec<String> = parents.iter().map(|p| format!("N{p}")).collect();
                        write!(f, "<-{}", ps.join(","))?;
                    }
                    write!(f, "] @na_{agent} @nk_{state} {body}")?;
                    if *accessibility {
                        write!(f, " (acc)")?;
                    }
                    writeln!(f)?;
                }
                TraceEvent::Split { parent, premise, left, right } => {
                    writeln!(f, "-- branch {parent} splits on N{premise} into {left} and {right}")?;
                    current = None;
                }
                TraceEvent::Closed { branch, clause, positive, negative } => {
                    writeln!(f, "✕ (clause {clause}) N{positive}, N{negative} closes branch {branch}")?;
                    current = None;
                }
                TraceEvent::Saturated { branch } => {
                    writeln!(f, "○ branch {branch} is open and saturated")?;
                    current = None;
                }
            }
        }
        Ok(())
    }
}
