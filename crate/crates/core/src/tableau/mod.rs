//! Prefixed tableau calculus: branches, rules, a deterministic expansion
//! strategy and the prove / satisfiable entry points.

mod branch;
mod expand;
mod rules;
mod trace;

pub use branch::{
    is_closed, Branch, BranchStatus, ClosureClause, ClosureWitness, GenerationEdge, LabeledFormula, Origin,
    Prefix, Rule,
};
pub use expand::{
    expand, expand_all, generation_graph, init, is_saturated, m_measure, Exploration, Limits, Mode,
    TableauResult, ROOT_NOMINAL,
};
pub use rules::{applicable_rules, apply, RuleInstance};
pub(crate) use rules::urfathers as urfather_map;
pub use trace::{Trace, TraceEvent};

use crate::extraction::{extract_model, ExtractionError};
use crate::semantics::{eval, AkModel, Point};
use crate::syntax::Formula;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TableauError {
    #[error("node budget of {limit} formula additions exceeded")]
    BudgetExceeded { limit: usize },
    #[error("no formula has prefix {0}")]
    NoSuchPrefix(Prefix),
    #[error("`{0}` uses the reserved name prefix `_`")]
    ReservedName(String),
    #[error("model extraction failed: {0}")]
    Extraction(#[from] ExtractionError),
    /// The extracted model does not behave as the open branch says it must.
    #[error("extracted model fails verification: {0}")]
    Verification(String),
}

#[derive(Clone, Debug)]
pub enum ProofResult {
    Proved(Trace),
    Refuted { model: AkModel, point: Point, trace: Trace, branch: Box<Branch> },
}

impl ProofResult {
    pub fn is_proved(&self) -> bool {
        matches!(self, ProofResult::Proved(_))
    }

    pub fn trace(&self) -> &Trace {
        match self {
            ProofResult::Proved(t) | ProofResult::Refuted { trace: t, .. } => t,
        }
    }
}

#[derive(Clone, Debug)]
pub enum SatResult {
    Unsat(Trace),
    Sat { model: AkModel, point: Point, trace: Trace, branch: Box<Branch> },
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatResult::Sat { .. })
    }

    pub fn trace(&self) -> &Trace {
        match self {
            SatResult::Unsat(t) | SatResult::Sat { trace: t, .. } => t,
        }
    }
}

fn check_names(f: &Formula) -> Result<(), TableauError> {
    let mut bad = None;
    f.visit_atoms(&mut |a| {
        if a.is_reserved() && bad.is_none() {
            bad = Some(a.to_string());
        }
    });
    bad.map_or(Ok(()), |n| Err(TableauError::ReservedName(n)))
}

pub fn prove(f: &Formula) -> Result<ProofResult, TableauError> {
    prove_with(f, &Limits::default())
}

pub fn prove_with(f: &Formula, limits: &Limits) -> Result<ProofResult, TableauError> {
    check_names(f)?;
    match expand(init(f, Mode::Prove), limits)? {
        TableauResult::AllClosed(trace) => Ok(ProofResult::Proved(trace)),
        TableauResult::OpenSaturated(branch, trace) => {
            let (model, point) = extract_model(&branch)?;
            match eval(&model, point, f) {
                Ok(false) => Ok(ProofResult::Refuted { model, point, trace, branch }),
                Ok(true) => Err(TableauError::Verification("countermodel satisfies the formula".into())),
                Err(e) => Err(TableauError::Verification(e.to_string())),
            }
        }
    }
}

pub fn satisfiable(f: &Formula) -> Result<SatResult, TableauError> {
    satisfiable_with(f, &Limits::default())
}

pub fn satisfiable_with(f: &Formula, limits: &Limits) -> Result<SatResult, TableauError> {
    check_names(f)?;
    match expand(init(f, Mode::Sat), limits)? {
        TableauResult::AllClosed(trace) => Ok(SatResult::Unsat(trace)),
        TableauResult::OpenSaturated(branch, trace) => {
            let (model, point) = extract_model(&branch)?;
            match eval(&model, point, f) {
                Ok(true) => Ok(SatResult::Sat { model, point, trace, branch }),
                Ok(false) => Err(TableauError::Verification("extracted model falsifies the formula".into())),
                Err(e) => Err(TableauError::Verification(e.to_string())),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, Sort};

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    const FRIEND: &str = "<A> na_a & @na_a [K] pk_p -> <A> [K] pk_p";

    #[test]
    fn init_roots() {
        let b = init(&f("pk_p"), Mode::Prove);
        assert_eq!(b.root_formula().to_string(), "@na__g0 @nk__g0 ~pk_p");
        let b = init(&f(FRIEND), Mode::Prove);
        assert_eq!(b.root_formula().body.to_string(), "<A> na_a & @na_a [K] pk_p & [A] <K> ~pk_p");
        let b = init(&f("pk_p & ~pk_p"), Mode::Sat);
        assert_eq!(b.root_formula().body.to_string(), "pk_p & ~pk_p");
        assert_eq!(b.intro_order(Sort::NomA, "_g0"), Some(0));
        assert_eq!(b.intro_order(Sort::NomK, "_g0"), Some(1));
    }

    #[test]
    fn applicable_rules_respect_side_conditions() {
        let b = Branch::from_formulas([("a", "k", f("pk_p & pa_q"), false)]);
        let rules = applicable_rules(&b);
        assert_eq!(rules.iter().filter(|r| matches!(r, RuleInstance::And(_))).count(), 1);

        let b = Branch::from_formulas([("a", "k", f("[A] pk_p"), false)]);
        assert!(!applicable_rules(&b).iter().any(|r| matches!(r, RuleInstance::BoxA { .. })));
        // a diamond-shaped formula that is not an accessibility formula is no minor premise
        let b = Branch::from_formulas([("a", "k", f("[A] pk_p"), false), ("a", "k", f("<A> na_b"), false)]);
        assert!(!applicable_rules(&b).iter().any(|r| matches!(r, RuleInstance::BoxA { .. })));
        let b = Branch::from_formulas([("a", "k", f("[A] pk_p"), false), ("a", "k", f("<A> na_b"), true)]);
        assert!(applicable_rules(&b).iter().any(|r| matches!(r, RuleInstance::BoxA { major: 0, access: 1 })));

        let b = Branch::from_formulas([("a", "k", f("<A> pk_p"), false)]);
        let fired = apply(&b, &RuleInstance::DiaA(0)).pop().unwrap();
        assert!(!applicable_rules(&fired).iter().any(|r| matches!(r, RuleInstance::DiaA(_))));
    }

    #[test]
    fn diamond_and_identity_rules() {
        let b = Branch::from_formulas([("_g0", "_g0", f("<A> na_a"), false)]);
        let after = apply(&b, &RuleInstance::DiaA(0)).pop().unwrap();
        let added: Vec<String> = after.formulas()[1..].iter().map(|lf| lf.to_string()).collect();
        assert_eq!(added, ["@na__g0 @nk__g0 <A> na__g1", "@na__g1 @nk__g0 na_a"]);
        assert!(after.formulas()[1].is_accessibility);
        assert_eq!(generation_graph(&after)[0].child, Prefix::new("_g1", "_g0"));

        let b = Branch::from_formulas([
            ("a", "_g0", f("pa_p"), false),
            ("_g1", "_g0", f("na_a"), false),
            ("_g1", "_g0", f("<K> ~pk_p"), false),
        ]);
        let inst = RuleInstance::IdA { equality: 1, premise: 2 };
        assert!(applicable_rules(&b).contains(&inst));
        let after = apply(&b, &inst).pop().unwrap();
        assert_eq!(after.formulas()[3].to_string(), "@na_a @nk__g0 <K> ~pk_p");

        // only equalities flow away from the urfather
        let b = Branch::from_formulas([
            ("a", "_g0", f("pa_p"), false),
            ("a", "_g0", f("na__g1"), false),
            ("a", "_g0", f("na_a"), false),
        ]);
        let rules = applicable_rules(&b);
        assert!(!rules.contains(&RuleInstance::IdA { equality: 1, premise: 0 }));
        assert!(rules.contains(&RuleInstance::IdA { equality: 1, premise: 2 }));

        // accessibility formulas are never copied
        let b = Branch::from_formulas([
            ("a", "_g0", f("pa_p"), false),
            ("_g1", "_g0", f("na_a"), false),
            ("_g1", "_g0", f("<K> nk_l"), true),
        ]);
        assert!(!applicable_rules(&b).iter().any(|r| matches!(r, RuleInstance::IdA { premise: 2, .. })));
    }

    #[test]
    fn disjunction_splits() {
        let b = Branch::from_formulas([("a", "k", f("pk_p | pa_q"), false)]);
        let out = apply(&b, &RuleInstance::Or(0));
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].formulas()[1].body.to_string(), "pk_p");
        assert_eq!(out[1].formulas()[1].body.to_string(), "pa_q");
    }

    #[test]
    fn expansion_verdicts() {
        let lim = Limits::default();
        assert!(expand(init(&f(FRIEND), Mode::Prove), &lim).unwrap().is_closed());
        assert!(!expand(init(&f("@na_a [K] pk_p -> pk_p"), Mode::Prove), &lim).unwrap().is_closed());
        assert!(expand(init(&f("pk_p & ~pk_p"), Mode::Sat), &lim).unwrap().is_closed());
    }

    #[test]
    fn prove_and_satisfiable() {
        assert!(prove(&f(FRIEND)).unwrap().is_proved());
        assert!(prove(&f("pk_p | ~pk_p")).unwrap().is_proved());
        match prove(&f("@na_a [K] pk_p -> pk_p")).unwrap() {
            ProofResult::Refuted { model, point, .. } => {
                assert!(!eval(&model, point, &f("@na_a [K] pk_p -> pk_p")).unwrap());
                assert!((0..model.agents().len()).all(|x| model.s(x).is_empty()));
            }
            ProofResult::Proved(_) => panic!("T is not valid"),
        }
        assert!(!satisfiable(&f("pk_p & ~pk_p")).unwrap().is_sat());
        assert!(satisfiable(&f("@na_a [K] pk_p & ~pk_p")).unwrap().is_sat());
        match satisfiable(&f("<K> pk_p")).unwrap() {
            SatResult::Sat { model, point, .. } => assert_eq!(model.s(point.x).pairs().count(), 1),
            SatResult::Unsat(_) => panic!("satisfiable"),
        }
        assert!(matches!(prove(&f("pk__x")), Err(TableauError::ReservedName(_))));
    }

    #[test]
    fn budget_is_an_error() {
        let r = prove_with(&f(FRIEND), &Limits { max_nodes: 3 });
        assert_eq!(r.unwrap_err(), TableauError::BudgetExceeded { limit: 3 });
    }

    #[test]
    fn measure() {
        let b = Branch::from_formulas([("a", "k", f("pk_p"), false)]);
        assert_eq!(m_measure(&b, &Prefix::new("a", "k")), Ok(1));
        let b = Branch::from_formulas([("a", "k", f("pk_p"), false), ("a", "k", f("<K> ~pk_p"), false)]);
        assert_eq!(m_measure(&b, &Prefix::new("a", "k")), Ok(3));
        assert!(matches!(m_measure(&b, &Prefix::new("b", "k")), Err(TableauError::NoSuchPrefix(_))));
        let b = Branch::from_formulas([("a", "k", f("pk_p"), false)]);
        assert!(generation_graph(&b).is_empty());
    }

    #[test]
    fn trace_text_and_json() {
        let r = prove(&f(FRIEND)).unwrap();
        let text = r.trace().to_string();
        assert!(text.starts_with("-- branch 0\nN0 [root] @na__g0 @nk__g0 "), "{text}");
        assert!(text.contains("✕ (clause"));
        assert!(text.contains("(acc)"));
        let json: serde_json::Value = serde_json::from_str(&r.trace().to_json()).unwrap();
        assert_eq!(json["events"][0]["event"], "node");
    }
}
