//! Embedding of multi-agent epistemic logic into agent-knowledge logic.
//!
//! Propositions become `PropK` atoms and agents become `NomA` nominals, with
//! `K_i φ` translated to `@i [K] φ`. Models convert in both directions: an
//! epistemic model becomes an AK model whose agents are the epistemic agents,
//! and an AK model becomes an epistemic model over its states.

mod el;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

pub use el::{eval_el, extension_el, parse_el, ElError, ElFormula, ElModel, ElModelJson};

use crate::relation::{FrameProperty, Relation};
use crate::semantics::{AkModel, Point};
use crate::syntax::{Atom, Formula, Name, Sort};
use crate::tableau::{self, ProofResult, TableauError, Trace};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EmbeddingError {
    #[error("no translation for {kind} `{name}`")]
    UnmappedSymbol { kind: &'static str, name: String },
    #[error("translation table maps two {kind}s to `{target}`")]
    NotInjective { kind: &'static str, target: String },
    #[error("agent `{0}` is not named by any world of the model")]
    UnnamedAgent(String),
    #[error("everybody-knows needs a nonempty group")]
    EmptyGroup,
    #[error(transparent)]
    Tableau(#[from] TableauError),
}

/// Injective maps from EL propositions to `PropK` names and from agents to `NomA` names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TranslationTable {
    props: BTreeMap<Name, Name>,
    agents: BTreeMap<Name, Name>,
}

impl TranslationTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Identity naming `p ↦ pk_p`, `i ↦ na_i` for every symbol of `f`.
    pub fn auto_for(f: &ElFormula) -> Self {
        Self::auto(f.props(), f.agents())
    }

    pub fn auto<P, A>(props: P, agents: A) -> Self
    where
        P: IntoIterator,
        P::Item: AsRef<str>,
        A: IntoIterator,
        A::Item: AsRef<str>,
    {
        let mut t = Self::new();
        for p in props {
            t.insert_prop(p.as_ref(), p.as_ref()).expect("identity is injective");
        }
        for a in agents {
            t.insert_agent(a.as_ref(), a.as_ref()).expect("identity is injective");
        }
        t
    }

    /// Maps EL proposition `p` to the `PropK` atom named `target`.
    pub fn insert_prop(&mut self, p: &str, target: &str) -> Result<(), EmbeddingError> {
        insert_injective(&mut self.props, "proposition", p, target)
    }

    /// Maps agent `i` to the `NomA` nominal named `target`.
    pub fn insert_agent(&mut self, i: &str, target: &str) -> Result<(), EmbeddingError> {
        insert_injective(&mut self.agents, "agent", i, target)
    }

    pub fn prop(&self, p: &str) -> Result<&Name, EmbeddingError> {
        self.props
            .get(p)
            .ok_or_else(|| EmbeddingError::UnmappedSymbol { kind: "proposition", name: p.to_string() })
    }

    pub fn agent(&self, i: &str) -> Result<&Name, EmbeddingError> {
        self.agents
            .get(i)
            .ok_or_else(|| EmbeddingError::UnmappedSymbol { kind: "agent", name: i.to_string() })
    }

    pub fn props(&self) -> &BTreeMap<Name, Name> {
        &self.props
    }

    pub fn agents(&self) -> &BTreeMap<Name, Name> {
        &self.agents
    }
}

fn insert_injective(
    map: &mut BTreeMap<Name, Name>,
    kind: &'static str,
    from: &str,
    to: &str,
) -> Result<(), EmbeddingError> {
    if map.iter().any(|(k, v)| &**v == to && &**k != from) {
        return Err(EmbeddingError::NotInjective { kind, target: to.to_string() });
    }
    map.insert(Arc::from(from), Arc::from(to));
    Ok(())
}

/// `T(p) = p_K`, `T(¬φ) = ¬T(φ)`, `T(φ ∧ ψ) = T(φ) ∧ T(ψ)`, `T(K_i φ) = @_{T(i)} □_K T(φ)`.
pub fn translate(t: &TranslationTable, f: &ElFormula) -> Result<Formula, EmbeddingError> {
    Ok(match f {
        ElFormula::Prop(p) => Formula::prop_k(&**t.prop(p)?),
        ElFormula::Not(g) => Formula::not(translate(t, g)?),
        ElFormula::And(l, r) => Formula::and(translate(t, l)?, translate(t, r)?),
        ElFormula::Know(i, g) => Formula::at_a(&**t.agent(i)?, Formula::box_k(translate(t, g)?)),
    })
}

/// Index of the lexicographically least world id, used as the common denotation of state nominals.
pub fn base_world(m: &ElModel) -> usize {
    (0..m.worlds().len()).min_by_key(|&i| &m.worlds()[i]).expect("W is nonempty")
}

/// The AK model induced by an epistemic model: agents are the model's agents
/// together with the table's, states are the worlds, `S_i = R_i`, every `R_y`
/// is empty. Agents not related in `m` get an empty `S`.
pub fn induce_ak(m: &ElModel, t: &TranslationTable) -> AkModel {
    induce_ak_with(m, t, std::iter::empty::<&str>())
}

/// As [`induce_ak`], additionally valuing the given `NomK` names at the base world.
pub fn induce_ak_with<I, S>(m: &ElModel, t: &TranslationTable, state_nominals: I) -> AkModel
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let agents: BTreeSet<Name> = m.agents().cloned().chain(t.agents().keys().cloned()).collect();
    let mut ak = AkModel::new(agents.iter().map(|a| a.to_string()), m.worlds().iter().cloned())
        .expect("agents and worlds are distinct and nonempty");
    for (x, agent) in agents.iter().enumerate() {
        if let Some(rel) = m.relation(agent) {
            *ak.s_mut(x) = rel.clone();
        }
    }
    for (p, target) in t.props() {
        let ext = m.valuation(p).cloned().unwrap_or_default();
        ak.set_valuation_ix(&Atom::new(Sort::PropK, &**target), ext);
    }
    for (i, target) in t.agents() {
        let x = ak.agent_index(i).expect("agent is a world");
        ak.set_valuation_ix(&Atom::new(Sort::NomA, &**target), BTreeSet::from([x]));
    }
    let y0 = base_world(m);
    for k in state_nominals {
        ak.set_valuation_ix(&Atom::new(Sort::NomK, k.as_ref()), BTreeSet::from([y0]));
    }
    ak
}

/// The epistemic model induced by an AK model: worlds are the states and
/// `R_i` is the `S` relation of the agent denoted by `T(i)`.
pub fn induce_el<I, S>(m: &AkModel, t: &TranslationTable, agents: I) -> Result<ElModel, EmbeddingError>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let agents: Vec<String> = agents.into_iter().map(|a| a.as_ref().to_string()).collect();
    let mut el = ElModel::new(m.states().iter().cloned(), &agents).expect("W_K is nonempty and distinct");
    for i in &agents {
        let nominal = Atom::from_name(Sort::NomA, t.agent(i)?.clone());
        let x = m.denotation(&nominal).ok_or_else(|| EmbeddingError::UnnamedAgent(i.clone()))?;
        el.set_relation(i, m.s(x).clone());
    }
    for (p, target) in t.props() {
        if let Some(ext) = m.valuation(&Atom::from_name(Sort::PropK, target.clone())) {
            el.set_valuation_ix(p, ext.clone());
        }
    }
    Ok(el)
}

#[derive(Clone, Debug)]
pub enum ElProof {
    Proved(Trace),
    Refuted {
        ak_model: AkModel,
        point: Point,
        /// The countermodel read back into epistemic logic; `world` falsifies the formula.
        el_model: Option<ElModel>,
        world: usize,
        trace: Trace,
    },
}

impl ElProof {
    pub fn is_proved(&self) -> bool {
        matches!(self, ElProof::Proved(_))
    }
}

/// Decides EL validity by proving the translation.
pub fn prove_el(f: &ElFormula, t: &TranslationTable) -> Result<ElProof, EmbeddingError> {
    let ak = translate(t, f)?;
    Ok(match tableau::prove(&ak)? {
        ProofResult::Proved(trace) => ElProof::Proved(trace),
        ProofResult::Refuted { model, point, trace, .. } => {
            let el_model = induce_el(&model, t, f.agents()).ok().map(|mut el| {
                // propositions of f that the tableau never valued are false everywhere
                for p in f.props() {
                    if el.valuation(&p).is_none() {
                        el.set_valuation_ix(&*p, BTreeSet::new());
                    }
                }
                el
            });
            ElProof::Refuted { ak_model: model, point, el_model, world: point.y, trace }
        }
    })
}

/// `E_G φ` as the conjunction of `@_{T(i)} □_K T(φ)` over `i ∈ G`, in sorted agent order.
pub fn everybody_knows<I, S>(t: &TranslationTable, group: I, f: &ElFormula) -> Result<Formula, EmbeddingError>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let group: BTreeSet<String> = group.into_iter().map(|a| a.as_ref().to_string()).collect();
    let body = translate(t, f)?;
    let conjuncts = group
        .iter()
        .map(|i| Ok(Formula::at_a(&**t.agent(i)?, Formula::box_k(body.clone()))))
        .collect::<Result<Vec<_>, EmbeddingError>>()?;
    Formula::conjunction(conjuncts).ok_or(EmbeddingError::EmptyGroup)
}

/// Whether every agent's relation with `prop` in `m` keeps it as `S_i` in the induced AK model.
pub fn alpha_preserves(m: &ElModel, t: &TranslationTable, prop: FrameProperty) -> bool {
    let ak = induce_ak(m, t);
    m.agents().all(|i| {
        let rel: &Relation = m.relation(i).expect("listed agent");
        let x = ak.agent_index(i).expect("agent is a world");
        !rel.has(prop) || ak.s(x).has(prop)
    })
}

/// Whether an `S` family having `prop` everywhere yields `R_i` with `prop` for every named agent.
pub fn beta_preserves<I, S>(
    m: &AkModel,
    t: &TranslationTable,
    agents: I,
    prop: FrameProperty,
) -> Result<bool, EmbeddingError>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let agents: Vec<String> = agents.into_iter().map(|a| a.as_ref().to_string()).collect();
    let el = induce_el(m, t, &agents)?;
    let family_has = (0..m.agents().len()).all(|x| m.s(x).has(prop));
    Ok(!family_has || agents.iter().all(|i| el.relation(i).expect("induced").has(prop)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{eval, frame_property, Family};

    fn el(s: &str) -> ElFormula {
        parse_el(s).unwrap()
    }

    #[test]
    fn translation_examples() {
        let f = el("K i (p & K j ~q)");
        let t = TranslationTable::auto_for(&f);
        assert_eq!(translate(&t, &f).unwrap().to_string(), "@na_i [K] (pk_p & @na_j [K] ~pk_q)");
        assert_eq!(translate(&t, &el("p")).unwrap().to_string(), "pk_p");
        assert_eq!(translate(&t, &el("~K i p")).unwrap().to_string(), "~@na_i [K] pk_p");
        assert!(matches!(
            translate(&t, &el("K z p")),
            Err(EmbeddingError::UnmappedSymbol { kind: "agent", .. })
        ));
    }

    #[test]
    fn custom_table_must_be_injective() {
        let mut t = TranslationTable::new();
        t.insert_agent("i", "alice").unwrap();
        assert!(t.insert_agent("j", "alice").is_err());
        t.insert_prop("p", "rain").unwrap();
        assert_eq!(translate(&t, &el("K i p")).unwrap().to_string(), "@na_alice [K] pk_rain");
    }

    #[test]
    fn alpha_model() {
        let mut m = ElModel::new(["w"], ["i"]).unwrap();
        m.set_valuation("p", ["w"]).unwrap();
        let t = TranslationTable::auto(["p"], ["i"]);
        let ak = induce_ak(&m, &t);
        assert_eq!(ak.agents(), ["i"]);
        assert_eq!(ak.states(), ["w"]);
        assert!(ak.s(0).is_empty() && ak.r(0).is_empty());

        let mut m = ElModel::new(["w", "v"], ["i"]).unwrap();
        m.set_valuation("p", ["w"]).unwrap();
        m.set_relation("i", Relation::total(2));
        let ak = induce_ak_with(&m, &t, ["k"]);
        assert_eq!(ak.s(0), &Relation::total(2));
        assert_eq!(ak.denotation(&Atom::new(Sort::NomK, "k")), Some(1)); // "v" < "w"
        let f = el("K i p");
        for w in 0..2 {
            let pt = Point { x: 0, y: w };
            assert_eq!(eval_el(&m, w, &f).unwrap(), eval(&ak, pt, &translate(&t, &f).unwrap()).unwrap());
        }
    }

    #[test]
    fn beta_model() {
        let t = TranslationTable::auto(["p"], ["i"]);
        let mut ak = AkModel::new(["x"], ["y"]).unwrap();
        ak.add_s("x", "y", "y").unwrap();
        ak.set_valuation(&Atom::new(Sort::NomA, "i"), ["x"]).unwrap();
        let m = induce_el(&ak, &t, ["i"]).unwrap();
        assert_eq!(m.relation("i").unwrap().pairs().collect::<Vec<_>>(), vec![(0, 0)]);

        let unnamed = AkModel::new(["x"], ["y"]).unwrap();
        assert_eq!(induce_el(&unnamed, &t, ["i"]), Err(EmbeddingError::UnnamedAgent("i".into())));
    }

    #[test]
    fn proving_through_the_translation() {
        let f = el("K i p");
        let t = TranslationTable::auto_for(&f);
        match prove_el(&f, &t).unwrap() {
            ElProof::Refuted { el_model: Some(m), world, .. } => assert!(!eval_el(&m, world, &f).unwrap()),
            other => panic!("expected a refutation, got {other:?}"),
        }
        let f = el("K i (p & q) -> K i p");
        assert!(prove_el(&f, &TranslationTable::auto_for(&f)).unwrap().is_proved());
        let f = el("p | ~p");
        assert!(prove_el(&f, &TranslationTable::auto_for(&f)).unwrap().is_proved());
    }

    #[test]
    fn everybody_knows_expansion() {
        let t = TranslationTable::auto(["p"], ["i", "j"]);
        let p = el("p");
        assert_eq!(everybody_knows(&t, ["i"], &p).unwrap().to_string(), "@na_i [K] pk_p");
        assert_eq!(
            everybody_knows(&t, ["j", "i"], &p).unwrap().to_string(),
            "@na_i [K] pk_p & @na_j [K] pk_p"
        );
        assert_eq!(everybody_knows(&t, Vec::<&str>::new(), &p), Err(EmbeddingError::EmptyGroup));
    }

    #[test]
    fn frame_properties_carry_over() {
        let t = TranslationTable::auto(["p"], ["i"]);
        let mut m = ElModel::new(["w", "v"], ["i"]).unwrap();
        m.set_relation("i", Relation::identity(2));
        assert!(alpha_preserves(&m, &t, FrameProperty::Reflexive));
        assert!(frame_property(&induce_ak(&m, &t), Family::S, FrameProperty::Reflexive));

        let mut ak = AkModel::new(["x"], ["y", "z"]).unwrap();
        *ak.s_mut(0) = Relation::total(2);
        ak.set_valuation(&Atom::new(Sort::NomA, "i"), ["x"]).unwrap();
        assert!(beta_preserves(&ak, &t, ["i"], FrameProperty::Transitive).unwrap());
        assert!(induce_el(&ak, &t, ["i"]).unwrap().relation("i").unwrap().is_equivalence());

        let empty = ElModel::new(["w"], ["i"]).unwrap();
        assert!(!induce_ak(&empty, &t).s(0).has(FrameProperty::Serial));
    }
}
