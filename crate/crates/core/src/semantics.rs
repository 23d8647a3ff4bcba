//! Two-dimensional Kripke models and the satisfaction relation.
//!
//! A model has a set of agents `W_A` and a set of epistemic states `W_K`.
//! Every state `y` carries a relation `R_y` on agents, every agent `x` a
//! relation `S_x` on states. Formulas are evaluated at points `(x, y)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::relation::{FrameProperty, Relation};
use crate::syntax::{Atom, Formula, Name, Sort};

/// Index-based evaluation point into a model's `W_A × W_K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: usize,
    pub y: usize,
}

/// Which relation family a frame property is checked on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `R_y` on agents, one per state.
    R,
    /// `S_x` on states, one per agent.
    S,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Diagnostic {
    #[error("{0} is empty")]
    EmptyDomain(&'static str),
    #[error("nominal {0} must denote exactly one world")]
    NominalNotSingleton(String),
    #[error("duplicate world id `{0}`")]
    DuplicateWorld(String),
    #[error("unknown world `{world}` in {context}")]
    UnknownWorld { world: String, context: String },
    #[error("valuation key `{key}` is not a {expected} identifier")]
    BadValuationKey { key: String, expected: &'static str },
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("atom {0} has no valuation in the model")]
    UnvaluedAtom(String),
    #[error("nominal {0} does not denote exactly one world")]
    NominalNotSingleton(String),
    #[error("point is outside the model")]
    PointOutOfRange,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AkModel {
    agents: Vec<String>,
    states: Vec<String>,
    agent_ix: HashMap<String, usize>,
    state_ix: HashMap<String, usize>,
    r: Vec<Relation>,
    s: Vec<Relation>,
    valuation: [BTreeMap<Name, BTreeSet<usize>>; 4],
}

fn sort_slot(sort: Sort) -> usize {
    match sort {
        Sort::PropA => 0,
        Sort::PropK => 1,
        Sort::NomA => 2,
        Sort::NomK => 3,
    }
}

fn index_ids(ids: &[String]) -> Result<HashMap<String, usize>, Diagnostic> {
    let mut ix = HashMap::with_capacity(ids.len());
    for (i, id) in ids.iter().enumerate() {
        if ix.insert(id.clone(), i).is_some() {
            return Err(Diagnostic::DuplicateWorld(id.clone()));
        }
    }
    Ok(ix)
}

impl AkModel {
    /// A model with the given worlds, empty relations and no valuation.
    pub fn new<A, K>(agents: A, states: K) -> Result<Self, Diagnostic>
    where
        A: IntoIterator,
        A::Item: Into<String>,
        K: IntoIterator,
        K::Item: Into<String>,
    {
        let agents: Vec<String> = agents.into_iter().map(Into::into).collect();
        let states: Vec<String> = states.into_iter().map(Into::into).collect();
        let agent_ix = index_ids(&agents)?;
        let state_ix = index_ids(&states)?;
        let (na, nk) = (agents.len(), states.len());
        Ok(AkModel {
            agents,
            states,
            agent_ix,
            state_ix,
            r: vec![Relation::empty(na); nk],
            s: vec![Relation::empty(nk); na],
            valuation: Default::default(),
        })
    }

    pub fn agents(&self) -> &[String] {
        &self.agents
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn agent_index(&self, id: &str) -> Option<usize> {
        self.agent_ix.get(id).copied()
    }

    pub fn state_index(&self, id: &str) -> Option<usize> {
        self.state_ix.get(id).copied()
    }

    pub fn point(&self, agent: &str, state: &str) -> Option<Point> {
        Some(Point { x: self.agent_index(agent)?, y: self.state_index(state)? })
    }

    pub fn point_names(&self, pt: Point) -> (&str, &str) {
        (&self.agents[pt.x], &self.states[pt.y])
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.agents.len())
            .flat_map(move |x| (0..self.states.len()).map(move |y| Point { x, y }))
    }

    /// `R_y`: the agent relation at state `y`.
    pub fn r(&self, y: usize) -> &Relation {
        &self.r[y]
    }

    /// `S_x`: the state relation of agent `x`.
    pub fn s(&self, x: usize) -> &Relation {
        &self.s[x]
    }

    pub fn r_mut(&mut self, y: usize) -> &mut Relation {
        &mut self.r[y]
    }

    pub fn s_mut(&mut self, x: usize) -> &mut Relation {
        &mut self.s[x]
    }

    /// Adds `x R_y x2`, by world ids.
    pub fn add_r(&mut self, y: &str, x: &str, x2: &str) -> Result<(), Diagnostic> {
        let yi = self.lookup_state(y, "R")?;
        let xi = self.lookup_agent(x, "R")?;
        let x2i = self.lookup_agent(x2, "R")?;
        self.r[yi].insert(xi, x2i);
        Ok(())
    }

    /// Adds `y S_x y2`, by world ids.
    pub fn add_s(&mut self, x: &str, y: &str, y2: &str) -> Result<(), Diagnostic> {
        let xi = self.lookup_agent(x, "S")?;
        let yi = self.lookup_state(y, "S")?;
        let y2i = self.lookup_state(y2, "S")?;
        self.s[xi].insert(yi, y2i);
        Ok(())
    }

    fn lookup_agent(&self, id: &str, context: &str) -> Result<usize, Diagnostic> {
        self.agent_index(id).ok_or_else(|| Diagnostic::UnknownWorld {
            world: id.to_string(),
            context: context.to_string(),
        })
    }

    fn lookup_state(&self, id: &str, context: &str) -> Result<usize, Diagnostic> {
        self.state_index(id).ok_or_else(|| Diagnostic::UnknownWorld {
            world: id.to_string(),
            context: context.to_string(),
        })
    }

    /// Sets the extension of an atom, by world ids of the atom's axis.
    pub fn set_valuation<I, S>(&mut self, atom: &Atom, worlds: I) -> Result<(), Diagnostic>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut set = BTreeSet::new();
        for w in worlds {
            let w = w.as_ref();
            let ix = if atom.sort().is_agent_side() {
                self.lookup_agent(w, &atom.to_string())?
            } else {
                self.lookup_state(w, &atom.to_string())?
            };
            set.insert(ix);
        }
        self.set_valuation_ix(atom, set);
        Ok(())
    }

    /// Sets the extension of an atom by world indices. Panics on out-of-range indices.
    pub fn set_valuation_ix(&mut self, atom: &Atom, worlds: BTreeSet<usize>) {
        let bound = if atom.sort().is_agent_side() { self.agents.len() } else { self.states.len() };
        assert!(worlds.iter().all(|&w| w < bound), "valuation index out of range");
        self.valuation[sort_slot(atom.sort())].insert(atom.name().clone(), worlds);
    }

    pub fn valuation(&self, atom: &Atom) -> Option<&BTreeSet<usize>> {
        self.valuation[sort_slot(atom.sort())].get(atom.name())
    }

    /// All valued atoms of one sort with their extensions.
    pub fn valuations(&self, sort: Sort) -> &BTreeMap<Name, BTreeSet<usize>> {
        &self.valuation[sort_slot(sort)]
    }

    /// Denotation of a nominal, if it is valued as a singleton.
    pub fn denotation(&self, nominal: &Atom) -> Option<usize> {
        let set = self.valuation(nominal)?;
        (set.len() == 1).then(|| *set.first().expect("singleton"))
    }

    fn nominal_world(&self, sort: Sort, name: &Name) -> usize {
        *self.valuation[sort_slot(sort)][name].first().expect("checked nominal")
    }

    fn check_atoms(&self, f: &Formula) -> Result<(), EvalError> {
        let mut err = None;
        f.visit_atoms(&mut |a| {
            if err.is_some() {
                return;
            }
            match self.valuation(a) {
                None => err = Some(EvalError::UnvaluedAtom(a.to_string())),
                Some(set) if a.sort().is_nominal() && set.len() != 1 => {
                    err = Some(EvalError::NominalNotSingleton(a.to_string()))
                }
                Some(_) => {}
            }
        });
        err.map_or(Ok(()), Err)
    }

    /// Satisfaction by the inductive clauses; atoms are assumed valued.
    fn holds(&self, pt: Point, f: &Formula) -> bool {
        match f {
            Formula::Atom(a) => {
                let set = &self.valuation[sort_slot(a.sort())][a.name()];
                let w = if a.sort().is_agent_side() { pt.x } else { pt.y };
                set.contains(&w)
            }
            Formula::Not(g) => !self.holds(pt, g),
            Formula::And(l, r) => self.holds(pt, l) && self.holds(pt, r),
            Formula::Or(l, r) => self.holds(pt, l) || self.holds(pt, r),
            Formula::Implies(l, r) => !self.holds(pt, l) || self.holds(pt, r),
            Formula::BoxA(g) => self.r[pt.y]
                .successors(pt.x)
                .iter()
                .all(|&x2| self.holds(Point { x: x2, y: pt.y }, g)),
            Formula::DiaA(g) => self.r[pt.y]
                .successors(pt.x)
                .iter()
                .any(|&x2| self.holds(Point { x: x2, y: pt.y }, g)),
            Formula::BoxK(g) => self.s[pt.x]
                .successors(pt.y)
                .iter()
                .all(|&y2| self.holds(Point { x: pt.x, y: y2 }, g)),
            Formula::DiaK(g) => self.s[pt.x]
                .successors(pt.y)
                .iter()
                .any(|&y2| self.holds(Point { x: pt.x, y: y2 }, g)),
            Formula::AtA(n, g) => {
                self.holds(Point { x: self.nominal_world(Sort::NomA, n), y: pt.y }, g)
            }
            Formula::AtK(n, g) => {
                self.holds(Point { x: pt.x, y: self.nominal_world(Sort::NomK, n) }, g)
            }
        }
    }
}

/// Lists every violated model invariant; empty iff the model is well formed.
pub fn validate_model(m: &AkModel) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if m.agents.is_empty() {
        out.push(Diagnostic::EmptyDomain("W_A"));
    }
    if m.states.is_empty() {
        out.push(Diagnostic::EmptyDomain("W_K"));
    }
    for sort in [Sort::NomA, Sort::NomK] {
        for (name, set) in m.valuations(sort) {
            if set.len() != 1 {
                out.push(Diagnostic::NominalNotSingleton(format!("{}{name}", sort.prefix())));
            }
        }
    }
    out
}

/// Truth of `f` at `pt`.
pub fn eval(m: &AkModel, pt: Point, f: &Formula) -> Result<bool, EvalError> {
    if pt.x >= m.agents.len() || pt.y >= m.states.len() {
        return Err(EvalError::PointOutOfRange);
    }
    m.check_atoms(f)?;
    Ok(m.holds(pt, f))
}

/// Truth of `f` at every point, in the order of [`AkModel::points`].
pub fn extension(m: &AkModel, f: &Formula) -> Result<Vec<bool>, EvalError> {
    m.check_atoms(f)?;
    Ok(m.points().map(|pt| m.holds(pt, f)).collect())
}

/// Truth of `f` at every point of `m`.
pub fn valid_on_model(m: &AkModel, f: &Formula) -> Result<bool, EvalError> {
    m.check_atoms(f)?;
    Ok(m.points().all(|pt| m.holds(pt, f)))
}

/// Whether every relation of the chosen family has `prop`.
pub fn frame_property(m: &AkModel, family: Family, prop: FrameProperty) -> bool {
    let rels = match family {
        Family::R => &m.r,
        Family::S => &m.s,
    };
    rels.iter().all(|rel| rel.has(prop))
}

/// JSON form: `{"W_A":[..],"W_K":[..],"R":{y:[[x,x'],..]},"S":{x:[[y,y'],..]},"V_A":{..},"V_K":{..}}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AkModelJson {
    #[serde(rename = "W_A")]
    pub w_a: Vec<String>,
    #[serde(rename = "W_K")]
    pub w_k: Vec<String>,
    #[serde(rename = "R", default)]
    pub r: BTreeMap<String, Vec<(String, String)>>,
    #[serde(rename = "S", default)]
    pub s: BTreeMap<String, Vec<(String, String)>>,
    #[serde(rename = "V_A", default)]
    pub v_a: BTreeMap<String, Vec<String>>,
    #[serde(rename = "V_K", default)]
    pub v_k: BTreeMap<String, Vec<String>>,
}

/// A model together with a designated point, as written for countermodels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointedModelJson {
    #[serde(flatten)]
    pub model: AkModelJson,
    pub point: (String, String),
}

impl From<&AkModel> for AkModelJson {
    fn from(m: &AkModel) -> Self {
        let rel_map = |rels: &[Relation], key: &[String], dom: &[String]| {
            rels.iter()
                .enumerate()
                .filter(|(_, rel)| !rel.is_empty())
                .map(|(i, rel)| {
                    let pairs = rel.pairs().map(|(a, b)| (dom[a].clone(), dom[b].clone())).collect();
                    (key[i].clone(), pairs)
                })
                .collect()
        };
        let val_map = |sorts: [Sort; 2], dom: &[String]| {
            let mut out = BTreeMap::new();
            for sort in sorts {
                for (name, set) in m.valuations(sort) {
                    let ids = set.iter().map(|&i| dom[i].clone()).collect();
                    out.insert(format!("{}{name}", sort.prefix()), ids);
                }
            }
            out
        };
        AkModelJson {
            w_a: m.agents.clone(),
            w_k: m.states.clone(),
            r: rel_map(&m.r, &m.states, &m.agents),
            s: rel_map(&m.s, &m.agents, &m.states),
            v_a: val_map([Sort::PropA, Sort::NomA], &m.agents),
            v_k: val_map([Sort::PropK, Sort::NomK], &m.states),
        }
    }
}

impl TryFrom<AkModelJson> for AkModel {
    type Error = Vec<Diagnostic>;

    /// Builds the model and reports every schema or invariant violation.
    fn try_from(j: AkModelJson) -> Result<Self, Self::Error> {
        let mut m = AkModel::new(j.w_a, j.w_k).map_err(|d| vec![d])?;
        let mut diags = Vec::new();
        for (y, pairs) in &j.r {
            for (a, b) in pairs {
                if let Err(d) = m.add_r(y, a, b) {
                    diags.push(d);
                }
            }
        }
        for (x, pairs) in &j.s {
            for (a, b) in pairs {
                if let Err(d) = m.add_s(x, a, b) {
                    diags.push(d);
                }
            }
        }
        for (key, ids, expected) in j
            .v_a
            .iter()
            .map(|(k, v)| (k, v, "pa_/na_"))
            .chain(j.v_k.iter().map(|(k, v)| (k, v, "pk_/nk_")))
        {
            let atom = Atom::from_ident(key).filter(|a| {
                a.sort().is_agent_side() == (expected == "pa_/na_")
            });
            match atom {
                Some(atom) => {
                    if let Err(d) = m.set_valuation(&atom, ids) {
                        diags.push(d);
                    }
                }
                None => diags.push(Diagnostic::BadValuationKey { key: key.clone(), expected }),
            }
        }
        diags.extend(validate_model(&m));
        if diags.is_empty() {
            Ok(m)
        } else {
            Err(diags)
        }
    }
}

impl fmt::Display for AkModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let json = serde_json::to_string(&AkModelJson::from(self)).map_err(|_| fmt::Error)?;
        f.write_str(&json)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn pk(name: &str) -> Atom {
        Atom::new(Sort::PropK, name)
    }

    fn na(name: &str) -> Atom {
        Atom::new(Sort::NomA, name)
    }

    /// `W_A = {x1, x2}`, `W_K = {y}`, `a` names `x2`, `p_K` false, no S-edges.
    fn non_reflexive() -> AkModel {
        let mut m = AkModel::new(["x1", "x2"], ["y"]).unwrap();
        m.set_valuation(&na("a"), ["x2"]).unwrap();
        m.set_valuation(&pk("p"), Vec::<&str>::new()).unwrap();
        m
    }

    #[test]
    fn diagnostics() {
        let mut m = AkModel::new(["x"], ["y"]).unwrap();
        m.set_valuation(&na("a"), Vec::<&str>::new()).unwrap();
        assert_eq!(validate_model(&m), vec![Diagnostic::NominalNotSingleton("na_a".into())]);

        let m = AkModel::new(Vec::<String>::new(), ["y"]).unwrap();
        assert_eq!(validate_model(&m), vec![Diagnostic::EmptyDomain("W_A")]);

        assert!(validate_model(&non_reflexive()).is_empty());
    }

    #[test]
    fn prop_k_ignores_agent() {
        let mut m = AkModel::new(["x"], ["y"]).unwrap();
        m.set_valuation(&pk("p"), ["y"]).unwrap();
        let pt = m.point("x", "y").unwrap();
        assert!(eval(&m, pt, &parse("pk_p").unwrap()).unwrap());
    }

    #[test]
    fn vacuous_box_falsifies_t_at_other_agent() {
        let m = non_reflexive();
        let pt = m.point("x1", "y").unwrap();
        assert!(eval(&m, pt, &parse("@na_a [K] pk_p").unwrap()).unwrap());
        assert!(!eval(&m, pt, &parse("pk_p").unwrap()).unwrap());
        assert!(!valid_on_model(&m, &parse("@na_a [K] pk_p -> pk_p").unwrap()).unwrap());
    }

    #[test]
    fn t_holds_on_equivalence_frames() {
        let mut m = non_reflexive();
        for x in 0..2 {
            *m.s_mut(x) = Relation::total(1);
        }
        assert!(valid_on_model(&m, &parse("@na_a [K] pk_p -> pk_p").unwrap()).unwrap());
    }

    #[test]
    fn validity_on_single_models() {
        let m = non_reflexive();
        assert!(valid_on_model(&m, &parse("pk_p | ~pk_p").unwrap()).unwrap());
        let mut one = AkModel::new(["x"], ["y"]).unwrap();
        one.set_valuation(&pk("p"), ["y"]).unwrap();
        assert!(valid_on_model(&one, &parse("pk_p").unwrap()).unwrap());
    }

    #[test]
    fn unvalued_atoms_are_errors() {
        let m = non_reflexive();
        let pt = Point { x: 0, y: 0 };
        assert_eq!(
            eval(&m, pt, &parse("pk_p & pk_q").unwrap()),
            Err(EvalError::UnvaluedAtom("pk_q".into()))
        );
        assert_eq!(eval(&m, Point { x: 5, y: 0 }, &parse("pk_p").unwrap()), Err(EvalError::PointOutOfRange));
    }

    #[test]
    fn frame_families() {
        let mut m = AkModel::new(["x1", "x2"], ["y1", "y2"]).unwrap();
        for x in 0..2 {
            *m.s_mut(x) = Relation::identity(2);
        }
        assert!(frame_property(&m, Family::S, FrameProperty::Reflexive));
        assert!(!frame_property(&m, Family::R, FrameProperty::Serial));
        for x in 0..2 {
            *m.s_mut(x) = Relation::total(2);
        }
        assert!(FrameProperty::ALL.iter().all(|&p| frame_property(&m, Family::S, p)));
    }

    #[test]
    fn json_round_trip_and_schema_errors() {
        let mut m = non_reflexive();
        m.add_s("x1", "y", "y").unwrap();
        m.add_r("y", "x1", "x2").unwrap();
        let json = serde_json::to_string(&AkModelJson::from(&m)).unwrap();
        let back: AkModelJson = serde_json::from_str(&json).unwrap();
        assert_eq!(AkModel::try_from(back).unwrap(), m);

        let bad: AkModelJson = serde_json::from_str(
            r#"{"W_A":["x"],"W_K":["y"],"S":{"x":[["y","z"]]},"V_K":{"pa_q":["y"]}}"#,
        )
        .unwrap();
        let errs = AkModel::try_from(bad).unwrap_err();
        assert_eq!(errs.len(), 2);
    }
}
