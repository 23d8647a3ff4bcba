//! Multi-agent epistemic logic: formulas, Kripke models and satisfaction.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::relation::Relation;
use crate::syntax::{Name, ParseError};

/// `p`, `~φ`, `φ & ψ`, `K i φ`. Disjunction and implication are read as abbreviations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ElFormula {
    Prop(Name),
    Not(Box<ElFormula>),
    And(Box<ElFormula>, Box<ElFormula>),
    Know(Name, Box<ElFormula>),
}

impl ElFormula {
    pub fn prop(name: impl AsRef<str>) -> Self {
        ElFormula::Prop(Arc::from(name.as_ref()))
    }
    pub fn not(f: ElFormula) -> Self {
        ElFormula::Not(Box::new(f))
    }
    pub fn and(l: ElFormula, r: ElFormula) -> Self {
        ElFormula::And(Box::new(l), Box::new(r))
    }
    /// `~(~l & ~r)`
    pub fn or(l: ElFormula, r: ElFormula) -> Self {
        ElFormula::not(ElFormula::and(ElFormula::not(l), ElFormula::not(r)))
    }
    /// `~(l & ~r)`
    pub fn implies(l: ElFormula, r: ElFormula) -> Self {
        ElFormula::not(ElFormula::and(l, ElFormula::not(r)))
    }
    pub fn know(agent: impl AsRef<str>, f: ElFormula) -> Self {
        ElFormula::Know(Arc::from(agent.as_ref()), Box::new(f))
    }

    pub fn size(&self) -> usize {
        match self {
            ElFormula::Prop(_) => 1,
            ElFormula::Not(g) | ElFormula::Know(_, g) => 1 + g.size(),
            ElFormula::And(l, r) => 1 + l.size() + r.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            ElFormula::Prop(_) => 0,
            ElFormula::Not(g) | ElFormula::Know(_, g) => 1 + g.depth(),
            ElFormula::And(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    pub fn props(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect(&mut out, &mut BTreeSet::new());
        out
    }

    pub fn agents(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect(&mut BTreeSet::new(), &mut out);
        out
    }

    fn collect(&self, props: &mut BTreeSet<Name>, agents: &mut BTreeSet<Name>) {
        match self {
            ElFormula::Prop(p) => {
                props.insert(p.clone());
            }
            ElFormula::Not(g) => g.collect(props, agents),
            ElFormula::And(l, r) => {
                l.collect(props, agents);
                r.collect(props, agents);
            }
            ElFormula::Know(i, g) => {
                agents.insert(i.clone());
                g.collect(props, agents);
            }
        }
    }
}

impl fmt::Display for ElFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn unary(f: &mut fmt::Formatter<'_>, g: &ElFormula) -> fmt::Result {
            match g {
                ElFormula::And(..) => write!(f, "({g})"),
                _ => write!(f, "{g}"),
            }
        }
        match self {
            ElFormula::Prop(p) => write!(f, "{p}"),
            ElFormula::Not(g) => {
                f.write_str("~")?;
                unary(f, g)
            }
            ElFormula::Know(i, g) => {
                write!(f, "K {i} ")?;
                unary(f, g)
            }
            ElFormula::And(l, r) => {
                write!(f, "{l} & ")?;
                unary(f, r)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Know,
    Tilde,
    Amp,
    Bar,
    Arrow,
    LParen,
    RParen,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Know => "`K`".into(),
        Tok::Tilde => "`~`".into(),
        Tok::Amp => "`&`".into(),
        Tok::Bar => "`|`".into(),
        Tok::Arrow => "`->`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::End => "end of input".into(),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'~' => Tok::Tilde,
            b'&' => Tok::Amp,
            b'|' => Tok::Bar,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            c if c.is_ascii_alphanumeric() || c == b'_' => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                match &text[start..=i] {
                    "K" => Tok::Know,
                    s => Tok::Ident(s.to_string()),
                }
            }
            _ => {
                let found = text[i..].chars().next().map(|c| format!("`{c}`")).unwrap_or_default();
                return Err(ParseError::Syntax { pos: start, expected: vec!["a formula token".into()], found });
            }
        };
        i += 1;
        out.push((start, tok));
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn bump(&mut self) -> (usize, Tok) {
        let t = self.toks[self.at].clone();
        if t.1 != Tok::End {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        ParseError::Syntax {
            pos: self.toks[self.at].0,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: describe(self.peek()),
        }
    }

    fn implication(&mut self) -> Result<ElFormula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            return Ok(ElFormula::implies(lhs, self.implication()?));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<ElFormula, ParseError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            lhs = ElFormula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<ElFormula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            lhs = ElFormula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<ElFormula, ParseError> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(ElFormula::not(self.unary()?))
            }
            Tok::Know => {
                self.bump();
                let Tok::Ident(agent) = self.peek().clone() else {
                    return Err(self.unexpected(&["an agent name"]));
                };
                self.bump();
                Ok(ElFormula::know(agent, self.unary()?))
            }
            Tok::Ident(p) => {
                self.bump();
                Ok(ElFormula::prop(p))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.implication()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected(&["`)`", "`&`", "`|`", "`->`"]));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.unexpected(&["a proposition", "`~`", "`(`", "`K`"])),
        }
    }
}

/// Parses `phi ::= prop | '~' phi | phi '&' phi | 'K' agent phi | '(' phi ')'`,
/// with `|` and `->` accepted as abbreviations. Precedence as for AK formulas.
pub fn parse_el(text: &str) -> Result<ElFormula, ParseError> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let f = p.implication()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected(&["`&`", "`|`", "`->`", "end of input"]));
    }
    Ok(f)
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ElError {
    #[error("proposition {0} has no valuation in the model")]
    UnvaluedAtom(String),
    #[error("agent {0} has no relation in the model")]
    UnknownAgent(String),
    #[error("world {0} is not in the model")]
    UnknownWorld(String),
    #[error("duplicate world `{0}`")]
    DuplicateWorld(String),
    #[error("W is empty")]
    EmptyDomain,
}

/// A Kripke model with one relation per agent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElModel {
    worlds: Vec<String>,
    index: HashMap<String, usize>,
    relations: BTreeMap<Name, Relation>,
    valuation: BTreeMap<Name, BTreeSet<usize>>,
}

impl ElModel {
    /// Worlds in the given order; every listed agent starts with an empty relation.
    pub fn new<W, A>(worlds: W, agents: A) -> Result<Self, ElError>
    where
        W: IntoIterator,
        W::Item: Into<String>,
        A: IntoIterator,
        A::Item: AsRef<str>,
    {
        let worlds: Vec<String> = worlds.into_iter().map(Into::into).collect();
        if worlds.is_empty() {
            return Err(ElError::EmptyDomain);
        }
        let mut index = HashMap::new();
        for (i, w) in worlds.iter().enumerate() {
            if index.insert(w.clone(), i).is_some() {
                return Err(ElError::DuplicateWorld(w.clone()));
            }
        }
        let n = worlds.len();
        let relations = agents.into_iter().map(|a| (Arc::from(a.as_ref()), Relation::empty(n))).collect();
        Ok(ElModel { worlds, index, relations, valuation: BTreeMap::new() })
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn world_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn agents(&self) -> impl Iterator<Item = &Name> {
        self.relations.keys()
    }

    pub fn relation(&self, agent: &str) -> Option<&Relation> {
        self.relations.get(agent)
    }

    /// Replaces (or adds) an agent's relation. Panics if its size does not match `W`.
    pub fn set_relation(&mut self, agent: impl AsRef<str>, rel: Relation) {
        assert_eq!(rel.len(), self.worlds.len(), "relation size must match the number of worlds");
        self.relations.insert(Arc::from(agent.as_ref()), rel);
    }

    pub fn add_edge(&mut self, agent: &str, w: &str, v: &str) -> Result<(), ElError> {
        let (i, j) = (self.lookup(w)?, self.lookup(v)?);
        let n = self.worlds.len();
        self.relations.entry(Arc::from(agent)).or_insert_with(|| Relation::empty(n)).insert(i, j);
        Ok(())
    }

    fn lookup(&self, w: &str) -> Result<usize, ElError> {
        self.world_index(w).ok_or_else(|| ElError::UnknownWorld(w.to_string()))
    }

    pub fn set_valuation<I, S>(&mut self, prop: impl AsRef<str>, worlds: I) -> Result<(), ElError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let set = worlds.into_iter().map(|w| self.lookup(w.as_ref())).collect::<Result<_, _>>()?;
        self.valuation.insert(Arc::from(prop.as_ref()), set);
        Ok(())
    }

    /// Panics on out-of-range indices.
    pub fn set_valuation_ix(&mut self, prop: impl AsRef<str>, worlds: BTreeSet<usize>) {
        assert!(worlds.iter().all(|&w| w < self.worlds.len()));
        self.valuation.insert(Arc::from(prop.as_ref()), worlds);
    }

    pub fn valuation(&self, prop: &str) -> Option<&BTreeSet<usize>> {
        self.valuation.get(prop)
    }

    pub fn valuations(&self) -> &BTreeMap<Name, BTreeSet<usize>> {
        &self.valuation
    }

    fn check(&self, f: &ElFormula) -> Result<(), ElError> {
        match f {
            ElFormula::Prop(p) if !self.valuation.contains_key(p) => Err(ElError::UnvaluedAtom(p.to_string())),
            ElFormula::Prop(_) => Ok(()),
            ElFormula::Not(g) => self.check(g),
            ElFormula::And(l, r) => self.check(l).and_then(|_| self.check(r)),
            ElFormula::Know(i, _) if !self.relations.contains_key(i) => Err(ElError::UnknownAgent(i.to_string())),
            ElFormula::Know(_, g) => self.check(g),
        }
    }

    fn holds(&self, w: usize, f: &ElFormula) -> bool {
        match f {
            ElFormula::Prop(p) => self.valuation[p].contains(&w),
            ElFormula::Not(g) => !self.holds(w, g),
            ElFormula::And(l, r) => self.holds(w, l) && self.holds(w, r),
            ElFormula::Know(i, g) => self.relations[i].successors(w).iter().all(|&v| self.holds(v, g)),
        }
    }
}

/// Truth of `f` at world index `w`.
pub fn eval_el(m: &ElModel, w: usize, f: &ElFormula) -> Result<bool, ElError> {
    if w >= m.worlds.len() {
        return Err(ElError::UnknownWorld(w.to_string()));
    }
    m.check(f)?;
    Ok(m.holds(w, f))
}

/// Truth of `f` at every world, by index.
pub fn extension_el(m: &ElModel, f: &ElFormula) -> Result<Vec<bool>, ElError> {
    m.check(f)?;
    Ok((0..m.worlds.len()).map(|w| m.holds(w, f)).collect())
}

/// JSON form: `{"W":[..],"R":{agent:[[w,v],..]},"V":{prop:[..]}}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElModelJson {
    #[serde(rename = "W")]
    pub w: Vec<String>,
    #[serde(rename = "R", default)]
    pub r: BTreeMap<String, Vec<(String, String)>>,
    #[serde(rename = "V", default)]
    pub v: BTreeMap<String, Vec<String>>,
}

impl From<&ElModel> for ElModelJson {
    fn from(m: &ElModel) -> Self {
        let id = |i: usize| m.worlds[i].clone();
        ElModelJson {
            w: m.worlds.clone(),
            r: m
                .relations
                .iter()
                .map(|(a, rel)| (a.to_string(), rel.pairs().map(|(i, j)| (id(i), id(j))).collect()))
                .collect(),
            v: m.valuation.iter().map(|(p, s)| (p.to_string(), s.iter().map(|&i| id(i)).collect())).collect(),
        }
    }
}

impl TryFrom<ElModelJson> for ElModel {
    type Error = ElError;

    fn try_from(j: ElModelJson) -> Result<Self, ElError> {
        let mut m = ElModel::new(j.w, j.r.keys())?;
        for (agent, pairs) in &j.r {
            for (w, v) in pairs {
                m.add_edge(agent, w, v)?;
            }
        }
        for (p, ws) in &j.v {
            m.set_valuation(p, ws)?;
        }
        Ok(m)
    }
}

impl fmt::Display for ElModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let json = serde_json::to_string_pretty(&ElModelJson::from(self)).map_err(|_| fmt::Error)?;
        f.write_str(&json)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let f = parse_el("K i (p & K j ~q)").unwrap();
        assert_eq!(
            f,
            ElFormula::know("i", ElFormula::and(ElFormula::prop("p"), ElFormula::know("j", ElFormula::not(ElFormula::prop("q")))))
        );
        assert_eq!(f.to_string(), "K i (p & K j ~q)");
        assert_eq!(parse_el(&f.to_string()).unwrap(), f);
        assert_eq!(parse_el("p | ~p").unwrap(), ElFormula::or(ElFormula::prop("p"), ElFormula::not(ElFormula::prop("p"))));
        assert!(parse_el("K").is_err());
        assert!(parse_el("K i").is_err());
        assert!(parse_el("p &").is_err());
    }

    fn two_worlds() -> ElModel {
        let mut m = ElModel::new(["w", "v"], ["i"]).unwrap();
        m.set_valuation("p", ["w"]).unwrap();
        m
    }

    #[test]
    fn satisfaction() {
        let mut m = two_worlds();
        let k = parse_el("K i p").unwrap();
        assert!(eval_el(&m, 0, &parse_el("p").unwrap()).unwrap());
        assert!(eval_el(&m, 0, &k).unwrap());
        m.set_relation("i", Relation::total(2));
        assert!(!eval_el(&m, 0, &k).unwrap());
        assert_eq!(eval_el(&m, 0, &parse_el("q").unwrap()), Err(ElError::UnvaluedAtom("q".into())));
        assert_eq!(eval_el(&m, 0, &parse_el("K j p").unwrap()), Err(ElError::UnknownAgent("j".into())));
    }

    #[test]
    fn json_round_trip() {
        let mut m = two_worlds();
        m.add_edge("i", "w", "v").unwrap();
        let text = m.to_string();
        let back: ElModel = serde_json::from_str::<ElModelJson>(&text).unwrap().try_into().unwrap();
        assert_eq!(back, m);
    }
}
