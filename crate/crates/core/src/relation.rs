//! Finite binary relations over `0..n` and the frame properties checked on them.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FrameProperty {
    Reflexive,
    Serial,
    Symmetric,
    Transitive,
    Euclidean,
}

impl FrameProperty {
    pub const ALL: [FrameProperty; 5] = [
        FrameProperty::Reflexive,
        FrameProperty::Serial,
        FrameProperty::Symmetric,
        FrameProperty::Transitive,
        FrameProperty::Euclidean,
    ];
}

impl fmt::Display for FrameProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FrameProperty::Reflexive => "reflexive",
            FrameProperty::Serial => "serial",
            FrameProperty::Symmetric => "symmetric",
            FrameProperty::Transitive => "transitive",
            FrameProperty::Euclidean => "euclidean",
        };
        f.write_str(s)
    }
}

/// A relation on `0..len()`, stored as sorted successor lists.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Relation {
    succ: Vec<Vec<usize>>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        Relation { succ: vec![Vec::new(); n] }
    }

    pub fn total(n: usize) -> Self {
        Relation { succ: vec![(0..n).collect(); n] }
    }

    pub fn identity(n: usize) -> Self {
        Relation { succ: (0..n).map(|i| vec![i]).collect() }
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut r = Relation::empty(n);
        for (i, j) in pairs {
            r.insert(i, j);
        }
        r
    }

    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.iter().all(Vec::is_empty)
    }

    /// Panics if either endpoint is out of range.
    pub fn insert(&mut self, i: usize, j: usize) {
        assert!(j < self.succ.len(), "relation endpoint {j} out of range");
        let row = &mut self.succ[i];
        if let Err(pos) = row.binary_search(&j) {
            row.insert(pos, j);
        }
    }

    pub fn remove(&mut self, i: usize, j: usize) -> bool {
        match self.succ[i].binary_search(&j) {
            Ok(pos) => {
                self.succ[i].remove(pos);
                true
            }
            Err(_) => false,
        }
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.succ.get(i).is_some_and(|row| row.binary_search(&j).is_ok())
    }

    pub fn successors(&self, i: usize) -> &[usize] {
        &self.succ[i]
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |&j| (i, j)))
    }

    pub fn has(&self, prop: FrameProperty) -> bool {
        let n = self.len();
        match prop {
            FrameProperty::Reflexive => (0..n).all(|i| self.contains(i, i)),
            FrameProperty::Serial => self.succ.iter().all(|row| !row.is_empty()),
            FrameProperty::Symmetric => self.pairs().all(|(i, j)| self.contains(j, i)),
            FrameProperty::Transitive => self
                .pairs()
                .all(|(i, j)| self.succ[j].iter().all(|&k| self.contains(i, k))),
            FrameProperty::Euclidean => self
                .pairs()
                .all(|(i, j)| self.succ[i].iter().all(|&k| self.contains(j, k))),
        }
    }

    pub fn is_equivalence(&self) -> bool {
        self.has(FrameProperty::Reflexive)
            && self.has(FrameProperty::Symmetric)
            && self.has(FrameProperty::Transitive)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn total_relation_has_everything() {
        let r = Relation::total(3);
        assert!(FrameProperty::ALL.iter().all(|&p| r.has(p)));
    }

    #[test]
    fn empty_relation_on_nonempty_domain() {
        let r = Relation::empty(2);
        assert!(!r.has(FrameProperty::Serial));
        assert!(!r.has(FrameProperty::Reflexive));
        assert!(r.has(FrameProperty::Symmetric));
        assert!(r.has(FrameProperty::Transitive));
        assert!(r.has(FrameProperty::Euclidean));
    }

    #[test]
    fn euclidean_but_not_reflexive() {
        // 0 -> 1, 1 -> 1
        let r = Relation::from_pairs(2, [(0, 1), (1, 1)]);
        assert!(r.has(FrameProperty::Euclidean));
        assert!(r.has(FrameProperty::Serial));
        assert!(r.has(FrameProperty::Transitive));
        assert!(!r.has(FrameProperty::Reflexive));
        assert!(!r.has(FrameProperty::Symmetric));
    }
}
