//! Seeded random formulas for fuzzing the prover against the oracle.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::syntax::{Atom, Formula, Sort};

/// Random formulas over a fixed atom set, at most `max_size` nodes each.
pub struct FormulaGen {
    rng: ChaCha8Rng,
    atoms: Vec<Atom>,
    max_size: usize,
}

impl FormulaGen {
    /// Atoms `pa_p, pa_q, pk_p, pk_q, na_a, na_b, nk_k, nk_l`.
    pub fn new(seed: u64, max_size: usize) -> Self {
        let atoms = [
            (Sort::PropA, "p"),
            (Sort::PropA, "q"),
            (Sort::PropK, "p"),
            (Sort::PropK, "q"),
            (Sort::NomA, "a"),
            (Sort::NomA, "b"),
            (Sort::NomK, "k"),
            (Sort::NomK, "l"),
        ];
        Self::with_atoms(seed, max_size, atoms.iter().map(|&(s, n)| Atom::new(s, n)).collect())
    }

    /// Panics if `atoms` is empty or `max_size` is zero.
    pub fn with_atoms(seed: u64, max_size: usize, atoms: Vec<Atom>) -> Self {
        assert!(!atoms.is_empty() && max_size > 0);
        FormulaGen { rng: ChaCha8Rng::seed_from_u64(seed), atoms, max_size }
    }

    pub fn next_formula(&mut self) -> Formula {
        let size = self.rng.gen_range(1..=self.max_size);
        self.sized(size)
    }

    fn nominal(&mut self, sort: Sort) -> Option<Atom> {
        let noms: Vec<&Atom> = self.atoms.iter().filter(|a| a.sort() == sort).collect();
        noms.choose(&mut self.rng).map(|a| (*a).clone())
    }

    /// A formula of exactly `size` nodes.
    fn sized(&mut self, size: usize) -> Formula {
        if size == 1 {
            return Formula::Atom(self.atoms.choose(&mut self.rng).expect("nonempty").clone());
        }
        if size == 2 || self.rng.gen_bool(0.5) {
            let g = self.sized(size - 1);
            return match self.rng.gen_range(0..7) {
                0 => Formula::not(g),
                1 => Formula::box_a(g),
                2 => Formula::box_k(g),
                3 => Formula::dia_a(g),
                4 => Formula::dia_k(g),
                5 => match self.nominal(Sort::NomA) {
                    Some(n) => Formula::at(&n, g).expect("nominal"),
                    None => Formula::not(g),
                },
                _ => match self.nominal(Sort::NomK) {
                    Some(n) => Formula::at(&n, g).expect("nominal"),
                    None => Formula::not(g),
                },
            };
        }
        let left = self.rng.gen_range(1..size - 1);
        let (l, r) = (self.sized(left), self.sized(size - 1 - left));
        match self.rng.gen_range(0..5) {
            0 | 1 => Formula::and(l, r),
            2 | 3 => Formula::or(l, r),
            _ => Formula::implies(l, r),
        }
    }
}

impl Iterator for FormulaGen {
    type Item = Formula;

    fn next(&mut self) -> Option<Formula> {
        Some(self.next_formula())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_bounded() {
        let a: Vec<Formula> = FormulaGen::new(7, 10).take(200).collect();
        let b: Vec<Formula> = FormulaGen::new(7, 10).take(200).collect();
        assert_eq!(a, b);
        assert!(a.iter().all(|f| (1..=10).contains(&f.size())));
        assert!(a.iter().any(|f| f.size() == 10));
    }
}
