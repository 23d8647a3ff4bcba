use std::fmt;

use super::{Formula, Sort};

// Binding strength: larger binds tighter.
fn level(f: &Formula) -> u8 {
    match f {
        Formula::Implies(..) => 1,
        Formula::Or(..) => 2,
        Formula::And(..) => 3,
        _ => 4,
    }
}

struct Wrapped<'a>(&'a Formula, bool);

impl fmt::Display for Wrapped<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn unary(g: &Formula) -> Wrapped<'_> {
            Wrapped(g, level(g) < 4)
        }
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(g) => write!(f, "~{}", unary(g)),
            Formula::BoxA(g) => write!(f, "[A] {}", unary(g)),
            Formula::BoxK(g) => write!(f, "[K] {}", unary(g)),
            Formula::DiaA(g) => write!(f, "<A> {}", unary(g)),
            Formula::DiaK(g) => write!(f, "<K> {}", unary(g)),
            Formula::AtA(n, g) => write!(f, "@{}{} {}", Sort::NomA.prefix(), n, unary(g)),
            Formula::AtK(n, g) => write!(f, "@{}{} {}", Sort::NomK.prefix(), n, unary(g)),
            // left-associative
            Formula::And(l, r) | Formula::Or(l, r) => {
                let me = level(self);
                let op = if me == 3 { "&" } else { "|" };
                write!(f, "{} {op} {}", Wrapped(l, level(l) < me), Wrapped(r, level(r) <= me))
            }
            // right-associative
            Formula::Implies(l, r) => {
                write!(f, "{} -> {}", Wrapped(l, level(l) <= 1), Wrapped(r, level(r) < 1))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    #[test]
    fn prints_atoms_and_unaries() {
        assert_eq!(Formula::prop_k("p").to_string(), "pk_p");
        assert_eq!(Formula::box_k(Formula::prop_k("p")).to_string(), "[K] pk_p");
        assert_eq!(
            Formula::at_a("a", Formula::not(Formula::prop_k("p"))).to_string(),
            "@na_a ~pk_p"
        );
    }

    #[test]
    fn minimal_parentheses() {
        for text in [
            "@na_i [K] (pk_p & @na_j [K] ~pk_q)",
            "pk_a & (pk_b & pk_c)",
            "pk_a & pk_b & pk_c",
            "(pk_a -> pk_b) -> pk_c",
            "pk_a -> pk_b -> pk_c",
            "~(pk_a | pa_b) & <A> (na_a -> nk_k)",
        ] {
            assert_eq!(parse(text).unwrap().to_string(), text);
        }
    }
}
