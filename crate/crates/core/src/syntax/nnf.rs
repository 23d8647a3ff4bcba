use super::Formula;

/// Negation normal form: negations only on atoms, no implications.
///
/// `~@n f` becomes `@n ~f`; modal and Boolean dualities are the usual ones.
pub fn to_nnf(f: &Formula) -> Formula {
    match f {
        Formula::Atom(_) => f.clone(),
        Formula::Not(g) => negate(g),
        Formula::And(l, r) => Formula::and(to_nnf(l), to_nnf(r)),
        Formula::Or(l, r) => Formula::or(to_nnf(l), to_nnf(r)),
        Formula::Implies(l, r) => Formula::or(negate(l), to_nnf(r)),
        Formula::BoxA(g) => Formula::box_a(to_nnf(g)),
        Formula::BoxK(g) => Formula::box_k(to_nnf(g)),
        Formula::DiaA(g) => Formula::dia_a(to_nnf(g)),
        Formula::DiaK(g) => Formula::dia_k(to_nnf(g)),
        Formula::AtA(n, g) => Formula::AtA(n.clone(), Box::new(to_nnf(g))),
        Formula::AtK(n, g) => Formula::AtK(n.clone(), Box::new(to_nnf(g))),
    }
}

/// NNF of `~f`.
fn negate(f: &Formula) -> Formula {
    match f {
        Formula::Atom(_) => Formula::not(f.clone()),
        Formula::Not(g) => to_nnf(g),
        Formula::And(l, r) => Formula::or(negate(l), negate(r)),
        Formula::Or(l, r) => Formula::and(negate(l), negate(r)),
        Formula::Implies(l, r) => Formula::and(to_nnf(l), negate(r)),
        Formula::BoxA(g) => Formula::dia_a(negate(g)),
        Formula::BoxK(g) => Formula::dia_k(negate(g)),
        Formula::DiaA(g) => Formula::box_a(negate(g)),
        Formula::DiaK(g) => Formula::box_k(negate(g)),
        Formula::AtA(n, g) => Formula::AtA(n.clone(), Box::new(negate(g))),
        Formula::AtK(n, g) => Formula::AtK(n.clone(), Box::new(negate(g))),
    }
}

pub fn is_nnf(f: &Formula) -> bool {
    match f {
        Formula::Atom(_) => true,
        Formula::Not(g) => matches!(**g, Formula::Atom(_)),
        Formula::Implies(..) => false,
        _ => f.children().into_iter().all(is_nnf),
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    fn nnf(text: &str) -> String {
        to_nnf(&parse(text).unwrap()).to_string()
    }

    #[test]
    fn pushes_negation_through_at_and_box() {
        assert_eq!(nnf("~@na_a [K] pk_p"), "@na_a <K> ~pk_p");
    }

    #[test]
    fn double_negation_and_de_morgan() {
        assert_eq!(nnf("~~pk_p"), "pk_p");
        assert_eq!(nnf("~(pa_q & pk_p)"), "~pa_q | ~pk_p");
    }

    #[test]
    fn negated_friend_inference() {
        assert_eq!(
            nnf("~(<A> na_a & @na_a [K] pk_p -> <A> [K] pk_p)"),
            "<A> na_a & @na_a [K] pk_p & [A] <K> ~pk_p"
        );
    }

    #[test]
    fn shape() {
        let f = parse("~(pk_p -> [A] ~(na_a | ~nk_k))").unwrap();
        assert!(!is_nnf(&f));
        assert!(is_nnf(&to_nnf(&f)));
    }
}
