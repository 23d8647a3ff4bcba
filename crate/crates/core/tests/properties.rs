use std::collections::BTreeSet;

use proptest::prelude::*;

use agent_knowledge::embedding::{eval_el, induce_ak, translate, ElFormula, ElModel, TranslationTable};
use agent_knowledge::oracle::{count_ak, enumerate_ak, Bounds};
use agent_knowledge::relation::Relation;
use agent_knowledge::semantics::{eval, valid_on_model, AkModel, AkModelJson, Point};
use agent_knowledge::syntax::{is_nnf, to_nnf, Vocabulary};
use agent_knowledge::tableau::{prove, satisfiable, ProofResult, SatResult};
use agent_knowledge::{parse, Atom, Formula, Sort};

fn atom() -> impl Strategy<Value = Formula> {
    prop_oneof![
        Just(Formula::prop_a("p")),
        Just(Formula::prop_a("q")),
        Just(Formula::prop_k("p")),
        Just(Formula::prop_k("q")),
        Just(Formula::nom_a("a")),
        Just(Formula::nom_a("b")),
        Just(Formula::nom_k("k")),
        Just(Formula::nom_k("l")),
    ]
}

fn formula(depth: u32) -> impl Strategy<Value = Formula> {
    atom().prop_recursive(depth, 40, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::and(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::or(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::implies(l, r)),
            inner.clone().prop_map(Formula::box_a),
            inner.clone().prop_map(Formula::box_k),
            inner.clone().prop_map(Formula::dia_a),
            inner.clone().prop_map(Formula::dia_k),
            (prop_oneof![Just("a"), Just("b")], inner.clone()).prop_map(|(n, g)| Formula::at_a(n, g)),
            (prop_oneof![Just("k"), Just("l")], inner).prop_map(|(n, g)| Formula::at_k(n, g)),
        ]
    })
}

/// A model with up to 2×2 points valuing every atom used by [`formula`].
fn model() -> impl Strategy<Value = AkModel> {
    (1usize..=2, 1usize..=2, prop::collection::vec(any::<bool>(), 32), prop::collection::vec(0usize..2, 4)).prop_map(
        |(na, nk, bits, place)| {
            let mut m = AkModel::new((0..na).map(|i| format!("x{i}")), (0..nk).map(|i| format!("y{i}"))).unwrap();
            let mut next = bits.into_iter().cycle();
            let mut pick = |n: usize| -> BTreeSet<usize> { (0..n).filter(|_| next.next().unwrap()).collect() };
            for p in ["p", "q"] {
                let ext = pick(na);
                m.set_valuation_ix(&Atom::new(Sort::PropA, p), ext);
                let ext = pick(nk);
                m.set_valuation_ix(&Atom::new(Sort::PropK, p), ext);
            }
            for y in 0..nk {
                let pairs: Vec<(usize, usize)> = (0..na).flat_map(|x| (0..na).map(move |x2| (x, x2))).collect();
                let keep = pick(pairs.len());
                *m.r_mut(y) = Relation::from_pairs(na, keep.into_iter().map(|i| pairs[i]));
            }
            for x in 0..na {
                let pairs: Vec<(usize, usize)> = (0..nk).flat_map(|y| (0..nk).map(move |y2| (y, y2))).collect();
                let keep = pick(pairs.len());
                *m.s_mut(x) = Relation::from_pairs(nk, keep.into_iter().map(|i| pairs[i]));
            }
            m.set_valuation_ix(&Atom::new(Sort::NomA, "a"), BTreeSet::from([place[0] % na]));
            m.set_valuation_ix(&Atom::new(Sort::NomA, "b"), BTreeSet::from([place[1] % na]));
            m.set_valuation_ix(&Atom::new(Sort::NomK, "k"), BTreeSet::from([place[2] % nk]));
            m.set_valuation_ix(&Atom::new(Sort::NomK, "l"), BTreeSet::from([place[3] % nk]));
            m
        },
    )
}

fn points(m: &AkModel) -> Vec<Point> {
    m.points().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_parse_round_trip(f in formula(5)) {
        prop_assert_eq!(parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn nnf_shape_idempotence_and_equivalence(f in formula(5), m in model()) {
        let n = to_nnf(&f);
        prop_assert!(is_nnf(&n));
        prop_assert_eq!(to_nnf(&n), n.clone());
        for pt in points(&m) {
            prop_assert_eq!(eval(&m, pt, &n), eval(&m, pt, &f));
        }
    }

    #[test]
    fn size_and_depth_bounds(f in formula(5)) {
        for c in f.children() {
            prop_assert!(c.size() < f.size());
            prop_assert!(c.depth() <= f.depth());
        }
        prop_assert!(f.depth() < f.size());
        prop_assert!(f.subformulas().iter().all(|g| g.size() <= f.size()));
    }

    #[test]
    fn coordinate_independence(m in model()) {
        let (pa, pk) = (Formula::prop_a("p"), Formula::prop_k("p"));
        for pt in points(&m) {
            for x2 in 0..m.agents().len() {
                prop_assert_eq!(eval(&m, pt, &pk), eval(&m, Point { x: x2, ..pt }, &pk));
            }
            for y2 in 0..m.states().len() {
                prop_assert_eq!(eval(&m, pt, &pa), eval(&m, Point { y: y2, ..pt }, &pa));
            }
        }
    }

    #[test]
    fn at_is_idempotent(f in formula(4), m in model()) {
        for pt in points(&m) {
            let once = Formula::at_a("a", f.clone());
            prop_assert_eq!(eval(&m, pt, &Formula::at_a("a", once.clone())), eval(&m, pt, &once));
            let once = Formula::at_k("k", f.clone());
            prop_assert_eq!(eval(&m, pt, &Formula::at_k("k", once.clone())), eval(&m, pt, &once));
        }
    }

    #[test]
    fn nominal_truth_follows_valuation(m in model()) {
        let a = m.denotation(&Atom::new(Sort::NomA, "a")).unwrap();
        let k = m.denotation(&Atom::new(Sort::NomK, "k")).unwrap();
        for pt in points(&m) {
            prop_assert_eq!(eval(&m, pt, &Formula::nom_a("a")).unwrap(), pt.x == a);
            prop_assert_eq!(eval(&m, pt, &Formula::nom_k("k")).unwrap(), pt.y == k);
        }
    }

    #[test]
    fn diamonds_are_dual_boxes(f in formula(4), m in model()) {
        let neg = Formula::not(f.clone());
        for pt in points(&m) {
            prop_assert_eq!(
                eval(&m, pt, &Formula::dia_k(f.clone())),
                eval(&m, pt, &Formula::not(Formula::box_k(neg.clone())))
            );
            prop_assert_eq!(
                eval(&m, pt, &Formula::dia_a(f.clone())),
                eval(&m, pt, &Formula::not(Formula::box_a(neg.clone())))
            );
        }
    }

    #[test]
    fn model_json_round_trip(m in model()) {
        let json = AkModelJson::from(&m);
        let back = AkModel::try_from(json.clone()).unwrap();
        prop_assert_eq!(AkModelJson::from(&back), json);
    }

    #[test]
    fn proved_formulas_hold_everywhere(f in formula(4), m in model()) {
        if let ProofResult::Proved(_) = prove(&f).unwrap() {
            prop_assert_eq!(valid_on_model(&m, &f), Ok(true));
        }
    }

    #[test]
    fn prove_and_sat_are_dual(f in formula(4)) {
        let proved = prove(&f).unwrap().is_proved();
        let refutable = satisfiable(&Formula::not(f.clone())).unwrap().is_sat();
        prop_assert_eq!(proved, !refutable);
    }

    #[test]
    fn satisfied_somewhere_means_sat(f in formula(4), m in model()) {
        let holds = points(&m).into_iter().any(|pt| eval(&m, pt, &f) == Ok(true));
        match satisfiable(&f).unwrap() {
            SatResult::Sat { model, point, .. } => prop_assert_eq!(eval(&model, point, &f), Ok(true)),
            SatResult::Unsat(_) => prop_assert!(!holds, "{} holds in {}", f, m),
        }
    }
}

fn el_formula() -> impl Strategy<Value = ElFormula> {
    prop_oneof![Just(ElFormula::prop("p")), Just(ElFormula::prop("q"))].prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(ElFormula::not),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| ElFormula::and(l, r)),
            (prop_oneof![Just("i"), Just("j")], inner).prop_map(|(i, g)| ElFormula::know(i, g)),
        ]
    })
}

fn el_model() -> impl Strategy<Value = ElModel> {
    (1usize..=3, prop::collection::vec(any::<bool>(), 24)).prop_map(|(n, bits)| {
        let mut m = ElModel::new((0..n).map(|w| format!("w{w}")), ["i", "j"]).unwrap();
        let mut next = bits.into_iter().cycle();
        for p in ["p", "q"] {
            let ext = (0..n).filter(|_| next.next().unwrap()).collect();
            m.set_valuation_ix(p, ext);
        }
        for agent in ["i", "j"] {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|w| (0..n).map(move |v| (w, v))).collect();
            let rel = pairs.into_iter().filter(|_| next.next().unwrap());
            m.set_relation(agent, Relation::from_pairs(n, rel));
        }
        m
    })
}

proptest! {
    #[test]
    fn translation_agrees_on_induced_models(f in el_formula(), m in el_model()) {
        let t = TranslationTable::auto(["p", "q"], ["i", "j"]);
        let ak = induce_ak(&m, &t);
        let tf = translate(&t, &f).unwrap();
        for pt in ak.points() {
            prop_assert_eq!(eval(&ak, pt, &tf).unwrap(), eval_el(&m, pt.y, &f).unwrap());
        }
    }
}

#[test]
fn enumeration_counts_match_closed_form() {
    let mut vocab = Vocabulary::default();
    let b = Bounds::ak(1, 1);
    assert_eq!(enumerate_ak(&vocab, &b).count(), 4);
    vocab.insert(Sort::PropK, "p".into());
    assert_eq!(enumerate_ak(&vocab, &b).count(), 8);
    for (wa, wk) in [(1, 2), (2, 1), (2, 2)] {
        let b = Bounds::ak(wa, wk);
        let mut with_nom = vocab.clone();
        with_nom.insert(Sort::NomA, "a".into());
        let expected: u128 = (1..=wa)
            .flat_map(|na| (1..=wk).map(move |nk| (na, nk)))
            .map(|(na, nk)| (na as u128) << (na * na * nk + nk * nk * na + nk))
            .sum();
        assert_eq!(count_ak(&with_nom, &b), expected);
        assert_eq!(enumerate_ak(&with_nom, &b).count() as u128, expected);
    }
}
