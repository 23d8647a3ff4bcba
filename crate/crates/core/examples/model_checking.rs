//! Build a two-by-two model by hand and check formulas at each point.

use agent_knowledge::semantics::{eval, AkModel};
use agent_knowledge::{parse, Atom, Sort};

fn main() {
    let mut m = AkModel::new(["alice", "bob"], ["s", "t"]).unwrap();
    m.set_valuation(&Atom::new(Sort::NomA, "alice"), ["alice"]).unwrap();
    m.set_valuation(&Atom::new(Sort::PropK, "rain"), ["s"]).unwrap();
    m.set_valuation(&Atom::new(Sort::PropA, "tall"), ["bob"]).unwrap();
    // alice cannot tell s from t; bob can
    for (y, y2) in [("s", "s"), ("s", "t"), ("t", "s"), ("t", "t")] {
        m.add_s("alice", y, y2).unwrap();
    }
    m.add_s("bob", "s", "s").unwrap();
    m.add_s("bob", "t", "t").unwrap();
    // at every state, alice regards bob as a possible peer
    m.add_r("s", "alice", "bob").unwrap();
    m.add_r("t", "alice", "bob").unwrap();
    println!("{m}");

    let formulas = ["[K] pk_rain", "@na_alice <K> ~pk_rain", "<A> pa_tall", "@na_alice <A> [K] pk_rain"];
    for text in formulas {
        let f = parse(text).unwrap();
        for pt in m.points() {
            let (x, y) = m.point_names(pt);
            println!("({x}, {y}) |= {text}: {}", eval(&m, pt, &f).unwrap());
        }
    }
}
