//! Compare prover verdicts with the bounded oracle on seeded random formulas.

use agent_knowledge::gen::FormulaGen;
use agent_knowledge::oracle::{oracle_countermodel, Bounds};
use agent_knowledge::tableau::prove;

fn main() {
    let bounds = Bounds::ak(2, 2);
    let (mut valid, mut refuted, mut open) = (0, 0, 0);
    for f in FormulaGen::new(7, 8).take(200) {
        let proved = prove(&f).unwrap().is_proved();
        let counter = oracle_countermodel(&f, &bounds).is_some();
        assert!(!(proved && counter), "prover and oracle disagree on {f}");
        match (proved, counter) {
            (true, _) => valid += 1,
            (false, true) => refuted += 1,
            // the prover's countermodel is larger than 2×2
            (false, false) => open += 1,
        }
    }
    println!("valid {valid}, refuted by both {refuted}, refuted beyond 2×2 {open}");
}
