//! Search all small models for a model or a countermodel.

use agent_knowledge::oracle::{count_ak, oracle_countermodel, oracle_sat, Bounds};
use agent_knowledge::parse;

fn main() {
    let bounds = Bounds::ak(2, 2);
    for text in ["<K> pk_p & [K] ~pk_q", "na_a & <A> ~na_a & [A] na_a", "[A] pa_p -> <K> pa_p"] {
        let f = parse(text).unwrap();
        println!("{text}");
        println!("  {} models up to 2×2 over its vocabulary", count_ak(&f.vocabulary(), &bounds));
        match oracle_sat(&f, &bounds) {
            Some((m, pt)) => println!("  satisfied at {:?} in {m}", m.point_names(pt)),
            None => println!("  no model up to 2×2"),
        }
        match oracle_countermodel(&f, &bounds) {
            Some((m, pt)) => println!("  falsified at {:?} in {m}", m.point_names(pt)),
            None => println!("  no countermodel up to 2×2"),
        }
    }
}
