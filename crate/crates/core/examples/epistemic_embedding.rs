//! Translate multi-agent epistemic formulas and decide them with the prover.

use agent_knowledge::embedding::{everybody_knows, parse_el, prove_el, translate, ElProof, TranslationTable};

fn main() {
    let samples = ["K i p -> p", "K i p -> K i K i p", "~K i p -> K i ~K i p", "K i p -> K j p", "K i (p -> q) -> K i p -> K i q"];
    for text in samples {
        let f = parse_el(text).unwrap();
        let t = TranslationTable::auto_for(&f);
        println!("{text}");
        println!("  as {}", translate(&t, &f).unwrap());
        match prove_el(&f, &t).unwrap() {
            ElProof::Proved(_) => println!("  valid"),
            ElProof::Refuted { el_model: Some(m), world, .. } => {
                println!("  refuted at world {} of a {}-world model", m.worlds()[world], m.worlds().len())
            }
            ElProof::Refuted { .. } => println!("  refuted"),
        }
    }

    let p = parse_el("p").unwrap();
    let t = TranslationTable::auto(["p"], ["i", "j", "k"]);
    println!("\nE{{i,j,k}} p = {}", everybody_knows(&t, ["i", "j", "k"], &p).unwrap());
}
