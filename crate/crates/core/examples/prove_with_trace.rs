//! Prove a valid inference and print the closed tableau.

use agent_knowledge::parse;
use agent_knowledge::tableau::{prove, ProofResult};

fn main() {
    let f = parse("<A> na_a & @na_a [K] pk_p -> <A> [K] pk_p").unwrap();
    match prove(&f).unwrap() {
        ProofResult::Proved(trace) => {
            println!("PROVED {f}");
            print!("{trace}");
        }
        ProofResult::Refuted { .. } => println!("unexpectedly refuted"),
    }
}
