//! Parse a formula, print it back, and push negations down to the atoms.

use agent_knowledge::parse;
use agent_knowledge::syntax::to_nnf;

fn main() {
    let f = parse("~(<A> na_a & @na_a [K] pk_p -> <A> [K] pk_p)").expect("well-formed");
    println!("formula: {f}");
    println!("size {}, modal depth {}", f.size(), f.depth());
    println!("nnf:     {}", to_nnf(&f));

    for bad in ["pk_p &", "qq_p", "@pk_p pa_q"] {
        match parse(bad) {
            Ok(g) => println!("{bad:>12} parsed as {g}"),
            Err(e) => println!("{bad:>12} rejected: {e}"),
        }
    }
}
