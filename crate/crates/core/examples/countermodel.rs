//! Refute a non-theorem and check the extracted countermodel independently.

use agent_knowledge::semantics::{eval, AkModelJson};
use agent_knowledge::tableau::{prove, satisfiable, ProofResult, SatResult};
use agent_knowledge::parse;

fn main() {
    let f = parse("@na_a [K] pk_p -> pk_p").unwrap();
    if let ProofResult::Refuted { model, point, .. } = prove(&f).unwrap() {
        let (x, y) = model.point_names(point);
        println!("countermodel at ({x}, {y}):");
        println!("{}", serde_json::to_string_pretty(&AkModelJson::from(&model)).unwrap());
        println!("formula there: {}", eval(&model, point, &f).unwrap());
    }

    let g = parse("<K> pk_p & [A] <K> ~pk_p & @nk_k pa_q").unwrap();
    match satisfiable(&g).unwrap() {
        SatResult::Sat { model, point, .. } => {
            println!("\n{g} holds in\n{model}");
            assert!(eval(&model, point, &g).unwrap());
        }
        SatResult::Unsat(_) => println!("{g} is unsatisfiable"),
    }
}
