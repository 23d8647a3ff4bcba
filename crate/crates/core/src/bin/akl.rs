//! Command-line front end: `akl prove|sat|eval|translate|oracle|fuzz`.
//!
//! The first line of stdout is the verdict. Exit codes: 0 positive verdict,
//! 2 negative verdict, 3 usage or input error, 4 budget or internal error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use agent_knowledge::embedding::{parse_el, translate, TranslationTable};
use agent_knowledge::gen::FormulaGen;
use agent_knowledge::oracle::{oracle_countermodel, oracle_sat, search_space, Bounds};
use agent_knowledge::semantics::{eval, AkModel, AkModelJson, Point, PointedModelJson};
use agent_knowledge::tableau::{prove_with, satisfiable_with, Limits, ProofResult, SatResult, TableauError, Trace};
use agent_knowledge::{parse, Formula};

#[derive(Parser)]
#[command(name = "akl", version, about = "Agent-knowledge logic prover, model checker and oracle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide validity with the tableau prover.
    Prove {
        formula: String,
        #[command(flatten)]
        opts: TableauOpts,
    },
    /// Decide satisfiability with the tableau prover.
    Sat {
        formula: String,
        #[command(flatten)]
        opts: TableauOpts,
    },
    /// Check a formula at a point of a JSON model.
    Eval {
        model: PathBuf,
        /// Agent world id.
        x: String,
        /// Knowledge world id.
        y: String,
        formula: String,
    },
    /// Translate an epistemic formula such as `K i (p & K j ~q)`.
    Translate { formula: String },
    /// Search every model up to the bounds.
    Oracle {
        formula: String,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..=4))]
        wa: u32,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..=4))]
        wk: u32,
        /// Look for a countermodel instead of a model.
        #[arg(long)]
        refute: bool,
        /// Write the model found, with its point, to this file.
        #[arg(long, value_name = "PATH")]
        countermodel: Option<PathBuf>,
    },
    /// Compare prover and oracle on seeded random formulas.
    Fuzz {
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        max_size: usize,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..=4))]
        wa: u32,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..=4))]
        wk: u32,
        #[command(flatten)]
        budget: BudgetOpt,
    },
}

#[derive(Args)]
struct TableauOpts {
    /// Print the tableau after the verdict.
    #[arg(long)]
    trace: bool,
    /// Write the extracted model and its point to this file.
    #[arg(long, value_name = "PATH")]
    countermodel: Option<PathBuf>,
    #[command(flatten)]
    budget: BudgetOpt,
}

#[derive(Args)]
struct BudgetOpt {
    /// Maximum number of formulas added over the whole tableau.
    #[arg(long, default_value_t = Limits::default().max_nodes)]
    budget: usize,
}

impl BudgetOpt {
    fn limits(&self) -> Limits {
        Limits { max_nodes: self.budget }
    }
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<TableauError> for Failure {
    fn from(e: TableauError) -> Self {
        match e {
            TableauError::ReservedName(_) => Failure::Input(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

/// Largest model space the `oracle` subcommand agrees to search.
const MAX_SEARCH: u128 = 1 << 36;

fn formula(text: &str) -> Result<Formula, Failure> {
    parse(text).map_err(|e| Failure::Input(format!("cannot parse `{text}`: {e}")))
}

fn write_pointed(path: &Path, m: &AkModel, pt: Point) -> Result<(), Failure> {
    let (x, y) = m.point_names(pt);
    let json = PointedModelJson { model: AkModelJson::from(m), point: (x.to_string(), y.to_string()) };
    let text = serde_json::to_string_pretty(&json).map_err(|e| Failure::Internal(e.to_string()))?;
    fs::write(path, text + "\n").map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
}

fn print_model(m: &AkModel, pt: Point) {
    let (x, y) = m.point_names(pt);
    println!("point: ({x}, {y})");
    println!("model: {m}");
}

fn print_trace(on: bool, t: &Trace) {
    if on {
        print!("{t}");
    }
}

fn cmd_prove(text: &str, opts: &TableauOpts) -> Outcome {
    let f = formula(text)?;
    match prove_with(&f, &opts.budget.limits())? {
        ProofResult::Proved(trace) => {
            println!("PROVED");
            print_trace(opts.trace, &trace);
            Ok(true)
        }
        ProofResult::Refuted { model, point, trace, .. } => {
            println!("REFUTED");
            print_model(&model, point);
            if let Some(path) = &opts.countermodel {
                write_pointed(path, &model, point)?;
            }
            print_trace(opts.trace, &trace);
            Ok(false)
        }
    }
}

fn cmd_sat(text: &str, opts: &TableauOpts) -> Outcome {
    let f = formula(text)?;
    match satisfiable_with(&f, &opts.budget.limits())? {
        SatResult::Sat { model, point, trace, .. } => {
            println!("SAT");
            print_model(&model, point);
            if let Some(path) = &opts.countermodel {
                write_pointed(path, &model, point)?;
            }
            print_trace(opts.trace, &trace);
            Ok(true)
        }
        SatResult::Unsat(trace) => {
            println!("UNSAT");
            print_trace(opts.trace, &trace);
            Ok(false)
        }
    }
}

fn cmd_eval(path: &Path, x: &str, y: &str, text: &str) -> Outcome {
    let raw = fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    let json: AkModelJson =
        serde_json::from_str(&raw).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let m = AkModel::try_from(json).map_err(|diags| {
        let lines: Vec<String> = diags.iter().map(ToString::to_string).collect();
        Failure::Input(format!("invalid model {}: {}", path.display(), lines.join("; ")))
    })?;
    let f = formula(text)?;
    let pt = m.point(x, y).ok_or_else(|| Failure::Input(format!("({x}, {y}) is not a point of the model")))?;
    let truth = eval(&m, pt, &f).map_err(|e| Failure::Input(e.to_string()))?;
    println!("{}", if truth { "TRUE" } else { "FALSE" });
    Ok(truth)
}

fn cmd_translate(text: &str) -> Outcome {
    let el = parse_el(text).map_err(|e| Failure::Input(format!("cannot parse `{text}`: {e}")))?;
    let ak = translate(&TranslationTable::auto_for(&el), &el).map_err(|e| Failure::Internal(e.to_string()))?;
    println!("{ak}");
    Ok(true)
}

fn cmd_oracle(text: &str, wa: u32, wk: u32, refute: bool, out: Option<&Path>) -> Outcome {
    let f = formula(text)?;
    let bounds = Bounds::ak(wa as usize, wk as usize);
    let probe = if refute { Formula::not(f.clone()) } else { f.clone() };
    let space = search_space(&probe, &bounds);
    if space > MAX_SEARCH {
        return Err(Failure::Input(format!(
            "the search space up to {wa}×{wk} exceeds 2^36 configurations; lower --wa/--wk"
        )));
    }
    let hit = if refute { oracle_countermodel(&f, &bounds) } else { oracle_sat(&f, &bounds) };
    match hit {
        Some((m, pt)) => {
            println!("{}", if refute { "REFUTED" } else { "SAT" });
            print_model(&m, pt);
            if let Some(path) = out {
                write_pointed(path, &m, pt)?;
            }
            Ok(true)
        }
        None => {
            let what = if refute { "countermodel" } else { "model" };
            println!("no {what} up to {wa}×{wk}");
            Ok(false)
        }
    }
}

fn cmd_fuzz(count: usize, seed: u64, max_size: usize, wa: u32, wk: u32, budget: &BudgetOpt) -> Outcome {
    if max_size == 0 {
        return Err(Failure::Input("--max-size must be positive".into()));
    }
    let bounds = Bounds::ak(wa as usize, wk as usize);
    let (mut disagreements, mut skipped) = (Vec::new(), 0usize);
    for (n, f) in FormulaGen::new(seed, max_size).take(count).enumerate() {
        let proved = prove_with(&f, &budget.limits())?.is_proved();
        let sat = satisfiable_with(&f, &budget.limits())?.is_sat();
        if search_space(&Formula::not(f.clone()), &bounds) > MAX_SEARCH {
            skipped += 1;
            continue;
        }
        if proved && oracle_countermodel(&f, &bounds).is_some() {
            disagreements.push(format!("#{n} {f}: proved, but the oracle has a countermodel"));
        }
        if !sat && oracle_sat(&f, &bounds).is_some() {
            disagreements.push(format!("#{n} {f}: unsatisfiable, but the oracle has a model"));
        }
    }
    if disagreements.is_empty() {
        println!("AGREE on {} formulas (seed {seed}, size <= {max_size}, bounds {wa}×{wk})", count - skipped);
        if skipped > 0 {
            println!("{skipped} formulas skipped: search space above 2^36");
        }
        Ok(true)
    } else {
        println!("DISAGREE on {} of {count} formulas (seed {seed})", disagreements.len());
        for d in &disagreements {
            println!("{d}");
        }
        Ok(false)
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Prove { formula, opts } => cmd_prove(&formula, &opts),
        Command::Sat { formula, opts } => cmd_sat(&formula, &opts),
        Command::Eval { model, x, y, formula } => cmd_eval(&model, &x, &y, &formula),
        Command::Translate { formula } => cmd_translate(&formula),
        Command::Oracle { formula, wa, wk, refute, countermodel } => {
            cmd_oracle(&formula, wa, wk, refute, countermodel.as_deref())
        }
        Command::Fuzz { count, seed, max_size, wa, wk, budget } => cmd_fuzz(count, seed, max_size, wa, wk, &budget),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(3);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(4)
        }
    }
}
