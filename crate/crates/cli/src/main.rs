//! `gls` — prove formulas of the provability logics GL and GLS, render
//! proofs and countermodels, model-check user models, and cross-check the
//! prover against independent semantic oracles.
//!
//! Exit codes: 0 provable / true / pass, 1 refuted / false / fail, 2 usage or
//! input error.

use clap::{Parser, Subcommand, ValueEnum};
use gls_core::calculus::reduce_to_gl;
use gls_core::countermodel::{
    build_chain, build_core, check_truth_lemma, eval_chain_sequent, ChainModel, CoreModel,
};
use gls_core::enumeration::refute_by_enumeration;
use gls_core::formula::{Formula, FormulaSet};
use gls_core::generator::{random_formula, seeded_rng};
use gls_core::parser::parse;
use gls_core::render::{proof_to_json, proof_to_latex, proof_to_text};
use gls_core::search::{prove_gl, prove_gls, SearchOutcome};
use gls_core::semantics::KripkeModel;
use gls_core::{ProofTree, Sequent};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

const EXIT_PROVABLE: u8 = 0;
const EXIT_REFUTED: u8 = 1;
const EXIT_ERROR: u8 = 2;

#[derive(Parser)]
#[command(
    name = "gls",
    version,
    about = "Decision procedure, proofs and countermodels for the provability logics GL and GLS"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Logic {
    Gl,
    Gls,
}

impl Logic {
    fn label(self) -> &'static str {
        match self {
            Logic::Gl => "GL",
            Logic::Gls => "GLS",
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Latex,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a formula; print a proof (with Σ for GLS) or a countermodel.
    Prove {
        formula: String,
        #[arg(long, value_enum, default_value_t = Logic::Gls)]
        logic: Logic,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Decide a formula and render only the countermodel side.
    Countermodel {
        formula: String,
        #[arg(long, value_enum, default_value_t = Logic::Gls)]
        logic: Logic,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Evaluate a formula at a world of a model given as a JSON file.
    CheckModel {
        model: PathBuf,
        world: String,
        formula: String,
    },
    /// Print the GL reduction of a formula: its reflection instances implied
    /// toward it.
    Reduce { formula: String },
    /// Cross-check the prover against the reduction route, emitted
    /// countermodels, and the bounded enumeration oracle on random formulas.
    Crosscheck {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 4)]
        max_depth: usize,
        #[arg(long, default_value_t = 2)]
        max_vars: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Enumeration bound for the oracle.
        #[arg(long, default_value_t = 4)]
        max_worlds: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Prove {
            formula,
            logic,
            format,
        } => cmd_prove(&formula, logic, format, false),
        Command::Countermodel {
            formula,
            logic,
            format,
        } => cmd_prove(&formula, logic, format, true),
        Command::CheckModel {
            model,
            world,
            formula,
        } => cmd_check_model(&model, &world, &formula),
        Command::Reduce { formula } => cmd_reduce(&formula),
        Command::Crosscheck {
            count,
            max_depth,
            max_vars,
            seed,
            max_worlds,
        } => cmd_crosscheck(count, max_depth, max_vars, seed, max_worlds),
    };
    ExitCode::from(code)
}

fn parse_or_complain(text: &str) -> Result<Formula, u8> {
    parse(text).map_err(|e| {
        eprintln!("error: {e}");
        EXIT_ERROR
    })
}

enum Countermodel {
    Core(CoreModel),
    Chain(ChainModel),
}

fn decide(formula: &Formula, logic: Logic) -> Result<Result<(ProofTree, FormulaSet), Countermodel>, u8> {
    let build_err = |e| {
        eprintln!("error: {e}");
        EXIT_ERROR
    };
    match logic {
        Logic::Gl => match prove_gl(&Sequent::first([], [formula.clone()])) {
            SearchOutcome::Proved {
                tree,
                box_l_principals,
            } => Ok(Ok((tree, box_l_principals))),
            SearchOutcome::Refuted { witness } => Ok(Err(Countermodel::Core(
                build_core(&witness).map_err(build_err)?,
            ))),
        },
        Logic::Gls => match prove_gls(&Sequent::second([], [formula.clone()])) {
            SearchOutcome::Proved {
                tree,
                box_l_principals,
            } => Ok(Ok((tree, box_l_principals))),
            SearchOutcome::Refuted { witness } => Ok(Err(Countermodel::Chain(
                build_chain(&witness).map_err(build_err)?,
            ))),
        },
    }
}

fn model_text(m: &KripkeModel) -> String {
    let mut out = String::new();
    for w in &m.worlds {
        let vars = m
            .valuation
            .get(w)
            .map(|vs| vs.iter().cloned().collect::<Vec<_>>().join(", "))
            .unwrap_or_default();
        let succs: Vec<&str> = m.successors(w).collect();
        out.push_str(&format!("  world '{w}'\n    true: {{{vars}}}\n"));
        if succs.is_empty() {
            out.push_str("    sees: nothing\n");
        } else {
            out.push_str(&format!(
                "    sees: {}\n",
                succs
                    .iter()
                    .map(|s| format!("'{s}'"))
                    .collect::<Vec<_>>()
                    .join(", ")
            ));
        }
    }
    out
}

fn countermodel_text(cm: &Countermodel) -> String {
    match cm {
        Countermodel::Core(core) => format!(
            "countermodel (designated world '{}'):\n{}",
            core.designated_id(),
            model_text(core.model())
        ),
        Countermodel::Chain(chain) => format!(
            "countermodel: finite core plus an infinite descending tail\n  \
             tail valuation: {{{}}}\n  every tail world sees '{}' and its successors\n{}",
            chain
                .tail_valuation()
                .iter()
                .cloned()
                .collect::<Vec<_>>()
                .join(", "),
            chain.core().designated_id(),
            model_text(chain.core().model())
        ),
    }
}

fn countermodel_json(cm: &Countermodel) -> serde_json::Value {
    match cm {
        Countermodel::Core(core) => json!({
            "model": core.to_json(),
            "designated": core.designated_id(),
        }),
        Countermodel::Chain(chain) => chain.to_json(),
    }
}

fn countermodel_latex(cm: &Countermodel) -> String {
    let model = match cm {
        Countermodel::Core(core) => core.model(),
        Countermodel::Chain(chain) => chain.core().model(),
    };
    let mut out = String::from("% refuted; countermodel worlds:\n\\begin{itemize}\n");
    for w in &model.worlds {
        let vars = model
            .valuation
            .get(w)
            .map(|vs| vs.iter().cloned().collect::<Vec<_>>().join(", "))
            .unwrap_or_default();
        out.push_str(&format!(
            "  \\item \\verb|{w}| \\quad true: $\\{{{vars}\\}}$\n"
        ));
    }
    if let Countermodel::Chain(chain) = cm {
        out.push_str(&format!(
            "  \\item tail worlds $1, 2, 3, \\ldots$ \\quad true: $\\{{{}\\}}$\n",
            chain
                .tail_valuation()
                .iter()
                .cloned()
                .collect::<Vec<_>>()
                .join(", ")
        ));
    }
    out.push_str("\\end{itemize}\n");
    out
}

fn countermodel_dot(cm: &Countermodel) -> String {
    match cm {
        Countermodel::Core(core) => core.model().to_dot(),
        Countermodel::Chain(chain) => chain.to_dot(),
    }
}

fn sigma_string(sigma: &FormulaSet) -> String {
    sigma
        .iter()
        .map(Formula::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

fn cmd_prove(formula_text: &str, logic: Logic, format: Format, countermodel_only: bool) -> u8 {
    let formula = match parse_or_complain(formula_text) {
        Ok(f) => f,
        Err(code) => return code,
    };
    let verdict = match decide(&formula, logic) {
        Ok(v) => v,
        Err(code) => return code,
    };
    match verdict {
        Ok((tree, sigma)) => {
            if countermodel_only {
                println!(
                    "provable ({}): {} — no countermodel exists",
                    logic.label(),
                    formula
                );
                return EXIT_PROVABLE;
            }
            match format {
                Format::Text => {
                    println!("provable ({}): {}", logic.label(), formula);
                    if logic == Logic::Gls {
                        println!("sigma: {{{}}}", sigma_string(&sigma));
                    }
                    println!("{}", proof_to_text(&tree));
                }
                Format::Json => {
                    let mut v = json!({
                        "formula": formula.to_string(),
                        "logic": logic.label(),
                        "provable": true,
                        "proof": proof_to_json(&tree),
                    });
                    if logic == Logic::Gls {
                        v["sigma"] = json!(sigma
                            .iter()
                            .map(Formula::to_string)
                            .collect::<Vec<_>>());
                    }
                    println!("{}", serde_json::to_string_pretty(&v).unwrap());
                }
                Format::Latex => {
                    println!("{}", proof_to_latex(&tree));
                }
                Format::Dot => {
                    eprintln!(
                        "error: the dot format renders countermodels, but '{formula}' is provable"
                    );
                    return EXIT_ERROR;
                }
            }
            EXIT_PROVABLE
        }
        Err(cm) => {
            match format {
                Format::Text => {
                    println!("refuted ({}): {}", logic.label(), formula);
                    print!("{}", countermodel_text(&cm));
                }
                Format::Json => {
                    let v = json!({
                        "formula": formula.to_string(),
                        "logic": logic.label(),
                        "provable": false,
                        "countermodel": countermodel_json(&cm),
                    });
                    println!("{}", serde_json::to_string_pretty(&v).unwrap());
                }
                Format::Latex => print!("{}", countermodel_latex(&cm)),
                Format::Dot => print!("{}", countermodel_dot(&cm)),
            }
            EXIT_REFUTED
        }
    }
}

fn cmd_check_model(path: &PathBuf, world: &str, formula_text: &str) -> u8 {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return EXIT_ERROR;
        }
    };
    let model: KripkeModel = match serde_json::from_str(&text) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: malformed model JSON: {e}");
            return EXIT_ERROR;
        }
    };
    let violations = model.frame_violations();
    if !violations.is_empty() {
        eprintln!("error: not a GL-model:");
        for v in violations {
            eprintln!("  {v}");
        }
        return EXIT_ERROR;
    }
    let formula = match parse_or_complain(formula_text) {
        Ok(f) => f,
        Err(code) => return code,
    };
    match model.eval(world, &formula) {
        Ok(true) => {
            println!("true");
            EXIT_PROVABLE
        }
        Ok(false) => {
            println!("false");
            EXIT_REFUTED
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

fn cmd_reduce(formula_text: &str) -> u8 {
    match parse_or_complain(formula_text) {
        Ok(f) => {
            println!("{}", reduce_to_gl(&f));
            EXIT_PROVABLE
        }
        Err(code) => code,
    }
}

struct CheckRecord {
    formula: Formula,
    reduction_agrees: bool,
    /// Some(ok) when the formula was refuted and a countermodel was built
    /// and model-checked.
    countermodel_ok: Option<bool>,
    /// Some(ok) when the formula was proved and the oracle stayed silent.
    oracle_ok: Option<bool>,
}

fn crosscheck_one(formula: &Formula, max_worlds: usize) -> CheckRecord {
    let query = Sequent::second([], [formula.clone()]);
    let direct = prove_gls(&query);
    let reduced = prove_gl(&Sequent::first([], [reduce_to_gl(formula)]));
    let reduction_agrees = direct.is_proved() == reduced.is_proved();

    let mut countermodel_ok = None;
    let mut oracle_ok = None;
    match &direct {
        SearchOutcome::Refuted { witness } => {
            let ok = match build_chain(witness) {
                Ok(chain) => {
                    let closure: FormulaSet = formula.subformulas();
                    let verdict = eval_chain_sequent(&chain, &closure, &query);
                    check_truth_lemma(chain.core()).is_ok()
                        && chain.core().model().is_gl_model()
                        && verdict.always_false()
                }
                Err(_) => false,
            };
            countermodel_ok = Some(ok);
        }
        SearchOutcome::Proved { .. } => {
            oracle_ok = Some(refute_by_enumeration(formula, max_worlds).is_none());
        }
    }
    CheckRecord {
        formula: formula.clone(),
        reduction_agrees,
        countermodel_ok,
        oracle_ok,
    }
}

fn cmd_crosscheck(count: usize, max_depth: usize, max_vars: usize, seed: u64, max_worlds: usize) -> u8 {
    if max_vars == 0 {
        eprintln!("error: --max-vars must be at least 1");
        return EXIT_ERROR;
    }
    if max_worlds == 0 || max_worlds * max_vars > 64 {
        eprintln!("error: --max-worlds out of range for {max_vars} variables");
        return EXIT_ERROR;
    }
    let mut rng = seeded_rng(seed);
    let formulas: Vec<Formula> = (0..count)
        .map(|_| random_formula(&mut rng, max_depth, max_vars))
        .collect();

    #[cfg(feature = "parallel")]
    let records: Vec<CheckRecord> = formulas
        .par_iter()
        .map(|f| crosscheck_one(f, max_worlds))
        .collect();
    #[cfg(not(feature = "parallel"))]
    let records: Vec<CheckRecord> = formulas
        .iter()
        .map(|f| crosscheck_one(f, max_worlds))
        .collect();

    println!(
        "crosscheck: count={count} max-depth={max_depth} max-vars={max_vars} seed={seed} max-worlds={max_worlds}"
    );
    let mut failures = 0usize;
    let mut agree = 0usize;
    let mut cm_checked = 0usize;
    let mut cm_ok = 0usize;
    let mut oracle_checked = 0usize;
    let mut oracle_silent = 0usize;
    for r in &records {
        if r.reduction_agrees {
            agree += 1;
        } else {
            failures += 1;
            println!("FAIL reduction agreement: {}", r.formula);
        }
        if let Some(ok) = r.countermodel_ok {
            cm_checked += 1;
            if ok {
                cm_ok += 1;
            } else {
                failures += 1;
                println!("FAIL countermodel validity: {}", r.formula);
            }
        }
        if let Some(ok) = r.oracle_ok {
            oracle_checked += 1;
            if ok {
                oracle_silent += 1;
            } else {
                failures += 1;
                println!("FAIL oracle consistency: {}", r.formula);
            }
        }
    }
    println!("reduction agreement: {agree}/{}", records.len());
    println!("countermodel validity: {cm_ok}/{cm_checked}");
    println!("oracle consistency: {oracle_silent}/{oracle_checked}");
    if failures == 0 {
        println!("PASS");
        EXIT_PROVABLE
    } else {
        println!("FAIL ({failures} failure(s))");
        EXIT_REFUTED
    }
}
