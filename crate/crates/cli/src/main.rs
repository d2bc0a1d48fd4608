//! File-driven front end: parse embedding documents, run the valuation
//! procedures, and emit text or JSON reports with full provenance.
//!
//! Exit codes: 0 success, 2 precision or iteration exhaustion, 3 input error.

mod doc;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use dval_core::algorithms::{analyze, order_function_check, unit_value_element, AnalyzeOptions};
use dval_core::embedding::{parse_expr, render_expr, Embedding, Value};
use dval_core::error::Error;

#[derive(Parser)]
#[command(name = "dval", about = "Discrete valuation kernel for explicit embeddings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Value of an expression under the embedding's valuation
    Value {
        input: PathBuf,
        #[arg(long)]
        expr: String,
        #[arg(long, default_value_t = 64)]
        precision: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Construct an element of value 1 with its transformation trace
    UnitElement {
        input: PathBuf,
        #[arg(long, default_value_t = 64)]
        precision: u64,
        #[arg(long, default_value_t = 200)]
        iterations: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Residue chains of every non-pivot variable
    Residues {
        input: PathBuf,
        #[arg(long, default_value_t = 64)]
        precision: u64,
        #[arg(long, default_value_t = 12)]
        depth: u64,
        #[arg(long, default_value_t = 200)]
        iterations: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Full pipeline: unit element, chains, residue field, dimension, verdict
    Analyze {
        input: PathBuf,
        #[arg(long, default_value_t = 64)]
        precision: u64,
        #[arg(long, default_value_t = 12)]
        depth: u64,
        #[arg(long, default_value_t = 200)]
        iterations: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check the order-function property on seeded random polynomials
    CheckOrder {
        input: PathBuf,
        #[arg(long, default_value_t = 64)]
        precision: u64,
        #[arg(long, default_value_t = 5)]
        degree: u32,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

const EXIT_EXHAUSTED: u8 = 2;
const EXIT_INPUT: u8 = 3;

fn exit_for(err: &Error) -> u8 {
    match err {
        Error::Precision { .. } | Error::IterationCap { .. } => EXIT_EXHAUSTED,
        _ => EXIT_INPUT,
    }
}

fn load(input: &PathBuf, precision: u64) -> Result<Embedding, Error> {
    let text = std::fs::read_to_string(input)
        .map_err(|e| Error::Invalid(format!("{}: {e}", input.display())))?;
    doc::parse_document(&text, precision)
}

fn emit_json<T: serde::Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("report serialization")
    );
}

fn run() -> Result<u8, Error> {
    match Cli::parse().command {
        Command::Value {
            input,
            expr,
            precision,
            format,
        } => {
            let emb = load(&input, precision)?;
            let f = parse_expr(emb.presentation(), emb.variables(), &expr)?;
            let v = emb.value(&f)?;
            match format {
                Format::Json => emit_json(&report::value_json(v)),
                Format::Text => match v {
                    Value::Finite(n) => println!("{n}"),
                    Value::Infinite => println!("infinite"),
                    Value::PrecisionExhausted(cap) => {
                        println!("precision exhausted at cap {cap}")
                    }
                },
            }
            Ok(match v {
                Value::PrecisionExhausted(_) => EXIT_EXHAUSTED,
                _ => 0,
            })
        }
        Command::UnitElement {
            input,
            precision,
            iterations,
            format,
        } => {
            let emb = load(&input, precision)?;
            let (fin, trace, unit) = unit_value_element(&emb, iterations)?;
            let shown = render_expr(emb.presentation(), emb.variables(), &unit);
            match format {
                Format::Json => {
                    #[derive(serde::Serialize)]
                    struct Out {
                        unit_element: report::UnitElementJson,
                        trace: Vec<report::TraceStepJson>,
                        final_values: Vec<u64>,
                    }
                    emit_json(&Out {
                        unit_element: report::UnitElementJson {
                            expr: shown,
                            value: 1,
                        },
                        trace: report::trace_json(&emb, &trace),
                        final_values: fin.var_values().to_vec(),
                    });
                }
                Format::Text => {
                    println!("unit element: {shown}");
                    println!("value: 1");
                    println!("trace steps: {}", trace.len());
                }
            }
            Ok(0)
        }
        Command::Residues {
            input,
            precision,
            depth,
            iterations,
            format,
        } => {
            let emb = load(&input, precision)?;
            let opts = AnalyzeOptions {
                depth,
                iteration_cap: iterations,
            };
            let rep = analyze(&emb, &opts)?;
            let full = report::analysis_json(&emb, &rep);
            match format {
                Format::Json => {
                    #[derive(serde::Serialize)]
                    struct Out {
                        chains: Vec<report::ChainJson>,
                        generators: Vec<String>,
                        field_tower: Vec<String>,
                    }
                    emit_json(&Out {
                        chains: full.chains,
                        generators: full.generators,
                        field_tower: full.field_tower,
                    });
                }
                Format::Text => {
                    for chain in &full.chains {
                        let steps: Vec<String> = chain
                            .steps
                            .iter()
                            .map(|s| format!("({}, {}, {})", s.r, s.residue, s.class))
                            .collect();
                        println!(
                            "{}: [{}] -> {}",
                            chain.variable,
                            steps.join(", "),
                            chain.terminal.kind
                        );
                    }
                }
            }
            Ok(0)
        }
        Command::Analyze {
            input,
            precision,
            depth,
            iterations,
            format,
        } => {
            let emb = load(&input, precision)?;
            let opts = AnalyzeOptions {
                depth,
                iteration_cap: iterations,
            };
            let rep = analyze(&emb, &opts)?;
            let full = report::analysis_json(&emb, &rep);
            match format {
                Format::Json => emit_json(&full),
                Format::Text => {
                    println!("values: {:?}", full.values);
                    println!("unit element: {}", full.unit_element.expr);
                    for chain in &full.chains {
                        let steps: Vec<String> = chain
                            .steps
                            .iter()
                            .map(|s| format!("({}, {}, {})", s.r, s.residue, s.class))
                            .collect();
                        println!(
                            "chain {}: [{}] -> {}",
                            chain.variable,
                            steps.join(", "),
                            chain.terminal.kind
                        );
                    }
                    println!("generators: {}", full.generators.join(", "));
                    for entry in &full.field_tower {
                        println!("tower: {entry}");
                    }
                    println!(
                        "dimension: {}{}",
                        full.dimension,
                        if full.dimension_exact {
                            ""
                        } else {
                            " (lower bound)"
                        }
                    );
                    println!("order function: {}", full.order_function);
                    for w in &full.implicit_elements {
                        println!("implicit element {}: {}", w.variable, w.expr);
                    }
                    for d in &full.diagnostics {
                        println!("note: {d}");
                    }
                }
            }
            Ok(0)
        }
        Command::CheckOrder {
            input,
            precision,
            degree,
            trials,
            seed,
            format,
        } => {
            let emb = load(&input, precision)?;
            let rep = order_function_check(&emb, degree, trials, seed)?;
            let out = report::order_check_json(&emb, &rep);
            match format {
                Format::Json => emit_json(&out),
                Format::Text => {
                    if out.passed {
                        println!("passed {} trials", out.trials);
                    } else if let Some(ce) = &out.counterexample {
                        println!(
                            "failed: f = {}, expected {}, observed {}",
                            ce.expr, ce.expected, ce.observed
                        );
                    }
                }
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_for(&err))
        }
    }
}
