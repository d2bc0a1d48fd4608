//! JSON report types. Struct field order fixes the key order, so identical
//! inputs produce byte-identical output.

use serde::Serialize;

use dval_core::algorithms::{
    AnalysisReport, ChainTerminal, Classification, OrderCheckReport, ResidueChain,
};
use dval_core::embedding::{render_expr, Embedding, Value};
use dval_core::transform::{Trace, TransformStep};

#[derive(Serialize)]
pub struct TraceStepJson {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    pub values_after: Vec<u64>,
}

/// Indices in the serialized trace are 1-based, matching the variable
/// numbering X1, X2, ...
pub fn trace_json(emb: &Embedding, trace: &Trace) -> Vec<TraceStepJson> {
    let pres = emb.presentation();
    trace
        .entries
        .iter()
        .map(|entry| {
            let (kind, i, j, b, m) = match &entry.step {
                TransformStep::Monoidal { i, j } => {
                    ("monoidal", Some(i + 1), Some(j + 1), None, None)
                }
                TransformStep::Swap { i, j } => ("swap", Some(i + 1), Some(j + 1), None, None),
                TransformStep::CoordChange { i, b, m } => (
                    "coord",
                    Some(i + 1),
                    None,
                    Some(pres.render_elem(b)),
                    Some(*m),
                ),
            };
            TraceStepJson {
                kind,
                i,
                j,
                b,
                m,
                values_after: entry.values_after.clone(),
            }
        })
        .collect()
}

#[derive(Serialize)]
pub struct UnitElementJson {
    pub expr: String,
    pub value: i64,
}

#[derive(Serialize)]
pub struct ChainStepJson {
    pub r: u64,
    pub residue: String,
    pub class: &'static str,
}

#[derive(Serialize)]
pub struct ChainTerminalJson {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<u64>,
}

#[derive(Serialize)]
pub struct ChainJson {
    pub variable: String,
    pub steps: Vec<ChainStepJson>,
    pub terminal: ChainTerminalJson,
}

pub fn chain_json(emb: &Embedding, chain: &ResidueChain) -> ChainJson {
    let pres = emb.presentation();
    let terminal = match chain.terminal {
        ChainTerminal::TranscendentalFound => ChainTerminalJson {
            kind: "transcendental_found",
            value: None,
            depth: None,
        },
        ChainTerminal::DivisibilityBroken(v) => ChainTerminalJson {
            kind: "divisibility_broken",
            value: Some(v),
            depth: None,
        },
        ChainTerminal::DepthExhausted(d) => ChainTerminalJson {
            kind: "depth_exhausted",
            value: None,
            depth: Some(d),
        },
    };
    ChainJson {
        variable: emb.variables()[chain.variable].clone(),
        steps: chain
            .steps
            .iter()
            .map(|s| ChainStepJson {
                r: s.r,
                residue: pres.render_elem(&s.residue),
                class: match s.class {
                    Classification::Algebraic => "algebraic",
                    Classification::Transcendental => "transcendental",
                },
            })
            .collect(),
        terminal,
    }
}

#[derive(Serialize)]
pub struct ImplicitElementJson {
    pub variable: String,
    pub expr: String,
}

#[derive(Serialize)]
pub struct AnalysisJson {
    pub values: Vec<u64>,
    pub trace: Vec<TraceStepJson>,
    pub unit_element: UnitElementJson,
    pub chains: Vec<ChainJson>,
    pub generators: Vec<String>,
    pub field_tower: Vec<String>,
    pub dimension: usize,
    pub dimension_exact: bool,
    pub order_function: &'static str,
    pub implicit_elements: Vec<ImplicitElementJson>,
    pub diagnostics: Vec<String>,
}

pub fn analysis_json(emb: &Embedding, report: &AnalysisReport) -> AnalysisJson {
    let pres = emb.presentation();
    let fin = &report.final_embedding;
    AnalysisJson {
        values: emb.var_values().to_vec(),
        trace: trace_json(emb, &report.trace),
        unit_element: UnitElementJson {
            expr: render_expr(pres, emb.variables(), &report.unit_element),
            value: 1,
        },
        chains: report
            .chains
            .iter()
            .map(|c| chain_json(fin, c))
            .collect(),
        generators: report
            .transcendental_generators
            .iter()
            .map(|g| pres.render_elem(g))
            .collect(),
        field_tower: report.field_tower.clone(),
        dimension: report.dimension,
        dimension_exact: report.dimension_exact,
        order_function: match report.verdict {
            dval_core::algorithms::Verdict::Yes => "yes",
            dval_core::algorithms::Verdict::No => "no",
            dval_core::algorithms::Verdict::Unknown => "unknown",
        },
        implicit_elements: report
            .implicit_elements
            .iter()
            .map(|(i, w)| ImplicitElementJson {
                variable: fin.variables()[*i].clone(),
                expr: render_expr(pres, fin.variables(), w),
            })
            .collect(),
        diagnostics: report.diagnostics.clone(),
    }
}

#[derive(Serialize)]
pub struct ValueJson {
    pub value: serde_json::Value,
}

pub fn value_json(v: Value) -> ValueJson {
    ValueJson {
        value: match v {
            Value::Finite(n) => serde_json::json!(n),
            Value::Infinite => serde_json::json!("infinite"),
            Value::PrecisionExhausted(cap) => {
                serde_json::json!(format!("precision exhausted at cap {cap}"))
            }
        },
    }
}

#[derive(Serialize)]
pub struct CounterexampleJson {
    pub expr: String,
    pub expected: i64,
    pub observed: String,
}

#[derive(Serialize)]
pub struct OrderCheckJson {
    pub trials: u64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleJson>,
}

pub fn order_check_json(emb: &Embedding, report: &OrderCheckReport) -> OrderCheckJson {
    OrderCheckJson {
        trials: report.trials,
        passed: report.passed,
        counterexample: report.counterexample.as_ref().map(|(f, expected, got)| {
            CounterexampleJson {
                expr: render_expr(emb.presentation(), emb.variables(), f),
                expected: *expected,
                observed: match got {
                    Value::Finite(n) => n.to_string(),
                    Value::Infinite => "infinite".into(),
                    Value::PrecisionExhausted(c) => format!("precision exhausted at cap {c}"),
                },
            }
        }),
    }
}
