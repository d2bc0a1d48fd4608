//! The valuation procedures: value equalization, construction of an element
//! of value 1, residue-chain extraction, residue field and dimension, and
//! order-function detection.
//!
//! The canonical section of Delta[[t]] onto its residue field is the constant
//! section, so residues are leading-coefficient ratios in Delta and are
//! subtracted as Delta-constants times pivot powers. Infinite algebraic
//! chains are depth-bounded; the dimension is then a certified lower bound
//! with the exactness flag cleared.

use num::{BigInt, BigRational};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::embedding::{expr_const, expr_var, Embedding, FieldExpr, Value};
use crate::error::{Error, Result};
use crate::field::{jacobian_rank, FieldElem, Monomial, Poly, RatFunc};
use crate::series::{LazySeries, SeriesOrder};
use crate::transform::{pullback, Trace, TransformStep};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    Algebraic,
    Transcendental,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainTerminal {
    TranscendentalFound,
    /// The pivot value no longer divides the current value; carries the
    /// offending value.
    DivisibilityBroken(u64),
    DepthExhausted(u64),
}

#[derive(Clone, Debug)]
pub struct ChainStep {
    /// Current value = r * pivot value when the residue was taken.
    pub r: u64,
    pub residue: FieldElem,
    pub class: Classification,
}

#[derive(Clone, Debug)]
pub struct ResidueChain {
    pub variable: usize,
    pub steps: Vec<ChainStep>,
    pub terminal: ChainTerminal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Debug)]
pub struct AnalysisReport {
    pub trace: Trace,
    /// Expression over the original variables with value exactly 1.
    pub unit_element: FieldExpr,
    pub chains: Vec<ResidueChain>,
    /// Transcendental residue generators of the residue field, in discovery
    /// order.
    pub transcendental_generators: Vec<FieldElem>,
    /// Successive extensions Delta_2 <= ... <= Delta_n, one entry per
    /// processed variable.
    pub field_tower: Vec<String>,
    /// Transcendence degree of the residue field over k (lower bound when
    /// not exact).
    pub dimension: usize,
    pub dimension_exact: bool,
    pub verdict: Verdict,
    /// Truncated implicit elements W_k for depth-exhausted chains, over the
    /// final variables.
    pub implicit_elements: Vec<(usize, FieldExpr)>,
    pub final_embedding: Embedding,
    pub diagnostics: Vec<String>,
}

pub struct AnalyzeOptions {
    pub depth: u64,
    pub iteration_cap: u64,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            depth: 12,
            iteration_cap: 200,
        }
    }
}

/// Drives all variable values to their gcd using monoidal steps, pivoting
/// the minimum-value variable into position 1 (Euclid by repeated
/// subtraction on the exponents).
pub fn equalize_values(emb: &Embedding) -> Result<(Embedding, Trace)> {
    let mut cur = emb.clone();
    let mut trace = Trace::new();
    loop {
        let values = cur.var_values().to_vec();
        let min = *values.iter().min().expect("nonempty");
        if values.iter().all(|&v| v == min) {
            return Ok((cur, trace));
        }
        let min_idx = values.iter().position(|&v| v == min).expect("present");
        if min_idx != 0 {
            cur = trace.apply(&cur, TransformStep::Swap { i: 0, j: min_idx })?;
        }
        let i = cur
            .var_values()
            .iter()
            .position(|&v| v > min)
            .expect("unequal");
        cur = trace.apply(&cur, TransformStep::Monoidal { i, j: 0 })?;
    }
}

/// Residue of the value-zero element psi_i / psi_1^r under the constant
/// section: lc(psi_i) / lc(psi_1)^r.
fn residue_against_pivot(
    pivot_lc: &FieldElem,
    cur: &LazySeries,
    w: u64,
    r: u64,
) -> Result<FieldElem> {
    let lc = cur.coefficient(w)?;
    debug_assert!(!lc.is_zero());
    let mut den = FieldElem::one();
    for _ in 0..r {
        den = den.mul(pivot_lc);
    }
    Ok(lc.div(&den))
}

/// Constructs an element of value 1 by alternating equalization and
/// coordinate-change rounds. Returns the final embedding, the trace, and the
/// value-1 expression over the original variables.
pub fn unit_value_element(
    emb: &Embedding,
    iteration_cap: u64,
) -> Result<(Embedding, Trace, FieldExpr)> {
    let mut cur = emb.clone();
    let mut trace = Trace::new();
    let mut iterations = 0u64;
    loop {
        let (eq, t) = equalize_values(&cur)?;
        trace.extend(t);
        cur = eq;
        let alpha = cur.var_values()[0];
        if alpha == 1 {
            break;
        }
        if iterations >= iteration_cap {
            return Err(Error::IterationCap {
                iterations,
                stable_min: alpha,
            });
        }
        iterations += 1;
        // one coordinate-change round: cancel each leading coefficient
        // against the pivot, strictly raising every non-pivot value
        let (_, pivot_lc) = cur.image(0).leading(cur.cap())?;
        for i in 1..cur.n() {
            let (w, lc) = cur.image(i).leading(cur.cap())?;
            debug_assert_eq!(w, alpha);
            let b = lc.div(&pivot_lc);
            cur = trace.apply(&cur, TransformStep::CoordChange { i, b, m: 1 })?;
        }
    }
    let unit = pullback(&trace, &expr_var(0), emb.n())?;
    match emb.value(&unit)? {
        Value::Finite(1) => {}
        other => {
            return Err(Error::Invalid(format!(
                "unit element certificate failed: value is {other:?}"
            )))
        }
    }
    Ok((cur, trace, unit))
}

/// Transcendental iff adding the candidate raises the Jacobian rank
/// (characteristic-0 criterion).
pub fn transcendence_test(
    pres: &crate::field::FieldPresentation,
    generators: &[FieldElem],
    candidate: &FieldElem,
) -> Classification {
    let base = jacobian_rank(pres, generators);
    let mut all: Vec<FieldElem> = generators.to_vec();
    all.push(candidate.clone());
    if jacobian_rank(pres, &all) == base + 1 {
        Classification::Transcendental
    } else {
        Classification::Algebraic
    }
}

/// Extracts the residue chain of variable i against the pivot (variable 1).
pub fn extract_residue_chain(
    emb: &Embedding,
    i: usize,
    known_generators: &[FieldElem],
    depth: u64,
) -> Result<ResidueChain> {
    let alpha = emb.var_values()[0];
    let (_, pivot_lc) = emb.image(0).leading(emb.cap())?;
    let mut cur = emb.image(i).clone();
    let mut w = emb.var_values()[i];
    let mut steps: Vec<ChainStep> = Vec::new();
    loop {
        if !w.is_multiple_of(alpha) {
            return Ok(ResidueChain {
                variable: i,
                steps,
                terminal: ChainTerminal::DivisibilityBroken(w),
            });
        }
        if steps.len() as u64 >= depth {
            return Ok(ResidueChain {
                variable: i,
                steps,
                terminal: ChainTerminal::DepthExhausted(depth),
            });
        }
        let r = w / alpha;
        let b = residue_against_pivot(&pivot_lc, &cur, w, r)?;
        let class = transcendence_test(emb.presentation(), known_generators, &b);
        steps.push(ChainStep {
            r,
            residue: b.clone(),
            class,
        });
        if class == Classification::Transcendental {
            return Ok(ResidueChain {
                variable: i,
                steps,
                terminal: ChainTerminal::TranscendentalFound,
            });
        }
        // subtract b * psi_1^r and re-establish the order
        let shift = LazySeries::constant(emb.presentation().clone(), b)
            .mul(&emb.image(0).integer_power(r as u32));
        cur = cur.sub(&shift);
        match cur.order(emb.cap())? {
            SeriesOrder::Finite(next) => {
                debug_assert!(next > w);
                w = next;
            }
            SeriesOrder::Zero => {
                return Err(Error::Invalid(format!(
                    "variable `{}` is a polynomial in the pivot: the embedding is not injective",
                    emb.variables()[i]
                )))
            }
            SeriesOrder::Exhausted(c) => {
                return Err(Error::precision(
                    c,
                    format!(
                        "order of `{}` after residue subtraction",
                        emb.variables()[i]
                    ),
                ))
            }
        }
    }
}

/// The full pipeline: unit element, residue chains, residue field tower,
/// dimension, and the order-function verdict.
pub fn analyze(emb: &Embedding, opts: &AnalyzeOptions) -> Result<AnalysisReport> {
    let (mut cur, mut trace, unit) = unit_value_element(emb, opts.iteration_cap)?;
    let n = cur.n();
    let mut generators: Vec<FieldElem> = Vec::new();
    let mut chains: Vec<ResidueChain> = Vec::new();
    let mut field_tower: Vec<String> = Vec::new();
    let mut implicit: Vec<(usize, FieldExpr)> = Vec::new();
    let mut diagnostics: Vec<String> = Vec::new();
    let mut exact = true;
    let mut certified_infinite_chain = false;

    for i in 1..n {
        let chain = loop {
            let c = extract_residue_chain(&cur, i, &generators, opts.depth)?;
            match c.terminal {
                ChainTerminal::DivisibilityBroken(w) => {
                    // Situation 1: a smaller group element appeared; after the
                    // unit element the pivot value is 1, so this is a guard
                    diagnostics.push(format!(
                        "divisibility broken at value {w} on variable {}: re-equalizing",
                        i + 1
                    ));
                    let (eq, t) = equalize_values(&cur)?;
                    trace.extend(t);
                    cur = eq;
                }
                _ => break c,
            }
        };
        match chain.terminal {
            ChainTerminal::TranscendentalFound => {
                // Situation 2: subtract the algebraic prefix, then divide by
                // pivot powers until the variable has value 1
                let mut last_r = 1;
                for step in &chain.steps {
                    match step.class {
                        Classification::Algebraic => {
                            cur = trace.apply(
                                &cur,
                                TransformStep::CoordChange {
                                    i,
                                    b: step.residue.clone(),
                                    m: step.r as u32,
                                },
                            )?;
                        }
                        Classification::Transcendental => last_r = step.r,
                    }
                }
                for _ in 1..last_r {
                    cur = trace.apply(&cur, TransformStep::Monoidal { i, j: 0 })?;
                }
                let u = chain
                    .steps
                    .last()
                    .expect("transcendental step present")
                    .residue
                    .clone();
                generators.push(u);
                field_tower.push(tower_entry(&cur, &chain, field_tower.len()));
            }
            ChainTerminal::DepthExhausted(depth) => {
                exact = false;
                if cur.certified_infinite(i) {
                    certified_infinite_chain = true;
                }
                field_tower.push(tower_entry(&cur, &chain, field_tower.len()));
                implicit.push((i, implicit_element(i, &chain)));
                diagnostics.push(format!(
                    "chain for variable {} algebraic to depth {depth}: dimension is a lower bound",
                    i + 1
                ));
            }
            ChainTerminal::DivisibilityBroken(_) => unreachable!("resolved above"),
        }
        chains.push(chain);
    }

    let dimension = generators.len();
    let verdict = if exact && dimension == n - 1 {
        Verdict::Yes
    } else if certified_infinite_chain {
        Verdict::No
    } else {
        Verdict::Unknown
    };
    let final_embedding =
        cur.rename_variables((1..=n).map(|k| format!("Y{k}")).collect())?;
    Ok(AnalysisReport {
        trace,
        unit_element: unit,
        chains,
        transcendental_generators: generators,
        field_tower,
        dimension,
        dimension_exact: exact,
        verdict,
        implicit_elements: implicit,
        final_embedding,
        diagnostics,
    })
}

fn tower_entry(
    emb: &Embedding,
    chain: &ResidueChain,
    position: usize,
) -> String {
    let pres = emb.presentation();
    // constant residues generate nothing over k
    let mut residues: Vec<String> = Vec::new();
    for s in &chain.steps {
        let shown = pres.render_elem(&s.residue);
        if s.residue.as_constant().is_none() && !residues.contains(&shown) {
            residues.push(shown);
        }
    }
    let lower = if position == 0 {
        "k".to_string()
    } else {
        format!("Delta_{}", position + 1)
    };
    if residues.is_empty() {
        return format!("Delta_{} = {}", position + 2, lower);
    }
    let trail = match chain.terminal {
        ChainTerminal::DepthExhausted(_) => ", ...",
        _ => "",
    };
    format!(
        "Delta_{} = {}({}{})",
        position + 2,
        lower,
        residues.join(", "),
        trail
    )
}

/// W_k = Y_k - sum_j u_{k,j} Y_1^{r_j}, truncated at the chain depth.
fn implicit_element(i: usize, chain: &ResidueChain) -> FieldExpr {
    let mut acc = expr_var(i);
    for step in &chain.steps {
        let term = expr_const(step.residue.clone()).mul(&expr_var(0).pow(step.r as i64));
        acc = acc.sub(&term);
    }
    acc
}

#[derive(Clone, Debug)]
pub struct OrderCheckReport {
    pub trials: u64,
    pub passed: bool,
    /// (expression, expected value, observed value)
    pub counterexample: Option<(FieldExpr, i64, Value)>,
}

/// Checks v(f) = least total degree of f on seeded random polynomials.
pub fn order_function_check(
    emb: &Embedding,
    degree: u32,
    trials: u64,
    seed: u64,
) -> Result<OrderCheckReport> {
    // variables of value != 1 are immediate witnesses
    for (i, &v) in emb.var_values().iter().enumerate() {
        if v != 1 {
            return Ok(OrderCheckReport {
                trials: 0,
                passed: false,
                counterexample: Some((expr_var(i), 1, Value::Finite(v as i64))),
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..trials {
        let f = random_poly_expr(&mut rng, emb.n(), degree);
        if f.is_zero() {
            continue;
        }
        let expected = f
            .num()
            .iter()
            .map(|(m, _)| m.exps().iter().map(|&e| e as i64).sum::<i64>())
            .min()
            .expect("nonzero");
        match emb.value(&f)? {
            Value::Finite(v) if v == expected => {}
            other => {
                return Ok(OrderCheckReport {
                    trials: k + 1,
                    passed: false,
                    counterexample: Some((f, expected, other)),
                })
            }
        }
    }
    Ok(OrderCheckReport {
        trials,
        passed: true,
        counterexample: None,
    })
}

/// Seeded random polynomial expression with rational coefficients, at most
/// 5 terms, total degree bounded by `degree`.
pub fn random_poly_expr(rng: &mut ChaCha8Rng, n: usize, degree: u32) -> FieldExpr {
    let terms = rng.gen_range(1..=5u32);
    let mut p: Poly<FieldElem> = Poly::zero();
    for _ in 0..terms {
        let d = rng.gen_range(0..=degree);
        let mut exps = vec![0u32; n];
        let mut left = d;
        for e in exps.iter_mut() {
            let take = rng.gen_range(0..=left);
            *e = take;
            left -= take;
        }
        if left > 0 {
            exps[n - 1] += left;
        }
        let num = BigInt::from(rng.gen_range(-9i64..=9));
        if num == BigInt::from(0) {
            continue;
        }
        let den = BigInt::from(rng.gen_range(1i64..=9));
        let c = FieldElem::constant(BigRational::new(num, den));
        p = p.add(&Poly::monomial(Monomial::from_exps(exps), c));
    }
    RatFunc::from_poly(p)
}
