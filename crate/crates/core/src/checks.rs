//! Property-check suites: reusable verifications of the algebraic laws the
//! kernel is supposed to satisfy, on seeded random inputs. Each returns
//! `Err` with a human-readable witness on the first violation.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num::{BigRational, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algorithms::{equalize_values, random_poly_expr, transcendence_test, Classification};
use crate::embedding::{Embedding, Value};
use crate::field::poly::gcd as poly_gcd;
use crate::field::{parse_elem, FieldElem, FieldPresentation, Monomial, Poly};
use crate::series::LazySeries;
use crate::transform::{pullback, Trace};

/// v(fg) = v(f) + v(g), and v(f+g) >= min with equality when values differ.
pub fn valuation_axioms(emb: &Embedding, pairs: usize, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    while checked < pairs {
        let f = random_poly_expr(&mut rng, emb.n(), 3);
        let g = random_poly_expr(&mut rng, emb.n(), 3);
        if f.is_zero() || g.is_zero() {
            continue;
        }
        let vf = match emb.value(&f).map_err(|e| e.to_string())? {
            Value::Finite(v) => v,
            _ => continue,
        };
        let vg = match emb.value(&g).map_err(|e| e.to_string())? {
            Value::Finite(v) => v,
            _ => continue,
        };
        match emb.value(&f.mul(&g)).map_err(|e| e.to_string())? {
            Value::Finite(vp) if vp == vf + vg => {}
            other => {
                return Err(format!(
                    "v(fg) = {other:?}, expected {} (pair {checked})",
                    vf + vg
                ))
            }
        }
        let sum = f.add(&g);
        match emb.value(&sum).map_err(|e| e.to_string())? {
            Value::Finite(vs) => {
                if vs < vf.min(vg) {
                    return Err(format!(
                        "v(f+g) = {vs} < min({vf}, {vg}) (pair {checked})"
                    ));
                }
                if vf != vg && vs != vf.min(vg) {
                    return Err(format!(
                        "v(f+g) = {vs}, expected min({vf}, {vg}) (pair {checked})"
                    ));
                }
            }
            Value::Infinite => {
                if !sum.is_zero() {
                    return Err(format!("nonzero f+g reported Infinite (pair {checked})"));
                }
            }
            Value::PrecisionExhausted(_) => {
                if vf != vg {
                    return Err(format!(
                        "v(f+g) exhausted although values {vf} != {vg} force the min (pair {checked})"
                    ));
                }
            }
        }
        checked += 1;
    }
    Ok(())
}

/// value(new emb, f) = value(old emb, pullback(f)) whenever both are Finite.
pub fn trace_value_invariance(
    initial: &Embedding,
    trace: &Trace,
    final_emb: &Embedding,
    count: usize,
    seed: u64,
) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = initial.n();
    let mut checked = 0;
    while checked < count {
        let f = random_poly_expr(&mut rng, n, 2);
        if f.is_zero() {
            continue;
        }
        let new_v = match final_emb.value(&f).map_err(|e| e.to_string())? {
            Value::Finite(v) => v,
            _ => continue,
        };
        let back = pullback(trace, &f, n).map_err(|e| e.to_string())?;
        match initial.value(&back).map_err(|e| e.to_string())? {
            Value::Finite(old_v) if old_v == new_v => {}
            other => {
                return Err(format!(
                    "pullback value {other:?} != {new_v} (sample {checked})"
                ))
            }
        }
        checked += 1;
    }
    Ok(())
}

/// equalize_values lands every variable on the integer gcd of the inputs.
pub fn equalize_gcd_oracle(vectors: usize, seed: u64) -> Result<(), String> {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pres = Arc::new(FieldPresentation::simple(&["T2"]));
    for k in 0..vectors {
        let n = rng.gen_range(2..=4usize);
        let values: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=12u64)).collect();
        let images = values
            .iter()
            .map(|&v| LazySeries::monomial(pres.clone(), FieldElem::one(), v))
            .collect();
        let emb = Embedding::new(
            pres.clone(),
            (1..=n).map(|i| format!("X{i}")).collect(),
            images,
            64,
            vec![false; n],
        )
        .map_err(|e| e.to_string())?;
        let (eq, trace) = equalize_values(&emb).map_err(|e| e.to_string())?;
        let g = values.iter().copied().fold(0, gcd);
        if !eq.var_values().iter().all(|&v| v == g) {
            return Err(format!(
                "values {values:?} equalized to {:?}, gcd is {g} (vector {k})",
                eq.var_values()
            ));
        }
        let replayed = crate::transform::replay(&emb, &trace).map_err(|e| e.to_string())?;
        if replayed.var_values() != eq.var_values() {
            return Err(format!("trace replay mismatch on {values:?} (vector {k})"));
        }
    }
    Ok(())
}

/// divide then multiply returns the dividend, coefficient by coefficient.
pub fn divide_multiply_identity(pairs: usize, max_exp: u64, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pres = Arc::new(FieldPresentation::simple(&["T2", "T3"]));
    let random_series = |rng: &mut ChaCha8Rng| {
        let terms = rng.gen_range(1..=6usize);
        let mut map: BTreeMap<u64, FieldElem> = BTreeMap::new();
        for _ in 0..terms {
            let e = rng.gen_range(0..=max_exp);
            let num = rng.gen_range(-5i64..=5);
            if num == 0 {
                continue;
            }
            let sym = rng.gen_range(0..3u32);
            let mut c = FieldElem::constant(BigRational::from_integer(num.into()));
            if sym < 2 {
                c = c.mul(&pres.symbol_elem(sym as usize));
            }
            map.insert(e, c);
        }
        LazySeries::from_parts(pres.clone(), map, Vec::new()).unwrap()
    };
    let mut done = 0;
    while done < pairs {
        let a = random_series(&mut rng);
        let b = random_series(&mut rng);
        if b.is_syntactically_zero() {
            continue;
        }
        // a*b / b must reproduce a
        let prod = a.mul(&b);
        let cap = 3 * max_exp + 8;
        let q = match prod.divide(&b, cap) {
            Ok(q) => q,
            Err(e) => return Err(format!("divide failed on pair {done}: {e}")),
        };
        for e in 0..=2 * max_exp {
            let lhs = q.coefficient(e).map_err(|x| x.to_string())?;
            let rhs = a.coefficient(e).map_err(|x| x.to_string())?;
            if lhs != rhs {
                return Err(format!(
                    "(a*b)/b disagrees with a at t^{e} (pair {done})"
                ));
            }
        }
        done += 1;
    }
    Ok(())
}

// -- transcendence oracle ----------------------------------------------------

pub struct CorpusCase {
    pub generators: Vec<&'static str>,
    pub candidate: &'static str,
    pub expected: Classification,
}

/// 30 fixed cases over Q(T2, T3, T4); every algebraic case has a witness
/// relation of total degree <= 4, so the bounded brute-force search below is
/// a complete oracle on this corpus.
pub fn transcendence_corpus() -> Vec<CorpusCase> {
    use Classification::{Algebraic, Transcendental};
    let c = |generators: Vec<&'static str>, candidate: &'static str, expected| CorpusCase {
        generators,
        candidate,
        expected,
    };
    vec![
        c(vec![], "5", Algebraic),
        c(vec![], "0", Algebraic),
        c(vec![], "T2", Transcendental),
        c(vec![], "T2/T3", Transcendental),
        c(vec!["T2"], "T2^2", Algebraic),
        c(vec!["T2"], "1/T2", Algebraic),
        c(vec!["T2"], "T2^3 + 2*T2", Algebraic),
        c(vec!["T2"], "T3", Transcendental),
        c(vec!["T2"], "T2*T3", Transcendental),
        c(vec!["T2^2"], "T2^4", Algebraic),
        c(vec!["T2^2"], "T2", Algebraic),
        c(vec!["T2^2"], "T3^2", Transcendental),
        c(vec!["T2+T3"], "T2*T3", Transcendental),
        c(vec!["T2*T3"], "T2", Transcendental),
        c(vec!["T2/T3"], "T3/T2", Algebraic),
        c(vec!["T2", "T3"], "T2*T3", Algebraic),
        c(vec!["T2", "T3"], "T2/T3", Algebraic),
        c(vec!["T2", "T3"], "(T2+T3)^2", Algebraic),
        c(vec!["T2", "T3"], "T4", Transcendental),
        c(vec!["T2", "T3"], "T2*T4", Transcendental),
        c(vec!["T2", "T2*T3"], "T3", Algebraic),
        c(vec!["T2+T3", "T2*T3"], "T2", Algebraic),
        c(vec!["T2+T3", "T2*T3"], "T4", Transcendental),
        c(vec!["T2+T3", "T2-T3"], "T3", Algebraic),
        c(vec!["T2", "T3", "T4"], "T2*T3*T4", Algebraic),
        c(vec!["T2", "T3", "T4"], "T2^2/T4", Algebraic),
        c(vec!["T2", "T3", "T2*T4"], "T4", Algebraic),
        c(vec!["T2", "T3", "T4^2"], "T4", Algebraic),
        c(vec!["T2*T3", "T3*T4"], "T2*T4", Transcendental),
        c(vec!["T2", "T3+T4"], "T3*T4", Transcendental),
    ]
}

/// Checks the Jacobian classification against the brute-force relation
/// search on every corpus case.
pub fn transcendence_matches_oracle() -> Result<(), String> {
    let pres = FieldPresentation::simple(&["T2", "T3", "T4"]);
    for (k, case) in transcendence_corpus().iter().enumerate() {
        let gens: Vec<FieldElem> = case
            .generators
            .iter()
            .map(|t| parse_elem(&pres, t).map_err(|e| e.to_string()))
            .collect::<Result<_, _>>()?;
        let cand = parse_elem(&pres, case.candidate).map_err(|e| e.to_string())?;
        let fast = transcendence_test(&pres, &gens, &cand);
        let oracle = if algebraic_by_relation_search(&gens, &cand, 4) {
            Classification::Algebraic
        } else {
            Classification::Transcendental
        };
        if fast != oracle {
            return Err(format!(
                "case {k} ({:?} | {}): jacobian {fast:?}, oracle {oracle:?}",
                case.generators, case.candidate
            ));
        }
        if fast != case.expected {
            return Err(format!(
                "case {k} ({:?} | {}): got {fast:?}, expected {:?}",
                case.generators, case.candidate, case.expected
            ));
        }
    }
    Ok(())
}

fn monomials_up_to(vars: usize, degree: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0u32; vars]];
    for v in 0..vars {
        let mut next = Vec::new();
        for m in &out {
            let used: u32 = m.iter().sum();
            for e in 0..=(degree - used) {
                let mut mm = m.clone();
                mm[v] = e;
                next.push(mm);
            }
        }
        out = next;
    }
    out
}

/// True iff some polynomial relation of total degree <= `degree` with
/// rational coefficients vanishes on (gens, cand) and genuinely involves the
/// candidate.
#[allow(clippy::needless_range_loop)] // index juggling across matrix rows
pub fn algebraic_by_relation_search(
    gens: &[FieldElem],
    cand: &FieldElem,
    degree: u32,
) -> bool {
    let mut elems: Vec<FieldElem> = gens.to_vec();
    elems.push(cand.clone());
    let m = elems.len();
    let monos = monomials_up_to(m, degree);

    // substitute each candidate monomial and clear denominators
    let vals: Vec<FieldElem> = monos
        .iter()
        .map(|exps| {
            let mut acc = FieldElem::one();
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    acc = acc.mul(&elems[i].pow(e as i64));
                }
            }
            acc
        })
        .collect();
    let mut common_den: Poly<BigRational> = Poly::one();
    for v in &vals {
        let g = poly_gcd(&common_den, v.den());
        common_den = common_den.mul(&v.den().exact_div(&g).expect("gcd divides"));
    }
    let cleared: Vec<Poly<BigRational>> = vals
        .iter()
        .map(|v| {
            let extra = common_den.exact_div(v.den()).expect("lcm divisible");
            v.num().mul(&extra)
        })
        .collect();

    // assemble the linear system: rows indexed by underlying monomials
    let mut row_index: BTreeSet<Monomial> = BTreeSet::new();
    for p in &cleared {
        for (mono, _) in p.iter() {
            row_index.insert(mono.clone());
        }
    }
    let rows: Vec<Monomial> = row_index.into_iter().collect();
    let mut matrix: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            cleared
                .iter()
                .map(|p| {
                    p.iter()
                        .find(|(mono, _)| *mono == r)
                        .map(|(_, c)| c.clone())
                        .unwrap_or_else(BigRational::zero)
                })
                .collect()
        })
        .collect();

    // row-reduce and read the kernel off the free columns
    let cols = monos.len();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut rank = 0;
    for col in 0..cols {
        let pivot = (rank..matrix.len()).find(|&r| !matrix[r][col].is_zero());
        let Some(p) = pivot else { continue };
        matrix.swap(rank, p);
        let inv = matrix[rank][col].recip();
        for c in col..cols {
            matrix[rank][c] = &matrix[rank][c] * &inv;
        }
        for r in 0..matrix.len() {
            if r != rank && !matrix[r][col].is_zero() {
                let factor = matrix[r][col].clone();
                for c in col..cols {
                    let delta = &factor * &matrix[rank][c];
                    matrix[r][c] = &matrix[r][c] - delta;
                }
            }
        }
        pivot_of_col[col] = Some(rank);
        rank += 1;
    }

    // one kernel basis vector per free column; a relation involves the
    // candidate iff its support touches a column with positive last exponent
    let involves_cand = |col: usize| monos[col][m - 1] > 0;
    for free in 0..cols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        if involves_cand(free) {
            return true;
        }
        for col in 0..free {
            if let Some(r) = pivot_of_col[col] {
                if !matrix[r][free].is_zero() && involves_cand(col) {
                    return true;
                }
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{psi_a, psi_b};

    #[test]
    fn oracle_direct_cases() {
        let pres = FieldPresentation::simple(&["T2", "T3", "T4"]);
        let t2 = parse_elem(&pres, "T2").unwrap();
        let t3 = parse_elem(&pres, "T3").unwrap();
        let sq = parse_elem(&pres, "T2^2").unwrap();
        assert!(algebraic_by_relation_search(std::slice::from_ref(&t2), &sq, 4));
        assert!(!algebraic_by_relation_search(std::slice::from_ref(&t2), &t3, 4));
        // symmetric functions: T2 is algebraic over (T2+T3, T2*T3)
        let s = parse_elem(&pres, "T2+T3").unwrap();
        let p = parse_elem(&pres, "T2*T3").unwrap();
        assert!(algebraic_by_relation_search(&[s, p], &t2, 4));
    }

    #[test]
    fn corpus_agreement() {
        transcendence_matches_oracle().unwrap();
    }

    #[test]
    fn axiom_suite_smoke() {
        valuation_axioms(&psi_a(), 25, 1).unwrap();
        valuation_axioms(&psi_b(), 25, 2).unwrap();
    }

    #[test]
    fn gcd_oracle_smoke() {
        equalize_gcd_oracle(10, 3).unwrap();
    }

    #[test]
    fn divide_multiply_smoke() {
        divide_multiply_identity(20, 20, 4).unwrap();
    }
}
