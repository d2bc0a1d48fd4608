//! The two basic transformations and variable swap, applied to embeddings
//! with full trace recording and inverse expressions.
//!
//! Substitutions act on variables: Monoidal(i, j) is X_i = Y_j*Y_i, a swap
//! exchanges two variables, and CoordChange(i, b, m) is X_i = Y_i + b*Y_1^m
//! with the pivot fixed at position 1. Each is invertible, so every final
//! variable has a rational expression in the original variables; values are
//! preserved under that pullback.

use crate::embedding::{expr_const, expr_var, Embedding, FieldExpr};
use crate::error::{Error, Result};
use crate::field::{FieldElem, Poly};
use crate::series::{LazySeries, SeriesOrder};

#[derive(Clone, Debug, PartialEq)]
pub enum TransformStep {
    /// X_i = Y_j * Y_i: divide image i by image j.
    Monoidal { i: usize, j: usize },
    Swap { i: usize, j: usize },
    /// X_i = Y_i + b * Y_1^m: subtract b * psi_1^m from image i.
    CoordChange { i: usize, b: FieldElem, m: u32 },
}

#[derive(Clone, Debug)]
pub struct TraceEntry {
    pub step: TransformStep,
    /// Values of all variables after the step.
    pub values_after: Vec<u64>,
}

#[derive(Clone, Debug, Default)]
pub struct Trace {
    pub entries: Vec<TraceEntry>,
}

impl Trace {
    pub fn new() -> Self {
        Trace { entries: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Applies a step to the embedding and records it with the resulting
    /// value snapshot.
    pub fn apply(&mut self, emb: &Embedding, step: TransformStep) -> Result<Embedding> {
        let next = apply_step(emb, &step)?;
        self.entries.push(TraceEntry {
            step,
            values_after: next.var_values().to_vec(),
        });
        Ok(next)
    }

    pub fn extend(&mut self, other: Trace) {
        self.entries.extend(other.entries);
    }
}

pub fn apply_step(emb: &Embedding, step: &TransformStep) -> Result<Embedding> {
    let n = emb.n();
    let mut images: Vec<LazySeries> = emb.images().to_vec();
    let mut flags: Vec<bool> = (0..n).map(|i| emb.certified_infinite(i)).collect();
    match step {
        TransformStep::Monoidal { i, j } => {
            let (i, j) = (*i, *j);
            if i == j || i >= n || j >= n {
                return Err(Error::Invalid(format!("bad monoidal indices ({i}, {j})")));
            }
            if emb.var_values()[i] < emb.var_values()[j] {
                return Err(Error::Invalid(format!(
                    "monoidal step would exit the power series ring: value({}) = {} < value({}) = {}",
                    emb.variables()[i],
                    emb.var_values()[i],
                    emb.variables()[j],
                    emb.var_values()[j]
                )));
            }
            images[i] = images[i].divide(&images[j], emb.cap())?;
        }
        TransformStep::Swap { i, j } => {
            let (i, j) = (*i, *j);
            if i >= n || j >= n {
                return Err(Error::Invalid(format!("bad swap indices ({i}, {j})")));
            }
            images.swap(i, j);
            flags.swap(i, j);
        }
        TransformStep::CoordChange { i, b, m } => {
            let (i, m) = (*i, *m);
            if i == 0 || i >= n {
                return Err(Error::Invalid(format!("bad coordinate-change target {i}")));
            }
            if b.is_zero() {
                return Err(Error::Invalid("coordinate change with b = 0".into()));
            }
            if m == 0 {
                return Err(Error::Invalid("coordinate change with m = 0".into()));
            }
            let shift = LazySeries::constant(emb.presentation().clone(), b.clone())
                .mul(&images[0].integer_power(m));
            let next = images[i].sub(&shift);
            match next.order(emb.cap())? {
                SeriesOrder::Finite(_) => {}
                SeriesOrder::Zero => {
                    return Err(Error::Invalid(format!(
                        "coordinate change annihilates `{}`",
                        emb.variables()[i]
                    )))
                }
                SeriesOrder::Exhausted(c) => {
                    return Err(Error::precision(
                        c,
                        format!("order of `{}` after coordinate change", emb.variables()[i]),
                    ))
                }
            }
            images[i] = next;
        }
    }
    emb.with_images(images, flags)
}

/// Replays the trace from `initial`, verifying every recorded snapshot.
pub fn replay(initial: &Embedding, trace: &Trace) -> Result<Embedding> {
    let mut cur = initial.clone();
    for (k, entry) in trace.entries.iter().enumerate() {
        cur = apply_step(&cur, &entry.step)?;
        if cur.var_values() != entry.values_after.as_slice() {
            return Err(Error::Invalid(format!(
                "trace snapshot mismatch at step {k}: replay gives {:?}, recorded {:?}",
                cur.var_values(),
                entry.values_after
            )));
        }
    }
    Ok(cur)
}

/// For each final variable, its rational expression in the original
/// variables, obtained by composing step inverses.
pub fn express_new_in_old(trace: &Trace, n: usize) -> Vec<FieldExpr> {
    let mut exprs: Vec<FieldExpr> = (0..n).map(expr_var).collect();
    for entry in &trace.entries {
        match &entry.step {
            TransformStep::Monoidal { i, j } => {
                exprs[*i] = exprs[*i].div(&exprs[*j]);
            }
            TransformStep::Swap { i, j } => {
                exprs.swap(*i, *j);
            }
            TransformStep::CoordChange { i, b, m } => {
                let shift = expr_const(b.clone()).mul(&exprs[0].pow(*m as i64));
                exprs[*i] = exprs[*i].sub(&shift);
            }
        }
    }
    exprs
}

fn subst_poly(p: &Poly<FieldElem>, point: &[FieldExpr]) -> FieldExpr {
    let mut acc = FieldExpr::zero();
    for (mono, c) in p.iter() {
        let mut term = expr_const(c.clone());
        for (i, &e) in mono.exps().iter().enumerate() {
            if e > 0 {
                term = term.mul(&point[i].pow(e as i64));
            }
        }
        acc = acc.add(&term);
    }
    acc
}

/// Substitutes the new-variable expressions of the trace into `f`, producing
/// an expression over the original variables.
pub fn pullback(trace: &Trace, f: &FieldExpr, n: usize) -> Result<FieldExpr> {
    let exprs = express_new_in_old(trace, n);
    let num = subst_poly(f.num(), &exprs);
    let den = subst_poly(f.den(), &exprs);
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(num.div(&den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::{parse_expr, render_expr, Value};
    use crate::fixtures::{psi_a, psi_b};

    fn pe(emb: &Embedding, text: &str) -> FieldExpr {
        parse_expr(emb.presentation(), emb.variables(), text).unwrap()
    }

    #[test]
    fn monoidal_divides() {
        let a = psi_a();
        let t2 = a.presentation().symbol_elem(0);
        let next = apply_step(&a, &TransformStep::Monoidal { i: 1, j: 0 }).unwrap();
        // psi_2' = (T2 t^4 + T2 t^6)/t^2 = T2 t^2 + T2 t^4
        assert_eq!(next.var_values(), &[2, 2, 2]);
        assert_eq!(next.image(1).coefficient(2).unwrap(), t2);
        assert_eq!(next.image(1).coefficient(4).unwrap(), t2);
        assert_eq!(next.image(1).coefficient(3).unwrap(), FieldElem::zero());
        // divide-then-multiply oracle
        let back = next.image(1).mul(a.image(0));
        for e in 0..=12u64 {
            assert_eq!(
                back.coefficient(e).unwrap(),
                a.image(1).coefficient(e).unwrap()
            );
        }
    }

    #[test]
    fn monoidal_rejects_smaller_value() {
        let a = psi_a();
        // value(X1) = 2 < value(X2) = 4
        assert!(apply_step(&a, &TransformStep::Monoidal { i: 0, j: 1 }).is_err());
    }

    #[test]
    fn swap_is_involution() {
        let a = psi_a();
        let s = TransformStep::Swap { i: 0, j: 1 };
        let twice = apply_step(&apply_step(&a, &s).unwrap(), &s).unwrap();
        assert_eq!(twice.var_values(), a.var_values());
        for i in 0..3 {
            for e in 0..=10u64 {
                assert_eq!(
                    twice.image(i).coefficient(e).unwrap(),
                    a.image(i).coefficient(e).unwrap()
                );
            }
        }
    }

    #[test]
    fn coord_change_cancels_leading_term() {
        // equalized Psi_A: after Monoidal(2,1) all values are 2; then
        // CoordChange(3, T2, 1) on the pivot t^2 kills the t^2 term of psi_3
        let a = psi_a();
        let t2 = a.presentation().symbol_elem(0);
        let t3 = a.presentation().symbol_elem(1);
        let eq = apply_step(&a, &TransformStep::Monoidal { i: 1, j: 0 }).unwrap();
        let next = apply_step(
            &eq,
            &TransformStep::CoordChange {
                i: 2,
                b: t2,
                m: 1,
            },
        )
        .unwrap();
        // psi_3' = (T2 t^2 + T3 t^5) - T2 * t^2 = T3 t^5
        assert_eq!(next.var_values()[2], 5);
        assert_eq!(next.image(2).coefficient(5).unwrap(), t3);
        for e in 0..5u64 {
            assert_eq!(next.image(2).coefficient(e).unwrap(), FieldElem::zero());
        }
    }

    #[test]
    fn trace_replay_determinism() {
        let a = psi_a();
        let t2 = a.presentation().symbol_elem(0);
        let mut trace = Trace::new();
        let mut cur = trace.apply(&a, TransformStep::Monoidal { i: 1, j: 0 }).unwrap();
        cur = trace
            .apply(&cur, TransformStep::CoordChange { i: 2, b: t2, m: 1 })
            .unwrap();
        cur = trace.apply(&cur, TransformStep::Swap { i: 1, j: 2 }).unwrap();
        let replayed = replay(&a, &trace).unwrap();
        assert_eq!(replayed.var_values(), cur.var_values());
    }

    #[test]
    fn express_single_monoidal() {
        let mut trace = Trace::new();
        let a = psi_a();
        trace.apply(&a, TransformStep::Monoidal { i: 1, j: 0 }).unwrap();
        let exprs = express_new_in_old(&trace, 3);
        assert_eq!(exprs[0], expr_var(0));
        assert_eq!(exprs[1], expr_var(1).div(&expr_var(0)));
        assert_eq!(exprs[2], expr_var(2));
    }

    #[test]
    fn express_monoidal_then_coord() {
        // Monoidal(2,1) then CoordChange(2, T2, 1):
        // Y2 = X2/X1 - T2*X1 = (X2 - T2*X1^2)/X1
        let a = psi_a();
        let t2 = a.presentation().symbol_elem(0);
        let mut trace = Trace::new();
        let mid = trace.apply(&a, TransformStep::Monoidal { i: 1, j: 0 }).unwrap();
        let fin = trace
            .apply(&mid, TransformStep::CoordChange { i: 1, b: t2, m: 1 })
            .unwrap();
        let exprs = express_new_in_old(&trace, 3);
        let expected = pe(&a, "(X2 - {T2}*X1^2)/X1");
        assert_eq!(exprs[1], expected);
        // substitute back: value of the expression under the original
        // embedding equals the recorded snapshot value
        let v = a.value(&exprs[1]).unwrap().finite().unwrap();
        assert_eq!(v, fin.var_values()[1] as i64);
    }

    #[test]
    fn empty_trace_is_identity() {
        let exprs = express_new_in_old(&Trace::new(), 3);
        for (i, e) in exprs.iter().enumerate() {
            assert_eq!(*e, expr_var(i));
        }
    }

    #[test]
    fn pullback_examples() {
        let a = psi_a();
        let mut trace = Trace::new();
        trace.apply(&a, TransformStep::Monoidal { i: 1, j: 0 }).unwrap();
        // f = Y2 pulls back to X2/X1
        let f = expr_var(1);
        let g = pullback(&trace, &f, 3).unwrap();
        assert_eq!(g, expr_var(1).div(&expr_var(0)));
        assert_eq!(render_expr(a.presentation(), a.variables(), &g), "X2/X1");
    }

    #[test]
    fn pullback_value_invariance() {
        let a = psi_a();
        let t2 = a.presentation().symbol_elem(0);
        let mut trace = Trace::new();
        let mut cur = trace.apply(&a, TransformStep::Monoidal { i: 1, j: 0 }).unwrap();
        cur = trace
            .apply(&cur, TransformStep::CoordChange { i: 2, b: t2, m: 1 })
            .unwrap();
        for text in ["Y1 + Y2", "Y3^2 - Y1*Y2", "Y2/Y1", "{T3}*Y1^3 + Y3"] {
            let f = parse_expr(
                a.presentation(),
                &["Y1".into(), "Y2".into(), "Y3".into()],
                text,
            )
            .unwrap();
            let new_v = cur.value(&f).unwrap();
            let old_v = a.value(&pullback(&trace, &f, 3).unwrap()).unwrap();
            assert_eq!(new_v, old_v, "value invariance for {text}");
        }
        assert!(matches!(cur.value(&expr_var(0)).unwrap(), Value::Finite(2)));
    }

    #[test]
    fn psi_b_chain_subtractions_by_coord_changes() {
        // Psi_B: Y2 - Y1 has value 3, then after another residue subtraction
        // value 4: v(X2 - X1 - X1^3) = 4
        let b = psi_b();
        let one = FieldElem::one();
        let s1 = apply_step(
            &b,
            &TransformStep::CoordChange { i: 1, b: one.clone(), m: 1 },
        )
        .unwrap();
        assert_eq!(s1.var_values()[1], 3);
        let s2 = apply_step(&s1, &TransformStep::CoordChange { i: 1, b: one, m: 3 })
            .unwrap();
        assert_eq!(s2.var_values()[1], 4);
    }
}
