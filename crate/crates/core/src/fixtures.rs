//! Ready-made embeddings used throughout the test suites and examples.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::embedding::Embedding;
use crate::field::{CoeffRule, FieldElem, FieldPresentation};
use crate::series::{LazySeries, Tail};

fn one() -> FieldElem {
    FieldElem::one()
}

/// X1 -> t^2, X2 -> T2 t^4 + T2 t^6, X3 -> T2 t^2 + T3 t^5 over Q(T2, T3).
pub fn psi_a() -> Embedding {
    let pres = Arc::new(FieldPresentation::simple(&["T2", "T3"]));
    let t2 = pres.symbol_elem(0);
    let t3 = pres.symbol_elem(1);
    let images = vec![
        LazySeries::monomial(pres.clone(), one(), 2),
        LazySeries::monomial(pres.clone(), t2.clone(), 4)
            .add(&LazySeries::monomial(pres.clone(), t2.clone(), 6)),
        LazySeries::monomial(pres.clone(), t2, 2)
            .add(&LazySeries::monomial(pres.clone(), t3, 5)),
    ];
    Embedding::new(
        pres,
        vec!["X1".into(), "X2".into(), "X3".into()],
        images,
        64,
        vec![false; 3],
    )
    .unwrap()
}

/// X1 -> t, X2 -> t + t^3 + sum_{i>=1} u^i t^{i+3} over Q(u).
pub fn psi_b() -> Embedding {
    let pres = Arc::new(FieldPresentation::simple(&["u"]));
    let mut terms = BTreeMap::new();
    terms.insert(1, one());
    terms.insert(3, one());
    let x2 = LazySeries::from_parts(
        pres.clone(),
        terms,
        vec![Tail {
            coeff: CoeffRule::parse(&pres, "u^j", 1).unwrap(),
            stride: 1,
            offset: 3,
            from: 1,
        }],
    )
    .unwrap();
    let x1 = LazySeries::monomial(pres.clone(), one(), 1);
    Embedding::new(
        pres,
        vec!["X1".into(), "X2".into()],
        vec![x1, x2],
        64,
        vec![false; 2],
    )
    .unwrap()
}

/// Five variables over Q(T2, T3, T4^(1/64)); X5 carries the radical chain
/// T4^(1/2^j) t^(j+1) for j = 1..6 and an ordinary tail beyond.
pub fn psi_c() -> Embedding {
    let pres = Arc::new(
        FieldPresentation::new(vec![
            ("T2".into(), 1),
            ("T3".into(), 1),
            ("T4".into(), 64),
        ])
        .unwrap(),
    );
    let t2 = pres.symbol_elem(0);
    let t3 = pres.symbol_elem(1);
    let t4 = pres.symbol_elem(2);
    let x1 = LazySeries::monomial(pres.clone(), one(), 1);
    let x2 = LazySeries::monomial(pres.clone(), t2.clone(), 1);
    let x3 = LazySeries::monomial(pres.clone(), t2.mul(&t2), 1)
        .add(&LazySeries::monomial(pres.clone(), t2.clone(), 2))
        .add(&LazySeries::monomial(pres.clone(), t3.clone(), 3));
    let x4 = LazySeries::monomial(pres.clone(), t2.mul(&t2).mul(&t2), 1)
        .add(&LazySeries::monomial(pres.clone(), t2.mul(&t2), 2))
        .add(&LazySeries::monomial(pres.clone(), t3, 3))
        .add(&LazySeries::monomial(pres.clone(), t4, 4));
    let mut x5_terms = BTreeMap::new();
    for j in 1..=6u32 {
        let exp = num::BigRational::new(1.into(), num::BigInt::from(2u64.pow(j)));
        let c = pres.symbol_pow(2, &exp).unwrap();
        x5_terms.insert(u64::from(j) + 1, c);
    }
    let x5 = LazySeries::from_parts(
        pres.clone(),
        x5_terms,
        vec![Tail {
            coeff: CoeffRule::parse(&pres, "T4", 7).unwrap(),
            stride: 1,
            offset: 1,
            from: 7,
        }],
    )
    .unwrap();
    Embedding::new(
        pres,
        (1..=5).map(|i| format!("X{i}")).collect(),
        vec![x1, x2, x3, x4, x5],
        64,
        vec![false; 5],
    )
    .unwrap()
}

/// Like `psi_c` but X5 -> T2 t (e^(T4 t) - 1), an infinite algebraic chain
/// with a certified closed form.
pub fn psi_d() -> Embedding {
    let pres = Arc::new(FieldPresentation::simple(&["T2", "T3", "T4"]));
    let t2 = pres.symbol_elem(0);
    let t3 = pres.symbol_elem(1);
    let t4 = pres.symbol_elem(2);
    let x1 = LazySeries::monomial(pres.clone(), one(), 1);
    let x2 = LazySeries::monomial(pres.clone(), t2.clone(), 1);
    let x3 = LazySeries::monomial(pres.clone(), t2.mul(&t2), 1)
        .add(&LazySeries::monomial(pres.clone(), t2.clone(), 2))
        .add(&LazySeries::monomial(pres.clone(), t3.clone(), 3));
    let x4 = LazySeries::monomial(pres.clone(), t2.mul(&t2).mul(&t2), 1)
        .add(&LazySeries::monomial(pres.clone(), t2.mul(&t2), 2))
        .add(&LazySeries::monomial(pres.clone(), t3, 3))
        .add(&LazySeries::monomial(pres.clone(), t4, 4));
    let x5 = LazySeries::from_parts(
        pres.clone(),
        BTreeMap::new(),
        vec![Tail {
            coeff: CoeffRule::parse(&pres, "T2*T4^j/factorial(j)", 1).unwrap(),
            stride: 1,
            offset: 1,
            from: 1,
        }],
    )
    .unwrap();
    Embedding::new(
        pres,
        (1..=5).map(|i| format!("X{i}")).collect(),
        vec![x1, x2, x3, x4, x5],
        64,
        vec![false, false, false, false, true],
    )
    .unwrap()
}

/// The order-function style embedding X1 -> t, Xi -> Ti t for i = 2..=n.
pub fn order_function(n: usize) -> Embedding {
    let names: Vec<String> = (2..=n).map(|i| format!("T{i}")).collect();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let pres = Arc::new(FieldPresentation::simple(&refs));
    let mut images = vec![LazySeries::monomial(pres.clone(), one(), 1)];
    for i in 0..n - 1 {
        images.push(LazySeries::monomial(pres.clone(), pres.symbol_elem(i), 1));
    }
    Embedding::new(
        pres.clone(),
        (1..=n).map(|i| format!("X{i}")).collect(),
        images,
        64,
        vec![false; n],
    )
    .unwrap()
}
