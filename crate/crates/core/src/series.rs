//! Lazy univariate formal power series in `t` over the coefficient field.
//!
//! A series is a finite explicit part plus closed-form tails, or a derived
//! node over other series (sum, difference, product, quotient). Coefficients
//! are computed on demand and memoized, so every finite prefix of an infinite
//! input is reachable without ever truncating the series itself.
//!
//! Order searches are bounded by a precision cap; exhausting the cap is a
//! first-class result (`SeriesOrder::Exhausted`) and is never treated as zero.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::field::{CoeffRule, FieldElem, FieldPresentation};

/// Closed-form tail: coefficient rule `c(j)` placed at exponent
/// `e(j) = stride*j + offset` for `j >= from`. `stride >= 1` keeps `e`
/// strictly increasing, so each power of `t` receives finitely many
/// contributions.
#[derive(Clone, Debug)]
pub struct Tail {
    pub coeff: CoeffRule,
    pub stride: u64,
    pub offset: i64,
    pub from: i64,
}

impl Tail {
    fn min_exponent(&self) -> i64 {
        self.stride as i64 * self.from + self.offset
    }
}

enum Kind {
    Explicit {
        terms: BTreeMap<u64, FieldElem>,
        tails: Vec<Tail>,
    },
    Sum(LazySeries, LazySeries),
    Diff(LazySeries, LazySeries),
    Prod(LazySeries, LazySeries),
    Quot {
        num: LazySeries,
        den: LazySeries,
        /// Established order of the denominator.
        beta: u64,
    },
}

struct Node {
    kind: Kind,
    /// Every coefficient below this exponent is zero. `u64::MAX` encodes the
    /// syntactically zero series.
    order_lb: u64,
    memo: Mutex<HashMap<u64, FieldElem>>,
}

#[derive(Clone)]
pub struct LazySeries {
    node: Arc<Node>,
    pres: Arc<FieldPresentation>,
}

/// Outcome of a bounded order search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOrder {
    Finite(u64),
    /// The series is syntactically zero.
    Zero,
    /// All coefficients up to the cap vanish but the series is not
    /// syntactically zero.
    Exhausted(u64),
}

impl SeriesOrder {
    pub fn finite(self) -> Option<u64> {
        match self {
            SeriesOrder::Finite(e) => Some(e),
            _ => None,
        }
    }
}

impl LazySeries {
    fn new(pres: Arc<FieldPresentation>, kind: Kind, order_lb: u64) -> Self {
        LazySeries {
            node: Arc::new(Node {
                kind,
                order_lb,
                memo: Mutex::new(HashMap::new()),
            }),
            pres,
        }
    }

    pub fn presentation(&self) -> &Arc<FieldPresentation> {
        &self.pres
    }

    pub fn zero(pres: Arc<FieldPresentation>) -> Self {
        Self::new(
            pres,
            Kind::Explicit {
                terms: BTreeMap::new(),
                tails: Vec::new(),
            },
            u64::MAX,
        )
    }

    pub fn constant(pres: Arc<FieldPresentation>, c: FieldElem) -> Self {
        Self::monomial(pres, c, 0)
    }

    /// `c * t^e`.
    pub fn monomial(pres: Arc<FieldPresentation>, c: FieldElem, e: u64) -> Self {
        if c.is_zero() {
            return Self::zero(pres);
        }
        let mut terms = BTreeMap::new();
        terms.insert(e, c);
        Self::new(
            pres,
            Kind::Explicit {
                terms,
                tails: Vec::new(),
            },
            e,
        )
    }

    pub fn from_parts(
        pres: Arc<FieldPresentation>,
        terms: BTreeMap<u64, FieldElem>,
        tails: Vec<Tail>,
    ) -> Result<Self> {
        let terms: BTreeMap<u64, FieldElem> =
            terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        for tail in &tails {
            if tail.stride == 0 {
                return Err(Error::Invalid(
                    "tail exponent rule must have stride >= 1".into(),
                ));
            }
            if tail.min_exponent() < 0 {
                return Err(Error::Invalid(format!(
                    "tail exponent {} at its from-index is negative",
                    tail.min_exponent()
                )));
            }
        }
        if terms.is_empty() && tails.is_empty() {
            return Ok(Self::zero(pres));
        }
        let lb_terms = terms.keys().next().copied().unwrap_or(u64::MAX);
        let lb_tails = tails
            .iter()
            .map(|t| t.min_exponent() as u64)
            .min()
            .unwrap_or(u64::MAX);
        let lb = lb_terms.min(lb_tails);
        Ok(Self::new(pres, Kind::Explicit { terms, tails }, lb))
    }

    pub fn is_syntactically_zero(&self) -> bool {
        matches!(
            &self.node.kind,
            Kind::Explicit { terms, tails } if terms.is_empty() && tails.is_empty()
        )
    }

    /// Exponent below which every coefficient is known to vanish.
    pub fn order_lower_bound(&self) -> u64 {
        self.node.order_lb
    }

    fn same_pres(&self, other: &LazySeries) {
        assert!(
            Arc::ptr_eq(&self.pres, &other.pres) || *self.pres == *other.pres,
            "series over different field presentations"
        );
    }

    pub fn add(&self, other: &LazySeries) -> LazySeries {
        self.same_pres(other);
        if self.is_syntactically_zero() {
            return other.clone();
        }
        if other.is_syntactically_zero() {
            return self.clone();
        }
        let lb = self.node.order_lb.min(other.node.order_lb);
        Self::new(
            self.pres.clone(),
            Kind::Sum(self.clone(), other.clone()),
            lb,
        )
    }

    pub fn sub(&self, other: &LazySeries) -> LazySeries {
        self.same_pres(other);
        if other.is_syntactically_zero() {
            return self.clone();
        }
        let lb = self.node.order_lb.min(other.node.order_lb);
        Self::new(
            self.pres.clone(),
            Kind::Diff(self.clone(), other.clone()),
            lb,
        )
    }

    pub fn mul(&self, other: &LazySeries) -> LazySeries {
        self.same_pres(other);
        if self.is_syntactically_zero() || other.is_syntactically_zero() {
            return Self::zero(self.pres.clone());
        }
        let lb = self.node.order_lb.saturating_add(other.node.order_lb);
        Self::new(
            self.pres.clone(),
            Kind::Prod(self.clone(), other.clone()),
            lb,
        )
    }

    /// `self^m` as repeated product, `m >= 1`.
    pub fn integer_power(&self, m: u32) -> LazySeries {
        assert!(m >= 1, "integer_power requires m >= 1");
        let mut out = self.clone();
        for _ in 1..m {
            out = out.mul(self);
        }
        out
    }

    /// Quotient `self / den` inside the power series ring. Requires the
    /// orders of both operands to be established within `cap`, and
    /// `ord(self) >= ord(den)`.
    pub fn divide(&self, den: &LazySeries, cap: u64) -> Result<LazySeries> {
        self.same_pres(den);
        let beta = match den.order(cap)? {
            SeriesOrder::Finite(b) => b,
            SeriesOrder::Zero => return Err(Error::DivisionByZero),
            SeriesOrder::Exhausted(c) => {
                return Err(Error::precision(c, "divisor order not established"))
            }
        };
        let alpha = match self.order(cap)? {
            SeriesOrder::Finite(a) => a,
            SeriesOrder::Zero => return Ok(Self::zero(self.pres.clone())),
            SeriesOrder::Exhausted(c) => {
                return Err(Error::precision(c, "dividend order not established"))
            }
        };
        if alpha < beta {
            return Err(Error::Invalid(format!(
                "quotient would leave the power series ring (orders {alpha} < {beta})"
            )));
        }
        Ok(Self::new(
            self.pres.clone(),
            Kind::Quot {
                num: self.clone(),
                den: den.clone(),
                beta,
            },
            alpha - beta,
        ))
    }

    /// Exact coefficient of `t^e`.
    pub fn coefficient(&self, e: u64) -> Result<FieldElem> {
        if e < self.node.order_lb {
            return Ok(FieldElem::zero());
        }
        if let Some(c) = self.node.memo.lock().unwrap().get(&e) {
            return Ok(c.clone());
        }
        let c = self.compute_coefficient(e)?;
        self.node.memo.lock().unwrap().insert(e, c.clone());
        Ok(c)
    }

    fn compute_coefficient(&self, e: u64) -> Result<FieldElem> {
        match &self.node.kind {
            Kind::Explicit { terms, tails } => {
                let mut acc = terms.get(&e).cloned().unwrap_or_else(FieldElem::zero);
                for tail in tails {
                    let num = e as i64 - tail.offset;
                    if num < 0 || num % tail.stride as i64 != 0 {
                        continue;
                    }
                    let j = num / tail.stride as i64;
                    if j < tail.from {
                        continue;
                    }
                    acc = acc.add(&tail.coeff.eval(&self.pres, j)?);
                }
                Ok(acc)
            }
            Kind::Sum(a, b) => Ok(a.coefficient(e)?.add(&b.coefficient(e)?)),
            Kind::Diff(a, b) => Ok(a.coefficient(e)?.sub(&b.coefficient(e)?)),
            Kind::Prod(a, b) => {
                let mut acc = FieldElem::zero();
                let lo = a.node.order_lb;
                let hi = e.saturating_sub(b.node.order_lb);
                for i in lo..=hi {
                    let ca = a.coefficient(i)?;
                    if ca.is_zero() {
                        continue;
                    }
                    acc = acc.add(&ca.mul(&b.coefficient(e - i)?));
                }
                Ok(acc)
            }
            Kind::Quot { num, den, beta } => {
                // a = b*q with lead(b) at t^beta: the standard division
                // recurrence after shifting out t^beta.
                let lead = den.coefficient(*beta)?;
                debug_assert!(!lead.is_zero());
                let mut acc = num.coefficient(e + *beta)?;
                let lb = self.node.order_lb;
                for i in lb..e {
                    let qi = self.coefficient(i)?;
                    if qi.is_zero() {
                        continue;
                    }
                    acc = acc.sub(&qi.mul(&den.coefficient(e + *beta - i)?));
                }
                Ok(acc.div(&lead))
            }
        }
    }

    /// Least exponent `<= cap` with nonzero coefficient.
    pub fn order(&self, cap: u64) -> Result<SeriesOrder> {
        if self.is_syntactically_zero() {
            return Ok(SeriesOrder::Zero);
        }
        let start = self.node.order_lb;
        let mut e = start;
        while e <= cap {
            if !self.coefficient(e)?.is_zero() {
                return Ok(SeriesOrder::Finite(e));
            }
            e += 1;
        }
        Ok(SeriesOrder::Exhausted(cap))
    }

    /// Order and the nonzero coefficient at that order.
    pub fn leading(&self, cap: u64) -> Result<(u64, FieldElem)> {
        match self.order(cap)? {
            SeriesOrder::Finite(e) => Ok((e, self.coefficient(e)?)),
            SeriesOrder::Zero => Err(Error::Invalid(
                "leading coefficient of the zero series".into(),
            )),
            SeriesOrder::Exhausted(c) => Err(Error::precision(c, "order search")),
        }
    }
}

impl std::fmt::Debug for LazySeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "LazySeries(order_lb = {})", self.node.order_lb)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigRational;

    fn pres_u() -> Arc<FieldPresentation> {
        Arc::new(FieldPresentation::simple(&["u"]))
    }

    fn one() -> FieldElem {
        FieldElem::one()
    }

    fn q(n: i64) -> FieldElem {
        FieldElem::constant(BigRational::from_integer(n.into()))
    }

    /// t + t^3 + sum_{i>=1} u^i t^{i+3}
    fn psi_b_x2(pres: &Arc<FieldPresentation>) -> LazySeries {
        let mut terms = BTreeMap::new();
        terms.insert(1, one());
        terms.insert(3, one());
        let tail = Tail {
            coeff: CoeffRule::parse(pres, "u^j", 1).unwrap(),
            stride: 1,
            offset: 3,
            from: 1,
        };
        LazySeries::from_parts(pres.clone(), terms, vec![tail]).unwrap()
    }

    #[test]
    fn tail_coefficients() {
        let pres = pres_u();
        let s = psi_b_x2(&pres);
        let u = pres.symbol_elem(0);
        assert_eq!(s.coefficient(5).unwrap(), u.pow(2));
        assert_eq!(s.coefficient(1).unwrap(), one());
        assert_eq!(s.coefficient(2).unwrap(), FieldElem::zero());
        // explicit t^3 term and the j=0 tail slot do not collide (from = 1)
        assert_eq!(s.coefficient(3).unwrap(), one());
        assert_eq!(s.coefficient(4).unwrap(), u);
    }

    #[test]
    fn monomial_coefficients() {
        let pres = pres_u();
        let s = LazySeries::monomial(pres, one(), 2);
        assert_eq!(s.coefficient(3).unwrap(), FieldElem::zero());
        assert_eq!(s.coefficient(2).unwrap(), one());
    }

    #[test]
    fn product_node() {
        // (T2 t^2 + T3 t^5) * (t^4 + t^6), coefficient of t^8 is T2
        let pres = Arc::new(FieldPresentation::simple(&["T2", "T3"]));
        let t2 = pres.symbol_elem(0);
        let t3 = pres.symbol_elem(1);
        let a = LazySeries::monomial(pres.clone(), t2.clone(), 2)
            .add(&LazySeries::monomial(pres.clone(), t3, 5));
        let b = LazySeries::monomial(pres.clone(), one(), 4)
            .add(&LazySeries::monomial(pres.clone(), one(), 6));
        let p = a.mul(&b);
        assert_eq!(p.coefficient(8).unwrap(), t2);
        assert_eq!(p.coefficient(6).unwrap(), t2);
        assert_eq!(p.coefficient(5).unwrap(), FieldElem::zero());
    }

    #[test]
    fn order_examples() {
        let pres = pres_u();
        let s = LazySeries::monomial(pres.clone(), one(), 2)
            .add(&LazySeries::monomial(pres.clone(), one(), 4));
        assert_eq!(s.order(64).unwrap(), SeriesOrder::Finite(2));

        let pres2 = Arc::new(FieldPresentation::simple(&["T2"]));
        let t2 = pres2.symbol_elem(0);
        let s2 = LazySeries::monomial(pres2.clone(), t2.clone(), 4)
            .add(&LazySeries::monomial(pres2.clone(), t2, 6));
        assert_eq!(s2.order(64).unwrap(), SeriesOrder::Finite(4));

        assert_eq!(
            LazySeries::zero(pres.clone()).order(64).unwrap(),
            SeriesOrder::Zero
        );
    }

    #[test]
    fn identically_zero_but_not_syntactic() {
        // (t + t^2) - t*(1 + t)
        let pres = pres_u();
        let a = LazySeries::monomial(pres.clone(), one(), 1)
            .add(&LazySeries::monomial(pres.clone(), one(), 2));
        let b = LazySeries::monomial(pres.clone(), one(), 1).mul(
            &LazySeries::constant(pres.clone(), one())
                .add(&LazySeries::monomial(pres.clone(), one(), 1)),
        );
        let d = a.sub(&b);
        assert!(!d.is_syntactically_zero());
        assert_eq!(d.order(64).unwrap(), SeriesOrder::Exhausted(64));
    }

    #[test]
    fn divide_examples() {
        let pres = Arc::new(FieldPresentation::simple(&["T2", "T3"]));
        let t2 = pres.symbol_elem(0);
        let t3 = pres.symbol_elem(1);

        // (T2 t^4 + T2 t^6) / t^2 = T2 t^2 + T2 t^4
        let a = LazySeries::monomial(pres.clone(), t2.clone(), 4)
            .add(&LazySeries::monomial(pres.clone(), t2.clone(), 6));
        let d = LazySeries::monomial(pres.clone(), one(), 2);
        let q_ = a.divide(&d, 64).unwrap();
        assert_eq!(q_.coefficient(2).unwrap(), t2);
        assert_eq!(q_.coefficient(4).unwrap(), t2);
        assert_eq!(q_.coefficient(3).unwrap(), FieldElem::zero());
        // multiply-back oracle
        let back = q_.mul(&d);
        for e in 0..=12 {
            assert_eq!(back.coefficient(e).unwrap(), a.coefficient(e).unwrap());
        }

        // t^3 / t^2 = t
        let t3s = LazySeries::monomial(pres.clone(), one(), 3);
        let q2 = t3s.divide(&d, 64).unwrap();
        assert_eq!(q2.order(64).unwrap(), SeriesOrder::Finite(1));
        assert_eq!(q2.coefficient(1).unwrap(), one());

        // (T2 t^2 + T3 t^5) / (T2 t^2) = 1 + (T3/T2) t^3
        let n = LazySeries::monomial(pres.clone(), t2.clone(), 2)
            .add(&LazySeries::monomial(pres.clone(), t3.clone(), 5));
        let den = LazySeries::monomial(pres.clone(), t2.clone(), 2);
        let q3 = n.divide(&den, 64).unwrap();
        assert_eq!(q3.coefficient(0).unwrap(), one());
        assert_eq!(q3.coefficient(3).unwrap(), t3.div(&t2));
        let back3 = q3.mul(&den);
        for e in 0..=12 {
            assert_eq!(back3.coefficient(e).unwrap(), n.coefficient(e).unwrap());
        }

        // order(dividend) < order(divisor) is rejected
        let small = LazySeries::monomial(pres.clone(), one(), 1);
        assert!(small.divide(&d, 64).is_err());
    }

    #[test]
    fn power_examples() {
        let pres = pres_u();
        // (t^2)^3 = t^6
        let s = LazySeries::monomial(pres.clone(), one(), 2).integer_power(3);
        assert_eq!(s.order(64).unwrap(), SeriesOrder::Finite(6));
        // (t + t^3)^2 = t^2 + 2 t^4 + t^6
        let b = LazySeries::monomial(pres.clone(), one(), 1)
            .add(&LazySeries::monomial(pres.clone(), one(), 3));
        let sq = b.integer_power(2);
        assert_eq!(sq.coefficient(2).unwrap(), one());
        assert_eq!(sq.coefficient(4).unwrap(), q(2));
        assert_eq!(sq.coefficient(6).unwrap(), one());
        assert_eq!(sq.coefficient(5).unwrap(), FieldElem::zero());
    }

    #[test]
    fn memo_transparency() {
        let pres = pres_u();
        let s1 = psi_b_x2(&pres);
        let s2 = psi_b_x2(&pres);
        // interleaved queries on s1, ascending sweep on s2
        let order_interleaved = [7u64, 2, 9, 0, 5, 3, 1, 8, 4, 6];
        let mut got = vec![FieldElem::zero(); 10];
        for &e in &order_interleaved {
            got[e as usize] = s1.coefficient(e).unwrap();
        }
        for e in 0..10u64 {
            assert_eq!(got[e as usize], s2.coefficient(e).unwrap());
            // repeated query returns the identical value
            assert_eq!(s1.coefficient(e).unwrap(), got[e as usize]);
        }
    }
}
