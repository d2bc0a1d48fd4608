//! Sparse multivariate polynomials over an exact coefficient field.
//!
//! Monomials keep their exponent vectors with trailing zeros trimmed, so
//! structural equality is semantic equality. The derived `Ord` on the trimmed
//! vector is the lex order with the first symbol strongest; division and
//! leading-term extraction rely on it.

use std::collections::BTreeMap;

use super::scalar::Scalar;

/// Exponent vector, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(i: usize) -> Self {
        Self::var_pow(i, 1)
    }

    pub fn var_pow(i: usize, e: u32) -> Self {
        if e == 0 {
            return Self::unit();
        }
        let mut v = vec![0; i + 1];
        v[i] = e;
        Monomial(v)
    }

    pub fn from_exps(mut v: Vec<u32>) -> Self {
        while v.last() == Some(&0) {
            v.pop();
        }
        Monomial(v)
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        let mut v = vec![0u32; n];
        for (i, slot) in v.iter_mut().enumerate() {
            *slot = self.exp(i) + other.exp(i);
        }
        Monomial::from_exps(v)
    }

    /// Componentwise division; `None` if any exponent would go negative.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut v = vec![0u32; self.0.len()];
        for (i, slot) in v.iter_mut().enumerate() {
            let (a, b) = (self.exp(i), other.exp(i));
            if a < b {
                return None;
            }
            *slot = a - b;
        }
        if other.0.len() > self.0.len() {
            return None;
        }
        Some(Monomial::from_exps(v))
    }

    pub fn with_exp(&self, i: usize, e: u32) -> Monomial {
        let n = self.0.len().max(i + 1);
        let mut v = vec![0u32; n];
        v[..self.0.len()].copy_from_slice(&self.0);
        v[i] = e;
        Monomial::from_exps(v)
    }
}

/// Sparse multivariate polynomial; only nonzero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<K: Scalar> {
    terms: BTreeMap<Monomial, K>,
}

impl<K: Scalar> Poly<K> {
    pub fn zero() -> Self {
        Poly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(K::one())
    }

    pub fn constant(k: K) -> Self {
        let mut terms = BTreeMap::new();
        if !k.is_zero() {
            terms.insert(Monomial::unit(), k);
        }
        Poly { terms }
    }

    pub fn var(i: usize) -> Self {
        Self::monomial(Monomial::var(i), K::one())
    }

    pub fn monomial(m: Monomial, k: K) -> Self {
        let mut terms = BTreeMap::new();
        if !k.is_zero() {
            terms.insert(m, k);
        }
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.keys().all(|m| m.is_unit())
    }

    pub fn constant_value(&self) -> Option<&K> {
        if self.is_constant() {
            self.terms.get(&Monomial::unit())
        } else {
            None
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &K)> {
        self.terms.iter()
    }

    /// Leading term under lex order; `None` for the zero polynomial.
    pub fn leading(&self) -> Option<(&Monomial, &K)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    /// Highest symbol index that occurs with nonzero exponent.
    pub fn max_var(&self) -> Option<usize> {
        self.terms
            .keys()
            .filter_map(|m| {
                m.exps()
                    .iter()
                    .rposition(|&e| e > 0)
            })
            .max()
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    fn insert_add(&mut self, m: Monomial, k: K) {
        if k.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(c) => {
                let s = c.add(&k);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *c = s;
                }
            }
            None => {
                self.terms.insert(m, k);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, k) in &other.terms {
            out.insert_add(m.clone(), k.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, k) in &other.terms {
            out.insert_add(m.clone(), k.neg());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k.neg()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Poly::zero();
        for (ma, ka) in &self.terms {
            for (mb, kb) in &other.terms {
                out.insert_add(ma.mul(mb), ka.mul(kb));
            }
        }
        out
    }

    pub fn scale(&self, k: &K) -> Self {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.mul(k)))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(mm, c)| (mm.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Poly::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Exact division: `Some(q)` with `self = q * d`, `None` if `d` does not
    /// divide `self`. Multivariate long division against the lex leading term.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "exact_div by zero polynomial");
        let mut q = Poly::zero();
        let mut r = self.clone();
        let (dm, dc) = {
            let (m, c) = d.leading().unwrap();
            (m.clone(), c.clone())
        };
        while !r.is_zero() {
            let (rm, rc) = {
                let (m, c) = r.leading().unwrap();
                (m.clone(), c.clone())
            };
            let m = rm.div(&dm)?;
            let c = rc.div(&dc);
            let t = Poly::monomial(m, c);
            r = r.sub(&t.mul(d));
            q = q.add(&t);
        }
        Some(q)
    }

    pub fn partial_derivative(&self, v: usize) -> Self {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e == 0 {
                continue;
            }
            let mut factor = K::zero();
            for _ in 0..e {
                factor = factor.add(&K::one());
            }
            out.insert_add(m.with_exp(v, e - 1), c.mul(&factor));
        }
        out
    }

    /// Evaluate at a point; `point` must cover every occurring symbol.
    pub fn eval(&self, point: &[K]) -> K {
        let mut acc = K::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                for _ in 0..e {
                    term = term.mul(&point[i]);
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Map coefficients; drops terms that map to zero.
    pub fn map_coeffs<L: Scalar>(&self, f: impl Fn(&K) -> L) -> Poly<L> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.insert_add(m.clone(), f(c));
        }
        out
    }
}

// -- gcd machinery ----------------------------------------------------------
//
// Recursive primitive-PRS gcd: view the polynomial as univariate in its
// highest symbol with coefficients in the remaining symbols, split off the
// content, and run a pseudo-remainder sequence made primitive at each step.

/// Dense univariate view in one selected symbol; index = exponent.
fn to_uni<K: Scalar>(p: &Poly<K>, v: usize) -> Vec<Poly<K>> {
    let d = p.degree_in(v) as usize;
    let mut out = vec![Poly::zero(); d + 1];
    for (m, c) in p.iter() {
        let e = m.exp(v) as usize;
        out[e] = out[e].add(&Poly::monomial(m.with_exp(v, 0), c.clone()));
    }
    out
}

fn from_uni<K: Scalar>(u: &[Poly<K>], v: usize) -> Poly<K> {
    let mut out = Poly::zero();
    for (e, c) in u.iter().enumerate() {
        let xe = Poly::monomial(Monomial::var_pow(v, e as u32), K::one());
        out = out.add(&c.mul(&xe));
    }
    out
}

fn uni_deg<K: Scalar>(u: &[Poly<K>]) -> Option<usize> {
    u.iter().rposition(|c| !c.is_zero())
}

fn uni_trim<K: Scalar>(mut u: Vec<Poly<K>>) -> Vec<Poly<K>> {
    while u.last().map(|c| c.is_zero()).unwrap_or(false) {
        u.pop();
    }
    u
}

fn content<K: Scalar>(u: &[Poly<K>]) -> Poly<K> {
    let mut g = Poly::zero();
    for c in u {
        if !c.is_zero() {
            g = gcd(&g, c);
        }
    }
    g
}

fn uni_divide_content<K: Scalar>(u: &[Poly<K>], c: &Poly<K>) -> Vec<Poly<K>> {
    u.iter()
        .map(|p| {
            if p.is_zero() {
                Poly::zero()
            } else {
                p.exact_div(c).expect("content must divide")
            }
        })
        .collect()
}

/// Pseudo-remainder of `f` by `g` (both univariate views, `g` nonzero).
fn prem<K: Scalar>(f: &[Poly<K>], g: &[Poly<K>]) -> Vec<Poly<K>> {
    let dg = uni_deg(g).expect("prem by zero");
    let lg = g[dg].clone();
    let mut r = f.to_vec();
    loop {
        let dr = match uni_deg(&r) {
            Some(d) if d >= dg => d,
            _ => return uni_trim(r),
        };
        let lr = r[dr].clone();
        // r = lg*r - lr * x^(dr-dg) * g
        let mut next = vec![Poly::zero(); dr.max(r.len().saturating_sub(1)) + 1];
        for (e, c) in r.iter().enumerate() {
            next[e] = c.mul(&lg);
        }
        for (e, c) in g.iter().enumerate() {
            let idx = e + dr - dg;
            next[idx] = next[idx].sub(&c.mul(&lr));
        }
        r = uni_trim(next);
    }
}

fn primitive<K: Scalar>(u: Vec<Poly<K>>) -> Vec<Poly<K>> {
    let u = uni_trim(u);
    if u.is_empty() {
        return u;
    }
    let c = content(&u);
    uni_divide_content(&u, &c)
}

/// Greatest common divisor, determined up to a unit of the coefficient field.
pub fn gcd<K: Scalar>(a: &Poly<K>, b: &Poly<K>) -> Poly<K> {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    let v = a
        .max_var()
        .into_iter()
        .chain(b.max_var())
        .max()
        .expect("non-constant polynomials have a main variable");

    let ua = to_uni(a, v);
    let ub = to_uni(b, v);
    let ca = content(&ua);
    let cb = content(&ub);
    let pa = uni_divide_content(&ua, &ca);
    let pb = uni_divide_content(&ub, &cb);

    let (mut f, mut g) = if uni_deg(&pa) >= uni_deg(&pb) {
        (pa, pb)
    } else {
        (pb, pa)
    };
    loop {
        let r = prem(&f, &g);
        if uni_deg(&r).is_none() {
            break;
        }
        f = g;
        g = primitive(r);
    }
    let g = primitive(g);
    let cg = gcd(&ca, &cb);
    from_uni(&g, v).mul(&cg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    type P = Poly<BigRational>;

    fn x() -> P {
        P::var(0)
    }
    fn y() -> P {
        P::var(1)
    }

    #[test]
    fn arithmetic_basics() {
        let p = x().add(&y()); // x + y
        let sq = p.mul(&p);
        // x^2 + 2xy + y^2
        assert_eq!(sq.num_terms(), 3);
        assert_eq!(sq.sub(&sq), P::zero());
        assert_eq!(p.mul(&P::zero()), P::zero());
    }

    #[test]
    fn exact_division() {
        let p = x().mul(&x()).sub(&y().mul(&y())); // x^2 - y^2
        let d = x().sub(&y());
        let q_ = p.exact_div(&d).unwrap();
        assert_eq!(q_, x().add(&y()));
        assert!(x().exact_div(&y()).is_none());
    }

    #[test]
    fn gcd_common_factor() {
        let f = x().add(&y()); // x + y
        let a = f.mul(&x());
        let b = f.mul(&y());
        let g = gcd(&a, &b);
        // gcd is x + y up to a rational unit
        assert!(a.exact_div(&g).is_some());
        assert!(b.exact_div(&g).is_some());
        assert_eq!(g.total_degree(), 1);
    }

    #[test]
    fn gcd_coprime_is_unit() {
        let g = gcd(&x(), &y().add(&P::one()));
        assert!(g.is_constant());
    }

    #[test]
    fn gcd_univariate_powers() {
        let a = P::monomial(Monomial::var_pow(0, 5), q(2));
        let b = P::monomial(Monomial::var_pow(0, 3), q(3));
        let g = gcd(&a, &b);
        assert_eq!(g.degree_in(0), 3);
    }

    #[test]
    fn derivative() {
        let p = x().mul(&x()).mul(&y()); // x^2 y
        let d = p.partial_derivative(0);
        assert_eq!(d, x().mul(&y()).scale(&q(2)));
        assert_eq!(p.partial_derivative(2), P::zero());
    }
}
