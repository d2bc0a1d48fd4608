//! Rational functions over a [`Scalar`] field, kept in canonical form.
//!
//! Canonical means: numerator and denominator share no common factor, the
//! denominator's lex-leading coefficient is 1, and zero is `0/1`. Equality is
//! therefore structural.

use super::poly::{gcd, Poly};
use super::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunc<K: Scalar> {
    num: Poly<K>,
    den: Poly<K>,
}

impl<K: Scalar> RatFunc<K> {
    pub fn new(num: Poly<K>, den: Poly<K>) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        let mut rf = RatFunc { num, den };
        rf.normalize();
        rf
    }

    pub fn from_poly(p: Poly<K>) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(k: K) -> Self {
        Self::from_poly(Poly::constant(k))
    }

    pub fn var(i: usize) -> Self {
        Self::from_poly(Poly::var(i))
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn num(&self) -> &Poly<K> {
        &self.num
    }

    pub fn den(&self) -> &Poly<K> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == Poly::one() && self.den == Poly::one()
    }

    /// `Some` if the value lies in the coefficient field itself.
    pub fn as_constant(&self) -> Option<K> {
        if self.num.is_zero() && self.den.is_constant() {
            return Some(K::zero());
        }
        match (self.num.constant_value(), self.den.constant_value()) {
            (Some(n), Some(d)) => Some(n.div(d)),
            _ => None,
        }
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = Poly::one();
            return;
        }
        let g = gcd(&self.num, &self.den);
        if !g.is_constant() {
            self.num = self.num.exact_div(&g).expect("gcd divides numerator");
            self.den = self.den.exact_div(&g).expect("gcd divides denominator");
        }
        let lc = self.den.leading().expect("nonzero denominator").1.clone();
        if lc != K::one() {
            let inv = K::one().div(&lc);
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        RatFunc::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        RatFunc::new(
            self.num.mul(&other.den).sub(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        RatFunc::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "rational function division by zero");
        RatFunc::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn neg(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut out = Self::one();
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Formal partial derivative by symbol index (quotient rule).
    pub fn partial_derivative(&self, v: usize) -> Self {
        let dn = self.num.partial_derivative(v);
        let dd = self.den.partial_derivative(v);
        RatFunc::new(
            dn.mul(&self.den).sub(&self.num.mul(&dd)),
            self.den.mul(&self.den),
        )
    }

    /// Evaluate at a point; `None` if the denominator vanishes there.
    pub fn eval(&self, point: &[K]) -> Option<K> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(point).div(&d))
    }

    pub fn max_var(&self) -> Option<usize> {
        self.num.max_var().into_iter().chain(self.den.max_var()).max()
    }
}

impl<K: Scalar> Scalar for RatFunc<K> {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        RatFunc::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        RatFunc::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        RatFunc::mul(self, other)
    }
    fn div(&self, other: &Self) -> Self {
        RatFunc::div(self, other)
    }
    fn neg(&self) -> Self {
        RatFunc::neg(self)
    }
}
