//! The coefficient field presentation: named symbols with optional radical
//! bounds.
//!
//! A declared symbol `S` with radical bound `N` is represented internally by a
//! symbol `s` with `S = s^N`, so every exponent stored in a polynomial is a
//! nonnegative integer and the field stays a pure rational-function field.
//! Displayed exponents are mapped back: internal `s^e` prints as `S^(e/N)`.

use num::{BigInt, BigRational, One, Signed};

use super::poly::Poly;
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};

/// Exact element of the coefficient field Delta.
pub type FieldElem = RatFunc<BigRational>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldPresentation {
    symbols: Vec<String>,
    bounds: Vec<u32>,
}

impl FieldPresentation {
    pub fn new(symbols: Vec<(String, u32)>) -> Result<Self> {
        let mut names = Vec::new();
        let mut bounds = Vec::new();
        for (name, bound) in symbols {
            if name.is_empty() {
                return Err(Error::Invalid("empty symbol name".into()));
            }
            if names.contains(&name) {
                return Err(Error::Invalid(format!("duplicate symbol `{name}`")));
            }
            if bound == 0 {
                return Err(Error::Invalid(format!(
                    "radical bound for `{name}` must be >= 1"
                )));
            }
            names.push(name);
            bounds.push(bound);
        }
        Ok(FieldPresentation {
            symbols: names,
            bounds,
        })
    }

    pub fn simple(names: &[&str]) -> Self {
        FieldPresentation {
            symbols: names.iter().map(|s| s.to_string()).collect(),
            bounds: vec![1; names.len()],
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.symbols
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == name)
    }

    pub fn radical_bound(&self, i: usize) -> u32 {
        self.bounds[i]
    }

    /// The declared symbol as a field element (internally `s^N`).
    pub fn symbol_elem(&self, i: usize) -> FieldElem {
        RatFunc::from_poly(Poly::monomial(
            super::poly::Monomial::var_pow(i, self.bounds[i]),
            BigRational::one(),
        ))
    }

    /// Declared symbol raised to an exact rational power. Fails unless the
    /// denominator divides the symbol's radical bound.
    pub fn symbol_pow(&self, i: usize, exp: &BigRational) -> Result<FieldElem> {
        let scaled = exp * BigRational::from_integer(BigInt::from(self.bounds[i]));
        if !scaled.is_integer() {
            return Err(Error::Invalid(format!(
                "exponent {exp} of `{}` does not resolve through radical bound {}",
                self.symbols[i], self.bounds[i]
            )));
        }
        let e = scaled.to_integer();
        let mag: u32 = e
            .abs()
            .try_into()
            .map_err(|_| Error::Invalid(format!("exponent {exp} too large")))?;
        let m = super::poly::Monomial::var_pow(i, mag);
        let p = RatFunc::from_poly(Poly::monomial(m, BigRational::one()));
        if e.is_negative() {
            Ok(p.inv())
        } else {
            Ok(p)
        }
    }

    // -- rendering ----------------------------------------------------------

    fn render_monomial(&self, m: &super::poly::Monomial) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.exps().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let shown = BigRational::new(BigInt::from(e), BigInt::from(self.bounds[i]));
            let name = &self.symbols[i];
            if shown.is_one() {
                parts.push(name.clone());
            } else if shown.is_integer() {
                parts.push(format!("{name}^{}", shown.to_integer()));
            } else {
                parts.push(format!("{name}^({shown})"));
            }
        }
        parts.join("*")
    }

    pub fn render_poly(&self, p: &Poly<BigRational>) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        // leading term first
        for (m, c) in p.iter().collect::<Vec<_>>().into_iter().rev() {
            let mono = self.render_monomial(m);
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            if mono.is_empty() {
                out.push_str(&format!("{mag}"));
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        out
    }

    pub fn render_elem(&self, e: &FieldElem) -> String {
        let num = self.render_poly(e.num());
        if e.den().is_constant() && e.den().constant_value().map(|c| c.is_one()).unwrap_or(false) {
            return num;
        }
        let den = self.render_poly(e.den());
        let num = if e.num().num_terms() > 1 {
            format!("({num})")
        } else {
            num
        };
        // the denominator must read as a single atom after `/`
        let den = if den.contains(['+', '-', '*', ' ']) {
            format!("({den})")
        } else {
            den
        };
        format!("{num}/{den}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radical_exponents() {
        let pres =
            FieldPresentation::new(vec![("T2".into(), 1), ("T4".into(), 2)]).unwrap();
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let e = pres.symbol_pow(1, &half).unwrap();
        assert_eq!(pres.render_elem(&e), "T4^(1/2)");
        let sq = e.mul(&e);
        assert_eq!(sq, pres.symbol_elem(1));
        // denominator not dividing the bound is rejected
        let third = BigRational::new(BigInt::from(1), BigInt::from(3));
        assert!(pres.symbol_pow(1, &third).is_err());
    }

    #[test]
    fn duplicate_symbols_rejected() {
        assert!(FieldPresentation::new(vec![("T".into(), 1), ("T".into(), 1)]).is_err());
    }

    #[test]
    fn rendering() {
        let pres = FieldPresentation::simple(&["T2", "T3"]);
        let t2 = pres.symbol_elem(0);
        let t3 = pres.symbol_elem(1);
        let e = t2.div(&t3).add(&t3.div(&t2));
        assert_eq!(pres.render_elem(&e), "(T2^2 + T3^2)/(T2*T3)");
    }
}
