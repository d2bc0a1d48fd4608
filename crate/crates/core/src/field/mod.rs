//! Exact arithmetic in the coefficient field Delta = Q(S1,...,Sk), with
//! radical generators handled through exponent-denominator normalization.

pub mod coeff_rule;
pub mod jacobian;
pub mod lex;
pub mod poly;
pub mod presentation;
pub mod ratfunc;
pub mod scalar;

pub use coeff_rule::{parse_elem, CoeffRule};
pub use jacobian::jacobian_rank;
pub use poly::{Monomial, Poly};
pub use presentation::{FieldElem, FieldPresentation};
pub use ratfunc::RatFunc;
pub use scalar::Scalar;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Exact field arithmetic; the result is in canonical form.
pub fn field_arith(a: &FieldElem, b: &FieldElem, op: FieldOp) -> Result<FieldElem> {
    match op {
        FieldOp::Add => Ok(a.add(b)),
        FieldOp::Sub => Ok(a.sub(b)),
        FieldOp::Mul => Ok(a.mul(b)),
        FieldOp::Div => {
            if b.is_zero() {
                Err(Error::DivisionByZero)
            } else {
                Ok(a.div(b))
            }
        }
    }
}
