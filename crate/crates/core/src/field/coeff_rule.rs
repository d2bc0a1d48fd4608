//! Closed-form coefficient rules: expressions in the field symbols and an
//! integer parameter `j`.
//!
//! Grammar: rationals `p/q`, symbols, `+ - * / ^ ( )`, `j`, `factorial(j)`.
//! `^` exponents are integers or `j`-linear forms `a*j + b`; when the base is
//! a declared symbol, fractional parts of `a` and `b` must have denominators
//! dividing that symbol's radical bound (checked at parse time).

use num::{BigInt, BigRational, One, Zero};

use super::lex::{Lexer, Token};
use super::presentation::{FieldElem, FieldPresentation};
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};

/// A linear form `a*j + b` with exact rational coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct LinExp {
    pub a: BigRational,
    pub b: BigRational,
}

impl LinExp {
    pub fn constant(b: BigRational) -> Self {
        LinExp {
            a: BigRational::zero(),
            b,
        }
    }

    pub fn eval(&self, j: i64) -> BigRational {
        &self.a * BigRational::from_integer(BigInt::from(j)) + &self.b
    }

    pub fn is_constant(&self) -> bool {
        self.a.is_zero()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CoeffExpr {
    Num(BigRational),
    Sym(usize),
    J,
    FactorialJ,
    Neg(Box<CoeffExpr>),
    Add(Box<CoeffExpr>, Box<CoeffExpr>),
    Sub(Box<CoeffExpr>, Box<CoeffExpr>),
    Mul(Box<CoeffExpr>, Box<CoeffExpr>),
    Div(Box<CoeffExpr>, Box<CoeffExpr>),
    Pow(Box<CoeffExpr>, LinExp),
}

/// A coefficient rule `c(j)`, defined for `j >= from`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffRule {
    pub expr: CoeffExpr,
    pub from: i64,
    /// Original source text, kept for reports.
    pub source: String,
}

impl CoeffRule {
    pub fn parse(pres: &FieldPresentation, text: &str, from: i64) -> Result<Self> {
        let expr = parse_coeff_expr(pres, text, true)?;
        Ok(CoeffRule {
            expr,
            from,
            source: text.to_string(),
        })
    }

    pub fn eval(&self, pres: &FieldPresentation, j: i64) -> Result<FieldElem> {
        if j < self.from {
            return Err(Error::Invalid(format!(
                "coefficient rule evaluated at j = {j} below its from-index {}",
                self.from
            )));
        }
        eval_coeff_expr(pres, &self.expr, j)
    }
}

/// Parse a coefficient expression. With `allow_j = false` this is the grammar
/// for plain field-element constants.
pub fn parse_coeff_expr(
    pres: &FieldPresentation,
    text: &str,
    allow_j: bool,
) -> Result<CoeffExpr> {
    let mut lx = Lexer::new(text)?;
    let e = parse_sum(pres, &mut lx, allow_j)?;
    if !lx.at_end() {
        return Err(Error::Parse(format!(
            "trailing input after expression in `{text}`"
        )));
    }
    Ok(e)
}

/// Parse and evaluate a constant field element (no `j`).
pub fn parse_elem(pres: &FieldPresentation, text: &str) -> Result<FieldElem> {
    let e = parse_coeff_expr(pres, text, false)?;
    eval_coeff_expr(pres, &e, 0)
}

fn parse_sum(pres: &FieldPresentation, lx: &mut Lexer, allow_j: bool) -> Result<CoeffExpr> {
    let mut acc = parse_term(pres, lx, allow_j)?;
    loop {
        match lx.peek() {
            Token::Plus => {
                lx.next();
                let rhs = parse_term(pres, lx, allow_j)?;
                acc = CoeffExpr::Add(Box::new(acc), Box::new(rhs));
            }
            Token::Minus => {
                lx.next();
                let rhs = parse_term(pres, lx, allow_j)?;
                acc = CoeffExpr::Sub(Box::new(acc), Box::new(rhs));
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_term(pres: &FieldPresentation, lx: &mut Lexer, allow_j: bool) -> Result<CoeffExpr> {
    let mut acc = parse_factor(pres, lx, allow_j)?;
    loop {
        match lx.peek() {
            Token::Star => {
                lx.next();
                let rhs = parse_factor(pres, lx, allow_j)?;
                acc = CoeffExpr::Mul(Box::new(acc), Box::new(rhs));
            }
            Token::Slash => {
                lx.next();
                let rhs = parse_factor(pres, lx, allow_j)?;
                acc = CoeffExpr::Div(Box::new(acc), Box::new(rhs));
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_factor(
    pres: &FieldPresentation,
    lx: &mut Lexer,
    allow_j: bool,
) -> Result<CoeffExpr> {
    if *lx.peek() == Token::Minus {
        lx.next();
        let inner = parse_factor(pres, lx, allow_j)?;
        return Ok(CoeffExpr::Neg(Box::new(inner)));
    }
    let base = parse_atom(pres, lx, allow_j)?;
    if *lx.peek() == Token::Caret {
        lx.next();
        let exp = parse_exponent(lx, allow_j)?;
        validate_pow(pres, &base, &exp)?;
        return Ok(CoeffExpr::Pow(Box::new(base), exp));
    }
    Ok(base)
}

fn parse_atom(pres: &FieldPresentation, lx: &mut Lexer, allow_j: bool) -> Result<CoeffExpr> {
    match lx.next() {
        Token::Int(n) => Ok(CoeffExpr::Num(BigRational::from_integer(n))),
        Token::LParen => {
            let inner = parse_sum(pres, lx, allow_j)?;
            lx.expect(Token::RParen)?;
            Ok(inner)
        }
        Token::Ident(name) => {
            if name == "j" {
                if !allow_j {
                    return Err(Error::Parse(
                        "`j` is not allowed in a constant expression".into(),
                    ));
                }
                return Ok(CoeffExpr::J);
            }
            if name == "factorial" {
                if !allow_j {
                    return Err(Error::Parse(
                        "`factorial(j)` is not allowed in a constant expression".into(),
                    ));
                }
                lx.expect(Token::LParen)?;
                match lx.next() {
                    Token::Ident(a) if a == "j" => {}
                    other => {
                        return Err(Error::Parse(format!(
                            "factorial takes `j`, found {other:?}"
                        )))
                    }
                }
                lx.expect(Token::RParen)?;
                return Ok(CoeffExpr::FactorialJ);
            }
            match pres.index_of(&name) {
                Some(i) => Ok(CoeffExpr::Sym(i)),
                None => Err(Error::Parse(format!("undeclared symbol `{name}`"))),
            }
        }
        other => Err(Error::Parse(format!("unexpected token {other:?}"))),
    }
}

// Exponents: an integer, `j`, or a parenthesized `j`-linear expression with
// rational constants.
fn parse_exponent(lx: &mut Lexer, allow_j: bool) -> Result<LinExp> {
    let neg = if *lx.peek() == Token::Minus {
        lx.next();
        true
    } else {
        false
    };
    let lin = match lx.next() {
        Token::Int(n) => LinExp::constant(BigRational::from_integer(n)),
        Token::Ident(name) if name == "j" => {
            if !allow_j {
                return Err(Error::Parse("`j` exponent in a constant expression".into()));
            }
            LinExp {
                a: BigRational::one(),
                b: BigRational::zero(),
            }
        }
        Token::LParen => {
            let lin = parse_linexp_sum(lx, allow_j)?;
            lx.expect(Token::RParen)?;
            lin
        }
        other => {
            return Err(Error::Parse(format!(
                "expected exponent, found {other:?}"
            )))
        }
    };
    if neg {
        Ok(LinExp {
            a: -lin.a,
            b: -lin.b,
        })
    } else {
        Ok(lin)
    }
}

fn parse_linexp_sum(lx: &mut Lexer, allow_j: bool) -> Result<LinExp> {
    let mut acc = parse_linexp_term(lx, allow_j)?;
    loop {
        match lx.peek() {
            Token::Plus => {
                lx.next();
                let r = parse_linexp_term(lx, allow_j)?;
                acc = LinExp {
                    a: acc.a + r.a,
                    b: acc.b + r.b,
                };
            }
            Token::Minus => {
                lx.next();
                let r = parse_linexp_term(lx, allow_j)?;
                acc = LinExp {
                    a: acc.a - r.a,
                    b: acc.b - r.b,
                };
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_linexp_term(lx: &mut Lexer, allow_j: bool) -> Result<LinExp> {
    let mut acc = parse_linexp_atom(lx, allow_j)?;
    loop {
        match lx.peek() {
            Token::Star => {
                lx.next();
                let r = parse_linexp_atom(lx, allow_j)?;
                acc = lin_mul(&acc, &r)?;
            }
            Token::Slash => {
                lx.next();
                let r = parse_linexp_atom(lx, allow_j)?;
                if !r.is_constant() {
                    return Err(Error::Parse("division by `j` in an exponent".into()));
                }
                if r.b.is_zero() {
                    return Err(Error::Parse("division by zero in an exponent".into()));
                }
                acc = LinExp {
                    a: acc.a / r.b.clone(),
                    b: acc.b / r.b,
                };
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_linexp_atom(lx: &mut Lexer, allow_j: bool) -> Result<LinExp> {
    match lx.next() {
        Token::Int(n) => Ok(LinExp::constant(BigRational::from_integer(n))),
        Token::Ident(name) if name == "j" => {
            if !allow_j {
                return Err(Error::Parse("`j` exponent in a constant expression".into()));
            }
            Ok(LinExp {
                a: BigRational::one(),
                b: BigRational::zero(),
            })
        }
        Token::Minus => {
            let inner = parse_linexp_atom(lx, allow_j)?;
            Ok(LinExp {
                a: -inner.a,
                b: -inner.b,
            })
        }
        Token::LParen => {
            let lin = parse_linexp_sum(lx, allow_j)?;
            lx.expect(Token::RParen)?;
            Ok(lin)
        }
        other => Err(Error::Parse(format!(
            "unexpected token {other:?} in exponent"
        ))),
    }
}

fn lin_mul(a: &LinExp, b: &LinExp) -> Result<LinExp> {
    if !a.is_constant() && !b.is_constant() {
        return Err(Error::Parse("exponent is not linear in j".into()));
    }
    Ok(LinExp {
        a: &a.a * &b.b + &a.b * &b.a,
        b: &a.b * &b.b,
    })
}

fn validate_pow(pres: &FieldPresentation, base: &CoeffExpr, exp: &LinExp) -> Result<()> {
    match base {
        CoeffExpr::Sym(i) => {
            let n = BigInt::from(pres.radical_bound(*i));
            let a_ok = (&exp.a * BigRational::from_integer(n.clone())).is_integer();
            let b_ok = (&exp.b * BigRational::from_integer(n)).is_integer();
            if !(a_ok && b_ok) {
                return Err(Error::Parse(format!(
                    "exponent denominators of `{}` must divide its radical bound {}",
                    pres.names()[*i],
                    pres.radical_bound(*i)
                )));
            }
            Ok(())
        }
        _ => {
            if exp.is_constant() && exp.b.is_integer() {
                Ok(())
            } else {
                Err(Error::Parse(
                    "non-symbol base requires an integer exponent".into(),
                ))
            }
        }
    }
}

pub fn eval_coeff_expr(
    pres: &FieldPresentation,
    expr: &CoeffExpr,
    j: i64,
) -> Result<FieldElem> {
    match expr {
        CoeffExpr::Num(q) => Ok(RatFunc::constant(q.clone())),
        CoeffExpr::Sym(i) => Ok(pres.symbol_elem(*i)),
        CoeffExpr::J => Ok(RatFunc::constant(BigRational::from_integer(BigInt::from(
            j,
        )))),
        CoeffExpr::FactorialJ => {
            if j < 0 {
                return Err(Error::Invalid(format!("factorial of negative j = {j}")));
            }
            let mut f = BigInt::one();
            for k in 2..=j {
                f *= BigInt::from(k);
            }
            Ok(RatFunc::constant(BigRational::from_integer(f)))
        }
        CoeffExpr::Neg(e) => Ok(eval_coeff_expr(pres, e, j)?.neg()),
        CoeffExpr::Add(a, b) => {
            Ok(eval_coeff_expr(pres, a, j)?.add(&eval_coeff_expr(pres, b, j)?))
        }
        CoeffExpr::Sub(a, b) => {
            Ok(eval_coeff_expr(pres, a, j)?.sub(&eval_coeff_expr(pres, b, j)?))
        }
        CoeffExpr::Mul(a, b) => {
            Ok(eval_coeff_expr(pres, a, j)?.mul(&eval_coeff_expr(pres, b, j)?))
        }
        CoeffExpr::Div(a, b) => {
            let den = eval_coeff_expr(pres, b, j)?;
            if den.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(eval_coeff_expr(pres, a, j)?.div(&den))
        }
        CoeffExpr::Pow(base, lin) => {
            let q = lin.eval(j);
            if let CoeffExpr::Sym(i) = base.as_ref() {
                return pres.symbol_pow(*i, &q);
            }
            debug_assert!(q.is_integer());
            let e: i64 = q
                .to_integer()
                .try_into()
                .map_err(|_| Error::Invalid("exponent too large".into()))?;
            let b = eval_coeff_expr(pres, base, j)?;
            if b.is_zero() && e < 0 {
                return Err(Error::DivisionByZero);
            }
            Ok(b.pow(e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres_p2() -> FieldPresentation {
        FieldPresentation::new(vec![
            ("T2".into(), 1),
            ("T3".into(), 1),
            ("T4".into(), 2),
        ])
        .unwrap()
    }

    #[test]
    fn integer_power_rule() {
        let pres = pres_p2();
        let rule = CoeffRule::parse(&pres, "T4^j", 1).unwrap();
        let v = rule.eval(&pres, 3).unwrap();
        assert_eq!(v, pres.symbol_elem(2).pow(3));
    }

    #[test]
    fn radical_power_rule() {
        // c(j) = T2*T4^(j/2) with radical bound 2; at j = 2 this is T2*T4
        let pres = pres_p2();
        let rule = CoeffRule::parse(&pres, "T2*T4^(j/2)", 1).unwrap();
        let v = rule.eval(&pres, 2).unwrap();
        assert_eq!(v, pres.symbol_elem(0).mul(&pres.symbol_elem(2)));
        // at j = 1 it is T2 * T4^(1/2), i.e. T2 * s where T4 = s^2
        let half = rule.eval(&pres, 1).unwrap();
        assert_eq!(pres.render_elem(&half), "T2*T4^(1/2)");
    }

    #[test]
    fn factorial_rule() {
        let pres = pres_p2();
        let rule = CoeffRule::parse(&pres, "T4^j/factorial(j)", 1).unwrap();
        let v = rule.eval(&pres, 3).unwrap();
        let expected = pres
            .symbol_elem(2)
            .pow(3)
            .div(&RatFunc::constant(BigRational::from_integer(6.into())));
        assert_eq!(v, expected);
    }

    #[test]
    fn from_index_enforced() {
        let pres = pres_p2();
        let rule = CoeffRule::parse(&pres, "T4^j", 2).unwrap();
        assert!(rule.eval(&pres, 1).is_err());
    }

    #[test]
    fn parse_rejections() {
        let pres = pres_p2();
        // nonlinear exponent
        assert!(CoeffRule::parse(&pres, "T4^(j*j)", 1).is_err());
        // fractional exponent not matching the radical bound
        assert!(CoeffRule::parse(&pres, "T4^(j/3)", 1).is_err());
        // fractional exponent on a bound-1 symbol
        assert!(CoeffRule::parse(&pres, "T2^(j/2)", 1).is_err());
        // undeclared symbol
        assert!(CoeffRule::parse(&pres, "T9", 1).is_err());
        // j in a constant expression
        assert!(parse_elem(&pres, "T2*j").is_err());
    }

    #[test]
    fn constant_expressions() {
        let pres = pres_p2();
        let e = parse_elem(&pres, "3/2*T2^2 - 1").unwrap();
        let expected = pres
            .symbol_elem(0)
            .pow(2)
            .mul(&RatFunc::constant(BigRational::new(3.into(), 2.into())))
            .sub(&RatFunc::one());
        assert_eq!(e, expected);
        let r = parse_elem(&pres, "T4^(1/2)").unwrap();
        assert_eq!(r.mul(&r), pres.symbol_elem(2));
    }
}
