//! Algebraic-independence testing via the Jacobian criterion.
//!
//! In characteristic 0, rational functions g1,...,gm are algebraically
//! independent iff the matrix of partial derivatives has full row rank over
//! the rational-function field. The rank is computed fraction-free: each row
//! is cleared to polynomials and eliminated with Bareiss two-step division.

use num::BigRational;

use super::poly::{gcd as poly_gcd, Poly};
use super::presentation::{FieldElem, FieldPresentation};

/// Rank of the Jacobian matrix (d elem_i / d s_j) over the internal symbols.
pub fn jacobian_rank(pres: &FieldPresentation, elems: &[FieldElem]) -> usize {
    let cols = pres.len();
    let mut mat: Vec<Vec<Poly<BigRational>>> = Vec::with_capacity(elems.len());
    for e in elems {
        let derivs: Vec<FieldElem> = (0..cols).map(|v| e.partial_derivative(v)).collect();
        // common denominator for the row
        let mut den = Poly::one();
        for d in &derivs {
            let g = poly_gcd(&den, d.den());
            den = den.mul(&d.den().exact_div(&g).expect("gcd divides"));
        }
        let row = derivs
            .iter()
            .map(|d| {
                let extra = den.exact_div(d.den()).expect("lcm is divisible");
                d.num().mul(&extra)
            })
            .collect();
        mat.push(row);
    }
    polynomial_rank(mat)
}

/// Rank of a polynomial matrix by fraction-free (Bareiss) elimination.
pub fn polynomial_rank(mut mat: Vec<Vec<Poly<BigRational>>>) -> usize {
    let rows = mat.len();
    if rows == 0 {
        return 0;
    }
    let cols = mat[0].len();
    let mut rank = 0;
    let mut prev = Poly::one();
    let mut pivot_col = 0;
    while rank < rows && pivot_col < cols {
        // find a pivot in this column
        let pivot_row = (rank..rows).find(|&r| !mat[r][pivot_col].is_zero());
        let pr = match pivot_row {
            Some(pr) => pr,
            None => {
                pivot_col += 1;
                continue;
            }
        };
        mat.swap(rank, pr);
        let pivot = mat[rank][pivot_col].clone();
        for r in rank + 1..rows {
            for c in pivot_col + 1..cols {
                let t = mat[r][c]
                    .mul(&pivot)
                    .sub(&mat[r][pivot_col].mul(&mat[rank][c]));
                mat[r][c] = t.exact_div(&prev).expect("Bareiss division is exact");
            }
            mat[r][pivot_col] = Poly::zero();
        }
        prev = pivot;
        rank += 1;
        pivot_col += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres3() -> FieldPresentation {
        FieldPresentation::simple(&["T2", "T3", "T4"])
    }

    #[test]
    fn proportional_rows() {
        let pres = pres3();
        let t2 = pres.symbol_elem(0);
        assert_eq!(jacobian_rank(&pres, &[t2.clone(), t2.mul(&t2)]), 1);
    }

    #[test]
    fn distinct_unit_rows() {
        let pres = pres3();
        let t2 = pres.symbol_elem(0);
        let t3 = pres.symbol_elem(1);
        assert_eq!(jacobian_rank(&pres, &[t2, t3]), 2);
    }

    #[test]
    fn product_relation() {
        // T2, T3, T2*T3 satisfy g3 - g1*g2 = 0, so the rank is 2
        let pres = pres3();
        let t2 = pres.symbol_elem(0);
        let t3 = pres.symbol_elem(1);
        let prod = t2.mul(&t3);
        assert_eq!(jacobian_rank(&pres, &[t2, t3, prod]), 2);
    }

    #[test]
    fn rational_entries() {
        let pres = pres3();
        let t2 = pres.symbol_elem(0);
        let t3 = pres.symbol_elem(1);
        // T2/T3^2 and 1/T3^2 are independent
        let a = t2.div(&t3.mul(&t3));
        let b = FieldElem::one().div(&t3.mul(&t3));
        assert_eq!(jacobian_rank(&pres, &[a, b]), 2);
    }

    #[test]
    fn constant_has_rank_zero() {
        let pres = pres3();
        let five = FieldElem::constant(BigRational::from_integer(5.into()));
        assert_eq!(jacobian_rank(&pres, &[five]), 0);
    }
}
