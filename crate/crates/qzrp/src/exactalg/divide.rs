//! Exact division of Laurent polynomials.

use num_integer::Integer;
use num_traits::Zero;
use thiserror::Error;

use crate::Poly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("polynomial is not divisible")]
pub struct NotDivisible;

/// `q` with `q * d = p`, or [`NotDivisible`].
///
/// Both sides are shifted to genuine polynomials with no monomial factor and
/// then divided by leading terms in the canonical (lex) order. Since the
/// order is multiplicative, a leading term that fails to divide proves that
/// no quotient exists. Coefficients must divide over the integers, which is
/// the same as over the rationals whenever `d` has content 1.
///
/// When `p` and `d` are both genuine polynomials the quotient must be one
/// too, so `x_1 + x_2` is not divisible by `x_1`. Otherwise division happens
/// in the Laurent ring, where monomials are units.
pub fn exact_divide(p: &Poly, d: &Poly) -> Result<Poly, NotDivisible> {
    assert!(!d.is_zero(), "exact_divide by the zero polynomial");
    assert_eq!(p.n(), d.n(), "exact_divide over different variable counts");
    if p.is_zero() {
        return Ok(Poly::zero(p.n()));
    }
    let n = p.n();
    let pm = p.min_exponent();
    let dm = d.min_exponent();
    let one = num_bigint::BigInt::from(1);
    let mut rem = p.mul_term(&super::Exponent::zero(n).minus(&pm), &one);
    let d0 = d.mul_term(&super::Exponent::zero(n).minus(&dm), &one);
    let (dle, dlc) = {
        let (e, c) = d0.leading_term().expect("nonzero");
        (e.clone(), c.clone())
    };
    let mut q = Poly::zero(n);
    while let Some((le, lc)) = rem.leading_term() {
        if !dle.divides(le) {
            return Err(NotDivisible);
        }
        let (cq, r) = lc.div_rem(&dlc);
        if !r.is_zero() {
            return Err(NotDivisible);
        }
        let eq = le.minus(&dle);
        rem -= &d0.mul_term(&eq, &cq);
        q.add_term(eq, cq);
    }
    let q = q.mul_term(&pm.minus(&dm), &one);
    if p.is_polynomial() && d.is_polynomial() && !q.is_polynomial() {
        return Err(NotDivisible);
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn x(i: usize) -> Poly {
        Poly::x(2, i)
    }

    #[test]
    fn difference_of_squares() {
        let p = &(&x(1) * &x(1)) - &(&x(2) * &x(2));
        assert_eq!(exact_divide(&p, &(&x(1) - &x(2))).unwrap(), &x(1) + &x(2));
    }

    #[test]
    fn not_divisible() {
        assert_eq!(exact_divide(&(&x(1) + &x(2)), &x(1)), Err(NotDivisible));
        assert_eq!(exact_divide(&x(1), &Poly::constant(2, BigInt::from(2))), Err(NotDivisible));
    }

    #[test]
    fn laurent_quotient() {
        let p = &Poly::x_pow(2, 1, -2) + &Poly::x_pow(2, 2, 1);
        let d = Poly::x_pow(2, 1, 3);
        let q = exact_divide(&p, &d).unwrap();
        assert_eq!(&q * &d, p);
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        arb_with_min(-1)
    }

    fn arb_with_min(lo: i32) -> impl Strategy<Value = Poly> {
        prop::collection::vec(((lo..3), (lo..3), (0i32..3), -4i64..5), 1..6).prop_map(|ts| {
            Poly::from_terms(2, ts.into_iter().map(|(a, b, t, c)| (crate::Exponent::new(t, vec![a, b]), BigInt::from(c))))
        })
    }

    proptest! {
        #[test]
        fn divides_products(q in arb_with_min(0), d in arb_with_min(0)) {
            prop_assume!(!d.is_zero());
            let p = &q * &d;
            prop_assert_eq!(exact_divide(&p, &d).unwrap(), q);
        }

        #[test]
        fn divides_laurent_products(q in arb_poly(), d in arb_poly()) {
            prop_assume!(!d.is_zero());
            let d = &d * &Poly::x_pow(2, 1, -3);
            let p = &q * &d;
            prop_assert_eq!(exact_divide(&p, &d).unwrap(), q);
        }

        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a + &b, &b + &a);
        }

        #[test]
        fn parallel_sum_is_chunking_independent(items in prop::collection::vec(arb_poly(), 0..12)) {
            let serial = items.iter().fold(Poly::zero(2), |acc, p| &acc + p);
            prop_assert_eq!(Poly::par_sum(2, items), serial);
        }
    }
}
