//! Monomial and complete homogeneous symmetric polynomials.

use num_bigint::BigInt;
use num_traits::One;

use super::Exponent;
use crate::Poly;

/// `m_mu(x_1..x_n)`. Zero when `mu` has more than `n` nonzero parts.
pub fn monomial_symmetric(mu: &[u32], n: usize) -> Poly {
    let nonzero: Vec<u32> = mu.iter().copied().filter(|&p| p > 0).collect();
    if nonzero.len() > n {
        return Poly::zero(n);
    }
    let mut exps: Vec<i32> = nonzero.iter().map(|&p| p as i32).collect();
    exps.resize(n, 0);
    exps.sort_unstable();
    let mut p = Poly::zero(n);
    loop {
        p.add_term(Exponent::new(0, exps.clone()), BigInt::one());
        if !next_permutation(&mut exps) {
            break;
        }
    }
    p
}

/// `h_r(x_1..x_n)`, the sum of all degree-`r` monomials.
pub fn complete_homogeneous(r: u32, n: usize) -> Poly {
    let mut p = Poly::zero(n);
    let mut e = vec![0i32; n];
    fill_homogeneous(r as i32, 0, &mut e, &mut p);
    p
}

fn fill_homogeneous(left: i32, i: usize, e: &mut Vec<i32>, p: &mut Poly) {
    let n = e.len();
    if n == 0 {
        if left == 0 {
            p.add_term(Exponent::new(0, vec![]), BigInt::one());
        }
        return;
    }
    if i == n - 1 {
        e[i] = left;
        p.add_term(Exponent::new(0, e.clone()), BigInt::one());
        e[i] = 0;
        return;
    }
    for k in 0..=left {
        e[i] = k;
        fill_homogeneous(left - k, i + 1, e, p);
    }
    e[i] = 0;
}

/// Invariance under every adjacent transposition of the listed (1-based)
/// variables, taken in increasing order.
pub fn is_symmetric_under(p: &Poly, vars: &[usize]) -> bool {
    let mut v = vars.to_vec();
    v.sort_unstable();
    v.dedup();
    v.windows(2).all(|w| p.swap_vars(w[0], w[1]) == *p)
}

/// Lexicographic successor of a sequence, as in C++ `next_permutation`.
pub(crate) fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, i: usize) -> Poly {
        Poly::x(n, i)
    }

    #[test]
    fn monomial_examples() {
        assert_eq!(monomial_symmetric(&[1], 2), &x(2, 1) + &x(2, 2));
        let a = &(&x(2, 1) * &x(2, 1)) * &x(2, 2);
        let b = &(&x(2, 2) * &x(2, 2)) * &x(2, 1);
        assert_eq!(monomial_symmetric(&[2, 1], 2), &a + &b);
        let e2 = &(&(&x(3, 1) * &x(3, 2)) + &(&x(3, 1) * &x(3, 3))) + &(&x(3, 2) * &x(3, 3));
        assert_eq!(monomial_symmetric(&[1, 1], 3), e2);
        assert!(monomial_symmetric(&[1, 1, 1], 2).is_zero());
    }

    #[test]
    fn homogeneous_examples() {
        assert_eq!(complete_homogeneous(0, 3), Poly::one(3));
        let h2 = &(&(&x(2, 1) * &x(2, 1)) + &(&x(2, 1) * &x(2, 2))) + &(&x(2, 2) * &x(2, 2));
        assert_eq!(complete_homogeneous(2, 2), h2);
        assert_eq!(complete_homogeneous(1, 4), (1..=4).fold(Poly::zero(4), |a, i| a + x(4, i)));
    }

    #[test]
    fn homogeneous_counts_monomials() {
        // number of degree-r monomials in n variables is C(n+r-1, r)
        for n in 1..=4usize {
            for r in 0..=5u32 {
                let expect = (1..=r as u64).fold(1u64, |acc, k| acc * (n as u64 + k - 1) / k);
                assert_eq!(complete_homogeneous(r, n).num_terms() as u64, expect);
            }
        }
    }

    #[test]
    fn symmetry_checks() {
        assert!(is_symmetric_under(&(&x(2, 1) + &x(2, 2)), &[1, 2]));
        assert!(!is_symmetric_under(&(&x(2, 1) + &x(2, 2).scale(&BigInt::from(2))), &[1, 2]));
        assert!(is_symmetric_under(&monomial_symmetric(&[2, 1], 3), &[1, 2, 3]));
    }
}
