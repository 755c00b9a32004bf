//! t-analogs of integers, binomials and multinomials, as polynomials in `t`
//! alone (zero x-variables).

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::One;

use crate::Poly;

/// `[m]_t = 1 + t + ... + t^{m-1}`; `[0]_t = 0`.
pub fn t_int(m: u32) -> Poly {
    Poly::from_terms(0, (0..m as i32).map(|k| (super::Exponent::new(k, vec![]), BigInt::one())))
}

/// Gaussian binomial `[m choose k]_t`.
pub fn t_binomial(m: u32, k: u32) -> Poly {
    if k > m {
        return Poly::zero(0);
    }
    t_multinomial(m, &[k, m - k])
}

/// Gaussian multinomial `[m; parts]_t`, the inversion generating function of
/// words with content `parts`.
///
/// Built from the first-letter recursion
/// `[m; mu] = sum_i t^{mu_1 + ... + mu_{i-1}} [m-1; mu - e_i]`.
pub fn t_multinomial(m: u32, parts: &[u32]) -> Poly {
    let total: u32 = parts.iter().sum();
    assert_eq!(total, m, "t_multinomial: parts {parts:?} do not sum to {m}");
    let mut memo = HashMap::new();
    let key: Vec<u32> = parts.iter().copied().filter(|&p| p > 0).collect();
    multinomial_rec(&key, &mut memo)
}

fn multinomial_rec(parts: &[u32], memo: &mut HashMap<Vec<u32>, Poly>) -> Poly {
    if parts.iter().filter(|&&p| p > 0).count() <= 1 {
        return Poly::one(0);
    }
    if let Some(p) = memo.get(parts) {
        return p.clone();
    }
    let mut acc = Poly::zero(0);
    let mut before = 0i32;
    for i in 0..parts.len() {
        if parts[i] > 0 {
            let mut rest = parts.to_vec();
            rest[i] -= 1;
            let sub = multinomial_rec(&rest, memo);
            acc += &sub.mul_term(&super::Exponent::new(before, vec![]), &BigInt::one());
        }
        before += parts[i] as i32;
    }
    memo.insert(parts.to_vec(), acc.clone());
    acc
}

/// `x_i d/dx_i log p` as the unreduced pair `(x_i dp/dx_i, p)`.
pub fn log_derivative(p: &Poly, i: usize) -> (Poly, Poly) {
    assert!(!p.is_zero(), "log_derivative of the zero polynomial");
    (p.euler_x(i), p.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn tpoly(cs: &[i64]) -> Poly {
        Poly::from_t_coefficients(0, &cs.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>())
    }

    // brute force: inversion generating function over all words of content mu
    fn inv_gf(mu: &[u32]) -> Poly {
        let mut word: Vec<usize> = Vec::new();
        for (i, &m) in mu.iter().enumerate() {
            word.extend(std::iter::repeat_n(i, m as usize));
        }
        let mut coeffs = vec![BigInt::zero(); word.len() * word.len() + 1];
        loop {
            let mut inv = 0;
            for a in 0..word.len() {
                for b in a + 1..word.len() {
                    if word[a] > word[b] {
                        inv += 1;
                    }
                }
            }
            coeffs[inv] += 1;
            if !next_perm(&mut word) {
                break;
            }
        }
        Poly::from_t_coefficients(0, &coeffs)
    }

    fn next_perm(v: &mut [usize]) -> bool {
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

    fn compositions(m: u32, k: usize) -> Vec<Vec<u32>> {
        if k == 1 {
            return vec![vec![m]];
        }
        let mut out = Vec::new();
        for first in 0..=m {
            for mut rest in compositions(m - first, k - 1) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }

    #[test]
    fn small_values() {
        assert_eq!(t_multinomial(1, &[1]), Poly::one(0));
        assert_eq!(t_multinomial(4, &[2, 2]), tpoly(&[1, 1, 2, 1, 1]));
        for m in 0..6 {
            assert_eq!(t_multinomial(m, &[m]), Poly::one(0));
        }
        assert_eq!(t_int(3), tpoly(&[1, 1, 1]));
        assert!(t_int(0).is_zero());
    }

    #[test]
    fn matches_inversion_oracle() {
        for m in 0..=6u32 {
            for k in 1..=3 {
                for mu in compositions(m, k) {
                    assert_eq!(t_multinomial(m, &mu), inv_gf(&mu), "mu = {mu:?}");
                }
            }
        }
    }

    #[test]
    fn palindromic_and_counts_at_one() {
        let fact = |k: u32| (1..=k as u64).product::<u64>().max(1);
        for m in 0..=8u32 {
            for mu in compositions(m, 3) {
                let p = t_multinomial(m, &mu);
                let c = p.t_coefficients();
                let rev: Vec<_> = c.iter().rev().cloned().collect();
                assert_eq!(c, rev);
                let at_one: BigInt = c.iter().sum();
                let expect = fact(m) / mu.iter().map(|&x| fact(x)).product::<u64>();
                assert_eq!(at_one, BigInt::from(expect));
            }
        }
    }

    #[test]
    #[should_panic(expected = "do not sum")]
    fn bad_parts_panic() {
        t_multinomial(3, &[1, 1]);
    }

    #[test]
    fn log_derivative_examples() {
        let x1 = Poly::x(2, 1);
        let x2 = Poly::x(2, 2);
        let (num, den) = log_derivative(&(&x1 + &x2), 1);
        assert_eq!(num, x1);
        assert_eq!(den, &x1 + &x2);
        let sq = &x1 * &x1;
        assert_eq!(log_derivative(&sq, 1).0, sq.scale(&BigInt::from(2)));
    }
}
