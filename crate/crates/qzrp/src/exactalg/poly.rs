//! Sparse Laurent polynomials in `t, x_1, ..., x_n` with exact coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{Num, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::scalar::{pow_i, Scalar};

/// Coefficient ring for [`LaurentPoly`].
pub trait Coeff: Clone + Num + Neg<Output = Self> + fmt::Debug + fmt::Display + Send + Sync {}

impl<T> Coeff for T where T: Clone + Num + Neg<Output = T> + fmt::Debug + fmt::Display + Send + Sync {}

/// Exponent vector of a monomial `t^t x_1^x[0] ... x_n^x[n-1]`.
///
/// The derived order is lexicographic on `(t, x)`, which is the canonical
/// term order used for printing and serialization.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Exponent {
    pub t: i32,
    pub x: Vec<i32>,
}

impl Exponent {
    pub fn zero(n: usize) -> Self {
        Exponent { t: 0, x: vec![0; n] }
    }

    pub fn new(t: i32, x: Vec<i32>) -> Self {
        Exponent { t, x }
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn is_zero(&self) -> bool {
        self.t == 0 && self.x.iter().all(|&e| e == 0)
    }

    pub fn x_degree(&self) -> i32 {
        self.x.iter().sum()
    }

    pub fn plus(&self, other: &Exponent) -> Exponent {
        debug_assert_eq!(self.x.len(), other.x.len());
        Exponent {
            t: self.t + other.t,
            x: self.x.iter().zip(&other.x).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn minus(&self, other: &Exponent) -> Exponent {
        debug_assert_eq!(self.x.len(), other.x.len());
        Exponent {
            t: self.t - other.t,
            x: self.x.iter().zip(&other.x).map(|(a, b)| a - b).collect(),
        }
    }

    /// Componentwise `self <= other`.
    pub fn divides(&self, other: &Exponent) -> bool {
        self.t <= other.t && self.x.iter().zip(&other.x).all(|(a, b)| a <= b)
    }

    /// Componentwise minimum.
    pub fn meet(&self, other: &Exponent) -> Exponent {
        Exponent {
            t: self.t.min(other.t),
            x: self.x.iter().zip(&other.x).map(|(a, b)| *a.min(b)).collect(),
        }
    }
}

/// A sparse Laurent polynomial. No zero coefficient is ever stored, so
/// structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly<C = BigInt> {
    n: usize,
    terms: BTreeMap<Exponent, C>,
}

impl<C: Coeff> LaurentPoly<C> {
    pub fn zero(n: usize) -> Self {
        LaurentPoly { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, C::one())
    }

    pub fn constant(n: usize, c: C) -> Self {
        Self::monomial(Exponent::zero(n), c)
    }

    pub fn monomial(e: Exponent, c: C) -> Self {
        let mut p = Self::zero(e.n());
        p.add_term(e, c);
        p
    }

    /// The variable `x_i` (1-based).
    pub fn x(n: usize, i: usize) -> Self {
        Self::x_pow(n, i, 1)
    }

    /// `x_i^k` (1-based, `k` may be negative).
    pub fn x_pow(n: usize, i: usize, k: i32) -> Self {
        assert!(i >= 1 && i <= n, "variable x_{i} out of range 1..={n}");
        let mut e = Exponent::zero(n);
        e.x[i - 1] = k;
        Self::monomial(e, C::one())
    }

    pub fn t_pow(n: usize, k: i32) -> Self {
        let mut e = Exponent::zero(n);
        e.t = k;
        Self::monomial(e, C::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponent, C)>>(n: usize, it: I) -> Self {
        let mut p = Self::zero(n);
        for (e, c) in it {
            assert_eq!(e.n(), n, "exponent length does not match variable count");
            p.add_term(e, c);
        }
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Exponent) -> C {
        self.terms.get(e).cloned().unwrap_or_else(C::zero)
    }

    /// The unique term, if this is a monomial.
    pub fn as_monomial(&self) -> Option<(&Exponent, &C)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Largest term in the canonical order.
    pub fn leading_term(&self) -> Option<(&Exponent, &C)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, e: Exponent, c: C) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(e.n(), self.n);
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        LaurentPoly {
            n: self.n,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v.clone() * c.clone())).collect(),
        }
    }

    /// Multiply by the monomial `c * (t,x)^e`.
    pub fn mul_term(&self, e: &Exponent, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        LaurentPoly {
            n: self.n,
            terms: self.terms.iter().map(|(f, v)| (f.plus(e), v.clone() * c.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.n);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Embed into a ring with `n_new >= n` variables, mapping `x_i` to `x_{i+offset}`.
    pub fn embed(&self, n_new: usize, offset: usize) -> Self {
        assert!(self.n + offset <= n_new, "embedding does not fit");
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut x = vec![0; n_new];
                x[offset..offset + self.n].copy_from_slice(&e.x);
                (Exponent { t: e.t, x }, c.clone())
            })
            .collect();
        LaurentPoly { n: n_new, terms }
    }

    /// Apply `x_i -> x_{perm[i]}` (0-based indices).
    pub fn permute_vars(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n);
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut x = vec![0; self.n];
                for (i, &p) in perm.iter().enumerate() {
                    x[p] = e.x[i];
                }
                (Exponent { t: e.t, x }, c.clone())
            })
            .collect();
        LaurentPoly { n: self.n, terms }
    }

    /// Exchange `x_i` and `x_j` (1-based).
    pub fn swap_vars(&self, i: usize, j: usize) -> Self {
        let mut perm: Vec<usize> = (0..self.n).collect();
        perm.swap(i - 1, j - 1);
        self.permute_vars(&perm)
    }

    /// Apply `x_i -> x_{i+k}` cyclically (1-based, indices mod n).
    pub fn rotate_vars(&self, k: usize) -> Self {
        if self.n == 0 {
            return self.clone();
        }
        let perm: Vec<usize> = (0..self.n).map(|i| (i + k) % self.n).collect();
        self.permute_vars(&perm)
    }

    /// `x_i * d/dx_i` (1-based).
    pub fn euler_x(&self, i: usize) -> Self {
        assert!(i >= 1 && i <= self.n);
        let mut p = Self::zero(self.n);
        for (e, c) in &self.terms {
            let k = e.x[i - 1];
            if k != 0 {
                p.add_term(e.clone(), c.clone() * int_coeff::<C>(k as i64));
            }
        }
        p
    }

    /// Sum of the terms with `t`-exponent zero. Meaningful as evaluation at
    /// `t = 0` only when no term has a negative `t`-exponent.
    pub fn at_t_zero(&self) -> Self {
        LaurentPoly {
            n: self.n,
            terms: self.terms.iter().filter(|(e, _)| e.t == 0).map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }

    /// Componentwise minimum of all exponents. Panics on the zero polynomial.
    pub fn min_exponent(&self) -> Exponent {
        let mut it = self.terms.keys();
        let first = it.next().expect("min_exponent of zero polynomial").clone();
        it.fold(first, |m, e| m.meet(e))
    }

    pub fn max_t_degree(&self) -> Option<i32> {
        self.terms.keys().map(|e| e.t).max()
    }

    pub fn max_degree_in(&self, var: usize) -> Option<i32> {
        self.terms.keys().map(|e| if var == 0 { e.t } else { e.x[var - 1] }).max()
    }

    pub fn is_x_homogeneous(&self, d: i32) -> bool {
        self.terms.keys().all(|e| e.x_degree() == d)
    }

    /// True when every exponent is nonnegative.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|e| e.t >= 0 && e.x.iter().all(|&k| k >= 0))
    }

    pub fn depends_on_x(&self) -> bool {
        self.terms.keys().any(|e| e.x.iter().any(|&k| k != 0))
    }

    /// Sum a collection in parallel. The result does not depend on how the
    /// work is split, since addition is exact.
    pub fn par_sum(n: usize, items: Vec<Self>) -> Self {
        use rayon::prelude::*;
        items.into_par_iter().reduce(|| Self::zero(n), |a, b| a + b)
    }
}

fn int_coeff<C: Coeff>(k: i64) -> C {
    let mut acc = C::zero();
    let one = C::one();
    for _ in 0..k.unsigned_abs() {
        acc = acc + one.clone();
    }
    if k < 0 {
        -acc
    } else {
        acc
    }
}

impl LaurentPoly<BigInt> {
    /// Evaluate at `x`, `t` in any scalar field.
    pub fn eval<F: Scalar>(&self, x: &[F], t: &F) -> F {
        assert_eq!(x.len(), self.n, "wrong number of x values");
        let mut acc = F::zero();
        for (e, c) in &self.terms {
            let mut v = F::from_bigint(c) * pow_i(t, e.t);
            for (xi, &k) in x.iter().zip(&e.x) {
                if k != 0 {
                    v = v * pow_i(xi, k);
                }
            }
            acc = acc + v;
        }
        acc
    }

    /// Coefficients of a polynomial in `t` alone, indexed by exponent.
    /// Panics if any `x` exponent is nonzero or a `t` exponent is negative.
    pub fn t_coefficients(&self) -> Vec<BigInt> {
        let deg = self.max_t_degree().unwrap_or(-1);
        let mut out = vec![BigInt::zero(); (deg + 1).max(0) as usize];
        for (e, c) in &self.terms {
            assert!(e.x.iter().all(|&k| k == 0) && e.t >= 0, "not a polynomial in t alone");
            out[e.t as usize] = c.clone();
        }
        out
    }

    /// Build a polynomial in `t` from its coefficient list, with `n` x-variables.
    pub fn from_t_coefficients(n: usize, coeffs: &[BigInt]) -> Self {
        Self::from_terms(n, coeffs.iter().enumerate().map(|(k, c)| (Exponent { t: k as i32, x: vec![0; n] }, c.clone())))
    }

    pub fn to_json_terms(&self) -> Vec<JsonTerm> {
        self.terms.iter().map(|(e, c)| JsonTerm { t: e.t, x: e.x.clone(), c: c.to_string() }).collect()
    }

    pub fn from_json_terms(n: usize, terms: &[JsonTerm]) -> Result<Self, String> {
        let mut p = Self::zero(n);
        for term in terms {
            if term.x.len() != n {
                return Err(format!("term has {} x exponents, expected {n}", term.x.len()));
            }
            let c: BigInt = term.c.parse().map_err(|_| format!("bad coefficient {:?}", term.c))?;
            p.add_term(Exponent { t: term.t, x: term.x.clone() }, c);
        }
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_terms()).expect("serializable")
    }

    pub fn from_json(n: usize, s: &str) -> Result<Self, String> {
        let terms: Vec<JsonTerm> = serde_json::from_str(s).map_err(|e| e.to_string())?;
        Self::from_json_terms(n, &terms)
    }
}

/// One term in the polynomial JSON format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonTerm {
    pub t: i32,
    pub x: Vec<i32>,
    pub c: String,
}

impl Serialize for LaurentPoly<BigInt> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json_terms().serialize(s)
    }
}

impl fmt::Debug for LaurentPoly<BigInt> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentPoly<BigInt> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mut factors = Vec::new();
            if e.t != 0 {
                factors.push(if e.t == 1 { "t".to_string() } else { format!("t^{}", e.t) });
            }
            for (i, &k) in e.x.iter().enumerate() {
                if k != 0 {
                    factors.push(if k == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, k) });
                }
            }
            if factors.is_empty() {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

fn check_n<C>(a: &LaurentPoly<C>, b: &LaurentPoly<C>) {
    assert_eq!(a.n, b.n, "polynomials over different variable counts ({} vs {})", a.n, b.n);
}

impl<C: Coeff> AddAssign<&LaurentPoly<C>> for LaurentPoly<C> {
    fn add_assign(&mut self, o: &LaurentPoly<C>) {
        check_n(self, o);
        for (e, c) in &o.terms {
            self.add_term(e.clone(), c.clone());
        }
    }
}

impl<C: Coeff> SubAssign<&LaurentPoly<C>> for LaurentPoly<C> {
    fn sub_assign(&mut self, o: &LaurentPoly<C>) {
        check_n(self, o);
        for (e, c) in &o.terms {
            self.add_term(e.clone(), -c.clone());
        }
    }
}

impl<C: Coeff> Add<&LaurentPoly<C>> for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn add(self, o: &LaurentPoly<C>) -> LaurentPoly<C> {
        let mut r = self.clone();
        r += o;
        r
    }
}

impl<C: Coeff> Add for LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn add(mut self, o: LaurentPoly<C>) -> LaurentPoly<C> {
        if self.terms.len() < o.terms.len() {
            let mut o = o;
            o += &self;
            return o;
        }
        self += &o;
        self
    }
}

impl<C: Coeff> Sub<&LaurentPoly<C>> for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn sub(self, o: &LaurentPoly<C>) -> LaurentPoly<C> {
        let mut r = self.clone();
        r -= o;
        r
    }
}

impl<C: Coeff> Sub for LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn sub(mut self, o: LaurentPoly<C>) -> LaurentPoly<C> {
        self -= &o;
        self
    }
}

impl<C: Coeff> Neg for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> LaurentPoly<C> {
        LaurentPoly { n: self.n, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect() }
    }
}

impl<C: Coeff> Neg for LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> LaurentPoly<C> {
        -&self
    }
}

impl<C: Coeff> Mul<&LaurentPoly<C>> for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn mul(self, o: &LaurentPoly<C>) -> LaurentPoly<C> {
        check_n(self, o);
        let mut r = LaurentPoly::zero(self.n);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                r.add_term(e1.plus(e2), c1.clone() * c2.clone());
            }
        }
        r
    }
}

impl<C: Coeff> Mul for LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn mul(self, o: LaurentPoly<C>) -> LaurentPoly<C> {
        &self * &o
    }
}

impl<C: Coeff> MulAssign<&LaurentPoly<C>> for LaurentPoly<C> {
    fn mul_assign(&mut self, o: &LaurentPoly<C>) {
        *self = &*self * o;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Poly;

    fn x(i: usize) -> Poly {
        Poly::x(3, i)
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let p = &x(1) + &x(2);
        let q = &p - &x(2);
        assert_eq!(q, x(1));
        assert_eq!((&p - &p).num_terms(), 0);
    }

    #[test]
    fn laurent_monomials_invert() {
        let p = &Poly::x_pow(3, 2, -1) * &x(2);
        assert_eq!(p, Poly::one(3));
    }

    #[test]
    fn display_is_canonical() {
        let p = &(&x(1) * &x(1)) + &Poly::t_pow(3, 2).scale(&BigInt::from(-3));
        assert_eq!(p.to_string(), "x1^2 - 3*t^2");
    }

    #[test]
    fn json_round_trip() {
        let p = &(&x(1) * &Poly::t_pow(3, 1)) - &Poly::x_pow(3, 3, -2);
        let s = p.to_json();
        assert_eq!(Poly::from_json(3, &s).unwrap(), p);
        assert!(s.starts_with("[{\"t\":0"));
    }

    #[test]
    fn euler_operator() {
        let p = &(&x(1) * &x(1)) + &(&x(1) * &x(2));
        assert_eq!(p.euler_x(1), &(&x(1) * &x(1)).scale(&BigInt::from(2)) + &(&x(1) * &x(2)));
    }

    #[test]
    fn rotation_sends_x1_to_x2() {
        assert_eq!(x(1).rotate_vars(1), x(2));
        assert_eq!(x(3).rotate_vars(1), x(1));
    }
}
