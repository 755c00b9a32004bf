//! Evidence about whether a family of polynomials has a common factor.
//!
//! This is not a multivariate gcd. It proves coprimality one variable at a
//! time by substitution, and looks for common factors by trial division.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{exact_divide, Exponent};
use crate::Poly;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum GcdVerdict {
    /// The gcd is a constant. Proven, not sampled.
    UnitWithCertainty,
    /// No common factor was found and the substitution evidence points to a
    /// constant gcd, but not every variable could be covered by a proof.
    UnitProbably,
    /// A common non-unit divisor, checked by exact division.
    NonUnitWitness(Poly),
    /// Substitutions keep producing a nonconstant gcd, yet no candidate
    /// divides every input.
    Inconclusive,
}

impl GcdVerdict {
    pub fn is_unit(&self) -> bool {
        matches!(self, GcdVerdict::UnitWithCertainty | GcdVerdict::UnitProbably)
    }

    pub fn label(&self) -> &'static str {
        match self {
            GcdVerdict::UnitWithCertainty => "UnitWithCertainty",
            GcdVerdict::UnitProbably => "UnitProbably",
            GcdVerdict::NonUnitWitness(_) => "NonUnitWitness",
            GcdVerdict::Inconclusive => "Inconclusive",
        }
    }
}

/// [`gcd_is_unit_with_candidates`] with no extra candidate factors.
pub fn gcd_is_unit(ps: &[Poly], trials: usize, seed: u64) -> GcdVerdict {
    gcd_is_unit_with_candidates(ps, &[], trials, seed)
}

/// Decide, as far as possible, whether the inputs share a non-unit factor
/// in `Q[t, x_1..x_n]`.
///
/// For every variable `v` that all inputs involve, the remaining variables
/// are set to distinct random integers. If the leading coefficient in `v` of
/// some input survives the substitution and the univariate gcd is constant,
/// no common factor can involve `v`. When every variable is covered this way
/// the result is certain.
pub fn gcd_is_unit_with_candidates(ps: &[Poly], candidates: &[Poly], trials: usize, seed: u64) -> GcdVerdict {
    assert!(!ps.is_empty(), "gcd_is_unit needs at least one polynomial");
    assert!(ps.iter().all(|p| !p.is_zero()), "gcd_is_unit input contains zero");
    let n = ps[0].n();

    let common = ps.iter().map(|p| p.min_exponent()).reduce(|a, b| a.meet(&b)).expect("nonempty");
    let positive = Exponent { t: common.t.max(0), x: common.x.iter().map(|&k| k.max(0)).collect() };
    if !positive.is_zero() {
        return GcdVerdict::NonUnitWitness(Poly::monomial(positive, BigInt::one()));
    }

    let one = BigInt::one();
    let stripped: Vec<Poly> =
        ps.iter().map(|p| p.mul_term(&Exponent::zero(n).minus(&p.min_exponent()), &one)).collect();
    if stripped.iter().any(|p| p.is_monomial()) {
        return GcdVerdict::UnitWithCertainty;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut unproven_nonconstant = false;
    let mut unproven_any = false;
    for v in 0..=n {
        if stripped.iter().any(|p| p.max_degree_in(v) == Some(0)) {
            continue;
        }
        let mut proven = false;
        let mut saw_nonconstant = false;
        for _ in 0..trials {
            let point: Vec<BigInt> = sample(&mut rng, 10_000, n + 1).iter().map(|k| BigInt::from(k as i64 + 2)).collect();
            let unis: Vec<Vec<BigRational>> = stripped.iter().map(|p| specialize(p, v, &point)).collect();
            let keeps_degree =
                stripped.iter().zip(&unis).any(|(p, u)| degree(u) == p.max_degree_in(v).map(|d| d as usize));
            if !keeps_degree {
                continue;
            }
            let mut g = unis[0].clone();
            for u in &unis[1..] {
                if degree(&g) == Some(0) {
                    break;
                }
                g = uni_gcd(&g, u);
            }
            if degree(&g) == Some(0) {
                proven = true;
                break;
            }
            saw_nonconstant = true;
        }
        if !proven {
            unproven_any = true;
            unproven_nonconstant |= saw_nonconstant;
        }
    }
    if !unproven_any {
        return GcdVerdict::UnitWithCertainty;
    }

    let mut cands: Vec<&Poly> = candidates.iter().filter(|c| c.depends_on_x() || c.max_t_degree() != Some(0)).collect();
    let mut own: Vec<&Poly> = stripped.iter().collect();
    own.sort_by_key(|p| p.num_terms());
    cands.extend(own);
    for c in cands {
        if c.is_monomial() {
            continue;
        }
        if stripped.iter().all(|p| exact_divide(p, c).is_ok()) {
            return GcdVerdict::NonUnitWitness(c.clone());
        }
    }
    if unproven_nonconstant {
        GcdVerdict::Inconclusive
    } else {
        GcdVerdict::UnitProbably
    }
}

/// Substitute `point[w]` for every variable `w != v` (index 0 is `t`) and
/// return the coefficient list in `v`.
fn specialize(p: &Poly, v: usize, point: &[BigInt]) -> Vec<BigRational> {
    let mut out: Vec<BigInt> = Vec::new();
    for (e, c) in p.terms() {
        let mut val = c.clone();
        let mut dv = 0usize;
        let exps = std::iter::once(e.t).chain(e.x.iter().copied());
        for (w, k) in exps.enumerate() {
            if w == v {
                dv = k as usize;
            } else if k > 0 {
                val *= num_traits::pow(point[w].clone(), k as usize);
            }
        }
        if out.len() <= dv {
            out.resize(dv + 1, BigInt::zero());
        }
        out[dv] += val;
    }
    let mut r: Vec<BigRational> = out.into_iter().map(BigRational::from_integer).collect();
    trim(&mut r);
    r
}

fn trim(v: &mut Vec<BigRational>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn degree(v: &[BigRational]) -> Option<usize> {
    if v.is_empty() {
        None
    } else {
        Some(v.len() - 1)
    }
}

fn uni_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = b[db].clone();
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let f = r[r.len() - 1].clone() / lb.clone();
        for (i, c) in b.iter().enumerate() {
            r[shift + i] = r[shift + i].clone() - f.clone() * c.clone();
        }
        r.pop();
        trim(&mut r);
    }
    r
}

fn uni_gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = uni_rem(&x, &y);
        x = y;
        y = r;
    }
    if let Some(l) = x.last().cloned() {
        if !l.is_zero() {
            for c in x.iter_mut() {
                *c = c.clone() / l.clone();
            }
        }
    }
    x
}
