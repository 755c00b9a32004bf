//! Modified Macdonald polynomials at `q = 1`, the ZRP partition function,
//! the `t = 0` specialization, and evidence for the gcd conjectures.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Budget, Error, Result};
use crate::exactalg::{
    complete_homogeneous, exact_divide, gcd_is_unit_with_candidates, monomial_symmetric, t_binomial, t_multinomial, GcdVerdict,
};
use crate::shapes::{partitions_of, Cell, Partition};
use crate::tableaux::{filling_count, in_q, quinv, weight, Filling};
use crate::zrp::{tazrp_weights, ZrpConfig};
use crate::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Provenance {
    TableauSum,
    Factorized,
    MonomialExpansion,
}

/// `H̃_λ(x_1..x_n; 1, t)` together with how it was computed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MacdonaldQ1 {
    pub shape: Partition,
    pub n: usize,
    pub poly: Poly,
    pub provenance: Provenance,
}

/// Streaming sum of `wt(σ)` over `Tab(λ, n)`.
pub fn htilde_q1_tableaux(shape: &Partition, n: usize, budget: &Budget) -> Result<MacdonaldQ1> {
    budget.check_fillings(n as u32, shape.size())?;
    let count = filling_count(shape, n as u32);
    let poly = (0..count)
        .into_par_iter()
        .fold(|| Poly::zero(n), |acc, i| acc + weight(&Filling::from_index(shape, n as u32, i)))
        .reduce(|| Poly::zero(n), |a, b| a + b);
    Ok(MacdonaldQ1 { shape: shape.clone(), n, poly, provenance: Provenance::TableauSum })
}

/// `H̃_{⟨1^r⟩} = Σ_{μ ⊢ r} [r; μ]_t m_μ`.
pub fn htilde_ones(r: u32, n: usize) -> Poly {
    let mut p = Poly::zero(n);
    for mu in partitions_of(r) {
        if mu.len() > n {
            continue;
        }
        let m = monomial_symmetric(mu.parts(), n);
        p += &(&t_multinomial(r, mu.parts()).embed(n, 0) * &m);
    }
    if r == 0 {
        p = Poly::one(n);
    }
    p
}

/// `∏_j H̃_{⟨1^{λ'_j}⟩}`.
pub fn htilde_q1_factorized(shape: &Partition, n: usize) -> MacdonaldQ1 {
    let poly = shape.conjugate().parts().iter().fold(Poly::one(n), |acc, &r| &acc * &htilde_ones(r, n));
    MacdonaldQ1 { shape: shape.clone(), n, poly, provenance: Provenance::Factorized }
}

/// Coefficients `c_μ(t)` of `H̃_λ = Σ_μ c_μ m_μ`, computed by distributing
/// `μ` over the rows as compositions and multiplying t-multinomials.
pub fn htilde_monomial_coefficients(shape: &Partition, n: usize) -> BTreeMap<Partition, Poly> {
    let rows: Vec<u32> = shape.conjugate().parts().to_vec();
    let mut out = BTreeMap::new();
    for mu in partitions_of(shape.size()) {
        if mu.len() > n {
            continue;
        }
        let mut target: Vec<u32> = mu.parts().to_vec();
        target.resize(n, 0);
        let mut c = Poly::zero(0);
        distribute(&rows, &mut target, &Poly::one(0), &mut c);
        if !c.is_zero() {
            out.insert(mu, c);
        }
    }
    out
}

fn distribute(rows: &[u32], left: &mut Vec<u32>, acc: &Poly, out: &mut Poly) {
    let Some((&r, rest)) = rows.split_first() else {
        if left.iter().all(|&v| v == 0) {
            *out += acc;
        }
        return;
    };
    let mut alpha = vec![0u32; left.len()];
    fn each(i: usize, r: u32, alpha: &mut Vec<u32>, left: &mut Vec<u32>, f: &mut dyn FnMut(&[u32], &mut Vec<u32>)) {
        if i == alpha.len() {
            if r == 0 {
                f(&alpha.clone(), left);
            }
            return;
        }
        for k in 0..=r.min(left[i]) {
            alpha[i] = k;
            left[i] -= k;
            each(i + 1, r - k, alpha, left, f);
            left[i] += k;
        }
        alpha[i] = 0;
    }
    each(0, r, &mut alpha, left, &mut |a, left| {
        let next = acc * &t_multinomial(r, a);
        distribute(rest, left, &next, out);
    });
}

/// `Σ_μ c_μ(t) m_μ` from [`htilde_monomial_coefficients`].
pub fn htilde_q1_monomial(shape: &Partition, n: usize) -> MacdonaldQ1 {
    let poly = htilde_monomial_coefficients(shape, n)
        .iter()
        .fold(Poly::zero(n), |acc, (mu, c)| acc + &c.embed(n, 0) * &monomial_symmetric(mu.parts(), n));
    MacdonaldQ1 { shape: shape.clone(), n, poly, provenance: Provenance::MonomialExpansion }
}

/// `H̃_{⟨1^r⟩}(x_1..x_n) = Σ_i [r choose i]_t x_1^i H̃_{⟨1^{r-i}⟩}(x_2..x_n)`.
pub fn x1_expansion_check(r: u32, n: usize) -> bool {
    if n == 0 {
        return true;
    }
    let lhs = htilde_ones(r, n);
    let mut rhs = Poly::zero(n);
    for i in 0..=r {
        let rest = if n == 1 {
            if i == r {
                Poly::one(n)
            } else {
                continue;
            }
        } else {
            htilde_ones(r - i, n - 1).embed(n, 1)
        };
        rhs += &(&(&t_binomial(r, i).embed(n, 0) * &Poly::x_pow(n, 1, i as i32)) * &rest);
    }
    lhs == rhs
}

/// `Z = H̃_{λᶜ}` via the factorized form.
pub fn zrp_partition_function(shape: &Partition, n: usize) -> Poly {
    htilde_q1_factorized(&shape.compress(), n).poly
}

/// The unique quinv-free filling with the given row contents (rows listed
/// bottom to top). Rows are placed top-down, each sorted against the row
/// above.
pub fn quinv_free_sort(n: u32, rows_bottom_up: &[Vec<u32>]) -> Result<Filling> {
    if rows_bottom_up.windows(2).any(|w| w[0].len() < w[1].len()) || rows_bottom_up.iter().any(Vec::is_empty) {
        return Err(Error::Contract("row lengths must be positive and weakly decreasing upward".into()));
    }
    let mut sorted: Vec<Vec<u32>> = vec![Vec::new(); rows_bottom_up.len()];
    for r in (0..rows_bottom_up.len()).rev() {
        let above: &[u32] = if r + 1 < sorted.len() { &sorted[r + 1] } else { &[] };
        sorted[r] = sort_row_under(above, &rows_bottom_up[r]);
    }
    let top_down: Vec<Vec<u32>> = sorted.into_iter().rev().collect();
    Filling::from_rows(n, &top_down)
}

/// Arrange `row` so that no triple `(above[i], row[i], row[j])`, `i < j`,
/// lies in the quinv set. Missing entries above count as 0.
///
/// For fixed `a`, "`b` may precede `c`" is a total order on labels:
/// `a-1, a-2, ..., 1`, then the labels above `a` from the top down, then `a`.
/// Each position takes the earliest remaining label in its own order.
pub fn sort_row_under(above: &[u32], row: &[u32]) -> Vec<u32> {
    let top = row.iter().copied().max().unwrap_or(0).max(above.iter().copied().max().unwrap_or(0));
    let rank = |a: u32, b: u32| -> u32 {
        if b == a {
            u32::MAX
        } else if b < a {
            a - b
        } else {
            a + (top + 1 - b)
        }
    };
    let mut left = row.to_vec();
    let mut out = Vec::with_capacity(row.len());
    for i in 0..row.len() {
        let a = above.get(i).copied().unwrap_or(0);
        let k = (0..left.len()).min_by_key(|&k| rank(a, left[k])).expect("nonempty");
        out.push(left.swap_remove(k));
    }
    out
}

/// The adjacent-swap pass: swap neighbours while `(above[i], row[i],
/// row[i+1])` is a quinv triple. Can stop at a row that still has a
/// non-adjacent quinv triple; [`sort_row_under`] always finishes.
pub fn bubble_row_under(above: &[u32], row: &[u32]) -> Vec<u32> {
    let a = |i: usize| above.get(i).copied().unwrap_or(0);
    let mut b = row.to_vec();
    loop {
        let mut swapped = false;
        for i in 0..b.len().saturating_sub(1) {
            if in_q(a(i), b[i], b[i + 1]) {
                b.swap(i, i + 1);
                swapped = true;
            }
        }
        if !swapped {
            return b;
        }
    }
}

/// `Σ_{quinv(σ)=0} x^σ = h_{λ'}`.
pub fn check_t0_identity(shape: &Partition, n: usize, budget: &Budget) -> Result<bool> {
    budget.check_fillings(n as u32, shape.size())?;
    let count = filling_count(shape, n as u32);
    let lhs = (0..count)
        .into_par_iter()
        .fold(
            || Poly::zero(n),
            |acc, i| {
                let s = Filling::from_index(shape, n as u32, i);
                if quinv(&s) == 0 {
                    acc + weight(&s)
                } else {
                    acc
                }
            },
        )
        .reduce(|| Poly::zero(n), |a, b| a + b);
    let rhs = shape.conjugate().parts().iter().fold(Poly::one(n), |acc, &r| &acc * &complete_homogeneous(r, n));
    Ok(lhs == rhs)
}

/// Machine-readable outcome of one gcd conjecture instance.
#[derive(Clone, Debug, Serialize)]
pub struct CompressedEvidence {
    pub shape: String,
    pub n: usize,
    pub states: usize,
    pub verdict: &'static str,
    pub witness: Option<Poly>,
    pub trials: usize,
    pub seed: u64,
    pub caveat: &'static str,
}

const CAVEAT: &str = "UnitProbably rests on random substitutions; only UnitWithCertainty and NonUnitWitness are proofs";

/// Is the gcd of the fiber weights a unit, for compressed `λ`?
pub fn check_conjecture_compressed(shape: &Partition, n: usize, trials: usize, seed: u64, budget: &Budget) -> Result<(GcdVerdict, CompressedEvidence)> {
    if !shape.is_compressed() {
        return Err(Error::Contract(format!("{shape} is not compressed")));
    }
    if shape.is_empty() {
        return Err(Error::Contract("empty shape".into()));
    }
    if n < 2 {
        return Err(Error::Contract("one site has a single state of weight x1^|λ|; the gcd question needs n ≥ 2".into()));
    }
    let ws: Vec<Poly> = tazrp_weights(shape, n, budget)?.into_values().collect();
    let candidates: Vec<Poly> = (1..=shape.size()).map(|r| htilde_ones(r, n)).collect();
    let verdict = gcd_is_unit_with_candidates(&ws, &candidates, trials, seed);
    let witness = match &verdict {
        GcdVerdict::NonUnitWitness(p) => Some(p.clone()),
        _ => None,
    };
    let ev = CompressedEvidence {
        shape: shape.to_string(),
        n,
        states: ws.len(),
        verdict: verdict.label(),
        witness,
        trials,
        seed,
        caveat: CAVEAT,
    };
    Ok((verdict, ev))
}

/// Where a filling of `λᶜ` sits inside `dg(λ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Embedding {
    /// Column `i` of `σ` fills the bottom cells of column `i`; new cells on top.
    Bottom,
    /// Column `i` of `σ` fills the top cells; new cells underneath.
    Top,
}

/// All fillings of `λ` that restrict to `σ` under the given embedding.
pub fn extensions(shape: &Partition, sigma: &Filling, emb: Embedding) -> Result<Vec<Filling>> {
    let small = sigma.shape();
    if small.len() != shape.len() || small.parts().iter().zip(shape.parts()).any(|(a, b)| a > b) {
        return Err(Error::Contract(format!("{small} does not fit column by column inside {shape}")));
    }
    let n = sigma.n();
    let mut free: Vec<Cell> = Vec::new();
    for (i, (&h, &hs)) in shape.parts().iter().zip(small.parts()).enumerate() {
        let rows: Vec<u32> = match emb {
            Embedding::Bottom => (hs + 1..=h).collect(),
            Embedding::Top => (1..=h - hs).collect(),
        };
        free.extend(rows.into_iter().map(|r| Cell::new(r, i as u32 + 1)));
    }
    let base_cols: Vec<Vec<u32>> = shape
        .parts()
        .iter()
        .zip(sigma.cols())
        .map(|(&h, col)| {
            let pad = vec![1u32; (h as usize) - col.len()];
            match emb {
                Embedding::Bottom => col.iter().copied().chain(pad).collect(),
                Embedding::Top => pad.into_iter().chain(col.iter().copied()).collect(),
            }
        })
        .collect();
    let base = Filling::new(shape.clone(), n, base_cols);
    let total = (n as u64).checked_pow(free.len() as u32).ok_or_else(|| Error::Contract("too many extensions".into()))?;
    let mut out = Vec::with_capacity(total as usize);
    for mut idx in 0..total {
        let mut f = base.clone();
        for &c in free.iter().rev() {
            f.set(c, (idx % n as u64) as u32 + 1);
            idx /= n as u64;
        }
        out.push(f);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct RefinedEvidence {
    pub shape: String,
    pub n: u32,
    pub sigma: String,
    pub sigma_weight: Poly,
    pub ratio: Poly,
    pub bottom_sum: Poly,
    pub bottom_holds: bool,
    pub top_sum: Poly,
    pub top_holds: bool,
    pub readings_agree: bool,
}

/// `Σ_{T ∈ Ext_λ(σ)} wt(T) = wt(σ) H̃_λ / H̃_{λᶜ}` under the bottom
/// embedding. The evidence also records the top embedding.
pub fn check_conjecture_refined(shape: &Partition, sigma: &Filling, budget: &Budget) -> Result<(bool, RefinedEvidence)> {
    if !shape.is_strict() {
        return Err(Error::Contract(format!("{shape} is not strict")));
    }
    let lc = shape.compress();
    if sigma.shape() != &lc {
        return Err(Error::Contract(format!("σ has shape {}, expected {lc}", sigma.shape())));
    }
    let n = sigma.n();
    let extra = shape.size() - lc.size();
    budget.check_fillings(n, extra)?;
    let nu = n as usize;
    let num = htilde_q1_factorized(shape, nu).poly;
    let den = htilde_q1_factorized(&lc, nu).poly;
    let ratio = exact_divide(&num, &den).map_err(|_| Error::Internal(format!("H̃ of {lc} does not divide H̃ of {shape}")))?;
    let ws = weight(sigma);
    let expected = &ws * &ratio;
    let sum = |emb| -> Result<Poly> { Ok(extensions(shape, sigma, emb)?.iter().fold(Poly::zero(nu), |a, t| a + weight(t))) };
    let bottom_sum = sum(Embedding::Bottom)?;
    let top_sum = sum(Embedding::Top)?;
    let bottom_holds = bottom_sum == expected;
    let top_holds = top_sum == expected;
    let ev = RefinedEvidence {
        shape: shape.to_string(),
        n,
        sigma: sigma.to_string(),
        sigma_weight: ws,
        ratio,
        bottom_sum,
        bottom_holds,
        top_sum,
        top_holds,
        readings_agree: bottom_holds == top_holds,
    };
    Ok((bottom_holds, ev))
}

/// `H̃_λ / H̃_{λᶜ}` divides every fiber weight.
pub fn check_fiber_divisibility(shape: &Partition, n: usize, budget: &Budget) -> Result<bool> {
    let num = htilde_q1_factorized(shape, n).poly;
    let den = htilde_q1_factorized(&shape.compress(), n).poly;
    let Ok(ratio) = exact_divide(&num, &den) else {
        return Ok(false);
    };
    let ws: BTreeMap<ZrpConfig, Poly> = tazrp_weights(shape, n, budget)?;
    Ok(ws.values().all(|w| exact_divide(w, &ratio).is_ok()))
}
