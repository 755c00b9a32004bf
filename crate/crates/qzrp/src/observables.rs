//! Densities, currents, restricted weights, consistency of the top rows,
//! translation covariance, and a Monte Carlo probe of pathwise symmetry.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Budget, Error, Result};
use crate::exactalg::{is_symmetric_under, log_derivative, t_int, Scalar};
use crate::macdonald::htilde_ones;
use crate::shapes::Partition;
use crate::tableaux::{filling_count, restrict_top, weight, Filling};
use crate::zrp::{simulate_from, species_rate, stationary_exact, tazrp_weights, SimOptions, ZrpConfig, ZrpParams};
use crate::{Poly, Rational};

/// `num / den`, never reduced. Equality is cross-multiplication.
#[derive(Clone, Debug, Serialize)]
pub struct RationalFunction {
    pub num: Poly,
    pub den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        RationalFunction { num, den }
    }

    pub fn from_poly(p: Poly) -> Self {
        let n = p.n();
        RationalFunction { num: p, den: Poly::one(n) }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return RationalFunction::new(&self.num + &o.num, self.den.clone());
        }
        RationalFunction::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&RationalFunction { num: -o.num.clone(), den: o.den.clone() })
    }

    pub fn mul(&self, o: &Self) -> Self {
        RationalFunction::new(&self.num * &o.num, &self.den * &o.den)
    }

    /// `x_i → x_{i+k}` in numerator and denominator.
    pub fn rotate_vars(&self, k: usize) -> Self {
        RationalFunction::new(self.num.rotate_vars(k), self.den.rotate_vars(k))
    }

    pub fn eval<F: Scalar>(&self, x: &[F], t: &F) -> F {
        self.num.eval(x, t) / self.den.eval(x, t)
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, o: &Self) -> bool {
        &self.num * &o.den == &o.num * &self.den
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

fn check_species(shape: &Partition, species: u32) -> Result<()> {
    if !shape.parts().contains(&species) {
        return Err(Error::Contract(format!("species {species} does not occur in {shape}")));
    }
    Ok(())
}

fn check_site(n: usize, site: usize) -> Result<()> {
    if site == 0 || site > n {
        return Err(Error::Contract(format!("site {site} outside 1..={n}")));
    }
    Ok(())
}

/// Distinct parts of `λ` in decreasing order, each paired with its label in
/// the compressed shape.
pub fn compressed_labels(shape: &Partition) -> Vec<(u32, u32)> {
    let mut distinct = shape.parts().to_vec();
    distinct.dedup();
    let k = distinct.len() as u32;
    distinct.iter().enumerate().map(|(i, &s)| (s, k - i as u32)).collect()
}

/// `⟨τ_i^{(j)}⟩` as `Σ_w (count) wt(w) / Σ_w wt(w)`, species labelled as
/// in `λ`.
pub fn density_exact(shape: &Partition, n: usize, species: u32, site: usize, budget: &Budget) -> Result<RationalFunction> {
    check_species(shape, species)?;
    check_site(n, site)?;
    let ws = tazrp_weights(shape, n, budget)?;
    let mut num = Poly::zero(n);
    let mut den = Poly::zero(n);
    for (w, p) in &ws {
        let c = w.count(site, species);
        if c > 0 {
            num += &p.scale(&c.into());
        }
        den += p;
    }
    Ok(RationalFunction::new(num, den))
}

/// `M_j = m_j + ... + m_k` for compressed `λ`.
fn tail_count(shape: &Partition, species: u32) -> u32 {
    shape.parts().iter().filter(|&&r| r >= species).count() as u32
}

fn check_compressed(shape: &Partition, species: u32) -> Result<()> {
    if !shape.is_compressed() {
        return Err(Error::Contract(format!("{shape} is not compressed")));
    }
    check_species(shape, species)
}

/// `x_1 ∂ log(H̃_{⟨1^{M_j}⟩} / H̃_{⟨1^{M_{j+1}}⟩})`, moved to `site` by
/// rotating the variables.
pub fn density_formula(shape: &Partition, n: usize, species: u32, site: usize) -> Result<RationalFunction> {
    check_compressed(shape, species)?;
    check_site(n, site)?;
    let part = |m: u32| {
        let (e, h) = log_derivative(&htilde_ones(m, n), 1);
        RationalFunction::new(e, h)
    };
    let mj = tail_count(shape, species);
    let mk = tail_count(shape, species + 1);
    let mut r = part(mj);
    if mk > 0 {
        r = r.sub(&part(mk));
    }
    Ok(r.rotate_vars(site - 1))
}

/// `[M]_t H̃_{⟨1^{M-1}⟩} / H̃_{⟨1^M⟩}`, zero for `M = 0`.
fn single_species_current(m: u32, n: usize) -> RationalFunction {
    if m == 0 {
        return RationalFunction::from_poly(Poly::zero(n));
    }
    RationalFunction::new(&t_int(m).embed(n, 0) * &htilde_ones(m - 1, n), htilde_ones(m, n))
}

/// Current of species `j` through any bond, compressed `λ`.
pub fn current_formula(shape: &Partition, n: usize, species: u32) -> Result<RationalFunction> {
    check_compressed(shape, species)?;
    let a = single_species_current(tail_count(shape, species), n);
    let b = single_species_current(tail_count(shape, species + 1), n);
    Ok(a.sub(&b))
}

/// Stationary flux of species `j` out of `site`, as a rational function
/// built from fiber weights and symbolic rates.
pub fn current_symbolic(shape: &Partition, n: usize, species: u32, site: usize, budget: &Budget) -> Result<RationalFunction> {
    check_species(shape, species)?;
    check_site(n, site)?;
    let ws = tazrp_weights(shape, n, budget)?;
    let mut num = Poly::zero(n);
    let mut den = Poly::zero(n);
    for (w, p) in &ws {
        num += &(p * &species_rate(w, site, species));
        den += p;
    }
    Ok(RationalFunction::new(num, den))
}

/// Stationary flux of species `j` across the bond `n → 1`, from an exact
/// stationary solve.
pub fn current_exact(shape: &Partition, n: usize, species: u32, params: &ZrpParams, budget: &Budget) -> Result<Rational> {
    check_species(shape, species)?;
    let pi = stationary_exact(shape, n, params, budget)?;
    Ok(pi
        .iter()
        .map(|(w, p)| p * species_rate(w, n, species).eval(&params.x, &params.t))
        .fold(Rational::zero(), |a, b| a + b))
}

/// Sum of fiber weights over full configurations whose first `ℓ` sites
/// agree with `w`.
pub fn restricted_weight(shape: &Partition, n: usize, w: &ZrpConfig, budget: &Budget) -> Result<Poly> {
    let l = w.n();
    if l > n {
        return Err(Error::Contract(format!("restriction to {l} sites of a ring with {n}")));
    }
    Ok(restricted_weights(shape, n, l, budget)?.remove(w).unwrap_or_else(|| Poly::zero(n)))
}

/// All restricted weights on sites `1..=ℓ`.
pub fn restricted_weights(shape: &Partition, n: usize, l: usize, budget: &Budget) -> Result<BTreeMap<ZrpConfig, Poly>> {
    if l > n {
        return Err(Error::Contract(format!("ℓ = {l} exceeds n = {n}")));
    }
    let mut out: BTreeMap<ZrpConfig, Poly> = BTreeMap::new();
    for (w, p) in tazrp_weights(shape, n, budget)? {
        *out.entry(w.prefix(l)).or_insert_with(|| Poly::zero(n)) += &p;
    }
    Ok(out)
}

/// Every restricted weight is symmetric in `x_{ℓ+1}, ..., x_n`.
pub fn check_restricted_symmetry(shape: &Partition, n: usize, l: usize, budget: &Budget) -> Result<bool> {
    let vars: Vec<usize> = (l + 1..=n).collect();
    Ok(restricted_weights(shape, n, l, budget)?.values().all(|p| is_symmetric_under(p, &vars)))
}

/// For every filling `σ` of the top part (bottom `k` rows removed), the
/// completions sum to `∏_{r ≤ k} H̃_{⟨1^{λ'_r}⟩} · wt(σ)`.
pub fn check_top_consistency(shape: &Partition, n: usize, k: u32, budget: &Budget) -> Result<bool> {
    if k > shape.height() {
        return Err(Error::Contract(format!("cannot remove {k} rows from {shape}")));
    }
    budget.check_fillings(n as u32, shape.size())?;
    let factor = (1..=k).fold(Poly::one(n), |acc, r| &acc * &htilde_ones(shape.row_len(r), n));
    let count = filling_count(shape, n as u32);
    let sums: BTreeMap<Filling, Poly> = (0..count)
        .into_par_iter()
        .fold(BTreeMap::new, |mut acc: BTreeMap<Filling, Poly>, i| {
            let s = Filling::from_index(shape, n as u32, i);
            let w = weight(&s);
            acc.entry(restrict_top(&s, k)).and_modify(|p| *p += &w).or_insert(w);
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (key, v) in b {
                a.entry(key).and_modify(|p| *p += &v).or_insert(v);
            }
            a
        });
    let expected_states = filling_count(&shape.drop_rows(k), n as u32);
    if sums.len() as u64 != expected_states {
        return Ok(false);
    }
    Ok(sums.iter().all(|(top, total)| *total == &factor * &weight(top)))
}

/// `wt(rotate(w)) = wt(w)` with `x_i → x_{i+1}`, for every `w`.
pub fn check_translation_covariance(shape: &Partition, n: usize, budget: &Budget) -> Result<bool> {
    let ws = tazrp_weights(shape, n, budget)?;
    Ok(ws.iter().all(|(w, p)| ws[&w.rotate(1)] == p.rotate_vars(1)))
}

/// Outcome of the two-sample test. Evidence, not proof.
#[derive(Clone, Debug, Serialize)]
pub struct McReport {
    pub shape: String,
    pub n: usize,
    pub l: usize,
    pub permutation: Vec<usize>,
    pub t: f64,
    pub horizon: f64,
    pub paths: usize,
    pub seed: u64,
    pub functional: &'static str,
    pub statistic: f64,
    pub alpha: f64,
    pub threshold: f64,
    pub rejected: bool,
    pub exploratory: bool,
    pub note: &'static str,
}

/// Two-sample Kolmogorov–Smirnov statistic `sup |F_a - F_b|`.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0f64);
    while i < a.len() && j < b.len() {
        let v = a[i].min(b[j]);
        while i < a.len() && a[i] <= v {
            i += 1;
        }
        while j < b.len() && b[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Asymptotic critical value of the two-sample KS test at level `alpha`.
pub fn ks_threshold(na: usize, nb: usize, alpha: f64) -> f64 {
    let c = (-(alpha / 2.0).ln() / 2.0).sqrt();
    c * ((na + nb) as f64 / (na as f64 * nb as f64)).sqrt()
}

/// Simulate from `initial` under `x` and under `x` with sites permuted by
/// `perm` (`perm[i]` is the new position of `x_{i+1}`), and compare the laws
/// of the time site 1 spends empty on `[0, horizon]`.
///
/// Needs `t = 0` unless `exploratory`, in which case the report is flagged.
#[allow(clippy::too_many_arguments)]
pub fn pathwise_symmetry_mc(
    initial: &ZrpConfig,
    l: usize,
    perm: &[usize],
    params: &ZrpParams<f64>,
    seed: u64,
    horizon: f64,
    paths: usize,
    exploratory: bool,
) -> Result<McReport> {
    let n = initial.n();
    if params.t != 0.0 && !exploratory {
        return Err(Error::Contract("pathwise symmetry is only claimed at t = 0".into()));
    }
    if l == 0 || l > n {
        return Err(Error::Contract(format!("ℓ = {l} must lie in 1..={n}")));
    }
    if perm.len() != n || {
        let mut s = perm.to_vec();
        s.sort_unstable();
        s != (1..=n).collect::<Vec<_>>()
    } {
        return Err(Error::Contract(format!("{perm:?} is not a permutation of 1..={n}")));
    }
    if paths == 0 {
        return Err(Error::Contract("need at least one path".into()));
    }
    let mut x2 = vec![0.0; n];
    for (i, &p) in perm.iter().enumerate() {
        x2[p - 1] = params.x[i];
    }
    let other = ZrpParams { x: x2, t: params.t };
    let opts = SimOptions { horizon, batches: 1, record_events: false };
    let sample = |ps: &ZrpParams<f64>, offset: u64| -> Result<Vec<f64>> {
        (0..paths as u64)
            .into_par_iter()
            .map(|k| simulate_from(initial, ps, seed, offset + k, &opts).map(|tr| tr.empty_time[0]))
            .collect()
    };
    let a = sample(params, 0)?;
    let b = sample(&other, paths as u64)?;
    let alpha = 0.001;
    let statistic = ks_statistic(&a, &b);
    let threshold = ks_threshold(a.len(), b.len(), alpha);
    Ok(McReport {
        shape: initial.species().to_string(),
        n,
        l,
        permutation: perm.to_vec(),
        t: params.t,
        horizon,
        paths,
        seed,
        functional: "time site 1 is empty on [0, horizon]",
        statistic,
        alpha,
        threshold,
        rejected: statistic > threshold,
        exploratory: exploratory && params.t != 0.0,
        note: "two-sample Kolmogorov-Smirnov test; a non-rejection is evidence, not proof",
    })
}
