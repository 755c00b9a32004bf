//! Symbolic rates, tableau fiber weights and lumping checks.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;

use super::config::{enumerate_configs, ZrpConfig};
use crate::error::{Budget, Error, Result};
use crate::exactalg::{t_int, Exponent};
use crate::shapes::Partition;
use crate::tabchain::{is_trigger, rate, ring_prime};
use crate::tableaux::{filling_count, proj, weight, Filling};
use crate::Poly;

/// One species leaving one site.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZrpMove {
    pub site: usize,
    pub species: u32,
    pub target: ZrpConfig,
    pub rate: Poly,
}

/// `x_j^{-1} t^d [c]_t` where `d` counts stronger particles at `j` and `c`
/// counts particles of species `r` at `j`.
pub fn species_rate(w: &ZrpConfig, j: usize, r: u32) -> Poly {
    let n = w.n();
    let c = w.count(j, r);
    if c == 0 {
        return Poly::zero(n);
    }
    let mut e = Exponent::zero(n);
    e.t = w.stronger(j, r) as i32;
    e.x[j - 1] = -1;
    t_int(c).embed(n, 0).mul_term(&e, &BigInt::one())
}

/// Every move out of `w`, sites in order, species descending within a site.
pub fn zrp_rates(w: &ZrpConfig) -> Vec<ZrpMove> {
    let mut out = Vec::new();
    for j in 1..=w.n() {
        let mut species: Vec<u32> = w.site(j).to_vec();
        species.dedup();
        for r in species {
            out.push(ZrpMove { site: j, species: r, target: w.hop(j, r), rate: species_rate(w, j, r) });
        }
    }
    out
}

/// Total rate from `w` to `w2` (zero if no single hop connects them).
pub fn rate_between(w: &ZrpConfig, w2: &ZrpConfig) -> Poly {
    zrp_rates(w)
        .into_iter()
        .filter(|m| &m.target == w2)
        .fold(Poly::zero(w.n()), |acc, m| acc + m.rate)
}

fn check_sites(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Contract("need at least one site".into()));
    }
    Ok(())
}

/// Fiber sums `Σ_{proj σ = w} wt(σ)` for every configuration `w`.
pub fn tazrp_weights(shape: &Partition, n: usize, budget: &Budget) -> Result<BTreeMap<ZrpConfig, Poly>> {
    check_sites(n)?;
    budget.check_fillings(n as u32, shape.size())?;
    let count = filling_count(shape, n as u32);
    let sums: HashMap<ZrpConfig, Poly> = (0..count)
        .into_par_iter()
        .fold(HashMap::new, |mut acc: HashMap<ZrpConfig, Poly>, i| {
            let s = Filling::from_index(shape, n as u32, i);
            let w = weight(&s);
            acc.entry(proj(&s)).and_modify(|p| *p += &w).or_insert(w);
            acc
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                a.entry(k).and_modify(|p| *p += &v).or_insert(v);
            }
            a
        });
    let mut out: BTreeMap<ZrpConfig, Poly> = enumerate_configs(shape, n).into_iter().map(|w| (w, Poly::zero(n))).collect();
    for (k, v) in sums {
        out.insert(k, v);
    }
    Ok(out)
}

/// The fiber sum for one configuration.
pub fn tazrp_weight(shape: &Partition, n: usize, w: &ZrpConfig, budget: &Budget) -> Result<Poly> {
    check_sites(n)?;
    if w.n() != n || w.species() != *shape {
        return Err(Error::Contract(format!("configuration {w} does not have content {shape} on {n} sites")));
    }
    budget.check_fillings(n as u32, shape.size())?;
    let count = filling_count(shape, n as u32);
    let parts: Vec<Poly> = (0..count)
        .into_par_iter()
        .filter_map(|i| {
            let s = Filling::from_index(shape, n as u32, i);
            (proj(&s) == *w).then(|| weight(&s))
        })
        .collect();
    Ok(Poly::par_sum(n, parts))
}

/// Thresholds `j` with `λ_j ≠ λ_{j+1}` and `j < ℓ(λ)`.
pub fn lumping_thresholds(shape: &Partition) -> Vec<u32> {
    (1..shape.len() as u32).filter(|&j| shape.part(j) != shape.part(j + 1)).collect()
}

/// Lump at threshold `j`: species `≥ λ_j` become species 1, the rest vanish.
pub fn lump(w: &ZrpConfig, cutoff: u32) -> ZrpConfig {
    w.map_species(|r| r >= cutoff, |_| 1)
}

/// Dynkin's criterion for lumping at threshold `j`, checked symbolically,
/// plus the tableau-level identity that `R'_u` moves the right particle at
/// the right total rate.
pub fn verify_lumping(shape: &Partition, n: usize, j: u32, budget: &Budget) -> Result<bool> {
    check_sites(n)?;
    if j == 0 || j >= shape.len() as u32 || shape.part(j) == shape.part(j + 1) {
        return Err(Error::Contract(format!("threshold {j} does not separate species of {shape}")));
    }
    let cutoff = shape.part(j);
    let configs = enumerate_configs(shape, n);
    budget.check("lumping configurations", configs.len() as u128)?;
    for w in &configs {
        let image = lump(w, cutoff);
        let mut into: BTreeMap<ZrpConfig, Poly> = BTreeMap::new();
        for m in zrp_rates(w) {
            let li = lump(&m.target, cutoff);
            if li != image {
                *into.entry(li).or_insert_with(|| Poly::zero(n)) += &m.rate;
            }
        }
        let mut expect: BTreeMap<ZrpConfig, Poly> = BTreeMap::new();
        for m in zrp_rates(&image).into_iter().filter(|m| m.target != image) {
            *expect.entry(m.target).or_insert_with(|| Poly::zero(n)) += &m.rate;
        }
        if into != expect {
            return Ok(false);
        }
    }
    budget.check_fillings(n as u32, shape.size())?;
    let count = filling_count(shape, n as u32);
    let ok = (0..count).into_par_iter().all(|i| {
        let s = Filling::from_index(shape, n as u32, i);
        tableau_moves_match(&s)
    });
    Ok(ok)
}

/// For every hop `w → w'` available in `w = proj(σ)`, the triggers `u` of
/// `σ` with `proj(R'_u σ) = w'` carry total rate `rate(w, w')`, and no
/// trigger produces anything else. Self-loops (one site) are ignored.
pub fn tableau_moves_match(s: &Filling) -> bool {
    let n = s.n() as usize;
    let w = proj(s);
    let mut got: BTreeMap<ZrpConfig, Poly> = BTreeMap::new();
    for u in s.shape().reading_order() {
        if !is_trigger(s, u) {
            continue;
        }
        let w2 = proj(&ring_prime(s, u).0);
        if w2 == w {
            continue;
        }
        *got.entry(w2).or_insert_with(|| Poly::zero(n)) += &rate(s, u);
    }
    let mut expect: BTreeMap<ZrpConfig, Poly> = BTreeMap::new();
    for m in zrp_rates(&w).into_iter().filter(|m| m.target != w) {
        *expect.entry(m.target).or_insert_with(|| Poly::zero(n)) += &m.rate;
    }
    got == expect
}
