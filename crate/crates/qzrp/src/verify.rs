//! Exhaustive identity suites for one shape and ring size.
//!
//! Each suite returns a [`SuiteReport`] listing every identity it asserted
//! with the number of instances checked and the first failing instance.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Budget, Error, Result};
use crate::exactalg::{exact_divide, is_symmetric_under};
use crate::macdonald::{check_t0_identity, htilde_q1_factorized, htilde_q1_monomial, htilde_q1_tableaux};
use crate::multiline::{from_multiline, multiline_jump, multiline_weight, to_multiline, Jump};
use crate::observables::{
    check_restricted_symmetry, check_top_consistency, compressed_labels, check_translation_covariance, current_exact, current_formula,
    current_symbolic, density_exact, density_formula, RationalFunction,
};
use crate::shapes::{Cell, Partition};
use crate::tabchain::{
    chain_top, is_trigger, quinv_balance, quinv_diff_uncorrected, ring, ring_inverse_with_cell, tau, verify_balance,
    verify_irreducibility,
};
use crate::tableaux::{dbar_ubar, dsum_usum, filling_count, llt_stats, quinv, row_updown, weight, Filling};
use crate::zrp::{lumping_thresholds, stationary_exact, tableau_moves_match, tazrp_weights, verify_lumping, ZrpParams};
use crate::{Poly, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Balance,
    Updown,
    Quinvdiff,
    Lumping,
    Stationary,
    Symmetry,
    Density,
    Current,
    Top,
    Multiline,
    T0,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Balance,
        Suite::Updown,
        Suite::Quinvdiff,
        Suite::Lumping,
        Suite::Stationary,
        Suite::Symmetry,
        Suite::Density,
        Suite::Current,
        Suite::Top,
        Suite::Multiline,
        Suite::T0,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Balance => "balance",
            Suite::Updown => "updown",
            Suite::Quinvdiff => "quinvdiff",
            Suite::Lumping => "lumping",
            Suite::Stationary => "stationary",
            Suite::Symmetry => "symmetry",
            Suite::Density => "density",
            Suite::Current => "current",
            Suite::Top => "top",
            Suite::Multiline => "multiline",
            Suite::T0 => "t0",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

/// `"all"` or a comma-separated list of suite names.
pub fn parse_suites(s: &str) -> Result<Vec<Suite>> {
    if s.trim() == "all" {
        return Ok(Suite::ALL.to_vec());
    }
    s.split(',').map(|p| p.trim().parse()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub checked: u64,
    pub failed: u64,
    /// First failing instance in enumeration order.
    pub witness: Option<String>,
    pub note: Option<String>,
}

impl IdentityCheck {
    fn new(identity: &str) -> Self {
        IdentityCheck { identity: identity.to_string(), checked: 0, failed: 0, witness: None, note: None }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    fn skipped(identity: &str, note: &str) -> Self {
        IdentityCheck { note: Some(note.to_string()), ..IdentityCheck::new(identity) }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    fn merge(mut self, o: IdentityCheck) -> IdentityCheck {
        self.checked += o.checked;
        self.failed += o.failed;
        if self.witness.is_none() {
            self.witness = o.witness;
        }
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub shape: String,
    pub n: usize,
    pub checks: Vec<IdentityCheck>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(IdentityCheck::passed)
    }

    pub fn summary(&self) -> String {
        let mut out = format!("{} on {} n={}: {}", self.suite, self.shape, self.n, if self.passed() { "pass" } else { "FAIL" });
        for c in &self.checks {
            out.push_str(&format!("\n  {}: {} checked, {} failed", c.identity, c.checked, c.failed));
            if let Some(w) = &c.witness {
                out.push_str(&format!(" (first: {w})"));
            }
            if let Some(note) = &c.note {
                out.push_str(&format!(" [{note}]"));
            }
        }
        out
    }
}

/// `x = (2, 3, 5, 7, ...)[:n]`, `t = 1/3`.
pub fn default_point(n: usize) -> ZrpParams {
    const PRIMES: [i64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    let x: Vec<i64> = (0..n).map(|i| PRIMES.get(i).copied().unwrap_or(41 + 2 * i as i64)).collect();
    ZrpParams::from_ints(&x, 1, 3)
}

/// Run one family of checks per filling, in parallel, keeping the first
/// witness in enumeration order.
fn over_fillings<F>(shape: &Partition, n: usize, budget: &Budget, names: &[&str], check: F) -> Result<Vec<IdentityCheck>>
where
    F: Fn(&Filling, &mut [IdentityCheck]) + Sync,
{
    budget.check_fillings(n as u32, shape.size())?;
    let count = filling_count(shape, n as u32);
    let fresh = || names.iter().map(|s| IdentityCheck::new(s)).collect::<Vec<_>>();
    const CHUNK: u64 = 4096;
    let per_chunk: Vec<Vec<IdentityCheck>> = (0..count.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut acc = fresh();
            for i in c * CHUNK..count.min((c + 1) * CHUNK) {
                check(&Filling::from_index(shape, n as u32, i), &mut acc);
            }
            acc
        })
        .collect();
    Ok(per_chunk.into_iter().fold(fresh(), |a, b| a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect()))
}

fn single(identity: &str, ok: bool, witness: impl FnOnce() -> String) -> IdentityCheck {
    let mut c = IdentityCheck::new(identity);
    c.record(ok, witness);
    c
}

pub fn run_suite(suite: Suite, shape: &Partition, n: usize, point: &ZrpParams, budget: &Budget) -> Result<SuiteReport> {
    if n == 0 {
        return Err(Error::Contract("need at least one site".into()));
    }
    let checks = match suite {
        Suite::Balance => balance(shape, n, budget)?,
        Suite::Updown => updown(shape, n, budget)?,
        Suite::Quinvdiff => quinvdiff(shape, n, budget)?,
        Suite::Lumping => lumping(shape, n, budget)?,
        Suite::Stationary => stationary(shape, n, point, budget)?,
        Suite::Symmetry => symmetry(shape, n, budget)?,
        Suite::Density => density(shape, n, budget)?,
        Suite::Current => current(shape, n, point, budget)?,
        Suite::Top => top(shape, n, budget)?,
        Suite::Multiline => multiline(shape, n, budget)?,
        Suite::T0 => t0(shape, n, budget)?,
    };
    Ok(SuiteReport { suite, shape: shape.to_string(), n, checks })
}

fn balance(shape: &Partition, n: usize, budget: &Budget) -> Result<Vec<IdentityCheck>> {
    let mut checks = over_fillings(shape, n, budget, &["global balance", "ringing round trip and content shift"], |s, acc| {
        acc[0].record(verify_balance(s), || s.to_string());
        for u in shape.reading_order() {
            if !is_trigger(s, u) {
                continue;
            }
            let sigma = ring(s, u);
            let y = Cell::new(chain_top(s, u), u.col);
            let mut c = sigma.content();
            c[s.get(u) as usize - 1] += 1;
            c[sigma.get(y) as usize - 1] -= 1;
            let ok = ring_inverse_with_cell(&sigma, y) == (s.clone(), u) && c == s.content();
            acc[1].record(ok, || format!("{s} at {u}"));
        }
    })?;
    let irreducible = verify_irreducibility(shape, n as u32, false, budget)?;
    checks.push(single("irreducibility", irreducible, || shape.to_string()));
    Ok(checks)
}

fn updown(shape: &Partition, n: usize, budget: &Budget) -> Result<Vec<IdentityCheck>> {
    let tm1 = &Poly::t_pow(0, 1) - &Poly::one(0);
    let h = shape.height() as usize;
    over_fillings(shape, n, budget, &["D = U", "Dbar = Ubar", "telescoping (t-1)(d_{j+1} - u_j)"], |s, acc| {
        for k in 1..=n as u32 {
            let (d, u) = dsum_usum(s, k);
            acc[0].record(d == u, || format!("{s} k={k}"));
            let (d, u) = dbar_ubar(s, k);
            acc[1].record(d == u, || format!("{s} k={k}"));
            let rows = row_updown(s, k);
            let ell = |j: usize| -> i32 {
                if j == 0 || j > h {
                    0
                } else {
                    (1..=shape.row_len(j as u32)).filter(|&c| s.get(Cell::new(j as u32, c)) == k).count() as i32
                }
            };
            for j in 0..=h {
                let dj1 = if j < h { rows[j].0.clone() } else { Poly::zero(0) };
                let uj = if j >= 1 { rows[j - 1].1.clone() } else { Poly::zero(0) };
                let lhs = &tm1 * &(&dj1 - &uj);
                let rhs = &Poly::t_pow(0, ell(j + 1)) - &Poly::t_pow(0, ell(j));
                acc[2].record(lhs == rhs, || format!("{s} k={k} j={j}"));
            }
        }
    })
}

fn quinvdiff(shape: &Partition, n: usize, budget: &Budget) -> Result<Vec<IdentityCheck>> {
    let names = [
        "quinv difference under R'",
        "quinv difference under R with correction",
        "tau changes quinv by the top comparison",
        "quinv = inv_hat - arm_hat",
    ];
    over_fillings(shape, n, budget, &names, |s, acc| {
        for u in shape.reading_order() {
            if !is_trigger(s, u) {
                continue;
            }
            let (a, b) = quinv_balance(s, u);
            acc[0].record(a == b, || format!("{s} at {u}"));
            let (a, b) = quinv_diff_uncorrected(s, u);
            acc[1].record(a == b, || format!("{s} at {u}"));
        }
        for j in 1..shape.len() as u32 {
            if shape.part(j) != shape.part(j + 1) {
                continue;
            }
            let k = shape.part(j);
            let (a, b) = (s.get(Cell::new(k, j)), s.get(Cell::new(k, j + 1)));
            let expect = (a > b) as i64 - (a < b) as i64;
            acc[2].record(quinv(&tau(s, j)) as i64 - quinv(s) as i64 == expect, || format!("{s} j={j}"));
        }
        let st = llt_stats(s);
        acc[3].record(quinv(s) as i64 == st.inv_hat as i64 - st.arm_hat as i64, || s.to_string());
    })
}

fn lumping(shape: &Partition, n: usize, budget: &Budget) -> Result<Vec<IdentityCheck>> {
    let mut checks = over_fillings(shape, n, budget, &["tableau moves project to ZRP moves"], |s, acc| {
        acc[0].record(tableau_moves_match(s), || s.to_string());
    })?;
    let mut dynkin = IdentityCheck::new("lumping to single species");
    for j in lumping_thresholds(shape) {
        dynkin.record(verify_lumping(shape, n, j, budget)?, || format!("threshold {j}"));
    }
    if dynkin.checked == 0 {
        dynkin.note = Some("single species: nothing to lump".into());
    }
    checks.push(dynkin);
    Ok(checks)
}

fn stationary(shape: &Partition, n: usize, point: &ZrpParams, budget: &Budget) -> Result<Vec<IdentityCheck>> {
    if point.n() != n {
        return Err(Error::Contract(format!("parameter point has {} x-values, expected {n}", point.n())));
    }
    let pi = stationary_exact(shape, n, point, budget)?;
    let ws = tazrp_weights(shape, n, budget)?;
    let vals: Vec<(String, Rational)> = ws.iter().map(|(w, p)| (w.to_string(), p.eval(&point.x, &point.t))).collect();
    let z: Rational = vals.iter().map(|(_, v)| v.clone()).sum();
    let mut c = IdentityCheck::new("linear solve equals weight / Z");
    if z.is_zero() {
        return Err(Error::Contract("partition function vanishes at this point".into()));
    }
    for ((w, v), (w2, p)) in vals.iter().zip(&pi) {
        c.record(*w == w2.to_string() && v / &z == *p, || w.clone());
    }
    if pi.len() != vals.len() {
        c.record(false, || format!("{} solved states for {} weights", pi.len(), vals.len()));
    }
    Ok(vec![c])
}

fn symmetry(shape: &Partition, n: usize, budget: &Budget) -> Result<Vec<IdentityCheck>> {
    let mut restricted = IdentityCheck::new("restricted weights symmetric in x_{l+1..n}");
    for l in 0..=n {
        restricted.record(check_restricted_symmetry(shape, n, l, budget)?, || format!("l={l}"));
    }
    let translation = single("translation covariance", check_translation_covariance(shape, n, budget)?, || shape.to_string());
    let tab = htilde_q1_tableaux(shape, n, budget)?.poly;
    let fac = htilde_q1_factorized(shape, n).poly;
    let mon = htilde_q1_monomial(shape, n).poly;
    let vars: Vec<usize> = (1..=n).collect();
    let three = single("tableau sum = factorized = monomial expansion", tab == fac && tab == mon, || shape.to_string());
    let sym = single("H~ symmetric", is_symmetric_under(&tab, &vars), || shape.to_string());
    Ok(vec![restricted, translation, three, sym])
}

fn density(shape: &Partition, n: usize, budget: &Budget) -> Result<Vec<IdentityCheck>> {
    let mut formula = IdentityCheck::new("density equals log-derivative formula");
    let mut conservation = IdentityCheck::new("densities sum to multiplicity");
    let compressed = shape.compress();
    for (s, sc) in compressed_labels(shape) {
        let mut total = RationalFunction::from_poly(Poly::zero(n));
        for site in 1..=n {
            let exact = density_exact(shape, n, s, site, budget)?;
            formula.record(exact == density_formula(&compressed, n, sc, site)?, || format!("species {s} site {site}"));
            total = total.add(&exact);
        }
        let m = shape.parts().iter().filter(|&&r| r == s).count() as i64;
        conservation.record(total == RationalFunction::from_poly(Poly::constant(n, m.into())), || format!("species {s}"));
    }
    Ok(vec![formula, conservation])
}

fn current(shape: &Partition, n: usize, point: &ZrpParams, budget: &Budget) -> Result<Vec<IdentityCheck>> {
    let mut symbolic = IdentityCheck::new("flux at every bond equals current formula");
    let mut numeric = IdentityCheck::new("current from stationary solve equals formula");
    let compressed = shape.compress();
    for (s, sc) in compressed_labels(shape) {
        let f = current_formula(&compressed, n, sc)?;
        for site in 1..=n {
            symbolic.record(current_symbolic(shape, n, s, site, budget)? == f, || format!("species {s} site {site}"));
        }
        let exact = current_exact(shape, n, s, point, budget)?;
        numeric.record(exact == f.eval::<Rational>(&point.x, &point.t), || format!("species {s}"));
    }
    Ok(vec![symbolic, numeric])
}

fn top(shape: &Partition, n: usize, budget: &Budget) -> Result<Vec<IdentityCheck>> {
    let mut c = IdentityCheck::new("completions of the top rows sum to H~ factors times weight");
    for k in 0..=shape.height() {
        c.record(check_top_consistency(shape, n, k, budget)?, || format!("k={k}"));
    }
    Ok(vec![c])
}

fn multiline(shape: &Partition, n: usize, budget: &Budget) -> Result<Vec<IdentityCheck>> {
    let names = ["multiline round trip", "multiline weight equals filling weight", "jumps conjugate to ringing"];
    if !shape.is_strict() {
        return Ok(names.iter().map(|s| IdentityCheck::skipped(s, "shape is not strict")).collect());
    }
    over_fillings(shape, n, budget, &names, |s, acc| {
        let m = to_multiline(s);
        acc[0].record(from_multiline(&m).as_ref() == Ok(s), || s.to_string());
        acc[1].record(multiline_weight(&m).ok() == Some(weight(s)), || s.to_string());
        for u in shape.reading_order() {
            let r = shape.part(u.col);
            let ok = match multiline_jump(&m, u.row, s.get(u) as usize, r) {
                Ok(Jump::Forbidden) => !is_trigger(s, u),
                Ok(Jump::Moved { to, rate }) => {
                    is_trigger(s, u) && to == to_multiline(&ring(s, u)) && rate == crate::tabchain::rate(s, u)
                }
                Err(_) => false,
            };
            acc[2].record(ok, || format!("{s} at {u}"));
        }
    })
}

fn t0(shape: &Partition, n: usize, budget: &Budget) -> Result<Vec<IdentityCheck>> {
    let identity = single("H~(X;1,0) = h_{λ'}", check_t0_identity(shape, n, budget)?, || shape.to_string());
    let big = htilde_q1_factorized(shape, n).poly;
    let small = htilde_q1_factorized(&shape.compress(), n).poly;
    let ratio = exact_divide(&big, &small);
    let divides = single("H~ of the compressed shape divides H~", ratio.is_ok(), || shape.to_string());
    let mut fibers = IdentityCheck::new("ratio divides every fiber weight");
    if let Ok(ratio) = ratio {
        for (w, p) in tazrp_weights(shape, n, budget)? {
            fibers.record(exact_divide(&p, &ratio).is_ok(), || w.to_string());
        }
    }
    let irreducible = single("irreducible at t = 0", verify_irreducibility(shape, n as u32, true, budget)?, || shape.to_string());
    Ok(vec![identity, divides, fibers, irreducible])
}
