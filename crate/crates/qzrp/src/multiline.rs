//! Multiline diagrams: one ZRP configuration per row of a filling.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Budget, Error, Result};
use crate::exactalg::Exponent;
use crate::shapes::{Cell, Partition};
use crate::tableaux::{filling_count, Filling};
use crate::zrp::ZrpConfig;
use crate::Poly;

/// Clockwise betweenness on `1..=n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CyclicOrder {
    pub n: u32,
}

impl CyclicOrder {
    /// `a < b < c` clockwise: `b` lies strictly between `a` and `c` going
    /// clockwise from `a`, and `a = c ≠ b` counts.
    pub fn between(&self, a: u32, b: u32, c: u32) -> bool {
        let n = self.n;
        let d = |from: u32, to: u32| (to + n - from) % n;
        if b == a {
            return false;
        }
        if a == c {
            return true;
        }
        d(a, b) < d(a, c)
    }
}

/// Rows `M^(1), ..., M^(L)` stored bottom first; row `k` holds the parts of
/// `λ` that are at least `k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MultilineDiagram {
    rows: Vec<ZrpConfig>,
}

impl MultilineDiagram {
    /// Rows given bottom first.
    pub fn new(rows_bottom_up: Vec<ZrpConfig>) -> Result<Self> {
        let Some(first) = rows_bottom_up.first() else {
            return Ok(MultilineDiagram { rows: Vec::new() });
        };
        let n = first.n();
        let lambda = first.species();
        for (i, row) in rows_bottom_up.iter().enumerate() {
            let k = i as u32 + 1;
            if row.n() != n {
                return Err(Error::Contract(format!("row {k} has {} sites, expected {n}", row.n())));
            }
            let want: Vec<u32> = lambda.parts().iter().copied().filter(|&p| p >= k).collect();
            if row.species().parts() != want.as_slice() {
                return Err(Error::Contract(format!("row {k} holds {}, expected the parts of {lambda} that are ≥ {k}", row.species())));
            }
        }
        if rows_bottom_up.len() as u32 != lambda.part(1) {
            return Err(Error::Contract(format!("{} rows for largest part {}", rows_bottom_up.len(), lambda.part(1))));
        }
        Ok(MultilineDiagram { rows: rows_bottom_up })
    }

    /// Rows top (`L`) to bottom, one configuration per line.
    pub fn parse(s: &str) -> Result<Self> {
        let mut rows: Vec<ZrpConfig> =
            s.lines().map(str::trim).filter(|l| !l.is_empty()).map(ZrpConfig::parse).collect::<Result<_>>()?;
        rows.reverse();
        MultilineDiagram::new(rows)
    }

    /// Row `k` (1-based from the bottom).
    pub fn row(&self, k: u32) -> &ZrpConfig {
        &self.rows[k as usize - 1]
    }

    pub fn rows_bottom_up(&self) -> &[ZrpConfig] {
        &self.rows
    }

    pub fn height(&self) -> u32 {
        self.rows.len() as u32
    }

    pub fn n(&self) -> usize {
        self.rows.first().map_or(0, ZrpConfig::n)
    }

    pub fn shape(&self) -> Partition {
        self.rows.first().map_or_else(Partition::empty, ZrpConfig::species)
    }

    fn require_strict(&self) -> Result<()> {
        if !self.shape().is_strict() {
            return Err(Error::Contract(format!("{} is not strict", self.shape())));
        }
        Ok(())
    }

    /// `p_r(M^(k))`.
    pub fn position(&self, k: u32, r: u32) -> Option<usize> {
        let row = self.row(k);
        (1..=row.n()).find(|&j| row.site(j).contains(&r))
    }
}

impl fmt::Display for MultilineDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lines: Vec<String> = self.rows.iter().rev().map(ToString::to_string).collect();
        write!(f, "{}", lines.join("\n"))
    }
}

/// `M^(k) = proj(σ_(k))` for every row.
pub fn to_multiline(s: &Filling) -> MultilineDiagram {
    let sh = s.shape();
    let n = s.n() as usize;
    let rows = (1..=sh.height())
        .map(|k| {
            let mut sites = vec![Vec::new(); n];
            for c in 1..=sh.row_len(k) {
                sites[s.get(Cell::new(k, c)) as usize - 1].push(sh.part(c));
            }
            ZrpConfig::new(sites)
        })
        .collect();
    MultilineDiagram { rows }
}

/// `σ(k, j) = p_{λ_j}(M^(k))`; strict `λ` only.
pub fn from_multiline(m: &MultilineDiagram) -> Result<Filling> {
    m.require_strict()?;
    let sh = m.shape();
    let n = m.n() as u32;
    let cols = sh
        .parts()
        .iter()
        .map(|&r| (1..=r).map(|k| m.position(k, r).expect("species present in its rows") as u32).collect())
        .collect();
    Filling::try_new(sh, n, cols)
}

/// `R(M^(k), M^(k-1))`.
pub fn refusals_between(m: &MultilineDiagram, k: u32) -> Result<u32> {
    m.require_strict()?;
    let cyc = CyclicOrder { n: m.n() as u32 };
    let upper = m.row(k);
    let lower = m.row(k - 1);
    let mut count = 0;
    for &r in upper.sites().iter().flatten() {
        let pr_up = m.position(k, r).expect("present") as u32;
        let pr_low = m.position(k - 1, r).expect("present") as u32;
        for &s in lower.sites().iter().flatten() {
            if s < r && cyc.between(pr_low, m.position(k - 1, s).expect("present") as u32, pr_up) {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Total refusals over all adjacent row pairs.
pub fn refusals(m: &MultilineDiagram) -> Result<u32> {
    m.require_strict()?;
    (2..=m.height()).map(|k| refusals_between(m, k)).sum()
}

fn x_monomial(m: &MultilineDiagram) -> Exponent {
    let mut e = Exponent::zero(m.n());
    for row in m.rows_bottom_up() {
        for j in 1..=row.n() {
            e.x[j - 1] += row.site(j).len() as i32;
        }
    }
    e
}

/// `x^M t^{refusals}`; strict `λ` only.
pub fn multiline_weight(m: &MultilineDiagram) -> Result<Poly> {
    let mut e = x_monomial(m);
    e.t = refusals(m)? as i32;
    Ok(Poly::monomial(e, BigInt::one()))
}

/// `Σ wt(σ)` over fillings with `to_multiline(σ) = M`, for any `λ`.
pub fn multiline_fiber_weight(m: &MultilineDiagram, budget: &Budget) -> Result<Poly> {
    let sh = m.shape();
    let n = m.n();
    budget.check_fillings(n as u32, sh.size())?;
    let count = filling_count(&sh, n as u32);
    let parts: Vec<Poly> = (0..count)
        .into_par_iter()
        .filter_map(|i| {
            let s = Filling::from_index(&sh, n as u32, i);
            (to_multiline(&s) == *m).then(|| crate::tableaux::weight(&s))
        })
        .collect();
    Ok(Poly::par_sum(n, parts))
}

/// Result of trying to start a jump.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Jump {
    /// Species `r` sits at the same site one row down.
    Forbidden,
    Moved { to: MultilineDiagram, rate: Poly },
}

/// Species `r` at site `j` of row `k` jumps to `j+1`; the same species one
/// row up follows whenever it sits at the landing site.
pub fn multiline_jump(m: &MultilineDiagram, k: u32, j: usize, r: u32) -> Result<Jump> {
    m.require_strict()?;
    if k == 0 || k > m.height() || j == 0 || j > m.n() || !m.row(k).site(j).contains(&r) {
        return Err(Error::Contract(format!("no particle {r} at site {j} of row {k}")));
    }
    if k > 1 && m.row(k - 1).site(j).contains(&r) {
        return Ok(Jump::Forbidden);
    }
    let n = m.n();
    let stronger = m.row(k).stronger(j, r);
    let weaker = if k > 1 { m.row(k - 1).site(j).iter().filter(|&&s| s < r).count() as u32 } else { 0 };
    let mut e = Exponent::zero(n);
    e.x[j - 1] = -1;
    e.t = (stronger + weaker) as i32;

    let mut rows = m.rows.clone();
    let mut row = k;
    let mut site = j;
    loop {
        rows[row as usize - 1] = rows[row as usize - 1].hop(site, r);
        let landing = site % n + 1;
        if row < m.height() && rows[row as usize].site(landing).contains(&r) {
            row += 1;
            site = landing;
        } else {
            break;
        }
    }
    Ok(Jump::Moved { to: MultilineDiagram { rows }, rate: Poly::monomial(e, BigInt::one()) })
}
