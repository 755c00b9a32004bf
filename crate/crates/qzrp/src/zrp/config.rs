//! Particle configurations on the ring.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::shapes::Partition;

/// `n` sites, each holding a multiset of species stored in descending order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ZrpConfig {
    sites: Vec<Vec<u32>>,
}

impl ZrpConfig {
    pub fn new(mut sites: Vec<Vec<u32>>) -> Self {
        for s in sites.iter_mut() {
            s.sort_unstable_by(|a, b| b.cmp(a));
        }
        ZrpConfig { sites }
    }

    pub fn empty(n: usize) -> Self {
        ZrpConfig { sites: vec![Vec::new(); n] }
    }

    pub fn n(&self) -> usize {
        self.sites.len()
    }

    pub fn sites(&self) -> &[Vec<u32>] {
        &self.sites
    }

    /// Site `j` (1-based).
    pub fn site(&self, j: usize) -> &[u32] {
        &self.sites[j - 1]
    }

    /// Number of particles of species `r` at site `j` (1-based).
    pub fn count(&self, j: usize, r: u32) -> u32 {
        self.sites[j - 1].iter().filter(|&&s| s == r).count() as u32
    }

    /// Number of particles at site `j` strictly stronger than species `r`.
    pub fn stronger(&self, j: usize, r: u32) -> u32 {
        self.sites[j - 1].iter().filter(|&&s| s > r).count() as u32
    }

    /// All particles as a partition.
    pub fn species(&self) -> Partition {
        Partition::from_multiset(self.sites.concat())
    }

    pub fn num_particles(&self) -> usize {
        self.sites.iter().map(Vec::len).sum()
    }

    /// Move one particle of species `r` from site `j` to site `j+1`
    /// (cyclically, 1-based).
    pub fn hop(&self, j: usize, r: u32) -> ZrpConfig {
        let n = self.n();
        let mut sites = self.sites.clone();
        let pos = sites[j - 1].iter().position(|&s| s == r).unwrap_or_else(|| panic!("no species {r} at site {j}"));
        sites[j - 1].remove(pos);
        sites[j % n].push(r);
        ZrpConfig::new(sites)
    }

    /// Shift every site `j` to `j + k` (cyclically).
    pub fn rotate(&self, k: usize) -> ZrpConfig {
        let n = self.n();
        let mut sites = vec![Vec::new(); n];
        for (j, s) in self.sites.iter().enumerate() {
            sites[(j + k) % n] = s.clone();
        }
        ZrpConfig { sites }
    }

    /// The first `l` sites.
    pub fn prefix(&self, l: usize) -> ZrpConfig {
        ZrpConfig { sites: self.sites[..l].to_vec() }
    }

    /// Keep only particles satisfying `keep`, relabelling them by `relabel`.
    pub fn map_species(&self, keep: impl Fn(u32) -> bool, relabel: impl Fn(u32) -> u32) -> ZrpConfig {
        ZrpConfig::new(self.sites.iter().map(|s| s.iter().copied().filter(|&r| keep(r)).map(&relabel).collect()).collect())
    }

    pub fn parse(s: &str) -> Result<Self, Error> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        let mut sites = Vec::new();
        for part in s.split('|') {
            let part = part.trim();
            if part.is_empty() || part == "." || part == "·" {
                sites.push(Vec::new());
            } else if part.contains(',') {
                sites.push(
                    part.split(',')
                        .map(|v| v.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad species {v:?}"))))
                        .collect::<Result<Vec<_>, _>>()?,
                );
            } else {
                sites.push(
                    part.chars()
                        .map(|c| c.to_digit(10).filter(|&d| d > 0).ok_or_else(|| Error::Parse(format!("bad species {c:?}"))))
                        .collect::<Result<Vec<_>, _>>()?,
                );
            }
        }
        Ok(ZrpConfig::new(sites))
    }
}

impl fmt::Display for ZrpConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = self.sites.iter().flatten().any(|&r| r >= 10);
        let parts: Vec<String> = self
            .sites
            .iter()
            .map(|s| {
                if s.is_empty() {
                    ".".to_string()
                } else if wide {
                    s.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(",")
                } else {
                    s.iter().map(|r| r.to_string()).collect()
                }
            })
            .collect();
        write!(f, "{}", parts.join("|"))
    }
}

/// Every configuration of species `λ` on `n` sites, in canonical order.
pub fn enumerate_configs(shape: &Partition, n: usize) -> Vec<ZrpConfig> {
    assert!(n >= 1, "enumerate_configs needs n >= 1");
    let mut values: Vec<u32> = shape.parts().to_vec();
    values.dedup();
    let mut out = vec![vec![Vec::new(); n]];
    for v in values {
        let m = shape.parts().iter().filter(|&&p| p == v).count();
        let mut next = Vec::new();
        for sites in &out {
            for comp in compositions(m, n) {
                let mut s: Vec<Vec<u32>> = sites.clone();
                for (j, &c) in comp.iter().enumerate() {
                    s[j].extend(std::iter::repeat_n(v, c));
                }
                next.push(s);
            }
        }
        out = next;
    }
    let mut configs: Vec<ZrpConfig> = out.into_iter().map(ZrpConfig::new).collect();
    configs.sort();
    configs
}

/// Weak compositions of `m` into `k` parts.
pub fn compositions(m: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return if m == 0 { vec![vec![]] } else { vec![] };
    }
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
