//! Continuous-time simulation by the Gillespie direct method.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::config::ZrpConfig;
use super::stationary::ZrpParams;
use crate::error::{Error, Result};
use crate::shapes::Partition;

/// A particle of `species` leaving `site` at `time`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Event {
    pub time: f64,
    pub site: usize,
    pub species: u32,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimOptions {
    pub horizon: f64,
    /// Number of equal time batches used for standard errors.
    pub batches: usize,
    pub record_events: bool,
}

impl SimOptions {
    pub fn new(horizon: f64) -> Self {
        SimOptions { horizon, batches: 50, record_events: false }
    }
}

/// A point estimate with its batch-means standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub se: f64,
}

impl Estimate {
    /// `|mean - target| <= k * se`.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.se
    }
}

/// Accumulators indexed `[site-1][species]`; index 0 of the species axis is
/// unused.
#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    pub seed: u64,
    pub stream: u64,
    pub initial: ZrpConfig,
    pub events: Vec<Event>,
    pub num_events: u64,
    pub terminal_time: f64,
    pub final_config: ZrpConfig,
    pub occupation: Vec<Vec<f64>>,
    pub jumps: Vec<Vec<u64>>,
    /// Total time each site spent with no particles.
    pub empty_time: Vec<f64>,
    batch_len: f64,
    batch_occupation: Vec<Vec<Vec<f64>>>,
    batch_jumps: Vec<Vec<Vec<u64>>>,
}

fn batch_stats(samples: &[f64]) -> Estimate {
    let b = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / b;
    if samples.len() < 2 {
        return Estimate { mean, se: f64::INFINITY };
    }
    let var = samples.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (b - 1.0);
    Estimate { mean, se: (var / b).sqrt() }
}

impl Trajectory {
    /// Time-averaged number of particles of the given species at `site`.
    pub fn density(&self, site: usize, species: &[u32]) -> Estimate {
        let samples: Vec<f64> = self
            .batch_occupation
            .iter()
            .map(|b| species.iter().map(|&r| b[site - 1][r as usize]).sum::<f64>() / self.batch_len)
            .collect();
        batch_stats(&samples)
    }

    /// Jumps per unit time of the given species from `site` to the next site.
    pub fn current(&self, site: usize, species: &[u32]) -> Estimate {
        let samples: Vec<f64> = self
            .batch_jumps
            .iter()
            .map(|b| species.iter().map(|&r| b[site - 1][r as usize] as f64).sum::<f64>() / self.batch_len)
            .collect();
        batch_stats(&samples)
    }

    pub fn events_csv(&self) -> String {
        let mut out = String::from("time,site,species\n");
        for e in &self.events {
            out.push_str(&format!("{},{},{}\n", e.time, e.site, e.species));
        }
        out
    }
}

fn rate_table(counts: &[Vec<u32>], params: &ZrpParams<f64>) -> Vec<(usize, u32, f64)> {
    let mut out = Vec::new();
    for (j, row) in counts.iter().enumerate() {
        let mut stronger = 0u32;
        for r in (1..row.len()).rev() {
            let c = row[r];
            if c > 0 {
                let t = params.t;
                let bracket: f64 = (0..c).map(|i| t.powi(i as i32)).sum();
                out.push((j, r as u32, t.powi(stronger as i32) * bracket / params.x[j]));
                stronger += c;
            }
        }
    }
    out
}

fn validate(params: &ZrpParams<f64>, opts: &SimOptions, n: usize) -> Result<()> {
    if params.x.len() != n {
        return Err(Error::Contract(format!("{} site parameters for {n} sites", params.x.len())));
    }
    if params.x.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::Contract("site parameters must be positive and finite".into()));
    }
    if !(params.t >= 0.0 && params.t.is_finite()) {
        return Err(Error::Contract("simulation needs t >= 0".into()));
    }
    if !(opts.horizon > 0.0 && opts.horizon.is_finite()) {
        return Err(Error::Contract("horizon must be positive".into()));
    }
    if opts.batches == 0 {
        return Err(Error::Contract("need at least one batch".into()));
    }
    Ok(())
}

/// Run from `initial` until `opts.horizon` on stream `stream` of `seed`.
pub fn simulate_from(initial: &ZrpConfig, params: &ZrpParams<f64>, seed: u64, stream: u64, opts: &SimOptions) -> Result<Trajectory> {
    let n = initial.n();
    validate(params, opts, n)?;
    let top = initial.sites().iter().flatten().copied().max().unwrap_or(0) as usize;
    if top == 0 {
        return Err(Error::Internal("no particles, so every rate is zero".into()));
    }
    let mut counts = vec![vec![0u32; top + 1]; n];
    for (j, s) in initial.sites().iter().enumerate() {
        for &r in s {
            counts[j][r as usize] += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let nb = opts.batches;
    let batch_len = opts.horizon / nb as f64;
    let mut batch_occupation = vec![vec![vec![0.0; top + 1]; n]; nb];
    let mut batch_jumps = vec![vec![vec![0u64; top + 1]; n]; nb];
    let mut events = Vec::new();
    let mut num_events = 0u64;
    let mut now = 0.0f64;

    let mut empty_time = vec![0.0; n];
    let occupy = |bo: &mut Vec<Vec<Vec<f64>>>, empty: &mut Vec<f64>, counts: &[Vec<u32>], from: f64, to: f64| {
        for (j, row) in counts.iter().enumerate() {
            if row.iter().all(|&c| c == 0) {
                empty[j] += to - from;
            }
        }
        let mut a = from;
        while a < to {
            let b = ((a / batch_len).floor() as usize).min(nb - 1);
            let end = if b == nb - 1 { to } else { ((b + 1) as f64 * batch_len).min(to) };
            let dt = end - a;
            for (j, row) in counts.iter().enumerate() {
                for (r, &c) in row.iter().enumerate() {
                    if c > 0 {
                        bo[b][j][r] += c as f64 * dt;
                    }
                }
            }
            if end <= a {
                break;
            }
            a = end;
        }
    };

    loop {
        let table = rate_table(&counts, params);
        let total: f64 = table.iter().map(|e| e.2).sum();
        if total <= 0.0 || !total.is_finite() {
            return Err(Error::Internal(format!("total rate {total} at time {now}")));
        }
        let u: f64 = rng.gen();
        let dt = -(1.0 - u).ln() / total;
        let next = now + dt;
        if next >= opts.horizon {
            occupy(&mut batch_occupation, &mut empty_time, &counts, now, opts.horizon);
            break;
        }
        occupy(&mut batch_occupation, &mut empty_time, &counts, now, next);
        now = next;
        let mut pick = rng.gen::<f64>() * total;
        let mut chosen = *table.iter().rev().find(|e| e.2 > 0.0).expect("positive total");
        for e in &table {
            if pick < e.2 {
                chosen = *e;
                break;
            }
            pick -= e.2;
        }
        let (j, r, _) = chosen;
        counts[j][r as usize] -= 1;
        counts[(j + 1) % n][r as usize] += 1;
        let b = ((now / batch_len).floor() as usize).min(nb - 1);
        batch_jumps[b][j][r as usize] += 1;
        num_events += 1;
        if opts.record_events {
            events.push(Event { time: now, site: j + 1, species: r });
        }
    }

    let mut occupation = vec![vec![0.0; top + 1]; n];
    let mut jumps = vec![vec![0u64; top + 1]; n];
    for b in 0..nb {
        for j in 0..n {
            for r in 0..=top {
                occupation[j][r] += batch_occupation[b][j][r];
                jumps[j][r] += batch_jumps[b][j][r];
            }
        }
    }
    let final_config = ZrpConfig::new(
        counts.iter().map(|row| row.iter().enumerate().flat_map(|(r, &c)| std::iter::repeat_n(r as u32, c as usize)).collect()).collect(),
    );
    Ok(Trajectory {
        seed,
        stream,
        initial: initial.clone(),
        events,
        num_events,
        terminal_time: opts.horizon,
        final_config,
        occupation,
        jumps,
        empty_time,
        batch_len,
        batch_occupation,
        batch_jumps,
    })
}

/// Run with every particle starting at site 1.
pub fn simulate(shape: &Partition, n: usize, params: &ZrpParams<f64>, seed: u64, opts: &SimOptions) -> Result<Trajectory> {
    if n == 0 {
        return Err(Error::Contract("need at least one site".into()));
    }
    let mut sites = vec![Vec::new(); n];
    sites[0] = shape.parts().to_vec();
    simulate_from(&ZrpConfig::new(sites), params, seed, 0, opts)
}

/// Independent trajectories, one stream each, returned in stream order.
pub fn simulate_replicas(initial: &ZrpConfig, params: &ZrpParams<f64>, seed: u64, count: u64, opts: &SimOptions) -> Result<Vec<Trajectory>> {
    (0..count).into_par_iter().map(|s| simulate_from(initial, params, seed, s, opts)).collect()
}
