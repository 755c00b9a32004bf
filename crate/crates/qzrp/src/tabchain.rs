//! The tableau Markov chain: ringing paths, the swap operators `τ_j`, the
//! corrected transition `R'_u`, rates, and symbolic balance checks.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Budget, Result};
use crate::exactalg::Exponent;
use crate::shapes::{Cell, Partition};
use crate::tableaux::{down, enumerate_fillings, filling_count, in_q, quinv, up, weight, Filling, Stat};
use crate::Poly;

/// One clock of the chain: from `from`, cell `trigger` fires at `rate` and
/// the chain moves to `to`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub from: Filling,
    pub trigger: Cell,
    pub to: Filling,
    pub rate: Poly,
}

#[derive(Serialize)]
struct TransitionLine<'a> {
    from: String,
    trigger: [u32; 2],
    to: String,
    rate: &'a Poly,
}

impl Transition {
    /// One JSON object: fillings in text form, rate as polynomial JSON.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(&TransitionLine {
            from: self.from.to_string(),
            trigger: [self.trigger.row, self.trigger.col],
            to: self.to.to_string(),
            rate: &self.rate,
        })
        .expect("serializable")
    }
}

fn inc(v: u32, n: u32) -> u32 {
    v % n + 1
}

fn dec(v: u32, n: u32) -> u32 {
    (v + n - 2) % n + 1
}

/// `h_u(σ)`: top row of the maximal chain above `u` whose contents go up by
/// one (cyclically in `1..=n`) at each step.
pub fn chain_top(s: &Filling, u: Cell) -> u32 {
    let n = s.n();
    let mut r = u.row;
    let top = s.shape().part(u.col);
    assert!(r >= 1 && r <= top, "cell {u} is not in the diagram");
    while r < top && s.get(Cell::new(r + 1, u.col)) == inc(s.get(Cell::new(r, u.col)), n) {
        r += 1;
    }
    r
}

/// True when `u` carries a clock in `σ`, i.e. `σ(South(u)) ≠ σ(u)`.
pub fn is_trigger(s: &Filling, u: Cell) -> bool {
    s.south_value(u) != Some(s.get(u))
}

/// `R_u(σ)`.
pub fn ring(s: &Filling, u: Cell) -> Filling {
    if !is_trigger(s, u) {
        return s.clone();
    }
    let h = chain_top(s, u);
    let mut out = s.clone();
    for r in u.row..=h {
        let c = Cell::new(r, u.col);
        out.set(c, inc(s.get(c), s.n()));
    }
    out
}

/// `R_y^{-1}(σ)` together with the bottom cell of the decremented chain,
/// which is the cell `u` with `R_u` of the result equal to `σ`.
pub fn ring_inverse_with_cell(s: &Filling, y: Cell) -> (Filling, Cell) {
    if s.north_value(y) == s.get(y) {
        return (s.clone(), y);
    }
    let n = s.n();
    let mut r = y.row;
    while r > 1 && s.get(Cell::new(r - 1, y.col)) == dec(s.get(Cell::new(r, y.col)), n) {
        r -= 1;
    }
    let mut out = s.clone();
    for i in r..=y.row {
        let c = Cell::new(i, y.col);
        out.set(c, dec(s.get(c), n));
    }
    (out, Cell::new(r, y.col))
}

/// `R_y^{-1}(σ)`.
pub fn ring_inverse(s: &Filling, y: Cell) -> Filling {
    ring_inverse_with_cell(s, y).0
}

fn equal_columns(sh: &Partition, j: u32) -> u32 {
    let k = sh.part(j);
    assert!(j >= 1 && k > 0 && sh.part(j + 1) == k, "columns {j} and {} of {sh} differ in height", j + 1);
    k
}

/// `r_max` for the pair of equal-height columns `j, j+1`.
pub fn r_max(s: &Filling, j: u32) -> u32 {
    let k = equal_columns(s.shape(), j);
    for r in (2..=k).rev() {
        let a = s.get(Cell::new(r, j));
        let b = s.get(Cell::new(r, j + 1));
        let a1 = s.get(Cell::new(r - 1, j));
        let b1 = s.get(Cell::new(r - 1, j + 1));
        if in_q(a, a1, b1) == in_q(b, a1, b1) {
            return r;
        }
    }
    1
}

fn swap_rows(s: &Filling, j: u32, from: u32) -> Filling {
    let k = s.shape().part(j);
    let mut out = s.clone();
    for r in from..=k {
        out.swap_cells(Cell::new(r, j), Cell::new(r, j + 1));
    }
    out
}

/// `τ_j(σ)`: swap columns `j, j+1` in rows `r_max..=k`.
pub fn tau(s: &Filling, j: u32) -> Filling {
    swap_rows(s, j, r_max(s, j))
}

/// Every `σ` with `τ_j(σ) = ρ`. `τ_j` only swaps a suffix of rows, so the
/// preimages are among the `k` suffix swaps of `ρ`.
pub fn tau_preimages(rho: &Filling, j: u32) -> Vec<Filling> {
    let k = equal_columns(rho.shape(), j);
    let mut out: Vec<Filling> = (1..=k).map(|m| swap_rows(rho, j, m)).filter(|c| tau(c, j) == *rho).collect();
    out.sort();
    out.dedup();
    out
}

/// The column `v'` that the content of the column top `y = (r, v)` is sent
/// to: `2s + k - v` across its degenerate segment `s..=s+k`.
pub fn reflected_column(sh: &Partition, y: Cell) -> u32 {
    let (s, e) = sh.degenerate_segment(y);
    s + e - y.col
}

/// The indices `j` of `τ_y`, in application order.
pub fn tau_sequence(v: u32, v_prime: u32) -> Vec<u32> {
    if v < v_prime {
        (v..v_prime).collect()
    } else {
        (v_prime..v).rev().collect()
    }
}

/// `R'_u(ξ)` and the landing cell `y'`.
pub fn ring_prime(xi: &Filling, u: Cell) -> (Filling, Cell) {
    assert!(is_trigger(xi, u), "cell {u} is blocked in {xi}");
    let sigma = ring(xi, u);
    let y = Cell::new(chain_top(xi, u), u.col);
    let sh = xi.shape();
    if xi.get(y) != xi.n() || !sh.is_column_top(y) {
        return (sigma, y);
    }
    let v_prime = reflected_column(sh, y);
    let mut out = sigma;
    for j in tau_sequence(y.col, v_prime) {
        out = tau(&out, j);
    }
    (out, Cell::new(y.row, v_prime))
}

/// `x_{σ(u)}^{-1} t^{down(σ,u)}`.
pub fn rate(s: &Filling, u: Cell) -> Poly {
    match down(s, u) {
        Stat::Blocked => panic!("cell {u} is blocked in {s}, no clock"),
        Stat::Value(d) => {
            let n = s.n() as usize;
            let mut e = Exponent::zero(n);
            e.t = d as i32;
            e.x[s.get(u) as usize - 1] = -1;
            Poly::monomial(e, BigInt::one())
        }
    }
}

/// Transitions out of `σ`, triggers in reading order.
pub fn outgoing(s: &Filling) -> Vec<Transition> {
    s.shape()
        .reading_order()
        .into_iter()
        .filter(|&u| is_trigger(s, u))
        .map(|u| Transition { from: s.clone(), trigger: u, to: ring_prime(s, u).0, rate: rate(s, u) })
        .collect()
}

/// All `(ξ, u)` with `R'_u(ξ) = σ`, built by inverting the ringing path and
/// the `τ` correction, each confirmed by a forward application.
pub fn incoming(s: &Filling) -> Vec<(Filling, Cell)> {
    let sh = s.shape().clone();
    let mut found: BTreeSet<(Filling, Cell)> = BTreeSet::new();
    let mut confirm = |xi: Filling, u: Cell| {
        if is_trigger(&xi, u) && ring_prime(&xi, u).0 == *s {
            found.insert((xi, u));
        }
    };
    for y in sh.reading_order() {
        if s.north_value(y) != s.get(y) {
            let (xi, u) = ring_inverse_with_cell(s, y);
            confirm(xi, u);
        }
    }
    for z in sh.reading_order() {
        if !sh.is_column_top(z) || s.get(z) != 1 {
            continue;
        }
        let v = reflected_column(&sh, z);
        if v == z.col {
            continue;
        }
        let seq = tau_sequence(v, z.col);
        let mut cands = vec![s.clone()];
        for &j in seq.iter().rev() {
            cands = cands.iter().flat_map(|c| tau_preimages(c, j)).collect();
        }
        let y = Cell::new(z.row, v);
        for c in cands {
            if c.get(y) == 1 && c.north_value(y) != 1 {
                let (xi, u) = ring_inverse_with_cell(&c, y);
                confirm(xi, u);
            }
        }
    }
    found.into_iter().collect()
}

/// Both sides of the global balance equation at `σ`:
/// `wt(σ) Σ_out rate` and `Σ_in wt(ξ) rate(ξ, σ)`.
pub fn balance_sides(s: &Filling) -> (Poly, Poly) {
    let n = s.n() as usize;
    let w = weight(s);
    let out_rate = outgoing(s).iter().fold(Poly::zero(n), |acc, tr| acc + tr.rate.clone());
    let lhs = &w * &out_rate;
    let rhs = incoming(s).iter().fold(Poly::zero(n), |acc, (xi, u)| acc + &weight(xi) * &rate(xi, *u));
    (lhs, rhs)
}

pub fn verify_balance(s: &Filling) -> bool {
    let (l, r) = balance_sides(s);
    l == r
}

/// Every transition of the chain on `Tab(λ, n)`, states in enumeration
/// order and triggers in reading order.
pub fn build_generator(shape: &Partition, n: u32, budget: &Budget) -> Result<Vec<Transition>> {
    budget.check_fillings(n, shape.size())?;
    let count = filling_count(shape, n);
    Ok((0..count)
        .into_par_iter()
        .flat_map_iter(|i| outgoing(&Filling::from_index(shape, n, i)))
        .collect())
}

/// Position of `σ` in enumeration order.
pub fn filling_index(s: &Filling) -> u64 {
    s.shape().reading_order().iter().fold(0u64, |acc, &c| acc * s.n() as u64 + (s.get(c) - 1) as u64)
}

/// Strong connectivity of the transition digraph. With `t_zero`, states are
/// the quinv-free fillings and only `down = 0` triggers fire; a transition
/// leaving that set also counts as failure.
pub fn verify_irreducibility(shape: &Partition, n: u32, t_zero: bool, budget: &Budget) -> Result<bool> {
    budget.check_fillings(n, shape.size())?;
    let count = filling_count(shape, n) as usize;
    let states: Vec<Filling> = enumerate_fillings(shape, n).collect();
    let alive: Vec<bool> = states.iter().map(|s| !t_zero || quinv(s) == 0).collect();
    let edges: Vec<Vec<usize>> = states
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            if !alive[i] {
                return Vec::new();
            }
            s.shape()
                .reading_order()
                .into_iter()
                .filter(|&u| is_trigger(s, u) && (!t_zero || down(s, u) == Stat::Value(0)))
                .map(|u| filling_index(&ring_prime(s, u).0) as usize)
                .collect()
        })
        .collect();
    if edges.iter().flatten().any(|&j| !alive[j]) {
        return Ok(false);
    }
    let mut rev = vec![Vec::new(); count];
    for (i, es) in edges.iter().enumerate() {
        for &j in es {
            rev[j].push(i);
        }
    }
    let start = match alive.iter().position(|&a| a) {
        Some(s) => s,
        None => return Ok(true),
    };
    let reach = |g: &Vec<Vec<usize>>| {
        let mut seen = vec![false; count];
        let mut q = VecDeque::from([start]);
        seen[start] = true;
        while let Some(i) = q.pop_front() {
            for &j in &g[i] {
                if !seen[j] {
                    seen[j] = true;
                    q.push_back(j);
                }
            }
        }
        seen
    };
    let fwd = reach(&edges);
    let bwd = reach(&rev);
    Ok((0..count).all(|i| !alive[i] || (fwd[i] && bwd[i])))
}

/// `quinv(ξ) - quinv(σ')` and `up(σ', y') - down(ξ, u)` for one move.
pub fn quinv_balance(xi: &Filling, u: Cell) -> (i64, i64) {
    let (sp, yp) = ring_prime(xi, u);
    let lhs = quinv(xi) as i64 - quinv(&sp) as i64;
    let upv = up(&sp, yp).value().expect("landing cell is never blocked") as i64;
    let dn = down(xi, u).value().expect("trigger is never blocked") as i64;
    (lhs, upv - dn)
}

/// The uncorrected difference `quinv(ξ) - quinv(R_u ξ)` and its predicted
/// value including the degenerate-segment correction term.
pub fn quinv_diff_uncorrected(xi: &Filling, u: Cell) -> (i64, i64) {
    let sigma = ring(xi, u);
    let h = chain_top(xi, u);
    let y = Cell::new(h, u.col);
    let sh = xi.shape();
    let upv = up(&sigma, y).value().expect("chain top is never blocked") as i64;
    let dn = down(xi, u).value().expect("trigger is never blocked") as i64;
    let mut pred = upv - dn;
    let lj = sh.part(u.col);
    if lj == h && xi.get(y) == xi.n() {
        let left = (1..u.col).filter(|&j| sh.part(j) == lj).count() as i64;
        let right = (u.col + 1..=sh.len() as u32).filter(|&j| sh.part(j) == lj).count() as i64;
        pred += left - right;
    }
    (quinv(xi) as i64 - quinv(&sigma) as i64, pred)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes::partitions_up_to;
    use crate::tableaux::proj;

    fn rows(n: u32, r: &[&[u32]]) -> Filling {
        Filling::from_rows(n, &r.iter().map(|x| x.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn ex44() -> Filling {
        rows(3, &[&[1], &[1, 3], &[3, 2, 3]])
    }

    #[test]
    fn ringing_examples() {
        let s = ex44();
        assert_eq!(proj(&s).to_string(), ".|2|31");
        let r11 = ring(&s, Cell::new(1, 1));
        assert_eq!(r11, rows(3, &[&[1], &[2, 3], &[1, 2, 3]]));
        assert_eq!(proj(&r11).to_string(), "3|2|1");
        assert_eq!(rate(&s, Cell::new(1, 1)), Poly::x_pow(3, 3, -1));
        let r22 = ring(&s, Cell::new(2, 2));
        assert_eq!(r22, rows(3, &[&[1], &[1, 1], &[3, 2, 3]]));
        // the trigger (2,2) holds a 3 with one 3 in its lower arm
        assert_eq!(rate(&s, Cell::new(2, 2)), &Poly::x_pow(3, 3, -1) * &Poly::t_pow(3, 1));
        assert_eq!(ring(&s, Cell::new(3, 1)), s);
        assert_eq!(ring_inverse(&s, Cell::new(2, 1)), s);
        assert_eq!(ring_inverse(&s, Cell::new(3, 1)), rows(3, &[&[3], &[1, 3], &[3, 2, 3]]));
        let (inv22, u) = ring_inverse_with_cell(&s, Cell::new(2, 2));
        assert_eq!(inv22, rows(3, &[&[1], &[1, 2], &[3, 1, 3]]));
        assert_eq!(u, Cell::new(1, 2));
        assert_eq!(proj(&inv22).to_string(), "2|.|31");
    }

    #[test]
    fn chain_top_of_figure_four() {
        let s = rows(4, &[&[1, 4, 3], &[2, 1, 4], &[1, 4, 2, 3, 2], &[1, 3, 2, 4, 1], &[2, 2, 1, 3, 3]]);
        assert_eq!(chain_top(&s, Cell::new(2, 2)), 4);
        let r = ring(&s, Cell::new(2, 2));
        assert_eq!(r, rows(4, &[&[1, 4, 3], &[2, 2, 4], &[1, 1, 2, 3, 2], &[1, 4, 2, 4, 1], &[2, 2, 1, 3, 3]]));
        let full = rows(3, &[&[3], &[2], &[1]]);
        assert_eq!(chain_top(&full, Cell::new(1, 1)), 3);
    }

    #[test]
    fn ring_round_trip() {
        for l in partitions_up_to(5) {
            for n in 1..=3 {
                for xi in enumerate_fillings(&l, n) {
                    for u in l.reading_order() {
                        if !is_trigger(&xi, u) {
                            continue;
                        }
                        let s = ring(&xi, u);
                        let y = Cell::new(chain_top(&xi, u), u.col);
                        assert_eq!(ring_inverse_with_cell(&s, y), (xi.clone(), u));
                        // x^ξ = x^σ x_{ξ(u)} x_{σ(y)}^{-1}
                        let mut c = s.content();
                        c[xi.get(u) as usize - 1] += 1;
                        c[s.get(y) as usize - 1] -= 1;
                        assert_eq!(c, xi.content());
                    }
                }
            }
        }
    }

    #[test]
    fn tau_example() {
        // columns j, j+1 with rows listed top to bottom
        let s = rows(4, &[&[3, 4], &[2, 3], &[2, 3], &[3, 4], &[1, 3]]);
        assert_eq!(r_max(&s, 1), 3);
        assert_eq!(tau(&s, 1), rows(4, &[&[4, 3], &[3, 2], &[3, 2], &[3, 4], &[1, 3]]));
        let flat = rows(3, &[&[2, 2], &[1, 1]]);
        assert_eq!(tau(&flat, 1), flat);
    }

    #[test]
    fn tau_changes_quinv_by_top_comparison() {
        for l in partitions_up_to(6) {
            for j in 1..l.len() as u32 {
                if l.part(j) != l.part(j + 1) {
                    continue;
                }
                for n in 1..=3 {
                    for s in enumerate_fillings(&l, n) {
                        let k = l.part(j);
                        let (a, b) = (s.get(Cell::new(k, j)), s.get(Cell::new(k, j + 1)));
                        let expect = (a > b) as i64 - (a < b) as i64;
                        assert_eq!(quinv(&tau(&s, j)) as i64 - quinv(&s) as i64, expect, "{s} j={j}");
                        assert!(tau_preimages(&tau(&s, j), j).contains(&s));
                    }
                }
            }
        }
    }

    #[test]
    fn quinv_difference_lemmas() {
        for l in partitions_up_to(6) {
            for n in 1..=3 {
                for xi in enumerate_fillings(&l, n) {
                    for u in l.reading_order() {
                        if !is_trigger(&xi, u) {
                            continue;
                        }
                        let (a, b) = quinv_balance(&xi, u);
                        assert_eq!(a, b, "{xi} u={u}");
                        let (a, b) = quinv_diff_uncorrected(&xi, u);
                        assert_eq!(a, b, "{xi} u={u}");
                    }
                }
            }
        }
    }

    #[test]
    fn strict_shapes_need_no_correction() {
        let l = Partition::new(vec![3, 2, 1]);
        for xi in enumerate_fillings(&l, 3) {
            for u in l.reading_order() {
                if is_trigger(&xi, u) {
                    let (s, y) = ring_prime(&xi, u);
                    assert_eq!(s, ring(&xi, u));
                    assert_eq!(y, Cell::new(chain_top(&xi, u), u.col));
                }
            }
        }
    }

    #[test]
    fn incoming_matches_brute_force() {
        for l in partitions_up_to(4) {
            for n in 1..=3 {
                let all: Vec<Filling> = enumerate_fillings(&l, n).collect();
                let mut expected: std::collections::BTreeMap<Filling, Vec<(Filling, Cell)>> = Default::default();
                for xi in &all {
                    for u in l.reading_order() {
                        if is_trigger(xi, u) {
                            expected.entry(ring_prime(xi, u).0).or_default().push((xi.clone(), u));
                        }
                    }
                }
                for s in &all {
                    let mut e = expected.remove(s).unwrap_or_default();
                    e.sort();
                    assert_eq!(incoming(s), e, "{s}");
                }
            }
        }
    }

    #[test]
    fn balance_holds_everywhere() {
        for l in partitions_up_to(5) {
            for n in 1..=3 {
                for s in enumerate_fillings(&l, n) {
                    assert!(verify_balance(&s), "{s}");
                }
            }
        }
    }

    #[test]
    fn generator_examples() {
        let b = Budget::default();
        let g = build_generator(&Partition::new(vec![1]), 2, &b).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g[0].rate, Poly::x_pow(2, 1, -1));
        assert_eq!(g[1].rate, Poly::x_pow(2, 2, -1));
        assert_eq!(g[0].to, g[1].from);
        let g = build_generator(&Partition::new(vec![2, 1, 1]), 3, &b).unwrap();
        let mut per_state = std::collections::BTreeMap::new();
        for tr in &g {
            *per_state.entry(tr.from.clone()).or_insert(0) += 1;
        }
        assert_eq!(per_state.len(), 81);
        assert!(per_state.values().all(|&k| (1..=4).contains(&k)));
        assert!(g[0].to_json_line().starts_with("{\"from\":\"1 / 1 1 1\""));
        assert!(build_generator(&Partition::new(vec![3, 3]), 3, &Budget::new(10)).is_err());
    }

    #[test]
    fn irreducible() {
        let b = Budget::default();
        assert!(verify_irreducibility(&Partition::new(vec![1]), 2, false, &b).unwrap());
        assert!(verify_irreducibility(&Partition::new(vec![3, 2, 2]), 3, false, &b).unwrap());
        assert!(verify_irreducibility(&Partition::new(vec![2, 1]), 2, true, &b).unwrap());
        for l in partitions_up_to(4) {
            assert!(verify_irreducibility(&l, 3, true, &b).unwrap(), "{l}");
        }
    }

    #[test]
    fn path_to_all_ones() {
        let n = 3;
        let path = [
            rows(n, &[&[1], &[3, 1, 3], &[3, 2, 1]]),
            rows(n, &[&[1], &[3, 1, 3], &[3, 3, 1]]),
            rows(n, &[&[1], &[3, 2, 3], &[3, 1, 1]]),
            rows(n, &[&[1], &[3, 2, 3], &[1, 1, 1]]),
            rows(n, &[&[1], &[3, 1, 2], &[1, 1, 1]]),
            rows(n, &[&[1], &[3, 1, 3], &[1, 1, 1]]),
            rows(n, &[&[1], &[3, 1, 1], &[1, 1, 1]]),
        ];
        for w in path.windows(2) {
            assert!(outgoing(&w[0]).iter().any(|tr| tr.to == w[1]), "{} -/-> {}", w[0], w[1]);
        }
        // ringing (2,1) wraps 3 to 1 and carries on into the 1 above it
        let last = ring(&path[6], Cell::new(2, 1));
        assert_eq!(last, rows(n, &[&[2], &[1, 1, 1], &[1, 1, 1]]));
        let top = Cell::new(3, 1);
        let ones = Filling::constant(Partition::new(vec![3, 2, 2]), n, 1);
        assert_eq!(ring_prime(&ring_prime(&last, top).0, top).0, ones);
    }
}
