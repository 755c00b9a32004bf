//! Fillings of diagrams and their statistics.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::exactalg::Exponent;
use crate::shapes::{Cell, Partition};
use crate::zrp::ZrpConfig;
use crate::Poly;

/// An assignment of a label in `1..=n` to every cell of a diagram.
///
/// `cols[i][r - 1]` is the entry in cell `(r, i + 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Filling {
    shape: Partition,
    n: u32,
    cols: Vec<Vec<u32>>,
}

/// A `down` or `up` value; `Blocked` stands for the exponent `-∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Stat {
    Blocked,
    Value(u32),
}

impl Stat {
    pub fn value(self) -> Option<u32> {
        match self {
            Stat::Blocked => None,
            Stat::Value(v) => Some(v),
        }
    }
}

/// Attacking-inversion statistics.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LltStats {
    pub inv_hat: u32,
    pub arm_hat: u32,
    pub descents: Vec<Cell>,
}

impl Filling {
    pub fn new(shape: Partition, n: u32, cols: Vec<Vec<u32>>) -> Self {
        Self::try_new(shape, n, cols).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn try_new(shape: Partition, n: u32, cols: Vec<Vec<u32>>) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::Contract("a filling needs n >= 1".into()));
        }
        if cols.len() != shape.len() {
            return Err(Error::Contract(format!("{} columns given for shape {shape}", cols.len())));
        }
        for (i, c) in cols.iter().enumerate() {
            if c.len() as u32 != shape.part(i as u32 + 1) {
                return Err(Error::Contract(format!("column {} has height {}, shape {shape}", i + 1, c.len())));
            }
            if c.iter().any(|&v| v == 0 || v > n) {
                return Err(Error::Contract(format!("column {} has a label outside 1..={n}", i + 1)));
            }
        }
        Ok(Filling { shape, n, cols })
    }

    pub fn constant(shape: Partition, n: u32, v: u32) -> Self {
        let cols = shape.parts().iter().map(|&h| vec![v; h as usize]).collect();
        Filling::new(shape, n, cols)
    }

    /// Build from rows listed top to bottom, each left to right.
    pub fn from_rows(n: u32, rows: &[Vec<u32>]) -> Result<Self, Error> {
        let lens: Vec<u32> = rows.iter().rev().map(|r| r.len() as u32).collect();
        if lens.windows(2).any(|w| w[0] < w[1]) || lens.contains(&0) {
            return Err(Error::Parse(format!("row lengths {lens:?} (bottom up) are not a diagram")));
        }
        let shape = Partition::new(lens).conjugate();
        let mut cols: Vec<Vec<u32>> = shape.parts().iter().map(|&h| Vec::with_capacity(h as usize)).collect();
        for row in rows.iter().rev() {
            for (i, &v) in row.iter().enumerate() {
                cols[i].push(v);
            }
        }
        Filling::try_new(shape, n, cols).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Rows top to bottom separated by `/` or newlines, entries by spaces.
    pub fn parse(s: &str, n: u32) -> Result<Self, Error> {
        let rows: Vec<Vec<u32>> = s
            .split(['/', '\n'])
            .map(str::trim)
            .filter(|r| !r.is_empty())
            .map(|r| {
                r.split_whitespace()
                    .map(|v| v.parse::<u32>().map_err(|_| Error::Parse(format!("bad entry {v:?}"))))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<_, _>>()?;
        if rows.is_empty() {
            return Filling::try_new(Partition::empty(), n, vec![]);
        }
        Filling::from_rows(n, &rows)
    }

    /// The `idx`-th filling in enumeration order: entries read in reading
    /// order form the base-`n` digits of `idx`, first cell most significant.
    pub fn from_index(shape: &Partition, n: u32, mut idx: u64) -> Self {
        let cells = shape.reading_order();
        let mut cols: Vec<Vec<u32>> = shape.parts().iter().map(|&h| vec![0; h as usize]).collect();
        for c in cells.iter().rev() {
            cols[c.col as usize - 1][c.row as usize - 1] = (idx % n as u64) as u32 + 1;
            idx /= n as u64;
        }
        Filling { shape: shape.clone(), n, cols }
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn cols(&self) -> &[Vec<u32>] {
        &self.cols
    }

    pub fn get(&self, c: Cell) -> u32 {
        self.value(c).unwrap_or_else(|| panic!("cell {c} is not in the diagram of {}", self.shape))
    }

    pub fn value(&self, c: Cell) -> Option<u32> {
        if c.col == 0 || c.row == 0 {
            return None;
        }
        self.cols.get(c.col as usize - 1).and_then(|col| col.get(c.row as usize - 1)).copied()
    }

    pub fn set(&mut self, c: Cell, v: u32) {
        assert!(v >= 1 && v <= self.n, "label {v} outside 1..={}", self.n);
        self.cols[c.col as usize - 1][c.row as usize - 1] = v;
    }

    pub fn with(&self, c: Cell, v: u32) -> Self {
        let mut f = self.clone();
        f.set(c, v);
        f
    }

    /// `σ(North(u))`, with the value 0 above a column top.
    pub fn north_value(&self, u: Cell) -> u32 {
        self.value(u.north()).unwrap_or(0)
    }

    /// `σ(South(u))`, `None` standing for `∞` below the bottom row.
    pub fn south_value(&self, u: Cell) -> Option<u32> {
        u.south().map(|s| self.get(s))
    }

    pub fn rows_top_down(&self) -> Vec<Vec<u32>> {
        (1..=self.shape.height())
            .rev()
            .map(|r| (1..=self.shape.row_len(r)).map(|c| self.get(Cell::new(r, c))).collect())
            .collect()
    }

    /// Number of cells holding each label, index 0 is label 1.
    pub fn content(&self) -> Vec<u32> {
        let mut out = vec![0; self.n as usize];
        for col in &self.cols {
            for &v in col {
                out[v as usize - 1] += 1;
            }
        }
        out
    }

    pub fn swap_cells(&mut self, a: Cell, b: Cell) {
        let (va, vb) = (self.get(a), self.get(b));
        self.set(a, vb);
        self.set(b, va);
    }
}

impl fmt::Display for Filling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows_top_down()
            .iter()
            .map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "{}", rows.join(" / "))
    }
}

/// Streaming enumeration of `Tab(λ, n)` in lexicographic order of the
/// entries read in reading order.
pub struct Fillings {
    shape: Partition,
    n: u32,
    cells: Vec<Cell>,
    next: Option<Filling>,
}

impl Iterator for Fillings {
    type Item = Filling;

    fn next(&mut self) -> Option<Filling> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut carried_out = true;
        for c in self.cells.iter().rev() {
            let v = succ.get(*c);
            if v < self.n {
                succ.set(*c, v + 1);
                carried_out = false;
                break;
            }
            succ.set(*c, 1);
        }
        if !carried_out {
            self.next = Some(succ);
        }
        Some(cur)
    }
}

pub fn enumerate_fillings(shape: &Partition, n: u32) -> Fillings {
    assert!(n >= 1, "enumerate_fillings needs n >= 1");
    Fillings {
        shape: shape.clone(),
        n,
        cells: shape.reading_order(),
        next: Some(Filling::constant(shape.clone(), n, 1)),
    }
}

impl Fillings {
    pub fn shape(&self) -> &Partition {
        &self.shape
    }
}

/// `n^{|λ|}`, saturating.
pub fn filling_count(shape: &Partition, n: u32) -> u64 {
    (n as u64).checked_pow(shape.size()).unwrap_or(u64::MAX)
}

/// Membership in the counterclockwise set: `a<b<c`, `b<c<a`, `c<a<b`, or
/// `a=b≠c`. The value 0 may only appear as `a`.
pub fn in_q(a: u32, b: u32, c: u32) -> bool {
    (a < b && b < c) || (b < c && c < a) || (c < a && a < b) || (a == b && b != c)
}

/// Number of queue-inversion triples `((r+1,i), (r,i), (r,j))`, `i < j`,
/// with 0 above a column top.
pub fn quinv(s: &Filling) -> u32 {
    let sh = s.shape();
    let mut count = 0;
    for r in 1..=sh.height() {
        let len = sh.row_len(r);
        for i in 1..=len {
            let a = s.north_value(Cell::new(r, i));
            let b = s.get(Cell::new(r, i));
            for j in i + 1..=len {
                if in_q(a, b, s.get(Cell::new(r, j))) {
                    count += 1;
                }
            }
        }
    }
    count
}

/// `x^σ t^{quinv(σ)}`.
pub fn weight(s: &Filling) -> Poly {
    let x = s.content().iter().map(|&k| k as i32).collect();
    Poly::monomial(Exponent::new(quinv(s) as i32, x), BigInt::one())
}

/// `down(σ, u)`.
pub fn down(s: &Filling, u: Cell) -> Stat {
    let v = s.get(u);
    if s.south_value(u) == Some(v) {
        return Stat::Blocked;
    }
    let (lower, _) = s.shape().arms(u);
    Stat::Value(lower.iter().filter(|&&c| s.get(c) == v).count() as u32)
}

/// `up(σ, u)`.
pub fn up(s: &Filling, u: Cell) -> Stat {
    let v = s.get(u);
    if s.north_value(u) == v {
        return Stat::Blocked;
    }
    let (_, upper) = s.shape().arms(u);
    Stat::Value(upper.iter().filter(|&&c| s.get(c) == v).count() as u32)
}

pub fn down_up(s: &Filling, u: Cell) -> (Stat, Stat) {
    (down(s, u), up(s, u))
}

/// Lower and upper arm counts of cells with content `σ(u)`, ignoring whether
/// `u` is blocked.
pub fn arm_counts(s: &Filling, u: Cell) -> (u32, u32) {
    let v = s.get(u);
    let (lower, upper) = s.shape().arms(u);
    let count = |cells: Vec<Cell>| cells.into_iter().filter(|&c| s.get(c) == v).count() as u32;
    (count(lower), count(upper))
}

/// Per-row generating functions `(d_j, u_j)` of the arm counts over every
/// cell with content `k`, blocked or not, for rows `j = 1..=λ_1` (index 0 is
/// row 1).
pub fn row_updown(s: &Filling, k: u32) -> Vec<(Poly, Poly)> {
    let sh = s.shape();
    (1..=sh.height())
        .map(|r| {
            let mut d = Poly::zero(0);
            let mut up_gf = Poly::zero(0);
            for c in 1..=sh.row_len(r) {
                let cell = Cell::new(r, c);
                if s.get(cell) == k {
                    let (a, b) = arm_counts(s, cell);
                    d += &Poly::t_pow(0, a as i32);
                    up_gf += &Poly::t_pow(0, b as i32);
                }
            }
            (d, up_gf)
        })
        .collect()
}

/// `(D(σ,k), U(σ,k))` as polynomials in `t`. Blocked cells are left out.
pub fn dsum_usum(s: &Filling, k: u32) -> (Poly, Poly) {
    assert!(k >= 1 && k <= s.n(), "label {k} outside 1..={}", s.n());
    let mut d = Poly::zero(0);
    let mut u = Poly::zero(0);
    for cell in s.shape().reading_order() {
        if s.get(cell) != k {
            continue;
        }
        if let Stat::Value(e) = down(s, cell) {
            d += &Poly::t_pow(0, e as i32);
        }
        if let Stat::Value(e) = up(s, cell) {
            u += &Poly::t_pow(0, e as i32);
        }
    }
    (d, u)
}

/// `(D̄(σ,k), Ū(σ,k))`: the same sums over every cell with content `k`,
/// blocked cells included.
pub fn dbar_ubar(s: &Filling, k: u32) -> (Poly, Poly) {
    assert!(k >= 1 && k <= s.n(), "label {k} outside 1..={}", s.n());
    row_updown(s, k).into_iter().fold((Poly::zero(0), Poly::zero(0)), |(d, u), (a, b)| (d + a, u + b))
}

/// Attacking inversions, arm sum over descents, and the descent set.
pub fn llt_stats(s: &Filling) -> LltStats {
    let sh = s.shape();
    let mut inv_hat = 0;
    for r in 1..=sh.height() {
        let len = sh.row_len(r);
        for i in 1..=len {
            let vi = s.get(Cell::new(r, i));
            for j in i + 1..=len {
                if s.get(Cell::new(r, j)) > vi {
                    inv_hat += 1;
                }
            }
            if r > 1 {
                for j in i + 1..=sh.row_len(r - 1) {
                    if vi > s.get(Cell::new(r - 1, j)) {
                        inv_hat += 1;
                    }
                }
            }
        }
    }
    let mut descents = Vec::new();
    let mut arm_hat = 0;
    for c in sh.reading_order() {
        if let Some(below) = s.south_value(c) {
            if s.get(c) > below {
                descents.push(c);
                arm_hat += sh.row_len(c.row - 1).saturating_sub(c.col);
            }
        }
    }
    LltStats { inv_hat, arm_hat, descents }
}

/// Bottom row read as a configuration: site `j` holds the heights of the
/// columns whose bottom entry is `j`.
pub fn proj(s: &Filling) -> ZrpConfig {
    let mut sites = vec![Vec::new(); s.n() as usize];
    for (i, col) in s.cols().iter().enumerate() {
        sites[col[0] as usize - 1].push(s.shape().part(i as u32 + 1));
    }
    ZrpConfig::new(sites)
}

/// Forget the bottom `k` rows.
pub fn restrict_top(s: &Filling, k: u32) -> Filling {
    assert!(k <= s.shape().height(), "cannot drop {k} rows from {}", s.shape());
    let shape = s.shape().drop_rows(k);
    let cols = s.cols().iter().take(shape.len()).map(|c| c[k as usize..].to_vec()).collect();
    Filling::new(shape, s.n(), cols)
}
