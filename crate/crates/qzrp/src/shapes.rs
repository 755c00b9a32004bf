//! Partitions, cells and diagram geometry.
//!
//! Diagrams are bottom-justified columns: column `i` has height `λ_i`, rows
//! are counted from the bottom. Cell `(r, i)` is in the diagram iff
//! `1 <= i <= len(λ)` and `1 <= r <= λ_i`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// A weakly decreasing list of positive integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<u32>,
}

/// A cell `(row, col)`, both 1-based. Ordered by reading order: rows top to
/// bottom, each row right to left.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub row: u32,
    pub col: u32,
}

impl Cell {
    pub const fn new(row: u32, col: u32) -> Self {
        Cell { row, col }
    }

    pub fn north(self) -> Cell {
        Cell::new(self.row + 1, self.col)
    }

    /// The cell below, if the row is above the bottom.
    pub fn south(self) -> Option<Cell> {
        (self.row > 1).then(|| Cell::new(self.row - 1, self.col))
    }
}

impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        other.row.cmp(&self.row).then(other.col.cmp(&self.col))
    }
}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

impl Partition {
    /// Panics unless `parts` is weakly decreasing and positive.
    pub fn new(parts: Vec<u32>) -> Self {
        Self::try_new(parts).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn try_new(parts: Vec<u32>) -> Result<Self, Error> {
        if parts.contains(&0) {
            return Err(Error::Contract(format!("partition {parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Contract(format!("partition {parts:?} is not weakly decreasing")));
        }
        Ok(Partition { parts })
    }

    /// Sorts and drops zeros.
    pub fn from_multiset(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// `⟨1^m⟩`: `m` columns of height one.
    pub fn ones(m: u32) -> Self {
        Partition { parts: vec![1; m as usize] }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Height of column `i` (1-based), zero past the end.
    pub fn part(&self, i: u32) -> u32 {
        if i == 0 {
            return 0;
        }
        self.parts.get(i as usize - 1).copied().unwrap_or(0)
    }

    /// Number of rows, `λ_1`.
    pub fn height(&self) -> u32 {
        self.parts.first().copied().unwrap_or(0)
    }

    /// Length of row `r`, i.e. `λ'_r`.
    pub fn row_len(&self, r: u32) -> u32 {
        self.parts.iter().filter(|&&p| p >= r).count() as u32
    }

    pub fn contains(&self, c: Cell) -> bool {
        c.col >= 1 && c.row >= 1 && c.row <= self.part(c.col)
    }

    pub fn is_strict(&self) -> bool {
        self.parts.windows(2).all(|w| w[0] > w[1])
    }

    pub fn is_compressed(&self) -> bool {
        self.compress() == *self
    }

    pub fn conjugate(&self) -> Partition {
        Partition { parts: (1..=self.height()).map(|r| self.row_len(r)).collect() }
    }

    /// Relabel the distinct part values to `1..j`, keeping multiplicities.
    pub fn compress(&self) -> Partition {
        let mut distinct: Vec<u32> = self.parts.clone();
        distinct.dedup();
        let rank = |p: u32| (distinct.len() - distinct.iter().position(|&d| d == p).expect("present")) as u32;
        Partition { parts: self.parts.iter().map(|&p| rank(p)).collect() }
    }

    /// Multiplicity of each value `1..=height`, index 0 is value 1.
    pub fn multiplicities(&self) -> Vec<u32> {
        (1..=self.height()).map(|v| self.parts.iter().filter(|&&p| p == v).count() as u32).collect()
    }

    /// Cells in reading order.
    pub fn reading_order(&self) -> Vec<Cell> {
        let mut out = Vec::with_capacity(self.size() as usize);
        for r in (1..=self.height()).rev() {
            for c in (1..=self.row_len(r)).rev() {
                out.push(Cell::new(r, c));
            }
        }
        out
    }

    /// `(lower, upper)` arms of `u`, each in reading order.
    pub fn arms(&self, u: Cell) -> (Vec<Cell>, Vec<Cell>) {
        assert!(self.contains(u), "cell {u} is not in the diagram of {self}");
        let (r, i) = (u.row, u.col);
        let mut lower: Vec<Cell> = (1..i).map(|j| Cell::new(r, j)).collect();
        if r > 1 {
            lower.extend((i + 1..=self.row_len(r - 1)).map(|j| Cell::new(r - 1, j)));
        }
        let mut upper: Vec<Cell> = (1..i).map(|j| Cell::new(r + 1, j)).filter(|&c| self.contains(c)).collect();
        upper.extend((i + 1..=self.row_len(r)).map(|j| Cell::new(r, j)));
        lower.sort();
        upper.sort();
        (lower, upper)
    }

    pub fn is_column_top(&self, u: Cell) -> bool {
        self.contains(u) && u.row == self.part(u.col)
    }

    /// Maximal run `(s, e)` of columns with the same height as column `u.col`.
    /// `u` must be a column top.
    pub fn degenerate_segment(&self, u: Cell) -> (u32, u32) {
        assert!(self.is_column_top(u), "cell {u} is not a column top of {self}");
        let h = u.row;
        let mut s = u.col;
        while s > 1 && self.part(s - 1) == h {
            s -= 1;
        }
        let mut e = u.col;
        while self.part(e + 1) == h {
            e += 1;
        }
        (s, e)
    }

    /// Drop the bottom `k` rows: parts `(λ_i - k)_+`.
    pub fn drop_rows(&self, k: u32) -> Partition {
        Partition::from_multiset(self.parts.iter().map(|&p| p.saturating_sub(k)).collect())
    }
}

/// All partitions of `m`, in reverse lexicographic order.
pub fn partitions_of(m: u32) -> Vec<Partition> {
    fn go(m: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if m == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in (1..=m.min(max)).rev() {
            cur.push(p);
            go(m - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(m, m, &mut Vec::new(), &mut out);
    out
}

/// All nonempty partitions of size at most `m`.
pub fn partitions_up_to(m: u32) -> Vec<Partition> {
    (1..=m).flat_map(partitions_of).collect()
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|p| p.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad part {p:?} in shape {s:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Partition::try_new(parts).map_err(|e| Error::Parse(e.to_string()))
    }
}
