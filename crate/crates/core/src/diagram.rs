//! Cells, weak compositions and diagrams in the `n × n` grid.
//!
//! Row 1 is the top row and column 1 the leftmost column. A [`Diagram`] is a
//! bitset over the grid, so it is `Copy` and hashes in constant time; its
//! cells always iterate in row-major order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, MAX_GRID};
use crate::perm::Permutation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }
}

impl From<(usize, usize)> for Cell {
    fn from((row, col): (usize, usize)) -> Self {
        Self { row, col }
    }
}

/// A weak composition of fixed length.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeakComposition {
    parts: Vec<u32>,
}

impl WeakComposition {
    pub fn new(parts: Vec<u32>) -> Self {
        Self { parts }
    }

    pub fn zeros(n: usize) -> Self {
        Self { parts: vec![0; n] }
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

    /// `|α|`
    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Part `i`, 1-based.
    pub fn part(&self, i: usize) -> u32 {
        self.parts[i - 1]
    }

    pub fn is_weakly_decreasing(&self) -> bool {
        self.parts.windows(2).all(|w| w[0] >= w[1])
    }

    /// Zero parts are ignored.
    pub fn nonzero_parts_weakly_increasing(&self) -> bool {
        let nz: Vec<u32> = self.parts.iter().copied().filter(|&p| p > 0).collect();
        nz.windows(2).all(|w| w[0] <= w[1])
    }

    /// `s_i α`, swapping parts `i` and `i+1`.
    pub fn swapped(&self, i: usize) -> Self {
        let mut parts = self.parts.clone();
        parts.swap(i - 1, i);
        Self { parts }
    }

    /// Pads with trailing zeros to length `n`; longer input is rejected.
    pub fn padded(&self, n: usize) -> Result<Self> {
        if self.len() > n {
            return Err(Error::SizeMismatch {
                expected: n,
                got: self.len(),
            });
        }
        let mut parts = self.parts.clone();
        parts.resize(n, 0);
        Ok(Self { parts })
    }

    pub fn checked_sub(&self, other: &WeakComposition) -> Option<WeakComposition> {
        if self.len() != other.len() {
            return None;
        }
        self.parts
            .iter()
            .zip(&other.parts)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(WeakComposition::new)
    }

    /// Every composition of length `n` with parts in `0..=max_part`, in
    /// lexicographic order.
    pub fn all_bounded(n: usize, max_part: u32) -> Vec<WeakComposition> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; n];
        loop {
            out.push(WeakComposition::new(cur.clone()));
            let mut i = n;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] < max_part {
                    cur[i] += 1;
                    for c in cur.iter_mut().skip(i + 1) {
                        *c = 0;
                    }
                    break;
                }
            }
        }
    }
}

impl fmt::Display for WeakComposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Accepts `3,3,3,2` or `(3,3,3,2)`.
impl FromStr for WeakComposition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
        if inner.is_empty() {
            return Ok(WeakComposition::new(Vec::new()));
        }
        inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad composition part {t:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(WeakComposition::new)
    }
}

impl From<Vec<u32>> for WeakComposition {
    fn from(parts: Vec<u32>) -> Self {
        Self { parts }
    }
}

pub(crate) fn check_grid(n: usize) -> Result<()> {
    if n == 0 || n > MAX_GRID {
        Err(Error::GridSize(n))
    } else {
        Ok(())
    }
}

/// A set of cells in the `n × n` grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Diagram {
    n: u8,
    bits: u128,
}

impl Diagram {
    pub fn empty(n: usize) -> Result<Self> {
        check_grid(n)?;
        Ok(Self { n: n as u8, bits: 0 })
    }

    pub fn from_cells<I, C>(n: usize, cells: I) -> Result<Self>
    where
        I: IntoIterator<Item = C>,
        C: Into<Cell>,
    {
        let mut d = Self::empty(n)?;
        for c in cells {
            d.insert(c.into())?;
        }
        Ok(d)
    }

    pub(crate) fn from_bits(n: usize, bits: u128) -> Self {
        Self { n: n as u8, bits }
    }

    pub(crate) fn bits(&self) -> u128 {
        self.bits
    }

    pub fn grid_size(&self) -> usize {
        self.n as usize
    }

    pub(crate) fn bit(&self, cell: Cell) -> u128 {
        1u128 << ((cell.row - 1) * self.n as usize + cell.col - 1)
    }

    fn check_cell(&self, cell: Cell) -> Result<()> {
        let n = self.grid_size();
        if cell.row == 0 || cell.col == 0 || cell.row > n || cell.col > n {
            return Err(Error::OutOfGrid {
                row: cell.row,
                col: cell.col,
                n,
            });
        }
        Ok(())
    }

    pub fn contains(&self, cell: Cell) -> bool {
        let n = self.grid_size();
        cell.row >= 1 && cell.col >= 1 && cell.row <= n && cell.col <= n && self.bits & self.bit(cell) != 0
    }

    pub fn insert(&mut self, cell: Cell) -> Result<()> {
        self.check_cell(cell)?;
        self.bits |= self.bit(cell);
        Ok(())
    }

    pub fn remove(&mut self, cell: Cell) -> bool {
        if !self.contains(cell) {
            return false;
        }
        self.bits &= !self.bit(cell);
        true
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    /// Cells in row-major order.
    pub fn cells(&self) -> Vec<Cell> {
        let n = self.grid_size();
        let mut out = Vec::with_capacity(self.len());
        let mut b = self.bits;
        while b != 0 {
            let idx = b.trailing_zeros() as usize;
            out.push(Cell::new(idx / n + 1, idx % n + 1));
            b &= b - 1;
        }
        out
    }

    /// Bitmask of occupied columns in row `r` (bit `c-1` for column `c`).
    pub fn row_mask(&self, r: usize) -> u32 {
        let n = self.grid_size();
        ((self.bits >> ((r - 1) * n)) & ((1u128 << n) - 1)) as u32
    }

    /// Occupied rows of column `c`, top to bottom.
    pub fn column(&self, c: usize) -> Vec<usize> {
        (1..=self.grid_size())
            .filter(|&r| self.contains(Cell::new(r, c)))
            .collect()
    }

    pub fn weight(&self) -> WeakComposition {
        WeakComposition::new((1..=self.grid_size()).map(|r| self.row_mask(r).count_ones()).collect())
    }

    fn same_size(&self, other: &Diagram) -> Result<()> {
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                expected: self.grid_size(),
                got: other.grid_size(),
            });
        }
        Ok(())
    }

    pub fn union(&self, other: &Diagram) -> Result<Diagram> {
        self.same_size(other)?;
        Ok(Diagram::from_bits(self.grid_size(), self.bits | other.bits))
    }

    pub fn difference(&self, other: &Diagram) -> Result<Diagram> {
        self.same_size(other)?;
        Ok(Diagram::from_bits(self.grid_size(), self.bits & !other.bits))
    }

    pub fn is_subset(&self, other: &Diagram) -> Result<bool> {
        self.same_size(other)?;
        Ok(self.bits & !other.bits == 0)
    }

    pub fn is_disjoint(&self, other: &Diagram) -> Result<bool> {
        self.same_size(other)?;
        Ok(self.bits & other.bits == 0)
    }

    /// Columns containing at least one cell, ascending.
    pub fn nonempty_columns(&self) -> Vec<usize> {
        (1..=self.grid_size())
            .filter(|&c| (1..=self.grid_size()).any(|r| self.contains(Cell::new(r, c))))
            .collect()
    }

    /// Rothe diagram: `(i, j)` with `w(i) > j` and `w⁻¹(j) > i`.
    pub fn rothe(w: &Permutation) -> Result<Diagram> {
        let n = w.n();
        let inv = w.inverse();
        let mut d = Diagram::empty(n)?;
        for i in 1..=n {
            for j in 1..w.at(i) {
                if inv.at(j) > i {
                    d.insert(Cell::new(i, j))?;
                }
            }
        }
        Ok(d)
    }

    /// Key diagram: row `i` holds columns `1..=α_i`.
    pub fn key(alpha: &WeakComposition) -> Result<Diagram> {
        let n = alpha.len();
        let mut d = Diagram::empty(n)?;
        for (i, &a) in alpha.parts().iter().enumerate() {
            if a as usize > n {
                return Err(Error::OutOfGrid {
                    row: i + 1,
                    col: a as usize,
                    n,
                });
            }
            for j in 1..=a as usize {
                d.insert(Cell::new(i + 1, j))?;
            }
        }
        Ok(d)
    }

    /// `(i,j), (i',j') ∈ D` with `i' < i`, `j' > j` forces `(i',j) ∈ D`.
    pub fn is_nw_hook_closed(&self) -> bool {
        let cells = self.cells();
        cells.iter().all(|a| {
            cells
                .iter()
                .filter(|b| b.row < a.row && b.col > a.col)
                .all(|b| self.contains(Cell::new(b.row, a.col)))
        })
    }

    /// `(i,j), (i',j') ∈ D` with `i' > i`, `j' > j` forces `(i',j) ∈ D`.
    pub fn is_sw_hook_closed(&self) -> bool {
        let cells = self.cells();
        cells.iter().all(|a| {
            cells
                .iter()
                .filter(|b| b.row > a.row && b.col > a.col)
                .all(|b| self.contains(Cell::new(b.row, a.col)))
        })
    }

    /// Smallest southwest hook-closed superset: `(i,j)` is added when row
    /// `i` has a cell weakly east of column `j` and column `j` has a cell
    /// weakly north of row `i`.
    pub fn sw_hook_closure(&self) -> Diagram {
        let n = self.grid_size();
        let mut out = *self;
        for i in 1..=n {
            let row = self.row_mask(i);
            if row == 0 {
                continue;
            }
            let east_limit = 32 - row.leading_zeros() as usize;
            for j in 1..=east_limit {
                if (1..=i).any(|r| self.contains(Cell::new(r, j))) {
                    out.bits |= out.bit(Cell::new(i, j));
                }
            }
        }
        out
    }

    /// Deletes the given columns' worth of gaps: column `keep[k]` moves to
    /// column `k + 1`. Cells outside `keep` are dropped.
    pub fn compact_columns(&self, keep: &[usize]) -> Diagram {
        let mut out = Diagram::from_bits(self.grid_size(), 0);
        for c in self.cells() {
            if let Some(k) = keep.iter().position(|&x| x == c.col) {
                out.bits |= out.bit(Cell::new(c.row, k + 1));
            }
        }
        out
    }

    /// Inverse of [`Diagram::compact_columns`].
    pub fn expand_columns(&self, keep: &[usize]) -> Result<Diagram> {
        let mut out = Diagram::from_bits(self.grid_size(), 0);
        for c in self.cells() {
            let col = *keep.get(c.col - 1).ok_or(Error::OutOfGrid {
                row: c.row,
                col: c.col,
                n: keep.len(),
            })?;
            out.insert(Cell::new(c.row, col))?;
        }
        Ok(out)
    }

    pub fn to_text(&self) -> String {
        let n = self.grid_size();
        let mut s = String::with_capacity(n * (n + 1));
        for r in 1..=n {
            for c in 1..=n {
                s.push(if self.contains(Cell::new(r, c)) { 'O' } else { '.' });
            }
            s.push('\n');
        }
        s
    }

    /// Parses `n` lines of `n` characters, `O` for a box and `.` for empty.
    pub fn parse_text(s: &str) -> Result<Diagram> {
        let lines = grid_lines(s)?;
        let n = lines.len();
        let mut d = Diagram::empty(n)?;
        for (r, line) in lines.iter().enumerate() {
            for (c, ch) in line.chars().enumerate() {
                match ch {
                    'O' => d.insert(Cell::new(r + 1, c + 1))?,
                    '.' => {}
                    other => return Err(Error::Parse(format!("unexpected character {other:?}"))),
                }
            }
        }
        Ok(d)
    }
}

impl PartialOrd for Diagram {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Grid size first, then the row-major cell sequence.
impl Ord for Diagram {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.n.cmp(&other.n).then_with(|| self.cells().cmp(&other.cells()))
    }
}

/// Non-empty lines, all of the same length as the line count.
pub(crate) fn grid_lines(s: &str) -> Result<Vec<&str>> {
    let lines: Vec<&str> = s.lines().map(str::trim_end).filter(|l| !l.is_empty()).collect();
    let n = lines.len();
    check_grid(n)?;
    for l in &lines {
        if l.chars().count() != n {
            return Err(Error::Parse(format!(
                "grid line {l:?} has {} characters, expected {n}",
                l.chars().count()
            )));
        }
    }
    Ok(lines)
}

#[derive(Serialize, Deserialize)]
struct DiagramJson {
    n: usize,
    cells: Vec<[usize; 2]>,
}

impl Serialize for Diagram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DiagramJson {
            n: self.grid_size(),
            cells: self.cells().iter().map(|c| [c.row, c.col]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Diagram {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = DiagramJson::deserialize(d)?;
        Diagram::from_cells(raw.n, raw.cells.iter().map(|&[r, c]| Cell::new(r, c))).map_err(serde::de::Error::custom)
    }
}
