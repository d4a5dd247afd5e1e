//! Kohnert, K-Kohnert and ghost moves on labeled diagrams, and their BFS
//! closures.
//!
//! Every move keeps a box in its column and only ever places boxes weakly
//! north, so closures stay inside the starting grid.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::diagram::{grid_lines, Cell, Diagram, WeakComposition};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::poly::IntPolynomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Solid,
    Ghost,
}

impl Label {
    pub fn symbol(self) -> char {
        match self {
            Label::Solid => 'O',
            Label::Ghost => 'G',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MoveKind {
    Kohnert,
    KKohnert,
    GhostKohnert,
    GhostKKohnert,
}

/// Which moves a closure may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ruleset {
    /// Kohnert moves only.
    Plain,
    /// Kohnert and K-Kohnert moves on rightmost solid boxes.
    RossYong,
    /// Adds ghost Kohnert and ghost K-Kohnert moves on rightmost ghosts.
    Ghost,
    /// Ghost moves may act on any ghost box, rightmost or not.
    Relaxed,
}

impl Ruleset {
    pub const ALL: [Ruleset; 4] = [Ruleset::Plain, Ruleset::RossYong, Ruleset::Ghost, Ruleset::Relaxed];

    pub fn name(self) -> &'static str {
        match self {
            Ruleset::Plain => "plain",
            Ruleset::RossYong => "ry",
            Ruleset::Ghost => "ghost",
            Ruleset::Relaxed => "relaxed",
        }
    }
}

impl fmt::Display for Ruleset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A diagram whose boxes are labeled solid or ghost. Stored as two bitsets
/// (`ghost ⊆ occupied`), which is also the canonical form for hashing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LabeledDiagram {
    n: u8,
    occupied: u128,
    ghost: u128,
}

impl LabeledDiagram {
    pub fn empty(n: usize) -> Result<Self> {
        crate::diagram::check_grid(n)?;
        Ok(Self {
            n: n as u8,
            occupied: 0,
            ghost: 0,
        })
    }

    /// Every box solid.
    pub fn from_diagram(d: &Diagram) -> Self {
        Self {
            n: d.grid_size() as u8,
            occupied: d.bits(),
            ghost: 0,
        }
    }

    pub fn from_cells<I>(n: usize, cells: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Cell, Label)>,
    {
        let mut d = Self::empty(n)?;
        for (cell, label) in cells {
            d.insert(cell, label)?;
        }
        Ok(d)
    }

    pub fn grid_size(&self) -> usize {
        self.n as usize
    }

    #[inline]
    fn index(&self, row: usize, col: usize) -> u128 {
        1u128 << ((row - 1) * self.n as usize + col - 1)
    }

    pub fn insert(&mut self, cell: Cell, label: Label) -> Result<()> {
        let n = self.grid_size();
        if cell.row == 0 || cell.col == 0 || cell.row > n || cell.col > n {
            return Err(Error::OutOfGrid {
                row: cell.row,
                col: cell.col,
                n,
            });
        }
        let bit = self.index(cell.row, cell.col);
        self.occupied |= bit;
        match label {
            Label::Solid => self.ghost &= !bit,
            Label::Ghost => self.ghost |= bit,
        }
        Ok(())
    }

    pub fn label(&self, cell: Cell) -> Option<Label> {
        let n = self.grid_size();
        if cell.row == 0 || cell.col == 0 || cell.row > n || cell.col > n {
            return None;
        }
        let bit = self.index(cell.row, cell.col);
        if self.occupied & bit == 0 {
            None
        } else if self.ghost & bit != 0 {
            Some(Label::Ghost)
        } else {
            Some(Label::Solid)
        }
    }

    /// Boxes in row-major order.
    pub fn cells(&self) -> Vec<(Cell, Label)> {
        self.support()
            .cells()
            .into_iter()
            .map(|c| {
                let l = self.label(c).expect("occupied");
                (c, l)
            })
            .collect()
    }

    /// The underlying unlabeled diagram.
    pub fn support(&self) -> Diagram {
        Diagram::from_bits(self.grid_size(), self.occupied)
    }

    pub fn solid(&self) -> Diagram {
        Diagram::from_bits(self.grid_size(), self.occupied & !self.ghost)
    }

    pub fn ghosts(&self) -> Diagram {
        Diagram::from_bits(self.grid_size(), self.ghost)
    }

    /// `#D`, counting both labels.
    pub fn len(&self) -> usize {
        self.occupied.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.occupied == 0
    }

    /// Boxes per row, both labels.
    pub fn weight(&self) -> WeakComposition {
        self.support().weight()
    }

    fn row_bits(&self, r: usize) -> u32 {
        let n = self.n as usize;
        ((self.occupied >> ((r - 1) * n)) & ((1u128 << n) - 1)) as u32
    }

    /// Target row `i' = max{r ≤ i : (r, j) ∉ D}` provided every box strictly
    /// between `i'` and `i` (and `(i, j)` itself) carries `label`.
    fn landing_row(&self, i: usize, j: usize, label: Label) -> Option<usize> {
        let mut r = i;
        loop {
            match self.label(Cell::new(r, j)) {
                None => return Some(r),
                Some(l) if l != label => return None,
                Some(_) => {}
            }
            if r == 1 {
                return None;
            }
            r -= 1;
        }
    }

    fn push_moves(&self, i: usize, j: usize, label: Label, kinds: &[MoveKind], out: &mut Vec<Move>) {
        let Some(target) = self.landing_row(i, j, label) else {
            return;
        };
        debug_assert!(target >= 1 && target < i);
        let from = self.index(i, j);
        let to = self.index(target, j);
        for &kind in kinds {
            let mut next = *self;
            match kind {
                MoveKind::Kohnert => {
                    next.occupied = (next.occupied & !from) | to;
                }
                MoveKind::KKohnert => {
                    next.occupied |= to;
                    next.ghost |= from;
                }
                MoveKind::GhostKohnert => {
                    next.occupied = (next.occupied & !from) | to;
                    next.ghost = (next.ghost & !from) | to;
                }
                MoveKind::GhostKKohnert => {
                    next.occupied |= to;
                    next.ghost |= to;
                }
            }
            out.push(Move {
                cell: Cell::new(i, j),
                kind,
                result: next,
            });
        }
    }

    /// Every move applicable under `rules`.
    pub fn legal_moves(&self, rules: Ruleset) -> Vec<Move> {
        use MoveKind::*;
        let n = self.grid_size();
        let mut out = Vec::new();
        let solid_kinds: &[MoveKind] = match rules {
            Ruleset::Plain => &[Kohnert],
            _ => &[Kohnert, KKohnert],
        };
        let ghost_kinds: &[MoveKind] = &[GhostKohnert, GhostKKohnert];
        for i in 1..=n {
            let row = self.row_bits(i);
            if row == 0 {
                continue;
            }
            let rightmost = 32 - row.leading_zeros() as usize;
            match self.label(Cell::new(i, rightmost)).expect("occupied") {
                Label::Solid => self.push_moves(i, rightmost, Label::Solid, solid_kinds, &mut out),
                Label::Ghost => {
                    if matches!(rules, Ruleset::Ghost | Ruleset::Relaxed) {
                        self.push_moves(i, rightmost, Label::Ghost, ghost_kinds, &mut out);
                    }
                }
            }
            if rules == Ruleset::Relaxed {
                for j in 1..rightmost {
                    if self.label(Cell::new(i, j)) == Some(Label::Ghost) {
                        self.push_moves(i, j, Label::Ghost, ghost_kinds, &mut out);
                    }
                }
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let n = self.grid_size();
        let mut s = String::with_capacity(n * (n + 1));
        for r in 1..=n {
            for c in 1..=n {
                s.push(self.label(Cell::new(r, c)).map_or('.', Label::symbol));
            }
            s.push('\n');
        }
        s
    }

    /// Parses `n` lines of `O` (solid), `G` (ghost) and `.` (empty).
    pub fn parse_text(s: &str) -> Result<Self> {
        let lines = grid_lines(s)?;
        let mut d = Self::empty(lines.len())?;
        for (r, line) in lines.iter().enumerate() {
            for (c, ch) in line.chars().enumerate() {
                let cell = Cell::new(r + 1, c + 1);
                match ch {
                    'O' => d.insert(cell, Label::Solid)?,
                    'G' => d.insert(cell, Label::Ghost)?,
                    '.' => {}
                    other => return Err(Error::Parse(format!("unexpected character {other:?}"))),
                }
            }
        }
        Ok(d)
    }

    /// Row-major `(row, col, label)` sequence; the ordering key for output.
    pub fn canonical_key(&self) -> Vec<(usize, usize, Label)> {
        self.cells().into_iter().map(|(c, l)| (c.row, c.col, l)).collect()
    }
}

impl PartialOrd for LabeledDiagram {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LabeledDiagram {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.canonical_key().cmp(&other.canonical_key()))
    }
}

impl fmt::Display for LabeledDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Serialize, Deserialize)]
struct LabeledCellJson {
    r: usize,
    c: usize,
    label: Label,
}

#[derive(Serialize, Deserialize)]
struct LabeledDiagramJson {
    n: usize,
    cells: Vec<LabeledCellJson>,
}

impl Serialize for LabeledDiagram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LabeledDiagramJson {
            n: self.grid_size(),
            cells: self
                .cells()
                .into_iter()
                .map(|(c, label)| LabeledCellJson {
                    r: c.row,
                    c: c.col,
                    label,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LabeledDiagram {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = LabeledDiagramJson::deserialize(d)?;
        LabeledDiagram::from_cells(raw.n, raw.cells.into_iter().map(|c| (Cell::new(c.r, c.c), c.label)))
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Move {
    pub cell: Cell,
    pub kind: MoveKind,
    pub result: LabeledDiagram,
}

/// The set of diagrams reachable from a seed, in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Closure {
    states: Vec<LabeledDiagram>,
}

impl Closure {
    pub fn states(&self) -> &[LabeledDiagram] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn contains(&self, d: &LabeledDiagram) -> bool {
        self.states.binary_search(d).is_ok()
    }

    pub fn as_set(&self) -> HashSet<LabeledDiagram> {
        self.states.iter().copied().collect()
    }

    pub fn with_weight(&self, gamma: &WeakComposition) -> Vec<LabeledDiagram> {
        self.states.iter().filter(|d| d.weight() == *gamma).copied().collect()
    }

    pub fn weight_count(&self, gamma: &WeakComposition) -> usize {
        self.states.iter().filter(|d| d.weight() == *gamma).count()
    }

    pub fn weight_counts(&self) -> BTreeMap<WeakComposition, usize> {
        let mut out = BTreeMap::new();
        for d in &self.states {
            *out.entry(d.weight()).or_insert(0) += 1;
        }
        out
    }

    /// `Σ (−1)^{#D − base} x^{wt(D)}`.
    pub fn generating_function(&self, base: usize) -> IntPolynomial {
        let n = self.states.first().map_or(0, |d| d.grid_size());
        let mut counts: HashMap<Vec<u32>, i64> = HashMap::new();
        for d in &self.states {
            let sign = if (d.len() + base).is_multiple_of(2) { 1 } else { -1 };
            *counts.entry(d.weight().parts().to_vec()).or_default() += sign;
        }
        IntPolynomial::from_terms(n, counts.into_iter().map(|(e, c)| (e, BigInt::from(c))))
            .expect("weights have grid length")
    }
}

/// BFS fixed point of `legal_moves` from `seed` (all boxes solid).
pub fn closure(seed: &Diagram, rules: Ruleset) -> Closure {
    closure_with_budget(seed, rules, None).expect("no budget")
}

/// As [`closure`], failing once more than `max_states` diagrams are seen.
pub fn closure_with_budget(seed: &Diagram, rules: Ruleset, max_states: Option<usize>) -> Result<Closure> {
    let start = LabeledDiagram::from_diagram(seed);
    let limit = max_states.unwrap_or(usize::MAX);
    let mut seen: HashSet<LabeledDiagram> = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(d) = queue.pop_front() {
        for m in d.legal_moves(rules) {
            if seen.insert(m.result) {
                if seen.len() > limit {
                    return Err(Error::BudgetExceeded(limit));
                }
                queue.push_back(m.result);
            }
        }
    }
    let mut states: Vec<LabeledDiagram> = seen.into_iter().collect();
    states.sort_by_cached_key(|d| d.canonical_key());
    Ok(Closure { states })
}

/// `#{D ∈ closure(D(w)) : wt(D) = γ}`.
pub fn closure_weight_count(w: &Permutation, gamma: &WeakComposition, rules: Ruleset) -> Result<usize> {
    let seed = Diagram::rothe(w)?;
    if gamma.len() != w.n() {
        return Err(Error::SizeMismatch {
            expected: w.n(),
            got: gamma.len(),
        });
    }
    Ok(closure(&seed, rules).weight_count(gamma))
}

/// The index of a polynomial computed from a closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Seed {
    /// Rothe diagram `D(w)`, signs relative to `ℓ(w)`.
    Permutation(Permutation),
    /// Key diagram `D(α)`, signs relative to `|α|`.
    Composition(WeakComposition),
}

impl Seed {
    pub fn diagram(&self) -> Result<Diagram> {
        match self {
            Seed::Permutation(w) => Diagram::rothe(w),
            Seed::Composition(a) => Diagram::key(a),
        }
    }

    pub fn base_degree(&self) -> usize {
        match self {
            Seed::Permutation(w) => w.length(),
            Seed::Composition(a) => a.size() as usize,
        }
    }
}

/// Signed generating function of the closure of the seed diagram.
pub fn polynomial_via_closure(seed: &Seed, rules: Ruleset) -> Result<IntPolynomial> {
    let d = seed.diagram()?;
    Ok(closure(&d, rules).generating_function(seed.base_degree()))
}
