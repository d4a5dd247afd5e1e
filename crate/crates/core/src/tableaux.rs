//! Set-valued tableaux on diagrams, the left key, and the bijection from
//! flagged set-valued tableaux of `D(w)` onto K-Kohnert diagrams for
//! 321-avoiding `w`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::diagram::{Cell, Diagram, WeakComposition};
use crate::error::{Error, Result};
use crate::kohnert::{Label, LabeledDiagram};
use crate::perm::Permutation;
use crate::poly::IntPolynomial;

/// A nonempty set of values in `1..=16`, stored as a bitmask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EntrySet(u16);

impl EntrySet {
    pub fn new<I: IntoIterator<Item = usize>>(values: I) -> Result<Self> {
        let mut mask = 0u16;
        for v in values {
            if v == 0 || v > 16 {
                return Err(Error::MalformedTableau(format!("entry {v} out of range")));
            }
            mask |= 1 << (v - 1);
        }
        if mask == 0 {
            return Err(Error::MalformedTableau("empty entry set".into()));
        }
        Ok(Self(mask))
    }

    pub fn singleton(v: usize) -> Self {
        assert!((1..=16).contains(&v), "entry {v} out of range");
        Self(1 << (v - 1))
    }

    pub fn smallest(self) -> usize {
        self.0.trailing_zeros() as usize + 1
    }

    pub fn largest(self) -> usize {
        16 - self.0.leading_zeros() as usize
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, v: usize) -> bool {
        (1..=16).contains(&v) && self.0 & (1 << (v - 1)) != 0
    }

    /// Values in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        (1..=16).filter(move |&v| self.0 & (1 << (v - 1)) != 0)
    }

    /// Values largest first, the way they are written in figures.
    pub fn descending(self) -> Vec<usize> {
        let mut v: Vec<usize> = self.iter().collect();
        v.reverse();
        v
    }

    fn parse_token(tok: &str) -> Result<Self> {
        let values: Result<Vec<usize>> = if tok.contains(',') {
            tok.split(',')
                .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad entry {tok:?}"))))
                .collect()
        } else {
            tok.chars()
                .map(|ch| {
                    ch.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| Error::Parse(format!("bad entry {tok:?}")))
                })
                .collect()
        };
        Self::new(values?)
    }
}

impl fmt::Display for EntrySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals = self.descending();
        let sep = if self.largest() > 9 { "," } else { "" };
        let parts: Vec<String> = vals.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(sep))
    }
}

impl Serialize for EntrySet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.descending().serialize(s)
    }
}

impl<'de> Deserialize<'de> for EntrySet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        EntrySet::new(v).map_err(serde::de::Error::custom)
    }
}

fn out_of_shape(shape: &Diagram, cell: Cell) -> Error {
    Error::MalformedTableau(format!(
        "cell ({},{}) not in the {}x{} shape",
        cell.row,
        cell.col,
        shape.grid_size(),
        shape.grid_size()
    ))
}

/// A filling of a diagram by nonempty subsets of `[n]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetValuedTableau {
    shape: Diagram,
    entries: BTreeMap<Cell, EntrySet>,
}

impl SetValuedTableau {
    pub fn new<I>(shape: Diagram, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Cell, EntrySet)>,
    {
        let n = shape.grid_size();
        let entries: BTreeMap<Cell, EntrySet> = entries.into_iter().collect();
        for (&cell, set) in &entries {
            if !shape.contains(cell) {
                return Err(out_of_shape(&shape, cell));
            }
            if set.largest() > n {
                return Err(Error::MalformedTableau(format!("entry {} exceeds {n}", set.largest())));
            }
        }
        if entries.len() != shape.len() {
            return Err(Error::MalformedTableau("some cells of the shape are unfilled".into()));
        }
        Ok(Self { shape, entries })
    }

    /// Builds from `(row, col, values)` triples; the shape is the set of cells.
    pub fn from_triples<I, V>(n: usize, triples: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, V)>,
        V: IntoIterator<Item = usize>,
    {
        let mut shape = Diagram::empty(n)?;
        let mut entries = Vec::new();
        for (r, c, vals) in triples {
            let cell = Cell::new(r, c);
            shape.insert(cell)?;
            entries.push((cell, EntrySet::new(vals)?));
        }
        Self::new(shape, entries)
    }

    pub fn shape(&self) -> &Diagram {
        &self.shape
    }

    pub fn grid_size(&self) -> usize {
        self.shape.grid_size()
    }

    pub fn get(&self, cell: Cell) -> Option<EntrySet> {
        self.entries.get(&cell).copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (Cell, EntrySet)> + '_ {
        self.entries.iter().map(|(&c, &s)| (c, s))
    }

    /// Number of `i`s, for each `i`.
    pub fn weight(&self) -> WeakComposition {
        let mut parts = vec![0u32; self.grid_size()];
        for set in self.entries.values() {
            for v in set.iter() {
                parts[v - 1] += 1;
            }
        }
        WeakComposition::new(parts)
    }

    /// `#T`, the total number of values.
    pub fn size(&self) -> usize {
        self.entries.values().map(|s| s.len()).sum()
    }

    /// The entries of column `c`, top to bottom.
    pub fn column(&self, c: usize) -> Vec<(usize, EntrySet)> {
        self.shape
            .column(c)
            .into_iter()
            .map(|r| (r, self.entries[&Cell::new(r, c)]))
            .collect()
    }

    /// Row and column conditions; the first violation is reported.
    pub fn check_row_column(&self) -> std::result::Result<(), String> {
        let n = self.grid_size();
        for r in 1..=n {
            let mut prev: Option<(usize, EntrySet)> = None;
            for c in 1..=n {
                if let Some(s) = self.get(Cell::new(r, c)) {
                    if let Some((pc, p)) = prev {
                        if p.smallest() < s.largest() {
                            return Err(format!("row {r}: cell ({r},{pc}) = {p} vs ({r},{c}) = {s}"));
                        }
                    }
                    prev = Some((c, s));
                }
            }
        }
        for c in 1..=n {
            let col = self.column(c);
            for pair in col.windows(2) {
                let ((r1, a), (r2, b)) = (pair[0], pair[1]);
                if a.largest() >= b.smallest() {
                    return Err(format!("column {c}: cell ({r1},{c}) = {a} vs ({r2},{c}) = {b}"));
                }
            }
        }
        Ok(())
    }

    pub fn is_flagged(&self) -> bool {
        self.entries.iter().all(|(c, s)| s.largest() <= c.row)
    }

    pub fn is_fsvt(&self) -> bool {
        self.is_flagged() && self.check_row_column().is_ok()
    }

    /// `M(T)`: the largest value of each cell.
    pub fn max_tableau(&self) -> Result<Tableau> {
        Tableau::new(self.shape, self.entries.iter().map(|(&c, s)| (c, s.largest())))
    }

    pub fn to_text(&self) -> String {
        let n = self.grid_size();
        let mut out = String::new();
        for r in 1..=n {
            let row: Vec<String> = (1..=n)
                .map(|c| {
                    self.get(Cell::new(r, c))
                        .map_or_else(|| ".".to_string(), |s| s.to_string())
                })
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses `n` lines of `n` whitespace-separated tokens: `.` for an absent
    /// cell, otherwise the values as a digit run (or comma-separated).
    pub fn parse_text(s: &str) -> Result<Self> {
        let rows = parse_token_grid(s)?;
        let n = rows.len();
        let mut triples = Vec::new();
        for (r, row) in rows.iter().enumerate() {
            for (c, tok) in row.iter().enumerate() {
                if *tok != "." {
                    let set = EntrySet::parse_token(tok)?;
                    triples.push((r + 1, c + 1, set.iter().collect::<Vec<_>>()));
                }
            }
        }
        Self::from_triples(n, triples)
    }
}

fn parse_token_grid(s: &str) -> Result<Vec<Vec<&str>>> {
    let rows: Vec<Vec<&str>> = s
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| l.split_whitespace().collect())
        .collect();
    let n = rows.len();
    crate::diagram::check_grid(n)?;
    if let Some(bad) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::Parse(format!("expected {n} tokens per row, got {}", bad.len())));
    }
    Ok(rows)
}

impl fmt::Display for SetValuedTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Serialize, Deserialize)]
struct SetCellJson {
    r: usize,
    c: usize,
    entries: EntrySet,
}

#[derive(Serialize, Deserialize)]
struct SetTableauJson {
    n: usize,
    cells: Vec<SetCellJson>,
}

impl Serialize for SetValuedTableau {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SetTableauJson {
            n: self.grid_size(),
            cells: self
                .entries()
                .map(|(c, entries)| SetCellJson {
                    r: c.row,
                    c: c.col,
                    entries,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SetValuedTableau {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = SetTableauJson::deserialize(d)?;
        SetValuedTableau::from_triples(raw.n, raw.cells.into_iter().map(|c| (c.r, c.c, c.entries.iter())))
            .map_err(serde::de::Error::custom)
    }
}

/// A single-valued filling: rows weakly decrease, columns strictly increase.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tableau {
    shape: Diagram,
    entries: BTreeMap<Cell, usize>,
}

impl Tableau {
    pub fn new<I>(shape: Diagram, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Cell, usize)>,
    {
        let svt = SetValuedTableau::new(
            shape,
            entries
                .into_iter()
                .map(|(c, v)| EntrySet::new([v]).map(|s| (c, s)))
                .collect::<Result<Vec<_>>>()?,
        )?;
        svt.check_row_column().map_err(Error::MalformedTableau)?;
        Ok(Self {
            shape,
            entries: svt.entries.into_iter().map(|(c, s)| (c, s.largest())).collect(),
        })
    }

    pub fn shape(&self) -> &Diagram {
        &self.shape
    }

    pub fn get(&self, cell: Cell) -> Option<usize> {
        self.entries.get(&cell).copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (Cell, usize)> + '_ {
        self.entries.iter().map(|(&c, &v)| (c, v))
    }

    /// Values of column `c`, top to bottom.
    pub fn column(&self, c: usize) -> Vec<usize> {
        self.shape
            .column(c)
            .into_iter()
            .map(|r| self.entries[&Cell::new(r, c)])
            .collect()
    }

    pub fn to_text(&self) -> String {
        let n = self.shape.grid_size();
        let mut out = String::new();
        for r in 1..=n {
            let row: Vec<String> = (1..=n)
                .map(|c| {
                    self.get(Cell::new(r, c))
                        .map_or_else(|| ".".to_string(), |v| v.to_string())
                })
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// `(O(T), G(T))`: cell maxima and the remaining values, each placed in row
/// equal to the value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TableauPairEncoding {
    pub o: Diagram,
    pub g: Diagram,
}

impl TableauPairEncoding {
    pub fn encode(t: &SetValuedTableau) -> Result<Self> {
        let n = t.grid_size();
        let mut o = Diagram::empty(n)?;
        let mut g = Diagram::empty(n)?;
        for (cell, set) in t.entries() {
            let max = set.largest();
            for v in set.iter() {
                let target = Cell::new(v, cell.col);
                if o.contains(target) || g.contains(target) {
                    return Err(Error::MalformedTableau(format!(
                        "value {v} repeated in column {}",
                        cell.col
                    )));
                }
                let dest = if v == max { &mut o } else { &mut g };
                dest.insert(target)?;
            }
        }
        debug_assert!(o.is_disjoint(&g).unwrap());
        Ok(Self { o, g })
    }

    /// Reassembles the tableau on `shape`: the `O` boxes of column `j` are the
    /// cell maxima top to bottom, and each `G` value joins the cell whose
    /// maximum is the next one above it.
    pub fn decode(&self, shape: &Diagram) -> Result<SetValuedTableau> {
        let n = shape.grid_size();
        let mut triples: Vec<(usize, usize, Vec<usize>)> = Vec::new();
        for c in 1..=n {
            let rows = shape.column(c);
            let maxima = self.o.column(c);
            if rows.len() != maxima.len() {
                return Err(Error::MalformedTableau(format!(
                    "column {c} has {} cells but {} maxima",
                    rows.len(),
                    maxima.len()
                )));
            }
            let mut cells: Vec<Vec<usize>> = maxima.iter().map(|&m| vec![m]).collect();
            for g in self.g.column(c) {
                let slot = maxima
                    .iter()
                    .position(|&m| m > g)
                    .ok_or_else(|| Error::MalformedTableau(format!("value {g} in column {c} has no cell")))?;
                cells[slot].push(g);
            }
            for (r, vals) in rows.into_iter().zip(cells) {
                triples.push((r, c, vals));
            }
        }
        let t = SetValuedTableau::from_triples(n, triples)?;
        if t.shape() != shape {
            return Err(Error::MalformedTableau("decoded shape differs".into()));
        }
        t.check_row_column().map_err(Error::MalformedTableau)?;
        Ok(t)
    }
}

fn enumerate_fillings(shape: &Diagram, flagged: bool, visit: &mut dyn FnMut(&SetValuedTableau)) {
    let n = shape.grid_size();
    // column by column, bottom to top
    let mut order: Vec<Cell> = Vec::with_capacity(shape.len());
    for c in 1..=n {
        for r in shape.column(c).into_iter().rev() {
            order.push(Cell::new(r, c));
        }
    }
    let position: HashMap<Cell, usize> = order.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let left: Vec<Option<usize>> = order
        .iter()
        .map(|cell| {
            (1..cell.col)
                .rev()
                .find_map(|c| position.get(&Cell::new(cell.row, c)).copied())
        })
        .collect();
    let below: Vec<Option<usize>> = order
        .iter()
        .map(|cell| (cell.row + 1..=n).find_map(|r| position.get(&Cell::new(r, cell.col)).copied()))
        .collect();

    fn rec(
        k: usize,
        order: &[Cell],
        left: &[Option<usize>],
        below: &[Option<usize>],
        n: usize,
        flagged: bool,
        filled: &mut Vec<EntrySet>,
        shape: &Diagram,
        visit: &mut dyn FnMut(&SetValuedTableau),
    ) {
        if k == order.len() {
            let t = SetValuedTableau {
                shape: *shape,
                entries: order.iter().copied().zip(filled.iter().copied()).collect(),
            };
            visit(&t);
            return;
        }
        let mut bound = if flagged { order[k].row.min(n) } else { n };
        if let Some(l) = left[k] {
            bound = bound.min(filled[l].smallest());
        }
        if let Some(b) = below[k] {
            bound = bound.min(filled[b].smallest() - 1);
        }
        if bound == 0 {
            return;
        }
        for mask in 1u16..(1u16 << bound) {
            filled.push(EntrySet(mask));
            rec(k + 1, order, left, below, n, flagged, filled, shape, visit);
            filled.pop();
        }
    }

    let mut filled = Vec::with_capacity(order.len());
    rec(0, &order, &left, &below, n, flagged, &mut filled, shape, visit);
}

/// All flagged set-valued tableaux of shape `d`.
pub fn enumerate_fsvt(d: &Diagram) -> Vec<SetValuedTableau> {
    let mut out = Vec::new();
    for_each_fsvt(d, |t| out.push(t.clone()));
    out.sort();
    out
}

/// Streams the flagged set-valued tableaux of shape `d`.
pub fn for_each_fsvt<F: FnMut(&SetValuedTableau)>(d: &Diagram, mut f: F) {
    enumerate_fillings(d, true, &mut f);
}

/// All fillings by subsets of `[n]` satisfying only the row and column
/// conditions.
pub fn enumerate_set_valued(d: &Diagram) -> Vec<SetValuedTableau> {
    let mut out = Vec::new();
    enumerate_fillings(d, false, &mut |t| out.push(t.clone()));
    out.sort();
    out
}

fn signed_sum<'a, I>(n: usize, base: usize, tableaux: I) -> IntPolynomial
where
    I: IntoIterator<Item = &'a SetValuedTableau>,
{
    let mut counts: HashMap<Vec<u32>, i64> = HashMap::new();
    for t in tableaux {
        let sign = if (t.size() + base).is_multiple_of(2) { 1 } else { -1 };
        *counts.entry(t.weight().parts().to_vec()).or_default() += sign;
    }
    IntPolynomial::from_terms(n, counts.into_iter().map(|(e, c)| (e, BigInt::from(c)))).expect("weight length")
}

fn require_321_avoiding(w: &Permutation) -> Result<()> {
    if w.is_321_avoiding() {
        Ok(())
    } else {
        Err(Error::Not321Avoiding(w.to_string()))
    }
}

/// `Σ_{T ∈ FSVT(D(w))} (−1)^{#T − ℓ(w)} x^{wt(T)}`, for 321-avoiding `w`.
pub fn grothendieck_via_fsvt(w: &Permutation) -> Result<IntPolynomial> {
    require_321_avoiding(w)?;
    let d = Diagram::rothe(w)?;
    Ok(signed_sum(w.n(), w.length(), &enumerate_fsvt(&d)))
}

fn require_key_shape(alpha: &WeakComposition) -> Result<Diagram> {
    if !alpha.nonzero_parts_weakly_increasing() {
        return Err(Error::NotWeaklyIncreasing(alpha.to_string()));
    }
    Diagram::key(alpha)
}

/// Signed FSVT sum over `D(α)`; needs the nonzero parts of `α` weakly
/// increasing.
pub fn lascoux_via_fsvt(alpha: &WeakComposition) -> Result<IntPolynomial> {
    let d = require_key_shape(alpha)?;
    Ok(signed_sum(alpha.len(), alpha.size() as usize, &enumerate_fsvt(&d)))
}

/// Signed sum over set-valued key tableaux of `α`.
pub fn lascoux_via_svkt(alpha: &WeakComposition) -> Result<IntPolynomial> {
    let d = require_key_shape(alpha)?;
    let svkt: Vec<SetValuedTableau> = enumerate_set_valued(&d)
        .into_iter()
        .filter(|t| is_svkt(t, alpha))
        .collect();
    Ok(signed_sum(alpha.len(), alpha.size() as usize, &svkt))
}

/// Row counts of the SW hook closure of `D(w)` and of `D(w)`.
pub fn alpha_beta(w: &Permutation) -> Result<(WeakComposition, WeakComposition)> {
    let d = Diagram::rothe(w)?;
    Ok((d.sw_hook_closure().weight(), d.weight()))
}

/// Extends `T` to the SW hook closure of `D(w)` by `{r}` in each new cell of
/// row `r`.
pub fn phi(t: &SetValuedTableau, w: &Permutation) -> Result<SetValuedTableau> {
    require_321_avoiding(w)?;
    let d = Diagram::rothe(w)?;
    if *t.shape() != d {
        return Err(Error::MalformedTableau(format!("shape is not D({w})")));
    }
    let closure = d.sw_hook_closure();
    let entries = closure
        .cells()
        .into_iter()
        .map(|c| (c, t.get(c).unwrap_or_else(|| EntrySet::singleton(c.row))));
    SetValuedTableau::new(closure, entries)
}

/// Which columns of the original grid survive compaction, in order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnMap {
    pub n: usize,
    pub kept: Vec<usize>,
}

impl ColumnMap {
    pub fn of(d: &Diagram) -> Self {
        Self {
            n: d.grid_size(),
            kept: d.nonempty_columns(),
        }
    }

    /// Original column of compacted column `c`.
    pub fn expand(&self, c: usize) -> Option<usize> {
        self.kept.get(c.checked_sub(1)?).copied()
    }
}

fn map_columns(t: &SetValuedTableau, shape: Diagram, f: impl Fn(usize) -> Option<usize>) -> Result<SetValuedTableau> {
    let entries = t
        .entries()
        .map(|(c, s)| {
            f(c.col)
                .map(|col| (Cell::new(c.row, col), s))
                .ok_or_else(|| Error::MalformedTableau(format!("column {} has no image", c.col)))
        })
        .collect::<Result<Vec<_>>>()?;
    SetValuedTableau::new(shape, entries)
}

/// Deletes the empty columns of the shape, returning the compacted tableau
/// and the column map needed to undo it.
pub fn rho(t: &SetValuedTableau) -> Result<(SetValuedTableau, ColumnMap)> {
    let map = ColumnMap::of(t.shape());
    let shape = t.shape().compact_columns(&map.kept);
    let compacted = map_columns(t, shape, |c| map.kept.iter().position(|&k| k == c).map(|i| i + 1))?;
    Ok((compacted, map))
}

pub fn rho_inverse(t: &SetValuedTableau, map: &ColumnMap) -> Result<SetValuedTableau> {
    if t.grid_size() != map.n {
        return Err(Error::SizeMismatch {
            expected: map.n,
            got: t.grid_size(),
        });
    }
    let shape = t.shape().expand_columns(&map.kept)?;
    map_columns(t, shape, |c| map.expand(c))
}

fn key_composition(shape: &Diagram) -> Result<WeakComposition> {
    let alpha = shape.weight();
    if Diagram::key(&alpha)? != *shape {
        return Err(Error::MalformedTableau("shape is not a key diagram".into()));
    }
    if !alpha.nonzero_parts_weakly_increasing() {
        return Err(Error::NotWeaklyIncreasing(alpha.to_string()));
    }
    Ok(alpha)
}

/// The left key `K_−(T)` of a set-valued tableau on `D(α)`, `α` with weakly
/// increasing nonzero parts.
pub fn left_key(t: &SetValuedTableau) -> Result<Tableau> {
    key_composition(t.shape())?;
    t.check_row_column().map_err(Error::MalformedTableau)?;
    let m = t.max_tableau()?;
    let n = t.grid_size();
    let columns: Vec<Vec<usize>> = (1..=n).map(|c| m.column(c)).collect();
    let mut entries = Vec::new();
    for k in 1..=n {
        let m_k = columns[k - 1].len();
        if m_k == 0 {
            continue;
        }
        // working copy of the k leftmost columns, values increasing downward
        let mut work: Vec<Vec<usize>> = columns[..k].to_vec();
        let mut chosen = Vec::with_capacity(m_k);
        for _ in 0..m_k {
            let mut c = *work[k - 1]
                .last()
                .ok_or_else(|| Error::MalformedTableau(format!("column {k} exhausted")))?;
            work[k - 1].pop();
            for col in (0..k - 1).rev() {
                let pos = work[col]
                    .iter()
                    .position(|&v| v >= c)
                    .ok_or_else(|| Error::MalformedTableau(format!("no entry ≥ {c} in column {}", col + 1)))?;
                c = work[col].remove(pos);
            }
            chosen.push(c);
        }
        chosen.sort_unstable();
        for (r, v) in t.shape().column(k).into_iter().zip(chosen) {
            entries.push((Cell::new(r, k), v));
        }
    }
    Tableau::new(*t.shape(), entries)
}

/// Whether `t` is a set-valued key tableau for `α`.
pub fn is_svkt(t: &SetValuedTableau, alpha: &WeakComposition) -> bool {
    let Ok(shape) = require_key_shape(alpha) else {
        return false;
    };
    if *t.shape() != shape || t.check_row_column().is_err() {
        return false;
    }
    match left_key(t) {
        Ok(k) => k.entries().all(|(c, v)| v <= c.row),
        Err(_) => false,
    }
}

/// Sends an FSVT on `D(α)` to a labeled diagram in the K-Kohnert closure of
/// `D(α)`.
pub fn phi_alpha(t: &SetValuedTableau) -> Result<LabeledDiagram> {
    key_composition(t.shape())?;
    let enc = TableauPairEncoding::encode(t)?;
    let n = t.grid_size();
    let mut s = enc.o;
    for j in 1..=n {
        for i in enc.g.column(j).into_iter().rev() {
            let target = (i..=n)
                .find(|&r| s.contains(Cell::new(r, j)))
                .ok_or_else(|| Error::MalformedTableau(format!("no box at or below ({i},{j})")))?;
            s.remove(Cell::new(target, j));
            s.insert(Cell::new(i, j))?;
        }
    }
    let all = enc.o.union(&enc.g)?;
    let ghosts = all.difference(&s)?;
    LabeledDiagram::from_cells(
        n,
        s.cells()
            .into_iter()
            .map(|c| (c, Label::Solid))
            .chain(ghosts.cells().into_iter().map(|c| (c, Label::Ghost))),
    )
}

/// Inverse of [`phi_alpha`], returning the tableau on `D(α)`.
pub fn phi_alpha_inverse(d: &LabeledDiagram, alpha: &WeakComposition) -> Result<SetValuedTableau> {
    let shape = require_key_shape(alpha)?;
    let n = d.grid_size();
    if shape.grid_size() != n {
        return Err(Error::SizeMismatch {
            expected: shape.grid_size(),
            got: n,
        });
    }
    let ghosts = d.ghosts();
    let mut s = d.solid();
    for j in (1..=n).rev() {
        for i in ghosts.column(j) {
            let target = (1..=i)
                .rev()
                .find(|&r| s.contains(Cell::new(r, j)))
                .ok_or_else(|| Error::MalformedTableau(format!("no box at or above ({i},{j})")))?;
            s.remove(Cell::new(target, j));
            s.insert(Cell::new(i, j))?;
        }
    }
    let g = d.support().difference(&s)?;
    TableauPairEncoding { o: s, g }.decode(&shape)
}

/// Re-inserts the empty columns and deletes the boxes of the closure that are
/// not in `D(w)`; those must be present and solid.
pub fn psi(d: &LabeledDiagram, w: &Permutation, map: &ColumnMap) -> Result<LabeledDiagram> {
    let rothe = Diagram::rothe(w)?;
    let closure = rothe.sw_hook_closure();
    let extra = closure.difference(&rothe)?;
    let mut cells = Vec::with_capacity(d.len());
    for (c, label) in d.cells() {
        let col = map
            .expand(c.col)
            .ok_or_else(|| Error::MalformedTableau(format!("column {} has no image", c.col)))?;
        cells.push((Cell::new(c.row, col), label));
    }
    let expanded = LabeledDiagram::from_cells(d.grid_size(), cells)?;
    for c in extra.cells() {
        if expanded.label(c) != Some(Label::Solid) {
            return Err(Error::MalformedTableau(format!(
                "closure box ({},{}) is not a solid box",
                c.row, c.col
            )));
        }
    }
    LabeledDiagram::from_cells(
        d.grid_size(),
        expanded.cells().into_iter().filter(|(c, _)| !extra.contains(*c)),
    )
}

/// Every intermediate value of `f = Ψ ∘ Φ_{α_w} ∘ ρ_w ∘ φ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BijectionTrace {
    pub input: SetValuedTableau,
    pub alpha: WeakComposition,
    pub beta: WeakComposition,
    pub phi: SetValuedTableau,
    pub rho: SetValuedTableau,
    pub columns: ColumnMap,
    pub encoding: TableauPairEncoding,
    pub phi_alpha: LabeledDiagram,
    pub result: LabeledDiagram,
}

pub fn bijection_f_traced(w: &Permutation, t: &SetValuedTableau) -> Result<BijectionTrace> {
    require_321_avoiding(w)?;
    let (alpha, beta) = alpha_beta(w)?;
    let extended = phi(t, w)?;
    let (compacted, columns) = rho(&extended)?;
    let encoding = TableauPairEncoding::encode(&compacted)?;
    let labeled = phi_alpha(&compacted)?;
    let result = psi(&labeled, w, &columns)?;
    Ok(BijectionTrace {
        input: t.clone(),
        alpha,
        beta,
        phi: extended,
        rho: compacted,
        columns,
        encoding,
        phi_alpha: labeled,
        result,
    })
}

/// `f(T)` for `T ∈ FSVT(D(w))`.
pub fn bijection_f(w: &Permutation, t: &SetValuedTableau) -> Result<LabeledDiagram> {
    Ok(bijection_f_traced(w, t)?.result)
}

/// `f` on all of `FSVT(D(w))`, in tableau order.
pub fn bijection_map(w: &Permutation) -> Result<Vec<(SetValuedTableau, LabeledDiagram)>> {
    require_321_avoiding(w)?;
    let d = Diagram::rothe(w)?;
    enumerate_fsvt(&d)
        .into_iter()
        .map(|t| bijection_f(w, &t).map(|img| (t, img)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::kohnert::{closure, Ruleset};
    use crate::poly;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn comp(s: &str) -> WeakComposition {
        s.parse().unwrap()
    }

    fn example_t() -> SetValuedTableau {
        fixtures::bijection_example_tableau()
    }

    fn labeled(rows: &[&str], n: usize) -> LabeledDiagram {
        let mut text = String::new();
        for r in 0..n {
            let row = rows.get(r).copied().unwrap_or("");
            text.push_str(&format!("{row:.<n$}\n"));
        }
        LabeledDiagram::parse_text(&text).unwrap()
    }

    #[test]
    fn entry_sets() {
        let s = EntrySet::new([2, 4, 3]).unwrap();
        assert_eq!((s.smallest(), s.largest(), s.len()), (2, 4, 3));
        assert_eq!(s.to_string(), "432");
        assert_eq!(EntrySet::new([10, 1]).unwrap().to_string(), "10,1");
        assert_eq!(EntrySet::parse_token("10,1").unwrap(), EntrySet::new([1, 10]).unwrap());
        assert!(EntrySet::new([]).is_err());
        assert!(EntrySet::new([0]).is_err());
    }

    #[test]
    fn small_fsvt_enumerations() {
        let one = Diagram::from_cells(3, [(1, 1)]).unwrap();
        let all = enumerate_fsvt(&one);
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].get(Cell::new(1, 1)), Some(EntrySet::singleton(1)));
        let col = Diagram::from_cells(3, [(1, 1), (2, 1)]).unwrap();
        let all = enumerate_fsvt(&col);
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].get(Cell::new(2, 1)), Some(EntrySet::singleton(2)));
    }

    fn naive_fsvt(d: &Diagram) -> Vec<SetValuedTableau> {
        let n = d.grid_size();
        let cells = d.cells();
        let mut out = Vec::new();
        let subsets = (1u16 << n) - 1;
        let total = (subsets as u64).pow(cells.len() as u32);
        for mut code in 0..total {
            let mut entries = Vec::new();
            for &c in &cells {
                entries.push((c, EntrySet((code % subsets as u64) as u16 + 1)));
                code /= subsets as u64;
            }
            let t = SetValuedTableau::new(*d, entries).unwrap();
            let ok = t.entries().all(|(c1, s1)| {
                s1.largest() <= c1.row
                    && t.entries().all(|(c2, s2)| {
                        (c1.row != c2.row || c2.col <= c1.col || s1.smallest() >= s2.largest())
                            && (c1.col != c2.col || c2.row <= c1.row || s1.largest() < s2.smallest())
                    })
            });
            if ok {
                out.push(t);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn fsvt_matches_naive_filter() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (n, max_size) in [(3, 5), (4, 3)] {
            let grid: Vec<(usize, usize)> = (1..=n).flat_map(|r| (1..=n).map(move |c| (r, c))).collect();
            for size in 0..=max_size {
                let cells: Vec<_> = grid.choose_multiple(&mut rng, size).copied().collect();
                let d = Diagram::from_cells(n, cells).unwrap();
                assert_eq!(enumerate_fsvt(&d), naive_fsvt(&d), "{}", d.to_text());
            }
        }
        let six = Diagram::from_cells(3, [(1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (3, 3)]).unwrap();
        assert_eq!(enumerate_fsvt(&six), naive_fsvt(&six));
    }

    #[test]
    fn fsvt_formula_matches_oracle() {
        assert_eq!(
            grothendieck_via_fsvt(&Permutation::identity(4)).unwrap(),
            IntPolynomial::one(4)
        );
        let mut count = 0;
        for n in 1..=5 {
            for w in Permutation::all(n).filter(|w| w.is_321_avoiding()) {
                assert_eq!(grothendieck_via_fsvt(&w).unwrap(), poly::grothendieck(&w), "{w}");
                count += usize::from(n == 4);
            }
        }
        assert_eq!(count, 14);
        assert!(matches!(
            grothendieck_via_fsvt(&perm("321")),
            Err(Error::Not321Avoiding(_))
        ));
        assert!(matches!(
            grothendieck_via_fsvt(&perm("12365847")),
            Err(Error::Not321Avoiding(_))
        ));
    }

    #[test]
    fn fsvt_sum_fails_outside_321_avoiding() {
        let w = perm("12365847");
        let d = Diagram::rothe(&w).unwrap();
        let sum = signed_sum(8, w.length(), &enumerate_fsvt(&d));
        let gamma = comp("3,3,3,2,0,0,0,0");
        assert_eq!(sum.coefficient(&gamma), BigInt::from(0));
        assert_eq!(poly::grothendieck(&w).coefficient(&gamma), BigInt::from(3));
    }

    #[test]
    fn alpha_beta_examples() {
        let (a, b) = alpha_beta(&perm("451829367")).unwrap();
        assert_eq!(a, comp("3,3,0,5,0,5,0,0,0"));
        assert_eq!(b, comp("3,3,0,4,0,3,0,0,0"));
        let (_, b) = alpha_beta(&perm("12365847")).unwrap();
        assert_eq!(b, comp("0,0,0,2,1,2,0,0"));
        let (a, b) = alpha_beta(&Permutation::identity(5)).unwrap();
        assert_eq!((a.size(), b.size()), (0, 0));
        for w in Permutation::all(6).filter(|w| w.is_321_avoiding()) {
            let (a, b) = alpha_beta(&w).unwrap();
            assert!(a.nonzero_parts_weakly_increasing());
            assert!(a.checked_sub(&b).unwrap().nonzero_parts_weakly_increasing());
        }
    }

    #[test]
    fn example_tableau_is_fsvt() {
        let t = example_t();
        assert_eq!(*t.shape(), Diagram::rothe(&perm("451829367")).unwrap());
        assert!(t.is_fsvt());
    }

    #[test]
    fn phi_and_rho_example() {
        let w = perm("451829367");
        let t = example_t();
        let p = phi(&t, &w).unwrap();
        for (cell, v) in [((4, 1), 4), ((6, 1), 6), ((6, 2), 6)] {
            assert_eq!(p.get(cell.into()), Some(EntrySet::singleton(v)));
        }
        assert_eq!(p.shape().len(), t.shape().len() + 3);
        assert!(p.is_fsvt());
        let (r, map) = rho(&p).unwrap();
        assert_eq!(map.kept, vec![1, 2, 3, 6, 7]);
        assert_eq!(*r.shape(), Diagram::key(&comp("3,3,0,5,0,5,0,0,0")).unwrap());
        assert_eq!(r.get(Cell::new(4, 4)), Some(EntrySet::new([4, 3, 2]).unwrap()));
        assert_eq!(r.get(Cell::new(6, 5)), Some(EntrySet::new([5, 4, 3]).unwrap()));
        assert_eq!(rho_inverse(&r, &map).unwrap(), p);
    }

    #[test]
    fn phi_is_identity_on_closed_shapes() {
        let w = perm("1342");
        let d = Diagram::rothe(&w).unwrap();
        assert_eq!(d.sw_hook_closure(), d);
        for t in enumerate_fsvt(&d) {
            assert_eq!(phi(&t, &w).unwrap(), t);
        }
    }

    #[test]
    fn phi_weight_identity_s4() {
        for w in Permutation::all(4).filter(|w| w.is_321_avoiding()) {
            let (a, b) = alpha_beta(&w).unwrap();
            let shift = a.checked_sub(&b).unwrap();
            for t in enumerate_fsvt(&Diagram::rothe(&w).unwrap()) {
                let p = phi(&t, &w).unwrap();
                assert!(p.is_fsvt());
                assert_eq!(p.weight().checked_sub(&t.weight()).unwrap(), shift);
            }
        }
    }

    #[test]
    fn rho_roundtrip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let perms: Vec<Permutation> = Permutation::all(6).filter(|w| w.is_321_avoiding()).collect();
        for _ in 0..100 {
            let w = perms.choose(&mut rng).unwrap();
            let all = enumerate_fsvt(&Diagram::rothe(w).unwrap());
            let t = all.choose(&mut rng).unwrap();
            let p = phi(t, w).unwrap();
            let (r, map) = rho(&p).unwrap();
            let (alpha, _) = alpha_beta(w).unwrap();
            assert_eq!(*r.shape(), Diagram::key(&alpha).unwrap());
            assert_eq!(rho_inverse(&r, &map).unwrap(), p);
        }
    }

    #[test]
    fn left_key_example() {
        let t = fixtures::left_key_example_tableau();
        assert_eq!(*t.shape(), Diagram::key(&comp("2,3,0,4,0,4")).unwrap());
        let m = t.max_tableau().unwrap();
        let m_k: Vec<usize> = (1..=4).map(|c| m.column(c).len()).collect();
        assert_eq!(m_k, vec![4, 4, 3, 2]);
        let k = left_key(&t).unwrap();
        assert_eq!(k, fixtures::left_key_example_key());
        assert_eq!(k.column(3), vec![1, 4, 6]);
        assert_eq!(k.column(4), vec![4, 6]);
        assert!(t.is_fsvt());
        assert!(is_svkt(&t, &comp("2,3,0,4,0,4")));
    }

    #[test]
    fn left_key_of_single_column() {
        let t = SetValuedTableau::from_triples(4, [(2, 1, vec![1]), (3, 1, vec![3]), (4, 1, vec![4])]).unwrap();
        let k = left_key(&t).unwrap();
        assert_eq!(k, t.max_tableau().unwrap());
        let bad = SetValuedTableau::from_triples(3, [(1, 1, vec![1]), (1, 2, vec![1]), (2, 1, vec![2])]).unwrap();
        assert!(matches!(left_key(&bad), Err(Error::NotWeaklyIncreasing(_))));
    }

    #[test]
    fn left_key_properties() {
        for n in 1..=4 {
            for alpha in WeakComposition::all_bounded(n, 3.min(n as u32))
                .into_iter()
                .filter(|a| a.nonzero_parts_weakly_increasing())
            {
                let d = Diagram::key(&alpha).unwrap();
                for t in enumerate_set_valued(&d) {
                    let k = left_key(&t).unwrap();
                    let m = t.max_tableau().unwrap();
                    for (c, v) in k.entries() {
                        assert!(v >= m.get(c).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn svkt_equals_fsvt_and_lascoux() {
        for n in 1..=4 {
            for alpha in WeakComposition::all_bounded(n, 3.min(n as u32))
                .into_iter()
                .filter(|a| a.nonzero_parts_weakly_increasing())
            {
                let d = Diagram::key(&alpha).unwrap();
                let fsvt: HashSet<_> = enumerate_fsvt(&d).into_iter().collect();
                let svkt: HashSet<_> = enumerate_set_valued(&d)
                    .into_iter()
                    .filter(|t| is_svkt(t, &alpha))
                    .collect();
                assert_eq!(fsvt, svkt, "{alpha}");
                let l = poly::lascoux(&alpha);
                assert_eq!(lascoux_via_svkt(&alpha).unwrap(), l, "{alpha}");
                assert_eq!(lascoux_via_fsvt(&alpha).unwrap(), l, "{alpha}");
            }
        }
        let t = SetValuedTableau::from_triples(2, [(2, 1, vec![1]), (2, 2, vec![2])]).unwrap();
        assert!(!is_svkt(&t, &comp("0,2")));
    }

    fn example_u_image() -> LabeledDiagram {
        labeled(&["OOO.O", "OOOOG", "...GO", "OOOGG", "..OOG", "OOG.."], 9)
    }

    #[test]
    fn phi_alpha_example() {
        let w = perm("451829367");
        let (u, _) = rho(&phi(&example_t(), &w).unwrap()).unwrap();
        let enc = TableauPairEncoding::encode(&u).unwrap();
        let pair = labeled(&["OOO.G", "OOOGO", "...GG", "OOOOG", "..GOO", "OOO.."], 9);
        assert_eq!(enc.o, pair.solid());
        assert_eq!(enc.g, pair.ghosts());
        assert_eq!(enc.decode(u.shape()).unwrap(), u);
        let image = phi_alpha(&u).unwrap();
        assert_eq!(image, example_u_image());
        assert_eq!(image.weight(), u.weight());
        let (alpha, _) = alpha_beta(&w).unwrap();
        assert_eq!(phi_alpha_inverse(&image, &alpha).unwrap(), u);
    }

    #[test]
    fn phi_alpha_on_singletons_is_encoding() {
        let alpha = comp("0,1,2");
        for t in enumerate_fsvt(&Diagram::key(&alpha).unwrap()) {
            if t.size() == 3 {
                let img = phi_alpha(&t).unwrap();
                assert!(img.ghosts().is_empty());
                assert_eq!(img.solid(), TableauPairEncoding::encode(&t).unwrap().o);
            }
        }
    }

    #[test]
    fn phi_alpha_roundtrip_and_image() {
        for alpha in [comp("0,2,2"), comp("0,1,2"), comp("1,1,2,2"), comp("0,1,3,3")] {
            let d = Diagram::key(&alpha).unwrap();
            let all = enumerate_fsvt(&d);
            let image: HashSet<_> = all
                .iter()
                .map(|t| {
                    let img = phi_alpha(t).unwrap();
                    assert_eq!(img.weight(), t.weight());
                    assert_eq!(&phi_alpha_inverse(&img, &alpha).unwrap(), t);
                    img
                })
                .collect();
            assert_eq!(image.len(), all.len());
            assert_eq!(image, closure(&d, Ruleset::RossYong).as_set(), "{alpha}");
        }
    }

    #[test]
    fn phi_alpha_maps_s2_onto_s3() {
        for w in Permutation::all(4).filter(|w| w.is_321_avoiding()) {
            let (alpha, beta) = alpha_beta(&w).unwrap();
            let delta = alpha.checked_sub(&beta).unwrap();
            let forced = |i: usize, j: usize| j <= delta.part(i) as usize;
            let d = Diagram::key(&alpha).unwrap();
            let s2: Vec<_> = enumerate_fsvt(&d)
                .into_iter()
                .filter(|t| {
                    t.entries()
                        .all(|(c, s)| !forced(c.row, c.col) || s == EntrySet::singleton(c.row))
                })
                .collect();
            let s3: HashSet<_> = closure(&d, Ruleset::RossYong)
                .states()
                .iter()
                .filter(|x| {
                    d.cells()
                        .into_iter()
                        .filter(|c| forced(c.row, c.col))
                        .all(|c| x.label(c) == Some(Label::Solid))
                })
                .copied()
                .collect();
            let image: HashSet<_> = s2.iter().map(|t| phi_alpha(t).unwrap()).collect();
            assert_eq!(image, s3, "{w}");
        }
    }

    #[test]
    fn bijection_example() {
        let w = perm("451829367");
        let trace = bijection_f_traced(&w, &example_t()).unwrap();
        assert_eq!(trace.phi_alpha, example_u_image());
        assert_eq!(trace.result, fixtures::bijection_example_image());
        assert_eq!(trace.result.weight(), example_t().weight());
        let kkoh = closure(&Diagram::rothe(&w).unwrap(), Ruleset::RossYong);
        assert!(kkoh.contains(&trace.result));
    }

    #[test]
    fn bijection_on_identity() {
        let w = Permutation::identity(4);
        let map = bijection_map(&w).unwrap();
        assert_eq!(map.len(), 1);
        assert!(map[0].1.is_empty());
        assert!(bijection_map(&perm("321")).is_err());
    }

    #[test]
    fn bijection_is_weight_preserving_onto_kkoh_s5() {
        for w in Permutation::all(5).filter(|w| w.is_321_avoiding()) {
            let map = bijection_map(&w).unwrap();
            let image: HashSet<_> = map.iter().map(|(_, d)| *d).collect();
            assert_eq!(image.len(), map.len(), "{w} not injective");
            for (t, d) in &map {
                assert_eq!(t.weight(), d.weight());
            }
            assert_eq!(
                image,
                closure(&Diagram::rothe(&w).unwrap(), Ruleset::RossYong).as_set(),
                "{w}"
            );
        }
    }

    #[test]
    fn text_and_json_roundtrip() {
        let t = example_t();
        assert_eq!(SetValuedTableau::parse_text(&t.to_text()).unwrap(), t);
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(serde_json::from_str::<SetValuedTableau>(&json).unwrap(), t);
        assert!(t.to_text().starts_with("1 1 1 . . . . . .\n"));
        assert!(SetValuedTableau::parse_text("1 .\n").is_err());
    }
}
