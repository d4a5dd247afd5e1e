//! Pipe dreams: reading words, Demazure products, and weight-constrained
//! enumeration of `Pipes(w)`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::diagram::{grid_lines, Cell, Diagram, WeakComposition};
use crate::error::{Error, Result};
use crate::perm::{bruhat_le_raw, Permutation};
use crate::poly::IntPolynomial;

/// A word in the simple transpositions `s_1, s_2, ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HeckeWord(pub Vec<u8>);

impl HeckeWord {
    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Fold of the 0-Hecke product from the identity in `S_ambient_n`.
    pub fn demazure_product(&self, ambient_n: usize) -> Result<Permutation> {
        demazure_product(self, ambient_n)
    }

    /// True when the ordinary product has length equal to the word length.
    pub fn is_reduced(&self, ambient_n: usize) -> Result<bool> {
        let mut w: Vec<u8> = (1..=ambient_n as u8).collect();
        for &i in &self.0 {
            let i = check_letter(i, ambient_n)?;
            if w[i - 1] > w[i] {
                return Ok(false);
            }
            w.swap(i - 1, i);
        }
        Ok(true)
    }
}

impl fmt::Display for HeckeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&l| l <= 9) {
            for l in &self.0 {
                write!(f, "{l}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

fn check_letter(i: u8, ambient_n: usize) -> Result<usize> {
    let i = i as usize;
    if i == 0 || i >= ambient_n {
        return Err(Error::IndexOutOfRange {
            index: i,
            max: ambient_n.saturating_sub(1),
        });
    }
    Ok(i)
}

pub fn demazure_product(word: &HeckeWord, ambient_n: usize) -> Result<Permutation> {
    let mut w: Vec<usize> = (1..=ambient_n).collect();
    for &i in word.letters() {
        let i = check_letter(i, ambient_n)?;
        if w[i - 1] < w[i] {
            w.swap(i - 1, i);
        }
    }
    Permutation::new(w)
}

/// A pipe dream: the set of crossing tiles in the `n × n` grid. The tile at
/// `(i, k)` carries the label `i + k − 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PipeDream {
    crossings: Diagram,
}

impl PipeDream {
    pub fn new(crossings: Diagram) -> Self {
        Self { crossings }
    }

    pub fn crossings(&self) -> &Diagram {
        &self.crossings
    }

    pub fn grid_size(&self) -> usize {
        self.crossings.grid_size()
    }

    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    pub fn weight(&self) -> WeakComposition {
        self.crossings.weight()
    }

    /// Labels read right to left along each row, top row first.
    pub fn word(&self) -> HeckeWord {
        let n = self.grid_size();
        let mut letters = Vec::with_capacity(self.len());
        for r in 1..=n {
            for c in (1..=n).rev() {
                if self.crossings.contains(Cell::new(r, c)) {
                    letters.push((r + c - 1) as u8);
                }
            }
        }
        HeckeWord(letters)
    }

    /// `δ(P)`, computed in `S_{2n}` so that every label is a valid letter,
    /// then restricted back to `S_n` when it fixes everything above `n`.
    pub fn demazure(&self) -> Permutation {
        let n = self.grid_size();
        let big = demazure_product(&self.word(), 2 * n).expect("labels below 2n");
        let e = big.entries();
        if e[n..].iter().enumerate().all(|(k, &v)| v == n + k + 1) {
            Permutation::new(e[..n].to_vec()).expect("prefix is a permutation")
        } else {
            big
        }
    }

    pub fn to_text(&self) -> String {
        let n = self.grid_size();
        let mut s = String::with_capacity(n * (n + 1));
        for r in 1..=n {
            for c in 1..=n {
                s.push(if self.crossings.contains(Cell::new(r, c)) {
                    '+'
                } else {
                    '.'
                });
            }
            s.push('\n');
        }
        s
    }

    pub fn parse_text(s: &str) -> Result<Self> {
        let lines = grid_lines(s)?;
        let mut d = Diagram::empty(lines.len())?;
        for (r, line) in lines.iter().enumerate() {
            for (c, ch) in line.chars().enumerate() {
                match ch {
                    '+' => d.insert(Cell::new(r + 1, c + 1))?,
                    '.' => {}
                    other => return Err(Error::Parse(format!("unexpected character {other:?}"))),
                }
            }
        }
        Ok(Self::new(d))
    }
}

/// Which tiles may carry crossings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum GridMode {
    /// Only `(i, k)` with `i + k ≤ n`, i.e. labels below `n`.
    #[default]
    Staircase,
    /// All of `[n] × [n]`; products are taken in `S_{2n}`.
    Full,
}

struct Search<'a> {
    n: usize,
    target: Vec<u8>,
    target_len: usize,
    /// Candidate tiles in reading order.
    cells: Vec<Cell>,
    /// Number of candidate tiles in each row at or after a given index.
    row_remaining: Vec<usize>,
    weight: Option<&'a [u32]>,
    max_size: usize,
}

struct State {
    perm: Vec<u8>,
    len: usize,
    row_counts: Vec<u32>,
    chosen: u128,
    size: usize,
}

impl<'a> Search<'a> {
    fn new(w: &Permutation, mode: GridMode, weight: Option<&'a [u32]>, max_size: usize) -> Result<Self> {
        let n = w.n();
        crate::diagram::check_grid(n)?;
        if let Some(g) = weight {
            if g.len() != n {
                return Err(Error::SizeMismatch {
                    expected: n,
                    got: g.len(),
                });
            }
        }
        let ambient = match mode {
            GridMode::Staircase => n,
            GridMode::Full => 2 * n,
        };
        let mut cells = Vec::new();
        for r in 1..=n {
            let last_col = match mode {
                GridMode::Staircase => n - r,
                GridMode::Full => n,
            };
            for c in (1..=last_col).rev() {
                cells.push(Cell::new(r, c));
            }
        }
        let row_remaining = (0..cells.len())
            .map(|k| cells[k..].iter().take_while(|c| c.row == cells[k].row).count())
            .collect();
        let target = w.embed(ambient)?;
        Ok(Self {
            n,
            target_len: target.length(),
            target: target.raw().to_vec(),
            cells,
            row_remaining,
            weight,
            max_size,
        })
    }

    /// Upper bound on crossings still placeable from index `k`.
    fn capacity(&self, k: usize, st: &State) -> usize {
        match self.weight {
            Some(g) => {
                let mut need = 0usize;
                let row = self.cells.get(k).map(|c| c.row).unwrap_or(self.n + 1);
                for r in row..=self.n {
                    need += (g[r - 1] - st.row_counts[r - 1]) as usize;
                }
                need
            }
            None => (self.cells.len() - k).min(self.max_size - st.size),
        }
    }

    fn run(&self, visit: &mut impl FnMut(u128)) {
        let mut st = State {
            perm: (1..=self.target.len() as u8).collect(),
            len: 0,
            row_counts: vec![0; self.n],
            chosen: 0,
            size: 0,
        };
        if let Some(g) = self.weight {
            // Rows that demand more tiles than exist are infeasible.
            for r in 1..=self.n {
                let avail = self.cells.iter().filter(|c| c.row == r).count();
                if g[r - 1] as usize > avail {
                    return;
                }
            }
        }
        self.step(0, &mut st, visit);
    }

    fn step(&self, k: usize, st: &mut State, visit: &mut impl FnMut(u128)) {
        if st.len + self.capacity(k, st) < self.target_len {
            return;
        }
        if k == self.cells.len() {
            if st.perm == self.target {
                visit(st.chosen);
            }
            return;
        }
        let cell = self.cells[k];
        let r = cell.row - 1;
        let (may_take, may_skip) = match self.weight {
            Some(g) => {
                let need = (g[r] - st.row_counts[r]) as usize;
                (need > 0, self.row_remaining[k] > need)
            }
            None => (st.size < self.max_size, true),
        };

        if may_take {
            let letter = cell.row + cell.col - 1;
            let swapped = st.perm[letter - 1] < st.perm[letter];
            if swapped {
                st.perm.swap(letter - 1, letter);
            }
            if bruhat_le_raw(&st.perm, &self.target) {
                st.len += swapped as usize;
                st.row_counts[r] += 1;
                st.size += 1;
                let bit = 1u128 << ((cell.row - 1) * self.n + cell.col - 1);
                st.chosen |= bit;
                self.step(k + 1, st, visit);
                st.chosen &= !bit;
                st.size -= 1;
                st.row_counts[r] -= 1;
                st.len -= swapped as usize;
            }
            if swapped {
                st.perm.swap(letter - 1, letter);
            }
        }
        if may_skip {
            self.step(k + 1, st, visit);
        }
    }
}

/// All `P ∈ Pipes(w)` with `wt(P) = γ`, in reading-order DFS order.
pub fn enumerate_pipes_with_weight(w: &Permutation, gamma: &WeakComposition, mode: GridMode) -> Result<Vec<PipeDream>> {
    let search = Search::new(w, mode, Some(gamma.parts()), usize::MAX)?;
    let n = w.n();
    let mut out = Vec::new();
    search.run(&mut |bits| out.push(PipeDream::new(Diagram::from_bits(n, bits))));
    Ok(out)
}

/// `g_{w,γ}`, counted without materializing the pipe dreams.
pub fn count_pipes_with_weight(w: &Permutation, gamma: &WeakComposition) -> Result<u64> {
    let search = Search::new(w, GridMode::Staircase, Some(gamma.parts()), usize::MAX)?;
    let mut count = 0u64;
    search.run(&mut |_| count += 1);
    Ok(count)
}

/// All `P ∈ Pipes(w)` with `#P ≤ max_size`.
pub fn enumerate_pipes(w: &Permutation, max_size: usize, mode: GridMode) -> Result<Vec<PipeDream>> {
    let search = Search::new(w, mode, None, max_size)?;
    let n = w.n();
    let mut out = Vec::new();
    search.run(&mut |bits| out.push(PipeDream::new(Diagram::from_bits(n, bits))));
    Ok(out)
}

/// `Σ (−1)^{#P − ℓ(w)} x^{wt(P)}` over `P ∈ Pipes(w)` with `#P ≤ degree_bound`.
pub fn grothendieck_via_pipes(w: &Permutation, degree_bound: usize) -> Result<IntPolynomial> {
    let n = w.n();
    let search = Search::new(w, GridMode::Staircase, None, degree_bound)?;
    let mut counts: HashMap<Vec<u32>, i64> = HashMap::new();
    search.run(&mut |bits| {
        let d = Diagram::from_bits(n, bits);
        *counts.entry(d.weight().parts().to_vec()).or_default() += 1;
    });
    let l = w.length() as i64;
    IntPolynomial::from_terms(
        n,
        counts.into_iter().map(|(e, c)| {
            let size: i64 = e.iter().map(|&x| x as i64).sum();
            let sign = if (size - l) % 2 == 0 { 1 } else { -1 };
            (e, BigInt::from(sign * c))
        }),
    )
}

/// The reduced slice `#P = ℓ(w)`, which sums to the Schubert polynomial.
pub fn schubert_via_pipes(w: &Permutation) -> Result<IntPolynomial> {
    grothendieck_via_pipes(w, w.length())
}
