//! Permutations in one-line notation, 1-based.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation `w` of `[n]` in one-line notation, `w(i) = entries[i-1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    entries: Vec<u8>,
}

impl Permutation {
    pub fn new(entries: Vec<usize>) -> Result<Self> {
        let n = entries.len();
        if n == 0 || n > u8::MAX as usize {
            return Err(Error::InvalidPermutation(format!("length {n}")));
        }
        let mut seen = vec![false; n + 1];
        for &e in &entries {
            if e == 0 || e > n || seen[e] {
                return Err(Error::InvalidPermutation(format!("{entries:?}")));
            }
            seen[e] = true;
        }
        Ok(Self {
            entries: entries.into_iter().map(|e| e as u8).collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            entries: (1..=n as u8).collect(),
        }
    }

    /// The longest element `n n-1 ... 1`.
    pub fn longest(n: usize) -> Self {
        Self {
            entries: (1..=n as u8).rev().collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    /// `w(i)` for 1-based `i`.
    pub fn at(&self, i: usize) -> usize {
        self.entries[i - 1] as usize
    }

    pub fn entries(&self) -> Vec<usize> {
        self.entries.iter().map(|&e| e as usize).collect()
    }

    pub(crate) fn raw(&self) -> &[u8] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, &e)| e as usize == i + 1)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.n()];
        for (i, &e) in self.entries.iter().enumerate() {
            inv[e as usize - 1] = (i + 1) as u8;
        }
        Self { entries: inv }
    }

    /// Composition `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch {
                expected: self.n(),
                got: other.n(),
            });
        }
        Ok(Self {
            entries: other.entries.iter().map(|&o| self.entries[o as usize - 1]).collect(),
        })
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        let e = &self.entries;
        let mut count = 0;
        for i in 0..e.len() {
            for j in i + 1..e.len() {
                if e[i] > e[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// `w s_i`: swaps the values in positions `i` and `i+1`.
    pub fn times_simple(&self, i: usize) -> Result<Self> {
        if i == 0 || i >= self.n() {
            return Err(Error::IndexOutOfRange {
                index: i,
                max: self.n().saturating_sub(1),
            });
        }
        let mut entries = self.entries.clone();
        entries.swap(i - 1, i);
        Ok(Self { entries })
    }

    pub fn has_ascent(&self, i: usize) -> bool {
        i >= 1 && i < self.n() && self.entries[i - 1] < self.entries[i]
    }

    pub fn ascents(&self) -> impl Iterator<Item = usize> + '_ {
        (1..self.n()).filter(|&i| self.has_ascent(i))
    }

    /// Extends `w ∈ S_n` to `S_m` by fixed points.
    pub fn embed(&self, m: usize) -> Result<Self> {
        if m < self.n() {
            return Err(Error::SizeMismatch {
                expected: self.n(),
                got: m,
            });
        }
        let mut entries = self.entries.clone();
        entries.extend(self.n() as u8 + 1..=m as u8);
        Ok(Self { entries })
    }

    /// True iff some subsequence of `self` is order-isomorphic to `pattern`.
    pub fn contains_pattern(&self, pattern: &Permutation) -> bool {
        let k = pattern.n();
        if k > self.n() {
            return false;
        }
        let mut chosen = Vec::with_capacity(k);
        pattern_search(&self.entries, &pattern.entries, 0, &mut chosen)
    }

    pub fn avoids(&self, pattern: &Permutation) -> bool {
        !self.contains_pattern(pattern)
    }

    pub fn is_321_avoiding(&self) -> bool {
        let mut first_max = 0u8;
        let mut second_max = 0u8;
        // A 321 occurs iff some entry is below an entry that already has a
        // larger entry before it.
        for &e in &self.entries {
            if e < second_max {
                return false;
            }
            if e < first_max {
                second_max = second_max.max(e);
            } else {
                first_max = e;
            }
        }
        true
    }

    pub fn is_vexillary(&self) -> bool {
        self.avoids(&Permutation {
            entries: vec![2, 1, 4, 3],
        })
    }

    /// Bruhat order test through the rank-matrix dominance criterion:
    /// `u ≤ w` iff `#{a ≤ i : u(a) ≥ j} ≤ #{a ≤ i : w(a) ≥ j}` for all `i, j`.
    pub fn bruhat_le(&self, other: &Permutation) -> bool {
        bruhat_le_raw(&self.entries, &other.entries)
    }

    /// Lexicographic rank among all permutations of `[n]`.
    pub fn lex_rank(&self) -> u64 {
        let n = self.n();
        let mut rank = 0u64;
        let mut used = vec![false; n + 1];
        for (i, &e) in self.entries.iter().enumerate() {
            let smaller_unused = (1..e as usize).filter(|&v| !used[v]).count() as u64;
            rank += smaller_unused * factorial(n - 1 - i);
            used[e as usize] = true;
        }
        rank
    }

    pub fn from_lex_rank(n: usize, mut rank: u64) -> Result<Self> {
        if n == 0 || rank >= factorial(n) {
            return Err(Error::InvalidPermutation(format!("rank {rank} for n={n}")));
        }
        let mut remaining: Vec<u8> = (1..=n as u8).collect();
        let mut entries = Vec::with_capacity(n);
        for i in 0..n {
            let f = factorial(n - 1 - i);
            let idx = (rank / f) as usize;
            rank %= f;
            entries.push(remaining.remove(idx));
        }
        Ok(Self { entries })
    }

    /// All permutations of `[n]` in lexicographic order.
    pub fn all(n: usize) -> AllPermutations {
        AllPermutations {
            next: Some((1..=n as u8).collect()),
        }
    }
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

pub(crate) fn bruhat_le_raw(u: &[u8], w: &[u8]) -> bool {
    let n = u.len();
    debug_assert_eq!(n, w.len());
    // Column counts of entries >= j among the first i positions.
    let mut cu = [0i16; 256];
    let mut cw = [0i16; 256];
    for i in 0..n {
        for c in &mut cu[1..=u[i] as usize] {
            *c += 1;
        }
        for c in &mut cw[1..=w[i] as usize] {
            *c += 1;
        }
        for j in 1..=n {
            if cu[j] > cw[j] {
                return false;
            }
        }
    }
    true
}

fn pattern_search(text: &[u8], pattern: &[u8], start: usize, chosen: &mut Vec<u8>) -> bool {
    let k = chosen.len();
    if k == pattern.len() {
        return true;
    }
    if text.len() - start < pattern.len() - k {
        return false;
    }
    for pos in start..text.len() {
        let v = text[pos];
        let consistent = chosen.iter().zip(pattern).all(|(&c, &p)| (c < v) == (p < pattern[k]));
        if consistent {
            chosen.push(v);
            if pattern_search(text, pattern, pos + 1, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

pub struct AllPermutations {
    next: Option<Vec<u8>>,
}

impl Iterator for AllPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        if current.is_empty() {
            return None;
        }
        let mut succ = current.clone();
        // Standard next-permutation step.
        let n = succ.len();
        let mut i = n - 1;
        while i > 0 && succ[i - 1] >= succ[i] {
            i -= 1;
        }
        if i > 0 {
            let mut j = n - 1;
            while succ[j] <= succ[i - 1] {
                j -= 1;
            }
            succ.swap(i - 1, j);
            succ[i..].reverse();
            self.next = Some(succ);
        }
        Some(Permutation { entries: current })
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Vec<usize> {
        p.entries()
    }
}

/// Compact digit strings (`12365847`) for `n ≤ 9`; comma-separated
/// integers otherwise. A digit string of ten or more characters is
/// ambiguous and rejected.
impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let entries: Vec<usize> = if s.contains(',') {
            s.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad permutation entry {t:?}")))
                })
                .collect::<Result<_>>()?
        } else {
            if s.len() > 9 {
                return Err(Error::Parse(format!(
                    "digit string {s:?} is ambiguous for n >= 10; use commas"
                )));
            }
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| Error::Parse(format!("bad permutation digit {c:?}")))
                })
                .collect::<Result<_>>()?
        };
        Permutation::new(entries)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n() <= 9 {
            for e in &self.entries {
                write!(f, "{e}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}
