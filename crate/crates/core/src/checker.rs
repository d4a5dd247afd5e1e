//! Sweeps over symmetric groups (or weak compositions) comparing each
//! combinatorial rule with the operator recursion, plus the pinned
//! counterexamples.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_traits::Signed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagram::{Diagram, WeakComposition};
use crate::error::{Error, Result, MAX_GRID};
use crate::fixtures;
use crate::kohnert::{closure_with_budget, Closure, LabeledDiagram, Ruleset};
use crate::perm::{factorial, Permutation};
use crate::pipedreams::grothendieck_via_pipes;
use crate::poly::{self, IntPolynomial, Oracle};
use crate::tableaux;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConjectureId {
    /// K-Kohnert diagrams of `D(w)` count `g_{w,γ}`.
    #[serde(rename = "RY_3_2")]
    Ry32,
    /// Adding ghost moves, the closure of `D(w)` counts `g_{w,γ}`.
    #[serde(rename = "REVISED_4_2")]
    Revised42,
    /// The relaxed ghost closure never undercounts `g_{w,γ}`.
    #[serde(rename = "BKKOH_BOUND")]
    BkkohBound,
    /// Pipe dreams count the Grothendieck coefficients.
    #[serde(rename = "THM_2_1")]
    Thm21,
    /// Reduced pipe dreams count the Schubert coefficients.
    #[serde(rename = "THM_2_2")]
    Thm22,
    /// Kohnert diagrams of `D(w)` count the Schubert coefficients.
    #[serde(rename = "THM_2_4")]
    Thm24,
    /// K-Kohnert diagrams of `D(α)` count the Lascoux coefficients.
    #[serde(rename = "THM_3_1")]
    Thm31,
    /// The tableau bijection onto K-Kohnert diagrams, 321-avoiding `w`.
    #[serde(rename = "THM_5_1")]
    Thm51,
    /// Flagged set-valued tableaux count `g_{w,γ}`, 321-avoiding `w`.
    #[serde(rename = "THM_5_2")]
    Thm52,
    /// K-Kohnert and ghost closures of `D(α)` coincide.
    #[serde(rename = "PROP_4_3")]
    Prop43,
}

impl ConjectureId {
    pub const ALL: [ConjectureId; 10] = [
        ConjectureId::Ry32,
        ConjectureId::Revised42,
        ConjectureId::BkkohBound,
        ConjectureId::Thm21,
        ConjectureId::Thm22,
        ConjectureId::Thm24,
        ConjectureId::Thm31,
        ConjectureId::Thm51,
        ConjectureId::Thm52,
        ConjectureId::Prop43,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConjectureId::Ry32 => "RY_3_2",
            ConjectureId::Revised42 => "REVISED_4_2",
            ConjectureId::BkkohBound => "BKKOH_BOUND",
            ConjectureId::Thm21 => "THM_2_1",
            ConjectureId::Thm22 => "THM_2_2",
            ConjectureId::Thm24 => "THM_2_4",
            ConjectureId::Thm31 => "THM_3_1",
            ConjectureId::Thm51 => "THM_5_1",
            ConjectureId::Thm52 => "THM_5_2",
            ConjectureId::Prop43 => "PROP_4_3",
        }
    }

    fn domain(self) -> Domain {
        match self {
            ConjectureId::Thm31 | ConjectureId::Prop43 => Domain::Compositions,
            ConjectureId::Thm51 | ConjectureId::Thm52 => Domain::Avoiding321,
            _ => Domain::Permutations,
        }
    }

    /// Whether `got` disagrees with `expected` in the sense this statement
    /// cares about.
    pub fn is_violation(self, expected: u64, got: u64) -> bool {
        match self {
            ConjectureId::BkkohBound => got < expected,
            _ => got != expected,
        }
    }
}

impl fmt::Display for ConjectureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConjectureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_uppercase().replace('-', "_");
        Self::ALL
            .into_iter()
            .find(|c| c.name() == key)
            .ok_or_else(|| Error::Parse(format!("unknown conjecture {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Domain {
    Permutations,
    Avoiding321,
    Compositions,
}

/// What a case is about.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Subject {
    Permutation(Permutation),
    Composition(WeakComposition),
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subject::Permutation(w) => write!(f, "{w}"),
            Subject::Composition(a) => write!(f, "{a}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseResult {
    pub subject: String,
    pub gamma: Option<WeakComposition>,
    pub expected: u64,
    pub got: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CaseResult {
    fn new(subject: &Subject, gamma: Option<WeakComposition>, expected: u64, got: u64) -> Self {
        Self {
            subject: subject.to_string(),
            gamma,
            expected,
            got,
            note: None,
        }
    }

    fn with_note(mut self, note: &str) -> Self {
        self.note = Some(note.to_string());
        self
    }
}

impl fmt::Display for CaseResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.subject)?;
        if let Some(g) = &self.gamma {
            write!(f, " {g}")?;
        }
        if let Some(note) = &self.note {
            write!(f, " [{note}]")?;
        }
        write!(f, ": expected {}, got {}", self.expected, self.got)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sampling {
    Exhaustive,
    Random { k: usize, seed: u64 },
}

impl FromStr for Sampling {
    type Err = Error;

    /// `exhaustive` or `random:K`; the seed is supplied separately.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("exhaustive") {
            return Ok(Sampling::Exhaustive);
        }
        let k = s
            .strip_prefix("random:")
            .and_then(|k| k.parse().ok())
            .ok_or_else(|| Error::Parse(format!("sampling must be `exhaustive` or `random:K`, got {s:?}")))?;
        Ok(Sampling::Random { k, seed: 0 })
    }
}

/// Resource limits; exceeding either marks the report incomplete.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Budget {
    pub max_states: Option<usize>,
    pub max_seconds: Option<f64>,
    /// Keep only violating cases in `per_case`, for sweeps too large to hold
    /// every case in memory.
    pub violations_only: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub conjecture: ConjectureId,
    pub n: usize,
    pub sampling: Sampling,
    /// Largest part for sweeps over weak compositions.
    pub max_part: u32,
    pub budget: Budget,
}

impl SweepConfig {
    pub fn new(conjecture: ConjectureId, n: usize, sampling: Sampling) -> Self {
        Self {
            conjecture,
            n,
            sampling,
            max_part: 3,
            budget: Budget::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub conjecture_id: ConjectureId,
    pub scope: String,
    pub seed: Option<u64>,
    pub per_case: Vec<CaseResult>,
    pub violations: Vec<CaseResult>,
    /// Cases compared, including any dropped from `per_case`.
    pub cases: usize,
    /// Seconds.
    pub elapsed: f64,
    pub complete: bool,
}

impl CheckReport {
    /// Violations not covered by [`is_known_violation`].
    pub fn unexpected_violations(&self) -> Vec<&CaseResult> {
        self.violations
            .iter()
            .filter(|c| !is_known_violation(self.conjecture_id, c))
            .collect()
    }

    pub fn elapsed(&self) -> Duration {
        Duration::from_secs_f64(self.elapsed)
    }
}

/// Subjects where a statement is known to fail, at any weight. Beyond
/// these, every K-Kohnert undercount in `S_n` with `n ≥ 8` is expected.
pub const KNOWN_VIOLATIONS: &[(ConjectureId, &str)] =
    &[(ConjectureId::Ry32, "12365847"), (ConjectureId::Ry32, "12375846")];

/// A lowest-degree weight at which the K-Kohnert count for the vexillary
/// permutation `12375846` falls below `g_{w,γ}` (7 against 6), found by
/// scanning the support.
pub const VEXILLARY_GAMMA: &str = "(3,2,1,1,0,0,0,0)";

pub fn is_known_violation(conjecture: ConjectureId, case: &CaseResult) -> bool {
    if KNOWN_VIOLATIONS
        .iter()
        .any(|(c, w)| *c == conjecture && case.subject == *w)
    {
        return true;
    }
    conjecture == ConjectureId::Ry32
        && case.got < case.expected
        && case.subject.parse::<Permutation>().is_ok_and(|w| w.n() >= 8)
}

fn abs_u64(c: &num_bigint::BigInt) -> u64 {
    u64::try_from(c.abs()).expect("coefficient fits in u64")
}

/// Compares per-weight counts against `|[x^γ] p|` over the union of both
/// supports.
fn compare_counts(subject: &Subject, p: &IntPolynomial, counts: &BTreeMap<WeakComposition, u64>) -> Vec<CaseResult> {
    let mut gammas: BTreeSet<WeakComposition> = p.support().collect();
    gammas.extend(counts.keys().cloned());
    gammas
        .into_iter()
        .map(|g| {
            let expected = abs_u64(&p.coefficient(&g));
            let got = counts.get(&g).copied().unwrap_or(0);
            CaseResult::new(subject, Some(g), expected, got)
        })
        .collect()
}

fn closure_counts(c: &Closure) -> BTreeMap<WeakComposition, u64> {
    c.weight_counts().into_iter().map(|(g, k)| (g, k as u64)).collect()
}

fn poly_counts(p: &IntPolynomial) -> BTreeMap<WeakComposition, u64> {
    p.terms()
        .map(|(e, c)| (WeakComposition::new(e.clone()), abs_u64(c)))
        .collect()
}

/// All cases of one subject.
pub fn evaluate(conjecture: ConjectureId, subject: &Subject, budget: &Budget) -> Result<Vec<CaseResult>> {
    evaluate_with(conjecture, subject, budget, &Oracle::new())
}

/// [`evaluate`] against a shared oracle cache.
pub fn evaluate_with(
    conjecture: ConjectureId,
    subject: &Subject,
    budget: &Budget,
    oracle: &Oracle,
) -> Result<Vec<CaseResult>> {
    let states = budget.max_states;
    match (conjecture, subject) {
        (ConjectureId::Ry32 | ConjectureId::Revised42 | ConjectureId::BkkohBound, Subject::Permutation(w)) => {
            let rules = match conjecture {
                ConjectureId::Ry32 => Ruleset::RossYong,
                ConjectureId::Revised42 => Ruleset::Ghost,
                _ => Ruleset::Relaxed,
            };
            let c = closure_with_budget(&Diagram::rothe(w)?, rules, states)?;
            Ok(compare_counts(subject, &oracle.grothendieck(w), &closure_counts(&c)))
        }
        (ConjectureId::Thm21, Subject::Permutation(w)) => {
            let pipes = grothendieck_via_pipes(w, usize::MAX)?;
            Ok(compare_counts(subject, &oracle.grothendieck(w), &poly_counts(&pipes)))
        }
        (ConjectureId::Thm22, Subject::Permutation(w)) => {
            let pipes = grothendieck_via_pipes(w, w.length())?;
            Ok(compare_counts(subject, &oracle.schubert(w), &poly_counts(&pipes)))
        }
        (ConjectureId::Thm24, Subject::Permutation(w)) => {
            let c = closure_with_budget(&Diagram::rothe(w)?, Ruleset::Plain, states)?;
            Ok(compare_counts(subject, &oracle.schubert(w), &closure_counts(&c)))
        }
        (ConjectureId::Thm31, Subject::Composition(a)) => {
            let c = closure_with_budget(&Diagram::key(a)?, Ruleset::RossYong, states)?;
            Ok(compare_counts(subject, &oracle.lascoux(a), &closure_counts(&c)))
        }
        (ConjectureId::Prop43, Subject::Composition(a)) => {
            let d = Diagram::key(a)?;
            let ry = closure_with_budget(&d, Ruleset::RossYong, states)?.as_set();
            let gh = closure_with_budget(&d, Ruleset::Ghost, states)?.as_set();
            let union = ry.union(&gh).count() as u64;
            let both = ry.intersection(&gh).count() as u64;
            Ok(vec![
                CaseResult::new(subject, None, union, both).with_note("closure sets")
            ])
        }
        (ConjectureId::Thm52, Subject::Permutation(w)) => {
            let p = tableaux::grothendieck_via_fsvt(w)?;
            Ok(compare_counts(subject, &oracle.grothendieck(w), &poly_counts(&p)))
        }
        (ConjectureId::Thm51, Subject::Permutation(w)) => {
            let kkoh = closure_with_budget(&Diagram::rothe(w)?, Ruleset::RossYong, states)?.as_set();
            let map = tableaux::bijection_map(w)?;
            let images: HashSet<LabeledDiagram> = map
                .iter()
                .filter(|(t, d)| t.weight() == d.weight() && kkoh.contains(d))
                .map(|(_, d)| *d)
                .collect();
            let hit = images.len() as u64;
            Ok(vec![
                CaseResult::new(subject, None, map.len() as u64, hit)
                    .with_note("injective, weight-preserving into closure"),
                CaseResult::new(subject, None, kkoh.len() as u64, hit).with_note("onto closure"),
            ])
        }
        (c, s) => Err(Error::Parse(format!("{c} does not apply to {s}"))),
    }
}

fn sample_indices(len: usize, sampling: &Sampling) -> Vec<usize> {
    match *sampling {
        Sampling::Exhaustive => (0..len).collect(),
        Sampling::Random { k, seed } => {
            if k >= len {
                return (0..len).collect();
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut idx = rand::seq::index::sample(&mut rng, len, k).into_vec();
            idx.sort_unstable();
            idx
        }
    }
}

fn build_domain(config: &SweepConfig) -> Result<(Vec<Subject>, String)> {
    let n = config.n;
    if n == 0 || n > MAX_GRID {
        return Err(Error::GridSize(n));
    }
    let sampling_desc = match &config.sampling {
        Sampling::Exhaustive => "exhaustive".to_string(),
        Sampling::Random { k, seed } => format!("random {k}, seed {seed}"),
    };
    let (subjects, total, what) = match config.conjecture.domain() {
        Domain::Permutations => {
            let total = factorial(n) as usize;
            let subjects = sample_indices(total, &config.sampling)
                .into_iter()
                .map(|r| Permutation::from_lex_rank(n, r as u64).map(Subject::Permutation))
                .collect::<Result<Vec<_>>>()?;
            (subjects, total, format!("S_{n}"))
        }
        Domain::Avoiding321 => {
            let all: Vec<Permutation> = Permutation::all(n).filter(|w| w.is_321_avoiding()).collect();
            let total = all.len();
            let subjects = sample_indices(total, &config.sampling)
                .into_iter()
                .map(|i| Subject::Permutation(all[i].clone()))
                .collect();
            (subjects, total, format!("321-avoiding S_{n}"))
        }
        Domain::Compositions => {
            let all = WeakComposition::all_bounded(n, config.max_part);
            let total = all.len();
            let subjects = sample_indices(total, &config.sampling)
                .into_iter()
                .map(|i| Subject::Composition(all[i].clone()))
                .collect();
            (
                subjects,
                total,
                format!("weak compositions of length {n}, parts ≤ {}", config.max_part),
            )
        }
    };
    let scope = format!("{what}, {sampling_desc} ({} of {total})", subjects.len());
    Ok((subjects, scope))
}

/// Cases compared for one subject, and those kept.
type Tally = (usize, Vec<CaseResult>);

/// Runs `evaluate` over `subjects` in parallel, calling `observer` on each
/// violation as soon as it is found. Results keep the order of `subjects`.
pub fn check_subjects(
    conjecture: ConjectureId,
    subjects: &[Subject],
    scope: String,
    seed: Option<u64>,
    budget: &Budget,
    observer: &(dyn Fn(&CaseResult) + Sync),
) -> Result<CheckReport> {
    let start = Instant::now();
    let deadline = budget.max_seconds.map(|s| start + Duration::from_secs_f64(s));
    let results: Vec<Option<Result<Tally>>> = subjects
        .par_iter()
        .map(|s| {
            if deadline.is_some_and(|d| Instant::now() > d) {
                return None;
            }
            let r = evaluate(conjecture, s, budget).map(|cases| {
                for c in cases.iter().filter(|c| conjecture.is_violation(c.expected, c.got)) {
                    observer(c);
                }
                let total = cases.len();
                if budget.violations_only {
                    let kept = cases
                        .into_iter()
                        .filter(|c| conjecture.is_violation(c.expected, c.got))
                        .collect();
                    (total, kept)
                } else {
                    (total, cases)
                }
            });
            Some(r)
        })
        .collect();
    let mut complete = true;
    let mut cases = 0;
    let mut per_case = Vec::new();
    for r in results {
        match r {
            None | Some(Err(Error::BudgetExceeded(_))) => complete = false,
            Some(Err(e)) => return Err(e),
            Some(Ok((total, kept))) => {
                cases += total;
                per_case.extend(kept);
            }
        }
    }
    let violations = per_case
        .iter()
        .filter(|c| conjecture.is_violation(c.expected, c.got))
        .cloned()
        .collect();
    Ok(CheckReport {
        conjecture_id: conjecture,
        scope,
        seed,
        per_case,
        violations,
        cases,
        elapsed: start.elapsed().as_secs_f64(),
        complete,
    })
}

pub fn sweep(config: &SweepConfig) -> Result<CheckReport> {
    sweep_with(config, &|_| {})
}

pub fn sweep_with(config: &SweepConfig, observer: &(dyn Fn(&CaseResult) + Sync)) -> Result<CheckReport> {
    let (subjects, scope) = build_domain(config)?;
    let seed = match config.sampling {
        Sampling::Random { seed, .. } => Some(seed),
        Sampling::Exhaustive => None,
    };
    check_subjects(config.conjecture, &subjects, scope, seed, &config.budget, observer)
}

/// The pinned counterexample and its diagrams.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub permutation: Permutation,
    pub gamma: WeakComposition,
    /// `g_{w,γ}` from the recursion.
    pub g: u64,
    /// `g_{w,γ}` recounted by pipe dreams.
    pub g_pipes: u64,
    pub ry_count: u64,
    pub ghost_count: u64,
    pub ry_diagrams: Vec<LabeledDiagram>,
    pub ghost_diagrams: Vec<LabeledDiagram>,
    /// Whether both diagram sets equal the pinned fixtures.
    pub matches_fixtures: bool,
    pub report: CheckReport,
}

pub fn reproduce_counterexample() -> Result<Counterexample> {
    let start = Instant::now();
    let w: Permutation = "12365847".parse()?;
    let gamma = WeakComposition::new(vec![3, 3, 3, 2, 0, 0, 0, 0]);
    let d = Diagram::rothe(&w)?;
    let g = abs_u64(&poly::grothendieck(&w).coefficient(&gamma));
    let g_pipes = crate::pipedreams::count_pipes_with_weight(&w, &gamma)?;
    let (ry, ghost) = rayon::join(
        || closure_with_budget(&d, Ruleset::RossYong, None),
        || closure_with_budget(&d, Ruleset::Ghost, None),
    );
    let ry_diagrams = ry?.with_weight(&gamma);
    let ghost_diagrams = ghost?.with_weight(&gamma);
    let as_set = |v: &[LabeledDiagram]| v.iter().copied().collect::<HashSet<_>>();
    let matches_fixtures = as_set(&ry_diagrams) == as_set(&fixtures::ry_counterexample_diagrams())
        && as_set(&ghost_diagrams) == as_set(&fixtures::ghost_counterexample_diagrams());
    let subject = Subject::Permutation(w.clone());
    let ry_case = CaseResult::new(&subject, Some(gamma.clone()), g, ry_diagrams.len() as u64).with_note("ry");
    let ghost_case = CaseResult::new(&subject, Some(gamma.clone()), g, ghost_diagrams.len() as u64).with_note("ghost");
    let violations = [&ry_case, &ghost_case]
        .into_iter()
        .filter(|c| c.expected != c.got)
        .cloned()
        .collect();
    let report = CheckReport {
        conjecture_id: ConjectureId::Ry32,
        scope: format!("{w} at {gamma}"),
        seed: None,
        per_case: vec![ry_case, ghost_case],
        cases: 2,
        violations,
        elapsed: start.elapsed().as_secs_f64(),
        complete: true,
    };
    Ok(Counterexample {
        permutation: w,
        gamma,
        g,
        g_pipes,
        ry_count: ry_diagrams.len() as u64,
        ghost_count: ghost_diagrams.len() as u64,
        ry_diagrams,
        ghost_diagrams,
        matches_fixtures,
        report,
    })
}

/// K-Kohnert counts against `g_{w,γ}` for the vexillary `w = 12375846`.
pub fn vexillary_failure() -> Result<CheckReport> {
    let w: Permutation = "12375846".parse()?;
    let subjects = [Subject::Permutation(w.clone())];
    check_subjects(
        ConjectureId::Ry32,
        &subjects,
        format!("{w}, full support"),
        None,
        &Budget::default(),
        &|_| {},
    )
}

/// K-Kohnert counts for every `w ∈ S_8` with `ℓ(w) < max_length`.
pub fn minimality_check(max_length: usize) -> Result<CheckReport> {
    let subjects: Vec<Subject> = Permutation::all(8)
        .filter(|w| w.length() < max_length)
        .map(Subject::Permutation)
        .collect();
    let scope = format!("S_8 with length < {max_length} ({} permutations)", subjects.len());
    check_subjects(ConjectureId::Ry32, &subjects, scope, None, &Budget::default(), &|_| {})
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Mutex;

    #[test]
    fn conjecture_names_roundtrip() {
        for c in ConjectureId::ALL {
            assert_eq!(c.name().parse::<ConjectureId>().unwrap(), c);
            let json = serde_json::to_string(&c).unwrap();
            assert_eq!(json, format!("\"{}\"", c.name()));
        }
        assert_eq!("revised_4_2".parse::<ConjectureId>().unwrap(), ConjectureId::Revised42);
        assert!("RY".parse::<ConjectureId>().is_err());
    }

    #[test]
    fn counterexample_reproduced() {
        let cx = reproduce_counterexample().unwrap();
        assert_eq!((cx.g, cx.ry_count, cx.ghost_count), (3, 2, 3));
        assert_eq!(cx.g_pipes, 3);
        assert!(cx.matches_fixtures);
        assert_eq!(cx.report.violations.len(), 1);
    }

    #[test]
    fn vexillary_failure_pinned() {
        let w: Permutation = "12375846".parse().unwrap();
        assert!(w.is_vexillary());
        let r = vexillary_failure().unwrap();
        let pinned = r
            .violations
            .iter()
            .find(|c| c.gamma.as_ref().unwrap().to_string() == VEXILLARY_GAMMA)
            .unwrap();
        assert_eq!((pinned.expected, pinned.got), (7, 6));
        let lowest = r
            .violations
            .iter()
            .map(|c| c.gamma.as_ref().unwrap().size())
            .min()
            .unwrap();
        assert_eq!(lowest, 7);
        assert_eq!(lowest, w.length() as u32 + 1);
        assert!(r.violations.iter().all(|c| c.got < c.expected));
    }

    #[test]
    fn small_sweeps_are_clean() {
        for c in ConjectureId::ALL {
            let n = if c.domain() == Domain::Compositions { 3 } else { 4 };
            let r = sweep(&SweepConfig::new(c, n, Sampling::Exhaustive)).unwrap();
            assert!(r.complete);
            assert!(r.violations.is_empty(), "{c}: {:?}", r.violations);
            assert!(!r.per_case.is_empty());
        }
    }

    #[test]
    fn random_sweeps_are_reproducible() {
        let mut cfg = SweepConfig::new(ConjectureId::Revised42, 5, Sampling::Random { k: 10, seed: 3 });
        let a = sweep(&cfg).unwrap();
        let b = sweep(&cfg).unwrap();
        assert_eq!(a.per_case, b.per_case);
        assert_eq!(a.seed, Some(3));
        assert!(a.scope.contains("10 of 120"));
        cfg.sampling = Sampling::Random { k: 10, seed: 4 };
        assert_ne!(sweep(&cfg).unwrap().per_case, a.per_case);
    }

    #[test]
    fn observer_sees_violations() {
        let seen = Mutex::new(Vec::new());
        let subjects = [Subject::Permutation("12365847".parse().unwrap())];
        let r = check_subjects(
            ConjectureId::Ry32,
            &subjects,
            "pair".into(),
            None,
            &Budget::default(),
            &|c| seen.lock().unwrap().push(c.clone()),
        )
        .unwrap();
        let seen = seen.into_inner().unwrap();
        assert_eq!(seen, r.violations);
        assert!(r.violations.iter().any(|c| is_known_violation(ConjectureId::Ry32, c)));
        assert!(r.unexpected_violations().is_empty());
    }

    #[test]
    fn budget_marks_report_incomplete() {
        let mut cfg = SweepConfig::new(ConjectureId::Revised42, 5, Sampling::Exhaustive);
        cfg.budget.max_states = Some(3);
        let r = sweep(&cfg).unwrap();
        assert!(!r.complete);
        assert!(
            r.per_case.len()
                < sweep(&SweepConfig::new(ConjectureId::Revised42, 5, Sampling::Exhaustive))
                    .unwrap()
                    .per_case
                    .len()
        );
    }

    #[test]
    fn bound_violation_direction() {
        assert!(ConjectureId::BkkohBound.is_violation(7, 6));
        assert!(!ConjectureId::BkkohBound.is_violation(7, 8));
        assert!(ConjectureId::Ry32.is_violation(3, 2));
    }

    #[test]
    fn known_violations_are_s8_undercounts() {
        let case = |w: &str, expected, got| CaseResult {
            subject: w.into(),
            gamma: None,
            expected,
            got,
            note: None,
        };
        assert!(is_known_violation(ConjectureId::Ry32, &case("12375846", 1, 2)));
        assert!(is_known_violation(ConjectureId::Ry32, &case("32185746", 7, 6)));
        assert!(!is_known_violation(ConjectureId::Ry32, &case("32185746", 6, 7)));
        assert!(!is_known_violation(ConjectureId::Ry32, &case("3218574", 7, 6)));
        assert!(!is_known_violation(ConjectureId::Revised42, &case("12365847", 3, 2)));
    }

    #[test]
    fn violations_only_keeps_totals() {
        let subjects = [Subject::Permutation("12365847".parse().unwrap())];
        let full = check_subjects(
            ConjectureId::Ry32,
            &subjects,
            "w".into(),
            None,
            &Budget::default(),
            &|_| {},
        )
        .unwrap();
        let budget = Budget {
            violations_only: true,
            ..Budget::default()
        };
        let lean = check_subjects(ConjectureId::Ry32, &subjects, "w".into(), None, &budget, &|_| {}).unwrap();
        assert_eq!(full.cases, full.per_case.len());
        assert_eq!(lean.cases, full.cases);
        assert_eq!(lean.per_case, full.violations);
        assert_eq!(lean.violations, full.violations);
    }

    #[test]
    fn sampling_parses() {
        assert_eq!("exhaustive".parse::<Sampling>().unwrap(), Sampling::Exhaustive);
        assert_eq!(
            "random:200".parse::<Sampling>().unwrap(),
            Sampling::Random { k: 200, seed: 0 }
        );
        assert!("random".parse::<Sampling>().is_err());
    }
}
