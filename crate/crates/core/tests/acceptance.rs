//! One PASS/FAIL line per acceptance criterion. Exits nonzero if any fails.

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use grothendieck::checker::{self, CheckReport, ConjectureId, Sampling, Subject, SweepConfig};
use grothendieck::kohnert::{closure, closure_weight_count, polynomial_via_closure, Ruleset, Seed};
use grothendieck::pipedreams::{enumerate_pipes, grothendieck_via_pipes, GridMode};
use grothendieck::tableaux::{self, TableauPairEncoding};
use grothendieck::{fixtures, poly, Diagram, Permutation, WeakComposition};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn perm(s: &str) -> Permutation {
    s.parse().expect("permutation literal")
}

fn comp(s: &str) -> WeakComposition {
    s.parse().expect("composition literal")
}

fn sweep(conj: ConjectureId, n: usize, sampling: Sampling) -> Result<CheckReport, String> {
    let r = checker::sweep(&SweepConfig::new(conj, n, sampling)).map_err(|e| e.to_string())?;
    ensure(r.complete, format!("{conj} n={n} incomplete"))?;
    Ok(r)
}

fn clean(r: &CheckReport) -> Result<(), String> {
    match r.violations.first() {
        None => Ok(()),
        Some(first) => Err(format!(
            "{} {}: {} violations, first {first}",
            r.conjecture_id,
            r.scope,
            r.violations.len()
        )),
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let cx = checker::reproduce_counterexample().map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(
        (cx.g, cx.ry_count, cx.ghost_count) == (3, 2, 3),
        format!("counts ({}, {}, {})", cx.g, cx.ry_count, cx.ghost_count),
    )?;
    ensure(cx.g_pipes == 3, format!("pipe count {}", cx.g_pipes))?;
    ensure(cx.matches_fixtures, "diagrams differ from the pinned fixtures")?;
    ensure(elapsed < Duration::from_secs(60), format!("took {elapsed:?}"))?;
    Ok(format!("g=3, #KKoh=2, #ghost=3 in {elapsed:.2?}"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for w in Permutation::all(5) {
        let via = grothendieck_via_pipes(&w, usize::MAX).map_err(|e| e.to_string())?;
        ensure(via == poly::grothendieck(&w), format!("mismatch at {w}"))?;
        count += 1;
    }
    ensure(count == 120, format!("{count} permutations"))?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(300), format!("took {elapsed:?}"))?;
    Ok(format!("{count} permutations of S_5 in {elapsed:.2?}"))
}

fn criterion_3() -> Outcome {
    for w in Permutation::all(5) {
        let p = polynomial_via_closure(&Seed::Permutation(w.clone()), Ruleset::Plain).map_err(|e| e.to_string())?;
        ensure(p == poly::schubert(&w), format!("Kohnert mismatch at {w}"))?;
    }
    let small = WeakComposition::all_bounded(3, 3);
    ensure(small.len() == 64, "expected 64 compositions")?;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let large: Vec<WeakComposition> = WeakComposition::all_bounded(4, 3)
        .choose_multiple(&mut rng, 50)
        .cloned()
        .collect();
    for alpha in small.iter().chain(&large) {
        let p =
            polynomial_via_closure(&Seed::Composition(alpha.clone()), Ruleset::RossYong).map_err(|e| e.to_string())?;
        ensure(p == poly::lascoux(alpha), format!("K-Kohnert mismatch at {alpha}"))?;
    }
    Ok(format!("120 Schubert, {} Lascoux", small.len() + large.len()))
}

fn criterion_4() -> Outcome {
    let mut cases = 0;
    for (n, sampling) in [
        (5, Sampling::Exhaustive),
        (6, Sampling::Exhaustive),
        (7, Sampling::Random { k: 200, seed: 1 }),
    ] {
        let r = sweep(ConjectureId::Revised42, n, sampling)?;
        clean(&r)?;
        cases += r.per_case.len();
    }
    Ok(format!("0 violations over {cases} (w, γ) cases"))
}

fn criterion_5() -> Outcome {
    let r = sweep(ConjectureId::Ry32, 6, Sampling::Exhaustive)?;
    clean(&r)?;
    let targeted = |w: &str, gamma: &str| -> Result<(), String> {
        let subjects = [Subject::Permutation(perm(w))];
        let r = checker::check_subjects(
            ConjectureId::Ry32,
            &subjects,
            w.to_string(),
            None,
            &checker::Budget::default(),
            &|_| {},
        )
        .map_err(|e| e.to_string())?;
        let hit = r
            .violations
            .iter()
            .any(|c| c.gamma.as_ref().map(|g| g.to_string()).as_deref() == Some(gamma));
        ensure(hit, format!("no violation for {w} at {gamma}"))
    };
    targeted("12365847", "(3,3,3,2,0,0,0,0)")?;
    targeted("12375846", checker::VEXILLARY_GAMMA)?;
    let minimal = checker::minimality_check(5).map_err(|e| e.to_string())?;
    clean(&minimal)?;
    Ok(format!(
        "S_6 clean; 12365847 and 12375846 {} fail; {} clean",
        checker::VEXILLARY_GAMMA,
        minimal.scope
    ))
}

fn criterion_6() -> Outcome {
    let w = perm("12385746");
    let gamma = comp("1,4,1,2,0,0,0,0");
    let relaxed = closure_weight_count(&w, &gamma, Ruleset::Relaxed).map_err(|e| e.to_string())?;
    let g = poly::grothendieck(&w).coefficient(&gamma).magnitude().clone();
    ensure(relaxed == 8, format!("relaxed count {relaxed}"))?;
    ensure(g == 7u32.into(), format!("|g| = {g}"))?;
    let r = sweep(ConjectureId::BkkohBound, 6, Sampling::Exhaustive)?;
    clean(&r)?;
    let over = r.per_case.iter().filter(|c| c.got != c.expected).count();
    ensure(over == 0, format!("{over} overcounts in S_6"))?;
    Ok(format!("8 vs 7; S_6 equality over {} cases", r.per_case.len()))
}

fn criterion_7() -> Outcome {
    let r51 = sweep(ConjectureId::Thm51, 5, Sampling::Exhaustive)?;
    clean(&r51)?;
    let subjects: HashSet<&str> = r51.per_case.iter().map(|c| c.subject.as_str()).collect();
    ensure(subjects.len() == 42, format!("{} permutations", subjects.len()))?;
    let r52 = sweep(ConjectureId::Thm52, 5, Sampling::Exhaustive)?;
    clean(&r52)?;
    for w in Permutation::all(5).filter(|w| w.is_321_avoiding()) {
        let p = tableaux::grothendieck_via_fsvt(&w).map_err(|e| e.to_string())?;
        ensure(p == poly::grothendieck(&w), format!("FSVT mismatch at {w}"))?;
    }
    let w = perm("451829367");
    let image = tableaux::bijection_f(&w, &fixtures::bijection_example_tableau()).map_err(|e| e.to_string())?;
    ensure(
        image == fixtures::bijection_example_image(),
        format!("example image differs:\n{image}"),
    )?;
    Ok("42 bijections, 42 FSVT expansions, worked example matches".into())
}

fn criterion_8() -> Outcome {
    let t = fixtures::left_key_example_tableau();
    ensure(
        *t.shape() == Diagram::key(&comp("2,3,0,4,0,4")).unwrap(),
        "fixture shape",
    )?;
    let k = tableaux::left_key(&t).map_err(|e| e.to_string())?;
    ensure(k == fixtures::left_key_example_key(), format!("left key differs:\n{k}"))?;
    Ok("K_-(T) matches".into())
}

fn criterion_9() -> Outcome {
    // operator identities
    for w in Permutation::all(4) {
        let g = poly::grothendieck(&w);
        for i in 1..4 {
            let once = g.pi_tilde(i).unwrap();
            ensure(
                once.pi_tilde(i).unwrap() == once,
                format!("π̃_{i} not idempotent on {w}"),
            )?;
            ensure(
                g.divided_difference(i)
                    .unwrap()
                    .divided_difference(i)
                    .unwrap()
                    .is_zero(),
                format!("∂_{i}² ≠ 0 on {w}"),
            )?;
        }
    }
    // containment chains and bounds
    for w in Permutation::all(5) {
        let d = Diagram::rothe(&w).unwrap();
        let ry = closure(&d, Ruleset::RossYong).as_set();
        let gh = closure(&d, Ruleset::Ghost).as_set();
        let rx = closure(&d, Ruleset::Relaxed).as_set();
        ensure(
            ry.is_subset(&gh) && gh.is_subset(&rx),
            format!("containment fails at {w}"),
        )?;
    }
    // staircase sufficiency
    for n in 1..=4 {
        for w in Permutation::all(n) {
            let stair: HashSet<_> = enumerate_pipes(&w, usize::MAX, GridMode::Staircase)
                .unwrap()
                .into_iter()
                .collect();
            let full: HashSet<_> = enumerate_pipes(&w, usize::MAX, GridMode::Full)
                .unwrap()
                .into_iter()
                .collect();
            ensure(stair == full, format!("staircase misses pipe dreams of {w}"))?;
        }
    }
    // FSVT = SVKT, Φ_α round trip
    for n in 1..=4 {
        for alpha in WeakComposition::all_bounded(n, 3.min(n as u32))
            .into_iter()
            .filter(|a| a.nonzero_parts_weakly_increasing())
        {
            let d = Diagram::key(&alpha).unwrap();
            let fsvt: HashSet<_> = tableaux::enumerate_fsvt(&d).into_iter().collect();
            let svkt: HashSet<_> = tableaux::enumerate_set_valued(&d)
                .into_iter()
                .filter(|t| tableaux::is_svkt(t, &alpha))
                .collect();
            ensure(fsvt == svkt, format!("FSVT ≠ SVKT at {alpha}"))?;
            for t in &fsvt {
                let img = tableaux::phi_alpha(t).unwrap();
                ensure(
                    tableaux::phi_alpha_inverse(&img, &alpha).unwrap() == *t,
                    format!("Φ round trip fails at {alpha}"),
                )?;
                let enc = TableauPairEncoding::encode(t).unwrap();
                ensure(enc.o.is_disjoint(&enc.g).unwrap(), "O ∩ G nonempty")?;
            }
        }
    }
    // φ weight identity
    for w in Permutation::all(4).filter(|w| w.is_321_avoiding()) {
        let (a, b) = tableaux::alpha_beta(&w).unwrap();
        let shift = a.checked_sub(&b).unwrap();
        for t in tableaux::enumerate_fsvt(&Diagram::rothe(&w).unwrap()) {
            let p = tableaux::phi(&t, &w).unwrap();
            ensure(
                p.weight().checked_sub(&t.weight()) == Some(shift.clone()),
                format!("φ weight at {w}"),
            )?;
        }
    }
    // remaining statements over small ranges
    for (conj, n) in [
        (ConjectureId::Thm21, 5),
        (ConjectureId::Thm22, 5),
        (ConjectureId::Thm24, 5),
        (ConjectureId::Thm31, 3),
        (ConjectureId::Prop43, 4),
    ] {
        clean(&sweep(conj, n, Sampling::Exhaustive)?)?;
    }
    Ok("operators, containment, staircase, FSVT=SVKT, φ, Φ round trip, sweeps".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("counterexample reproduction", criterion_1),
        ("pipe dreams vs recursion on S_5", criterion_2),
        ("Kohnert and K-Kohnert vs recursion", criterion_3),
        ("revised conjecture sweeps", criterion_4),
        ("K-Kohnert conjecture boundary", criterion_5),
        ("relaxed ghost bound", criterion_6),
        ("321-avoiding bijection", criterion_7),
        ("left key worked example", criterion_8),
        ("property suites", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} ({elapsed:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why} ({elapsed:.2?})", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
