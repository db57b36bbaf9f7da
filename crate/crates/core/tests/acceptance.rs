//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use etf_core::cli;
use etf_core::digraph::{Digraph, DigraphViolation};
use etf_core::eisenstein::{real_combination_is_zero, CubeRoot};
use etf_core::feasibility::{feasibility_table, feasible_params, sieve, CandidateOutcome, Rejection};
use etf_core::frames::{frame_of, validate_frame, C64};
use etf_core::search::{search_all, switching_equivalent, SearchConfig};
use etf_core::seidel::{
    check_conditions, check_signature, verify_signature, verify_via_conditions, ConditionViolation,
    EisensteinMatrix, SeidelMatrix, SignatureViolation,
};
use etf_core::{frame_9_6, power_9};

const AC1_LIMIT: Duration = Duration::from_secs(1);
const AC3_LIMIT: Duration = Duration::from_millis(10);
const AC4_LIMIT: Duration = Duration::from_secs(5);
const AC6_LIMIT: Duration = Duration::from_secs(600);
const AC7_LIMIT: Duration = Duration::from_millis(100);
const FRAME_TOL: f64 = 1e-9;
const PROPERTY_CASES: u32 = 1000;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

fn ac1() -> Outcome {
    let expected = "n\tk\tmu\te\tlambda1\tlambda2\n\
9\t6\t-2\t3\t-4\t2\n\
33\t11\t4\t9\t-4\t8\n\
36\t21\t-2\t12\t-7\t5\n\
45\t12\t7\t12\t-4\t11\n\
51\t34\t-5\t18\t-10\t5\n\
81\t45\t-2\t27\t-10\t8\n\
96\t76\t-14\t36\t-19\t5\n\
99\t33\t7\t30\t-7\t14\n";
    let start = Instant::now();
    let out = cli::run(["etf", "--format", "tsv", "feasible", "--max-n", "100"]);
    let elapsed = start.elapsed();
    ensure(out.exit_code == 0, || format!("exit code {}", out.exit_code))?;
    ensure(out.stdout == expected, || format!("output differs:\n{}", out.stdout))?;
    for p in feasibility_table(100) {
        ensure(p.n == 1 - p.lambda1 * p.lambda2 && p.mu == p.lambda1 + p.lambda2, || format!("{p:?}"))?;
    }
    within(elapsed, AC1_LIMIT)?;
    Ok(format!("8 rows exact in {elapsed:?}"))
}

fn ac2() -> Outcome {
    // Discriminants 4(n-1)+μ² of each rejected candidate, in e order.
    let not_square: [(i64, &[i64]); 8] = [
        (12, &[45]),
        (18, &[72]),
        (24, &[108, 117]),
        (27, &[153, 108]),
        (30, &[117, 180]),
        (39, &[252, 153, 216]),
        (42, &[180, 189]),
        (48, &[288, 189, 252]),
    ];
    for n in [3, 6, 12, 15, 18, 21, 24, 27, 30, 39, 42, 48] {
        ensure(feasible_params(n).is_empty(), || format!("n={n} has admissible parameters"))?;
    }
    for n in [3, 6, 15] {
        let r = sieve(n);
        ensure(r.rejection == Some(Rejection::NoValidE) && r.candidates.is_empty(), || format!("n={n}: {r:?}"))?;
    }
    for (n, discs) in not_square {
        let r = sieve(n);
        let found: Vec<i64> = r.candidates.iter().map(|c| c.discriminant).collect();
        ensure(found == discs, || format!("n={n}: discriminants {found:?}"))?;
        ensure(
            r.candidates.iter().all(|c| c.outcome == CandidateOutcome::Rejected(Rejection::NotPerfectSquare)),
            || format!("n={n}: {r:?}"),
        )?;
    }
    let r = sieve(21);
    ensure(
        r.candidates.len() == 1
            && r.candidates[0].mu == 1
            && r.candidates[0].k == Some((28, 3))
            && r.candidates[0].outcome == CandidateOutcome::Rejected(Rejection::NonIntegralK),
        || format!("n=21: {r:?}"),
    )?;
    Ok("12 orders rejected with the worked reasons".into())
}

fn ac3() -> Outcome {
    let q = frame_9_6();
    let start = Instant::now();
    let sig = verify_signature(&q);
    let cond = verify_via_conditions(&q);
    let elapsed = start.elapsed();
    ensure(sig == Some(-2), || format!("verify_signature = {sig:?}"))?;
    ensure(cond == Some(-2), || format!("verify_via_conditions = {cond:?}"))?;
    within(elapsed, AC3_LIMIT)?;
    Ok(format!("mu=-2 by both verifiers in {elapsed:?}"))
}

fn ac4() -> Outcome {
    let start = Instant::now();
    let q = power_9(2, 729).map_err(|e| e.to_string())?;
    let sig = verify_signature(&q);
    let elapsed = start.elapsed();
    ensure(q.order() == 81, || format!("order {}", q.order()))?;
    ensure(sig == Some(-2), || format!("verify_signature = {sig:?}"))?;
    let mut shifted = EisensteinMatrix::from_seidel(&q);
    for i in 0..81 {
        shifted.set(i, i, shifted.get(i, i).checked_add(CubeRoot::ONE.to_eisenstein()).unwrap());
    }
    let sq = shifted.checked_mul(&shifted).map_err(|e| e.to_string())?;
    ensure(sq == EisensteinMatrix::scalar(81, 81), || "(Q+I)^2 != 81 I".into())?;
    within(elapsed, AC4_LIMIT)?;
    Ok(format!("order 81, mu=-2, (Q+I)^2 = 81 I, {elapsed:?}"))
}

fn ac5() -> Outcome {
    let g = Digraph::from_seidel(&frame_9_6()).isolate_vertex(0);
    ensure(g.vertex_count() == 8, || format!("{} vertices", g.vertex_count()))?;
    ensure(g.is_e_regular() == Some(3), || format!("regularity {:?}", g.is_e_regular()))?;
    let e = g.check_conditions();
    ensure(e == Ok(3), || format!("check_conditions = {e:?}"))?;
    let (mut arcs, mut others) = (0, 0);
    for u in 0..8 {
        for v in 0..8 {
            if u == v {
                continue;
            }
            let s = g.pair_stats(u, v);
            let grid = [
                [s.omega_omega2, s.omega_omega, s.omega_one],
                [s.omega2_omega2, s.omega2_omega, s.omega2_one],
                [s.one_omega2, s.one_omega, s.one_one],
            ];
            if g.has_arc(u, v) {
                arcs += 1;
                ensure(grid == [[1, 1, 0], [1, 1, 1], [1, 0, 0]], || format!("arc ({u},{v}): {grid:?}"))?;
            } else if !g.adjacent(u, v) {
                others += 1;
                ensure(grid == [[0, 3, 0], [3, 0, 0], [0, 0, 0]], || format!("pair ({u},{v}): {grid:?}"))?;
            }
        }
    }
    Ok(format!("3-regular, e=3, {arcs} arcs and {others} non-adjacent ordered pairs match"))
}

fn ac6() -> Outcome {
    let q = frame_9_6();
    let start = Instant::now();
    let pruned = search_all(&SearchConfig::new(9, -2)).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let mut cfg = SearchConfig::new(9, -2);
    cfg.prune_pairwise = false;
    let unpruned = search_all(&cfg).map_err(|e| e.to_string())?;
    ensure(pruned.stats.complete && unpruned.stats.complete, || "search incomplete".into())?;
    ensure(!pruned.solutions.is_empty(), || "no solutions".into())?;
    for s in &pruned.solutions {
        ensure(switching_equivalent(s, &q) == Ok(true), || format!("inequivalent solution:\n{}", s.to_crsm()))?;
    }
    let a: BTreeSet<String> = pruned.solutions.iter().map(SeidelMatrix::to_crsm).collect();
    let b: BTreeSet<String> = unpruned.solutions.iter().map(SeidelMatrix::to_crsm).collect();
    ensure(a == b, || format!("pruned {} vs unpruned {} solutions", a.len(), b.len()))?;
    let out = cli::run(["etf", "--format", "json", "search", "--n", "9", "--mu", "-2"]);
    let manifest = out.stdout.lines().last().unwrap_or_default();
    ensure(out.exit_code == 0 && manifest.contains("\"nodes\""), || format!("manifest: {manifest}"))?;
    within(elapsed, AC6_LIMIT)?;
    Ok(format!(
        "{} solutions, 1 class; nodes {} pruned / {} unpruned; {elapsed:?}",
        a.len(),
        pruned.stats.nodes,
        unpruned.stats.nodes
    ))
}

fn ac7() -> Outcome {
    let q = frame_9_6();
    let start = Instant::now();
    let fs = frame_of(&q).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(fs.n == 9 && fs.k == 6, || format!("n={} k={}", fs.n, fs.k))?;
    let inner = |x: &[C64], y: &[C64]| -> C64 { x.iter().zip(y).map(|(a, b)| a * b.conj()).sum() };
    let mut worst: f64 = 0.0;
    for i in 0..9 {
        worst = worst.max((inner(&fs.vectors[i], &fs.vectors[i]).re - 2.0 / 3.0).abs());
        for j in 0..9 {
            let g = inner(&fs.vectors[j], &fs.vectors[i]);
            if i != j {
                worst = worst.max((g.norm() - 1.0 / 6.0).abs());
            }
            let want = if i == j {
                C64::new(2.0 / 3.0, 0.0)
            } else {
                let (re, im) = q.root(i, j).to_complex();
                C64::new(re / 6.0, im / 6.0)
            };
            worst = worst.max((g - want).norm());
        }
    }
    for a in 0..6 {
        for b in 0..6 {
            let s: C64 = (0..9).map(|i| fs.vectors[i][a].conj() * fs.vectors[i][b]).sum();
            let id = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((s - C64::new(id, 0.0)).norm());
        }
    }
    ensure(worst <= FRAME_TOL, || format!("max deviation {worst:e}"))?;
    let report = validate_frame(&fs);
    ensure(report.passed, || format!("validate_frame: {report:?}"))?;
    within(elapsed, AC7_LIMIT)?;
    Ok(format!("max deviation {worst:.1e} <= {FRAME_TOL:e}, {elapsed:?}"))
}

fn run_property<S: Strategy>(name: &str, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    let mut runner = TestRunner::new(Config { cases: PROPERTY_CASES, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).map_err(|e| format!("{name}: {e}"))
}

fn random_matrix(n: usize) -> impl Strategy<Value = SeidelMatrix> {
    proptest::collection::vec(0u8..3, n * (n - 1) / 2).prop_map(move |cells| {
        let mut it = cells.into_iter();
        SeidelMatrix::from_upper(n, |_, _| CubeRoot::from_exponent(it.next().unwrap())).unwrap()
    })
}

fn ac8() -> Outcome {
    let switch = (
        proptest::collection::vec((0u8..3).prop_map(CubeRoot::from_exponent), 9),
        Just((0..9).collect::<Vec<usize>>()).prop_shuffle(),
    );
    run_property("switching invariance", switch, |(d, p)| {
        prop_assert_eq!(verify_signature(&frame_9_6().switch(&d, &p).unwrap()), Some(-2));
        Ok(())
    })?;
    run_property("switching invariance (random)", (random_matrix(6), proptest::collection::vec(0u8..3, 6)), |(q, d)| {
        let d: Vec<CubeRoot> = d.into_iter().map(CubeRoot::from_exponent).collect();
        let p: Vec<usize> = (0..6).rev().collect();
        prop_assert_eq!(verify_signature(&q.switch(&d, &p).unwrap()), verify_signature(&q));
        Ok(())
    })?;
    run_property("graph/matrix round trip", random_matrix(8), |q| {
        let g = Digraph::from_seidel(&q);
        prop_assert_eq!(g.to_seidel().unwrap(), q);
        prop_assert_eq!(Digraph::parse_dg(&g.to_dg()).unwrap(), g);
        Ok(())
    })?;
    run_property("triple omega switch", (random_matrix(8), 0usize..8), |(q, v)| {
        let g = Digraph::from_seidel(&q);
        prop_assert_eq!(g.omega_switch(v).omega_switch(v).omega_switch(v), g);
        Ok(())
    })?;
    let mut lemma = 0;
    for a in -10i64..=10 {
        for b in -10i64..=10 {
            for c in -10i64..=10 {
                let (re, im) = (a as f64 - 0.5 * (b + c) as f64, (b - c) as f64 * 3f64.sqrt() / 2.0);
                let oracle = re.abs() < 1e-9 && im.abs() < 1e-9;
                ensure(real_combination_is_zero(a, b, c) == oracle && oracle == (a == b && b == c), || {
                    format!("lemma fails at ({a},{b},{c})")
                })?;
                lemma += 1;
            }
        }
    }
    let nine = Digraph::from_seidel(&frame_9_6());
    for v in 0..9 {
        ensure(nine.isolate_vertex(v).check_conditions() == Ok(3), || format!("isolating vertex {v} fails"))?;
    }
    run_property("all-vertex failure", random_matrix(9), |q| {
        prop_assume!(verify_signature(&q).is_none());
        let g = Digraph::from_seidel(&q);
        for v in 0..9 {
            prop_assert!(g.isolate_vertex(v).check_conditions().is_err());
        }
        Ok(())
    })?;
    Ok(format!("5 random suites x {PROPERTY_CASES} cases, lemma on {lemma} triples, 9 isolations"))
}

fn ac9() -> Outcome {
    let q = frame_9_6();
    let mut count = 0;
    for i in 0..9 {
        for j in i + 1..9 {
            for shift in 1..3u8 {
                let bad = SeidelMatrix::from_upper(9, |a, b| {
                    let r = q.root(a, b);
                    if (a, b) == (i, j) {
                        CubeRoot::from_exponent((r.exponent() + shift) % 3)
                    } else {
                        r
                    }
                })
                .unwrap();
                let tag = format!("pair ({},{}) shift {shift}", i + 1, j + 1);
                match check_signature(&bad) {
                    Err(SignatureViolation::Entry { .. } | SignatureViolation::MuNotInteger { .. }) => {}
                    other => return Err(format!("{tag}: check_signature = {other:?}")),
                }
                let (std, _) = bad.standard_form();
                match check_conditions(&std) {
                    Err(ConditionViolation::ColumnCounts { .. } | ConditionViolation::PairEquation { .. }) => {}
                    other => return Err(format!("{tag}: check_conditions = {other:?}")),
                }
                ensure(verify_via_conditions(&bad).is_none(), || format!("{tag}: conditions accept"))?;
                match Digraph::from_seidel(&std).isolate_vertex(0).check_conditions() {
                    Err(DigraphViolation::NotRegular { .. } | DigraphViolation::PairEquation { .. }) => {}
                    other => return Err(format!("{tag}: digraph = {other:?}")),
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} corruptions rejected by all three verifiers with a located violation"))
}

fn main() -> ExitCode {
    let criteria: [(&str, &str, fn() -> Outcome); 9] = [
        ("AC1", "feasibility table to 100", ac1),
        ("AC2", "worked-order rejections", ac2),
        ("AC3", "exact 9x9 verification", ac3),
        ("AC4", "order-81 bootstrap", ac4),
        ("AC5", "isolated 8-vertex digraph", ac5),
        ("AC6", "exhaustive n=9 search", ac6),
        ("AC7", "(9,6) frame synthesis", ac7),
        ("AC8", "property suites", ac8),
        ("AC9", "single-pair corruptions", ac9),
    ];
    let mut failed = 0;
    for (id, name, check) in criteria {
        match check() {
            Ok(detail) => println!("{id} PASS {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("{id} FAIL {name}: {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
