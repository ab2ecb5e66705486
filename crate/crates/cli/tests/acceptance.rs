//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines appear in order; exits nonzero if any criterion fails.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rgreedy_core::analysis::campaign::{
    chain_bounds, random_corpus, random_instance, set_check_campaign, CorpusInstance, SetCheck,
};
use rgreedy_core::analysis::{harmonic, step_bounds_with_opt, tightness};
use rgreedy_core::gen::star_ids;
use rgreedy_core::tree::TreeOracle;
use rgreedy_core::{
    ball_instrumentation, check_general_inequality, exact_kmedian, forward_greedy, gen_star,
    gen_tree_lb, removal_delta, rgreedy, rgreedy_reference, DistanceOracle, FacilitySet,
    StarInstanceParams, TiePolicy, TreeInstanceParams, WeightedMetricSpace,
};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    };
}

const SEED: u64 = 20_240_601;
const TOLERANCE: f64 = 1e-9;

fn tree(h: u32) -> WeightedMetricSpace {
    gen_tree_lb(TreeInstanceParams { h }).expect("tree generator")
}

fn corpus() -> Vec<CorpusInstance> {
    random_corpus(SEED, 500, &(4..=14)).expect("random corpus")
}

fn within(elapsed: Duration, limit: Duration) -> Outcome {
    if elapsed < limit {
        Ok(String::new())
    } else {
        Err(format!("took {elapsed:.2?}, limit {limit:?}"))
    }
}

fn c1_tree_h2() -> Outcome {
    let start = Instant::now();
    let s = tree(2);
    ensure!(s.n() == 29, "expected 29 points, got {}", s.n());
    let trace = rgreedy(&s, 1, &TiePolicy::priority_of(&s)).map_err(|e| e.to_string())?;
    let (opt_set, opt) = exact_kmedian(&s, 1).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure!(
        trace.final_set.members() == [1],
        "rgreedy ended at {:?}, not rho",
        trace.final_set
    );
    ensure!(
        trace.final_cost() == 29.0,
        "rgreedy cost {}",
        trace.final_cost()
    );
    ensure!(
        opt_set.members() == [1] && opt == 29.0,
        "exact 1-median {opt_set:?} cost {opt}"
    );
    let ratio = trace.final_cost() / opt;
    ensure!(ratio == 1.0, "ratio {ratio}");
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!(
        "rgreedy -> rho cost 29, exact rho cost 29, ratio {ratio} in {elapsed:.2?}"
    ))
}

fn c2_tree_h3() -> Outcome {
    let start = Instant::now();
    let s = tree(3);
    ensure!(s.n() == 1794, "expected 1794 points, got {}", s.n());
    let trace = rgreedy(&s, 1, &TiePolicy::priority_of(&s)).map_err(|e| e.to_string())?;
    let (opt_set, opt) = exact_kmedian(&s, 1).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure!(
        trace.final_set.members() == [1],
        "rgreedy ended at {:?}, not rho",
        trace.final_set
    );
    ensure!(
        trace.final_cost() == 3971.0,
        "rgreedy cost {}",
        trace.final_cost()
    );
    ensure!(
        opt_set.members() == [0] && opt == 3400.0,
        "exact 1-median {opt_set:?} cost {opt}"
    );
    let ratio = trace.final_cost() / opt;
    ensure!(
        (1.167..=1.169).contains(&ratio),
        "ratio {ratio} outside [1.167, 1.169]"
    );
    ensure!(ratio >= (3.0 - 1.0) / 8.0, "ratio {ratio} below (h-1)/8");
    within(elapsed, Duration::from_secs(60))?;
    Ok(format!(
        "rgreedy -> rho cost 3971, exact mu cost 3400, ratio {ratio:.6} in {elapsed:.2?}"
    ))
}

fn c3_generator_arithmetic() -> Outcome {
    let mut checked_nodes = 0;
    for h in 1..=3u32 {
        let s = tree(h);
        let DistanceOracle::Tree(t) = s.oracle() else {
            return Err("tree instance without implicit oracle".into());
        };
        let top: u64 = (1..=h as u64 + 1).product();
        for i in 1..=h {
            let off = t.level_offset(i);
            let w: f64 = (off..off + t.level_count(i) as usize)
                .map(|x| s.weight(x))
                .sum();
            let expected = (top.pow(3) / (i as u64 + 1).pow(3)) as f64;
            ensure!(
                w == expected,
                "h={h} level {i}: weight {w}, expected {expected}"
            );
        }
        let mut subtree = vec![0.0; s.n()];
        for x in (1..s.n()).rev() {
            subtree[x] += s.weight(x);
            if let Some(p) = t.parent(x) {
                subtree[p] += subtree[x];
            }
        }
        for (x, &weight) in subtree.iter().enumerate().skip(1) {
            let (level, _) = t.locate(x).ok_or("tree node without level")?;
            if level > 1 {
                let bound = TreeOracle::level_weight(level + 1) as f64;
                ensure!(
                    weight < bound,
                    "h={h} node {x}: subtree weight {weight} >= {bound}"
                );
                checked_nodes += 1;
            }
        }
    }
    let s = tree(3);
    let DistanceOracle::Tree(t) = s.oracle() else {
        unreachable!()
    };
    let weights: Vec<f64> = (1..=3)
        .map(|i| {
            let off = t.level_offset(i);
            (off..off + t.level_count(i) as usize)
                .map(|x| s.weight(x))
                .sum()
        })
        .collect();
    ensure!(
        weights == [1728.0, 512.0, 216.0],
        "h=3 level weights {weights:?}"
    );
    Ok(format!(
        "h=3 level weights {weights:?}; subtree bound at {checked_nodes} internal nodes"
    ))
}

fn c4_star() -> Outcome {
    for j in [2usize, 3, 5, 10] {
        for w in [1.0, 10.0, 100.0, 1000.0] {
            let s = gen_star(StarInstanceParams { j, w }).map_err(|e| e.to_string())?;
            let c = s
                .cost(&FacilitySet::new([0]).unwrap())
                .map_err(|e| e.to_string())?;
            ensure!(c == j as f64 * (w + 2.0), "j={j} w={w}: cost(mu) {c}");
        }
    }
    let (j, w) = (10, 1000.0);
    let s = gen_star(StarInstanceParams { j, w }).map_err(|e| e.to_string())?;
    let ys = FacilitySet::new(star_ids(j).2).unwrap();
    let min_delta = ys
        .members()
        .iter()
        .map(|&y| removal_delta(&s, &ys, y).unwrap())
        .fold(f64::INFINITY, f64::min);
    ensure!(min_delta == 1003.0, "min removal delta {min_delta}");
    let report = check_general_inequality(&s, &ys).map_err(|e| e.to_string())?;
    ensure!(report.holds, "general inequality fails: {report:?}");
    ensure!((report.rhs - 2226.67).abs() < 0.01, "bound {}", report.rhs);
    let t = tightness(&report);
    ensure!((2.2..=2.3).contains(&t), "tightness {t}");
    Ok(format!(
        "min delta {min_delta}, bound {:.2}, tightness {t:.4}",
        report.rhs
    ))
}

fn c5_harmonic(corpus: &[CorpusInstance], chains: &[ChainResult]) -> Outcome {
    let mut rows = 0;
    let mut worst: f64 = 0.0;
    for (inst, chain) in corpus.iter().zip(chains) {
        let n = inst.space.n();
        for &(k, opt, greedy_cost) in &chain.costs {
            if opt <= 0.0 {
                continue;
            }
            let ratio = greedy_cost / opt;
            let bound = 2.0 * harmonic(n - k);
            ensure!(
                ratio <= bound + TOLERANCE,
                "{} k={k}: ratio {ratio} > {bound}",
                inst.name
            );
            worst = worst.max(ratio / bound);
            rows += 1;
        }
    }
    ensure!(corpus.len() >= 500, "only {} instances", corpus.len());
    Ok(format!(
        "{} instances, {rows} (instance, k) pairs, max ratio/bound {worst:.4}",
        corpus.len()
    ))
}

fn c6_step_bounds(corpus: &[CorpusInstance], chains: &[ChainResult]) -> Outcome {
    let mut steps = 0;
    for (inst, chain) in corpus.iter().zip(chains) {
        ensure!(
            chain.step_violations.is_empty(),
            "{}: {:?}",
            inst.name,
            chain.step_violations
        );
        steps += chain.steps_checked;
    }
    for h in [2u32, 3] {
        let s = tree(h);
        let trace = rgreedy(&s, 1, &TiePolicy::priority_of(&s)).map_err(|e| e.to_string())?;
        let (_, opt) = exact_kmedian(&s, 1).map_err(|e| e.to_string())?;
        let reports =
            step_bounds_with_opt(&trace, 1, opt, s.tolerance()).map_err(|e| e.to_string())?;
        if let Some(bad) = reports.iter().find(|r| !r.holds) {
            return Err(format!("tree h={h}: {bad:?}"));
        }
        steps += reports.len();
    }
    Ok(format!("{steps} steps checked, zero violations"))
}

fn c7_lemma1_supermod() -> Outcome {
    let mut detail = Vec::new();
    for (check, name) in [
        (SetCheck::Lemma1, "lemma1"),
        (SetCheck::Supermod, "supermod"),
    ] {
        let rows = set_check_campaign(check, SEED, 1000, &(4..=14)).map_err(|e| e.to_string())?;
        ensure!(rows.len() == 1000, "{name}: {} trials", rows.len());
        if let Some(bad) = rows.iter().find(|r| !r.holds) {
            return Err(format!("{name} violated: {bad:?}"));
        }
        detail.push(format!("{name} 1000/1000"));
    }
    Ok(detail.join(", "))
}

fn c8_solver_equivalence() -> Outcome {
    let mut compared = 0;
    for t in 0..200u64 {
        let inst = random_instance(SEED ^ 0x8, t, &(2..=50)).map_err(|e| e.to_string())?;
        let s = &inst.space;
        let priority: Vec<usize> = (0..s.n()).rev().collect();
        for tie in [
            TiePolicy::Lexicographic,
            TiePolicy::Priority(priority),
            TiePolicy::SeededRandom(t),
        ] {
            let fast = rgreedy(s, 1, &tie).map_err(|e| e.to_string())?;
            let slow = rgreedy_reference(s, 1, &tie).map_err(|e| e.to_string())?;
            ensure!(fast == slow, "{} tie={tie}: traces differ", inst.name);
            compared += 1;
        }
    }
    Ok(format!(
        "{compared} full traces identical (200 instances x 3 tie policies)"
    ))
}

fn c9_chain(corpus: &[CorpusInstance]) -> Outcome {
    let tie = TiePolicy::Lexicographic;
    let mut prefixes = 0;
    for inst in corpus.iter().take(50) {
        let s = &inst.space;
        let full = rgreedy(s, 1, &tie).map_err(|e| e.to_string())?;
        for k in 1..=s.n() {
            let direct = rgreedy(s, k, &tie).map_err(|e| e.to_string())?;
            ensure!(
                full.steps[..direct.steps.len()] == direct.steps[..],
                "{} k={k}: not a prefix of the full chain",
                inst.name
            );
            ensure!(
                full.final_set.is_subset(&direct.final_set),
                "{} k={k}: sets not nested",
                inst.name
            );
            prefixes += 1;
        }
    }
    for inst in corpus {
        let (set, opt) = exact_kmedian(&inst.space, 1).map_err(|e| e.to_string())?;
        let fwd = forward_greedy(&inst.space, 1, &tie).map_err(|e| e.to_string())?;
        ensure!(
            fwd.final_cost() == opt && fwd.final_set == set,
            "{}: forward picked {:?} ({}) vs exact {set:?} ({opt})",
            inst.name,
            fwd.final_set,
            fwd.final_cost()
        );
    }
    Ok(format!(
        "{prefixes} prefixes on 50 instances; forward k=1 optimal on {}",
        corpus.len()
    ))
}

fn c10_instrumentation() -> Outcome {
    let s = tree(3);
    let trace = rgreedy(&s, 1, &TiePolicy::priority_of(&s)).map_err(|e| e.to_string())?;
    let b = ball_instrumentation(&s, &trace, 1.0).map_err(|e| e.to_string())?;
    let DistanceOracle::Tree(t) = s.oracle() else {
        unreachable!()
    };
    ensure!(b.h == 3, "h = {}", b.h);
    ensure!(b.zones[0] == [0], "Z_0 = {:?}", b.zones[0]);
    for i in 1..=3u32 {
        let off = t.level_offset(i);
        let level: Vec<usize> = (off..off + t.level_count(i) as usize).collect();
        ensure!(b.zones[i as usize] == level, "Z_{i} is not level {i}");
    }
    let mut z01: Vec<usize> = b.zones[0].iter().chain(&b.zones[1]).copied().collect();
    z01.sort_unstable();
    ensure!(z01 == b.ball, "Z_0 u Z_1 != B");
    let sum: f64 = b.m_static.iter().sum::<f64>() + b.never_serving_weight;
    ensure!(
        sum == s.total_weight(),
        "zone weights {sum} != total {}",
        s.total_weight()
    );
    Ok(format!(
        "zones = levels, |B| = {}, weights {:?} reconcile to {sum}",
        b.ball.len(),
        b.m_static
    ))
}

fn run_bin(dir: &Path, args: &[&str]) -> Result<(Vec<u8>, i32), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_rgreedy"))
        .current_dir(dir)
        .args(args)
        .output()
        .map_err(|e| format!("spawning rgreedy: {e}"))?;
    Ok((out.stdout, out.status.code().unwrap_or(-1)))
}

fn c11_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = dir.path();
    for setup in [
        &["gen", "tree", "--h", "2", "-o", "t2.json"][..],
        &["gen", "star", "--j", "4", "--w", "7", "-o", "s.json"],
        &["gen", "random", "--n", "12", "--seed", "3", "-o", "r.json"],
        &["solve", "t2.json", "-k", "1", "-o", "t2_trace.csv"],
    ] {
        let (_, code) = run_bin(d, setup)?;
        ensure!(code == 0, "{setup:?} exited {code}");
    }
    let commands: Vec<Vec<&str>> = vec![
        vec![
            "gen",
            "random",
            "--n",
            "10",
            "--kind",
            "unit_square_points",
            "--seed",
            "7",
        ],
        vec![
            "gen",
            "random",
            "--n",
            "10",
            "--kind",
            "random_graph",
            "--seed",
            "7",
        ],
        vec!["gen", "tree", "--h", "2", "--expand-graph"],
        vec!["gen", "copies", "s.json", "-k", "3"],
        vec!["solve", "r.json", "-k", "3", "--tie", "random:5"],
        vec![
            "solve", "r.json", "-k", "2", "--alg", "forward", "--format", "json",
        ],
        vec![
            "solve",
            "r.json",
            "-k",
            "1",
            "--alg",
            "rgreedy-ref",
            "--tie",
            "lex",
        ],
        vec!["exact", "r.json", "-k", "3"],
        vec!["verify", "--check", "all", "--trials", "60", "--seed", "9"],
        vec![
            "verify", "--check", "all", "--trials", "40", "--seed", "2", "r.json", "s.json",
        ],
        vec!["sweep", "tree", "--h", "1..2"],
        vec!["sweep", "star", "--j", "3,5", "--w", "10,100"],
        vec![
            "sweep", "random", "--n", "4..8", "--seeds", "3", "-k", "1,2", "--tie", "random:1",
        ],
        vec!["instrument", "t2.json", "--trace", "t2_trace.csv"],
        vec!["instrument", "r.json", "--format", "json"],
    ];
    for args in &commands {
        let (first, code1) = run_bin(d, args)?;
        let (second, code2) = run_bin(d, args)?;
        ensure!(code1 == 0 && code2 == 0, "{args:?} exited {code1}/{code2}");
        ensure!(!first.is_empty(), "{args:?} wrote nothing");
        ensure!(first == second, "{args:?}: output differs between runs");
    }
    Ok(format!(
        "{} commands byte-identical on re-run",
        commands.len()
    ))
}

/// Per-instance results shared by criteria 5 and 6.
struct ChainResult {
    /// `(k, optimal cost, greedy cost)`.
    costs: Vec<(usize, f64, f64)>,
    steps_checked: usize,
    step_violations: Vec<String>,
}

fn chain_results(corpus: &[CorpusInstance]) -> Result<Vec<ChainResult>, String> {
    use rayon::prelude::*;
    corpus
        .par_iter()
        .map(|inst| {
            let bounds =
                chain_bounds(&inst.space, &TiePolicy::Lexicographic).map_err(|e| e.to_string())?;
            let mut costs = Vec::new();
            let mut steps_checked = 0;
            let mut step_violations = Vec::new();
            for (k, opt, _, steps) in &bounds.per_k {
                let greedy = bounds
                    .trace
                    .truncated(*k)
                    .map_err(|e| e.to_string())?
                    .final_cost();
                costs.push((*k, *opt, greedy));
                steps_checked += steps.len();
                step_violations.extend(
                    steps
                        .iter()
                        .filter(|r| !r.holds)
                        .map(|r| format!("k={k} {r:?}")),
                );
            }
            Ok(ChainResult {
                costs,
                steps_checked,
                step_violations,
            })
        })
        .collect()
}

fn main() -> ExitCode {
    let mut failures = 0;
    let mut report = |n: usize, title: &str, outcome: Outcome| match outcome {
        Ok(detail) => println!("PASS criterion {n:>2} {title}: {detail}"),
        Err(why) => {
            failures += 1;
            println!("FAIL criterion {n:>2} {title}: {why}");
        }
    };
    report(1, "tree h=2 fixture", c1_tree_h2());
    report(2, "tree h=3 fixture", c2_tree_h3());
    report(3, "generator arithmetic", c3_generator_arithmetic());
    report(4, "star tightness", c4_star());

    let start = Instant::now();
    let corpus = corpus();
    let chains = chain_results(&corpus);
    let elapsed = start.elapsed();
    match chains {
        Ok(chains) => {
            let harmonic = c5_harmonic(&corpus, &chains).and_then(|d| {
                within(elapsed, Duration::from_secs(300))?;
                Ok(format!("{d} in {elapsed:.2?}"))
            });
            report(5, "harmonic bound", harmonic);
            report(6, "per-step bound", c6_step_bounds(&corpus, &chains));
        }
        Err(e) => {
            report(5, "harmonic bound", Err(e.clone()));
            report(6, "per-step bound", Err(e));
        }
    }
    report(
        7,
        "serving-set and supermodularity fuzz",
        c7_lemma1_supermod(),
    );
    report(8, "fast vs reference solver", c8_solver_equivalence());
    report(9, "nested chain and forward 1-median", c9_chain(&corpus));
    report(10, "ball instrumentation on h=3", c10_instrumentation());
    report(11, "CLI determinism", c11_determinism());

    if failures == 0 {
        println!("acceptance: all 11 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} criteria failed");
        ExitCode::FAILURE
    }
}
