//! Seeded fuzz campaigns over random instances. Every trial draws from its
//! own ChaCha stream `(seed, trial)`, so results do not depend on thread
//! scheduling and rows come back in trial order.

use std::ops::RangeInclusive;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{
    check_lemma1, check_supermodularity, general_inequality_with_opt, harmonic_report,
    step_bounds_with_opt, BoundReport, CheckRow,
};
use crate::error::{Error, Result};
use crate::gen::{gen_random, RandomKind};
use crate::metric::{FacilitySet, WeightedMetricSpace};
use crate::solvers::{exact_kmedian, rgreedy, GreedyTrace, TiePolicy};

/// Sizes used by the default corpus.
pub const DEFAULT_SIZES: RangeInclusive<usize> = 4..=14;

#[derive(Debug, Clone)]
pub struct CorpusInstance {
    pub name: String,
    pub space: WeightedMetricSpace,
}

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Random instance for one trial: even trials use random graphs, odd
/// trials Euclidean points.
pub fn random_instance(
    seed: u64,
    trial: u64,
    sizes: &RangeInclusive<usize>,
) -> Result<CorpusInstance> {
    if sizes.is_empty() || *sizes.start() == 0 {
        return Err(Error::input(format!(
            "instance size range {sizes:?} is empty or contains 0"
        )));
    }
    let mut rng = trial_rng(seed, trial);
    let n = rng.gen_range(sizes.clone());
    let kind = if trial.is_multiple_of(2) {
        RandomKind::RandomGraph
    } else {
        RandomKind::UnitSquarePoints
    };
    let instance_seed: u64 = rng.gen();
    let kind_name = match kind {
        RandomKind::RandomGraph => "random_graph",
        RandomKind::UnitSquarePoints => "unit_square_points",
    };
    Ok(CorpusInstance {
        name: format!("{kind_name}(n={n},seed={instance_seed})"),
        space: gen_random(n, kind, instance_seed)?,
    })
}

pub fn random_corpus(
    seed: u64,
    count: usize,
    sizes: &RangeInclusive<usize>,
) -> Result<Vec<CorpusInstance>> {
    (0..count as u64)
        .into_par_iter()
        .map(|t| random_instance(seed, t, sizes))
        .collect()
}

/// Uniform random subset of `0..n` of exactly `size` elements.
pub fn random_subset<R: Rng>(rng: &mut R, n: usize, size: usize) -> FacilitySet {
    FacilitySet::new(sample(rng, n, size)).expect("distinct sample")
}

fn join_ids(s: &FacilitySet) -> String {
    s.members()
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn sets_param(label_a: &str, a: &FacilitySet, label_b: &str, b: &FacilitySet) -> String {
    format!(
        "{label_a}={{{}}} {label_b}={{{}}}",
        join_ids(a),
        join_ids(b)
    )
}

/// One serving-set bound check on a random `(R, M)` pair of `space`.
pub fn lemma1_trial<R: Rng>(
    space: &WeightedMetricSpace,
    rng: &mut R,
) -> Result<(String, BoundReport)> {
    let n = space.n();
    let r_size = rng.gen_range(1..=n);
    let r = random_subset(rng, n, r_size);
    let m_size = rng.gen_range(1..=n);
    let m = random_subset(rng, n, m_size);
    Ok((sets_param("R", &r, "M", &m), check_lemma1(space, &r, &m)?))
}

/// One supermodularity check on a random `Q ⊊ R`; needs `n >= 2`.
pub fn supermod_trial<R: Rng>(
    space: &WeightedMetricSpace,
    rng: &mut R,
) -> Result<(String, BoundReport)> {
    let n = space.n();
    if n < 2 {
        return Err(Error::input(
            "supermodularity trials need at least 2 points",
        ));
    }
    let r_size = rng.gen_range(2..=n);
    let r = random_subset(rng, n, r_size);
    let q_size = rng.gen_range(1..r.len());
    let picks = sample(rng, r.len(), q_size);
    let q = FacilitySet::new(picks.into_iter().map(|i| r.members()[i])).expect("distinct");
    Ok((
        sets_param("Q", &q, "R", &r),
        check_supermodularity(space, &q, &r)?,
    ))
}

/// One general-inequality check on a random `R` with `|R| >= 2`.
pub fn general_trial<R: Rng>(
    space: &WeightedMetricSpace,
    opt1: f64,
    rng: &mut R,
) -> Result<(String, BoundReport)> {
    let n = space.n();
    if n < 2 {
        return Err(Error::input(
            "general-inequality trials need at least 2 points",
        ));
    }
    let r_size = rng.gen_range(2..=n);
    let r = random_subset(rng, n, r_size);
    let params = format!("R={{{}}}", join_ids(&r));
    Ok((params, general_inequality_with_opt(space, &r, opt1)?))
}

/// Which randomized set check to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetCheck {
    Lemma1,
    Supermod,
    General,
}

/// `trials` independent instances, one randomized set check each.
pub fn set_check_campaign(
    check: SetCheck,
    seed: u64,
    trials: usize,
    sizes: &RangeInclusive<usize>,
) -> Result<Vec<CheckRow>> {
    (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let inst = random_instance(seed, t, sizes)?;
            let mut rng = trial_rng(seed ^ 0x5e75_5e75, t);
            let (params, report) = run_set_check(check, &inst.space, &mut rng)?;
            Ok(CheckRow::new(inst.name, params, &report))
        })
        .collect()
}

/// `trials` randomized set checks on one fixed instance.
pub fn set_check_on(
    check: SetCheck,
    space: &WeightedMetricSpace,
    name: &str,
    seed: u64,
    trials: usize,
) -> Result<Vec<CheckRow>> {
    let opt1 = match check {
        SetCheck::General => Some(exact_kmedian(space, 1)?.1),
        _ => None,
    };
    (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let (params, report) = match (check, opt1) {
                (SetCheck::General, Some(opt)) => general_trial(space, opt, &mut rng)?,
                _ => run_set_check(check, space, &mut rng)?,
            };
            Ok(CheckRow::new(name, params, &report))
        })
        .collect()
}

fn run_set_check<R: Rng>(
    check: SetCheck,
    space: &WeightedMetricSpace,
    rng: &mut R,
) -> Result<(String, BoundReport)> {
    match check {
        SetCheck::Lemma1 => lemma1_trial(space, rng),
        SetCheck::Supermod => supermod_trial(space, rng),
        SetCheck::General => {
            let (_, opt1) = exact_kmedian(space, 1)?;
            general_trial(space, opt1, rng)
        }
    }
}

/// Harmonic and per-step reports of one instance for every `k`, all taken
/// from a single reverse chain down to one facility.
#[derive(Debug, Clone)]
pub struct ChainBounds {
    pub trace: GreedyTrace,
    /// `(k, optimal cost, harmonic report, per-step reports)` for `k` in `1..=n`.
    pub per_k: Vec<(usize, f64, BoundReport, Vec<BoundReport>)>,
}

pub fn chain_bounds(space: &WeightedMetricSpace, tie: &TiePolicy) -> Result<ChainBounds> {
    let n = space.n();
    let trace = rgreedy(space, 1, tie)?;
    let tol = space.tolerance();
    let mut per_k = Vec::with_capacity(n);
    for k in 1..=n {
        let (_, opt) = exact_kmedian(space, k)?;
        let prefix = trace.truncated(k)?;
        let harmonic = harmonic_report(n, k, prefix.final_cost(), opt, tol);
        let steps = step_bounds_with_opt(&prefix, k, opt, tol)?;
        per_k.push((k, opt, harmonic, steps));
    }
    Ok(ChainBounds { trace, per_k })
}

/// Rows for the harmonic check (every `k`) and the step check (one row per
/// `k < n`, reporting the tightest step or the first violation).
pub fn chain_rows(
    name: &str,
    bounds: &ChainBounds,
    tie: &TiePolicy,
) -> (Vec<CheckRow>, Vec<CheckRow>) {
    let mut harmonic_rows = Vec::new();
    let mut step_rows = Vec::new();
    for (k, _, harmonic, steps) in &bounds.per_k {
        let params = format!("k={k} tie={tie}");
        harmonic_rows.push(CheckRow::new(name, params.clone(), harmonic));
        let worst = steps
            .iter()
            .find(|r| !r.holds)
            .or_else(|| steps.iter().min_by(|a, b| a.slack.total_cmp(&b.slack)));
        if let Some(r) = worst {
            step_rows.push(CheckRow::new(name, params, r));
        }
    }
    (harmonic_rows, step_rows)
}

pub fn corpus_chain_bounds(corpus: &[CorpusInstance], tie: &TiePolicy) -> Result<Vec<ChainBounds>> {
    corpus
        .par_iter()
        .map(|c| chain_bounds(&c.space, tie))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_reproducible() {
        let a = random_corpus(9, 6, &DEFAULT_SIZES).unwrap();
        let b = random_corpus(9, 6, &DEFAULT_SIZES).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.name, y.name);
            assert_eq!(x.space, y.space);
            assert!(DEFAULT_SIZES.contains(&x.space.n()));
        }
    }

    #[test]
    fn empty_size_range_rejected() {
        #[allow(clippy::reversed_empty_ranges)]
        let bad = 5..=4;
        assert!(random_instance(1, 0, &bad).is_err());
    }

    #[test]
    fn small_campaigns_hold() {
        for check in [SetCheck::Lemma1, SetCheck::Supermod, SetCheck::General] {
            let rows = set_check_campaign(check, 3, 30, &DEFAULT_SIZES).unwrap();
            assert_eq!(rows.len(), 30);
            assert!(rows.iter().all(|r| r.holds), "{check:?}");
        }
    }

    #[test]
    fn chain_rows_cover_every_k() {
        let inst = random_instance(4, 0, &(6..=6)).unwrap();
        let bounds = chain_bounds(&inst.space, &TiePolicy::Lexicographic).unwrap();
        let (h, s) = chain_rows(&inst.name, &bounds, &TiePolicy::Lexicographic);
        assert_eq!(h.len(), 6);
        assert_eq!(s.len(), 5);
        assert!(h.iter().chain(&s).all(|r| r.holds));
    }
}
