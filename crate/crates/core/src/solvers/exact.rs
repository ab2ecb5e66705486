use super::check_k;
use crate::error::{Error, Result};
use crate::metric::{FacilitySet, WeightedMetricSpace};

pub const DEFAULT_SUBSET_BUDGET: u128 = 10_000_000;

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

pub fn exact_kmedian(space: &WeightedMetricSpace, k: usize) -> Result<(FacilitySet, f64)> {
    exact_kmedian_with_budget(space, k, DEFAULT_SUBSET_BUDGET)
}

/// Optimal `k`-median by enumerating every `k`-subset in lexicographic order;
/// the first optimal subset wins ties. `k = 1` is always a linear scan.
pub fn exact_kmedian_with_budget(
    space: &WeightedMetricSpace,
    k: usize,
    budget: u128,
) -> Result<(FacilitySet, f64)> {
    check_k(space, k)?;
    let n = space.n();
    let subsets = binomial(n, k);
    if k > 1 && subsets > budget {
        return Err(Error::Budget {
            n,
            k,
            subsets,
            budget,
        });
    }
    let mut combo: Vec<usize> = (0..k).collect();
    let mut best_cost = f64::INFINITY;
    let mut best = combo.clone();
    loop {
        let c = space.cost_unchecked(&combo);
        if c < best_cost {
            best_cost = c;
            best.copy_from_slice(&combo);
        }
        // next combination in lexicographic order
        let Some(i) = (0..k).rev().find(|&i| combo[i] < n - k + i) else {
            break;
        };
        combo[i] += 1;
        for j in i + 1..k {
            combo[j] = combo[j - 1] + 1;
        }
    }
    Ok((FacilitySet::from_sorted(best), best_cost))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{gen_star, StarInstanceParams};
    use crate::metric::fixtures::line3;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(14, 7), 3432);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(1794, 1), 1794);
    }

    #[test]
    fn all_points_cost_zero() {
        let (set, c) = exact_kmedian(&line3(), 3).unwrap();
        assert_eq!(set, FacilitySet::all(3));
        assert_eq!(c, 0.0);
    }

    #[test]
    fn line_two_median() {
        let (set, c) = exact_kmedian(&line3(), 2).unwrap();
        assert_eq!(set.members(), &[0, 1]);
        assert_eq!(c, 1.0);
    }

    #[test]
    fn star_one_median() {
        let s = gen_star(StarInstanceParams { j: 3, w: 5.0 }).unwrap();
        let (set, c) = exact_kmedian(&s, 1).unwrap();
        assert_eq!(set.members(), &[0]);
        assert_eq!(c, 21.0);
    }

    #[test]
    fn budget_refusal_names_subsets() {
        let s = gen_star(StarInstanceParams { j: 10, w: 2.0 }).unwrap();
        let err = exact_kmedian_with_budget(&s, 5, 100).unwrap_err();
        assert!(matches!(err, Error::Budget { subsets: 20349, .. }), "{err}");
        assert!(err.to_string().contains("C(21,5)"));
        assert!(exact_kmedian_with_budget(&s, 1, 0).is_ok());
    }
}
