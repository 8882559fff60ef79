//! Random subsets, product sets and Monte Carlo estimates of
//! `P(G, k) = Pr[AB ∪ BA = G]`.
//!
//! Trials run in parallel on a rayon pool. Each trial owns a random stream
//! derived from `(master_seed, k, trial_index)` and aggregation is integer
//! only, so results are bitwise identical for any worker count.

mod bitset;
mod stream;
mod sweep;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

pub use bitset::Bitset;
pub use stream::{trial_stream, TrialRng, MAX_STREAM_FIELD};
pub use sweep::{
    bisect_crossing, isotonic_nondecreasing, locate_crossing, sweep, wilson_interval, window_k_values,
    BisectionOutcome, Crossing, SweepCurve, SweepPoint, SweepSettings,
};

use crate::error::{DomainError, Error};
use crate::group::{Group, GroupSpec};

/// Which covering event a trial tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// `AB ∪ BA = G`.
    Both,
    /// `AB = G`.
    AbOnly,
    /// `AA = G`; only `A` is drawn.
    Aa,
}

impl FromStr for Variant {
    type Err = DomainError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "both" => Ok(Variant::Both),
            "ab-only" => Ok(Variant::AbOnly),
            "aa" => Ok(Variant::Aa),
            other => Err(DomainError::Invalid(format!(
                "unknown variant `{other}` (expected both, ab-only or aa)"
            ))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Both => "both",
            Variant::AbOnly => "ab-only",
            Variant::Aa => "aa",
        })
    }
}

/// Draws `k` independent uniform elements and returns their sorted support.
///
/// `gen_range` samples by rejection, so there is no modulo bias.
pub fn draw_subset(g: &Group, k: usize, rng: &mut impl Rng) -> Vec<usize> {
    let n = g.order();
    let mut out: Vec<usize> = (0..k).map(|_| rng.gen_range(0..n)).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Marks the product set selected by `variant` in `out` (which is cleared
/// first). For [`Variant::Aa`] the set `b` is ignored.
pub fn product_union_into(g: &Group, a: &[usize], b: &[usize], variant: Variant, out: &mut Bitset) {
    out.clear();
    if let Some(table) = g.table() {
        let n = g.order();
        match variant {
            Variant::Both => {
                for &x in a {
                    let row = &table[x * n..(x + 1) * n];
                    for &y in b {
                        out.insert(row[y] as usize);
                        out.insert(table[y * n + x] as usize);
                    }
                }
            }
            Variant::AbOnly => {
                for &x in a {
                    let row = &table[x * n..(x + 1) * n];
                    for &y in b {
                        out.insert(row[y] as usize);
                    }
                }
            }
            Variant::Aa => {
                for &x in a {
                    let row = &table[x * n..(x + 1) * n];
                    for &y in a {
                        out.insert(row[y] as usize);
                    }
                }
            }
        }
        return;
    }
    let (left, right) = match variant {
        Variant::Aa => (a, a),
        _ => (a, b),
    };
    for &x in left {
        for &y in right {
            out.insert(g.multiply(x, y));
            if variant == Variant::Both {
                out.insert(g.multiply(y, x));
            }
        }
    }
}

pub fn product_union(g: &Group, a: &[usize], b: &[usize], variant: Variant) -> Bitset {
    let mut out = Bitset::new(g.order());
    product_union_into(g, a, b, variant, &mut out);
    out
}

/// A single Monte Carlo configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialPlan {
    pub group: GroupSpec,
    /// Draws for `A`.
    pub k: usize,
    /// Draws for `B` (ignored for [`Variant::Aa`]).
    pub m: usize,
    pub variant: Variant,
    pub trials: u64,
    pub master_seed: u64,
}

/// Summary of `|S|` over a batch of trials.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MissStats {
    pub trials: u64,
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    /// `|S|` value to number of trials.
    pub histogram: BTreeMap<usize, u64>,
}

impl MissStats {
    fn from_histogram(histogram: BTreeMap<usize, u64>) -> Self {
        let trials: u64 = histogram.values().sum();
        let t = trials as f64;
        let mean = histogram.iter().map(|(&s, &c)| s as f64 * c as f64).sum::<f64>() / t;
        let variance = if trials > 1 {
            histogram
                .iter()
                .map(|(&s, &c)| c as f64 * (s as f64 - mean).powi(2))
                .sum::<f64>()
                / (t - 1.0)
        } else {
            0.0
        };
        Self {
            trials,
            mean,
            variance,
            histogram,
        }
    }

    pub fn successes(&self) -> u64 {
        self.histogram.get(&0).copied().unwrap_or(0)
    }
}

/// Runs batches of trials on one group with a fixed seed and variant.
pub struct Simulator<'g> {
    group: &'g Group,
    variant: Variant,
    master_seed: u64,
    pool: Option<rayon::ThreadPool>,
}

impl<'g> Simulator<'g> {
    pub fn new(group: &'g Group, variant: Variant, master_seed: u64) -> Self {
        Self {
            group,
            variant,
            master_seed,
            pool: None,
        }
    }

    /// Uses a dedicated pool of `workers` threads instead of the global pool.
    pub fn with_workers(mut self, workers: usize) -> Result<Self, DomainError> {
        if workers == 0 {
            return Err(DomainError::Invalid("worker count must be positive".into()));
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| DomainError::Invalid(format!("cannot start worker pool: {e}")))?;
        self.pool = Some(pool);
        Ok(self)
    }

    pub fn group(&self) -> &'g Group {
        self.group
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    /// `|S|` for one trial; `trial` selects the random stream.
    pub fn trial_miss(&self, k: usize, m: usize, trial: u64, scratch: &mut Bitset) -> usize {
        let mut rng = trial_stream(self.master_seed, k as u64, trial);
        let a = draw_subset(self.group, k, &mut rng);
        let b = match self.variant {
            Variant::Aa => Vec::new(),
            _ => draw_subset(self.group, m, &mut rng),
        };
        product_union_into(self.group, &a, &b, self.variant, scratch);
        self.group.order() - scratch.count()
    }

    fn check(&self, k: usize, m: usize, trials: u64) -> Result<(), DomainError> {
        if k == 0 || (m == 0 && self.variant != Variant::Aa) {
            return Err(DomainError::Invalid("k and m must be at least 1".into()));
        }
        if trials == 0 {
            return Err(DomainError::Invalid("trials must be at least 1".into()));
        }
        if k as u64 > MAX_STREAM_FIELD || trials - 1 > MAX_STREAM_FIELD {
            return Err(DomainError::Invalid("k or trial count exceeds the stream id range".into()));
        }
        Ok(())
    }

    /// Per-trial `|S|` values in trial order.
    pub fn trial_misses(&self, k: usize, m: usize, trials: u64) -> Result<Vec<usize>, DomainError> {
        self.check(k, m, trials)?;
        let n = self.group.order();
        let run = || {
            (0..trials)
                .into_par_iter()
                .map_init(|| Bitset::new(n), |scratch, t| self.trial_miss(k, m, t, scratch))
                .collect()
        };
        Ok(self.install(run))
    }

    pub fn miss_stats(&self, k: usize, m: usize, trials: u64) -> Result<MissStats, DomainError> {
        self.check(k, m, trials)?;
        let n = self.group.order();
        let run = || {
            (0..trials)
                .into_par_iter()
                .fold(
                    || (Bitset::new(n), BTreeMap::<usize, u64>::new()),
                    |(mut scratch, mut hist), t| {
                        *hist.entry(self.trial_miss(k, m, t, &mut scratch)).or_default() += 1;
                        (scratch, hist)
                    },
                )
                .map(|(_, hist)| hist)
                .reduce(BTreeMap::new, |mut a, b| {
                    for (s, c) in b {
                        *a.entry(s).or_default() += c;
                    }
                    a
                })
        };
        Ok(MissStats::from_histogram(self.install(run)))
    }

    pub fn estimate(&self, k: usize, m: usize, trials: u64) -> Result<SweepPoint, DomainError> {
        self.check(k, m, trials)?;
        let n = self.group.order();
        let run = || {
            (0..trials)
                .into_par_iter()
                .map_init(|| Bitset::new(n), |scratch, t| (self.trial_miss(k, m, t, scratch) == 0) as u64)
                .sum::<u64>()
        };
        let successes = self.install(run);
        Ok(SweepPoint::new(k, m, trials, successes))
    }

    fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        match &self.pool {
            Some(pool) => pool.install(f),
            None => f(),
        }
    }
}

/// Builds the plan's group and estimates `P(G, k)` from `plan.trials` trials.
pub fn estimate_p(plan: &TrialPlan) -> Result<SweepPoint, Error> {
    let group = plan.group.build()?;
    Ok(Simulator::new(&group, plan.variant, plan.master_seed).estimate(plan.k, plan.m, plan.trials)?)
}

/// `|S|` statistics for `trials` trials with `k` draws on each side.
pub fn miss_stats(g: &Group, k: usize, trials: u64, master_seed: u64) -> Result<MissStats, DomainError> {
    Simulator::new(g, Variant::Both, master_seed).miss_stats(k, k, trials)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::*;

    #[test]
    fn product_union_examples() {
        let c2 = build_cyclic(2).unwrap();
        assert!(product_union(&c2, &[0, 1], &[0], Variant::Both).is_full());

        let s3 = build_symmetric(3).unwrap();
        let u = product_union(&s3, &[0], &[0], Variant::Both);
        assert_eq!(u.iter().collect::<Vec<_>>(), vec![0]);

        let c7 = build_cyclic(7).unwrap();
        let (a, b) = (vec![1, 3], vec![2, 5, 6]);
        assert_eq!(
            product_union(&c7, &a, &b, Variant::Both),
            product_union(&c7, &a, &b, Variant::AbOnly)
        );
    }

    #[test]
    fn aa_uses_pairs_from_a() {
        let c5 = build_cyclic(5).unwrap();
        let u = product_union(&c5, &[1, 2], &[0, 3], Variant::Aa);
        assert_eq!(u.iter().collect::<Vec<_>>(), vec![2, 3, 4]);
    }

    #[test]
    fn permutation_backend_products_match_table() {
        let dense = build_symmetric_with(4, BackendKind::DenseTable).unwrap();
        let perm = build_symmetric_with(4, BackendKind::Permutation).unwrap();
        let (a, b) = (vec![1, 5, 9, 17], vec![0, 3, 22]);
        for v in [Variant::Both, Variant::AbOnly, Variant::Aa] {
            assert_eq!(product_union(&dense, &a, &b, v), product_union(&perm, &a, &b, v));
        }
    }

    #[test]
    fn draw_subset_trivial_group() {
        let c1 = build_cyclic(1).unwrap();
        let mut rng = trial_stream(1, 1, 0);
        assert_eq!(draw_subset(&c1, 5, &mut rng), vec![0]);
    }

    #[test]
    fn k_one_draw_is_uniform() {
        let n = 10;
        let g = build_cyclic(n).unwrap();
        let draws = 100_000u64;
        let mut counts = vec![0u64; n];
        for t in 0..draws {
            let mut rng = trial_stream(99, 1, t);
            counts[draw_subset(&g, 1, &mut rng)[0]] += 1;
        }
        let p = 1.0 / n as f64;
        let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
        for c in counts {
            assert!((c as f64 - draws as f64 * p).abs() < 5.0 * sigma, "{c}");
        }
    }

    #[test]
    fn k_one_leaves_at_least_n_minus_two() {
        let g = build_dihedral(5).unwrap();
        let stats = miss_stats(&g, 1, 500, 3).unwrap();
        assert!(stats.histogram.keys().all(|&s| s >= g.order() - 2));
        assert_eq!(stats.successes(), 0);
    }

    #[test]
    fn worker_count_does_not_change_outcomes() {
        let g = build_dihedral(6).unwrap();
        let base = Simulator::new(&g, Variant::Both, 42).trial_misses(3, 4, 300).unwrap();
        for w in [1, 2, 8] {
            let sim = Simulator::new(&g, Variant::Both, 42).with_workers(w).unwrap();
            assert_eq!(sim.trial_misses(3, 4, 300).unwrap(), base);
        }
    }

    #[test]
    fn invalid_plans_are_rejected() {
        let g = build_cyclic(4).unwrap();
        let sim = Simulator::new(&g, Variant::Both, 0);
        assert!(sim.estimate(0, 1, 10).is_err());
        assert!(sim.estimate(1, 0, 10).is_err());
        assert!(sim.estimate(1, 1, 0).is_err());
        assert!(Simulator::new(&g, Variant::Aa, 0).estimate(2, 0, 10).is_ok());
        let bad = TrialPlan {
            group: GroupSpec::Symmetric(12),
            k: 2,
            m: 2,
            variant: Variant::Both,
            trials: 10,
            master_seed: 0,
        };
        assert!(matches!(estimate_p(&bad), Err(Error::Group(_))));
    }

    #[test]
    fn variant_parsing() {
        for v in [Variant::Both, Variant::AbOnly, Variant::Aa] {
            assert_eq!(v.to_string().parse::<Variant>().unwrap(), v);
        }
        assert!("ba".parse::<Variant>().is_err());
    }
}
