//! Brute-force enumeration over every equally likely draw.
//!
//! Nothing here shares code with the closed forms in [`crate::suen`] or the
//! bitset product routine in [`crate::montecarlo`]: products are recomputed
//! with nested loops over [`Group::multiply`] so that agreement between the
//! modules is evidence rather than tautology.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::DomainError;
use crate::group::Group;
use crate::montecarlo::Variant;
use crate::rational::Exact;

/// Largest order for single-indicator enumeration (`n^2` pairs).
pub const MAX_SINGLE_ORDER: usize = 512;
/// Largest order for pair-indicator enumeration (`n^3` triples).
pub const MAX_PAIR_ORDER: usize = 128;
/// Largest number of draw tuples enumerated by [`exact_p`] and friends.
pub const MAX_OUTCOMES: u128 = 100_000_000;

/// Which index the two adjacent indicators share.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SharedAxis {
    /// `v = (i, j)`, `u = (i, l)`: the `a` draw is shared.
    Row,
    /// `v = (i, j)`, `u = (l, j)`: the `b` draw is shared.
    Column,
}

/// Exact distribution of an integer observable over `total` equally likely
/// outcomes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactDistribution {
    pub total: u64,
    pub counts: BTreeMap<usize, u64>,
}

impl ExactDistribution {
    pub fn probability(&self, value: usize) -> Exact {
        Exact::new(
            self.counts.get(&value).copied().unwrap_or(0) as i128,
            self.total as i128,
        )
    }

    pub fn mean(&self) -> Exact {
        let sum: i128 = self.counts.iter().map(|(&v, &c)| v as i128 * c as i128).sum();
        Exact::new(sum, self.total as i128)
    }
}

impl Serialize for ExactDistribution {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        struct Counts<'a>(&'a BTreeMap<usize, u64>);
        impl Serialize for Counts<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(self.0.len()))?;
                for (v, c) in self.0 {
                    m.serialize_entry(&v.to_string(), &c.to_string())?;
                }
                m.end()
            }
        }
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("total", &self.total.to_string())?;
        m.serialize_entry("counts", &Counts(&self.counts))?;
        m.end()
    }
}

fn check_element(g: &Group, x: usize) -> Result<(), DomainError> {
    if x >= g.order() {
        return Err(DomainError::ElementOutOfRange {
            element: x,
            order: g.order(),
        });
    }
    Ok(())
}

fn hits(g: &Group, a: usize, b: usize, x: usize) -> bool {
    g.multiply(a, b) == x || g.multiply(b, a) == x
}

/// `Pr[ab = x or ba = x]` over all `n^2` pairs.
pub fn exact_single_mean(g: &Group, x: usize) -> Result<Exact, DomainError> {
    let n = g.order();
    if n > MAX_SINGLE_ORDER {
        return Err(DomainError::TooLarge(format!("n = {n} > {MAX_SINGLE_ORDER}")));
    }
    check_element(g, x)?;
    let count = (0..n)
        .into_par_iter()
        .map(|a| (0..n).filter(|&b| hits(g, a, b, x)).count() as i128)
        .sum::<i128>();
    Ok(Exact::new(count, (n * n) as i128))
}

/// `E[I_v(x) I_u(y)]` for adjacent `v, u` sharing `axis`, over all `n^3`
/// triples, for every `y` at once.
pub fn exact_pair_means(g: &Group, x: usize, axis: SharedAxis) -> Result<Vec<Exact>, DomainError> {
    let n = g.order();
    if n > MAX_PAIR_ORDER {
        return Err(DomainError::TooLarge(format!("n = {n} > {MAX_PAIR_ORDER}")));
    }
    check_element(g, x)?;
    // s is the shared draw, t and t2 the free ones; v looks at (s, t) and x,
    // u at (s, t2) and y. For a shared column s plays the role of `b`.
    let pair_hit = |s: usize, t: usize, z: usize| match axis {
        SharedAxis::Row => hits(g, s, t, z),
        SharedAxis::Column => hits(g, t, s, z),
    };
    let counts = (0..n)
        .into_par_iter()
        .map(|s| {
            let mut local = vec![0i128; n];
            let v_hits = (0..n).filter(|&t| pair_hit(s, t, x)).count() as i128;
            if v_hits == 0 {
                return local;
            }
            for t2 in 0..n {
                let (p, q) = (g.multiply(s, t2), g.multiply(t2, s));
                local[p] += v_hits;
                if q != p {
                    local[q] += v_hits;
                }
            }
            local
        })
        .reduce(
            || vec![0i128; n],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    let total = (n * n * n) as i128;
    Ok(counts.into_iter().map(|c| Exact::new(c, total)).collect())
}

/// Single-pair version of [`exact_pair_means`].
pub fn exact_pair_mean(g: &Group, x: usize, y: usize, axis: SharedAxis) -> Result<Exact, DomainError> {
    check_element(g, y)?;
    Ok(exact_pair_means(g, x, axis)?[y])
}

struct Enumeration {
    total: u64,
    histogram: BTreeMap<usize, u64>,
    point_miss: Vec<u64>,
}

fn outcome_count(n: usize, draws: usize) -> Result<u64, DomainError> {
    let total = (n as u128).checked_pow(draws as u32).filter(|&t| t <= MAX_OUTCOMES);
    total.map(|t| t as u64).ok_or_else(|| {
        DomainError::TooLarge(format!("{n}^{draws} outcomes exceed the cap of {MAX_OUTCOMES}"))
    })
}

/// Walks every draw tuple `(a_1..a_k, b_1..b_m)` in lexicographic order and
/// records which elements the product set misses.
fn enumerate(g: &Group, k: usize, m: usize, variant: Variant) -> Result<Enumeration, DomainError> {
    if k == 0 || (m == 0 && variant != Variant::Aa) {
        return Err(DomainError::Invalid("k and m must be at least 1".into()));
    }
    let n = g.order();
    let m = if variant == Variant::Aa { 0 } else { m };
    let draws = k + m;
    let total = outcome_count(n, draws)?;

    let partial = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut histogram = BTreeMap::<usize, u64>::new();
            let mut point_miss = vec![0u64; n];
            let mut tuple = vec![0usize; draws];
            tuple[0] = first;
            let mut covered = vec![false; n];
            loop {
                covered.iter_mut().for_each(|c| *c = false);
                let (a, b) = tuple.split_at(k);
                match variant {
                    Variant::Both => {
                        for &x in a {
                            for &y in b {
                                covered[g.multiply(x, y)] = true;
                                covered[g.multiply(y, x)] = true;
                            }
                        }
                    }
                    Variant::AbOnly => {
                        for &x in a {
                            for &y in b {
                                covered[g.multiply(x, y)] = true;
                            }
                        }
                    }
                    Variant::Aa => {
                        for &x in a {
                            for &y in a {
                                covered[g.multiply(x, y)] = true;
                            }
                        }
                    }
                }
                let mut missed = 0;
                for (z, &c) in covered.iter().enumerate() {
                    if !c {
                        missed += 1;
                        point_miss[z] += 1;
                    }
                }
                *histogram.entry(missed).or_default() += 1;

                // odometer over positions 1..draws
                let mut pos = draws;
                loop {
                    pos -= 1;
                    if pos == 0 {
                        return (histogram, point_miss);
                    }
                    tuple[pos] += 1;
                    if tuple[pos] < n {
                        break;
                    }
                    tuple[pos] = 0;
                }
            }
        })
        .collect::<Vec<_>>();

    let mut histogram = BTreeMap::new();
    let mut point_miss = vec![0u64; n];
    for (h, p) in partial {
        for (v, c) in h {
            *histogram.entry(v).or_default() += c;
        }
        for (a, b) in point_miss.iter_mut().zip(p) {
            *a += b;
        }
    }
    Ok(Enumeration {
        total,
        histogram,
        point_miss,
    })
}

/// Distribution of `|S|`, `S = G \ (product set)`, over all `n^{k+m}` tuples
/// (`n^k` for [`Variant::Aa`]).
pub fn exact_miss_distribution(g: &Group, k: usize, m: usize, variant: Variant) -> Result<ExactDistribution, DomainError> {
    let e = enumerate(g, k, m, variant)?;
    Ok(ExactDistribution {
        total: e.total,
        counts: e.histogram,
    })
}

/// Exact probability that the product set is all of `G`.
pub fn exact_p(g: &Group, k: usize, m: usize, variant: Variant) -> Result<Exact, DomainError> {
    Ok(exact_miss_distribution(g, k, m, variant)?.probability(0))
}

/// `Pr[x ∈ S]` for every element `x`.
pub fn exact_point_miss(g: &Group, k: usize, m: usize, variant: Variant) -> Result<Vec<Exact>, DomainError> {
    let e = enumerate(g, k, m, variant)?;
    Ok(e.point_miss
        .into_iter()
        .map(|c| Exact::new(c as i128, e.total as i128))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::*;
    use crate::rational::exact;

    #[test]
    fn single_mean_examples() {
        let c6 = build_cyclic(6).unwrap();
        for x in 0..6 {
            assert_eq!(exact_single_mean(&c6, x).unwrap(), exact(1, 6));
        }
        let s3 = build_symmetric(3).unwrap();
        let t = (0..6).find(|&x| s3.profile().centralizer_size(x) == 2).unwrap();
        assert_eq!(exact_single_mean(&s3, t).unwrap(), exact(10, 36));
        assert!(exact_single_mean(&build_cyclic(513).unwrap(), 0).is_err());
    }

    #[test]
    fn pair_mean_examples() {
        let s3 = build_symmetric(3).unwrap();
        let t = (0..6).find(|&x| s3.profile().centralizer_size(x) == 2).unwrap();
        for axis in [SharedAxis::Row, SharedAxis::Column] {
            assert_eq!(exact_pair_mean(&s3, t, t, axis).unwrap(), exact(18, 216));
        }
        let c4 = build_cyclic(4).unwrap();
        assert_eq!(exact_pair_mean(&c4, 1, 3, SharedAxis::Row).unwrap(), exact(1, 16));
        assert!(exact_pair_mean(&build_cyclic(129).unwrap(), 0, 0, SharedAxis::Row).is_err());
    }

    #[test]
    fn pair_means_match_single_pair_scan() {
        // direct n^3 triple count for one (x, y), no batching
        let d = build_dihedral(3).unwrap();
        let n = d.order();
        for (x, y) in [(1, 4), (3, 3), (0, 5)] {
            let mut count = 0;
            for a in 0..n {
                for b in 0..n {
                    for b2 in 0..n {
                        if hits(&d, a, b, x) && hits(&d, a, b2, y) {
                            count += 1;
                        }
                    }
                }
            }
            assert_eq!(
                exact_pair_mean(&d, x, y, SharedAxis::Row).unwrap(),
                exact(count, (n * n * n) as i128)
            );
        }
    }

    #[test]
    fn exact_p_examples() {
        let c2 = build_cyclic(2).unwrap();
        assert_eq!(exact_p(&c2, 2, 2, Variant::Both).unwrap(), exact(3, 4));
        let c3 = build_cyclic(3).unwrap();
        assert_eq!(exact_p(&c3, 2, 2, Variant::Both).unwrap(), exact(4, 9));
        let s3 = build_symmetric(3).unwrap();
        assert_eq!(exact_p(&s3, 1, 1, Variant::Both).unwrap(), exact(0, 1));
        assert_eq!(exact_p(&s3, 3, 3, Variant::Both).unwrap(), exact(7, 12));
        assert!(matches!(
            exact_p(&build_cyclic(4).unwrap(), 7, 7, Variant::Both),
            Err(DomainError::TooLarge(_))
        ));
    }

    #[test]
    fn s3_k2_distribution() {
        let s3 = build_symmetric(3).unwrap();
        let d = exact_miss_distribution(&s3, 2, 2, Variant::Both).unwrap();
        assert_eq!(d.total, 1296);
        let want: BTreeMap<usize, u64> =
            [(0, 144), (1, 360), (2, 264), (3, 360), (4, 150), (5, 18)].into_iter().collect();
        assert_eq!(d.counts, want);
        let per_point = exact_point_miss(&s3, 2, 2, Variant::Both).unwrap();
        assert_eq!(per_point.iter().sum::<Exact>(), d.mean());
    }

    #[test]
    fn distribution_json_uses_strings() {
        let d = exact_miss_distribution(&build_cyclic(2).unwrap(), 2, 2, Variant::Both).unwrap();
        let v = serde_json::to_value(&d).unwrap();
        assert_eq!(v["total"], "16");
        assert_eq!(v["counts"]["0"], "12");
        assert_eq!(v["counts"]["1"], "4");
    }
}
