//! Centralizers, conjugacy classes, the center and the commuting probability.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::group::{centralizer_order, Group, Permutation};
use crate::rational::Exact;

/// Per-element centralizer sizes together with the conjugacy-class partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralizerProfile {
    order: usize,
    centralizer_sizes: Vec<u64>,
    class_of: Vec<u32>,
    class_sizes: Vec<u64>,
    center_size: u64,
    /// `(|C(x)|, #{x with that size})`, largest size first.
    distinct_sizes: Vec<(u64, u64)>,
}

#[derive(Serialize)]
struct ProfileJson<'a> {
    n: usize,
    centralizer_sizes: &'a [u64],
    class_sizes: &'a [u64],
    #[serde(rename = "R")]
    r: usize,
    center_size: u64,
}

impl Serialize for CentralizerProfile {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ProfileJson {
            n: self.order,
            centralizer_sizes: &self.centralizer_sizes,
            class_sizes: &self.class_sizes,
            r: self.class_count(),
            center_size: self.center_size,
        }
        .serialize(s)
    }
}

impl CentralizerProfile {
    fn new(order: usize, centralizer_sizes: Vec<u64>, class_of: Vec<u32>, class_count: usize) -> Self {
        let mut class_sizes = vec![0u64; class_count];
        for &c in &class_of {
            class_sizes[c as usize] += 1;
        }
        let center_size = centralizer_sizes.iter().filter(|&&c| c == order as u64).count() as u64;
        let mut hist = HashMap::<u64, u64>::new();
        for &c in &centralizer_sizes {
            *hist.entry(c).or_default() += 1;
        }
        let mut distinct_sizes: Vec<(u64, u64)> = hist.into_iter().collect();
        distinct_sizes.sort_unstable_by_key(|&(size, _)| std::cmp::Reverse(size));
        Self {
            order,
            centralizer_sizes,
            class_of,
            class_sizes,
            center_size,
            distinct_sizes,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn centralizer_sizes(&self) -> &[u64] {
        &self.centralizer_sizes
    }

    pub fn centralizer_size(&self, x: usize) -> u64 {
        self.centralizer_sizes[x]
    }

    pub fn class_of(&self) -> &[u32] {
        &self.class_of
    }

    pub fn class_sizes(&self) -> &[u64] {
        &self.class_sizes
    }

    /// `R(G)`, the number of conjugacy classes.
    pub fn class_count(&self) -> usize {
        self.class_sizes.len()
    }

    pub fn center_size(&self) -> u64 {
        self.center_size
    }

    pub fn distinct_sizes(&self) -> &[(u64, u64)] {
        &self.distinct_sizes
    }

    /// Checks Burnside, orbit-stabilizer, divisibility and center consistency.
    pub fn check_invariants(&self) -> Result<(), String> {
        let n = self.order as u64;
        for (x, &c) in self.centralizer_sizes.iter().enumerate() {
            if c == 0 || c > n || !n.is_multiple_of(c) {
                return Err(format!("|C({x})| = {c} does not divide n = {n}"));
            }
            if n >= 2 && c < 2 {
                return Err(format!("|C({x})| = {c} < 2"));
            }
            let class = self.class_sizes[self.class_of[x] as usize];
            if class * c != n {
                return Err(format!("orbit-stabilizer fails at {x}: {class} * {c} != {n}"));
            }
        }
        let sum: u64 = self.centralizer_sizes.iter().sum();
        if sum != n * self.class_count() as u64 {
            return Err(format!("Burnside fails: sum |C(x)| = {sum} != n R = {}", n * self.class_count() as u64));
        }
        let center = self.centralizer_sizes.iter().filter(|&&c| c == n).count() as u64;
        if center != self.center_size {
            return Err(format!("center size {} != {center}", self.center_size));
        }
        Ok(())
    }
}

/// Centralizer profile of `g` (cached on the group).
pub fn profile(g: &Group) -> &CentralizerProfile {
    g.profile()
}

pub(crate) fn compute_profile(g: &Group) -> CentralizerProfile {
    match g.permutation_degree() {
        Some(m) => profile_from_cycle_types(g.order(), m),
        None => profile_by_scan(g),
    }
}

/// Direct `O(n^2)` scan for centralizers, conjugation orbits for classes.
pub fn profile_by_scan(g: &Group) -> CentralizerProfile {
    let n = g.order();
    let centralizer_sizes: Vec<u64> = match g.table() {
        Some(t) => (0..n)
            .into_par_iter()
            .map(|x| (0..n).filter(|&h| t[h * n + x] == t[x * n + h]).count() as u64)
            .collect(),
        None => (0..n)
            .into_par_iter()
            .map(|x| (0..n).filter(|&h| g.multiply(h, x) == g.multiply(x, h)).count() as u64)
            .collect(),
    };

    let inverses: Vec<usize> = (0..n).map(|h| g.inverse(h)).collect();
    let mut class_of = vec![u32::MAX; n];
    let mut classes = 0u32;
    for x in 0..n {
        if class_of[x] != u32::MAX {
            continue;
        }
        if centralizer_sizes[x] == n as u64 {
            class_of[x] = classes;
        } else {
            for (h, &h_inv) in inverses.iter().enumerate() {
                let y = g.multiply(g.multiply(h, x), h_inv);
                class_of[y] = classes;
            }
        }
        classes += 1;
    }
    CentralizerProfile::new(n, centralizer_sizes, class_of, classes as usize)
}

/// `S_m` profile from cycle types: classes are cycle types and
/// `|C(s)| = prod_l l^{c_l} c_l!`.
fn profile_from_cycle_types(order: usize, degree: usize) -> CentralizerProfile {
    let types: Vec<Vec<usize>> = (0..order as u64)
        .into_par_iter()
        .map(|r| Permutation::unrank(degree, r).cycle_type())
        .collect();
    let mut ids = HashMap::<&[usize], u32>::new();
    let mut class_of = Vec::with_capacity(order);
    let mut sizes = Vec::new();
    for t in &types {
        let next = ids.len() as u32;
        let id = *ids.entry(t.as_slice()).or_insert_with(|| {
            sizes.push(centralizer_order(t));
            next
        });
        class_of.push(id);
    }
    let centralizer_sizes = class_of.iter().map(|&c| sizes[c as usize]).collect();
    CentralizerProfile::new(order, centralizer_sizes, class_of, ids.len())
}

/// `Pr[ab = ba]` for independent uniform `a, b`, i.e. `sum_x |C(x)| / n^2`.
pub fn commute_probability(g: &Group) -> Exact {
    let p = g.profile();
    let n = p.order() as i128;
    let sum: u64 = p.centralizer_sizes().iter().sum();
    Exact::new(sum as i128, n * n)
}

/// `|C(x) ∩ C(y)|` by a direct scan.
pub fn centralizer_intersection(g: &Group, x: usize, y: usize) -> u64 {
    (0..g.order())
        .filter(|&h| {
            g.multiply(h, x) == g.multiply(x, h) && g.multiply(h, y) == g.multiply(y, h)
        })
        .count() as u64
}
