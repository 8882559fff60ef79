//! Permutations on `[0, m)` and their lexicographic (Lehmer) ranking.

use std::fmt;

/// Largest degree for which `m!` is handled by the ranking routines.
pub const MAX_RANK_DEGREE: usize = 20;

/// A bijection on `[0, degree)` stored as its image array.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Self {
            images: (0..degree).collect(),
        }
    }

    /// Builds a permutation from its images, returning `None` if `images` is
    /// not a bijection on `[0, images.len())`.
    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Self { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// `(self * other)(i) = self(other(i))`: `other` acts first.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Self {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Self { images }
    }

    /// Lehmer code: `code[i] = #{ j > i : p(j) < p(i) }`.
    pub fn lehmer_code(&self) -> Vec<usize> {
        let m = self.degree();
        (0..m)
            .map(|i| {
                (i + 1..m)
                    .filter(|&j| self.images[j] < self.images[i])
                    .count()
            })
            .collect()
    }

    /// Lexicographic rank in `[0, m!)`; the identity has rank 0.
    pub fn rank(&self) -> u64 {
        let m = self.degree();
        assert!(m <= MAX_RANK_DEGREE, "degree {m} too large to rank");
        let mut rank = 0u64;
        for (i, c) in self.lehmer_code().into_iter().enumerate() {
            rank += c as u64 * factorial(m - 1 - i);
        }
        rank
    }

    /// Inverse of [`Permutation::rank`]. Panics if `rank >= degree!`.
    pub fn unrank(degree: usize, mut rank: u64) -> Self {
        assert!(degree <= MAX_RANK_DEGREE, "degree {degree} too large to rank");
        assert!(rank < factorial(degree), "rank {rank} out of range");
        let mut pool: Vec<usize> = (0..degree).collect();
        let mut images = Vec::with_capacity(degree);
        for i in 0..degree {
            let f = factorial(degree - 1 - i);
            let digit = (rank / f) as usize;
            rank %= f;
            images.push(pool.remove(digit));
        }
        Self { images }
    }

    /// Cycle lengths, sorted in decreasing order (fixed points included).
    pub fn cycle_type(&self) -> Vec<usize> {
        let m = self.degree();
        let mut seen = vec![false; m];
        let mut lengths = Vec::new();
        for start in 0..m {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
                len += 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        lengths
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.images)
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation, omitting fixed points; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.degree();
        let mut seen = vec![false; m];
        let mut wrote = false;
        for start in 0..m {
            if seen[start] || self.images[start] == start {
                seen[start] = true;
                continue;
            }
            write!(f, "(")?;
            let mut i = start;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{i}")?;
                first = false;
                i = self.images[i];
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

pub fn factorial(m: usize) -> u64 {
    (1..=m as u64).product()
}

/// Size of the centralizer in `S_m` of a permutation with the given cycle
/// type: the product over cycle lengths `l` with multiplicity `c_l` of
/// `l^{c_l} * c_l!`.
pub fn centralizer_order(cycle_type: &[usize]) -> u64 {
    let mut counts = std::collections::BTreeMap::<usize, u32>::new();
    for &l in cycle_type {
        *counts.entry(l).or_default() += 1;
    }
    counts
        .into_iter()
        .map(|(l, c)| (l as u64).pow(c) * factorial(c as usize))
        .product()
}
