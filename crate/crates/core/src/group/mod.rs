//! Finite groups with elements indexed `0..n`.
//!
//! A [`Group`] is backed either by a dense Cayley table (`n <= 16 384`) or,
//! for the large symmetric groups, by on-the-fly composition of permutations
//! indexed by their Lehmer rank. Groups are immutable once built and can be
//! shared freely between threads.

mod perm;
mod spec;
mod table;

use std::fmt;
use std::sync::OnceLock;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use perm::{centralizer_order, factorial, Permutation};
pub use spec::GroupSpec;
pub use table::{load_table, load_table_file, parse_table, write_table};

use crate::error::GroupError;
use crate::structure::CentralizerProfile;

/// Largest order stored as a dense Cayley table.
pub const MAX_TABLE_ORDER: usize = 16_384;
/// Largest degree accepted by [`build_symmetric`].
pub const MAX_SYMMETRIC_DEGREE: usize = 10;
/// Largest degree for which [`build_symmetric`] materialises a table.
pub const MAX_TABLE_SYMMETRIC_DEGREE: usize = 7;
/// Orders up to this bound get an exhaustive associativity check.
pub const EXHAUSTIVE_ASSOCIATIVITY_ORDER: usize = 256;

/// Storage strategy for a group's multiplication.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BackendKind {
    DenseTable,
    Permutation,
}

#[derive(Clone)]
enum Backend {
    Table { table: Vec<u32>, inverses: Vec<u32> },
    Permutation { degree: usize },
}

/// A finite group of order `n` with elements `0..n`.
pub struct Group {
    order: usize,
    identity: usize,
    backend: Backend,
    labels: Option<Vec<String>>,
    profile: OnceLock<CentralizerProfile>,
}

impl Clone for Group {
    fn clone(&self) -> Self {
        Self {
            order: self.order,
            identity: self.identity,
            backend: self.backend.clone(),
            labels: self.labels.clone(),
            profile: self.profile.clone(),
        }
    }
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Group")
            .field("order", &self.order)
            .field("identity", &self.identity)
            .field("backend", &self.backend_kind())
            .finish()
    }
}

/// Two groups are equal when they have the same order, identity and
/// multiplication on every pair of indices. Labels and backend are ignored.
impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        if self.order != other.order || self.identity != other.identity {
            return false;
        }
        if let (Some(a), Some(b)) = (self.table(), other.table()) {
            return a == b;
        }
        (0..self.order)
            .all(|g| (0..self.order).all(|h| self.multiply(g, h) == other.multiply(g, h)))
    }
}

impl Group {
    fn from_table(order: usize, identity: usize, table: Vec<u32>, inverses: Vec<u32>) -> Self {
        Self {
            order,
            identity,
            backend: Backend::Table { table, inverses },
            labels: None,
            profile: OnceLock::new(),
        }
    }

    /// Builds a dense table from any multiplication closure on `0..order`.
    fn tabulate(order: usize, identity: usize, mul: impl Fn(usize, usize) -> usize + Sync) -> Self {
        let table: Vec<u32> = (0..order * order)
            .into_par_iter()
            .map(|i| mul(i / order, i % order) as u32)
            .collect();
        let mut inverses = vec![0u32; order];
        for g in 0..order {
            let row = &table[g * order..(g + 1) * order];
            let h = row.iter().position(|&v| v as usize == identity).expect("identity in row");
            inverses[g] = h as u32;
        }
        Self::from_table(order, identity, table, inverses)
    }

    fn with_labels(mut self, labels: Vec<String>) -> Self {
        debug_assert_eq!(labels.len(), self.order);
        self.labels = Some(labels);
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn backend_kind(&self) -> BackendKind {
        match self.backend {
            Backend::Table { .. } => BackendKind::DenseTable,
            Backend::Permutation { .. } => BackendKind::Permutation,
        }
    }

    /// Degree `m` when this is the permutation-backed `S_m`.
    pub fn permutation_degree(&self) -> Option<usize> {
        match self.backend {
            Backend::Permutation { degree } => Some(degree),
            Backend::Table { .. } => None,
        }
    }

    #[inline]
    pub fn multiply(&self, g: usize, h: usize) -> usize {
        match &self.backend {
            Backend::Table { table, .. } => table[g * self.order + h] as usize,
            Backend::Permutation { degree } => {
                let a = Permutation::unrank(*degree, g as u64);
                let b = Permutation::unrank(*degree, h as u64);
                a.compose(&b).rank() as usize
            }
        }
    }

    pub fn inverse(&self, g: usize) -> usize {
        match &self.backend {
            Backend::Table { inverses, .. } => inverses[g] as usize,
            Backend::Permutation { degree } => {
                Permutation::unrank(*degree, g as u64).inverse().rank() as usize
            }
        }
    }

    /// The full row-major Cayley table, when the group is table-backed.
    pub fn table(&self) -> Option<&[u32]> {
        match &self.backend {
            Backend::Table { table, .. } => Some(table),
            Backend::Permutation { .. } => None,
        }
    }

    /// Row `g` of the Cayley table: `row(g)[h] = g*h`.
    pub fn row(&self, g: usize) -> Option<&[u32]> {
        self.table().map(|t| &t[g * self.order..(g + 1) * self.order])
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, g: usize) -> String {
        match &self.labels {
            Some(l) => l[g].clone(),
            None => g.to_string(),
        }
    }

    pub fn is_abelian(&self) -> bool {
        self.profile().center_size() == self.order as u64
    }

    /// Conjugation `h g h^{-1}`.
    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.multiply(self.multiply(h, g), self.inverse(h))
    }

    /// Order of the element `g`.
    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.multiply(x, g);
            k += 1;
        }
        k
    }

    /// Centralizer data, computed on first use and cached.
    pub fn profile(&self) -> &CentralizerProfile {
        self.profile
            .get_or_init(|| crate::structure::compute_profile(self))
    }

    /// Checks every group axiom; see [`AssociativityCheck`] for the cost model.
    pub fn validate(&self) -> Result<ValidationReport, GroupError> {
        match &self.backend {
            Backend::Table { table, .. } => {
                let parts = table::validate_table(self.order, table)?;
                if parts.identity != self.identity {
                    return Err(GroupError::NoIdentity);
                }
                Ok(ValidationReport {
                    order: self.order,
                    identity: parts.identity,
                    associativity: parts.associativity,
                })
            }
            Backend::Permutation { .. } => Ok(ValidationReport {
                order: self.order,
                identity: self.identity,
                associativity: AssociativityCheck::ByConstruction,
            }),
        }
    }
}

/// How associativity was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum AssociativityCheck {
    /// All `n^3` triples checked.
    Exhaustive,
    /// Uniformly random triples checked (at least `10 n^2`).
    Sampled { triples: u64 },
    /// Permutation composition is associative; nothing to check.
    ByConstruction,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct ValidationReport {
    pub order: usize,
    pub identity: usize,
    pub associativity: AssociativityCheck,
}

fn check_table_order(order: u128) -> Result<usize, GroupError> {
    if order == 0 {
        return Err(GroupError::Unsupported("group order must be positive".into()));
    }
    if order > MAX_TABLE_ORDER as u128 {
        return Err(GroupError::OrderTooLarge {
            order,
            max: MAX_TABLE_ORDER,
        });
    }
    Ok(order as usize)
}

/// The cyclic group `C_m` with `i*j = (i+j) mod m`.
pub fn build_cyclic(m: usize) -> Result<Group, GroupError> {
    let n = check_table_order(m as u128)?;
    Ok(Group::tabulate(n, 0, |a, b| (a + b) % n)
        .with_labels((0..n).map(|i| format!("x^{i}")).collect()))
}

/// The dihedral group `D_{2m}` of order `2m`.
///
/// Index `i < m` is the rotation `x^i`; index `m + i` is the reflection
/// `y x^i`. Multiplication follows `x^m = y^2 = 1, yxy = x^{-1}`.
pub fn build_dihedral(m: usize) -> Result<Group, GroupError> {
    if m == 0 {
        return Err(GroupError::Unsupported("dihedral parameter must be positive".into()));
    }
    let n = check_table_order(2 * m as u128)?;
    let mul = move |a: usize, b: usize| {
        let (ra, ia) = (a >= m, a % m);
        let (rb, ib) = (b >= m, b % m);
        // x^i y = y x^{-i}
        let exp = if rb { (ib + m - ia) % m } else { (ia + ib) % m };
        if ra ^ rb {
            m + exp
        } else {
            exp
        }
    };
    let labels = (0..m)
        .map(|i| format!("x^{i}"))
        .chain((0..m).map(|i| format!("yx^{i}")))
        .collect();
    Ok(Group::tabulate(n, 0, mul).with_labels(labels))
}

/// The symmetric group `S_m`, elements indexed by Lehmer rank. Table-backed
/// for `m <= 7`, permutation-backed above.
pub fn build_symmetric(m: usize) -> Result<Group, GroupError> {
    let backend = if m <= MAX_TABLE_SYMMETRIC_DEGREE {
        BackendKind::DenseTable
    } else {
        BackendKind::Permutation
    };
    build_symmetric_with(m, backend)
}

/// [`build_symmetric`] with an explicit backend choice.
pub fn build_symmetric_with(m: usize, backend: BackendKind) -> Result<Group, GroupError> {
    if m == 0 || m > MAX_SYMMETRIC_DEGREE {
        return Err(GroupError::Unsupported(format!(
            "symmetric degree must be in 1..={MAX_SYMMETRIC_DEGREE}, got {m}"
        )));
    }
    let n = factorial(m) as usize;
    match backend {
        BackendKind::DenseTable => {
            check_table_order(n as u128)?;
            let perms: Vec<Permutation> = (0..n as u64).map(|r| Permutation::unrank(m, r)).collect();
            let labels = perms.iter().map(|p| p.to_string()).collect();
            let group = Group::tabulate(n, 0, |a, b| perms[a].compose(&perms[b]).rank() as usize);
            Ok(group.with_labels(labels))
        }
        BackendKind::Permutation => Ok(Group {
            order: n,
            identity: 0,
            backend: Backend::Permutation { degree: m },
            labels: None,
            profile: OnceLock::new(),
        }),
    }
}

/// Direct product `g x h`; the pair `(a, b)` has index `a*|h| + b`.
pub fn build_product(g: &Group, h: &Group) -> Result<Group, GroupError> {
    let n = check_table_order(g.order() as u128 * h.order() as u128)?;
    let nh = h.order();
    let identity = g.identity() * nh + h.identity();
    let group = Group::tabulate(n, identity, |a, b| {
        g.multiply(a / nh, b / nh) * nh + h.multiply(a % nh, b % nh)
    });
    let labels = (0..n)
        .map(|i| format!("({},{})", g.label(i / nh), h.label(i % nh)))
        .collect();
    Ok(group.with_labels(labels))
}

/// Builds a group from an explicit row-major table after full validation.
pub fn from_cayley_table(order: usize, table: Vec<u32>) -> Result<Group, GroupError> {
    check_table_order(order as u128)?;
    if table.len() != order * order {
        return Err(GroupError::Parse {
            line: 0,
            message: format!("expected {} entries, found {}", order * order, table.len()),
        });
    }
    let parts = table::validate_table(order, &table)?;
    Ok(Group::from_table(order, parts.identity, table, parts.inverses))
}

/// Checks associativity of a Latin square with identity; exhaustive for small
/// orders and randomized above [`EXHAUSTIVE_ASSOCIATIVITY_ORDER`].
fn check_associativity(order: usize, table: &[u32]) -> Result<AssociativityCheck, GroupError> {
    let mul = |a: usize, b: usize| table[a * order + b] as usize;
    let witness = |a: usize, b: usize, c: usize| {
        let left = mul(mul(a, b), c);
        let right = mul(a, mul(b, c));
        (left != right).then_some(GroupError::NotAssociative { a, b, c, left, right })
    };
    if order <= EXHAUSTIVE_ASSOCIATIVITY_ORDER {
        let bad = (0..order).into_par_iter().find_map_first(|a| {
            (0..order).find_map(|b| (0..order).find_map(|c| witness(a, b, c)))
        });
        return match bad {
            Some(e) => Err(e),
            None => Ok(AssociativityCheck::Exhaustive),
        };
    }
    let triples = 10 * (order as u64) * (order as u64);
    const CHUNK: u64 = 1 << 20;
    let chunks = triples.div_ceil(CHUNK);
    let bad = (0..chunks).into_par_iter().find_map_first(|chunk| {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_a550c);
        rng.set_stream(chunk);
        let count = CHUNK.min(triples - chunk * CHUNK);
        (0..count).find_map(|_| {
            witness(
                rng.gen_range(0..order),
                rng.gen_range(0..order),
                rng.gen_range(0..order),
            )
        })
    });
    match bad {
        Some(e) => Err(e),
        None => Ok(AssociativityCheck::Sampled { triples }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_examples() {
        let c1 = build_cyclic(1).unwrap();
        assert_eq!(c1.order(), 1);
        assert_eq!(c1.multiply(0, 0), 0);
        let c5 = build_cyclic(5).unwrap();
        assert_eq!(c5.multiply(2, 4), 1);
        assert_eq!(c5.inverse(2), 3);
        assert!(build_cyclic(0).is_err());
        assert!(matches!(
            build_cyclic(MAX_TABLE_ORDER + 1),
            Err(GroupError::OrderTooLarge { .. })
        ));
    }

    #[test]
    fn dihedral_relations() {
        for m in 1..=9 {
            let d = build_dihedral(m).unwrap();
            assert_eq!(d.order(), 2 * m);
            let x = 1 % m;
            let y = m;
            // y^2 = 1 and yxy = x^{-1}
            assert_eq!(d.multiply(y, y), 0);
            assert_eq!(d.multiply(d.multiply(y, x), y), d.inverse(x));
            assert_eq!(d.element_order(x), m);
            // y x^i is index m + i
            for i in 0..m {
                let xi = (0..i).fold(0, |acc, _| d.multiply(acc, x));
                assert_eq!(d.multiply(y, xi), m + i);
            }
            d.validate().unwrap();
        }
    }

    #[test]
    fn symmetric_backends_agree() {
        for m in 1..=5 {
            let dense = build_symmetric_with(m, BackendKind::DenseTable).unwrap();
            let perm = build_symmetric_with(m, BackendKind::Permutation).unwrap();
            assert_eq!(dense, perm);
            for g in 0..dense.order() {
                assert_eq!(dense.inverse(g), perm.inverse(g));
            }
        }
    }

    #[test]
    fn symmetric_range_and_backend_selection() {
        assert!(build_symmetric(0).is_err());
        assert!(build_symmetric(11).is_err());
        assert_eq!(build_symmetric(7).unwrap().backend_kind(), BackendKind::DenseTable);
        let s8 = build_symmetric(8).unwrap();
        assert_eq!(s8.backend_kind(), BackendKind::Permutation);
        assert_eq!(s8.order(), 40_320);
        assert!(build_symmetric_with(8, BackendKind::DenseTable).is_err());
    }

    #[test]
    fn klein_four_group() {
        let c2 = build_cyclic(2).unwrap();
        let v = build_product(&c2, &c2).unwrap();
        assert_eq!(v.order(), 4);
        for g in 1..4 {
            assert_eq!(v.element_order(g), 2);
        }
    }

    #[test]
    fn product_indexing_and_inverse() {
        let c3 = build_cyclic(3).unwrap();
        let s3 = build_symmetric(3).unwrap();
        let p = build_product(&c3, &s3).unwrap();
        assert_eq!(p.order(), 18);
        for a in 0..18 {
            let inv = p.inverse(a);
            assert_eq!(inv, c3.inverse(a / 6) * 6 + s3.inverse(a % 6));
        }
        p.validate().unwrap();
    }

    #[test]
    fn non_associative_latin_square_is_rejected() {
        // A loop of order 5 in which every element squares to the identity.
        let loop5: [[u32; 5]; 5] = [
            [0, 1, 2, 3, 4],
            [1, 0, 3, 4, 2],
            [2, 4, 0, 1, 3],
            [3, 2, 4, 0, 1],
            [4, 3, 1, 2, 0],
        ];
        let table: Vec<u32> = loop5.iter().flatten().copied().collect();
        let err = from_cayley_table(5, table).unwrap_err();
        assert!(matches!(err, GroupError::NotAssociative { .. }), "{err}");
    }
}
