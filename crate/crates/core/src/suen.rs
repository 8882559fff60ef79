//! Exact indicator moments and Suen-type bounds on miss probabilities.
//!
//! For draws `a_1..a_k`, `b_1..b_k` and a fixed target `x`, the indicator
//! `I_(i,j)(x) = 1{x = a_i b_j or x = b_j a_i}` lives on `V = [k] x [k]`.
//! Two vertices are adjacent when they share exactly one coordinate, which
//! makes the graph a dependency graph for the indicators. `x` is missed by
//! `AB ∪ BA` exactly when every indicator is zero.

use std::collections::HashMap;
use std::sync::RwLock;

use serde::Serialize;

use crate::error::DomainError;
use crate::group::Group;
use crate::rational::{serde_exact, to_f64, Exact};
use crate::structure::{centralizer_intersection, CentralizerProfile};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndicatorMoments {
    /// `E[I_v(x)]`.
    #[serde(with = "serde_exact")]
    pub single_mean: Exact,
    /// `E[I_v(x) I_u(x)]` for adjacent `v, u`.
    #[serde(with = "serde_exact")]
    pub pair_mean: Exact,
    pub k: u64,
    pub v_count: u64,
}

/// Output of the generic Suen evaluator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuenBounds {
    pub delta: f64,
    pub delta_star: f64,
    /// `e^Δ · Π(1 − E[X_i])`.
    pub upper: f64,
    /// `max(0, (1 − Δ* e^Δ) · Π(1 − E[X_i]))`.
    pub lower: f64,
    /// `Π(1 − E[X_i])`.
    pub baseline: f64,
}

impl SuenBounds {
    fn from_parts(delta: f64, delta_star: f64, log_baseline: f64) -> Self {
        let baseline = log_baseline.exp();
        Self {
            delta,
            delta_star,
            upper: (delta + log_baseline).exp(),
            lower: ((1.0 - delta_star * delta.exp()) * baseline).max(0.0),
            baseline,
        }
    }
}

/// Bounds on `Pr[x ∈ S]`, `S = G \ (AB ∪ BA)`, for one target element.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuenReport {
    pub element: usize,
    pub moments: IndicatorMoments,
    #[serde(flatten)]
    pub bounds: SuenBounds,
}

/// An undirected simple graph on `0..vertex_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyGraph {
    adjacency: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl DependencyGraph {
    pub fn edgeless(vertex_count: usize) -> Self {
        Self {
            adjacency: vec![Vec::new(); vertex_count],
            edges: Vec::new(),
        }
    }

    /// Builds a graph from an edge list; rejects self-loops and duplicates.
    pub fn from_edges(vertex_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, DomainError> {
        let mut g = Self::edgeless(vertex_count);
        for (a, b) in edges {
            if a == b {
                return Err(DomainError::Invalid(format!("self-loop at {a}")));
            }
            if a >= vertex_count || b >= vertex_count {
                return Err(DomainError::Invalid(format!("edge ({a}, {b}) out of range")));
            }
            let (a, b) = (a.min(b), a.max(b));
            if g.adjacency[a].contains(&b) {
                return Err(DomainError::Invalid(format!("duplicate edge ({a}, {b})")));
            }
            g.adjacency[a].push(b);
            g.adjacency[b].push(a);
            g.edges.push((a, b));
        }
        Ok(g)
    }

    /// The graph on `[k] x [k]` joining `(i, j)` and `(l, m)` when exactly one
    /// coordinate agrees. Vertex `(i, j)` has index `i*k + j`.
    pub fn grid(k: usize) -> Self {
        let idx = |i: usize, j: usize| i * k + j;
        let mut edges = Vec::new();
        for i in 0..k {
            for j in 0..k {
                for m in j + 1..k {
                    edges.push((idx(i, j), idx(i, m)));
                }
                for l in i + 1..k {
                    edges.push((idx(i, j), idx(l, j)));
                }
            }
        }
        Self::from_edges(k * k, edges).expect("grid edges are simple")
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    /// Edges `(a, b)` with `a < b`, in insertion order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].contains(&b)
    }

    /// Vertices adjacent to `a` or to `b`.
    pub fn joint_neighborhood(&self, a: usize, b: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.adjacency[a].iter().chain(&self.adjacency[b]).copied().collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Evaluates Δ, Δ* and both Suen bounds on `Pr[Σ X_i = 0]` by summing over
/// the edges of `graph`. `pair_means[e]` is `E[X_a X_b]` for `graph.edges()[e]`.
pub fn suen_generic(graph: &DependencyGraph, means: &[f64], pair_means: &[f64]) -> Result<SuenBounds, DomainError> {
    if means.len() != graph.vertex_count() {
        return Err(DomainError::Invalid(format!(
            "{} means for {} vertices",
            means.len(),
            graph.vertex_count()
        )));
    }
    if pair_means.len() != graph.edges().len() {
        return Err(DomainError::Invalid(format!(
            "{} pair means for {} edges",
            pair_means.len(),
            graph.edges().len()
        )));
    }
    if let Some(p) = means.iter().find(|p| !(0.0..1.0).contains(*p)) {
        return Err(DomainError::Invalid(format!("mean {p} outside [0, 1)")));
    }
    let log_baseline: f64 = means.iter().map(|p| (-p).ln_1p()).sum();
    let (mut delta, mut delta_star) = (0.0, 0.0);
    for (&(a, b), &pair) in graph.edges().iter().zip(pair_means) {
        let inflation: f64 = graph
            .joint_neighborhood(a, b)
            .into_iter()
            .map(|w| -(-means[w]).ln_1p())
            .sum::<f64>()
            .exp();
        // ½ Σ_i Σ_{j~i} counts every unordered edge once.
        delta += pair * inflation;
        delta_star += means[a] * means[b] * inflation;
    }
    Ok(SuenBounds::from_parts(delta, delta_star, log_baseline))
}

fn check_element(p: &CentralizerProfile, x: usize) -> Result<(), DomainError> {
    if x >= p.order() {
        return Err(DomainError::ElementOutOfRange {
            element: x,
            order: p.order(),
        });
    }
    Ok(())
}

/// `(2/n)(1 − |C(x)|/(2n)) = (2n − |C(x)|)/n²`.
pub fn single_mean_from_size(n: u64, cx: u64) -> Exact {
    let n = n as i128;
    Exact::new(2 * n - cx as i128, n * n)
}

/// `(4/n²)(1 − (|C(x)| + |C(y)|)/(2n) + |C(x) ∩ C(y)|/(4n))`.
pub fn pair_mean_from_sizes(n: u64, cx: u64, cy: u64, cxy: u64) -> Exact {
    let n = n as i128;
    Exact::new(4 * n - 2 * (cx as i128 + cy as i128) + cxy as i128, n * n * n)
}

pub fn single_mean(p: &CentralizerProfile, x: usize) -> Result<Exact, DomainError> {
    check_element(p, x)?;
    Ok(single_mean_from_size(p.order() as u64, p.centralizer_size(x)))
}

/// Centralizer intersections `|C(x) ∩ C(y)|`, computed on demand and cached
/// per raw `(x, y)` pair.
pub struct Intersections<'g> {
    group: &'g Group,
    cache: RwLock<HashMap<(usize, usize), u64>>,
}

impl<'g> Intersections<'g> {
    pub fn new(group: &'g Group) -> Self {
        Self {
            group,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn group(&self) -> &'g Group {
        self.group
    }

    pub fn profile(&self) -> &'g CentralizerProfile {
        self.group.profile()
    }

    pub fn size(&self, x: usize, y: usize) -> u64 {
        let key = (x.min(y), x.max(y));
        if x == y {
            return self.profile().centralizer_size(x);
        }
        if let Some(&v) = self.cache.read().expect("cache lock").get(&key) {
            return v;
        }
        let v = centralizer_intersection(self.group, key.0, key.1);
        self.cache.write().expect("cache lock").insert(key, v);
        v
    }
}

/// `E[I_v(x) I_u(y)]` for adjacent `v ~ u`.
pub fn pair_mean(ix: &Intersections<'_>, x: usize, y: usize) -> Result<Exact, DomainError> {
    let p = ix.profile();
    check_element(p, x)?;
    check_element(p, y)?;
    Ok(pair_mean_from_sizes(
        p.order() as u64,
        p.centralizer_size(x),
        p.centralizer_size(y),
        ix.size(x, y),
    ))
}

/// `(deg, closed)`: the degree `2(k−1)` of every vertex of the `[k] x [k]`
/// graph and the size `3(k−1)+1` of the joint neighborhood of an edge.
pub fn neighborhood_counts(k: u64) -> (u64, u64) {
    let k1 = k.saturating_sub(1);
    (2 * k1, 3 * k1 + 1)
}

/// `4 k³/n² · exp(6k/(n−2))`, the cap on Δ and Δ* for one target.
pub fn delta_cap(n: usize, k: u64) -> f64 {
    let (n, k) = (n as f64, k as f64);
    4.0 * k.powi(3) / (n * n) * (6.0 * k / (n - 2.0)).exp()
}

fn closed_form(n: u64, cx: u64, k: u64) -> (IndicatorMoments, SuenBounds) {
    let single = single_mean_from_size(n, cx);
    let pair = pair_mean_from_sizes(n, cx, cx, cx);
    let s = to_f64(&single);
    let log_keep = (-s).ln_1p();
    let v_count = k * k;
    let (delta, delta_star) = if k < 2 {
        (0.0, 0.0)
    } else {
        let (deg, closed) = neighborhood_counts(k);
        let ordered_pairs = (v_count * deg) as f64;
        let inflation = (-(closed as f64) * log_keep).exp();
        (
            0.5 * ordered_pairs * to_f64(&pair) * inflation,
            0.5 * ordered_pairs * s * s * inflation,
        )
    };
    let moments = IndicatorMoments {
        single_mean: single,
        pair_mean: pair,
        k,
        v_count,
    };
    (moments, SuenBounds::from_parts(delta, delta_star, v_count as f64 * log_keep))
}

/// Closed-form Suen bounds on `Pr[x ∈ S]` for `k` draws on each side.
///
/// With `k = 1` the graph is a single vertex, so Δ = Δ* = 0 and both bounds
/// collapse to `1 − E[I_v(x)]`.
pub fn suen_point(p: &CentralizerProfile, x: usize, k: u64) -> Result<SuenReport, DomainError> {
    if p.order() < 3 {
        return Err(DomainError::OrderTooSmall(p.order()));
    }
    check_element(p, x)?;
    if k == 0 {
        return Err(DomainError::Invalid("k must be at least 1".into()));
    }
    let (moments, bounds) = closed_form(p.order() as u64, p.centralizer_size(x), k);
    Ok(SuenReport {
        element: x,
        moments,
        bounds,
    })
}

/// `Σ_x e^{Δ(x)} (1 − E[I_v(x)])^{k²}`: an upper bound on `E|S|`, and so on
/// `Pr[AB ∪ BA ≠ G]`.
pub fn miss_expectation_upper(p: &CentralizerProfile, k: u64) -> Result<f64, DomainError> {
    if p.order() < 3 {
        return Err(DomainError::OrderTooSmall(p.order()));
    }
    if k == 0 {
        return Err(DomainError::Invalid("k must be at least 1".into()));
    }
    let n = p.order() as u64;
    Ok(p.distinct_sizes()
        .iter()
        .map(|&(c, count)| count as f64 * closed_form(n, c, k).1.upper)
        .sum())
}
