//! Sweeps over `k` and detection of the empirical crossing of `P = 1/2`.

use std::io::Write;

use serde::Serialize;

use super::{Simulator, Variant};
use crate::error::DomainError;
use crate::group::Group;
use crate::theta::{critical_size_for, solve_theta};

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub k: usize,
    pub m: usize,
    pub trials: u64,
    pub successes: u64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl SweepPoint {
    pub fn new(k: usize, m: usize, trials: u64, successes: u64) -> Self {
        assert!(successes <= trials && trials > 0);
        let (ci_low, ci_high) = wilson_interval(successes, trials);
        Self {
            k,
            m,
            trials,
            successes,
            p_hat: successes as f64 / trials as f64,
            ci_low,
            ci_high,
        }
    }

    /// Binomial standard error `√(p̂(1 − p̂)/trials)`.
    pub fn std_error(&self) -> f64 {
        (self.p_hat * (1.0 - self.p_hat) / self.trials as f64).sqrt()
    }
}

/// Wilson score interval at 95% confidence.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    let t = trials as f64;
    let p = successes as f64 / t;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / t;
    let center = (p + z2 / (2.0 * t)) / denom;
    let half = Z95 / denom * (p * (1.0 - p) / t + z2 / (4.0 * t * t)).sqrt();
    ((center - half).max(0.0).min(p), (center + half).min(1.0).max(p))
}

/// Weighted least-squares nondecreasing fit (pool adjacent violators).
pub fn isotonic_nondecreasing(values: &[f64], weights: &[f64]) -> Vec<f64> {
    assert_eq!(values.len(), weights.len());
    // blocks of (mean, weight, length)
    let mut blocks: Vec<(f64, f64, usize)> = Vec::with_capacity(values.len());
    for (&v, &w) in values.iter().zip(weights) {
        blocks.push((v, w, 1));
        while blocks.len() > 1 && blocks[blocks.len() - 2].0 > blocks[blocks.len() - 1].0 {
            let (v2, w2, l2) = blocks.pop().unwrap();
            let (v1, w1, l1) = blocks.pop().unwrap();
            let w = w1 + w2;
            blocks.push(((v1 * w1 + v2 * w2) / w, w, l1 + l2));
        }
    }
    blocks
        .into_iter()
        .flat_map(|(v, _, len)| std::iter::repeat_n(v, len))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Crossing {
    Found { k: f64 },
    /// The smoothed curve is already at or above 1/2 at the smallest `k`.
    AboveAtStart,
    /// The smoothed curve never reaches 1/2.
    NeverReached,
}

impl Crossing {
    pub fn k(&self) -> Option<f64> {
        match self {
            Crossing::Found { k } => Some(*k),
            _ => None,
        }
    }
}

/// Isotonic smoothing of `p̂` (weighted by trials), then linear interpolation
/// at 1/2 between the last smoothed point below and the first at or above.
pub fn locate_crossing(points: &[SweepPoint]) -> Crossing {
    let values: Vec<f64> = points.iter().map(|p| p.p_hat).collect();
    let weights: Vec<f64> = points.iter().map(|p| p.trials as f64).collect();
    let smooth = isotonic_nondecreasing(&values, &weights);
    match smooth.iter().position(|&s| s >= 0.5) {
        None => Crossing::NeverReached,
        Some(0) => Crossing::AboveAtStart,
        Some(i) => {
            let (k0, k1) = (points[i - 1].k as f64, points[i].k as f64);
            let (s0, s1) = (smooth[i - 1], smooth[i]);
            Crossing::Found {
                k: k0 + (0.5 - s0) / (s1 - s0) * (k1 - k0),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSettings {
    pub k_values: Vec<usize>,
    pub trials_per_k: u64,
    pub master_seed: u64,
    pub variant: Variant,
    /// `m = round(m_ratio · k)` draws for `B`.
    pub m_ratio: f64,
    /// Dedicated worker count; `None` uses the global pool.
    pub workers: Option<usize>,
}

impl SweepSettings {
    pub fn new(k_values: impl IntoIterator<Item = usize>, trials_per_k: u64, master_seed: u64) -> Self {
        Self {
            k_values: k_values.into_iter().collect(),
            trials_per_k,
            master_seed,
            variant: Variant::Both,
            m_ratio: 1.0,
            workers: None,
        }
    }

    pub fn m_for(&self, k: usize) -> usize {
        ((self.m_ratio * k as f64).round() as usize).max(1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepCurve {
    pub points: Vec<SweepPoint>,
    pub crossing: Crossing,
    pub theta: Option<f64>,
    /// Predicted crossing in `k`: `√(Θ n log n / m_ratio)`, with `Θ = 1` for
    /// the `ab-only` variant. `None` when `n < 3`.
    pub critical_prediction: Option<f64>,
    pub variant: Variant,
    pub m_ratio: f64,
    pub warnings: Vec<String>,
}

impl SweepCurve {
    pub fn crossing_k(&self) -> Option<f64> {
        self.crossing.k()
    }

    /// `crossing_k / critical_prediction`.
    pub fn crossing_ratio(&self) -> Option<f64> {
        Some(self.crossing_k()? / self.critical_prediction?)
    }

    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "k,trials,successes,p_hat,ci_low,ci_high")?;
        for p in &self.points {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                p.k, p.trials, p.successes, p.p_hat, p.ci_low, p.ci_high
            )?;
        }
        Ok(())
    }
}

fn predicted_k(group: &Group, variant: Variant, m_ratio: f64) -> (Option<f64>, Option<f64>) {
    let n = group.order();
    let theta = solve_theta(group.profile()).ok().map(|r| r.theta);
    let effective = match variant {
        Variant::AbOnly if n >= 3 => Some(1.0),
        _ => theta,
    };
    let prediction = effective.map(|t| critical_size_for(t, n) / m_ratio.sqrt());
    (theta, prediction)
}

/// Estimates `P` at each `k` and locates the crossing of 1/2.
pub fn sweep(group: &Group, settings: &SweepSettings) -> Result<SweepCurve, DomainError> {
    if settings.k_values.is_empty() {
        return Err(DomainError::Invalid("empty k range".into()));
    }
    if !(settings.m_ratio.is_finite() && settings.m_ratio > 0.0) {
        return Err(DomainError::Invalid(format!("m_ratio must be positive, got {}", settings.m_ratio)));
    }
    let mut ks = settings.k_values.clone();
    ks.sort_unstable();
    ks.dedup();

    let mut sim = Simulator::new(group, settings.variant, settings.master_seed);
    if let Some(w) = settings.workers {
        sim = sim.with_workers(w)?;
    }
    let points = ks
        .iter()
        .map(|&k| sim.estimate(k, settings.m_for(k), settings.trials_per_k))
        .collect::<Result<Vec<_>, _>>()?;

    let mut warnings = Vec::new();
    let n = group.order() as f64;
    if settings.m_ratio != 1.0 && settings.variant != Variant::Aa && n >= 3.0 {
        let limit = n / n.ln();
        let largest = ks.iter().map(|&k| k.max(settings.m_for(k))).max().unwrap_or(0);
        if largest as f64 > limit {
            warnings.push(format!(
                "max(k, m) = {largest} exceeds n / log n = {limit:.1}; the unequal-size threshold may not apply"
            ));
        }
    }
    let (theta, critical_prediction) = predicted_k(group, settings.variant, settings.m_ratio);
    Ok(SweepCurve {
        crossing: locate_crossing(&points),
        points,
        theta,
        critical_prediction,
        variant: settings.variant,
        m_ratio: settings.m_ratio,
        warnings,
    })
}

/// `k` values at step 1 covering `prediction ± √n`, the transition window.
pub fn window_k_values(prediction: f64, order: usize) -> Vec<usize> {
    let half = (order as f64).sqrt();
    let lo = ((prediction - half).floor() as i64).max(1) as usize;
    let hi = ((prediction + half).ceil() as usize).max(lo);
    (lo..=hi).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BisectionOutcome {
    /// Largest `k` with `p̂ + 3σ < 1/2`.
    pub below_k: usize,
    /// Smallest `k` with `p̂ − 3σ > 1/2`.
    pub above_k: usize,
    /// True when the bracket closed to adjacent `k` values.
    pub resolved: bool,
    pub evaluations: Vec<SweepPoint>,
}

impl BisectionOutcome {
    pub fn estimate(&self) -> f64 {
        0.5 * (self.below_k + self.above_k) as f64
    }
}

fn side(p: &SweepPoint) -> Option<bool> {
    let s = 3.0 * p.std_error();
    if p.p_hat + s < 0.5 {
        Some(false)
    } else if p.p_hat - s > 0.5 {
        Some(true)
    } else {
        None
    }
}

/// Bisection in `k` for the crossing of 1/2. Each probe runs `trials` trials
/// and doubles them (up to `max_trials`) until it sits 3σ away from 1/2.
pub fn bisect_crossing(
    sim: &Simulator<'_>,
    k_low: usize,
    k_high: usize,
    m_ratio: f64,
    trials: u64,
    max_trials: u64,
) -> Result<BisectionOutcome, DomainError> {
    if k_low >= k_high || k_low == 0 {
        return Err(DomainError::Invalid(format!("bad bracket [{k_low}, {k_high}]")));
    }
    let m_for = |k: usize| ((m_ratio * k as f64).round() as usize).max(1);
    let mut evaluations = Vec::new();
    let mut probe = |k: usize| -> Result<Option<bool>, DomainError> {
        let mut t = trials;
        loop {
            let p = sim.estimate(k, m_for(k), t)?;
            evaluations.push(p);
            match side(&p) {
                Some(s) => return Ok(Some(s)),
                None if t * 2 <= max_trials => t *= 2,
                None => return Ok(None),
            }
        }
    };
    if probe(k_low)? != Some(false) || probe(k_high)? != Some(true) {
        return Err(DomainError::Invalid(format!(
            "[{k_low}, {k_high}] does not bracket 1/2 at 3 sigma"
        )));
    }
    let (mut lo, mut hi) = (k_low, k_high);
    let mut resolved = true;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        match probe(mid)? {
            Some(false) => lo = mid,
            Some(true) => hi = mid,
            None => {
                resolved = false;
                break;
            }
        }
    }
    Ok(BisectionOutcome {
        below_k: lo,
        above_k: hi,
        resolved,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::build_cyclic;

    #[test]
    fn wilson_brackets_p_hat() {
        for (s, t) in [(0, 10), (10, 10), (3, 7), (500, 1000), (1, 1)] {
            let (lo, hi) = wilson_interval(s, t);
            let p = s as f64 / t as f64;
            assert!(lo <= p && p <= hi && lo >= 0.0 && hi <= 1.0, "{s}/{t}");
        }
        let (lo, hi) = wilson_interval(50, 100);
        assert!((lo - 0.4038).abs() < 1e-4 && (hi - 0.5962).abs() < 1e-4);
    }

    #[test]
    fn isotonic_pools_violators() {
        let fit = isotonic_nondecreasing(&[0.0, 0.4, 0.2, 0.9, 0.8], &[1.0; 5]);
        let want = [0.0, 0.3, 0.3, 0.85, 0.85];
        for (a, b) in fit.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
        let weighted = isotonic_nondecreasing(&[1.0, 0.0], &[3.0, 1.0]);
        assert!((weighted[0] - 0.75).abs() < 1e-12 && (weighted[1] - 0.75).abs() < 1e-12);
    }

    fn pt(k: usize, s: u64) -> SweepPoint {
        SweepPoint::new(k, k, 100, s)
    }

    #[test]
    fn crossing_interpolates() {
        let c = locate_crossing(&[pt(10, 0), pt(20, 20), pt(30, 80), pt(40, 100)]);
        assert_eq!(c, Crossing::Found { k: 25.0 });
        assert_eq!(locate_crossing(&[pt(10, 90), pt(20, 100)]), Crossing::AboveAtStart);
        assert_eq!(locate_crossing(&[pt(10, 0), pt(20, 10)]), Crossing::NeverReached);
    }

    #[test]
    fn degenerate_range_above_threshold() {
        let g = build_cyclic(16).unwrap();
        let curve = sweep(&g, &SweepSettings::new([20, 24, 28], 200, 5)).unwrap();
        assert!(curve.points.iter().all(|p| p.p_hat > 0.95));
        assert_eq!(curve.crossing, Crossing::AboveAtStart);
        assert!(curve.crossing_k().is_none());
    }

    #[test]
    fn sweep_validates_settings() {
        let g = build_cyclic(16).unwrap();
        assert!(sweep(&g, &SweepSettings::new([], 10, 0)).is_err());
        let mut s = SweepSettings::new([4], 10, 0);
        s.m_ratio = 0.0;
        assert!(sweep(&g, &s).is_err());
    }

    #[test]
    fn unequal_sizes_warn_when_large() {
        let g = build_cyclic(64).unwrap();
        let mut s = SweepSettings::new([8, 12], 20, 1);
        s.m_ratio = 2.0;
        let curve = sweep(&g, &s).unwrap();
        assert_eq!(curve.points[0].m, 16);
        assert_eq!(curve.warnings.len(), 1);
    }

    #[test]
    fn window_covers_root_n() {
        let ks = window_k_values(84.3, 1024);
        assert_eq!(ks.first(), Some(&52));
        assert_eq!(ks.last(), Some(&117));
        assert_eq!(window_k_values(2.0, 100)[0], 1);
    }

    #[test]
    fn bisection_brackets_the_crossing() {
        let g = build_cyclic(256).unwrap();
        let sim = Simulator::new(&g, Variant::Both, 11);
        let out = bisect_crossing(&sim, 20, 70, 1.0, 200, 3200).unwrap();
        assert!(out.below_k < out.above_k);
        // √(256 log 256) ≈ 37.7; the 1/2 point sits a little above it
        assert!((30.0..50.0).contains(&out.estimate()), "{out:?}");
        assert!(bisect_crossing(&sim, 60, 70, 1.0, 200, 400).is_err());
    }
}
