//! The invariant `Θ(G)`: the unique root in `[1/2, 1]` of
//!
//! ```text
//! f(ξ) = 2ξ log n − log Σ_x exp(ξ log n · |C(x)| / n)
//! ```
//!
//! together with the closed-form bounds on it and the critical subset size
//! `√(Θ n log n)`.

use serde::Serialize;

use crate::error::DomainError;
use crate::structure::CentralizerProfile;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaResult {
    pub theta: f64,
    /// `|f(theta)|`.
    pub residual: f64,
    pub bracket_width: f64,
    pub iterations: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaBounds {
    /// `log|Z| / log n`.
    pub lower_center: f64,
    /// `1 / (2 − R/n)`.
    pub lower_classes: f64,
    /// `max{ (2/3)(1 + log2/log n), (log|Z| + log2)/log n }`.
    pub upper: f64,
}

impl ThetaBounds {
    pub fn contains(&self, theta: f64, slack: f64) -> bool {
        self.lower_center <= theta + slack
            && self.lower_classes <= theta + slack
            && theta <= self.upper + slack
    }
}

/// Stopping rule for [`solve_theta_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub residual_tol: f64,
    pub width_tol: f64,
    pub max_iterations: u32,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            residual_tol: 1e-10,
            width_tol: 1e-12,
            max_iterations: 60,
        }
    }
}

fn check_order(p: &CentralizerProfile) -> Result<f64, DomainError> {
    let n = p.order();
    if n < 3 {
        return Err(DomainError::OrderTooSmall(n));
    }
    Ok(n as f64)
}

/// Evaluates `f(ξ)` using a log-sum-exp shifted by the central exponent
/// `ξ log n` and grouped by distinct centralizer sizes.
pub fn f_eval(p: &CentralizerProfile, xi: f64) -> Result<f64, DomainError> {
    let n = check_order(p)?;
    if !(xi > 0.0 && xi <= 2.0) {
        return Err(DomainError::Invalid(format!("xi = {xi} outside (0, 2]")));
    }
    let log_n = n.ln();
    let scale = xi * log_n;
    // Σ_x exp(scale·c/n) = exp(scale) · Σ_c count_c · exp(scale·(c − n)/n)
    let shifted: f64 = p
        .distinct_sizes()
        .iter()
        .map(|&(c, count)| count as f64 * (scale * (c as f64 - n) / n).exp())
        .sum();
    Ok(2.0 * scale - (scale + shifted.ln()))
}

/// Reference evaluation of `f(ξ)` as a plain per-element sum.
pub fn f_eval_per_element(p: &CentralizerProfile, xi: f64) -> Result<f64, DomainError> {
    let n = check_order(p)?;
    let log_n = n.ln();
    let sum: f64 = p
        .centralizer_sizes()
        .iter()
        .map(|&c| (xi * log_n * c as f64 / n).exp())
        .sum();
    Ok(2.0 * xi * log_n - sum.ln())
}

pub fn solve_theta(p: &CentralizerProfile) -> Result<ThetaResult, DomainError> {
    solve_theta_with(p, SolveOptions::default())
}

/// Bisection for `Θ` on `[1/2, 1]`.
pub fn solve_theta_with(p: &CentralizerProfile, opts: SolveOptions) -> Result<ThetaResult, DomainError> {
    let (mut lo, mut hi) = (0.5f64, 1.0f64);
    let f_lo = f_eval(p, lo)?;
    let f_hi = f_eval(p, hi)?;
    if f_hi.abs() <= opts.residual_tol {
        return Ok(ThetaResult {
            theta: 1.0,
            residual: f_hi.abs(),
            bracket_width: 0.0,
            iterations: 0,
        });
    }
    if f_lo >= 0.0 || f_hi < 0.0 {
        return Err(DomainError::NotBracketed { low: f_lo, high: f_hi });
    }
    let mut iterations = 0;
    while iterations < opts.max_iterations {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        let f_mid = f_eval(p, mid)?;
        if f_mid.abs() <= opts.residual_tol {
            return Ok(ThetaResult {
                theta: mid,
                residual: f_mid.abs(),
                bracket_width: hi - lo,
                iterations,
            });
        }
        if f_mid < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= opts.width_tol {
            break;
        }
    }
    let theta = 0.5 * (lo + hi);
    Ok(ThetaResult {
        theta,
        residual: f_eval(p, theta)?.abs(),
        bracket_width: hi - lo,
        iterations,
    })
}

pub fn theta_bounds(p: &CentralizerProfile) -> Result<ThetaBounds, DomainError> {
    let n = check_order(p)?;
    let log_n = n.ln();
    let log_z = (p.center_size() as f64).ln();
    let ln2 = std::f64::consts::LN_2;
    Ok(ThetaBounds {
        lower_center: log_z / log_n,
        lower_classes: 1.0 / (2.0 - p.class_count() as f64 / n),
        upper: f64::max(2.0 / 3.0 * (1.0 + ln2 / log_n), (log_z + ln2) / log_n),
    })
}

/// The interval `(2/3)(1 ± log 2 / log n)` containing `Θ(D_{2m})`, `n = 2m`.
pub fn dihedral_sandwich(order: usize) -> (f64, f64) {
    let r = std::f64::consts::LN_2 / (order as f64).ln();
    (2.0 / 3.0 * (1.0 - r), 2.0 / 3.0 * (1.0 + r))
}

/// `√(Θ n log n)`.
pub fn critical_size(p: &CentralizerProfile) -> Result<f64, DomainError> {
    let theta = solve_theta(p)?.theta;
    Ok(critical_size_for(theta, p.order()))
}

pub fn critical_size_for(theta: f64, order: usize) -> f64 {
    let n = order as f64;
    (theta * n * n.ln()).sqrt()
}
