//! Per-edge sufficient statistics, maximum-likelihood estimation of
//! (alpha, beta), and asymptotic confidence intervals.
//!
//! The estimators are alpha_hat = n01 / (n01 + n00) and
//! beta_hat = n10 / (n10 + n11), with the 0/0 = 1 convention for empty
//! denominators. The convention applies to the estimator only: standard
//! errors are reported as undefined in those cases, and the variance
//! regularizer (adding 1e-4 / n to a zero denominator) is applied only when
//! a numeric confidence interval is requested.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypercore::{Hyperedge, HyperedgeUniverse, HypergraphSeries};
use crate::stats::normal_quantile;

/// Transition counts for one edge over t = 1..n.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionCounts {
    /// 0 -> 1
    pub n01: u64,
    /// 0 -> 0
    pub n00: u64,
    /// 1 -> 0
    pub n10: u64,
    /// 1 -> 1
    pub n11: u64,
}

impl TransitionCounts {
    pub fn total(&self) -> u64 {
        self.n01 + self.n00 + self.n10 + self.n11
    }

    #[inline]
    pub fn record(&mut self, prev: bool, cur: bool) {
        match (prev, cur) {
            (false, true) => self.n01 += 1,
            (false, false) => self.n00 += 1,
            (true, false) => self.n10 += 1,
            (true, true) => self.n11 += 1,
        }
    }

    pub fn merge(&mut self, other: &TransitionCounts) {
        self.n01 += other.n01;
        self.n00 += other.n00;
        self.n10 += other.n10;
        self.n11 += other.n11;
    }
}

/// MLE of (alpha, beta) from transition counts, with 0/0 = 1.
pub fn mle(counts: &TransitionCounts) -> (f64, f64) {
    let alpha = ratio_or_one(counts.n01, counts.n01 + counts.n00);
    let beta = ratio_or_one(counts.n10, counts.n10 + counts.n11);
    (alpha, beta)
}

#[inline]
fn ratio_or_one(num: u64, den: u64) -> f64 {
    if den == 0 {
        1.0
    } else {
        num as f64 / den as f64
    }
}

/// Point estimates plus asymptotic standard errors for one edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeEstimate {
    pub alpha_hat: f64,
    pub beta_hat: f64,
    /// sqrt(sigma_aa / n); `None` when the zero-start count is zero.
    pub se_alpha: Option<f64>,
    /// sqrt(sigma_bb / n); `None` when the one-start count is zero.
    pub se_beta: Option<f64>,
    pub counts: TransitionCounts,
}

impl EdgeEstimate {
    pub fn from_counts(counts: TransitionCounts) -> Self {
        let (alpha_hat, beta_hat) = mle(&counts);
        let n = counts.total();
        let se = |num_defined: bool, var: f64| {
            if num_defined && var.is_finite() {
                Some((var / n as f64).sqrt())
            } else {
                None
            }
        };
        // sigma_aa = a(1-a)(a+b)/b, sigma_bb = b(1-b)(a+b)/a
        let var_alpha = if beta_hat > 0.0 {
            alpha_hat * (1.0 - alpha_hat) * (alpha_hat + beta_hat) / beta_hat
        } else {
            f64::INFINITY
        };
        let var_beta = if alpha_hat > 0.0 {
            beta_hat * (1.0 - beta_hat) * (alpha_hat + beta_hat) / alpha_hat
        } else {
            f64::INFINITY
        };
        EdgeEstimate {
            alpha_hat,
            beta_hat,
            se_alpha: se(counts.n01 + counts.n00 > 0, var_alpha),
            se_beta: se(counts.n10 + counts.n11 > 0, var_beta),
            counts,
        }
    }
}

/// A two-sided confidence interval, clipped to [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn covers(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Numeric confidence intervals for (alpha, beta) at the given level.
///
/// When the variance denominator (beta_hat for alpha's interval, alpha_hat
/// for beta's) is exactly zero, 1e-4 / n is added to it before dividing.
pub fn confidence_intervals(
    estimate: &EdgeEstimate,
    n: u64,
    level: f64,
) -> Result<(Interval, Interval)> {
    if !(0.0 < level && level < 1.0) {
        return Err(Error::InvalidLevel(level));
    }
    let z = normal_quantile(1.0 - (1.0 - level) / 2.0);
    let nf = n as f64;
    let reg = 1e-4 / nf;
    let a = estimate.alpha_hat;
    let b = estimate.beta_hat;
    let denom_a = if b == 0.0 { reg } else { b };
    let denom_b = if a == 0.0 { reg } else { a };
    let var_a = a * (1.0 - a) * (a + b) / denom_a;
    let var_b = b * (1.0 - b) * (a + b) / denom_b;
    let half_a = z * (var_a / nf).sqrt();
    let half_b = z * (var_b / nf).sqrt();
    let clip = |x: f64| x.clamp(0.0, 1.0);
    Ok((
        Interval {
            lo: clip(a - half_a),
            hi: clip(a + half_a),
        },
        Interval {
            lo: clip(b - half_b),
            hi: clip(b + half_b),
        },
    ))
}

/// Count the four transition indicators for one edge over t = 1..n.
pub fn count_transitions(series: &HypergraphSeries, edge: &Hyperedge) -> Result<TransitionCounts> {
    if series.len() < 2 {
        return Err(Error::SeriesTooShort {
            need: 2,
            have: series.len(),
        });
    }
    let universe = series.universe();
    let checked = universe.canonicalize(edge.nodes())?;
    let rank = universe.rank(&checked);
    let mut counts = TransitionCounts::default();
    let mut prev = series.snapshot(0).contains_rank(rank);
    for t in 1..series.len() {
        let cur = series.snapshot(t).contains_rank(rank);
        counts.record(prev, cur);
        prev = cur;
    }
    Ok(counts)
}

/// Transition counts for every edge of the universe, stored sparsely.
///
/// Edges never present in any snapshot are not stored; their counts are
/// synthesized on demand as n00 = n (hence alpha_hat = 0, beta_hat = 1 under
/// the 0/0 convention).
#[derive(Debug, Clone)]
pub struct EdgeEstimates {
    universe: HyperedgeUniverse,
    n: u64,
    /// (rank, counts), sorted by rank.
    touched: Vec<(u64, TransitionCounts)>,
}

impl EdgeEstimates {
    pub fn universe(&self) -> &HyperedgeUniverse {
        &self.universe
    }

    /// Number of transitions n.
    pub fn n(&self) -> u64 {
        self.n
    }

    /// Counts for an edge rank (synthesized for untouched edges).
    pub fn counts(&self, rank: u64) -> TransitionCounts {
        match self.touched.binary_search_by_key(&rank, |e| e.0) {
            Ok(i) => self.touched[i].1,
            Err(_) => TransitionCounts {
                n00: self.n,
                ..Default::default()
            },
        }
    }

    pub fn estimate(&self, rank: u64) -> EdgeEstimate {
        EdgeEstimate::from_counts(self.counts(rank))
    }

    /// Edges that were present at least once, in rank order.
    pub fn touched(&self) -> &[(u64, TransitionCounts)] {
        &self.touched
    }

    pub fn touched_count(&self) -> usize {
        self.touched.len()
    }
}

/// Estimate every edge of the universe from a series.
///
/// Streams consecutive snapshot pairs with a sorted merge, so the cost is
/// proportional to the number of present-edge entries, not to the universe.
pub fn estimate_all(series: &HypergraphSeries) -> Result<EdgeEstimates> {
    estimate_window(series, 1, series.transitions())
}

/// Estimate from the transitions t in [t_lo, t_hi] only (1-based transition
/// indices; transition t moves X_{t-1} to X_t).
pub fn estimate_window(series: &HypergraphSeries, t_lo: usize, t_hi: usize) -> Result<EdgeEstimates> {
    if series.len() < 2 {
        return Err(Error::SeriesTooShort {
            need: 2,
            have: series.len(),
        });
    }
    if t_lo < 1 || t_hi > series.transitions() || t_lo > t_hi {
        return Err(Error::EmptyWindow { lo: t_lo, hi: t_hi });
    }
    let mut touched: std::collections::HashMap<u64, TransitionCounts> =
        std::collections::HashMap::new();
    let window_n = (t_hi - t_lo + 1) as u64;
    for t in t_lo..=t_hi {
        let prev = series.snapshot(t - 1).present_ranks();
        let cur = series.snapshot(t).present_ranks();
        let (mut i, mut j) = (0, 0);
        while i < prev.len() || j < cur.len() {
            let (rank, p, c) = if j >= cur.len() || (i < prev.len() && prev[i] < cur[j]) {
                let r = prev[i];
                i += 1;
                (r, true, false)
            } else if i >= prev.len() || cur[j] < prev[i] {
                let r = cur[j];
                j += 1;
                (r, false, true)
            } else {
                let r = prev[i];
                i += 1;
                j += 1;
                (r, true, true)
            };
            touched.entry(rank).or_default().record(p, c);
        }
    }
    // implicit 0->0 transitions for steps where a touched edge was absent
    let mut touched: Vec<(u64, TransitionCounts)> = touched.into_iter().collect();
    touched.sort_unstable_by_key(|e| e.0);
    for (_, counts) in touched.iter_mut() {
        let seen = counts.total();
        debug_assert!(seen <= window_n);
        counts.n00 += window_n - seen;
    }
    Ok(EdgeEstimates {
        universe: series.universe().clone(),
        n: window_n,
        touched,
    })
}
