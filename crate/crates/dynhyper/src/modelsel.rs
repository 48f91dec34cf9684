//! BIC/AIC selection of the community count q.
//!
//! Each candidate q is fit on the full series (cluster, pool, maximize the
//! conditional likelihood); the criteria add the penalty to -2 max loglik.
//! The parameter count doubles the number of community multisets of sizes
//! 2..=K, and the idealized observation count assumes balanced communities:
//! n * sum_{k=2}^{K} (p/q)^k. At K = 3 these reduce to
//! q(q+1) + q(q+1)(q+2)/3 parameters and n((p/q)^2 + (p/q)^3) observations.

use serde::{Deserialize, Serialize};

use crate::block::Membership;
use crate::changepoint;
use crate::error::{Error, Result};
use crate::exec;
use crate::hypercore::HypergraphSeries;
use crate::kmeans::KMeansConfig;

/// Which criterion drives the selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    Bic,
    Aic,
}

/// How the BIC observation count is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PenaltyMode {
    /// n * sum_k (p/q)^k, the balanced-community idealization.
    #[default]
    Idealized,
    /// Realized per-multiset observation counts: sum over multisets of
    /// 2 * ln(n * |S_c|), with empty multisets floored at one observation.
    Realized,
}

/// Fit record for one candidate q.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriterionValue {
    pub q: u32,
    pub max_loglik: f64,
    pub bic: f64,
    pub aic: f64,
    pub membership: Membership,
}

/// Scan output: per-q records plus the argmin per criterion.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SelectionTrace {
    pub records: Vec<CriterionValue>,
    pub chosen_bic: u32,
    pub chosen_aic: u32,
}

/// Number of free parameters: two per community multiset of sizes 2..=K.
pub fn parameter_count(q: u32, k_max: u32) -> f64 {
    let mut multisets = 0.0;
    for k in 2..=k_max {
        // C(q + k - 1, k)
        let mut c = 1.0;
        for i in 0..k {
            c = c * (q + k - 1 - i) as f64 / (k - i) as f64;
        }
        multisets += c;
    }
    2.0 * multisets
}

/// Idealized observation count n * sum_{k=2}^{K} (p/q)^k.
pub fn idealized_observations(n: u64, p: u32, q: u32, k_max: u32) -> f64 {
    let ratio = p as f64 / q as f64;
    let mut total = 0.0;
    for k in 2..=k_max {
        total += ratio.powi(k as i32);
    }
    n as f64 * total
}

/// Fit one q and evaluate both criteria.
pub fn evaluate_q(
    series: &HypergraphSeries,
    q: u32,
    config: &KMeansConfig,
    penalty: PenaltyMode,
    seed: u64,
) -> Result<CriterionValue> {
    let n = series.transitions();
    let fit = changepoint::fit_segment(series, 1, n, q, config, seed)?;
    let k_max = series.universe().k_max();
    let p = series.universe().node_count();
    let params = parameter_count(q, k_max);
    let penalty_term = match penalty {
        PenaltyMode::Idealized => {
            idealized_observations(n as u64, p, q, k_max).ln() * params
        }
        PenaltyMode::Realized => {
            let sizes = realized_multiset_sizes(series, &fit.membership_hat);
            sizes
                .iter()
                .map(|&s| 2.0 * ((n as f64) * (s as f64).max(1.0)).ln())
                .sum()
        }
    };
    let neg2ll = -2.0 * fit.loglik;
    Ok(CriterionValue {
        q,
        max_loglik: fit.loglik,
        bic: neg2ll + penalty_term,
        aic: neg2ll + params,
        membership: fit.membership_hat,
    })
}

fn realized_multiset_sizes(series: &HypergraphSeries, membership: &Membership) -> Vec<u64> {
    let universe = series.universe();
    let mut counts: std::collections::BTreeMap<Vec<u32>, u64> = std::collections::BTreeMap::new();
    let mut range = crate::ar1::UniverseRange::new(universe, 0, universe.edge_count());
    while let Some(nodes) = range.next_nodes() {
        *counts.entry(membership.multiset_of(nodes)).or_insert(0) += 1;
    }
    counts.into_values().collect()
}

/// BIC for one q (idealized penalty).
pub fn bic(series: &HypergraphSeries, q: u32, config: &KMeansConfig, seed: u64) -> Result<f64> {
    Ok(evaluate_q(series, q, config, PenaltyMode::Idealized, seed)?.bic)
}

/// AIC for one q.
pub fn aic(series: &HypergraphSeries, q: u32, config: &KMeansConfig, seed: u64) -> Result<f64> {
    Ok(evaluate_q(series, q, config, PenaltyMode::Idealized, seed)?.aic)
}

/// Evaluate every q in `[q_lo, q_hi]`; ties go to the smallest q.
pub fn select_q(
    series: &HypergraphSeries,
    q_lo: u32,
    q_hi: u32,
    config: &KMeansConfig,
    penalty: PenaltyMode,
    seed: u64,
) -> Result<SelectionTrace> {
    if q_lo > q_hi || q_lo == 0 {
        return Err(Error::EmptyRange);
    }
    let candidates: Vec<u32> = (q_lo..=q_hi).collect();
    let results: Vec<Result<CriterionValue>> = exec::map_indexed(candidates.len(), |i| {
        evaluate_q(series, candidates[i], config, penalty, seed)
    });
    let mut records = Vec::with_capacity(results.len());
    for r in results {
        records.push(r?);
    }
    let pick = |key: fn(&CriterionValue) -> f64| -> u32 {
        let mut best = &records[0];
        for r in &records[1..] {
            if key(r) < key(best) {
                best = r;
            }
        }
        best.q
    };
    Ok(SelectionTrace {
        chosen_bic: pick(|r| r.bic),
        chosen_aic: pick(|r| r.aic),
        records,
    })
}
