//! Single change-point estimation by segmented maximum likelihood.
//!
//! For each candidate split tau in [n0, n - n0] the series is refit on
//! [1, tau] and [tau + 1, n] (clustering, block-parameter pooling, and the
//! maximized conditional log-likelihood are all recomputed per window), and
//! tau_hat maximizes the summed segment log-likelihoods, smallest tau on
//! ties. Window transition counts come from per-edge prefix sums so the scan
//! costs one clustering per window rather than one series pass.

use serde::{Deserialize, Serialize};

use crate::block::{BlockParams, Membership};
use crate::error::{Error, Result};
use crate::estimate::TransitionCounts;
use crate::exec;
use crate::hsbm;
use crate::hypercore::{HyperedgeUniverse, HypergraphSeries};
use crate::kmeans::KMeansConfig;
use crate::linalg::Mat;

/// One fitted segment: clustering, pooled parameters, maximized loglik.
#[derive(Debug, Clone)]
pub struct SegmentFit {
    pub membership_hat: Membership,
    pub params_hat: BlockParams,
    pub loglik: f64,
}

/// Change-point scan output.
#[derive(Debug, Clone)]
pub struct ChangePointResult {
    pub tau_hat: usize,
    pub n0: usize,
    /// (tau, summed segment log-likelihood) over the scan grid.
    pub objective: Vec<(usize, f64)>,
    pub left: SegmentFit,
    pub right: SegmentFit,
}

/// Detection settings.
#[derive(Debug, Clone)]
pub struct DetectConfig {
    /// Minimum segment length; `None` uses max(2, ceil(0.05 n)).
    pub n0: Option<usize>,
    pub kmeans: KMeansConfig,
    /// Re-cluster every s-th candidate tau (1 = every candidate, the exact
    /// scan). Larger values reuse the most recent clustering for the counts
    /// of intermediate candidates.
    pub refresh_every: usize,
}

impl Default for DetectConfig {
    fn default() -> Self {
        DetectConfig {
            n0: None,
            kmeans: KMeansConfig::default(),
            refresh_every: 1,
        }
    }
}

/// Per-edge cumulative transition counts, for O(1) window queries.
pub struct PrefixCounts {
    n: usize,
    /// For each touched edge: rank and cumulative counts after each
    /// transition t = 0..n (index 0 is all zeros).
    ranks: Vec<u64>,
    cumulative: Vec<Vec<TransitionCounts>>,
}

impl PrefixCounts {
    pub fn build(series: &HypergraphSeries) -> Result<Self> {
        if series.len() < 2 {
            return Err(Error::SeriesTooShort {
                need: 2,
                have: series.len(),
            });
        }
        let n = series.transitions();
        // collect touched ranks first
        let mut touched: std::collections::HashSet<u64> = std::collections::HashSet::new();
        for t in 0..series.len() {
            touched.extend(series.snapshot(t).present_ranks().iter().copied());
        }
        let mut ranks: Vec<u64> = touched.into_iter().collect();
        ranks.sort_unstable();
        let index: std::collections::HashMap<u64, usize> =
            ranks.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let mut cumulative = vec![vec![TransitionCounts::default(); n + 1]; ranks.len()];
        for t in 1..=n {
            let prev = series.snapshot(t - 1).present_ranks();
            let cur = series.snapshot(t).present_ranks();
            // start from the previous cumulative row
            for row in cumulative.iter_mut() {
                row[t] = row[t - 1];
            }
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
                cumulative[index[&rank]][t].record(p, c);
            }
        }
        // the 0->0 steps are implicit: fill so that total == t
        for row in cumulative.iter_mut() {
            for (t, counts) in row.iter_mut().enumerate() {
                let seen = counts.total();
                debug_assert!(seen <= t as u64);
                counts.n00 += t as u64 - seen;
            }
        }
        Ok(PrefixCounts {
            n,
            ranks,
            cumulative,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Counts over transitions [t_lo, t_hi] for every touched edge, as a
    /// sparse (rank, counts) list in rank order. Untouched edges are implied
    /// all-(0,0).
    pub fn window(&self, t_lo: usize, t_hi: usize) -> Vec<(u64, TransitionCounts)> {
        self.ranks
            .iter()
            .zip(&self.cumulative)
            .map(|(&rank, row)| {
                let hi = row[t_hi];
                let lo = row[t_lo - 1];
                (
                    rank,
                    TransitionCounts {
                        n01: hi.n01 - lo.n01,
                        n00: hi.n00 - lo.n00,
                        n10: hi.n10 - lo.n10,
                        n11: hi.n11 - lo.n11,
                    },
                )
            })
            .collect()
    }
}

/// Conditional log-likelihood of the window [t_lo, t_hi] under fixed
/// membership and block parameters. Terms with a zero count contribute
/// nothing even when the corresponding probability is zero.
pub fn segment_loglik(
    series: &HypergraphSeries,
    t_lo: usize,
    t_hi: usize,
    membership: &Membership,
    params: &BlockParams,
) -> Result<f64> {
    if t_lo < 1 || t_hi > series.transitions() || t_lo > t_hi {
        return Err(Error::EmptyWindow { lo: t_lo, hi: t_hi });
    }
    let estimates = crate::estimate::estimate_window(series, t_lo, t_hi)?;
    let pooled = pool_counts(
        series.universe(),
        estimates.touched(),
        estimates.n(),
        membership,
    );
    let mut ll = 0.0;
    for (ms, counts) in pooled {
        let (theta, eta) = params.pair(&ms)?;
        ll += loglik_terms(&counts, theta, eta);
    }
    Ok(ll)
}

fn loglik_terms(counts: &TransitionCounts, theta: f64, eta: f64) -> f64 {
    let mut ll = 0.0;
    let term = |count: u64, p: f64| -> f64 {
        if count == 0 {
            0.0
        } else {
            count as f64 * p.ln()
        }
    };
    ll += term(counts.n01, theta);
    ll += term(counts.n00, 1.0 - theta);
    ll += term(counts.n10, eta);
    ll += term(counts.n11, 1.0 - eta);
    ll
}

/// Pool sparse per-edge counts by community multiset over the full universe.
fn pool_counts(
    universe: &HyperedgeUniverse,
    touched: &[(u64, TransitionCounts)],
    window_n: u64,
    membership: &Membership,
) -> std::collections::BTreeMap<Vec<u32>, TransitionCounts> {
    let mut pooled: std::collections::BTreeMap<Vec<u32>, TransitionCounts> =
        std::collections::BTreeMap::new();
    let mut range = crate::ar1::UniverseRange::new(universe, 0, universe.edge_count());
    let mut ti = 0usize;
    let mut rank = 0u64;
    while let Some(nodes) = range.next_nodes() {
        let counts = if ti < touched.len() && touched[ti].0 == rank {
            let c = touched[ti].1;
            ti += 1;
            c
        } else {
            TransitionCounts {
                n00: window_n,
                ..Default::default()
            }
        };
        let ms = membership.multiset_of(nodes);
        pooled.entry(ms).or_default().merge(&counts);
        rank += 1;
    }
    pooled
}

/// Fit one window: cluster on the window's estimates, pool block parameters
/// over the estimated communities, return the maximized log-likelihood.
pub fn fit_segment(
    series: &HypergraphSeries,
    t_lo: usize,
    t_hi: usize,
    q: u32,
    config: &KMeansConfig,
    seed: u64,
) -> Result<SegmentFit> {
    let prefix = PrefixCounts::build(series)?;
    fit_window(
        series.universe(),
        &prefix.window(t_lo, t_hi),
        (t_hi - t_lo + 1) as u64,
        q,
        config,
        seed,
        None,
    )
}

/// Internal window fit from sparse counts. `fixed_membership` skips the
/// clustering step (used by the thinned scan).
fn fit_window(
    universe: &HyperedgeUniverse,
    window: &[(u64, TransitionCounts)],
    window_n: u64,
    q: u32,
    config: &KMeansConfig,
    seed: u64,
    fixed_membership: Option<&Membership>,
) -> Result<SegmentFit> {
    let membership = match fixed_membership {
        Some(m) => m.clone(),
        None => {
            let p = universe.node_count() as usize;
            let mut a1 = Mat::zeros(p, p);
            let mut a2 = Mat::zeros(p, p);
            for &(rank, counts) in window {
                let (alpha_hat, beta_hat) = crate::estimate::mle(&counts);
                let edge = universe.unrank(rank);
                let m = edge.size() as f64;
                if alpha_hat > 0.0 {
                    scatter(&mut a1, edge.nodes(), alpha_hat / m);
                }
                if beta_hat < 1.0 {
                    scatter(&mut a2, edge.nodes(), (1.0 - beta_hat) / m);
                }
            }
            let d1: Vec<f64> = (0..p).map(|i| a1.row(i).iter().sum()).collect();
            let d2: Vec<f64> = (0..p).map(|i| a2.row(i).iter().sum()).collect();
            let sim = hsbm::SimilarityMatrices { a1, a2, d1, d2 };
            match hsbm::build_laplacian(&sim) {
                Ok(lap) => hsbm::spectral_cluster(&lap, q, config, seed)?.labels,
                Err(Error::ZeroDegree { .. }) => {
                    // window too thin to carry any similarity mass for some
                    // node; fall back to a single community so the segment
                    // still yields a finite log-likelihood
                    Membership::new(vec![0; p], q)?
                }
                Err(e) => return Err(e),
            }
        }
    };
    let pooled = pool_counts(universe, window, window_n, &membership);
    let mut params = BlockParams::new();
    let mut loglik = 0.0;
    for (ms, counts) in pooled {
        let (theta, eta) = crate::estimate::mle(&counts);
        loglik += loglik_terms(&counts, theta, eta);
        params.insert(&ms, theta, eta)?;
    }
    Ok(SegmentFit {
        membership_hat: membership,
        params_hat: params,
        loglik,
    })
}

fn scatter(a: &mut Mat, nodes: &[u32], weight: f64) {
    for (idx, &i) in nodes.iter().enumerate() {
        a.add_to(i as usize, i as usize, weight);
        for &j in &nodes[idx + 1..] {
            a.add_to(i as usize, j as usize, weight);
            a.add_to(j as usize, i as usize, weight);
        }
    }
}

/// Scan the candidate change points and return the argmax with the full
/// objective trace.
pub fn detect(
    series: &HypergraphSeries,
    q: u32,
    config: &DetectConfig,
    seed: u64,
) -> Result<ChangePointResult> {
    let n = series.transitions();
    let n0 = config.n0.unwrap_or_else(|| ((n as f64 * 0.05).ceil() as usize).max(2));
    if n0 < 1 || n < 2 * n0 {
        return Err(Error::WindowTooSmall { n, n0 });
    }
    let prefix = PrefixCounts::build(series)?;
    let universe = series.universe();
    let candidates: Vec<usize> = (n0..=n - n0).collect();
    let refresh = config.refresh_every.max(1);

    // Cluster at the anchor candidates; intermediate candidates reuse the
    // most recent anchor's memberships. refresh = 1 clusters at every tau.
    let anchor_count = candidates.len().div_ceil(refresh);
    let anchors: Vec<Result<(Membership, Membership)>> =
        exec::map_indexed(anchor_count, |ai| {
            let tau = candidates[ai * refresh];
            let left = fit_window(
                universe,
                &prefix.window(1, tau),
                tau as u64,
                q,
                &config.kmeans,
                seed,
                None,
            )?;
            let right = fit_window(
                universe,
                &prefix.window(tau + 1, n),
                (n - tau) as u64,
                q,
                &config.kmeans,
                seed,
                None,
            )?;
            Ok((left.membership_hat, right.membership_hat))
        });
    let mut anchor_memberships = Vec::with_capacity(anchor_count);
    for a in anchors {
        anchor_memberships.push(a?);
    }

    let objective: Vec<Result<f64>> = exec::map_indexed(candidates.len(), |ci| {
        let tau = candidates[ci];
        let (left_membership, right_membership) = &anchor_memberships[ci / refresh];
        let left = fit_window(
            universe,
            &prefix.window(1, tau),
            tau as u64,
            q,
            &config.kmeans,
            seed,
            Some(left_membership),
        )?;
        let right = fit_window(
            universe,
            &prefix.window(tau + 1, n),
            (n - tau) as u64,
            q,
            &config.kmeans,
            seed,
            Some(right_membership),
        )?;
        Ok(left.loglik + right.loglik)
    });

    let mut trace = Vec::with_capacity(candidates.len());
    let mut best_tau = candidates[0];
    let mut best_obj = f64::NEG_INFINITY;
    for (tau, obj) in candidates.iter().zip(objective) {
        let obj = obj?;
        trace.push((*tau, obj));
        if obj > best_obj {
            best_obj = obj;
            best_tau = *tau;
        }
    }

    let left = fit_window(
        universe,
        &prefix.window(1, best_tau),
        best_tau as u64,
        q,
        &config.kmeans,
        seed,
        None,
    )?;
    let right = fit_window(
        universe,
        &prefix.window(best_tau + 1, n),
        (n - best_tau) as u64,
        q,
        &config.kmeans,
        seed,
        None,
    )?;
    Ok(ChangePointResult {
        tau_hat: best_tau,
        n0,
        objective: trace,
        left,
        right,
    })
}

/// The change-point signal strength and its components.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignalStrength {
    /// ||A_{1,1} - A_{2,1}||_F^2 (theta side).
    pub theta_diff_frobenius_sq: f64,
    /// ||A_{1,2} - A_{2,2}||_F^2 (eta side).
    pub eta_diff_frobenius_sq: f64,
    /// p^{-(K-1)} times the sum of the two squared norms.
    pub delta_f_sq: f64,
}

/// Exact signal strength between two block-parameter regimes sharing one
/// membership: Frobenius distances of the population rate matrices,
/// normalized by p^{K-1}.
pub fn signal_strength(
    membership: &Membership,
    before: &BlockParams,
    after: &BlockParams,
    universe: &HyperedgeUniverse,
) -> Result<SignalStrength> {
    membership.community_sizes()?;
    let theta_1 = hsbm::population_matrix(membership, universe, |ms| before.theta(ms))?;
    let theta_2 = hsbm::population_matrix(membership, universe, |ms| after.theta(ms))?;
    let eta_1 = hsbm::population_matrix(membership, universe, |ms| before.eta(ms))?;
    let eta_2 = hsbm::population_matrix(membership, universe, |ms| after.eta(ms))?;
    let theta_diff = theta_1.frobenius_sq_diff(&theta_2);
    let eta_diff = eta_1.frobenius_sq_diff(&eta_2);
    let p = universe.node_count() as f64;
    let k = universe.k_max();
    let norm = p.powi(k as i32 - 1);
    Ok(SignalStrength {
        theta_diff_frobenius_sq: theta_diff,
        eta_diff_frobenius_sq: eta_diff,
        delta_f_sq: (theta_diff + eta_diff) / norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ar1::Init;
    use crate::hsbm::simulate_hsbm;
    use crate::hypercore::HyperedgeUniverse;

    fn two_regime_series(
        p: u32,
        q: u32,
        n: usize,
        tau0: usize,
        shift: f64,
        seed: u64,
    ) -> (HypergraphSeries, Membership, BlockParams, BlockParams) {
        let universe = HyperedgeUniverse::new(p, 3).unwrap();
        let membership = Membership::balanced(p, q).unwrap();
        let before =
            BlockParams::community_design(q, 3, 0.6, 0.4, (0.05, 0.25), (0.75, 0.95), seed)
                .unwrap();
        let mut after = before.clone();
        for size in 2..=3usize {
            for ms in crate::block::multisets(q, size) {
                if ms.iter().all(|&c| c == ms[0]) {
                    after.insert(&ms, 0.6 + shift, 0.4 - shift).unwrap();
                }
            }
        }
        let first = simulate_hsbm(
            &membership,
            &before,
            &universe,
            tau0 as u64,
            seed,
            &Init::Bernoulli(0.5),
        )
        .unwrap();
        // second regime starts from the last snapshot of the first
        let last = first.snapshot(tau0).clone();
        let second = simulate_hsbm(
            &membership,
            &after,
            &universe,
            (n - tau0) as u64,
            seed ^ 0x5bd1e995,
            &Init::Fixed(last),
        )
        .unwrap();
        let mut snaps = first.snapshots().to_vec();
        snaps.extend_from_slice(&second.snapshots()[1..]);
        let series = HypergraphSeries::new(universe, snaps).unwrap();
        (series, membership, before, after)
    }

    #[test]
    fn loglik_half_probabilities() {
        // theta = eta = 0.5 homogeneous: loglik = -(#transitions) ln 2
        let universe = HyperedgeUniverse::new(4, 2).unwrap();
        let membership = Membership::balanced(4, 1).unwrap();
        let mut params = BlockParams::new();
        params.insert(&[0, 0], 0.5, 0.5).unwrap();
        let series = simulate_hsbm(&membership, &params, &universe, 6, 3, &Init::Bernoulli(0.5))
            .unwrap();
        let ll = segment_loglik(&series, 1, 6, &membership, &params).unwrap();
        let transitions = 6.0 * universe.edge_count() as f64;
        assert!((ll + transitions * 2f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn loglik_single_transition() {
        // one edge, one 0 -> 1 transition, theta = 0.25: ll = ln 0.25
        let universe = HyperedgeUniverse::new(2, 2).unwrap();
        let membership = Membership::balanced(2, 1).unwrap();
        let mut params = BlockParams::new();
        params.insert(&[0, 0], 0.25, 0.1).unwrap();
        let empty = crate::hypercore::HypergraphSnapshot::empty(&universe);
        let full = crate::hypercore::HypergraphSnapshot::from_ranks(&universe, vec![0]);
        let series =
            HypergraphSeries::new(universe, vec![empty, full]).unwrap();
        let ll = segment_loglik(&series, 1, 1, &membership, &params).unwrap();
        assert!((ll - 0.25f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn loglik_brute_force_product() {
        // hand-built 2-edge, n = 3 case against the direct product of
        // transition probabilities
        let universe = HyperedgeUniverse::new(3, 2).unwrap();
        let membership = Membership::new(vec![0, 0, 1], 2).unwrap();
        let mut params = BlockParams::new();
        params.insert(&[0, 0], 0.3, 0.2).unwrap();
        params.insert(&[0, 1], 0.6, 0.3).unwrap();
        params.insert(&[1, 1], 0.5, 0.5).unwrap();
        // edges: (0,1) multiset [0,0]; (0,2) and (1,2) multiset [0,1]
        // paths: edge0: 1,1,0,0; edge1: 0,1,1,1; edge2: 0,0,0,0
        let snaps: Vec<crate::hypercore::HypergraphSnapshot> = [
            vec![0u64],
            vec![0, 1],
            vec![1],
            vec![1],
        ]
        .into_iter()
        .map(|ranks| crate::hypercore::HypergraphSnapshot::from_ranks(&universe, ranks))
        .collect();
        let series = HypergraphSeries::new(universe, snaps).unwrap();
        let ll = segment_loglik(&series, 1, 3, &membership, &params).unwrap();
        // edge0 [0,0]: 1->1 (0.8), 1->0 (0.2), 0->0 (0.7)
        // edge1 [0,1]: 0->1 (0.6), 1->1 (0.7), 1->1 (0.7)
        // edge2 [0,1]: 0->0 three times (0.4 each)
        let want = (0.8f64 * 0.2 * 0.7).ln() + (0.6f64 * 0.7 * 0.7).ln() + (0.4f64.powi(3)).ln();
        assert!((ll - want).abs() < 1e-12, "ll {ll} want {want}");
    }

    #[test]
    fn loglik_additivity_over_split() {
        let (series, membership, before, _) = two_regime_series(12, 2, 20, 10, 0.3, 41);
        let full = segment_loglik(&series, 1, 20, &membership, &before).unwrap();
        for tau in [5, 10, 15] {
            let a = segment_loglik(&series, 1, tau, &membership, &before).unwrap();
            let b = segment_loglik(&series, tau + 1, 20, &membership, &before).unwrap();
            assert!((full - a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn fit_full_window_equals_no_change_fit(){
        let (series, _, _, _) = two_regime_series(12, 2, 16, 8, 0.3, 4);
        let fit = fit_segment(&series, 1, 16, 2, &KMeansConfig::default(), 5).unwrap();
        assert!(fit.loglik <= 0.0);
        // loglik at the pooled MLE must dominate any other parameter choice
        let alt = segment_loglik(&series, 1, 16, &fit.membership_hat, &fit.params_hat).unwrap();
        assert!((alt - fit.loglik).abs() < 1e-9);
    }

    #[test]
    fn degenerate_window_single_transition() {
        let (series, _, _, _) = two_regime_series(9, 3, 12, 6, 0.3, 8);
        let fit = fit_segment(&series, 3, 3, 3, &KMeansConfig::default(), 2).unwrap();
        assert!(fit.loglik.is_finite());
    }

    #[test]
    fn detect_recovers_strong_change() {
        let (series, _, _, _) = two_regime_series(15, 3, 24, 12, 0.3, 19);
        let result = detect(&series, 3, &DetectConfig::default(), 7).unwrap();
        assert!(
            result.tau_hat.abs_diff(12) <= 2,
            "tau_hat = {}",
            result.tau_hat
        );
        // trace covers the whole grid
        assert_eq!(result.objective.first().unwrap().0, result.n0);
        assert_eq!(result.objective.last().unwrap().0, 24 - result.n0);
    }

    #[test]
    fn oracle_objective_peaks_at_true_change() {
        // with the true membership and true per-segment parameters, the
        // mean split objective over replications peaks at tau0 (within 1)
        let n = 20usize;
        let tau0 = 10usize;
        let mut totals = vec![0.0f64; n - 3];
        for seed in 0..20u64 {
            let (series, membership, before, after) =
                two_regime_series(10, 2, n, tau0, 0.3, 500 + seed);
            for (i, tau) in (2..=n - 2).enumerate() {
                let left = segment_loglik(&series, 1, tau, &membership, &before).unwrap();
                let right =
                    segment_loglik(&series, tau + 1, n, &membership, &after).unwrap();
                totals[i] += left + right;
            }
        }
        let argmax = 2 + totals
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        assert!(
            argmax.abs_diff(tau0) <= 1,
            "oracle objective peaks at {argmax}, expected near {tau0}"
        );
    }

    #[test]
    fn detect_window_guard() {
        let (series, _, _, _) = two_regime_series(8, 2, 6, 3, 0.3, 2);
        let config = DetectConfig {
            n0: Some(4),
            ..Default::default()
        };
        assert!(matches!(
            detect(&series, 2, &config, 1),
            Err(Error::WindowTooSmall { .. })
        ));
    }

    #[test]
    fn signal_strength_zero_when_equal() {
        let universe = HyperedgeUniverse::new(10, 3).unwrap();
        let membership = Membership::balanced(10, 2).unwrap();
        let params =
            BlockParams::community_design(2, 3, 0.6, 0.4, (0.05, 0.25), (0.75, 0.95), 3).unwrap();
        let s = signal_strength(&membership, &params, &params, &universe).unwrap();
        assert_eq!(s.delta_f_sq, 0.0);
    }

    #[test]
    fn signal_strength_single_block_pairs_by_hand() {
        // one community, K = 2, theta differs by d, eta equal:
        // every off-diagonal entry of the theta matrix differs by d/2 and
        // every diagonal entry by (p-1) d/2
        let p = 6u32;
        let universe = HyperedgeUniverse::new(p, 2).unwrap();
        let membership = Membership::balanced(p, 1).unwrap();
        let mut before = BlockParams::new();
        before.insert(&[0, 0], 0.5, 0.3).unwrap();
        let mut after = BlockParams::new();
        let d = 0.2;
        after.insert(&[0, 0], 0.5 + d, 0.3).unwrap();
        let s = signal_strength(&membership, &before, &after, &universe).unwrap();
        let pf = p as f64;
        let offdiag = pf * (pf - 1.0) * (d / 2.0) * (d / 2.0);
        let diag = pf * ((pf - 1.0) * d / 2.0).powi(2);
        let want = (offdiag + diag) / pf; // p^{K-1} = p for K = 2
        assert!(
            (s.delta_f_sq - want).abs() < 1e-12,
            "got {} want {want}",
            s.delta_f_sq
        );
        assert_eq!(s.eta_diff_frobenius_sq, 0.0);
    }

    #[test]
    fn signal_strength_monotone_in_shift() {
        let universe = HyperedgeUniverse::new(12, 3).unwrap();
        let membership = Membership::balanced(12, 3).unwrap();
        let before =
            BlockParams::community_design(3, 3, 0.6, 0.4, (0.05, 0.25), (0.75, 0.95), 21).unwrap();
        let mut last = 0.0;
        for shift in [0.05, 0.15, 0.3] {
            let mut after = before.clone();
            for size in 2..=3usize {
                for ms in crate::block::multisets(3, size) {
                    if ms.iter().all(|&c| c == ms[0]) {
                        after.insert(&ms, 0.6 + shift, 0.4 - shift).unwrap();
                    }
                }
            }
            let s = signal_strength(&membership, &before, &after, &universe).unwrap();
            assert!(s.delta_f_sq > last);
            last = s.delta_f_sq;
        }
    }
}
