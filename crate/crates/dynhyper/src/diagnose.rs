//! Model-adequacy diagnostics: residual construction, the lag-1 two-way
//! contingency statistic T, and its permutation p-value.
//!
//! Residuals take four values per edge, one per transition type:
//! (1,0) -> -1, (0,0) -> -beta_hat/(1-alpha_hat),
//! (1,1) -> alpha_hat/(1-beta_hat), (0,1) -> +1. The contingency tables are
//! indexed by the transition type itself (a fixed relabeling of the four
//! support points), so T never compares floating-point residual values.
//! Cells whose expected count is zero contribute nothing to T.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::EdgeEstimates;
use crate::exec;
use crate::hypercore::HypergraphSeries;
use crate::rng::{tag, SeqRng, StreamKey};

/// Transition categories indexing the 4-point residual support.
/// 0: (0,0), 1: (0,1), 2: (1,0), 3: (1,1) as (previous, current).
pub const CAT_00: u8 = 0;
pub const CAT_01: u8 = 1;
pub const CAT_10: u8 = 2;
pub const CAT_11: u8 = 3;

/// Residual sequences for the edges that admit well-defined support points.
#[derive(Debug, Clone)]
pub struct ResidualSeries {
    /// Number of transitions n (sequence length per edge).
    n: usize,
    edges: Vec<ResidualEdge>,
    /// Edges dropped because 1 - alpha_hat = 0 or 1 - beta_hat = 0.
    excluded: usize,
}

#[derive(Debug, Clone)]
pub struct ResidualEdge {
    pub rank: u64,
    /// Numeric residual value per category, indexed by CAT_*.
    pub support: [f64; 4],
    /// Category of each transition t = 1..n.
    pub cats: Vec<u8>,
}

impl ResidualSeries {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[ResidualEdge] {
        &self.edges
    }

    /// Count of edges excluded for degenerate support.
    pub fn excluded_count(&self) -> usize {
        self.excluded
    }

    /// Numeric residual of edge `e` at transition t (1-based).
    pub fn value(&self, e: usize, t: usize) -> f64 {
        let edge = &self.edges[e];
        edge.support[edge.cats[t - 1] as usize]
    }
}

/// Residual support for (alpha_hat, beta_hat):
/// [(0,0), (0,1), (1,0), (1,1)] -> [-b/(1-a), +1, -1, a/(1-b)].
fn support(alpha_hat: f64, beta_hat: f64) -> Option<[f64; 4]> {
    if alpha_hat >= 1.0 || beta_hat >= 1.0 {
        return None;
    }
    Some([
        -beta_hat / (1.0 - alpha_hat),
        1.0,
        -1.0,
        alpha_hat / (1.0 - beta_hat),
    ])
}

/// Build residual sequences from a series and its estimates.
///
/// Edges whose estimates give 1 - alpha_hat = 0 or 1 - beta_hat = 0 have an
/// undefined support point; they are excluded and counted. Untouched edges
/// (beta_hat = 1 by the 0/0 convention) land in that bucket, so the residual
/// set covers exactly the edges with usable histories.
pub fn residuals(series: &HypergraphSeries, estimates: &EdgeEstimates) -> Result<ResidualSeries> {
    if series.len() < 2 {
        return Err(Error::SeriesTooShort {
            need: 2,
            have: series.len(),
        });
    }
    let n = series.transitions();
    let mut edges = Vec::with_capacity(estimates.touched_count());
    let mut excluded = 0usize;
    for &(rank, counts) in estimates.touched() {
        let (alpha_hat, beta_hat) = crate::estimate::mle(&counts);
        let Some(support) = support(alpha_hat, beta_hat) else {
            excluded += 1;
            continue;
        };
        edges.push(ResidualEdge {
            rank,
            support,
            cats: vec![0; n],
        });
    }
    // untouched edges are all-(0,0) paths with beta_hat = 1: excluded
    excluded += estimates.universe().edge_count() as usize - estimates.touched_count();

    // fill categories by walking consecutive snapshots
    let mut rank_to_idx: std::collections::HashMap<u64, usize> = std::collections::HashMap::new();
    for (i, e) in edges.iter().enumerate() {
        rank_to_idx.insert(e.rank, i);
    }
    for t in 1..=n {
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
            if let Some(&idx) = rank_to_idx.get(&rank) {
                edges[idx].cats[t - 1] = (u8::from(p) << 1) | u8::from(c);
            }
        }
    }
    Ok(ResidualSeries { n, edges, excluded })
}

/// The averaged lag-1 two-way contingency statistic.
///
/// Per edge, a 4x4 table of (current, previous) categories over t = 2..n is
/// compared with its independence expectation row x col / (n-1); the summed
/// discrepancies are averaged with the 1/(n * #edges) normalization, where
/// #edges counts the non-excluded edges.
pub fn contingency_statistic(res: &ResidualSeries) -> Result<f64> {
    if res.n < 2 {
        return Err(Error::SeriesTooShort {
            need: 3,
            have: res.n + 1,
        });
    }
    let mut total = 0.0;
    for edge in &res.edges {
        total += edge_statistic(&edge.cats, None);
    }
    Ok(total / (res.n as f64 * res.edges.len() as f64))
}

/// Per-edge contribution: sum over cells of
/// (observed - expected)^2 / expected with expected = row * col / (n - 1).
/// `perm` optionally reindexes the sequence before pairing.
fn edge_statistic(cats: &[u8], perm: Option<&[u32]>) -> f64 {
    let n = cats.len();
    let mut table = [[0u32; 4]; 4];
    match perm {
        None => {
            for t in 1..n {
                table[cats[t] as usize][cats[t - 1] as usize] += 1;
            }
        }
        Some(p) => {
            for t in 1..n {
                table[cats[p[t] as usize] as usize][cats[p[t - 1] as usize] as usize] += 1;
            }
        }
    }
    let mut row = [0u32; 4];
    let mut col = [0u32; 4];
    for (k, r) in table.iter().enumerate() {
        for (l, &v) in r.iter().enumerate() {
            row[k] += v;
            col[l] += v;
        }
    }
    let pairs = (n - 1) as f64;
    let mut sum = 0.0;
    for k in 0..4 {
        if row[k] == 0 {
            continue;
        }
        for l in 0..4 {
            if col[l] == 0 {
                continue;
            }
            let expected = row[k] as f64 * col[l] as f64 / pairs;
            let diff = table[k][l] as f64 - expected;
            sum += diff * diff / expected;
        }
    }
    sum
}

/// Result of the residual-independence permutation test.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PermutationTestResult {
    pub t_observed: f64,
    pub p_value: f64,
    pub m: u32,
    pub seed: u64,
    /// Edges that entered the statistic.
    pub edges_used: usize,
    /// Edges excluded for degenerate residual support.
    pub edges_excluded: usize,
}

/// Monte Carlo permutation test: the same random permutation of the time
/// indices 1..n is applied to every edge's residual sequence, T is
/// recomputed, and the p-value is the exact fraction of permuted statistics
/// exceeding the observed one.
pub fn permutation_test(res: &ResidualSeries, m: u32, seed: u64) -> Result<PermutationTestResult> {
    if m < 1 {
        return Err(Error::InvalidM(m));
    }
    let t_observed = contingency_statistic(res)?;
    let n = res.n;
    let norm = n as f64 * res.edges.len() as f64;
    let root = StreamKey::root(seed).child(tag::PERMUTATION);
    let stats: Vec<f64> = exec::map_indexed(m as usize, |j| {
        let mut rng = SeqRng::new(root.child(j as u64));
        let mut perm: Vec<u32> = (0..n as u32).collect();
        rng.shuffle(&mut perm);
        let mut total = 0.0;
        for edge in &res.edges {
            total += edge_statistic(&edge.cats, Some(&perm));
        }
        total / norm
    });
    let exceed = stats.iter().filter(|&&t| t_observed < t).count();
    Ok(PermutationTestResult {
        t_observed,
        p_value: exceed as f64 / m as f64,
        m,
        seed,
        edges_used: res.edges.len(),
        edges_excluded: res.excluded,
    })
}
