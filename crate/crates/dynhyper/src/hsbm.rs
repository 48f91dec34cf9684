//! Hypergraph stochastic block model built on the AR(1) edge process:
//! transition-probability similarity matrices, the combined normalized
//! Laplacian, spectral clustering, block-parameter estimation, population
//! block objects, and the mean-adjacency baseline.
//!
//! Both similarity matrices aggregate per-edge rates over node pairs with a
//! 1/|edge| weight: A1 from the birth rates alpha, A2 from the survival
//! rates 1 - beta. The diagonal entry at node i sums over every edge
//! containing i. Clustering applies k-means to the rows of the eigenvector
//! matrix belonging to the q smallest eigenvalues of L = L1 + L2.

use crate::ar1::{self, Ar1Model, Init, ParamSource, UniverseRange};
use crate::block::{compositions_of, BlockParams, Membership};
use crate::error::{Error, Result};
use crate::estimate::{EdgeEstimates, TransitionCounts};
use crate::hypercore::{HyperedgeUniverse, HypergraphSeries};
use crate::kmeans::{kmeans, KMeansConfig};
use crate::linalg::{eigen_symmetric, Mat};

/// The pair of similarity matrices with their degree vectors.
#[derive(Debug, Clone)]
pub struct SimilarityMatrices {
    pub a1: Mat,
    pub a2: Mat,
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
}

fn scatter_edge(a: &mut Mat, nodes: &[u32], weight: f64) {
    for (idx, &i) in nodes.iter().enumerate() {
        a.add_to(i as usize, i as usize, weight);
        for &j in &nodes[idx + 1..] {
            a.add_to(i as usize, j as usize, weight);
            a.add_to(j as usize, i as usize, weight);
        }
    }
}

fn finish_similarity(a1: Mat, a2: Mat) -> SimilarityMatrices {
    let p = a1.rows();
    let d1 = (0..p).map(|i| a1.row(i).iter().sum()).collect();
    let d2 = (0..p).map(|i| a2.row(i).iter().sum()).collect();
    SimilarityMatrices { a1, a2, d1, d2 }
}

/// Build A1/A2 from per-edge estimates. Edges never observed contribute
/// alpha_hat = 0 and beta_hat = 1, hence nothing to either matrix, so only
/// touched edges are visited.
pub fn build_similarity(estimates: &EdgeEstimates) -> SimilarityMatrices {
    let universe = estimates.universe();
    let p = universe.node_count() as usize;
    let mut a1 = Mat::zeros(p, p);
    let mut a2 = Mat::zeros(p, p);
    for &(rank, counts) in estimates.touched() {
        let est = crate::estimate::mle(&counts);
        let edge = universe.unrank(rank);
        let m = edge.size() as f64;
        scatter_edge(&mut a1, edge.nodes(), est.0 / m);
        scatter_edge(&mut a2, edge.nodes(), (1.0 - est.1) / m);
    }
    finish_similarity(a1, a2)
}

/// Build A1/A2 from true model parameters by streaming the universe.
pub fn build_similarity_from_model(model: &Ar1Model) -> SimilarityMatrices {
    let universe = model.universe();
    let p = universe.node_count() as usize;
    let mut a1 = Mat::zeros(p, p);
    let mut a2 = Mat::zeros(p, p);
    let mut range = UniverseRange::new(universe, 0, universe.edge_count());
    let mut rank = 0u64;
    while let Some(nodes) = range.next_nodes() {
        let params = model.params_for(rank, nodes);
        let m = nodes.len() as f64;
        scatter_edge(&mut a1, nodes, params.alpha / m);
        scatter_edge(&mut a2, nodes, (1.0 - params.beta) / m);
        rank += 1;
    }
    finish_similarity(a1, a2)
}

/// Normalized Laplacian I - D^{-1/2} A D^{-1/2}.
pub fn normalized_laplacian(a: &Mat, d: &[f64], which: u8) -> Result<Mat> {
    let p = a.rows();
    let mut inv_sqrt = vec![0.0; p];
    for (i, &di) in d.iter().enumerate() {
        if di <= 0.0 {
            return Err(Error::ZeroDegree {
                node: i as u32,
                matrix: which,
            });
        }
        inv_sqrt[i] = 1.0 / di.sqrt();
    }
    let mut l = Mat::zeros(p, p);
    for i in 0..p {
        for j in 0..p {
            let v = -inv_sqrt[i] * a.get(i, j) * inv_sqrt[j];
            l.set(i, j, if i == j { 1.0 + v } else { v });
        }
    }
    Ok(l)
}

/// Combined Laplacian L = L1 + L2.
pub fn build_laplacian(sim: &SimilarityMatrices) -> Result<Mat> {
    let l1 = normalized_laplacian(&sim.a1, &sim.d1, 1)?;
    let l2 = normalized_laplacian(&sim.a2, &sim.d2, 2)?;
    let p = l1.rows();
    let mut l = Mat::zeros(p, p);
    for i in 0..p {
        for j in 0..p {
            l.set(i, j, l1.get(i, j) + l2.get(i, j));
        }
    }
    Ok(l)
}

/// Spectral clustering output.
#[derive(Debug, Clone)]
pub struct SpectralModel {
    pub laplacian: Mat,
    /// All p eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// Eigenvectors of the q smallest eigenvalues, as columns (p x q).
    pub gamma_q: Mat,
    pub labels: Membership,
}

/// Eigendecompose L, take the q leading (smallest-eigenvalue) eigenvectors,
/// and k-means the p rows.
pub fn spectral_cluster(
    laplacian: &Mat,
    q: u32,
    config: &KMeansConfig,
    seed: u64,
) -> Result<SpectralModel> {
    let p = laplacian.rows();
    if q == 0 || q as usize > p {
        return Err(Error::InvalidQ { q, p: p as u32 });
    }
    let eig = eigen_symmetric(laplacian)?;
    let mut gamma_q = Mat::zeros(p, q as usize);
    for i in 0..p {
        for j in 0..q as usize {
            gamma_q.set(i, j, eig.vectors.get(i, j));
        }
    }
    let rows: Vec<Vec<f64>> = (0..p).map(|i| gamma_q.row(i).to_vec()).collect();
    let fit = kmeans(&rows, q as usize, config, seed);
    let labels = Membership::new(fit.labels, q)?;
    Ok(SpectralModel {
        laplacian: laplacian.clone(),
        eigenvalues: eig.values,
        gamma_q,
        labels,
    })
}

/// Full pipeline on a series: estimate, build similarities, cluster.
pub fn cluster_series(
    series: &HypergraphSeries,
    q: u32,
    config: &KMeansConfig,
    seed: u64,
) -> Result<SpectralModel> {
    let estimates = crate::estimate::estimate_all(series)?;
    let sim = build_similarity(&estimates);
    let lap = build_laplacian(&sim)?;
    spectral_cluster(&lap, q, config, seed)
}

/// Baseline: spectral clustering of the time-averaged hypergraph. Edge
/// frequencies over t = 1..n play the role of connection probabilities in a
/// single static similarity matrix.
pub fn baseline_mean_cluster(
    series: &HypergraphSeries,
    q: u32,
    config: &KMeansConfig,
    seed: u64,
) -> Result<SpectralModel> {
    if series.len() < 2 {
        return Err(Error::SeriesTooShort {
            need: 2,
            have: series.len(),
        });
    }
    let universe = series.universe();
    let p = universe.node_count() as usize;
    let n = series.transitions() as f64;
    // presence counts over t = 1..n, merged across sorted snapshots
    let mut counts: std::collections::HashMap<u64, u32> = std::collections::HashMap::new();
    for t in 1..series.len() {
        for &rank in series.snapshot(t).present_ranks() {
            *counts.entry(rank).or_insert(0) += 1;
        }
    }
    let mut sorted: Vec<(u64, u32)> = counts.into_iter().collect();
    sorted.sort_unstable_by_key(|e| e.0);
    let mut a = Mat::zeros(p, p);
    for (rank, cnt) in sorted {
        let edge = universe.unrank(rank);
        let m = edge.size() as f64;
        scatter_edge(&mut a, edge.nodes(), cnt as f64 / n / m);
    }
    let d: Vec<f64> = (0..p).map(|i| a.row(i).iter().sum()).collect();
    let lap = normalized_laplacian(&a, &d, 1)?;
    spectral_cluster(&lap, q, config, seed)
}

/// Simulate the block model: every edge gets (theta, eta) of its community
/// multiset.
pub fn simulate_hsbm(
    membership: &Membership,
    params: &BlockParams,
    universe: &HyperedgeUniverse,
    n: u64,
    seed: u64,
    init: &Init,
) -> Result<HypergraphSeries> {
    let model = Ar1Model::new(
        universe.clone(),
        ParamSource::Block {
            membership: membership.clone(),
            params: params.clone(),
        },
    )?;
    ar1::simulate(&model, n, seed, init)
}

/// Pooled block-parameter MLEs over the estimated communities.
///
/// Every physical (undirected) edge whose nodes realize a community multiset
/// is counted once; edges never present contribute all-zero transitions
/// (n00 = n), and the 0/0 = 1 convention applies to the pooled ratios.
pub fn estimate_block_params(
    estimates: &EdgeEstimates,
    membership: &Membership,
) -> Result<BlockParams> {
    let universe = estimates.universe();
    if membership.node_count() != universe.node_count() {
        return Err(Error::LengthMismatch {
            a: membership.node_count() as usize,
            b: universe.node_count() as usize,
        });
    }
    let mut pooled: std::collections::BTreeMap<Vec<u32>, TransitionCounts> =
        std::collections::BTreeMap::new();
    let mut range = UniverseRange::new(universe, 0, universe.edge_count());
    let touched = estimates.touched();
    let mut ti = 0usize;
    let mut rank = 0u64;
    let n = estimates.n();
    while let Some(nodes) = range.next_nodes() {
        let counts = if ti < touched.len() && touched[ti].0 == rank {
            let c = touched[ti].1;
            ti += 1;
            c
        } else {
            TransitionCounts {
                n00: n,
                ..Default::default()
            }
        };
        let ms = membership.multiset_of(nodes);
        pooled.entry(ms).or_default().merge(&counts);
        rank += 1;
    }
    let mut params = BlockParams::new();
    for (ms, counts) in pooled {
        let (theta, eta) = crate::estimate::mle(&counts);
        params.insert(&ms, theta, eta)?;
    }
    Ok(params)
}

/// Population block objects: membership matrix Z, block matrices Omega1 and
/// Omega2, diagonal corrections J1 and J2, and the eigen-gap quantity delta.
#[derive(Debug, Clone)]
pub struct PopulationBlockObjects {
    pub membership: Membership,
    pub sizes: Vec<u32>,
    pub a1: Mat,
    pub a2: Mat,
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
    pub omega1: Mat,
    pub omega2: Mat,
    pub j1: Vec<f64>,
    pub j2: Vec<f64>,
    pub delta: f64,
}

impl PopulationBlockObjects {
    pub fn delta_positive(&self) -> bool {
        self.delta > 0.0
    }

    /// The q orthonormal block eigenvectors Gamma = Z (Z^T Z)^{-1/2} U and
    /// their eigenvalues, from the q x q reduced form of L on the span of Z.
    pub fn gamma_matrix(&self) -> Result<(Mat, Vec<f64>)> {
        let p = self.membership.node_count() as usize;
        let q = self.membership.q() as usize;
        let sim = SimilarityMatrices {
            a1: self.a1.clone(),
            a2: self.a2.clone(),
            d1: self.d1.clone(),
            d2: self.d2.clone(),
        };
        let l = build_laplacian(&sim)?;
        // normalized membership columns
        let mut z_hat = Mat::zeros(p, q);
        for i in 0..p {
            let c = self.membership.label(i as u32) as usize;
            z_hat.set(i, c, 1.0 / (self.sizes[c] as f64).sqrt());
        }
        let reduced = z_hat.transpose().matmul(&l).matmul(&z_hat);
        let eig = eigen_symmetric(&reduced)?;
        let gamma = z_hat.matmul(&eig.vectors);
        Ok((gamma, eig.values))
    }
}

/// Population similarity-style matrix for a per-multiset value function:
/// entry (i, j) sums value(multiset of edge) / |edge| over edges containing
/// both i and j (diagonal: containing i).
pub fn population_matrix(
    membership: &Membership,
    universe: &HyperedgeUniverse,
    value: impl Fn(&[u32]) -> Result<f64>,
) -> Result<Mat> {
    let p = universe.node_count() as usize;
    let mut a = Mat::zeros(p, p);
    let mut range = UniverseRange::new(universe, 0, universe.edge_count());
    while let Some(nodes) = range.next_nodes() {
        let ms = membership.multiset_of(nodes);
        let v = value(&ms)?;
        let m = nodes.len() as f64;
        scatter_edge(&mut a, nodes, v / m);
    }
    Ok(a)
}

/// Block-level aggregate: for communities (c, d), the sum over edge shapes of
/// value(multiset{c, d} + completion) weighted by the number of ways to pick
/// the completing nodes, with the two anchor nodes excluded from the pool.
fn omega_matrix(
    membership: &Membership,
    sizes: &[u32],
    k_max: u32,
    value: impl Fn(&[u32]) -> Result<f64>,
) -> Result<Mat> {
    let q = membership.q() as usize;
    let binom = |n: i64, k: u32| -> f64 {
        if n < k as i64 {
            return 0.0;
        }
        let mut v = 1.0;
        for i in 0..k as i64 {
            v = v * (n - i) as f64 / (i + 1) as f64;
        }
        v
    };
    let mut omega = Mat::zeros(q, q);
    for c in 0..q {
        for d in c..q {
            let mut total = 0.0;
            for m in 2..=k_max as usize {
                let extra = m - 2;
                for comp in compositions_of(q as u32, extra) {
                    // ways to choose the remaining nodes per community,
                    // excluding the two anchors
                    let mut ways = 1.0;
                    for (e, &cnt) in comp.iter().enumerate() {
                        if cnt == 0 {
                            continue;
                        }
                        let mut avail = sizes[e] as i64;
                        if e == c {
                            avail -= 1;
                        }
                        if e == d {
                            avail -= 1;
                        }
                        ways *= binom(avail, cnt);
                        if ways == 0.0 {
                            break;
                        }
                    }
                    if ways == 0.0 {
                        continue;
                    }
                    let mut ms: Vec<u32> = vec![c as u32, d as u32];
                    for (e, &cnt) in comp.iter().enumerate() {
                        ms.extend(std::iter::repeat_n(e as u32, cnt as usize));
                    }
                    ms.sort_unstable();
                    total += ways * value(&ms)? / m as f64;
                }
            }
            omega.set(c, d, total);
            omega.set(d, c, total);
        }
    }
    Ok(omega)
}

/// Exact population objects for a block configuration.
pub fn population_objects(
    membership: &Membership,
    params: &BlockParams,
    universe: &HyperedgeUniverse,
) -> Result<PopulationBlockObjects> {
    if membership.node_count() != universe.node_count() {
        return Err(Error::LengthMismatch {
            a: membership.node_count() as usize,
            b: universe.node_count() as usize,
        });
    }
    let sizes = membership.community_sizes()?;
    let p = universe.node_count() as usize;
    let k_max = universe.k_max();

    let a1 = population_matrix(membership, universe, |ms| params.theta(ms))?;
    let a2 = population_matrix(membership, universe, |ms| Ok(1.0 - params.eta(ms)?))?;
    let d1: Vec<f64> = (0..p).map(|i| a1.row(i).iter().sum()).collect();
    let d2: Vec<f64> = (0..p).map(|i| a2.row(i).iter().sum()).collect();

    let omega1 = omega_matrix(membership, &sizes, k_max, |ms| params.theta(ms))?;
    let omega2 = omega_matrix(membership, &sizes, k_max, |ms| Ok(1.0 - params.eta(ms)?))?;

    let j1: Vec<f64> = (0..p)
        .map(|i| {
            let c = membership.label(i as u32) as usize;
            omega1.get(c, c) - a1.get(i, i)
        })
        .collect();
    let j2: Vec<f64> = (0..p)
        .map(|i| {
            let c = membership.label(i as u32) as usize;
            omega2.get(c, c) - a2.get(i, i)
        })
        .collect();

    // delta: lower bound on the gap after the q leading eigenvalues
    let lam_min_1 = eigen_symmetric(&omega1)?.values[0];
    let lam_min_2 = eigen_symmetric(&omega2)?.values[0];
    let q = membership.q() as usize;
    let mut min_ratio_1 = f64::INFINITY;
    let mut min_ratio_2 = f64::INFINITY;
    for c in 0..q {
        // degrees are constant within a community; take any member
        let node = (0..p)
            .find(|&i| membership.label(i as u32) as usize == c)
            .expect("nonempty community");
        min_ratio_1 = min_ratio_1.min(sizes[c] as f64 / d1[node]);
        min_ratio_2 = min_ratio_2.min(sizes[c] as f64 / d2[node]);
    }
    let j_over_d: Vec<f64> = (0..p).map(|i| j1[i] / d1[i] + j2[i] / d2[i]).collect();
    let max_jd = j_over_d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min_jd = j_over_d.iter().copied().fold(f64::INFINITY, f64::min);
    let delta = lam_min_1 * min_ratio_1 + lam_min_2 * min_ratio_2 - max_jd - min_jd;

    Ok(PopulationBlockObjects {
        membership: membership.clone(),
        sizes,
        a1,
        a2,
        d1,
        d2,
        omega1,
        omega2,
        j1,
        j2,
        delta,
    })
}
