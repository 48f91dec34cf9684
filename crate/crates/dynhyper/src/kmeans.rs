//! Deterministic k-means with k-means++ seeding and Lloyd iteration.
//!
//! Determinism rules: restart r draws from its own counter stream; nearest
//! centroid ties break to the lowest centroid index; an emptied cluster is
//! refilled with the point farthest from its centroid (lowest index on
//! ties); the best restart by within-cluster sum of squares wins, earliest
//! restart on ties.

use serde::{Deserialize, Serialize};

use crate::rng::{tag, SeqRng, StreamKey};

/// Center initialization scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KMeansInit {
    /// Distance-weighted seeding.
    #[default]
    PlusPlus,
    /// k distinct data points drawn uniformly.
    RandomPoints,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KMeansConfig {
    pub restarts: u32,
    pub max_iters: u32,
    /// Stop when the relative improvement of the objective falls below this.
    pub tol: f64,
    pub init: KMeansInit,
}

impl Default for KMeansConfig {
    fn default() -> Self {
        KMeansConfig {
            restarts: 20,
            max_iters: 300,
            tol: 1e-8,
            init: KMeansInit::PlusPlus,
        }
    }
}

impl KMeansConfig {
    /// One seeding attempt, no best-of-restarts selection.
    pub fn single_start(init: KMeansInit) -> Self {
        KMeansConfig {
            restarts: 1,
            init,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct KMeansFit {
    pub labels: Vec<u32>,
    pub centroids: Vec<Vec<f64>>,
    pub inertia: f64,
}

#[inline]
fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Cluster `points` (rows, all the same dimension) into `k` groups.
pub fn kmeans(points: &[Vec<f64>], k: usize, config: &KMeansConfig, seed: u64) -> KMeansFit {
    assert!(k >= 1 && k <= points.len(), "k out of range");
    let root = StreamKey::root(seed).child(tag::KMEANS);
    let mut best: Option<KMeansFit> = None;
    for restart in 0..config.restarts.max(1) {
        let mut rng = SeqRng::new(root.child(restart as u64));
        let fit = lloyd(points, k, config, &mut rng);
        let better = match &best {
            None => true,
            Some(b) => fit.inertia < b.inertia,
        };
        if better {
            best = Some(fit);
        }
    }
    best.unwrap()
}

fn lloyd(points: &[Vec<f64>], k: usize, config: &KMeansConfig, rng: &mut SeqRng) -> KMeansFit {
    let n = points.len();
    let mut centroids = match config.init {
        KMeansInit::PlusPlus => plus_plus_init(points, k, rng),
        KMeansInit::RandomPoints => random_points_init(points, k, rng),
    };
    let mut labels = vec![0u32; n];
    let mut inertia = f64::INFINITY;

    for _ in 0..config.max_iters {
        // assignment
        let mut new_inertia = 0.0;
        for (i, p) in points.iter().enumerate() {
            let mut best_c = 0usize;
            let mut best_d = f64::INFINITY;
            for (c, centroid) in centroids.iter().enumerate() {
                let d = dist_sq(p, centroid);
                if d < best_d {
                    best_d = d;
                    best_c = c;
                }
            }
            labels[i] = best_c as u32;
            new_inertia += best_d;
        }
        // update
        let dim = points[0].len();
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (i, p) in points.iter().enumerate() {
            let c = labels[i] as usize;
            counts[c] += 1;
            for (s, &x) in sums[c].iter_mut().zip(p) {
                *s += x;
            }
        }
        for c in 0..k {
            if counts[c] == 0 {
                // refill with the point farthest from its centroid
                let mut far_i = 0usize;
                let mut far_d = -1.0;
                for (i, p) in points.iter().enumerate() {
                    let d = dist_sq(p, &centroids[labels[i] as usize]);
                    if d > far_d {
                        far_d = d;
                        far_i = i;
                    }
                }
                centroids[c] = points[far_i].clone();
                labels[far_i] = c as u32;
            } else {
                for (j, s) in sums[c].iter().enumerate() {
                    centroids[c][j] = s / counts[c] as f64;
                }
            }
        }
        let done = inertia.is_finite()
            && (inertia - new_inertia).abs() <= config.tol * inertia.abs().max(1e-300);
        inertia = new_inertia;
        if done {
            break;
        }
    }
    KMeansFit {
        labels,
        centroids,
        inertia,
    }
}

/// Uniform sample of k distinct row indices as the starting centers.
fn random_points_init(points: &[Vec<f64>], k: usize, rng: &mut SeqRng) -> Vec<Vec<f64>> {
    let n = points.len();
    let mut indices: Vec<usize> = Vec::with_capacity(k);
    while indices.len() < k {
        let i = rng.next_below(n as u64) as usize;
        if !indices.contains(&i) {
            indices.push(i);
        }
    }
    indices.into_iter().map(|i| points[i].clone()).collect()
}

/// k-means++ seeding: first center uniform, the rest drawn with probability
/// proportional to squared distance to the nearest chosen center.
fn plus_plus_init(points: &[Vec<f64>], k: usize, rng: &mut SeqRng) -> Vec<Vec<f64>> {
    let n = points.len();
    let mut centroids: Vec<Vec<f64>> = Vec::with_capacity(k);
    let first = rng.next_below(n as u64) as usize;
    centroids.push(points[first].clone());
    let mut dists: Vec<f64> = points.iter().map(|p| dist_sq(p, &centroids[0])).collect();
    while centroids.len() < k {
        let total: f64 = dists.iter().sum();
        let chosen = if total <= 0.0 {
            // all remaining points coincide with centers; any index works
            rng.next_below(n as u64) as usize
        } else {
            let target = rng.next_f64() * total;
            let mut acc = 0.0;
            let mut idx = n - 1;
            for (i, &d) in dists.iter().enumerate() {
                acc += d;
                if target < acc {
                    idx = i;
                    break;
                }
            }
            idx
        };
        centroids.push(points[chosen].clone());
        let last = centroids.last().unwrap();
        for (d, p) in dists.iter_mut().zip(points) {
            let nd = dist_sq(p, last);
            if nd < *d {
                *d = nd;
            }
        }
    }
    centroids
}
