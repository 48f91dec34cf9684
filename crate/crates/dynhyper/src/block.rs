//! Community memberships and block transition parameters.
//!
//! Block parameters are keyed by the multiset of community labels of an
//! edge's nodes, so lookups are invariant under any permutation of the
//! labels in the key.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{tag, StreamKey};

/// Node-to-community assignment psi: [p] -> [q].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Membership {
    labels: Vec<u32>,
    q: u32,
}

impl Membership {
    pub fn new(labels: Vec<u32>, q: u32) -> Result<Self> {
        for &l in &labels {
            if l >= q {
                return Err(Error::InvalidMembership { label: l, q });
            }
        }
        Ok(Membership { labels, q })
    }

    /// Balanced assignment: node i gets community i % q... see `balanced`.
    /// Contiguous blocks, sizes differing by at most one (larger blocks first).
    pub fn balanced(p: u32, q: u32) -> Result<Self> {
        if q == 0 || q > p {
            return Err(Error::InvalidQ { q, p });
        }
        let base = p / q;
        let extra = p % q;
        let mut labels = Vec::with_capacity(p as usize);
        for c in 0..q {
            let size = base + u32::from(c < extra);
            labels.extend(std::iter::repeat_n(c, size as usize));
        }
        Ok(Membership { labels, q })
    }

    pub fn node_count(&self) -> u32 {
        self.labels.len() as u32
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn label(&self, node: u32) -> u32 {
        self.labels[node as usize]
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// Size of each community; errors if any community is empty.
    pub fn community_sizes(&self) -> Result<Vec<u32>> {
        let mut sizes = vec![0u32; self.q as usize];
        for &l in &self.labels {
            sizes[l as usize] += 1;
        }
        for (c, &s) in sizes.iter().enumerate() {
            if s == 0 {
                return Err(Error::EmptyCommunity(c as u32));
            }
        }
        Ok(sizes)
    }

    /// Sorted multiset of community labels for the given nodes.
    pub fn multiset_of(&self, nodes: &[u32]) -> Vec<u32> {
        let mut m: Vec<u32> = nodes.iter().map(|&n| self.labels[n as usize]).collect();
        m.sort_unstable();
        m
    }
}

/// Transition probabilities (theta, eta) per community multiset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockParams {
    theta: BTreeMap<Vec<u32>, f64>,
    eta: BTreeMap<Vec<u32>, f64>,
}

impl BlockParams {
    pub fn new() -> Self {
        BlockParams {
            theta: BTreeMap::new(),
            eta: BTreeMap::new(),
        }
    }

    /// Insert parameters for a multiset (the key is sorted internally).
    ///
    /// Theta and eta are the transition probabilities of the two-state chain
    /// (0->1 and 1->0). Each must lie in [0, 1]; their sum may exceed 1 —
    /// community designs that draw the off-community rates uniformly need
    /// that freedom, and the chain law is well defined either way.
    pub fn insert(&mut self, multiset: &[u32], theta: f64, eta: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&theta) || !(0.0..=1.0).contains(&eta) {
            return Err(Error::InvalidRates {
                alpha: theta,
                beta: eta,
            });
        }
        let mut key = multiset.to_vec();
        key.sort_unstable();
        self.theta.insert(key.clone(), theta);
        self.eta.insert(key, eta);
        Ok(())
    }

    pub fn theta(&self, multiset: &[u32]) -> Result<f64> {
        lookup(&self.theta, multiset)
    }

    pub fn eta(&self, multiset: &[u32]) -> Result<f64> {
        lookup(&self.eta, multiset)
    }

    pub fn pair(&self, multiset: &[u32]) -> Result<(f64, f64)> {
        Ok((self.theta(multiset)?, self.eta(multiset)?))
    }

    /// Iterate (multiset, theta, eta) in deterministic (sorted-key) order.
    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u32>, f64, f64)> + '_ {
        self.theta
            .iter()
            .map(|(k, &t)| (k, t, *self.eta.get(k).expect("eta key parity")))
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    /// Block design with fixed within-community rates and off-community rates
    /// drawn uniformly per multiset: theta in `theta_off`, eta in `eta_off`.
    pub fn community_design(
        q: u32,
        k_max: u32,
        theta_within: f64,
        eta_within: f64,
        theta_off: (f64, f64),
        eta_off: (f64, f64),
        seed: u64,
    ) -> Result<Self> {
        let mut params = BlockParams::new();
        let theta_key = StreamKey::root(seed).child(tag::BLOCK_THETA);
        let eta_key = StreamKey::root(seed).child(tag::BLOCK_ETA);
        let mut counter = 0u64;
        for size in 2..=k_max as usize {
            for ms in multisets(q, size) {
                let within = ms.iter().all(|&c| c == ms[0]);
                if within {
                    params.insert(&ms, theta_within, eta_within)?;
                } else {
                    let t = theta_off.0 + (theta_off.1 - theta_off.0) * theta_key.f64_at(counter);
                    let e = eta_off.0 + (eta_off.1 - eta_off.0) * eta_key.f64_at(counter);
                    params.insert(&ms, t, e)?;
                }
                counter += 1;
            }
        }
        Ok(params)
    }
}

impl Default for BlockParams {
    fn default() -> Self {
        Self::new()
    }
}

fn lookup(map: &BTreeMap<Vec<u32>, f64>, multiset: &[u32]) -> Result<f64> {
    if multiset.windows(2).all(|w| w[0] <= w[1]) {
        return map
            .get(multiset)
            .copied()
            .ok_or_else(|| Error::MissingBlockParam(multiset.to_vec()));
    }
    let mut key = multiset.to_vec();
    key.sort_unstable();
    map.get(&key)
        .copied()
        .ok_or(Error::MissingBlockParam(key))
}

/// All nonnegative integer vectors of length q summing to `total`
/// (community occupancy patterns for the free slots of an edge).
pub fn compositions_of(q: u32, total: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; q as usize];
    fn rec(current: &mut Vec<u32>, idx: usize, left: u32, out: &mut Vec<Vec<u32>>) {
        if idx + 1 == current.len() {
            current[idx] = left;
            out.push(current.clone());
            current[idx] = 0;
            return;
        }
        for take in 0..=left {
            current[idx] = take;
            rec(current, idx + 1, left - take, out);
        }
        current[idx] = 0;
    }
    rec(&mut current, 0, total as u32, &mut out);
    out
}

/// All nondecreasing tuples of the given size over [0, q).
pub fn multisets(q: u32, size: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; size];
    loop {
        out.push(current.clone());
        // next nondecreasing tuple
        let mut i = size;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] < q - 1 {
                current[i] += 1;
                for j in i + 1..size {
                    current[j] = current[i];
                }
                break;
            }
        }
    }
}
