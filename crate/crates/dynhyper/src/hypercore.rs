//! Canonical hyperedges, the edge universe, snapshots, and time series.
//!
//! A universe is the full index set of undirected hyperedges of sizes 2..=K
//! over p nodes. Edges are identified by their lexicographic rank (first by
//! size, then by node tuple), so snapshots can store sorted rank vectors and
//! hot loops can address edges without materializing node tuples.

use std::sync::Arc;

use crate::error::{Error, Result};

/// Node identifier in `[0, p)`.
pub type NodeId = u32;

/// A canonical hyperedge: strictly increasing node tuple of size 2..=K.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperedge {
    nodes: Vec<NodeId>,
}

impl Hyperedge {
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn size(&self) -> usize {
        self.nodes.len()
    }
}

impl std::fmt::Display for Hyperedge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, n) in self.nodes.iter().enumerate() {
            if i > 0 {
                write!(f, "-")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug)]
struct UniverseInner {
    p: u32,
    k_max: u32,
    /// binom[n][k] = C(n, k) for n <= p, k <= k_max
    binom: Vec<Vec<u64>>,
    /// offsets[k-2] = rank of the first size-k edge; last entry = total count
    offsets: Vec<u64>,
}

/// The edge index set: all hyperedges of sizes 2..=K over p nodes.
#[derive(Debug, Clone)]
pub struct HyperedgeUniverse(Arc<UniverseInner>);

impl PartialEq for HyperedgeUniverse {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.k_max == other.0.k_max
    }
}
impl Eq for HyperedgeUniverse {}

impl HyperedgeUniverse {
    /// Build the universe for `p` nodes and maximum edge size `k_max`.
    pub fn new(p: u32, k_max: u32) -> Result<Self> {
        if k_max < 2 || k_max > p {
            return Err(Error::InvalidUniverse { p, k_max });
        }
        // Pascal's rule, checked for overflow; entries with k > n stay 0.
        let mut binom = vec![vec![0u64; k_max as usize + 1]; p as usize + 1];
        for row in binom.iter_mut() {
            row[0] = 1;
        }
        for n in 1..=p as usize {
            for k in 1..=(k_max as usize).min(n) {
                binom[n][k] = binom[n - 1][k]
                    .checked_add(binom[n - 1][k - 1])
                    .ok_or(Error::UniverseTooLarge { p, k_max })?;
            }
        }
        let mut offsets = Vec::with_capacity(k_max as usize);
        let mut acc = 0u64;
        offsets.push(0);
        for k in 2..=k_max as usize {
            acc = acc
                .checked_add(binom[p as usize][k])
                .ok_or(Error::UniverseTooLarge { p, k_max })?;
            offsets.push(acc);
        }
        Ok(HyperedgeUniverse(Arc::new(UniverseInner {
            p,
            k_max,
            binom,
            offsets,
        })))
    }

    pub fn node_count(&self) -> u32 {
        self.0.p
    }

    pub fn k_max(&self) -> u32 {
        self.0.k_max
    }

    /// Total number of edges in the universe.
    pub fn edge_count(&self) -> u64 {
        *self.0.offsets.last().unwrap()
    }

    /// C(n, k) from the precomputed table.
    pub fn binom(&self, n: u32, k: u32) -> u64 {
        if k > self.0.k_max || n > self.0.p {
            panic!("binomial table out of range: C({n}, {k})");
        }
        if k as usize > n as usize {
            return 0;
        }
        self.0.binom[n as usize][k as usize]
    }

    /// Validate and canonicalize a node list into a hyperedge.
    ///
    /// Duplicates are rejected, not collapsed.
    pub fn canonicalize(&self, nodes: &[NodeId]) -> Result<Hyperedge> {
        let size = nodes.len();
        if size < 2 || size > self.0.k_max as usize {
            return Err(Error::SizeOutOfRange {
                size,
                k_max: self.0.k_max,
            });
        }
        let mut sorted = nodes.to_vec();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateNode(w[0]));
            }
        }
        if let Some(&max) = sorted.last() {
            if max >= self.0.p {
                return Err(Error::NodeOutOfRange {
                    node: max,
                    p: self.0.p,
                });
            }
        }
        Ok(Hyperedge { nodes: sorted })
    }

    /// Lexicographic rank of a canonical edge (size-major, then node tuple).
    pub fn rank(&self, edge: &Hyperedge) -> u64 {
        let k = edge.size();
        debug_assert!(k >= 2 && k <= self.0.k_max as usize);
        let p = self.0.p;
        let mut r = self.0.offsets[k - 2];
        let mut prev: i64 = -1;
        for (i, &a) in edge.nodes.iter().enumerate() {
            let remaining = (k - 1 - i) as u32;
            for v in (prev + 1) as u32..a {
                r += self.binom(p - 1 - v, remaining);
            }
            prev = a as i64;
        }
        r
    }

    /// Inverse of [`rank`](Self::rank).
    pub fn unrank(&self, mut r: u64) -> Hyperedge {
        assert!(r < self.edge_count(), "rank out of range");
        let p = self.0.p;
        let mut k = 2usize;
        while r >= self.0.offsets[k - 1] {
            k += 1;
        }
        r -= self.0.offsets[k - 2];
        let mut nodes = Vec::with_capacity(k);
        let mut v = 0u32;
        for i in 0..k {
            let remaining = (k - 1 - i) as u32;
            loop {
                let count = self.binom(p - 1 - v, remaining);
                if r < count {
                    break;
                }
                r -= count;
                v += 1;
            }
            nodes.push(v);
            v += 1;
        }
        Hyperedge { nodes }
    }

    /// Lazy enumeration of every edge in rank order.
    pub fn iter(&self) -> UniverseIter {
        UniverseIter {
            universe: self.clone(),
            current: None,
            emitted: 0,
        }
    }
}

/// Iterator over the universe in (size, lexicographic) order.
pub struct UniverseIter {
    universe: HyperedgeUniverse,
    current: Option<Vec<NodeId>>,
    emitted: u64,
}

impl Iterator for UniverseIter {
    type Item = Hyperedge;

    fn next(&mut self) -> Option<Hyperedge> {
        let p = self.universe.0.p;
        let k_max = self.universe.0.k_max;
        match &mut self.current {
            None => {
                if self.emitted > 0 {
                    return None;
                }
                let first: Vec<NodeId> = (0..2).collect();
                self.current = Some(first.clone());
                self.emitted = 1;
                Some(Hyperedge { nodes: first })
            }
            Some(nodes) => {
                let k = nodes.len();
                // advance to the next k-combination of [0, p)
                let mut i = k;
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    if nodes[i] < p - (k - i) as u32 {
                        nodes[i] += 1;
                        for j in i + 1..k {
                            nodes[j] = nodes[j - 1] + 1;
                        }
                        self.emitted += 1;
                        return Some(Hyperedge {
                            nodes: nodes.clone(),
                        });
                    }
                }
                // exhausted size k; move to k+1
                if (k as u32) < k_max {
                    let next: Vec<NodeId> = (0..=k as u32).collect();
                    *nodes = next.clone();
                    self.emitted += 1;
                    Some(Hyperedge { nodes: next })
                } else {
                    None
                }
            }
        }
    }
}

/// One time slice: the set of present edges, stored as sorted ranks.
#[derive(Debug, Clone, PartialEq)]
pub struct HypergraphSnapshot {
    universe: HyperedgeUniverse,
    present: Vec<u64>,
}

impl HypergraphSnapshot {
    /// Build from a list of edges (deduplicated, sorted internally).
    pub fn from_edges(universe: &HyperedgeUniverse, edges: &[Hyperedge]) -> Self {
        let mut present: Vec<u64> = edges.iter().map(|e| universe.rank(e)).collect();
        present.sort_unstable();
        present.dedup();
        HypergraphSnapshot {
            universe: universe.clone(),
            present,
        }
    }

    pub fn from_ranks(universe: &HyperedgeUniverse, mut ranks: Vec<u64>) -> Self {
        ranks.sort_unstable();
        ranks.dedup();
        HypergraphSnapshot {
            universe: universe.clone(),
            present: ranks,
        }
    }

    pub fn empty(universe: &HyperedgeUniverse) -> Self {
        HypergraphSnapshot {
            universe: universe.clone(),
            present: Vec::new(),
        }
    }

    pub fn universe(&self) -> &HyperedgeUniverse {
        &self.universe
    }

    /// Sorted ranks of present edges.
    pub fn present_ranks(&self) -> &[u64] {
        &self.present
    }

    pub fn len(&self) -> usize {
        self.present.len()
    }

    pub fn is_empty(&self) -> bool {
        self.present.is_empty()
    }

    pub fn contains_rank(&self, rank: u64) -> bool {
        self.present.binary_search(&rank).is_ok()
    }

    pub fn contains(&self, edge: &Hyperedge) -> bool {
        self.contains_rank(self.universe.rank(edge))
    }

    pub fn edges(&self) -> impl Iterator<Item = Hyperedge> + '_ {
        self.present.iter().map(|&r| self.universe.unrank(r))
    }
}

/// Hamming distance: the number of edges present in exactly one snapshot.
pub fn hamming(a: &HypergraphSnapshot, b: &HypergraphSnapshot) -> Result<u64> {
    if a.universe != b.universe {
        return Err(Error::UniverseMismatch);
    }
    let (mut i, mut j) = (0, 0);
    let mut diff = 0u64;
    while i < a.present.len() && j < b.present.len() {
        match a.present[i].cmp(&b.present[j]) {
            std::cmp::Ordering::Less => {
                diff += 1;
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                diff += 1;
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    diff += (a.present.len() - i) as u64 + (b.present.len() - j) as u64;
    Ok(diff)
}

/// An observed hypergraph time series X_0, ..., X_n.
#[derive(Debug, Clone)]
pub struct HypergraphSeries {
    universe: HyperedgeUniverse,
    snapshots: Vec<HypergraphSnapshot>,
}

impl HypergraphSeries {
    pub fn new(universe: HyperedgeUniverse, snapshots: Vec<HypergraphSnapshot>) -> Result<Self> {
        if snapshots.is_empty() {
            return Err(Error::SeriesTooShort { need: 1, have: 0 });
        }
        for s in &snapshots {
            if s.universe != universe {
                return Err(Error::UniverseMismatch);
            }
        }
        Ok(HypergraphSeries {
            universe,
            snapshots,
        })
    }

    pub fn universe(&self) -> &HyperedgeUniverse {
        &self.universe
    }

    /// Number of snapshots (n + 1 for a series X_0..X_n).
    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    /// Number of transitions n.
    pub fn transitions(&self) -> usize {
        self.snapshots.len() - 1
    }

    pub fn snapshot(&self, t: usize) -> &HypergraphSnapshot {
        &self.snapshots[t]
    }

    pub fn snapshots(&self) -> &[HypergraphSnapshot] {
        &self.snapshots
    }
}
