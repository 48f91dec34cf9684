//! The AR(1) edge process: simulation and closed-form quantities.
//!
//! Each edge is an independent two-state Markov chain driven by a
//! three-valued innovation: with probability alpha the edge switches on,
//! with probability beta it switches off, otherwise it keeps its previous
//! state. A single uniform draw per (edge, t) is partitioned into
//! [0, alpha), [alpha, alpha+beta), [alpha+beta, 1).

use std::collections::HashMap;

use crate::block::{BlockParams, Membership};
use crate::error::{Error, Result};
use crate::exec;
use crate::hypercore::{Hyperedge, HyperedgeUniverse, HypergraphSeries, HypergraphSnapshot};
use crate::rng::{tag, StreamKey};

/// Per-edge transition rates: birth rate alpha, death rate beta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeAr1Params {
    pub alpha: f64,
    pub beta: f64,
}

impl EdgeAr1Params {
    /// Innovation-form parameters: alpha, beta >= 0 with alpha + beta <= 1.
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) || !(0.0..=1.0).contains(&beta) || alpha + beta > 1.0 {
            return Err(Error::InvalidRates { alpha, beta });
        }
        Ok(EdgeAr1Params { alpha, beta })
    }

    /// Chain-form parameters: each rate in [0, 1], sum unconstrained. The
    /// two-state Markov chain is well defined for any such pair; block
    /// designs that draw rates independently use this.
    pub fn new_chain(alpha: f64, beta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) || !(0.0..=1.0).contains(&beta) {
            return Err(Error::InvalidRates { alpha, beta });
        }
        Ok(EdgeAr1Params { alpha, beta })
    }

    /// Long-run presence probability alpha / (alpha + beta).
    pub fn stationary_prob(&self) -> Result<f64> {
        if self.alpha + self.beta == 0.0 {
            return Err(Error::DegenerateStationary);
        }
        Ok(self.alpha / (self.alpha + self.beta))
    }
}

/// Where each edge's (alpha, beta) comes from.
///
/// Functional sources ([`IidUniform`](ParamSource::IidUniform),
/// [`Block`](ParamSource::Block)) resolve parameters on the fly so million-edge
/// universes never materialize a parameter table.
#[derive(Debug, Clone)]
pub enum ParamSource {
    /// One shared (alpha, beta).
    Constant(EdgeAr1Params),
    /// Explicit overrides on top of a default fill.
    Map {
        overrides: HashMap<u64, EdgeAr1Params>,
        default: EdgeAr1Params,
    },
    /// alpha ~ U[a0, a1), beta ~ U[b0, b1), drawn independently per edge.
    IidUniform {
        alpha: (f64, f64),
        beta: (f64, f64),
        seed: u64,
    },
    /// Block model: rates depend on the community multiset of the edge.
    Block {
        membership: Membership,
        params: BlockParams,
    },
}

/// An AR(1) hypergraph model: a universe plus a parameter source.
#[derive(Debug, Clone)]
pub struct Ar1Model {
    universe: HyperedgeUniverse,
    source: ParamSource,
}

impl Ar1Model {
    pub fn new(universe: HyperedgeUniverse, source: ParamSource) -> Result<Self> {
        match &source {
            ParamSource::Constant(p) => {
                EdgeAr1Params::new(p.alpha, p.beta)?;
            }
            ParamSource::Map { overrides, default } => {
                EdgeAr1Params::new(default.alpha, default.beta)?;
                for (rank, p) in overrides {
                    if *rank >= universe.edge_count() {
                        return Err(Error::EdgeNotInUniverse);
                    }
                    EdgeAr1Params::new(p.alpha, p.beta)?;
                }
            }
            ParamSource::IidUniform { alpha, beta, .. } => {
                for &(lo, hi) in [alpha, beta] {
                    if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
                        return Err(Error::InvalidConfig(format!(
                            "invalid uniform range [{lo}, {hi}]"
                        )));
                    }
                }
                if alpha.1 + beta.1 > 1.0 {
                    return Err(Error::InvalidConfig(
                        "uniform ranges allow alpha + beta > 1".into(),
                    ));
                }
            }
            ParamSource::Block { membership, params } => {
                if membership.node_count() != universe.node_count() {
                    return Err(Error::LengthMismatch {
                        a: membership.node_count() as usize,
                        b: universe.node_count() as usize,
                    });
                }
                // every multiset that can occur must resolve
                for size in 2..=universe.k_max() as usize {
                    for ms in crate::block::multisets(membership.q(), size) {
                        params.pair(&ms)?;
                    }
                }
            }
        }
        Ok(Ar1Model { universe, source })
    }

    /// Convenience: homogeneous model.
    pub fn constant(universe: HyperedgeUniverse, alpha: f64, beta: f64) -> Result<Self> {
        Ar1Model::new(universe, ParamSource::Constant(EdgeAr1Params::new(alpha, beta)?))
    }

    /// Explicit per-edge map with a default fill.
    pub fn from_map(
        universe: HyperedgeUniverse,
        entries: &[(Hyperedge, EdgeAr1Params)],
        default: EdgeAr1Params,
    ) -> Result<Self> {
        let overrides = entries
            .iter()
            .map(|(e, p)| (universe.rank(e), *p))
            .collect();
        Ar1Model::new(universe, ParamSource::Map { overrides, default })
    }

    pub fn universe(&self) -> &HyperedgeUniverse {
        &self.universe
    }

    pub fn source(&self) -> &ParamSource {
        &self.source
    }

    /// Resolve the parameters for an edge given its rank and node tuple.
    #[inline]
    pub fn params_for(&self, rank: u64, nodes: &[u32]) -> EdgeAr1Params {
        match &self.source {
            ParamSource::Constant(p) => *p,
            ParamSource::Map { overrides, default } => {
                overrides.get(&rank).copied().unwrap_or(*default)
            }
            ParamSource::IidUniform { alpha, beta, seed } => {
                let a_key = StreamKey::root(*seed).child(tag::PARAM_ALPHA);
                let b_key = StreamKey::root(*seed).child(tag::PARAM_BETA);
                EdgeAr1Params {
                    alpha: alpha.0 + (alpha.1 - alpha.0) * a_key.f64_at(rank),
                    beta: beta.0 + (beta.1 - beta.0) * b_key.f64_at(rank),
                }
            }
            ParamSource::Block { membership, params } => {
                let ms = membership.multiset_of(nodes);
                let (theta, eta) = params.pair(&ms).expect("validated at construction");
                EdgeAr1Params {
                    alpha: theta,
                    beta: eta,
                }
            }
        }
    }

    /// Resolve parameters for an edge by value.
    pub fn params_for_edge(&self, edge: &Hyperedge) -> EdgeAr1Params {
        self.params_for(self.universe.rank(edge), edge.nodes())
    }
}

/// Initial condition for simulation.
#[derive(Debug, Clone)]
pub enum Init {
    /// X_0 drawn from the stationary law P(X=1) = alpha / (alpha + beta).
    Stationary,
    /// X_0 ~ Bernoulli(pi), independent across edges.
    Bernoulli(f64),
    /// Fixed starting snapshot.
    Fixed(HypergraphSnapshot),
}

/// Deterministic per-edge sample path.
///
/// Counter position 0 drives the initial state, positions 1..=n drive the
/// innovations, so the value of X at (edge, t) is a pure function of
/// (seed, edge rank, t) and independent of evaluation order.
pub struct EdgePath {
    key: StreamKey,
    params: EdgeAr1Params,
    init: EdgePathInit,
}

#[derive(Clone, Copy)]
pub enum EdgePathInit {
    Stationary,
    Bernoulli(f64),
    Fixed(bool),
}

impl EdgePath {
    pub fn new(seed: u64, rank: u64, params: EdgeAr1Params, init: EdgePathInit) -> Self {
        EdgePath {
            key: StreamKey::root(seed).child(tag::PATH).child(rank),
            params,
            init,
        }
    }

    /// Initial state X_0.
    #[inline]
    pub fn initial(&self) -> Result<bool> {
        let u = self.key.f64_at(0);
        Ok(match self.init {
            EdgePathInit::Stationary => {
                let denom = self.params.alpha + self.params.beta;
                if denom == 0.0 {
                    return Err(Error::DegenerateStationary);
                }
                u < self.params.alpha / denom
            }
            EdgePathInit::Bernoulli(pi) => u < pi,
            EdgePathInit::Fixed(x) => x,
        })
    }

    /// One transition step: state at time t given the state at t-1 (t >= 1).
    ///
    /// The uniform draw is partitioned into [0, alpha) -> birth,
    /// [alpha, alpha+beta) -> death, remainder -> keep. When alpha + beta
    /// exceeds 1 (chain-form parameters) the death interval wraps past 1,
    /// which preserves the conditional law P(die | present) = beta while
    /// agreeing exactly with the plain partition whenever alpha + beta <= 1.
    #[inline]
    pub fn step(&self, prev: bool, t: u64) -> bool {
        let u = self.key.f64_at(t);
        let a = self.params.alpha;
        let s = a + self.params.beta;
        if prev {
            let dies = (u >= a && u < s) || (s > 1.0 && u < s - 1.0);
            !dies
        } else {
            u < a
        }
    }

    /// Walk the whole path X_0..X_n, invoking `visit(t, x_t)`.
    pub fn walk(&self, n: u64, mut visit: impl FnMut(u64, bool)) -> Result<()> {
        let mut x = self.initial()?;
        visit(0, x);
        for t in 1..=n {
            x = self.step(x, t);
            visit(t, x);
        }
        Ok(())
    }
}

fn edge_path_init(init: &Init, rank: u64) -> EdgePathInit {
    match init {
        Init::Stationary => EdgePathInit::Stationary,
        Init::Bernoulli(pi) => EdgePathInit::Bernoulli(*pi),
        Init::Fixed(snap) => EdgePathInit::Fixed(snap.contains_rank(rank)),
    }
}

/// Simulate a series X_0..X_n. Identical (model, n, seed, init) reproduce the
/// identical series bit for bit, for any thread count.
pub fn simulate(model: &Ar1Model, n: u64, seed: u64, init: &Init) -> Result<HypergraphSeries> {
    if n < 1 {
        return Err(Error::InvalidConfig("horizon n must be >= 1".into()));
    }
    if let Init::Bernoulli(pi) = init {
        if !(0.0..=1.0).contains(pi) {
            return Err(Error::InvalidConfig(format!("invalid pi {pi}")));
        }
    }
    if let Init::Fixed(snap) = init {
        if snap.universe() != model.universe() {
            return Err(Error::UniverseMismatch);
        }
    }
    let universe = model.universe();
    let edge_count = universe.edge_count();

    // Chunked over edges; chunk results concatenate in rank order. A
    // degenerate stationary init surfaces from the per-edge walk.
    const CHUNK: u64 = 8192;
    let chunks = edge_count.div_ceil(CHUNK);
    let partials: Vec<Result<Vec<Vec<u64>>>> = exec::map_indexed(chunks as usize, |ci| {
        let lo = ci as u64 * CHUNK;
        let hi = (lo + CHUNK).min(edge_count);
        let mut present: Vec<Vec<u64>> = vec![Vec::new(); n as usize + 1];
        let mut rank = lo;
        // iterate edges of the chunk by unranking the first, then stepping
        let mut iter = UniverseRange::new(universe, lo, hi);
        while let Some(nodes) = iter.next_nodes() {
            let params = model.params_for(rank, nodes);
            let path = EdgePath::new(seed, rank, params, edge_path_init(init, rank));
            path.walk(n, |t, x| {
                if x {
                    present[t as usize].push(rank);
                }
            })?;
            rank += 1;
        }
        Ok(present)
    });

    let mut snapshots_ranks: Vec<Vec<u64>> = vec![Vec::new(); n as usize + 1];
    for part in partials {
        let part = part?;
        for (t, mut ranks) in part.into_iter().enumerate() {
            snapshots_ranks[t].append(&mut ranks);
        }
    }
    let snapshots = snapshots_ranks
        .into_iter()
        .map(|ranks| HypergraphSnapshot::from_ranks(universe, ranks))
        .collect();
    HypergraphSeries::new(universe.clone(), snapshots)
}

/// Iterator over a rank interval of the universe that exposes node tuples
/// without re-unranking every edge.
pub struct UniverseRange {
    universe: HyperedgeUniverse,
    nodes: Vec<u32>,
    next_rank: u64,
    end: u64,
    started: bool,
}

impl UniverseRange {
    pub fn new(universe: &HyperedgeUniverse, start: u64, end: u64) -> Self {
        let nodes = if start < end {
            universe.unrank(start).nodes().to_vec()
        } else {
            Vec::new()
        };
        UniverseRange {
            universe: universe.clone(),
            nodes,
            next_rank: start,
            end,
            started: false,
        }
    }

    /// Advance and return the node tuple of the next edge, or None.
    pub fn next_nodes(&mut self) -> Option<&[u32]> {
        if self.next_rank >= self.end {
            return None;
        }
        if !self.started {
            self.started = true;
            self.next_rank += 1;
            return Some(&self.nodes);
        }
        let p = self.universe.node_count();
        let k_max = self.universe.k_max();
        let k = self.nodes.len();
        let mut i = k;
        loop {
            if i == 0 {
                // exhausted size k; move to size k + 1
                debug_assert!((k as u32) < k_max);
                self.nodes = (0..=k as u32).collect();
                break;
            }
            i -= 1;
            if self.nodes[i] < p - (k - i) as u32 {
                self.nodes[i] += 1;
                for j in i + 1..k {
                    self.nodes[j] = self.nodes[j - 1] + 1;
                }
                break;
            }
        }
        self.next_rank += 1;
        Some(&self.nodes)
    }

    pub fn current_rank(&self) -> u64 {
        self.next_rank - 1
    }
}

/// Stationary mean and variance of the edge process.
pub fn stationary_moments(p: &EdgeAr1Params) -> Result<(f64, f64)> {
    let s = p.alpha + p.beta;
    if s == 0.0 {
        return Err(Error::DegenerateStationary);
    }
    Ok((p.alpha / s, p.alpha * p.beta / (s * s)))
}

/// Lag-h autocorrelation (1 - alpha - beta)^h of a single edge process.
/// Cross-edge correlation is identically zero by edge independence.
pub fn autocorrelation(p: &EdgeAr1Params, lag: u32) -> Result<f64> {
    if p.alpha + p.beta == 0.0 {
        return Err(Error::DegenerateStationary);
    }
    Ok((1.0 - p.alpha - p.beta).powi(lag as i32))
}

/// Expected Hamming distance d_H(k) between snapshots k apart, summed over
/// the universe in closed form.
pub fn expected_hamming(model: &Ar1Model, lag: u32) -> Result<f64> {
    if lag == 0 {
        return Ok(0.0);
    }
    let mut total = 0.0;
    let universe = model.universe();
    let mut iter = UniverseRange::new(universe, 0, universe.edge_count());
    let mut rank = 0u64;
    while let Some(nodes) = iter.next_nodes() {
        let p = model.params_for(rank, nodes);
        let s = p.alpha + p.beta;
        if s == 0.0 {
            return Err(Error::DegenerateStationary);
        }
        total += 2.0 * p.alpha * p.beta / (s * s) * (1.0 - (1.0 - s).powi(lag as i32));
        rank += 1;
    }
    Ok(total)
}

/// Limit of d_H(k) as k grows: twice the sum of the edge variances.
pub fn expected_hamming_limit(model: &Ar1Model) -> Result<f64> {
    let mut total = 0.0;
    let universe = model.universe();
    let mut iter = UniverseRange::new(universe, 0, universe.edge_count());
    let mut rank = 0u64;
    while let Some(nodes) = iter.next_nodes() {
        let p = model.params_for(rank, nodes);
        let s = p.alpha + p.beta;
        if s == 0.0 {
            return Err(Error::DegenerateStationary);
        }
        total += 2.0 * p.alpha * p.beta / (s * s);
        rank += 1;
    }
    Ok(total)
}

/// Upper bound (1 - alpha - beta)^tau on the alpha-mixing coefficient at lag
/// tau. Requires strictly positive rates.
pub fn mixing_bound(p: &EdgeAr1Params, tau: u32) -> Result<f64> {
    if p.alpha <= 0.0 || p.beta <= 0.0 {
        return Err(Error::NonPositiveRates);
    }
    assert!(tau >= 1, "mixing bound defined for tau >= 1");
    Ok((1.0 - p.alpha - p.beta).powi(tau as i32))
}
