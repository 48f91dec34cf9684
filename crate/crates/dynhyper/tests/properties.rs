//! Property tests for the structural invariants: canonicalization, rank and
//! enumeration coherence, the Hamming metric, multiset lookups, matrix
//! symmetry, and likelihood additivity.

use proptest::prelude::*;

use dynhyper::ar1::{simulate, Ar1Model, EdgeAr1Params, Init, ParamSource};
use dynhyper::block::{BlockParams, Membership};
use dynhyper::changepoint::segment_loglik;
use dynhyper::estimate::{estimate_all, mle};
use dynhyper::hsbm::{build_similarity_from_model, simulate_hsbm};
use dynhyper::hypercore::{hamming, HyperedgeUniverse, HypergraphSnapshot};
use dynhyper::metrics::{ari, nmi};

fn universe_strategy() -> impl Strategy<Value = HyperedgeUniverse> {
    (2u32..=12).prop_flat_map(|p| {
        (Just(p), 2u32..=p).prop_map(|(p, k)| HyperedgeUniverse::new(p, k).unwrap())
    })
}

proptest! {
    #[test]
    fn canonicalize_idempotent(
        universe in universe_strategy(),
        raw in proptest::collection::vec(0u32..12, 2..6),
    ) {
        if let Ok(edge) = universe.canonicalize(&raw) {
            let again = universe.canonicalize(edge.nodes()).unwrap();
            prop_assert_eq!(&edge, &again);
            // strictly increasing
            prop_assert!(edge.nodes().windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn rank_unrank_roundtrip(universe in universe_strategy(), salt in 0u64..1_000_000) {
        let count = universe.edge_count();
        let rank = salt % count;
        let edge = universe.unrank(rank);
        prop_assert_eq!(universe.rank(&edge), rank);
    }

    #[test]
    fn hamming_is_a_metric(
        p in 3u32..10,
        a_bits in proptest::collection::vec(any::<bool>(), 32),
        b_bits in proptest::collection::vec(any::<bool>(), 32),
        c_bits in proptest::collection::vec(any::<bool>(), 32),
    ) {
        let universe = HyperedgeUniverse::new(p, 3).unwrap();
        let count = universe.edge_count() as usize;
        let snap = |bits: &[bool]| {
            let ranks: Vec<u64> = bits
                .iter()
                .cycle()
                .take(count)
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| i as u64)
                .collect();
            HypergraphSnapshot::from_ranks(&universe, ranks)
        };
        let (a, b, c) = (snap(&a_bits), snap(&b_bits), snap(&c_bits));
        let dab = hamming(&a, &b).unwrap();
        let dba = hamming(&b, &a).unwrap();
        prop_assert_eq!(dab, dba);
        prop_assert_eq!(hamming(&a, &a).unwrap(), 0);
        let dac = hamming(&a, &c).unwrap();
        let dcb = hamming(&c, &b).unwrap();
        prop_assert!(dab <= dac + dcb);
        // identity of indiscernibles
        if dab == 0 {
            prop_assert_eq!(a.present_ranks(), b.present_ranks());
        }
    }

    #[test]
    fn block_param_lookup_permutation_invariant(
        q in 2u32..6,
        perm_seed in any::<u64>(),
    ) {
        let params = BlockParams::community_design(
            q, 3, 0.6, 0.4, (0.05, 0.25), (0.75, 0.95), 11,
        ).unwrap();
        for size in 2..=3usize {
            for ms in dynhyper::block::multisets(q, size) {
                let mut shuffled = ms.clone();
                let mut rng = dynhyper::rng::SeqRng::new(
                    dynhyper::rng::StreamKey::root(perm_seed),
                );
                rng.shuffle(&mut shuffled);
                prop_assert_eq!(
                    params.theta(&ms).unwrap(),
                    params.theta(&shuffled).unwrap()
                );
                prop_assert_eq!(params.eta(&ms).unwrap(), params.eta(&shuffled).unwrap());
            }
        }
    }

    #[test]
    fn similarity_matrices_symmetric(seed in any::<u64>(), q in 2u32..4) {
        let universe = HyperedgeUniverse::new(9, 3).unwrap();
        let membership = Membership::balanced(9, q).unwrap();
        let params = BlockParams::community_design(
            q, 3, 0.6, 0.4, (0.05, 0.25), (0.75, 0.95), seed,
        ).unwrap();
        let model = Ar1Model::new(
            universe,
            ParamSource::Block { membership, params },
        ).unwrap();
        let sim = build_similarity_from_model(&model);
        for i in 0..9 {
            for j in 0..9 {
                prop_assert!((sim.a1.get(i, j) - sim.a1.get(j, i)).abs() < 1e-14);
                prop_assert!((sim.a2.get(i, j) - sim.a2.get(j, i)).abs() < 1e-14);
                prop_assert!(sim.a2.get(i, j) >= 0.0);
            }
        }
    }

    #[test]
    fn metrics_label_permutation_invariant(
        labels in proptest::collection::vec(0u32..4, 8..24),
        mapping in proptest::sample::select(vec![
            [1u32, 2, 3, 0],
            [3, 2, 1, 0],
            [2, 0, 3, 1],
        ]),
    ) {
        let relabeled: Vec<u32> = labels.iter().map(|&l| mapping[l as usize]).collect();
        prop_assert!((nmi(&labels, &relabeled).unwrap() - 1.0).abs() < 1e-12);
        prop_assert!((ari(&labels, &relabeled).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn estimates_depend_only_on_counts(seed in any::<u64>()) {
        // simulate, estimate, verify the sufficiency identity per edge
        let universe = HyperedgeUniverse::new(5, 2).unwrap();
        let model = Ar1Model::new(
            universe.clone(),
            ParamSource::Constant(EdgeAr1Params::new(0.3, 0.3).unwrap()),
        ).unwrap();
        let series = simulate(&model, 12, seed, &Init::Stationary).unwrap();
        let all = estimate_all(&series).unwrap();
        for edge in universe.iter() {
            let rank = universe.rank(&edge);
            let counts = all.counts(rank);
            let est = all.estimate(rank);
            prop_assert_eq!((est.alpha_hat, est.beta_hat), mle(&counts));
            prop_assert_eq!(counts.total(), 12);
        }
    }

    #[test]
    fn segment_loglik_additive(seed in any::<u64>(), tau in 2usize..10) {
        let universe = HyperedgeUniverse::new(8, 2).unwrap();
        let membership = Membership::balanced(8, 2).unwrap();
        let params = BlockParams::community_design(
            2, 2, 0.6, 0.4, (0.05, 0.25), (0.75, 0.95), 5,
        ).unwrap();
        let series = simulate_hsbm(
            &membership, &params, &universe, 11, seed, &Init::Bernoulli(0.5),
        ).unwrap();
        let full = segment_loglik(&series, 1, 11, &membership, &params).unwrap();
        let left = segment_loglik(&series, 1, tau, &membership, &params).unwrap();
        let right = segment_loglik(&series, tau + 1, 11, &membership, &params).unwrap();
        prop_assert!((full - left - right).abs() < 1e-9);
    }

    #[test]
    fn simulation_matches_estimation_streaming(seed in any::<u64>()) {
        // the series-based estimates equal streamed per-edge path counts
        let universe = HyperedgeUniverse::new(6, 3).unwrap();
        let model = Ar1Model::new(
            universe.clone(),
            ParamSource::IidUniform { alpha: (0.1, 0.5), beta: (0.1, 0.5), seed: 3 },
        ).unwrap();
        let n = 9u64;
        let series = simulate(&model, n, seed, &Init::Stationary).unwrap();
        let estimates = estimate_all(&series).unwrap();
        let mut range = dynhyper::ar1::UniverseRange::new(&universe, 0, universe.edge_count());
        let mut rank = 0u64;
        while let Some(nodes) = range.next_nodes() {
            let params = model.params_for(rank, nodes);
            let path = dynhyper::ar1::EdgePath::new(
                seed, rank, params, dynhyper::ar1::EdgePathInit::Stationary,
            );
            let mut counts = dynhyper::estimate::TransitionCounts::default();
            let mut prev = path.initial().unwrap();
            for t in 1..=n {
                let cur = path.step(prev, t);
                counts.record(prev, cur);
                prev = cur;
            }
            prop_assert_eq!(estimates.counts(rank), counts);
            rank += 1;
        }
    }
}
