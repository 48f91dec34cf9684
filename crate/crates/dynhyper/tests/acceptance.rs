//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Every tolerance is pinned here. Two criteria are expected to fail for
//! documented reasons outside this implementation's control and their
//! assertion messages carry the analysis:
//!
//! - criterion 1: the published n = 200 estimation error rounds 0.0024 down
//!   to 0.002; the design's true value (0.002408, Monte Carlo s.e. 1e-6) sits
//!   0.35% above the +-20% band around the printed value. The same pipeline
//!   reproduces the published n = 4 coverage to the printed digit.
//! - criterion 7: the lag-1 residual pairs share the middle snapshot state,
//!   so half the contingency cells are structurally empty and the observed
//!   statistic exceeds every permutation replicate once n is moderate; the
//!   5%-level rejection rate at n = 100 is 1.0, not the nominal 5%.

use dynhyper::ar1::{EdgeAr1Params, EdgePath, EdgePathInit, Init};
use dynhyper::block::{BlockParams, Membership};
use dynhyper::diagnose::{permutation_test, residuals};
use dynhyper::estimate::{estimate_all, mle, TransitionCounts};
use dynhyper::harness::{
    run_changepoint_study, run_table1, run_table2, CpStudyConfig, Table1Config, Table2Config,
};
use dynhyper::hsbm::{
    build_laplacian, population_objects, simulate_hsbm, spectral_cluster, SimilarityMatrices,
};
use dynhyper::hypercore::{hamming, HyperedgeUniverse};
use dynhyper::kmeans::KMeansConfig;
use dynhyper::metrics::ari;
use dynhyper::modelsel::{select_q, PenaltyMode};
use dynhyper::rng::{tag, StreamKey};
use dynhyper::stats::chi2_sf;

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "acceptance {criterion}: {} - {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
}

fn within_rel(value: f64, target: f64, rel: f64) -> bool {
    (value - target).abs() <= rel * target
}

/// Criterion 1: estimation study at p = 100, published rows 50/100/200,
/// 100 replications. MSE within +-20% of (0.012, 0.005, 0.002); coverage
/// within +-3 points of (92.27, 93.75, 94.40).
#[test]
fn criterion_1_table1_reproduction() {
    let config = Table1Config {
        p_values: vec![100],
        n_values: vec![50, 100, 200],
        replications: 100,
        seed: 1,
        ..Default::default()
    };
    let r = run_table1(&config).unwrap();
    let mse_targets = [0.012, 0.005, 0.002];
    let cov_targets = [92.27, 93.75, 94.40];
    let mut all_pass = true;
    let mut details = Vec::new();
    for (i, cell) in r.cells.iter().enumerate() {
        let mse_ok = within_rel(cell.mse_alpha, mse_targets[i], 0.20);
        let cov_ok = (cell.coverage_alpha_pct - cov_targets[i]).abs() <= 3.0;
        all_pass &= mse_ok && cov_ok;
        details.push(format!(
            "n={}: mse {:.6} vs {} ({}), coverage {:.2} vs {} ({})",
            cell.n,
            cell.mse_alpha,
            mse_targets[i],
            if mse_ok { "ok" } else { "OUT" },
            cell.coverage_alpha_pct,
            cov_targets[i],
            if cov_ok { "ok" } else { "OUT" },
        ));
    }
    let detail = details.join("; ");
    report("criterion 1 (table 1 rows 50/100/200)", all_pass, &detail);
    assert!(
        all_pass,
        "table-1 reproduction: {detail}. Known near-miss: the design's exact \
         n=200 MSE is 0.002408 (s.e. 1e-6 across seeds), 0.35% above the band \
         [0.0016, 0.0024] derived from the one-significant-digit published \
         value 0.002; the identical pipeline reproduces the published n=4 \
         coverage (22.35) to the printed digit (criterion 2). See the \
         decisions ledger."
    );
}

/// Criterion 2: small-n interval failure, published row n = 4 coverage
/// within +-5 points of 22.35%.
#[test]
fn criterion_2_small_n_coverage() {
    let config = Table1Config {
        p_values: vec![100],
        n_values: vec![4],
        replications: 100,
        seed: 1,
        ..Default::default()
    };
    let r = run_table1(&config).unwrap();
    let cov = r.cells[0].coverage_alpha_pct;
    let pass = (cov - 22.35).abs() <= 5.0;
    let detail = format!("n=4 coverage {cov:.2} vs 22.35 +- 5");
    report("criterion 2 (small-n CI failure)", pass, &detail);
    assert!(pass, "{detail}");
}

/// Criterion 3: clustering study at q = 6, p = 80, rows 4 and 40, 100
/// replications: dynamic-method ARI within +-0.05 of (0.835, 0.987), the
/// small-n crossover, and theta MSE at n = 40 within +-25% of 0.0060.
#[test]
fn criterion_3_table2_reproduction() {
    let config = Table2Config {
        q: 6,
        p: 80,
        n_values: vec![4, 40],
        replications: 100,
        seed: 2,
        ..Default::default()
    };
    let r = run_table2(&config).unwrap();
    let (c4, c40) = (&r.cells[0], &r.cells[1]);
    let ari4_ok = (c4.laplacian.ari - 0.835).abs() <= 0.05;
    let ari40_ok = (c40.laplacian.ari - 0.987).abs() <= 0.05;
    let crossover_small_n = c4.baseline.ari > c4.laplacian.ari;
    let crossover_large_n = c40.laplacian.ari > c40.baseline.ari;
    let mse_ok = within_rel(c40.laplacian.mse_theta, 0.0060, 0.25);
    let pass = ari4_ok && ari40_ok && crossover_small_n && crossover_large_n && mse_ok;
    let detail = format!(
        "ari(n=4) {:.3} vs 0.835+-0.05; ari(n=40) {:.3} vs 0.987+-0.05; \
         baseline beats dynamic at n=4: {} ({:.3} vs {:.3}); dynamic beats \
         baseline at n=40: {} ({:.3} vs {:.3}); mse_theta(n=40) {:.4} vs \
         0.0060+-25%",
        c4.laplacian.ari,
        c40.laplacian.ari,
        crossover_small_n,
        c4.baseline.ari,
        c4.laplacian.ari,
        crossover_large_n,
        c40.laplacian.ari,
        c40.baseline.ari,
        c40.laplacian.mse_theta,
    );
    report("criterion 3 (table 2 reproduction)", pass, &detail);
    assert!(pass, "{detail}");
}

/// Criterion 4: population exact recovery and the block-eigenvector identity
/// over the grid q in {2,3} x p in {12,20}.
#[test]
fn criterion_4_population_recovery() {
    let mut all_pass = true;
    let mut details = Vec::new();
    let mut positive_delta_configs = 0;
    for q in [2u32, 3] {
        for p in [12u32, 20] {
            for seed in [101u64, 202] {
                let universe = HyperedgeUniverse::new(p, 3).unwrap();
                let membership = Membership::balanced(p, q).unwrap();
                let params = BlockParams::community_design(
                    q,
                    3,
                    0.6,
                    0.4,
                    (0.05, 0.25),
                    (0.75, 0.95),
                    seed,
                )
                .unwrap();
                let pop = population_objects(&membership, &params, &universe).unwrap();
                if pop.delta <= 0.0 {
                    continue;
                }
                positive_delta_configs += 1;
                let sim = SimilarityMatrices {
                    a1: pop.a1.clone(),
                    a2: pop.a2.clone(),
                    d1: pop.d1.clone(),
                    d2: pop.d2.clone(),
                };
                let lap = build_laplacian(&sim).unwrap();
                let model = spectral_cluster(&lap, q, &KMeansConfig::default(), 9).unwrap();
                let score = ari(model.labels.labels(), membership.labels()).unwrap();
                // eigenvector identity: L Gamma = Gamma diag(mu) to 1e-8, and
                // mu are the q smallest eigenvalues
                let (gamma, mu) = pop.gamma_matrix().unwrap();
                let mut resid = 0.0f64;
                for c in 0..q as usize {
                    let g = gamma.column(c);
                    let lg = lap.matvec(&g);
                    for i in 0..p as usize {
                        resid = resid.max((lg[i] - mu[c] * g[i]).abs());
                    }
                    resid = resid.max((model.eigenvalues[c] - mu[c]).abs());
                }
                let ok = score == 1.0 && resid <= 1e-8;
                all_pass &= ok;
                if !ok {
                    details.push(format!(
                        "q={q} p={p} seed={seed}: ari={score} resid={resid:.2e}"
                    ));
                }
            }
        }
    }
    all_pass &= positive_delta_configs > 0;
    let detail = if details.is_empty() {
        format!("{positive_delta_configs} delta>0 configs, all recovered exactly, identity <= 1e-8")
    } else {
        details.join("; ")
    };
    report("criterion 4 (population recovery)", all_pass, &detail);
    assert!(all_pass, "{detail}");
}

/// Criterion 5: exact-distribution oracle (chi-square GOF on full path laws
/// for n <= 12 at the 0.1% level with 1e5 samples) and the expected Hamming
/// distance against the closed form within 3 Monte Carlo standard errors.
#[test]
fn criterion_5_exact_distribution() {
    let mut all_pass = true;
    let mut details = Vec::new();

    for (alpha, beta) in [(0.25, 0.25), (0.15, 0.35)] {
        let params = EdgeAr1Params::new(alpha, beta).unwrap();
        for n in [2usize, 5, 12] {
            let p_value = path_law_gof(params, n, 100_000, 9000 + n as u64);
            let ok = p_value >= 0.001;
            all_pass &= ok;
            details.push(format!(
                "gof a={alpha} b={beta} n={n}: p={p_value:.4} ({})",
                if ok { "ok" } else { "OUT" }
            ));
        }
    }

    // expected Hamming distance at lags 1, 2, 5
    let universe = HyperedgeUniverse::new(6, 3).unwrap();
    let model = dynhyper::ar1::Ar1Model::new(
        universe.clone(),
        dynhyper::ar1::ParamSource::IidUniform {
            alpha: (0.1, 0.5),
            beta: (0.1, 0.5),
            seed: 31,
        },
    )
    .unwrap();
    let reps = 20_000u64;
    for lag in [1u32, 2, 5] {
        let expected = dynhyper::ar1::expected_hamming(&model, lag).unwrap();
        let mut values = Vec::with_capacity(reps as usize);
        for rep in 0..reps {
            let series =
                dynhyper::ar1::simulate(&model, lag as u64, 7_000_000 + rep, &Init::Stationary)
                    .unwrap();
            values.push(hamming(series.snapshot(0), series.snapshot(lag as usize)).unwrap() as f64);
        }
        let mean: f64 = values.iter().sum::<f64>() / reps as f64;
        let var: f64 =
            values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (reps as f64 - 1.0);
        let se = (var / reps as f64).sqrt();
        let ok = (mean - expected).abs() <= 3.0 * se;
        all_pass &= ok;
        details.push(format!(
            "d_H({lag}): mc {mean:.4} vs closed form {expected:.4} (se {se:.4}, {})",
            if ok { "ok" } else { "OUT" }
        ));
    }
    let detail = details.join("; ");
    report("criterion 5 (exact distribution oracle)", all_pass, &detail);
    assert!(all_pass, "{detail}");
}

/// Chi-square GOF of simulated paths against exact path probabilities,
/// pooling cells with expected counts below 5.
fn path_law_gof(params: EdgeAr1Params, n: usize, samples: u64, seed: u64) -> f64 {
    let states = 1usize << (n + 1);
    // exact path probabilities under the stationary start
    let pi = params.alpha / (params.alpha + params.beta);
    let mut probs = vec![0.0f64; states];
    for (path, prob) in probs.iter_mut().enumerate() {
        let bit = |t: usize| (path >> t) & 1 == 1;
        let mut p = if bit(0) { pi } else { 1.0 - pi };
        for t in 1..=n {
            p *= match (bit(t - 1), bit(t)) {
                (false, true) => params.alpha,
                (false, false) => 1.0 - params.alpha,
                (true, false) => params.beta,
                (true, true) => 1.0 - params.beta,
            };
        }
        *prob = p;
    }
    // simulate
    let mut counts = vec![0u64; states];
    for rep in 0..samples {
        let path = EdgePath::new(seed, rep, params, EdgePathInit::Stationary);
        let mut index = 0usize;
        path.walk(n as u64, |t, x| {
            if x {
                index |= 1 << t;
            }
        })
        .unwrap();
        counts[index] += 1;
    }
    // pool cells with small expectations: sort by expected count ascending
    let mut order: Vec<usize> = (0..states).collect();
    order.sort_by(|&a, &b| probs[a].partial_cmp(&probs[b]).unwrap());
    let mut pooled: Vec<(f64, f64)> = Vec::new();
    let mut acc_expected = 0.0;
    let mut acc_observed = 0.0;
    for idx in order {
        acc_expected += probs[idx] * samples as f64;
        acc_observed += counts[idx] as f64;
        if acc_expected >= 5.0 {
            pooled.push((acc_observed, acc_expected));
            acc_expected = 0.0;
            acc_observed = 0.0;
        }
    }
    if acc_expected > 0.0 {
        if let Some(last) = pooled.last_mut() {
            last.0 += acc_observed;
            last.1 += acc_expected;
        }
    }
    let stat: f64 = pooled
        .iter()
        .map(|&(o, e)| (o - e) * (o - e) / e)
        .sum();
    chi2_sf(stat, pooled.len() as f64 - 1.0)
}

/// Criterion 6: the closed-form MLE attains the grid-search likelihood
/// maximum on every binary path with up to 8 transitions, and the 0/0 = 1
/// convention branches behave as stated.
#[test]
fn criterion_6_mle_grid_oracle() {
    let grid: Vec<f64> = (0..200).map(|i| i as f64 / 199.0).collect();
    let loglik = |c: &TransitionCounts, a: f64, b: f64| -> f64 {
        let term = |count: u64, p: f64| {
            if count == 0 {
                0.0
            } else if p <= 0.0 {
                f64::NEG_INFINITY
            } else {
                count as f64 * p.ln()
            }
        };
        term(c.n01, a) + term(c.n00, 1.0 - a) + term(c.n10, b) + term(c.n11, 1.0 - b)
    };
    let mut checked = 0u32;
    for transitions in 1..=8usize {
        for path in 0u32..(1 << (transitions + 1)) {
            let bit = |t: usize| (path >> t) & 1 == 1;
            let mut counts = TransitionCounts::default();
            for t in 1..=transitions {
                counts.record(bit(t - 1), bit(t));
            }
            let (a_hat, b_hat) = mle(&counts);
            // grid argmax
            let mut best = f64::NEG_INFINITY;
            let mut best_a = 0.0;
            let mut best_b = 0.0;
            for &a in &grid {
                for &b in &grid {
                    let ll = loglik(&counts, a, b);
                    if ll > best {
                        best = ll;
                        best_a = a;
                        best_b = b;
                    }
                }
            }
            let ll_hat = loglik(&counts, a_hat, b_hat);
            assert!(
                ll_hat >= best - 1e-9,
                "path {path:b} ({transitions} transitions): mle ({a_hat}, {b_hat}) loglik \
                 {ll_hat} below grid max {best} at ({best_a}, {best_b})"
            );
            // within one grid cell along non-flat axes
            let step = 1.0 / 199.0 + 1e-12;
            if counts.n01 + counts.n00 > 0 {
                assert!(
                    (a_hat - best_a).abs() <= step,
                    "path {path:b}: alpha_hat {a_hat} more than one cell from grid argmax {best_a}"
                );
            }
            if counts.n10 + counts.n11 > 0 {
                assert!(
                    (b_hat - best_b).abs() <= step,
                    "path {path:b}: beta_hat {b_hat} more than one cell from grid argmax {best_b}"
                );
            }
            checked += 1;
        }
    }
    // dedicated degenerate branches
    let all_zero = TransitionCounts {
        n00: 8,
        ..Default::default()
    };
    assert_eq!(mle(&all_zero), (0.0, 1.0), "all-zero path convention");
    let all_one = TransitionCounts {
        n11: 8,
        ..Default::default()
    };
    assert_eq!(mle(&all_one), (1.0, 0.0), "all-one path convention");
    let detail = format!("{checked} paths checked against a 200x200 grid; degenerate conventions hold");
    report("criterion 6 (MLE grid oracle)", true, &detail);
}

/// Criterion 7: size of the residual permutation test in the well-specified
/// model (p = 20, K = 3, n = 100, M = 500), 200 replications; the stated
/// gate is a 5%-level rejection rate in [2%, 8%].
#[test]
fn criterion_7_permutation_test_size() {
    let reps = 200u64;
    let rejections: Vec<bool> = (0..reps)
        .map(|rep| {
            let key = StreamKey::root(7000).child(tag::REPLICATION).child(rep);
            let universe = HyperedgeUniverse::new(20, 3).unwrap();
            let model = dynhyper::ar1::Ar1Model::new(
                universe,
                dynhyper::ar1::ParamSource::IidUniform {
                    alpha: (0.1, 0.5),
                    beta: (0.1, 0.5),
                    seed: key.child(1).value(),
                },
            )
            .unwrap();
            let series =
                dynhyper::ar1::simulate(&model, 100, key.child(2).value(), &Init::Stationary)
                    .unwrap();
            let estimates = estimate_all(&series).unwrap();
            let res = residuals(&series, &estimates).unwrap();
            let out = permutation_test(&res, 500, key.child(3).value()).unwrap();
            out.p_value <= 0.05
        })
        .collect();
    let rate = rejections.iter().filter(|&&r| r).count() as f64 / reps as f64;
    let pass = (0.02..=0.08).contains(&rate);
    let detail = format!("rejection rate {rate:.3} vs nominal band [0.02, 0.08]");
    report("criterion 7 (permutation test size)", pass, &detail);
    assert!(
        pass,
        "{detail}. This failure is structural, not an implementation artifact: \
         the residual value is a bijection of the transition pair \
         (X_(t-1), X_t), so consecutive residuals share the middle state and \
         half the 4x4 cells are structurally empty while their independence \
         expectations are positive. The per-edge statistic grows like \
         (n-1)*D with D > 0 under the true model (D = 1.0 exactly at \
         alpha = beta = 0.25; measured 1.008 at n = 400), so the observed \
         statistic exceeds every permutation replicate once n is moderate \
         and the test rejects always (p-values are exactly 0 here at \
         n = 100). At n = 4, where the published analysis applies it, the \
         tables are too thin for the inflation to dominate and the test is \
         usable. See the decisions ledger."
    );
}

/// Criterion 8: change-point accuracy in the two-regime design (p = 30,
/// K = 3, n = 40 transitions, tau0 = 20): at the strong signal the scan is
/// within +-2 of tau0 in at least 90% of 100 replications, and the median
/// relative error is non-increasing in the signal strength.
#[test]
fn criterion_8_changepoint_accuracy() {
    let config = CpStudyConfig {
        p: 30,
        q: 3,
        n: 40,
        tau0: 20,
        shifts: vec![0.02, 0.1, 0.3],
        replications: 100,
        seed: 3,
        ..Default::default()
    };
    let r = run_changepoint_study(&config).unwrap();
    let strong = r.cells.last().unwrap();
    let strong_ok = strong.frac_within_2 >= 0.90;
    let mut monotone = true;
    for pair in r.cells.windows(2) {
        monotone &= pair[1].median_rel_error <= pair[0].median_rel_error + 1e-12;
        monotone &= pair[1].mean_delta_f_sq > pair[0].mean_delta_f_sq;
    }
    let pass = strong_ok && monotone;
    let detail = format!(
        "strong signal (shift 0.3, mean delta_F^2 {:.2}): {:.0}% within +-2; \
         medians {:?} non-increasing: {}",
        strong.mean_delta_f_sq,
        100.0 * strong.frac_within_2,
        r.cells
            .iter()
            .map(|c| c.median_rel_error)
            .collect::<Vec<_>>(),
        monotone,
    );
    report("criterion 8 (change-point accuracy)", pass, &detail);
    assert!(pass, "{detail}");
}

/// Criterion 9: BIC selects the true q = 3 in at least 90% of 50
/// replications when scanning q in 2..6.
#[test]
fn criterion_9_model_selection() {
    let reps = 50u64;
    let mut hits = 0u32;
    for rep in 0..reps {
        let key = StreamKey::root(900).child(tag::REPLICATION).child(rep);
        let universe = HyperedgeUniverse::new(45, 3).unwrap();
        let membership = Membership::balanced(45, 3).unwrap();
        let params = BlockParams::community_design(
            3,
            3,
            0.6,
            0.4,
            (0.05, 0.25),
            (0.75, 0.95),
            key.child(1).value(),
        )
        .unwrap();
        let series = simulate_hsbm(
            &membership,
            &params,
            &universe,
            16,
            key.child(2).value(),
            &Init::Bernoulli(0.5),
        )
        .unwrap();
        let trace = select_q(
            &series,
            2,
            6,
            &KMeansConfig::default(),
            PenaltyMode::Idealized,
            key.child(3).value(),
        )
        .unwrap();
        if trace.chosen_bic == 3 {
            hits += 1;
        }
    }
    let rate = hits as f64 / reps as f64;
    let pass = rate >= 0.90;
    let detail = format!("BIC picked q=3 in {hits}/{reps} scans of 2..=6");
    report("criterion 9 (model selection)", pass, &detail);
    assert!(pass, "{detail}");
}

// Criterion 10 (CLI determinism) lives in the CLI crate's integration tests:
// crates/dynhyper-cli/tests/cli.rs exercises byte-identical outputs across
// reruns and thread counts for every subcommand.
