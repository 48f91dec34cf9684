//! Command-line front end: simulation, estimation, diagnostics, clustering,
//! change-point detection, community-count selection, data ingestion, and
//! the replication benchmarks.
//!
//! Exit codes: 0 success, 2 configuration error, 3 data error, 4 numerical
//! failure. All randomness flows from --seed; outputs are byte-identical
//! for a fixed seed at any --threads value.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dynhyper::ar1::{Ar1Model, EdgeAr1Params, Init, ParamSource};
use dynhyper::block::{BlockParams, Membership};
use dynhyper::changepoint::{detect, DetectConfig};
use dynhyper::diagnose::{permutation_test, residuals};
use dynhyper::error::Error;
use dynhyper::estimate::{confidence_intervals, estimate_all};
use dynhyper::harness::{
    run_changepoint_study, run_table1, run_table2, CpStudyConfig, Table1Config, Table2Config,
};
use dynhyper::hsbm::{baseline_mean_cluster, cluster_series, simulate_hsbm};
use dynhyper::hypercore::{HyperedgeUniverse, HypergraphSeries};
use dynhyper::ingest::{
    clique_expand_series, parse_temporal_csv_path, read_series_dir, write_series_dir, CliqueConfig,
    IngestConfig, LabelOrder,
};
use dynhyper::kmeans::KMeansConfig;
use dynhyper::metrics::{ari, nmi};
use dynhyper::modelsel::{select_q, PenaltyMode};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "dynhyper", version, about = "Dynamic hypergraph modeling toolkit")]
struct Cli {
    /// Seed for all randomness.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 = automatic).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Output format where both are supported.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output directory for commands that write files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a series and write it in the canonical format.
    Simulate(SimulateArgs),
    /// Per-edge transition estimates with confidence intervals.
    Estimate(EstimateArgs),
    /// Residual-independence permutation test.
    Diagnose(DiagnoseArgs),
    /// Spectral community detection.
    Cluster(ClusterArgs),
    /// Single change-point scan.
    Changepoint(ChangepointArgs),
    /// BIC/AIC selection of the community count.
    SelectQ(SelectQArgs),
    /// Estimation-error benchmark (MSE and interval coverage).
    BenchTable1(BenchTable1Args),
    /// Clustering benchmark (dynamic Laplacian vs mean adjacency).
    BenchTable2(BenchTable2Args),
    /// Change-point accuracy benchmark across signal strengths.
    BenchCp(BenchCpArgs),
    /// Convert a temporal edge-list CSV to the canonical series format.
    Ingest(IngestArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Node count.
    #[arg(long)]
    p: u32,
    /// Maximum hyperedge size K.
    #[arg(long, default_value_t = 3)]
    k: u32,
    /// Number of transitions (the series has n + 1 snapshots).
    #[arg(long)]
    n: u64,
    #[arg(long, value_enum, default_value_t = DesignArg::Uniform)]
    design: DesignArg,
    /// Constant birth rate (design = const).
    #[arg(long, default_value_t = 0.25)]
    alpha: f64,
    /// Constant death rate (design = const).
    #[arg(long, default_value_t = 0.25)]
    beta: f64,
    /// Uniform alpha range lo:hi (design = uniform).
    #[arg(long, default_value = "0.1:0.5", value_parser = parse_range)]
    alpha_range: (f64, f64),
    /// Uniform beta range lo:hi (design = uniform).
    #[arg(long, default_value = "0.1:0.5", value_parser = parse_range)]
    beta_range: (f64, f64),
    /// Community count (design = community).
    #[arg(long, default_value_t = 3)]
    q: u32,
    #[arg(long, value_enum, default_value_t = InitArg::Stationary)]
    init: InitArg,
    /// Presence probability for the bernoulli init.
    #[arg(long, default_value_t = 0.5)]
    pi: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DesignArg {
    Const,
    Uniform,
    Community,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InitArg {
    Stationary,
    Bernoulli,
}

#[derive(Args)]
struct EstimateArgs {
    /// Canonical series directory.
    #[arg(long)]
    series: PathBuf,
    /// Confidence level.
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    /// Emit every universe edge (default: only edges seen at least once).
    #[arg(long)]
    all: bool,
}

#[derive(Args)]
struct DiagnoseArgs {
    #[arg(long)]
    series: PathBuf,
    /// Permutation count.
    #[arg(long, default_value_t = 500)]
    m: u32,
}

#[derive(Args)]
struct ClusterArgs {
    #[arg(long)]
    series: PathBuf,
    /// Community count.
    #[arg(long)]
    q: u32,
    #[arg(long, value_enum, default_value_t = MethodArg::Laplacian)]
    method: MethodArg,
    /// JSON file with true labels for NMI/ARI.
    #[arg(long)]
    truth: Option<PathBuf>,
    /// k-means restarts.
    #[arg(long, default_value_t = 20)]
    restarts: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Laplacian,
    MeanAdjacency,
}

#[derive(Args)]
struct ChangepointArgs {
    #[arg(long)]
    series: PathBuf,
    #[arg(long)]
    q: u32,
    /// Minimum segment length (default max(2, ceil(0.05 n))).
    #[arg(long)]
    n0: Option<usize>,
    /// Re-cluster every s-th candidate (1 = exact scan).
    #[arg(long, default_value_t = 1)]
    refresh_every: usize,
    /// k-means restarts.
    #[arg(long, default_value_t = 20)]
    restarts: u32,
}

#[derive(Args)]
struct SelectQArgs {
    #[arg(long)]
    series: PathBuf,
    #[arg(long)]
    q_min: u32,
    #[arg(long)]
    q_max: u32,
    /// Penalize with realized multiset sizes instead of the balanced
    /// idealization.
    #[arg(long)]
    realized_penalty: bool,
    /// k-means restarts.
    #[arg(long, default_value_t = 20)]
    restarts: u32,
}

#[derive(Args)]
struct BenchTable1Args {
    /// Comma-separated node counts.
    #[arg(long, default_value = "100", value_delimiter = ',')]
    p: Vec<u32>,
    /// Comma-separated series lengths (snapshots per row).
    #[arg(long, default_value = "4,50,100,200", value_delimiter = ',')]
    n_values: Vec<u32>,
    #[arg(long, default_value_t = 100)]
    reps: u32,
    /// Published-scale run: 500 replications, p in {100, 200}.
    #[arg(long)]
    full: bool,
}

#[derive(Args)]
struct BenchTable2Args {
    #[arg(long, default_value_t = 6)]
    q: u32,
    #[arg(long, default_value_t = 80)]
    p: u32,
    #[arg(long, default_value = "4,10,40,100", value_delimiter = ',')]
    n_values: Vec<u32>,
    #[arg(long, default_value_t = 100)]
    reps: u32,
    /// Published-scale run: 500 replications.
    #[arg(long)]
    full: bool,
    /// Upgraded pipeline: 20 k-means restarts, aligned labels, 0/0 = 1.
    #[arg(long)]
    upgraded: bool,
}

#[derive(Args)]
struct BenchCpArgs {
    #[arg(long, default_value_t = 30)]
    p: u32,
    #[arg(long, default_value_t = 3)]
    q: u32,
    #[arg(long, default_value_t = 40)]
    n: u32,
    #[arg(long, default_value_t = 20)]
    tau0: u32,
    #[arg(long, default_value = "0.02,0.1,0.3", value_delimiter = ',')]
    shifts: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    reps: u32,
}

#[derive(Args)]
struct IngestArgs {
    /// Input CSV: lines `t,label1,label2,...`.
    #[arg(long)]
    input: PathBuf,
    /// Maximum hyperedge size K.
    #[arg(long, default_value_t = 3)]
    k: u32,
    /// Skip a header line.
    #[arg(long)]
    header: bool,
    /// Bin raw timestamps by integer division.
    #[arg(long)]
    rebin: Option<u64>,
    /// Decompose oversize records into all K-subsets.
    #[arg(long)]
    decompose: bool,
    /// Expand simultaneous pairwise contacts into clique hyperedges.
    #[arg(long)]
    clique_expand: bool,
    /// Keep pairs not covered by any expanded hyperedge.
    #[arg(long, default_value_t = true)]
    keep_isolated_pairs: bool,
    #[arg(long, value_enum, default_value_t = LabelOrderArg::FirstSeen)]
    label_order: LabelOrderArg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LabelOrderArg {
    FirstSeen,
    Sorted,
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(':').ok_or("expected lo:hi")?;
    let lo: f64 = lo.parse().map_err(|_| "bad lower bound")?;
    let hi: f64 = hi.parse().map_err(|_| "bad upper bound")?;
    Ok((lo, hi))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    dynhyper::exec::configure_threads(cli.threads);
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        // a closed stdout (e.g. piping into head) is not an error
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ParseError { .. }
        | Error::EmptyFile
        | Error::Io(_)
        | Error::Json(_)
        | Error::UniverseMismatch
        | Error::EdgeNotInUniverse
        | Error::NonPairInput(_)
        | Error::DuplicateNode(_)
        | Error::NodeOutOfRange { .. }
        | Error::SizeOutOfRange { .. } => 3,
        Error::EigenFailure
        | Error::ZeroDegree { .. }
        | Error::DegenerateStationary
        | Error::NonPositiveRates => 4,
        _ => 2,
    }
}

fn run(cli: Cli) -> dynhyper::Result<()> {
    match &cli.command {
        Command::Simulate(args) => simulate_cmd(&cli, args),
        Command::Estimate(args) => estimate_cmd(&cli, args),
        Command::Diagnose(args) => diagnose_cmd(&cli, args),
        Command::Cluster(args) => cluster_cmd(&cli, args),
        Command::Changepoint(args) => changepoint_cmd(&cli, args),
        Command::SelectQ(args) => select_q_cmd(&cli, args),
        Command::BenchTable1(args) => bench_table1_cmd(&cli, args),
        Command::BenchTable2(args) => bench_table2_cmd(&cli, args),
        Command::BenchCp(args) => bench_cp_cmd(&cli, args),
        Command::Ingest(args) => ingest_cmd(&cli, args),
    }
}

fn require_out(cli: &Cli) -> dynhyper::Result<&Path> {
    cli.out
        .as_deref()
        .ok_or_else(|| Error::InvalidConfig("this command needs --out DIR".into()))
}

fn load_series(path: &Path) -> dynhyper::Result<HypergraphSeries> {
    Ok(read_series_dir(path)?.0)
}

fn print_json<T: Serialize>(value: &T) -> dynhyper::Result<()> {
    let mut stdout = std::io::stdout().lock();
    serde_json::to_writer(&mut stdout, value)?;
    stdout.write_all(b"\n")?;
    Ok(())
}

fn simulate_cmd(cli: &Cli, args: &SimulateArgs) -> dynhyper::Result<()> {
    let universe = HyperedgeUniverse::new(args.p, args.k)?;
    let init = match args.init {
        InitArg::Stationary => Init::Stationary,
        InitArg::Bernoulli => Init::Bernoulli(args.pi),
    };
    let series = match args.design {
        DesignArg::Const => {
            let model = Ar1Model::new(
                universe,
                ParamSource::Constant(EdgeAr1Params::new(args.alpha, args.beta)?),
            )?;
            dynhyper::ar1::simulate(&model, args.n, cli.seed, &init)?
        }
        DesignArg::Uniform => {
            let model = Ar1Model::new(
                universe,
                ParamSource::IidUniform {
                    alpha: args.alpha_range,
                    beta: args.beta_range,
                    seed: cli.seed ^ 0x9e37,
                },
            )?;
            dynhyper::ar1::simulate(&model, args.n, cli.seed, &init)?
        }
        DesignArg::Community => {
            let membership = Membership::balanced(args.p, args.q)?;
            let params = BlockParams::community_design(
                args.q,
                args.k,
                0.6,
                0.4,
                (0.05, 0.25),
                (0.75, 0.95),
                cli.seed ^ 0x9e37,
            )?;
            let series =
                simulate_hsbm(&membership, &params, &universe, args.n, cli.seed, &init)?;
            // keep the ground truth next to the series for later scoring
            if let Some(out) = cli.out.as_deref() {
                std::fs::create_dir_all(out)?;
                std::fs::write(
                    out.join("truth.json"),
                    serde_json::to_string(membership.labels())? + "\n",
                )?;
            }
            series
        }
    };
    let out = require_out(cli)?;
    write_series_dir(out, &series, None)?;
    print_json(&dynhyper::ingest::series_meta(&series))
}

#[derive(Serialize)]
struct EstimateRow {
    edge: String,
    k: usize,
    alpha_hat: f64,
    beta_hat: f64,
    se_alpha: Option<f64>,
    se_beta: Option<f64>,
    ci_alpha_lo: f64,
    ci_alpha_hi: f64,
    ci_beta_lo: f64,
    ci_beta_hi: f64,
}

fn estimate_cmd(cli: &Cli, args: &EstimateArgs) -> dynhyper::Result<()> {
    let series = load_series(&args.series)?;
    let estimates = estimate_all(&series)?;
    let universe = series.universe();
    let n = estimates.n();
    let ranks: Vec<u64> = if args.all {
        (0..universe.edge_count()).collect()
    } else {
        estimates.touched().iter().map(|e| e.0).collect()
    };
    let mut rows = Vec::with_capacity(ranks.len());
    for rank in ranks {
        let est = estimates.estimate(rank);
        let (ci_a, ci_b) = confidence_intervals(&est, n, args.level)?;
        let edge = universe.unrank(rank);
        rows.push(EstimateRow {
            edge: edge
                .nodes()
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join("-"),
            k: edge.size(),
            alpha_hat: est.alpha_hat,
            beta_hat: est.beta_hat,
            se_alpha: est.se_alpha,
            se_beta: est.se_beta,
            ci_alpha_lo: ci_a.lo,
            ci_alpha_hi: ci_a.hi,
            ci_beta_lo: ci_b.lo,
            ci_beta_hi: ci_b.hi,
        });
    }
    match cli.format {
        Format::Json => print_json(&rows)?,
        Format::Csv => {
            let mut out = String::from(
                "edge,k,alpha_hat,beta_hat,se_alpha,se_beta,ci_alpha_lo,ci_alpha_hi,ci_beta_lo,ci_beta_hi\n",
            );
            for r in rows {
                let fmt_opt = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{}\n",
                    r.edge,
                    r.k,
                    r.alpha_hat,
                    r.beta_hat,
                    fmt_opt(r.se_alpha),
                    fmt_opt(r.se_beta),
                    r.ci_alpha_lo,
                    r.ci_alpha_hi,
                    r.ci_beta_lo,
                    r.ci_beta_hi
                ));
            }
            write_text(cli, "estimates.csv", &out)?;
        }
    }
    Ok(())
}

/// Write to --out/<name> when --out is given, else to stdout.
fn write_text(cli: &Cli, name: &str, text: &str) -> dynhyper::Result<()> {
    match cli.out.as_deref() {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join(name), text)?;
        }
        None => {
            std::io::stdout().lock().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

fn diagnose_cmd(cli: &Cli, args: &DiagnoseArgs) -> dynhyper::Result<()> {
    let series = load_series(&args.series)?;
    let estimates = estimate_all(&series)?;
    let res = residuals(&series, &estimates)?;
    let result = permutation_test(&res, args.m, cli.seed)?;
    print_json(&result)
}

#[derive(Serialize)]
struct ClusterOutput {
    q: u32,
    method: &'static str,
    labels: Vec<u32>,
    eigenvalues: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    metrics: Option<MetricsOutput>,
}

#[derive(Serialize)]
struct MetricsOutput {
    nmi: f64,
    ari: f64,
}

fn cluster_cmd(cli: &Cli, args: &ClusterArgs) -> dynhyper::Result<()> {
    let series = load_series(&args.series)?;
    let config = KMeansConfig {
        restarts: args.restarts,
        ..Default::default()
    };
    let (model, method) = match args.method {
        MethodArg::Laplacian => (
            cluster_series(&series, args.q, &config, cli.seed)?,
            "laplacian",
        ),
        MethodArg::MeanAdjacency => (
            baseline_mean_cluster(&series, args.q, &config, cli.seed)?,
            "mean-adjacency",
        ),
    };
    let metrics = match &args.truth {
        None => None,
        Some(path) => {
            let truth: Vec<u32> = serde_json::from_str(&std::fs::read_to_string(path)?)?;
            Some(MetricsOutput {
                nmi: nmi(model.labels.labels(), &truth)?,
                ari: ari(model.labels.labels(), &truth)?,
            })
        }
    };
    print_json(&ClusterOutput {
        q: args.q,
        method,
        labels: model.labels.labels().to_vec(),
        eigenvalues: model.eigenvalues,
        metrics,
    })
}

#[derive(Serialize)]
struct ChangepointOutput {
    tau_hat: usize,
    q: u32,
    n0: usize,
}

fn changepoint_cmd(cli: &Cli, args: &ChangepointArgs) -> dynhyper::Result<()> {
    let series = load_series(&args.series)?;
    let config = DetectConfig {
        n0: args.n0,
        kmeans: KMeansConfig {
            restarts: args.restarts,
            ..Default::default()
        },
        refresh_every: args.refresh_every,
    };
    let result = detect(&series, args.q, &config, cli.seed)?;
    if let Some(dir) = cli.out.as_deref() {
        std::fs::create_dir_all(dir)?;
        let mut csv = String::from("tau,objective\n");
        for (tau, obj) in &result.objective {
            csv.push_str(&format!("{tau},{obj}\n"));
        }
        std::fs::write(dir.join("objective.csv"), csv)?;
        std::fs::write(
            dir.join("changepoint.json"),
            serde_json::to_string_pretty(&ChangepointOutput {
                tau_hat: result.tau_hat,
                q: args.q,
                n0: result.n0,
            })? + "\n",
        )?;
    }
    print_json(&ChangepointOutput {
        tau_hat: result.tau_hat,
        q: args.q,
        n0: result.n0,
    })
}

fn select_q_cmd(cli: &Cli, args: &SelectQArgs) -> dynhyper::Result<()> {
    let series = load_series(&args.series)?;
    let config = KMeansConfig {
        restarts: args.restarts,
        ..Default::default()
    };
    let penalty = if args.realized_penalty {
        PenaltyMode::Realized
    } else {
        PenaltyMode::Idealized
    };
    let trace = select_q(&series, args.q_min, args.q_max, &config, penalty, cli.seed)?;
    match cli.format {
        Format::Json => print_json(&trace)?,
        Format::Csv => {
            let mut out = String::from("q,loglik,bic,aic\n");
            for r in &trace.records {
                out.push_str(&format!("{},{},{},{}\n", r.q, r.max_loglik, r.bic, r.aic));
            }
            out.push_str(&format!(
                "# chosen: bic={}, aic={}\n",
                trace.chosen_bic, trace.chosen_aic
            ));
            write_text(cli, "selection.csv", &out)?;
        }
    }
    Ok(())
}

fn write_report(
    cli: &Cli,
    csv_name: &str,
    csv: &str,
    md: &str,
    manifest: &impl Serialize,
) -> dynhyper::Result<()> {
    let out = require_out(cli)?;
    std::fs::create_dir_all(out)?;
    std::fs::write(out.join(csv_name), csv)?;
    std::fs::write(out.join("summary.md"), md)?;
    std::fs::write(
        out.join("manifest.json"),
        serde_json::to_string_pretty(manifest)? + "\n",
    )?;
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(md.as_bytes())?;
    Ok(())
}

fn bench_table1_cmd(cli: &Cli, args: &BenchTable1Args) -> dynhyper::Result<()> {
    let mut config = Table1Config {
        p_values: args.p.clone(),
        n_values: args.n_values.clone(),
        replications: args.reps,
        seed: cli.seed,
        ..Default::default()
    };
    if args.full {
        config.replications = 500;
        config.n_values = vec![4, 20, 50, 100, 200];
        config.p_values = vec![100, 200];
    }
    let report = run_table1(&config)?;
    write_report(
        cli,
        "table1.csv",
        &report.to_csv(),
        &report.to_markdown(),
        &report.config,
    )
}

fn bench_table2_cmd(cli: &Cli, args: &BenchTable2Args) -> dynhyper::Result<()> {
    let mut config = Table2Config {
        q: args.q,
        p: args.p,
        n_values: args.n_values.clone(),
        replications: args.reps,
        seed: cli.seed,
        ..Default::default()
    };
    if args.full {
        config.replications = 500;
    }
    if args.upgraded {
        config.kmeans = KMeansConfig::default();
        config.align_labels = true;
        config.zero_fill_undefined = false;
    }
    let report = run_table2(&config)?;
    write_report(
        cli,
        "table2.csv",
        &report.to_csv(),
        &report.to_markdown(),
        &report.config,
    )
}

fn bench_cp_cmd(cli: &Cli, args: &BenchCpArgs) -> dynhyper::Result<()> {
    let config = CpStudyConfig {
        p: args.p,
        q: args.q,
        n: args.n,
        tau0: args.tau0,
        shifts: args.shifts.clone(),
        replications: args.reps,
        seed: cli.seed,
        ..Default::default()
    };
    let report = run_changepoint_study(&config)?;
    write_report(
        cli,
        "changepoint.csv",
        &report.to_csv(),
        &report.to_markdown(),
        &report.config,
    )
}

fn ingest_cmd(cli: &Cli, args: &IngestArgs) -> dynhyper::Result<()> {
    let config = IngestConfig {
        k_max: if args.clique_expand { 2 } else { args.k },
        has_header: args.header,
        rebin: args.rebin,
        decompose_oversize: args.decompose,
        label_order: match args.label_order {
            LabelOrderArg::FirstSeen => LabelOrder::FirstSeen,
            LabelOrderArg::Sorted => LabelOrder::Sorted,
        },
    };
    let (series, labels, report) = parse_temporal_csv_path(&args.input, &config)?;
    let series = if args.clique_expand {
        let clique_config = CliqueConfig {
            k_max: args.k,
            keep_isolated_pairs: args.keep_isolated_pairs,
            ..Default::default()
        };
        clique_expand_series(&series, &clique_config)?.0
    } else {
        series
    };
    let out = require_out(cli)?;
    write_series_dir(out, &series, Some(&labels))?;
    std::fs::write(
        out.join("report.json"),
        serde_json::to_string_pretty(&report)? + "\n",
    )?;
    print_json(&report)
}
