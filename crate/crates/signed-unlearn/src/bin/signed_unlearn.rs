//! Command-line entry point: one unlearning run (or a seed sweep) per
//! invocation, emitting `report.json` and appending to `results.csv`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use signed_unlearn::graph::{EdgeListFormat, Scenario};
use signed_unlearn::pipeline::{DatasetSpec, Method, RunConfig, SignFilter};
use signed_unlearn::synthetic::SyntheticConfig;

/// Certified unlearning for signed graphs.
///
/// Values from `--config` override the corresponding flags.
#[derive(Debug, Parser)]
#[command(name = "signed-unlearn", version, about)]
struct Cli {
    /// Dataset: `synthetic` or a path to an edge list.
    #[arg(long, default_value = "synthetic")]
    dataset: String,

    /// Edge-list format for file datasets.
    #[arg(long, value_parser = ["rated_csv", "signed_triple"], default_value = "rated_csv")]
    format: String,

    /// Seed of the bundled synthetic graph (independent of --seed).
    #[arg(long, default_value_t = 0)]
    graph_seed: u64,

    #[arg(long, value_parser = ["edge", "node", "feature"], default_value = "edge")]
    scenario: String,

    /// Fraction of the deletion pool to remove, in (0, 1].
    #[arg(long, default_value_t = 0.025)]
    ratio: f64,

    #[arg(long, value_parser = ["csgu", "wo_siq", "wo_tin", "wo_noise", "retrain"],
          default_value = "csgu")]
    method: String,

    /// Restrict the edge-deletion pool by sign.
    #[arg(long, value_parser = ["pos", "neg", "mixed"])]
    sign_filter: Option<String>,

    /// Balance/status blend for sociological weights.
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,

    /// Privacy budget.
    #[arg(long, default_value_t = 1.0)]
    epsilon: f64,

    /// Privacy failure probability.
    #[arg(long, default_value_t = 1e-5)]
    delta: f64,

    /// Curvature added to the Hessian before solving.
    #[arg(long, default_value_t = 0.1)]
    damping: f64,

    /// Multiplier on the solved parameter update.
    #[arg(long, default_value_t = 1.0)]
    update_scale: f64,

    /// Skip noise injection (forfeits the privacy guarantee).
    #[arg(long)]
    no_noise: bool,

    /// L2 regularization of the head.
    #[arg(long, default_value_t = 1e-4)]
    lambda: f64,

    /// Norm cap for edge representations.
    #[arg(long, default_value_t = 1.0)]
    clip: f64,

    #[arg(long, default_value_t = 20)]
    embedding_dim: usize,

    #[arg(long, default_value_t = 500)]
    max_epochs: usize,

    #[arg(long, default_value_t = 1e-6)]
    cg_tol: f64,

    #[arg(long, default_value_t = 20)]
    cg_max_iter: usize,

    /// Certification region: triadic expansion or fixed k-hop.
    #[arg(long, value_parser = ["tin", "khop"])]
    region: Option<String>,

    /// Hop count for the k-hop region.
    #[arg(long, default_value_t = 2)]
    khop_k: usize,

    /// Edge weighting over the region.
    #[arg(long, value_parser = ["siq", "uniform", "degree"])]
    weights: Option<String>,

    /// Run seed; falls back to $CSGU_SEED, then 7.
    #[arg(long)]
    seed: Option<u64>,

    /// Inclusive seed sweep `a..b`; one run (and CSV row) per seed.
    #[arg(long)]
    seeds: Option<String>,

    #[arg(long, default_value_t = 0.2)]
    test_fraction: f64,

    /// Non-member pairs sampled for the membership-inference attack.
    #[arg(long, default_value_t = 200)]
    nonmembers: usize,

    /// Report all wall-clock times as zero, making outputs byte-stable.
    #[arg(long)]
    no_timing: bool,

    /// Output directory for report.json and results.csv.
    #[arg(long, default_value = "out")]
    out: PathBuf,

    /// JSON file with a full run configuration; overrides flags.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Print the full report JSON to stdout.
    #[arg(long)]
    print_report: bool,
}

fn base_config(cli: &Cli) -> Result<RunConfig, String> {
    let dataset = if cli.dataset == "synthetic" {
        DatasetSpec::Synthetic(SyntheticConfig {
            seed: cli.graph_seed,
            ..SyntheticConfig::default()
        })
    } else {
        let format = match cli.format.as_str() {
            "rated_csv" => EdgeListFormat::RatedCsv,
            _ => EdgeListFormat::SignedTriple,
        };
        DatasetSpec::File {
            path: PathBuf::from(&cli.dataset),
            format,
        }
    };
    let dataset_name = if cli.dataset == "synthetic" {
        "synthetic".to_string()
    } else {
        PathBuf::from(&cli.dataset)
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| cli.dataset.clone())
    };
    let scenario = match cli.scenario.as_str() {
        "edge" => Scenario::Edge,
        "node" => Scenario::Node,
        _ => Scenario::Feature,
    };
    let sign_filter = cli.sign_filter.as_deref().map(|s| match s {
        "pos" => SignFilter::Pos,
        "neg" => SignFilter::Neg,
        _ => SignFilter::Mixed,
    });
    let seed = cli
        .seed
        .or_else(|| std::env::var("CSGU_SEED").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(7);

    Ok(RunConfig {
        dataset,
        dataset_name,
        scenario,
        ratio: cli.ratio,
        method: Method::parse(&cli.method).map_err(|e| e.to_string())?,
        sign_filter,
        alpha: cli.alpha,
        epsilon: cli.epsilon,
        delta: cli.delta,
        damping: cli.damping,
        lambda: cli.lambda,
        update_scale: cli.update_scale,
        clip: cli.clip,
        embedding_dim: cli.embedding_dim,
        max_epochs: cli.max_epochs,
        grad_tol: 1e-8,
        cg_tol: cli.cg_tol,
        cg_max_iter: cli.cg_max_iter,
        khop_k: cli.khop_k,
        region_override: cli.region.clone(),
        weights_override: cli.weights.clone(),
        no_noise: cli.no_noise,
        seed,
        test_fraction: cli.test_fraction,
        nonmembers: cli.nonmembers,
        timing: !cli.no_timing,
        out_dir: Some(cli.out.clone()),
    })
}

/// Recursive JSON merge: values in `overlay` win, objects merge by key.
fn merge(base: &mut serde_json::Value, overlay: serde_json::Value) {
    match (base, overlay) {
        (serde_json::Value::Object(b), serde_json::Value::Object(o)) => {
            for (k, v) in o {
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

fn apply_config_file(cfg: RunConfig, path: &PathBuf) -> Result<RunConfig, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let overlay: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| format!("bad config JSON: {e}"))?;
    let mut merged = serde_json::to_value(&cfg).map_err(|e| e.to_string())?;
    merge(&mut merged, overlay);
    serde_json::from_value(merged).map_err(|e| format!("bad config: {e}"))
}

fn parse_seed_range(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("--seeds expects `a..b`, got `{s}`"))?;
    let lo: u64 = a.trim().parse().map_err(|_| format!("bad seed `{a}`"))?;
    let hi: u64 = b.trim().parse().map_err(|_| format!("bad seed `{b}`"))?;
    if hi < lo {
        return Err(format!("empty seed range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

fn fail(msg: &str) -> ExitCode {
    eprintln!("{}", serde_json::json!({ "error": msg }));
    ExitCode::FAILURE
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut cfg = match base_config(&cli) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    if let Some(path) = &cli.config {
        cfg = match apply_config_file(cfg, path) {
            Ok(c) => c,
            Err(e) => return fail(&e),
        };
    }

    let seeds: Vec<u64> = match &cli.seeds {
        Some(range) => match parse_seed_range(range) {
            Ok((lo, hi)) => (lo..=hi).collect(),
            Err(e) => return fail(&e),
        },
        None => vec![cfg.seed],
    };

    for seed in seeds {
        cfg.seed = seed;
        match signed_unlearn::pipeline::run(&cfg) {
            Ok(report) => {
                if cli.print_report {
                    match serde_json::to_string_pretty(&report) {
                        Ok(s) => println!("{s}"),
                        Err(e) => return fail(&e.to_string()),
                    }
                } else {
                    println!(
                        "{} method={} scenario={} seed={} macro_f1={:.4} mi_auc={:.4} sigma={:.4e} time_s={:.3}",
                        report.dataset,
                        report.method.as_str(),
                        report.scenario,
                        report.seed,
                        report.eval.macro_f1,
                        report.eval.mi_auc,
                        report.unlearn.sigma,
                        report.eval.unlearn_time_s,
                    );
                }
            }
            Err(e) => return fail(&e.to_string()),
        }
    }
    ExitCode::SUCCESS
}
