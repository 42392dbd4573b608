//! End-to-end experiment runs: dataset ingestion, train/test splitting,
//! deletion sampling, method execution against the retraining oracle, and
//! report emission (JSON plus a CSV row per run).

use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{self, EvalReport};
use crate::graph::{
    load_edge_list, DeletionRequest, Edge, EdgeListFormat, Scenario, Sign, SignedGraph,
};
use crate::model::{self, EdgeBatch, EncodeConfig, InitMode, PredictorState, TrainConfig};
use crate::region::RegionMode;
use crate::rng;
use crate::synthetic::{synthetic_graph, SyntheticConfig};
use crate::unlearn::{self, PrivacyBudget, UnlearnConfig, UnlearnResult};
use crate::weights::{EdgeWeights, WeightMode};

/// Exact column order of `results.csv`.
pub const CSV_HEADER: &str =
    "dataset,method,scenario,ratio,seed,macro_f1,mi_auc,time_s,epsilon,delta,alpha";

/// Unlearning method selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Triadic region, sociological weights, calibrated noise.
    Csgu,
    /// Uniform weights in place of the sociological ones.
    WoSiq,
    /// Fixed k-hop region in place of the triadic one.
    WoTin,
    /// No noise injection (no privacy guarantee).
    WoNoise,
    /// The retraining oracle itself.
    Retrain,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Csgu => "csgu",
            Method::WoSiq => "wo_siq",
            Method::WoTin => "wo_tin",
            Method::WoNoise => "wo_noise",
            Method::Retrain => "retrain",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "csgu" => Ok(Method::Csgu),
            "wo_siq" => Ok(Method::WoSiq),
            "wo_tin" => Ok(Method::WoTin),
            "wo_noise" => Ok(Method::WoNoise),
            "retrain" => Ok(Method::Retrain),
            other => Err(Error::InvalidParameter(format!("unknown method `{other}`"))),
        }
    }
}

/// Restriction of the deletion pool by edge sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignFilter {
    Pos,
    Neg,
    Mixed,
}

/// Where the graph comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DatasetSpec {
    Synthetic(SyntheticConfig),
    File {
        path: PathBuf,
        format: EdgeListFormat,
    },
}

impl Default for DatasetSpec {
    fn default() -> Self {
        DatasetSpec::Synthetic(SyntheticConfig::default())
    }
}

/// Full configuration of one run; everything an output byte can depend on.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub dataset: DatasetSpec,
    /// Label used in reports and CSV rows.
    pub dataset_name: String,
    pub scenario: Scenario,
    /// Fraction of the deletion pool to remove.
    pub ratio: f64,
    pub method: Method,
    pub sign_filter: Option<SignFilter>,

    /// Balance/status blend for sociological weights.
    pub alpha: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub damping: f64,
    pub lambda: f64,
    pub update_scale: f64,
    pub clip: f64,
    pub embedding_dim: usize,
    pub max_epochs: usize,
    pub grad_tol: f64,
    pub cg_tol: f64,
    pub cg_max_iter: usize,
    /// Hop count for the k-hop region.
    pub khop_k: usize,

    /// Overrides on top of the method's defaults.
    pub region_override: Option<String>,
    pub weights_override: Option<String>,
    pub no_noise: bool,

    pub seed: u64,
    pub test_fraction: f64,
    pub nonmembers: usize,
    /// When false, every reported time is written as zero so the outputs
    /// are byte-identical across repeated runs.
    pub timing: bool,
    pub out_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            dataset: DatasetSpec::default(),
            dataset_name: "synthetic".into(),
            scenario: Scenario::Edge,
            ratio: 0.025,
            method: Method::Csgu,
            sign_filter: None,
            alpha: 0.5,
            epsilon: 1.0,
            delta: 1e-5,
            damping: 0.1,
            lambda: 1e-4,
            update_scale: 1.0,
            clip: 1.0,
            embedding_dim: 20,
            max_epochs: 500,
            grad_tol: 1e-8,
            cg_tol: 1e-6,
            cg_max_iter: 20,
            khop_k: 2,
            region_override: None,
            weights_override: None,
            no_noise: false,
            seed: 7,
            test_fraction: 0.2,
            nonmembers: 200,
            timing: true,
            out_dir: None,
        }
    }
}

impl RunConfig {
    pub fn region_mode(&self) -> Result<RegionMode> {
        if let Some(name) = &self.region_override {
            return match name.as_str() {
                "tin" => Ok(RegionMode::Triadic { max_iter: None }),
                "khop" => Ok(RegionMode::KHop { k: self.khop_k }),
                other => Err(Error::InvalidParameter(format!("unknown region `{other}`"))),
            };
        }
        Ok(match self.method {
            Method::WoTin => RegionMode::KHop { k: self.khop_k },
            _ => RegionMode::Triadic { max_iter: None },
        })
    }

    pub fn weight_mode(&self) -> Result<WeightMode> {
        if let Some(name) = &self.weights_override {
            return match name.as_str() {
                "siq" => Ok(WeightMode::Sociological { alpha: self.alpha }),
                "uniform" => Ok(WeightMode::Uniform),
                "degree" => Ok(WeightMode::Degree),
                other => Err(Error::InvalidParameter(format!(
                    "unknown weights `{other}`"
                ))),
            };
        }
        Ok(match self.method {
            Method::WoSiq | Method::Retrain => WeightMode::Uniform,
            _ => WeightMode::Sociological { alpha: self.alpha },
        })
    }

    pub fn noise(&self) -> bool {
        if self.no_noise {
            return false;
        }
        !matches!(self.method, Method::WoNoise | Method::Retrain)
    }

    fn validate(&self) -> Result<()> {
        if !(self.ratio > 0.0 && self.ratio <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "ratio {} outside (0, 1]",
                self.ratio
            )));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::InvalidParameter(format!(
                "alpha {} outside [0, 1]",
                self.alpha
            )));
        }
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return Err(Error::InvalidParameter(
                "test_fraction outside (0, 1)".into(),
            ));
        }
        Ok(())
    }

    fn unlearn_config(&self) -> Result<UnlearnConfig> {
        Ok(UnlearnConfig {
            epsilon: self.epsilon,
            delta: self.delta,
            region: self.region_mode()?,
            weights: self.weight_mode()?,
            damping: self.damping,
            update_scale: self.update_scale,
            noise: self.noise(),
            cg_tol: self.cg_tol,
            cg_max_iter: self.cg_max_iter,
            seed: self.seed,
        })
    }

    fn train_config(&self) -> TrainConfig {
        TrainConfig {
            lambda: self.lambda,
            max_epochs: self.max_epochs,
            grad_tol: self.grad_tol,
            init: InitMode::Zero,
        }
    }
}

/// Seeded deletion sampling: `floor(ratio * pool)` items, at least one,
/// drawn without replacement. The sign filter restricts the edge pool.
pub fn sample_deletion(
    g: &SignedGraph,
    scenario: Scenario,
    ratio: f64,
    sign_filter: Option<SignFilter>,
    seed: u64,
) -> Result<DeletionRequest> {
    if !(ratio > 0.0 && ratio <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "ratio {ratio} outside (0, 1]"
        )));
    }
    let mut rng = rng::stream(seed, "deletion-sampling");
    match scenario {
        Scenario::Edge => {
            let mut pool: Vec<Edge> = g
                .edges()
                .filter(|(_, s)| match sign_filter {
                    None | Some(SignFilter::Mixed) => true,
                    Some(SignFilter::Pos) => *s == Sign::Positive,
                    Some(SignFilter::Neg) => *s == Sign::Negative,
                })
                .map(|(e, _)| e)
                .collect();
            if pool.is_empty() {
                return Err(Error::PoolTooSmall {
                    requested: 1,
                    available: 0,
                });
            }
            let count = ((ratio * pool.len() as f64).floor() as usize).max(1);
            pool.shuffle(&mut rng);
            Ok(DeletionRequest::Edges(
                pool.into_iter().take(count).collect(),
            ))
        }
        Scenario::Node | Scenario::Feature => {
            if sign_filter.is_some() && scenario == Scenario::Node {
                return Err(Error::InvalidParameter(
                    "sign filter applies to edge deletion only".into(),
                ));
            }
            let mut pool: Vec<u32> = g.nodes().collect();
            if pool.is_empty() {
                return Err(Error::PoolTooSmall {
                    requested: 1,
                    available: 0,
                });
            }
            let count = ((ratio * pool.len() as f64).floor() as usize).max(1);
            pool.shuffle(&mut rng);
            let chosen: Vec<u32> = pool.into_iter().take(count).collect();
            if scenario == Scenario::Node {
                Ok(DeletionRequest::Nodes(chosen.into_iter().collect()))
            } else {
                use rand::Rng;
                let d = g.feature_dim();
                let mut map = std::collections::BTreeMap::new();
                for v in chosen {
                    let mut dims = BTreeSet::new();
                    while dims.is_empty() {
                        for i in 0..d {
                            if rng.random::<f64>() < 0.5 {
                                dims.insert(i);
                            }
                        }
                    }
                    map.insert(v, dims);
                }
                Ok(DeletionRequest::Features(map))
            }
        }
    }
}

/// Stratified-by-sign split of the edge set into train and test.
pub fn split_edges(
    g: &SignedGraph,
    test_fraction: f64,
    seed: u64,
) -> (BTreeSet<Edge>, BTreeSet<Edge>) {
    let mut rng = rng::stream(seed, "train-test-split");
    let mut train = BTreeSet::new();
    let mut test = BTreeSet::new();
    for sign in [Sign::Positive, Sign::Negative] {
        let mut pool: Vec<Edge> = g
            .edges()
            .filter(|(_, s)| *s == sign)
            .map(|(e, _)| e)
            .collect();
        if pool.is_empty() {
            continue;
        }
        pool.shuffle(&mut rng);
        let mut test_count = (test_fraction * pool.len() as f64).floor() as usize;
        if test_count == 0 && pool.len() >= 2 {
            test_count = 1;
        }
        for (i, e) in pool.into_iter().enumerate() {
            if i < test_count {
                test.insert(e);
            } else {
                train.insert(e);
            }
        }
    }
    (train, test)
}

/// Everything one run produces.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub dataset: String,
    pub method: Method,
    pub scenario: Scenario,
    pub ratio: f64,
    pub seed: u64,
    pub eval: EvalReport,
    pub unlearn: UnlearnResult,
    pub train_time_s: f64,
    pub budget: PrivacyBudget,
    pub train_edges: usize,
    pub test_edges: usize,
    pub config: RunConfig,
}

impl RunReport {
    /// The row appended to `results.csv`, without a trailing newline.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{:.6},{:.6},{:.6},{},{},{}",
            self.dataset,
            self.method.as_str(),
            self.scenario,
            self.ratio,
            self.seed,
            self.eval.macro_f1,
            self.eval.mi_auc,
            self.eval.unlearn_time_s,
            self.config.epsilon,
            self.config.delta,
            self.config.alpha,
        )
    }
}

fn load_dataset(cfg: &RunConfig) -> Result<SignedGraph> {
    match &cfg.dataset {
        DatasetSpec::Synthetic(s) => Ok(synthetic_graph(s)),
        DatasetSpec::File { path, format } => Ok(load_edge_list(path, *format, cfg.seed)?.graph),
    }
}

/// Executes one configured run end to end and writes the report files
/// when an output directory is set.
pub fn run(cfg: &RunConfig) -> Result<RunReport> {
    cfg.validate()?;
    let g_full = load_dataset(cfg)?;
    let (train_edges, test_edges) = split_edges(&g_full, cfg.test_fraction, cfg.seed);
    if train_edges.is_empty() || test_edges.is_empty() {
        return Err(Error::InvalidParameter(
            "split produced an empty side".into(),
        ));
    }
    let g_train = g_full.restricted_to_edges(&train_edges);

    let request = sample_deletion(&g_train, cfg.scenario, cfg.ratio, cfg.sign_filter, cfg.seed)?;
    let (_, deleted) = g_train.apply_deletion(&request)?;
    if deleted.is_empty() {
        return Err(Error::InvalidRequest(
            "deletion request touches no training edges".into(),
        ));
    }

    let unlearn_cfg = cfg.unlearn_config()?;

    // Region and weights; the setup cost counts toward unlearning time.
    let setup_start = Instant::now();
    let (region, edge_weights) = match cfg.method {
        Method::Retrain => (None, EdgeWeights::uniform()),
        _ => {
            let (r, w) = unlearn::region_and_weights(
                &g_train,
                &deleted,
                unlearn_cfg.region,
                unlearn_cfg.weights,
            )?;
            (Some(r), w)
        }
    };
    let setup_time = setup_start.elapsed().as_secs_f64();

    let encode_cfg = EncodeConfig {
        dim: cfg.embedding_dim,
        clip: cfg.clip,
        seed: cfg.seed,
    };
    let emb = model::encode(&g_train, &encode_cfg);
    let full_batch = EdgeBatch::full(&g_train, &edge_weights, &emb)?;
    let train_cfg = cfg.train_config();

    let t = Instant::now();
    let state = model::train(&full_batch, cfg.embedding_dim, &train_cfg)?;
    let train_time = t.elapsed().as_secs_f64();

    let remaining_batch = full_batch.without(&deleted);
    let t = Instant::now();
    let retrained = model::train(&remaining_batch, cfg.embedding_dim, &train_cfg)?;
    let retrain_time = t.elapsed().as_secs_f64();

    let (unlearned, unlearn_result, unlearn_time) = match cfg.method {
        Method::Retrain => {
            let result = UnlearnResult {
                theta_tilde: retrained.theta.clone(),
                delta_theta: vec![0.0; cfg.embedding_dim],
                cg_residual: 0.0,
                cg_iterations: 0,
                cg_converged: true,
                sensitivity: 0.0,
                sensitivity_cap: 0.0,
                sigma: 0.0,
                deleted_edges: deleted.len(),
                region_edges: 0,
                region_iterations: 0,
                region_truncated: false,
                weight_summary: None,
                wall_time_s: retrain_time,
            };
            (retrained.clone(), result, retrain_time)
        }
        _ => {
            let t = Instant::now();
            let update = unlearn::unlearn_update(&state, &full_batch, &deleted, &unlearn_cfg)?;
            let update_time = t.elapsed().as_secs_f64();
            let wall = setup_time + update_time;
            let unlearned = PredictorState {
                theta: update.theta_tilde.clone(),
                lambda: cfg.lambda,
            };
            let region_ref = region.as_ref();
            let result = UnlearnResult {
                theta_tilde: update.theta_tilde,
                delta_theta: update.delta_theta,
                cg_residual: update.cg_residual,
                cg_iterations: update.cg_iterations,
                cg_converged: update.cg_converged,
                sensitivity: update.sensitivity,
                sensitivity_cap: update.sensitivity_cap,
                sigma: update.sigma,
                deleted_edges: deleted.len(),
                region_edges: region_ref.map_or(0, |r| r.len()),
                region_iterations: region_ref.map_or(0, |r| r.iterations),
                region_truncated: region_ref.is_some_and(|r| r.truncated),
                weight_summary: edge_weights.summary(),
                wall_time_s: wall,
            };
            (unlearned, result, wall)
        }
    };

    let zero_if_untimed = |x: f64| if cfg.timing { x } else { 0.0 };
    let eval = eval::evaluate(
        &g_full,
        &emb,
        &state,
        &unlearned,
        &retrained,
        &test_edges,
        &deleted,
        cfg.nonmembers,
        cfg.seed,
        zero_if_untimed(unlearn_time),
        zero_if_untimed(retrain_time),
    )?;

    let mut budget = PrivacyBudget::calibrate(cfg.epsilon, cfg.delta, unlearn_result.sensitivity)?;
    if cfg.noise() {
        budget.record_spend(cfg.epsilon, cfg.delta);
    }

    let mut unlearn_result = unlearn_result;
    if !cfg.timing {
        unlearn_result.wall_time_s = 0.0;
    }

    let report = RunReport {
        dataset: cfg.dataset_name.clone(),
        method: cfg.method,
        scenario: cfg.scenario,
        ratio: cfg.ratio,
        seed: cfg.seed,
        eval,
        unlearn: unlearn_result,
        train_time_s: zero_if_untimed(train_time),
        budget,
        train_edges: train_edges.len(),
        test_edges: test_edges.len(),
        config: cfg.clone(),
    };

    if let Some(dir) = &cfg.out_dir {
        write_outputs(dir, &report)?;
    }
    Ok(report)
}

/// Writes `report.json` (overwritten) and appends one row to
/// `results.csv`, creating it with the header when missing. The row is
/// written with a single call so concurrent appends stay line-atomic.
pub fn write_outputs(dir: &std::path::Path, report: &RunReport) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let json_path = dir.join("report.json");
    let io_err = |path: PathBuf| move |source| Error::Io { path, source };
    std::fs::write(&json_path, serde_json::to_string_pretty(report)?)
        .map_err(io_err(json_path.clone()))?;

    let csv_path = dir.join("results.csv");
    let fresh = !csv_path.exists();
    let mut file = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(&csv_path)
        .map_err(io_err(csv_path.clone()))?;
    let mut payload = String::new();
    if fresh {
        payload.push_str(CSV_HEADER);
        payload.push('\n');
    }
    payload.push_str(&report.csv_row());
    payload.push('\n');
    file.write_all(payload.as_bytes())
        .map_err(io_err(csv_path))?;
    Ok(())
}
