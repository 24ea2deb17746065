//! Command-line interface: generate data, fit, evaluate, plot and run the
//! numerical checks.
//!
//! Exit status is 0 on success, 1 when a `check` runs but fails, 2 for usage
//! or input errors and 3 for numeric failures such as diverged training.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{
    check_gradients, check_lemma1, check_theorem1_suite, default_theorem1_cases, median,
    run_preservation_suite, SuiteReport, Summary,
};
use crate::datasets::{
    gen_synthetic, lift9, load_csv, minmax_scale, read_header, save_csv, Dataset, LabelColumn,
    SyntheticKind,
};
use crate::error::{Error, Result};
use crate::metrics::{
    agglomerative, ari, centroid_distance_preservation, cluster_area_preservation,
    distance_preservation_on_pairs, fmi, keys, kmeans, knn_evaluate, mann_whitney_u,
    per_class_distance_preservation, EvalReport, MannWhitney, DEFAULT_RESTARTS,
    DEFAULT_TEST_FRACTION, REPORT_SCHEMA_VERSION,
};
use crate::model::{checkpoint, embed, fit, Convergence, ModelConfig, TrainReport};
use crate::numerics::{pca, sample_pairs, Matrix, Rng, DEFAULT_PAIR_BUDGET};
use crate::plot::{render_svg, PlotOptions};

/// Environment variable capping the worker threads used for parallel work.
pub const THREADS_ENV: &str = "NEURODAVIS_THREADS";
/// Column name treated as class labels when no label column is given.
pub const DEFAULT_LABEL_COLUMN: &str = "label";

#[derive(Debug, Parser)]
#[command(name = "neurodavis", version, about = "Neural embedding of tabular data into a low-dimensional latent space")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic benchmark dataset as CSV.
    Gen(GenArgs),
    /// Train a model and write its embedding, checkpoint and training report.
    Fit(FitCmd),
    /// Score embeddings against the original data.
    Eval(EvalArgs),
    /// Render a 2D embedding as an SVG scatter plot.
    Plot(PlotArgs),
    /// Run a numerical property check.
    Check(CheckArgs),
    /// Fit over a grid of regularization weights.
    Sweep(SweepArgs),
    /// Repeated seeded fits with structure-preservation summaries.
    Suite(SuiteArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Input CSV.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Label column, by header name or zero-based index. Defaults to a
    /// column named "label" when present.
    #[arg(long)]
    pub label_column: Option<String>,
    /// The file has no header row.
    #[arg(long)]
    pub no_header: bool,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub kind: SyntheticKind,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Apply the 9D polynomial lift.
    #[arg(long)]
    pub lift9: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Latent dimension.
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Hidden widths, comma separated; "none" for no hidden layer.
    #[arg(long)]
    pub hidden: Option<String>,
    #[arg(long, default_value_t = 1e-6)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1e-4)]
    pub beta: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub lr: f64,
    #[arg(long, default_value_t = 1000)]
    pub epochs: usize,
    /// Mini-batch size; defaults to min(n, 64).
    #[arg(long)]
    pub batch: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Train for every epoch instead of stopping once the loss stalls.
    #[arg(long)]
    pub no_early_stop: bool,
    #[arg(long, default_value_t = 20)]
    pub window: usize,
    #[arg(long, default_value_t = 1e-5)]
    pub rel_tol: f64,
}

impl ModelArgs {
    pub fn to_config(&self) -> Result<ModelConfig> {
        let hidden_widths = match self.hidden.as_deref() {
            None => None,
            Some(s) => Some(parse_widths(s)?),
        };
        let config = ModelConfig {
            latent_dim: self.k,
            hidden_widths,
            alpha: self.alpha,
            beta: self.beta,
            learning_rate: self.lr,
            epochs: self.epochs,
            batch_size: self.batch,
            seed: self.seed,
            convergence: (!self.no_early_stop).then_some(Convergence {
                window: self.window,
                rel_tol: self.rel_tol,
            }),
            ..ModelConfig::default()
        };
        config.validate()?;
        Ok(config)
    }
}

fn parse_widths(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    if s.is_empty() || s.eq_ignore_ascii_case("none") {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidConfig(format!("bad hidden width {p:?}")))
        })
        .collect()
}

#[derive(Debug, Clone, Args)]
pub struct PrepArgs {
    /// Project onto this many principal components before fitting.
    #[arg(long)]
    pub pca: Option<usize>,
    /// Min-max scale every column to [0, 1] before fitting.
    #[arg(long)]
    pub minmax: bool,
}

#[derive(Debug, Args)]
pub struct FitCmd {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub prep: PrepArgs,
    /// Checkpoint path [default: <input stem>.model.json].
    #[arg(long)]
    pub model_out: Option<PathBuf>,
    /// Embedding CSV path [default: <input stem>.embedding.csv].
    #[arg(long)]
    pub embedding_out: Option<PathBuf>,
    /// Training report path [default: <input stem>.report.json].
    #[arg(long)]
    pub report_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricKind {
    Distance,
    Centroid,
    Area,
    Class,
    Knn,
    Kmeans,
    Agglomerative,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Original high-dimensional data.
    #[arg(long)]
    pub high: PathBuf,
    /// Embedding CSV; repeat for a set of runs.
    #[arg(long, required = true)]
    pub low: Vec<PathBuf>,
    /// Embeddings from another method; repeat for a set of runs. Scored on the
    /// same pair sample, then compared by a Mann–Whitney U test.
    #[arg(long)]
    pub compare: Vec<PathBuf>,
    #[arg(long)]
    pub label_column: Option<String>,
    #[arg(long)]
    pub no_header: bool,
    /// Metrics to compute [default: distance, plus centroid and area when labels allow].
    #[arg(long, value_delimiter = ',')]
    pub metrics: Vec<MetricKind>,
    /// Pair sample size for distance correlations; 0 uses every pair.
    #[arg(long, default_value_t = DEFAULT_PAIR_BUDGET)]
    pub pair_budget: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Neighbours for k-NN classification.
    #[arg(long, default_value_t = 5)]
    pub knn_k: usize,
    /// Report path; printed to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 600)]
    pub width: u32,
    #[arg(long, default_value_t = 600)]
    pub height: u32,
    #[arg(long, default_value_t = 2.0)]
    pub radius: f64,
    /// Draw every point in one color.
    #[arg(long)]
    pub no_color: bool,
    #[arg(long)]
    pub title: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Lemma1,
    Theorem1,
    Gradients,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub which: CheckKind,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Trials (lemma1) or random models (gradients).
    #[arg(long)]
    pub trials: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 1e-6, 1e-4])]
    pub alphas: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 1e-4, 1e-2])]
    pub betas: Vec<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    /// Synthetic dataset to generate (seed 0) instead of reading --in.
    #[arg(long, conflicts_with = "input")]
    pub kind: Option<SyntheticKind>,
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub label_column: Option<String>,
    #[arg(long)]
    pub lift9: bool,
    #[arg(long, default_value_t = 10)]
    pub runs: usize,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub prep: PrepArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses arguments, runs the command and returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return e.exit_code();
    }
    match execute(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::invalid(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
    // A pool may already exist when called twice in one process.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

pub fn execute(command: &Command) -> Result<i32> {
    match command {
        Command::Gen(a) => cmd_gen(a).map(|_| 0),
        Command::Fit(a) => cmd_fit(a).map(|_| 0),
        Command::Eval(a) => cmd_eval(a).map(|_| 0),
        Command::Plot(a) => cmd_plot(a).map(|_| 0),
        Command::Check(a) => cmd_check(a),
        Command::Sweep(a) => cmd_sweep(a).map(|_| 0),
        Command::Suite(a) => cmd_suite(a).map(|_| 0),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn emit(out: Option<&Path>, json: &str) -> Result<()> {
    match out {
        Some(p) => write_file(p, json),
        None => {
            print!("{json}");
            Ok(())
        }
    }
}

/// Loads a CSV, taking labels from `label_column` or, failing that, from a
/// column named "label" when the header has one.
pub fn load_input(path: &Path, label_column: Option<&str>, has_header: bool) -> Result<Dataset> {
    let label = match label_column {
        Some(s) => Some(LabelColumn::parse(s)),
        None if has_header && read_header(path)?.iter().any(|h| h == DEFAULT_LABEL_COLUMN) => {
            Some(LabelColumn::Name(DEFAULT_LABEL_COLUMN.into()))
        }
        None => None,
    };
    let ds = load_csv(path, label.as_ref(), has_header)?;
    if ds.n() == 0 {
        return Err(Error::invalid(format!("{}: no data rows", path.display())));
    }
    Ok(ds)
}

/// Like `load_input`, but a label column named in `label_column` is only
/// stripped when present; embeddings need not carry labels.
fn load_embedding(path: &Path, label_column: Option<&str>, has_header: bool) -> Result<Matrix> {
    let present = has_header
        && match label_column {
            Some(s) => match LabelColumn::parse(s) {
                LabelColumn::Name(n) => read_header(path)?.contains(&n),
                LabelColumn::Index(_) => false,
            },
            None => false,
        };
    let label = if present { label_column } else { None };
    Ok(load_input(path, label, has_header)?.x)
}

pub fn cmd_gen(a: &GenArgs) -> Result<()> {
    let mut ds = gen_synthetic(a.kind, &mut Rng::new(a.seed));
    if a.lift9 {
        ds = lift9(&ds)?;
    }
    save_csv(&ds, &a.out)
}

fn sibling(input: &Path, suffix: &str) -> PathBuf {
    let stem = input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "data".into());
    input.with_file_name(format!("{stem}.{suffix}"))
}

fn preprocess(ds: &Dataset, prep: &PrepArgs) -> Result<Dataset> {
    let mut ds = ds.clone();
    if prep.minmax {
        ds = minmax_scale(&ds);
    }
    if let Some(m) = prep.pca {
        ds.x = pca(&ds.x, m)?.projected;
        ds.feature_names = Some((0..m).map(|j| format!("pc{j}")).collect());
    }
    Ok(ds)
}

#[derive(Serialize)]
struct FitReport<'a> {
    schema_version: u32,
    dataset: &'a str,
    n: usize,
    d: usize,
    status: &'static str,
    error: Option<String>,
    config: ModelConfig,
    config_hash: String,
    preprocessing: Preprocessing,
    train: TrainReport,
}

#[derive(Serialize)]
struct Preprocessing {
    pca: Option<usize>,
    minmax: bool,
}

fn embedding_dataset(name: &str, y: Matrix, labels: Option<Vec<usize>>) -> Dataset {
    let k = y.cols();
    Dataset {
        name: name.to_string(),
        x: y,
        labels,
        feature_names: Some((0..k).map(|j| format!("y{j}")).collect()),
    }
}

pub fn cmd_fit(a: &FitCmd) -> Result<()> {
    let config = a.model.to_config()?;
    let raw = load_input(&a.input.input, a.input.label_column.as_deref(), !a.input.no_header)?;
    let ds = preprocess(&raw, &a.prep)?;
    let resolved = config.resolved(ds.n(), ds.d());
    let report_path = a.report_out.clone().unwrap_or_else(|| sibling(&a.input.input, "report.json"));
    let mut report = FitReport {
        schema_version: REPORT_SCHEMA_VERSION,
        dataset: &ds.name,
        n: ds.n(),
        d: ds.d(),
        status: "ok",
        error: None,
        config_hash: resolved.hash(),
        config: resolved,
        preprocessing: Preprocessing { pca: a.prep.pca, minmax: a.prep.minmax },
        train: TrainReport::default(),
    };
    match fit(&ds.x, &config) {
        Ok((model, train)) => {
            report.train = train;
            let emb = embedding_dataset(&ds.name, embed(&model), ds.labels.clone());
            let emb_path = a.embedding_out.clone().unwrap_or_else(|| sibling(&a.input.input, "embedding.csv"));
            save_csv(&emb, &emb_path)?;
            let model_path = a.model_out.clone().unwrap_or_else(|| sibling(&a.input.input, "model.json"));
            checkpoint::save(&model, &model_path)?;
            write_file(&report_path, &to_json(&report)?)?;
            eprintln!(
                "fit {}: {} epochs, loss {:.6e} -> {:.6e}",
                ds.name,
                report.train.epochs_run,
                report.train.initial_loss.total,
                report.train.final_loss().total
            );
            Ok(())
        }
        Err(Error::Diverged { epoch, report: partial }) => {
            report.status = "diverged";
            report.error = Some(format!("training diverged at epoch {epoch}"));
            report.train = (*partial).clone();
            write_file(&report_path, &to_json(&report)?)?;
            Err(Error::Diverged { epoch, report: partial })
        }
        Err(e) => Err(e),
    }
}

#[derive(Debug, Serialize)]
pub struct EvalOutput {
    pub schema_version: u32,
    pub high: String,
    pub pairs: usize,
    pub runs: Vec<EvalReport>,
    pub compare_runs: Vec<EvalReport>,
    pub summary: BTreeMap<String, Summary>,
    pub compare_summary: BTreeMap<String, Summary>,
    /// U test on the distance ρ of `runs` versus `compare_runs`.
    pub mann_whitney: Option<MannWhitney>,
}

fn summarize(runs: &[EvalReport]) -> BTreeMap<String, Summary> {
    let mut all: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for r in runs {
        for (k, &v) in &r.metrics {
            all.entry(k.clone()).or_default().push(v);
        }
    }
    all.into_iter()
        .map(|(k, v)| {
            let s = Summary {
                median: median(&v),
                min: v.iter().copied().fold(f64::INFINITY, f64::min),
                max: v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            };
            (k, s)
        })
        .collect()
}

fn default_metrics(ds: &Dataset) -> Vec<MetricKind> {
    let mut m = vec![MetricKind::Distance];
    if ds.labels.is_some() && ds.n_classes() >= 3 {
        m.push(MetricKind::Centroid);
        if ds.d() == 2 {
            m.push(MetricKind::Area);
        }
    }
    m
}

struct EvalContext<'a> {
    high: &'a Dataset,
    pairs: &'a [(usize, usize)],
    metrics: &'a [MetricKind],
    args: &'a EvalArgs,
}

impl EvalContext<'_> {
    fn labels(&self, what: &str) -> Result<&[usize]> {
        self.high
            .labels
            .as_deref()
            .ok_or_else(|| Error::invalid(format!("metric {what} needs labels; pass --label-column")))
    }

    fn score(&self, path: &Path, run: usize) -> Result<EvalReport> {
        let low = load_embedding(path, Some(self.args.label_column.as_deref().unwrap_or(DEFAULT_LABEL_COLUMN)), !self.args.no_header)?;
        let high = &self.high.x;
        if low.rows() != high.rows() {
            return Err(Error::invalid(format!(
                "{} has {} rows but the original data has {}",
                path.display(),
                low.rows(),
                high.rows()
            )));
        }
        let seed = self.args.seed.wrapping_add(run as u64);
        let mut r = EvalReport::new(path.display().to_string(), seed, None);
        for m in self.metrics {
            match m {
                MetricKind::Distance => {
                    r.insert(keys::DISTANCE_RHO, distance_preservation_on_pairs(high, &low, self.pairs)?)?;
                }
                MetricKind::Centroid => {
                    r.insert(keys::CENTROID_RHO, centroid_distance_preservation(high, &low, self.labels("centroid")?)?)?;
                }
                MetricKind::Area => {
                    r.insert(keys::AREA_R, cluster_area_preservation(high, &low, self.labels("area")?)?)?;
                }
                MetricKind::Class => {
                    let budget = (self.args.pair_budget > 0).then_some(self.args.pair_budget);
                    let mut rng = Rng::stream(seed, 2);
                    let per = per_class_distance_preservation(high, &low, self.labels("class")?, budget, &mut rng)?;
                    for (c, v) in per.into_iter().enumerate() {
                        r.insert(format!("{}{c}", keys::CLASS_RHO_PREFIX), v)?;
                    }
                }
                MetricKind::Knn => {
                    let s = knn_evaluate(&low, self.labels("knn")?, self.args.knn_k, DEFAULT_TEST_FRACTION, &mut Rng::stream(seed, 3))?;
                    r.insert(keys::KNN_ACCURACY, s.accuracy)?;
                    r.insert(keys::KNN_F1, s.f1_macro)?;
                }
                MetricKind::Kmeans => {
                    let labels = self.labels("kmeans")?;
                    let k = self.high.n_classes();
                    let km = kmeans(&low, k, DEFAULT_RESTARTS, &mut Rng::stream(seed, 4))?;
                    r.insert(keys::KMEANS_ARI, ari(labels, &km.labels)?)?;
                    r.insert(keys::KMEANS_FMI, fmi(labels, &km.labels)?)?;
                }
                MetricKind::Agglomerative => {
                    let labels = self.labels("agglomerative")?;
                    let pred = agglomerative(&low, self.high.n_classes())?;
                    r.insert(keys::AGGLO_ARI, ari(labels, &pred)?)?;
                    r.insert(keys::AGGLO_FMI, fmi(labels, &pred)?)?;
                }
            }
        }
        Ok(r)
    }
}

pub fn cmd_eval(a: &EvalArgs) -> Result<EvalOutput> {
    let high = load_input(&a.high, a.label_column.as_deref(), !a.no_header)?;
    let metrics = if a.metrics.is_empty() { default_metrics(&high) } else { a.metrics.clone() };
    let budget = (a.pair_budget > 0).then_some(a.pair_budget);
    let pairs = sample_pairs(high.n(), budget, &mut Rng::stream(a.seed, 2))?;
    let ctx = EvalContext { high: &high, pairs: &pairs, metrics: &metrics, args: a };
    let runs = a.low.iter().enumerate().map(|(i, p)| ctx.score(p, i)).collect::<Result<Vec<_>>>()?;
    let compare_runs = a.compare.iter().enumerate().map(|(i, p)| ctx.score(p, i)).collect::<Result<Vec<_>>>()?;
    let mann_whitney = if compare_runs.is_empty() || !metrics.contains(&MetricKind::Distance) {
        None
    } else {
        let rho = |rs: &[EvalReport]| rs.iter().filter_map(|r| r.get(keys::DISTANCE_RHO)).collect::<Vec<_>>();
        Some(mann_whitney_u(&rho(&runs), &rho(&compare_runs))?)
    };
    let out = EvalOutput {
        schema_version: REPORT_SCHEMA_VERSION,
        high: a.high.display().to_string(),
        pairs: pairs.len(),
        summary: summarize(&runs),
        compare_summary: summarize(&compare_runs),
        runs,
        compare_runs,
        mann_whitney,
    };
    emit(a.out.as_deref(), &to_json(&out)?)?;
    Ok(out)
}

pub fn cmd_plot(a: &PlotArgs) -> Result<()> {
    let ds = load_input(&a.input.input, a.input.label_column.as_deref(), !a.input.no_header)?;
    let opts = PlotOptions {
        width: a.width,
        height: a.height,
        radius: a.radius,
        color_by_label: !a.no_color,
        title: a.title.clone(),
    };
    let svg = render_svg(&ds.x, ds.labels.as_deref(), &opts)?;
    write_file(&a.out, &svg)
}

pub fn cmd_check(a: &CheckArgs) -> Result<i32> {
    let pass = match a.which {
        CheckKind::Lemma1 => {
            let trials = a.trials.unwrap_or(1000);
            let r = check_lemma1(trials, 8, &mut Rng::new(a.seed))?;
            let ok = r.max_norm <= 1.0 + 1e-9;
            println!("lemma1: {trials} trials, max ||I - eta W W^T||_2 = {:.15} (bound 1 + 1e-9)", r.max_norm);
            ok
        }
        CheckKind::Theorem1 => {
            let cases: Vec<_> = default_theorem1_cases()
                .into_iter()
                .map(|mut c| {
                    c.seed = c.seed.wrapping_add(a.seed);
                    c
                })
                .collect();
            let r = check_theorem1_suite(&cases)?;
            println!(
                "theorem1: {} traces, {} non-monotone, max relative gap increase {:.3e}, max ||W||_F {:.15}",
                r.cases, r.failures, r.max_relative_increase, r.max_frobenius
            );
            r.failures == 0
        }
        CheckKind::Gradients => {
            let models = a.trials.unwrap_or(50);
            let r = check_gradients(models, &mut Rng::new(a.seed))?;
            println!(
                "gradients: {} models, {} parameters, max relative error {:.3e} (bound 1e-4)",
                r.models, r.parameters_checked, r.max_relative_error
            );
            r.max_relative_error < 1e-4
        }
    };
    println!("{}", if pass { "PASS" } else { "FAIL" });
    Ok(if pass { 0 } else { 1 })
}

#[derive(Serialize)]
struct SweepPoint {
    alpha: f64,
    beta: f64,
    final_loss: f64,
    reconstruction: f64,
    distance_spearman: f64,
}

pub fn cmd_sweep(a: &SweepArgs) -> Result<()> {
    let base = a.model.to_config()?;
    let ds = load_input(&a.input.input, a.input.label_column.as_deref(), !a.input.no_header)?;
    let pairs = sample_pairs(ds.n(), Some(DEFAULT_PAIR_BUDGET), &mut Rng::stream(base.seed, 2))?;
    let mut points = Vec::new();
    for &alpha in &a.alphas {
        for &beta in &a.betas {
            let cfg = ModelConfig { alpha, beta, ..base.clone() };
            cfg.validate()?;
            let (model, train) = fit(&ds.x, &cfg)?;
            let rho = distance_preservation_on_pairs(&ds.x, &embed(&model), &pairs)?;
            let fl = train.final_loss();
            eprintln!("alpha {alpha:e} beta {beta:e}: loss {:.6e}, distance rho {rho:.4}", fl.total);
            points.push(SweepPoint {
                alpha,
                beta,
                final_loss: fl.total,
                reconstruction: fl.reconstruction,
                distance_spearman: rho,
            });
        }
    }
    emit(a.out.as_deref(), &to_json(&points)?)
}

pub fn cmd_suite(a: &SuiteArgs) -> Result<SuiteReport> {
    let config = a.model.to_config()?;
    let mut ds = match (&a.kind, &a.input) {
        (Some(k), _) => gen_synthetic(*k, &mut Rng::new(0)),
        (None, Some(p)) => load_input(p, a.label_column.as_deref(), true)?,
        (None, None) => return Err(Error::invalid("suite needs --kind or --in")),
    };
    if a.lift9 {
        ds = lift9(&ds)?;
    }
    let ds = preprocess(&ds, &a.prep)?;
    if a.runs == 0 {
        return Err(Error::invalid("--runs must be at least 1"));
    }
    let report = run_preservation_suite(&ds, &config, a.runs, config.seed)?;
    for (k, s) in &report.summary {
        eprintln!("{k}: median {:.4} (min {:.4}, max {:.4})", s.median, s.min, s.max);
    }
    emit(a.out.as_deref(), &to_json(&report)?)?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn widths() {
        assert_eq!(parse_widths("64,64").unwrap(), vec![64, 64]);
        assert_eq!(parse_widths("none").unwrap(), Vec::<usize>::new());
        assert!(parse_widths("3,x").is_err());
    }

    #[test]
    fn parses_fit_flags() {
        let c = RunConfig::try_parse_from([
            "neurodavis", "fit", "--in", "a.csv", "--hidden", "8,4", "--alpha", "1e-3", "--no-early-stop",
        ])
        .unwrap();
        let Command::Fit(f) = c.command else { panic!() };
        let cfg = f.model.to_config().unwrap();
        assert_eq!(cfg.hidden_widths, Some(vec![8, 4]));
        assert_eq!(cfg.alpha, 1e-3);
        assert!(cfg.convergence.is_none());
    }

    #[test]
    fn bad_kind_is_usage_error() {
        assert_eq!(run(["neurodavis", "gen", "--kind", "blob", "--out", "/dev/null"]), 2);
    }

    #[test]
    fn metrics_list() {
        let c = RunConfig::try_parse_from([
            "neurodavis", "eval", "--high", "h.csv", "--low", "a.csv", "--low", "b.csv", "--metrics", "distance,centroid,area",
        ])
        .unwrap();
        let Command::Eval(e) = c.command else { panic!() };
        assert_eq!(e.low.len(), 2);
        assert_eq!(e.metrics, vec![MetricKind::Distance, MetricKind::Centroid, MetricKind::Area]);
    }
}
