//! The `sdre` command line.
//!
//! Exit codes: 0 success, 2 configuration or usage error, 3 data error,
//! 4 internal error. `SDRE_SEED` overrides the configured base seed.

pub mod files;
pub mod manifest;
pub mod svg;

use crate::dataset::Dataset;
use crate::dgp::{evaluate, flip_noise, Registry};
use crate::error::{Error, Result};
use crate::geometry::HyperBox;
use crate::metrics::{coverage_density, restricted_dims, trajectory_points_auc, TrajectoryPoint};
use crate::pipeline::{discover, mse_experiment, run_benchmark, ExperimentConfig, Method, Metric, MseConfig};
use crate::prim::{read_boxes, write_boxes};
use crate::sampling::Sampler;
use clap::{Parser, Subcommand};
use manifest::RunManifest;
use std::ffi::OsString;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub const SEED_ENV: &str = "SDRE_SEED";

#[derive(Debug, Parser)]
#[command(name = "sdre", version, about = "Scenario discovery with PRIM and random-forest rule extraction")]
pub struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample inputs from a DGP and write a labelled dataset CSV.
    Generate {
        #[arg(long)]
        dgp: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "lhs")]
        sampler: Sampler,
        /// Seed, or the index offset for the Halton sampler.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Share of labels to flip.
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run one discovery method on a dataset.
    Discover {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        method: Method,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Take the input box from this DGP.
        #[arg(long)]
        dgp: Option<String>,
        /// Separate validation dataset (default: the data itself).
        #[arg(long)]
        validation: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Coverage, density and interpretability of the boxes in a box file.
    Evaluate {
        #[arg(long)]
        boxes: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        dgp: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Error of the in-box mean with and without a metamodel.
    Mse {
        #[arg(long)]
        dgp: String,
        /// Box as `1:l1:u1 2:l2:u2 ...`.
        #[arg(long = "box")]
        box_b: HyperBox,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Replicated comparison of methods over DGPs and sample sizes.
    Benchmark {
        #[arg(long, required_unless_present = "from_manifest", conflicts_with = "from_manifest")]
        config: Option<PathBuf>,
        /// Re-run the configuration recorded in a manifest.
        #[arg(long)]
        from_manifest: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Draw trajectory CSVs as a density-versus-coverage SVG.
    Plot {
        #[arg(long, required = true, num_args = 1..)]
        trajectory: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::UnknownDgp(_) | Error::InvalidBox(_) | Error::UnsupportedDimension(..) => 2,
        Error::Data(_)
        | Error::InvalidLabel(_)
        | Error::Shape { .. }
        | Error::Io(_)
        | Error::UndefinedCoverage
        | Error::EmptyValidation
        | Error::UndefinedMu => 3,
        Error::Simulation(_) => 4,
    }
}

/// Parse arguments, run, and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start workers: {e}");
            return 4;
        }
    };
    match pool.install(|| execute(cli.command)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// `SDRE_SEED` if set.
pub fn seed_override() -> Result<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| Error::Config(format!("{SEED_ENV}: '{v}' is not an unsigned integer"))),
        Err(_) => Ok(None),
    }
}

fn read_config_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Config(format!("config {}: {e}", path.display())))
}

fn load_experiment(path: Option<&Path>) -> Result<ExperimentConfig> {
    let mut cfg = match path {
        Some(p) => ExperimentConfig::from_json(&read_config_text(p)?)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = seed_override()? {
        cfg.base_seed = s;
    }
    Ok(cfg)
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| Error::Data(format!("{}: {e}", path.display())))
}

fn execute(cmd: Command) -> Result<()> {
    let start = Instant::now();
    match cmd {
        Command::Generate { dgp, n, sampler, seed, noise, out } => cmd_generate(&dgp, n, sampler, seed, noise, &out),
        Command::Discover { data, method, config, dgp, validation, out } => {
            cmd_discover(&data, method, config.as_deref(), dgp.as_deref(), validation.as_deref(), &out, start)
        }
        Command::Evaluate { boxes, data, dgp, out } => cmd_evaluate(&boxes, &data, dgp.as_deref(), &out, start),
        Command::Mse { dgp, box_b, config, out } => cmd_mse(&dgp, &box_b, config.as_deref(), &out, start),
        Command::Benchmark { config, from_manifest, out } => {
            let cfg = match (&config, &from_manifest) {
                (_, Some(m)) => {
                    let man = RunManifest::read(m)?;
                    let mut cfg: ExperimentConfig = serde_json::from_value(man.config)
                        .map_err(|e| Error::Config(format!("manifest config: {e}")))?;
                    cfg.validate()?;
                    if let Some(s) = seed_override()? {
                        cfg.base_seed = s;
                    }
                    cfg
                }
                (c, None) => load_experiment(c.as_deref())?,
            };
            cmd_benchmark(&cfg, &out, start)
        }
        Command::Plot { trajectory, out } => cmd_plot(&trajectory, &out),
    }
}

/// Write a labelled dataset sampled from a registered DGP.
pub fn cmd_generate(dgp: &str, n: usize, sampler: Sampler, seed: u64, noise: f64, out: &Path) -> Result<()> {
    if n == 0 {
        return Err(Error::Config("n: must be at least 1".into()));
    }
    if !(0.0..=0.5).contains(&noise) {
        return Err(Error::Config(format!("noise: must lie in [0, 0.5], got {noise}")));
    }
    let g = crate::dgp::lookup(dgp)?;
    let x = sampler.sample(n, &g.spec().input_box, seed)?;
    let mut y = evaluate(g.as_ref(), &x, crate::rng::derive(seed, &[1]))?;
    if noise > 0.0 {
        y = flip_noise(&y, noise, crate::rng::derive(seed, &[2]))?;
    }
    let d = Dataset::new(x, y)?;
    let mut buf = Vec::new();
    files::write_dataset(&mut buf, &d)?;
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(out, buf)?;
    Ok(())
}

fn input_box(dgp: Option<&str>, cfg: &ExperimentConfig) -> Result<Option<HyperBox>> {
    if let Some(name) = dgp.or(cfg.dgp.as_deref()) {
        return Ok(Some(crate::dgp::lookup(name)?.spec().input_box.clone()));
    }
    cfg.box0()
}

fn trajectory_points(boxes: &[HyperBox], n_train: &[usize], d_val: &Dataset) -> Result<Vec<TrajectoryPoint>> {
    let mut out = Vec::with_capacity(boxes.len());
    for (j, b) in boxes.iter().enumerate() {
        let s = coverage_density(b, d_val)?;
        if let Some(density) = s.density {
            out.push(TrajectoryPoint { box_index: j, coverage: s.coverage, density, n_train: n_train[j], n_val: s.n_in });
        }
    }
    Ok(out)
}

/// Run one method and write `boxes.txt`, `trajectory.csv`, `trajectory.svg`,
/// `summary.json` and the manifest into `out`.
pub fn cmd_discover(
    data: &Path,
    method: Method,
    config: Option<&Path>,
    dgp: Option<&str>,
    validation: Option<&Path>,
    out: &Path,
    start: Instant,
) -> Result<()> {
    let cfg = load_experiment(config)?;
    let given = input_box(dgp, &cfg)?;
    let d = files::read_dataset(open(data)?, given.as_ref())?;
    let box0 = d.x.bounds().clone();
    let d_val = match validation {
        Some(p) => files::read_dataset(open(p)?, Some(&box0))?,
        None => d.clone(),
    };
    let disc = discover(method, &d, &d_val, &box0, &cfg, cfg.base_seed)?;
    for w in &disc.warnings {
        eprintln!("warning: {w}");
    }

    let mut boxes = disc.boxes.clone();
    let mut means = disc.val_means.clone();
    let mut n_train = disc.n_train.clone();
    let mut selected = disc.last;
    if boxes.first() != Some(&box0) {
        boxes.insert(0, box0.clone());
        means.insert(0, d_val.mean_y());
        n_train.insert(0, d.len());
        selected += 1;
    }
    let traj = trajectory_points(&boxes, &n_train, &d_val)?;
    let auc = trajectory_points_auc(&traj);

    std::fs::create_dir_all(out)?;
    write_boxes(File::create(out.join("boxes.txt"))?, &boxes, &means)?;
    files::write_trajectory(File::create(out.join("trajectory.csv"))?, &traj)?;
    let pts = traj.iter().map(|p| (p.coverage, p.density)).collect();
    std::fs::write(out.join("trajectory.svg"), svg::density_coverage(&[(method.name().to_string(), pts)]))?;
    let summary = serde_json::json!({
        "method": method.name(),
        "selected_index": selected,
        "selected_box": boxes[selected].to_string(),
        "auc": auc,
        "restricted_dims": restricted_dims(&boxes[selected], &box0),
        "warnings": disc.warnings,
    });
    std::fs::write(out.join("summary.json"), serde_json::to_string_pretty(&summary).expect("json") + "\n")?;

    let mut m = RunManifest::new("discover");
    m.args.insert("data".into(), data.display().to_string());
    m.args.insert("method".into(), method.name().into());
    if let Some(v) = validation {
        m.args.insert("validation".into(), v.display().to_string());
    }
    m.args.insert("box0".into(), box0.to_string());
    m.config = serde_json::to_value(&cfg).expect("json");
    m.seeds.insert("base_seed".into(), cfg.base_seed);
    m.add_file(out, "boxes.txt", files::BOXES_SCHEMA)?;
    m.add_file(out, "trajectory.csv", files::TRAJECTORY_SCHEMA)?;
    m.add_file(out, "trajectory.svg", "svg")?;
    m.add_file(out, "summary.json", "summary/1")?;
    m.wall_seconds = start.elapsed().as_secs_f64();
    m.write(out)
}

/// Measure each box of a box file on a dataset; writes `evaluation.csv` and `summary.json`.
pub fn cmd_evaluate(boxes: &Path, data: &Path, dgp: Option<&str>, out: &Path, start: Instant) -> Result<()> {
    let bx: Vec<HyperBox> = read_boxes(open(boxes)?)?.into_iter().map(|b| b.0).collect();
    if bx.is_empty() {
        return Err(Error::Data(format!("{}: no boxes", boxes.display())));
    }
    let given = match dgp {
        Some(n) => Some(crate::dgp::lookup(n)?.spec().input_box.clone()),
        None => None,
    };
    let d = files::read_dataset(open(data)?, given.as_ref())?;
    let box0 = given.unwrap_or_else(|| bx[0].clone());
    if box0.dim() != d.dim() {
        return Err(Error::Data(format!("boxes have {} dimensions, data {}", box0.dim(), d.dim())));
    }
    std::fs::create_dir_all(out)?;
    let mut w = csv::Writer::from_path(out.join("evaluation.csv")).map_err(|e| Error::Data(e.to_string()))?;
    w.write_record(["box_index", "coverage", "density", "n_in", "restricted_dims", "volume"])
        .map_err(|e| Error::Data(e.to_string()))?;
    let mut traj = Vec::new();
    if bx[0] != box0 {
        let s = coverage_density(&box0, &d)?;
        traj.push((s.coverage, s.density.unwrap_or(f64::NAN)));
    }
    for (j, b) in bx.iter().enumerate() {
        let s = coverage_density(b, &d)?;
        if let Some(dens) = s.density {
            traj.push((s.coverage, dens));
        }
        w.write_record([
            j.to_string(),
            s.coverage.to_string(),
            s.density.map_or(String::new(), |v| v.to_string()),
            s.n_in.to_string(),
            restricted_dims(b, &box0).to_string(),
            b.volume_fraction(&box0).to_string(),
        ])
        .map_err(|e| Error::Data(e.to_string()))?;
    }
    w.flush()?;
    drop(w);
    let auc = crate::metrics::trajectory_auc(&traj);
    println!("auc {auc}");
    let summary = serde_json::json!({ "auc": auc, "n_boxes": bx.len(), "box0": box0.to_string() });
    std::fs::write(out.join("summary.json"), serde_json::to_string_pretty(&summary).expect("json") + "\n")?;

    let mut m = RunManifest::new("evaluate");
    m.args.insert("boxes".into(), boxes.display().to_string());
    m.args.insert("data".into(), data.display().to_string());
    m.add_file(out, "evaluation.csv", files::EVALUATION_SCHEMA)?;
    m.add_file(out, "summary.json", "summary/1")?;
    m.wall_seconds = start.elapsed().as_secs_f64();
    m.write(out)
}

/// Run the MSE experiment; writes `mse.csv` and `mse_reps.csv`.
pub fn cmd_mse(dgp: &str, box_b: &HyperBox, config: Option<&Path>, out: &Path, start: Instant) -> Result<()> {
    let mut cfg: MseConfig = match config {
        Some(p) => serde_json::from_str(&read_config_text(p)?).map_err(|e| Error::Config(e.to_string()))?,
        None => MseConfig::default(),
    };
    if let Some(s) = seed_override()? {
        cfg.seed = s;
    }
    let g = crate::dgp::lookup(dgp)?;
    let report = mse_experiment(g.as_ref(), box_b, &cfg)?;
    std::fs::create_dir_all(out)?;
    files::write_mse(File::create(out.join("mse.csv"))?, &report)?;
    files::write_mse_reps(File::create(out.join("mse_reps.csv"))?, &report)?;
    println!("mu_gt {} mse_o {} mse_am {}", report.mu_gt, report.mse_o, report.mse_am);

    let mut m = RunManifest::new("mse");
    m.args.insert("dgp".into(), dgp.into());
    m.args.insert("box".into(), box_b.to_string());
    m.config = serde_json::to_value(&cfg).expect("json");
    m.seeds.insert("seed".into(), cfg.seed);
    m.add_file(out, "mse.csv", files::MSE_SCHEMA)?;
    m.add_file(out, "mse_reps.csv", files::MSE_REPS_SCHEMA)?;
    m.wall_seconds = start.elapsed().as_secs_f64();
    m.write(out)
}

/// Run the benchmark grid; writes one table per metric plus `errors.csv` and `cells.csv`.
pub fn cmd_benchmark(cfg: &ExperimentConfig, out: &Path, start: Instant) -> Result<()> {
    let res = run_benchmark(cfg, &Registry::builtin())?;
    res.write_all(out)?;
    for e in &res.errors {
        let m = e.method.map_or(String::new(), |m| format!(" {m}"));
        eprintln!("warning: {} n={} rep={}{m}: {}", e.dgp, e.size, e.rep, e.message);
    }

    let mut m = RunManifest::new("benchmark");
    m.config = serde_json::to_value(cfg).expect("json");
    m.seeds.insert("base_seed".into(), cfg.base_seed);
    for metric in Metric::ALL {
        m.add_file(out, metric.file_name(), files::TABLE_SCHEMA)?;
    }
    m.add_file(out, "errors.csv", files::ERRORS_SCHEMA)?;
    m.add_file(out, "cells.csv", files::CELLS_SCHEMA)?;
    m.wall_seconds = start.elapsed().as_secs_f64();
    m.write(out)?;
    if res.records.is_empty() {
        return Err(Error::Data("every benchmark cell failed; see errors.csv".into()));
    }
    Ok(())
}

/// Draw one polyline per trajectory CSV.
pub fn cmd_plot(trajectories: &[PathBuf], out: &Path) -> Result<()> {
    let mut series = Vec::new();
    for p in trajectories {
        let pts = files::read_trajectory(open(p)?)?;
        let stem = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let name = match (stem.as_str(), p.parent().and_then(|d| d.file_name())) {
            ("trajectory", Some(dir)) => dir.to_string_lossy().into_owned(),
            _ => stem,
        };
        series.push((name, pts.iter().map(|t| (t.coverage, t.density)).collect()));
    }
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(out, svg::density_coverage(&series))?;
    Ok(())
}
