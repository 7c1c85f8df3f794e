//! Replicated comparison of discovery methods over a grid of DGPs and sizes.

use super::config::{ExperimentConfig, Method};
use super::discover::{discover_many, trajectory_on};
use crate::dataset::Dataset;
use crate::dgp::{evaluate, evaluate_noiseless, flip_noise, Dgp, Registry};
use crate::error::{Error, Result};
use crate::geometry::HyperBox;
use crate::metrics::{consistency, restricted_dims, trajectory_auc};
use crate::rng;
use crate::sampling::{halton_sample, lhs_sample};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Halton index offset of the test sets for simulator DGPs, far from the training indices.
pub const TEST_HALTON_SKIP: u64 = 1_000_000;

/// Metrics of one method on one replication, measured on the test set.
#[derive(Debug, Clone, PartialEq)]
pub struct CellRecord {
    pub dgp: String,
    pub size: usize,
    pub rep: usize,
    pub method: Method,
    pub auc: f64,
    /// Density of the reported box (NaN when it holds no test point).
    pub density: f64,
    pub restricted: usize,
    pub volume: f64,
    pub last_box: HyperBox,
    /// `(coverage, density)` trajectory on the test set, `box_0` first.
    pub trajectory: Vec<(f64, f64)>,
}

/// A failed cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellError {
    pub dgp: String,
    pub size: usize,
    pub rep: usize,
    pub method: Option<Method>,
    pub message: String,
}

/// Means over replications for one `(size, dgp, method)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub size: usize,
    pub dgp: String,
    pub method: Method,
    pub auc: f64,
    pub density: f64,
    pub restricted: f64,
    /// Mean over all pairs of reported boxes from different replications.
    pub consistency: f64,
    pub volume: f64,
    pub n_ok: usize,
}

/// Everything produced by [`run_benchmark`].
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkResult {
    pub methods: Vec<Method>,
    pub records: Vec<CellRecord>,
    pub errors: Vec<CellError>,
    pub aggregates: Vec<Aggregate>,
}

/// Quality measures tabulated by the benchmark.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Auc,
    Density,
    Interp,
    Consistency,
}

impl Metric {
    pub const ALL: [Metric; 4] = [Metric::Auc, Metric::Density, Metric::Interp, Metric::Consistency];

    pub fn file_name(self) -> &'static str {
        match self {
            Metric::Auc => "auc.csv",
            Metric::Density => "density.csv",
            Metric::Interp => "interp.csv",
            Metric::Consistency => "consistency.csv",
        }
    }

    fn value(self, a: &Aggregate) -> f64 {
        match self {
            Metric::Auc => a.auc,
            Metric::Density => a.density,
            Metric::Interp => a.restricted,
            Metric::Consistency => a.consistency,
        }
    }

    /// Fewer restricted dimensions is better; larger is better elsewhere.
    fn higher_is_better(self) -> bool {
        self != Metric::Interp
    }
}

fn mean_finite(v: impl Iterator<Item = f64>) -> f64 {
    let (mut s, mut n) = (0.0, 0usize);
    for x in v.filter(|x| x.is_finite()) {
        s += x;
        n += 1;
    }
    if n == 0 {
        f64::NAN
    } else {
        s / n as f64
    }
}

/// Training design for one replication: LHS for explicit functions, a
/// disjoint Halton block for simulators.
pub fn training_points(dgp: &dyn Dgp, size: usize, rep: usize, base_seed: u64) -> Result<crate::dataset::PointMatrix> {
    let b = &dgp.spec().input_box;
    if dgp.is_simulator() {
        halton_sample(size, b, (rep * size) as u64)
    } else {
        lhs_sample(size, b, rng::derive(base_seed, &[rng::tag(&dgp.spec().name), size as u64, rep as u64, 0]))
    }
}

/// The shared test set of a DGP, labelled without noise.
pub fn test_set(dgp: &dyn Dgp, size: usize, base_seed: u64) -> Result<Dataset> {
    let b = &dgp.spec().input_box;
    let x = if dgp.is_simulator() {
        halton_sample(size, b, TEST_HALTON_SKIP)?
    } else {
        lhs_sample(size, b, rng::derive(base_seed, &[rng::tag(&dgp.spec().name), rng::tag("test")]))?
    };
    let y = evaluate_noiseless(dgp, &x)?;
    Dataset::new(x, y)
}

type JobOutput = (Vec<CellRecord>, Vec<CellError>);

fn run_job(dgp: &dyn Dgp, test: &Dataset, size: usize, rep: usize, cfg: &ExperimentConfig) -> JobOutput {
    let name = dgp.spec().name.clone();
    let box0 = dgp.spec().input_box.clone();
    let fail = |m: Option<Method>, e: &dyn std::fmt::Display| CellError {
        dgp: name.clone(),
        size,
        rep,
        method: m,
        message: e.to_string(),
    };
    let seed = rng::derive(cfg.base_seed, &[rng::tag(&name), size as u64, rep as u64]);
    let data = (|| -> Result<Dataset> {
        let x = training_points(dgp, size, rep, cfg.base_seed)?;
        let mut y = evaluate(dgp, &x, rng::derive(seed, &[1]))?;
        if cfg.noise_level > 0.0 {
            y = flip_noise(&y, cfg.noise_level, rng::derive(seed, &[2]))?;
        }
        Dataset::new(x, y)
    })();
    let d = match data {
        Ok(d) => d,
        Err(e) => return (Vec::new(), vec![fail(None, &e)]),
    };
    let mut records = Vec::new();
    let mut errors = Vec::new();
    for (m, res) in discover_many(&cfg.methods, &d, &d, &box0, cfg, seed) {
        let rec = res.and_then(|disc| {
            let traj = trajectory_on(&disc, test, &box0)?;
            let pairs: Vec<(f64, f64)> = traj.iter().map(|t| (t.1, t.2)).collect();
            let last = disc.last_box().clone();
            let dens = crate::metrics::coverage_density(&last, test)?.density.unwrap_or(f64::NAN);
            Ok(CellRecord {
                dgp: name.clone(),
                size,
                rep,
                method: m,
                auc: trajectory_auc(&pairs),
                density: dens,
                restricted: restricted_dims(&last, &box0),
                volume: last.volume_fraction(&box0),
                last_box: last,
                trajectory: pairs,
            })
        });
        match rec {
            Ok(r) => records.push(r),
            Err(e) => errors.push(fail(Some(m), &e)),
        }
    }
    (records, errors)
}

/// Run every `(dgp, size, rep)` job and aggregate per `(size, dgp, method)`.
/// Failures are recorded per cell and never abort the grid.
pub fn run_benchmark(cfg: &ExperimentConfig, registry: &Registry) -> Result<BenchmarkResult> {
    cfg.validate()?;
    let dgps: Vec<std::sync::Arc<dyn Dgp>> = cfg.dgps.iter().map(|n| registry.get(n)).collect::<Result<_>>()?;
    let mut tests = Vec::with_capacity(dgps.len());
    let mut errors = Vec::new();
    for g in &dgps {
        match test_set(g.as_ref(), cfg.test_size, cfg.base_seed) {
            Ok(t) if t.y.iter().any(|v| *v > 0.0) => tests.push(Some(t)),
            Ok(_) => {
                errors.push(CellError {
                    dgp: g.spec().name.clone(),
                    size: 0,
                    rep: 0,
                    method: None,
                    message: "test set holds no positive label".into(),
                });
                tests.push(None)
            }
            Err(e) => {
                errors.push(CellError { dgp: g.spec().name.clone(), size: 0, rep: 0, method: None, message: e.to_string() });
                tests.push(None)
            }
        }
    }
    let mut jobs = Vec::new();
    for (gi, _) in dgps.iter().enumerate().filter(|(gi, _)| tests[*gi].is_some()) {
        for &size in &cfg.sizes {
            for rep in 0..cfg.reps {
                jobs.push((gi, size, rep));
            }
        }
    }
    let outputs: Vec<JobOutput> = jobs
        .par_iter()
        .map(|&(gi, size, rep)| run_job(dgps[gi].as_ref(), tests[gi].as_ref().expect("filtered"), size, rep, cfg))
        .collect();
    let mut records = Vec::new();
    for (r, e) in outputs {
        records.extend(r);
        errors.extend(e);
    }
    let aggregates = aggregate(&records, cfg, &dgps)?;
    Ok(BenchmarkResult { methods: cfg.methods.clone(), records, errors, aggregates })
}

fn aggregate(records: &[CellRecord], cfg: &ExperimentConfig, dgps: &[std::sync::Arc<dyn Dgp>]) -> Result<Vec<Aggregate>> {
    let mut groups: BTreeMap<(usize, String, Method), Vec<&CellRecord>> = BTreeMap::new();
    for r in records {
        groups.entry((r.size, r.dgp.clone(), r.method)).or_default().push(r);
    }
    let mut out = Vec::new();
    for &size in &cfg.sizes {
        for g in dgps {
            let name = &g.spec().name;
            for &m in &cfg.methods {
                let Some(rs) = groups.get(&(size, name.clone(), m)) else { continue };
                let box0 = &g.spec().input_box;
                let mut cons = Vec::new();
                for i in 0..rs.len() {
                    for j in i + 1..rs.len() {
                        cons.push(consistency(&rs[i].last_box, &rs[j].last_box, box0)?);
                    }
                }
                out.push(Aggregate {
                    size,
                    dgp: name.clone(),
                    method: m,
                    auc: mean_finite(rs.iter().map(|r| r.auc)),
                    density: mean_finite(rs.iter().map(|r| r.density)),
                    restricted: mean_finite(rs.iter().map(|r| r.restricted as f64)),
                    consistency: mean_finite(cons.into_iter()),
                    volume: mean_finite(rs.iter().map(|r| r.volume)),
                    n_ok: rs.len(),
                });
            }
        }
    }
    Ok(out)
}

impl BenchmarkResult {
    pub fn aggregate(&self, size: usize, dgp: &str, method: Method) -> Option<&Aggregate> {
        self.aggregates.iter().find(|a| a.size == size && a.dgp == dgp && a.method == method)
    }

    /// Best and second-best method per `(size, dgp)` for a metric. Ties are
    /// broken by the configured method order.
    pub fn ranking(&self, metric: Metric, size: usize, dgp: &str) -> Vec<Method> {
        let mut vals: Vec<(usize, Method, f64)> = self
            .methods
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| self.aggregate(size, dgp, m).map(|a| (i, m, metric.value(a))))
            .filter(|v| v.2.is_finite())
            .collect();
        vals.sort_by(|a, b| {
            let c = if metric.higher_is_better() { b.2.total_cmp(&a.2) } else { a.2.total_cmp(&b.2) };
            c.then(a.0.cmp(&b.0))
        });
        vals.into_iter().map(|v| v.1).collect()
    }

    fn keys(&self) -> Vec<(usize, String)> {
        let mut keys: Vec<(usize, String)> = Vec::new();
        for a in &self.aggregates {
            if !keys.iter().any(|k| k.0 == a.size && k.1 == a.dgp) {
                keys.push((a.size, a.dgp.clone()));
            }
        }
        keys
    }

    /// One table per metric: a row per `(size, dgp)`, then `avg`, `#1`, `#2`
    /// rows per size. `consistency.csv` also carries an `avg box vol.` row.
    pub fn write_table<W: Write>(&self, metric: Metric, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec!["size".to_string(), "dgp".to_string()];
        header.extend(self.methods.iter().map(|m| m.name().to_string()));
        out.write_record(&header).map_err(csv_err)?;
        let keys = self.keys();
        let mut sizes: Vec<usize> = keys.iter().map(|k| k.0).collect();
        sizes.dedup();
        for &size in &sizes {
            let rows: Vec<&(usize, String)> = keys.iter().filter(|k| k.0 == size).collect();
            for (_, dgp) in &rows {
                let mut rec = vec![size.to_string(), dgp.clone()];
                for &m in &self.methods {
                    rec.push(self.aggregate(size, dgp, m).map_or(String::new(), |a| metric.value(a).to_string()));
                }
                out.write_record(&rec).map_err(csv_err)?;
            }
            let mut summary = |label: &str, f: &dyn Fn(Method) -> String| -> Result<()> {
                let mut rec = vec![size.to_string(), label.to_string()];
                rec.extend(self.methods.iter().map(|&m| f(m)));
                out.write_record(&rec).map_err(csv_err)
            };
            let avg = |m: Method, g: &dyn Fn(&Aggregate) -> f64| {
                mean_finite(rows.iter().filter_map(|(_, d)| self.aggregate(size, d, m)).map(g)).to_string()
            };
            summary("avg", &|m| avg(m, &|a| metric.value(a)))?;
            for (rank, label) in [(0usize, "#1"), (1, "#2")] {
                summary(label, &|m| {
                    rows.iter().filter(|(_, d)| self.ranking(metric, size, d).get(rank) == Some(&m)).count().to_string()
                })?;
            }
            if metric == Metric::Consistency {
                summary("avg box vol.", &|m| avg(m, &|a| a.volume))?;
            }
        }
        out.flush()?;
        Ok(())
    }

    pub fn write_errors<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["dgp", "size", "rep", "method", "message"]).map_err(csv_err)?;
        for e in &self.errors {
            out.write_record([
                e.dgp.clone(),
                e.size.to_string(),
                e.rep.to_string(),
                e.method.map_or(String::new(), |m| m.name().to_string()),
                e.message.clone(),
            ])
            .map_err(csv_err)?;
        }
        out.flush()?;
        Ok(())
    }

    /// Per-replication results, one row per `(dgp, size, rep, method)`.
    pub fn write_cells<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["dgp", "size", "rep", "method", "auc", "density", "restricted", "volume", "box"])
            .map_err(csv_err)?;
        for r in &self.records {
            out.write_record([
                r.dgp.clone(),
                r.size.to_string(),
                r.rep.to_string(),
                r.method.name().to_string(),
                r.auc.to_string(),
                r.density.to_string(),
                r.restricted.to_string(),
                r.volume.to_string(),
                r.last_box.to_string(),
            ])
            .map_err(csv_err)?;
        }
        out.flush()?;
        Ok(())
    }

    /// Write all tables into `dir`, returning the paths written.
    pub fn write_all(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut paths = Vec::new();
        for m in Metric::ALL {
            let p = dir.join(m.file_name());
            self.write_table(m, std::fs::File::create(&p)?)?;
            paths.push(p);
        }
        let p = dir.join("errors.csv");
        self.write_errors(std::fs::File::create(&p)?)?;
        paths.push(p);
        let p = dir.join("cells.csv");
        self.write_cells(std::fs::File::create(&p)?)?;
        paths.push(p);
        Ok(paths)
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Data(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> ExperimentConfig {
        ExperimentConfig {
            methods: vec![Method::O, Method::RfP],
            reps: 2,
            k: 1000,
            n_trees: 20,
            test_size: 2000,
            sizes: vec![200],
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn two_reps_one_pair() {
        let res = run_benchmark(&tiny(), &Registry::builtin()).unwrap();
        assert!(res.errors.is_empty(), "{:?}", res.errors);
        assert_eq!(res.records.len(), 4);
        let a = res.aggregate(200, "dgp3", Method::O).unwrap();
        let o: Vec<&CellRecord> = res.records.iter().filter(|r| r.method == Method::O).collect();
        let pair = consistency(&o[0].last_box, &o[1].last_box, &HyperBox::unit(5)).unwrap();
        assert_eq!(a.consistency, pair);
        for r in &res.records {
            assert_eq!(r.trajectory[0].0, 1.0);
        }
    }

    #[test]
    fn deterministic() {
        let a = run_benchmark(&tiny(), &Registry::builtin()).unwrap();
        let b = run_benchmark(&tiny(), &Registry::builtin()).unwrap();
        assert_eq!(a, b);
        let mut buf = Vec::new();
        a.write_table(Metric::Auc, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "size,dgp,O,RF.p");
        assert!(lines[1].starts_with("200,dgp3,"));
        assert!(lines[3].starts_with("200,#1,"));
    }

    #[test]
    fn unknown_dgp_is_config_error() {
        let cfg = ExperimentConfig { dgps: vec!["nope".into()], ..tiny() };
        assert!(run_benchmark(&cfg, &Registry::builtin()).is_err());
    }
}
