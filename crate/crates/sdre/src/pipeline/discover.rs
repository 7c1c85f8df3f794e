use super::config::{ExperimentConfig, Method, RfValidation};
use crate::dataset::{Dataset, PointMatrix};
use crate::error::Result;
use crate::forest::{tune_mtry, Forest};
use crate::geometry::HyperBox;
use crate::metrics::coverage_density;
use crate::prim::{bumping, paste, peel, BoxSequence, PeelConfig};
use crate::rng;
use crate::sampling::uniform_sample;

/// Result of one discovery run.
#[derive(Debug, Clone, PartialEq)]
pub struct Discovery {
    pub method: Method,
    /// Boxes of the trajectory, from the widest to the narrowest.
    pub boxes: Vec<HyperBox>,
    /// Validation mean label (peeling) or validation density (bumping) of each box.
    pub val_means: Vec<f64>,
    /// Points of the data the boxes were learned on that fall in each box.
    pub n_train: Vec<usize>,
    /// Validation points in each box.
    pub n_val: Vec<usize>,
    /// Index of the box reported as the method's answer.
    pub last: usize,
    pub warnings: Vec<String>,
}

impl Discovery {
    /// The box reported as the method's answer.
    pub fn last_box(&self) -> &HyperBox {
        &self.boxes[self.last]
    }

    fn from_sequence(method: Method, seq: &BoxSequence) -> Self {
        let r = seq.selected_index;
        Discovery {
            method,
            boxes: seq.returned().to_vec(),
            val_means: seq.val_means[..=r].to_vec(),
            n_train: seq.n_train[..=r].to_vec(),
            n_val: seq.n_val[..=r].to_vec(),
            last: r,
            warnings: Vec::new(),
        }
    }
}

/// Data relabelled by a fitted forest.
#[derive(Debug, Clone)]
pub struct Relabeled {
    pub forest: Forest,
    pub points: PointMatrix,
    pub labels: Vec<f64>,
    pub probabilities: Vec<f64>,
}

fn method_seed(seed: u64, method: Method) -> u64 {
    rng::derive(seed, &[rng::tag(method.name())])
}

/// Fit the tuned forest on `d` and label `K` uniform points in `box0`.
pub fn relabel(d: &Dataset, box0: &HyperBox, cfg: &ExperimentConfig, seed: u64) -> Result<Relabeled> {
    let grid = cfg.mtry_grid_for(d.dim());
    let (_, forest) = tune_mtry(d, &grid, &cfg.forest_config(rng::derive(seed, &[rng::tag("forest")])))?;
    let points = uniform_sample(cfg.k, box0, rng::derive(seed, &[rng::tag("new.points")]))?;
    let probabilities = forest.predict_proba(&points)?;
    let labels = probabilities.iter().map(|&p| if p >= 0.5 { 1.0 } else { 0.0 }).collect();
    Ok(Relabeled { forest, points, labels, probabilities })
}

/// Peel on metamodel-labelled points (the last step of rule extraction).
pub fn rule_extraction(
    new_points: &PointMatrix,
    new_labels: Vec<f64>,
    d_val: &Dataset,
    box0: &HyperBox,
    peel_cfg: &PeelConfig,
    validation: RfValidation,
) -> Result<BoxSequence> {
    let d_new = Dataset::new(new_points.clone(), new_labels)?;
    match validation {
        RfValidation::Relabeled => peel(&d_new, &d_new, box0, peel_cfg),
        RfValidation::Original => peel(&d_new, d_val, box0, peel_cfg),
    }
}

fn run_bumping(
    method: Method,
    d: &Dataset,
    d_val: &Dataset,
    box0: &HyperBox,
    cfg: &ExperimentConfig,
    seed: u64,
) -> Result<Discovery> {
    let t = cfg.bumping_t(method, box0.dim());
    let res = bumping(d, d_val, box0, &cfg.peel_config(method_seed(seed, method)), t, cfg.rounds)?;
    let count = |data: &Dataset, b: &HyperBox| data.x.rows().filter(|r| b.contains(r)).count();
    Ok(Discovery {
        method,
        last: res.best_index(),
        val_means: res.stats.iter().map(|s| s.1).collect(),
        n_train: res.boxes.iter().map(|b| count(d, b)).collect(),
        n_val: res.boxes.iter().map(|b| count(d_val, b)).collect(),
        boxes: res.boxes,
        warnings: Vec::new(),
    })
}

fn run_peel(method: Method, d: &Dataset, d_val: &Dataset, box0: &HyperBox, cfg: &ExperimentConfig, seed: u64) -> Result<Discovery> {
    let s = method_seed(seed, method);
    let seq = peel(d, d_val, box0, &cfg.peel_config(s))?;
    let mut out = Discovery::from_sequence(method, &seq);
    if method == Method::OP {
        for (j, b) in out.boxes.iter_mut().enumerate() {
            *b = paste(d, b, box0, cfg.beta, rng::derive(s, &[j as u64]))?;
        }
        for (j, b) in out.boxes.iter().enumerate() {
            let idx = d_val.indices_in(b);
            out.val_means[j] = idx.iter().map(|&k| d_val.y[k]).sum::<f64>() / idx.len().max(1) as f64;
            out.n_val[j] = idx.len();
            out.n_train[j] = d.indices_in(b).len();
        }
    }
    Ok(out)
}

fn from_relabeled(
    method: Method,
    rel: &Relabeled,
    d_val: &Dataset,
    box0: &HyperBox,
    cfg: &ExperimentConfig,
    seed: u64,
) -> Result<Discovery> {
    let labels = if method == Method::RfP { rel.probabilities.clone() } else { rel.labels.clone() };
    let seq =
        rule_extraction(&rel.points, labels, d_val, box0, &cfg.peel_config(method_seed(seed, method)), cfg.rf_validation)?;
    Ok(Discovery::from_sequence(method, &seq))
}

/// Run one method.
pub fn discover(
    method: Method,
    d: &Dataset,
    d_val: &Dataset,
    box0: &HyperBox,
    cfg: &ExperimentConfig,
    seed: u64,
) -> Result<Discovery> {
    discover_many(&[method], d, d_val, box0, cfg, seed).pop().expect("one method").1
}

/// Run several methods on the same data. The rule-extraction methods share
/// one fitted forest and one set of relabelled points.
pub fn discover_many(
    methods: &[Method],
    d: &Dataset,
    d_val: &Dataset,
    box0: &HyperBox,
    cfg: &ExperimentConfig,
    seed: u64,
) -> Vec<(Method, Result<Discovery>)> {
    let mut relabeled: Option<Result<Relabeled>> = None;
    methods
        .iter()
        .map(|&m| {
            let res = match m {
                Method::B | Method::BAll => run_bumping(m, d, d_val, box0, cfg, seed),
                Method::O | Method::OP => run_peel(m, d, d_val, box0, cfg, seed),
                Method::RfL | Method::RfP => {
                    let rel = relabeled.get_or_insert_with(|| relabel(d, box0, cfg, seed));
                    match rel {
                        Ok(rel) if rel.forest.degenerate => run_peel(Method::O, d, d_val, box0, cfg, seed).map(|mut r| {
                            r.method = m;
                            r.warnings.push("single-class training data: fell back to plain peeling".into());
                            r
                        }),
                        Ok(rel) => from_relabeled(m, rel, d_val, box0, cfg, seed),
                        Err(e) => Err(crate::Error::Data(format!("metamodel failed: {e}"))),
                    }
                }
            };
            (m, res)
        })
        .collect()
}

/// Coverage/density trajectory of a discovery on `data`, skipping boxes
/// that hold no points. The first point is `box0` (coverage 1, base rate)
/// when the trajectory does not already start there.
pub fn trajectory_on(disc: &Discovery, data: &Dataset, box0: &HyperBox) -> Result<Vec<(usize, f64, f64, usize)>> {
    let mut out = Vec::with_capacity(disc.boxes.len() + 1);
    if disc.boxes.first() != Some(box0) {
        let s = coverage_density(box0, data)?;
        out.push((0, s.coverage, s.density.unwrap_or(f64::NAN), s.n_in));
    }
    let shift = out.len();
    for (j, b) in disc.boxes.iter().enumerate() {
        let s = coverage_density(b, data)?;
        if let Some(dens) = s.density {
            out.push((j + shift, s.coverage, dens, s.n_in));
        }
    }
    Ok(out)
}
