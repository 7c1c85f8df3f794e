//! Mean-squared error of the in-box mean estimate, with and without a metamodel.

use crate::dgp::{evaluate, Dgp};
use crate::error::{Error, Result};
use crate::forest::{default_mtry_grid, tune_mtry, ForestConfig};
use crate::geometry::HyperBox;
use crate::rng;
use crate::sampling::uniform_sample;
use crate::dataset::Dataset;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// How the per-fit bias and variance are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MseFormula {
    /// `mean_i (Bias_i² + Var_i)`.
    #[default]
    Squared,
    /// `Σ_i (Bias_i + Var_i)`, as literally written in the appendix.
    Literal,
}

/// Settings of the MSE experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MseConfig {
    /// Size `N` of each simulated dataset.
    pub n: usize,
    /// Number `K` of points relabelled by each fitted forest.
    pub k: usize,
    pub reps_outer: usize,
    pub reps_inner: usize,
    /// Size of the ground-truth dataset.
    pub gt_size: usize,
    pub formula: MseFormula,
    /// Use forest probabilities (otherwise thresholded labels).
    pub probabilities: bool,
    pub n_trees: usize,
    pub mtry_grid: Option<Vec<usize>>,
    pub seed: u64,
}

impl Default for MseConfig {
    fn default() -> Self {
        MseConfig {
            n: 400,
            k: 100_000,
            reps_outer: 200,
            reps_inner: 100,
            gt_size: 1_000_000,
            formula: MseFormula::Squared,
            probabilities: true,
            n_trees: 500,
            mtry_grid: None,
            seed: 0,
        }
    }
}

/// Output of [`mse_experiment`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MseReport {
    pub box_b: HyperBox,
    pub mu_gt: f64,
    pub mse_o: f64,
    pub mse_am: f64,
    pub n: usize,
    pub k: usize,
    /// In-box label mean of each simulated dataset.
    pub mu_hat: Vec<f64>,
    /// `μ_gt − mean_j μ̂ᵃ_ij` per fitted forest.
    pub bias: Vec<f64>,
    /// Population variance of `μ̂ᵃ_ij` over `j` per fitted forest.
    pub var: Vec<f64>,
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn pop_var(v: &[f64]) -> f64 {
    let m = mean(v);
    v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / v.len() as f64
}

/// Compare the variance of the direct in-box mean `μ̂` with the error of the
/// metamodel-based estimate `μ̂ᵃ` for a fixed box `b`.
///
/// Each relabelled set has `K` uniform points in the DGP box, but only those
/// inside `b` enter `μ̂ᵃ`; their count is drawn from `Binomial(K, vol(b))`
/// and only they are generated.
pub fn mse_experiment(dgp: &dyn Dgp, box_b: &HyperBox, cfg: &MseConfig) -> Result<MseReport> {
    let spec = dgp.spec();
    let box0 = &spec.input_box;
    if !box_b.is_subset_of(box0) {
        return Err(Error::InvalidBox("box b must lie inside the DGP input box".into()));
    }
    if cfg.reps_outer < 1 || cfg.reps_inner < 1 || cfg.n < 2 {
        return Err(Error::Config("MSE experiment needs n >= 2 and at least one outer and inner replication".into()));
    }
    let seed = cfg.seed;

    // ground truth, generated in chunks to bound memory
    let chunk = 100_000;
    let (mut s, mut c) = (0.0, 0usize);
    for (ci, start) in (0..cfg.gt_size).step_by(chunk).enumerate() {
        let m = chunk.min(cfg.gt_size - start);
        let x = uniform_sample(m, box0, rng::derive(seed, &[1, ci as u64]))?;
        let y = evaluate(dgp, &x, rng::derive(seed, &[2, ci as u64]))?;
        for (row, v) in x.rows().zip(&y) {
            if box_b.contains(row) {
                s += v;
                c += 1;
            }
        }
    }
    if c == 0 {
        return Err(Error::UndefinedMu);
    }
    let mu_gt = s / c as f64;
    let frac = box_b.volume_fraction(box0);
    let grid = cfg.mtry_grid.clone().unwrap_or_else(|| default_mtry_grid(spec.d));

    let per_rep: Vec<(f64, f64, f64)> = (0..cfg.reps_outer)
        .into_par_iter()
        .map(|i| -> Result<(f64, f64, f64)> {
            let i = i as u64;
            let x = uniform_sample(cfg.n, box0, rng::derive(seed, &[3, i]))?;
            let y = evaluate(dgp, &x, rng::derive(seed, &[4, i]))?;
            let d = Dataset::new(x, y)?;
            let inside = d.indices_in(box_b);
            let mu_hat = if inside.is_empty() {
                f64::NAN
            } else {
                inside.iter().map(|&k| d.y[k]).sum::<f64>() / inside.len() as f64
            };
            let fc = ForestConfig { n_trees: cfg.n_trees, mtry: 0, min_node: 1, seed: rng::derive(seed, &[5, i]) };
            let (_, forest) = tune_mtry(&d, &grid, &fc)?;
            let mut r = rng::rng(rng::derive(seed, &[6, i]));
            let binom = Binomial::new(cfg.k as u64, frac).map_err(|e| Error::Config(e.to_string()))?;
            let mut est = Vec::with_capacity(cfg.reps_inner);
            for j in 0..cfg.reps_inner as u64 {
                let kb = binom.sample(&mut r) as usize;
                if kb == 0 {
                    continue;
                }
                let pts = uniform_sample(kb, box_b, rng::derive(seed, &[7, i, j]))?;
                let p = forest.predict_proba(&pts)?;
                let vals: Vec<f64> = if cfg.probabilities {
                    p
                } else {
                    p.into_iter().map(|v| if v >= 0.5 { 1.0 } else { 0.0 }).collect()
                };
                est.push(mean(&vals));
            }
            if est.is_empty() {
                return Ok((mu_hat, f64::NAN, f64::NAN));
            }
            Ok((mu_hat, mu_gt - mean(&est), pop_var(&est)))
        })
        .collect::<Result<_>>()?;

    let mu_hat: Vec<f64> = per_rep.iter().map(|r| r.0).collect();
    let bias: Vec<f64> = per_rep.iter().map(|r| r.1).collect();
    let var: Vec<f64> = per_rep.iter().map(|r| r.2).collect();
    let finite_mu: Vec<f64> = mu_hat.iter().copied().filter(|v| v.is_finite()).collect();
    let pairs: Vec<(f64, f64)> = bias.iter().zip(&var).filter(|(b, _)| b.is_finite()).map(|(b, v)| (*b, *v)).collect();
    if finite_mu.is_empty() || pairs.is_empty() {
        return Err(Error::UndefinedMu);
    }
    let mse_o = pop_var(&finite_mu);
    let mse_am = match cfg.formula {
        MseFormula::Squared => pairs.iter().map(|(b, v)| b * b + v).sum::<f64>() / pairs.len() as f64,
        MseFormula::Literal => pairs.iter().map(|(b, v)| b + v).sum::<f64>(),
    };
    Ok(MseReport { box_b: box_b.clone(), mu_gt, mse_o, mse_am, n: cfg.n, k: cfg.k, mu_hat, bias, var })
}
