//! Data-generating processes: explicit benchmark functions binarized by a
//! threshold, the rule-based `dgp3`, and the `dsgc` grid simulator.

mod functions;
pub mod dsgc;

use crate::dataset::PointMatrix;
use crate::error::{Error, Result};
use crate::geometry::HyperBox;
use crate::rng;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

pub use dsgc::{DsgcDgp, DsgcParams, SimConfig};
pub use functions::{ExplicitDgp, RuleDgp};

/// Static description of a DGP.
#[derive(Debug, Clone, PartialEq)]
pub struct DgpSpec {
    pub name: String,
    /// Input dimensionality.
    pub d: usize,
    /// Number of influential inputs.
    pub influential: usize,
    pub input_box: HyperBox,
    /// `y = 1` when the raw output is strictly below this value; `None` for native binary rules.
    pub threshold: Option<f64>,
    /// Probability of a built-in label flip.
    pub intrinsic_noise: f64,
    /// Published share of `y = 1`, as a fraction.
    pub expected_share: f64,
}

/// A labelled process. Implementations must be pure per point.
pub trait Dgp: Send + Sync {
    fn spec(&self) -> &DgpSpec;

    /// Noise-free label of one point (0 or 1).
    fn label(&self, x: &[f64]) -> Result<f64>;

    /// Raw continuous output, when the process has one.
    fn raw(&self, _x: &[f64]) -> Option<f64> {
        None
    }

    /// Whether labelling is expensive enough to warrant parallel evaluation.
    fn is_simulator(&self) -> bool {
        false
    }
}

fn check_points(dgp: &dyn Dgp, points: &PointMatrix) -> Result<()> {
    let spec = dgp.spec();
    if points.ncols() != spec.d {
        return Err(Error::Shape { expected: spec.d, got: points.ncols() });
    }
    Ok(())
}

/// Labels without the DGP's intrinsic noise.
pub fn evaluate_noiseless(dgp: &dyn Dgp, points: &PointMatrix) -> Result<Vec<f64>> {
    check_points(dgp, points)?;
    if dgp.is_simulator() {
        (0..points.nrows()).into_par_iter().map(|k| dgp.label(points.row(k))).collect()
    } else {
        points.rows().map(|r| dgp.label(r)).collect()
    }
}

/// Labels with the DGP's intrinsic noise applied, deterministic per `seed`.
pub fn evaluate(dgp: &dyn Dgp, points: &PointMatrix, seed: u64) -> Result<Vec<f64>> {
    let y = evaluate_noiseless(dgp, points)?;
    let rate = dgp.spec().intrinsic_noise;
    if rate > 0.0 {
        flip_noise(&y, rate, seed)
    } else {
        Ok(y)
    }
}

/// Invert exactly `round(level * N)` labels at distinct, uniformly chosen positions.
pub fn flip_noise(y: &[f64], level: f64, seed: u64) -> Result<Vec<f64>> {
    if !(0.0..=0.5).contains(&level) {
        return Err(Error::Config(format!("noise level {level} outside [0, 0.5]")));
    }
    if let Some(k) = y.iter().position(|v| *v != 0.0 && *v != 1.0) {
        return Err(Error::InvalidLabel(format!("label {} at row {} is not binary", y[k], k + 1)));
    }
    let mut out = y.to_vec();
    let count = (level * y.len() as f64).round() as usize;
    if count == 0 {
        return Ok(out);
    }
    let mut r = rng::rng(seed);
    for k in rand::seq::index::sample(&mut r, y.len(), count) {
        out[k] = 1.0 - out[k];
    }
    Ok(out)
}

/// Name-addressable collection of DGPs.
#[derive(Clone, Default)]
pub struct Registry {
    entries: BTreeMap<String, Arc<dyn Dgp>>,
}

impl Registry {
    /// Registry holding the built-in benchmark processes.
    pub fn builtin() -> Self {
        let mut r = Registry::default();
        for d in functions::builtin() {
            r.register(d);
        }
        r.register(Arc::new(DsgcDgp::default()));
        r
    }

    /// Add or replace a process under its spec name.
    pub fn register(&mut self, dgp: Arc<dyn Dgp>) {
        self.entries.insert(dgp.spec().name.clone(), dgp);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn Dgp>> {
        self.entries.get(name).cloned().ok_or_else(|| Error::UnknownDgp(name.to_string()))
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.keys().cloned().collect()
    }
}

/// Names of the built-in processes defined by explicit formulas.
pub const EXPLICIT: [&str; 10] =
    ["dgp3", "ellipse", "morris", "sobol", "ishigami", "borehole", "hart3", "hart4", "hart6sc", "moon10low"];

fn global() -> &'static Registry {
    static REG: OnceLock<Registry> = OnceLock::new();
    REG.get_or_init(Registry::builtin)
}

/// Look a built-in DGP up by name.
pub fn lookup(name: &str) -> Result<Arc<dyn Dgp>> {
    global().get(name)
}

/// Names of all built-in DGPs.
pub fn names() -> Vec<String> {
    global().names()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flip_counts() {
        let y = vec![0.0; 1000];
        let f = flip_noise(&y, 0.002, 1).unwrap();
        assert_eq!(f.iter().filter(|v| **v == 1.0).count(), 2);
        assert_eq!(flip_noise(&y, 0.0, 1).unwrap(), y);
        assert!(flip_noise(&[0.5], 0.1, 1).is_err());
        assert!(flip_noise(&y, 0.6, 1).is_err());
    }

    #[test]
    fn flip_half_randomizes() {
        let y: Vec<f64> = (0..200).map(|k| (k % 5 == 0) as u8 as f64).collect();
        let mean: f64 = (0..500)
            .map(|s| flip_noise(&y, 0.5, s).unwrap().iter().sum::<f64>() / 200.0)
            .sum::<f64>()
            / 500.0;
        assert!((mean - 0.5).abs() < 0.02, "{mean}");
    }

    #[test]
    fn registry_lookup() {
        assert!(matches!(lookup("nope"), Err(Error::UnknownDgp(_))));
        let names = names();
        for n in EXPLICIT.iter().chain(["dsgc"].iter()) {
            assert!(names.iter().any(|m| m == n), "{n}");
        }
        for n in names {
            let d = lookup(&n).unwrap();
            let s = d.spec();
            assert!(s.influential <= s.d);
            assert!(s.expected_share > 0.0 && s.expected_share < 1.0);
            assert_eq!(s.input_box.dim(), s.d);
        }
    }

    #[test]
    fn shape_mismatch() {
        let d = lookup("dgp3").unwrap();
        let x = PointMatrix::new(vec![0.5; 4], HyperBox::unit(4)).unwrap();
        assert!(matches!(evaluate(d.as_ref(), &x, 0), Err(Error::Shape { .. })));
    }
}
