use crate::error::{Error, Result};
use crate::forest::ForestConfig;
use crate::geometry::HyperBox;
use crate::prim::PeelConfig;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// The six discovery methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    /// Bumping with `⌈√D⌉` attributes per round.
    #[serde(rename = "B")]
    B,
    /// Bumping with all attributes.
    #[serde(rename = "B.all")]
    BAll,
    /// Plain peeling.
    #[serde(rename = "O")]
    O,
    /// Peeling followed by pasting of every returned box.
    #[serde(rename = "O.p")]
    OP,
    /// Rule extraction with forest labels.
    #[serde(rename = "RF.l")]
    RfL,
    /// Rule extraction with forest probabilities.
    #[serde(rename = "RF.p")]
    RfP,
}

impl Method {
    pub const ALL: [Method; 6] = [Method::B, Method::BAll, Method::O, Method::OP, Method::RfL, Method::RfP];

    pub fn name(self) -> &'static str {
        match self {
            Method::B => "B",
            Method::BAll => "B.all",
            Method::O => "O",
            Method::OP => "O.p",
            Method::RfL => "RF.l",
            Method::RfP => "RF.p",
        }
    }

    pub fn is_bumping(self) -> bool {
        matches!(self, Method::B | Method::BAll)
    }

    pub fn is_rule_extraction(self) -> bool {
        matches!(self, Method::RfL | Method::RfP)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Method::ALL.iter().copied().find(|m| m.name() == s).ok_or_else(|| {
            let valid: Vec<&str> = Method::ALL.iter().map(|m| m.name()).collect();
            Error::Config(format!("unknown method '{s}'; valid methods: {}", valid.join(", ")))
        })
    }
}

/// Validation data used by the rule-extraction methods when peeling the relabelled points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RfValidation {
    /// Validate on the relabelled points themselves.
    Relabeled,
    /// Validate on the original simulated validation data.
    #[default]
    Original,
}

/// Every knob of an experiment. Defaults follow the published setting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub methods: Vec<Method>,
    pub dgps: Vec<String>,
    pub alpha: f64,
    pub minpts: usize,
    pub max_iter: usize,
    pub beta: f64,
    /// Bumping rounds.
    #[serde(rename = "T")]
    pub rounds: usize,
    /// Attributes per bumping round for `B`; `None` means `⌈√D⌉`. `B.all` always uses `D`.
    #[serde(rename = "t")]
    pub t: Option<usize>,
    /// Points relabelled by the metamodel.
    #[serde(rename = "K")]
    pub k: usize,
    pub sizes: Vec<usize>,
    pub reps: usize,
    pub noise_level: f64,
    pub test_size: usize,
    pub base_seed: u64,
    pub n_trees: usize,
    pub min_node: usize,
    /// `None` means `{⌊√D⌋, ⌊D/2⌋, D}`.
    pub mtry_grid: Option<Vec<usize>>,
    pub rf_validation: RfValidation,
    /// Name of the DGP whose input box bounds a single discovery run.
    pub dgp: Option<String>,
    /// Explicit `[lower, upper]` pairs bounding a single discovery run.
    pub box0: Option<Vec<[f64; 2]>>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            methods: Method::ALL.to_vec(),
            dgps: vec!["dgp3".into()],
            alpha: 0.05,
            minpts: 20,
            max_iter: 99,
            beta: 0.01,
            rounds: 50,
            t: None,
            k: 100_000,
            sizes: vec![400],
            reps: 50,
            noise_level: 0.0,
            test_size: 10_000,
            base_seed: 0,
            n_trees: 500,
            min_node: 1,
            mtry_grid: None,
            rf_validation: RfValidation::Original,
            dgp: None,
            box0: None,
        }
    }
}

impl ExperimentConfig {
    /// Parse a JSON document, rejecting unknown fields.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.peel_config(0).validate()?;
        let bad = |m: String| Err(Error::Config(m));
        if !(self.beta > 0.0) {
            return bad(format!("beta: must be positive, got {}", self.beta));
        }
        if self.rounds < 1 {
            return bad("T: must be at least 1".into());
        }
        if self.k < 1 {
            return bad("K: must be at least 1".into());
        }
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return bad("sizes: must be a non-empty list of positive counts".into());
        }
        if self.reps < 1 {
            return bad("reps: must be at least 1".into());
        }
        if !(0.0..=0.5).contains(&self.noise_level) {
            return bad(format!("noise_level: must lie in [0, 0.5], got {}", self.noise_level));
        }
        if self.test_size < 1 {
            return bad("test_size: must be at least 1".into());
        }
        if self.n_trees < 1 || self.min_node < 1 {
            return bad("n_trees and min_node must be at least 1".into());
        }
        if self.methods.is_empty() {
            return bad("methods: must not be empty".into());
        }
        if let Some(g) = &self.mtry_grid {
            if g.is_empty() || g.contains(&0) {
                return bad("mtry_grid: must be a non-empty list of positive counts".into());
            }
        }
        if let Some(b) = &self.box0 {
            self.box0_from_pairs(b)?;
        }
        Ok(())
    }

    fn box0_from_pairs(&self, b: &[[f64; 2]]) -> Result<HyperBox> {
        HyperBox::new(b.iter().map(|p| p[0]).collect(), b.iter().map(|p| p[1]).collect())
            .map_err(|e| Error::Config(format!("box0: {e}")))
    }

    /// The explicit `box0`, if configured.
    pub fn box0(&self) -> Result<Option<HyperBox>> {
        self.box0.as_deref().map(|b| self.box0_from_pairs(b)).transpose()
    }

    pub fn peel_config(&self, seed: u64) -> PeelConfig {
        PeelConfig { alpha: self.alpha, minpts: self.minpts, max_iter: self.max_iter, seed }
    }

    pub fn forest_config(&self, seed: u64) -> ForestConfig {
        ForestConfig { n_trees: self.n_trees, mtry: 0, min_node: self.min_node, seed }
    }

    /// Attributes per round for a bumping method in `d` dimensions.
    pub fn bumping_t(&self, method: Method, d: usize) -> usize {
        match method {
            Method::BAll => d,
            _ => self.t.unwrap_or(((d as f64).sqrt().ceil() as usize).min(d)),
        }
    }

    pub fn mtry_grid_for(&self, d: usize) -> Vec<usize> {
        match &self.mtry_grid {
            Some(g) => g.iter().map(|&m| m.min(d)).collect(),
            None => crate::forest::default_mtry_grid(d),
        }
    }
}
