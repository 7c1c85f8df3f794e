//! PRIM: peeling, pasting and bumping.

mod bumping;
mod io;
mod paste;
mod peel;

pub use bumping::{bumping, bumping_with, BumpOptions, BumpResult};
pub use io::{read_boxes, write_boxes};
pub use paste::{paste, paste_with, PasteRule};
pub use peel::{peel, peel_dims, Cut, Side};

use crate::error::{Error, Result};
use crate::geometry::HyperBox;
use serde::{Deserialize, Serialize};

/// Peeling hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeelConfig {
    /// Share of in-box points removed per step.
    pub alpha: f64,
    /// Peeling stops once the train or validation box holds this many points or fewer.
    pub minpts: usize,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for PeelConfig {
    fn default() -> Self {
        PeelConfig { alpha: 0.05, minpts: 20, max_iter: 99, seed: 0 }
    }
}

impl PeelConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 0.5) {
            return Err(Error::Config(format!("alpha must lie in (0, 0.5), got {}", self.alpha)));
        }
        if self.minpts < 1 {
            return Err(Error::Config("minpts must be at least 1".into()));
        }
        Ok(())
    }
}

/// Nested boxes produced by one peeling run.
///
/// `boxes[0]` is the initial box; `boxes[j]` is the box after `j` cuts.
/// The run continues past the best validation box so that the whole
/// trajectory is available; [`BoxSequence::returned`] gives the boxes
/// up to and including `selected_index`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxSequence {
    pub boxes: Vec<HyperBox>,
    /// Mean label of the validation points inside each box (NaN when empty).
    pub val_means: Vec<f64>,
    /// First index of the largest validation mean.
    pub selected_index: usize,
    /// Train points inside each box.
    pub n_train: Vec<usize>,
    /// Validation points inside each box.
    pub n_val: Vec<usize>,
    /// The cut that produced `boxes[j + 1]`.
    pub cuts: Vec<Cut>,
}

impl BoxSequence {
    /// `box_0 ..= box_r` with `r` the selected index.
    pub fn returned(&self) -> &[HyperBox] {
        &self.boxes[..=self.selected_index]
    }

    /// The selected box.
    pub fn selected(&self) -> &HyperBox {
        &self.boxes[self.selected_index]
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }
}

/// First index of the maximum, ignoring NaN entries; 0 when all are NaN.
pub(crate) fn argmax_first(v: &[f64]) -> usize {
    let mut best = 0;
    let mut m = f64::NEG_INFINITY;
    for (j, &x) in v.iter().enumerate() {
        if x > m {
            m = x;
            best = j;
        }
    }
    best
}
