//! Scenario discovery with PRIM.
//!
//! The crate implements peeling, pasting and bumping variants of the
//! Patient Rule Induction Method, PRIM with rule extraction through a
//! random-forest metamodel, the usual box quality metrics, a registry of
//! benchmark data-generating processes (including a delayed swing-equation
//! grid simulator) and an experiment harness.
//!
//! ```
//! use sdre::prelude::*;
//!
//! let dgp = sdre::dgp::lookup("dgp3").unwrap();
//! let box0 = dgp.spec().input_box.clone();
//! let x = sdre::sampling::lhs_sample(400, &box0, 7).unwrap();
//! let y = sdre::dgp::evaluate(dgp.as_ref(), &x, 7).unwrap();
//! let d = Dataset::new(x, y).unwrap();
//! let seq = peel(&d, &d, &box0, &PeelConfig::default()).unwrap();
//! assert!(seq.boxes.len() >= 1);
//! ```

pub mod cli;
pub mod dataset;
pub mod dgp;
pub mod error;
pub mod forest;
pub mod geometry;
pub mod metrics;
pub mod pipeline;
pub mod prim;
pub mod rng;
pub mod sampling;

pub use error::{Error, Result};

/// Commonly used types and functions.
pub mod prelude {
    pub use crate::dataset::{Dataset, PointMatrix};
    pub use crate::dgp::{Dgp, DgpSpec};
    pub use crate::error::{Error, Result};
    pub use crate::forest::{Forest, ForestConfig};
    pub use crate::geometry::HyperBox;
    pub use crate::metrics::{consistency, coverage_density, pareto_front, restricted_dims, trajectory_auc};
    pub use crate::pipeline::{discover, ExperimentConfig, Method};
    pub use crate::prim::{bumping, paste, peel, BoxSequence, PeelConfig};
}
