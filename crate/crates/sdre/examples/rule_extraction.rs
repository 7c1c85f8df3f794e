//! PRIM with rule extraction: a random forest relabels many new points
//! before peeling. Compared with plain peeling on the same small sample.
//!
//! ```text
//! cargo run --release --example rule_extraction
//! ```

use sdre::dgp::{evaluate, evaluate_noiseless, lookup};
use sdre::pipeline::{discover, trajectory_on};
use sdre::prelude::*;
use sdre::sampling::lhs_sample;

fn main() -> sdre::Result<()> {
    let dgp = lookup("morris")?;
    let box0 = dgp.spec().input_box.clone();
    let x = lhs_sample(400, &box0, 21)?;
    let y = evaluate(dgp.as_ref(), &x, 22)?;
    let d = Dataset::new(x, y)?;
    let tx = lhs_sample(10_000, &box0, 23)?;
    let ty = evaluate_noiseless(dgp.as_ref(), &tx)?;
    let test = Dataset::new(tx, ty)?;

    let cfg = ExperimentConfig { k: 20_000, n_trees: 200, ..ExperimentConfig::default() };
    for m in [Method::O, Method::RfL, Method::RfP] {
        let disc = discover(m, &d, &d, &box0, &cfg, 7)?;
        let traj = trajectory_on(&disc, &test, &box0)?;
        let pts: Vec<(f64, f64)> = traj.iter().map(|p| (p.1, p.2)).collect();
        println!(
            "{m:5} boxes {:3}  test AUC {:.3}  restricted dims {}",
            disc.boxes.len(),
            trajectory_auc(&pts),
            restricted_dims(disc.last_box(), &box0)
        );
    }
    Ok(())
}
