//! Peel a dgp3 sample and print the trajectory.
//!
//! ```text
//! cargo run --example peel_dgp3 -- 800
//! ```

use sdre::dgp::{evaluate, lookup};
use sdre::metrics::{coverage_density, restricted_dims};
use sdre::prelude::*;
use sdre::sampling::lhs_sample;

fn main() -> sdre::Result<()> {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(400);
    let dgp = lookup("dgp3")?;
    let box0 = dgp.spec().input_box.clone();
    let sample = |seed| -> sdre::Result<Dataset> {
        let x = lhs_sample(n, &box0, seed)?;
        let y = evaluate(dgp.as_ref(), &x, seed + 100)?;
        Dataset::new(x, y)
    };
    let (d, d_val) = (sample(1)?, sample(2)?);
    let seq = peel(&d, &d_val, &box0, &PeelConfig::default())?;

    for (j, cut) in seq.cuts.iter().enumerate().step_by(5) {
        println!("box {:3}: cut x{} {:?} at {:.3}, validation mean {:.3}", j + 1, cut.dim + 1, cut.side, cut.bound, seq.val_means[j + 1]);
    }
    let best = seq.selected();
    let s = coverage_density(best, &d_val)?;
    println!("selected box {} of {}: {best}", seq.selected_index, seq.len() - 1);
    println!(
        "coverage {:.3}, density {:.3}, restricted dims {}",
        s.coverage,
        s.density.unwrap_or(f64::NAN),
        restricted_dims(best, &box0)
    );
    Ok(())
}
