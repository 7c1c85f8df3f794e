//! Bumping on the grid simulator: the Pareto front of coverage and density.
//!
//! ```text
//! cargo run --release --example bumping_dsgc -- 400
//! ```

use sdre::dgp::{evaluate, lookup};
use sdre::metrics::restricted_dims;
use sdre::prelude::*;
use sdre::prim::bumping;
use sdre::sampling::halton_sample;

fn main() -> sdre::Result<()> {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(400);
    let dgp = lookup("dsgc")?;
    let box0 = dgp.spec().input_box.clone();
    let x = halton_sample(n, &box0, 0)?;
    let y = evaluate(dgp.as_ref(), &x, 1)?;
    let d = Dataset::new(x, y)?;
    println!("{n} simulations, unstable share {:.3}", d.mean_y());

    let t = (box0.dim() as f64).sqrt().ceil() as usize;
    let res = bumping(&d, &d, &box0, &PeelConfig::default(), t, 50)?;
    println!("{} boxes pooled, {} on the front", res.pooled, res.boxes.len());
    for (b, (cov, dens)) in res.boxes.iter().zip(&res.stats) {
        println!("coverage {cov:.3} density {dens:.3} restricted {}", restricted_dims(b, &box0));
    }
    println!("best: {}", res.best());
    Ok(())
}
