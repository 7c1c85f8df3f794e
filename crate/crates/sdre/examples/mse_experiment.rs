//! Error of the in-box mean estimate with and without the metamodel.
//!
//! ```text
//! cargo run --release --example mse_experiment -- 40
//! ```

use sdre::dgp::lookup;
use sdre::geometry::HyperBox;
use sdre::pipeline::{mse_experiment, MseConfig};

fn main() -> sdre::Result<()> {
    let reps = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20);
    let dgp = lookup("dgp3")?;
    let b: HyperBox = "1:0:1 2:0:1 3:0.95:1 4:0:1 5:0:1".parse()?;
    let cfg = MseConfig { reps_outer: reps, reps_inner: 20, k: 20_000, n_trees: 100, gt_size: 200_000, ..MseConfig::default() };
    let r = mse_experiment(dgp.as_ref(), &b, &cfg)?;
    println!("box {b}");
    println!("ground-truth mean {:.4}", r.mu_gt);
    println!("MSE without metamodel {:.2e}", r.mse_o);
    println!("MSE with metamodel    {:.2e}", r.mse_am);
    Ok(())
}
