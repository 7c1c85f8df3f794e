//! A small benchmark grid written as CSV tables.
//!
//! ```text
//! cargo run --release --example benchmark_grid -- out/
//! ```

use sdre::dgp::Registry;
use sdre::pipeline::{run_benchmark, ExperimentConfig, Method, Metric};

fn main() -> sdre::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "benchmark_out".into());
    let cfg = ExperimentConfig {
        dgps: vec!["dgp3".into(), "hart3".into(), "moon10low".into()],
        sizes: vec![200, 400],
        reps: 5,
        rounds: 10,
        k: 10_000,
        n_trees: 100,
        ..ExperimentConfig::default()
    };
    let res = run_benchmark(&cfg, &Registry::builtin())?;
    for p in res.write_all(out.as_ref())? {
        println!("wrote {}", p.display());
    }
    for &size in &cfg.sizes {
        for dgp in &cfg.dgps {
            let best: Vec<&str> = res.ranking(Metric::Auc, size, dgp).iter().take(2).map(|m| m.name()).collect();
            let o = res.aggregate(size, dgp, Method::O).map_or(f64::NAN, |a| a.auc);
            println!("n={size:4} {dgp:10} AUC of O {o:.3}, best {best:?}");
        }
    }
    Ok(())
}
