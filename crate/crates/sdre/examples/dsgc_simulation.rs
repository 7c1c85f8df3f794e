//! Simulate the smart-grid model and calibrate its stability threshold.
//!
//! ```text
//! cargo run --release --example dsgc_simulation            # a few labelled points
//! cargo run --release --example dsgc_simulation -- 10000   # calibrate on 10^4 Halton points
//! ```

use rayon::prelude::*;
use sdre::dgp::dsgc::{amplification, dsgc_simulate, DsgcParams, SimConfig};
use sdre::sampling::halton_sample;
use std::time::Instant;

fn main() -> sdre::Result<()> {
    let n: Option<usize> = std::env::args().nth(1).and_then(|s| s.parse().ok());
    let cfg = SimConfig::default();
    let b = DsgcParams::input_box();

    let Some(n) = n else {
        for x in halton_sample(8, &b, 0)?.rows() {
            let p = DsgcParams::from_point(x)?;
            let a = amplification(&p, &cfg)?;
            let y = dsgc_simulate(&p, &cfg)?;
            println!("gamma={:.2?} amplification={a:.3} y={y}", p.gamma);
        }
        return Ok(());
    };

    let start = Instant::now();
    let pts = halton_sample(n, &b, 0)?;
    let mut amps: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|k| amplification(&DsgcParams::from_point(pts.row(k))?, &cfg))
        .collect::<sdre::Result<_>>()?;
    println!("{n} simulations in {:.1}s", start.elapsed().as_secs_f64());
    amps.sort_by(f64::total_cmp);
    let target = 0.537;
    let k = ((1.0 - target) * n as f64).round() as usize;
    let rho = 0.5 * (amps[k.saturating_sub(1)] + amps[k.min(n - 1)]);
    println!("threshold for a {:.1}% unstable share: {rho:.4}", 100.0 * target);
    for q in [0.1, 0.25, 0.4, 0.5, 0.6, 0.75, 0.9] {
        println!("  quantile {q:.2}: {:.4}", amps[((n - 1) as f64 * q) as usize]);
    }
    let share = amps.iter().filter(|a| **a > cfg.residual).count() as f64 / n as f64;
    println!("share with the built-in threshold {}: {:.2}%", cfg.residual, 100.0 * share);
    Ok(())
}
