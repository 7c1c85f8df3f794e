//! Empirical share of positive labels for every built-in process.
//!
//! ```text
//! cargo run --release --example dgp_shares           # explicit functions, 10^5 points
//! cargo run --release --example dgp_shares -- dsgc   # include the grid simulator (slow)
//! ```

use sdre::dgp::{evaluate_noiseless, Registry};
use sdre::sampling::{halton_sample, uniform_sample};

fn main() -> sdre::Result<()> {
    let with_sim = std::env::args().any(|a| a == "dsgc");
    let reg = Registry::builtin();
    println!("{:10} {:>3} {:>9} {:>9}", "dgp", "D", "share", "expected");
    for name in reg.names() {
        let g = reg.get(&name)?;
        if g.is_simulator() && !with_sim {
            continue;
        }
        let spec = g.spec();
        let x = if g.is_simulator() {
            halton_sample(2_000, &spec.input_box, 0)?
        } else {
            uniform_sample(100_000, &spec.input_box, 3)?
        };
        let y = evaluate_noiseless(g.as_ref(), &x)?;
        let share = y.iter().sum::<f64>() / y.len() as f64;
        println!("{name:10} {:>3} {share:>9.4} {:>9.4}", spec.d, spec.expected_share);
    }
    Ok(())
}
