//! Compare the three samplers on the unit square.
//!
//! ```text
//! cargo run --example sampling
//! ```

use sdre::geometry::HyperBox;
use sdre::sampling::{halton_sample, lhs_sample, uniform_sample};

fn main() -> sdre::Result<()> {
    let b = HyperBox::unit(2);
    let n = 400;
    let designs = [
        ("uniform", uniform_sample(n, &b, 1)?),
        ("lhs", lhs_sample(n, &b, 1)?),
        ("halton", halton_sample(n, &b, 0)?),
    ];
    // share of points in the corner box [0.6, 1] x [0.8, 1], whose volume is 0.08
    let corner = HyperBox::from_bounds(&[(0.6, 1.0), (0.8, 1.0)])?;
    for (name, x) in &designs {
        let inside = x.rows().filter(|r| corner.contains(r)).count();
        let mut strata = vec![0usize; n];
        for r in x.rows() {
            strata[((r[0] * n as f64) as usize).min(n - 1)] += 1;
        }
        let empty = strata.iter().filter(|c| **c == 0).count();
        println!("{name:8} corner share {:.4}  empty x1-strata {empty:3}", inside as f64 / n as f64);
    }
    Ok(())
}
