//! Pasting grows a peeled box back where it still gains density.
//!
//! ```text
//! cargo run --example paste
//! ```

use sdre::dgp::{evaluate, lookup};
use sdre::metrics::coverage_density;
use sdre::prelude::*;
use sdre::prim::{paste_with, PasteRule};
use sdre::sampling::lhs_sample;

fn main() -> sdre::Result<()> {
    let dgp = lookup("dgp3")?;
    let box0 = dgp.spec().input_box.clone();
    let x = lhs_sample(400, &box0, 11)?;
    let y = evaluate(dgp.as_ref(), &x, 12)?;
    let d = Dataset::new(x, y)?;
    let seq = peel(&d, &d, &box0, &PeelConfig::default())?;
    let peeled = seq.selected().clone();
    let (pasted, steps) = paste_with(&d, &peeled, &box0, 0.01, 5, PasteRule::Strict)?;
    for (name, b) in [("peeled", &peeled), ("pasted", &pasted)] {
        let s = coverage_density(b, &d)?;
        println!("{name}: coverage {:.3} density {:.3} {b}", s.coverage, s.density.unwrap_or(f64::NAN));
    }
    println!("{steps} pasting steps");

    // a one-dimensional box grows by 1% per step until it meets the border
    let line = HyperBox::unit(1);
    let xs = PointMatrix::from_rows(&(0..100).map(|k| vec![k as f64 / 99.0]).collect::<Vec<_>>(), line.clone())?;
    let flat = Dataset::new(xs, vec![1.0; 100])?;
    let start = HyperBox::from_bounds(&[(0.0, 0.5)])?;
    let (grown, steps) = paste_with(&flat, &start, &line, 0.01, 0, PasteRule::NonDecreasing)?;
    println!("1-D: {start} -> {grown} in {steps} steps");
    Ok(())
}
