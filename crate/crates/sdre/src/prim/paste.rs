use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::geometry::HyperBox;
use crate::rng;
use rand::Rng;

/// Acceptance rule for a candidate expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PasteRule {
    /// The in-box mean must strictly increase.
    #[default]
    Strict,
    /// The in-box mean must not decrease.
    NonDecreasing,
}

fn in_box_mean(d: &Dataset, b: &HyperBox) -> f64 {
    let (mut s, mut n) = (0.0, 0usize);
    for (row, y) in d.x.rows().zip(&d.y) {
        if b.contains(row) {
            s += y;
            n += 1;
        }
    }
    if n == 0 {
        f64::NEG_INFINITY
    } else {
        s / n as f64
    }
}

/// Pasting with the strict rule.
pub fn paste(d: &Dataset, b: &HyperBox, box0: &HyperBox, beta: f64, seed: u64) -> Result<HyperBox> {
    paste_with(d, b, box0, beta, seed, PasteRule::Strict).map(|(b, _)| b)
}

/// Repeatedly widen one bound by `beta` times the current width (clipped to
/// `box0`), picking uniformly among the expansions that raise the in-box
/// mean. Returns the final box and the number of expansions applied.
pub fn paste_with(
    d: &Dataset,
    b: &HyperBox,
    box0: &HyperBox,
    beta: f64,
    seed: u64,
    rule: PasteRule,
) -> Result<(HyperBox, usize)> {
    if !(beta > 0.0) {
        return Err(Error::Config(format!("beta must be positive, got {beta}")));
    }
    if b.dim() != box0.dim() || d.dim() != box0.dim() {
        return Err(Error::Shape { expected: box0.dim(), got: b.dim() });
    }
    if !b.is_subset_of(box0) {
        return Err(Error::InvalidBox("box to paste is not inside box_0".into()));
    }
    let mut r = rng::rng(seed);
    let mut current = b.clone();
    let mut steps = 0;
    loop {
        let m = in_box_mean(d, &current);
        let mut options = Vec::new();
        for i in 0..current.dim() {
            let grow = beta * current.width(i);
            let up = (current.upper()[i] + grow).min(box0.upper()[i]);
            let down = (current.lower()[i] - grow).max(box0.lower()[i]);
            for (upper, v) in [(true, up), (false, down)] {
                let moved = if upper { v > current.upper()[i] } else { v < current.lower()[i] };
                if !moved {
                    continue;
                }
                let mut cand = current.clone();
                if upper {
                    cand.set_upper(i, v);
                } else {
                    cand.set_lower(i, v);
                }
                let cm = in_box_mean(d, &cand);
                let ok = match rule {
                    PasteRule::Strict => cm > m,
                    PasteRule::NonDecreasing => cm >= m,
                };
                if ok {
                    options.push(cand);
                }
            }
        }
        if options.is_empty() {
            return Ok((current, steps));
        }
        let pick = r.random_range(0..options.len());
        current = options.swap_remove(pick);
        steps += 1;
    }
}
