use super::{argmax_first, BoxSequence, PeelConfig};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::geometry::HyperBox;

/// Which bound a cut moves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Raise the lower bound (remove the smallest values).
    Lower,
    /// Lower the upper bound (remove the largest values).
    Upper,
}

/// One applied peel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cut {
    pub dim: usize,
    pub side: Side,
    /// New bound value.
    pub bound: f64,
    /// Mean label of the retained train points.
    pub mean: f64,
}

fn mean_of(y: &[f64], idx: &[usize]) -> f64 {
    if idx.is_empty() {
        return f64::NAN;
    }
    idx.iter().map(|&k| y[k]).sum::<f64>() / idx.len() as f64
}

/// Peeling over all dimensions.
pub fn peel(d: &Dataset, d_val: &Dataset, box0: &HyperBox, cfg: &PeelConfig) -> Result<BoxSequence> {
    let dims: Vec<usize> = (0..box0.dim()).collect();
    peel_dims(d, d_val, box0, cfg, &dims)
}

/// Peeling that only cuts the listed dimensions; the others stay at `box0`.
///
/// Every step removes the `n - ⌈(1-α)n⌉` most extreme points on one side of
/// one dimension, choosing the candidate whose retained points have the
/// largest mean label. Points tied with the cut value are retained, and the
/// moved bound snaps to the smallest (largest) retained value. Candidates
/// that would remove nothing are skipped. Equal means keep the first
/// candidate in the order (dimension, lower side, upper side).
pub fn peel_dims(
    d: &Dataset,
    d_val: &Dataset,
    box0: &HyperBox,
    cfg: &PeelConfig,
    dims: &[usize],
) -> Result<BoxSequence> {
    cfg.validate()?;
    if d.dim() != box0.dim() || d_val.dim() != box0.dim() {
        return Err(Error::Shape { expected: box0.dim(), got: d.dim().max(d_val.dim()) });
    }
    if let Some(&bad) = dims.iter().find(|&&i| i >= box0.dim()) {
        return Err(Error::Config(format!("dimension index {bad} out of range")));
    }
    if d_val.is_empty() {
        return Err(Error::EmptyValidation);
    }

    let mut train = d.indices_in(box0);
    let mut val = d_val.indices_in(box0);
    let mut current = box0.clone();
    let mut seq = BoxSequence {
        boxes: vec![current.clone()],
        val_means: vec![mean_of(&d_val.y, &val)],
        selected_index: 0,
        n_train: vec![train.len()],
        n_val: vec![val.len()],
        cuts: Vec::new(),
    };

    let mut column = Vec::new();
    let mut scratch = Vec::new();
    let mut iter = 0;
    while val.len() > cfg.minpts && train.len() > cfg.minpts && iter < cfg.max_iter {
        iter += 1;
        let n = train.len();
        let keep = ((1.0 - cfg.alpha) * n as f64).ceil() as usize;
        let r = n - keep.min(n);
        if r == 0 {
            break;
        }
        let total: f64 = train.iter().map(|&k| d.y[k]).sum();
        let mut best: Option<Cut> = None;
        for &i in dims {
            column.clear();
            column.extend(train.iter().map(|&k| d.x.get(k, i)));
            scratch.clear();
            scratch.extend_from_slice(&column);
            let lo = *scratch.select_nth_unstable_by(r, f64::total_cmp).1;
            let hi = *scratch.select_nth_unstable_by(n - 1 - r, f64::total_cmp).1;
            for (side, bound) in [(Side::Lower, lo), (Side::Upper, hi)] {
                let (mut removed, mut removed_sum) = (0usize, 0.0);
                for (v, &k) in column.iter().zip(&train) {
                    let out = match side {
                        Side::Lower => *v < bound,
                        Side::Upper => *v > bound,
                    };
                    if out {
                        removed += 1;
                        removed_sum += d.y[k];
                    }
                }
                if removed == 0 || removed == n {
                    continue;
                }
                let mean = (total - removed_sum) / (n - removed) as f64;
                if best.is_none_or(|b| mean > b.mean) {
                    best = Some(Cut { dim: i, side, bound, mean });
                }
            }
        }
        let Some(cut) = best else { break };
        match cut.side {
            Side::Lower => current.set_lower(cut.dim, cut.bound),
            Side::Upper => current.set_upper(cut.dim, cut.bound),
        }
        let keep_point = |k: &usize, data: &Dataset| {
            let v = data.x.get(*k, cut.dim);
            match cut.side {
                Side::Lower => v >= cut.bound,
                Side::Upper => v <= cut.bound,
            }
        };
        train.retain(|k| keep_point(k, d));
        val.retain(|k| keep_point(k, d_val));
        seq.boxes.push(current.clone());
        seq.val_means.push(mean_of(&d_val.y, &val));
        seq.n_train.push(train.len());
        seq.n_val.push(val.len());
        seq.cuts.push(cut);
    }
    seq.selected_index = argmax_first(&seq.val_means);
    Ok(seq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::PointMatrix;

    fn dataset(rows: Vec<Vec<f64>>, y: Vec<f64>) -> Dataset {
        let d = rows[0].len();
        Dataset::new(PointMatrix::from_rows(&rows, HyperBox::unit(d)).unwrap(), y).unwrap()
    }

    #[test]
    fn constant_labels_tie_everywhere() {
        let rows: Vec<Vec<f64>> = (0..60).map(|k| vec![k as f64 / 60.0, ((k * 7) % 60) as f64 / 60.0]).collect();
        let d = dataset(rows, vec![1.0; 60]);
        let seq = peel(&d, &d, &HyperBox::unit(2), &PeelConfig::default()).unwrap();
        assert!(seq.len() > 1);
        assert!(seq.val_means.iter().all(|m| *m == 1.0));
        assert_eq!(seq.selected_index, 0);
        for w in seq.boxes.windows(2) {
            assert!(w[1].is_subset_of(&w[0]));
        }
    }

    #[test]
    fn first_cut_removes_negative_top_slice() {
        // the two largest x2 values are negatives; everything else is mixed
        let mut rows = Vec::new();
        let mut y = Vec::new();
        for k in 0..20 {
            rows.push(vec![((k * 3) % 20) as f64 / 20.0, k as f64 / 20.0]);
            y.push(if k >= 18 { 0.0 } else { (k % 2) as f64 });
        }
        let d = dataset(rows, y);
        let cfg = PeelConfig { alpha: 0.1, minpts: 5, ..PeelConfig::default() };
        let seq = peel(&d, &d, &HyperBox::unit(2), &cfg).unwrap();
        let c = seq.cuts[0];
        assert_eq!((c.dim, c.side), (1, Side::Upper));
        assert_eq!(c.bound, 17.0 / 20.0);
        assert!((c.mean - 9.0 / 18.0).abs() < 1e-12);
    }

    #[test]
    fn too_few_points_returns_box0() {
        let d = dataset(vec![vec![0.5]; 10], vec![1.0; 10]);
        let seq = peel(&d, &d, &HyperBox::unit(1), &PeelConfig::default()).unwrap();
        assert_eq!(seq.boxes, vec![HyperBox::unit(1)]);
    }

    #[test]
    fn empty_validation_is_an_error() {
        let d = dataset(vec![vec![0.5]; 30], vec![1.0; 30]);
        let e = Dataset::new(PointMatrix::empty(HyperBox::unit(1)), vec![]).unwrap();
        assert!(matches!(peel(&d, &e, &HyperBox::unit(1), &PeelConfig::default()), Err(Error::EmptyValidation)));
    }

    #[test]
    fn only_listed_dimensions_move() {
        let rows: Vec<Vec<f64>> =
            (0..200).map(|k| vec![(k % 13) as f64 / 13.0, (k % 17) as f64 / 17.0, (k % 19) as f64 / 19.0]).collect();
        let y = rows.iter().map(|r| (r[0] > 0.5 && r[2] > 0.3) as u8 as f64).collect();
        let d = dataset(rows, y);
        let seq = peel_dims(&d, &d, &HyperBox::unit(3), &PeelConfig::default(), &[1, 2]).unwrap();
        for b in &seq.boxes {
            assert_eq!((b.lower()[0], b.upper()[0]), (0.0, 1.0));
        }
    }
}
