//! Box quality metrics: coverage, density, trajectory AUC, restricted
//! dimensions, consistency and Pareto filtering.

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::geometry::HyperBox;
use serde::{Deserialize, Serialize};

/// Relative tolerance used when deciding whether a bound differs from the reference box.
pub const BOUND_TOL: f64 = 1e-9;

/// In-box label sums for one box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxStats {
    /// Fraction of all positive mass that falls in the box.
    pub coverage: f64,
    /// Share of positive mass among in-box points, `None` when the box holds no points.
    pub density: Option<f64>,
    pub s1: f64,
    pub s0: f64,
    pub n_in: usize,
}

/// Coverage `S1/N1` and density `S1/(S1+S0)`. Probabilistic labels contribute
/// `y` to the positive sums and `1 - y` to the negative ones.
pub fn coverage_density(b: &HyperBox, data: &Dataset) -> Result<BoxStats> {
    if b.dim() != data.dim() {
        return Err(Error::Shape { expected: b.dim(), got: data.dim() });
    }
    let n1: f64 = data.y.iter().sum();
    if n1 <= 0.0 {
        return Err(Error::UndefinedCoverage);
    }
    let (mut s1, mut s0, mut n_in) = (0.0, 0.0, 0usize);
    for (row, &y) in data.x.rows().zip(&data.y) {
        if b.contains(row) {
            s1 += y;
            s0 += 1.0 - y;
            n_in += 1;
        }
    }
    let density = (n_in > 0).then(|| s1 / (s1 + s0));
    Ok(BoxStats { coverage: (s1 / n1).min(1.0), density, s1, s0, n_in })
}

/// One point of a peeling trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub box_index: usize,
    pub coverage: f64,
    pub density: f64,
    pub n_train: usize,
    pub n_val: usize,
}

/// Area under the density-coverage curve of a trajectory.
///
/// Points are sorted by decreasing coverage; duplicated coverages keep their
/// largest density. The curve is piecewise linear between points, flat from
/// the smallest coverage down to 0, and flat from the largest coverage up to
/// 1 when the first box does not already reach it. Pass the `box_0` point
/// (coverage 1, density = base rate) as part of `points`.
pub fn trajectory_auc(points: &[(f64, f64)]) -> f64 {
    let mut pts: Vec<(f64, f64)> = points.iter().copied().filter(|(c, d)| c.is_finite() && d.is_finite()).collect();
    if pts.is_empty() {
        return 0.0;
    }
    pts.sort_by(|a, b| b.0.total_cmp(&a.0).then(b.1.total_cmp(&a.1)));
    pts.dedup_by(|later, earlier| later.0 == earlier.0);
    let mut area = (1.0 - pts[0].0).max(0.0) * pts[0].1;
    for w in pts.windows(2) {
        area += (w[0].0 - w[1].0) * (w[0].1 + w[1].1) / 2.0;
    }
    let last = pts[pts.len() - 1];
    area + last.0.max(0.0) * last.1
}

/// AUC of a trajectory given as `TrajectoryPoint`s.
pub fn trajectory_points_auc(points: &[TrajectoryPoint]) -> f64 {
    trajectory_auc(&points.iter().map(|p| (p.coverage, p.density)).collect::<Vec<_>>())
}

/// Dimensions where `b` is strictly inside `box0`, with a tolerance of
/// `tol` times the reference width.
pub fn restricted_dims_tol(b: &HyperBox, box0: &HyperBox, tol: f64) -> usize {
    (0..b.dim())
        .filter(|&i| {
            let t = tol * box0.width(i);
            b.lower()[i] > box0.lower()[i] + t || b.upper()[i] < box0.upper()[i] - t
        })
        .count()
}

/// Number of restricted dimensions using [`BOUND_TOL`].
pub fn restricted_dims(b: &HyperBox, box0: &HyperBox) -> usize {
    restricted_dims_tol(b, box0, BOUND_TOL)
}

/// Overlap-to-union volume ratio of two boxes, measured in `box0`-normalized coordinates.
pub fn consistency(a: &HyperBox, b: &HyperBox, box0: &HyperBox) -> Result<f64> {
    if a.dim() != b.dim() || a.dim() != box0.dim() {
        return Err(Error::Shape { expected: a.dim(), got: b.dim() });
    }
    let (na, nb) = (a.normalized(box0), b.normalized(box0));
    let (va, vb) = (na.volume(), nb.volume());
    let vo = na.intersect(&nb).map_or(0.0, |c| c.volume());
    let vu = va + vb - vo;
    if vu <= 0.0 {
        let same = (0..a.dim()).all(|i| {
            let t = BOUND_TOL;
            (na.lower()[i] - nb.lower()[i]).abs() <= t && (na.upper()[i] - nb.upper()[i]).abs() <= t
        });
        return Ok(if same { 1.0 } else { 0.0 });
    }
    Ok((vo / vu).clamp(0.0, 1.0))
}

/// `q` is dominated by `p` when `p` is at least as good in both metrics and differs in one.
#[inline]
pub fn dominates(p: (f64, f64), q: (f64, f64)) -> bool {
    p.0 >= q.0 && p.1 >= q.1 && (p.0 > q.0 || p.1 > q.1)
}

/// Indices of non-dominated `(coverage, density)` pairs, in input order.
/// Identical pairs do not dominate each other and are all kept.
pub fn pareto_front(candidates: &[(f64, f64)]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&a, &b| {
        candidates[b].0.total_cmp(&candidates[a].0).then(candidates[b].1.total_cmp(&candidates[a].1))
    });
    // sweep by decreasing coverage, tracking the best density seen at strictly larger coverage
    let mut keep = vec![false; candidates.len()];
    let mut best_above = f64::NEG_INFINITY;
    let mut k = 0;
    while k < order.len() {
        let c = candidates[order[k]].0;
        let mut end = k;
        while end < order.len() && candidates[order[end]].0 == c {
            end += 1;
        }
        let top = candidates[order[k]].1;
        for &i in &order[k..end] {
            let dens = candidates[i].1;
            keep[i] = dens == top && dens > best_above;
        }
        best_above = best_above.max(top);
        k = end;
    }
    (0..candidates.len()).filter(|&i| keep[i]).collect()
}
