use super::{peel_dims, PeelConfig};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::geometry::HyperBox;
use crate::metrics::{coverage_density, pareto_front};
use crate::rng;
use rand::Rng;
use rayon::prelude::*;

/// Knobs for bumping beyond the peeling configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpOptions {
    /// Attributes drawn per round.
    pub t: usize,
    /// Number of rounds.
    pub rounds: usize,
    /// Resample the training data with replacement each round.
    pub bootstrap: bool,
}

/// Non-dominated boxes pooled from all bumping rounds.
#[derive(Debug, Clone, PartialEq)]
pub struct BumpResult {
    /// Front members sorted by decreasing validation coverage.
    pub boxes: Vec<HyperBox>,
    /// `(coverage, density)` of each front member on the validation data.
    pub stats: Vec<(f64, f64)>,
    /// Number of distinct boxes pooled before filtering.
    pub pooled: usize,
}

impl BumpResult {
    /// Index of the densest front member, ties going to the larger coverage.
    pub fn best_index(&self) -> usize {
        let mut best = 0;
        for (i, s) in self.stats.iter().enumerate() {
            let b = self.stats[best];
            if s.1 > b.1 || (s.1 == b.1 && s.0 > b.0) {
                best = i;
            }
        }
        best
    }

    pub fn best(&self) -> &HyperBox {
        &self.boxes[self.best_index()]
    }
}

/// Bumping with bootstrap resampling.
pub fn bumping(
    d: &Dataset,
    d_val: &Dataset,
    box0: &HyperBox,
    cfg: &PeelConfig,
    t: usize,
    rounds: usize,
) -> Result<BumpResult> {
    bumping_with(d, d_val, box0, cfg, BumpOptions { t, rounds, bootstrap: true })
}

/// Run `rounds` peels, each on a bootstrap sample restricted to `t` random
/// attributes, pool the returned boxes and keep those not dominated in
/// (coverage, density) on `d_val`.
pub fn bumping_with(
    d: &Dataset,
    d_val: &Dataset,
    box0: &HyperBox,
    cfg: &PeelConfig,
    opts: BumpOptions,
) -> Result<BumpResult> {
    let dim = box0.dim();
    if opts.t < 1 || opts.t > dim {
        return Err(Error::Config(format!("t must lie in 1..={dim}, got {}", opts.t)));
    }
    if opts.rounds < 1 {
        return Err(Error::Config("T must be at least 1".into()));
    }
    let runs: Vec<Vec<HyperBox>> = (0..opts.rounds)
        .into_par_iter()
        .map(|i| {
            let mut r = rng::rng(rng::derive(cfg.seed, &[i as u64]));
            let sample = if opts.bootstrap {
                let idx: Vec<usize> = (0..d.len()).map(|_| r.random_range(0..d.len())).collect();
                d.select(&idx)
            } else {
                d.clone()
            };
            let mut dims = rand::seq::index::sample(&mut r, dim, opts.t).into_vec();
            dims.sort_unstable();
            let seq = peel_dims(&sample, d_val, box0, cfg, &dims)?;
            Ok(seq.returned().to_vec())
        })
        .collect::<Result<_>>()?;

    let mut pool: Vec<HyperBox> = Vec::new();
    for b in runs.into_iter().flatten() {
        if !pool.contains(&b) {
            pool.push(b);
        }
    }
    let mut kept = Vec::with_capacity(pool.len());
    let mut stats = Vec::with_capacity(pool.len());
    for b in &pool {
        let s = coverage_density(b, d_val)?;
        if let Some(dens) = s.density {
            kept.push(b.clone());
            stats.push((s.coverage, dens));
        }
    }
    let mut front: Vec<usize> = pareto_front(&stats);
    front.sort_by(|&a, &b| stats[b].0.total_cmp(&stats[a].0).then(stats[a].1.total_cmp(&stats[b].1)));
    Ok(BumpResult {
        boxes: front.iter().map(|&i| kept[i].clone()).collect(),
        stats: front.iter().map(|&i| stats[i]).collect(),
        pooled: pool.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::dominates;
    use crate::prim::peel;
    use crate::sampling::lhs_sample;

    fn dgp3(n: usize, seed: u64) -> Dataset {
        let x = lhs_sample(n, &HyperBox::unit(5), seed).unwrap();
        let y = x.rows().map(|r| (r[0] > 0.6 && r[1] > 0.8) as u8 as f64).collect();
        Dataset::new(x, y).unwrap()
    }

    #[test]
    fn degenerate_bumping_is_within_peel_output() {
        let d = dgp3(300, 4);
        let b0 = HyperBox::unit(5);
        let cfg = PeelConfig::default();
        let res = bumping_with(&d, &d, &b0, &cfg, BumpOptions { t: 5, rounds: 1, bootstrap: false }).unwrap();
        let seq = peel(&d, &d, &b0, &cfg).unwrap();
        for b in &res.boxes {
            assert!(seq.returned().contains(b));
        }
    }

    #[test]
    fn front_is_mutually_non_dominated() {
        let d = dgp3(400, 8);
        let b0 = HyperBox::unit(5);
        let res = bumping(&d, &d, &b0, &PeelConfig { seed: 3, ..PeelConfig::default() }, 3, 10).unwrap();
        for a in &res.stats {
            for b in &res.stats {
                assert!(!dominates(*a, *b));
            }
        }
        assert!(res.boxes.iter().all(|b| crate::metrics::restricted_dims(b, &b0) <= 3));
    }

    #[test]
    fn rejects_bad_t() {
        let d = dgp3(50, 1);
        let b0 = HyperBox::unit(5);
        assert!(bumping(&d, &d, &b0, &PeelConfig::default(), 6, 2).is_err());
        assert!(bumping(&d, &d, &b0, &PeelConfig::default(), 0, 2).is_err());
    }
}
