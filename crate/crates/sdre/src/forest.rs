//! Random-forest classifier used as the metamodel for rule extraction.
//!
//! Trees are grown on bootstrap samples with Gini splits over `mtry`
//! randomly drawn features per node, until nodes are pure or cannot be
//! split. Leaves store the fraction of positive labels; the forest
//! probability is the mean leaf fraction over trees.

use crate::dataset::{Dataset, PointMatrix};
use crate::error::{Error, Result};
use crate::rng;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};

/// Forest hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForestConfig {
    pub n_trees: usize,
    /// Features tried per split; `0` means `⌊√D⌋`.
    pub mtry: usize,
    /// Minimum number of samples in a leaf.
    pub min_node: usize,
    pub seed: u64,
}

impl Default for ForestConfig {
    fn default() -> Self {
        ForestConfig { n_trees: 500, mtry: 0, min_node: 1, seed: 0 }
    }
}

impl ForestConfig {
    fn resolved_mtry(&self, d: usize) -> usize {
        if self.mtry == 0 {
            ((d as f64).sqrt().floor() as usize).max(1)
        } else {
            self.mtry
        }
    }
}

/// The default tuning grid `{⌊√D⌋, ⌊D/2⌋, D}`, deduplicated and ascending.
pub fn default_mtry_grid(d: usize) -> Vec<usize> {
    let mut g = vec![((d as f64).sqrt().floor() as usize).max(1), (d / 2).max(1), d];
    g.sort_unstable();
    g.dedup();
    g
}

const LEAF: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Node {
    /// Split feature, or `LEAF`.
    feature: u32,
    /// Index of the left child; the right child follows it.
    left: u32,
    /// Threshold for splits (`x <= value` goes left), positive fraction for leaves.
    value: f64,
}

#[derive(Debug, Clone, PartialEq)]
struct Tree {
    nodes: Vec<Node>,
}

impl Tree {
    #[inline]
    fn predict(&self, x: &[f64]) -> f64 {
        let mut k = 0usize;
        loop {
            let n = self.nodes[k];
            if n.feature == LEAF {
                return n.value;
            }
            k = n.left as usize + (x[n.feature as usize] > n.value) as usize;
        }
    }

    fn constant(value: f64) -> Self {
        Tree { nodes: vec![Node { feature: LEAF, left: 0, value }] }
    }
}

/// A fitted forest. Immutable and safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct Forest {
    trees: Vec<Tree>,
    d: usize,
    pub config: ForestConfig,
    /// Out-of-bag misclassification rate (NaN when no sample was ever out of bag).
    pub oob_error: f64,
    /// Set when the training labels held a single class; the forest is then constant.
    pub degenerate: bool,
}

struct Grower<'a> {
    data: &'a Dataset,
    mtry: usize,
    min_node: usize,
    nodes: Vec<Node>,
    feats: Vec<usize>,
    pairs: Vec<(f64, f64)>,
}

impl Grower<'_> {
    fn leaf(&mut self, at: usize, samples: &[usize]) {
        let s: f64 = samples.iter().map(|&k| self.data.y[k]).sum();
        self.nodes[at] = Node { feature: LEAF, left: 0, value: s / samples.len() as f64 };
    }

    /// Best `(score, threshold)` for one feature, maximising `s_l²/n_l + s_r²/n_r`.
    fn best_for(&mut self, samples: &[usize], f: usize) -> Option<(f64, f64)> {
        self.pairs.clear();
        self.pairs.extend(samples.iter().map(|&k| (self.data.x.get(k, f), self.data.y[k])));
        self.pairs.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
        let n = self.pairs.len();
        let total: f64 = self.pairs.iter().map(|p| p.1).sum();
        let mut sl = 0.0;
        let mut best: Option<(f64, f64)> = None;
        for i in 0..n - 1 {
            sl += self.pairs[i].1;
            let (a, b) = (self.pairs[i].0, self.pairs[i + 1].0);
            let nl = i + 1;
            if a == b || nl < self.min_node || n - nl < self.min_node {
                continue;
            }
            let sr = total - sl;
            let score = sl * sl / nl as f64 + sr * sr / (n - nl) as f64;
            if best.is_none_or(|(s, _)| score > s) {
                let mut thr = 0.5 * (a + b);
                if thr >= b {
                    thr = a;
                }
                best = Some((score, thr));
            }
        }
        best
    }

    fn grow(&mut self, samples: &mut [usize], r: &mut rng::Rng) {
        let mut stack = vec![(0usize, 0usize, samples.len())];
        self.nodes.push(Node { feature: LEAF, left: 0, value: 0.0 });
        while let Some((at, lo, hi)) = stack.pop() {
            let node = &mut samples[lo..hi];
            let first = self.data.y[node[0]];
            let pure = node.iter().all(|&k| self.data.y[k] == first);
            if pure || node.len() < 2 * self.min_node {
                self.leaf(at, node);
                continue;
            }
            let dim = self.feats.len();
            self.feats.shuffle(r);
            let mut best: Option<(f64, usize, f64)> = None;
            for j in 0..dim {
                // keep drawing features past mtry only while no valid split has been found
                if j >= self.mtry && best.is_some() {
                    break;
                }
                let f = self.feats[j];
                if let Some((score, thr)) = self.best_for(node, f) {
                    if best.is_none_or(|(s, _, _)| score > s) {
                        best = Some((score, f, thr));
                    }
                }
            }
            let Some((_, f, thr)) = best else {
                self.leaf(at, node);
                continue;
            };
            let mut split = 0;
            for i in 0..node.len() {
                if self.data.x.get(node[i], f) <= thr {
                    node.swap(i, split);
                    split += 1;
                }
            }
            let left = self.nodes.len();
            self.nodes.push(Node { feature: LEAF, left: 0, value: 0.0 });
            self.nodes.push(Node { feature: LEAF, left: 0, value: 0.0 });
            self.nodes[at] = Node { feature: f as u32, left: left as u32, value: thr };
            stack.push((left + 1, lo + split, hi));
            stack.push((left, lo, lo + split));
        }
    }
}

fn check_training(d: &Dataset) -> Result<()> {
    if d.len() < 2 {
        return Err(Error::Data("a forest needs at least two training rows".into()));
    }
    Ok(())
}

/// Fit a forest. Single-class data yields a constant forest with `degenerate` set.
pub fn fit(d: &Dataset, cfg: &ForestConfig) -> Result<Forest> {
    check_training(d)?;
    let dim = d.dim();
    let mtry = cfg.resolved_mtry(dim);
    if mtry < 1 || mtry > dim || cfg.n_trees < 1 || cfg.min_node < 1 {
        return Err(Error::Config(format!(
            "forest needs 1 <= mtry <= {dim}, n_trees >= 1 and min_node >= 1 (got {cfg:?})"
        )));
    }
    let config = ForestConfig { mtry, ..*cfg };
    let first = d.y[0];
    if d.y.iter().all(|&v| v == first) {
        return Ok(Forest {
            trees: vec![Tree::constant(first); cfg.n_trees],
            d: dim,
            config,
            oob_error: 0.0,
            degenerate: true,
        });
    }
    let n = d.len();
    let grown: Vec<(Tree, Vec<(usize, f64)>)> = (0..cfg.n_trees)
        .into_par_iter()
        .map(|t| {
            let mut r = rng::rng(rng::derive(cfg.seed, &[t as u64]));
            let mut samples: Vec<usize> = (0..n).map(|_| r.random_range(0..n)).collect();
            let mut in_bag = vec![false; n];
            for &k in &samples {
                in_bag[k] = true;
            }
            let mut g = Grower {
                data: d,
                mtry,
                min_node: cfg.min_node,
                nodes: Vec::new(),
                feats: (0..dim).collect(),
                pairs: Vec::with_capacity(n),
            };
            g.grow(&mut samples, &mut r);
            let tree = Tree { nodes: g.nodes };
            let oob = (0..n).filter(|&k| !in_bag[k]).map(|k| (k, tree.predict(d.x.row(k)))).collect();
            (tree, oob)
        })
        .collect();
    let mut sum = vec![0.0; n];
    let mut cnt = vec![0usize; n];
    let mut trees = Vec::with_capacity(cfg.n_trees);
    for (tree, oob) in grown {
        for (k, p) in oob {
            sum[k] += p;
            cnt[k] += 1;
        }
        trees.push(tree);
    }
    let (mut wrong, mut seen) = (0usize, 0usize);
    for k in 0..n {
        if cnt[k] > 0 {
            seen += 1;
            let label = sum[k] / cnt[k] as f64 >= 0.5;
            if label != (d.y[k] >= 0.5) {
                wrong += 1;
            }
        }
    }
    let oob_error = if seen > 0 { wrong as f64 / seen as f64 } else { f64::NAN };
    Ok(Forest { trees, d: dim, config, oob_error, degenerate: false })
}

/// Fit one forest per grid value and keep the one with the lowest OOB error
/// (ties go to the smaller `mtry`). Returns the chosen config and its forest.
pub fn tune_mtry(d: &Dataset, grid: &[usize], cfg: &ForestConfig) -> Result<(ForestConfig, Forest)> {
    if grid.is_empty() {
        return Err(Error::Config("mtry grid is empty".into()));
    }
    let mut values = grid.to_vec();
    values.sort_unstable();
    values.dedup();
    let mut best: Option<Forest> = None;
    for m in values {
        let f = fit(d, &ForestConfig { mtry: m, ..*cfg })?;
        if f.degenerate {
            return Ok((f.config, f));
        }
        if best.as_ref().is_none_or(|b| f.oob_error < b.oob_error) {
            best = Some(f);
        }
    }
    let f = best.expect("grid is non-empty");
    Ok((f.config, f))
}

impl Forest {
    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Probability for a single point.
    #[inline]
    pub fn proba_one(&self, x: &[f64]) -> f64 {
        self.trees.iter().map(|t| t.predict(x)).sum::<f64>() / self.trees.len() as f64
    }

    /// Mean leaf fraction over trees, for every row.
    pub fn predict_proba(&self, points: &PointMatrix) -> Result<Vec<f64>> {
        if points.ncols() != self.d {
            return Err(Error::Shape { expected: self.d, got: points.ncols() });
        }
        Ok((0..points.nrows()).into_par_iter().with_min_len(256).map(|k| self.proba_one(points.row(k))).collect())
    }

    /// `1` where the probability is at least one half.
    pub fn predict_label(&self, points: &PointMatrix) -> Result<Vec<f64>> {
        Ok(self.predict_proba(points)?.into_iter().map(|p| if p >= 0.5 { 1.0 } else { 0.0 }).collect())
    }

    /// Text serialization, headed `sdre-forest v1`.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        let c = &self.config;
        writeln!(w, "sdre-forest v1")?;
        writeln!(
            w,
            "d {} trees {} mtry {} min_node {} seed {} oob {} degenerate {}",
            self.d,
            self.trees.len(),
            c.mtry,
            c.min_node,
            c.seed,
            self.oob_error,
            self.degenerate as u8
        )?;
        for t in &self.trees {
            writeln!(w, "tree {}", t.nodes.len())?;
            for n in &t.nodes {
                if n.feature == LEAF {
                    writeln!(w, "L {}", n.value)?;
                } else {
                    writeln!(w, "S {} {} {}", n.feature, n.value, n.left)?;
                }
            }
        }
        Ok(())
    }

    /// Parse the format written by [`Forest::write_to`].
    pub fn read_from<R: BufRead>(r: R) -> Result<Forest> {
        let mut lines = r.lines().enumerate();
        let mut next = || -> Result<(usize, String)> {
            match lines.next() {
                Some((i, l)) => Ok((i + 1, l?)),
                None => Err(Error::Data("forest file ended early".into())),
            }
        };
        let bad = |ln: usize, what: &str| Error::Data(format!("forest file line {ln}: {what}"));
        let (ln, head) = next()?;
        if head.trim() != "sdre-forest v1" {
            return Err(bad(ln, "unknown header"));
        }
        let (ln, meta) = next()?;
        let f: Vec<&str> = meta.split_whitespace().collect();
        if f.len() != 14 {
            return Err(bad(ln, "malformed metadata"));
        }
        let num = |i: usize| f[i].parse::<f64>().map_err(|_| bad(ln, "bad number"));
        let d = num(1)? as usize;
        let n_trees = num(3)? as usize;
        let config =
            ForestConfig { n_trees, mtry: num(5)? as usize, min_node: num(7)? as usize, seed: f[9].parse().map_err(|_| bad(ln, "bad seed"))? };
        let oob_error = num(11)?;
        let degenerate = num(13)? != 0.0;
        let mut trees = Vec::with_capacity(n_trees);
        for _ in 0..n_trees {
            let (ln, h) = next()?;
            let count: usize = h
                .strip_prefix("tree ")
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| bad(ln, "expected tree header"))?;
            let mut nodes = Vec::with_capacity(count);
            for _ in 0..count {
                let (ln, l) = next()?;
                let p: Vec<&str> = l.split_whitespace().collect();
                let node = match p.as_slice() {
                    ["L", v] => Node { feature: LEAF, left: 0, value: v.parse().map_err(|_| bad(ln, "bad leaf"))? },
                    ["S", f, v, l] => {
                        let feature: u32 = f.parse().map_err(|_| bad(ln, "bad feature"))?;
                        let left: u32 = l.parse().map_err(|_| bad(ln, "bad child"))?;
                        if feature as usize >= d || left as usize + 1 >= count {
                            return Err(bad(ln, "node reference out of range"));
                        }
                        Node { feature, left, value: v.parse().map_err(|_| bad(ln, "bad threshold"))? }
                    }
                    _ => return Err(bad(ln, "malformed node")),
                };
                nodes.push(node);
            }
            trees.push(Tree { nodes });
        }
        Ok(Forest { trees, d, config, oob_error, degenerate })
    }
}
