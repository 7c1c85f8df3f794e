//! Axis-aligned hyperboxes.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// An axis-aligned box `lower_i <= x_i <= upper_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperBox {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl HyperBox {
    /// Build a box, rejecting mismatched lengths, non-finite bounds and `lower > upper`.
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() {
            return Err(Error::InvalidBox("zero dimensions".into()));
        }
        if lower.len() != upper.len() {
            return Err(Error::Shape { expected: lower.len(), got: upper.len() });
        }
        for (i, (l, u)) in lower.iter().zip(&upper).enumerate() {
            if !l.is_finite() || !u.is_finite() {
                return Err(Error::InvalidBox(format!("non-finite bound in dimension {}", i + 1)));
            }
            if l > u {
                return Err(Error::InvalidBox(format!("lower {l} > upper {u} in dimension {}", i + 1)));
            }
        }
        Ok(Self { lower, upper })
    }

    /// The unit cube `[0, 1]^d`.
    pub fn unit(d: usize) -> Self {
        Self { lower: vec![0.0; d], upper: vec![1.0; d] }
    }

    /// Box from `(lower, upper)` pairs.
    pub fn from_bounds(bounds: &[(f64, f64)]) -> Result<Self> {
        Self::new(bounds.iter().map(|b| b.0).collect(), bounds.iter().map(|b| b.1).collect())
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn width(&self, i: usize) -> f64 {
        self.upper[i] - self.lower[i]
    }

    pub(crate) fn set_lower(&mut self, i: usize, v: f64) {
        self.lower[i] = v;
    }

    pub(crate) fn set_upper(&mut self, i: usize, v: f64) {
        self.upper[i] = v;
    }

    /// Membership test with inclusive bounds. Panics-free: mismatched lengths yield `false`.
    #[inline]
    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.lower.len()
            && x.iter().zip(self.lower.iter().zip(&self.upper)).all(|(v, (l, u))| *l <= *v && *v <= *u)
    }

    /// Membership test that reports a dimension mismatch.
    pub fn try_contains(&self, x: &[f64]) -> Result<bool> {
        if x.len() != self.dim() {
            return Err(Error::Shape { expected: self.dim(), got: x.len() });
        }
        Ok(self.contains(x))
    }

    pub fn volume(&self) -> f64 {
        (0..self.dim()).map(|i| self.width(i)).product()
    }

    /// Intersection, or `None` when the boxes are disjoint in some dimension.
    pub fn intersect(&self, other: &HyperBox) -> Option<HyperBox> {
        if other.dim() != self.dim() {
            return None;
        }
        let mut lower = Vec::with_capacity(self.dim());
        let mut upper = Vec::with_capacity(self.dim());
        for i in 0..self.dim() {
            let l = self.lower[i].max(other.lower[i]);
            let u = self.upper[i].min(other.upper[i]);
            if l > u {
                return None;
            }
            lower.push(l);
            upper.push(u);
        }
        Some(HyperBox { lower, upper })
    }

    /// `self ⊆ other` by exact bound comparison.
    pub fn is_subset_of(&self, other: &HyperBox) -> bool {
        self.dim() == other.dim()
            && (0..self.dim()).all(|i| self.lower[i] >= other.lower[i] && self.upper[i] <= other.upper[i])
    }

    /// Express the box in coordinates where `reference` is the unit cube.
    /// Zero-width reference dimensions map to `[0, 0]`.
    pub fn normalized(&self, reference: &HyperBox) -> HyperBox {
        let map = |v: f64, i: usize| {
            let w = reference.width(i);
            if w > 0.0 {
                (v - reference.lower[i]) / w
            } else {
                0.0
            }
        };
        HyperBox {
            lower: (0..self.dim()).map(|i| map(self.lower[i], i)).collect(),
            upper: (0..self.dim()).map(|i| map(self.upper[i], i)).collect(),
        }
    }

    /// Volume as a fraction of `reference`'s volume.
    pub fn volume_fraction(&self, reference: &HyperBox) -> f64 {
        self.normalized(reference).volume()
    }
}

impl std::fmt::Display for HyperBox {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.dim() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}:{}:{}", i + 1, self.lower[i], self.upper[i])?;
        }
        Ok(())
    }
}

/// Parses the `1:l1:u1 2:l2:u2 ...` form produced by `Display`.
impl std::str::FromStr for HyperBox {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lower = Vec::new();
        let mut upper = Vec::new();
        for (k, f) in s.split_whitespace().enumerate() {
            let bad = || Error::InvalidBox(format!("malformed field '{f}'"));
            let mut parts = f.split(':');
            let (Some(i), Some(l), Some(u), None) = (parts.next(), parts.next(), parts.next(), parts.next()) else {
                return Err(bad());
            };
            if i.parse::<usize>().ok() != Some(k + 1) {
                return Err(bad());
            }
            lower.push(l.parse::<f64>().map_err(|_| bad())?);
            upper.push(u.parse::<f64>().map_err(|_| bad())?);
        }
        HyperBox::new(lower, upper)
    }
}
