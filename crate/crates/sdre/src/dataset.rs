//! Point matrices and labelled datasets.

use crate::error::{Error, Result};
use crate::geometry::HyperBox;

/// `n × D` points stored row-major, together with the box they were drawn in.
#[derive(Debug, Clone, PartialEq)]
pub struct PointMatrix {
    data: Vec<f64>,
    n: usize,
    bounds: HyperBox,
}

impl PointMatrix {
    /// Wrap row-major data. Every coordinate must lie inside `bounds`.
    pub fn new(data: Vec<f64>, bounds: HyperBox) -> Result<Self> {
        let d = bounds.dim();
        if data.len() % d != 0 {
            return Err(Error::Shape { expected: d, got: data.len() % d });
        }
        let n = data.len() / d;
        for (k, row) in data.chunks_exact(d).enumerate() {
            if !bounds.contains(row) {
                return Err(Error::Data(format!("row {} lies outside the input box", k + 1)));
            }
        }
        Ok(Self { data, n, bounds })
    }

    /// Build from rows, taking the bounding box as their reference box.
    pub fn from_rows(rows: &[Vec<f64>], bounds: HyperBox) -> Result<Self> {
        let d = bounds.dim();
        let mut data = Vec::with_capacity(rows.len() * d);
        for r in rows {
            if r.len() != d {
                return Err(Error::Shape { expected: d, got: r.len() });
            }
            data.extend_from_slice(r);
        }
        Self::new(data, bounds)
    }

    pub(crate) fn from_raw(data: Vec<f64>, bounds: HyperBox) -> Self {
        let n = data.len() / bounds.dim();
        Self { data, n, bounds }
    }

    pub fn empty(bounds: HyperBox) -> Self {
        Self { data: Vec::new(), n: 0, bounds }
    }

    pub fn nrows(&self) -> usize {
        self.n
    }

    pub fn ncols(&self) -> usize {
        self.bounds.dim()
    }

    pub fn bounds(&self) -> &HyperBox {
        &self.bounds
    }

    #[inline]
    pub fn row(&self, k: usize) -> &[f64] {
        let d = self.ncols();
        &self.data[k * d..(k + 1) * d]
    }

    #[inline]
    pub fn get(&self, k: usize, i: usize) -> f64 {
        self.data[k * self.ncols() + i]
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, f64> {
        self.data.chunks_exact(self.ncols())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Rows selected by index, in the given order.
    pub fn select(&self, idx: &[usize]) -> PointMatrix {
        let d = self.ncols();
        let mut data = Vec::with_capacity(idx.len() * d);
        for &k in idx {
            data.extend_from_slice(self.row(k));
        }
        PointMatrix { data, n: idx.len(), bounds: self.bounds.clone() }
    }
}

/// Points plus labels in `[0, 1]`; `y = 1` marks cases of interest.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub x: PointMatrix,
    pub y: Vec<f64>,
}

impl Dataset {
    pub fn new(x: PointMatrix, y: Vec<f64>) -> Result<Self> {
        if x.nrows() != y.len() {
            return Err(Error::Shape { expected: x.nrows(), got: y.len() });
        }
        if let Some(k) = y.iter().position(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::InvalidLabel(format!("label {} at row {} outside [0, 1]", y[k], k + 1)));
        }
        Ok(Self { x, y })
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.x.ncols()
    }

    pub fn mean_y(&self) -> f64 {
        if self.y.is_empty() {
            return f64::NAN;
        }
        self.y.iter().sum::<f64>() / self.y.len() as f64
    }

    /// True when every label is exactly 0 or 1.
    pub fn is_binary(&self) -> bool {
        self.y.iter().all(|v| *v == 0.0 || *v == 1.0)
    }

    pub fn select(&self, idx: &[usize]) -> Dataset {
        Dataset { x: self.x.select(idx), y: idx.iter().map(|&k| self.y[k]).collect() }
    }

    /// Indices of rows inside `b`.
    pub fn indices_in(&self, b: &HyperBox) -> Vec<usize> {
        (0..self.len()).filter(|&k| b.contains(self.x.row(k))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_checks() {
        let b = HyperBox::unit(2);
        assert!(PointMatrix::new(vec![0.1, 0.2, 0.3], b.clone()).is_err());
        assert!(PointMatrix::new(vec![0.1, 1.2], b.clone()).is_err());
        let x = PointMatrix::new(vec![0.1, 0.2, 0.3, 0.4], b.clone()).unwrap();
        assert_eq!(x.nrows(), 2);
        assert_eq!(x.row(1), &[0.3, 0.4]);
        assert!(Dataset::new(x.clone(), vec![1.0]).is_err());
        assert!(Dataset::new(x.clone(), vec![1.0, 2.0]).is_err());
        let d = Dataset::new(x, vec![1.0, 0.0]).unwrap();
        assert_eq!(d.mean_y(), 0.5);
        assert_eq!(d.select(&[1]).y, vec![0.0]);
    }
}
