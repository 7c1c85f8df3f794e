//! Seeded uniform, Latin hypercube and Halton point sets.

use crate::dataset::PointMatrix;
use crate::error::{Error, Result};
use crate::geometry::HyperBox;
use crate::rng;
use rand::seq::SliceRandom;
use rand::Rng;

/// Prime bases for Halton points, one per dimension.
pub const HALTON_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn check_box(b: &HyperBox) -> Result<()> {
    for i in 0..b.dim() {
        if !(b.lower()[i] <= b.upper()[i]) {
            return Err(Error::InvalidBox(format!("dimension {} is inverted", i + 1)));
        }
    }
    Ok(())
}

#[inline]
fn scale(b: &HyperBox, i: usize, u: f64) -> f64 {
    (b.lower()[i] + u * b.width(i)).min(b.upper()[i])
}

/// `n` i.i.d. points, uniform on `b`.
pub fn uniform_sample(n: usize, b: &HyperBox, seed: u64) -> Result<PointMatrix> {
    check_box(b)?;
    let d = b.dim();
    let mut r = rng::rng(seed);
    let mut data = Vec::with_capacity(n * d);
    for _ in 0..n {
        for i in 0..d {
            data.push(scale(b, i, r.random::<f64>()));
        }
    }
    Ok(PointMatrix::from_raw(data, b.clone()))
}

/// Plain Latin hypercube: one point per stratum in every dimension, jittered uniformly.
pub fn lhs_sample(n: usize, b: &HyperBox, seed: u64) -> Result<PointMatrix> {
    check_box(b)?;
    if n == 0 {
        return Err(Error::Config("LHS needs at least one point".into()));
    }
    let d = b.dim();
    let mut r = rng::rng(seed);
    let mut data = vec![0.0; n * d];
    let mut perm: Vec<usize> = (0..n).collect();
    for i in 0..d {
        perm.shuffle(&mut r);
        for (k, &s) in perm.iter().enumerate() {
            let u = (s as f64 + r.random::<f64>()) / n as f64;
            // keep rounding from pushing a point into the next stratum
            let lo = s as f64 / n as f64;
            let hi = ((s + 1) as f64 / n as f64).next_down();
            data[k * d + i] = scale(b, i, u.clamp(lo, hi));
        }
    }
    Ok(PointMatrix::from_raw(data, b.clone()))
}

/// Van der Corput radical inverse of `index` in `base`.
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while index > 0 {
        r += f * (index % base) as f64;
        index /= base;
        f *= inv;
    }
    r
}

/// Unscrambled Halton points with indices `skip+1 ..= skip+n`, scaled into `b`.
pub fn halton_sample(n: usize, b: &HyperBox, skip: u64) -> Result<PointMatrix> {
    check_box(b)?;
    let d = b.dim();
    if d > HALTON_PRIMES.len() {
        return Err(Error::UnsupportedDimension(d, HALTON_PRIMES.len()));
    }
    let mut data = Vec::with_capacity(n * d);
    for k in 0..n as u64 {
        for (i, &p) in HALTON_PRIMES[..d].iter().enumerate() {
            data.push(scale(b, i, radical_inverse(skip + k + 1, p)));
        }
    }
    Ok(PointMatrix::from_raw(data, b.clone()))
}

/// Sampler selector used by configuration and the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sampler {
    Uniform,
    Lhs,
    Halton,
}

impl std::str::FromStr for Sampler {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Sampler::Uniform),
            "lhs" => Ok(Sampler::Lhs),
            "halton" => Ok(Sampler::Halton),
            _ => Err(Error::Config(format!("sampler '{s}' is not one of uniform, lhs, halton"))),
        }
    }
}

impl Sampler {
    /// Draw `n` points; `seed` doubles as the Halton skip.
    pub fn sample(self, n: usize, b: &HyperBox, seed: u64) -> Result<PointMatrix> {
        match self {
            Sampler::Uniform => uniform_sample(n, b, seed),
            Sampler::Lhs => lhs_sample(n, b, seed),
            Sampler::Halton => halton_sample(n, b, seed),
        }
    }
}
