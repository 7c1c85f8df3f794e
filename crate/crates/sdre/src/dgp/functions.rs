//! Explicit benchmark functions.

use super::{Dgp, DgpSpec};
use crate::error::Result;
use crate::geometry::HyperBox;
use std::f64::consts::PI;
use std::sync::Arc;

/// A continuous function labelled `y = 1` where its output is strictly below the threshold.
pub struct ExplicitDgp {
    spec: DgpSpec,
    f: fn(&[f64]) -> f64,
}

impl ExplicitDgp {
    pub fn new(spec: DgpSpec, f: fn(&[f64]) -> f64) -> Self {
        Self { spec, f }
    }
}

impl Dgp for ExplicitDgp {
    fn spec(&self) -> &DgpSpec {
        &self.spec
    }

    fn label(&self, x: &[f64]) -> Result<f64> {
        let thr = self.spec.threshold.unwrap_or(0.0);
        Ok(if (self.f)(x) < thr { 1.0 } else { 0.0 })
    }

    fn raw(&self, x: &[f64]) -> Option<f64> {
        Some((self.f)(x))
    }
}

/// A process defined directly by a binary rule.
pub struct RuleDgp {
    spec: DgpSpec,
    rule: fn(&[f64]) -> bool,
}

impl RuleDgp {
    pub fn new(spec: DgpSpec, rule: fn(&[f64]) -> bool) -> Self {
        Self { spec, rule }
    }
}

impl Dgp for RuleDgp {
    fn spec(&self) -> &DgpSpec {
        &self.spec
    }

    fn label(&self, x: &[f64]) -> Result<f64> {
        Ok(if (self.rule)(x) { 1.0 } else { 0.0 })
    }
}

fn spec(name: &str, influential: usize, b: HyperBox, threshold: Option<f64>, noise: f64, share: f64) -> DgpSpec {
    DgpSpec {
        name: name.to_string(),
        d: b.dim(),
        influential,
        input_box: b,
        threshold,
        intrinsic_noise: noise,
        expected_share: share,
    }
}

pub(super) fn builtin() -> Vec<Arc<dyn Dgp>> {
    let cube = HyperBox::unit;
    let ishigami_box = HyperBox::new(vec![-PI; 3], vec![PI; 3]).expect("static box");
    let borehole_box = HyperBox::new(BOREHOLE_LO.to_vec(), BOREHOLE_HI.to_vec()).expect("static box");
    vec![
        Arc::new(RuleDgp::new(spec("dgp3", 2, cube(5), None, 0.002, 0.082), dgp3)),
        Arc::new(ExplicitDgp::new(spec("ellipse", 10, cube(15), Some(0.8), 0.0, 0.225), ellipse)),
        Arc::new(ExplicitDgp::new(spec("morris", 20, cube(20), Some(20.0), 0.0, 0.301), morris)),
        Arc::new(ExplicitDgp::new(spec("sobol", 8, cube(8), Some(0.7), 0.0, 0.392), sobol_g)),
        Arc::new(ExplicitDgp::new(spec("ishigami", 3, ishigami_box, Some(1.0), 0.0, 0.255), ishigami)),
        Arc::new(ExplicitDgp::new(spec("borehole", 8, borehole_box, Some(1000.0), 0.0, 0.309), borehole)),
        Arc::new(ExplicitDgp::new(spec("hart3", 3, cube(3), Some(-1.0), 0.0, 0.335), hart3)),
        Arc::new(ExplicitDgp::new(spec("hart4", 4, cube(4), Some(-0.5), 0.0, 0.301), hart4)),
        Arc::new(ExplicitDgp::new(spec("hart6sc", 6, cube(6), Some(1.0), 0.0, 0.226), hart6sc)),
        Arc::new(ExplicitDgp::new(spec("moon10low", 3, cube(3), Some(1.5), 0.0, 0.456), moon10low)),
    ]
}

/// `y = 1` iff `x1 > 0.6` and `x2 > 0.8`.
pub fn dgp3(x: &[f64]) -> bool {
    x[0] > 0.6 && x[1] > 0.8
}

pub const ELLIPSE_W: [f64; 15] =
    [0.353, 0.434, 0.899, 0.373, 0.278, 0.164, 0.927, 0.769, 0.975, 0.606, 0.0, 0.0, 0.0, 0.0, 0.0];
pub const ELLIPSE_C: [f64; 15] =
    [0.975, 0.843, 0.772, 0.325, 0.805, 0.945, 0.221, 0.732, 0.289, 0.6, 0.0, 0.0, 0.0, 0.0, 0.0];

/// Weighted distance to the ellipse centre.
pub fn ellipse(x: &[f64]) -> f64 {
    x.iter().zip(ELLIPSE_W.iter().zip(&ELLIPSE_C)).map(|(v, (w, c))| w * (v - c) * (v - c)).sum::<f64>().sqrt()
}

/// Morris screening function with 20 inputs.
pub fn morris(x: &[f64]) -> f64 {
    let mut w = [0.0; 20];
    for i in 0..20 {
        w[i] = if matches!(i, 2 | 4 | 6) {
            2.0 * (1.1 * x[i] / (x[i] + 0.1) - 0.5)
        } else {
            2.0 * (x[i] - 0.5)
        };
    }
    let sign = |k: usize| if k % 2 == 0 { 1.0 } else { -1.0 };
    let mut y = 0.0;
    for i in 0..20 {
        // 1-based index i+1
        let b = if i < 10 { 20.0 } else { sign(i + 1) };
        y += b * w[i];
    }
    for i in 0..20 {
        for j in i + 1..20 {
            let b = if j < 6 { -15.0 } else { sign(i + j + 2) };
            y += b * w[i] * w[j];
        }
    }
    for i in 0..5 {
        for j in i + 1..5 {
            for l in j + 1..5 {
                y -= 10.0 * w[i] * w[j] * w[l];
            }
        }
    }
    y + 5.0 * w[0] * w[1] * w[2] * w[3]
}

const SOBOL_A: [f64; 8] = [0.0, 1.0, 4.5, 9.0, 99.0, 99.0, 99.0, 99.0];

/// Sobol' g-function.
pub fn sobol_g(x: &[f64]) -> f64 {
    x.iter().zip(&SOBOL_A).map(|(v, a)| ((4.0 * v - 2.0).abs() + a) / (1.0 + a)).product()
}

/// Ishigami function with `a = 7`, `b = 0.1`.
pub fn ishigami(x: &[f64]) -> f64 {
    let s2 = x[1].sin();
    x[0].sin() + 7.0 * s2 * s2 + 0.1 * x[2].powi(4) * x[0].sin()
}

const BOREHOLE_LO: [f64; 8] = [0.05, 100.0, 63070.0, 990.0, 63.1, 700.0, 1120.0, 9855.0];
const BOREHOLE_HI: [f64; 8] = [0.15, 50000.0, 115600.0, 1110.0, 116.0, 820.0, 1680.0, 12045.0];

/// Water flow through a borehole; inputs `(rw, r, Tu, Hu, Tl, Hl, L, Kw)`.
pub fn borehole(x: &[f64]) -> f64 {
    let (rw, r, tu, hu, tl, hl, l, kw) = (x[0], x[1], x[2], x[3], x[4], x[5], x[6], x[7]);
    let lr = (r / rw).ln();
    2.0 * PI * tu * (hu - hl) / (lr * (1.0 + 2.0 * l * tu / (lr * rw * rw * kw) + tu / tl))
}

const HART_ALPHA: [f64; 4] = [1.0, 1.2, 3.0, 3.2];
const HART3_A: [[f64; 3]; 4] = [[3.0, 10.0, 30.0], [0.1, 10.0, 35.0], [3.0, 10.0, 30.0], [0.1, 10.0, 35.0]];
const HART3_P: [[f64; 3]; 4] = [
    [0.3689, 0.1170, 0.2673],
    [0.4699, 0.4387, 0.7470],
    [0.1091, 0.8732, 0.5547],
    [0.0381, 0.5743, 0.8828],
];
const HART6_A: [[f64; 6]; 4] = [
    [10.0, 3.0, 17.0, 3.5, 1.7, 8.0],
    [0.05, 10.0, 17.0, 0.1, 8.0, 14.0],
    [3.0, 3.5, 1.7, 10.0, 17.0, 8.0],
    [17.0, 8.0, 0.05, 10.0, 0.1, 14.0],
];
const HART6_P: [[f64; 6]; 4] = [
    [0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886],
    [0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991],
    [0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650],
    [0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381],
];

fn hartmann_sum(x: &[f64], a: &[&[f64]; 4], p: &[&[f64]; 4]) -> f64 {
    (0..4)
        .map(|i| {
            let inner: f64 = x.iter().enumerate().map(|(j, v)| a[i][j] * (v - p[i][j]).powi(2)).sum();
            HART_ALPHA[i] * (-inner).exp()
        })
        .sum()
}

/// Hartmann 3-D function.
pub fn hart3(x: &[f64]) -> f64 {
    let a = [&HART3_A[0][..], &HART3_A[1][..], &HART3_A[2][..], &HART3_A[3][..]];
    let p = [&HART3_P[0][..], &HART3_P[1][..], &HART3_P[2][..], &HART3_P[3][..]];
    -hartmann_sum(x, &a, &p)
}

fn hart6_sum(x: &[f64]) -> f64 {
    let k = x.len();
    let a = [&HART6_A[0][..k], &HART6_A[1][..k], &HART6_A[2][..k], &HART6_A[3][..k]];
    let p = [&HART6_P[0][..k], &HART6_P[1][..k], &HART6_P[2][..k], &HART6_P[3][..k]];
    hartmann_sum(x, &a, &p)
}

/// Rescaled Hartmann 4-D function.
pub fn hart4(x: &[f64]) -> f64 {
    (1.1 - hart6_sum(&x[..4])) / 0.839
}

/// Log-transformed Hartmann 6-D function.
pub fn hart6sc(x: &[f64]) -> f64 {
    -hart6_sum(&x[..6]).ln()
}

/// Moon (2010) three-input low-dimensional function.
pub fn moon10low(x: &[f64]) -> f64 {
    x[0] + x[1] + 3.0 * x[0] * x[2]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dgp3_rule() {
        assert!(dgp3(&[0.7, 0.9, 0.1, 0.1, 0.1]));
        assert!(!dgp3(&[0.5, 0.9, 0.1, 0.1, 0.1]));
    }

    #[test]
    fn ellipse_vanishes_at_centre() {
        assert_eq!(ellipse(&ELLIPSE_C), 0.0);
    }

    #[test]
    fn known_values() {
        // Hartmann minima
        let h3 = hart3(&[0.114614, 0.555649, 0.852547]);
        assert!((h3 + 3.86278).abs() < 1e-4, "{h3}");
        let x6 = [0.20169, 0.150011, 0.476874, 0.275332, 0.311652, 0.6573];
        assert!((hart6sc(&x6) + 3.32237f64.ln()).abs() < 1e-4);
        // g-function equals 1 when every factor is 1
        assert!((sobol_g(&[0.75; 8]) - 1.0).abs() < 1e-12);
        assert!((ishigami(&[0.0, PI / 2.0, 1.0]) - 7.0).abs() < 1e-12);
        assert_eq!(moon10low(&[0.5, 0.25, 1.0]), 2.25);
        let bh = borehole(&[0.1, 25050.0, 89335.0, 1050.0, 89.55, 760.0, 1400.0, 10950.0]);
        // 2π·89335·290 / (ln(250500)·(1 + 2·1400·89335/(ln(250500)·0.01·10950) + 89335/89.55))
        assert!((bh - 70.873).abs() < 1e-3, "{bh}");
    }
}
