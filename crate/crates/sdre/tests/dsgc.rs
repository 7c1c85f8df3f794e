use sdre::dgp::dsgc::{amplification, dsgc_simulate, DsgcParams, SimConfig};
use sdre::sampling::halton_sample;

fn probe() -> Vec<DsgcParams> {
    let x = halton_sample(100, &DsgcParams::input_box(), 0).unwrap();
    x.rows().map(|r| DsgcParams::from_point(r).unwrap()).collect()
}

#[test]
fn labels_ignore_consumer_order() {
    let cfg = SimConfig::default();
    for (k, p) in probe().iter().enumerate() {
        let perm = [[1, 2, 3, 0], [3, 2, 1, 0], [2, 0, 3, 1]][k % 3];
        let q = p.permuted(perm);
        assert_eq!(dsgc_simulate(p, &cfg).unwrap(), dsgc_simulate(&q, &cfg).unwrap(), "point {k}");
    }
}

#[test]
fn halving_the_step_keeps_every_label() {
    let coarse = SimConfig::default();
    let fine = SimConfig { step: coarse.step / 2.0, ..coarse };
    let mut worst: f64 = 0.0;
    for (k, p) in probe().iter().enumerate() {
        let (a, b) = (amplification(p, &coarse).unwrap(), amplification(p, &fine).unwrap());
        worst = worst.max((a - b).abs() / a.max(1.0));
        assert_eq!(a > coarse.residual, b > fine.residual, "point {k}: {a} vs {b}");
    }
    assert!(worst < 1e-2, "{worst}");
}

#[test]
fn share_on_halton_probe_is_near_calibration() {
    let cfg = SimConfig::default();
    let y: f64 = probe().iter().map(|p| dsgc_simulate(p, &cfg).unwrap()).sum();
    // 53.7% expected; 100 points give a standard error of about 5 points
    assert!((y / 100.0 - 0.537).abs() < 0.15, "{y}");
}
