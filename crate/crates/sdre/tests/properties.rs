use proptest::prelude::*;
use sdre::dgp::flip_noise;
use sdre::forest::{fit, ForestConfig};
use sdre::metrics::{consistency, coverage_density, dominates, pareto_front, trajectory_auc};
use sdre::prelude::*;
use sdre::prim::Side;
use sdre::sampling::{halton_sample, lhs_sample, uniform_sample};

fn arb_box(max_d: usize) -> impl Strategy<Value = HyperBox> {
    prop::collection::vec((-100.0f64..100.0, 0.0f64..50.0), 1..=max_d).prop_map(|v| {
        HyperBox::from_bounds(&v.iter().map(|(l, w)| (*l, l + w)).collect::<Vec<_>>()).unwrap()
    })
}

/// Random dataset in the unit cube with labels from a noisy rule, plus a validation set.
fn arb_data() -> impl Strategy<Value = (Dataset, Dataset, usize)> {
    (1usize..=4, 40usize..160, any::<u64>(), 0.0f64..1.0).prop_map(|(d, n, seed, p)| {
        let b = HyperBox::unit(d);
        let make = |s: u64| {
            let x = uniform_sample(n, &b, s).unwrap();
            let noise = uniform_sample(n, &HyperBox::unit(1), s ^ 0xabc).unwrap();
            // quantize the first coordinate so ties occur
            let rows: Vec<Vec<f64>> = x
                .rows()
                .map(|r| {
                    let mut r = r.to_vec();
                    r[0] = (r[0] * 8.0).floor() / 8.0;
                    r
                })
                .collect();
            let y = rows
                .iter()
                .zip(noise.rows())
                .map(|(r, u)| if (r[0] > 0.5) != (u[0] < p * 0.3) { 1.0 } else { 0.0 })
                .collect();
            Dataset::new(PointMatrix::from_rows(&rows, b.clone()).unwrap(), y).unwrap()
        };
        (make(seed), make(seed.wrapping_add(1)), d)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn samplers_respect_bounds(b in arb_box(8), n in 0usize..60, seed in any::<u64>()) {
        for x in [uniform_sample(n, &b, seed).unwrap(), halton_sample(n, &b, seed % 10_000).unwrap()] {
            prop_assert_eq!(x.nrows(), n);
            prop_assert!(x.rows().all(|r| b.contains(r)));
        }
        if n > 0 {
            prop_assert!(lhs_sample(n, &b, seed).unwrap().rows().all(|r| b.contains(r)));
        }
    }

    #[test]
    fn lhs_hits_every_stratum_once(d in 1usize..6, k in 0usize..3, seed in any::<u64>()) {
        let n = [4, 40, 400][k];
        let x = lhs_sample(n, &HyperBox::unit(d), seed).unwrap();
        for i in 0..d {
            let mut counts = vec![0; n];
            for r in x.rows() {
                counts[((r[i] * n as f64) as usize).min(n - 1)] += 1;
            }
            prop_assert!(counts.iter().all(|&c| c == 1));
        }
    }

    #[test]
    fn halton_is_stateless(b in arb_box(12), n in 1usize..40, s in 0u64..200) {
        let tail = halton_sample(n, &b, s).unwrap();
        let whole = halton_sample(n + s as usize, &b, 0).unwrap();
        for k in 0..n {
            prop_assert_eq!(tail.row(k), whole.row(s as usize + k));
        }
    }

    #[test]
    fn flip_changes_exact_count(n in 1usize..300, level in 0.0f64..=0.5, seed in any::<u64>()) {
        let y: Vec<f64> = (0..n).map(|k| (k % 3 == 0) as u8 as f64).collect();
        let z = flip_noise(&y, level, seed).unwrap();
        let changed = y.iter().zip(&z).filter(|(a, b)| a != b).count();
        prop_assert_eq!(changed, (level * n as f64).round() as usize);
    }

    #[test]
    fn coverage_density_ranges((d, _, dim) in arb_data(), cut in 0.0f64..1.0, cut2 in 0.0f64..1.0) {
        prop_assume!(d.y.iter().any(|v| *v > 0.0));
        let b0 = HyperBox::unit(dim);
        let s0 = coverage_density(&b0, &d).unwrap();
        prop_assert_eq!(s0.coverage, 1.0);
        let mut lo = vec![0.0; dim];
        lo[0] = cut.min(cut2);
        let outer = HyperBox::new(lo.clone(), vec![1.0; dim]).unwrap();
        lo[0] = cut.max(cut2);
        let inner = HyperBox::new(lo, vec![1.0; dim]).unwrap();
        let (so, si) = (coverage_density(&outer, &d).unwrap(), coverage_density(&inner, &d).unwrap());
        for s in [&so, &si] {
            prop_assert!((0.0..=1.0).contains(&s.coverage));
            prop_assert!(s.density.is_none_or(|v| (0.0..=1.0).contains(&v)));
        }
        prop_assert!(si.coverage <= so.coverage);
    }

    #[test]
    fn auc_is_monotone_in_density(
        pts in prop::collection::vec((0.0f64..=1.0, 0.0f64..=1.0), 1..12),
        k in any::<prop::sample::Index>(),
        bump in 0.0f64..1.0,
    ) {
        let mut pts = pts;
        pts.push((1.0, 0.1));
        let base = trajectory_auc(&pts);
        let k = k.index(pts.len());
        pts[k].1 = (pts[k].1 + bump).min(1.0);
        prop_assert!(trajectory_auc(&pts) >= base - 1e-12);
    }

    #[test]
    fn pareto_matches_brute_force(pts in prop::collection::vec((0u8..6, 0u8..6), 0..30)) {
        let pts: Vec<(f64, f64)> = pts.iter().map(|(a, b)| (*a as f64 / 5.0, *b as f64 / 5.0)).collect();
        let mut front = pareto_front(&pts);
        front.sort_unstable();
        let brute: Vec<usize> = (0..pts.len()).filter(|&i| !pts.iter().any(|q| dominates(*q, pts[i]))).collect();
        prop_assert_eq!(&front, &brute);
        for i in 0..pts.len() {
            if !front.contains(&i) {
                prop_assert!(front.iter().any(|&j| dominates(pts[j], pts[i])));
            }
        }
    }

    #[test]
    fn consistency_properties(
        a in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 3),
        b in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 3),
        scale in prop::collection::vec((0.1f64..10.0, -5.0f64..5.0), 3),
    ) {
        let mk = |v: &[(f64, f64)]| HyperBox::from_bounds(&v.iter().map(|(x, y)| (x.min(*y), x.max(*y))).collect::<Vec<_>>()).unwrap();
        let (ba, bb, b0) = (mk(&a), mk(&b), HyperBox::unit(3));
        let c = consistency(&ba, &bb, &b0).unwrap();
        prop_assert!((0.0..=1.0).contains(&c));
        prop_assert_eq!(c, consistency(&bb, &ba, &b0).unwrap());
        prop_assert_eq!(consistency(&ba, &ba, &b0).unwrap(), 1.0);
        let map = |h: &HyperBox| {
            HyperBox::from_bounds(
                &(0..3).map(|i| (scale[i].0 * h.lower()[i] + scale[i].1, scale[i].0 * h.upper()[i] + scale[i].1)).collect::<Vec<_>>(),
            )
            .unwrap()
        };
        let c2 = consistency(&map(&ba), &map(&bb), &map(&b0)).unwrap();
        prop_assert!((c - c2).abs() < 1e-9, "{} vs {}", c, c2);
    }
}

#[test]
fn disjoint_boxes_have_zero_consistency() {
    let b0 = HyperBox::unit(2);
    let a = HyperBox::from_bounds(&[(0.0, 0.4), (0.0, 1.0)]).unwrap();
    let b = HyperBox::from_bounds(&[(0.5, 1.0), (0.0, 1.0)]).unwrap();
    assert_eq!(consistency(&a, &b, &b0).unwrap(), 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn peel_invariants((d, d_val, dim) in arb_data(), alpha in 0.02f64..0.3, minpts in 1usize..25) {
        let b0 = HyperBox::unit(dim);
        let cfg = PeelConfig { alpha, minpts, ..PeelConfig::default() };
        let seq = peel(&d, &d_val, &b0, &cfg).unwrap();
        prop_assert_eq!(&seq.boxes[0], &b0);
        prop_assert_eq!(format!("{seq:?}"), format!("{:?}", peel(&d, &d_val, &b0, &cfg).unwrap()));
        let best = seq.val_means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        prop_assert_eq!(seq.val_means[seq.selected_index], best);
        prop_assert!(seq.val_means[..seq.selected_index].iter().all(|v| *v < best));

        for (j, cut) in seq.cuts.iter().enumerate() {
            let (outer, inner) = (&seq.boxes[j], &seq.boxes[j + 1]);
            prop_assert!(inner.is_subset_of(outer));
            // replay the step: every candidate's retained mean is at most the chosen one
            let idx = d.indices_in(outer);
            let n = idx.len();
            prop_assert_eq!(n, seq.n_train[j]);
            let r = n - ((1.0 - alpha) * n as f64).ceil() as usize;
            prop_assert!(seq.n_train[j + 1] < n && seq.n_train[j + 1] >= n - r);
            let mut chosen = None;
            for i in 0..dim {
                let mut col: Vec<f64> = idx.iter().map(|&k| d.x.get(k, i)).collect();
                col.sort_by(f64::total_cmp);
                for (side, thr) in [(Side::Lower, col[r]), (Side::Upper, col[n - 1 - r])] {
                    let kept: Vec<usize> = idx
                        .iter()
                        .copied()
                        .filter(|&k| match side {
                            Side::Lower => d.x.get(k, i) >= thr,
                            Side::Upper => d.x.get(k, i) <= thr,
                        })
                        .collect();
                    if kept.len() == n {
                        continue;
                    }
                    let m = kept.iter().map(|&k| d.y[k]).sum::<f64>() / kept.len() as f64;
                    prop_assert!(m <= cut.mean + 1e-12);
                    if i == cut.dim && side == cut.side {
                        chosen = Some((m, thr));
                    }
                }
            }
            let (m, thr) = chosen.unwrap();
            prop_assert!((m - cut.mean).abs() < 1e-12);
            prop_assert_eq!(thr, cut.bound);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn forest_label_is_thresholded_proba((d, d_val, _) in arb_data(), seed in any::<u64>()) {
        prop_assume!(d.y.iter().any(|v| *v > 0.0) && d.y.iter().any(|v| *v < 1.0));
        let f = fit(&d, &ForestConfig { n_trees: 15, seed, ..ForestConfig::default() }).unwrap();
        prop_assert_eq!(f.n_trees(), 15);
        let p = f.predict_proba(&d_val.x).unwrap();
        let l = f.predict_label(&d_val.x).unwrap();
        for (p, l) in p.iter().zip(&l) {
            prop_assert!((0.0..=1.0).contains(p));
            prop_assert_eq!(*l, if *p >= 0.5 { 1.0 } else { 0.0 });
        }
    }
}
