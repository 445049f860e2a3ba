use proptest::prelude::*;

use crate::io::{format_spot_list, parse_spot_list, PhaseLut};
use crate::kernels::{reduce_complex, Executor};
use crate::metrics::{evaluate, uniformity};
use crate::optics::{wrap_phase, PupilConfig, Spot, SpotSet};
use crate::scenarios::{grid_scenario, Rotation};
use crate::solvers::{wgs, CostModel};
use num_complex::Complex64;

fn distance(a: &Spot, b: &Spot) -> f64 {
    ((a.x - b.x).powi(2) + (a.y - b.y).powi(2) + (a.z - b.z).powi(2)).sqrt()
}

proptest! {
    #[test]
    fn uniformity_in_unit_interval(v in prop::collection::vec(0.0f64..1e3, 1..64)) {
        prop_assume!(v.iter().any(|&x| x > 0.0));
        let u = uniformity(&v).unwrap();
        prop_assert!((0.0..=1.0).contains(&u));
    }

    #[test]
    fn uniformity_scale_invariant(
        v in prop::collection::vec(1e-3f64..1e3, 1..64),
        s in 1e-6f64..1e6,
    ) {
        let scaled: Vec<f64> = v.iter().map(|x| x * s).collect();
        let (a, b) = (uniformity(&v).unwrap(), uniformity(&scaled).unwrap());
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn wrap_phase_is_congruent_and_half_open(x in -1e4f64..1e4) {
        let w = wrap_phase(x);
        prop_assert!((-std::f64::consts::PI..std::f64::consts::PI).contains(&w));
        let k = ((x - w) / std::f64::consts::TAU).round();
        prop_assert!((x - w - k * std::f64::consts::TAU).abs() <= 1e-12 * x.abs().max(1.0));
    }

    #[test]
    fn rotation_preserves_pairwise_distances(
        ax in -1.0f64..1.0, ay in -1.0f64..1.0, az in 0.1f64..1.0,
        angle in -7.0f64..7.0,
        rows in 1usize..5, cols in 1usize..5,
    ) {
        let flat = grid_scenario(rows, cols, 10e-6, &Rotation::identity(), 200e-6).unwrap();
        let rot = Rotation::new([ax, ay, az], angle).unwrap();
        let tilted = grid_scenario(rows, cols, 10e-6, &rot, 200e-6).unwrap();
        for i in 0..flat.len() {
            for j in i + 1..flat.len() {
                let d0 = distance(&flat.spots()[i], &flat.spots()[j]);
                let d1 = distance(&tilted.spots()[i], &tilted.spots()[j]);
                prop_assert!((d0 - d1).abs() <= 1e-12 * d0);
            }
        }
    }

    #[test]
    fn reduction_is_thread_count_independent(
        values in prop::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 0..3000),
        chunk in 1usize..300,
    ) {
        let v: Vec<Complex64> = values.into_iter().map(|(r, i)| Complex64::new(r, i)).collect();
        let serial = reduce_complex(&v, chunk);
        for threads in [2, 3] {
            let exec = Executor::with_threads(threads).unwrap().with_chunk(chunk).unwrap();
            let par = exec.reduce_complex(&v);
            prop_assert_eq!(serial.re.to_bits(), par.re.to_bits());
            prop_assert_eq!(serial.im.to_bits(), par.im.to_bits());
        }
    }

    #[test]
    fn spot_list_roundtrip(
        spots in prop::collection::vec(
            (-200.0f64..200.0, -200.0f64..200.0, -50.0f64..50.0, 0.01f64..4.0), 1..20),
    ) {
        let set = SpotSet::new(
            spots
                .iter()
                .map(|&(x, y, z, i)| Spot::new(x * 1e-6, y * 1e-6, z * 1e-6).with_amplitude(i.sqrt()))
                .collect(),
        )
        .unwrap();
        let back = parse_spot_list(&format_spot_list(&set)).unwrap();
        prop_assert_eq!(back.len(), set.len());
        for (a, b) in set.iter().zip(back.iter()) {
            prop_assert!((a.x - b.x).abs() <= 1e-14);
            prop_assert!((a.z - b.z).abs() <= 1e-14);
            prop_assert!((a.amplitude - b.amplitude).abs() <= 1e-8 * a.amplitude);
        }
    }

    #[test]
    fn linear_lut_quantizes_within_half_level(p in -10.0f64..10.0) {
        let lut = PhaseLut::linear();
        let back = lut.phase(lut.gray(p));
        let d = wrap_phase(back - wrap_phase(p)).abs();
        prop_assert!(d <= std::f64::consts::PI / 256.0 + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn wgs_weights_stay_positive_and_efficiency_bounded(
        seed in 0u64..1000,
        rows in 1usize..4,
        cols in 2usize..4,
    ) {
        let pupil = PupilConfig::with_side(48).build().unwrap();
        // Spacing of several diffraction units keeps spots from sharing power.
        let spacing = 4.0 * pupil.diffraction_unit();
        let spots = grid_scenario(rows, cols, spacing, &Rotation::identity(), pupil.field_half_width())
            .unwrap();
        let exec = Executor::sequential();
        let sol = wgs(&pupil, &spots, 8, seed, &exec).unwrap();
        prop_assert!(!sol.trace.flags.degenerate);
        for rec in &sol.trace.records {
            prop_assert!(rec.weights.iter().all(|&w| w > 0.0));
        }
        let r = evaluate(&pupil, &sol.hologram, &spots, &exec).unwrap();
        prop_assert!(r.efficiency >= 0.0 && r.efficiency <= 1.02);
        let cost = CostModel::new(&pupil, &spots);
        prop_assert_eq!(sol.trace.ops, 8 * cost.full_iteration());
    }
}
