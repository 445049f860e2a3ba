//! Shared fixtures for the criterion benches.

use holo_core::{Executor, Pupil, PupilConfig, Scenario, SpotCoefficients, SpotSet};

/// Pupil sides benchmarked by default. 1152 is the full SLM.
pub const SIDES: [usize; 3] = [128, 256, 512];

pub struct Fixture {
    pub pupil: Pupil,
    pub spots: SpotSet,
    pub coeffs: SpotCoefficients,
}

impl Fixture {
    /// `scenario` is a preset name; spots get unit amplitude and spread phases.
    pub fn new(scenario: &str, side: usize) -> Self {
        let pupil = PupilConfig::with_side(side).build().expect("pupil");
        let spots = Scenario::preset(scenario)
            .expect("preset")
            .spots()
            .expect("spots");
        let n = spots.len();
        let phases = (0..n).map(|i| i as f64 * 2.399_963).collect();
        let coeffs = SpotCoefficients::new(vec![1.0; n], phases).expect("coefficients");
        Fixture {
            pupil,
            spots,
            coeffs,
        }
    }

    /// Pixel-spot products in one full pass.
    pub fn ops(&self) -> u64 {
        (self.pupil.active_count() * self.spots.len()) as u64
    }
}

/// Executor on every core (`threads = 0`) or a fixed count.
pub fn executor(threads: usize) -> Executor {
    Executor::with_threads(threads).expect("thread pool")
}
