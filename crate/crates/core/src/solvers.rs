//! Random superposition (RS), weighted Gerchberg-Saxton (WGS) and its
//! compressed-subset variant (CS-WGS), plus operation-budget planning.
//!
//! Cost is counted in pixel-spot operations: one WGS iteration over `P`
//! pixels with `N` spots costs `P * N`. The random-superposition start of
//! the iterative solvers is not counted, so a CS-WGS run costs exactly
//! `2 M N + ceil(c M) N (I - 2)`.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, HoloError, Result};
use crate::kernels::{forward_project, superpose_into, Executor, SpotCoefficients};
use crate::optics::{compressed_size, CompressionPlan, Hologram, Pupil, SpotSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Rs,
    Wgs,
    CsWgs,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Rs, Algorithm::Wgs, Algorithm::CsWgs];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Rs => "rs",
            Algorithm::Wgs => "wgs",
            Algorithm::CsWgs => "cswgs",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = HoloError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "").as_str() {
            "rs" => Ok(Algorithm::Rs),
            "wgs" => Ok(Algorithm::Wgs),
            "cswgs" => Ok(Algorithm::CsWgs),
            _ => Err(invalid(format!(
                "unknown algorithm '{s}' (expected rs, wgs or cswgs)"
            ))),
        }
    }
}

/// Compute allowance for one hologram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Budget {
    /// Pixel-spot operations.
    Ops(u64),
    /// Wall-clock milliseconds, converted with a measured throughput.
    WallMs { ms: f64, ops_per_ms: f64 },
}

impl Budget {
    pub fn ops(&self) -> u64 {
        match *self {
            Budget::Ops(n) => n,
            Budget::WallMs { ms, ops_per_ms } => (ms * ops_per_ms).max(0.0).floor() as u64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    pub iterations: usize,
    pub compression: f64,
    pub seed: u64,
    /// When set, overrides `iterations` with the budget plan.
    pub budget: Option<Budget>,
}

impl SolverConfig {
    pub fn rs(seed: u64) -> Self {
        Self {
            algorithm: Algorithm::Rs,
            iterations: 1,
            compression: 1.0,
            seed,
            budget: None,
        }
    }

    pub fn wgs(iterations: usize, seed: u64) -> Self {
        Self {
            algorithm: Algorithm::Wgs,
            iterations,
            compression: 1.0,
            seed,
            budget: None,
        }
    }

    pub fn cswgs(iterations: usize, compression: f64, seed: u64) -> Self {
        Self {
            algorithm: Algorithm::CsWgs,
            iterations,
            compression,
            seed,
            budget: None,
        }
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = Some(budget);
        self
    }

    pub fn validate(&self) -> Result<()> {
        match self.algorithm {
            Algorithm::Rs => Ok(()),
            Algorithm::Wgs if self.budget.is_none() && self.iterations < 1 => {
                Err(invalid("WGS needs at least one iteration"))
            }
            Algorithm::Wgs => Ok(()),
            Algorithm::CsWgs => {
                if self.budget.is_none() && self.iterations < 2 {
                    return Err(invalid(
                        "CS-WGS needs at least two iterations (the two final full passes)",
                    ));
                }
                compressed_size(1, self.compression).map(|_| ())
            }
        }
    }
}

/// Predicts pixel-spot operation counts for a pupil/spot-set pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CostModel {
    pub active: usize,
    pub spots: usize,
}

impl CostModel {
    pub fn new(pupil: &Pupil, spots: &SpotSet) -> Self {
        Self {
            active: pupil.active_count(),
            spots: spots.len(),
        }
    }

    /// `M * N`, the cost of one full iteration (or of one RS hologram).
    pub fn full_iteration(&self) -> u64 {
        self.active as u64 * self.spots as u64
    }

    pub fn compressed_iteration(&self, compression: f64) -> Result<u64> {
        Ok(compressed_size(self.active, compression)? as u64 * self.spots as u64)
    }

    pub fn predict(
        &self,
        algorithm: Algorithm,
        iterations: usize,
        compression: f64,
    ) -> Result<u64> {
        let full = self.full_iteration();
        Ok(match algorithm {
            Algorithm::Rs => full,
            Algorithm::Wgs => full * iterations as u64,
            Algorithm::CsWgs => {
                let compressed = iterations.saturating_sub(2) as u64;
                full * iterations.min(2) as u64
                    + self.compressed_iteration(compression)? * compressed
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IterationPlan {
    pub iterations: usize,
    pub over_budget: bool,
}

/// Largest iteration count whose predicted cost fits `budget`.
///
/// WGS never plans fewer than one iteration and CS-WGS never fewer than
/// two; a plan forced above the budget is flagged. RS plans zero iterations.
pub fn budget_controller(
    algorithm: Algorithm,
    compression: f64,
    budget: &Budget,
    cost: &CostModel,
) -> Result<IterationPlan> {
    let ops = budget.ops();
    let full = cost.full_iteration().max(1);
    Ok(match algorithm {
        Algorithm::Rs => IterationPlan {
            iterations: 0,
            over_budget: cost.full_iteration() > ops,
        },
        Algorithm::Wgs => {
            let fit = (ops / full) as usize;
            IterationPlan {
                iterations: fit.max(1),
                over_budget: fit < 1,
            }
        }
        Algorithm::CsWgs => {
            let step = cost.compressed_iteration(compression)?.max(1);
            if ops < 2 * full {
                IterationPlan {
                    iterations: 2,
                    over_budget: true,
                }
            } else {
                IterationPlan {
                    iterations: 2 + ((ops - 2 * full) / step) as usize,
                    over_budget: false,
                }
            }
        }
    })
}

/// Per-iteration record.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    /// Weights after this iteration's update.
    pub weights: Vec<f64>,
    /// Spot field magnitudes that drove the update (after any degeneracy floor).
    pub magnitudes: Vec<f64>,
    pub subset_size: usize,
    /// Cumulative pixel-spot operations up to and including this iteration.
    pub ops: u64,
    pub degenerate: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolverFlags {
    /// Some spot field vanished and its magnitude was floored.
    pub degenerate: bool,
    /// Compressed subset smaller than the spot count.
    pub underdetermined: bool,
    /// The plan exceeds the requested budget.
    pub over_budget: bool,
}

impl SolverFlags {
    pub fn labels(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.degenerate {
            out.push("degenerate");
        }
        if self.underdetermined {
            out.push("underdetermined");
        }
        if self.over_budget {
            out.push("over_budget");
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverTrace {
    pub algorithm: Algorithm,
    pub compression: f64,
    /// Random starting phases `theta_n^0`.
    pub initial_phases: Vec<f64>,
    pub records: Vec<IterationRecord>,
    pub ops: u64,
    pub flags: SolverFlags,
}

impl SolverTrace {
    pub fn iterations(&self) -> usize {
        self.records.len()
    }
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub hologram: Hologram,
    pub trace: SolverTrace,
}

/// Mutable per-spot solver state.
#[derive(Debug, Clone, PartialEq)]
pub struct WgsState {
    pub weights: Vec<f64>,
    pub amplitudes: Vec<f64>,
    pub phases: Vec<f64>,
    pub targets: Vec<f64>,
}

impl WgsState {
    /// Unit weights, target amplitudes, the given starting phases.
    pub fn new(spots: &SpotSet, phases: Vec<f64>) -> Result<Self> {
        if phases.len() != spots.len() {
            return Err(invalid("one starting phase per spot required"));
        }
        let targets = spots.target_amplitudes();
        Ok(Self {
            weights: vec![1.0; spots.len()],
            amplitudes: targets.clone(),
            phases,
            targets,
        })
    }

    pub fn coefficients(&self) -> Result<SpotCoefficients> {
        SpotCoefficients::new(self.amplitudes.clone(), self.phases.clone())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub magnitudes: Vec<f64>,
    pub degenerate: bool,
}

/// New weights `w_n * mean(|E|) / |E_n|`.
///
/// Zero magnitudes are replaced by `1e-6` times the smallest positive one
/// (or all set to one if every field vanished); the returned flag reports it.
pub fn update_weights(weights: &mut [f64], magnitudes: &mut [f64]) -> bool {
    let mut degenerate = false;
    if magnitudes.iter().any(|&m| !(m > 0.0)) {
        degenerate = true;
        let floor = magnitudes
            .iter()
            .copied()
            .filter(|&m| m > 0.0)
            .fold(f64::INFINITY, f64::min);
        let floor = if floor.is_finite() { floor * 1e-6 } else { 1.0 };
        for m in magnitudes.iter_mut().filter(|m| !(**m > 0.0)) {
            *m = floor;
        }
    }
    let mean = magnitudes.iter().sum::<f64>() / magnitudes.len() as f64;
    for (w, &m) in weights.iter_mut().zip(magnitudes.iter()) {
        *w *= mean / m;
    }
    degenerate
}

/// One alternating-projection iteration: project the hologram pixels in
/// `range` to the spots, update weights, amplitudes and phases, and rewrite
/// the hologram phases in `write`.
///
/// `write` is the range the next iteration will project. It equals `range`
/// except when a compressed run hands over to its full iterations.
pub fn wgs_step(
    pupil: &Pupil,
    spots: &SpotSet,
    state: &mut WgsState,
    hologram: &mut Hologram,
    range: Range<usize>,
    write: Range<usize>,
    exec: &Executor,
) -> Result<StepOutcome> {
    let fields = forward_project(pupil, hologram, spots, range.clone(), exec)?;
    let mut magnitudes = fields.magnitudes();
    let degenerate = update_weights(&mut state.weights, &mut magnitudes);
    for ((a, w), t) in state
        .amplitudes
        .iter_mut()
        .zip(&state.weights)
        .zip(&state.targets)
    {
        *a = w * t;
    }
    state.phases = fields.phases();
    let coeffs = state.coefficients()?;
    let out = &mut hologram.phases_mut()[write.clone()];
    superpose_into(pupil, spots, &coeffs, write, out, exec)?;
    Ok(StepOutcome {
        magnitudes,
        degenerate,
    })
}

/// `theta_n^0`, i.i.d. uniform on `[0, 2 pi)` from a ChaCha8 stream.
pub fn initial_phases(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| rng.random::<f64>() * std::f64::consts::TAU)
        .collect()
}

fn random_superposition(
    pupil: &Pupil,
    spots: &SpotSet,
    phases: &[f64],
    exec: &Executor,
) -> Result<Hologram> {
    let coeffs = SpotCoefficients::new(spots.target_amplitudes(), phases.to_vec())?;
    let mut hologram = Hologram::zeros(pupil);
    let m = pupil.active_count();
    superpose_into(pupil, spots, &coeffs, 0..m, hologram.phases_mut(), exec)?;
    Ok(hologram)
}

/// Random superposition: one backward pass with random spot phases.
pub fn rs(pupil: &Pupil, spots: &SpotSet, seed: u64, exec: &Executor) -> Result<Solution> {
    let phases = initial_phases(spots.len(), seed);
    let hologram = random_superposition(pupil, spots, &phases, exec)?;
    Ok(Solution {
        hologram,
        trace: SolverTrace {
            algorithm: Algorithm::Rs,
            compression: 1.0,
            initial_phases: phases,
            records: Vec::new(),
            ops: CostModel::new(pupil, spots).full_iteration(),
            flags: SolverFlags::default(),
        },
    })
}

/// WGS: `iterations` full-pupil steps from the RS start.
pub fn wgs(
    pupil: &Pupil,
    spots: &SpotSet,
    iterations: usize,
    seed: u64,
    exec: &Executor,
) -> Result<Solution> {
    if iterations < 1 {
        return Err(invalid("WGS needs at least one iteration"));
    }
    iterate(pupil, spots, Algorithm::Wgs, iterations, 1.0, seed, exec)
}

/// CS-WGS: `iterations - 2` steps over the first `ceil(c M)` storage
/// pixels, then two full-pupil steps.
pub fn cswgs(
    pupil: &Pupil,
    spots: &SpotSet,
    iterations: usize,
    compression: f64,
    seed: u64,
    exec: &Executor,
) -> Result<Solution> {
    if iterations < 2 {
        return Err(invalid(
            "CS-WGS needs at least two iterations (the two final full passes)",
        ));
    }
    iterate(
        pupil,
        spots,
        Algorithm::CsWgs,
        iterations,
        compression,
        seed,
        exec,
    )
}

fn iterate(
    pupil: &Pupil,
    spots: &SpotSet,
    algorithm: Algorithm,
    iterations: usize,
    compression: f64,
    seed: u64,
    exec: &Executor,
) -> Result<Solution> {
    let m = pupil.active_count();
    let n = spots.len();
    let plan = CompressionPlan::new(pupil, compression)?;
    let subset = plan.subset_size;
    let compressed_steps = match algorithm {
        Algorithm::CsWgs => iterations - 2,
        _ => 0,
    };
    let mut flags = SolverFlags::default();
    if compressed_steps > 0 && subset < n {
        log::warn!(
            "compressed subset of {subset} pixels is smaller than the {n} spots; the compressed system is underdetermined"
        );
        flags.underdetermined = true;
    }

    let initial = initial_phases(n, seed);
    let mut hologram = random_superposition(pupil, spots, &initial, exec)?;
    let mut state = WgsState::new(spots, initial.clone())?;
    let mut records = Vec::with_capacity(iterations);
    let mut ops = 0u64;
    for j in 0..iterations {
        let range_of = |j: usize| {
            if j < compressed_steps {
                plan.range()
            } else {
                0..m
            }
        };
        let range = range_of(j);
        let size = range.len();
        let outcome = wgs_step(
            pupil,
            spots,
            &mut state,
            &mut hologram,
            range,
            range_of(j + 1),
            exec,
        )?;
        ops += size as u64 * n as u64;
        flags.degenerate |= outcome.degenerate;
        records.push(IterationRecord {
            weights: state.weights.clone(),
            magnitudes: outcome.magnitudes,
            subset_size: size,
            ops,
            degenerate: outcome.degenerate,
        });
    }
    Ok(Solution {
        hologram,
        trace: SolverTrace {
            algorithm,
            compression,
            initial_phases: initial,
            records,
            ops,
            flags,
        },
    })
}

/// Runs the configured algorithm, planning the iteration count from the
/// budget when one is given.
pub fn solve(
    pupil: &Pupil,
    spots: &SpotSet,
    config: &SolverConfig,
    exec: &Executor,
) -> Result<Solution> {
    config.validate()?;
    let mut iterations = config.iterations;
    let mut over_budget = false;
    if let Some(budget) = &config.budget {
        let plan = budget_controller(
            config.algorithm,
            config.compression,
            budget,
            &CostModel::new(pupil, spots),
        )?;
        iterations = plan.iterations;
        over_budget = plan.over_budget;
    }
    let mut solution = match config.algorithm {
        Algorithm::Rs => rs(pupil, spots, config.seed, exec)?,
        Algorithm::Wgs => wgs(pupil, spots, iterations, config.seed, exec)?,
        Algorithm::CsWgs => cswgs(
            pupil,
            spots,
            iterations,
            config.compression,
            config.seed,
            exec,
        )?,
    };
    solution.trace.flags.over_budget = over_budget;
    Ok(solution)
}
