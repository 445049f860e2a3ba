//! Backward superposition and forward projection over ranges of the pupil
//! storage order, with a fixed-shape chunked reduction.
//!
//! Per-spot phasors `exp(i phi_n)` are formed on the fly for every pixel.
//! The prism-and-lens phase separates into a column part and a row part,
//! `phi_n = (kx x' + kz x'^2) + (ky y' + kz y'^2)`, so each call first
//! evaluates one phasor per spot per grid column and per grid row
//! (`O(N * side_px)` values) and the per-pixel phasor is their product.

use std::f64::consts::TAU;
use std::ops::Range;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, HoloError, Result};
use crate::optics::{wrap_phase, Hologram, Pupil, SpotSet};

pub const DEFAULT_CHUNK: usize = 1024;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Worker pool and reduction chunk shared by all kernels.
///
/// Results depend on `chunk` but never on the number of workers.
pub struct Executor {
    pool: Option<rayon::ThreadPool>,
    chunk: usize,
}

impl Default for Executor {
    /// Rayon's global pool, default chunk.
    fn default() -> Self {
        Self {
            pool: None,
            chunk: DEFAULT_CHUNK,
        }
    }
}

impl std::fmt::Debug for Executor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Executor")
            .field("threads", &self.threads())
            .field("chunk", &self.chunk)
            .finish()
    }
}

impl Executor {
    /// Dedicated pool of `threads` workers (`0` selects rayon's global pool).
    pub fn with_threads(threads: usize) -> Result<Self> {
        if threads == 0 {
            return Ok(Self::default());
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| invalid(format!("cannot build thread pool: {e}")))?;
        Ok(Self {
            pool: Some(pool),
            chunk: DEFAULT_CHUNK,
        })
    }

    pub fn sequential() -> Self {
        Self::with_threads(1).expect("single-thread pool")
    }

    pub fn with_chunk(mut self, chunk: usize) -> Result<Self> {
        if chunk == 0 {
            return Err(invalid("reduction chunk must be >= 1"));
        }
        self.chunk = chunk;
        Ok(self)
    }

    pub fn chunk(&self) -> usize {
        self.chunk
    }

    pub fn threads(&self) -> usize {
        match &self.pool {
            Some(p) => p.current_num_threads(),
            None => rayon::current_num_threads(),
        }
    }

    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        match &self.pool {
            Some(p) => p.install(f),
            None => f(),
        }
    }

    /// Parallel evaluation of [`reduce_complex`]; bit-identical to it.
    pub fn reduce_complex(&self, values: &[Complex64]) -> Complex64 {
        let chunk = self.chunk;
        let leaves: Vec<Complex64> =
            self.install(|| values.par_chunks(chunk).map(sum_in_order).collect());
        reduce_levels(leaves, chunk)
    }
}

fn sum_in_order(values: &[Complex64]) -> Complex64 {
    values.iter().fold(ZERO, |acc, &v| acc + v)
}

/// Collapses chunk partial sums until one value remains. Levels above the
/// leaves use a fan-in of at least two.
fn reduce_levels(mut partials: Vec<Complex64>, chunk: usize) -> Complex64 {
    let fan_in = chunk.max(2);
    while partials.len() > 1 {
        partials = partials.chunks(fan_in).map(sum_in_order).collect();
    }
    partials.first().copied().unwrap_or(ZERO)
}

/// Fixed-shape tree sum: contiguous chunks of `chunk` values summed left to
/// right, then the same rule applied to the partial sums.
pub fn reduce_complex(values: &[Complex64], chunk: usize) -> Complex64 {
    assert!(chunk >= 1, "chunk must be >= 1");
    let leaves = values.chunks(chunk).map(sum_in_order).collect();
    reduce_levels(leaves, chunk)
}

/// Per-spot amplitudes `a_n` and phases `theta_n` fed to superposition.
#[derive(Debug, Clone, PartialEq)]
pub struct SpotCoefficients {
    amplitudes: Vec<f64>,
    phases: Vec<f64>,
}

impl SpotCoefficients {
    pub fn new(amplitudes: Vec<f64>, phases: Vec<f64>) -> Result<Self> {
        if amplitudes.len() != phases.len() {
            return Err(invalid(format!(
                "{} amplitudes but {} phases",
                amplitudes.len(),
                phases.len()
            )));
        }
        if amplitudes.iter().any(|a| !(a.is_finite() && *a >= 0.0)) {
            return Err(invalid("spot amplitudes must be finite and non-negative"));
        }
        if phases.iter().any(|p| !p.is_finite()) {
            return Err(invalid("spot phases must be finite"));
        }
        Ok(Self { amplitudes, phases })
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    fn phasors(&self) -> Vec<Complex64> {
        self.amplitudes
            .iter()
            .zip(&self.phases)
            .map(|(&a, &t)| {
                let (s, c) = wrap_phase(t).sin_cos();
                Complex64::new(a * c, a * s)
            })
            .collect()
    }
}

/// Complex field at each spot.
#[derive(Debug, Clone, PartialEq)]
pub struct SpotFields(pub Vec<Complex64>);

impl SpotFields {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.0.iter().map(|e| e.norm()).collect()
    }

    pub fn phases(&self) -> Vec<f64> {
        self.0.iter().map(|e| e.arg()).collect()
    }
}

/// Column and row phasor factors, laid out `[index * n_spots + spot]`.
struct AxisPhasors {
    n_spots: usize,
    cols: Vec<Complex64>,
    rows: Vec<Complex64>,
}

impl AxisPhasors {
    fn new(pupil: &Pupil, spots: &SpotSet) -> Self {
        let lf = pupil.wavelength() * pupil.focal_length();
        let lateral = TAU / lf;
        let axial = TAU / (lf * pupil.focal_length());
        let n_spots = spots.len();
        let axis = pupil.axis();
        let mut cols = Vec::with_capacity(axis.len() * n_spots);
        let mut rows = Vec::with_capacity(axis.len() * n_spots);
        for &u in axis {
            let u2 = u * u;
            for s in spots {
                let kz = axial * s.z;
                let (sx, cx) = (lateral * s.x * u + kz * u2).sin_cos();
                cols.push(Complex64::new(cx, sx));
                let (sy, cy) = (lateral * s.y * u + kz * u2).sin_cos();
                rows.push(Complex64::new(cy, sy));
            }
        }
        Self {
            n_spots,
            cols,
            rows,
        }
    }

    #[inline]
    fn col(&self, col: u32) -> &[Complex64] {
        let i = col as usize * self.n_spots;
        &self.cols[i..i + self.n_spots]
    }

    #[inline]
    fn row(&self, row: u32) -> &[Complex64] {
        let i = row as usize * self.n_spots;
        &self.rows[i..i + self.n_spots]
    }
}

fn check_range(pupil: &Pupil, range: &Range<usize>) -> Result<()> {
    if range.start > range.end || range.end > pupil.active_count() {
        return Err(invalid(format!(
            "pixel range {range:?} outside 0..{}",
            pupil.active_count()
        )));
    }
    Ok(())
}

/// Writes `arg(sum_n a_n exp(i (phi_n + theta_n)))` for every storage index
/// in `range` into `out` (which must have `range.len()` entries).
///
/// A sum within rounding noise of zero (`|s| <= 8 eps sum_n a_n`) has phase 0.
pub fn superpose_into(
    pupil: &Pupil,
    spots: &SpotSet,
    coeffs: &SpotCoefficients,
    range: Range<usize>,
    out: &mut [f64],
    exec: &Executor,
) -> Result<()> {
    check_range(pupil, &range)?;
    if coeffs.len() != spots.len() {
        return Err(invalid(format!(
            "{} coefficients for {} spots",
            coeffs.len(),
            spots.len()
        )));
    }
    if out.len() != range.len() {
        return Err(invalid("output slice does not match pixel range"));
    }
    let phasors = AxisPhasors::new(pupil, spots);
    let weights = coeffs.phasors();
    let zero_floor = 8.0 * f64::EPSILON * coeffs.amplitudes().iter().sum::<f64>();
    let pixels = &pupil.permutation()[range];
    let chunk = exec.chunk();

    exec.install(|| {
        out.par_chunks_mut(chunk)
            .zip(pixels.par_chunks(chunk))
            .for_each(|(out, pixels)| {
                for (phase, px) in out.iter_mut().zip(pixels) {
                    let xs = phasors.col(px.col);
                    let ys = phasors.row(px.row);
                    let mut sum = ZERO;
                    for ((w, x), y) in weights.iter().zip(xs).zip(ys) {
                        sum += w * (x * y);
                    }
                    *phase = if sum.norm() <= zero_floor {
                        0.0
                    } else {
                        wrap_phase(sum.im.atan2(sum.re))
                    };
                }
            })
    });
    Ok(())
}

/// Hologram fragment for `range`, in storage order.
pub fn superpose(
    pupil: &Pupil,
    spots: &SpotSet,
    coeffs: &SpotCoefficients,
    range: Range<usize>,
    exec: &Executor,
) -> Result<Vec<f64>> {
    let mut out = vec![0.0; range.len()];
    superpose_into(pupil, spots, coeffs, range, &mut out, exec)?;
    Ok(out)
}

/// `E_n = sum_{pixels in range} A exp(-i (Phi - phi_n))` for every spot.
///
/// Each spot's terms are summed in storage order with the same tree shape as
/// [`reduce_complex`] with the executor's chunk, so the result is
/// bit-identical to reducing the explicit term sequence.
pub fn forward_project(
    pupil: &Pupil,
    hologram: &Hologram,
    spots: &SpotSet,
    range: Range<usize>,
    exec: &Executor,
) -> Result<SpotFields> {
    hologram.check(pupil)?;
    check_range(pupil, &range)?;
    let n = spots.len();
    if range.is_empty() {
        return Ok(SpotFields(vec![ZERO; n]));
    }
    let phasors = AxisPhasors::new(pupil, spots);
    let chunk = exec.chunk();
    let pixels = &pupil.permutation()[range.clone()];
    let amplitude = &pupil.amplitude()[range.clone()];
    let phases = &hologram.phases()[range.clone()];
    let n_chunks = range.len().div_ceil(chunk);
    let mut partials = vec![ZERO; n_chunks * n];

    exec.install(|| {
        partials.par_chunks_mut(n).enumerate().for_each(|(k, acc)| {
            let lo = k * chunk;
            let hi = (lo + chunk).min(pixels.len());
            for i in lo..hi {
                let px = pixels[i];
                let (s, c) = phases[i].sin_cos();
                let a = amplitude[i];
                let base = Complex64::new(a * c, -a * s);
                let xs = phasors.col(px.col);
                let ys = phasors.row(px.row);
                for ((e, x), y) in acc.iter_mut().zip(xs).zip(ys) {
                    *e += base * (x * y);
                }
            }
        })
    });

    let fields = (0..n)
        .map(|spot| {
            let leaves = partials.iter().skip(spot).step_by(n).copied().collect();
            reduce_levels(leaves, chunk)
        })
        .collect();
    Ok(SpotFields(fields))
}

/// Term sequence `A exp(-i (Phi - phi_n))` for one spot over `range`, formed
/// exactly as [`forward_project`] forms it.
pub fn projection_terms(
    pupil: &Pupil,
    hologram: &Hologram,
    spots: &SpotSet,
    spot: usize,
    range: Range<usize>,
) -> Result<Vec<Complex64>> {
    hologram.check(pupil)?;
    check_range(pupil, &range)?;
    if spot >= spots.len() {
        return Err(HoloError::InvalidParameter(format!("no spot {spot}")));
    }
    let phasors = AxisPhasors::new(pupil, spots);
    Ok(range
        .map(|i| {
            let px = pupil.pixel(i);
            let (s, c) = hologram.phases()[i].sin_cos();
            let a = pupil.amplitude()[i];
            let base = Complex64::new(a * c, -a * s);
            base * (phasors.col(px.col)[spot] * phasors.row(px.row)[spot])
        })
        .collect())
}
