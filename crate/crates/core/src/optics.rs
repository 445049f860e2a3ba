//! Pupil geometry, spot targets and hologram containers.
//!
//! Lengths are meters throughout. Pixel coordinates are measured from the
//! aperture center at pixel centers: `(index - (side_px - 1) / 2) * pitch`.

use std::f64::consts::{PI, TAU};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, HoloError, Result};

pub const DEFAULT_SIDE_PX: usize = 1152;
pub const DEFAULT_PITCH: f64 = 9.2e-6;
pub const DEFAULT_WAVELENGTH: f64 = 800e-9;
/// Effective focal length of the optical train seen from the SLM plane.
///
/// Chosen so that the addressable lateral field `wavelength * f / pitch` is
/// about 430 um, matching a 400 um imaging field.
pub const DEFAULT_FOCAL_LENGTH: f64 = 5e-3;
pub const DEFAULT_WAIST: f64 = 6e-3;

/// Wraps a phase into `[-pi, pi)`.
///
/// The reduction is exact: `x % TAU` is exact in IEEE arithmetic and the
/// single correction step is a Sterbenz subtraction.
pub fn wrap_phase(phase: f64) -> f64 {
    let r = phase % TAU;
    if r >= PI {
        r - TAU
    } else if r < -PI {
        r + TAU
    } else {
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Illumination {
    Uniform,
    /// Gaussian field amplitude `exp(-r^2 / waist^2)`, `r` in meters.
    Gaussian {
        waist: f64,
    },
}

/// Builder for [`Pupil`] with the default optical constants filled in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PupilConfig {
    pub side_px: usize,
    pub pitch: f64,
    pub wavelength: f64,
    pub focal_length: f64,
    pub illumination: Illumination,
    pub seed: u64,
}

impl Default for PupilConfig {
    fn default() -> Self {
        Self {
            side_px: DEFAULT_SIDE_PX,
            pitch: DEFAULT_PITCH,
            wavelength: DEFAULT_WAVELENGTH,
            focal_length: DEFAULT_FOCAL_LENGTH,
            illumination: Illumination::Uniform,
            seed: 0,
        }
    }
}

impl PupilConfig {
    pub fn with_side(side_px: usize) -> Self {
        Self {
            side_px,
            ..Self::default()
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn illumination(mut self, illumination: Illumination) -> Self {
        self.illumination = illumination;
        self
    }

    pub fn build(&self) -> Result<Pupil> {
        build_pupil(
            self.side_px,
            self.pitch,
            self.wavelength,
            self.focal_length,
            self.illumination,
            self.seed,
        )
    }
}

/// A 2D pixel position on the SLM grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Pixel {
    pub col: u32,
    pub row: u32,
}

/// Identifies the geometry a hologram was computed for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PupilGeometry {
    pub side_px: usize,
    pub pitch: f64,
    pub wavelength: f64,
    pub focal_length: f64,
    pub active_count: usize,
    pub seed: u64,
}

/// SLM pixel grid with circular aperture, illumination and a fixed random
/// storage order of the in-aperture pixels.
///
/// Per-pixel arrays (`pixels`, `amplitude`) are held in storage order, so
/// that any prefix of storage is a uniformly random subset of the aperture.
#[derive(Debug, Clone)]
pub struct Pupil {
    side_px: usize,
    pitch: f64,
    wavelength: f64,
    focal_length: f64,
    seed: u64,
    illumination: Illumination,
    /// Storage index -> pixel.
    pixels: Vec<Pixel>,
    /// Illumination amplitude in storage order.
    amplitude: Vec<f64>,
    /// Flat grid index (`row * side + col`) -> storage index, `u32::MAX` outside.
    storage_of: Vec<u32>,
    /// Centered physical coordinate of every column/row index.
    axis: Vec<f64>,
    total_amplitude: f64,
}

/// Constructs a pupil with a circular aperture of diameter `side_px`.
///
/// The storage permutation is drawn once from `seed` (ChaCha8 stream, Fisher-Yates).
pub fn build_pupil(
    side_px: usize,
    pitch: f64,
    wavelength: f64,
    focal_length: f64,
    illumination: Illumination,
    seed: u64,
) -> Result<Pupil> {
    if side_px < 2 {
        return Err(invalid(format!("side_px must be >= 2, got {side_px}")));
    }
    if side_px > u32::MAX as usize / side_px {
        return Err(invalid(format!("side_px {side_px} too large")));
    }
    for (name, v) in [
        ("pitch", pitch),
        ("wavelength", wavelength),
        ("focal length", focal_length),
    ] {
        if !(v.is_finite() && v > 0.0) {
            return Err(invalid(format!(
                "{name} must be positive and finite, got {v}"
            )));
        }
    }
    if let Illumination::Gaussian { waist } = illumination {
        if !(waist.is_finite() && waist > 0.0) {
            return Err(invalid(format!(
                "beam waist must be positive and finite, got {waist}"
            )));
        }
    }

    let center = (side_px as f64 - 1.0) / 2.0;
    let radius = side_px as f64 / 2.0;
    let axis: Vec<f64> = (0..side_px).map(|i| (i as f64 - center) * pitch).collect();

    let mut pixels = Vec::new();
    for row in 0..side_px {
        for col in 0..side_px {
            let dr = row as f64 - center;
            let dc = col as f64 - center;
            if (dr * dr + dc * dc).sqrt() <= radius {
                pixels.push(Pixel {
                    col: col as u32,
                    row: row as u32,
                });
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    pixels.shuffle(&mut rng);

    let mut storage_of = vec![u32::MAX; side_px * side_px];
    for (s, p) in pixels.iter().enumerate() {
        storage_of[p.row as usize * side_px + p.col as usize] = s as u32;
    }

    let amplitude: Vec<f64> = pixels
        .iter()
        .map(|p| match illumination {
            Illumination::Uniform => 1.0,
            Illumination::Gaussian { waist } => {
                let x = axis[p.col as usize];
                let y = axis[p.row as usize];
                (-(x * x + y * y) / (waist * waist)).exp()
            }
        })
        .collect();
    let total_amplitude = amplitude.iter().sum();

    Ok(Pupil {
        side_px,
        pitch,
        wavelength,
        focal_length,
        seed,
        illumination,
        pixels,
        amplitude,
        storage_of,
        axis,
        total_amplitude,
    })
}

impl Pupil {
    pub fn side_px(&self) -> usize {
        self.side_px
    }

    pub fn pitch(&self) -> f64 {
        self.pitch
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn focal_length(&self) -> f64 {
        self.focal_length
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn illumination(&self) -> Illumination {
        self.illumination
    }

    /// Number of pixels inside the aperture (M).
    pub fn active_count(&self) -> usize {
        self.pixels.len()
    }

    /// Storage index -> pixel.
    pub fn permutation(&self) -> &[Pixel] {
        &self.pixels
    }

    pub fn pixel(&self, storage: usize) -> Pixel {
        self.pixels[storage]
    }

    /// Inverse of [`Pupil::permutation`]; `None` outside the aperture.
    pub fn storage_index(&self, pixel: Pixel) -> Option<usize> {
        if pixel.col as usize >= self.side_px || pixel.row as usize >= self.side_px {
            return None;
        }
        match self.storage_of[pixel.row as usize * self.side_px + pixel.col as usize] {
            u32::MAX => None,
            s => Some(s as usize),
        }
    }

    pub fn in_aperture(&self, pixel: Pixel) -> bool {
        self.storage_index(pixel).is_some()
    }

    /// Illumination amplitude in storage order.
    pub fn amplitude(&self) -> &[f64] {
        &self.amplitude
    }

    /// Amplitude at a grid pixel, zero outside the aperture.
    pub fn amplitude_at(&self, pixel: Pixel) -> f64 {
        self.storage_index(pixel).map_or(0.0, |s| self.amplitude[s])
    }

    /// Sum of the illumination amplitude over the aperture.
    pub fn total_amplitude(&self) -> f64 {
        self.total_amplitude
    }

    /// Physical coordinate (meters) of a column or row index.
    pub fn coordinate(&self, index: u32) -> f64 {
        self.axis[index as usize]
    }

    pub fn axis(&self) -> &[f64] {
        &self.axis
    }

    /// Physical `(x', y')` of a pixel center.
    pub fn position(&self, pixel: Pixel) -> (f64, f64) {
        (self.coordinate(pixel.col), self.coordinate(pixel.row))
    }

    /// Half-width of the laterally addressable field, `wavelength * f / (2 pitch)`.
    pub fn field_half_width(&self) -> f64 {
        self.wavelength * self.focal_length / (2.0 * self.pitch)
    }

    /// Lateral diffraction-limited spot scale `wavelength * f / (side_px * pitch)`.
    pub fn diffraction_unit(&self) -> f64 {
        self.wavelength * self.focal_length / (self.side_px as f64 * self.pitch)
    }

    pub fn geometry(&self) -> PupilGeometry {
        PupilGeometry {
            side_px: self.side_px,
            pitch: self.pitch,
            wavelength: self.wavelength,
            focal_length: self.focal_length,
            active_count: self.active_count(),
            seed: self.seed,
        }
    }
}

/// A single target focus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spot {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    /// Target field amplitude; relative intensity is its square.
    pub amplitude: f64,
}

impl Spot {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self {
            x,
            y,
            z,
            amplitude: 1.0,
        }
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }
}

/// Non-empty list of target spots.
#[derive(Debug, Clone, PartialEq)]
pub struct SpotSet {
    spots: Vec<Spot>,
}

impl SpotSet {
    pub fn new(spots: Vec<Spot>) -> Result<Self> {
        if spots.is_empty() {
            return Err(invalid("spot set must contain at least one spot"));
        }
        for (i, s) in spots.iter().enumerate() {
            if !(s.x.is_finite() && s.y.is_finite() && s.z.is_finite()) {
                return Err(invalid(format!("spot {i} has non-finite coordinates")));
            }
            if !(s.amplitude.is_finite() && s.amplitude > 0.0) {
                return Err(invalid(format!(
                    "spot {i} target amplitude must be positive, got {}",
                    s.amplitude
                )));
            }
        }
        Ok(Self { spots })
    }

    pub fn len(&self) -> usize {
        self.spots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spots.is_empty()
    }

    pub fn spots(&self) -> &[Spot] {
        &self.spots
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Spot> {
        self.spots.iter()
    }

    pub fn target_amplitudes(&self) -> Vec<f64> {
        self.spots.iter().map(|s| s.amplitude).collect()
    }
}

impl<'a> IntoIterator for &'a SpotSet {
    type Item = &'a Spot;
    type IntoIter = std::slice::Iter<'a, Spot>;

    fn into_iter(self) -> Self::IntoIter {
        self.spots.iter()
    }
}

/// Prism-and-lens phase of `spot` at `pixel`, not wrapped.
pub fn spot_phase(pupil: &Pupil, spot: &Spot, pixel: Pixel) -> f64 {
    let (x, y) = pupil.position(pixel);
    let lf = pupil.wavelength * pupil.focal_length;
    TAU / lf * (spot.x * x + spot.y * y)
        + TAU / (lf * pupil.focal_length) * (x * x + y * y) * spot.z
}

/// Phase mask over the aperture, in pupil storage order, wrapped to `[-pi, pi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Hologram {
    phases: Vec<f64>,
    geometry: PupilGeometry,
}

impl Hologram {
    pub fn zeros(pupil: &Pupil) -> Self {
        Self {
            phases: vec![0.0; pupil.active_count()],
            geometry: pupil.geometry(),
        }
    }

    /// Takes phases in storage order, wrapping each into `[-pi, pi)`.
    pub fn from_phases(pupil: &Pupil, mut phases: Vec<f64>) -> Result<Self> {
        if phases.len() != pupil.active_count() {
            return Err(HoloError::GeometryMismatch(format!(
                "hologram has {} phases, pupil has {} active pixels",
                phases.len(),
                pupil.active_count()
            )));
        }
        for p in &mut phases {
            if !p.is_finite() {
                return Err(invalid("hologram phase is not finite"));
            }
            *p = wrap_phase(*p);
        }
        Ok(Self {
            phases,
            geometry: pupil.geometry(),
        })
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub(crate) fn phases_mut(&mut self) -> &mut [f64] {
        &mut self.phases
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn geometry(&self) -> &PupilGeometry {
        &self.geometry
    }

    /// Fails unless this hologram was computed for `pupil`.
    pub fn check(&self, pupil: &Pupil) -> Result<()> {
        if self.geometry != pupil.geometry() {
            return Err(HoloError::GeometryMismatch(format!(
                "hologram computed for {:?}, pupil is {:?}",
                self.geometry,
                pupil.geometry()
            )));
        }
        Ok(())
    }

    /// Row-major `side_px * side_px` phase image; `outside` fills pixels
    /// beyond the aperture.
    pub fn to_grid(&self, pupil: &Pupil, outside: f64) -> Result<Vec<f64>> {
        self.check(pupil)?;
        let side = pupil.side_px();
        let mut grid = vec![outside; side * side];
        for (s, p) in pupil.permutation().iter().enumerate() {
            grid[p.row as usize * side + p.col as usize] = self.phases[s];
        }
        Ok(grid)
    }

    /// Inverse of [`Hologram::to_grid`]; values outside the aperture are ignored.
    pub fn from_grid(pupil: &Pupil, grid: &[f64]) -> Result<Self> {
        let side = pupil.side_px();
        if grid.len() != side * side {
            return Err(HoloError::GeometryMismatch(format!(
                "phase image has {} pixels, pupil grid is {side}x{side}",
                grid.len()
            )));
        }
        let phases = pupil
            .permutation()
            .iter()
            .map(|p| grid[p.row as usize * side + p.col as usize])
            .collect();
        Self::from_phases(pupil, phases)
    }
}

/// The compressed pixel subset: the first `subset_size` entries of the
/// pupil storage order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompressionPlan {
    pub ratio: f64,
    pub subset_size: usize,
    pub seed: u64,
}

impl CompressionPlan {
    /// `subset_size = ceil(ratio * M)`, at least one pixel.
    pub fn new(pupil: &Pupil, ratio: f64) -> Result<Self> {
        let m = pupil.active_count();
        Ok(Self {
            ratio,
            subset_size: compressed_size(m, ratio)?,
            seed: pupil.seed(),
        })
    }

    pub fn range(&self) -> std::ops::Range<usize> {
        0..self.subset_size
    }
}

/// `ceil(ratio * active)` clamped to `1..=active`.
pub fn compressed_size(active: usize, ratio: f64) -> Result<usize> {
    if !(ratio > 0.0 && ratio <= 1.0) {
        return Err(invalid(format!(
            "compression ratio must be in (0, 1], got {ratio}"
        )));
    }
    let size = (ratio * active as f64).ceil() as usize;
    Ok(size.clamp(1, active.max(1)))
}
