//! Focal-region intensity rendering by direct evaluation of the spot-field
//! sum at arbitrary probe points.

use crate::error::{invalid, Result};
use crate::kernels::{forward_project, Executor};
use crate::metrics::normalize_fields;
use crate::optics::{Hologram, Pupil, Spot, SpotSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exposure {
    Linear,
    /// Squared normalized intensity, as seen by two-photon excitation.
    TwoPhoton,
}

/// Rectangular probe window in a focal plane, meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub center_x: f64,
    pub center_y: f64,
    pub half_width: f64,
    pub half_height: f64,
}

impl Window {
    pub fn centered(center_x: f64, center_y: f64, half_extent: f64) -> Self {
        Self {
            center_x,
            center_y,
            half_width: half_extent,
            half_height: half_extent,
        }
    }

    /// Probe x of column `i` (cell centers).
    pub fn x(&self, i: usize, width: usize) -> f64 {
        self.center_x - self.half_width + (i as f64 + 0.5) * (2.0 * self.half_width / width as f64)
    }

    /// Probe y of row `j` (cell centers, row 0 at the smallest y).
    pub fn y(&self, j: usize, height: usize) -> f64 {
        self.center_y - self.half_height
            + (j as f64 + 0.5) * (2.0 * self.half_height / height as f64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldImage {
    pub width: usize,
    pub height: usize,
    pub window: Window,
    pub z: f64,
    pub exposure: Exposure,
    /// Row-major normalized intensities.
    pub intensity: Vec<f64>,
}

impl FieldImage {
    pub fn at(&self, col: usize, row: usize) -> f64 {
        self.intensity[row * self.width + col]
    }

    pub fn max(&self) -> f64 {
        self.intensity.iter().copied().fold(0.0, f64::max)
    }

    /// `(col, row)` of the brightest pixel (first in row-major order on ties).
    pub fn argmax(&self) -> (usize, usize) {
        let mut best = 0;
        for (i, &v) in self.intensity.iter().enumerate() {
            if v > self.intensity[best] {
                best = i;
            }
        }
        (best % self.width, best / self.width)
    }
}

/// Renders a `width x height` probe grid at axial position `z`.
pub fn render_plane(
    pupil: &Pupil,
    hologram: &Hologram,
    window: &Window,
    z: f64,
    (width, height): (usize, usize),
    exposure: Exposure,
    exec: &Executor,
) -> Result<FieldImage> {
    hologram.check(pupil)?;
    if width == 0 || height == 0 {
        return Err(invalid("render resolution must be at least 1x1"));
    }
    if !(window.half_width > 0.0 && window.half_height > 0.0) || !z.is_finite() {
        return Err(invalid("render window must have positive extent"));
    }
    let mut intensity = Vec::with_capacity(width * height);
    for row in 0..height {
        let y = window.y(row, height);
        let probes = SpotSet::new(
            (0..width)
                .map(|col| Spot::new(window.x(col, width), y, z))
                .collect(),
        )?;
        let fields = forward_project(pupil, hologram, &probes, 0..pupil.active_count(), exec)?;
        let values = normalize_fields(pupil, &fields)?;
        intensity.extend(values.into_iter().map(|v| match exposure {
            Exposure::Linear => v,
            Exposure::TwoPhoton => v * v,
        }));
    }
    Ok(FieldImage {
        width,
        height,
        window: *window,
        z,
        exposure,
        intensity,
    })
}
