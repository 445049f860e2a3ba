//! Efficiency and uniformity of a hologram.
//!
//! Spot intensities are normalized so that a single perfectly conjugated
//! spot scores 1: `I_n = |E_n|^2 / (sum A)^2`.

use crate::error::{HoloError, Result};
use crate::kernels::{forward_project, Executor, SpotFields};
use crate::optics::{Hologram, Pupil, SpotSet};

#[derive(Debug, Clone, PartialEq)]
pub struct QualityReport {
    pub efficiency: f64,
    pub uniformity: f64,
    pub intensities: Vec<f64>,
    /// `I_n / a_n^2`, the intensities relative to each spot's target.
    pub relative: Vec<f64>,
}

/// Normalizes full-pupil spot fields to intensities.
pub fn normalize_fields(pupil: &Pupil, fields: &SpotFields) -> Result<Vec<f64>> {
    let total = pupil.total_amplitude();
    if !(total > 0.0) {
        return Err(HoloError::ZeroIllumination);
    }
    let denom = total * total;
    Ok(fields.0.iter().map(|e| e.norm_sqr() / denom).collect())
}

pub fn spot_intensities(
    pupil: &Pupil,
    hologram: &Hologram,
    spots: &SpotSet,
    exec: &Executor,
) -> Result<Vec<f64>> {
    if !(pupil.total_amplitude() > 0.0) {
        return Err(HoloError::ZeroIllumination);
    }
    let fields = forward_project(pupil, hologram, spots, 0..pupil.active_count(), exec)?;
    normalize_fields(pupil, &fields)
}

/// Fraction of the illumination delivered to the spots.
pub fn efficiency(intensities: &[f64]) -> f64 {
    intensities.iter().sum()
}

/// `1 - (max - min) / (max + min)`.
pub fn uniformity(intensities: &[f64]) -> Result<f64> {
    let max = intensities
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let min = intensities.iter().copied().fold(f64::INFINITY, f64::min);
    if intensities.is_empty() || !(max + min > 0.0) {
        return Err(HoloError::UndefinedUniformity);
    }
    Ok(1.0 - (max - min) / (max + min))
}

pub fn report_from_intensities(spots: &SpotSet, intensities: Vec<f64>) -> Result<QualityReport> {
    let relative: Vec<f64> = intensities
        .iter()
        .zip(spots)
        .map(|(&i, s)| i / (s.amplitude * s.amplitude))
        .collect();
    Ok(QualityReport {
        efficiency: efficiency(&intensities),
        uniformity: uniformity(&relative)?,
        intensities,
        relative,
    })
}

pub fn evaluate(
    pupil: &Pupil,
    hologram: &Hologram,
    spots: &SpotSet,
    exec: &Executor,
) -> Result<QualityReport> {
    let intensities = spot_intensities(pupil, hologram, spots, exec)?;
    report_from_intensities(spots, intensities)
}
