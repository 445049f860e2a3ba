//! Benchmark spot patterns: planar grids and pairs of cubes, under rigid 3D
//! rotation about the pattern centroid.
//!
//! The paper-analogue presets use placeholder dimensions (10 um grid pitch,
//! 50 um cubes centered at +-60 um on x); only the spot counts (100, 36, 16)
//! are fixed by the benchmark protocol.

use std::f64::consts::PI;

use crate::error::{invalid, HoloError, Result};
use crate::optics::{Spot, SpotSet};

pub const DEFAULT_GRID_SPACING: f64 = 10e-6;
pub const DEFAULT_CUBE_EDGE: f64 = 50e-6;
pub const DEFAULT_CUBE_OFFSET: f64 = 60e-6;
/// Half-width of the default lateral field of view (a 400 um square).
pub const DEFAULT_FIELD_HALF_WIDTH: f64 = 200e-6;
/// Angle step between successive orientations in benchmark sweeps.
pub const DEFAULT_SWEEP_STEP: f64 = PI / 5.0;
/// Sweep axis tilted 5 degrees from z towards x: successive frames precess
/// a planar pattern's normal on a cone, tilting it by up to 10 degrees.
pub const DEFAULT_SWEEP_AXIS: [f64; 3] = [0.087_155_742_747_658_17, 0.0, 0.996_194_698_091_745_5];

/// Axis-angle rotation, right-handed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation {
    pub axis: [f64; 3],
    pub angle: f64,
}

impl Default for Rotation {
    fn default() -> Self {
        Self::identity()
    }
}

impl Rotation {
    pub fn identity() -> Self {
        Self {
            axis: [0.0, 0.0, 1.0],
            angle: 0.0,
        }
    }

    pub fn new(axis: [f64; 3], angle: f64) -> Result<Self> {
        let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        if !(norm.is_finite() && norm > 0.0) || !angle.is_finite() {
            return Err(invalid("rotation axis must be a finite non-zero vector"));
        }
        Ok(Self {
            axis: [axis[0] / norm, axis[1] / norm, axis[2] / norm],
            angle,
        })
    }

    /// Rodrigues rotation of `v` about the origin.
    pub fn apply(&self, v: [f64; 3]) -> [f64; 3] {
        if self.angle == 0.0 {
            return v;
        }
        let k = self.axis;
        let (s, c) = self.angle.sin_cos();
        let dot = k[0] * v[0] + k[1] * v[1] + k[2] * v[2];
        let cross = [
            k[1] * v[2] - k[2] * v[1],
            k[2] * v[0] - k[0] * v[2],
            k[0] * v[1] - k[1] * v[0],
        ];
        let mut out = [0.0; 3];
        for i in 0..3 {
            out[i] = v[i] * c + cross[i] * s + k[i] * dot * (1.0 - c);
        }
        out
    }
}

fn rotate_about_centroid(points: &[[f64; 3]], rotation: &Rotation) -> Vec<[f64; 3]> {
    let n = points.len() as f64;
    let mut centroid = [0.0; 3];
    for p in points {
        for i in 0..3 {
            centroid[i] += p[i] / n;
        }
    }
    points
        .iter()
        .map(|p| {
            let r = rotation.apply([p[0] - centroid[0], p[1] - centroid[1], p[2] - centroid[2]]);
            [r[0] + centroid[0], r[1] + centroid[1], r[2] + centroid[2]]
        })
        .collect()
}

fn to_spot_set(points: Vec<[f64; 3]>, field_half_width: f64) -> Result<SpotSet> {
    for (index, p) in points.iter().enumerate() {
        if p[0].abs() > field_half_width || p[1].abs() > field_half_width {
            return Err(HoloError::OutOfField {
                index,
                x: p[0],
                y: p[1],
                half_width: field_half_width,
            });
        }
    }
    SpotSet::new(
        points
            .into_iter()
            .map(|p| Spot::new(p[0], p[1], p[2]))
            .collect(),
    )
}

/// `rows x cols` planar grid centered at the origin, then rotated.
pub fn grid_scenario(
    rows: usize,
    cols: usize,
    spacing: f64,
    rotation: &Rotation,
    field_half_width: f64,
) -> Result<SpotSet> {
    if rows == 0 || cols == 0 {
        return Err(invalid("grid needs at least one row and one column"));
    }
    if !(spacing.is_finite() && spacing > 0.0) {
        return Err(invalid(format!(
            "grid spacing must be positive, got {spacing}"
        )));
    }
    let mut points = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            points.push([
                (c as f64 - (cols as f64 - 1.0) / 2.0) * spacing,
                (r as f64 - (rows as f64 - 1.0) / 2.0) * spacing,
                0.0,
            ]);
        }
    }
    to_spot_set(rotate_about_centroid(&points, rotation), field_half_width)
}

/// The 8 corners of each of two cubes, rotated about the joint centroid.
pub fn cubes_scenario(
    edge: f64,
    centers: [[f64; 3]; 2],
    rotation: &Rotation,
    field_half_width: f64,
) -> Result<SpotSet> {
    if !(edge.is_finite() && edge > 0.0) {
        return Err(invalid(format!("cube edge must be positive, got {edge}")));
    }
    if centers[0] == centers[1] {
        return Err(invalid("cube centers must be distinct"));
    }
    let h = edge / 2.0;
    let mut points = Vec::with_capacity(16);
    for c in centers {
        for corner in 0..8 {
            let sx = if corner & 1 == 0 { -h } else { h };
            let sy = if corner & 2 == 0 { -h } else { h };
            let sz = if corner & 4 == 0 { -h } else { h };
            points.push([c[0] + sx, c[1] + sy, c[2] + sz]);
        }
    }
    to_spot_set(rotate_about_centroid(&points, rotation), field_half_width)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Pattern {
    Grid {
        rows: usize,
        cols: usize,
        spacing: f64,
    },
    Cubes {
        edge: f64,
        centers: [[f64; 3]; 2],
    },
}

/// A named spot pattern with its base orientation.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub pattern: Pattern,
    pub rotation: Rotation,
    pub field_half_width: f64,
}

impl Scenario {
    pub fn grid100() -> Self {
        Self::grid("grid100", 10, 10)
    }

    pub fn grid36() -> Self {
        Self::grid("grid36", 6, 6)
    }

    pub fn cubes() -> Self {
        Self {
            name: "cubes".into(),
            pattern: Pattern::Cubes {
                edge: DEFAULT_CUBE_EDGE,
                centers: [
                    [-DEFAULT_CUBE_OFFSET, 0.0, 0.0],
                    [DEFAULT_CUBE_OFFSET, 0.0, 0.0],
                ],
            },
            rotation: Rotation::identity(),
            field_half_width: DEFAULT_FIELD_HALF_WIDTH,
        }
    }

    fn grid(name: &str, rows: usize, cols: usize) -> Self {
        Self {
            name: name.into(),
            pattern: Pattern::Grid {
                rows,
                cols,
                spacing: DEFAULT_GRID_SPACING,
            },
            rotation: Rotation::identity(),
            field_half_width: DEFAULT_FIELD_HALF_WIDTH,
        }
    }

    /// The three benchmark presets.
    pub fn presets() -> Vec<Scenario> {
        vec![Self::grid100(), Self::grid36(), Self::cubes()]
    }

    pub fn preset(name: &str) -> Option<Scenario> {
        Self::presets().into_iter().find(|s| s.name == name)
    }

    pub fn spot_count(&self) -> usize {
        match self.pattern {
            Pattern::Grid { rows, cols, .. } => rows * cols,
            Pattern::Cubes { .. } => 16,
        }
    }

    pub fn spots(&self) -> Result<SpotSet> {
        self.spots_with(&self.rotation)
    }

    fn spots_with(&self, rotation: &Rotation) -> Result<SpotSet> {
        match self.pattern {
            Pattern::Grid {
                rows,
                cols,
                spacing,
            } => grid_scenario(rows, cols, spacing, rotation, self.field_half_width),
            Pattern::Cubes { edge, centers } => {
                cubes_scenario(edge, centers, rotation, self.field_half_width)
            }
        }
    }

    /// Orientation `frame` of a sweep: the base pattern additionally rotated
    /// by `frame * step` about `axis`.
    pub fn frame(&self, frame: usize, step: f64, axis: [f64; 3]) -> Result<SpotSet> {
        let base = self.spots_with(&self.rotation)?;
        if frame == 0 {
            return Ok(base);
        }
        let extra = Rotation::new(axis, frame as f64 * step)?;
        let points: Vec<[f64; 3]> = base.iter().map(|s| [s.x, s.y, s.z]).collect();
        to_spot_set(
            rotate_about_centroid(&points, &extra),
            self.field_half_width,
        )
    }

    /// Orientation used for the `index`-th run of a benchmark cell.
    pub fn benchmark_frame(&self, index: usize) -> Result<SpotSet> {
        self.frame(index, DEFAULT_SWEEP_STEP, DEFAULT_SWEEP_AXIS)
    }
}

/// `frames` successive orientations, starting with the unrotated pattern.
pub fn rotation_sweep(
    scenario: &Scenario,
    frames: usize,
    step: f64,
    axis: [f64; 3],
) -> Result<Vec<SpotSet>> {
    if frames == 0 {
        return Err(invalid("rotation sweep needs at least one frame"));
    }
    (0..frames).map(|f| scenario.frame(f, step, axis)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coords(s: &SpotSet) -> Vec<[f64; 3]> {
        s.iter().map(|p| [p.x, p.y, p.z]).collect()
    }

    fn close(a: [f64; 3], b: [f64; 3], tol: f64) -> bool {
        (0..3).all(|i| (a[i] - b[i]).abs() <= tol)
    }

    #[test]
    fn preset_counts() {
        assert_eq!(Scenario::grid100().spots().unwrap().len(), 100);
        assert_eq!(Scenario::grid36().spots().unwrap().len(), 36);
        let cubes = Scenario::cubes().spots().unwrap();
        assert_eq!(cubes.len(), 16);
        let pts = coords(&cubes);
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                assert_ne!(pts[i], pts[j]);
            }
        }
        for s in Scenario::presets() {
            assert_eq!(s.spots().unwrap().len(), s.spot_count());
        }
    }

    #[test]
    fn flat_grid_is_coplanar_and_centered() {
        let g = Scenario::grid100().spots().unwrap();
        assert!(g.iter().all(|s| s.z == 0.0 && s.amplitude == 1.0));
        let cx: f64 = g.iter().map(|s| s.x).sum();
        assert!(cx.abs() < 1e-15);
    }

    #[test]
    fn quarter_turn_about_x_maps_y_to_z() {
        let rot = Rotation::new([1.0, 0.0, 0.0], PI / 2.0).unwrap();
        let g = grid_scenario(2, 2, 2e-6, &rot, 1.0).unwrap();
        let expect = [
            [-1e-6, 0.0, -1e-6],
            [1e-6, 0.0, -1e-6],
            [-1e-6, 0.0, 1e-6],
            [1e-6, 0.0, 1e-6],
        ];
        for (p, e) in coords(&g).into_iter().zip(expect) {
            assert!(close(p, e, 1e-18), "{p:?} vs {e:?}");
        }
    }

    #[test]
    fn unit_cube_corners() {
        let c = cubes_scenario(
            1.0,
            [[0.0, 0.0, 0.0], [10.0, 0.0, 0.0]],
            &Rotation::identity(),
            100.0,
        )
        .unwrap();
        let first: Vec<[f64; 3]> = coords(&c).into_iter().take(8).collect();
        for sx in [-0.5, 0.5] {
            for sy in [-0.5, 0.5] {
                for sz in [-0.5, 0.5] {
                    assert!(first.contains(&[sx, sy, sz]));
                }
            }
        }
    }

    #[test]
    fn full_turn_is_identity() {
        let mut s = Scenario::cubes();
        let base = coords(&s.spots().unwrap());
        s.rotation = Rotation::new([0.3, -1.0, 0.5], 2.0 * PI).unwrap();
        for (a, b) in coords(&s.spots().unwrap()).into_iter().zip(base) {
            assert!(close(a, b, 1e-12 * 1e-4));
        }
    }

    #[test]
    fn out_of_field_is_rejected() {
        let err = grid_scenario(10, 10, 50e-6, &Rotation::identity(), 200e-6);
        assert!(matches!(err, Err(HoloError::OutOfField { .. })));
        assert!(grid_scenario(0, 3, 1e-6, &Rotation::identity(), 1.0).is_err());
        assert!(grid_scenario(3, 3, 0.0, &Rotation::identity(), 1.0).is_err());
        let same = [[0.0; 3], [0.0; 3]];
        assert!(cubes_scenario(1e-6, same, &Rotation::identity(), 1.0).is_err());
    }

    #[test]
    fn sweep_frames() {
        let g = Scenario::grid36();
        let one = rotation_sweep(&g, 1, 0.3, [0.0, 0.0, 1.0]).unwrap();
        assert_eq!(one, vec![g.spots().unwrap()]);
        let eleven = rotation_sweep(&g, 11, PI / 5.0, [0.0, 0.0, 1.0]).unwrap();
        let first = coords(&eleven[0]);
        let last = coords(&eleven[10]);
        for p in &last {
            assert!(first.iter().any(|q| close(*p, *q, 1e-17)));
        }
        assert!(rotation_sweep(&g, 0, 0.1, [0.0, 0.0, 1.0]).is_err());
    }

    #[test]
    fn quarter_turn_about_z_maps_square_grid_to_itself() {
        let g = Scenario::grid100();
        let base = coords(&g.spots().unwrap());
        let turned = coords(&g.frame(1, PI / 2.0, [0.0, 0.0, 1.0]).unwrap());
        for p in &turned {
            assert!(base.iter().any(|q| close(*p, *q, 1e-17)));
        }
    }
}
