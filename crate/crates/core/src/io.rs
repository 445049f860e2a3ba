//! File formats: spot lists, scenario configs, phase lookup tables, binary
//! PGM (P5) images and raw little-endian dumps.
//!
//! Raw dumps share a 16-byte header: 4-byte magic, then `u32` width, `u32`
//! height and a reserved `u32` (zero), all little-endian. Field images
//! (`HFIM`) carry `f32` intensities; phase maps (`HPHS`) carry `f64` phases
//! over the full square grid, zero outside the aperture.

use std::f64::consts::{PI, TAU};
use std::io::Write;

use crate::error::{invalid, HoloError, Result};
use crate::optics::{wrap_phase, Hologram, Pupil, Spot, SpotSet};
use crate::scenarios::{Pattern, Rotation, Scenario};
use crate::simulate::FieldImage;

pub const FIELD_MAGIC: &[u8; 4] = b"HFIM";
pub const PHASE_MAGIC: &[u8; 4] = b"HPHS";
const HEADER_LEN: usize = 16;

/// Formats like C's `%.<sig>g`.
pub fn format_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sig = sig.max(1);
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if exp < -4 || exp >= sig as i32 {
        format!(
            "{}e{}{:02}",
            trim_zeros(mantissa),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_f64(line: usize, field: &str) -> Result<f64> {
    field
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| HoloError::Parse {
            line,
            message: format!("'{field}' is not a finite number"),
        })
}

/// Parses `x_um y_um z_um relative_intensity` lines; `#` starts a comment line.
pub fn parse_spot_list(text: &str) -> Result<SpotSet> {
    let mut spots = Vec::new();
    for (line, l) in content_lines(text) {
        let fields: Vec<&str> = l.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(HoloError::Parse {
                line,
                message: format!(
                    "expected 4 fields (x y z intensity), found {}",
                    fields.len()
                ),
            });
        }
        let v = fields
            .iter()
            .map(|f| parse_f64(line, f))
            .collect::<Result<Vec<_>>>()?;
        if !(v[3] > 0.0) {
            return Err(HoloError::Parse {
                line,
                message: format!("relative intensity must be positive, got {}", v[3]),
            });
        }
        spots.push(Spot::new(v[0] * 1e-6, v[1] * 1e-6, v[2] * 1e-6).with_amplitude(v[3].sqrt()));
    }
    SpotSet::new(spots)
}

pub fn format_spot_list(spots: &SpotSet) -> String {
    let mut out = String::from("# x_um y_um z_um relative_intensity\n");
    for s in spots {
        out.push_str(&format!(
            "{} {} {} {}\n",
            format_sig(s.x * 1e6, 17),
            format_sig(s.y * 1e6, 17),
            format_sig(s.z * 1e6, 17),
            format_sig(s.amplitude * s.amplitude, 17)
        ));
    }
    out
}

fn parse_triple(line: usize, value: &str) -> Result<[f64; 3]> {
    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(HoloError::Parse {
            line,
            message: format!("expected three comma-separated numbers, got '{value}'"),
        });
    }
    Ok([
        parse_f64(line, parts[0])?,
        parse_f64(line, parts[1])?,
        parse_f64(line, parts[2])?,
    ])
}

fn parse_count(line: usize, value: &str) -> Result<usize> {
    value.parse().map_err(|_| HoloError::Parse {
        line,
        message: format!("'{value}' is not a non-negative integer"),
    })
}

/// Parses a `key = value` scenario definition.
///
/// Keys: `preset` (grid100, grid36, cubes), `name`, `kind` (grid, cubes),
/// `rows`, `cols`, `spacing_um`, `edge_um`, `center1_um`, `center2_um`
/// (comma triples), `rotation_axis` (comma triple), `rotation_deg`,
/// `field_half_width_um`.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let mut scenario = Scenario::grid36();
    let mut name = None;
    let mut axis = [0.0, 0.0, 1.0];
    let mut degrees = 0.0;
    for (line, l) in content_lines(text) {
        let (key, value) = l.split_once('=').ok_or_else(|| HoloError::Parse {
            line,
            message: "expected 'key = value'".into(),
        })?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "preset" => {
                scenario = Scenario::preset(value).ok_or_else(|| HoloError::Parse {
                    line,
                    message: format!("unknown preset '{value}'"),
                })?;
                name.get_or_insert_with(|| value.to_string());
            }
            "name" => name = Some(value.to_string()),
            "kind" => {
                scenario.pattern = match value {
                    "grid" => match scenario.pattern {
                        p @ Pattern::Grid { .. } => p,
                        _ => Scenario::grid36().pattern,
                    },
                    "cubes" => match scenario.pattern {
                        p @ Pattern::Cubes { .. } => p,
                        _ => Scenario::cubes().pattern,
                    },
                    _ => {
                        return Err(HoloError::Parse {
                            line,
                            message: format!("unknown kind '{value}'"),
                        })
                    }
                }
            }
            "rows" | "cols" | "spacing_um" => {
                let Pattern::Grid {
                    rows,
                    cols,
                    spacing,
                } = &mut scenario.pattern
                else {
                    return Err(HoloError::Parse {
                        line,
                        message: format!("'{key}' only applies to grid scenarios"),
                    });
                };
                match key {
                    "rows" => *rows = parse_count(line, value)?,
                    "cols" => *cols = parse_count(line, value)?,
                    _ => *spacing = parse_f64(line, value)? * 1e-6,
                }
            }
            "edge_um" | "center1_um" | "center2_um" => {
                let Pattern::Cubes { edge, centers } = &mut scenario.pattern else {
                    return Err(HoloError::Parse {
                        line,
                        message: format!("'{key}' only applies to cube scenarios"),
                    });
                };
                match key {
                    "edge_um" => *edge = parse_f64(line, value)? * 1e-6,
                    "center1_um" => centers[0] = parse_triple(line, value)?.map(|v| v * 1e-6),
                    _ => centers[1] = parse_triple(line, value)?.map(|v| v * 1e-6),
                }
            }
            "rotation_axis" => axis = parse_triple(line, value)?,
            "rotation_deg" => degrees = parse_f64(line, value)?,
            "field_half_width_um" => scenario.field_half_width = parse_f64(line, value)? * 1e-6,
            _ => {
                return Err(HoloError::Parse {
                    line,
                    message: format!("unknown key '{key}'"),
                })
            }
        }
    }
    scenario.name = name.unwrap_or_else(|| "custom".into());
    scenario.rotation = Rotation::new(axis, degrees.to_radians())?;
    scenario.spots()?;
    Ok(scenario)
}

/// 256-level phase-to-gray lookup table.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseLut {
    phases: Vec<f64>,
    /// `(wrapped phase, gray)` sorted by phase, for nearest-level search.
    sorted: Vec<(f64, u8)>,
    linear: bool,
}

impl Default for PhaseLut {
    fn default() -> Self {
        Self::linear()
    }
}

impl PhaseLut {
    pub const LEVELS: usize = 256;

    /// `phase(g) = -pi + 2 pi g / 256`.
    pub fn linear() -> Self {
        let phases = (0..Self::LEVELS)
            .map(|g| -PI + TAU * g as f64 / Self::LEVELS as f64)
            .collect();
        Self::build(phases, true)
    }

    /// One phase (radians) per line for gray levels 0..=255; `#` lines ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut phases = Vec::with_capacity(Self::LEVELS);
        for (line, l) in content_lines(text) {
            phases.push(parse_f64(line, l)?);
        }
        if phases.len() != Self::LEVELS {
            return Err(HoloError::Format(format!(
                "lookup table needs {} entries, found {}",
                Self::LEVELS,
                phases.len()
            )));
        }
        Ok(Self::build(phases, false))
    }

    fn build(phases: Vec<f64>, linear: bool) -> Self {
        let mut sorted: Vec<(f64, u8)> = phases
            .iter()
            .enumerate()
            .map(|(g, &p)| (wrap_phase(p), g as u8))
            .collect();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        Self {
            phases,
            sorted,
            linear,
        }
    }

    pub fn phase(&self, gray: u8) -> f64 {
        self.phases[gray as usize]
    }

    /// Gray level whose phase is circularly nearest to `phase`.
    pub fn gray(&self, phase: f64) -> u8 {
        let p = wrap_phase(phase);
        if self.linear {
            let g = ((p + PI) * (Self::LEVELS as f64 / TAU)).round() as usize;
            return (g % Self::LEVELS) as u8;
        }
        let n = self.sorted.len();
        let idx = self.sorted.partition_point(|&(q, _)| q < p);
        let dist = |q: f64| wrap_phase(q - p).abs();
        let a = self.sorted[idx % n];
        let b = self.sorted[(idx + n - 1) % n];
        if dist(a.0) <= dist(b.0) {
            a.1
        } else {
            b.1
        }
    }
}

/// 8-bit grayscale image, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

/// Writes a binary PGM (P5, maxval 255).
pub fn write_pgm(image: &GrayImage, comment: Option<&str>, mut out: impl Write) -> Result<()> {
    writeln!(out, "P5")?;
    if let Some(c) = comment {
        for line in c.lines() {
            writeln!(out, "# {line}")?;
        }
    }
    write!(out, "{} {}\n255\n", image.width, image.height)?;
    out.write_all(&image.pixels)?;
    Ok(())
}

/// Reads a binary PGM (P5) with maxval <= 255.
pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let mut pos = 0;
    let mut tokens = Vec::with_capacity(4);
    while tokens.len() < 4 {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos < bytes.len() && bytes[pos] == b'#' {
            while pos < bytes.len() && bytes[pos] != b'\n' {
                pos += 1;
            }
            continue;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() && bytes[pos] != b'#' {
            pos += 1;
        }
        if start == pos {
            return Err(HoloError::Format("truncated PGM header".into()));
        }
        tokens.push(String::from_utf8_lossy(&bytes[start..pos]).into_owned());
    }
    if tokens[0] != "P5" {
        return Err(HoloError::Format(format!(
            "expected P5 magic, found '{}'",
            tokens[0]
        )));
    }
    let num = |t: &str| {
        t.parse::<usize>()
            .map_err(|_| HoloError::Format(format!("bad PGM header field '{t}'")))
    };
    let (width, height, maxval) = (num(&tokens[1])?, num(&tokens[2])?, num(&tokens[3])?);
    if maxval == 0 || maxval > 255 {
        return Err(HoloError::Format(format!(
            "unsupported PGM maxval {maxval}"
        )));
    }
    // Exactly one whitespace byte separates the header from the raster.
    pos += 1;
    let len = width * height;
    if bytes.len() < pos + len {
        return Err(HoloError::Format("truncated PGM raster".into()));
    }
    Ok(GrayImage {
        width,
        height,
        pixels: bytes[pos..pos + len].to_vec(),
    })
}

/// Square `side_px` gray image of the hologram; gray 0 outside the aperture.
pub fn hologram_to_gray(pupil: &Pupil, hologram: &Hologram, lut: &PhaseLut) -> Result<GrayImage> {
    hologram.check(pupil)?;
    let side = pupil.side_px();
    let mut pixels = vec![0u8; side * side];
    for (s, px) in pupil.permutation().iter().enumerate() {
        pixels[px.row as usize * side + px.col as usize] = lut.gray(hologram.phases()[s]);
    }
    Ok(GrayImage {
        width: side,
        height: side,
        pixels,
    })
}

pub fn hologram_from_gray(pupil: &Pupil, image: &GrayImage, lut: &PhaseLut) -> Result<Hologram> {
    let side = pupil.side_px();
    if image.width != side || image.height != side {
        return Err(HoloError::GeometryMismatch(format!(
            "image is {}x{}, pupil grid is {side}x{side}",
            image.width, image.height
        )));
    }
    let phases = pupil
        .permutation()
        .iter()
        .map(|px| lut.phase(image.pixels[px.row as usize * side + px.col as usize]))
        .collect();
    Hologram::from_phases(pupil, phases)
}

/// Linear map of `[0, max]` onto gray levels `0..=255`, max per image.
pub fn field_to_gray(image: &FieldImage) -> GrayImage {
    let max = image.max();
    let pixels = image
        .intensity
        .iter()
        .map(|&v| {
            if max > 0.0 {
                (v / max * 255.0).round().clamp(0.0, 255.0) as u8
            } else {
                0
            }
        })
        .collect();
    GrayImage {
        width: image.width,
        height: image.height,
        pixels,
    }
}

pub fn field_pgm_comment(image: &FieldImage) -> String {
    format!(
        "linear map of normalized intensity [0, max] to [0, 255], max={}\nz_m={} exposure={}",
        format_sig(image.max(), 9),
        format_sig(image.z, 9),
        match image.exposure {
            crate::simulate::Exposure::Linear => "linear",
            crate::simulate::Exposure::TwoPhoton => "two-photon",
        }
    )
}

fn write_header(out: &mut impl Write, magic: &[u8; 4], width: usize, height: usize) -> Result<()> {
    let w = u32::try_from(width).map_err(|_| invalid("image too wide"))?;
    let h = u32::try_from(height).map_err(|_| invalid("image too tall"))?;
    out.write_all(magic)?;
    out.write_all(&w.to_le_bytes())?;
    out.write_all(&h.to_le_bytes())?;
    out.write_all(&0u32.to_le_bytes())?;
    Ok(())
}

fn read_header<'a>(
    bytes: &'a [u8],
    magic: &[u8; 4],
    elem: usize,
) -> Result<(usize, usize, &'a [u8])> {
    if bytes.len() < HEADER_LEN || &bytes[..4] != magic {
        return Err(HoloError::Format(format!(
            "missing '{}' header",
            String::from_utf8_lossy(magic)
        )));
    }
    let word = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap()) as usize;
    let (width, height) = (word(4), word(8));
    let body = &bytes[HEADER_LEN..];
    if body.len() != width * height * elem {
        return Err(HoloError::Format(format!(
            "expected {} payload bytes for {width}x{height}, found {}",
            width * height * elem,
            body.len()
        )));
    }
    Ok((width, height, body))
}

/// `HFIM` dump of a rendered image, `f32` row-major.
pub fn write_raw_field(image: &FieldImage, mut out: impl Write) -> Result<()> {
    write_header(&mut out, FIELD_MAGIC, image.width, image.height)?;
    for &v in &image.intensity {
        out.write_all(&(v as f32).to_le_bytes())?;
    }
    Ok(())
}

/// Returns `(width, height, intensities)`.
pub fn read_raw_field(bytes: &[u8]) -> Result<(usize, usize, Vec<f32>)> {
    let (w, h, body) = read_header(bytes, FIELD_MAGIC, 4)?;
    let values = body
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok((w, h, values))
}

/// `HPHS` dump of a hologram over the full `side_px` grid, `f64` row-major.
pub fn write_raw_phase(pupil: &Pupil, hologram: &Hologram, mut out: impl Write) -> Result<()> {
    let grid = hologram.to_grid(pupil, 0.0)?;
    let side = pupil.side_px();
    write_header(&mut out, PHASE_MAGIC, side, side)?;
    for v in grid {
        out.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_raw_phase(bytes: &[u8], pupil: &Pupil) -> Result<Hologram> {
    let (w, h, body) = read_header(bytes, PHASE_MAGIC, 8)?;
    if w != pupil.side_px() || h != pupil.side_px() {
        return Err(HoloError::GeometryMismatch(format!(
            "phase dump is {w}x{h}, pupil grid is {0}x{0}",
            pupil.side_px()
        )));
    }
    let grid: Vec<f64> = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Hologram::from_grid(pupil, &grid)
}
