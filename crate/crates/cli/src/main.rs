//! `holo`: phase hologram synthesis, rendering and budgeted benchmarks.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use holo_core::optics::{DEFAULT_FOCAL_LENGTH, DEFAULT_PITCH, DEFAULT_WAVELENGTH};
use holo_core::{Algorithm, Exposure, Illumination, PupilConfig};

#[derive(Parser, Debug)]
#[command(
    name = "holo",
    version,
    about = "Multi-spot phase hologram synthesis (RS, WGS, CS-WGS)"
)]
struct Cli {
    /// Worker threads; 0 uses every core. Results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Pixels per reduction chunk. Results are reproducible for a fixed chunk.
    #[arg(long, global = true, default_value_t = holo_core::kernels::DEFAULT_CHUNK)]
    chunk: usize,

    /// More diagnostics on stderr (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute a hologram and write it as an 8-bit PGM.
    Solve(SolveArgs),
    /// Render focal-plane intensity produced by a hologram file.
    Render(RenderArgs),
    /// Budgeted RS / WGS / CS-WGS comparison over scenarios, ratios and seeds.
    Bench(BenchArgs),
    /// Measure this machine's pixel-spot operations per millisecond.
    Calibrate(CalibrateArgs),
}

#[derive(Args, Debug, Clone)]
struct PupilArgs {
    /// SLM pixels per side; the aperture is the inscribed circle
    /// [default: 1152 for solve and render, 256 for bench and calibrate].
    #[arg(long)]
    side: Option<usize>,

    /// Pixel pitch, micrometers.
    #[arg(long, default_value_t = DEFAULT_PITCH * 1e6)]
    pitch_um: f64,

    /// Wavelength, nanometers.
    #[arg(long, default_value_t = DEFAULT_WAVELENGTH * 1e9)]
    wavelength_nm: f64,

    /// Focal length, millimeters.
    #[arg(long, default_value_t = DEFAULT_FOCAL_LENGTH * 1e3)]
    focal_mm: f64,

    /// Gaussian beam waist radius, millimeters. Uniform illumination if absent.
    #[arg(long)]
    waist_mm: Option<f64>,

    /// Seed of the pixel storage permutation (selects the compressed subset).
    #[arg(long, default_value_t = 0)]
    pupil_seed: u64,
}

impl PupilArgs {
    fn config(&self, default_side: usize) -> PupilConfig {
        PupilConfig {
            side_px: self.side.unwrap_or(default_side),
            pitch: self.pitch_um * 1e-6,
            wavelength: self.wavelength_nm * 1e-9,
            focal_length: self.focal_mm * 1e-3,
            illumination: match self.waist_mm {
                Some(w) => Illumination::Gaussian { waist: w * 1e-3 },
                None => Illumination::Uniform,
            },
            seed: self.pupil_seed,
        }
    }
}

/// Operation budget: an integer count, `auto<ms>ms` (calibrated frame time)
/// or `<k>x` (multiples of one full WGS iteration).
#[derive(Debug, Clone, Copy, PartialEq)]
enum BudgetArg {
    Ops(u64),
    AutoMs(f64),
    Multiple(f64),
}

fn parse_budget(s: &str) -> Result<BudgetArg, String> {
    let t = s.trim();
    if let Some(ms) = t.strip_prefix("auto").and_then(|r| r.strip_suffix("ms")) {
        let ms: f64 = ms.parse().map_err(|_| format!("bad frame time in '{s}'"))?;
        if !(ms > 0.0 && ms.is_finite()) {
            return Err("frame time must be positive".into());
        }
        return Ok(BudgetArg::AutoMs(ms));
    }
    if let Some(k) = t.strip_suffix('x') {
        let k: f64 = k.parse().map_err(|_| format!("bad multiple in '{s}'"))?;
        if !(k > 0.0 && k.is_finite()) {
            return Err("budget multiple must be positive".into());
        }
        return Ok(BudgetArg::Multiple(k));
    }
    match t.parse::<u64>() {
        Ok(0) => Err("budget must be positive".into()),
        Ok(n) => Ok(BudgetArg::Ops(n)),
        Err(_) => Err(format!(
            "expected an operation count, 'auto<ms>ms' or '<k>x', got '{s}'"
        )),
    }
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse::<Algorithm>().map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ExposureArg {
    Linear,
    TwoPhoton,
}

impl From<ExposureArg> for Exposure {
    fn from(e: ExposureArg) -> Self {
        match e {
            ExposureArg::Linear => Exposure::Linear,
            ExposureArg::TwoPhoton => Exposure::TwoPhoton,
        }
    }
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("input").required(true).args(["spots", "scenario", "scenario_file"])))]
struct SolveArgs {
    #[command(flatten)]
    pupil: PupilArgs,

    /// Spot list: `x_um y_um z_um relative_intensity` per line, `#` comments.
    #[arg(long)]
    spots: Option<PathBuf>,

    /// Built-in scenario: grid100, grid36 or cubes.
    #[arg(long)]
    scenario: Option<String>,

    /// Scenario description file (key=value lines).
    #[arg(long)]
    scenario_file: Option<PathBuf>,

    /// Orientation index of a scenario (0 is the unrotated pattern).
    #[arg(long, default_value_t = 0)]
    frame: usize,

    /// rs, wgs or cswgs.
    #[arg(long, default_value = "wgs", value_parser = parse_algorithm)]
    alg: Algorithm,

    #[arg(long, default_value_t = 30)]
    iters: usize,

    /// Compressed subset ratio for cswgs, in (0, 1].
    #[arg(long, default_value_t = 0.0625)]
    c: f64,

    /// Seed of the random starting phases.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Plan iterations from a budget instead of --iters.
    #[arg(long, value_parser = parse_budget)]
    budget_ops: Option<BudgetArg>,

    /// Hologram image (8-bit PGM).
    #[arg(long, default_value = "hologram.pgm")]
    out: PathBuf,

    /// Also write an exact `HPHS` phase dump.
    #[arg(long)]
    raw: Option<PathBuf>,

    /// Gray-level LUT: 256 phases in radians, one per line.
    #[arg(long)]
    lut: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RenderArgs {
    #[command(flatten)]
    pupil: PupilArgs,

    /// Hologram file: PGM (through the LUT) or an `HPHS` phase dump.
    #[arg(long)]
    hologram: PathBuf,

    #[arg(long)]
    lut: Option<PathBuf>,

    /// Window center `x,y`, micrometers.
    #[arg(long, value_delimiter = ',', num_args = 2, default_values_t = [0.0, 0.0], allow_negative_numbers = true)]
    center_um: Vec<f64>,

    /// Window half-width, micrometers.
    #[arg(long, default_value_t = 50.0)]
    half_width_um: f64,

    /// Window half-height, micrometers (defaults to the half-width).
    #[arg(long)]
    half_height_um: Option<f64>,

    /// Focal plane(s), micrometers; several values give a z-stack.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "0",
        allow_negative_numbers = true
    )]
    z_um: Vec<f64>,

    #[arg(long, default_value_t = 128)]
    width: usize,

    /// Defaults to the width.
    #[arg(long)]
    height: Option<usize>,

    #[arg(long, value_enum, default_value_t = ExposureArg::Linear)]
    exposure: ExposureArg,

    /// Output PGM; a z-stack appends `_z<index>` to the file stem.
    #[arg(long, default_value = "field.pgm")]
    out: PathBuf,

    /// Also write `HFIM` float dumps next to the images, with this path pattern.
    #[arg(long)]
    raw: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[command(flatten)]
    pupil: PupilArgs,

    /// Scenarios to run (comma separated).
    #[arg(long, value_delimiter = ',', default_value = "grid100,grid36,cubes")]
    scenario: Vec<String>,

    /// Compression ratios (comma separated). Defaults to 2^-1 .. 2^-8.
    #[arg(long, value_delimiter = ',')]
    c_sweep: Option<Vec<f64>>,

    /// Operation budget per hologram.
    #[arg(long, value_parser = parse_budget, default_value = "auto64ms")]
    budget_ops: BudgetArg,

    /// Number of seeds (0, 1, ..); run k also uses orientation k.
    #[arg(long, conflicts_with = "seed_list")]
    seeds: Option<usize>,

    /// Explicit seeds (comma separated).
    #[arg(long, value_delimiter = ',')]
    seed_list: Option<Vec<u64>>,

    /// Iterations of the unconstrained WGS reference; 0 skips it.
    #[arg(long, default_value_t = holo_core::bench::DEFAULT_FULL_ITERATIONS)]
    full_iters: usize,

    /// Per-run CSV (stdout if absent).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Per-cell mean/std CSV.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CalibrateArgs {
    #[command(flatten)]
    pupil: PupilArgs,

    #[arg(long, default_value = "grid100")]
    scenario: String,

    /// Full WGS iterations timed.
    #[arg(long, default_value_t = 3)]
    iters: usize,

    /// Frame time translated to an operation budget.
    #[arg(long, default_value_t = holo_core::bench::DEFAULT_FRAME_MS)]
    frame_ms: f64,
}

fn usage_error(message: &str) -> ! {
    Cli::command()
        .error(clap::error::ErrorKind::InvalidValue, message)
        .exit()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .init();

    let exec = match holo_core::Executor::with_threads(cli.threads)
        .and_then(|e| e.with_chunk(cli.chunk))
    {
        Ok(e) => e,
        Err(e) => usage_error(&e.to_string()),
    };
    let result = match cli.command {
        Command::Solve(a) => commands::solve(a, &exec),
        Command::Render(a) => commands::render(a, &exec),
        Command::Bench(a) => {
            let seeds = match (&a.seeds, &a.seed_list) {
                (_, Some(list)) if list.is_empty() => usage_error("--seed-list is empty"),
                (_, Some(list)) => list.clone(),
                (Some(0), _) => usage_error("--seeds must be at least 1"),
                (Some(n), _) => (0..*n as u64).collect(),
                (None, None) => (0..10).collect(),
            };
            commands::bench(a, seeds, &exec)
        }
        Command::Calibrate(a) => commands::calibrate(a, &exec),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
