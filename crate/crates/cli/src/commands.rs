use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use holo_core::bench::{
    calibrate as measure_rate, compare_at_budget, default_c_values, summarize, write_csv,
    write_summary_csv, BudgetSpec,
};
use holo_core::io::{
    field_pgm_comment, field_to_gray, format_sig, hologram_from_gray, hologram_to_gray,
    parse_scenario, parse_spot_list, read_pgm, read_raw_phase, write_pgm, write_raw_field,
    write_raw_phase, PhaseLut,
};
use holo_core::{
    evaluate, render_plane, solve as run_solver, Budget, CostModel, Executor, Hologram, Pupil,
    Scenario, SolverConfig, SpotSet, Window,
};

use crate::{BenchArgs, BudgetArg, CalibrateArgs, RenderArgs, SolveArgs};

/// Iterations timed when an `auto<ms>ms` budget needs a throughput figure.
const AUTO_CALIBRATION_ITERS: usize = 2;

fn load_lut(path: Option<&Path>) -> Result<PhaseLut> {
    match path {
        None => Ok(PhaseLut::linear()),
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            PhaseLut::parse(&text).with_context(|| format!("parsing LUT {}", p.display()))
        }
    }
}

fn preset(name: &str) -> Result<Scenario> {
    match Scenario::preset(name) {
        Some(s) => Ok(s),
        None => bail!("unknown scenario '{name}' (expected grid100, grid36 or cubes)"),
    }
}

fn load_spots(args: &SolveArgs) -> Result<SpotSet> {
    if let Some(path) = &args.spots {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        return parse_spot_list(&text).with_context(|| format!("parsing {}", path.display()));
    }
    let scenario = match (&args.scenario, &args.scenario_file) {
        (Some(name), _) => preset(name)?,
        (None, Some(path)) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            parse_scenario(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        (None, None) => bail!("no spots given"),
    };
    Ok(scenario.benchmark_frame(args.frame)?)
}

fn check_field(pupil: &Pupil, spots: &SpotSet) -> Result<()> {
    let half = pupil.field_half_width();
    for (i, s) in spots.iter().enumerate() {
        if s.x.abs() > half || s.y.abs() > half {
            bail!(
                "spot {} at ({:.3}, {:.3}) um lies outside the addressable field of +-{:.3} um",
                i + 1,
                s.x * 1e6,
                s.y * 1e6,
                half * 1e6
            );
        }
    }
    Ok(())
}

fn resolve_budget(
    arg: BudgetArg,
    pupil: &Pupil,
    spots: &SpotSet,
    exec: &Executor,
) -> Result<Budget> {
    Ok(match arg {
        BudgetArg::Ops(n) => Budget::Ops(n),
        BudgetArg::Multiple(k) => {
            let mn = CostModel::new(pupil, spots).full_iteration();
            Budget::Ops((k * mn as f64).floor() as u64)
        }
        BudgetArg::AutoMs(ms) => {
            let ops_per_ms = measure_rate(pupil, spots, AUTO_CALIBRATION_ITERS, exec)?;
            log::info!("calibrated {} pixel-spot ops/ms", format_sig(ops_per_ms, 6));
            Budget::WallMs { ms, ops_per_ms }
        }
    })
}

fn write_file(
    path: &Path,
    f: impl FnOnce(&mut BufWriter<File>) -> holo_core::Result<()>,
) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut out = BufWriter::new(file);
    f(&mut out).with_context(|| format!("writing {}", path.display()))?;
    out.flush()?;
    Ok(())
}

pub fn solve(args: SolveArgs, exec: &Executor) -> Result<()> {
    let pupil = args
        .pupil
        .config(holo_core::optics::DEFAULT_SIDE_PX)
        .build()?;
    let spots = load_spots(&args)?;
    check_field(&pupil, &spots)?;
    let lut = load_lut(args.lut.as_deref())?;

    let mut config = SolverConfig {
        algorithm: args.alg,
        iterations: args.iters,
        compression: args.c,
        seed: args.seed,
        budget: None,
    };
    if let Some(b) = args.budget_ops {
        config.budget = Some(resolve_budget(b, &pupil, &spots, exec)?);
    }
    config.validate()?;

    let start = Instant::now();
    let sol = run_solver(&pupil, &spots, &config, exec)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    for flag in sol.trace.flags.labels() {
        log::warn!("solver flag: {flag}");
    }
    let report = evaluate(&pupil, &sol.hologram, &spots, exec)?;

    let gray = hologram_to_gray(&pupil, &sol.hologram, &lut)?;
    let comment = format!(
        "holo {} seed={} c={} iters={} side_px={} pupil_seed={}\nphase = -pi + 2 pi g / 256{}",
        config.algorithm,
        config.seed,
        format_sig(config.compression, 9),
        sol.trace.iterations(),
        pupil.side_px(),
        pupil.seed(),
        if args.lut.is_some() {
            " (custom LUT applied)"
        } else {
            ""
        }
    );
    write_file(&args.out, |w| write_pgm(&gray, Some(&comment), w))?;
    if let Some(raw) = &args.raw {
        write_file(raw, |w| write_raw_phase(&pupil, &sol.hologram, w))?;
    }

    println!(
        "e={} u={} ops={} iters={} wall_ms={:.3}",
        format_sig(report.efficiency, 9),
        format_sig(report.uniformity, 9),
        sol.trace.ops,
        sol.trace.iterations(),
        wall_ms
    );
    Ok(())
}

fn load_hologram(path: &Path, pupil: &Pupil, lut: &PhaseLut) -> Result<Hologram> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let holo = if bytes.starts_with(b"P5") {
        hologram_from_gray(pupil, &read_pgm(&bytes)?, lut)?
    } else if bytes.starts_with(b"HPHS") {
        read_raw_phase(&bytes, pupil)?
    } else {
        bail!(
            "{}: neither a P5 graymap nor an HPHS phase dump",
            path.display()
        );
    };
    Ok(holo)
}

fn stack_path(base: &Path, index: usize, stack: bool) -> PathBuf {
    if !stack {
        return base.to_path_buf();
    }
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("field");
    let name = match base.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}_z{index}.{ext}"),
        None => format!("{stem}_z{index}"),
    };
    base.with_file_name(name)
}

pub fn render(args: RenderArgs, exec: &Executor) -> Result<()> {
    let pupil = args
        .pupil
        .config(holo_core::optics::DEFAULT_SIDE_PX)
        .build()?;
    let lut = load_lut(args.lut.as_deref())?;
    let holo = load_hologram(&args.hologram, &pupil, &lut)
        .context("hologram does not match the pupil flags")?;
    let height = args.height.unwrap_or(args.width);
    let window = Window {
        center_x: args.center_um[0] * 1e-6,
        center_y: args.center_um[1] * 1e-6,
        half_width: args.half_width_um * 1e-6,
        half_height: args.half_height_um.unwrap_or(args.half_width_um) * 1e-6,
    };
    let stack = args.z_um.len() > 1;
    for (i, &z_um) in args.z_um.iter().enumerate() {
        let img = render_plane(
            &pupil,
            &holo,
            &window,
            z_um * 1e-6,
            (args.width, height),
            args.exposure.into(),
            exec,
        )?;
        let path = stack_path(&args.out, i, stack);
        write_file(&path, |w| {
            write_pgm(&field_to_gray(&img), Some(&field_pgm_comment(&img)), w)
        })?;
        if let Some(raw) = &args.raw {
            write_file(&stack_path(raw, i, stack), |w| write_raw_field(&img, w))?;
        }
        let (col, row) = img.argmax();
        println!(
            "z_um={} max={} peak_x_um={} peak_y_um={} file={}",
            format_sig(z_um, 9),
            format_sig(img.max(), 9),
            format_sig(window.x(col, img.width) * 1e6, 9),
            format_sig(window.y(row, img.height) * 1e6, 9),
            path.display()
        );
    }
    Ok(())
}

pub fn bench(args: BenchArgs, seeds: Vec<u64>, exec: &Executor) -> Result<()> {
    let pupil_cfg = args.pupil.config(256);
    let pupil = pupil_cfg.build()?;
    let c_values = args.c_sweep.clone().unwrap_or_else(default_c_values);
    if c_values.is_empty() {
        bail!("--c-sweep is empty");
    }
    let scenarios: Vec<Scenario> = args
        .scenario
        .iter()
        .map(|s| preset(s))
        .collect::<Result<_>>()?;

    let mut records = Vec::new();
    let mut table = Vec::new();
    for scenario in &scenarios {
        let budget = match args.budget_ops {
            BudgetArg::Ops(n) => BudgetSpec::Ops(n),
            BudgetArg::Multiple(k) => BudgetSpec::FullIterations(k),
            BudgetArg::AutoMs(ms) => {
                let spots = scenario.benchmark_frame(0)?;
                let rate = measure_rate(&pupil, &spots, AUTO_CALIBRATION_ITERS, exec)?;
                log::info!("{}: {} ops/ms", scenario.name, format_sig(rate, 6));
                BudgetSpec::Ops(((ms * rate).floor() as u64).max(1))
            }
        };
        let cmp = compare_at_budget(
            &pupil_cfg,
            scenario,
            budget,
            &seeds,
            &c_values,
            args.full_iters,
            exec,
        )?;
        table.push(format!("{} (budget {} ops)", cmp.scenario, cmp.budget_ops));
        for row in &cmp.rows {
            let c = &row.cell;
            table.push(format!(
                "  {:<9} c={:<10} I={:<5} e={:.4}±{:.4} u={:.4}±{:.4}{}",
                row.label,
                format_sig(c.c, 6),
                c.iterations,
                c.mean_efficiency,
                c.std_efficiency,
                c.mean_uniformity,
                c.std_uniformity,
                if c.failures > 0 {
                    format!(" ({} failed)", c.failures)
                } else {
                    String::new()
                }
            ));
        }
        records.extend(cmp.records);
    }

    match &args.out {
        Some(path) => write_file(path, |w| write_csv(&records, w))?,
        None => write_csv(&records, io::stdout().lock())?,
    }
    if let Some(path) = &args.summary {
        write_file(path, |w| write_summary_csv(&summarize(&records), w))?;
    }
    let mut err = io::stderr().lock();
    for line in table {
        writeln!(err, "{line}")?;
    }
    Ok(())
}

pub fn calibrate(args: CalibrateArgs, exec: &Executor) -> Result<()> {
    let pupil = args.pupil.config(256).build()?;
    let spots = preset(&args.scenario)?.spots()?;
    let rate = measure_rate(&pupil, &spots, args.iters, exec)?;
    let mn = CostModel::new(&pupil, &spots).full_iteration();
    let frame_ops = (args.frame_ms * rate).floor() as u64;
    println!(
        "ops_per_ms={} frame_ms={} frame_ops={} full_iterations_per_frame={}",
        format_sig(rate, 9),
        format_sig(args.frame_ms, 9),
        frame_ops,
        format_sig(frame_ops as f64 / mn as f64, 4)
    );
    Ok(())
}
