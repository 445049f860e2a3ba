//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed.

use std::f64::consts::{PI, TAU};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use holo_core::bench::{
    compare_at_budget, default_c_values, mean_std, write_csv, write_summary_csv, BudgetSpec,
};
use holo_core::io::{
    hologram_from_gray, hologram_to_gray, read_pgm, read_raw_phase, write_pgm, write_raw_phase,
    PhaseLut,
};
use holo_core::kernels::superpose;
use holo_core::metrics::{report_from_intensities, uniformity};
use holo_core::solvers::{budget_controller, IterationPlan};
use holo_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

// ---------------------------------------------------------------------------
// Double-double brute-force oracle.

#[derive(Clone, Copy, Default)]
struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    fn add_f64(self, x: f64) -> Dd {
        let (s, e) = two_sum(self.hi, x);
        let (hi, lo) = two_sum(s, e + self.lo);
        Dd { hi, lo }
    }

    /// Adds the exact product `a * b`.
    fn add_prod(self, a: f64, b: f64) -> Dd {
        let (p, pe) = two_prod(a, b);
        self.add_f64(p).add_f64(pe)
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }
}

struct OraclePupil {
    side: usize,
    pitch: f64,
    wavelength: f64,
    focal: f64,
    waist: Option<f64>,
}

impl OraclePupil {
    fn of(p: &Pupil) -> Self {
        Self {
            side: p.side_px(),
            pitch: p.pitch(),
            wavelength: p.wavelength(),
            focal: p.focal_length(),
            waist: match p.illumination() {
                Illumination::Uniform => None,
                Illumination::Gaussian { waist } => Some(waist),
            },
        }
    }

    fn coord(&self, i: usize) -> f64 {
        (i as f64 - (self.side as f64 - 1.0) / 2.0) * self.pitch
    }

    fn inside(&self, col: usize, row: usize) -> bool {
        let c = (self.side as f64 - 1.0) / 2.0;
        let (dc, dr) = (col as f64 - c, row as f64 - c);
        (dc * dc + dr * dr).sqrt() <= self.side as f64 / 2.0
    }

    fn amplitude(&self, col: usize, row: usize) -> f64 {
        let (x, y) = (self.coord(col), self.coord(row));
        match self.waist {
            None => 1.0,
            Some(w) => (-(x * x + y * y) / (w * w)).exp(),
        }
    }

    fn phase(&self, s: &Spot, col: usize, row: usize) -> f64 {
        let (x, y) = (self.coord(col), self.coord(row));
        let k = TAU / (self.wavelength * self.focal);
        k * (s.x * x + s.y * y) + k / self.focal * (x * x + y * y) * s.z
    }

    fn pixels(&self) -> Vec<(usize, usize)> {
        let mut v = Vec::new();
        for row in 0..self.side {
            for col in 0..self.side {
                if self.inside(col, row) {
                    v.push((col, row));
                }
            }
        }
        v
    }

    fn total_amplitude(&self) -> Dd {
        self.pixels().iter().fold(Dd::default(), |acc, &(c, r)| {
            acc.add_f64(self.amplitude(c, r))
        })
    }

    /// `(E, sum |term|)` for one spot, with `hologram(col, row)` the phase.
    fn field(&self, spot: &Spot, hologram: &dyn Fn(usize, usize) -> f64) -> ((f64, f64), f64) {
        let (mut re, mut im, mut scale) = (Dd::default(), Dd::default(), Dd::default());
        for (c, r) in self.pixels() {
            let a = self.amplitude(c, r);
            let d = self.phase(spot, c, r) - hologram(c, r);
            re = re.add_prod(a, d.cos());
            im = im.add_prod(a, d.sin());
            scale = scale.add_f64(a);
        }
        ((re.value(), im.value()), scale.value())
    }

    fn intensity(&self, spot: &Spot, hologram: &dyn Fn(usize, usize) -> f64) -> f64 {
        let ((re, im), _) = self.field(spot, hologram);
        let total = self.total_amplitude();
        let t = total.value();
        (re * re + im * im) / (t * t)
    }
}

fn random_case(rng: &mut ChaCha8Rng) -> (Pupil, SpotSet) {
    let side = rng.random_range(4..=16);
    let illumination = if rng.random_bool(0.5) {
        Illumination::Uniform
    } else {
        Illumination::Gaussian {
            waist: rng.random_range(20e-6..120e-6),
        }
    };
    let pupil = PupilConfig::with_side(side)
        .seed(rng.random())
        .illumination(illumination)
        .build()
        .unwrap();
    let reach = 0.8 * pupil.field_half_width();
    let n = rng.random_range(1..=5);
    let spots = (0..n)
        .map(|_| {
            Spot::new(
                rng.random_range(-reach..reach),
                rng.random_range(-reach..reach),
                rng.random_range(-40e-6..40e-6),
            )
            .with_amplitude(rng.random_range(0.2..2.0))
        })
        .collect();
    (pupil, SpotSet::new(spots).unwrap())
}

fn oracle_equivalence() -> Outcome {
    let exec = Executor::sequential();
    let mut worst = [0.0f64; 4];
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 ^ seed);
        let (pupil, spots) = random_case(&mut rng);
        let o = OraclePupil::of(&pupil);
        assert_eq!(o.pixels().len(), pupil.active_count());
        let m = pupil.active_count();
        let side = pupil.side_px();

        // Superposition. Phase error is scaled by |s| / sum(a), the
        // conditioning of arg().
        let amps: Vec<f64> = spots.iter().map(|s| s.amplitude).collect();
        let thetas: Vec<f64> = (0..spots.len())
            .map(|_| rng.random_range(-10.0..10.0))
            .collect();
        let coeffs = SpotCoefficients::new(amps.clone(), thetas.clone()).unwrap();
        let got = superpose(&pupil, &spots, &coeffs, 0..m, &exec).unwrap();
        let asum: f64 = amps.iter().sum();
        for (s, &phase) in got.iter().enumerate() {
            let px = pupil.pixel(s);
            let (c, r) = (px.col as usize, px.row as usize);
            let (mut re, mut im) = (Dd::default(), Dd::default());
            for ((spot, &a), &t) in spots.iter().zip(&amps).zip(&thetas) {
                let arg = o.phase(spot, c, r) + t;
                re = re.add_prod(a, arg.cos());
                im = im.add_prod(a, arg.sin());
            }
            let (re, im) = (re.value(), im.value());
            let norm = re.hypot(im);
            let want = im.atan2(re);
            let diff = (phase - want).rem_euclid(TAU);
            let diff = diff.min(TAU - diff);
            worst[0] = worst[0].max(diff * norm / asum);
        }

        // Forward projection on a random hologram.
        let grid: Vec<f64> = (0..side * side)
            .map(|_| rng.random_range(-PI..PI))
            .collect();
        let holo = Hologram::from_grid(&pupil, &grid).unwrap();
        let phase_at = |c: usize, r: usize| holo_phase(&pupil, &holo, c, r);
        let fields = forward_project(&pupil, &holo, &spots, 0..m, &exec).unwrap();
        for (spot, e) in spots.iter().zip(&fields.0) {
            let ((re, im), scale) = o.field(spot, &phase_at);
            let err = (e.re - re).hypot(e.im - im) / scale;
            worst[1] = worst[1].max(err);
        }

        // Intensities are normalized to a single conjugated spot.
        let ints = spot_intensities(&pupil, &holo, &spots, &exec).unwrap();
        for (spot, &i) in spots.iter().zip(&ints) {
            let want = o.intensity(spot, &phase_at);
            worst[2] = worst[2].max((i - want).abs() / want);
        }

        // Focal-plane probes around the first spot.
        let s0 = spots.spots()[0];
        let win = Window {
            center_x: s0.x,
            center_y: s0.y,
            half_width: 3.0 * pupil.diffraction_unit(),
            half_height: 2.0 * pupil.diffraction_unit(),
        };
        let (w, h) = (5, 4);
        let img = render_plane(&pupil, &holo, &win, s0.z, (w, h), Exposure::Linear, &exec).unwrap();
        for row in 0..h {
            for col in 0..w {
                let probe = Spot::new(
                    win.center_x - win.half_width
                        + (col as f64 + 0.5) * 2.0 * win.half_width / w as f64,
                    win.center_y - win.half_height
                        + (row as f64 + 0.5) * 2.0 * win.half_height / h as f64,
                    s0.z,
                );
                let want = o.intensity(&probe, &phase_at);
                let got = img.at(col, row);
                worst[3] = worst[3].max((got - want).abs() / want);
            }
        }
    }
    let names = [
        "superpose",
        "forward_project",
        "spot_intensities",
        "render_plane",
    ];
    let detail = names
        .iter()
        .zip(worst)
        .map(|(n, w)| format!("{n} {w:.2e}"))
        .collect::<Vec<_>>()
        .join(", ");
    check(
        worst.iter().all(|&w| w <= 1e-12),
        format!("max rel err: {detail}"),
    )
}

fn holo_phase(pupil: &Pupil, holo: &Hologram, col: usize, row: usize) -> f64 {
    let s = pupil
        .storage_index(Pixel {
            col: col as u32,
            row: row as u32,
        })
        .expect("pixel inside aperture");
    holo.phases()[s]
}

// ---------------------------------------------------------------------------

fn seeds(n: u64) -> Vec<u64> {
    (0..n).collect()
}

fn wgs_quality() -> Outcome {
    let pupil = PupilConfig::with_side(256).build().unwrap();
    let exec = Executor::sequential();
    let scenario = Scenario::grid36();
    let (mut e, mut u) = (Vec::new(), Vec::new());
    for (k, seed) in seeds(10).into_iter().enumerate() {
        let spots = scenario.benchmark_frame(k).unwrap();
        let sol = wgs(&pupil, &spots, 30, seed, &exec).unwrap();
        let r = evaluate(&pupil, &sol.hologram, &spots, &exec).unwrap();
        e.push(r.efficiency);
        u.push(r.uniformity);
    }
    let ((me, se), (mu, su)) = (mean_std(&e), mean_std(&u));
    check(
        me >= 0.90 && mu >= 0.90,
        format!("e={me:.4}±{se:.4} u={mu:.4}±{su:.4} (need e>=0.90, u>=0.90)"),
    )
}

fn rs_floor() -> Outcome {
    let pupil = PupilConfig::with_side(512).build().unwrap();
    let exec = Executor::default();
    let scenario = Scenario::grid100();
    let (mut e, mut u) = (Vec::new(), Vec::new());
    for (k, seed) in seeds(10).into_iter().enumerate() {
        let spots = scenario.benchmark_frame(k).unwrap();
        let sol = rs(&pupil, &spots, seed, &exec).unwrap();
        let r = evaluate(&pupil, &sol.hologram, &spots, &exec).unwrap();
        e.push(r.efficiency);
        u.push(r.uniformity);
    }
    let ((me, se), (mu, su)) = (mean_std(&e), mean_std(&u));
    check(
        me >= 0.2 && mu >= 0.2,
        format!("e={me:.4}±{se:.4} u={mu:.4}±{su:.4} (need e>=0.2, u>=0.2)"),
    )
}

fn cswgs_full_ratio() -> Outcome {
    let pupil = PupilConfig::with_side(128).build().unwrap();
    let exec = Executor::default();
    let mut runs = 0;
    for scenario in Scenario::presets() {
        for (k, seed) in seeds(5).into_iter().enumerate() {
            let spots = scenario.benchmark_frame(k).unwrap();
            let a = wgs(&pupil, &spots, 6, seed, &exec).unwrap();
            let b = cswgs(&pupil, &spots, 6, 1.0, seed, &exec).unwrap();
            let same = a
                .hologram
                .phases()
                .iter()
                .zip(b.hologram.phases())
                .all(|(x, y)| x.to_bits() == y.to_bits());
            if !same || a.trace.records != b.trace.records {
                return Err(format!("{} seed {seed} differs", scenario.name));
            }
            runs += 1;
        }
    }
    Ok(format!("{runs} runs bitwise identical"))
}

fn cost_model() -> Outcome {
    let pupil = PupilConfig::with_side(40).build().unwrap();
    let spots = Scenario::cubes().spots().unwrap();
    let exec = Executor::default();
    let (m, n) = (pupil.active_count() as u64, spots.len() as u64);
    let mut runs = 0;
    for c in default_c_values() {
        for iters in [3usize, 10, 50] {
            let sol = cswgs(&pupil, &spots, iters, c, 1, &exec).unwrap();
            let sub = (c * m as f64).ceil() as u64;
            let want = 2 * m * n + sub * n * (iters as u64 - 2);
            if sol.trace.ops != want {
                return Err(format!(
                    "c={c} I={iters}: counted {} expected {want}",
                    sol.trace.ops
                ));
            }
            runs += 1;
        }
    }
    Ok(format!("{runs} (c, I) pairs exact, M={m} N={n}"))
}

fn budgeted_superiority() -> Outcome {
    let pupil = PupilConfig::with_side(512);
    let exec = Executor::default();
    let mut summary = Vec::new();
    let mut runs = Vec::new();
    let mut lines = Vec::new();
    let mut ok = true;
    for (scenario, k) in [(Scenario::grid100(), 1.0), (Scenario::grid36(), 5.0)] {
        let cmp = compare_at_budget(
            &pupil,
            &scenario,
            BudgetSpec::FullIterations(k),
            &seeds(10),
            &default_c_values(),
            0,
            &exec,
        )
        .unwrap();
        let (rs, wgs, cs) = (
            cmp.row("rs").unwrap(),
            cmp.row("wgs").unwrap(),
            cmp.row("cswgs").unwrap(),
        );
        let pass =
            cs.mean_uniformity >= wgs.mean_uniformity && cs.mean_efficiency >= rs.mean_efficiency;
        ok &= pass;
        lines.push(format!(
            "{} @{k}MN: cswgs(c={}, I={}) u={:.4} e={:.4} | wgs(I={}) u={:.4} | rs e={:.4}",
            scenario.name,
            cs.c,
            cs.iterations,
            cs.mean_uniformity,
            cs.mean_efficiency,
            wgs.iterations,
            wgs.mean_uniformity,
            rs.mean_efficiency
        ));
        summary.extend(cmp.rows.iter().map(|r| r.cell.clone()));
        summary.extend(cmp.cswgs_cells.iter().cloned());
        runs.extend(cmp.records);
    }
    let dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join("budgeted_comparison.csv");
    let file = std::fs::File::create(&path).unwrap();
    write_summary_csv(&summary, file).unwrap();
    let runs_path = dir.join("budgeted_runs.csv");
    write_csv(&runs, std::fs::File::create(&runs_path).unwrap()).unwrap();
    check(
        ok,
        format!(
            "{}; csv {} and {}",
            lines.join("; "),
            path.display(),
            runs_path.display()
        ),
    )
}

fn full_convergence_parity() -> Outcome {
    let pupil = PupilConfig::with_side(256).build().unwrap();
    let exec = Executor::default();
    let scenario = Scenario::cubes();
    let c = 1.0 / 16.0;
    let (mut u_cs, mut u_full) = (Vec::new(), Vec::new());
    let mut planned = 0;
    for (k, seed) in seeds(10).into_iter().enumerate() {
        let spots = scenario.benchmark_frame(k).unwrap();
        let cost = CostModel::new(&pupil, &spots);
        let budget = Budget::Ops(cost.full_iteration() * 30 / 4);
        let IterationPlan { iterations, .. } =
            budget_controller(Algorithm::CsWgs, c, &budget, &cost).unwrap();
        planned = iterations;
        let a = cswgs(&pupil, &spots, iterations, c, seed, &exec).unwrap();
        let b = wgs(&pupil, &spots, 30, seed, &exec).unwrap();
        u_cs.push(
            evaluate(&pupil, &a.hologram, &spots, &exec)
                .unwrap()
                .uniformity,
        );
        u_full.push(
            evaluate(&pupil, &b.hologram, &spots, &exec)
                .unwrap()
                .uniformity,
        );
    }
    let (a, b) = (mean_std(&u_cs).0, mean_std(&u_full).0);
    check(
        (a - b).abs() <= 0.05,
        format!(
            "cswgs(c=1/16, I={planned}) u={a:.4}, wgs(I=30) u={b:.4}, gap {:.4} (need <=0.05)",
            (a - b).abs()
        ),
    )
}

fn determinism() -> Outcome {
    let pupil = PupilConfig::with_side(128).build().unwrap();
    let spots = Scenario::grid36().benchmark_frame(2).unwrap();
    let one = Executor::with_threads(1).unwrap().with_chunk(1024).unwrap();
    let four = Executor::with_threads(4).unwrap().with_chunk(1024).unwrap();
    for cfg in [
        SolverConfig::rs(3),
        SolverConfig::wgs(8, 3),
        SolverConfig::cswgs(12, 0.125, 3),
    ] {
        let a = solve(&pupil, &spots, &cfg, &one).unwrap();
        let b = solve(&pupil, &spots, &cfg, &four).unwrap();
        let same = a
            .hologram
            .phases()
            .iter()
            .zip(b.hologram.phases())
            .all(|(x, y)| x.to_bits() == y.to_bits());
        if !same || a.trace.records != b.trace.records {
            return Err(format!("{} differs between 1 and 4 workers", cfg.algorithm));
        }
    }
    Ok("rs, wgs, cswgs bitwise identical on 1 and 4 workers (chunk 1024)".into())
}

fn metric_invariants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst_scale = 0.0f64;
    for k in 0..1000 {
        let n = rng.random_range(1..40);
        let v: Vec<f64> = if k % 10 == 0 {
            vec![rng.random_range(1e-6..10.0); n]
        } else {
            (0..n).map(|_| rng.random_range(0.0..5.0)).collect()
        };
        let u = uniformity(&v).map_err(|e| format!("vector {k}: {e}"))?;
        if !(0.0..=1.0).contains(&u) {
            return Err(format!("vector {k}: u={u} outside [0, 1]"));
        }
        let constant = v.iter().all(|&x| x == v[0]);
        if (u == 1.0) != constant {
            return Err(format!("vector {k}: u={u} but constant={constant}"));
        }
        let s = rng.random_range(1e-3..1e3);
        let scaled: Vec<f64> = v.iter().map(|x| x * s).collect();
        worst_scale = worst_scale.max((uniformity(&scaled).unwrap() - u).abs());
    }
    if worst_scale > 1e-12 {
        return Err(format!("scale invariance off by {worst_scale:.2e}"));
    }

    let pupil = PupilConfig::with_side(64).build().unwrap();
    let exec = Executor::default();
    let mut worst_identity = 0.0f64;
    let mut steps = 0;
    for scenario in Scenario::presets() {
        let spots = scenario.benchmark_frame(1).unwrap();
        let sol = wgs(&pupil, &spots, 25, 5, &exec).unwrap();
        let n = spots.len() as f64;
        let mut prev = vec![1.0; spots.len()];
        for rec in &sol.trace.records {
            let lhs: f64 = rec
                .weights
                .iter()
                .zip(&prev)
                .zip(&rec.magnitudes)
                .map(|((w, p), m)| w / p * m)
                .sum();
            let rhs = rec.magnitudes.iter().sum::<f64>() / n * n;
            worst_identity = worst_identity.max((lhs - rhs).abs() / rhs);
            prev = rec.weights.clone();
            steps += 1;
        }
    }
    check(
        worst_identity <= 1e-12,
        format!(
            "1000 vectors ok, scale err {worst_scale:.2e}; weight identity max rel err {worst_identity:.2e} over {steps} steps"
        ),
    )
}

/// Largest e and u changes seen when the round-trip experiment was first run
/// (grid36 and cubes at 128 px, RS and WGS-10, 5 seeds each, linear LUT):
/// |de| = 6.6e-5, |du| = 7.2e-4. Frozen with 2x headroom.
const PGM_EFFICIENCY_BOUND: f64 = 1.4e-4;
const PGM_UNIFORMITY_BOUND: f64 = 1.5e-3;

fn file_round_trips() -> Outcome {
    let pupil = PupilConfig::with_side(128).build().unwrap();
    let exec = Executor::default();
    let lut = PhaseLut::linear();
    let (mut raw_err, mut de, mut du) = (0.0f64, 0.0f64, 0.0f64);
    for scenario in [Scenario::grid36(), Scenario::cubes()] {
        for (k, seed) in seeds(5).into_iter().enumerate() {
            let spots = scenario.benchmark_frame(k).unwrap();
            for sol in [
                rs(&pupil, &spots, seed, &exec).unwrap(),
                wgs(&pupil, &spots, 10, seed, &exec).unwrap(),
            ] {
                let base = evaluate(&pupil, &sol.hologram, &spots, &exec).unwrap();

                let mut raw = Vec::new();
                write_raw_phase(&pupil, &sol.hologram, &mut raw).unwrap();
                let back = read_raw_phase(&raw, &pupil).unwrap();
                let r = evaluate(&pupil, &back, &spots, &exec).unwrap();
                raw_err = raw_err
                    .max((r.efficiency - base.efficiency).abs() / base.efficiency)
                    .max((r.uniformity - base.uniformity).abs() / base.uniformity);

                let mut pgm = Vec::new();
                let gray = hologram_to_gray(&pupil, &sol.hologram, &lut).unwrap();
                write_pgm(&gray, Some("round trip"), &mut pgm).unwrap();
                let back = hologram_from_gray(&pupil, &read_pgm(&pgm).unwrap(), &lut).unwrap();
                let ints = spot_intensities(&pupil, &back, &spots, &exec).unwrap();
                let q = report_from_intensities(&spots, ints).unwrap();
                de = de.max((q.efficiency - base.efficiency).abs());
                du = du.max((q.uniformity - base.uniformity).abs());
            }
        }
    }
    check(
        raw_err <= 1e-12 && de <= PGM_EFFICIENCY_BOUND && du <= PGM_UNIFORMITY_BOUND,
        format!(
            "raw rel err {raw_err:.2e} (<=1e-12); pgm |de| {de:.2e} (<={PGM_EFFICIENCY_BOUND:.1e}), |du| {du:.2e} (<={PGM_UNIFORMITY_BOUND:.1e})"
        ),
    )
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "oracle equivalence", oracle_equivalence),
        (2, "WGS quality", wgs_quality),
        (3, "RS quality floor", rs_floor),
        (4, "CS-WGS at c=1 equals WGS", cswgs_full_ratio),
        (5, "operation count", cost_model),
        (6, "budgeted superiority", budgeted_superiority),
        (7, "full-convergence parity", full_convergence_parity),
        (8, "determinism across workers", determinism),
        (9, "metric invariants", metric_invariants),
        (10, "file round-trips", file_round_trips),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for (id, name, run) in criteria {
        if !filter.is_empty()
            && !filter
                .iter()
                .any(|f| f == &id.to_string() || name.contains(f.as_str()))
        {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("criterion {id:>2} PASS  {name}: {d} [{secs:.1}s]"),
            Err(d) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name}: {d} [{secs:.1}s]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
