//! Budgeted comparison harness: compression sweeps over scenarios,
//! algorithms and seeds, with per-cell statistics and CSV output.
//!
//! Run `k` of a cell uses solver seed `seeds[k]` and scenario orientation
//! [`Scenario::benchmark_frame`]`(k)`.

use std::collections::HashMap;
use std::io::Write;
use std::time::Instant;

use crate::error::{invalid, Result};
use crate::io::format_sig;
use crate::kernels::Executor;
use crate::metrics::evaluate;
use crate::optics::{Pupil, PupilConfig, SpotSet};
use crate::scenarios::Scenario;
use crate::solvers::{solve, wgs, Algorithm, Budget, CostModel, SolverConfig};

pub const CSV_HEADER: &str =
    "scenario,algorithm,c,iterations,ops,wall_ms,efficiency,uniformity,seed,flags";
pub const SUMMARY_HEADER: &str = "scenario,algorithm,c,iterations,runs,mean_efficiency,std_efficiency,mean_uniformity,std_uniformity";
/// Frame-time limit used to derive wall-clock budgets.
pub const DEFAULT_FRAME_MS: f64 = 64.0;
/// Iterations of the unconstrained WGS reference.
pub const DEFAULT_FULL_ITERATIONS: usize = 30;

/// Compression ratios `2^-1 .. 2^-8`.
pub fn default_c_values() -> Vec<f64> {
    (1..=8).map(|k| 0.5f64.powi(k)).collect()
}

/// Per-scenario operation budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BudgetSpec {
    /// Absolute pixel-spot operations.
    Ops(u64),
    /// A multiple of one full WGS iteration (`M * N`) for each scenario.
    FullIterations(f64),
}

impl BudgetSpec {
    pub fn resolve(&self, cost: &CostModel) -> Budget {
        match *self {
            BudgetSpec::Ops(n) => Budget::Ops(n),
            BudgetSpec::FullIterations(k) => {
                Budget::Ops((k * cost.full_iteration() as f64).floor() as u64)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub pupil: PupilConfig,
    pub scenarios: Vec<Scenario>,
    pub algorithms: Vec<Algorithm>,
    pub c_values: Vec<f64>,
    pub budget: BudgetSpec,
    pub seeds: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub scenario: String,
    pub algorithm: Algorithm,
    pub c: f64,
    pub iterations: usize,
    pub ops: u64,
    pub wall_ms: f64,
    pub efficiency: f64,
    pub uniformity: f64,
    pub seed: u64,
    pub flags: Vec<String>,
    pub failed: bool,
}

impl BenchRecord {
    fn failure(scenario: &str, algorithm: Algorithm, c: f64, seed: u64, message: &str) -> Self {
        let message: String = message
            .chars()
            .map(|ch| {
                if ch == ',' || ch == '\n' || ch == '|' {
                    ' '
                } else {
                    ch
                }
            })
            .collect();
        Self {
            scenario: scenario.to_string(),
            algorithm,
            c,
            iterations: 0,
            ops: 0,
            wall_ms: 0.0,
            efficiency: f64::NAN,
            uniformity: f64::NAN,
            seed,
            flags: vec![format!("failed: {message}")],
            failed: true,
        }
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.scenario,
            self.algorithm,
            format_sig(self.c, 9),
            self.iterations,
            self.ops,
            format_sig(self.wall_ms, 9),
            format_sig(self.efficiency, 9),
            format_sig(self.uniformity, 9),
            self.seed,
            self.flags.join("|")
        )
    }
}

/// Solves and scores one run.
pub fn run_one(
    pupil: &Pupil,
    scenario_name: &str,
    spots: &SpotSet,
    config: &SolverConfig,
    exec: &Executor,
) -> BenchRecord {
    let start = Instant::now();
    let outcome = solve(pupil, spots, config, exec).and_then(|sol| {
        let wall_ms = start.elapsed().as_secs_f64() * 1e3;
        let report = evaluate(pupil, &sol.hologram, spots, exec)?;
        Ok((sol, report, wall_ms))
    });
    match outcome {
        Ok((sol, report, wall_ms)) => BenchRecord {
            scenario: scenario_name.to_string(),
            algorithm: config.algorithm,
            c: config.compression,
            iterations: sol.trace.iterations(),
            ops: sol.trace.ops,
            wall_ms,
            efficiency: report.efficiency,
            uniformity: report.uniformity,
            seed: config.seed,
            flags: sol
                .trace
                .flags
                .labels()
                .into_iter()
                .map(String::from)
                .collect(),
            failed: false,
        },
        Err(e) => BenchRecord::failure(
            scenario_name,
            config.algorithm,
            config.compression,
            config.seed,
            &e.to_string(),
        ),
    }
}

fn check_axes(config: &SweepConfig) -> Result<()> {
    if config.scenarios.is_empty() {
        return Err(invalid("sweep needs at least one scenario"));
    }
    if config.algorithms.is_empty() {
        return Err(invalid("sweep needs at least one algorithm"));
    }
    if config.c_values.is_empty() {
        return Err(invalid("sweep needs at least one compression ratio"));
    }
    if config.seeds.is_empty() {
        return Err(invalid("sweep needs at least one seed"));
    }
    if config.c_values.iter().any(|&c| !(c > 0.0 && c <= 1.0)) {
        return Err(invalid("compression ratios must lie in (0, 1]"));
    }
    match config.budget {
        BudgetSpec::Ops(0) => Err(invalid("budget must be positive")),
        BudgetSpec::FullIterations(k) if !(k > 0.0) => Err(invalid("budget must be positive")),
        _ => Ok(()),
    }
}

/// Runs every (scenario, algorithm, c, seed) combination, in that nesting
/// order. RS and WGS ignore `c`; their runs are computed once per seed and
/// repeated across the compression axis.
pub fn sweep(config: &SweepConfig, exec: &Executor) -> Result<Vec<BenchRecord>> {
    check_axes(config)?;
    let pupil = config.pupil.build()?;
    let mut records = Vec::new();
    for scenario in &config.scenarios {
        let frames: Vec<Result<SpotSet>> = (0..config.seeds.len())
            .map(|k| scenario.benchmark_frame(k))
            .collect();
        for &algorithm in &config.algorithms {
            let mut cache: HashMap<usize, BenchRecord> = HashMap::new();
            for &c in &config.c_values {
                for (k, &seed) in config.seeds.iter().enumerate() {
                    let spots = match &frames[k] {
                        Ok(s) => s,
                        Err(e) => {
                            records.push(BenchRecord::failure(
                                &scenario.name,
                                algorithm,
                                c,
                                seed,
                                &e.to_string(),
                            ));
                            continue;
                        }
                    };
                    if algorithm != Algorithm::CsWgs {
                        if let Some(hit) = cache.get(&k) {
                            records.push(BenchRecord { c, ..hit.clone() });
                            continue;
                        }
                    }
                    let budget = config.budget.resolve(&CostModel::new(&pupil, spots));
                    let solver = SolverConfig {
                        algorithm,
                        iterations: 1,
                        compression: if algorithm == Algorithm::CsWgs {
                            c
                        } else {
                            1.0
                        },
                        seed,
                        budget: Some(budget),
                    };
                    let mut record = run_one(&pupil, &scenario.name, spots, &solver, exec);
                    record.c = c;
                    if algorithm != Algorithm::CsWgs {
                        cache.insert(k, record.clone());
                    }
                    records.push(record);
                }
            }
        }
    }
    Ok(records)
}

pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Statistics of one (scenario, algorithm, c) cell over its seeds.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub scenario: String,
    pub algorithm: Algorithm,
    pub c: f64,
    pub iterations: usize,
    pub runs: usize,
    pub failures: usize,
    pub mean_efficiency: f64,
    pub std_efficiency: f64,
    pub mean_uniformity: f64,
    pub std_uniformity: f64,
}

impl CellSummary {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.scenario,
            self.algorithm,
            format_sig(self.c, 9),
            self.iterations,
            self.runs,
            format_sig(self.mean_efficiency, 9),
            format_sig(self.std_efficiency, 9),
            format_sig(self.mean_uniformity, 9),
            format_sig(self.std_uniformity, 9)
        )
    }
}

/// Groups records into cells in first-appearance order. Means and sample
/// standard deviations exclude failed runs.
pub fn summarize(records: &[BenchRecord]) -> Vec<CellSummary> {
    let mut order: Vec<(String, Algorithm, u64)> = Vec::new();
    let mut groups: HashMap<(String, Algorithm, u64), Vec<&BenchRecord>> = HashMap::new();
    for r in records {
        let key = (r.scenario.clone(), r.algorithm, r.c.to_bits());
        if !groups.contains_key(&key) {
            order.push(key.clone());
        }
        groups.entry(key).or_default().push(r);
    }
    order
        .into_iter()
        .map(|key| {
            let rows = &groups[&key];
            let ok: Vec<&&BenchRecord> = rows.iter().filter(|r| !r.failed).collect();
            let e: Vec<f64> = ok.iter().map(|r| r.efficiency).collect();
            let u: Vec<f64> = ok.iter().map(|r| r.uniformity).collect();
            let (mean_efficiency, std_efficiency) = mean_std(&e);
            let (mean_uniformity, std_uniformity) = mean_std(&u);
            CellSummary {
                scenario: key.0,
                algorithm: key.1,
                c: f64::from_bits(key.2),
                iterations: ok.iter().map(|r| r.iterations).max().unwrap_or(0),
                runs: rows.len(),
                failures: rows.len() - ok.len(),
                mean_efficiency,
                std_efficiency,
                mean_uniformity,
                std_uniformity,
            }
        })
        .collect()
}

pub fn write_csv(records: &[BenchRecord], mut out: impl Write) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(out, "{}", r.csv_row())?;
    }
    Ok(())
}

pub fn write_summary_csv(cells: &[CellSummary], mut out: impl Write) -> Result<()> {
    writeln!(out, "{SUMMARY_HEADER}")?;
    for c in cells {
        writeln!(out, "{}", c.csv_row())?;
    }
    Ok(())
}

/// One line of a budgeted comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct CompareRow {
    pub label: String,
    pub cell: CellSummary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub scenario: String,
    pub budget_ops: u64,
    /// RS, budgeted WGS, best-c CS-WGS, unconstrained WGS reference.
    pub rows: Vec<CompareRow>,
    /// Every CS-WGS compression cell, for the full sweep picture.
    pub cswgs_cells: Vec<CellSummary>,
    pub records: Vec<BenchRecord>,
}

impl Comparison {
    pub fn row(&self, label: &str) -> Option<&CellSummary> {
        self.rows.iter().find(|r| r.label == label).map(|r| &r.cell)
    }
}

/// RS, budgeted WGS and the best-uniformity CS-WGS over `c_values`,
/// side by side with a `full_iterations` WGS reference (skipped when 0).
pub fn compare_at_budget(
    pupil: &PupilConfig,
    scenario: &Scenario,
    budget: BudgetSpec,
    seeds: &[u64],
    c_values: &[f64],
    full_iterations: usize,
    exec: &Executor,
) -> Result<Comparison> {
    let config = SweepConfig {
        pupil: *pupil,
        scenarios: vec![scenario.clone()],
        algorithms: Algorithm::ALL.to_vec(),
        c_values: c_values.to_vec(),
        budget,
        seeds: seeds.to_vec(),
    };
    let mut records = sweep(&config, exec)?;
    let cells = summarize(&records);
    let first = |alg: Algorithm| cells.iter().find(|c| c.algorithm == alg).cloned();
    let cswgs_cells: Vec<CellSummary> = cells
        .iter()
        .filter(|c| c.algorithm == Algorithm::CsWgs)
        .cloned()
        .collect();
    let best = cswgs_cells
        .iter()
        .filter(|c| c.mean_uniformity.is_finite())
        .fold(None::<&CellSummary>, |best, c| match best {
            Some(b) if b.mean_uniformity >= c.mean_uniformity => Some(b),
            _ => Some(c),
        })
        .cloned();

    let built = config.pupil.build()?;
    let mut full_records = Vec::new();
    for (k, &seed) in seeds.iter().enumerate().filter(|_| full_iterations > 0) {
        let spots = scenario.benchmark_frame(k)?;
        let cfg = SolverConfig::wgs(full_iterations, seed);
        let mut r = run_one(&built, &scenario.name, &spots, &cfg, exec);
        r.flags.push("reference".into());
        full_records.push(r);
    }
    let full = summarize(&full_records)
        .pop()
        .map(|c| CellSummary { c: 1.0, ..c });

    let mut rows = Vec::new();
    if let Some(c) = first(Algorithm::Rs) {
        rows.push(CompareRow {
            label: "rs".into(),
            cell: CellSummary { c: 1.0, ..c },
        });
    }
    if let Some(c) = first(Algorithm::Wgs) {
        rows.push(CompareRow {
            label: "wgs".into(),
            cell: CellSummary { c: 1.0, ..c },
        });
    }
    if let Some(c) = best {
        rows.push(CompareRow {
            label: "cswgs".into(),
            cell: c,
        });
    }
    if let Some(c) = full {
        rows.push(CompareRow {
            label: "wgs-full".into(),
            cell: c,
        });
    }
    records.extend(full_records);

    let probe = scenario.benchmark_frame(0)?;
    let budget_ops = budget.resolve(&CostModel::new(&built, &probe)).ops();
    Ok(Comparison {
        scenario: scenario.name.clone(),
        budget_ops,
        rows,
        cswgs_cells,
        records,
    })
}

/// Measured pixel-spot operations per millisecond for full WGS iterations.
pub fn calibrate(
    pupil: &Pupil,
    spots: &SpotSet,
    iterations: usize,
    exec: &Executor,
) -> Result<f64> {
    let iterations = iterations.max(1);
    let start = Instant::now();
    let sol = wgs(pupil, spots, iterations, 0, exec)?;
    let ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(sol.trace.ops as f64 / ms.max(1e-6))
}
