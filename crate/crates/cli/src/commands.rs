use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use hs2_core::christoffel::metric_id;
use hs2_core::curvature::{sectional_curvature, CurvatureReport};
use hs2_core::dynamics::{
    geodesic_energy, hs_blowup_time, hs_normalization, jacobi_step, locate_chart_exit, ChartExit, CoupledRun, GeodesicState,
    JacobiState, CHART_EXIT_SLOPE,
};
use hs2_core::random::{random_tangent, seeded_rng};
use hs2_core::verification::{blowup_profiles, run_criterion, Level, VerifyOptions, CRITERIA, KMAX};
use hs2_core::{EquationKind, MetricConvention, TangentPair};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::expr;

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

struct Csv {
    out: BufWriter<File>,
}

impl Csv {
    fn create(path: &Path, header: &[&str]) -> Result<Self, CliError> {
        let file = File::create(path)
            .map_err(|e| CliError::Config(format!("cannot create {}: {e}", path.display())))?;
        let mut csv = Self { out: BufWriter::new(file) };
        csv.row(header.iter().map(|s| s.to_string()))?;
        Ok(csv)
    }

    fn row(&mut self, cells: impl IntoIterator<Item = String>) -> Result<(), CliError> {
        let line = cells.into_iter().collect::<Vec<_>>().join(",");
        writeln!(self.out, "{line}")?;
        Ok(())
    }

    fn finish(mut self) -> Result<(), CliError> {
        self.out.flush()?;
        Ok(())
    }
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
struct SimulationRow {
    t: f64,
    energy: f64,
    min_slope: f64,
    sup_u: f64,
    sup_rho: f64,
    lag_euler_gap: f64,
}

impl SimulationRow {
    fn measure(run: &CoupledRun, conv: MetricConvention) -> Result<Self, CliError> {
        let g = &run.lagrangian;
        Ok(Self {
            t: g.t,
            energy: geodesic_energy(g, conv),
            min_slope: g.base.phi.min_slope(),
            sup_u: run.eulerian.u.sup_norm(),
            sup_rho: run.eulerian.rho.sup_norm(),
            lag_euler_gap: run.gap()?,
        })
    }

    fn cells(&self) -> [String; 6] {
        [self.t, self.energy, self.min_slope, self.sup_u, self.sup_rho, self.lag_euler_gap].map(num)
    }
}

#[derive(Debug, Serialize)]
struct BlowupRecord {
    detected: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    time: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    threshold_time: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    location: Option<f64>,
}

#[derive(Debug, Serialize)]
struct SimulationSummary<'a> {
    command: &'static str,
    config: &'a RunConfig,
    steps: usize,
    completed: bool,
    #[serde(rename = "final")]
    last: Option<SimulationRow>,
    blowup: BlowupRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

enum Stop {
    Done,
    Exit(ChartExit),
}

/// Advances the coupled Lagrangian/Eulerian run to `t_end`, stopping early
/// when the Lagrangian slope leaves the chart.
fn integrate(
    config: &RunConfig,
    run: &mut CoupledRun,
    csv: &mut Csv,
    last: &mut Option<SimulationRow>,
    steps: &mut usize,
) -> Result<Stop, CliError> {
    let conv = config.convention();
    loop {
        let remaining = config.t_end - run.lagrangian.t;
        if remaining <= 1e-12 * config.t_end.max(1.0) {
            return Ok(Stop::Done);
        }
        let dt = config.dt.min(remaining);
        let before = run.lagrangian.clone();
        match run.step(dt) {
            Ok(()) => {}
            Err(hs2_core::Error::OrientationLost { .. }) => {
                return Ok(Stop::Exit(locate_chart_exit(before, config.dt, config.t_end)?));
            }
            Err(e) => return Err(e.into()),
        }
        *steps += 1;
        let row = SimulationRow::measure(run, conv)?;
        csv.row(row.cells())?;
        *last = Some(row);
        if run.lagrangian.base.phi.min_slope() < CHART_EXIT_SLOPE {
            let exit = locate_chart_exit(run.lagrangian.clone(), config.dt, f64::INFINITY)?;
            return Ok(Stop::Exit(exit));
        }
    }
}

pub fn simulate(config: &RunConfig) -> Result<(), CliError> {
    let u0 = config.initial_velocity()?;
    let mut run = CoupledRun::new(config.kind(), u0, config.dealias).map_err(|e| CliError::Config(e.to_string()))?;
    let mut csv = Csv::create(&config.csv_path(), &["t", "energy", "min_slope", "sup_u", "sup_rho", "lag_euler_gap"])?;
    let first = SimulationRow::measure(&run, config.convention())?;
    csv.row(first.cells())?;
    let mut last = Some(first);
    let mut steps = 0;
    let outcome = integrate(config, &mut run, &mut csv, &mut last, &mut steps);
    csv.finish()?;
    let mut summary = SimulationSummary {
        command: "simulate",
        config,
        steps,
        completed: false,
        last,
        blowup: BlowupRecord { detected: false, time: None, threshold_time: None, location: None },
        error: None,
    };
    let result = match outcome {
        Ok(Stop::Done) => {
            summary.completed = true;
            Ok(())
        }
        Ok(Stop::Exit(exit)) => {
            summary.completed = true;
            summary.blowup = BlowupRecord {
                detected: true,
                time: Some(exit.t_exit),
                threshold_time: Some(exit.t_threshold),
                location: Some(exit.x_exit),
            };
            Ok(())
        }
        Err(e) => {
            summary.error = Some(e.to_string());
            Err(e)
        }
    };
    write_json(&config.json_path(), &summary)?;
    if let Some(row) = &summary.last {
        println!(
            "t={} energy={} min_slope={} gap={}",
            num(row.t),
            num(row.energy),
            num(row.min_slope),
            num(row.lag_euler_gap)
        );
    }
    if let Some(t) = summary.blowup.time {
        println!("blow-up at t={}", num(t));
    }
    result
}

#[derive(Debug, Serialize)]
struct PairSummary<'a> {
    command: &'static str,
    config: &'a RunConfig,
    report: CurvatureReport,
}

pub fn curvature_pair(config: &RunConfig) -> Result<(), CliError> {
    let u = config.tangent(&config.direction_u.first, &config.direction_u.second)?;
    let v = config.tangent(&config.direction_v.first, &config.direction_v.second)?;
    let report = sectional_curvature(config.kind(), config.convention(), &u, &v)?;
    let mut brief = serde_json::json!({ "unnormalized": report.unnormalized, "gram_det": report.gram_det });
    if let Some(s) = report.normalized {
        brief["normalized"] = s.into();
    }
    write_json(&config.json_path(), &PairSummary { command: "curvature-pair", config, report })?;
    println!("{brief}");
    Ok(())
}

#[derive(Debug, Serialize)]
struct ScanSummary<'a> {
    command: &'static str,
    config: &'a RunConfig,
    pairs: usize,
    degenerate: usize,
    min_normalized: Option<f64>,
    max_normalized: Option<f64>,
}

/// The `i`th random pair of a scan; each pair has its own generator so the
/// result does not depend on scheduling.
fn scan_pair(kind: EquationKind, n: usize, seed: u64, i: usize) -> hs2_core::Result<(TangentPair, TangentPair)> {
    let mut rng = seeded_rng(seed.wrapping_add(i as u64));
    Ok((random_tangent(&mut rng, kind, n, KMAX)?, random_tangent(&mut rng, kind, n, KMAX)?))
}

pub fn curvature_scan(config: &RunConfig) -> Result<(), CliError> {
    let (kind, conv) = (config.kind(), config.convention());
    let reports: Vec<CurvatureReport> = (0..config.pairs)
        .into_par_iter()
        .map(|i| {
            let (u, v) = scan_pair(kind, config.n, config.seed, i)?;
            sectional_curvature(kind, conv, &u, &v)
        })
        .collect::<hs2_core::Result<_>>()?;
    let mut csv = Csv::create(&config.csv_path(), &["pair_id", "unnormalized", "normalized", "gram_det"])?;
    for (i, r) in reports.iter().enumerate() {
        csv.row([i.to_string(), num(r.unnormalized), r.normalized.map(num).unwrap_or_default(), num(r.gram_det)])?;
    }
    csv.finish()?;
    let normalized: Vec<f64> = reports.iter().filter_map(|r| r.normalized).collect();
    let summary = ScanSummary {
        command: "curvature-scan",
        config,
        pairs: reports.len(),
        degenerate: reports.len() - normalized.len(),
        min_normalized: normalized.iter().copied().reduce(f64::min),
        max_normalized: normalized.iter().copied().reduce(f64::max),
    };
    write_json(&config.json_path(), &summary)?;
    println!(
        "{} pairs, normalized curvature in [{}, {}]",
        summary.pairs,
        summary.min_normalized.map(num).unwrap_or_default(),
        summary.max_normalized.map(num).unwrap_or_default()
    );
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
struct BlowupRow {
    profile: String,
    t_star: f64,
    t_exit: f64,
    t_threshold: f64,
    abs_error: f64,
}

#[derive(Debug, Serialize)]
struct SweepSummary<'a> {
    command: &'static str,
    config: &'a RunConfig,
    extra_profiles: &'a [String],
    rows: Vec<BlowupRow>,
}

/// HS chart-exit times of the built-in profiles and of `extra`, against the
/// closed-form `T*`. Every profile is scaled to `¼∫u₀ₓ² = 1`.
pub fn blowup(config: &RunConfig, extra: &[String]) -> Result<(), CliError> {
    let n = config.n;
    let mut profiles: Vec<(String, hs2_core::PeriodicField)> =
        blowup_profiles(n)?.into_iter().map(|(name, u)| (name.to_string(), u)).collect();
    for src in extra {
        let u = expr::field(src, n).map_err(CliError::Config)?;
        if u.value_at_zero().abs() > 1e-12 * (1.0 + u.sup_norm()) {
            return Err(CliError::Config(format!("profile '{src}' must vanish at x = 0")));
        }
        let norm = hs_normalization(&u);
        if norm <= 0.0 {
            return Err(CliError::Config(format!("profile '{src}' is constant")));
        }
        profiles.push((src.clone(), u.scale(1.0 / norm.sqrt())));
    }
    let rows: Vec<BlowupRow> = profiles
        .par_iter()
        .map(|(name, u)| -> Result<BlowupRow, CliError> {
            let t_star = hs_blowup_time(u)?;
            let g = GeodesicState::from_identity(EquationKind::Hs, TangentPair::first_only(u.clone()))?;
            let exit = locate_chart_exit(g, config.dt, 2.0 * t_star + 1.0)?;
            Ok(BlowupRow {
                profile: name.clone(),
                t_star,
                t_exit: exit.t_exit,
                t_threshold: exit.t_threshold,
                abs_error: (exit.t_exit - t_star).abs(),
            })
        })
        .collect::<Result<_, _>>()?;
    let mut csv = Csv::create(&config.csv_path(), &["profile", "t_star", "t_exit", "t_threshold", "abs_error"])?;
    for r in &rows {
        csv.row([format!("\"{}\"", r.profile), num(r.t_star), num(r.t_exit), num(r.t_threshold), num(r.abs_error)])?;
        println!("{:<40} T*={} exit={} |err|={:.3e}", r.profile, num(r.t_star), num(r.t_exit), r.abs_error);
    }
    csv.finish()?;
    write_json(&config.json_path(), &SweepSummary { command: "blowup", config, extra_profiles: extra, rows })
}

#[derive(Debug, Serialize)]
struct JacobiSummary<'a> {
    command: &'static str,
    config: &'a RunConfig,
    steps: usize,
    final_t: f64,
    final_norm: f64,
    max_norm: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

/// Jacobi field with `ξ(0) = 0` and initial covariant derivative `direction_u`
/// along the geodesic with initial velocity `(initial_u, initial_rho)`.
pub fn jacobi(config: &RunConfig) -> Result<(), CliError> {
    let conv = config.convention();
    let kind = config.kind();
    let u0 = config.initial_velocity()?;
    let dxi0 = config.tangent(&config.direction_u.first, &config.direction_u.second)?;
    let g = GeodesicState::from_identity(kind, u0).map_err(|e| CliError::Config(e.to_string()))?;
    let mut j = JacobiState::new(g, TangentPair::zeros(config.n)?, dxi0).map_err(|e| CliError::Config(e.to_string()))?;
    let mut csv = Csv::create(&config.csv_path(), &["t", "xi_norm", "speed"])?;
    let speed = |j: &JacobiState| {
        j.geodesic.eulerian_velocity().map_or(f64::NAN, |u| metric_id(kind, conv, &u, &u).sqrt())
    };
    csv.row([num(0.0), num(j.norm(conv)), num(speed(&j))])?;
    let (mut steps, mut max_norm) = (0, 0.0f64);
    let mut error = None;
    while config.t_end - j.geodesic.t > 1e-12 * config.t_end.max(1.0) {
        let dt = config.dt.min(config.t_end - j.geodesic.t);
        match jacobi_step(&j, dt) {
            Ok(next) => j = next,
            Err(e) => {
                error = Some(CliError::from(e));
                break;
            }
        }
        steps += 1;
        let norm = j.norm(conv);
        max_norm = max_norm.max(norm);
        csv.row([num(j.geodesic.t), num(norm), num(speed(&j))])?;
    }
    csv.finish()?;
    let summary = JacobiSummary {
        command: "jacobi",
        config,
        steps,
        final_t: j.geodesic.t,
        final_norm: j.norm(conv),
        max_norm,
        error: error.as_ref().map(|e| e.to_string()),
    };
    write_json(&config.json_path(), &summary)?;
    println!("t={} |xi|={} max|xi|={}", num(summary.final_t), num(summary.final_norm), num(max_norm));
    error.map_or(Ok(()), Err)
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    level: Level,
    h1_scale: f64,
    seed: u64,
    all_passed: bool,
    criteria: Vec<hs2_core::verification::CriterionOutcome>,
}

pub fn verify(level: Level, h1_scale: f64, seed: u64, json: Option<&Path>) -> Result<(), CliError> {
    let conv = MetricConvention::new(h1_scale).map_err(|e| CliError::Config(e.to_string()))?;
    let opts = VerifyOptions { level, conv, seed };
    let ids: Vec<u8> = CRITERIA.collect();
    let criteria: Vec<_> = ids.par_iter().map(|&id| run_criterion(id, &opts)).collect();
    for c in &criteria {
        eprintln!("{c}");
    }
    let failed: Vec<String> =
        criteria.iter().filter(|c| !c.passed).map(|c| format!("{} ({})", c.id, c.name)).collect();
    let report = VerifyReport { level, h1_scale, seed, all_passed: failed.is_empty(), criteria };
    let text = serde_json::to_string_pretty(&report)?;
    match json {
        Some(path) => std::fs::write(path, text + "\n")?,
        None => println!("{text}"),
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(format!("failing criteria: {}", failed.join(", "))))
    }
}
