use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use wpusn_core::engine::{self, Scenario, SweepAxis};
use wpusn_core::placement::{self, EffcParams, EffcSolution};
use wpusn_core::rng::{stream, Purpose};
use wpusn_core::units::{dbm_to_watts, watts_to_dbm};
use wpusn_core::Point;

use crate::config::{parse_config, Config};
use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "wpusn",
    version,
    about = "CSI-free wireless energy transfer to buried sensors"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Monte Carlo run: worst-case energy, coverage, per-device averages.
    Simulate,
    /// Fading-averaged energy over a grid covering the area.
    Heatmap,
    /// One run per value of `sweep.axis` and scheme in `sweep.schemes`.
    Sweep,
    /// Beacon layout only.
    Place,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Heatmap => "heatmap",
            Command::Sweep => "sweep",
            Command::Place => "place",
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Scenario file (TOML). Omitted fields take the reference values.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Override a config field, e.g. `--set vwc=0.25` or `--set power.system=practical`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
    #[arg(long, global = true, value_name = "U64")]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
}

/// Resolved inputs of one invocation.
#[derive(Debug, Clone)]
pub struct RunManifest {
    pub command: Command,
    pub config_path: Option<PathBuf>,
    pub overrides: Vec<String>,
    pub output_dir: PathBuf,
    pub config: Config,
    pub scenario: Scenario,
}

impl RunManifest {
    pub fn resolve(cli: &Cli) -> CliResult<Self> {
        let mut overrides = cli.common.overrides.clone();
        if let Some(seed) = cli.common.seed {
            overrides.push(format!("seed={seed}"));
        }
        let (config, scenario) = parse_config(cli.common.config.as_deref(), &overrides)?;
        Ok(RunManifest {
            command: cli.command,
            config_path: cli.common.config.clone(),
            overrides,
            output_dir: cli.common.out.clone(),
            config,
            scenario,
        })
    }
}

/// Parses, runs and writes outputs. Returns the files written.
pub fn execute(cli: &Cli) -> CliResult<Vec<PathBuf>> {
    let manifest = RunManifest::resolve(cli)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.common.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be >= 1".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Config(format!("cannot start worker pool: {e}")))?;
    fs::create_dir_all(&manifest.output_dir)?;
    pool.install(|| match manifest.command {
        Command::Simulate => simulate(&manifest),
        Command::Heatmap => heatmap(&manifest),
        Command::Sweep => sweep(&manifest),
        Command::Place => place(&manifest),
    })
}

/// Entry point used by the binary: runs `cli` and turns failures into an
/// exit code plus `error.json` in the output directory.
pub fn main_with(cli: &Cli) -> i32 {
    match execute(cli) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            let record = e.record();
            if fs::create_dir_all(&cli.common.out).is_ok() {
                let _ = write_json(&cli.common.out.join("error.json"), &record);
            }
            e.exit_code()
        }
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<PathBuf> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(path.to_path_buf())
}

fn csv_writer(path: &Path) -> CliResult<csv::Writer<fs::File>> {
    Ok(csv::Writer::from_path(path)?)
}

fn num(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else {
        v.to_string()
    }
}

#[derive(Serialize)]
struct Header<'a> {
    command: &'static str,
    version: &'static str,
    seed: u64,
    config_hash: String,
    config: &'a Config,
    scenario: &'a Scenario,
}

fn header(m: &RunManifest) -> Header<'_> {
    Header {
        command: m.command.name(),
        version: env!("CARGO_PKG_VERSION"),
        seed: m.config.seed,
        config_hash: m.config.hash(),
        config: &m.config,
        scenario: &m.scenario,
    }
}

#[derive(Serialize)]
struct SimulateSummary {
    scheme: String,
    transmit_power_w: f64,
    worst_case_w: f64,
    worst_case_dbm: f64,
    mean_avg_power_w: f64,
    mean_avg_power_dbm: f64,
    coverage: f64,
    eh_threshold_dbm: f64,
    aggregate: engine::Aggregate,
    deployments: usize,
    fading_draws: usize,
    worst_per_replicate_w: Vec<f64>,
}

#[derive(Serialize)]
struct SimulateReport<'a> {
    #[serde(flatten)]
    header: Header<'a>,
    summary: SimulateSummary,
}

fn simulate(m: &RunManifest) -> CliResult<Vec<PathBuf>> {
    let report = engine::run(&m.scenario)?;
    let hash = m.config.hash();
    let seed = m.config.seed.to_string();
    let csv_path = m.output_dir.join("per_device.csv");
    let mut w = csv_writer(&csv_path)?;
    w.write_record([
        "seed",
        "config_hash",
        "replicate",
        "device",
        "x",
        "y",
        "avg_power_w",
        "avg_power_dbm",
        "covered",
    ])?;
    for (r, rep) in report.replicates.iter().enumerate() {
        for (i, (p, g)) in rep.devices.iter().zip(&rep.avg_power).enumerate() {
            w.write_record([
                seed.clone(),
                hash.clone(),
                r.to_string(),
                i.to_string(),
                num(p[0]),
                num(p[1]),
                num(*g),
                num(watts_to_dbm(*g)),
                (*g >= report.eh_threshold).to_string(),
            ])?;
        }
    }
    w.flush()?;

    let summary = SimulateSummary {
        scheme: report.scheme.name().to_string(),
        transmit_power_w: report.transmit_power,
        worst_case_w: report.worst_case_avg,
        worst_case_dbm: report.worst_case_dbm(),
        mean_avg_power_w: report.mean_avg_power,
        mean_avg_power_dbm: watts_to_dbm(report.mean_avg_power),
        coverage: report.coverage,
        eh_threshold_dbm: m.config.harvest.eh_threshold.0,
        aggregate: report.aggregate,
        deployments: m.scenario.trials.deployments,
        fading_draws: m.scenario.trials.fading_draws,
        worst_per_replicate_w: report.worst_per_replicate(),
    };
    let json = write_json(
        &m.output_dir.join("report.json"),
        &SimulateReport {
            header: header(m),
            summary,
        },
    )?;
    Ok(vec![json, csv_path])
}

#[derive(Serialize)]
struct Beacon {
    x: f64,
    y: f64,
    orientation: f64,
}

fn beacons(d: &placement::Deployment) -> Vec<Beacon> {
    d.positions
        .iter()
        .zip(&d.orientations)
        .map(|(p, o)| Beacon {
            x: p[0],
            y: p[1],
            orientation: *o,
        })
        .collect()
}

#[derive(Serialize)]
struct HeatmapReport<'a> {
    #[serde(flatten)]
    header: Header<'a>,
    resolution: usize,
    draws: usize,
    x: Vec<f64>,
    y: Vec<f64>,
    beacons: Vec<Beacon>,
    area_coverage: f64,
    eh_threshold_dbm: f64,
    peak_dbm: f64,
}

fn heatmap(m: &RunManifest) -> CliResult<Vec<PathBuf>> {
    let h = engine::heatmap(&m.scenario, m.config.heatmap.resolution)?;
    let hash = m.config.hash();
    let seed = m.config.seed.to_string();
    let csv_path = m.output_dir.join("heatmap.csv");
    let mut w = csv_writer(&csv_path)?;
    let mut head = vec![
        "seed".to_string(),
        "config_hash".into(),
        "row".into(),
        "y".into(),
    ];
    head.extend((0..h.resolution).map(|c| format!("col_{c}")));
    w.write_record(&head)?;
    for (row, values) in h.values_dbm.iter().enumerate() {
        let mut rec = vec![
            seed.clone(),
            hash.clone(),
            row.to_string(),
            num(h.axis[row]),
        ];
        rec.extend(values.iter().map(|v| num(*v)));
        w.write_record(&rec)?;
    }
    w.flush()?;
    let peak = h
        .values_dbm
        .iter()
        .flatten()
        .copied()
        .filter(|v| !v.is_nan())
        .fold(f64::NEG_INFINITY, f64::max);
    let json = write_json(
        &m.output_dir.join("heatmap.json"),
        &HeatmapReport {
            header: header(m),
            resolution: h.resolution,
            draws: h.draws,
            x: h.axis.clone(),
            y: h.axis.clone(),
            beacons: beacons(&h.beacons),
            area_coverage: h.area_coverage,
            eh_threshold_dbm: m.config.harvest.eh_threshold.0,
            peak_dbm: peak,
        },
    )?;
    Ok(vec![json, csv_path])
}

#[derive(Serialize)]
struct SweepRecord {
    value: f64,
    scheme: String,
    antennas_per_pb: usize,
    feasible: bool,
    transmit_power_w: Option<f64>,
    worst_case_w: Option<f64>,
    worst_case_dbm: Option<f64>,
    mean_avg_power_dbm: Option<f64>,
    coverage: Option<f64>,
    reason: Option<String>,
}

#[derive(Serialize)]
struct SweepReport<'a> {
    #[serde(flatten)]
    header: Header<'a>,
    axis: &'static str,
    values: &'a [f64],
    rows: Vec<SweepRecord>,
}

fn sweep(m: &RunManifest) -> CliResult<Vec<PathBuf>> {
    let cfg = &m.config.sweep;
    if cfg.values.is_empty() {
        return Err(CliError::Config("sweep.values is empty".into()));
    }
    let engine_values: Vec<f64> = match cfg.axis {
        SweepAxis::EhThreshold => cfg.values.iter().map(|v| dbm_to_watts(*v)).collect(),
        _ => cfg.values.clone(),
    };
    let rows = engine::sweep(&m.scenario, cfg.axis, &engine_values, &cfg.schemes)?;
    let per_value = cfg.schemes.len();
    let records: Vec<SweepRecord> = rows
        .iter()
        .enumerate()
        .map(|(k, r)| SweepRecord {
            value: cfg.values[k / per_value],
            scheme: r.scheme.name().to_string(),
            antennas_per_pb: r.antennas_per_pb,
            feasible: r.stats.is_some(),
            transmit_power_w: r.stats.map(|s| s.transmit_power),
            worst_case_w: r.stats.map(|s| s.worst_case_avg),
            worst_case_dbm: r.stats.map(|s| watts_to_dbm(s.worst_case_avg)),
            mean_avg_power_dbm: r.stats.map(|s| watts_to_dbm(s.mean_avg_power)),
            coverage: r.stats.map(|s| s.coverage),
            reason: r.infeasible.clone(),
        })
        .collect();

    let hash = m.config.hash();
    let seed = m.config.seed.to_string();
    let csv_path = m.output_dir.join("sweep.csv");
    let mut w = csv_writer(&csv_path)?;
    w.write_record([
        "seed",
        "config_hash",
        "axis",
        "value",
        "scheme",
        "antennas_per_pb",
        "status",
        "transmit_power_w",
        "worst_case_w",
        "worst_case_dbm",
        "mean_avg_power_dbm",
        "coverage",
        "reason",
    ])?;
    let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
    for r in &records {
        w.write_record([
            seed.clone(),
            hash.clone(),
            cfg.axis.name().to_string(),
            num(r.value),
            r.scheme.clone(),
            r.antennas_per_pb.to_string(),
            if r.feasible {
                "ok".into()
            } else {
                "infeasible".into()
            },
            opt(r.transmit_power_w),
            opt(r.worst_case_w),
            opt(r.worst_case_dbm),
            opt(r.mean_avg_power_dbm),
            opt(r.coverage),
            r.reason.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    let json = write_json(
        &m.output_dir.join("sweep.json"),
        &SweepReport {
            header: header(m),
            axis: cfg.axis.name(),
            values: &cfg.values,
            rows: records,
        },
    )?;
    Ok(vec![json, csv_path])
}

#[derive(Serialize)]
struct PlaceReport<'a> {
    #[serde(flatten)]
    header: Header<'a>,
    method: wpusn_core::engine::PlacementMethod,
    beacons: Vec<Beacon>,
    devices: Vec<Point>,
    effc: Option<EffcSolution>,
    kmeans_objective: Option<f64>,
}

fn place(m: &RunManifest) -> CliResult<Vec<PathBuf>> {
    let s = &m.scenario;
    let devices = engine::deploy_devices(
        s.radius,
        s.device_count,
        &mut stream(s.seed, Purpose::Deployment, &[0]),
    );
    let deployment = s.place_beacons(&devices, 0)?;
    let method = s.placement.method;
    let effc = match method {
        engine::PlacementMethod::Effc if s.pb_count > 1 => {
            let mut params = EffcParams::new(s.pb_count, s.rf.path_loss_exponent, s.radius);
            if let Some(step) = s.placement.effc_step {
                params.step = step;
            }
            Some(placement::effc_solve(&params)?)
        }
        _ => None,
    };
    let kmeans_objective = match method {
        engine::PlacementMethod::Kmeans => Some(
            devices
                .iter()
                .map(|d| {
                    deployment
                        .positions
                        .iter()
                        .map(|p| (d[0] - p[0]).powi(2) + (d[1] - p[1]).powi(2))
                        .fold(f64::INFINITY, f64::min)
                })
                .sum(),
        ),
        _ => None,
    };

    let hash = m.config.hash();
    let seed = m.config.seed.to_string();
    let csv_path = m.output_dir.join("placement.csv");
    let mut w = csv_writer(&csv_path)?;
    w.write_record(["seed", "config_hash", "pb", "x", "y", "orientation"])?;
    for (i, b) in beacons(&deployment).iter().enumerate() {
        w.write_record([
            seed.clone(),
            hash.clone(),
            i.to_string(),
            num(b.x),
            num(b.y),
            num(b.orientation),
        ])?;
    }
    w.flush()?;
    let json = write_json(
        &m.output_dir.join("placement.json"),
        &PlaceReport {
            header: header(m),
            method,
            beacons: beacons(&deployment),
            devices,
            effc,
            kmeans_objective,
        },
    )?;
    Ok(vec![json, csv_path])
}
