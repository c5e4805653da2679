//! `greencore` — energy-efficiency modeling and design-space exploration
//! for many-soft-core systems.
//!
//! Exit codes: 0 success, 1 validation-check failures, 2 invalid input.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use greencore::calibration::{
    power_of, power_of_extrapolated, Dataset, PowerMode, TableId,
};
use greencore::dse::{sweep, FrequencyModel, SweepSpace};
use greencore::energy;
use greencore::error::{Error, Result};
use greencore::report::{
    anchored_scale, build_design_comparison, build_sim_table, build_sweep_table,
    build_validation_table, emit_table, fmt_sig6, measured_anchor, OutputFormat, Table, TableKind,
};
use greencore::sim::{DesignPoint, SystemConfig};
use greencore::workload::{
    driver_upper_bound, is_prime, profile, PrimalityMode, WorkloadProfile,
};
use greencore::{MeasuredRun, ProcessorSpec};

#[derive(Parser)]
#[command(name = "greencore", version, about = "Energy-efficiency modeling for many-soft-core systems")]
struct Cli {
    /// Replace the embedded reference dataset with a file in the same format
    #[arg(long, global = true, value_name = "PATH")]
    dataset: Option<PathBuf>,

    /// Output format: csv or md
    #[arg(long, global = true, default_value = "csv")]
    format: String,

    /// Write output to a file instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the greenness equations over processor specs
    Model(ModelArgs),
    /// Instrument the prime-counting benchmark
    Workload(WorkloadArgs),
    /// Cycle-approximate simulation of one design point
    Simulate(SimulateArgs),
    /// Fit the workload time scale to a measured anchor and report residuals
    Calibrate(CalibrateArgs),
    /// Evaluate a configuration sweep with feasibility and Pareto flags
    Sweep(SweepArgs),
    /// Run the dataset consistency checks
    Validate,
    /// Emit reference tables, figure data, and model comparisons
    Report(ReportArgs),
}

#[derive(Args)]
struct ModelArgs {
    /// Processor spec file (defaults to the embedded processors)
    #[arg(long, value_name = "PATH")]
    specs: Option<PathBuf>,
    /// Processor all relative values are normalized to
    #[arg(long, default_value = "Cortex-A8")]
    reference: String,
}

#[derive(Args)]
struct WorkloadArgs {
    /// Upper bound (exclusive) of the candidate range
    #[arg(long, default_value_t = 1_000_000)]
    n: u64,
    /// Primality semantics: paper or corrected
    #[arg(long, default_value = "paper")]
    mode: String,
    /// Walk only the candidates the published driver loop visits
    #[arg(long)]
    faithful_driver: bool,
    /// Profile cache file: loaded when present and matching, written otherwise
    #[arg(long, value_name = "PATH")]
    cache: Option<PathBuf>,
    /// Override the calibrated operations-per-iteration constant
    #[arg(long)]
    ops_per_iteration: Option<f64>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Design point: baseline, custom-instruction, multi-unit, pipelined, multi-core
    #[arg(long, default_value = "pipelined")]
    design: String,
    #[arg(long, default_value_t = 1_000_000)]
    n: u64,
    #[arg(long)]
    cores: Option<u32>,
    /// Divider units K
    #[arg(long)]
    units: Option<u64>,
    /// Divider pipeline latency L, cycles
    #[arg(long)]
    latency: Option<u64>,
    /// Clock frequency, Hz
    #[arg(long, default_value_t = 60e6)]
    fclk: f64,
    #[arg(long, default_value = "paper")]
    mode: String,
    #[arg(long)]
    faithful_driver: bool,
    /// Workload source: accounted (reference operation totals) or instrumented
    #[arg(long, default_value = "accounted")]
    workload: String,
    /// Explicit workload scale; default anchors the pipelined design to its
    /// measured time
    #[arg(long)]
    scale: Option<f64>,
    /// Power model: lookup or linear-fit
    #[arg(long, default_value = "lookup")]
    power: String,
    #[arg(long, value_name = "PATH")]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct CalibrateArgs {
    /// Design point the scale is anchored to
    #[arg(long, default_value = "pipelined")]
    anchor_design: String,
    /// Anchor time in seconds (defaults to the measured time of the anchor)
    #[arg(long)]
    anchor_seconds: Option<f64>,
    #[arg(long, default_value_t = 60e6)]
    fclk: f64,
}

#[derive(Args)]
struct SweepArgs {
    /// Sweep space file; flags below override its axes
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Comma-separated core counts
    #[arg(long)]
    cores: Option<String>,
    /// Comma-separated divider unit counts
    #[arg(long)]
    units: Option<String>,
    /// Comma-separated divider latencies
    #[arg(long)]
    latencies: Option<String>,
    #[arg(long, default_value_t = 60e6)]
    fclk: f64,
    /// Power model for swept points: linear-fit or lookup
    #[arg(long, default_value = "linear-fit")]
    power: String,
}

#[derive(Args)]
struct ReportArgs {
    /// t4, t5, t7, t8, t9, t10, fig7, comparison, validation, or all
    #[arg(long, default_value = "all")]
    table: String,
    #[arg(long, default_value = "pipelined")]
    anchor_design: String,
    #[arg(long, default_value_t = 60e6)]
    fclk: f64,
}

#[derive(Deserialize)]
struct SpecsFile {
    schema: String,
    #[allow(dead_code)]
    version: u32,
    #[serde(default, rename = "processor")]
    processors: Vec<ProcessorSpec>,
    #[serde(default, rename = "run")]
    runs: Vec<MeasuredRun>,
}

#[derive(Deserialize)]
struct SweepFile {
    schema: String,
    #[allow(dead_code)]
    version: u32,
    #[serde(flatten)]
    space: SweepSpace,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let format = OutputFormat::from_str(&cli.format)?;
    let dataset_owned;
    let dataset: &Dataset = match &cli.dataset {
        Some(path) => {
            dataset_owned = Dataset::from_path(path)?;
            &dataset_owned
        }
        None => Dataset::embedded(),
    };

    let (output, code) = match cli.command {
        Command::Model(args) => (cmd_model(dataset, &args, format)?, ExitCode::SUCCESS),
        Command::Workload(args) => (cmd_workload(dataset, &args, format)?, ExitCode::SUCCESS),
        Command::Simulate(args) => (cmd_simulate(dataset, &args, format)?, ExitCode::SUCCESS),
        Command::Calibrate(args) => (cmd_calibrate(dataset, &args, format)?, ExitCode::SUCCESS),
        Command::Sweep(args) => (cmd_sweep(dataset, &args, format)?, ExitCode::SUCCESS),
        Command::Validate => {
            let report = dataset.validate();
            let text = build_validation_table(&report).render(format);
            let code = if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
            (text, code)
        }
        Command::Report(args) => cmd_report(dataset, &args, format)?,
    };

    match &cli.out {
        Some(path) => std::fs::write(path, output)?,
        None => print!("{output}"),
    }
    Ok(code)
}

fn parse_list<T: FromStr>(text: &str, what: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(|item| {
            item.trim()
                .parse::<T>()
                .map_err(|_| Error::Config(format!("invalid {what} list entry '{item}'")))
        })
        .collect()
}

/// Greenness-equation evaluation: throughput, dynamic greenness, K_tec,
/// relative K_tec, and the process-node-normalized value per processor.
fn cmd_model(dataset: &Dataset, args: &ModelArgs, format: OutputFormat) -> Result<String> {
    struct Entry {
        name: String,
        ops_per_s: f64,
        g_dyn: f64,
        voltage: f64,
        transistors: f64,
        c_pn: f64,
        opc: f64,
    }

    let entries: Vec<Entry> = match &args.specs {
        Some(path) => {
            let file: SpecsFile = toml::from_str(&std::fs::read_to_string(path)?)?;
            if file.schema != "greencore-specs" {
                return Err(Error::config(format!("'{}' is not a specs file", path.display())));
            }
            file.processors
                .iter()
                .map(|spec| {
                    spec.validate()?;
                    let run = file.runs.iter().find(|r| r.processor == spec.name);
                    let (ops_per_s, g_dyn) = match run {
                        Some(run) => (run.ops_executed / run.time_s, run.greenness()?),
                        None => (spec.throughput()?, spec.greenness_dynamic()?),
                    };
                    Ok(Entry {
                        name: spec.name.clone(),
                        ops_per_s,
                        g_dyn,
                        voltage: spec.voltage_v,
                        transistors: spec.transistors,
                        c_pn: spec.c_pn,
                        opc: spec.opc,
                    })
                })
                .collect::<Result<_>>()?
        }
        None => dataset
            .rows(TableId::T3)
            .map(|row| {
                let label = row.label.as_str();
                let ops = dataset.cell(TableId::T2, label, "ops_per_s")?;
                let watts = dataset.cell(TableId::T2, label, "p_dyn_w")?;
                Ok(Entry {
                    name: row.label.clone(),
                    ops_per_s: ops,
                    g_dyn: energy::greenness(ops, 1.0, watts)?,
                    voltage: dataset.cell(TableId::T3, label, "voltage_v")?,
                    transistors: dataset.cell(TableId::T3, label, "transistors")?,
                    c_pn: dataset.cell(TableId::T5, label, "c_pn")?,
                    opc: dataset.cell(TableId::T3, label, "opc")?,
                })
            })
            .collect::<Result<_>>()?,
    };

    let k_values: Vec<(String, f64)> = entries
        .iter()
        .map(|e| Ok((e.name.clone(), energy::k_tec(e.opc, e.g_dyn, e.voltage, e.transistors)?)))
        .collect::<Result<_>>()?;
    let relative = energy::relative_k_tec(&k_values, &args.reference)?;

    let rows = entries
        .iter()
        .zip(&k_values)
        .zip(&relative)
        .map(|((e, (_, k)), (_, rel))| {
            Ok(vec![
                e.name.clone(),
                fmt_sig6(e.ops_per_s),
                fmt_sig6(e.g_dyn),
                fmt_sig6(*k),
                fmt_sig6(*rel),
                fmt_sig6(energy::normalize_process_node(*rel, e.c_pn)?),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let table = Table {
        header: [
            "processor",
            "ops_per_s",
            "g_dyn_ops_per_w",
            "k_tec_f",
            "rel_k_tec",
            "rel_k_tec_norm",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect(),
        rows,
    };
    Ok(table.render(format))
}

fn instrumented_profile(dataset: &Dataset, args: &WorkloadArgs) -> Result<WorkloadProfile> {
    let mode = PrimalityMode::from_str(&args.mode)?;
    let bound = driver_upper_bound(args.n, args.faithful_driver);
    if let Some(path) = &args.cache {
        if path.exists() {
            let cached = WorkloadProfile::load(path)?;
            if cached.n == bound && cached.mode == mode && cached.range_start == 2 {
                return match args.ops_per_iteration {
                    Some(opi) => cached.with_ops_per_iteration(opi),
                    None => Ok(cached),
                };
            }
        }
    }
    let ops_per_iteration = match args.ops_per_iteration {
        Some(opi) => opi,
        None => dataset.default_ops_per_iteration()?,
    };
    let instrumented = profile(bound, mode, ops_per_iteration)?;
    if let Some(path) = &args.cache {
        instrumented.save(path)?;
    }
    Ok(instrumented)
}

fn cmd_workload(dataset: &Dataset, args: &WorkloadArgs, format: OutputFormat) -> Result<String> {
    let profile = instrumented_profile(dataset, args)?;
    let primes = (profile.range_start..profile.n)
        .filter(|&v| is_prime(v, profile.mode))
        .count() as u64;
    let table = Table {
        header: [
            "n",
            "mode",
            "candidates",
            "primes",
            "total_iterations",
            "ops_per_iteration",
            "total_ops",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect(),
        rows: vec![vec![
            profile.n.to_string(),
            profile.mode.to_string(),
            profile.candidates.to_string(),
            primes.to_string(),
            profile.total_iterations.to_string(),
            fmt_sig6(profile.ops_per_iteration),
            fmt_sig6(profile.total_ops),
        ]],
    };
    Ok(table.render(format))
}

fn cmd_simulate(dataset: &Dataset, args: &SimulateArgs, format: OutputFormat) -> Result<String> {
    let design = DesignPoint::from_str(&args.design)?;
    let profile = match args.workload.as_str() {
        "accounted" => {
            if args.n != greencore::calibration::BENCHMARK_N {
                return Err(Error::config(
                    "the accounted workload exists only for the reference benchmark bound; \
                     use --workload instrumented for other n",
                ));
            }
            dataset.accounted_profile()?
        }
        "instrumented" => instrumented_profile(
            dataset,
            &WorkloadArgs {
                n: args.n,
                mode: args.mode.clone(),
                faithful_driver: args.faithful_driver,
                cache: args.cache.clone(),
                ops_per_iteration: None,
            },
        )?,
        other => {
            return Err(Error::config(format!(
                "unknown workload source '{other}' (accounted or instrumented)"
            )))
        }
    };

    let cores = args.cores.unwrap_or(if design == DesignPoint::MultiCore { 8 } else { 1 });
    let mut sys = SystemConfig::for_design(design, cores, args.fclk);
    if let Some(accel) = sys.accel.as_mut() {
        if let Some(units) = args.units {
            accel.units = units;
            accel.block_size = units;
        }
        if let Some(latency) = args.latency {
            accel.divider_latency = latency;
        }
    }
    // The scale is a property of the benchmark/hardware pair: fitted once on
    // the reference workload, then applied as a constant everywhere.
    sys.workload_scale = match args.scale {
        Some(scale) => scale,
        None => anchored_scale(
            &dataset.accounted_profile()?,
            args.fclk,
            measured_anchor(dataset, DesignPoint::Pipelined)?,
        )?,
    };

    let power_mode = match args.power.as_str() {
        "lookup" => PowerMode::Lookup,
        "linear-fit" | "fit" => PowerMode::LinearFit,
        other => return Err(Error::config(format!("unknown power model '{other}'"))),
    };
    let model = dataset.power_model(power_mode)?;
    // measured power applies only to the design point's synthesized
    // configuration (its own canonical unit count and divider depth)
    let canonical = SystemConfig::for_design(design, cores, args.fclk).accel;
    let measured_config = match (&sys.accel, &canonical) {
        (Some(actual), Some(reference)) => {
            actual.units == reference.units
                && actual.divider_latency == reference.divider_latency
        }
        (None, None) => true,
        _ => false,
    };
    let (watts, _extrapolated) = match power_of(&sys, &model) {
        Ok(w) if measured_config => (w, false),
        _ => power_of_extrapolated(&sys, &model, false),
    };

    let result = greencore::sim::simulate(&profile, &sys, watts)?;
    let table = build_sim_table(&[(design.to_string(), cores, &result)]);
    Ok(table.render(format))
}

fn cmd_calibrate(dataset: &Dataset, args: &CalibrateArgs, format: OutputFormat) -> Result<String> {
    let design = DesignPoint::from_str(&args.anchor_design)?;
    let anchor = match args.anchor_seconds {
        Some(seconds) => (design, seconds),
        None => measured_anchor(dataset, design)?,
    };
    let profile = dataset.accounted_profile()?;
    let scale = anchored_scale(&profile, args.fclk, anchor)?;
    let mut out = format!(
        "workload_scale,{}\nanchor_design,{}\nanchor_seconds,{}\n\n",
        fmt_sig6(scale),
        anchor.0,
        fmt_sig6(anchor.1)
    );
    out.push_str(&build_design_comparison(dataset, args.fclk, anchor)?.render(format));
    Ok(out)
}

fn cmd_sweep(dataset: &Dataset, args: &SweepArgs, format: OutputFormat) -> Result<String> {
    let mut space = match &args.config {
        Some(path) => {
            let file: SweepFile = toml::from_str(&std::fs::read_to_string(path)?)?;
            if file.schema != "greencore-sweep" {
                return Err(Error::config(format!("'{}' is not a sweep file", path.display())));
            }
            file.space
        }
        None => SweepSpace {
            frequency: FrequencyModel { base_hz: args.fclk, ..FrequencyModel::default() },
            ..SweepSpace::default()
        },
    };
    if let Some(cores) = &args.cores {
        space.cores = parse_list(cores, "cores")?;
    }
    if let Some(units) = &args.units {
        space.units = parse_list(units, "units")?;
    }
    if let Some(latencies) = &args.latencies {
        space.latencies = parse_list(latencies, "latencies")?;
    }

    let power_mode = match args.power.as_str() {
        "lookup" => PowerMode::Lookup,
        "linear-fit" | "fit" => PowerMode::LinearFit,
        other => return Err(Error::config(format!("unknown power model '{other}'"))),
    };
    let profile = dataset.accounted_profile()?;
    let scale = anchored_scale(
        &profile,
        space.frequency.base_hz,
        measured_anchor(dataset, DesignPoint::Pipelined)?,
    )?;
    let results = sweep(
        &space,
        &profile,
        &dataset.power_model(power_mode)?,
        &dataset.resource_model()?,
        scale,
    )?;
    Ok(build_sweep_table(&results).render(format))
}

fn cmd_report(
    dataset: &Dataset,
    args: &ReportArgs,
    format: OutputFormat,
) -> Result<(String, ExitCode)> {
    let anchor_design = DesignPoint::from_str(&args.anchor_design)?;
    let comparison = || -> Result<String> {
        let anchor = measured_anchor(dataset, anchor_design)?;
        Ok(build_design_comparison(dataset, args.fclk, anchor)?.render(format))
    };
    match args.table.as_str() {
        "comparison" => Ok((comparison()?, ExitCode::SUCCESS)),
        "validation" => {
            let report = dataset.validate();
            let code = if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::from(1) };
            Ok((build_validation_table(&report).render(format), code))
        }
        "all" => {
            let mut out = String::new();
            for (title, kind) in [
                ("technology factor", TableKind::T4),
                ("process-node normalization", TableKind::T5),
                ("OpenMP scaling", TableKind::T7),
                ("design progression", TableKind::T8),
                ("multicore scaling", TableKind::T9),
                ("GPGPU", TableKind::T10),
                ("relative speedup and efficiency", TableKind::Fig7),
            ] {
                out.push_str(&format!("# {title}\n"));
                out.push_str(&emit_table(kind, format, dataset)?);
                out.push('\n');
            }
            out.push_str("# measured vs modeled\n");
            out.push_str(&comparison()?);
            out.push('\n');
            let report = dataset.validate();
            out.push_str("# dataset validation\n");
            out.push_str(&build_validation_table(&report).render(format));
            let code = if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::from(1) };
            Ok((out, code))
        }
        kind => {
            let kind = TableKind::from_str(kind)?;
            Ok((emit_table(kind, format, dataset)?, ExitCode::SUCCESS))
        }
    }
}
