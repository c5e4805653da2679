//! Deterministic CSV and markdown emitters for the reference tables, the
//! scaling figure, validation reports, and model-vs-measurement comparisons.
//!
//! Both formats render the same cell strings: every numeric cell is printed
//! with exactly six significant digits, period decimal separator, no locale,
//! so output is byte-stable across runs and platforms.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::calibration::{power_of, Dataset, PowerMode, TableId, ValidationReport};
use crate::dse::{design_progression, pareto_flags, DesignPointResult};
use crate::error::{Error, Result};
use crate::sim::{calibrate_scale, simulate, DesignPoint, SimResult, SystemConfig};
use crate::workload::WorkloadProfile;

/// Emittable table kinds: the four reference tables reproduced verbatim,
/// the benchmark scaling tables, and the per-thread scaling figure data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    T4,
    T5,
    T7,
    T8,
    T9,
    T10,
    Fig7,
}

impl FromStr for TableKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "t4" => Ok(TableKind::T4),
            "t5" => Ok(TableKind::T5),
            "t7" => Ok(TableKind::T7),
            "t8" => Ok(TableKind::T8),
            "t9" => Ok(TableKind::T9),
            "t10" => Ok(TableKind::T10),
            "fig7" => Ok(TableKind::Fig7),
            other => Err(Error::config(format!("unknown table kind '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Markdown,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "md" | "markdown" => Ok(OutputFormat::Markdown),
            other => Err(Error::config(format!("unknown output format '{other}'"))),
        }
    }
}

/// Exactly six significant digits, deterministic.
///
/// Values whose decimal exponent lies in [-4, 5] print positionally
/// (31.6300, 0.280000, 14093.0); anything else prints as d.dddddeN
/// (2.46058e-17, 9.66721e9).
pub fn fmt_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0.00000".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let scientific = format!("{x:.5e}");
    let (mantissa, exponent) = scientific
        .split_once('e')
        .expect("{:e} always contains an exponent");
    let exponent: i32 = exponent.parse().expect("exponent is an integer");
    if (-4..=5).contains(&exponent) {
        let decimals = (5 - exponent).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{mantissa}e{exponent}")
    }
}

/// A rendered table: header plus rows of preformatted cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => {
                let mut out = String::new();
                let _ = writeln!(out, "{}", self.header.join(","));
                for row in &self.rows {
                    let _ = writeln!(out, "{}", row.join(","));
                }
                out
            }
            OutputFormat::Markdown => {
                let mut out = String::new();
                let _ = writeln!(out, "| {} |", self.header.join(" | "));
                let _ = writeln!(
                    out,
                    "|{}|",
                    self.header.iter().map(|_| "----").collect::<Vec<_>>().join("|")
                );
                for row in &self.rows {
                    let _ = writeln!(out, "| {} |", row.join(" | "));
                }
                out
            }
        }
    }
}

fn reference_table(ds: &Dataset, table: TableId, first_column: &str, keys: &[&str]) -> Result<Table> {
    let mut header = vec![first_column.to_string()];
    header.extend(keys.iter().map(|k| k.to_string()));
    let mut rows = Vec::new();
    for row in ds.rows(table) {
        let mut cells = vec![row.label.clone()];
        for key in keys {
            let value = row.values.get(*key).copied().ok_or_else(|| {
                Error::lookup(format!("row {table}/'{}' has no cell '{key}'", row.label))
            })?;
            cells.push(fmt_sig6(value));
        }
        rows.push(cells);
    }
    Ok(Table { header, rows })
}

fn fig7_table(ds: &Dataset) -> Result<Table> {
    let time_1 = ds.cell(TableId::T9, "1", "time_s")?;
    let mops_1 = ds.cell(TableId::T9, "1", "mops_per_watt")?;
    let mut rows = Vec::new();
    for row in ds.rows(TableId::T9) {
        let time = row.values["time_s"];
        let mops = row.values["mops_per_watt"];
        rows.push(vec![
            row.label.clone(),
            fmt_sig6(time_1 / time),
            fmt_sig6(mops / mops_1),
        ]);
    }
    Ok(Table {
        header: vec![
            "threads".to_string(),
            "speedup".to_string(),
            "relative_efficiency".to_string(),
        ],
        rows,
    })
}

/// Builds the requested table from the dataset.
pub fn build_table(kind: TableKind, ds: &Dataset) -> Result<Table> {
    match kind {
        TableKind::T4 => reference_table(
            ds,
            TableId::T4,
            "processor",
            &["process_node_nm", "k_tec_f", "rel_k_tec"],
        ),
        TableKind::T5 => {
            reference_table(ds, TableId::T5, "processor", &["c_pn", "rel_k_tec_norm"])
        }
        TableKind::T7 => reference_table(
            ds,
            TableId::T7,
            "threads",
            &["time_s", "p_dyn_w", "mops_per_watt"],
        ),
        TableKind::T8 => reference_table(
            ds,
            TableId::T8,
            "design",
            &["time_s", "p_dyn_w", "mops_per_watt"],
        ),
        TableKind::T9 => reference_table(
            ds,
            TableId::T9,
            "threads",
            &["time_s", "p_dyn_w", "mops_per_watt"],
        ),
        TableKind::T10 => reference_table(
            ds,
            TableId::T10,
            "device",
            &["time_s", "p_dyn_w", "mops_per_watt"],
        ),
        TableKind::Fig7 => fig7_table(ds),
    }
}

/// Renders the requested table as CSV or markdown text.
pub fn emit_table(kind: TableKind, format: OutputFormat, ds: &Dataset) -> Result<String> {
    Ok(build_table(kind, ds)?.render(format))
}

/// Measured time anchor for a design point, read from the dataset.
pub fn measured_anchor(ds: &Dataset, design: DesignPoint) -> Result<(DesignPoint, f64)> {
    let seconds = match design {
        DesignPoint::Baseline => ds.cell(TableId::T8, "Baseline", "time_s")?,
        DesignPoint::CustomInstruction => ds.cell(TableId::T8, "Custom Instruction", "time_s")?,
        DesignPoint::MultiUnit => ds.cell(TableId::T8, "10 units", "time_s")?,
        DesignPoint::Pipelined => ds.cell(TableId::T8, "Pipelining", "time_s")?,
        DesignPoint::MultiCore => ds.cell(TableId::T9, "8", "time_s")?,
    };
    Ok((design, seconds))
}

/// Workload scale fitted so the anchor design point reproduces its measured
/// seconds.
pub fn anchored_scale(
    profile: &WorkloadProfile,
    f_clk_hz: f64,
    anchor: (DesignPoint, f64),
) -> Result<f64> {
    let cores = if anchor.0 == DesignPoint::MultiCore { 8 } else { 1 };
    let anchor_sys = SystemConfig::for_design(anchor.0, cores, f_clk_hz);
    calibrate_scale(profile, &anchor_sys, anchor.1)
}

/// The five-design progression simulated with measured power over the
/// accounted benchmark profile, anchored at one measured time. Each result
/// carries its speedup against the baseline and the previous design point.
pub fn modeled_progression(
    ds: &Dataset,
    f_clk_hz: f64,
    anchor: (DesignPoint, f64),
) -> Result<Vec<(SystemConfig, SimResult)>> {
    let profile = ds.accounted_profile()?;
    let scale = anchored_scale(&profile, f_clk_hz, anchor)?;
    let power = ds.power_model(PowerMode::Lookup)?;
    let mut progression: Vec<(SystemConfig, SimResult)> = design_progression(f_clk_hz, scale)
        .into_iter()
        .map(|config| {
            let watts = power_of(&config, &power)?;
            let sim = simulate(&profile, &config, watts)?;
            Ok((config, sim))
        })
        .collect::<Result<_>>()?;
    for i in 1..progression.len() {
        let baseline = progression[0].1.clone();
        let previous = progression[i - 1].1.clone();
        let previous_name = progression[i - 1].0.design_point.to_string();
        let (_, sim) = &mut progression[i];
        sim.record_speedup_vs("baseline", &baseline);
        sim.record_speedup_vs(&previous_name, &previous);
    }
    Ok(progression)
}

/// Measured rows next to the model's reproduction of them. Modeled cells are
/// simulation output, not measurements, and are labeled as such.
pub fn build_design_comparison(
    ds: &Dataset,
    f_clk_hz: f64,
    anchor: (DesignPoint, f64),
) -> Result<Table> {
    let modeled = modeled_progression(ds, f_clk_hz, anchor)?;
    let mut rows = Vec::new();
    for (config, sim) in &modeled {
        let (table, label) = match config.design_point {
            DesignPoint::Baseline => (TableId::T8, "Baseline"),
            DesignPoint::CustomInstruction => (TableId::T8, "Custom Instruction"),
            DesignPoint::MultiUnit => (TableId::T8, "10 units"),
            DesignPoint::Pipelined => (TableId::T8, "Pipelining"),
            DesignPoint::MultiCore => (TableId::T9, "8"),
        };
        let measured_time = ds.cell(table, label, "time_s")?;
        let measured_mops = ds.cell(table, label, "mops_per_watt")?;
        rows.push(vec![
            config.design_point.to_string(),
            config.cores.to_string(),
            fmt_sig6(measured_time),
            fmt_sig6(sim.time_s),
            fmt_sig6((sim.time_s / measured_time - 1.0) * 100.0),
            fmt_sig6(measured_mops),
            fmt_sig6(sim.mops_per_watt),
            fmt_sig6((sim.mops_per_watt / measured_mops - 1.0) * 100.0),
            "MODELED".to_string(),
        ]);
    }
    Ok(Table {
        header: [
            "design",
            "threads",
            "time_s_measured",
            "time_s_modeled",
            "time_residual_pct",
            "mops_per_watt_measured",
            "mops_per_watt_modeled",
            "mops_residual_pct",
            "modeled_cells_source",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect(),
        rows,
    })
}

/// One simulation result as a table row (design/threads, seconds, watts,
/// MOPS/W), matching the reference tables' column order.
pub fn build_sim_table(entries: &[(String, u32, &SimResult)]) -> Table {
    Table {
        header: ["design", "threads", "time_s", "p_dyn_w", "mops_per_watt"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        rows: entries
            .iter()
            .map(|(design, threads, sim)| {
                vec![
                    design.clone(),
                    threads.to_string(),
                    fmt_sig6(sim.time_s),
                    fmt_sig6(sim.p_dyn_w),
                    fmt_sig6(sim.mops_per_watt),
                ]
            })
            .collect(),
    }
}

/// Validation report as a table, one row per check.
pub fn build_validation_table(report: &ValidationReport) -> Table {
    Table {
        header: ["check", "status", "worst_rel_err_pct", "tolerance_pct", "description"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        rows: report
            .checks
            .iter()
            .map(|check| {
                let mut description = check.description.clone();
                if !check.detail.is_empty() {
                    description.push_str(" (");
                    description.push_str(&check.detail);
                    description.push(')');
                }
                vec![
                    check.name.clone(),
                    if check.passed { "PASS" } else { "FAIL" }.to_string(),
                    fmt_sig6(check.worst_rel_err * 100.0),
                    fmt_sig6(check.tolerance * 100.0),
                    description,
                ]
            })
            .collect(),
    }
}

/// Sweep results as a table, one row per design point plus a pareto flag
/// column. Power values not backed by a measurement are marked
/// `extrapolated`.
pub fn build_sweep_table(results: &[DesignPointResult]) -> Table {
    let flags = pareto_flags(results);
    Table {
        header: [
            "cores",
            "units",
            "divider_latency",
            "f_clk_hz",
            "cycles",
            "time_s",
            "p_dyn_w",
            "power_source",
            "mops_per_watt",
            "luts",
            "ffs",
            "memory_bits",
            "dsps",
            "feasible",
            "pareto",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect(),
        rows: results
            .iter()
            .zip(flags)
            .map(|(r, on_front)| {
                let accel = r.config.accel.as_ref().expect("swept configs carry accelerators");
                vec![
                    r.config.cores.to_string(),
                    accel.units.to_string(),
                    accel.divider_latency.to_string(),
                    fmt_sig6(r.config.f_clk_hz),
                    r.sim.cycles.to_string(),
                    fmt_sig6(r.sim.time_s),
                    fmt_sig6(r.sim.p_dyn_w),
                    if r.power_extrapolated { "extrapolated" } else { "measured" }.to_string(),
                    fmt_sig6(r.sim.mops_per_watt),
                    fmt_sig6(r.resources.luts),
                    fmt_sig6(r.resources.ffs),
                    fmt_sig6(r.resources.memory_bits),
                    fmt_sig6(r.resources.dsps),
                    r.feasible.to_string(),
                    on_front.to_string(),
                ]
            })
            .collect(),
    }
}
