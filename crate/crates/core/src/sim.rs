//! Functional datapath model and cycle-approximate timing model for the
//! custom-instruction design progression.
//!
//! The progression has five design points. `Baseline` runs the benchmark
//! loop in software. `CustomInstruction` moves the loop body into a datapath
//! built around a pipelined divider: per iteration it pays the divider
//! latency plus FSM control overhead. `MultiUnit` replicates the divider K
//! times and checks the loop bound once per block of K divisor candidates.
//! `Pipelined` keeps the dividers' pipelines full by injecting a new block
//! every cycle and OR-reducing divisibility flags whenever they emerge, so a
//! block costs one cycle and the latency is paid once as a drain. `MultiCore`
//! replicates the pipelined core and splits the candidate range.
//!
//! The functional model answers "does the datapath return the same verdict
//! as the software loop"; the timing model answers "how many cycles does a
//! design point spend". They are deliberately independent: divider latency
//! and issue mode never change a verdict.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::workload::{PartitionScheme, WorkloadProfile};

/// How divisor blocks enter the divider pipelines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IssueMode {
    /// A block completes (latency plus control) before the next one issues.
    Sequential,
    /// A new block issues every cycle; detection latency is tolerated.
    PipelinedIssue,
}

/// Parameters of the loop-body datapath.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AcceleratorConfig {
    /// Divider pipeline latency L, cycles.
    pub divider_latency: u64,
    /// FSM control overhead c per issued block, cycles.
    pub control_overhead: u64,
    /// Replicated divider units K.
    pub units: u64,
    pub issue_mode: IssueMode,
    /// Divisor candidates covered by one bound check (defaults to `units`).
    pub block_size: u64,
    /// Fixed cost per candidate handed to the datapath, cycles.
    pub per_call_setup: u64,
}

pub const DEFAULT_DIVIDER_LATENCY: u64 = 5;
pub const DEFAULT_CONTROL_OVERHEAD: u64 = 1;
pub const DEFAULT_UNITS: u64 = 10;
pub const DEFAULT_PER_CALL_SETUP: u64 = 2;
pub const DEFAULT_BASELINE_CYCLES_PER_ITERATION: u64 = 45;

impl AcceleratorConfig {
    /// Single divider unit, sequential issue.
    pub fn custom_instruction() -> Self {
        AcceleratorConfig {
            divider_latency: DEFAULT_DIVIDER_LATENCY,
            control_overhead: DEFAULT_CONTROL_OVERHEAD,
            units: 1,
            issue_mode: IssueMode::Sequential,
            block_size: 1,
            per_call_setup: DEFAULT_PER_CALL_SETUP,
        }
    }

    /// K replicated units sharing a block-wise bound check.
    pub fn multi_unit(units: u64) -> Self {
        AcceleratorConfig {
            divider_latency: DEFAULT_DIVIDER_LATENCY,
            control_overhead: DEFAULT_CONTROL_OVERHEAD,
            units,
            issue_mode: IssueMode::Sequential,
            block_size: units,
            per_call_setup: DEFAULT_PER_CALL_SETUP,
        }
    }

    /// K units with a new block injected every cycle.
    pub fn pipelined(units: u64) -> Self {
        AcceleratorConfig {
            issue_mode: IssueMode::PipelinedIssue,
            ..AcceleratorConfig::multi_unit(units)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.divider_latency < 1 {
            return Err(Error::domain("divider latency must be >= 1 cycle"));
        }
        if self.units < 1 {
            return Err(Error::domain("unit count must be >= 1"));
        }
        if self.block_size < 1 {
            return Err(Error::domain("block size must be >= 1"));
        }
        Ok(())
    }
}

impl Default for AcceleratorConfig {
    fn default() -> Self {
        AcceleratorConfig::pipelined(DEFAULT_UNITS)
    }
}

/// The five system variants of the design progression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DesignPoint {
    Baseline,
    CustomInstruction,
    MultiUnit,
    Pipelined,
    MultiCore,
}

impl DesignPoint {
    pub const ALL: [DesignPoint; 5] = [
        DesignPoint::Baseline,
        DesignPoint::CustomInstruction,
        DesignPoint::MultiUnit,
        DesignPoint::Pipelined,
        DesignPoint::MultiCore,
    ];
}

impl fmt::Display for DesignPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DesignPoint::Baseline => "baseline",
            DesignPoint::CustomInstruction => "custom-instruction",
            DesignPoint::MultiUnit => "multi-unit",
            DesignPoint::Pipelined => "pipelined",
            DesignPoint::MultiCore => "multi-core",
        };
        write!(f, "{s}")
    }
}

impl FromStr for DesignPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "baseline" => Ok(DesignPoint::Baseline),
            "custom-instruction" | "ci" => Ok(DesignPoint::CustomInstruction),
            "multi-unit" | "multiunit" => Ok(DesignPoint::MultiUnit),
            "pipelined" | "pipelining" => Ok(DesignPoint::Pipelined),
            "multi-core" | "multicore" => Ok(DesignPoint::MultiCore),
            other => Err(Error::config(format!("unknown design point '{other}'"))),
        }
    }
}

/// One simulated design point: which system, how many cores, at what clock.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    pub design_point: DesignPoint,
    pub cores: u32,
    pub f_clk_hz: f64,
    /// Absent for `Baseline` only.
    pub accel: Option<AcceleratorConfig>,
    /// Software cost of one inner-loop iteration on the plain core.
    pub baseline_cycles_per_iteration: u64,
    pub partition_scheme: PartitionScheme,
    /// Fitted multiplier reconciling model cycles with measured seconds.
    /// Ratios between design points are unaffected by it.
    pub workload_scale: f64,
}

impl SystemConfig {
    /// Canonical configuration for a design point with default constants.
    pub fn for_design(design_point: DesignPoint, cores: u32, f_clk_hz: f64) -> Self {
        let accel = match design_point {
            DesignPoint::Baseline => None,
            DesignPoint::CustomInstruction => Some(AcceleratorConfig::custom_instruction()),
            DesignPoint::MultiUnit => Some(AcceleratorConfig::multi_unit(DEFAULT_UNITS)),
            DesignPoint::Pipelined | DesignPoint::MultiCore => {
                Some(AcceleratorConfig::pipelined(DEFAULT_UNITS))
            }
        };
        SystemConfig {
            design_point,
            cores,
            f_clk_hz,
            accel,
            baseline_cycles_per_iteration: DEFAULT_BASELINE_CYCLES_PER_ITERATION,
            partition_scheme: PartitionScheme::Block,
            workload_scale: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.cores < 1 {
            return Err(Error::domain("cores must be >= 1"));
        }
        if self.f_clk_hz <= 0.0 {
            return Err(Error::domain("f_clk must be > 0"));
        }
        if self.workload_scale <= 0.0 {
            return Err(Error::domain("workload_scale must be > 0"));
        }
        match self.design_point {
            DesignPoint::Baseline => {
                if self.accel.is_some() {
                    return Err(Error::config("baseline design must not have an accelerator"));
                }
                if self.baseline_cycles_per_iteration == 0 {
                    return Err(Error::domain("baseline cycles per iteration must be >= 1"));
                }
            }
            DesignPoint::MultiCore => {
                if self.cores < 2 {
                    return Err(Error::config("multi-core design requires cores >= 2"));
                }
                self.require_accel()?.validate()?;
            }
            DesignPoint::CustomInstruction => {
                let accel = self.require_accel()?;
                accel.validate()?;
                if accel.units != 1 {
                    return Err(Error::config("custom-instruction design has a single unit"));
                }
            }
            _ => {
                self.require_accel()?.validate()?;
            }
        }
        Ok(())
    }

    fn require_accel(&self) -> Result<&AcceleratorConfig> {
        self.accel.as_ref().ok_or_else(|| {
            Error::config(format!("{} design requires an accelerator config", self.design_point))
        })
    }
}

/// Output of one simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    /// Unscaled model cycles.
    pub cycles: u64,
    /// `cycles * workload_scale / f_clk`.
    pub time_s: f64,
    pub p_dyn_w: f64,
    /// `total_ops / time_s / p_dyn_w / 1e6`.
    pub mops_per_watt: f64,
    /// Ratios `time(reference) / time(self)` against named reference runs.
    pub speedup_vs: BTreeMap<String, f64>,
}

impl SimResult {
    pub fn record_speedup_vs(&mut self, name: &str, reference: &SimResult) {
        self.speedup_vs
            .insert(name.to_string(), reference.time_s / self.time_s);
    }
}

/// Functional verdict of the datapath for one candidate.
///
/// The software wrapper keeps the 0..3 and even-value rejections; the
/// datapath walks divisor candidates from i = 2 upward in blocks of
/// `block_size`. The bound check runs once per block, so a block may
/// overshoot the loop bound; lanes past the bound are masked out of the
/// OR-reduction, which is what keeps block execution behavior-preserving.
/// The verdict is independent of divider latency and issue mode: those only
/// change when a flag is observed, never whether it is raised.
pub fn check_candidate_functional(v: u64, accel: &AcceleratorConfig) -> bool {
    if v <= 3 {
        return true;
    }
    if v.is_multiple_of(2) {
        return false;
    }
    let in_bounds = |i: u64| (i as u128) * (i as u128) < v as u128;
    let mut base: u64 = 2;
    while in_bounds(base) {
        let mut divisible = false;
        for lane in 0..accel.block_size {
            let i = base + lane;
            if in_bounds(i) && v.is_multiple_of(i) {
                divisible = true;
            }
        }
        if divisible {
            return false;
        }
        base += accel.block_size;
    }
    true
}

fn partition_counts(candidates: u64, cores: u32, _scheme: PartitionScheme) -> Vec<u64> {
    // Block and Interleaved both yield near-equal counts (difference <= 1),
    // just assigned to different core indices, so the max over cores is
    // scheme-independent.
    let cores64 = cores as u64;
    let base = candidates / cores64;
    let remainder = candidates % cores64;
    (0..cores64).map(|c| base + u64::from(c < remainder)).collect()
}

/// Model cycles a single core spends on `candidate_count` candidates of
/// `iters_per_candidate` average inner-loop iterations each.
fn core_cycles(
    design: DesignPoint,
    accel: &AcceleratorConfig,
    candidate_count: f64,
    iters_per_candidate: f64,
) -> f64 {
    let latency_and_control = (accel.divider_latency + accel.control_overhead) as f64;
    let setup = accel.per_call_setup as f64;
    let per_candidate = match design {
        DesignPoint::CustomInstruction => iters_per_candidate * latency_and_control + setup,
        DesignPoint::MultiUnit => {
            let blocks = (iters_per_candidate / accel.units as f64).ceil();
            blocks * latency_and_control + setup
        }
        DesignPoint::Pipelined | DesignPoint::MultiCore => {
            // one block per cycle, plus one pipeline drain per candidate
            let blocks = (iters_per_candidate / accel.units as f64).ceil();
            blocks + latency_and_control + setup
        }
        DesignPoint::Baseline => unreachable!("baseline has no accelerator"),
    };
    candidate_count * per_candidate
}

fn raw_cycles(profile: &WorkloadProfile, sys: &SystemConfig) -> Result<f64> {
    profile.validate()?;
    sys.validate()?;
    let cycles = match sys.design_point {
        DesignPoint::Baseline => {
            profile.total_iterations as f64 * sys.baseline_cycles_per_iteration as f64
        }
        DesignPoint::MultiCore => {
            let accel = sys.require_accel()?;
            let iters = profile.iterations_per_candidate();
            partition_counts(profile.candidates, sys.cores, sys.partition_scheme)
                .into_iter()
                .map(|count| core_cycles(DesignPoint::MultiCore, accel, count as f64, iters))
                .fold(0.0_f64, f64::max)
        }
        design => {
            let accel = sys.require_accel()?;
            core_cycles(
                design,
                accel,
                profile.candidates as f64,
                profile.iterations_per_candidate(),
            )
        }
    };
    if cycles <= 0.0 {
        return Err(Error::domain("model produced zero cycles"));
    }
    Ok(cycles)
}

/// Cycle-approximate simulation of one design point over a workload.
///
/// `p_dyn_w` is the dynamic power attributed to the design point (see the
/// calibration module's power models).
pub fn simulate(profile: &WorkloadProfile, sys: &SystemConfig, p_dyn_w: f64) -> Result<SimResult> {
    if p_dyn_w <= 0.0 {
        return Err(Error::domain("power must be > 0"));
    }
    let cycles = raw_cycles(profile, sys)?.round() as u64;
    let time_s = cycles as f64 * sys.workload_scale / sys.f_clk_hz;
    Ok(SimResult {
        cycles,
        time_s,
        p_dyn_w,
        mops_per_watt: profile.total_ops / time_s / p_dyn_w / 1e6,
        speedup_vs: BTreeMap::new(),
    })
}

/// The single multiplier that makes the anchor design point reproduce a
/// measured time; applying it to every design point leaves all cross-design
/// ratios untouched.
pub fn calibrate_scale(
    profile: &WorkloadProfile,
    anchor_sys: &SystemConfig,
    anchor_seconds: f64,
) -> Result<f64> {
    if anchor_seconds <= 0.0 {
        return Err(Error::domain("anchor seconds must be > 0"));
    }
    let cycles = raw_cycles(profile, anchor_sys)?.round();
    if cycles == 0.0 {
        return Err(Error::domain("anchor design produced zero cycles"));
    }
    Ok(anchor_seconds * anchor_sys.f_clk_hz / cycles)
}
