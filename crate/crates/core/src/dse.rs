//! Design-space exploration over unit count, divider pipeline depth, core
//! count, and clock frequency, with resource feasibility and Pareto
//! filtering.

use serde::{Deserialize, Serialize};

use crate::calibration::{
    power_of_extrapolated, resources_with_units, PowerModel, ResourceModel, ResourceVector,
};
use crate::error::{Error, Result};
use crate::sim::{
    simulate, AcceleratorConfig, DesignPoint, IssueMode, SimResult, SystemConfig,
    DEFAULT_DIVIDER_LATENCY, DEFAULT_UNITS,
};
use crate::workload::WorkloadProfile;

/// Clock frequency as a function of divider pipeline depth.
///
/// Deeper divider pipelines shorten the critical path, so frequency grows
/// with depth. How much is not measured anywhere; the default is a linear
/// ramp from the reference depth to twice the base frequency at
/// `stages_to_max` extra stages, capped there. Speculative, and therefore
/// configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyModel {
    pub base_hz: f64,
    /// Depth at which the clock equals `base_hz`.
    pub base_latency: u64,
    /// Cap on the frequency gain factor.
    pub max_factor: f64,
    /// Extra stages needed to reach `max_factor`.
    pub stages_to_max: u64,
}

impl Default for FrequencyModel {
    fn default() -> Self {
        FrequencyModel {
            base_hz: 60e6,
            base_latency: DEFAULT_DIVIDER_LATENCY,
            max_factor: 2.0,
            stages_to_max: 30,
        }
    }
}

impl FrequencyModel {
    /// Monotone non-decreasing in `latency`, capped at `max_factor`.
    pub fn f_clk(&self, latency: u64) -> f64 {
        let extra = latency.saturating_sub(self.base_latency) as f64;
        let factor = (1.0 + extra / self.stages_to_max as f64).min(self.max_factor);
        self.base_hz * factor
    }

    pub fn validate(&self) -> Result<()> {
        if self.base_hz <= 0.0 || self.max_factor < 1.0 || self.stages_to_max == 0 {
            return Err(Error::domain("invalid frequency model"));
        }
        Ok(())
    }
}

/// The lattice of configurations to evaluate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpace {
    pub units: Vec<u64>,
    pub latencies: Vec<u64>,
    pub cores: Vec<u32>,
    #[serde(default)]
    pub frequency: FrequencyModel,
}

impl Default for SweepSpace {
    fn default() -> Self {
        SweepSpace {
            units: vec![DEFAULT_UNITS],
            latencies: vec![DEFAULT_DIVIDER_LATENCY],
            cores: vec![1, 2, 4, 8, 16, 24, 32],
            frequency: FrequencyModel::default(),
        }
    }
}

impl SweepSpace {
    pub fn validate(&self) -> Result<()> {
        if self.units.is_empty() || self.latencies.is_empty() || self.cores.is_empty() {
            return Err(Error::domain("sweep ranges must be non-empty"));
        }
        if self.units.contains(&0) || self.latencies.contains(&0) || self.cores.contains(&0) {
            return Err(Error::domain("sweep ranges must be positive"));
        }
        self.frequency.validate()
    }
}

/// One evaluated lattice point.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignPointResult {
    pub config: SystemConfig,
    pub sim: SimResult,
    pub resources: ResourceVector,
    /// Every resource fits the device capacity.
    pub feasible: bool,
    /// Power came from the linear fit, not a measurement.
    pub power_extrapolated: bool,
}

/// The canonical five-design progression: baseline software core, custom
/// instruction, ten-unit block, pipelined issue, and the 8-core system.
pub fn design_progression(f_clk_hz: f64, workload_scale: f64) -> Vec<SystemConfig> {
    let mut configs: Vec<SystemConfig> = [
        (DesignPoint::Baseline, 1),
        (DesignPoint::CustomInstruction, 1),
        (DesignPoint::MultiUnit, 1),
        (DesignPoint::Pipelined, 1),
        (DesignPoint::MultiCore, 8),
    ]
    .into_iter()
    .map(|(design, cores)| SystemConfig::for_design(design, cores, f_clk_hz))
    .collect();
    for config in &mut configs {
        config.workload_scale = workload_scale;
    }
    configs
}

/// Evaluates every lattice point of the sweep space: cores = 1 is the
/// pipelined single-core design, cores >= 2 the multicore system.
///
/// Results come back in lexicographic (cores, units, latency) order and are
/// a pure function of the inputs, so any evaluation order or degree of
/// parallelism produces the same set.
pub fn sweep(
    space: &SweepSpace,
    profile: &WorkloadProfile,
    power: &PowerModel,
    resources: &ResourceModel,
    workload_scale: f64,
) -> Result<Vec<DesignPointResult>> {
    space.validate()?;
    let mut sorted_cores = space.cores.clone();
    sorted_cores.sort_unstable();
    let mut sorted_units = space.units.clone();
    sorted_units.sort_unstable();
    let mut sorted_latencies = space.latencies.clone();
    sorted_latencies.sort_unstable();

    let mut results = Vec::new();
    for &cores in &sorted_cores {
        for &units in &sorted_units {
            for &latency in &sorted_latencies {
                let design = if cores == 1 {
                    DesignPoint::Pipelined
                } else {
                    DesignPoint::MultiCore
                };
                let mut config = SystemConfig::for_design(design, cores, space.frequency.f_clk(latency));
                config.workload_scale = workload_scale;
                config.accel = Some(AcceleratorConfig {
                    divider_latency: latency,
                    units,
                    block_size: units,
                    issue_mode: IssueMode::PipelinedIssue,
                    ..AcceleratorConfig::pipelined(units)
                });
                let measured_config =
                    units == DEFAULT_UNITS && latency == DEFAULT_DIVIDER_LATENCY;
                let (p_dyn_w, power_extrapolated) =
                    power_of_extrapolated(&config, power, measured_config);
                let sim = simulate(profile, &config, p_dyn_w)?;
                let used = resources_with_units(cores, units as f64, resources)?;
                let feasible = used.fits_within(&resources.capacity);
                results.push(DesignPointResult {
                    config,
                    sim,
                    resources: used,
                    feasible,
                    power_extrapolated,
                });
            }
        }
    }
    Ok(results)
}

/// Largest core count whose resources fit the device in every dimension.
/// Returns 0 when even a single core does not fit.
pub fn max_cores_fit(model: &ResourceModel) -> Result<u32> {
    let single = resources_with_units(1, model.ci_reference_units, model)?;
    let double = resources_with_units(2, model.ci_reference_units, model)?;
    let increment = ResourceVector {
        luts: double.luts - single.luts,
        ffs: double.ffs - single.ffs,
        memory_bits: double.memory_bits - single.memory_bits,
        dsps: double.dsps - single.dsps,
    };
    if increment.luts <= 0.0
        && increment.ffs <= 0.0
        && increment.memory_bits <= 0.0
        && increment.dsps <= 0.0
    {
        return Err(Error::domain("per-core incremental cost must be positive somewhere"));
    }
    let mut fit = 0u32;
    let mut cores = 1u32;
    loop {
        let used = resources_with_units(cores, model.ci_reference_units, model)?;
        if !used.fits_within(&model.capacity) {
            break;
        }
        fit = cores;
        cores += 1;
    }
    Ok(fit)
}

fn dominates(a: &DesignPointResult, b: &DesignPointResult) -> bool {
    let at_least_as_good = a.sim.mops_per_watt >= b.sim.mops_per_watt && a.sim.time_s <= b.sim.time_s;
    let strictly_better = a.sim.mops_per_watt > b.sim.mops_per_watt || a.sim.time_s < b.sim.time_s;
    at_least_as_good && strictly_better
}

/// Marks each result as Pareto-optimal or not under (maximize MOPS/W,
/// minimize time) among the feasible results. Infeasible results are never
/// on the front.
pub fn pareto_flags(results: &[DesignPointResult]) -> Vec<bool> {
    results
        .iter()
        .map(|candidate| {
            candidate.feasible
                && !results
                    .iter()
                    .any(|other| other.feasible && dominates(other, candidate))
        })
        .collect()
}

/// The non-dominated feasible results, in input order.
pub fn pareto_front(results: &[DesignPointResult]) -> Vec<&DesignPointResult> {
    pareto_flags(results)
        .into_iter()
        .zip(results)
        .filter_map(|(keep, r)| keep.then_some(r))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calibration::{Dataset, PowerMode};
    use crate::workload::PrimalityMode;

    fn test_profile() -> WorkloadProfile {
        Dataset::embedded().accounted_profile().unwrap()
    }

    fn small_profile() -> WorkloadProfile {
        WorkloadProfile {
            n: 1002,
            range_start: 2,
            mode: PrimalityMode::PaperFaithful,
            candidates: 1000,
            total_iterations: 5_000_000,
            ops_per_iteration: 1.0,
            total_ops: 5_000_000.0,
        }
    }

    #[test]
    fn frequency_model_is_monotone_and_capped() {
        let f = FrequencyModel::default();
        assert_eq!(f.f_clk(5), 60e6);
        assert!((f.f_clk(35) / 120e6 - 1.0).abs() < 1e-12);
        assert_eq!(f.f_clk(50), 120e6);
        let mut prev = 0.0;
        for latency in 1..60 {
            let cur = f.f_clk(latency);
            assert!(cur >= prev);
            prev = cur;
        }
    }

    #[test]
    fn singleton_space_yields_one_result() {
        let ds = Dataset::embedded();
        let space = SweepSpace {
            units: vec![10],
            latencies: vec![5],
            cores: vec![8],
            frequency: FrequencyModel::default(),
        };
        let results = sweep(
            &space,
            &test_profile(),
            &ds.power_model(PowerMode::Lookup).unwrap(),
            &ds.resource_model().unwrap(),
            1.0,
        )
        .unwrap();
        assert_eq!(results.len(), 1);
        assert!(!results[0].power_extrapolated);
        assert!(results[0].feasible);
    }

    #[test]
    fn more_cores_never_slower() {
        let ds = Dataset::embedded();
        let space = SweepSpace {
            units: vec![10],
            latencies: vec![5],
            cores: vec![8, 16, 24],
            frequency: FrequencyModel::default(),
        };
        let results = sweep(
            &space,
            &test_profile(),
            &ds.power_model(PowerMode::Lookup).unwrap(),
            &ds.resource_model().unwrap(),
            1.0,
        )
        .unwrap();
        assert_eq!(results.len(), 3);
        assert!(results[0].sim.time_s >= results[1].sim.time_s);
        assert!(results[1].sim.time_s >= results[2].sim.time_s);
        // >8 cores has no measured power row
        assert!(results[1].power_extrapolated);
        assert!(results[2].power_extrapolated);
    }

    #[test]
    fn sweep_is_deterministic() {
        let ds = Dataset::embedded();
        let space = SweepSpace {
            units: vec![10, 20],
            latencies: vec![5, 35],
            cores: vec![1, 8],
            frequency: FrequencyModel::default(),
        };
        let power = ds.power_model(PowerMode::Lookup).unwrap();
        let resources = ds.resource_model().unwrap();
        let a = sweep(&space, &small_profile(), &power, &resources, 1.0).unwrap();
        let b = sweep(&space, &small_profile(), &power, &resources, 1.0).unwrap();
        assert_eq!(a.len(), 8);
        assert_eq!(a, b);
    }

    #[test]
    fn max_cores_matches_hand_derivation() {
        let model = Dataset::embedded().resource_model().unwrap();
        let max = max_cores_fit(&model).unwrap();
        // LUTs bind: (capacity - 1-core cost) / per-core cost + 1
        let expected = ((model.capacity.luts - 20_047.0) / 13_017.0).floor() as u32 + 1;
        assert_eq!(max, expected);
        assert!(max >= 24);
    }

    #[test]
    fn capacity_fixed_point_and_infeasible() {
        let mut model = Dataset::embedded().resource_model().unwrap();
        model.capacity = resources_with_units(8, model.ci_reference_units, &model).unwrap();
        assert_eq!(max_cores_fit(&model).unwrap(), 8);

        model.capacity.luts = 1.0;
        assert_eq!(max_cores_fit(&model).unwrap(), 0);
    }

    fn synthetic(time_s: f64, mops: f64, feasible: bool) -> DesignPointResult {
        let config = SystemConfig::for_design(DesignPoint::Pipelined, 1, 60e6);
        DesignPointResult {
            config,
            sim: SimResult {
                cycles: 1,
                time_s,
                p_dyn_w: 1.0,
                mops_per_watt: mops,
                speedup_vs: Default::default(),
            },
            resources: ResourceVector::default(),
            feasible,
            power_extrapolated: false,
        }
    }

    #[test]
    fn pareto_front_rules() {
        let single = vec![synthetic(1.0, 1.0, true)];
        assert_eq!(pareto_front(&single).len(), 1);

        let dominated = vec![synthetic(1.0, 10.0, true), synthetic(2.0, 5.0, true)];
        let front = pareto_front(&dominated);
        assert_eq!(front.len(), 1);
        assert_eq!(front[0].sim.time_s, 1.0);

        // a trade-off keeps both
        let tradeoff = vec![synthetic(1.0, 5.0, true), synthetic(2.0, 10.0, true)];
        assert_eq!(pareto_front(&tradeoff).len(), 2);

        // infeasible points never make the front
        let infeasible = vec![synthetic(0.5, 20.0, false), synthetic(1.0, 10.0, true)];
        let front = pareto_front(&infeasible);
        assert_eq!(front.len(), 1);
        assert!(front[0].feasible);
    }

    #[test]
    fn progression_front_keeps_fastest_most_efficient() {
        // With measured power the 8-core point has both the lowest time and
        // the highest MOPS/W, so it dominates the whole progression.
        let ds = Dataset::embedded();
        let power = ds.power_model(PowerMode::Lookup).unwrap();
        let resources = ds.resource_model().unwrap();
        let profile = test_profile();
        let results: Vec<DesignPointResult> = design_progression(60e6, 1.0)
            .into_iter()
            .map(|config| {
                let w = crate::calibration::power_of(&config, &power).unwrap();
                let sim = simulate(&profile, &config, w).unwrap();
                let used = resources_with_units(config.cores, 10.0, &resources).unwrap();
                let feasible = used.fits_within(&resources.capacity);
                DesignPointResult {
                    config,
                    sim,
                    resources: used,
                    feasible,
                    power_extrapolated: false,
                }
            })
            .collect();
        let flags = pareto_flags(&results);
        // baseline is dominated, the multicore point is not
        assert!(!flags[0]);
        assert!(flags[4]);
        let front = pareto_front(&results);
        assert_eq!(front.len(), 1);
        assert_eq!(front[0].config.design_point, DesignPoint::MultiCore);
    }
}
