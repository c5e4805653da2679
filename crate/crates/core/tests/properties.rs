//! Property tests for the model invariants: algebraic identities of the
//! greenness equations, partition completeness, order independence,
//! determinism, functional equivalence, and Pareto soundness.

use proptest::prelude::*;

use greencore::calibration::ResourceVector;
use greencore::dse::{pareto_flags, pareto_front, DesignPointResult};
use greencore::energy::{self, ProcessorSpec};
use greencore::report::fmt_sig6;
use greencore::sim::{
    check_candidate_functional, simulate, AcceleratorConfig, DesignPoint, SimResult, SystemConfig,
};
use greencore::workload::{
    count_primes, count_primes_partitioned, is_prime, partition_range, profile, PartitionScheme,
    PrimalityMode, WorkloadProfile,
};

fn arb_spec() -> impl Strategy<Value = ProcessorSpec> {
    (
        1e6..5e9f64,     // f_clk
        0.1..8.0f64,     // opc
        0.7..1.5f64,     // voltage
        1e5..2e8f64,     // transistors
        0.01..1.0f64,    // alpha
        1e-18..1e-14f64, // capacitance
        0.0..1e-6f64,    // leakage
    )
        .prop_map(|(f_clk_hz, opc, voltage_v, transistors, alpha, cap, i_leak)| ProcessorSpec {
            name: "prop".into(),
            f_clk_hz,
            opc,
            voltage_v,
            transistors,
            process_node_nm: 40.0,
            c_pn: 1.0,
            alpha: Some(alpha),
            capacitance_f: Some(cap),
            i_leakage_a: i_leak,
        })
}

proptest! {
    #[test]
    fn greenness_times_power_is_throughput(spec in arb_spec()) {
        let product = spec.greenness_full().unwrap() * spec.power_total().unwrap();
        let throughput = spec.throughput().unwrap();
        prop_assert!((product / throughput - 1.0).abs() < 1e-9);
    }

    #[test]
    fn k_tec_round_trips_alpha_c(spec in arb_spec()) {
        let g_dyn = spec.greenness_dynamic().unwrap();
        let k = energy::k_tec(spec.opc, g_dyn, spec.voltage_v, spec.transistors).unwrap();
        let alpha_c = spec.alpha.unwrap() * spec.capacitance_f.unwrap();
        prop_assert!((k / alpha_c - 1.0).abs() < 1e-9);
    }

    #[test]
    fn dynamic_greenness_bounds_full(spec in arb_spec()) {
        prop_assert!(spec.greenness_dynamic().unwrap() >= spec.greenness_full().unwrap());
    }

    #[test]
    fn greenness_full_increases_with_frequency(spec in arb_spec(), factor in 1.01..10.0f64) {
        // fixed positive leakage: finishing faster dilutes static energy
        let mut slow = spec;
        slow.i_leakage_a = slow.i_leakage_a.max(1e-9);
        let mut fast = slow.clone();
        fast.f_clk_hz *= factor;
        prop_assert!(fast.greenness_full().unwrap() > slow.greenness_full().unwrap());
    }

    #[test]
    fn partitions_cover_range_disjointly(
        n in 4..5_000u64,
        cores in 1..16u32,
        scheme_interleaved in any::<bool>(),
    ) {
        let scheme = if scheme_interleaved {
            PartitionScheme::Interleaved
        } else {
            PartitionScheme::Block
        };
        let parts = partition_range(n, cores, scheme).unwrap();
        let mut seen = vec![false; n as usize];
        for part in &parts {
            prop_assert_eq!(part.candidates().count() as u64, part.candidate_count());
            for v in part.candidates() {
                prop_assert!(v >= 2 && v < n);
                prop_assert!(!seen[v as usize], "candidate {} assigned twice", v);
                seen[v as usize] = true;
            }
        }
        prop_assert!(seen[2..].iter().all(|&s| s));
    }

    #[test]
    fn partitioned_counts_match_direct(
        n in 4..3_000u64,
        cores in 1..12u32,
        faithful in any::<bool>(),
    ) {
        let mode = if faithful { PrimalityMode::PaperFaithful } else { PrimalityMode::Corrected };
        let direct = count_primes(n, mode);
        for scheme in [PartitionScheme::Block, PartitionScheme::Interleaved] {
            let parts = partition_range(n, cores, scheme).unwrap();
            prop_assert_eq!(count_primes_partitioned(&parts, mode), direct);
        }
    }

    #[test]
    fn profiles_are_deterministic(n in 4..2_000u64, faithful in any::<bool>()) {
        let mode = if faithful { PrimalityMode::PaperFaithful } else { PrimalityMode::Corrected };
        let a = profile(n, mode, 1.5).unwrap();
        let b = profile(n, mode, 1.5).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.total_ops.to_bits(), b.total_ops.to_bits());
    }

    #[test]
    fn functional_verdict_matches_listing(
        v in 0..1_000_000u64,
        units in 1..32u64,
        latency in 1..36u64,
        pipelined in any::<bool>(),
    ) {
        let mut config = if pipelined {
            AcceleratorConfig::pipelined(units)
        } else {
            AcceleratorConfig::multi_unit(units)
        };
        config.divider_latency = latency;
        prop_assert_eq!(
            check_candidate_functional(v, &config),
            is_prime(v, PrimalityMode::PaperFaithful)
        );
    }

    #[test]
    fn simulation_is_deterministic_and_ordered(
        candidates in 1..5_000u64,
        iterations_each in 1_000..200_000u64,
    ) {
        let profile = WorkloadProfile {
            n: 2 + candidates,
            range_start: 2,
            mode: PrimalityMode::PaperFaithful,
            candidates,
            total_iterations: candidates * iterations_each,
            ops_per_iteration: 1.0,
            total_ops: (candidates * iterations_each) as f64,
        };
        let run = |design, cores| {
            let sys = SystemConfig::for_design(design, cores, 60e6);
            simulate(&profile, &sys, 1.0).unwrap()
        };
        let baseline = run(DesignPoint::Baseline, 1);
        prop_assert_eq!(&baseline, &run(DesignPoint::Baseline, 1));
        let custom = run(DesignPoint::CustomInstruction, 1);
        let multi_unit = run(DesignPoint::MultiUnit, 1);
        let pipelined = run(DesignPoint::Pipelined, 1);
        let multicore = run(DesignPoint::MultiCore, 8);
        prop_assert!(baseline.cycles >= custom.cycles);
        prop_assert!(custom.cycles >= multi_unit.cycles);
        prop_assert!(multi_unit.cycles >= pipelined.cycles);
        prop_assert!(pipelined.cycles >= multicore.cycles);
        // speedup never exceeds the core count
        let speedup = pipelined.time_s / multicore.time_s;
        prop_assert!(speedup <= 8.0 + 1e-9);
    }

    #[test]
    fn sig6_parses_back(x in -1e20..1e20f64) {
        let printed = fmt_sig6(x);
        let parsed: f64 = printed.parse().unwrap();
        if x != 0.0 {
            prop_assert!(((parsed - x) / x).abs() < 1e-5, "{} -> {}", x, printed);
        }
        prop_assert_eq!(printed.clone(), fmt_sig6(x));
    }
}

fn synthetic_results(points: &[(f64, f64, bool)]) -> Vec<DesignPointResult> {
    points
        .iter()
        .map(|&(time_s, mops, feasible)| DesignPointResult {
            config: SystemConfig::for_design(DesignPoint::Pipelined, 1, 60e6),
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
        })
        .collect()
}

proptest! {
    #[test]
    fn pareto_front_is_sound(
        points in prop::collection::vec((0.1..100.0f64, 0.1..100.0f64, any::<bool>()), 1..40)
    ) {
        let results = synthetic_results(&points);
        let flags = pareto_flags(&results);
        let front = pareto_front(&results);
        prop_assert_eq!(front.len(), flags.iter().filter(|&&f| f).count());
        for member in &front {
            prop_assert!(member.feasible);
            for other in results.iter().filter(|r| r.feasible) {
                let dominates = other.sim.mops_per_watt >= member.sim.mops_per_watt
                    && other.sim.time_s <= member.sim.time_s
                    && (other.sim.mops_per_watt > member.sim.mops_per_watt
                        || other.sim.time_s < member.sim.time_s);
                prop_assert!(!dominates);
            }
        }
        // every feasible non-member is dominated by some front member
        for (result, on_front) in results.iter().zip(&flags) {
            if result.feasible && !on_front {
                let dominated = front.iter().any(|m| {
                    m.sim.mops_per_watt >= result.sim.mops_per_watt
                        && m.sim.time_s <= result.sim.time_s
                        && (m.sim.mops_per_watt > result.sim.mops_per_watt
                            || m.sim.time_s < result.sim.time_s)
                });
                prop_assert!(dominated);
            }
        }
    }
}
