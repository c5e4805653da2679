//! Energy-efficiency modeling and design-space exploration for
//! many-soft-core systems.
//!
//! The crate has five layers:
//!
//! - [`energy`] — the greenness equations: operations per watt as a function
//!   of OPC, clock frequency, transistor count, activity, capacitance,
//!   voltage, and leakage, plus the inferred technology factor K_tec.
//! - [`workload`] — the prime-counting benchmark's exact semantics
//!   (listing-faithful and corrected), instrumented operation profiling, and
//!   range partitioning for multicore runs.
//! - [`sim`] — a functional datapath model and a cycle-approximate timing
//!   model for the custom-instruction design progression (baseline, custom
//!   instruction, multi-unit, pipelined issue, multicore).
//! - [`calibration`] — embedded reference measurements, the power and
//!   resource models fitted from them, and cross-table consistency checks.
//! - [`dse`] / [`report`] — configuration sweeps with Pareto filtering and
//!   feasibility checks, and deterministic CSV/markdown emitters.

pub mod calibration;
pub mod dse;
pub mod energy;
pub mod error;
pub mod report;
pub mod sim;
pub mod workload;

pub use calibration::{Dataset, PowerMode, PowerModel, ResourceModel, ResourceVector, TableId};
pub use energy::{MeasuredRun, ProcessorSpec, TransistorBudget};
pub use error::{Error, Result};
pub use sim::{AcceleratorConfig, DesignPoint, IssueMode, SimResult, SystemConfig};
pub use workload::{Partition, PartitionScheme, PrimalityMode, WorkloadProfile};
