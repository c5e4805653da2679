//! Greenness (energy-efficiency) equations for hard- and soft-core processors.
//!
//! Greenness `G` is operations per second per watt, equivalently operations
//! per joule. The module relates it to the architectural parameters that
//! drive it: operations per cycle, clock frequency, transistor count,
//! activity factor, effective load capacitance, supply voltage, and leakage.
//! All quantities are SI (Hz, W, F); display scaling (GIPS/W, MOPS/W, MTr)
//! is the report layer's job.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical and architectural parameters of one processor.
///
/// `alpha` (activity factor) and `capacitance_f` cannot usually be measured
/// directly, so they are optional; operations that need them fail fast with
/// a configuration error instead of assuming values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProcessorSpec {
    pub name: String,
    /// Clock frequency in Hz.
    pub f_clk_hz: f64,
    /// Operations per cycle.
    pub opc: f64,
    /// Supply voltage in volts.
    pub voltage_v: f64,
    /// Transistor count N.
    pub transistors: f64,
    /// Process node in nanometers.
    pub process_node_nm: f64,
    /// Relative process-node capacitance factor (1.0 = reference node).
    pub c_pn: f64,
    /// Activity factor in (0, 1].
    #[serde(default)]
    pub alpha: Option<f64>,
    /// Effective load capacitance in farads.
    #[serde(default)]
    pub capacitance_f: Option<f64>,
    /// Leakage current in amperes.
    #[serde(default)]
    pub i_leakage_a: f64,
}

impl ProcessorSpec {
    pub fn validate(&self) -> Result<()> {
        if self.f_clk_hz <= 0.0 {
            return Err(Error::domain(format!("{}: f_clk must be > 0", self.name)));
        }
        if self.opc <= 0.0 {
            return Err(Error::domain(format!("{}: opc must be > 0", self.name)));
        }
        if self.voltage_v <= 0.0 {
            return Err(Error::domain(format!("{}: voltage must be > 0", self.name)));
        }
        if self.transistors < 1.0 {
            return Err(Error::domain(format!("{}: transistors must be >= 1", self.name)));
        }
        if self.c_pn <= 0.0 {
            return Err(Error::domain(format!("{}: c_pn must be > 0", self.name)));
        }
        if let Some(a) = self.alpha {
            if a <= 0.0 || a > 1.0 {
                return Err(Error::domain(format!("{}: alpha must be in (0, 1]", self.name)));
            }
        }
        if let Some(c) = self.capacitance_f {
            if c <= 0.0 {
                return Err(Error::domain(format!("{}: capacitance must be > 0", self.name)));
            }
        }
        if self.i_leakage_a < 0.0 {
            return Err(Error::domain(format!("{}: leakage must be >= 0", self.name)));
        }
        Ok(())
    }

    fn alpha_and_capacitance(&self) -> Result<(f64, f64)> {
        let alpha = self.alpha.ok_or_else(|| {
            Error::config(format!("{}: activity factor (alpha) not set", self.name))
        })?;
        let cap = self.capacitance_f.ok_or_else(|| {
            Error::config(format!("{}: effective capacitance not set", self.name))
        })?;
        Ok((alpha, cap))
    }

    /// Operations per second: OPC · f_clk.
    pub fn throughput(&self) -> Result<f64> {
        self.validate()?;
        throughput(self.opc, self.f_clk_hz)
    }

    /// Total power: N·α·f_clk·C·V² dynamic plus N·V·I_leakage static, in watts.
    pub fn power_total(&self) -> Result<f64> {
        self.validate()?;
        let (alpha, cap) = self.alpha_and_capacitance()?;
        let v = self.voltage_v;
        let dynamic = self.transistors * alpha * self.f_clk_hz * cap * v * v;
        let statik = self.transistors * v * self.i_leakage_a;
        Ok(dynamic + statik)
    }

    /// Greenness with both power terms:
    /// OPC / (N·(α·C·V² + V·I_leakage/f_clk)), in ops/W.
    ///
    /// Algebraically identical to `throughput() / power_total()`.
    pub fn greenness_full(&self) -> Result<f64> {
        self.validate()?;
        let (alpha, cap) = self.alpha_and_capacitance()?;
        let v = self.voltage_v;
        let per_transistor = alpha * cap * v * v + v * self.i_leakage_a / self.f_clk_hz;
        Ok(self.opc / (self.transistors * per_transistor))
    }

    /// Greenness ignoring static power: OPC / (N·α·C·V²), in ops/W.
    pub fn greenness_dynamic(&self) -> Result<f64> {
        self.validate()?;
        let (alpha, cap) = self.alpha_and_capacitance()?;
        let v = self.voltage_v;
        Ok(self.opc / (self.transistors * alpha * cap * v * v))
    }
}

/// One benchmark execution on a processor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasuredRun {
    /// Name of the processor the run executed on.
    pub processor: String,
    /// Abstract operations executed.
    pub ops_executed: f64,
    pub time_s: f64,
    pub p_dyn_w: f64,
    #[serde(default = "one")]
    pub threads: u32,
}

fn one() -> u32 {
    1
}

impl MeasuredRun {
    pub fn validate(&self) -> Result<()> {
        if self.ops_executed <= 0.0 || self.time_s <= 0.0 || self.p_dyn_w <= 0.0 {
            return Err(Error::domain(format!(
                "{}: ops, time and power must all be > 0",
                self.processor
            )));
        }
        Ok(())
    }

    pub fn greenness(&self) -> Result<f64> {
        self.validate()?;
        greenness(self.ops_executed, self.time_s, self.p_dyn_w)
    }
}

/// Greenness of a measured run: (ops/time)/power, i.e. operations per joule.
pub fn greenness(ops: f64, time_s: f64, power_w: f64) -> Result<f64> {
    if ops <= 0.0 || time_s <= 0.0 || power_w <= 0.0 {
        return Err(Error::domain("greenness requires ops, time, power > 0"));
    }
    Ok(ops / time_s / power_w)
}

/// Operations per second from operations per cycle and clock frequency.
pub fn throughput(opc: f64, f_clk_hz: f64) -> Result<f64> {
    if opc <= 0.0 || f_clk_hz <= 0.0 {
        return Err(Error::domain("throughput requires opc, f_clk > 0"));
    }
    Ok(opc * f_clk_hz)
}

/// Technology factor K_tec = OPC / (G_dyn·V²·N), the inferred product α·C
/// of activity factor and effective load capacitance, in farads.
///
/// Back-computed from measured dynamic greenness; exposes what the
/// architecture and fabric cost per transistor once voltage and transistor
/// count are factored out.
pub fn k_tec(opc: f64, g_dyn: f64, voltage_v: f64, transistors: f64) -> Result<f64> {
    if opc <= 0.0 || g_dyn <= 0.0 || voltage_v <= 0.0 || transistors <= 0.0 {
        return Err(Error::domain("k_tec requires all inputs > 0"));
    }
    Ok(opc / (g_dyn * voltage_v * voltage_v * transistors))
}

/// K_tec of each entry relative to a named reference entry (reference -> 1).
pub fn relative_k_tec(entries: &[(String, f64)], reference: &str) -> Result<Vec<(String, f64)>> {
    let reference_value = entries
        .iter()
        .find(|(name, _)| name == reference)
        .map(|(_, k)| *k)
        .ok_or_else(|| Error::lookup(format!("reference processor '{reference}' not in list")))?;
    if reference_value <= 0.0 {
        return Err(Error::domain("reference k_tec must be > 0"));
    }
    Ok(entries
        .iter()
        .map(|(name, k)| (name.clone(), k / reference_value))
        .collect())
}

/// Removes the process-node contribution from a relative K_tec value.
pub fn normalize_process_node(rel_k_tec: f64, c_pn: f64) -> Result<f64> {
    if c_pn <= 0.0 {
        return Err(Error::domain("c_pn must be > 0"));
    }
    Ok(rel_k_tec / c_pn)
}

/// Transistor cost per FPGA resource, used to turn synthesis results into an
/// equivalent transistor count N.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransistorBudget {
    pub per_logic_cell: f64,
    pub per_memory_bit: f64,
}

impl Default for TransistorBudget {
    fn default() -> Self {
        TransistorBudget {
            per_logic_cell: 1000.0,
            per_memory_bit: 4.0,
        }
    }
}

impl TransistorBudget {
    pub fn estimate(&self, logic_cells: f64, memory_bits: f64) -> Result<f64> {
        if logic_cells < 0.0 || memory_bits < 0.0 {
            return Err(Error::domain("resource counts must be >= 0"));
        }
        Ok(logic_cells * self.per_logic_cell + memory_bits * self.per_memory_bit)
    }
}

/// Equivalent transistor count with the default per-resource costs.
pub fn estimate_transistors(logic_cells: f64, memory_bits: f64) -> Result<f64> {
    TransistorBudget::default().estimate(logic_cells, memory_bits)
}
