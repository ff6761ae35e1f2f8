//! Loss-scaling comparison between sequential component meshes and a
//! fixed-efficiency single-projection readout.

use crate::error::{Error, Result};

/// Inputs for one loss-scaling comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfficiencyScenario {
    /// Per-step transmission of the sequential architecture.
    pub step_efficiency: f64,
    /// Fixed end-to-end efficiency of the single-projection approach.
    pub total_efficiency: f64,
    pub steps: u64,
}

fn check_unit_interval(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() || value <= 0.0 || value >= 1.0 {
        return Err(Error::invalid(
            name,
            format!("must lie strictly inside (0, 1), got {value}"),
        ));
    }
    Ok(())
}

/// Smallest step count n ≥ 1 at which the sequential architecture's
/// accumulated transmission eta^n drops strictly below `total`.
pub fn crossover_steps(eta: f64, total: f64) -> Result<u64> {
    check_unit_interval("eta", eta)?;
    check_unit_interval("total", total)?;
    // log estimate, then settle the strict boundary with exact powers
    let estimate = total.ln() / eta.ln();
    let mut n = (estimate.floor() as i64 - 2).max(1) as u64;
    loop {
        if eta.powi(n as i32) < total {
            return Ok(n);
        }
        n += 1;
    }
}

/// Per-step efficiency a sequential architecture needs to retain
/// `total` end-to-end transmission over n steps: total^(1/n).
pub fn required_step_efficiency(n: u64, total: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("n", "step count must be >= 1"));
    }
    check_unit_interval("total", total)?;
    Ok(total.powf(1.0 / n as f64))
}

/// Beam-splitter count of a minimal triangular/rectangular mesh for a
/// d×d unitary: d(d−1)/2.
pub fn mesh_component_count(d: u64) -> Result<u64> {
    if d == 0 {
        return Err(Error::invalid("d", "mode count must be >= 1"));
    }
    Ok(d * (d - 1) / 2)
}
