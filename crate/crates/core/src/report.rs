// Copyright 2026 The lightcone Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Serializable reports emitted by the estimators and the command-line runner.

use std::time::{Duration, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::allocation::ShotPlan;
use crate::resources::{BranchingFit, ConeExtremes, ResourceRow};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    CausalDecoupling,
    AlgebraicDecomposition,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::CausalDecoupling => "causal_decoupling",
            Method::AlgebraicDecomposition => "algebraic_decomposition",
        }
    }
}

/// Sampled estimate of one light-cone component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentEstimate {
    pub term_index: usize,
    pub component_index: usize,
    pub clusters: Vec<usize>,
    pub device_qubits: usize,
    pub shots: u64,
    pub estimate: f64,
    pub exact: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermReport {
    pub index: usize,
    pub coefficient: f64,
    pub pauli: String,
    pub estimate: f64,
    /// Imaginary part of the algebraic estimate (diagnostic).
    pub estimate_imag: Option<f64>,
    pub exact: Option<f64>,
    pub cone_size: usize,
    pub cone_volume: usize,
    pub cone_range: usize,
    pub components: usize,
    /// `N_α` for the algebraic path.
    pub branches: Option<u64>,
    pub tasks: u64,
    pub shots_per_task: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShotLedger {
    /// Shots actually drawn.
    pub k_tot: u64,
    /// Plan total after rounding up.
    pub k_tot_plan: u64,
    /// Closed-form total before rounding.
    pub k_tot_continuous: f64,
    /// Worst-case total from the observable's locality and norm.
    pub k_tot_worst_case: f64,
    pub lambda_sqrt: f64,
    pub k1: Option<f64>,
    pub variance_constant: Option<f64>,
    pub target_variance: f64,
    pub delta: f64,
}

impl ShotLedger {
    pub fn from_plan(plan: &ShotPlan, consumed: u64, worst_case: f64) -> Self {
        ShotLedger {
            k_tot: consumed,
            k_tot_plan: plan.k_tot,
            k_tot_continuous: plan.k_tot_continuous,
            k_tot_worst_case: worst_case,
            lambda_sqrt: plan.lambda_sqrt,
            k1: plan.k1,
            variance_constant: plan.variance_constant,
            target_variance: plan.target_variance,
            delta: plan.delta,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviceReport {
    /// Largest simulated device used.
    pub max_device_qubits: usize,
    /// Qubit ceiling asserted at run time, when one applies.
    pub qubit_ceiling: Option<usize>,
    pub circuit_depth: usize,
    /// Hadamard-test depth `2T + 1` (algebraic path).
    pub hadamard_depth: Option<usize>,
    /// Alternative depth figure `T` for the same circuits (algebraic path).
    pub hadamard_depth_alt: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub wall_time_seconds: f64,
    pub timestamp_unix: u64,
}

impl Timing {
    pub fn since(elapsed: Duration) -> Self {
        Timing {
            wall_time_seconds: elapsed.as_secs_f64(),
            timestamp_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub schema_version: u32,
    pub kind: String,
    pub method: Method,
    pub seed: u64,
    pub epsilon: f64,
    pub estimate: f64,
    pub estimate_imag: Option<f64>,
    pub oracle: Option<f64>,
    pub abs_error: Option<f64>,
    /// Variance bound evaluated at the exact component values.
    pub variance_bound: f64,
    pub variance_exact: Option<f64>,
    pub empirical_variance: Option<f64>,
    pub shots: ShotLedger,
    pub device: DeviceReport,
    pub terms: Vec<TermReport>,
    pub components: Vec<ComponentEstimate>,
    pub timing: Option<Timing>,
}

/// Summary of repeated runs with seeds `seed, seed + 1, …`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyReport {
    pub schema_version: u32,
    pub kind: String,
    pub method: Method,
    pub base_seed: u64,
    pub repetitions: usize,
    pub epsilon: f64,
    pub oracle: Option<f64>,
    pub empirical_mean: f64,
    pub empirical_variance: f64,
    pub variance_bound: f64,
    pub variance_exact: Option<f64>,
    pub successes: Option<usize>,
    pub success_fraction: Option<f64>,
    pub k_tot_per_run: u64,
    pub device: DeviceReport,
    pub estimates: Vec<f64>,
    pub timing: Option<Timing>,
}

impl StudyReport {
    #[allow(clippy::too_many_arguments)]
    pub fn from_estimates(
        method: Method,
        base_seed: u64,
        epsilon: f64,
        oracle: Option<f64>,
        variance_bound: f64,
        variance_exact: Option<f64>,
        k_tot_per_run: u64,
        device: DeviceReport,
        estimates: Vec<f64>,
    ) -> Self {
        let (mean, var) = mean_and_variance(&estimates);
        let successes = oracle.map(|mu| estimates.iter().filter(|e| (*e - mu).abs() <= epsilon).count());
        StudyReport {
            schema_version: SCHEMA_VERSION,
            kind: "study".into(),
            method,
            base_seed,
            repetitions: estimates.len(),
            epsilon,
            oracle,
            empirical_mean: mean,
            empirical_variance: var,
            variance_bound,
            variance_exact,
            successes,
            success_fraction: successes.map(|s| s as f64 / estimates.len() as f64),
            k_tot_per_run,
            device,
            estimates,
            timing: None,
        }
    }
}

/// Sample mean and unbiased sample variance (0 for fewer than two values).
pub fn mean_and_variance(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, 0.0);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 {
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleTerm {
    pub index: usize,
    pub coefficient: f64,
    pub pauli: String,
    pub value: f64,
    pub cone_size: usize,
    pub cone_qubits: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub schema_version: u32,
    pub kind: String,
    pub value: f64,
    pub terms: Vec<OracleTerm>,
    pub timing: Option<Timing>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub kind: String,
    pub extremes: ConeExtremes,
    /// Cut gate instances for per-cluster fragmentation (lattices only).
    pub cut_count: Option<usize>,
    pub range_of_unitary: usize,
    pub rows: Vec<ResourceRow>,
    /// `(T, Size_max)` over circuit prefixes.
    pub size_growth: Vec<(usize, usize)>,
    pub branching_fit: Option<BranchingFit>,
    pub timing: Option<Timing>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_statistics() {
        let (m, v) = mean_and_variance(&[1.0, 2.0, 3.0]);
        assert_eq!(m, 2.0);
        assert_eq!(v, 1.0);
        assert_eq!(mean_and_variance(&[4.0]).1, 0.0);
    }
}
