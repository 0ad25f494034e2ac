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

//! Causal decoupling: estimate each term as a product of independently
//! sampled light-cone components.

use std::time::Instant;

use crate::allocation::{causal_worst_case, plan_causal, ShotPlan, DEFAULT_DELTA};
use crate::circuit::{cluster_weight, ClusteredCircuit, Observable};
use crate::error::{Error, Result};
use crate::lightcone::{pauli_lightcone, LightCone};
use crate::report::{
    ComponentEstimate, DeviceReport, EstimateReport, Method, ShotLedger, TermReport, Timing, SCHEMA_VERSION,
};
use crate::sampling::{ShotStream, StreamId};
use crate::statevector::{Oracle, OracleLimits};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CausalConfig {
    pub epsilon: f64,
    pub delta: f64,
    pub limits: OracleLimits,
}

impl CausalConfig {
    pub fn new(epsilon: f64) -> Self {
        CausalConfig {
            epsilon,
            delta: DEFAULT_DELTA,
            limits: OracleLimits::default(),
        }
    }
}

fn check_factors(mus: &[f64], shots: &[u64]) -> Result<()> {
    if mus.is_empty() || mus.len() != shots.len() {
        return Err(Error::Domain(format!(
            "need matching nonempty lists, got {} values and {} shot counts",
            mus.len(),
            shots.len()
        )));
    }
    if let Some(m) = mus.iter().find(|m| !(m.is_finite() && m.abs() <= 1.0 + 1e-12)) {
        return Err(Error::Domain(format!("expectation {m} outside [-1, 1]")));
    }
    if shots.contains(&0) {
        return Err(Error::Domain("shot counts must be at least 1".into()));
    }
    Ok(())
}

/// `Σ_i (1 − μ_i²)/K_i`, an upper bound on the variance of `Π_i μ̃_i`.
pub fn variance_bound_product(mus: &[f64], shots: &[u64]) -> Result<f64> {
    check_factors(mus, shots)?;
    Ok(mus
        .iter()
        .zip(shots)
        .map(|(m, &k)| (1.0 - m * m).max(0.0) / k as f64)
        .sum())
}

/// Exact variance `Π(μ_i² + (1 − μ_i²)/K_i) − Π μ_i²` of the product of independent sample means.
pub fn exact_product_variance(mus: &[f64], shots: &[u64]) -> Result<f64> {
    check_factors(mus, shots)?;
    let second: f64 = mus
        .iter()
        .zip(shots)
        .map(|(m, &k)| m * m + (1.0 - m * m).max(0.0) / k as f64)
        .product();
    let first: f64 = mus.iter().map(|m| m * m).product();
    Ok(second - first)
}

#[derive(Debug, Clone)]
struct PreparedComponent {
    clusters: Vec<usize>,
    device_qubits: usize,
    exact: f64,
}

#[derive(Debug, Clone)]
struct PreparedTerm {
    coefficient: f64,
    pauli: String,
    identity: bool,
    size: usize,
    volume: usize,
    range: usize,
    components: Vec<PreparedComponent>,
    /// Whole-cone oracle value, independent of the factorization.
    exact: Option<f64>,
}

/// Outcome of one sampled run.
#[derive(Debug, Clone, PartialEq)]
pub struct CausalRun {
    pub estimate: f64,
    pub term_estimates: Vec<f64>,
    pub components: Vec<ComponentEstimate>,
}

/// Causal-decoupling estimator with exact component values precomputed, so
/// repeated runs only draw shots.
#[derive(Debug, Clone)]
pub struct CausalEstimator {
    config: CausalConfig,
    plan: ShotPlan,
    terms: Vec<PreparedTerm>,
    worst_case: f64,
    qubit_ceiling: Option<usize>,
    max_device_qubits: usize,
    depth: usize,
}

/// `s·d·(2R+1)^D` for a term touching `s` clusters with cone range `R`.
pub fn causal_qubit_ceiling(circuit: &ClusteredCircuit, s: usize, range: usize) -> Option<usize> {
    let layout = circuit.layout();
    let dim = layout.dimension()? as u32;
    Some(s * layout.cluster_size() * (2 * range + 1).pow(dim))
}

impl CausalEstimator {
    pub fn prepare(circuit: &ClusteredCircuit, obs: &Observable, config: CausalConfig) -> Result<Self> {
        obs.check_within(circuit.layout())?;
        let cones: Vec<LightCone> = obs
            .terms()
            .iter()
            .map(|t| pauli_lightcone(circuit, &t.pauli))
            .collect::<Result<_>>()?;
        let plan = plan_causal(obs, &cones, config.epsilon, config.delta)?;
        let oracle = Oracle::new(config.limits);
        let layout = circuit.layout();
        let mut terms = Vec::with_capacity(cones.len());
        let mut qubit_ceiling: Option<usize> = None;
        let mut max_device_qubits = 0;
        for (alpha, (term, cone)) in obs.terms().iter().zip(&cones).enumerate() {
            let ceiling = causal_qubit_ceiling(circuit, cluster_weight(&term.pauli, layout), cone.range);
            if let Some(c) = ceiling {
                qubit_ceiling = Some(qubit_ceiling.map_or(c, |q| q.max(c)));
            }
            let mut components = Vec::with_capacity(cone.components.len());
            for (i, comp) in cone.components.iter().enumerate() {
                let device_qubits = comp.num_qubits(layout);
                if device_qubits > config.limits.max_state_qubits {
                    return Err(Error::capacity(
                        format!("term {alpha} component {i} ({} clusters)", comp.clusters.len()),
                        device_qubits,
                        config.limits.max_state_qubits,
                    ));
                }
                if let Some(c) = ceiling {
                    assert!(
                        device_qubits <= c,
                        "component of {device_qubits} qubits exceeds the ceiling {c}"
                    );
                }
                max_device_qubits = max_device_qubits.max(device_qubits);
                components.push(PreparedComponent {
                    clusters: comp.clusters.iter().copied().collect(),
                    device_qubits,
                    exact: oracle.exact_expectation(&comp.circuit, &comp.pauli)?,
                });
            }
            let exact = if cone.identity {
                Some(1.0)
            } else {
                oracle.exact_expectation(&cone.restricted, &term.pauli).ok()
            };
            terms.push(PreparedTerm {
                coefficient: term.coefficient,
                pauli: term.pauli.to_string(),
                identity: cone.identity,
                size: cone.size(),
                volume: cone.volume,
                range: cone.range,
                components,
                exact,
            });
        }
        let worst_case = causal_worst_case(obs.locality(layout), obs.one_norm(), plan.target_variance);
        Ok(CausalEstimator {
            config,
            plan,
            terms,
            worst_case,
            qubit_ceiling,
            max_device_qubits,
            depth: circuit.depth(),
        })
    }

    pub fn plan(&self) -> &ShotPlan {
        &self.plan
    }

    pub fn config(&self) -> &CausalConfig {
        &self.config
    }

    /// Exact `μ`, when every term's cone fits the oracle.
    pub fn oracle_value(&self) -> Option<f64> {
        self.terms.iter().map(|t| t.exact.map(|e| t.coefficient * e)).sum()
    }

    /// `Σ_α c_α Π_i μ_{α,i}` from the component values.
    pub fn factorized_value(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coefficient * t.components.iter().map(|c| c.exact).product::<f64>())
            .sum()
    }

    fn component_lists(&self, alpha: usize) -> (Vec<f64>, Vec<u64>) {
        let t = &self.terms[alpha];
        let k = self.plan.shots(alpha);
        (
            t.components.iter().map(|c| c.exact).collect(),
            vec![k; t.components.len()],
        )
    }

    /// `Σ_α c_α² Σ_i (1 − μ_{α,i}²)/K_{α,i}`.
    pub fn variance_bound(&self) -> f64 {
        self.per_term_variance(variance_bound_product)
    }

    pub fn variance_exact(&self) -> f64 {
        self.per_term_variance(exact_product_variance)
    }

    fn per_term_variance(&self, f: fn(&[f64], &[u64]) -> Result<f64>) -> f64 {
        (0..self.terms.len())
            .filter(|&a| !self.terms[a].identity)
            .map(|a| {
                let (mus, shots) = self.component_lists(a);
                self.terms[a].coefficient.powi(2) * f(&mus, &shots).expect("validated plan")
            })
            .sum()
    }

    pub fn max_device_qubits(&self) -> usize {
        self.max_device_qubits
    }

    pub fn qubit_ceiling(&self) -> Option<usize> {
        self.qubit_ceiling
    }

    pub fn run(&self, seed: u64) -> CausalRun {
        let mut estimate = 0.0;
        let mut term_estimates = Vec::with_capacity(self.terms.len());
        let mut components = Vec::new();
        for (alpha, term) in self.terms.iter().enumerate() {
            let shots = self.plan.shots(alpha);
            let mut product = 1.0;
            for (i, comp) in term.components.iter().enumerate() {
                let mut stream = ShotStream::new(
                    seed,
                    StreamId::Component {
                        term: alpha,
                        component: i,
                    },
                );
                let mean = stream
                    .sample_pm1((1.0 + comp.exact) / 2.0, shots)
                    .expect("plan assigns at least one shot")
                    .mean;
                product *= mean;
                components.push(ComponentEstimate {
                    term_index: alpha,
                    component_index: i,
                    clusters: comp.clusters.clone(),
                    device_qubits: comp.device_qubits,
                    shots,
                    estimate: mean,
                    exact: Some(comp.exact),
                });
            }
            term_estimates.push(product);
            estimate += term.coefficient * product;
        }
        CausalRun {
            estimate,
            term_estimates,
            components,
        }
    }

    /// Only the aggregate estimate, without bookkeeping.
    pub fn run_estimate(&self, seed: u64) -> f64 {
        let mut estimate = 0.0;
        for (alpha, term) in self.terms.iter().enumerate() {
            let shots = self.plan.shots(alpha);
            let mut product = 1.0;
            for (i, comp) in term.components.iter().enumerate() {
                let mut stream = ShotStream::new(
                    seed,
                    StreamId::Component {
                        term: alpha,
                        component: i,
                    },
                );
                product *= stream
                    .sample_pm1((1.0 + comp.exact) / 2.0, shots)
                    .expect("plan assigns at least one shot")
                    .mean;
            }
            estimate += term.coefficient * product;
        }
        estimate
    }

    pub fn device_report(&self) -> DeviceReport {
        DeviceReport {
            max_device_qubits: self.max_device_qubits,
            qubit_ceiling: self.qubit_ceiling,
            circuit_depth: self.depth,
            hadamard_depth: None,
            hadamard_depth_alt: None,
        }
    }

    pub fn report(&self, seed: u64, run: &CausalRun) -> EstimateReport {
        let oracle = self.oracle_value();
        let terms = self
            .terms
            .iter()
            .enumerate()
            .map(|(alpha, t)| TermReport {
                index: alpha,
                coefficient: t.coefficient,
                pauli: t.pauli.clone(),
                estimate: run.term_estimates[alpha],
                estimate_imag: None,
                exact: t.exact,
                cone_size: t.size,
                cone_volume: t.volume,
                cone_range: t.range,
                components: t.components.len(),
                branches: None,
                tasks: self.plan.terms[alpha].tasks,
                shots_per_task: self.plan.terms[alpha].shots_per_task,
            })
            .collect();
        EstimateReport {
            schema_version: SCHEMA_VERSION,
            kind: "estimate".into(),
            method: Method::CausalDecoupling,
            seed,
            epsilon: self.config.epsilon,
            estimate: run.estimate,
            estimate_imag: None,
            oracle,
            abs_error: oracle.map(|mu| (run.estimate - mu).abs()),
            variance_bound: self.variance_bound(),
            variance_exact: Some(self.variance_exact()),
            empirical_variance: None,
            shots: ShotLedger::from_plan(&self.plan, self.plan.k_tot, self.worst_case),
            device: self.device_report(),
            terms,
            components: run.components.clone(),
            timing: None,
        }
    }
}

/// Run causal decoupling once with default settings.
pub fn estimate_causal_decoupling(
    circuit: &ClusteredCircuit,
    obs: &Observable,
    epsilon: f64,
    seed: u64,
) -> Result<EstimateReport> {
    let start = Instant::now();
    let estimator = CausalEstimator::prepare(circuit, obs, CausalConfig::new(epsilon))?;
    let run = estimator.run(seed);
    let mut report = estimator.report(seed, &run);
    report.timing = Some(Timing::since(start.elapsed()));
    Ok(report)
}
