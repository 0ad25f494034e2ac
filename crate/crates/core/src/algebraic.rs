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

//! Algebraic decomposition: expand every inter-cluster gate of a light cone
//! into local terms and estimate the resulting cross terms with
//! single-cluster Hadamard tests.

use std::time::Instant;

use crate::allocation::{algebraic_worst_case, plan_algebraic, ShotPlan, DEFAULT_DELTA, DEFAULT_VARIANCE_CONSTANT};
use crate::circuit::{ClusteredCircuit, Observable, PauliString};
use crate::error::{Error, Result};
use crate::lightcone::{pauli_lightcone, LightCone};
use crate::linalg::{Matrix, C64, ONE};
use crate::report::{DeviceReport, EstimateReport, Method, ShotLedger, TermReport, Timing, SCHEMA_VERSION};
use crate::sampling::{split_shots, HadamardMode, HadamardTest, ShotStream, StreamId};
use crate::statevector::{GateSequence, LocalGate, Oracle, OracleLimits};

pub const DEFAULT_TASK_BUDGET: u64 = 10_000_000;
/// Largest light-cone volume [`decompose_lightcone_circuit`] will enumerate.
pub const MAX_EXPANSION_VOLUME: usize = 24;

/// Local gate sequences of one cone cluster, one per setting of the inter
/// gates that touch it.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterFactor {
    pub cluster: usize,
    pub qubits: Vec<usize>,
    /// Branch bits of the inter gates touching this cluster, in circuit order.
    pub gate_bits: Vec<usize>,
    /// Indexed by local pattern; bit `p` set means gate `gate_bits[p]` contributes its Pauli.
    pub patterns: Vec<GateSequence>,
}

/// `Ũ = Σ_j w_j ⊗_l V_{j,l}` for one light-cone circuit.
///
/// Branch `j` picks the Pauli factor of inter gate `g` when bit `g` of `j` is
/// set; gates are numbered in circuit order.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalExpansion {
    pub term_index: usize,
    pub volume: usize,
    pub weights: Vec<C64>,
    /// One entry per cone cluster, in increasing cluster order.
    pub factors: Vec<ClusterFactor>,
}

impl LocalExpansion {
    /// `N_α`.
    pub fn num_branches(&self) -> usize {
        self.weights.len()
    }

    /// `Size_α`.
    pub fn size(&self) -> usize {
        self.factors.len()
    }

    pub fn weight_norm(&self) -> f64 {
        self.weights.iter().map(|w| w.norm()).sum()
    }

    /// Local pattern of cluster factor `l` in branch `j`.
    pub fn pattern(&self, j: usize, l: usize) -> usize {
        self.factors[l]
            .gate_bits
            .iter()
            .enumerate()
            .map(|(p, &g)| ((j >> g) & 1) << p)
            .sum()
    }

    /// `V_{j,l}` for every cone cluster `l`.
    pub fn branch_sequences(&self, j: usize) -> Vec<&GateSequence> {
        (0..self.size())
            .map(|l| &self.factors[l].patterns[self.pattern(j, l)])
            .collect()
    }

    pub fn qubits(&self) -> Vec<usize> {
        self.factors.iter().flat_map(|f| f.qubits.iter().copied()).collect()
    }

    /// Dense `Σ_j w_j W_j` over [`LocalExpansion::qubits`].
    pub fn reconstruct(&self, limits: OracleLimits) -> Result<Matrix> {
        let qubits = self.qubits();
        if qubits.len() > limits.max_operator_qubits {
            return Err(Error::capacity(
                "dense reconstruction",
                qubits.len(),
                limits.max_operator_qubits,
            ));
        }
        let mut out = Matrix::zeros(1 << qubits.len());
        for (j, &w) in self.weights.iter().enumerate() {
            let gates = self
                .branch_sequences(j)
                .into_iter()
                .flat_map(|s| s.gates.iter().cloned())
                .collect();
            let w_j = GateSequence::with_gates(qubits.clone(), gates).unitary()?;
            out.add_assign_scaled(&w_j, w);
        }
        Ok(out)
    }
}

/// Expand a light-cone circuit branch by branch.
pub fn decompose_lightcone_circuit(cone: &LightCone) -> Result<LocalExpansion> {
    if cone.volume > MAX_EXPANSION_VOLUME {
        return Err(Error::Unsupported(format!(
            "light-cone volume {} exceeds the enumeration limit {MAX_EXPANSION_VOLUME}",
            cone.volume
        )));
    }
    let circuit = &cone.restricted;
    let layout = circuit.layout();
    let inter: Vec<_> = circuit.layers().iter().flat_map(|l| l.inter.iter()).collect();
    debug_assert_eq!(inter.len(), cone.volume);
    for g in &inter {
        if !g.theta.is_finite() {
            return Err(Error::Unsupported(format!(
                "inter gate angle {} is not finite",
                g.theta
            )));
        }
    }

    let mut weights = vec![ONE; 1 << inter.len()];
    for (bit, g) in inter.iter().enumerate() {
        let (c, s) = g.split_weights();
        for (j, w) in weights.iter_mut().enumerate() {
            *w *= if (j >> bit) & 1 == 1 { s } else { c };
        }
    }

    let mut factors = Vec::with_capacity(cone.clusters.len());
    for &cluster in &cone.clusters {
        let qubits: Vec<usize> = layout.qubits_of(cluster).collect();
        let in_cluster = |q: usize| q / layout.cluster_size() == cluster;
        let gate_bits: Vec<usize> = inter
            .iter()
            .enumerate()
            .filter(|(_, g)| in_cluster(g.qubit_a) || in_cluster(g.qubit_b))
            .map(|(bit, _)| bit)
            .collect();
        let mut patterns = Vec::with_capacity(1 << gate_bits.len());
        for pattern in 0..1usize << gate_bits.len() {
            let mut seq = GateSequence::new(qubits.clone());
            let mut bit = 0;
            let mut local = 0;
            for layer in circuit.layers() {
                for g in &layer.inter {
                    if local < gate_bits.len() && gate_bits[local] == bit {
                        if (pattern >> local) & 1 == 1 {
                            let factor = if in_cluster(g.qubit_a) {
                                LocalGate::pauli(g.qubit_a, g.pauli_a)
                            } else {
                                LocalGate::pauli(g.qubit_b, g.pauli_b)
                            };
                            seq.push(factor);
                        }
                        local += 1;
                    }
                    bit += 1;
                }
                for g in layer.intra.iter().filter(|g| g.cluster == cluster) {
                    seq.push(LocalGate::from(g));
                }
            }
            patterns.push(seq);
        }
        factors.push(ClusterFactor {
            cluster,
            qubits,
            gate_bits,
            patterns,
        });
    }
    Ok(LocalExpansion {
        term_index: 0,
        volume: inter.len(),
        weights,
        factors,
    })
}

fn check_amplitudes(amplitudes: &[C64], shots: &[u64]) -> Result<()> {
    if amplitudes.is_empty() || amplitudes.len() != shots.len() {
        return Err(Error::Domain(format!(
            "need matching nonempty lists, got {} amplitudes and {} shot counts",
            amplitudes.len(),
            shots.len()
        )));
    }
    if let Some(a) = amplitudes.iter().find(|a| a.norm().is_nan() || a.norm() > 1.0 + 1e-12) {
        return Err(Error::Domain(format!("amplitude {a} has modulus above 1")));
    }
    if shots.iter().any(|&k| k < 2) {
        return Err(Error::Domain("Hadamard tests need at least 2 shots".into()));
    }
    Ok(())
}

fn second_moments(amplitudes: &[C64], shots: &[u64]) -> Vec<f64> {
    amplitudes
        .iter()
        .zip(shots)
        .map(|(a, &k)| {
            let m = a.norm_sqr();
            m + 2.0 * (2.0 - m) / k as f64
        })
        .collect()
}

/// `(Π E|X_l|²)·Σ_l Var(X_l)/E|X_l|²` with `Var(X_l) = 2(2 − |μ_l|²)/K_l`.
pub fn crossterm_variance_bound(amplitudes: &[C64], shots: &[u64]) -> Result<f64> {
    check_amplitudes(amplitudes, shots)?;
    let second = second_moments(amplitudes, shots);
    let prod: f64 = second.iter().product();
    let ratio: f64 = amplitudes
        .iter()
        .zip(shots)
        .zip(&second)
        .map(|((a, &k), s)| 2.0 * (2.0 - a.norm_sqr()) / k as f64 / s)
        .sum();
    Ok(prod * ratio)
}

/// `Π E|X_l|² − Π|μ_l|²` for independent factors.
pub fn exact_crossterm_variance(amplitudes: &[C64], shots: &[u64]) -> Result<f64> {
    check_amplitudes(amplitudes, shots)?;
    let second: f64 = second_moments(amplitudes, shots).iter().product();
    let first: f64 = amplitudes.iter().map(|a| a.norm_sqr()).product();
    Ok(second - first)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgebraicConfig {
    pub epsilon: f64,
    pub delta: f64,
    pub variance_constant: f64,
    pub task_budget: u64,
    pub mode: HadamardMode,
    pub limits: OracleLimits,
}

impl AlgebraicConfig {
    pub fn new(epsilon: f64) -> Self {
        AlgebraicConfig {
            epsilon,
            delta: DEFAULT_DELTA,
            variance_constant: DEFAULT_VARIANCE_CONSTANT,
            task_budget: DEFAULT_TASK_BUDGET,
            mode: HadamardMode::Shortcut,
            limits: OracleLimits::default(),
        }
    }
}

/// Sampled cross term `η̃_{jk}` of one term.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossTermEstimate {
    pub j: usize,
    pub k: usize,
    pub amplitudes: Vec<C64>,
    pub product: C64,
    pub shots: u64,
}

#[derive(Debug, Clone)]
struct PreparedTerm {
    coefficient: f64,
    pauli: String,
    identity: bool,
    clusters: Vec<usize>,
    volume: usize,
    range: usize,
    components: usize,
    weights: Vec<C64>,
    /// `patterns[l][j]`.
    patterns: Vec<Vec<usize>>,
    /// `tests[l][p * width_l + q]`, `width_l` local patterns.
    tests: Vec<Vec<HadamardTest>>,
    widths: Vec<usize>,
    shots_real: u64,
    shots_imag: u64,
    exact: Option<f64>,
}

impl PreparedTerm {
    fn test(&self, l: usize, j: usize, k: usize) -> &HadamardTest {
        let w = self.widths[l];
        &self.tests[l][self.patterns[l][j] * w + self.patterns[l][k]]
    }

    fn shots_per_task(&self) -> u64 {
        self.shots_real + self.shots_imag
    }

    fn num_branches(&self) -> usize {
        self.weights.len()
    }

    fn task_count(&self) -> u64 {
        if self.identity {
            0
        } else {
            (self.num_branches() * self.num_branches() * self.clusters.len()) as u64
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraicRun {
    pub estimate: f64,
    pub estimate_imag: f64,
    pub term_estimates: Vec<C64>,
}

/// Algebraic-decomposition estimator; Hadamard-test outcome probabilities are
/// precomputed and repeated runs only draw shots.
#[derive(Debug, Clone)]
pub struct AlgebraicEstimator {
    config: AlgebraicConfig,
    plan: ShotPlan,
    terms: Vec<PreparedTerm>,
    worst_case: f64,
    max_device_qubits: usize,
    qubit_ceiling: usize,
    depth: usize,
}

fn budget_check(cones: &[LightCone], budget: u64) -> Result<()> {
    let tasks = |c: &LightCone| -> u128 {
        if c.identity {
            return 0;
        }
        if 2 * c.volume >= 100 {
            return u128::MAX / 4;
        }
        (1u128 << (2 * c.volume)) * c.size() as u128
    };
    let total = cones.iter().map(tasks).fold(0u128, u128::saturating_add);
    if total > budget as u128 {
        let (term, cone) = cones
            .iter()
            .enumerate()
            .max_by_key(|(_, c)| tasks(c))
            .expect("nonempty");
        return Err(Error::Budget {
            term,
            tasks: total,
            branches: if cone.volume < 127 {
                1u128 << cone.volume
            } else {
                u128::MAX
            },
            size: cone.size(),
            volume: cone.volume,
            budget,
        });
    }
    Ok(())
}

impl AlgebraicEstimator {
    pub fn prepare(circuit: &ClusteredCircuit, obs: &Observable, config: AlgebraicConfig) -> Result<Self> {
        obs.check_within(circuit.layout())?;
        let layout = circuit.layout();
        let cones: Vec<LightCone> = obs
            .terms()
            .iter()
            .map(|t| pauli_lightcone(circuit, &t.pauli))
            .collect::<Result<_>>()?;
        budget_check(&cones, config.task_budget)?;
        let plan = plan_algebraic(obs, &cones, config.epsilon, config.delta, config.variance_constant)?;
        let qubit_ceiling = layout.cluster_size() + 1;
        let oracle = Oracle::new(config.limits);
        let mut max_device_qubits = 0;
        let mut terms = Vec::with_capacity(cones.len());
        for (alpha, (term, cone)) in obs.terms().iter().zip(&cones).enumerate() {
            let mut expansion = decompose_lightcone_circuit(cone)?;
            expansion.term_index = alpha;
            let n = expansion.num_branches();
            let mut patterns = Vec::with_capacity(expansion.size());
            let mut tests = Vec::with_capacity(expansion.size());
            let mut widths = Vec::with_capacity(expansion.size());
            for (l, factor) in expansion.factors.iter().enumerate() {
                let local: PauliString = term.pauli.restrict(|q| factor.qubits.contains(&q));
                let width = factor.patterns.len();
                let mut table = Vec::with_capacity(width * width);
                for p in &factor.patterns {
                    for q in &factor.patterns {
                        let t = HadamardTest::prepare(p, q, &local, config.mode)?;
                        assert!(
                            t.device_qubits <= qubit_ceiling,
                            "Hadamard test on {} qubits exceeds d + 1 = {qubit_ceiling}",
                            t.device_qubits
                        );
                        max_device_qubits = max_device_qubits.max(t.device_qubits);
                        table.push(t);
                    }
                }
                patterns.push((0..n).map(|j| expansion.pattern(j, l)).collect());
                tests.push(table);
                widths.push(width);
            }
            let shots = plan.shots(alpha).max(2);
            let (shots_real, shots_imag) = split_shots(shots);
            let exact = if cone.identity {
                Some(1.0)
            } else {
                oracle.exact_expectation(&cone.restricted, &term.pauli).ok()
            };
            terms.push(PreparedTerm {
                coefficient: term.coefficient,
                pauli: term.pauli.to_string(),
                identity: cone.identity,
                clusters: cone.clusters.iter().copied().collect(),
                volume: cone.volume,
                range: cone.range,
                components: cone.num_components(),
                weights: expansion.weights,
                patterns,
                tests,
                widths,
                shots_real,
                shots_imag,
                exact,
            });
        }
        let size_max = cones.iter().map(LightCone::size).max().unwrap_or(0);
        let volume_max = cones.iter().map(|c| c.volume).max().unwrap_or(0);
        let worst_case = algebraic_worst_case(
            obs.one_norm(),
            size_max,
            volume_max,
            plan.target_variance,
            config.variance_constant,
        );
        Ok(AlgebraicEstimator {
            config,
            plan,
            terms,
            worst_case,
            max_device_qubits,
            qubit_ceiling,
            depth: circuit.depth(),
        })
    }

    pub fn plan(&self) -> &ShotPlan {
        &self.plan
    }

    pub fn config(&self) -> &AlgebraicConfig {
        &self.config
    }

    pub fn max_device_qubits(&self) -> usize {
        self.max_device_qubits
    }

    pub fn qubit_ceiling(&self) -> usize {
        self.qubit_ceiling
    }

    /// Shots drawn per run, after raising every task to at least two shots.
    pub fn shots_consumed(&self) -> u64 {
        self.terms.iter().map(|t| t.task_count() * t.shots_per_task()).sum()
    }

    pub fn oracle_value(&self) -> Option<f64> {
        self.terms.iter().map(|t| t.exact.map(|e| t.coefficient * e)).sum()
    }

    /// `Σ_{j,k} w_j* w_k Π_l μ_{jk,l}` for term `alpha`, from the exact amplitudes.
    pub fn expanded_value(&self, alpha: usize) -> C64 {
        let t = &self.terms[alpha];
        if t.identity {
            return ONE;
        }
        let n = t.num_branches();
        let mut total = C64::new(0.0, 0.0);
        for j in 0..n {
            for k in 0..n {
                let eta: C64 = (0..t.clusters.len()).map(|l| t.test(l, j, k).amplitude).product();
                total += t.weights[j].conj() * t.weights[k] * eta;
            }
        }
        total
    }

    fn variance_with(&self, exact: bool) -> f64 {
        let mut total = 0.0;
        for t in self.terms.iter().filter(|t| !t.identity) {
            let n = t.num_branches();
            let mut term = 0.0;
            for j in 0..n {
                for k in 0..n {
                    let second: Vec<f64> = (0..t.clusters.len())
                        .map(|l| t.test(l, j, k).second_moment(t.shots_real, t.shots_imag))
                        .collect();
                    let mods: Vec<f64> = (0..t.clusters.len())
                        .map(|l| t.test(l, j, k).amplitude.norm_sqr())
                        .collect();
                    let prod: f64 = second.iter().product();
                    let var = if exact {
                        prod - mods.iter().product::<f64>()
                    } else {
                        prod * second.iter().zip(&mods).map(|(s, m)| (s - m) / s).sum::<f64>()
                    };
                    term += (t.weights[j] * t.weights[k]).norm_sqr() * var;
                }
            }
            total += t.coefficient * t.coefficient * term;
        }
        total
    }

    /// Product-inequality bound on `E|μ̃ − μ|²`.
    pub fn variance_bound(&self) -> f64 {
        self.variance_with(false)
    }

    /// Exact `E|μ̃ − μ|²` over independent Hadamard tests.
    pub fn variance_exact(&self) -> f64 {
        self.variance_with(true)
    }

    fn sample_eta(&self, seed: u64, alpha: usize, j: usize, k: usize, amplitudes: Option<&mut Vec<C64>>) -> C64 {
        let t = &self.terms[alpha];
        let mut eta = ONE;
        let mut record = amplitudes;
        for (l, &cluster) in t.clusters.iter().enumerate() {
            let mut stream = ShotStream::new(
                seed,
                StreamId::CrossTerm {
                    term: alpha,
                    j,
                    k,
                    cluster,
                },
            );
            let mu = t
                .test(l, j, k)
                .sample(t.shots_real, t.shots_imag, &mut stream)
                .expect("at least one shot per branch");
            if let Some(r) = record.as_deref_mut() {
                r.push(mu);
            }
            eta *= mu;
        }
        eta
    }

    /// Sampled cross terms of term `alpha`, in `(j, k)` order.
    pub fn cross_terms(&self, seed: u64, alpha: usize) -> Vec<CrossTermEstimate> {
        let t = &self.terms[alpha];
        let n = t.num_branches();
        let mut out = Vec::with_capacity(n * n);
        if t.identity {
            return out;
        }
        for j in 0..n {
            for k in 0..n {
                let mut amplitudes = Vec::with_capacity(t.clusters.len());
                let product = self.sample_eta(seed, alpha, j, k, Some(&mut amplitudes));
                out.push(CrossTermEstimate {
                    j,
                    k,
                    amplitudes,
                    product,
                    shots: t.shots_per_task(),
                });
            }
        }
        out
    }

    pub fn run(&self, seed: u64) -> AlgebraicRun {
        let mut total = C64::new(0.0, 0.0);
        let mut term_estimates = Vec::with_capacity(self.terms.len());
        for (alpha, t) in self.terms.iter().enumerate() {
            let mu = if t.identity {
                ONE
            } else {
                let n = t.num_branches();
                let mut acc = C64::new(0.0, 0.0);
                for j in 0..n {
                    for k in 0..n {
                        acc += t.weights[j].conj() * t.weights[k] * self.sample_eta(seed, alpha, j, k, None);
                    }
                }
                acc
            };
            term_estimates.push(mu);
            total += mu * t.coefficient;
        }
        AlgebraicRun {
            estimate: total.re,
            estimate_imag: total.im,
            term_estimates,
        }
    }

    pub fn device_report(&self) -> DeviceReport {
        DeviceReport {
            max_device_qubits: self.max_device_qubits,
            qubit_ceiling: Some(self.qubit_ceiling),
            circuit_depth: self.depth,
            hadamard_depth: Some(2 * self.depth + 1),
            hadamard_depth_alt: Some(self.depth),
        }
    }

    pub fn report(&self, seed: u64, run: &AlgebraicRun) -> EstimateReport {
        let oracle = self.oracle_value();
        let terms = self
            .terms
            .iter()
            .enumerate()
            .map(|(alpha, t)| TermReport {
                index: alpha,
                coefficient: t.coefficient,
                pauli: t.pauli.clone(),
                estimate: run.term_estimates[alpha].re,
                estimate_imag: Some(run.term_estimates[alpha].im),
                exact: t.exact,
                cone_size: t.clusters.len(),
                cone_volume: t.volume,
                cone_range: t.range,
                components: t.components,
                branches: Some(t.num_branches() as u64),
                tasks: t.task_count(),
                shots_per_task: if t.identity { 0 } else { t.shots_per_task() },
            })
            .collect();
        EstimateReport {
            schema_version: SCHEMA_VERSION,
            kind: "estimate".into(),
            method: Method::AlgebraicDecomposition,
            seed,
            epsilon: self.config.epsilon,
            estimate: run.estimate,
            estimate_imag: Some(run.estimate_imag),
            oracle,
            abs_error: oracle.map(|mu| (run.estimate - mu).abs()),
            variance_bound: self.variance_bound(),
            variance_exact: Some(self.variance_exact()),
            empirical_variance: None,
            shots: ShotLedger::from_plan(&self.plan, self.shots_consumed(), self.worst_case),
            device: self.device_report(),
            terms,
            components: Vec::new(),
            timing: None,
        }
    }
}

/// Run the algebraic decomposition once with default settings.
pub fn estimate_algebraic(
    circuit: &ClusteredCircuit,
    obs: &Observable,
    epsilon: f64,
    seed: u64,
) -> Result<EstimateReport> {
    let start = Instant::now();
    let estimator = AlgebraicEstimator::prepare(circuit, obs, AlgebraicConfig::new(epsilon))?;
    let run = estimator.run(seed);
    let mut report = estimator.report(seed, &run);
    report.timing = Some(Timing::since(start.elapsed()));
    Ok(report)
}
