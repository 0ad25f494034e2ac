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

//! Resource accounting: measured cone extremes, gate-cutting cut counts and
//! the three-way method comparison.

use serde::{Deserialize, Serialize};

use crate::allocation::{plan_causal, target_variance, DEFAULT_DELTA, DEFAULT_VARIANCE_CONSTANT};
use crate::circuit::{ClusterLayout, ClusteredCircuit, Observable, Topology};
use crate::error::{Error, Result};
use crate::lightcone::{pauli_lightcone, range_of_unitary, LightCone};
use crate::report::{AnalysisReport, SCHEMA_VERSION};

/// Default exponent bits charged per cut gate instance.
pub const DEFAULT_BITS_PER_CUT: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeExtremes {
    pub size_max: usize,
    pub volume_max: usize,
    pub range: usize,
}

fn cones(circuit: &ClusteredCircuit, obs: &Observable) -> Result<Vec<LightCone>> {
    obs.terms().iter().map(|t| pauli_lightcone(circuit, &t.pauli)).collect()
}

fn extremes_of(cones: &[LightCone]) -> ConeExtremes {
    ConeExtremes {
        size_max: cones.iter().map(LightCone::size).max().unwrap_or(0),
        volume_max: cones.iter().map(|c| c.volume).max().unwrap_or(0),
        range: cones.iter().map(|c| c.range).max().unwrap_or(0),
    }
}

/// Largest cone size, cone volume and cone range over the observable's terms.
pub fn measure_cone_extremes(circuit: &ClusteredCircuit, obs: &Observable) -> Result<ConeExtremes> {
    Ok(extremes_of(&cones(circuit, obs)?))
}

/// Inter-cluster edges times depth, for per-cluster fragmentation of a lattice.
pub fn gate_cutting_cut_count(layout: &ClusterLayout, depth: usize) -> Result<usize> {
    match layout.topology() {
        Topology::Lattice { .. } => Ok(layout.edge_count() * depth),
        Topology::AllToAll => Err(Error::Unsupported(
            "gate-cutting cut count is defined for lattice layouts".into(),
        )),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResourceMethod {
    GateCutting,
    CausalDecoupling,
    AlgebraicDecomposition,
}

/// One row of the comparison table. Flat so it serializes to a CSV record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResourceRow {
    pub method: ResourceMethod,
    pub qubit_requirement: usize,
    pub circuit_depth: usize,
    /// log2 of the exponential sampling factor.
    pub sample_exponent: f64,
    /// Polynomial sampling factor, including `λ_c²/V`.
    pub sample_prefactor: f64,
    pub cuts: Option<usize>,
    /// `min{N, s·β^T}` on all-to-all layouts.
    pub predicted_size: Option<f64>,
    pub n: usize,
    pub num_clusters: usize,
    pub d: usize,
    pub dimension: Option<usize>,
    pub t: usize,
    pub r: usize,
    pub s: usize,
    pub size_max: usize,
    pub volume_max: usize,
    pub lambda_c: f64,
    pub epsilon: f64,
    pub beta: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableOptions {
    pub delta: f64,
    pub variance_constant: f64,
    pub bits_per_cut: f64,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions {
            delta: DEFAULT_DELTA,
            variance_constant: DEFAULT_VARIANCE_CONSTANT,
            bits_per_cut: DEFAULT_BITS_PER_CUT,
        }
    }
}

/// Method comparison rows for a concrete circuit and observable, from measured cones.
pub fn comparison_table(
    circuit: &ClusteredCircuit,
    obs: &Observable,
    epsilon: f64,
    beta: Option<f64>,
) -> Result<Vec<ResourceRow>> {
    comparison_table_with(circuit, obs, epsilon, beta, TableOptions::default())
}

pub fn comparison_table_with(
    circuit: &ClusteredCircuit,
    obs: &Observable,
    epsilon: f64,
    beta: Option<f64>,
    options: TableOptions,
) -> Result<Vec<ResourceRow>> {
    let layout = circuit.layout();
    match (layout.is_lattice(), beta) {
        (true, Some(_)) => {
            return Err(Error::Config(
                "a branching factor applies to all-to-all layouts only".into(),
            ))
        }
        (false, None) => {
            return Err(Error::Config(
                "all-to-all layouts need a branching factor (beta)".into(),
            ))
        }
        (_, Some(b)) if !(b.is_finite() && b > 0.0) => {
            return Err(Error::Config(format!("branching factor must be positive, got {b}")))
        }
        _ => {}
    }
    let cones = cones(circuit, obs)?;
    let ext = extremes_of(&cones);
    let v = target_variance(epsilon, options.delta)?;
    let lambda_c = obs.one_norm();
    let s = obs.locality(layout);
    let n_clusters = layout.num_clusters();
    let d = layout.cluster_size();
    let t = circuit.depth();
    let edges = match layout.topology() {
        Topology::Lattice { .. } => layout.edge_count(),
        Topology::AllToAll => n_clusters * n_clusters.saturating_sub(1) / 2,
    };
    let cuts = edges * t;
    let causal_plan = plan_causal(obs, &cones, epsilon, options.delta)?;
    let k1 = causal_plan.k1.unwrap_or(0.0);
    let max_component_qubits = cones
        .iter()
        .flat_map(|c| c.components.iter())
        .map(|c| c.num_qubits(layout))
        .max()
        .unwrap_or(0);
    let predicted_size = beta.map(|b| (n_clusters as f64).min(s as f64 * b.powi(t as i32)));
    let row = |method, qubits, depth, exponent, prefactor, cuts| ResourceRow {
        method,
        qubit_requirement: qubits,
        circuit_depth: depth,
        sample_exponent: exponent,
        sample_prefactor: prefactor,
        cuts,
        predicted_size,
        n: layout.num_qubits(),
        num_clusters: n_clusters,
        d,
        dimension: layout.dimension(),
        t,
        r: ext.range,
        s,
        size_max: ext.size_max,
        volume_max: ext.volume_max,
        lambda_c,
        epsilon,
        beta,
    };
    let nf = n_clusters as f64;
    let size = ext.size_max as f64;
    Ok(vec![
        row(
            ResourceMethod::GateCutting,
            d,
            t,
            options.bits_per_cut * cuts as f64,
            nf * nf * lambda_c * lambda_c / v,
            Some(cuts),
        ),
        row(
            ResourceMethod::CausalDecoupling,
            max_component_qubits,
            t,
            0.0,
            k1 * k1 / v,
            None,
        ),
        row(
            ResourceMethod::AlgebraicDecomposition,
            d + 1,
            2 * t + 1,
            4.0 * ext.volume_max as f64,
            options.variance_constant * lambda_c * lambda_c * size * size / v,
            None,
        ),
    ])
}

pub fn rows_to_csv(rows: &[ResourceRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

/// One JSON object per line.
pub fn rows_to_json_lines(rows: &[ResourceRow]) -> Result<String> {
    let mut out = String::new();
    for r in rows {
        out.push_str(&serde_json::to_string(r).map_err(|e| Error::Io(e.to_string()))?);
        out.push('\n');
    }
    Ok(out)
}

/// `Size_max` of the first `t` layers, for `t = 1 ..= T`.
pub fn size_growth(circuit: &ClusteredCircuit, obs: &Observable) -> Result<Vec<(usize, usize)>> {
    let mut prefix = ClusteredCircuit::empty(circuit.layout().clone());
    let mut out = Vec::with_capacity(circuit.depth());
    for (t, layer) in circuit.layers().iter().enumerate() {
        prefix.push_layer(layer.clone())?;
        out.push((t + 1, measure_cone_extremes(&prefix, obs)?.size_max));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchingFit {
    /// Least-squares fit of `ln(Size/s) = T ln β`.
    pub beta: f64,
    /// Smallest `β` with `s·β^T ≥ Size` at every sample.
    pub beta_envelope: f64,
    /// `Size − s·β^T` at each sample.
    pub residuals: Vec<f64>,
}

/// Fit `Size ≈ s·β^T` to `(T, Size)` samples with `T ≥ 1`.
pub fn fit_branching_factor(samples: &[(usize, usize)], s: usize) -> Result<BranchingFit> {
    if s == 0 {
        return Err(Error::Domain("locality must be at least 1".into()));
    }
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|(t, _)| *t > 0)
        .map(|&(t, size)| (t as f64, (size as f64 / s as f64).ln()))
        .collect();
    if pts.is_empty() || samples.iter().any(|&(_, size)| size == 0) {
        return Err(Error::Domain("need samples with T ≥ 1 and nonzero size".into()));
    }
    let num: f64 = pts.iter().map(|(t, y)| t * y).sum();
    let den: f64 = pts.iter().map(|(t, _)| t * t).sum();
    let beta = (num / den).exp();
    let beta_envelope = pts.iter().map(|(t, y)| (y / t).exp()).fold(0.0, f64::max);
    let residuals = samples
        .iter()
        .map(|&(t, size)| size as f64 - s as f64 * beta.powi(t as i32))
        .collect();
    Ok(BranchingFit {
        beta,
        beta_envelope,
        residuals,
    })
}

/// Full resource analysis: cone extremes, comparison rows, cone growth and,
/// for all-to-all layouts, a branching-factor fit. `timing` is left unset.
pub fn analyze(
    circuit: &ClusteredCircuit,
    obs: &Observable,
    epsilon: f64,
    beta: Option<f64>,
    options: TableOptions,
) -> Result<AnalysisReport> {
    let rows = comparison_table_with(circuit, obs, epsilon, beta, options)?;
    let growth = size_growth(circuit, obs)?;
    let branching_fit = if circuit.layout().is_lattice() || growth.is_empty() {
        None
    } else {
        fit_branching_factor(&growth, obs.locality(circuit.layout()).max(1)).ok()
    };
    Ok(AnalysisReport {
        schema_version: SCHEMA_VERSION,
        kind: "analysis".into(),
        extremes: measure_cone_extremes(circuit, obs)?,
        cut_count: gate_cutting_cut_count(circuit.layout(), circuit.depth()).ok(),
        range_of_unitary: range_of_unitary(circuit),
        rows,
        size_growth: growth,
        branching_fit,
        timing: None,
    })
}
