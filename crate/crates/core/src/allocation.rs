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

//! Shot allocation from the Lagrangian optimum of the variance budget.

use serde::{Deserialize, Serialize};

use crate::circuit::Observable;
use crate::error::{Error, Result};
use crate::lightcone::LightCone;

/// Default confidence parameter: target variance `V = δ ε²`.
pub const DEFAULT_DELTA: f64 = 1.0 / 3.0;
/// Default constant in the cross-term variance budget.
pub const DEFAULT_VARIANCE_CONSTANT: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanMode {
    Causal,
    Algebraic,
}

/// Shots assigned to every task of one Pauli term.
///
/// Causal tasks are components `(α, i)`; algebraic tasks are `(α, j, k, l)`.
/// All tasks of a term receive the same count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermAllocation {
    pub term: usize,
    pub coefficient: f64,
    pub tasks: u64,
    pub shots_per_task: u64,
    /// Unrounded `√λ |c_α|`.
    pub continuous_shots: f64,
}

impl TermAllocation {
    pub fn total(&self) -> u64 {
        self.tasks * self.shots_per_task
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShotPlan {
    pub mode: PlanMode,
    pub epsilon: f64,
    pub delta: f64,
    pub target_variance: f64,
    pub lambda_sqrt: f64,
    /// `K_1 = Σ k_α |c_α|` (causal mode).
    pub k1: Option<f64>,
    /// Variance constant `C` (algebraic mode).
    pub variance_constant: Option<f64>,
    pub terms: Vec<TermAllocation>,
    /// `Σ` of all task shots after rounding up.
    pub k_tot: u64,
    /// Closed-form total before rounding.
    pub k_tot_continuous: f64,
}

impl ShotPlan {
    /// Shots for one task of term `term`.
    pub fn shots(&self, term: usize) -> u64 {
        self.terms[term].shots_per_task
    }

    pub fn task_count(&self) -> u64 {
        self.terms.iter().map(|t| t.tasks).sum()
    }
}

/// Ceiling that ignores floating-point noise just above an integer.
pub fn tolerant_ceil(x: f64) -> u64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r.abs().max(1.0) {
        r as u64
    } else {
        x.ceil() as u64
    }
}

pub fn target_variance(epsilon: f64, delta: f64) -> Result<f64> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::Config(format!("epsilon must be positive, got {epsilon}")));
    }
    if !(delta.is_finite() && delta > 0.0 && delta <= 1.0) {
        return Err(Error::Config(format!("delta must lie in (0, 1], got {delta}")));
    }
    Ok(delta * epsilon * epsilon)
}

/// Per-term input to [`plan_causal_raw`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CausalTermShape {
    pub coefficient: f64,
    /// Number of light-cone components `k_α` (0 for the identity).
    pub components: usize,
}

/// Per-term input to [`plan_algebraic_raw`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgebraicTermShape {
    pub coefficient: f64,
    /// `N_α`.
    pub branches: u64,
    /// `Size_α` (0 for the identity).
    pub size: usize,
}

pub fn plan_causal_raw(terms: &[CausalTermShape], epsilon: f64, delta: f64) -> Result<ShotPlan> {
    if terms.is_empty() {
        return Err(Error::Domain("observable has no nonzero terms".into()));
    }
    let v = target_variance(epsilon, delta)?;
    let k1: f64 = terms.iter().map(|t| t.components as f64 * t.coefficient.abs()).sum();
    let lambda_sqrt = k1 / v;
    let terms: Vec<TermAllocation> = terms
        .iter()
        .enumerate()
        .map(|(term, t)| {
            let continuous = lambda_sqrt * t.coefficient.abs();
            let shots = if t.components == 0 {
                0
            } else {
                tolerant_ceil(continuous).max(1)
            };
            TermAllocation {
                term,
                coefficient: t.coefficient,
                tasks: t.components as u64,
                shots_per_task: shots,
                continuous_shots: continuous,
            }
        })
        .collect();
    let k_tot = terms.iter().map(TermAllocation::total).sum();
    Ok(ShotPlan {
        mode: PlanMode::Causal,
        epsilon,
        delta,
        target_variance: v,
        lambda_sqrt,
        k1: Some(k1),
        variance_constant: None,
        terms,
        k_tot,
        k_tot_continuous: k1 * k1 / v,
    })
}

pub fn plan_causal(obs: &Observable, cones: &[LightCone], epsilon: f64, delta: f64) -> Result<ShotPlan> {
    check_aligned(obs, cones)?;
    let shapes: Vec<CausalTermShape> = obs
        .terms()
        .iter()
        .zip(cones)
        .map(|(t, cone)| CausalTermShape {
            coefficient: t.coefficient,
            components: if cone.identity { 0 } else { cone.num_components() },
        })
        .collect();
    plan_causal_raw(&shapes, epsilon, delta)
}

/// Worst-case causal total `s² λ_c² / V`.
pub fn causal_worst_case(locality: usize, one_norm: f64, target_variance: f64) -> f64 {
    let s = locality as f64;
    s * s * one_norm * one_norm / target_variance
}

pub fn plan_algebraic_raw(
    terms: &[AlgebraicTermShape],
    epsilon: f64,
    delta: f64,
    variance_constant: f64,
) -> Result<ShotPlan> {
    if terms.is_empty() {
        return Err(Error::Domain("observable has no nonzero terms".into()));
    }
    if !(variance_constant.is_finite() && variance_constant > 0.0) {
        return Err(Error::Config(format!(
            "variance constant must be positive, got {variance_constant}"
        )));
    }
    let v = target_variance(epsilon, delta)?;
    let weighted: f64 = terms
        .iter()
        .map(|t| {
            let n = t.branches as f64;
            t.coefficient.abs() * n * n * t.size as f64
        })
        .sum();
    let lambda_sqrt = variance_constant / v * weighted;
    let terms: Vec<TermAllocation> = terms
        .iter()
        .enumerate()
        .map(|(term, t)| {
            let continuous = lambda_sqrt * t.coefficient.abs();
            let tasks = if t.size == 0 {
                0
            } else {
                t.branches * t.branches * t.size as u64
            };
            TermAllocation {
                term,
                coefficient: t.coefficient,
                tasks,
                shots_per_task: if tasks == 0 {
                    0
                } else {
                    tolerant_ceil(continuous).max(1)
                },
                continuous_shots: continuous,
            }
        })
        .collect();
    let k_tot = terms.iter().map(TermAllocation::total).sum();
    Ok(ShotPlan {
        mode: PlanMode::Algebraic,
        epsilon,
        delta,
        target_variance: v,
        lambda_sqrt,
        k1: None,
        variance_constant: Some(variance_constant),
        terms,
        k_tot,
        k_tot_continuous: variance_constant / v * weighted * weighted,
    })
}

/// Plan from measured cones; `N_α = 2^{Vol_α}`.
pub fn plan_algebraic(
    obs: &Observable,
    cones: &[LightCone],
    epsilon: f64,
    delta: f64,
    variance_constant: f64,
) -> Result<ShotPlan> {
    check_aligned(obs, cones)?;
    let mut shapes = Vec::with_capacity(cones.len());
    for (t, cone) in obs.terms().iter().zip(cones) {
        if cone.volume >= 32 {
            return Err(Error::Domain(format!(
                "light-cone volume {} is too large to enumerate branches",
                cone.volume
            )));
        }
        shapes.push(AlgebraicTermShape {
            coefficient: t.coefficient,
            branches: 1u64 << cone.volume,
            size: if cone.identity { 0 } else { cone.size() },
        });
    }
    plan_algebraic_raw(&shapes, epsilon, delta, variance_constant)
}

/// Worst-case algebraic total `(C/V) λ_c² Size_max² N_max⁴`.
pub fn algebraic_worst_case(
    one_norm: f64,
    size_max: usize,
    volume_max: usize,
    target_variance: f64,
    variance_constant: f64,
) -> f64 {
    let n4 = 2f64.powi(4 * volume_max as i32);
    let size = size_max as f64;
    variance_constant / target_variance * one_norm * one_norm * size * size * n4
}

fn check_aligned(obs: &Observable, cones: &[LightCone]) -> Result<()> {
    if obs.len() != cones.len() {
        return Err(Error::Domain(format!(
            "{} light cones supplied for {} terms",
            cones.len(),
            obs.len()
        )));
    }
    Ok(())
}
