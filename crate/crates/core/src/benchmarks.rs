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

//! Benchmark circuit families and seeded random instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::circuit::{CircuitBuilder, ClusterLayout, ClusteredCircuit, Observable, Pauli, PauliString};
use crate::error::Result;
use crate::linalg::{gates, Matrix, C64};

/// Brick wall on a 1D chain: layer `t` couples pairs `(i, i+1)` with
/// `i ≡ t (mod 2)`, then applies `intra(t, q)` to every qubit.
///
/// Inter gates act on the last qubit of the left cluster and the first of the right one.
pub fn brick_wall(
    num_clusters: usize,
    cluster_size: usize,
    depth: usize,
    theta: f64,
    intra: impl Fn(usize, usize) -> Option<Matrix>,
) -> Result<ClusteredCircuit> {
    let layout = ClusterLayout::chain(num_clusters, cluster_size)?;
    let mut b = CircuitBuilder::new(layout);
    for t in 0..depth {
        b.layer();
        let mut left = t % 2;
        while left + 1 < num_clusters {
            b.zz((left + 1) * cluster_size - 1, (left + 1) * cluster_size, theta);
            left += 2;
        }
        for c in 0..num_clusters {
            let singles: Vec<(usize, Matrix)> = (c * cluster_size..(c + 1) * cluster_size)
                .filter_map(|q| intra(t, q).map(|m| (q, m)))
                .collect();
            if singles.is_empty() {
                continue;
            }
            // one intra unitary per cluster: tensor the single-qubit gates
            let targets: Vec<usize> = singles.iter().map(|(q, _)| *q).collect();
            let mut m = Matrix::identity(1);
            for (_, g) in &singles {
                m = m.kron(g);
            }
            b.intra_on(c, m, &targets);
        }
    }
    b.build()
}

/// The five-cluster, two-layer brick wall used throughout the tests.
///
/// Layer 1 couples `(0,1), (2,3)`, layer 2 couples `(1,2), (3,4)`; every
/// qubit gets a rotation after each layer so that expectations are nontrivial.
pub fn brick_wall_benchmark() -> ClusteredCircuit {
    brick_wall(5, 1, 2, 0.9, |t, q| {
        Some(if t == 0 {
            gates::ry(0.5 + 0.3 * q as f64)
        } else {
            gates::rx(0.4 + 0.2 * q as f64)
        })
    })
    .expect("valid benchmark")
}

/// `Z` on qubit 2 of the brick-wall benchmark.
pub fn brick_wall_observable() -> Observable {
    Observable::single(1.0, PauliString::single(2, Pauli::Z))
}

/// Haar-like random unitary on `k` qubits (Gram-Schmidt on a Gaussian matrix).
pub fn random_unitary(k: usize, rng: &mut impl Rng) -> Matrix {
    let dim = 1usize << k;
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<C64> = (0..dim)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        for u in &cols {
            let proj: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, a) in v.iter_mut().zip(u) {
                *x -= proj * a;
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        for x in &mut v {
            *x /= norm;
        }
        cols.push(v);
    }
    let mut m = Matrix::zeros(dim);
    for (c, col) in cols.iter().enumerate() {
        for (r, &x) in col.iter().enumerate() {
            m.set(r, c, x);
        }
    }
    m
}

fn random_pauli(rng: &mut impl Rng) -> Pauli {
    [Pauli::X, Pauli::Y, Pauli::Z][rng.random_range(0..3)]
}

/// Parameters for [`random_circuit`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomCircuitParams {
    pub depth: usize,
    /// Probability that an available edge receives an inter gate.
    pub inter_density: f64,
    /// Probability that a cluster receives an intra gate in a layer.
    pub intra_density: f64,
}

impl Default for RandomCircuitParams {
    fn default() -> Self {
        RandomCircuitParams {
            depth: 3,
            inter_density: 0.6,
            intra_density: 0.8,
        }
    }
}

/// Seeded random circuit over `layout` with random Pauli-rotation inter gates.
pub fn random_circuit(layout: &ClusterLayout, params: RandomCircuitParams, seed: u64) -> ClusteredCircuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = layout.cluster_size();
    let mut edges = layout.edges();
    let mut b = CircuitBuilder::new(layout.clone());
    for _ in 0..params.depth {
        b.layer();
        edges.shuffle(&mut rng);
        let mut used = vec![false; layout.num_qubits()];
        for &(a, c) in &edges {
            if !rng.random_bool(params.inter_density) {
                continue;
            }
            let qa = a * d + rng.random_range(0..d);
            let qc = c * d + rng.random_range(0..d);
            if used[qa] || used[qc] {
                continue;
            }
            used[qa] = true;
            used[qc] = true;
            let theta = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
            b.inter(random_pauli(&mut rng), qa, random_pauli(&mut rng), qc, theta);
        }
        for cluster in 0..layout.num_clusters() {
            if !rng.random_bool(params.intra_density) {
                continue;
            }
            let mut qubits: Vec<usize> = layout.qubits_of(cluster).collect();
            qubits.shuffle(&mut rng);
            qubits.truncate(rng.random_range(1..=d.min(2)));
            let u = random_unitary(qubits.len(), &mut rng);
            b.intra_on(cluster, u, &qubits);
        }
    }
    b.build().expect("random circuits are valid by construction")
}

/// Random Pauli string touching `clusters` (one to `d` letters each).
pub fn random_pauli_on(layout: &ClusterLayout, clusters: &[usize], rng: &mut impl Rng) -> PauliString {
    let mut letters = Vec::new();
    for &c in clusters {
        let mut qubits: Vec<usize> = layout.qubits_of(c).collect();
        qubits.shuffle(rng);
        qubits.truncate(rng.random_range(1..=qubits.len()));
        letters.extend(qubits.into_iter().map(|q| (q, random_pauli(rng))));
    }
    PauliString::from_letters(letters).expect("distinct qubits")
}
