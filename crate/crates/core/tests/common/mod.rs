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

//! Shared helpers for integration tests: an independent dense oracle built
//! from Kronecker embeddings, and seeded random instances.

#![allow(dead_code)]

use lightcone::benchmarks::{random_circuit, random_pauli_on, RandomCircuitParams};
use lightcone::circuit::{ClusterLayout, ClusteredCircuit, PauliString};
use lightcone::lightcone::pauli_lightcone;
use lightcone::linalg::{embed_operator, Matrix, C64};
use lightcone::statevector::Oracle;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Register order for [`embed_operator`] so that qubit `i` is bit `i`.
fn register(n: usize) -> Vec<usize> {
    (0..n).rev().collect()
}

/// Full `2^n × 2^n` circuit unitary from embedded gate matrices.
pub fn dense_unitary(circuit: &ClusteredCircuit) -> Matrix {
    let n = circuit.num_qubits();
    let full = register(n);
    let mut u = Matrix::identity(1 << n);
    for layer in circuit.layers() {
        for g in &layer.inter {
            u = embed_operator(&g.matrix(), &[g.qubit_a, g.qubit_b], &full).matmul(&u);
        }
        for g in &layer.intra {
            u = embed_operator(&g.unitary, &g.targets, &full).matmul(&u);
        }
    }
    u
}

pub fn dense_pauli(pauli: &PauliString, n: usize) -> Matrix {
    let full = register(n);
    let mut m = Matrix::identity(1 << n);
    for (&q, &p) in pauli.letters() {
        m = embed_operator(&p.matrix(), &[q], &full).matmul(&m);
    }
    m
}

/// `U† P U` by explicit matrix products. Cubic in `2^n`; keep `n` small.
pub fn dense_heisenberg(circuit: &ClusteredCircuit, pauli: &PauliString) -> Matrix {
    let u = dense_unitary(circuit);
    let pu = dense_pauli(pauli, circuit.num_qubits()).matmul(&u);
    u.adjoint().matmul(&pu)
}

/// Apply `op` on `targets` (first = high bit of `op`) to a state whose
/// qubit q is bit q of the index, by explicit sub-index gathering.
pub fn apply_dense(state: &[C64], op: &Matrix, targets: &[usize]) -> Vec<C64> {
    let k = targets.len();
    let sub = |idx: usize| targets.iter().fold(0usize, |acc, &q| (acc << 1) | ((idx >> q) & 1));
    let with_sub = |idx: usize, s: usize| {
        targets.iter().enumerate().fold(idx, |acc, (j, &q)| {
            let bit = (s >> (k - 1 - j)) & 1;
            (acc & !(1 << q)) | (bit << q)
        })
    };
    (0..state.len())
        .map(|i| {
            let r = sub(i);
            (0..1usize << k).map(|c| op.get(r, c) * state[with_sub(i, c)]).sum()
        })
        .collect()
}

pub fn dense_state(circuit: &ClusteredCircuit) -> Vec<C64> {
    let mut psi = vec![C64::new(0.0, 0.0); 1 << circuit.num_qubits()];
    psi[0] = C64::new(1.0, 0.0);
    for layer in circuit.layers() {
        for g in &layer.inter {
            psi = apply_dense(&psi, &g.matrix(), &[g.qubit_a, g.qubit_b]);
        }
        for g in &layer.intra {
            psi = apply_dense(&psi, &g.unitary, &g.targets);
        }
    }
    psi
}

pub fn dense_expectation(circuit: &ClusteredCircuit, pauli: &PauliString) -> C64 {
    let psi = dense_state(circuit);
    let mut p_psi = psi.clone();
    for (&q, &p) in pauli.letters() {
        p_psi = apply_dense(&p_psi, &p.matrix(), &[q]);
    }
    psi.iter().zip(&p_psi).map(|(a, b)| a.conj() * b).sum()
}

pub fn dense_observable_expectation(circuit: &ClusteredCircuit, obs: &lightcone::circuit::Observable) -> f64 {
    obs.terms()
        .iter()
        .map(|t| t.coefficient * dense_expectation(circuit, &t.pauli).re)
        .sum()
}

/// Small layouts, all at most 12 qubits.
pub fn small_layouts() -> Vec<ClusterLayout> {
    vec![
        ClusterLayout::chain(4, 1).unwrap(),
        ClusterLayout::chain(6, 2).unwrap(),
        ClusterLayout::chain(8, 1).unwrap(),
        ClusterLayout::lattice(vec![2, 3], 2).unwrap(),
        ClusterLayout::lattice(vec![3, 3], 1).unwrap(),
        ClusterLayout::lattice(vec![2, 2, 2], 1).unwrap(),
        ClusterLayout::all_to_all(4, 2).unwrap(),
        ClusterLayout::all_to_all(4, 3).unwrap(),
    ]
}

/// A random circuit plus a random Pauli term touching one to three clusters.
pub fn random_instance(seed: u64) -> (ClusteredCircuit, PauliString) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let layouts = small_layouts();
    let layout = layouts[rng.random_range(0..layouts.len())].clone();
    let params = RandomCircuitParams {
        depth: rng.random_range(1..=4),
        inter_density: rng.random_range(0.1..0.7),
        intra_density: 0.8,
    };
    let circuit = random_circuit(&layout, params, rng.random());
    let mut clusters: Vec<usize> = (0..layout.num_clusters()).collect();
    clusters.shuffle(&mut rng);
    clusters.truncate(rng.random_range(1..=3.min(layout.num_clusters())));
    let pauli = random_pauli_on(&layout, &clusters, &mut rng);
    (circuit, pauli)
}

/// A random instance on at most `max_qubits` qubits.
pub fn random_small_instance(seed: u64, max_qubits: usize) -> (ClusteredCircuit, PauliString) {
    (0u64..)
        .map(|i| random_instance(seed.wrapping_mul(1_000_003).wrapping_add(i)))
        .find(|(c, _)| c.num_qubits() <= max_qubits)
        .expect("small layouts exist")
}

pub fn assert_close(a: f64, b: f64, tol: f64, what: &str) {
    assert!((a - b).abs() <= tol, "{what}: {a} vs {b} (tol {tol})");
}

/// `‖U†PU − Ũ†PŨ‖_max` with the cone operator padded by identity.
pub fn cone_discrepancy(circuit: &ClusteredCircuit, pauli: &PauliString) -> f64 {
    let n = circuit.num_qubits();
    let all: Vec<usize> = (0..n).collect();
    let full = heisenberg_operator_on(circuit, pauli, &all);
    let cone = pauli_lightcone(circuit, pauli).expect("valid term");
    let local_qubits = cone.qubits();
    let local = heisenberg_operator_on(&cone.restricted, pauli, &local_qubits);
    let msb_first: Vec<usize> = local_qubits.iter().rev().copied().collect();
    let padded = embed_operator(&local, &msb_first, &register(n));
    full.max_abs_diff(&padded)
}

fn heisenberg_operator_on(circuit: &ClusteredCircuit, pauli: &PauliString, qubits: &[usize]) -> Matrix {
    Oracle::default()
        .heisenberg_operator_on(circuit, pauli, qubits)
        .expect("within operator capacity")
}

/// Layouts for cheap structural properties (no simulation).
pub fn structural_layouts() -> Vec<ClusterLayout> {
    vec![
        ClusterLayout::chain(12, 1).unwrap(),
        ClusterLayout::chain(7, 3).unwrap(),
        ClusterLayout::lattice(vec![4, 4], 1).unwrap(),
        ClusterLayout::lattice(vec![3, 3, 2], 2).unwrap(),
        ClusterLayout::all_to_all(6, 1).unwrap(),
    ]
}

/// Dense unitary of `circuit` over `qubits` (qubit `qubits[i]` is bit `i`),
/// column by column with [`apply_dense`].
pub fn dense_unitary_on(circuit: &ClusteredCircuit, qubits: &[usize]) -> Matrix {
    let local = |q: usize| qubits.iter().position(|&x| x == q).expect("qubit in register");
    let dim = 1usize << qubits.len();
    let mut out = Matrix::zeros(dim);
    for col in 0..dim {
        let mut psi = vec![C64::new(0.0, 0.0); dim];
        psi[col] = C64::new(1.0, 0.0);
        for layer in circuit.layers() {
            for g in &layer.inter {
                psi = apply_dense(&psi, &g.matrix(), &[local(g.qubit_a), local(g.qubit_b)]);
            }
            for g in &layer.intra {
                let t: Vec<usize> = g.targets.iter().map(|&q| local(q)).collect();
                psi = apply_dense(&psi, &g.unitary, &t);
            }
        }
        for (row, a) in psi.into_iter().enumerate() {
            out.set(row, col, a);
        }
    }
    out
}
