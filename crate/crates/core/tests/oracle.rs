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

mod common;

use common::{dense_expectation, dense_heisenberg, dense_observable_expectation, random_instance};
use lightcone::benchmarks::{brick_wall_benchmark, brick_wall_observable, random_unitary};
use lightcone::circuit::{ClusterLayout, ClusteredCircuit, Layer, Pauli, PauliString};
use lightcone::statevector::{
    exact_expectation, exact_observable_expectation, heisenberg_operator, Oracle, StateVector,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn brick_wall_matches_dense_simulation() {
    let c = brick_wall_benchmark();
    let obs = brick_wall_observable();
    let dense = dense_observable_expectation(&c, &obs);
    let sv = exact_observable_expectation(&c, &obs).unwrap();
    assert!((dense - sv).abs() < 1e-12, "{dense} vs {sv}");
    assert!(dense.abs() > 0.1, "benchmark expectation should be nontrivial");
}

#[test]
fn random_expectations_match_dense_oracle() {
    for seed in 0..40 {
        let (c, p) = common::random_small_instance(seed, 9);
        let dense = dense_expectation(&c, &p);
        let z = Oracle::default().expectation_complex(&c, &p).unwrap();
        assert!((dense - z).norm() < 1e-10, "seed {seed}");
        assert!(z.im.abs() < 1e-12, "imaginary residue {} at seed {seed}", z.im);
        assert!(z.re.abs() <= 1.0 + 1e-12);
    }
}

#[test]
fn heisenberg_operators_match_dense_products() {
    for seed in 100..130 {
        let (c, p) = common::random_small_instance(seed, 8);
        let op = heisenberg_operator(&c, &p).unwrap();
        assert!(op.max_abs_diff(&dense_heisenberg(&c, &p)) < 1e-10, "seed {seed}");
    }
}

#[test]
fn heisenberg_single_zz_closed_form() {
    // exp(-iπ/2 Z⊗Z) = -i Z⊗Z, so conjugating X on qubit 0 flips its sign
    let layout = ClusterLayout::chain(2, 1).unwrap();
    let mut b = lightcone::circuit::CircuitBuilder::new(layout);
    b.layer().zz(0, 1, std::f64::consts::PI);
    let c = b.build().unwrap();
    let x0 = PauliString::single(0, Pauli::X);
    let op = heisenberg_operator(&c, &x0).unwrap();
    let expected = common::dense_pauli(&x0, 2).scale(lightcone::linalg::C64::new(-1.0, 0.0));
    assert!(op.max_abs_diff(&expected) < 1e-12);
}

#[test]
fn norm_is_preserved_over_many_gates() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let qubits: Vec<usize> = (0..6).collect();
    let mut psi = StateVector::zero(qubits);
    for _ in 0..1000 {
        let k = rng.random_range(1..=2);
        let a = rng.random_range(0..6);
        let mut targets = vec![a];
        if k == 2 {
            targets.push((a + rng.random_range(1..6)) % 6);
        }
        psi.apply_unitary(&targets, &random_unitary(k, &mut rng));
    }
    assert!((psi.norm() - 1.0).abs() < 1e-9);
}

#[test]
fn disjoint_gates_commute_within_a_layer() {
    for seed in 200..230 {
        let (c, p) = random_instance(seed);
        let reversed: Vec<Layer> = c
            .layers()
            .iter()
            .map(|l| Layer {
                inter: l.inter.iter().rev().copied().collect(),
                intra: l.intra.iter().rev().cloned().collect(),
            })
            .collect();
        let r = ClusteredCircuit::new(c.layout().clone(), reversed).unwrap();
        let a = exact_expectation(&c, &p).unwrap();
        let b = exact_expectation(&r, &p).unwrap();
        assert!((a - b).abs() < 1e-12, "seed {seed}");
    }
}

#[test]
fn capacity_error_names_the_term() {
    let c = lightcone::benchmarks::brick_wall(30, 1, 2, 0.3, |_, _| None).unwrap();
    let obs = lightcone::circuit::Observable::single(1.0, PauliString::single(15, Pauli::Z));
    let small = Oracle::new(lightcone::statevector::OracleLimits {
        max_state_qubits: 3,
        max_operator_qubits: 3,
    });
    let err = small.exact_observable_expectation(&c, &obs).unwrap_err();
    assert_eq!(err.exit_code(), 3);
    assert!(err.to_string().contains("term 0"), "{err}");
    // 30 qubits exceed the default limit for the whole circuit, but the cone has 4
    assert!(Oracle::default().exact_observable_expectation(&c, &obs).is_ok());
}
