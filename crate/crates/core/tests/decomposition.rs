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

use std::f64::consts::FRAC_PI_2;

use lightcone::algebraic::decompose_lightcone_circuit;
use lightcone::circuit::{CircuitBuilder, ClusterLayout, Pauli, PauliString};
use lightcone::lightcone::pauli_lightcone;
use lightcone::linalg::C64;
use lightcone::statevector::{Oracle, OracleLimits};
use proptest::prelude::*;

fn expected_weight_norm(cone: &lightcone::lightcone::LightCone) -> f64 {
    cone.restricted
        .layers()
        .iter()
        .flat_map(|l| &l.inter)
        .map(|g| (g.theta / 2.0).cos().abs() + (g.theta / 2.0).sin().abs())
        .product()
}

#[test]
fn reconstruction_matches_independent_dense_unitary() {
    let mut checked = 0;
    for seed in 0..300u64 {
        let (c, p) = common::random_small_instance(seed, 12);
        let cone = pauli_lightcone(&c, &p).unwrap();
        let qubits = cone.qubits();
        if qubits.len() > 8 || cone.volume > 5 {
            continue;
        }
        let exp = decompose_lightcone_circuit(&cone).unwrap();
        assert_eq!(exp.num_branches(), 1 << cone.volume);
        assert_eq!(exp.size(), cone.size());
        assert_eq!(exp.qubits(), qubits);
        let rebuilt = exp.reconstruct(OracleLimits::default()).unwrap();
        let dense = common::dense_unitary_on(&cone.restricted, &qubits);
        assert!(rebuilt.max_abs_diff(&dense) <= 1e-10, "seed {seed}");
        assert!((exp.weight_norm() - expected_weight_norm(&cone)).abs() <= 1e-12);
        assert!(exp.weight_norm() <= 2f64.sqrt().powi(cone.volume as i32) + 1e-12);
        checked += 1;
    }
    assert!(checked >= 100, "{checked}");
}

#[test]
fn twelve_qubit_cone_reconstructs() {
    let (c, p) = (0u64..)
        .map(common::random_instance)
        .find(|(c, p)| {
            let cone = pauli_lightcone(c, p).unwrap();
            cone.qubits().len() == 12 && (1..=2).contains(&cone.volume)
        })
        .unwrap();
    let cone = pauli_lightcone(&c, &p).unwrap();
    let exp = decompose_lightcone_circuit(&cone).unwrap();
    let oracle = Oracle::default();
    let target = oracle.circuit_unitary(&cone.restricted, &cone.qubits()).unwrap();
    let rebuilt = exp.reconstruct(OracleLimits::default()).unwrap();
    assert!(rebuilt.max_abs_diff(&target) <= 1e-10);
}

#[test]
fn single_half_pi_gate_splits_into_two_branches() {
    let mut b = CircuitBuilder::new(ClusterLayout::chain(2, 1).unwrap());
    b.layer().zz(0, 1, FRAC_PI_2);
    let c = b.build().unwrap();
    let cone = pauli_lightcone(&c, &PauliString::single(0, Pauli::Z)).unwrap();
    let exp = decompose_lightcone_circuit(&cone).unwrap();
    let h = 0.5f64.sqrt();
    assert!((exp.weights[0] - C64::new(h, 0.0)).norm() < 1e-15);
    assert!((exp.weights[1] - C64::new(0.0, -h)).norm() < 1e-15);
    assert!(exp.branch_sequences(0).iter().all(|s| s.is_empty()));
    assert!(exp.branch_sequences(1).iter().all(|s| s.len() == 1));
    let rebuilt = exp.reconstruct(OracleLimits::default()).unwrap();
    assert!(rebuilt.max_abs_diff(&common::dense_unitary_on(&c, &[0, 1])) <= 1e-12);
}

#[test]
fn two_gate_cone_has_four_branches() {
    let mut b = CircuitBuilder::new(ClusterLayout::chain(3, 1).unwrap());
    b.layer().zz(0, 1, FRAC_PI_2);
    b.layer().zz(1, 2, FRAC_PI_2);
    let c = b.build().unwrap();
    let cone = pauli_lightcone(&c, &PauliString::single(2, Pauli::X)).unwrap();
    let exp = decompose_lightcone_circuit(&cone).unwrap();
    assert_eq!(exp.num_branches(), 4);
    assert!((exp.weight_norm() - 2.0).abs() < 1e-12);
    let rebuilt = exp.reconstruct(OracleLimits::default()).unwrap();
    assert!(rebuilt.max_abs_diff(&common::dense_unitary_on(&c, &[0, 1, 2])) <= 1e-12);
}

#[test]
fn degenerate_cone_keeps_intra_gates_only() {
    let (c, p) = (0u64..)
        .map(common::random_instance)
        .find(|(c, p)| {
            let cone = pauli_lightcone(c, p).unwrap();
            cone.volume == 0 && cone.qubits().len() <= 6
        })
        .unwrap();
    let cone = pauli_lightcone(&c, &p).unwrap();
    let exp = decompose_lightcone_circuit(&cone).unwrap();
    assert_eq!(exp.weights, vec![C64::new(1.0, 0.0)]);
    let intra: usize = cone.restricted.layers().iter().map(|l| l.intra.len()).sum();
    let seq: usize = exp.branch_sequences(0).iter().map(|s| s.len()).sum();
    assert_eq!(intra, seq);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_branch_sequence_stays_in_its_cluster(seed in 0u64..10_000) {
        let (c, p) = common::random_instance(seed);
        let cone = pauli_lightcone(&c, &p).unwrap();
        prop_assume!(cone.volume <= 10);
        let exp = decompose_lightcone_circuit(&cone).unwrap();
        prop_assert_eq!(exp.num_branches(), 1usize << cone.volume);
        let d = c.layout().cluster_size();
        for f in &exp.factors {
            prop_assert_eq!(f.patterns.len(), 1usize << f.gate_bits.len());
            for seq in &f.patterns {
                prop_assert!(seq.gates.iter().flat_map(|g| &g.targets).all(|&q| q / d == f.cluster));
            }
        }
        let total: C64 = exp.weights.iter().sum();
        let inter = cone.restricted.layers().iter().flat_map(|l| &l.inter);
        let expected: C64 = inter.map(|g| { let (a, b) = g.split_weights(); a + b }).product();
        prop_assert!((total - expected).norm() <= 1e-12);
    }
}
