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

use std::collections::BTreeSet;

use lightcone::benchmarks::{random_circuit, random_pauli_on, RandomCircuitParams};
use lightcone::circuit::{cluster_weight, CircuitBuilder, ClusterLayout, ClusteredCircuit, Pauli, PauliString};
use lightcone::format::{parse_circuit, parse_observable, serialize_circuit, serialize_observable};
use lightcone::lightcone::{cluster_lightcone, pauli_lightcone, range_of_unitary};
use lightcone::statevector::exact_expectation;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn structural_circuit(layout_idx: usize, depth: usize, density: f64, seed: u64) -> ClusteredCircuit {
    let layouts = common::structural_layouts();
    let layout = layouts[layout_idx % layouts.len()].clone();
    random_circuit(
        &layout,
        RandomCircuitParams {
            depth,
            inter_density: density,
            intra_density: 0.5,
        },
        seed,
    )
}

fn with_layers(
    circuit: &ClusteredCircuit,
    before: &[lightcone::circuit::Layer],
    after: &[lightcone::circuit::Layer],
) -> ClusteredCircuit {
    let layers = before.iter().chain(circuit.layers()).chain(after).cloned().collect();
    ClusteredCircuit::new(circuit.layout().clone(), layers).unwrap()
}

#[test]
fn cone_operator_matches_full_operator() {
    let mut twelve = 0;
    let mut checked = 0;
    for seed in 0u64.. {
        let (c, p) = common::random_instance(seed);
        let n = c.num_qubits();
        if n == 12 {
            if twelve >= 2 {
                continue;
            }
            twelve += 1;
        }
        let diff = common::cone_discrepancy(&c, &p);
        assert!(diff <= 1e-10, "seed {seed}: {diff}");
        checked += 1;
        if checked == 40 {
            break;
        }
    }
}

#[test]
fn brick_wall_cones() {
    let layout = ClusterLayout::chain(5, 1).unwrap();
    let mut b = CircuitBuilder::new(layout);
    b.layer().zz(0, 1, 0.3).zz(2, 3, 0.4);
    b.layer().zz(1, 2, 0.5).zz(3, 4, 0.6);
    let c = b.build().unwrap();

    let cone = cluster_lightcone(&c, 2).unwrap();
    assert_eq!(cone.clusters, BTreeSet::from([0, 1, 2, 3]));
    assert_eq!(cone.range, 2);
    let cone = cluster_lightcone(&c, 0).unwrap();
    assert_eq!(cone.clusters, BTreeSet::from([0, 1]));
    assert_eq!(cone.volume, 1);
    assert_eq!(range_of_unitary(&c), 2);

    let z2 = PauliString::single(2, Pauli::Z);
    assert!(common::cone_discrepancy(&c, &z2) <= 1e-12);
}

#[test]
fn seven_cluster_two_component_examples() {
    let layout = ClusterLayout::chain(7, 1).unwrap();
    let mut b = CircuitBuilder::new(layout);
    b.layer().zz(1, 2, 0.7).zz(4, 5, -1.1);
    let c = b.build().unwrap();

    let outer = PauliString::from_letters([(0, Pauli::Z), (6, Pauli::Z)]).unwrap();
    let cone = pauli_lightcone(&c, &outer).unwrap();
    let parts: Vec<_> = cone.components.iter().map(|k| k.clusters.clone()).collect();
    assert_eq!(parts, vec![BTreeSet::from([0]), BTreeSet::from([6])]);
    assert_eq!(cone.volume, 0);

    let inner = PauliString::from_letters([(1, Pauli::Z), (4, Pauli::Z)]).unwrap();
    let cone = pauli_lightcone(&c, &inner).unwrap();
    let parts: Vec<_> = cone.components.iter().map(|k| k.clusters.clone()).collect();
    assert_eq!(parts, vec![BTreeSet::from([1, 2]), BTreeSet::from([4, 5])]);
    assert_eq!(cone.volume, 2);
    assert!(common::cone_discrepancy(&c, &inner) <= 1e-12);
}

#[test]
fn repeated_gate_on_one_pair_has_range_one() {
    let layout = ClusterLayout::chain(2, 1).unwrap();
    let mut b = CircuitBuilder::new(layout);
    for t in 0..6 {
        b.layer().zz(0, 1, 0.2 * t as f64 + 0.1);
    }
    assert_eq!(range_of_unitary(&b.build().unwrap()), 1);
}

#[test]
fn gate_free_circuits_have_trivial_cones() {
    let layout = ClusterLayout::lattice(vec![3, 2], 2).unwrap();
    let c = ClusteredCircuit::empty(layout);
    assert_eq!(range_of_unitary(&c), 0);
    for j in 0..6 {
        let cone = cluster_lightcone(&c, j).unwrap();
        assert_eq!(cone.clusters, BTreeSet::from([j]));
        assert_eq!((cone.volume, cone.range, cone.num_components()), (0, 0, 1));
    }
}

#[test]
fn identity_term_has_flagged_empty_cone() {
    let (c, _) = common::random_instance(5);
    let cone = pauli_lightcone(&c, &PauliString::identity()).unwrap();
    assert!(cone.identity);
    assert!(cone.clusters.is_empty());
}

#[test]
fn invalid_cluster_is_rejected() {
    let c = ClusteredCircuit::empty(ClusterLayout::chain(3, 1).unwrap());
    assert!(cluster_lightcone(&c, 3).is_err());
    assert!(pauli_lightcone(&c, &PauliString::single(3, Pauli::X)).is_err());
}

#[test]
fn components_factorize_the_term_value() {
    let mut multi = 0;
    for seed in 0..400u64 {
        let (c, p) = common::random_instance(seed);
        let cone = pauli_lightcone(&c, &p).unwrap();
        if cone.num_components() < 2 {
            continue;
        }
        multi += 1;
        let product: f64 = cone
            .components
            .iter()
            .map(|k| exact_expectation(&k.circuit, &k.pauli).unwrap())
            .product();
        let whole = common::dense_expectation(&c, &p).re;
        common::assert_close(product, whole, 1e-10, &format!("seed {seed}"));
    }
    assert!(multi >= 20, "only {multi} multi-component instances");
}

#[test]
fn deleting_other_components_leaves_each_factor_unchanged() {
    for seed in 0..60u64 {
        let (c, p) = common::random_small_instance(seed, 10);
        let cone = pauli_lightcone(&c, &p).unwrap();
        for k in &cone.components {
            assert!(common::cone_discrepancy(&c, &k.pauli) <= 1e-10);
            let only = pauli_lightcone(&k.circuit, &k.pauli).unwrap();
            assert_eq!(only.clusters, k.clusters, "seed {seed}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn range_never_exceeds_depth(layout in 0usize..5, depth in 0usize..7, density in 0.0f64..1.0, seed: u64) {
        let c = structural_circuit(layout, depth, density, seed);
        prop_assert!(range_of_unitary(&c) <= c.depth());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cones_only_grow_when_layers_are_added(
        layout in 0usize..5, depth in 0usize..5, density in 0.1f64..1.0, seed: u64, extra: u64,
    ) {
        let c = structural_circuit(layout, depth, density, seed);
        let more = structural_circuit(layout, 1, 0.8, extra);
        let appended = with_layers(&c, &[], more.layers());
        let prepended = with_layers(&c, more.layers(), &[]);
        for j in 0..c.layout().num_clusters() {
            let base = cluster_lightcone(&c, j).unwrap().clusters;
            prop_assert!(base.is_subset(&cluster_lightcone(&appended, j).unwrap().clusters));
            prop_assert!(base.is_subset(&cluster_lightcone(&prepended, j).unwrap().clusters));
        }
    }

    #[test]
    fn components_partition_the_cone(
        layout in 0usize..5, depth in 0usize..6, density in 0.0f64..1.0, seed: u64, picks in 1usize..4,
    ) {
        let c = structural_circuit(layout, depth, density, seed);
        let lay = c.layout();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let clusters: Vec<usize> = (0..picks).map(|i| (seed as usize).wrapping_add(7 * i) % lay.num_clusters()).collect::<BTreeSet<_>>().into_iter().collect();
        let p = random_pauli_on(lay, &clusters, &mut rng);
        let cone = pauli_lightcone(&c, &p).unwrap();

        let mut union = BTreeSet::new();
        for k in &cone.components {
            prop_assert!(union.is_disjoint(&k.clusters));
            union.extend(k.clusters.iter().copied());
        }
        prop_assert_eq!(&union, &cone.clusters);
        prop_assert!(cone.num_components() >= 1);
        prop_assert!(cone.num_components() <= cone.targets.len());
        prop_assert_eq!(cone.volume, cone.components.iter().map(|k| k.volume).sum::<usize>());

        let d = lay.cluster_size();
        let owner = |cl: usize| cone.components.iter().position(|k| k.clusters.contains(&cl));
        for layer in cone.restricted.layers() {
            for g in &layer.inter {
                let (a, b) = (owner(g.qubit_a / d), owner(g.qubit_b / d));
                prop_assert!(a.is_some() && a == b);
            }
        }

        let union_of_singles: BTreeSet<usize> = cone
            .targets
            .iter()
            .flat_map(|&t| cluster_lightcone(&c, t).unwrap().clusters)
            .collect();
        prop_assert_eq!(&union_of_singles, &cone.clusters);
    }

    #[test]
    fn cluster_weight_is_at_most_support(seed: u64, picks in 1usize..5) {
        let lay = ClusterLayout::lattice(vec![3, 3], 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let clusters: Vec<usize> = (0..picks).map(|i| (seed as usize).wrapping_add(2 * i) % 9).collect::<BTreeSet<_>>().into_iter().collect();
        let p = random_pauli_on(&lay, &clusters, &mut rng);
        prop_assert_eq!(cluster_weight(&p, &lay), clusters.len());
        prop_assert!(cluster_weight(&p, &lay) <= p.weight());
    }

    #[test]
    fn circuits_round_trip_through_text(layout in 0usize..5, depth in 0usize..4, seed: u64) {
        let c = structural_circuit(layout, depth, 0.6, seed);
        let text = serialize_circuit(&c);
        let back = parse_circuit(&text).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(serialize_circuit(&back), text);
    }

    #[test]
    fn observables_round_trip_through_text(seed: u64, coeff in -3.0f64..3.0) {
        let (c, p) = common::random_instance(seed);
        let obs = lightcone::circuit::Observable::new([(coeff, p), (0.25, PauliString::single(0, Pauli::Y))]).unwrap();
        let back = parse_observable(&serialize_observable(&obs)).unwrap();
        prop_assert_eq!(back.terms(), obs.terms());
        prop_assert!(back.check_within(c.layout()).is_ok());
    }
}
