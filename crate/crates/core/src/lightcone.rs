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

//! Cluster-level light cones.
//!
//! The cone is computed by a backward sweep over the layers. Starting from the
//! target clusters, layer `t` is processed by first keeping the intra gates on
//! clusters already in the set and then keeping every inter gate with at least
//! one endpoint in the set, after which both endpoints join. The retained gates
//! form the restricted circuit, which reproduces `U†PU` for every `P` supported
//! on the targets.

use std::collections::{BTreeMap, BTreeSet};

use crate::circuit::{ClusterLayout, ClusteredCircuit, Layer, PauliString};
use crate::error::Result;

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `true` when `a` and `b` were in different sets.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}

/// A causally disconnected piece of a light cone.
#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub clusters: BTreeSet<usize>,
    /// Gates of the restricted circuit acting inside this component.
    pub circuit: ClusteredCircuit,
    /// The part of the Pauli term supported on this component.
    pub pauli: PauliString,
    pub volume: usize,
}

impl Component {
    pub fn qubits(&self, layout: &ClusterLayout) -> Vec<usize> {
        self.clusters.iter().flat_map(|&c| layout.qubits_of(c)).collect()
    }

    pub fn num_qubits(&self, layout: &ClusterLayout) -> usize {
        self.clusters.len() * layout.cluster_size()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LightCone {
    pub targets: BTreeSet<usize>,
    pub clusters: BTreeSet<usize>,
    pub restricted: ClusteredCircuit,
    /// Inter gates retained in `restricted`.
    pub volume: usize,
    /// Largest distance from a target to a member of its own cone.
    pub range: usize,
    /// Ordered by smallest member cluster.
    pub components: Vec<Component>,
    /// Set for the identity string, whose cone is empty.
    pub identity: bool,
}

impl LightCone {
    /// `Size_α`, the number of clusters in the cone.
    pub fn size(&self) -> usize {
        self.clusters.len()
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn qubits(&self) -> Vec<usize> {
        let layout = self.restricted.layout();
        self.clusters.iter().flat_map(|&c| layout.qubits_of(c)).collect()
    }
}

struct Sweep {
    members: Vec<bool>,
    layers: Vec<Layer>,
}

fn backward_sweep(circuit: &ClusteredCircuit, initial: &BTreeSet<usize>) -> Sweep {
    let layout = circuit.layout();
    let d = layout.cluster_size();
    let mut members = vec![false; layout.num_clusters()];
    for &c in initial {
        members[c] = true;
    }
    let mut layers = vec![Layer::default(); circuit.depth()];
    for (t, layer) in circuit.layers().iter().enumerate().rev() {
        let retained = &mut layers[t];
        retained
            .intra
            .extend(layer.intra.iter().filter(|g| members[g.cluster]).cloned());
        let before = members.clone();
        for g in &layer.inter {
            let (a, b) = (g.qubit_a / d, g.qubit_b / d);
            if before[a] || before[b] {
                retained.inter.push(*g);
                members[a] = true;
                members[b] = true;
            }
        }
    }
    Sweep { members, layers }
}

fn member_set(members: &[bool]) -> BTreeSet<usize> {
    members
        .iter()
        .enumerate()
        .filter_map(|(c, &m)| m.then_some(c))
        .collect()
}

fn cone_range(layout: &ClusterLayout, target: usize, cone: &BTreeSet<usize>) -> usize {
    cone.iter().map(|&c| layout.distance(target, c)).max().unwrap_or(0)
}

fn build_cone(circuit: &ClusteredCircuit, targets: BTreeSet<usize>, pauli: &PauliString, range: usize) -> LightCone {
    let layout = circuit.layout();
    let d = layout.cluster_size();
    let sweep = backward_sweep(circuit, &targets);
    let clusters = member_set(&sweep.members);
    let restricted = ClusteredCircuit::from_validated(layout.clone(), sweep.layers);
    let volume = restricted.inter_gate_count();

    let mut uf = UnionFind::new(layout.num_clusters());
    for layer in restricted.layers() {
        for g in &layer.inter {
            uf.union(g.qubit_a / d, g.qubit_b / d);
        }
    }
    let mut groups: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for &c in &clusters {
        groups.entry(uf.find(c)).or_default().insert(c);
    }
    let mut groups: Vec<BTreeSet<usize>> = groups.into_values().collect();
    groups.sort_by_key(|g| *g.first().expect("non-empty component"));

    let components = groups
        .into_iter()
        .map(|members| {
            let sub = restricted.filter_clusters(|c| members.contains(&c));
            let volume = sub.inter_gate_count();
            let part = pauli.restrict(|q| members.contains(&(q / d)));
            Component {
                clusters: members,
                circuit: sub,
                pauli: part,
                volume,
            }
        })
        .collect();

    LightCone {
        targets,
        clusters,
        restricted,
        volume,
        range,
        components,
        identity: false,
    }
}

/// Light cone of a single cluster.
pub fn cluster_lightcone(circuit: &ClusteredCircuit, target: usize) -> Result<LightCone> {
    let layout = circuit.layout();
    layout.check_cluster(target)?;
    let targets = BTreeSet::from([target]);
    let sweep = backward_sweep(circuit, &targets);
    let range = cone_range(layout, target, &member_set(&sweep.members));
    let support = PauliString::identity();
    Ok(build_cone(circuit, targets, &support, range))
}

/// Combined light cone of a Pauli term, with its connected components.
///
/// The identity string yields an empty cone flagged `identity`.
pub fn pauli_lightcone(circuit: &ClusteredCircuit, term: &PauliString) -> Result<LightCone> {
    let layout = circuit.layout();
    term.check_within(layout)?;
    if term.is_identity() {
        return Ok(LightCone {
            targets: BTreeSet::new(),
            clusters: BTreeSet::new(),
            restricted: circuit.filter_clusters(|_| false),
            volume: 0,
            range: 0,
            components: Vec::new(),
            identity: true,
        });
    }
    let targets = term.clusters(layout);
    let range = targets
        .iter()
        .map(|&t| {
            let sweep = backward_sweep(circuit, &BTreeSet::from([t]));
            cone_range(layout, t, &member_set(&sweep.members))
        })
        .max()
        .unwrap_or(0);
    Ok(build_cone(circuit, targets, term, range))
}

/// `ℛ(U)`: the largest single-cluster range.
pub fn range_of_unitary(circuit: &ClusteredCircuit) -> usize {
    let layout = circuit.layout();
    (0..layout.num_clusters())
        .map(|c| {
            let sweep = backward_sweep(circuit, &BTreeSet::from([c]));
            cone_range(layout, c, &member_set(&sweep.members))
        })
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{CircuitBuilder, Pauli};
    use std::f64::consts::FRAC_PI_2;

    fn brick_wall_5() -> ClusteredCircuit {
        let mut b = CircuitBuilder::new(ClusterLayout::chain(5, 1).unwrap());
        b.layer().zz(0, 1, FRAC_PI_2).zz(2, 3, FRAC_PI_2);
        b.layer().zz(1, 2, FRAC_PI_2).zz(3, 4, FRAC_PI_2);
        b.build().unwrap()
    }

    #[test]
    fn no_inter_gates_means_trivial_cone() {
        let c = ClusteredCircuit::empty(ClusterLayout::chain(3, 2).unwrap());
        for j in 0..3 {
            let cone = cluster_lightcone(&c, j).unwrap();
            assert_eq!(cone.clusters, BTreeSet::from([j]));
            assert_eq!((cone.volume, cone.range, cone.num_components()), (0, 0, 1));
        }
        assert!(cluster_lightcone(&c, 3).is_err());
    }

    #[test]
    fn brick_wall_cones() {
        let c = brick_wall_5();
        let cone = cluster_lightcone(&c, 2).unwrap();
        assert_eq!(cone.clusters, BTreeSet::from([0, 1, 2, 3]));
        assert_eq!(cone.range, 2);
        assert_eq!(cone.volume, 3);

        let cone0 = cluster_lightcone(&c, 0).unwrap();
        assert_eq!(cone0.clusters, BTreeSet::from([0, 1]));
        assert_eq!(cone0.volume, 1);
        assert_eq!(range_of_unitary(&c), 2);
    }

    #[test]
    fn disconnected_components() {
        let mut b = CircuitBuilder::new(ClusterLayout::chain(7, 1).unwrap());
        b.layer().zz(1, 2, 0.4).zz(4, 5, 0.9);
        let c = b.build().unwrap();

        let far = PauliString::from_letters([(0, Pauli::Z), (6, Pauli::Z)]).unwrap();
        let cone = pauli_lightcone(&c, &far).unwrap();
        assert_eq!(cone.num_components(), 2);
        assert_eq!(cone.components[0].clusters, BTreeSet::from([0]));
        assert_eq!(cone.components[1].clusters, BTreeSet::from([6]));
        assert_eq!(cone.volume, 0);

        let near = PauliString::from_letters([(1, Pauli::Z), (4, Pauli::Z)]).unwrap();
        let cone = pauli_lightcone(&c, &near).unwrap();
        assert_eq!(cone.num_components(), 2);
        assert_eq!(cone.components[0].clusters, BTreeSet::from([1, 2]));
        assert_eq!(cone.components[1].clusters, BTreeSet::from([4, 5]));
        assert_eq!(cone.volume, 2);
        assert_eq!(cone.components[0].pauli, PauliString::single(1, Pauli::Z));
        assert_eq!(cone.components.iter().map(|c| c.volume).sum::<usize>(), cone.volume);
    }

    #[test]
    fn identity_term_is_flagged() {
        let cone = pauli_lightcone(&brick_wall_5(), &PauliString::identity()).unwrap();
        assert!(cone.identity);
        assert!(cone.clusters.is_empty());
        assert_eq!(cone.num_components(), 0);
    }

    #[test]
    fn repeated_pair_range_stays_one() {
        let mut b = CircuitBuilder::new(ClusterLayout::chain(2, 1).unwrap());
        for _ in 0..6 {
            b.layer().zz(0, 1, 0.3);
        }
        let c = b.build().unwrap();
        assert_eq!(range_of_unitary(&c), 1);
        assert_eq!(range_of_unitary(&ClusteredCircuit::empty(c.layout().clone())), 0);
    }

    #[test]
    fn union_find_merges() {
        let mut uf = UnionFind::new(5);
        assert!(uf.union(0, 1));
        assert!(uf.union(3, 4));
        assert!(!uf.union(1, 0));
        assert_eq!(uf.find(0), uf.find(1));
        assert_ne!(uf.find(1), uf.find(3));
        assert!(uf.union(1, 4));
        assert_eq!(uf.find(0), uf.find(3));
    }
}
