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

//! Clustered systems, layered circuits and Pauli observables.
//!
//! Qubits are assigned to clusters in contiguous blocks: qubit `q` lives in
//! cluster `q / d`. A circuit is a list of layers, and layer `t` applies its
//! inter-cluster Pauli rotations first and its intra-cluster unitaries second.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{embed_operator, gates, Matrix, C64};

/// Tolerance on `‖U†U − I‖_max` for accepted intra-cluster unitaries.
pub const UNITARITY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    /// Clusters on a finite `D`-dimensional cubic lattice without wrap-around.
    Lattice { extents: Vec<usize> },
    /// Every pair of distinct clusters may interact.
    AllToAll,
}

/// Partition of `n = N·d` qubits into `N` clusters of `d` qubits each.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterLayout {
    topology: Topology,
    cluster_size: usize,
    num_clusters: usize,
}

impl ClusterLayout {
    pub fn lattice(extents: Vec<usize>, cluster_size: usize) -> Result<Self> {
        if extents.is_empty() {
            return Err(Error::Validation("lattice needs at least one dimension".into()));
        }
        if extents.contains(&0) {
            return Err(Error::Validation("lattice extents must be positive".into()));
        }
        if cluster_size == 0 {
            return Err(Error::Validation("cluster size d must be positive".into()));
        }
        let num_clusters = extents.iter().product();
        Ok(ClusterLayout {
            topology: Topology::Lattice { extents },
            cluster_size,
            num_clusters,
        })
    }

    /// One-dimensional chain of `num_clusters` clusters.
    pub fn chain(num_clusters: usize, cluster_size: usize) -> Result<Self> {
        Self::lattice(vec![num_clusters], cluster_size)
    }

    pub fn all_to_all(num_clusters: usize, cluster_size: usize) -> Result<Self> {
        if num_clusters == 0 {
            return Err(Error::Validation("N must be positive".into()));
        }
        if cluster_size == 0 {
            return Err(Error::Validation("cluster size d must be positive".into()));
        }
        Ok(ClusterLayout {
            topology: Topology::AllToAll,
            cluster_size,
            num_clusters,
        })
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn is_lattice(&self) -> bool {
        matches!(self.topology, Topology::Lattice { .. })
    }

    /// Lattice dimension `D`, or `None` for all-to-all layouts.
    pub fn dimension(&self) -> Option<usize> {
        match &self.topology {
            Topology::Lattice { extents } => Some(extents.len()),
            Topology::AllToAll => None,
        }
    }

    pub fn cluster_size(&self) -> usize {
        self.cluster_size
    }

    pub fn num_clusters(&self) -> usize {
        self.num_clusters
    }

    pub fn num_qubits(&self) -> usize {
        self.num_clusters * self.cluster_size
    }

    pub fn cluster_of(&self, qubit: usize) -> Result<usize> {
        if qubit >= self.num_qubits() {
            return Err(Error::Domain(format!(
                "qubit {qubit} out of range for {} qubits",
                self.num_qubits()
            )));
        }
        Ok(qubit / self.cluster_size)
    }

    pub fn check_cluster(&self, cluster: usize) -> Result<()> {
        if cluster >= self.num_clusters {
            return Err(Error::Domain(format!(
                "cluster {cluster} out of range for {} clusters",
                self.num_clusters
            )));
        }
        Ok(())
    }

    pub fn qubits_of(&self, cluster: usize) -> std::ops::Range<usize> {
        cluster * self.cluster_size..(cluster + 1) * self.cluster_size
    }

    /// Lattice coordinates of a cluster, last axis fastest.
    pub fn coordinates(&self, cluster: usize) -> Vec<usize> {
        match &self.topology {
            Topology::Lattice { extents } => {
                let mut coords = vec![0; extents.len()];
                let mut rest = cluster;
                for (axis, &extent) in extents.iter().enumerate().rev() {
                    coords[axis] = rest % extent;
                    rest /= extent;
                }
                coords
            }
            Topology::AllToAll => vec![cluster],
        }
    }

    /// Graph distance on the cluster interaction graph.
    pub fn distance(&self, a: usize, b: usize) -> usize {
        match &self.topology {
            Topology::Lattice { .. } => self
                .coordinates(a)
                .iter()
                .zip(self.coordinates(b))
                .map(|(&x, y)| x.abs_diff(y))
                .sum(),
            Topology::AllToAll => usize::from(a != b),
        }
    }

    pub fn are_adjacent(&self, a: usize, b: usize) -> bool {
        a != b && self.distance(a, b) == 1
    }

    /// Number of edges in the cluster interaction graph.
    pub fn edge_count(&self) -> usize {
        match &self.topology {
            Topology::Lattice { extents } => {
                let total: usize = extents.iter().product();
                extents.iter().map(|&e| total / e * (e - 1)).sum()
            }
            Topology::AllToAll => self.num_clusters * (self.num_clusters - 1) / 2,
        }
    }

    /// Every interaction edge `(a, b)` with `a < b`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.num_clusters {
            for b in a + 1..self.num_clusters {
                if self.are_adjacent(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> Matrix {
        match self {
            Pauli::X => gates::pauli_x(),
            Pauli::Y => gates::pauli_y(),
            Pauli::Z => gates::pauli_z(),
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'X' | 'x' => Some(Pauli::X),
            'Y' | 'y' => Some(Pauli::Y),
            'Z' | 'z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Unitary on a subset of one cluster's qubits. `targets[0]` is the most
/// significant bit of the matrix index.
#[derive(Debug, Clone, PartialEq)]
pub struct IntraGate {
    pub cluster: usize,
    pub targets: Vec<usize>,
    pub unitary: Matrix,
}

/// `exp(-i θ/2 · P_a ⊗ P_b)` across two adjacent clusters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterGate {
    pub pauli_a: Pauli,
    pub qubit_a: usize,
    pub pauli_b: Pauli,
    pub qubit_b: usize,
    pub theta: f64,
}

impl InterGate {
    pub fn zz(qubit_a: usize, qubit_b: usize, theta: f64) -> Self {
        InterGate {
            pauli_a: Pauli::Z,
            qubit_a,
            pauli_b: Pauli::Z,
            qubit_b,
            theta,
        }
    }

    /// 4×4 matrix over `(qubit_a, qubit_b)`, `qubit_a` as the high bit.
    pub fn matrix(&self) -> Matrix {
        let (c, s) = self.split_weights();
        let mut m = Matrix::identity(4).scale(c);
        m.add_assign_scaled(&self.pauli_a.matrix().kron(&self.pauli_b.matrix()), s);
        m
    }

    /// The exact two-term split `cos(θ/2)·I⊗I + (−i·sin(θ/2))·P⊗Q`.
    pub fn split_weights(&self) -> (C64, C64) {
        let half = self.theta / 2.0;
        (C64::new(half.cos(), 0.0), C64::new(0.0, -half.sin()))
    }

    pub fn qubits(&self) -> [usize; 2] {
        [self.qubit_a, self.qubit_b]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    Intra(IntraGate),
    Inter(InterGate),
}

/// One circuit layer: `V_t` (inter gates) followed by `W_t` (intra gates).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Layer {
    pub inter: Vec<InterGate>,
    pub intra: Vec<IntraGate>,
}

impl Layer {
    pub fn is_empty(&self) -> bool {
        self.inter.is_empty() && self.intra.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusteredCircuit {
    layout: ClusterLayout,
    layers: Vec<Layer>,
    global_phase: f64,
}

impl ClusteredCircuit {
    /// Validate and assemble a circuit.
    pub fn new(layout: ClusterLayout, layers: Vec<Layer>) -> Result<Self> {
        Self::with_phase(layout, layers, 0.0)
    }

    pub fn with_phase(layout: ClusterLayout, layers: Vec<Layer>, global_phase: f64) -> Result<Self> {
        for (t, layer) in layers.iter().enumerate() {
            validate_layer(&layout, layer, t)?;
        }
        Ok(ClusteredCircuit {
            layout,
            layers,
            global_phase,
        })
    }

    /// Circuit with no layers.
    pub fn empty(layout: ClusterLayout) -> Self {
        ClusteredCircuit {
            layout,
            layers: Vec::new(),
            global_phase: 0.0,
        }
    }

    /// Assemble from layers already known to satisfy every invariant (subsets
    /// of a validated circuit).
    pub(crate) fn from_validated(layout: ClusterLayout, layers: Vec<Layer>) -> Self {
        ClusteredCircuit {
            layout,
            layers,
            global_phase: 0.0,
        }
    }

    pub fn layout(&self) -> &ClusterLayout {
        &self.layout
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// Depth `T`.
    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn num_qubits(&self) -> usize {
        self.layout.num_qubits()
    }

    /// Phase dropped while canonicalizing CZ/CNOT.
    pub fn global_phase(&self) -> f64 {
        self.global_phase
    }

    pub fn inter_gate_count(&self) -> usize {
        self.layers.iter().map(|l| l.inter.len()).sum()
    }

    /// Qubits touched by at least one gate.
    pub fn active_qubits(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for layer in &self.layers {
            for g in &layer.inter {
                out.extend(g.qubits());
            }
            for g in &layer.intra {
                out.extend(g.targets.iter().copied());
            }
        }
        out
    }

    /// Append a layer, validating it.
    pub fn push_layer(&mut self, layer: Layer) -> Result<()> {
        validate_layer(&self.layout, &layer, self.layers.len())?;
        self.layers.push(layer);
        Ok(())
    }

    /// Keep only gates whose clusters all satisfy `keep`.
    pub fn filter_clusters(&self, keep: impl Fn(usize) -> bool) -> ClusteredCircuit {
        let d = self.layout.cluster_size();
        let layers = self
            .layers
            .iter()
            .map(|layer| Layer {
                inter: layer
                    .inter
                    .iter()
                    .filter(|g| keep(g.qubit_a / d) && keep(g.qubit_b / d))
                    .copied()
                    .collect(),
                intra: layer.intra.iter().filter(|g| keep(g.cluster)).cloned().collect(),
            })
            .collect();
        ClusteredCircuit::from_validated(self.layout.clone(), layers)
    }
}

fn validate_layer(layout: &ClusterLayout, layer: &Layer, t: usize) -> Result<()> {
    let mut inter_qubits = BTreeSet::new();
    for g in &layer.inter {
        let ca = layout
            .cluster_of(g.qubit_a)
            .map_err(|e| Error::Validation(format!("layer {t}: {e}")))?;
        let cb = layout
            .cluster_of(g.qubit_b)
            .map_err(|e| Error::Validation(format!("layer {t}: {e}")))?;
        if ca == cb {
            return Err(Error::Validation(format!(
                "layer {t}: inter gate on q{} q{} lies inside cluster {ca}",
                g.qubit_a, g.qubit_b
            )));
        }
        if !layout.are_adjacent(ca, cb) {
            return Err(Error::Validation(format!(
                "layer {t}: inter gate joins non-adjacent clusters C_{ca} and C_{cb}"
            )));
        }
        if !(g.theta.is_finite() && g.theta > -2.0 * PI && g.theta <= 2.0 * PI) {
            return Err(Error::Validation(format!(
                "layer {t}: rotation angle {} outside (-2π, 2π]",
                g.theta
            )));
        }
        for q in g.qubits() {
            if !inter_qubits.insert(q) {
                return Err(Error::Validation(format!(
                    "layer {t}: qubit q{q} used by two inter gates"
                )));
            }
        }
    }
    let mut intra_clusters = BTreeSet::new();
    for g in &layer.intra {
        layout
            .check_cluster(g.cluster)
            .map_err(|e| Error::Validation(format!("layer {t}: {e}")))?;
        if !intra_clusters.insert(g.cluster) {
            return Err(Error::Validation(format!(
                "layer {t}: cluster C_{} has two intra gates",
                g.cluster
            )));
        }
        if g.targets.is_empty() {
            return Err(Error::Validation(format!("layer {t}: intra gate without targets")));
        }
        let mut seen = BTreeSet::new();
        for &q in &g.targets {
            if layout.cluster_of(q).ok() != Some(g.cluster) {
                return Err(Error::Validation(format!(
                    "layer {t}: intra gate target q{q} is outside cluster C_{}",
                    g.cluster
                )));
            }
            if !seen.insert(q) {
                return Err(Error::Validation(format!("layer {t}: repeated intra gate target q{q}")));
            }
        }
        if g.unitary.dim() != 1 << g.targets.len() {
            return Err(Error::Validation(format!(
                "layer {t}: {}x{} matrix does not match {} targets",
                g.unitary.dim(),
                g.unitary.dim(),
                g.targets.len()
            )));
        }
        let deviation = g.unitary.unitarity_deviation();
        if deviation.is_nan() || deviation > UNITARITY_TOLERANCE {
            return Err(Error::Validation(format!(
                "layer {t}: intra gate on C_{} is not unitary (deviation {deviation:.3e})",
                g.cluster
            )));
        }
    }
    Ok(())
}

/// Incremental circuit construction with CZ/CNOT canonicalization.
///
/// A CZ becomes `ZZ(π/2)` followed by `S†` on both qubits; a CNOT becomes
/// `ZX(π/2)` followed by `S†` on the control and `H S† H` on the target. Each
/// contributes a global phase of `π/4`. The local corrections are merged in
/// front of the layer's own intra gate on the same cluster.
#[derive(Debug, Clone)]
pub struct CircuitBuilder {
    layout: ClusterLayout,
    layers: Vec<PendingLayer>,
    global_phase: f64,
}

#[derive(Debug, Clone, Default)]
struct PendingLayer {
    inter: Vec<InterGate>,
    corrections: Vec<(usize, Matrix)>,
    intra: Vec<IntraGate>,
}

impl CircuitBuilder {
    pub fn new(layout: ClusterLayout) -> Self {
        CircuitBuilder {
            layout,
            layers: Vec::new(),
            global_phase: 0.0,
        }
    }

    pub fn layout(&self) -> &ClusterLayout {
        &self.layout
    }

    /// Open a new layer; subsequent gates land in it.
    pub fn layer(&mut self) -> &mut Self {
        self.layers.push(PendingLayer::default());
        self
    }

    fn current(&mut self) -> &mut PendingLayer {
        if self.layers.is_empty() {
            self.layers.push(PendingLayer::default());
        }
        self.layers.last_mut().unwrap()
    }

    pub fn inter(&mut self, pauli_a: Pauli, qubit_a: usize, pauli_b: Pauli, qubit_b: usize, theta: f64) -> &mut Self {
        self.current().inter.push(InterGate {
            pauli_a,
            qubit_a,
            pauli_b,
            qubit_b,
            theta,
        });
        self
    }

    pub fn zz(&mut self, qubit_a: usize, qubit_b: usize, theta: f64) -> &mut Self {
        self.inter(Pauli::Z, qubit_a, Pauli::Z, qubit_b, theta)
    }

    /// Intra gate on the cluster owning the first target.
    pub fn intra(&mut self, unitary: Matrix, targets: &[usize]) -> &mut Self {
        let cluster = targets.first().map_or(usize::MAX, |&q| q / self.layout.cluster_size());
        self.intra_on(cluster, unitary, targets)
    }

    pub fn intra_on(&mut self, cluster: usize, unitary: Matrix, targets: &[usize]) -> &mut Self {
        self.current().intra.push(IntraGate {
            cluster,
            targets: targets.to_vec(),
            unitary,
        });
        self
    }

    pub fn cz(&mut self, a: usize, b: usize) -> &mut Self {
        self.zz(a, b, FRAC_PI_2);
        let layer = self.current();
        layer.corrections.push((a, gates::s_dagger()));
        layer.corrections.push((b, gates::s_dagger()));
        self.global_phase += FRAC_PI_4;
        self
    }

    pub fn cnot(&mut self, control: usize, target: usize) -> &mut Self {
        self.inter(Pauli::Z, control, Pauli::X, target, FRAC_PI_2);
        let h = gates::hadamard();
        let sqrt_x_dag = h.matmul(&gates::s_dagger()).matmul(&h);
        let layer = self.current();
        layer.corrections.push((control, gates::s_dagger()));
        layer.corrections.push((target, sqrt_x_dag));
        self.global_phase += FRAC_PI_4;
        self
    }

    pub fn build(&self) -> Result<ClusteredCircuit> {
        let d = self.layout.cluster_size();
        let mut layers = Vec::with_capacity(self.layers.len());
        for pending in &self.layers {
            let mut intra = pending.intra.clone();
            let mut by_cluster: BTreeMap<usize, Vec<&(usize, Matrix)>> = BTreeMap::new();
            for corr in &pending.corrections {
                self.layout
                    .cluster_of(corr.0)
                    .map_err(|e| Error::Validation(e.to_string()))?;
                by_cluster.entry(corr.0 / d).or_default().push(corr);
            }
            for (cluster, corrections) in by_cluster {
                let existing = intra.iter().position(|g| g.cluster == cluster);
                let mut targets: Vec<usize> = existing.map(|i| intra[i].targets.clone()).unwrap_or_default();
                for (q, _) in &corrections {
                    if !targets.contains(q) {
                        targets.push(*q);
                    }
                }
                let mut combined = Matrix::identity(1 << targets.len());
                for (q, m) in &corrections {
                    combined = embed_operator(m, &[*q], &targets).matmul(&combined);
                }
                if let Some(i) = existing {
                    let own = embed_operator(&intra[i].unitary, &intra[i].targets, &targets);
                    combined = own.matmul(&combined);
                    intra[i] = IntraGate {
                        cluster,
                        targets,
                        unitary: combined,
                    };
                } else {
                    intra.push(IntraGate {
                        cluster,
                        targets,
                        unitary: combined,
                    });
                }
            }
            intra.sort_by_key(|g| g.cluster);
            layers.push(Layer {
                inter: pending.inter.clone(),
                intra,
            });
        }
        let phase = self.global_phase.rem_euclid(2.0 * PI);
        ClusteredCircuit::with_phase(self.layout.clone(), layers, phase)
    }
}

/// Tensor product of single-qubit Paulis; qubits absent from the map carry
/// the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PauliString {
    letters: BTreeMap<usize, Pauli>,
}

impl PauliString {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn single(qubit: usize, pauli: Pauli) -> Self {
        let mut letters = BTreeMap::new();
        letters.insert(qubit, pauli);
        PauliString { letters }
    }

    pub fn from_letters(letters: impl IntoIterator<Item = (usize, Pauli)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (q, p) in letters {
            if map.insert(q, p).is_some() {
                return Err(Error::Validation(format!("qubit q{q} appears twice in a Pauli string")));
            }
        }
        Ok(PauliString { letters: map })
    }

    pub fn letters(&self) -> &BTreeMap<usize, Pauli> {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.letters.len()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.letters.keys().copied()
    }

    pub fn get(&self, qubit: usize) -> Option<Pauli> {
        self.letters.get(&qubit).copied()
    }

    /// Clusters carrying a non-identity letter.
    pub fn clusters(&self, layout: &ClusterLayout) -> BTreeSet<usize> {
        self.support().map(|q| q / layout.cluster_size()).collect()
    }

    pub fn restrict(&self, keep: impl Fn(usize) -> bool) -> PauliString {
        PauliString {
            letters: self
                .letters
                .iter()
                .filter(|(q, _)| keep(**q))
                .map(|(&q, &p)| (q, p))
                .collect(),
        }
    }

    pub fn check_within(&self, layout: &ClusterLayout) -> Result<()> {
        match self.letters.keys().next_back() {
            Some(&q) if q >= layout.num_qubits() => Err(Error::Domain(format!(
                "Pauli string acts on q{q} but the layout has {} qubits",
                layout.num_qubits()
            ))),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "I");
        }
        let parts: Vec<String> = self.letters.iter().map(|(q, p)| format!("{p}q{q}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Number of distinct clusters on which `pauli` acts non-trivially.
pub fn cluster_weight(pauli: &PauliString, layout: &ClusterLayout) -> usize {
    pauli.clusters(layout).len()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coefficient: f64,
    pub pauli: PauliString,
}

/// Real linear combination of Pauli strings. Zero coefficients are dropped.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Observable {
    terms: Vec<Term>,
}

impl Observable {
    pub fn new(terms: impl IntoIterator<Item = (f64, PauliString)>) -> Result<Self> {
        let mut out = Vec::new();
        for (coefficient, pauli) in terms {
            if !coefficient.is_finite() {
                return Err(Error::Validation(format!("non-finite coefficient {coefficient}")));
            }
            if coefficient != 0.0 {
                out.push(Term { coefficient, pauli });
            }
        }
        Ok(Observable { terms: out })
    }

    pub fn single(coefficient: f64, pauli: PauliString) -> Self {
        Observable::new([(coefficient, pauli)]).expect("finite coefficient")
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Number of terms `m`.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `λ_c = Σ|c_α|`.
    pub fn one_norm(&self) -> f64 {
        self.terms.iter().map(|t| t.coefficient.abs()).sum()
    }

    /// Cluster locality `s`: the largest cluster weight over all terms.
    pub fn locality(&self, layout: &ClusterLayout) -> usize {
        self.terms
            .iter()
            .map(|t| cluster_weight(&t.pauli, layout))
            .max()
            .unwrap_or(0)
    }

    pub fn check_within(&self, layout: &ClusterLayout) -> Result<()> {
        self.terms.iter().try_for_each(|t| t.pauli.check_within(layout))
    }

    /// Scale every coefficient.
    pub fn scaled(&self, factor: f64) -> Observable {
        Observable::new(self.terms.iter().map(|t| (t.coefficient * factor, t.pauli.clone())))
            .expect("finite scale factor")
    }
}
