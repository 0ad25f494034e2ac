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

//! Dense statevector oracle.
//!
//! A [`StateVector`] simulates an ordered list of global qubits; simulated
//! qubit `i` is bit `i` of the amplitude index. Dense operators returned by
//! this module use the same convention over their qubit list.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::circuit::{ClusteredCircuit, InterGate, IntraGate, Observable, Pauli, PauliString};
use crate::error::{Error, Result};
use crate::lightcone::pauli_lightcone;
use crate::linalg::{Matrix, C64, ONE, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleLimits {
    /// Largest statevector simulation.
    pub max_state_qubits: usize,
    /// Largest dense operator construction.
    pub max_operator_qubits: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_state_qubits: 24,
            max_operator_qubits: 12,
        }
    }
}

/// A gate on a few qubits; `targets[0]` is the high bit of the matrix index.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalGate {
    pub targets: Vec<usize>,
    pub matrix: Matrix,
}

impl LocalGate {
    pub fn new(targets: Vec<usize>, matrix: Matrix) -> Self {
        debug_assert_eq!(matrix.dim(), 1 << targets.len());
        LocalGate { targets, matrix }
    }

    pub fn pauli(qubit: usize, pauli: Pauli) -> Self {
        LocalGate {
            targets: vec![qubit],
            matrix: pauli.matrix(),
        }
    }
}

impl From<&IntraGate> for LocalGate {
    fn from(g: &IntraGate) -> Self {
        LocalGate {
            targets: g.targets.clone(),
            matrix: g.unitary.clone(),
        }
    }
}

/// Ordered local gates on a fixed qubit register, applied to `|0…0⟩`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GateSequence {
    pub qubits: Vec<usize>,
    pub gates: Vec<LocalGate>,
}

impl GateSequence {
    pub fn new(qubits: Vec<usize>) -> Self {
        GateSequence {
            qubits,
            gates: Vec::new(),
        }
    }

    pub fn with_gates(qubits: Vec<usize>, gates: Vec<LocalGate>) -> Self {
        GateSequence { qubits, gates }
    }

    pub fn push(&mut self, gate: LocalGate) {
        self.gates.push(gate);
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    fn check(&self) -> Result<()> {
        for g in &self.gates {
            if let Some(q) = g.targets.iter().find(|q| !self.qubits.contains(q)) {
                return Err(Error::Domain(format!(
                    "gate target q{q} is outside the sequence register"
                )));
            }
        }
        Ok(())
    }

    /// State `sequence |0⟩` on the sequence register.
    pub fn prepare(&self) -> Result<StateVector> {
        self.check()?;
        let mut psi = StateVector::zero(self.qubits.clone());
        for g in &self.gates {
            psi.apply_unitary(&g.targets, &g.matrix);
        }
        Ok(psi)
    }

    /// Dense unitary of the sequence over its register.
    pub fn unitary(&self) -> Result<Matrix> {
        self.check()?;
        dense_from_columns(&self.qubits, |psi| {
            for g in &self.gates {
                psi.apply_unitary(&g.targets, &g.matrix);
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<C64>,
    qubits: Vec<usize>,
}

struct PauliMasks {
    x: usize,
    z: usize,
    phase: C64,
}

impl StateVector {
    /// `|0…0⟩` on the given global qubits.
    pub fn zero(qubits: Vec<usize>) -> Self {
        Self::basis(qubits, 0)
    }

    pub fn basis(qubits: Vec<usize>, index: usize) -> Self {
        let mut amplitudes = vec![ZERO; 1 << qubits.len()];
        amplitudes[index] = ONE;
        StateVector { amplitudes, qubits }
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn bit_of(&self, qubit: usize) -> usize {
        self.qubits
            .iter()
            .position(|&q| q == qubit)
            .unwrap_or_else(|| panic!("qubit q{qubit} is not simulated"))
    }

    /// Apply a `2^k × 2^k` matrix; `targets[0]` is the high bit of its index.
    pub fn apply_unitary(&mut self, targets: &[usize], matrix: &Matrix) {
        debug_assert_eq!(matrix.dim(), 1 << targets.len());
        match *targets {
            [q] => {
                let bit = self.bit_of(q);
                apply_1q(&mut self.amplitudes, bit, matrix.entries());
            }
            [qa, qb] => {
                let (hi, lo) = (self.bit_of(qa), self.bit_of(qb));
                apply_2q(&mut self.amplitudes, hi, lo, matrix.entries());
            }
            _ => {
                let bits: Vec<usize> = targets.iter().map(|&q| self.bit_of(q)).collect();
                apply_kq(&mut self.amplitudes, &bits, matrix);
            }
        }
    }

    pub fn apply_inter(&mut self, gate: &InterGate) {
        self.apply_unitary(&[gate.qubit_a, gate.qubit_b], &gate.matrix());
    }

    fn masks(&self, pauli: &PauliString) -> PauliMasks {
        let mut x = 0;
        let mut z = 0;
        let mut phase = ONE;
        for (&q, &p) in pauli.letters() {
            let bit = 1usize << self.bit_of(q);
            match p {
                Pauli::X => x |= bit,
                Pauli::Z => z |= bit,
                Pauli::Y => {
                    x |= bit;
                    z |= bit;
                    phase *= C64::new(0.0, 1.0);
                }
            }
        }
        PauliMasks { x, z, phase }
    }

    #[inline]
    fn pauli_phase(masks: &PauliMasks, index: usize) -> C64 {
        if (index & masks.z).count_ones() % 2 == 1 {
            -masks.phase
        } else {
            masks.phase
        }
    }

    pub fn apply_pauli(&mut self, pauli: &PauliString) {
        let masks = self.masks(pauli);
        let mut out = vec![ZERO; self.amplitudes.len()];
        for (i, &a) in self.amplitudes.iter().enumerate() {
            out[i ^ masks.x] = Self::pauli_phase(&masks, i) * a;
        }
        self.amplitudes = out;
    }

    /// `⟨ψ|P|ψ⟩`.
    pub fn pauli_expectation(&self, pauli: &PauliString) -> C64 {
        self.pauli_matrix_element(pauli, self)
    }

    /// `⟨self|P|other⟩`; both states must share the same register.
    pub fn pauli_matrix_element(&self, pauli: &PauliString, other: &StateVector) -> C64 {
        assert_eq!(self.qubits, other.qubits, "register mismatch");
        let masks = self.masks(pauli);
        other
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, &a)| self.amplitudes[i ^ masks.x].conj() * Self::pauli_phase(&masks, i) * a)
            .sum()
    }

    pub fn inner(&self, other: &StateVector) -> C64 {
        assert_eq!(self.qubits, other.qubits, "register mismatch");
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Probability that simulated qubit `qubit` reads 0.
    pub fn probability_zero(&self, qubit: usize) -> f64 {
        let bit = 1usize << self.bit_of(qubit);
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit == 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Apply every layer of `circuit` (global phase ignored).
    pub fn apply_circuit(&mut self, circuit: &ClusteredCircuit) {
        for layer in circuit.layers() {
            for g in &layer.inter {
                self.apply_inter(g);
            }
            for g in &layer.intra {
                self.apply_unitary(&g.targets, &g.unitary);
            }
        }
    }

    /// Apply `U†` for `circuit`.
    pub fn apply_circuit_inverse(&mut self, circuit: &ClusteredCircuit) {
        apply_all(self, &compile_inverse(circuit));
    }
}

/// Index with a zero inserted at bit position `bit`.
#[inline]
fn insert_zero(x: usize, bit: usize) -> usize {
    ((x >> bit) << (bit + 1)) | (x & ((1 << bit) - 1))
}

fn apply_1q(amps: &mut [C64], bit: usize, m: &[C64]) {
    let step = 1usize << bit;
    let (m00, m01, m10, m11) = (m[0], m[1], m[2], m[3]);
    for k in 0..amps.len() / 2 {
        let i = insert_zero(k, bit);
        let (a0, a1) = (amps[i], amps[i | step]);
        amps[i] = m00 * a0 + m01 * a1;
        amps[i | step] = m10 * a0 + m11 * a1;
    }
}

/// `hi` is the high bit of the 4×4 matrix index.
fn apply_2q(amps: &mut [C64], hi: usize, lo: usize, m: &[C64]) {
    let (b_hi, b_lo) = (1usize << hi, 1usize << lo);
    let (first, second) = if hi < lo { (hi, lo) } else { (lo, hi) };
    let offsets = [0, b_lo, b_hi, b_hi | b_lo];
    for k in 0..amps.len() / 4 {
        let base = insert_zero(insert_zero(k, first), second);
        let v = [
            amps[base],
            amps[base | offsets[1]],
            amps[base | offsets[2]],
            amps[base | offsets[3]],
        ];
        for (r, &off) in offsets.iter().enumerate() {
            let row = &m[4 * r..4 * r + 4];
            amps[base | off] = row[0] * v[0] + row[1] * v[1] + row[2] * v[2] + row[3] * v[3];
        }
    }
}

fn apply_kq(amps: &mut [C64], bits: &[usize], matrix: &Matrix) {
    let k = bits.len();
    let dim = 1usize << k;
    let mut sorted = bits.to_vec();
    sorted.sort_unstable();
    let offsets: Vec<usize> = (0..dim)
        .map(|sub| {
            (0..k)
                .filter(|&j| sub >> (k - 1 - j) & 1 == 1)
                .map(|j| 1usize << bits[j])
                .sum()
        })
        .collect();
    let mut gathered = vec![ZERO; dim];
    for idx in 0..amps.len() >> k {
        let base = sorted.iter().fold(idx, |x, &b| insert_zero(x, b));
        for (slot, &off) in gathered.iter_mut().zip(&offsets) {
            *slot = amps[base | off];
        }
        for (r, &off) in offsets.iter().enumerate() {
            let row = &matrix.entries()[r * dim..(r + 1) * dim];
            amps[base | off] = row.iter().zip(&gathered).map(|(a, b)| a * b).sum();
        }
    }
}

/// Gate list of a circuit with matrices materialized once.
fn compile(circuit: &ClusteredCircuit) -> Vec<LocalGate> {
    let mut out = Vec::new();
    for layer in circuit.layers() {
        for g in &layer.inter {
            out.push(LocalGate::new(vec![g.qubit_a, g.qubit_b], g.matrix()));
        }
        for g in &layer.intra {
            out.push(LocalGate::from(g));
        }
    }
    out
}

fn compile_inverse(circuit: &ClusteredCircuit) -> Vec<LocalGate> {
    compile(circuit)
        .into_iter()
        .rev()
        .map(|g| LocalGate::new(g.targets, g.matrix.adjoint()))
        .collect()
}

fn apply_all(psi: &mut StateVector, gates: &[LocalGate]) {
    for g in gates {
        psi.apply_unitary(&g.targets, &g.matrix);
    }
}

fn dense_from_columns(qubits: &[usize], mut apply: impl FnMut(&mut StateVector)) -> Result<Matrix> {
    // All columns at once: the flat row-major buffer is a state on
    // `n` placeholder column qubits (low bits) followed by the register.
    let n = qubits.len();
    let dim = 1usize << n;
    let mut register: Vec<usize> = (0..n).map(|i| COLUMN_QUBIT_BASE - i).collect();
    register.extend_from_slice(qubits);
    let mut amplitudes = vec![ZERO; dim * dim];
    for i in 0..dim {
        amplitudes[i * dim + i] = ONE;
    }
    let mut psi = StateVector {
        amplitudes,
        qubits: register,
    };
    apply(&mut psi);
    Ok(Matrix::from_row_major(psi.amplitudes).expect("square buffer"))
}

/// Placeholder ids for column qubits, far from any layout index.
const COLUMN_QUBIT_BASE: usize = usize::MAX - 1;

/// Exact simulation routines with configurable capacity.
#[derive(Debug, Clone, Copy, Default)]
pub struct Oracle {
    pub limits: OracleLimits,
}

impl Oracle {
    pub fn new(limits: OracleLimits) -> Self {
        Oracle { limits }
    }

    fn register(&self, circuit: &ClusteredCircuit, pauli: &PauliString) -> Result<Vec<usize>> {
        pauli.check_within(circuit.layout())?;
        let mut qubits: BTreeSet<usize> = circuit.active_qubits();
        qubits.extend(pauli.support());
        if qubits.len() > self.limits.max_state_qubits {
            return Err(Error::capacity(
                "statevector simulation",
                qubits.len(),
                self.limits.max_state_qubits,
            ));
        }
        Ok(qubits.into_iter().collect())
    }

    /// Complex `⟨0|U†PU|0⟩` before discarding the imaginary rounding residue.
    pub fn expectation_complex(&self, circuit: &ClusteredCircuit, pauli: &PauliString) -> Result<C64> {
        if pauli.is_identity() {
            return Ok(ONE);
        }
        let qubits = self.register(circuit, pauli)?;
        let mut psi = StateVector::zero(qubits);
        psi.apply_circuit(circuit);
        Ok(psi.pauli_expectation(pauli))
    }

    /// `⟨0|U†PU|0⟩`. Qubits untouched by the circuit and the string are not simulated.
    pub fn exact_expectation(&self, circuit: &ClusteredCircuit, pauli: &PauliString) -> Result<f64> {
        Ok(self.expectation_complex(circuit, pauli)?.re)
    }

    /// `Σ_α c_α ⟨P_α⟩`, each term simulated on its light-cone circuit.
    pub fn exact_observable_expectation(&self, circuit: &ClusteredCircuit, obs: &Observable) -> Result<f64> {
        let mut total = 0.0;
        for (alpha, term) in obs.terms().iter().enumerate() {
            let cone = pauli_lightcone(circuit, &term.pauli)?;
            let value = self
                .exact_expectation(&cone.restricted, &term.pauli)
                .map_err(|e| match e {
                    Error::Capacity { required, limit, .. } => {
                        Error::capacity(format!("light cone of term {alpha}"), required, limit)
                    }
                    other => other,
                })?;
            total += term.coefficient * value;
        }
        Ok(total)
    }

    fn check_operator_size(&self, n: usize) -> Result<()> {
        if n > self.limits.max_operator_qubits {
            return Err(Error::capacity(
                "dense operator construction",
                n,
                self.limits.max_operator_qubits,
            ));
        }
        Ok(())
    }

    /// Dense `U†PU` over every qubit of the layout.
    pub fn heisenberg_operator(&self, circuit: &ClusteredCircuit, pauli: &PauliString) -> Result<Matrix> {
        let qubits: Vec<usize> = (0..circuit.num_qubits()).collect();
        self.heisenberg_operator_on(circuit, pauli, &qubits)
    }

    /// Dense `U†PU` over `qubits`, which must cover the circuit and the string.
    pub fn heisenberg_operator_on(
        &self,
        circuit: &ClusteredCircuit,
        pauli: &PauliString,
        qubits: &[usize],
    ) -> Result<Matrix> {
        self.check_operator_size(qubits.len())?;
        pauli.check_within(circuit.layout())?;
        let register: BTreeSet<usize> = qubits.iter().copied().collect();
        if let Some(q) = circuit
            .active_qubits()
            .into_iter()
            .chain(pauli.support())
            .find(|q| !register.contains(q))
        {
            return Err(Error::Domain(format!("qubit q{q} is outside the operator register")));
        }
        let forward = compile(circuit);
        let inverse = compile_inverse(circuit);
        dense_from_columns(qubits, |psi| {
            apply_all(psi, &forward);
            psi.apply_pauli(pauli);
            apply_all(psi, &inverse);
        })
    }

    /// Dense circuit unitary over `qubits` (global phase ignored).
    pub fn circuit_unitary(&self, circuit: &ClusteredCircuit, qubits: &[usize]) -> Result<Matrix> {
        self.check_operator_size(qubits.len())?;
        let forward = compile(circuit);
        dense_from_columns(qubits, |psi| apply_all(psi, &forward))
    }
}

pub fn exact_expectation(circuit: &ClusteredCircuit, pauli: &PauliString) -> Result<f64> {
    Oracle::default().exact_expectation(circuit, pauli)
}

pub fn exact_observable_expectation(circuit: &ClusteredCircuit, obs: &Observable) -> Result<f64> {
    Oracle::default().exact_observable_expectation(circuit, obs)
}

pub fn heisenberg_operator(circuit: &ClusteredCircuit, pauli: &PauliString) -> Result<Matrix> {
    Oracle::default().heisenberg_operator(circuit, pauli)
}

/// Dense matrix of a Pauli string over `qubits`.
pub fn pauli_operator(pauli: &PauliString, qubits: &[usize]) -> Matrix {
    dense_from_columns(qubits, |psi| psi.apply_pauli(pauli)).expect("dense build")
}

/// `⟨ψ_a|P|ψ_b⟩` with `|ψ_x⟩ = (sequence x)|0⟩`.
pub fn transition_amplitude(prep_a: &GateSequence, prep_b: &GateSequence, pauli: &PauliString) -> Result<C64> {
    if prep_a.qubits != prep_b.qubits {
        return Err(Error::Domain(format!(
            "sequences act on different registers {:?} and {:?}",
            prep_a.qubits, prep_b.qubits
        )));
    }
    if let Some(q) = pauli.support().find(|q| !prep_a.qubits.contains(q)) {
        return Err(Error::Domain(format!("Pauli letter on q{q} outside the register")));
    }
    let a = prep_a.prepare()?;
    let b = prep_b.prepare()?;
    Ok(a.pauli_matrix_element(pauli, &b))
}
