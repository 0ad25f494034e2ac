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

//! Simulated device sampling: ±1 Pauli measurements and Hadamard tests.
//!
//! Randomness is drawn from ChaCha8 streams keyed by `(seed, stream id)`, so
//! every task replays the same outcomes no matter which thread runs it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::circuit::{ClusteredCircuit, PauliString};
use crate::error::{Error, Result};
use crate::linalg::{gates, Matrix, C64, ONE};
use crate::statevector::{GateSequence, LocalGate, Oracle, StateVector};

/// Identifies an independent random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StreamId {
    /// Measurement of component `component` of term `term`.
    Component { term: usize, component: usize },
    /// Hadamard test for branch pair `(j, k)` on cone cluster `cluster`.
    CrossTerm {
        term: usize,
        j: usize,
        k: usize,
        cluster: usize,
    },
    /// Free-form stream for tests and studies.
    Custom(u64, u64),
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

impl StreamId {
    /// 64-bit stream selector.
    pub fn key(&self) -> u64 {
        let words: [u64; 5] = match *self {
            StreamId::Component { term, component } => [1, term as u64, component as u64, 0, 0],
            StreamId::CrossTerm { term, j, k, cluster } => [2, term as u64, j as u64, k as u64, cluster as u64],
            StreamId::Custom(a, b) => [3, a, b, 0, 0],
        };
        words.iter().fold(0u64, |h, &w| splitmix(h ^ w))
    }
}

/// A reproducible source of shot outcomes.
#[derive(Debug, Clone)]
pub struct ShotStream {
    seed: u64,
    stream_id: StreamId,
    counter: u64,
    rng: ChaCha8Rng,
}

impl ShotStream {
    pub fn new(seed: u64, stream_id: StreamId) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id.key());
        ShotStream {
            seed,
            stream_id,
            counter: 0,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> StreamId {
        self.stream_id
    }

    /// Number of shots drawn so far.
    pub fn counter(&self) -> u64 {
        self.counter
    }

    /// Mean and unbiased variance of `shots` ±1 outcomes with `P(+1) = p_plus`.
    pub fn sample_pm1(&mut self, p_plus: f64, shots: u64) -> Result<PauliSample> {
        if shots == 0 {
            return Err(Error::Domain("shot count must be at least 1".into()));
        }
        if !p_plus.is_finite() || !(-1e-9..=1.0 + 1e-9).contains(&p_plus) {
            return Err(Error::Domain(format!("outcome probability {p_plus} outside [0, 1]")));
        }
        let p = p_plus.clamp(0.0, 1.0);
        let plus = Binomial::new(shots, p)
            .expect("valid binomial parameters")
            .sample(&mut self.rng);
        self.counter += shots;
        Ok(PauliSample::from_counts(plus, shots))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PauliSample {
    pub shots: u64,
    pub mean: f64,
    /// Unbiased sample variance of the outcomes (0 for a single shot).
    pub variance: f64,
}

impl PauliSample {
    fn from_counts(plus: u64, shots: u64) -> Self {
        let n = shots as f64;
        let mean = (2.0 * plus as f64 - n) / n;
        let variance = if shots > 1 {
            (n / (n - 1.0)) * (1.0 - mean * mean).max(0.0)
        } else {
            0.0
        };
        PauliSample { shots, mean, variance }
    }
}

/// Measure `pauli` on `circuit|0⟩` `shots` times.
pub fn sample_pauli_measurement(
    circuit: &ClusteredCircuit,
    pauli: &PauliString,
    shots: u64,
    stream: &mut ShotStream,
) -> Result<PauliSample> {
    if shots == 0 {
        return Err(Error::Domain("shot count must be at least 1".into()));
    }
    let mu = Oracle::default().exact_expectation(circuit, pauli)?;
    stream.sample_pm1((1.0 + mu) / 2.0, shots)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HadamardMode {
    /// Sample directly from the oracle amplitude.
    #[default]
    Shortcut,
    /// Simulate the ancilla-controlled circuit.
    Circuit,
}

impl std::str::FromStr for HadamardMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shortcut" => Ok(HadamardMode::Shortcut),
            "circuit" => Ok(HadamardMode::Circuit),
            other => Err(Error::Config(format!(
                "unknown Hadamard mode `{other}` (expected shortcut or circuit)"
            ))),
        }
    }
}

/// Split `K` shots into real and imaginary branches; the real branch takes the odd shot.
pub fn split_shots(total: u64) -> (u64, u64) {
    (total.div_ceil(2), total / 2)
}

/// Register label of the ancilla in simulated Hadamard-test circuits.
pub const ANCILLA: usize = usize::MAX;

fn controlled(m: &Matrix, on_one: bool) -> Matrix {
    let d = m.dim();
    let mut out = Matrix::zeros(2 * d);
    let (active, idle) = if on_one { (d, 0) } else { (0, d) };
    for r in 0..d {
        out.set(idle + r, idle + r, ONE);
        for c in 0..d {
            out.set(active + r, active + c, m.get(r, c));
        }
    }
    out
}

/// The `(1 + d)`-qubit Hadamard-test circuit for `⟨ψ_j|P|ψ_k⟩`, before measurement of the ancilla.
///
/// With `imaginary` set the ancilla gets `S†` before the final Hadamard.
pub fn hadamard_test_circuit(
    prep_j: &GateSequence,
    prep_k: &GateSequence,
    pauli: &PauliString,
    imaginary: bool,
) -> GateSequence {
    let mut qubits = vec![ANCILLA];
    qubits.extend(&prep_j.qubits);
    let mut seq = GateSequence::new(qubits);
    seq.push(LocalGate::new(vec![ANCILLA], gates::hadamard()));
    let with_control = |g: &LocalGate, on_one: bool| {
        let mut targets = vec![ANCILLA];
        targets.extend(&g.targets);
        LocalGate::new(targets, controlled(&g.matrix, on_one))
    };
    for g in &prep_j.gates {
        seq.push(with_control(g, false));
    }
    for g in &prep_k.gates {
        seq.push(with_control(g, true));
    }
    for (&q, &p) in pauli.letters() {
        seq.push(with_control(&LocalGate::pauli(q, p), true));
    }
    if imaginary {
        seq.push(LocalGate::new(vec![ANCILLA], gates::s_dagger()));
    }
    seq.push(LocalGate::new(vec![ANCILLA], gates::hadamard()));
    seq
}

/// Outcome probabilities of the two Hadamard tests for one amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HadamardTest {
    /// Exact `⟨ψ_j|P|ψ_k⟩`.
    pub amplitude: C64,
    /// `P(+1)` of the real-part test.
    pub p_real: f64,
    /// `P(+1)` of the imaginary-part test.
    pub p_imag: f64,
    /// Qubits on the simulated device.
    pub device_qubits: usize,
}

impl HadamardTest {
    pub fn prepare(
        prep_j: &GateSequence,
        prep_k: &GateSequence,
        pauli: &PauliString,
        mode: HadamardMode,
    ) -> Result<Self> {
        if prep_j.qubits != prep_k.qubits {
            return Err(Error::Domain(
                "Hadamard test sequences act on different registers".into(),
            ));
        }
        if let Some(q) = pauli.support().find(|q| !prep_j.qubits.contains(q)) {
            return Err(Error::Domain(format!("Pauli letter on q{q} outside the register")));
        }
        let device_qubits = prep_j.qubits.len() + 1;
        let a = prep_j.prepare()?;
        let b = prep_k.prepare()?;
        let amplitude = a.pauli_matrix_element(pauli, &b);
        let (p_real, p_imag) = match mode {
            HadamardMode::Shortcut => ((1.0 + amplitude.re) / 2.0, (1.0 + amplitude.im) / 2.0),
            HadamardMode::Circuit => {
                let p = |imaginary| -> Result<f64> {
                    let circuit = hadamard_test_circuit(prep_j, prep_k, pauli, imaginary);
                    let state: StateVector = circuit.prepare()?;
                    Ok(state.probability_zero(ANCILLA))
                };
                (p(false)?, p(true)?)
            }
        };
        Ok(HadamardTest {
            amplitude,
            p_real,
            p_imag,
            device_qubits,
        })
    }

    /// Build directly from a known amplitude (shortcut path).
    pub fn from_amplitude(amplitude: C64, device_qubits: usize) -> Self {
        HadamardTest {
            amplitude,
            p_real: (1.0 + amplitude.re) / 2.0,
            p_imag: (1.0 + amplitude.im) / 2.0,
            device_qubits,
        }
    }

    /// Run both tests; the real branch is drawn first from `stream`.
    pub fn sample(&self, shots_real: u64, shots_imag: u64, stream: &mut ShotStream) -> Result<C64> {
        let re = stream.sample_pm1(self.p_real, shots_real)?.mean;
        let im = stream.sample_pm1(self.p_imag, shots_imag)?.mean;
        Ok(C64::new(re, im))
    }

    /// Closed-form `E|estimate|²` for `shots_real + shots_imag` shots.
    pub fn second_moment(&self, shots_real: u64, shots_imag: u64) -> f64 {
        let (re, im) = (self.amplitude.re, self.amplitude.im);
        re * re + im * im + (1.0 - re * re) / shots_real as f64 + (1.0 - im * im) / shots_imag as f64
    }
}

/// Estimate `⟨ψ_j|P|ψ_k⟩` from two independent Hadamard tests.
pub fn hadamard_test(
    prep_j: &GateSequence,
    prep_k: &GateSequence,
    pauli: &PauliString,
    shots_real: u64,
    shots_imag: u64,
    stream: &mut ShotStream,
    mode: HadamardMode,
) -> Result<C64> {
    if shots_real == 0 || shots_imag == 0 {
        return Err(Error::Domain(
            "each Hadamard-test branch needs at least one shot".into(),
        ));
    }
    HadamardTest::prepare(prep_j, prep_k, pauli, mode)?.sample(shots_real, shots_imag, stream)
}

/// `E|X|²` for a Hadamard-test estimate of modulus `|μ|` with `K` total shots split evenly.
pub fn second_moment_law(modulus_sq: f64, shots: u64) -> f64 {
    modulus_sq + 2.0 * (2.0 - modulus_sq) / shots as f64
}
