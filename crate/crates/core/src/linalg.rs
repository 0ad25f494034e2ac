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

//! Small dense complex matrices used for gate unitaries and operator checks.

use std::fmt;

pub use num_complex::Complex64 as C64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// A square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<C64>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Matrix {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    /// Build from row-major entries. Returns `None` unless `data.len()` is a square.
    pub fn from_row_major(data: Vec<C64>) -> Option<Self> {
        let dim = (data.len() as f64).sqrt().round() as usize;
        (dim * dim == data.len() && dim > 0).then_some(Matrix { dim, data })
    }

    pub fn from_rows<const N: usize>(rows: [[C64; N]; N]) -> Self {
        Matrix {
            dim: N,
            data: rows.iter().flat_map(|r| r.iter().copied()).collect(),
        }
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m.data[i * entries.len() + i] = e;
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    /// Number of qubits when the dimension is a power of two.
    pub fn num_qubits(&self) -> Option<usize> {
        self.dim.is_power_of_two().then(|| self.dim.trailing_zeros() as usize)
    }

    pub fn adjoint(&self) -> Matrix {
        let mut out = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.data[c * self.dim + r] = self.data[r * self.dim + c].conj();
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * rhs.data[k * n + c];
                }
            }
        }
        out
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Matrix) -> Matrix {
        let n = self.dim * rhs.dim;
        let mut out = Self::zeros(n);
        for r1 in 0..self.dim {
            for c1 in 0..self.dim {
                let a = self.data[r1 * self.dim + c1];
                for r2 in 0..rhs.dim {
                    for c2 in 0..rhs.dim {
                        out.data[(r1 * rhs.dim + r2) * n + c1 * rhs.dim + c2] = a * rhs.data[r2 * rhs.dim + c2];
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, factor: C64) -> Matrix {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(|&x| x * factor).collect(),
        }
    }

    pub fn add_assign_scaled(&mut self, other: &Matrix, factor: C64) {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += b * factor;
        }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `‖U†U − I‖_max`.
    pub fn unitarity_deviation(&self) -> f64 {
        self.adjoint().matmul(self).max_abs_diff(&Matrix::identity(self.dim))
    }

    /// Multiply a vector in place-free fashion.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let n = self.dim;
        (0..n)
            .map(|r| (0..n).map(|c| self.data[r * n + c] * v[c]).sum())
            .collect()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix({}x{}) [", self.dim, self.dim)?;
        for r in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|c| {
                    let z = self.get(r, c);
                    format!("{:.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Expand `op`, acting on `sub` (first entry = most significant bit of the
/// matrix index), to an operator on `full`. Every element of `sub` must appear
/// in `full`.
pub fn embed_operator(op: &Matrix, sub: &[usize], full: &[usize]) -> Matrix {
    let k = sub.len();
    let n = full.len();
    assert_eq!(op.dim(), 1 << k, "operator does not match target count");
    let pos: Vec<usize> = sub
        .iter()
        .map(|q| {
            full.iter()
                .position(|f| f == q)
                .expect("sub target missing from full target list")
        })
        .collect();
    // Bit of `full` index for target at position p (MSB first).
    let bit = |p: usize| n - 1 - p;
    let sub_mask: usize = pos.iter().map(|&p| 1usize << bit(p)).sum();
    let extract = |idx: usize| -> usize { pos.iter().fold(0usize, |acc, &p| (acc << 1) | ((idx >> bit(p)) & 1)) };
    let dim = 1usize << n;
    let mut out = Matrix::zeros(dim);
    for row in 0..dim {
        for col in 0..dim {
            if row & !sub_mask != col & !sub_mask {
                continue;
            }
            out.set(row, col, op.get(extract(row), extract(col)));
        }
    }
    out
}

pub mod gates {
    //! Fixed single-qubit matrices.
    use super::{Matrix, C64, I, ONE, ZERO};
    use std::f64::consts::FRAC_1_SQRT_2;

    pub fn hadamard() -> Matrix {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        Matrix::from_rows([[h, h], [h, -h]])
    }

    pub fn pauli_x() -> Matrix {
        Matrix::from_rows([[ZERO, ONE], [ONE, ZERO]])
    }

    pub fn pauli_y() -> Matrix {
        Matrix::from_rows([[ZERO, -I], [I, ZERO]])
    }

    pub fn pauli_z() -> Matrix {
        Matrix::diagonal(&[ONE, -ONE])
    }

    pub fn s_dagger() -> Matrix {
        Matrix::diagonal(&[ONE, -I])
    }

    /// `exp(-i θ/2 Z)`.
    pub fn rz(theta: f64) -> Matrix {
        Matrix::diagonal(&[C64::from_polar(1.0, -theta / 2.0), C64::from_polar(1.0, theta / 2.0)])
    }

    /// `exp(-i θ/2 X)`.
    pub fn rx(theta: f64) -> Matrix {
        let c = C64::new((theta / 2.0).cos(), 0.0);
        let s = C64::new(0.0, -(theta / 2.0).sin());
        Matrix::from_rows([[c, s], [s, c]])
    }

    /// `exp(-i θ/2 Y)`.
    pub fn ry(theta: f64) -> Matrix {
        let c = C64::new((theta / 2.0).cos(), 0.0);
        let s = C64::new((theta / 2.0).sin(), 0.0);
        Matrix::from_rows([[c, -s], [s, c]])
    }
}
