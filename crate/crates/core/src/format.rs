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

//! Line-oriented text formats for circuits and observables.
//!
//! Circuit files:
//!
//! ```text
//! # comment
//! layout lattice D=1 extents=3 d=1      # or: layout all_to_all N=<int> d=<int>
//! phase 0.7853981633974483              # optional, written by serialize_circuit
//! layer
//! inter ZZ(pi/2) q0 q1
//! intra c2 [0.7071, 0.7071; 0.7071, -0.7071] q2
//! cz q1 q2
//! cnot q1 q2
//! ```
//!
//! Matrix entries are row-major, columns separated by `,` and rows by `;`.
//! Entries are real numbers or complex literals such as `0.5-0.5i` or `-i`.
//! Angles accept plain numbers or multiples of `pi` (`pi/2`, `-0.25*pi`).
//!
//! Observable files hold one `term <coeff> <P>q<idx> ...` line per Pauli
//! string; a term without letters is the identity.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::circuit::{CircuitBuilder, ClusterLayout, ClusteredCircuit, Observable, Pauli, PauliString, Topology};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, C64};

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
    .trim()
}

fn parse_qubit(token: &str, line: usize) -> Result<usize> {
    token
        .strip_prefix('q')
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::parse(line, format!("expected qubit like q3, found `{token}`")))
}

fn parse_key_value<'a>(token: &'a str, key: &str, line: usize) -> Result<&'a str> {
    token
        .strip_prefix(key)
        .and_then(|s| s.strip_prefix('='))
        .ok_or_else(|| Error::parse(line, format!("expected {key}=..., found `{token}`")))
}

fn parse_usize(s: &str, line: usize) -> Result<usize> {
    s.parse()
        .map_err(|_| Error::parse(line, format!("expected a non-negative integer, found `{s}`")))
}

fn parse_f64(s: &str, line: usize) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::parse(line, format!("expected a number, found `{s}`")))?;
    if !v.is_finite() {
        return Err(Error::parse(line, format!("non-finite number `{s}`")));
    }
    Ok(v)
}

/// Angle literal: a number, or `[-][<factor>*]pi[/<divisor>]`.
pub fn parse_angle(s: &str, line: usize) -> Result<f64> {
    let s = s.trim();
    if !s.contains("pi") {
        return parse_f64(s, line);
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, s),
    };
    let (factor, rest) = match body.split_once("*") {
        Some((f, rest)) => (parse_f64(f, line)?, rest),
        None => (1.0, body),
    };
    let rest = rest
        .strip_prefix("pi")
        .ok_or_else(|| Error::parse(line, format!("malformed angle `{s}`")))?;
    let divisor = match rest.strip_prefix('/') {
        Some(d) => parse_f64(d, line)?,
        None if rest.is_empty() => 1.0,
        None => return Err(Error::parse(line, format!("malformed angle `{s}`"))),
    };
    Ok(sign * factor * PI / divisor)
}

/// Complex literal: `1`, `-0.5`, `0.5+2i`, `1e-3-2i`, `i`, `-i`, `3i`.
pub fn parse_complex(s: &str, line: usize) -> Result<C64> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::parse(line, "empty matrix entry"));
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok(C64::new(parse_f64(&s, line)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |part: &str| -> Result<f64> {
        match part {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            p => parse_f64(p, line),
        }
    };
    match split {
        Some(k) => Ok(C64::new(parse_f64(&body[..k], line)?, imag(&body[k..])?)),
        None => Ok(C64::new(0.0, imag(body)?)),
    }
}

fn parse_matrix(s: &str, line: usize) -> Result<Matrix> {
    let mut entries = Vec::new();
    let mut rows = 0usize;
    let mut width = None;
    for row in s.split(';') {
        let row_entries: Vec<C64> = row.split(',').map(|e| parse_complex(e, line)).collect::<Result<_>>()?;
        if *width.get_or_insert(row_entries.len()) != row_entries.len() {
            return Err(Error::parse(line, "matrix rows have different lengths"));
        }
        entries.extend(row_entries);
        rows += 1;
    }
    if width != Some(rows) {
        return Err(Error::parse(
            line,
            format!("matrix is {rows}x{} rather than square", width.unwrap_or(0)),
        ));
    }
    Matrix::from_row_major(entries).ok_or_else(|| Error::parse(line, "empty matrix"))
}

fn parse_layout(tokens: &[&str], line: usize) -> Result<ClusterLayout> {
    match tokens {
        ["lattice", dim, extents, d] => {
            let dim = parse_usize(parse_key_value(dim, "D", line)?, line)?;
            let extents: Vec<usize> = parse_key_value(extents, "extents", line)?
                .split('x')
                .map(|e| parse_usize(e, line))
                .collect::<Result<_>>()?;
            if extents.len() != dim {
                return Err(Error::parse(
                    line,
                    format!("D={dim} but {} extents given", extents.len()),
                ));
            }
            let d = parse_usize(parse_key_value(d, "d", line)?, line)?;
            ClusterLayout::lattice(extents, d).map_err(|e| Error::parse(line, e.to_string()))
        }
        ["all_to_all", n, d] => {
            let n = parse_usize(parse_key_value(n, "N", line)?, line)?;
            let d = parse_usize(parse_key_value(d, "d", line)?, line)?;
            ClusterLayout::all_to_all(n, d).map_err(|e| Error::parse(line, e.to_string()))
        }
        _ => Err(Error::parse(
            line,
            "expected `layout lattice D=<int> extents=<i1>x..x<iD> d=<int>` or `layout all_to_all N=<int> d=<int>`",
        )),
    }
}

/// Parse and validate a circuit file.
pub fn parse_circuit(text: &str) -> Result<ClusteredCircuit> {
    let mut builder: Option<CircuitBuilder> = None;
    let mut phase = 0.0;
    let mut in_layer = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = strip_comment(raw);
        if content.is_empty() {
            continue;
        }
        let (keyword, rest) = content
            .split_once(char::is_whitespace)
            .map_or((content, ""), |(k, r)| (k, r.trim()));
        if keyword == "layout" {
            if builder.is_some() {
                return Err(Error::parse(line, "layout declared twice"));
            }
            let tokens: Vec<&str> = rest.split_whitespace().collect();
            builder = Some(CircuitBuilder::new(parse_layout(&tokens, line)?));
            continue;
        }
        let b = builder
            .as_mut()
            .ok_or_else(|| Error::parse(line, "the first statement must be `layout ...`"))?;
        match keyword {
            "phase" => phase = parse_f64(rest, line)?,
            "layer" => {
                if !rest.is_empty() {
                    return Err(Error::parse(line, "`layer` takes no arguments"));
                }
                b.layer();
                in_layer = true;
            }
            _ if !in_layer => {
                return Err(Error::parse(
                    line,
                    format!("`{keyword}` appears before the first `layer`"),
                ))
            }
            "inter" => {
                let tokens: Vec<&str> = rest.split_whitespace().collect();
                let [rotation, qa, qb] = tokens[..] else {
                    return Err(Error::parse(line, "expected `inter <P><Q>(<theta>) q<a> q<b>`"));
                };
                let (letters, angle) = rotation
                    .strip_suffix(')')
                    .and_then(|s| s.split_once('('))
                    .ok_or_else(|| Error::parse(line, format!("malformed rotation `{rotation}`")))?;
                let mut chars = letters.chars();
                let (Some(pa), Some(pb), None) = (
                    chars.next().and_then(Pauli::from_char),
                    chars.next().and_then(Pauli::from_char),
                    chars.next(),
                ) else {
                    return Err(Error::parse(
                        line,
                        format!("expected two Pauli letters, found `{letters}`"),
                    ));
                };
                let theta = parse_angle(angle, line)?;
                b.inter(pa, parse_qubit(qa, line)?, pb, parse_qubit(qb, line)?, theta);
            }
            "intra" => {
                let (cluster, rest) = rest
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| Error::parse(line, "expected `intra c<j> [matrix] q<t>...`"))?;
                let cluster = cluster
                    .strip_prefix('c')
                    .and_then(|c| c.parse().ok())
                    .ok_or_else(|| Error::parse(line, format!("expected cluster like c2, found `{cluster}`")))?;
                let rest = rest.trim();
                let open = rest
                    .strip_prefix('[')
                    .ok_or_else(|| Error::parse(line, "matrix must start with `[`"))?;
                let (body, targets) = open
                    .split_once(']')
                    .ok_or_else(|| Error::parse(line, "unterminated matrix"))?;
                let unitary = parse_matrix(body, line)?;
                let targets: Vec<usize> = targets
                    .split_whitespace()
                    .map(|t| parse_qubit(t, line))
                    .collect::<Result<_>>()?;
                if targets.is_empty() {
                    return Err(Error::parse(line, "intra gate needs at least one target"));
                }
                b.intra_on(cluster, unitary, &targets);
            }
            "cz" | "cnot" => {
                let tokens: Vec<&str> = rest.split_whitespace().collect();
                let [qa, qb] = tokens[..] else {
                    return Err(Error::parse(line, format!("expected `{keyword} q<a> q<b>`")));
                };
                let (a, b2) = (parse_qubit(qa, line)?, parse_qubit(qb, line)?);
                if keyword == "cz" {
                    b.cz(a, b2);
                } else {
                    b.cnot(a, b2);
                }
            }
            other => return Err(Error::parse(line, format!("unknown statement `{other}`"))),
        }
    }
    let builder = builder.ok_or_else(|| Error::parse(1, "missing `layout` line"))?;
    let circuit = builder.build()?;
    let layers = circuit.layers().to_vec();
    let total_phase = (circuit.global_phase() + phase).rem_euclid(2.0 * PI);
    ClusteredCircuit::with_phase(circuit.layout().clone(), layers, total_phase)
}

fn format_complex(z: C64) -> String {
    format!("{}{:+}i", z.re, z.im)
}

/// Render a circuit in canonical form; `parse_circuit` reproduces it exactly.
pub fn serialize_circuit(circuit: &ClusteredCircuit) -> String {
    let mut out = String::new();
    let layout = circuit.layout();
    match layout.topology() {
        Topology::Lattice { extents } => {
            let ext: Vec<String> = extents.iter().map(|e| e.to_string()).collect();
            writeln!(
                out,
                "layout lattice D={} extents={} d={}",
                extents.len(),
                ext.join("x"),
                layout.cluster_size()
            )
            .unwrap();
        }
        Topology::AllToAll => {
            writeln!(
                out,
                "layout all_to_all N={} d={}",
                layout.num_clusters(),
                layout.cluster_size()
            )
            .unwrap();
        }
    }
    if circuit.global_phase() != 0.0 {
        writeln!(out, "phase {}", circuit.global_phase()).unwrap();
    }
    for layer in circuit.layers() {
        out.push_str("layer\n");
        for g in &layer.inter {
            writeln!(
                out,
                "inter {}{}({}) q{} q{}",
                g.pauli_a, g.pauli_b, g.theta, g.qubit_a, g.qubit_b
            )
            .unwrap();
        }
        for g in &layer.intra {
            let dim = g.unitary.dim();
            let rows: Vec<String> = (0..dim)
                .map(|r| {
                    (0..dim)
                        .map(|c| format_complex(g.unitary.get(r, c)))
                        .collect::<Vec<_>>()
                        .join(", ")
                })
                .collect();
            let targets: Vec<String> = g.targets.iter().map(|q| format!("q{q}")).collect();
            writeln!(out, "intra c{} [{}] {}", g.cluster, rows.join("; "), targets.join(" ")).unwrap();
        }
    }
    out
}

/// Parse an observable file.
pub fn parse_observable(text: &str) -> Result<Observable> {
    let mut terms = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = strip_comment(raw);
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        if tokens.next() != Some("term") {
            return Err(Error::parse(line, "expected `term <coeff> <P>q<idx> ...`"));
        }
        let coefficient = parse_f64(
            tokens.next().ok_or_else(|| Error::parse(line, "missing coefficient"))?,
            line,
        )?;
        let letters = tokens
            .map(|tok| {
                let mut chars = tok.chars();
                let pauli = chars
                    .next()
                    .and_then(Pauli::from_char)
                    .ok_or_else(|| Error::parse(line, format!("expected Pauli letter in `{tok}`")))?;
                Ok((parse_qubit(chars.as_str(), line)?, pauli))
            })
            .collect::<Result<Vec<_>>>()?;
        let pauli = PauliString::from_letters(letters).map_err(|e| Error::parse(line, e.to_string()))?;
        terms.push((coefficient, pauli));
    }
    Observable::new(terms)
}

pub fn serialize_observable(obs: &Observable) -> String {
    let mut out = String::new();
    for term in obs.terms() {
        out.push_str(&format!("term {}", term.coefficient));
        for (q, p) in term.pauli.letters() {
            out.push_str(&format!(" {p}q{q}"));
        }
        out.push('\n');
    }
    out
}
