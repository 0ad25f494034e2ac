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

//! Command-line front end.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebraic::{AlgebraicConfig, AlgebraicEstimator, DEFAULT_TASK_BUDGET};
use crate::allocation::DEFAULT_DELTA;
use crate::causal::{CausalConfig, CausalEstimator};
use crate::circuit::{ClusteredCircuit, Observable};
use crate::error::{Error, Result};
use crate::format::{parse_circuit, parse_observable};
use crate::lightcone::pauli_lightcone;
use crate::report::{EstimateReport, OracleReport, OracleTerm, StudyReport, Timing, SCHEMA_VERSION};
use crate::resources::{analyze, rows_to_csv, TableOptions, DEFAULT_BITS_PER_CUT};
use crate::sampling::HadamardMode;
use crate::statevector::Oracle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EstimatorKind {
    Causal,
    Algebraic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Shortcut,
    Circuit,
}

impl From<ModeArg> for HadamardMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Shortcut => HadamardMode::Shortcut,
            ModeArg::Circuit => HadamardMode::Circuit,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "lightcone",
    version,
    about = "Light-cone estimators for clustered quantum circuits"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Inputs {
    /// Circuit file.
    #[arg(long)]
    pub circuit: PathBuf,
    /// Observable file.
    #[arg(long)]
    pub observable: PathBuf,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: OutputFormat,
    /// Omit wall time and timestamp so reports are reproducible byte for byte.
    #[arg(long)]
    pub no_timestamp: bool,
}

#[derive(Debug, Clone, Args)]
pub struct Sampling {
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long, env = "LIGHTCONE_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Target variance is `delta * epsilon^2`.
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    pub delta: f64,
    /// Largest number of Hadamard-test tasks (algebraic path).
    #[arg(long, default_value_t = DEFAULT_TASK_BUDGET)]
    pub task_budget: u64,
    #[arg(long, value_enum, default_value = "shortcut")]
    pub hadamard_mode: ModeArg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate with causal decoupling.
    EstimateCausal {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Estimate with the algebraic decomposition.
    EstimateAlgebraic {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Exact expectation from the statevector oracle.
    Oracle {
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Light-cone extremes and the method comparison table.
    Analyze {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = DEFAULT_DELTA)]
        delta: f64,
        /// Branching factor for all-to-all layouts.
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_BITS_PER_CUT)]
        bits_per_cut: f64,
    },
    /// Repeat an estimator with seeds `seed, seed + 1, ...`.
    RepeatStudy {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long, value_enum)]
        estimator: EstimatorKind,
        #[arg(long)]
        repetitions: usize,
    },
}

impl Command {
    pub fn inputs(&self) -> &Inputs {
        match self {
            Command::EstimateCausal { inputs, .. }
            | Command::EstimateAlgebraic { inputs, .. }
            | Command::Oracle { inputs }
            | Command::Analyze { inputs, .. }
            | Command::RepeatStudy { inputs, .. } => inputs,
        }
    }
}

fn read(path: &Path) -> Result<String> {
    if !path.exists() {
        return Err(Error::Config(format!("input file {} does not exist", path.display())));
    }
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load(inputs: &Inputs) -> Result<(ClusteredCircuit, Observable)> {
    let circuit = parse_circuit(&read(&inputs.circuit)?)?;
    let obs = parse_observable(&read(&inputs.observable)?)?;
    obs.check_within(circuit.layout())
        .map_err(|e| Error::Validation(format!("observable does not fit the circuit: {e}")))?;
    Ok((circuit, obs))
}

fn check_sampling(s: &Sampling) -> Result<()> {
    if !(s.epsilon.is_finite() && s.epsilon > 0.0) {
        return Err(Error::Config(format!("--epsilon must be positive, got {}", s.epsilon)));
    }
    if !(s.delta > 0.0 && s.delta <= 1.0) {
        return Err(Error::Config(format!("--delta must lie in (0, 1], got {}", s.delta)));
    }
    Ok(())
}

fn causal_config(s: &Sampling) -> CausalConfig {
    CausalConfig {
        delta: s.delta,
        ..CausalConfig::new(s.epsilon)
    }
}

fn algebraic_config(s: &Sampling) -> AlgebraicConfig {
    AlgebraicConfig {
        delta: s.delta,
        task_budget: s.task_budget,
        mode: s.hadamard_mode.into(),
        ..AlgebraicConfig::new(s.epsilon)
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn csv_table<R: Serialize>(rows: impl IntoIterator<Item = R>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

#[derive(Serialize)]
struct EstimateRow<'a> {
    method: &'a str,
    seed: u64,
    epsilon: f64,
    estimate: f64,
    oracle: Option<f64>,
    abs_error: Option<f64>,
    k_tot: u64,
    variance_bound: f64,
    max_device_qubits: usize,
}

fn render_estimate(report: &EstimateReport, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => to_json(report),
        OutputFormat::Csv => csv_table([EstimateRow {
            method: report.method.as_str(),
            seed: report.seed,
            epsilon: report.epsilon,
            estimate: report.estimate,
            oracle: report.oracle,
            abs_error: report.abs_error,
            k_tot: report.shots.k_tot,
            variance_bound: report.variance_bound,
            max_device_qubits: report.device.max_device_qubits,
        }]),
    }
}

fn stamp(no_timestamp: bool, start: Instant) -> Option<Timing> {
    (!no_timestamp).then(|| Timing::since(start.elapsed()))
}

/// Execute one command and return the rendered report.
pub fn run(command: &Command) -> Result<String> {
    let start = Instant::now();
    let inputs = command.inputs();
    match command {
        Command::EstimateCausal { sampling, .. } => {
            check_sampling(sampling)?;
            let (circuit, obs) = load(inputs)?;
            let est = CausalEstimator::prepare(&circuit, &obs, causal_config(sampling))?;
            let mut report = est.report(sampling.seed, &est.run(sampling.seed));
            report.timing = stamp(inputs.no_timestamp, start);
            render_estimate(&report, inputs.format)
        }
        Command::EstimateAlgebraic { sampling, .. } => {
            check_sampling(sampling)?;
            let (circuit, obs) = load(inputs)?;
            let est = AlgebraicEstimator::prepare(&circuit, &obs, algebraic_config(sampling))?;
            let mut report = est.report(sampling.seed, &est.run(sampling.seed));
            report.timing = stamp(inputs.no_timestamp, start);
            render_estimate(&report, inputs.format)
        }
        Command::Oracle { .. } => {
            let (circuit, obs) = load(inputs)?;
            let oracle = Oracle::default();
            let mut terms = Vec::with_capacity(obs.len());
            for (index, term) in obs.terms().iter().enumerate() {
                let cone = pauli_lightcone(&circuit, &term.pauli)?;
                let value = oracle
                    .exact_observable_expectation(&circuit, &Observable::single(1.0, term.pauli.clone()))
                    .map_err(|e| match e {
                        Error::Capacity { required, limit, .. } => {
                            Error::capacity(format!("light cone of term {index}"), required, limit)
                        }
                        other => other,
                    })?;
                terms.push(OracleTerm {
                    index,
                    coefficient: term.coefficient,
                    pauli: term.pauli.to_string(),
                    value,
                    cone_size: cone.size(),
                    cone_qubits: cone.qubits().len(),
                });
            }
            let report = OracleReport {
                schema_version: SCHEMA_VERSION,
                kind: "oracle".into(),
                value: terms.iter().map(|t| t.coefficient * t.value).sum(),
                terms,
                timing: stamp(inputs.no_timestamp, start),
            };
            match inputs.format {
                OutputFormat::Json => to_json(&report),
                OutputFormat::Csv => csv_table(&report.terms),
            }
        }
        Command::Analyze {
            epsilon,
            delta,
            beta,
            bits_per_cut,
            ..
        } => {
            if !(epsilon.is_finite() && *epsilon > 0.0) {
                return Err(Error::Config(format!("--epsilon must be positive, got {epsilon}")));
            }
            let (circuit, obs) = load(inputs)?;
            let options = TableOptions {
                delta: *delta,
                bits_per_cut: *bits_per_cut,
                ..TableOptions::default()
            };
            let mut report = analyze(&circuit, &obs, *epsilon, *beta, options)?;
            report.timing = stamp(inputs.no_timestamp, start);
            match inputs.format {
                OutputFormat::Json => to_json(&report),
                OutputFormat::Csv => rows_to_csv(&report.rows),
            }
        }
        Command::RepeatStudy {
            sampling,
            estimator,
            repetitions,
            ..
        } => {
            check_sampling(sampling)?;
            if *repetitions == 0 {
                return Err(Error::Config("--repetitions must be at least 1".into()));
            }
            let (circuit, obs) = load(inputs)?;
            let seeds: Vec<u64> = (0..*repetitions as u64)
                .map(|r| sampling.seed.wrapping_add(r))
                .collect();
            let mut report = match estimator {
                EstimatorKind::Causal => {
                    let est = CausalEstimator::prepare(&circuit, &obs, causal_config(sampling))?;
                    let estimates = seeds.par_iter().map(|&s| est.run_estimate(s)).collect();
                    StudyReport::from_estimates(
                        crate::report::Method::CausalDecoupling,
                        sampling.seed,
                        sampling.epsilon,
                        est.oracle_value(),
                        est.variance_bound(),
                        Some(est.variance_exact()),
                        est.plan().k_tot,
                        est.device_report(),
                        estimates,
                    )
                }
                EstimatorKind::Algebraic => {
                    let est = AlgebraicEstimator::prepare(&circuit, &obs, algebraic_config(sampling))?;
                    let estimates = seeds.par_iter().map(|&s| est.run(s).estimate).collect();
                    StudyReport::from_estimates(
                        crate::report::Method::AlgebraicDecomposition,
                        sampling.seed,
                        sampling.epsilon,
                        est.oracle_value(),
                        est.variance_bound(),
                        Some(est.variance_exact()),
                        est.shots_consumed(),
                        est.device_report(),
                        estimates,
                    )
                }
            };
            report.timing = stamp(inputs.no_timestamp, start);
            match inputs.format {
                OutputFormat::Json => to_json(&report),
                OutputFormat::Csv => {
                    #[derive(Serialize)]
                    struct Row {
                        repetition: usize,
                        seed: u64,
                        estimate: f64,
                    }
                    csv_table(
                        report
                            .estimates
                            .iter()
                            .zip(&seeds)
                            .enumerate()
                            .map(|(r, (&e, &s))| Row {
                                repetition: r,
                                seed: s,
                                estimate: e,
                            }),
                    )
                }
            }
        }
    }
}

/// Parsed command line; one variant per subcommand.
pub type RunConfig = Command;

/// Parse arguments, run, and write the report. Returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 5 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = run(&cli.command).and_then(|text| match &cli.command.inputs().out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
