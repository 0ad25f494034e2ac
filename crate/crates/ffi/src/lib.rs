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

//! C ABI over the `lightcone` estimators.
//!
//! Objects are opaque heap handles created by `lc_*_parse` / `lc_estimate_*`
//! and released with the matching `lc_*_free`. Every fallible call returns an
//! [`LcStatus`]; on failure the message is available from
//! [`lc_last_error_message`] on the same thread. Strings returned through out
//! parameters are owned by the caller and must be released with
//! [`lc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use lightcone::algebraic::estimate_algebraic;
use lightcone::causal::estimate_causal_decoupling;
use lightcone::circuit::{ClusteredCircuit, Observable};
use lightcone::error::Error;
use lightcone::format::{parse_circuit, parse_observable};
use lightcone::report::EstimateReport;
use lightcone::resources::{analyze, TableOptions};
use lightcone::statevector::exact_observable_expectation;

/// Status codes. Values 2 to 5 match the command-line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LcStatus {
    Ok = 0,
    /// Null pointer or non-UTF-8 string argument.
    InvalidArgument = 1,
    /// Parse or validation failure.
    Parse = 2,
    /// A simulated device would exceed its qubit limit.
    Capacity = 3,
    /// The algebraic task budget was exceeded.
    Budget = 4,
    /// Configuration, domain or unsupported-input failure.
    Other = 5,
    /// A Rust panic was caught at the boundary.
    Panic = 6,
}

/// Parsed circuit.
pub struct LcCircuit(ClusteredCircuit);

/// Parsed observable.
pub struct LcObservable(Observable);

/// Result of one estimator run.
pub struct LcReport(EstimateReport);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn status_of(err: &Error) -> LcStatus {
    match err.exit_code() {
        2 => LcStatus::Parse,
        3 => LcStatus::Capacity,
        4 => LcStatus::Budget,
        _ => LcStatus::Other,
    }
}

struct Failure(LcStatus, String);

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure(status_of(&err), err.to_string())
    }
}

fn invalid(what: &str) -> Failure {
    Failure(LcStatus::InvalidArgument, format!("invalid argument: {what}"))
}

/// Runs `f`, converting errors and panics into a status plus last-error message.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> LcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            LcStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("panic: {msg}"));
            LcStatus::Panic
        }
    }
}

unsafe fn text<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if ptr.is_null() {
        return Err(invalid(what));
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| invalid(what))
}

unsafe fn handle<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, Failure> {
    ptr.as_ref().ok_or_else(|| invalid(what))
}

/// Both handles, with the observable checked against the circuit's register.
unsafe fn pair<'a>(
    circuit: *const LcCircuit,
    obs: *const LcObservable,
) -> Result<(&'a ClusteredCircuit, &'a Observable), Failure> {
    let (c, o) = (handle(circuit, "circuit")?, handle(obs, "observable")?);
    o.0.check_within(c.0.layout())
        .map_err(|e| Error::Validation(format!("observable does not fit the circuit: {e}")))?;
    Ok((&c.0, &o.0))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(invalid(what));
    }
    out.write(value);
    Ok(())
}

fn to_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure(LcStatus::Other, "output contained a NUL byte".into()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn lc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or an empty string.
///
/// The pointer stays valid until the next `lc_*` call on the same thread.
#[no_mangle]
pub extern "C" fn lc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses circuit text into a new handle stored in `*out`.
///
/// # Safety
/// `src` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn lc_circuit_parse(src: *const c_char, out: *mut *mut LcCircuit) -> LcStatus {
    guard(|| {
        let c = parse_circuit(text(src, "circuit text")?)?;
        write_out(out, Box::into_raw(Box::new(LcCircuit(c))), "out")
    })
}

/// # Safety
/// `circuit` must be null or a handle from [`lc_circuit_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lc_circuit_free(circuit: *mut LcCircuit) {
    if !circuit.is_null() {
        drop(Box::from_raw(circuit));
    }
}

/// Number of qubits, or 0 for a null handle.
///
/// # Safety
/// `circuit` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lc_circuit_num_qubits(circuit: *const LcCircuit) -> usize {
    circuit.as_ref().map_or(0, |c| c.0.num_qubits())
}

/// Number of layers, or 0 for a null handle.
///
/// # Safety
/// `circuit` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lc_circuit_depth(circuit: *const LcCircuit) -> usize {
    circuit.as_ref().map_or(0, |c| c.0.depth())
}

/// Parses observable text into a new handle stored in `*out`.
///
/// # Safety
/// `src` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn lc_observable_parse(src: *const c_char, out: *mut *mut LcObservable) -> LcStatus {
    guard(|| {
        let o = parse_observable(text(src, "observable text")?)?;
        write_out(out, Box::into_raw(Box::new(LcObservable(o))), "out")
    })
}

/// # Safety
/// `obs` must be null or a handle from [`lc_observable_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lc_observable_free(obs: *mut LcObservable) {
    if !obs.is_null() {
        drop(Box::from_raw(obs));
    }
}

/// Number of nonzero terms, or 0 for a null handle.
///
/// # Safety
/// `obs` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lc_observable_num_terms(obs: *const LcObservable) -> usize {
    obs.as_ref().map_or(0, |o| o.0.len())
}

/// Exact expectation value from the statevector oracle.
///
/// # Safety
/// Handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lc_oracle_expectation(
    circuit: *const LcCircuit,
    obs: *const LcObservable,
    out: *mut f64,
) -> LcStatus {
    guard(|| {
        let (c, o) = pair(circuit, obs)?;
        write_out(out, exact_observable_expectation(c, o)?, "out")
    })
}

unsafe fn estimate(
    circuit: *const LcCircuit,
    obs: *const LcObservable,
    epsilon: f64,
    seed: u64,
    out: *mut *mut LcReport,
    run: fn(&ClusteredCircuit, &Observable, f64, u64) -> lightcone::error::Result<EstimateReport>,
) -> LcStatus {
    guard(|| {
        let (c, o) = pair(circuit, obs)?;
        if out.is_null() {
            return Err(invalid("out"));
        }
        let report = run(c, o, epsilon, seed)?;
        write_out(out, Box::into_raw(Box::new(LcReport(report))), "out")
    })
}

/// Runs causal decoupling once at precision `epsilon`.
///
/// # Safety
/// Handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lc_estimate_causal(
    circuit: *const LcCircuit,
    obs: *const LcObservable,
    epsilon: f64,
    seed: u64,
    out: *mut *mut LcReport,
) -> LcStatus {
    estimate(circuit, obs, epsilon, seed, out, estimate_causal_decoupling)
}

/// Runs the algebraic decomposition once at precision `epsilon`.
///
/// # Safety
/// Handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lc_estimate_algebraic(
    circuit: *const LcCircuit,
    obs: *const LcObservable,
    epsilon: f64,
    seed: u64,
    out: *mut *mut LcReport,
) -> LcStatus {
    estimate(circuit, obs, epsilon, seed, out, estimate_algebraic)
}

/// # Safety
/// `report` must be null or a handle from an `lc_estimate_*` call not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lc_report_free(report: *mut LcReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Point estimate, or NaN for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lc_report_estimate(report: *const LcReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| r.0.estimate)
}

/// Exact value when the oracle could compute it, NaN otherwise.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lc_report_oracle(report: *const LcReport) -> f64 {
    report.as_ref().and_then(|r| r.0.oracle).unwrap_or(f64::NAN)
}

/// Variance bound of the run, NaN for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lc_report_variance_bound(report: *const LcReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| r.0.variance_bound)
}

/// Shots drawn, 0 for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lc_report_k_tot(report: *const LcReport) -> u64 {
    report.as_ref().map_or(0, |r| r.0.shots.k_tot)
}

/// Largest simulated device, 0 for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lc_report_max_device_qubits(report: *const LcReport) -> usize {
    report.as_ref().map_or(0, |r| r.0.device.max_device_qubits)
}

/// Serializes the report as JSON into a new string stored in `*out`.
/// A nonzero `strip_timing` drops wall time and timestamp.
///
/// # Safety
/// `report` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lc_report_to_json(
    report: *const LcReport,
    strip_timing: i32,
    out: *mut *mut c_char,
) -> LcStatus {
    guard(|| {
        let mut r = handle(report, "report")?.0.clone();
        if strip_timing != 0 {
            r.timing = None;
        }
        let json = serde_json::to_string(&r).map_err(|e| Failure(LcStatus::Other, e.to_string()))?;
        write_out(out, to_c_string(json)?, "out")
    })
}

/// Resource analysis as JSON. Pass NaN for `beta` unless the layout is all-to-all.
///
/// # Safety
/// Handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lc_analyze_json(
    circuit: *const LcCircuit,
    obs: *const LcObservable,
    epsilon: f64,
    beta: f64,
    out: *mut *mut c_char,
) -> LcStatus {
    guard(|| {
        let (c, o) = pair(circuit, obs)?;
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Failure(
                LcStatus::Other,
                format!("epsilon must be positive, got {epsilon}"),
            ));
        }
        let beta = (!beta.is_nan()).then_some(beta);
        let report = analyze(c, o, epsilon, beta, TableOptions::default())?;
        let json = serde_json::to_string(&report).map_err(|e| Failure(LcStatus::Other, e.to_string()))?;
        write_out(out, to_c_string(json)?, "out")
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
