/*
 * Copyright 2026 The lightcone Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef LIGHTCONE_H
#define LIGHTCONE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. Values 2 to 5 match the command-line exit codes.
 */
typedef enum {
  LC_STATUS_OK = 0,
  /**
   * Null pointer or non-UTF-8 string argument.
   */
  LC_STATUS_INVALID_ARGUMENT = 1,
  /**
   * Parse or validation failure.
   */
  LC_STATUS_PARSE = 2,
  /**
   * A simulated device would exceed its qubit limit.
   */
  LC_STATUS_CAPACITY = 3,
  /**
   * The algebraic task budget was exceeded.
   */
  LC_STATUS_BUDGET = 4,
  /**
   * Configuration, domain or unsupported-input failure.
   */
  LC_STATUS_OTHER = 5,
  /**
   * A Rust panic was caught at the boundary.
   */
  LC_STATUS_PANIC = 6,
} LcStatus;

/**
 * Parsed circuit.
 */
typedef struct LcCircuit LcCircuit;

/**
 * Parsed observable.
 */
typedef struct LcObservable LcObservable;

/**
 * Result of one estimator run.
 */
typedef struct LcReport LcReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *lc_version(void);

/**
 * Message of the last failed call on this thread, or an empty string.
 *
 * The pointer stays valid until the next `lc_*` call on the same thread.
 */
const char *lc_last_error_message(void);

/**
 * Parses circuit text into a new handle stored in `*out`.
 *
 * # Safety
 * `src` must be a NUL-terminated string and `out` a writable pointer.
 */
LcStatus lc_circuit_parse(const char *src, LcCircuit **out);

/**
 * # Safety
 * `circuit` must be null or a handle from [`lc_circuit_parse`] not yet freed.
 */
void lc_circuit_free(LcCircuit *circuit);

/**
 * Number of qubits, or 0 for a null handle.
 *
 * # Safety
 * `circuit` must be null or a live handle.
 */
size_t lc_circuit_num_qubits(const LcCircuit *circuit);

/**
 * Number of layers, or 0 for a null handle.
 *
 * # Safety
 * `circuit` must be null or a live handle.
 */
size_t lc_circuit_depth(const LcCircuit *circuit);

/**
 * Parses observable text into a new handle stored in `*out`.
 *
 * # Safety
 * `src` must be a NUL-terminated string and `out` a writable pointer.
 */
LcStatus lc_observable_parse(const char *src, LcObservable **out);

/**
 * # Safety
 * `obs` must be null or a handle from [`lc_observable_parse`] not yet freed.
 */
void lc_observable_free(LcObservable *obs);

/**
 * Number of nonzero terms, or 0 for a null handle.
 *
 * # Safety
 * `obs` must be null or a live handle.
 */
size_t lc_observable_num_terms(const LcObservable *obs);

/**
 * Exact expectation value from the statevector oracle.
 *
 * # Safety
 * Handles must be live and `out` writable.
 */
LcStatus lc_oracle_expectation(const LcCircuit *circuit, const LcObservable *obs, double *out);

/**
 * Runs causal decoupling once at precision `epsilon`.
 *
 * # Safety
 * Handles must be live and `out` writable.
 */
LcStatus lc_estimate_causal(const LcCircuit *circuit,
                            const LcObservable *obs,
                            double epsilon,
                            uint64_t seed,
                            LcReport **out);

/**
 * Runs the algebraic decomposition once at precision `epsilon`.
 *
 * # Safety
 * Handles must be live and `out` writable.
 */
LcStatus lc_estimate_algebraic(const LcCircuit *circuit,
                               const LcObservable *obs,
                               double epsilon,
                               uint64_t seed,
                               LcReport **out);

/**
 * # Safety
 * `report` must be null or a handle from an `lc_estimate_*` call not yet freed.
 */
void lc_report_free(LcReport *report);

/**
 * Point estimate, or NaN for a null handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
double lc_report_estimate(const LcReport *report);

/**
 * Exact value when the oracle could compute it, NaN otherwise.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
double lc_report_oracle(const LcReport *report);

/**
 * Variance bound of the run, NaN for a null handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
double lc_report_variance_bound(const LcReport *report);

/**
 * Shots drawn, 0 for a null handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
uint64_t lc_report_k_tot(const LcReport *report);

/**
 * Largest simulated device, 0 for a null handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
size_t lc_report_max_device_qubits(const LcReport *report);

/**
 * Serializes the report as JSON into a new string stored in `*out`.
 * A nonzero `strip_timing` drops wall time and timestamp.
 *
 * # Safety
 * `report` must be live and `out` writable.
 */
LcStatus lc_report_to_json(const LcReport *report, int32_t strip_timing, char **out);

/**
 * Resource analysis as JSON. Pass NaN for `beta` unless the layout is all-to-all.
 *
 * # Safety
 * Handles must be live and `out` writable.
 */
LcStatus lc_analyze_json(const LcCircuit *circuit,
                         const LcObservable *obs,
                         double epsilon,
                         double beta,
                         char **out);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void lc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LIGHTCONE_H */
