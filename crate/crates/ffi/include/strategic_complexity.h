#ifndef STRATEGIC_COMPLEXITY_H
#define STRATEGIC_COMPLEXITY_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>

typedef enum sc_status {
  SC_STATUS_OK = 0,
  SC_STATUS_INVALID_PARAMETER = 1,
  SC_STATUS_DOMAIN_ERROR = 2,
  SC_STATUS_NO_INTERIOR_EQUILIBRIUM = 3,
  SC_STATUS_INVALID_ORDERING = 4,
  SC_STATUS_NO_CONVERGENCE = 5,
  SC_STATUS_OFF_PATH_MESSAGE = 6,
  SC_STATUS_CONFIG_ERROR = 7,
  SC_STATUS_IO_ERROR = 8,
  SC_STATUS_NULL_POINTER = 9,
  SC_STATUS_OUT_OF_RANGE = 10,
  SC_STATUS_PANIC = 11,
} sc_status;

// Distinct equilibria found by enumeration.
typedef struct sc_equilibria sc_equilibria;

// Validated full-model parameters.
typedef struct sc_full_params sc_full_params;

typedef struct sc_simple_equilibrium {
  double q;
  double tau;
  double p_nondisc;
  double p_simple;
} sc_simple_equilibrium;

typedef struct sc_full_equilibrium {
  double t1;
  double t2;
  double e_simple;
  double e_complex;
  double e_obfusc;
  // 1 when simple disclosures are good news, 0 otherwise.
  int32_t simple_good_news;
  double residual;
  double p_obfuscate;
  double p_simple;
  double p_informative;
} sc_full_equilibrium;

// Message for the last failed call on this thread, or null. Valid until
// the next call into the library on the same thread.
const char *sc_last_error_message(void);

// # Safety
// `out` must be null or valid for writes.
enum sc_status sc_tau_closed_form(double q, double *out);

// # Safety
// `out` must be null or valid for writes.
enum sc_status sc_solve_simple(double q, double tol, struct sc_simple_equilibrium *out);

// # Safety
// Both pointers must be null or valid for writes.
enum sc_status sc_solve_dye(double p_uninformed, double tol, double *threshold, double *price);

// # Safety
// `out` must be null or valid for writes.
enum sc_status sc_full_params_new(double chi,
                                  double rho_s,
                                  double rho_u,
                                  double forced_simple,
                                  double forced_obfuscate,
                                  struct sc_full_params **out);

// # Safety
// `params` must be null or a handle from `sc_full_params_new` not yet freed.
void sc_full_params_free(struct sc_full_params *params);

// Damped belief iteration from the given starting beliefs.
//
// # Safety
// `params` must be a live handle; `out` must be null or valid for writes.
enum sc_status sc_solve_full(const struct sc_full_params *params,
                             double e_simple,
                             double e_complex,
                             double e_obfusc,
                             double tol,
                             uintptr_t max_iter,
                             struct sc_full_equilibrium *out);

// # Safety
// `params` must be a live handle; `out` must be null or valid for writes.
enum sc_status sc_enumerate(const struct sc_full_params *params,
                            uintptr_t n_starts,
                            double tol,
                            struct sc_equilibria **out);

// Number of equilibria in `list`, 0 for null.
//
// # Safety
// `list` must be null or a live handle.
uintptr_t sc_equilibria_len(const struct sc_equilibria *list);

// # Safety
// `list` must be a live handle; `out` must be null or valid for writes.
enum sc_status sc_equilibria_get(const struct sc_equilibria *list,
                                 uintptr_t index,
                                 struct sc_full_equilibrium *out);

// # Safety
// `list` must be null or a handle from `sc_enumerate` not yet freed.
void sc_equilibria_free(struct sc_equilibria *list);

// Simulates the simple-model equilibrium at `q`; writes a JSON report to
// `*out`, to be released with `sc_string_free`.
//
// # Safety
// `out` must be null or valid for writes.
enum sc_status sc_simulate_simple_json(double q,
                                       uint64_t n_draws,
                                       uint64_t seed,
                                       double z_threshold,
                                       char **out);

// Simulates the full-model equilibrium reached from beliefs at the prior
// mean.
//
// # Safety
// `params` must be a live handle; `out` must be null or valid for writes.
enum sc_status sc_simulate_full_json(const struct sc_full_params *params,
                                     uint64_t n_draws,
                                     uint64_t seed,
                                     double z_threshold,
                                     char **out);

// # Safety
// `s` must be null or a string returned by this library not yet freed.
void sc_string_free(char *s);

// Library version as a static string.
const char *sc_version(void);

#endif  /* STRATEGIC_COMPLEXITY_H */
