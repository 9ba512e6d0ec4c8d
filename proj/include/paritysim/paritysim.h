/* Copyright 2026 The paritysim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to paritysim.
 *
 * Every fallible call returns a psim_status. On failure a description is
 * available from psim_last_error() on the same thread until the next call.
 * Objects are opaque handles released with the matching *_free function;
 * passing NULL to a free function is a no-op.
 *
 * Strings are returned through (buffer, capacity, &length): length receives
 * the full size excluding the terminator, and the copy is truncated to fit.
 */

#ifndef PARITYSIM_H
#define PARITYSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(PARITYSIM_BUILDING_LIBRARY)
#    define PSIM_API __declspec(dllexport)
#  else
#    define PSIM_API __declspec(dllimport)
#  endif
#else
#  define PSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum psim_status {
    PSIM_OK = 0,
    PSIM_ERR_DOMAIN = 1,      /* argument outside the physical domain */
    PSIM_ERR_DEGENERATE = 2,  /* ensemble too small or without spread */
    PSIM_ERR_DIVERGENCE = 3,  /* sensitivity undefined at this phase */
    PSIM_ERR_FIT_FAILURE = 4,
    PSIM_ERR_CONFIG = 5,
    PSIM_ERR_IO = 6,
    PSIM_ERR_NULL_ARG = 7,
    PSIM_ERR_INTERNAL = 8
} psim_status;

typedef enum psim_estimator { PSIM_ESTIMATOR_ML = 0, PSIM_ESTIMATOR_THRESHOLD = 1 } psim_estimator;

typedef enum psim_error_model {
    PSIM_BERNOULLI_EXACT = 0,
    PSIM_BERNOULLI_SQRT_P = 1
} psim_error_model;

typedef enum psim_ml_error_model {
    PSIM_ML_FISHER_PROPAGATED = 0,
    PSIM_ML_PAPER_PRINTED = 1
} psim_ml_error_model;

typedef struct psim_state psim_state;
typedef struct psim_ensemble psim_ensemble;
typedef struct psim_timeseries psim_timeseries;
typedef struct psim_experiment psim_experiment;

typedef struct psim_interferometer {
    double n_c_total; /* coherent photons at the reference time */
    double n_th;
    double extinction; /* linear leakage fraction in [0, 1) */
    double t_ref;
} psim_interferometer;

typedef struct psim_acquisition {
    double carrier_hz;
    double sample_rate_hz;
    double window_s;
    double volts_per_unit;
} psim_acquisition;

typedef struct psim_estimate {
    double value;
    double std_error; /* per single sample */
    size_t n_samples;
} psim_estimate;

PSIM_API const char* psim_version(void);
PSIM_API const char* psim_last_error(void);
PSIM_API const char* psim_status_name(psim_status status);

/* Gaussian states */
PSIM_API psim_status psim_state_new(double mu, double theta, double sigma2, psim_state** out);
PSIM_API psim_status psim_state_from_photons(double n_c, double n_th, double theta,
                                             psim_state** out);
PSIM_API void psim_state_free(psim_state* state);
PSIM_API psim_status psim_state_params(const psim_state* state, double* mu, double* theta,
                                       double* sigma2);
PSIM_API psim_status psim_state_parity(const psim_state* state, double* out);
PSIM_API psim_status psim_state_wigner(const psim_state* state, double x, double p, double* out);

/* Interferometer */
PSIM_API psim_status psim_interferometer_output(const psim_interferometer* config, double phi,
                                                double t, psim_state** out);
PSIM_API psim_status psim_parity_vs_phase(const psim_interferometer* config, double phi, double t,
                                          double* out);
PSIM_API psim_status psim_theoretical_fwhm(double snr, double* out);
PSIM_API psim_status psim_cr_bound(double snr, double* out);

/* Phase-space ensembles */
PSIM_API psim_status psim_sample_phase_space(const psim_state* state, size_t n, uint64_t seed,
                                             psim_ensemble** out);
PSIM_API psim_status psim_ensemble_from_timeseries(const psim_acquisition* acq,
                                                   const psim_state* state, size_t n,
                                                   uint64_t seed, psim_ensemble** out);
PSIM_API void psim_ensemble_free(psim_ensemble* ensemble);
PSIM_API size_t psim_ensemble_size(const psim_ensemble* ensemble);
PSIM_API psim_status psim_ensemble_get(const psim_ensemble* ensemble, size_t index, double* i,
                                       double* q);

/* Estimators */
PSIM_API psim_status psim_ml_estimate(const psim_ensemble* ensemble, psim_ml_error_model model,
                                      psim_estimate* out);
PSIM_API psim_status psim_threshold_estimate(const psim_ensemble* ensemble, double a_over_sigma,
                                             double sigma, psim_error_model model,
                                             psim_estimate* out);
PSIM_API psim_status psim_rician_cdf(double nu, double sigma, double a, double* out);
PSIM_API psim_status psim_min_sensitivity_factor(psim_error_model model, double snr,
                                                 double* factor, double* a_over_sigma);

/* Time series */
PSIM_API psim_status psim_default_acquisition(psim_acquisition* out);
PSIM_API psim_status psim_synthesize_timeseries(const psim_acquisition* acq,
                                                const psim_state* state, uint64_t seed,
                                                int noiseless, psim_timeseries** out);
PSIM_API psim_status psim_timeseries_read(const char* path, psim_timeseries** out);
PSIM_API psim_status psim_timeseries_write(const psim_timeseries* series, const char* path);
PSIM_API void psim_timeseries_free(psim_timeseries* series);
PSIM_API size_t psim_timeseries_length(const psim_timeseries* series);
PSIM_API psim_status psim_extract_iq(const psim_timeseries* series, const psim_acquisition* acq,
                                     double reference_phase, double* i, double* q);

/* Experiments */
PSIM_API psim_status psim_experiment_default(psim_experiment** out);
PSIM_API psim_status psim_experiment_from_json(const char* json_text, psim_experiment** out);
PSIM_API psim_status psim_experiment_load(const char* path, psim_experiment** out);
PSIM_API void psim_experiment_free(psim_experiment* experiment);
/* Sets a dotted config key; value_text is parsed as JSON, else taken as a string. */
PSIM_API psim_status psim_experiment_set(psim_experiment* experiment, const char* key,
                                         const char* value_text);
PSIM_API psim_status psim_experiment_to_json(const psim_experiment* experiment, char* buffer,
                                             size_t capacity, size_t* length);
/* Violations are newline-separated "field: message" lines; *count receives their number. */
PSIM_API psim_status psim_experiment_validate(const psim_experiment* experiment, size_t* count,
                                              char* buffer, size_t capacity, size_t* length);
PSIM_API psim_status psim_experiment_hash(const psim_experiment* experiment, char* buffer,
                                          size_t capacity, size_t* length);
/* Runs into output_root/<mode>/<timestamp>/, or output_root itself when flat is
 * nonzero. threads = 0 uses all cores. The manifest JSON is returned. */
PSIM_API psim_status psim_experiment_run(const psim_experiment* experiment,
                                         const char* output_root, int flat, unsigned threads,
                                         size_t* fit_failures, char* manifest,
                                         size_t capacity, size_t* length);

#ifdef __cplusplus
}
#endif

#endif /* PARITYSIM_H */
