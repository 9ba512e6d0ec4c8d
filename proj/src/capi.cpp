// Copyright 2026 The paritysim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "paritysim/paritysim.h"

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "paritysim/core_states.hpp"
#include "paritysim/errors.hpp"
#include "paritysim/estimators.hpp"
#include "paritysim/experiment.hpp"
#include "paritysim/homodyne.hpp"
#include "paritysim/interferometer.hpp"
#include "paritysim/metrology.hpp"

struct psim_state {
    paritysim::GaussianState value;
};

struct psim_ensemble {
    paritysim::IQEnsemble value;
};

struct psim_timeseries {
    paritysim::TimeSeries value;
};

struct psim_experiment {
    nlohmann::json doc;
    paritysim::ExperimentConfig config;
};

namespace {

thread_local std::string last_error;

template <class Fn>
psim_status guard(Fn&& fn) {
    last_error.clear();
    try {
        fn();
        return PSIM_OK;
    } catch (const paritysim::FitFailure& e) {
        last_error = e.what();
        return PSIM_ERR_FIT_FAILURE;
    } catch (const paritysim::DivergenceError& e) {
        last_error = e.what();
        return PSIM_ERR_DIVERGENCE;
    } catch (const paritysim::ConfigError& e) {
        last_error = e.what();
        return PSIM_ERR_CONFIG;
    } catch (const paritysim::DomainError& e) {
        last_error = e.what();
        return PSIM_ERR_DOMAIN;
    } catch (const paritysim::DegenerateEnsembleError& e) {
        last_error = e.what();
        return PSIM_ERR_DEGENERATE;
    } catch (const paritysim::IoError& e) {
        last_error = e.what();
        return PSIM_ERR_IO;
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return PSIM_ERR_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return PSIM_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown error";
        return PSIM_ERR_INTERNAL;
    }
}

template <class... Ptrs>
bool any_null(const Ptrs*... ptrs) {
    return ((ptrs == nullptr) || ...);
}

psim_status null_arg() {
    last_error = "required pointer argument is NULL";
    return PSIM_ERR_NULL_ARG;
}

paritysim::InterferometerConfig to_cpp(const psim_interferometer& c) {
    return {c.n_c_total, c.n_th, c.extinction, c.t_ref};
}

paritysim::AcquisitionConfig to_cpp(const psim_acquisition& a) {
    paritysim::AcquisitionConfig out;
    out.carrier_hz = a.carrier_hz;
    out.sample_rate_hz = a.sample_rate_hz;
    out.window_s = a.window_s;
    out.volts_per_unit = a.volts_per_unit;
    return out;
}

void copy_out(const std::string& text, char* buffer, size_t capacity, size_t* length) {
    if (length) {
        *length = text.size();
    }
    if (buffer && capacity > 0) {
        const size_t n = std::min(capacity - 1, text.size());
        std::memcpy(buffer, text.data(), n);
        buffer[n] = '\0';
    }
}

psim_estimate to_c(const paritysim::ParityEstimate& e) {
    return {e.value, e.std_error, e.n_samples};
}

}  // namespace

extern "C" {

const char* psim_version(void) {
    static const std::string version(paritysim::library_version());
    return version.c_str();
}

const char* psim_last_error(void) { return last_error.c_str(); }

const char* psim_status_name(psim_status status) {
    switch (status) {
        case PSIM_OK: return "ok";
        case PSIM_ERR_DOMAIN: return "domain error";
        case PSIM_ERR_DEGENERATE: return "degenerate ensemble";
        case PSIM_ERR_DIVERGENCE: return "divergence";
        case PSIM_ERR_FIT_FAILURE: return "fit failure";
        case PSIM_ERR_CONFIG: return "configuration error";
        case PSIM_ERR_IO: return "I/O error";
        case PSIM_ERR_NULL_ARG: return "null argument";
        case PSIM_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

psim_status psim_state_new(double mu, double theta, double sigma2, psim_state** out) {
    if (!out) return null_arg();
    return guard([&] { *out = new psim_state{paritysim::GaussianState(mu, theta, sigma2)}; });
}

psim_status psim_state_from_photons(double n_c, double n_th, double theta, psim_state** out) {
    if (!out) return null_arg();
    return guard([&] {
        *out = new psim_state{paritysim::compose_coherent_thermal({n_c, n_th}, theta)};
    });
}

void psim_state_free(psim_state* state) { delete state; }

psim_status psim_state_params(const psim_state* state, double* mu, double* theta, double* sigma2) {
    if (!state) return null_arg();
    return guard([&] {
        if (mu) *mu = state->value.mu();
        if (theta) *theta = state->value.theta();
        if (sigma2) *sigma2 = state->value.sigma2();
    });
}

psim_status psim_state_parity(const psim_state* state, double* out) {
    if (any_null(state, out)) return null_arg();
    return guard([&] { *out = paritysim::parity_of_state(state->value); });
}

psim_status psim_state_wigner(const psim_state* state, double x, double p, double* out) {
    if (any_null(state, out)) return null_arg();
    return guard([&] { *out = paritysim::wigner_density(state->value, x, p); });
}

psim_status psim_interferometer_output(const psim_interferometer* config, double phi, double t,
                                       psim_state** out) {
    if (any_null(config, out)) return null_arg();
    return guard([&] {
        *out = new psim_state{paritysim::output_state(to_cpp(*config), phi, t)};
    });
}

psim_status psim_parity_vs_phase(const psim_interferometer* config, double phi, double t,
                                 double* out) {
    if (any_null(config, out)) return null_arg();
    return guard([&] { *out = paritysim::parity_vs_phase(to_cpp(*config), phi, t); });
}

psim_status psim_theoretical_fwhm(double snr, double* out) {
    if (!out) return null_arg();
    return guard([&] { *out = paritysim::theoretical_fwhm(snr); });
}

psim_status psim_cr_bound(double snr, double* out) {
    if (!out) return null_arg();
    return guard([&] { *out = paritysim::cr_bound(snr); });
}

psim_status psim_sample_phase_space(const psim_state* state, size_t n, uint64_t seed,
                                    psim_ensemble** out) {
    if (any_null(state, out)) return null_arg();
    return guard([&] {
        *out = new psim_ensemble{paritysim::sample_phase_space(state->value, n, seed)};
    });
}

psim_status psim_ensemble_from_timeseries(const psim_acquisition* acq, const psim_state* state,
                                          size_t n, uint64_t seed, psim_ensemble** out) {
    if (any_null(acq, state, out)) return null_arg();
    return guard([&] {
        *out = new psim_ensemble{
            paritysim::ensemble_from_timeseries(to_cpp(*acq), state->value, n, seed)};
    });
}

void psim_ensemble_free(psim_ensemble* ensemble) { delete ensemble; }

size_t psim_ensemble_size(const psim_ensemble* ensemble) {
    return ensemble ? ensemble->value.size() : 0;
}

psim_status psim_ensemble_get(const psim_ensemble* ensemble, size_t index, double* i, double* q) {
    if (any_null(ensemble, i, q)) return null_arg();
    return guard([&] {
        if (index >= ensemble->value.size()) {
            throw paritysim::DomainError("ensemble index out of range");
        }
        *i = ensemble->value.samples[index].i;
        *q = ensemble->value.samples[index].q;
    });
}

psim_status psim_ml_estimate(const psim_ensemble* ensemble, psim_ml_error_model model,
                             psim_estimate* out) {
    if (any_null(ensemble, out)) return null_arg();
    return guard([&] {
        const auto m = model == PSIM_ML_PAPER_PRINTED ? paritysim::MlErrorModel::paper_printed
                                                      : paritysim::MlErrorModel::fisher_propagated;
        *out = to_c(paritysim::ml_parity(paritysim::ml_fit(ensemble->value), m));
    });
}

psim_status psim_threshold_estimate(const psim_ensemble* ensemble, double a_over_sigma,
                                    double sigma, psim_error_model model, psim_estimate* out) {
    if (any_null(ensemble, out)) return null_arg();
    return guard([&] {
        paritysim::ThresholdConfig cfg;
        cfg.a_over_sigma = a_over_sigma;
        cfg.error_model = model == PSIM_BERNOULLI_SQRT_P
                              ? paritysim::BernoulliErrorModel::paper_sqrt_p
                              : paritysim::BernoulliErrorModel::exact_bernoulli;
        *out = to_c(paritysim::threshold_estimate(ensemble->value, cfg, sigma));
    });
}

psim_status psim_rician_cdf(double nu, double sigma, double a, double* out) {
    if (!out) return null_arg();
    return guard([&] { *out = paritysim::rician_cdf(nu, sigma, a); });
}

psim_status psim_min_sensitivity_factor(psim_error_model model, double snr, double* factor,
                                        double* a_over_sigma) {
    if (!factor) return null_arg();
    return guard([&] {
        const auto m = model == PSIM_BERNOULLI_SQRT_P
                           ? paritysim::BernoulliErrorModel::paper_sqrt_p
                           : paritysim::BernoulliErrorModel::exact_bernoulli;
        const auto result = paritysim::min_sensitivity_factor(m, snr);
        *factor = result.factor;
        if (a_over_sigma) *a_over_sigma = result.a_over_sigma;
    });
}

psim_status psim_default_acquisition(psim_acquisition* out) {
    if (!out) return null_arg();
    const paritysim::AcquisitionConfig d;
    *out = {d.carrier_hz, d.sample_rate_hz, d.window_s, d.volts_per_unit};
    return PSIM_OK;
}

psim_status psim_synthesize_timeseries(const psim_acquisition* acq, const psim_state* state,
                                       uint64_t seed, int noiseless, psim_timeseries** out) {
    if (any_null(acq, state, out)) return null_arg();
    return guard([&] {
        paritysim::SynthesisOptions options;
        options.noiseless = noiseless != 0;
        *out = new psim_timeseries{
            paritysim::synthesize_timeseries(to_cpp(*acq), state->value, seed, options)};
    });
}

psim_status psim_timeseries_read(const char* path, psim_timeseries** out) {
    if (any_null(path, out)) return null_arg();
    return guard([&] {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            throw paritysim::IoError(std::string("cannot open ") + path + ": " +
                                     std::strerror(errno));
        }
        *out = new psim_timeseries{paritysim::read_timeseries_csv(in)};
    });
}

psim_status psim_timeseries_write(const psim_timeseries* series, const char* path) {
    if (any_null(series, path)) return null_arg();
    return guard([&] {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw paritysim::IoError(std::string("cannot open ") + path + " for writing: " +
                                     std::strerror(errno));
        }
        paritysim::write_timeseries_csv(series->value, out);
        out.flush();
        if (!out) {
            throw paritysim::IoError(std::string("failed writing ") + path);
        }
    });
}

void psim_timeseries_free(psim_timeseries* series) { delete series; }

size_t psim_timeseries_length(const psim_timeseries* series) {
    return series ? series->value.samples.size() : 0;
}

psim_status psim_extract_iq(const psim_timeseries* series, const psim_acquisition* acq,
                            double reference_phase, double* i, double* q) {
    if (any_null(series, acq, i, q)) return null_arg();
    return guard([&] {
        const auto iq = paritysim::extract_iq(series->value, to_cpp(*acq), reference_phase);
        *i = iq.i;
        *q = iq.q;
    });
}

psim_status psim_experiment_default(psim_experiment** out) {
    if (!out) return null_arg();
    return guard([&] {
        *out = new psim_experiment{nlohmann::json::object(), paritysim::ExperimentConfig{}};
    });
}

psim_status psim_experiment_from_json(const char* json_text, psim_experiment** out) {
    if (any_null(json_text, out)) return null_arg();
    return guard([&] {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(json_text);
        } catch (const nlohmann::json::parse_error& e) {
            throw paritysim::ConfigError("config", std::string("malformed JSON: ") + e.what());
        }
        auto config = paritysim::config_from_json(doc);
        *out = new psim_experiment{std::move(doc), std::move(config)};
    });
}

psim_status psim_experiment_load(const char* path, psim_experiment** out) {
    if (any_null(path, out)) return null_arg();
    std::string text;
    const psim_status read = guard([&] {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            throw paritysim::IoError(std::string("cannot open ") + path + ": " +
                                     std::strerror(errno));
        }
        std::ostringstream buffer;
        buffer << in.rdbuf();
        text = buffer.str();
    });
    if (read != PSIM_OK) {
        return read;
    }
    return psim_experiment_from_json(text.c_str(), out);
}

void psim_experiment_free(psim_experiment* experiment) { delete experiment; }

psim_status psim_experiment_set(psim_experiment* experiment, const char* key,
                                const char* value_text) {
    if (any_null(experiment, key, value_text)) return null_arg();
    return guard([&] {
        nlohmann::json doc = experiment->doc;
        paritysim::apply_override(doc, key, value_text);
        auto config = paritysim::config_from_json(doc);
        experiment->doc = std::move(doc);
        experiment->config = std::move(config);
    });
}

psim_status psim_experiment_to_json(const psim_experiment* experiment, char* buffer,
                                    size_t capacity, size_t* length) {
    if (!experiment) return null_arg();
    return guard([&] {
        copy_out(paritysim::to_json(experiment->config).dump(2), buffer, capacity, length);
    });
}

psim_status psim_experiment_validate(const psim_experiment* experiment, size_t* count,
                                     char* buffer, size_t capacity, size_t* length) {
    if (!experiment) return null_arg();
    return guard([&] {
        const auto problems = paritysim::validate(experiment->config);
        std::string joined;
        for (const auto& p : problems) {
            joined += p;
            joined += '\n';
        }
        if (count) *count = problems.size();
        copy_out(joined, buffer, capacity, length);
    });
}

psim_status psim_experiment_hash(const psim_experiment* experiment, char* buffer,
                                 size_t capacity, size_t* length) {
    if (!experiment) return null_arg();
    return guard([&] {
        copy_out(paritysim::config_hash(experiment->config), buffer, capacity, length);
    });
}

psim_status psim_experiment_run(const psim_experiment* experiment, const char* output_root,
                                int flat, unsigned threads, size_t* fit_failures, char* manifest,
                                size_t capacity, size_t* length) {
    if (any_null(experiment, output_root)) return null_arg();
    return guard([&] {
        paritysim::RunOptions options;
        options.flat = flat != 0;
        options.threads = threads;
        const auto result = paritysim::run_experiment(experiment->config, output_root, options);
        if (fit_failures) *fit_failures = result.fit_failures;
        copy_out(paritysim::to_json(result).dump(2), manifest, capacity, length);
    });
}

}  // extern "C"
