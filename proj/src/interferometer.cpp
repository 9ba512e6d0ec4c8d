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

#include "paritysim/interferometer.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "paritysim/errors.hpp"

namespace paritysim {

namespace {

void check_time(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw DomainError("integration time must be positive and finite, got " + std::to_string(t));
    }
}

}  // namespace

InterferometerConfig InterferometerConfig::from_snr(double snr, double n_th, double extinction,
                                                    double t_ref) {
    InterferometerConfig config;
    config.n_c_total = snr * (n_th + kVacuumVariance);
    config.n_th = n_th;
    config.extinction = extinction;
    config.t_ref = t_ref;
    validate(config);
    return config;
}

void validate(const InterferometerConfig& config) {
    validate(PhotonBudget{config.n_c_total, config.n_th});
    if (!std::isfinite(config.extinction) || config.extinction < 0.0 || config.extinction >= 1.0) {
        throw DomainError("extinction leakage must lie in [0, 1), got " +
                          std::to_string(config.extinction));
    }
    if (!(config.t_ref > 0.0) || !std::isfinite(config.t_ref)) {
        throw DomainError("reference window must be positive");
    }
}

double snr_at_reference(const InterferometerConfig& config) {
    return snr_of(PhotonBudget{config.n_c_total, config.n_th});
}

double snr_at_time(const InterferometerConfig& config, double t) {
    check_time(t);
    return snr_at_reference(config) * t / config.t_ref;
}

GaussianState output_state(const InterferometerConfig& config, double phi, double t) {
    validate(config);
    check_time(t);
    if (!std::isfinite(phi)) {
        throw DomainError("interferometric phase must be finite");
    }
    const double n_c = config.n_c_total * t / config.t_ref;
    const double s = std::sin(0.5 * phi);
    const double dark_port_photons = n_c * (s * s + config.extinction);
    return GaussianState(std::sqrt(2.0 * dark_port_photons), 0.5 * phi,
                         config.n_th + kVacuumVariance);
}

double parity_vs_phase(const InterferometerConfig& config, double phi, double t) {
    return parity_of_state(output_state(config, phi, t));
}

double theoretical_fwhm(double snr) {
    if (!(snr > std::numbers::ln2) || std::isnan(snr)) {
        throw DomainError("no super-resolved feature: SNR " + std::to_string(snr) +
                          " does not exceed ln 2");
    }
    if (std::isinf(snr)) {
        return 0.0;
    }
    return 4.0 * std::asin(std::sqrt(std::numbers::ln2 / snr));
}

}  // namespace paritysim
