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

#include "paritysim/core_states.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "paritysim/errors.hpp"

namespace paritysim {

namespace {

double normalize_angle(double theta) {
    constexpr double kTwoPi = 2.0 * std::numbers::pi;
    double t = std::fmod(theta, kTwoPi);
    if (t < 0.0) {
        t += kTwoPi;
    }
    // fmod of a tiny negative angle can round up to exactly 2pi.
    if (t >= kTwoPi) {
        t = 0.0;
    }
    return t;
}

}  // namespace

void validate(const PhotonBudget& budget) {
    if (!std::isfinite(budget.n_c) || budget.n_c < 0.0) {
        throw DomainError("coherent photon number must be finite and >= 0, got " +
                          std::to_string(budget.n_c));
    }
    if (!std::isfinite(budget.n_th) || budget.n_th < 0.0) {
        throw DomainError("thermal photon number must be finite and >= 0, got " +
                          std::to_string(budget.n_th));
    }
}

GaussianState::GaussianState(double mu, double theta, double sigma2) {
    if (!std::isfinite(mu) || !std::isfinite(theta) || !std::isfinite(sigma2)) {
        throw DomainError("Gaussian state parameters must be finite");
    }
    if (sigma2 < kVacuumVariance) {
        throw DomainError("per-quadrature variance " + std::to_string(sigma2) +
                          " is below the vacuum floor 1/2");
    }
    if (mu < 0.0) {
        mu = -mu;
        theta += std::numbers::pi;
    }
    mu_ = mu;
    theta_ = normalize_angle(theta);
    sigma2_ = sigma2;
}

double GaussianState::sigma() const noexcept { return std::sqrt(sigma2_); }

std::complex<double> GaussianState::alpha() const noexcept {
    return std::polar(mu_ / std::numbers::sqrt2, theta_);
}

double GaussianState::center_x() const noexcept { return mu_ * std::cos(theta_); }

double GaussianState::center_p() const noexcept { return mu_ * std::sin(theta_); }

GaussianState compose_coherent_thermal(const PhotonBudget& budget, double theta) {
    validate(budget);
    if (!std::isfinite(theta)) {
        throw DomainError("displacement phase must be finite");
    }
    return GaussianState(std::sqrt(2.0 * budget.n_c), theta, budget.n_th + kVacuumVariance);
}

double wigner_density(const GaussianState& state, double x, double p) {
    const double dx = x - state.center_x();
    const double dp = p - state.center_p();
    const double s2 = state.sigma2();
    return std::exp(-(dx * dx + dp * dp) / (2.0 * s2)) / (2.0 * std::numbers::pi * s2);
}

double parity_value(double mu, double sigma2) {
    return std::exp(-mu * mu / (2.0 * sigma2)) / (2.0 * sigma2);
}

double parity_of_state(const GaussianState& state) {
    return parity_value(state.mu(), state.sigma2());
}

double snr_of(const PhotonBudget& budget) {
    validate(budget);
    return budget.n_c / (budget.n_th + kVacuumVariance);
}

}  // namespace paritysim
