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

// Symmetric Gaussian phase-space states.
//
// Quadratures are dimensionless with the vacuum variance fixed at 1/2, so a
// state with radial displacement mu carries mu^2/2 coherent photons and a
// per-quadrature variance sigma2 carries sigma2 - 1/2 thermal photons.

#ifndef PARITYSIM_CORE_STATES_HPP
#define PARITYSIM_CORE_STATES_HPP

#include <complex>

namespace paritysim {

inline constexpr double kVacuumVariance = 0.5;

/// Mean coherent and thermal photon numbers in one detection window.
struct PhotonBudget {
    double n_c = 0.0;
    double n_th = 0.0;
};

/// Validates a budget (finite, non-negative fields); throws DomainError.
void validate(const PhotonBudget& budget);

class GaussianState {
  public:
    /// A negative `mu` is folded into `theta` by a half turn. `theta` is
    /// normalized into [0, 2pi). Throws DomainError for sigma2 < 1/2 or
    /// non-finite input.
    GaussianState(double mu, double theta, double sigma2);

    static GaussianState vacuum() { return GaussianState(0.0, 0.0, kVacuumVariance); }

    double mu() const noexcept { return mu_; }
    double theta() const noexcept { return theta_; }
    double sigma2() const noexcept { return sigma2_; }
    double sigma() const noexcept;

    double coherent_photons() const noexcept { return 0.5 * mu_ * mu_; }
    double thermal_photons() const noexcept { return sigma2_ - kVacuumVariance; }

    /// Conventional coherent amplitude, |alpha|^2 = coherent_photons().
    std::complex<double> alpha() const noexcept;

    /// Displacement center in the (x, p) plane.
    double center_x() const noexcept;
    double center_p() const noexcept;

    friend bool operator==(const GaussianState&, const GaussianState&) = default;

  private:
    double mu_;
    double theta_;
    double sigma2_;
};

GaussianState compose_coherent_thermal(const PhotonBudget& budget, double theta);

/// Wigner function of the state at (x, p).
double wigner_density(const GaussianState& state, double x, double p);

/// <Pi> = pi * W(0, 0) = exp(-mu^2 / (2 sigma2)) / (2 sigma2).
double parity_of_state(const GaussianState& state);

/// The same closed form on raw parameters. No vacuum-floor check, since
/// fitted variances may fall below 1/2 through sampling noise.
double parity_value(double mu, double sigma2);

/// Phase-space SNR n_c / (n_th + 1/2).
double snr_of(const PhotonBudget& budget);

}  // namespace paritysim

#endif  // PARITYSIM_CORE_STATES_HPP
