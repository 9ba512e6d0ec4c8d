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

// Dark-port output of a two-path interferometer.
//
// The coherent photon number grows linearly with integration time while the
// thermal occupation of the mode stays fixed. Imperfect extinction is modeled
// as an incoherent power floor: the dark port carries n_c(t) * (sin^2(phi/2) + eps)
// coherent photons.

#ifndef PARITYSIM_INTERFEROMETER_HPP
#define PARITYSIM_INTERFEROMETER_HPP

#include "paritysim/core_states.hpp"

namespace paritysim {

struct InterferometerConfig {
    double n_c_total = 0.0;  ///< input coherent photons per reference window
    double n_th = 0.0;       ///< thermal photons per window
    double extinction = 0.0; ///< linear power leakage, 0 <= eps < 1
    double t_ref = 1.0;      ///< reference window, seconds

    /// Config whose reference-window SNR equals `snr`.
    static InterferometerConfig from_snr(double snr, double n_th, double extinction = 0.0,
                                         double t_ref = 1.0);
};

void validate(const InterferometerConfig& config);

double snr_at_reference(const InterferometerConfig& config);
double snr_at_time(const InterferometerConfig& config, double t);

GaussianState output_state(const InterferometerConfig& config, double phi, double t);
double parity_vs_phase(const InterferometerConfig& config, double phi, double t);

/// Full width at half maximum of the leakage-free parity curve,
/// 4 asin(sqrt(ln2 / snr)). Throws DomainError when snr <= ln2, where the
/// curve never falls to half its peak.
double theoretical_fwhm(double snr);

}  // namespace paritysim

#endif  // PARITYSIM_INTERFEROMETER_HPP
