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

// Resolution and sensitivity analysis of parity estimates versus phase.
//
// Resolution is the FWHM of the estimated response M(phi); sensitivity is
// dM / |dM/dphi| per single phase-space sample. The Cramer-Rao bound per
// sample is sqrt(2 / SNR).

#ifndef PARITYSIM_METROLOGY_HPP
#define PARITYSIM_METROLOGY_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "paritysim/estimators.hpp"
#include "paritysim/homodyne.hpp"
#include "paritysim/interferometer.hpp"

namespace paritysim {

struct SweepResult {
    std::vector<double> phase_grid;
    std::vector<ParityEstimate> estimates;
    /// Empirical per-sample deviation of the estimate across repeats,
    /// stddev * sqrt(n_samples). Zero for noiseless theory sweeps.
    std::vector<double> spread;
    InterferometerConfig config;
    double integration_time = 1.0;
    double snr_linear = 0.0;
    std::size_t repeats = 0;
};

/// Throws DomainError unless the grid is strictly increasing and matches the
/// estimate count.
void validate(const SweepResult& sweep);

struct SweepOptions {
    EstimatorMethod method = EstimatorMethod::ml;
    ThresholdConfig threshold;
    MlErrorModel ml_error = MlErrorModel::fisher_propagated;
    std::size_t n_samples = 200;
    std::size_t repeats = 200;
    std::uint64_t seed = 0;
    EnsembleSource source = EnsembleSource::direct;
    AcquisitionConfig acquisition;
    unsigned threads = 0;
};

/// Monte Carlo sweep: at every phase, `repeats` ensembles of `n_samples`
/// points. Each estimate holds the mean value over repeats and the mean
/// predicted per-sample error. Ensemble (point k, repeat r) draws from the
/// stream keyed by (seed, k, r), so output does not depend on thread count.
SweepResult monte_carlo_sweep(const InterferometerConfig& config, double t,
                              std::span<const double> phase_grid, const SweepOptions& options);

/// Noiseless sweep holding the expected estimator response and its predicted
/// per-sample error at each phase.
SweepResult theory_sweep(const InterferometerConfig& config, double t,
                         std::span<const double> phase_grid, const SweepOptions& options);

struct SensitivityCurve {
    std::vector<double> phase_grid;
    /// Radians per single sample; +inf where the slope vanishes.
    std::vector<double> delta_phi;
};

struct SensitivityMinimum {
    double phi = 0.0;
    double delta_phi = 0.0;
};

SensitivityCurve sensitivity_from_curve(const SweepResult& sweep);
/// Smallest finite entry; throws DomainError if none is finite.
SensitivityMinimum minimum_sensitivity(const SensitivityCurve& curve);

double cr_bound(double snr);

double ml_sensitivity_theory(const PhotonBudget& budget, double phi,
                             MlErrorModel model = MlErrorModel::fisher_propagated);

/// Minimum of ml_sensitivity_theory over phi, by golden-section search.
SensitivityMinimum ml_sensitivity_minimum(const PhotonBudget& budget,
                                          MlErrorModel model = MlErrorModel::fisher_propagated);

/// Inside probability of the threshold disk at phase phi (leakage-free map).
double threshold_probability(const PhotonBudget& budget, double phi, double a_over_sigma);

double threshold_sensitivity_theory(const PhotonBudget& budget, double phi,
                                    const ThresholdConfig& cfg);

SensitivityMinimum threshold_sensitivity_minimum(const PhotonBudget& budget,
                                                 const ThresholdConfig& cfg);

struct ResolutionFit {
    double snr_hat = 0.0;
    double n_th_hat = 0.0;
    double n_c_hat = 0.0;
    double fwhm = 0.0;
    /// sqrt(weighted RSS / (points - 2)) in units of the per-sample error.
    double residual = 0.0;
    int iterations = 0;
};

/// Weighted Levenberg-Marquardt fit of the leakage-free parity curve
/// (weights 1 / std_error^2). Throws FitFailure when the iteration does not
/// converge or the sweep is narrower than the fitted FWHM.
ResolutionFit fit_parity_model(const SweepResult& sweep);

struct TradeoffOptions {
    double snr = 1e6;
    BernoulliErrorModel error_model = BernoulliErrorModel::exact_bernoulli;
};

struct TradeoffPoint {
    double a_over_sigma = 0.0;
    /// FWHM / (2 sqrt(2 ln 2) * CR).
    double resolution = 0.0;
    /// min over phi of the threshold sensitivity / CR.
    double sensitivity = 0.0;
};

TradeoffPoint tradeoff_point(double a_over_sigma, const TradeoffOptions& options = {});
std::vector<TradeoffPoint> tradeoff_curve(std::span<const double> a_over_sigma_grid,
                                          const TradeoffOptions& options = {});

/// a/sigma where the normalized resolution and sensitivity are equal, solved
/// by bracketing in [lo, hi].
double balance_point(const TradeoffOptions& options = {}, double lo = 1.0, double hi = 3.0);

struct ThresholdFactor {
    double factor = 0.0;
    double a_over_sigma = 0.0;
    double phi = 0.0;
    double snr = 0.0;
};

/// min over (a, phi) of the threshold sensitivity divided by the CR bound.
ThresholdFactor min_sensitivity_factor(BernoulliErrorModel model, double snr = 1e6);

struct ROCConfig {
    double acceptable_deviation = 0.0;  ///< radians
    double phase_prior_max = 0.0;       ///< radians; 0 selects 10 * acceptable_deviation
    std::vector<double> a_grid;         ///< threshold radii in units of sigma
};

void validate(const ROCConfig& roc);

struct ROCPoint {
    double a_over_sigma = 0.0;
    double false_positive_rate = 0.0;
    double true_positive_rate = 0.0;
};

/// Inside probabilities averaged over uniform phase priors on [0, dphi_l]
/// (locked) and (dphi_l, phase_prior_max] (unlocked), one point per radius.
std::vector<ROCPoint> roc_curve(const InterferometerConfig& config, const ROCConfig& roc,
                                double t);

/// Trapezoidal area under an ROC curve closed with (0, 0) and (1, 1).
double roc_area(std::span<const ROCPoint> curve);

}  // namespace paritysim

#endif  // PARITYSIM_METROLOGY_HPP
