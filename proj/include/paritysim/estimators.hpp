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

// Estimators of the parity expectation from phase-space ensembles.
//
// Two routes are provided. The maximum-likelihood route fits a symmetric
// Gaussian to the ensemble and evaluates the closed-form parity at the fit.
// The threshold route counts the fraction of points inside a disk of radius a
// around the origin; its expectation is the Rician CDF at a.
//
// All std_error fields are per single phase-space sample: the error of an
// n-sample estimate is std_error / sqrt(n).

#ifndef PARITYSIM_ESTIMATORS_HPP
#define PARITYSIM_ESTIMATORS_HPP

#include <cstddef>
#include <string_view>

#include "paritysim/core_states.hpp"
#include "paritysim/homodyne.hpp"

namespace paritysim {

enum class EstimatorMethod { ml, threshold };

/// Per-sample deviation of a Bernoulli frequency p.
enum class BernoulliErrorModel {
    exact_bernoulli,  ///< sqrt(p (1 - p))
    paper_sqrt_p,     ///< sqrt(p)
};

/// Error propagation for the maximum-likelihood parity estimate.
enum class MlErrorModel {
    /// Full propagation of the Fisher information through the parity
    /// closed form: value * sqrt(1 + mu^4 / (4 sigma^4)).
    fisher_propagated,
    /// value * sqrt(1 + mu^2 / sigma^2), the mean-only propagation.
    paper_printed,
};

std::string_view to_string(EstimatorMethod method);
std::string_view to_string(BernoulliErrorModel model);
std::string_view to_string(MlErrorModel model);

struct ParityEstimate {
    double value = 0.0;
    double std_error = 0.0;
    EstimatorMethod method = EstimatorMethod::ml;
    std::size_t n_samples = 0;
};

struct ThresholdConfig {
    double a_over_sigma = 1.5;
    BernoulliErrorModel error_model = BernoulliErrorModel::exact_bernoulli;
};

void validate(const ThresholdConfig& cfg);

struct MLFit {
    double mu_hat = 0.0;
    double theta_hat = 0.0;
    double sigma2_hat = 0.0;
    std::size_t n_samples = 0;
};

/// Centroid in polar form and pooled per-axis ML variance
/// (1 / 2n) * sum |z_k - centroid|^2. Throws DegenerateEnsembleError for n < 2
/// or zero spread.
MLFit ml_fit(const IQEnsemble& ensemble);

/// Multiplier on the parity value giving the per-sample error.
double ml_error_factor(double mu, double sigma2, MlErrorModel model);

ParityEstimate ml_parity(const MLFit& fit, MlErrorModel model = MlErrorModel::fisher_propagated);

double bernoulli_error(double p, BernoulliErrorModel model);

/// Fraction of samples within a = cfg.a_over_sigma * sigma of the origin.
/// `sigma` is the calibrated noise deviation, not re-estimated here.
ParityEstimate threshold_estimate(const IQEnsemble& ensemble, const ThresholdConfig& cfg,
                                  double sigma);

/// Disk-averaged Wigner value times pi, p / a^2, for an inside fraction p
/// and a disk of radius a.
double parity_from_threshold_probability(double p, double radius);

/// P(R <= a) for the radius R of a 2-D Gaussian displaced by nu with
/// per-axis deviation sigma, i.e. 1 - Q1(nu / sigma, a / sigma).
double rician_cdf(double nu, double sigma, double a);
/// Complement Q1(nu / sigma, a / sigma), accurate in the far tail.
double rician_sf(double nu, double sigma, double a);

/// Phase sensitivity of ensemble-averaged single-shot parity (photon counting)
/// for a leakage-free interferometer. Throws DivergenceError where sin(phi)
/// vanishes.
double direct_parity_sensitivity(const PhotonBudget& budget, double phi);

}  // namespace paritysim

#endif  // PARITYSIM_ESTIMATORS_HPP
