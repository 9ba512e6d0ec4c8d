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

#include "paritysim/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "paritysim/errors.hpp"

namespace paritysim {

namespace {

// Poisson weights below this are dropped from the Marcum series.
constexpr double kSeriesTolerance = 1e-16;
// Beyond this many deviations between radius and displacement the CDF is 0 or
// 1 to double precision (tail bound exp(-gap^2 / 2)).
constexpr double kSaturationGap = 38.0;

struct RadialProbabilities {
    double cdf;
    double sf;
};

// Noncentral chi-square mixture: with lambda = alpha^2 / 2 and x = beta^2 / 2,
//   P(R <= beta) = sum_j Pois(j; lambda) * P(j + 1, x),
// P the regularized lower incomplete gamma. Summation starts at the Poisson
// mode and walks outward with the recurrences
//   P(j + 1, x) = P(j, x) - x^j e^-x / j!,  Pois(j + 1) = Pois(j) * lambda / (j + 1).
RadialProbabilities radial_probabilities(double alpha, double beta) {
    if (beta == 0.0) {
        return {0.0, 1.0};
    }
    if (alpha - beta > kSaturationGap) {
        return {0.0, 1.0};
    }
    if (beta - alpha > kSaturationGap) {
        return {1.0, 0.0};
    }
    const double x = 0.5 * beta * beta;
    const double lambda = 0.5 * alpha * alpha;
    if (lambda == 0.0) {
        return {-std::expm1(-x), std::exp(-x)};
    }

    const double j0 = std::floor(lambda);
    const double w0 = std::exp(-lambda + j0 * std::log(lambda) - std::lgamma(j0 + 1.0));
    const double g0 = std::exp(-x + j0 * std::log(x) - std::lgamma(j0 + 1.0));
    const double p0 = boost::math::gamma_p(j0 + 1.0, x);
    const double q0 = boost::math::gamma_q(j0 + 1.0, x);

    double cdf = w0 * p0;
    double sf = w0 * q0;

    // Upward: j = j0 + 1, j0 + 2, ...
    {
        double w = w0;
        double g = g0;
        double p = p0;
        double q = q0;
        for (double j = j0 + 1.0;; j += 1.0) {
            w *= lambda / j;
            g *= x / j;
            p = std::max(0.0, p - g);
            q = std::min(1.0, q + g);
            cdf += w * p;
            sf += w * q;
            if (w < kSeriesTolerance) {
                break;
            }
        }
    }
    // Downward: j = j0 - 1, ..., 0.
    {
        double w = w0;
        double g = g0;
        double p = p0;
        double q = q0;
        for (double j = j0; j >= 1.0; j -= 1.0) {
            // Step from index j to j - 1 using g_j before it is lowered.
            p = std::min(1.0, p + g);
            q = std::max(0.0, q - g);
            g *= j / x;
            w *= j / lambda;
            cdf += w * p;
            sf += w * q;
            if (w < kSeriesTolerance) {
                break;
            }
        }
    }
    return {std::clamp(cdf, 0.0, 1.0), std::clamp(sf, 0.0, 1.0)};
}

RadialProbabilities checked_radial(double nu, double sigma, double a) {
    if (!std::isfinite(nu) || !std::isfinite(sigma) || !std::isfinite(a)) {
        throw DomainError("Rician arguments must be finite");
    }
    if (!(sigma > 0.0)) {
        throw DomainError("Rician deviation must be positive");
    }
    if (nu < 0.0 || a < 0.0) {
        throw DomainError("Rician displacement and radius must be non-negative");
    }
    return radial_probabilities(nu / sigma, a / sigma);
}

}  // namespace

std::string_view to_string(EstimatorMethod method) {
    return method == EstimatorMethod::ml ? "ml" : "threshold";
}

std::string_view to_string(BernoulliErrorModel model) {
    return model == BernoulliErrorModel::exact_bernoulli ? "exact-bernoulli" : "paper-sqrt-p";
}

std::string_view to_string(MlErrorModel model) {
    return model == MlErrorModel::fisher_propagated ? "fisher-propagated" : "paper-printed";
}

void validate(const ThresholdConfig& cfg) {
    if (!std::isfinite(cfg.a_over_sigma) || !(cfg.a_over_sigma > 0.0)) {
        throw DomainError("threshold radius a/sigma must be finite and positive");
    }
}

MLFit ml_fit(const IQEnsemble& ensemble) {
    const std::size_t n = ensemble.size();
    if (n < 2) {
        throw DegenerateEnsembleError("maximum-likelihood fit needs at least two samples");
    }
    double sum_i = 0.0;
    double sum_q = 0.0;
    for (const auto& s : ensemble.samples) {
        sum_i += s.i;
        sum_q += s.q;
    }
    const double ci = sum_i / static_cast<double>(n);
    const double cq = sum_q / static_cast<double>(n);
    double scatter = 0.0;
    for (const auto& s : ensemble.samples) {
        const double di = s.i - ci;
        const double dq = s.q - cq;
        scatter += di * di + dq * dq;
    }
    if (!(scatter > 0.0)) {
        throw DegenerateEnsembleError("ensemble has zero spread");
    }
    MLFit fit;
    fit.mu_hat = std::hypot(ci, cq);
    fit.theta_hat = std::atan2(cq, ci);
    if (fit.theta_hat < 0.0) {
        fit.theta_hat += 2.0 * std::numbers::pi;
    }
    fit.sigma2_hat = scatter / (2.0 * static_cast<double>(n));
    fit.n_samples = n;
    return fit;
}

double ml_error_factor(double mu, double sigma2, MlErrorModel model) {
    const double ratio = mu * mu / sigma2;
    if (model == MlErrorModel::paper_printed) {
        return std::sqrt(1.0 + ratio);
    }
    return std::sqrt(1.0 + 0.25 * ratio * ratio);
}

ParityEstimate ml_parity(const MLFit& fit, MlErrorModel model) {
    if (!(fit.sigma2_hat > 0.0) || !std::isfinite(fit.sigma2_hat) || !std::isfinite(fit.mu_hat) ||
        fit.mu_hat < 0.0) {
        throw DomainError("invalid maximum-likelihood fit");
    }
    ParityEstimate est;
    est.value = parity_value(fit.mu_hat, fit.sigma2_hat);
    est.std_error = est.value * ml_error_factor(fit.mu_hat, fit.sigma2_hat, model);
    est.method = EstimatorMethod::ml;
    est.n_samples = fit.n_samples;
    return est;
}

double bernoulli_error(double p, BernoulliErrorModel model) {
    p = std::clamp(p, 0.0, 1.0);
    if (model == BernoulliErrorModel::paper_sqrt_p) {
        return std::sqrt(p);
    }
    return std::sqrt(p * (1.0 - p));
}

ParityEstimate threshold_estimate(const IQEnsemble& ensemble, const ThresholdConfig& cfg,
                                  double sigma) {
    validate(cfg);
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw DomainError("calibrated noise deviation must be positive");
    }
    if (ensemble.size() == 0) {
        throw DomainError("threshold estimate needs at least one sample");
    }
    const double a = cfg.a_over_sigma * sigma;
    const double a2 = a * a;
    std::size_t inside = 0;
    for (const auto& s : ensemble.samples) {
        if (s.i * s.i + s.q * s.q <= a2) {
            ++inside;
        }
    }
    ParityEstimate est;
    est.value = static_cast<double>(inside) / static_cast<double>(ensemble.size());
    est.std_error = bernoulli_error(est.value, cfg.error_model);
    est.method = EstimatorMethod::threshold;
    est.n_samples = ensemble.size();
    return est;
}

double parity_from_threshold_probability(double p, double radius) {
    if (!(radius > 0.0)) {
        throw DomainError("threshold radius must be positive");
    }
    return p / (radius * radius);
}

double rician_cdf(double nu, double sigma, double a) { return checked_radial(nu, sigma, a).cdf; }

double rician_sf(double nu, double sigma, double a) { return checked_radial(nu, sigma, a).sf; }

double direct_parity_sensitivity(const PhotonBudget& budget, double phi) {
    validate(budget);
    if (!std::isfinite(phi)) {
        throw DomainError("phase must be finite");
    }
    const double sin_phi = std::sin(phi);
    const double turns = phi / std::numbers::pi;
    if (std::abs(turns - std::round(turns)) < 1e-12 || budget.n_c == 0.0) {
        throw DivergenceError("parity slope vanishes at this phase");
    }
    const double occupancy = 2.0 * budget.n_th + 1.0;
    const double s = std::sin(0.5 * phi);
    // Var(Pi) = 1 - <Pi>^2, so dphi = sqrt(1 / <Pi>^2 - 1) / |d ln<Pi> / dphi|.
    const double log_inv_sq = 2.0 * std::log(occupancy) + 4.0 * budget.n_c * s * s / occupancy;
    const double numerator = std::exp(0.5 * log_inv_sq) * std::sqrt(-std::expm1(-log_inv_sq));
    const double slope = budget.n_c * std::abs(sin_phi) / occupancy;
    return numerator / slope;
}

}  // namespace paritysim
