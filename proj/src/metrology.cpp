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

#include "paritysim/metrology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>

#include "paritysim/errors.hpp"
#include "paritysim/parallel.hpp"
#include "paritysim/random.hpp"

namespace paritysim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kInvGolden = (std::sqrt(5.0) - 1.0) / 2.0;

struct Minimum {
    double x;
    double f;
};

// Golden-section search on [lo, hi]; stops when the bracket is below
// rel_tol * |x|.
template <class F>
Minimum golden_section(F&& f, double lo, double hi, double rel_tol) {
    double c = hi - kInvGolden * (hi - lo);
    double d = lo + kInvGolden * (hi - lo);
    double fc = f(c);
    double fd = f(d);
    for (int iter = 0; iter < 200 && (hi - lo) > rel_tol * std::abs(0.5 * (hi + lo)); ++iter) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - kInvGolden * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + kInvGolden * (hi - lo);
            fd = f(d);
        }
    }
    return fc < fd ? Minimum{c, fc} : Minimum{d, fd};
}

// Coarse scan over `points` to bracket the global minimum, then golden
// refinement between the neighbors of the best scan point.
template <class F>
Minimum scan_then_golden(F&& f, const std::vector<double>& points, double rel_tol) {
    std::size_t best = 0;
    double best_f = kInf;
    for (std::size_t k = 0; k < points.size(); ++k) {
        const double v = f(points[k]);
        if (v < best_f) {
            best_f = v;
            best = k;
        }
    }
    if (!std::isfinite(best_f)) {
        return {points[best], kInf};
    }
    const double lo = points[best == 0 ? 0 : best - 1];
    const double hi = points[std::min(best + 1, points.size() - 1)];
    Minimum refined = golden_section(f, lo, hi, rel_tol);
    if (refined.f > best_f) {
        return {points[best], best_f};
    }
    return refined;
}

std::vector<double> log_spaced(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    const double step = std::log(hi / lo) / static_cast<double>(n - 1);
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = lo * std::exp(step * static_cast<double>(k));
    }
    out.back() = hi;
    return out;
}

void check_grid(std::span<const double> grid) {
    if (grid.empty()) {
        throw DomainError("phase grid is empty");
    }
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!std::isfinite(grid[k])) {
            throw DomainError("phase grid holds a non-finite value");
        }
        if (k > 0 && !(grid[k] > grid[k - 1])) {
            throw DomainError("phase grid must be strictly increasing");
        }
    }
}

bool at_stationary_phase(double phi) {
    const double turns = phi / std::numbers::pi;
    return std::abs(turns - std::round(turns)) < 1e-12;
}

double noise_sigma(const PhotonBudget& budget) {
    return std::sqrt(budget.n_th + kVacuumVariance);
}

double coherent_radius(const PhotonBudget& budget, double phi) {
    return std::sqrt(2.0 * budget.n_c) * std::abs(std::sin(0.5 * phi));
}

double derivative_step(double snr) {
    return snr > std::numbers::ln2 ? 1e-6 * theoretical_fwhm(snr) : 1e-6;
}

// Threshold sensitivity, +inf where the response is flat. The slope is taken
// on whichever of p or 1 - p is smaller so it survives when p is near 1.
double threshold_delta_phi(const PhotonBudget& budget, double phi, const ThresholdConfig& cfg,
                           double step) {
    const double sigma = noise_sigma(budget);
    const double a = cfg.a_over_sigma * sigma;
    const double nu = coherent_radius(budget, phi);
    const double p = rician_cdf(nu, sigma, a);
    const double q = rician_sf(nu, sigma, a);
    auto tail = p <= q ? rician_cdf : rician_sf;
    const double slope = std::abs(tail(coherent_radius(budget, phi + step), sigma, a) -
                                  tail(coherent_radius(budget, phi - step), sigma, a)) /
                         (2.0 * step);
    if (!(slope > 0.0)) {
        return kInf;
    }
    const double error = cfg.error_model == BernoulliErrorModel::paper_sqrt_p
                             ? std::sqrt(p)
                             : std::sqrt(p * q);
    return error / slope;
}

ParityEstimate estimate_ensemble(const IQEnsemble& ensemble, const GaussianState& state,
                                 const SweepOptions& options) {
    if (options.method == EstimatorMethod::ml) {
        return ml_parity(ml_fit(ensemble), options.ml_error);
    }
    return threshold_estimate(ensemble, options.threshold, state.sigma());
}

}  // namespace

void validate(const SweepResult& sweep) {
    check_grid(sweep.phase_grid);
    if (sweep.estimates.size() != sweep.phase_grid.size()) {
        throw DomainError("sweep holds " + std::to_string(sweep.estimates.size()) +
                          " estimates for " + std::to_string(sweep.phase_grid.size()) +
                          " phases");
    }
}

SweepResult monte_carlo_sweep(const InterferometerConfig& config, double t,
                              std::span<const double> phase_grid, const SweepOptions& options) {
    validate(config);
    check_grid(phase_grid);
    if (options.repeats == 0) {
        throw DomainError("repeats must be at least 1");
    }
    if (options.n_samples == 0 ||
        (options.method == EstimatorMethod::ml && options.n_samples < 2)) {
        throw DomainError("ensemble size too small for the selected estimator");
    }
    if (options.method == EstimatorMethod::threshold) {
        validate(options.threshold);
    }
    if (options.source == EnsembleSource::timeseries) {
        validate(options.acquisition);
    }

    const std::size_t points = phase_grid.size();
    const std::size_t repeats = options.repeats;
    std::vector<ParityEstimate> raw(points * repeats);

    parallel_for(points * repeats, options.threads, [&](std::size_t job) {
        const std::size_t k = job / repeats;
        const std::size_t r = job % repeats;
        const GaussianState state = output_state(config, phase_grid[k], t);
        const std::uint64_t key = derive_stream_key(options.seed, {k, r});
        const IQEnsemble ensemble =
            options.source == EnsembleSource::direct
                ? sample_phase_space(state, options.n_samples, key)
                : ensemble_from_timeseries(options.acquisition, state, options.n_samples, key);
        raw[job] = estimate_ensemble(ensemble, state, options);
    });

    SweepResult sweep;
    sweep.phase_grid.assign(phase_grid.begin(), phase_grid.end());
    sweep.config = config;
    sweep.integration_time = t;
    sweep.snr_linear = snr_at_time(config, t);
    sweep.repeats = repeats;
    sweep.estimates.resize(points);
    sweep.spread.resize(points);
    const double rep = static_cast<double>(repeats);
    for (std::size_t k = 0; k < points; ++k) {
        double mean = 0.0;
        double mean_error = 0.0;
        for (std::size_t r = 0; r < repeats; ++r) {
            mean += raw[k * repeats + r].value;
            mean_error += raw[k * repeats + r].std_error;
        }
        mean /= rep;
        mean_error /= rep;
        double scatter = 0.0;
        for (std::size_t r = 0; r < repeats; ++r) {
            const double d = raw[k * repeats + r].value - mean;
            scatter += d * d;
        }
        const double stddev = repeats > 1 ? std::sqrt(scatter / (rep - 1.0)) : 0.0;
        sweep.estimates[k] = ParityEstimate{mean, mean_error, options.method, options.n_samples};
        sweep.spread[k] = stddev * std::sqrt(static_cast<double>(options.n_samples));
    }
    return sweep;
}

SweepResult theory_sweep(const InterferometerConfig& config, double t,
                         std::span<const double> phase_grid, const SweepOptions& options) {
    validate(config);
    check_grid(phase_grid);
    if (options.method == EstimatorMethod::threshold) {
        validate(options.threshold);
    }
    SweepResult sweep;
    sweep.phase_grid.assign(phase_grid.begin(), phase_grid.end());
    sweep.config = config;
    sweep.integration_time = t;
    sweep.snr_linear = snr_at_time(config, t);
    sweep.repeats = 0;
    sweep.spread.assign(phase_grid.size(), 0.0);
    for (double phi : phase_grid) {
        const GaussianState state = output_state(config, phi, t);
        ParityEstimate est;
        est.method = options.method;
        est.n_samples = options.n_samples;
        if (options.method == EstimatorMethod::ml) {
            est.value = parity_of_state(state);
            est.std_error = est.value * ml_error_factor(state.mu(), state.sigma2(), options.ml_error);
        } else {
            est.value = rician_cdf(state.mu(), state.sigma(),
                                   options.threshold.a_over_sigma * state.sigma());
            est.std_error = bernoulli_error(est.value, options.threshold.error_model);
        }
        sweep.estimates.push_back(est);
    }
    return sweep;
}

SensitivityCurve sensitivity_from_curve(const SweepResult& sweep) {
    validate(sweep);
    const std::size_t n = sweep.phase_grid.size();
    if (n < 3) {
        throw DomainError("sensitivity needs at least 3 phase points");
    }
    const auto& phi = sweep.phase_grid;
    const auto& est = sweep.estimates;
    SensitivityCurve curve;
    curve.phase_grid = phi;
    curve.delta_phi.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t lo = k == 0 ? 0 : k - 1;
        const std::size_t hi = k + 1 == n ? k : k + 1;
        const double slope = (est[hi].value - est[lo].value) / (phi[hi] - phi[lo]);
        curve.delta_phi[k] = slope != 0.0 ? est[k].std_error / std::abs(slope) : kInf;
    }
    return curve;
}

SensitivityMinimum minimum_sensitivity(const SensitivityCurve& curve) {
    SensitivityMinimum best{0.0, kInf};
    for (std::size_t k = 0; k < curve.delta_phi.size(); ++k) {
        if (std::isfinite(curve.delta_phi[k]) && curve.delta_phi[k] < best.delta_phi) {
            best = {curve.phase_grid[k], curve.delta_phi[k]};
        }
    }
    if (!std::isfinite(best.delta_phi)) {
        throw DomainError("sensitivity curve has no finite point");
    }
    return best;
}

double cr_bound(double snr) {
    if (!(snr > 0.0) || std::isnan(snr)) {
        throw DomainError("Cramer-Rao bound needs a positive SNR");
    }
    return std::sqrt(2.0 / snr);
}

double ml_sensitivity_theory(const PhotonBudget& budget, double phi, MlErrorModel model) {
    const double snr = snr_of(budget);
    if (!std::isfinite(phi)) {
        throw DomainError("phase must be finite");
    }
    if (at_stationary_phase(phi) || snr == 0.0) {
        throw DivergenceError("parity slope vanishes at this phase");
    }
    const double s = std::sin(0.5 * phi);
    const double displacement_ratio = 2.0 * snr * s * s;  // mu^2 / sigma^2
    const double factor = ml_error_factor(std::sqrt(displacement_ratio), 1.0, model);
    return factor * 2.0 / (snr * std::abs(std::sin(phi)));
}

SensitivityMinimum ml_sensitivity_minimum(const PhotonBudget& budget, MlErrorModel model) {
    const double snr = snr_of(budget);
    if (snr == 0.0) {
        throw DivergenceError("no phase information at zero SNR");
    }
    const double lo = std::min(1e-3, 1e-2 / std::sqrt(snr));
    const double hi = std::numbers::pi * (1.0 - 1e-9);
    auto f = [&](double phi) { return ml_sensitivity_theory(budget, phi, model); };
    const Minimum m = scan_then_golden(f, log_spaced(lo, hi, 400), 1e-12);
    return {m.x, m.f};
}

double threshold_probability(const PhotonBudget& budget, double phi, double a_over_sigma) {
    validate(budget);
    const double sigma = noise_sigma(budget);
    return rician_cdf(coherent_radius(budget, phi), sigma, a_over_sigma * sigma);
}

double threshold_sensitivity_theory(const PhotonBudget& budget, double phi,
                                    const ThresholdConfig& cfg) {
    validate(cfg);
    const double snr = snr_of(budget);
    if (!std::isfinite(phi)) {
        throw DomainError("phase must be finite");
    }
    const double dphi = threshold_delta_phi(budget, phi, cfg, derivative_step(snr));
    if (!std::isfinite(dphi)) {
        throw DivergenceError("threshold response is flat at this phase");
    }
    return dphi;
}

SensitivityMinimum threshold_sensitivity_minimum(const PhotonBudget& budget,
                                                 const ThresholdConfig& cfg) {
    validate(cfg);
    const double snr = snr_of(budget);
    if (snr == 0.0) {
        throw DivergenceError("no phase information at zero SNR");
    }
    // The optimum sits where the displacement crosses the disk edge, a few
    // deviations either side of nu = a/sigma.
    const double nu_max_reachable = std::sqrt(2.0 * snr);
    const double nu_hi = std::min(cfg.a_over_sigma + 10.0, 0.999 * nu_max_reachable);
    const double nu_lo = std::min(0.02, 0.5 * nu_hi);
    std::vector<double> phases;
    for (double nu : log_spaced(nu_lo, nu_hi, 96)) {
        phases.push_back(2.0 * std::asin(nu / nu_max_reachable));
    }
    const double step = derivative_step(snr);
    auto f = [&](double phi) { return threshold_delta_phi(budget, phi, cfg, step); };
    const Minimum m = scan_then_golden(f, phases, 1e-9);
    if (!std::isfinite(m.f)) {
        throw DivergenceError("threshold response is flat over the whole phase range");
    }
    return {m.x, m.f};
}

ResolutionFit fit_parity_model(const SweepResult& sweep) {
    validate(sweep);
    struct Point {
        double s2;  // sin^2(phi / 2)
        double y;
        double w;   // 1 / error
    };
    std::vector<Point> data;
    double peak = 0.0;
    std::size_t peak_index = 0;
    for (std::size_t k = 0; k < sweep.phase_grid.size(); ++k) {
        const auto& e = sweep.estimates[k];
        if (!(e.std_error > 0.0) || !std::isfinite(e.std_error) || !std::isfinite(e.value)) {
            continue;
        }
        const double s = std::sin(0.5 * sweep.phase_grid[k]);
        data.push_back({s * s, e.value, 1.0 / e.std_error});
        if (e.value > peak) {
            peak = e.value;
            peak_index = k;
        }
    }
    if (data.size() < 3 || !(peak > 0.0)) {
        throw FitFailure("fewer than 3 usable points for the parity fit", kInf);
    }

    // Starting width from the half-maximum crossings on either side of the peak.
    const auto& grid = sweep.phase_grid;
    const double span = grid.back() - grid.front();
    auto crossing = [&](int dir) -> double {
        for (long k = static_cast<long>(peak_index); k >= 0 && k < static_cast<long>(grid.size());
             k += dir) {
            if (sweep.estimates[static_cast<std::size_t>(k)].value < 0.5 * peak) {
                return std::abs(grid[static_cast<std::size_t>(k)] - grid[peak_index]);
            }
        }
        return std::numeric_limits<double>::quiet_NaN();
    };
    const double left = crossing(-1);
    const double right = crossing(+1);
    double width0 = 2.0 * span;
    if (std::isfinite(left) && std::isfinite(right)) {
        width0 = left + right;
    } else if (std::isfinite(left)) {
        width0 = 2.0 * left;
    } else if (std::isfinite(right)) {
        width0 = 2.0 * right;
    }
    const double q = std::sin(std::min(width0, 2.0 * std::numbers::pi) / 4.0);
    double log_snr = std::log(std::numbers::ln2 / std::max(q * q, 1e-300));
    double log_peak = std::min(0.0, std::log(peak));

    auto cost_of = [&](double ls, double lp) {
        const double snr = std::exp(ls);
        double cost = 0.0;
        for (const auto& d : data) {
            const double r = (d.y - std::exp(lp - snr * d.s2)) * d.w;
            cost += r * r;
        }
        return cost;
    };

    double cost = cost_of(log_snr, log_peak);
    double damping = 1e-3;
    bool converged = false;
    int iter = 0;
    for (; iter < 500 && !converged; ++iter) {
        const double snr = std::exp(log_snr);
        double a11 = 0.0, a12 = 0.0, a22 = 0.0, g1 = 0.0, g2 = 0.0;
        for (const auto& d : data) {
            const double m = std::exp(log_peak - snr * d.s2);
            const double r = (d.y - m) * d.w;
            const double j1 = -snr * d.s2 * m * d.w;  // d m / d log_snr
            const double j2 = m * d.w;                // d m / d log_peak
            a11 += j1 * j1;
            a12 += j1 * j2;
            a22 += j2 * j2;
            g1 += j1 * r;
            g2 += j2 * r;
        }
        for (;;) {
            const double b11 = a11 * (1.0 + damping);
            const double b22 = a22 * (1.0 + damping);
            const double det = b11 * b22 - a12 * a12;
            if (!(det > 0.0) || !std::isfinite(det)) {
                damping *= 10.0;
                if (damping > 1e16) {
                    break;
                }
                continue;
            }
            const double d1 = (b22 * g1 - a12 * g2) / det;
            const double d2 = (b11 * g2 - a12 * g1) / det;
            const double trial_ls = log_snr + d1;
            const double trial_lp = std::min(0.0, log_peak + d2);
            const double trial_cost = cost_of(trial_ls, trial_lp);
            if (std::isfinite(trial_cost) && trial_cost <= cost) {
                const double change = std::max(std::abs(trial_ls - log_snr) / std::max(1.0, std::abs(log_snr)),
                                               std::abs(trial_lp - log_peak) / std::max(1.0, std::abs(log_peak)));
                log_snr = trial_ls;
                log_peak = trial_lp;
                cost = trial_cost;
                damping = std::max(damping / 3.0, 1e-12);
                converged = change < 1e-10;
                break;
            }
            damping *= 4.0;
            if (damping > 1e16) {
                // No descent direction left: the current point is stationary.
                converged = true;
                break;
            }
        }
        if (damping > 1e16) {
            converged = true;
        }
    }

    const double dof = static_cast<double>(data.size()) - 2.0;
    const double residual = std::sqrt(cost / std::max(dof, 1.0));
    if (!converged) {
        throw FitFailure("parity fit did not converge in 500 iterations", residual);
    }

    ResolutionFit fit;
    fit.snr_hat = std::exp(log_snr);
    const double peak_hat = std::exp(log_peak);
    fit.n_th_hat = 0.5 * (1.0 / peak_hat - 1.0);
    fit.n_c_hat = fit.snr_hat * (fit.n_th_hat + kVacuumVariance);
    fit.residual = residual;
    fit.iterations = iter;
    if (!(fit.snr_hat > std::numbers::ln2) || !std::isfinite(fit.snr_hat)) {
        throw FitFailure("fitted SNR has no half-maximum crossing", residual);
    }
    fit.fwhm = theoretical_fwhm(fit.snr_hat);
    if (span < fit.fwhm) {
        throw FitFailure("sweep span " + std::to_string(span) +
                             " rad is narrower than the fitted FWHM " + std::to_string(fit.fwhm),
                         residual);
    }
    return fit;
}

TradeoffPoint tradeoff_point(double a_over_sigma, const TradeoffOptions& options) {
    const ThresholdConfig cfg{a_over_sigma, options.error_model};
    validate(cfg);
    if (!(options.snr > std::numbers::ln2)) {
        throw DomainError("trade-off needs an SNR above ln 2");
    }
    // Leakage-free shot-noise budget; the normalized curve depends on a/sigma only.
    const PhotonBudget budget{options.snr * kVacuumVariance, 0.0};
    const double cr = cr_bound(options.snr);

    const double half = 0.5 * threshold_probability(budget, 0.0, a_over_sigma);
    auto excess = [&](double phi) { return threshold_probability(budget, phi, a_over_sigma) - half; };
    boost::uintmax_t max_iter = 200;
    const auto [lo, hi] = boost::math::tools::toms748_solve(
        excess, 0.0, std::numbers::pi, boost::math::tools::eps_tolerance<double>(48), max_iter);
    const double fwhm = lo + hi;  // twice the midpoint of the bracket

    TradeoffPoint point;
    point.a_over_sigma = a_over_sigma;
    point.resolution = fwhm / (2.0 * std::sqrt(2.0 * std::numbers::ln2) * cr);
    point.sensitivity = threshold_sensitivity_minimum(budget, cfg).delta_phi / cr;
    return point;
}

std::vector<TradeoffPoint> tradeoff_curve(std::span<const double> a_over_sigma_grid,
                                          const TradeoffOptions& options) {
    std::vector<TradeoffPoint> curve;
    curve.reserve(a_over_sigma_grid.size());
    for (double a : a_over_sigma_grid) {
        curve.push_back(tradeoff_point(a, options));
    }
    return curve;
}

double balance_point(const TradeoffOptions& options, double lo, double hi) {
    auto gap = [&](double a) {
        const TradeoffPoint p = tradeoff_point(a, options);
        return p.resolution - p.sensitivity;
    };
    if (gap(lo) * gap(hi) > 0.0) {
        throw DomainError("resolution and sensitivity do not cross inside the bracket");
    }
    boost::uintmax_t max_iter = 100;
    const auto [a, b] = boost::math::tools::toms748_solve(
        gap, lo, hi, boost::math::tools::eps_tolerance<double>(30), max_iter);
    return 0.5 * (a + b);
}

ThresholdFactor min_sensitivity_factor(BernoulliErrorModel model, double snr) {
    if (!(snr > std::numbers::ln2)) {
        throw DomainError("threshold factor needs an SNR above ln 2");
    }
    const PhotonBudget budget{snr * kVacuumVariance, 0.0};
    const double cr = cr_bound(snr);
    const double reachable = std::sqrt(2.0 * snr);
    const double a_hi = std::max(2.0, std::min(0.25 * reachable, 6.0 * std::pow(snr, 0.25)));

    SensitivityMinimum inner{};
    auto f = [&](double a) {
        inner = threshold_sensitivity_minimum(budget, ThresholdConfig{a, model});
        return inner.delta_phi / cr;
    };
    const Minimum outer = scan_then_golden(f, log_spaced(0.5, a_hi, 40), 1e-4);
    f(outer.x);  // refresh the inner optimum at the reported radius

    ThresholdFactor result;
    result.factor = outer.f;
    result.a_over_sigma = outer.x;
    result.phi = inner.phi;
    result.snr = snr;
    return result;
}

void validate(const ROCConfig& roc) {
    const double prior = roc.phase_prior_max == 0.0 ? 10.0 * roc.acceptable_deviation
                                                    : roc.phase_prior_max;
    if (!(roc.acceptable_deviation > 0.0) || !std::isfinite(roc.acceptable_deviation)) {
        throw DomainError("acceptable deviation must be positive");
    }
    if (!(prior > roc.acceptable_deviation) || !std::isfinite(prior)) {
        throw DomainError("phase prior must extend beyond the acceptable deviation");
    }
    if (roc.a_grid.empty()) {
        throw DomainError("ROC threshold grid is empty");
    }
    for (double a : roc.a_grid) {
        if (!(a >= 0.0) || !std::isfinite(a)) {
            throw DomainError("ROC threshold radii must be finite and non-negative");
        }
    }
}

std::vector<ROCPoint> roc_curve(const InterferometerConfig& config, const ROCConfig& roc,
                                double t) {
    validate(config);
    validate(roc);
    const double locked = roc.acceptable_deviation;
    const double prior = roc.phase_prior_max == 0.0 ? 10.0 * locked : roc.phase_prior_max;
    const double sigma = std::sqrt(config.n_th + kVacuumVariance);

    // Composite Gauss-Legendre average over [lo, hi] of the inside probability,
    // or of its complement when that is the smaller one.
    auto mean_of = [&](auto&& probability, double lo, double hi) {
        constexpr int kPanels = 32;
        const double width = (hi - lo) / kPanels;
        double total = 0.0;
        for (int k = 0; k < kPanels; ++k) {
            const double p0 = lo + width * k;
            total += boost::math::quadrature::gauss<double, 15>::integrate(
                [&](double phi) { return probability(output_state(config, phi, t).mu()); }, p0,
                p0 + width);
        }
        return total / (hi - lo);
    };
    auto average = [&](double a, double lo, double hi) {
        const double inside =
            mean_of([&](double mu) { return rician_cdf(mu, sigma, a); }, lo, hi);
        if (inside <= 0.5) {
            return std::max(inside, 0.0);
        }
        const double outside =
            mean_of([&](double mu) { return rician_sf(mu, sigma, a); }, lo, hi);
        return std::clamp(1.0 - outside, 0.0, 1.0);
    };

    std::vector<ROCPoint> curve;
    curve.reserve(roc.a_grid.size());
    for (double a_over_sigma : roc.a_grid) {
        const double a = a_over_sigma * sigma;
        curve.push_back({a_over_sigma, average(a, locked, prior), average(a, 0.0, locked)});
    }
    return curve;
}

double roc_area(std::span<const ROCPoint> curve) {
    std::vector<std::pair<double, double>> pts{{0.0, 0.0}, {1.0, 1.0}};
    for (const auto& p : curve) {
        pts.emplace_back(p.false_positive_rate, p.true_positive_rate);
    }
    std::sort(pts.begin(), pts.end());
    double area = 0.0;
    for (std::size_t k = 1; k < pts.size(); ++k) {
        area += 0.5 * (pts[k].first - pts[k - 1].first) * (pts[k].second + pts[k - 1].second);
    }
    return area;
}

}  // namespace paritysim
