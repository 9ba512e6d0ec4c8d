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


#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "paritysim/errors.hpp"
#include "paritysim/metrology.hpp"

using namespace paritysim;
using std::numbers::pi;

namespace {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
    }
    return out;
}

PhotonBudget shot_noise_budget(double snr) { return {snr * 0.5, 0.0}; }

SweepOptions small_sweep(std::size_t n, std::size_t repeats, std::uint64_t seed) {
    SweepOptions o;
    o.n_samples = n;
    o.repeats = repeats;
    o.seed = seed;
    return o;
}

}  // namespace

TEST(CrBound, Values) {
    EXPECT_DOUBLE_EQ(cr_bound(2.0), 1.0);
    EXPECT_NEAR(cr_bound(std::pow(10.0, 5.61)), 2.216e-3, 1e-6);
    const double nc = 400.0;
    EXPECT_NEAR(cr_bound(snr_of({nc, 0.0})), 1.0 / std::sqrt(nc), 1e-15);
    EXPECT_THROW(cr_bound(0.0), DomainError);
    EXPECT_THROW(cr_bound(-1.0), DomainError);
}

TEST(MlSensitivityTheory, AssembledFromErrorAndSlope) {
    // Independent assembly: Fisher delta-method error over the analytic slope.
    const PhotonBudget budget{2000.0, 3.0};
    const double snr = snr_of(budget);
    const double s2 = budget.n_th + 0.5;
    for (double phi : {0.01, 0.05, 0.2, 1.0}) {
        const double s = std::sin(phi / 2.0);
        const double mu = std::sqrt(2.0 * budget.n_c) * s;
        const double parity = std::exp(-budget.n_c * s * s / s2) / (2.0 * s2);
        const double slope = parity * snr * std::sin(phi) / 2.0;
        const double expected = oracle::ml_parity_error_fisher(mu, s2) / slope;
        EXPECT_NEAR(ml_sensitivity_theory(budget, phi), expected, 1e-6 * expected) << phi;
    }
}

TEST(MlSensitivityTheory, PrintedModelClosedForm) {
    const PhotonBudget budget = shot_noise_budget(1e4);
    for (double phi : {0.005, 0.02, 0.1}) {
        const double s = std::sin(phi / 2.0);
        const double expected =
            std::sqrt(1.0 + 2.0 * 1e4 * s * s) * 2.0 / (1e4 * std::abs(std::sin(phi)));
        EXPECT_NEAR(ml_sensitivity_theory(budget, phi, MlErrorModel::paper_printed), expected,
                    1e-12 * expected);
    }
}

TEST(MlSensitivityTheory, DivergesAtStationaryPhases) {
    const PhotonBudget budget = shot_noise_budget(100.0);
    EXPECT_THROW(ml_sensitivity_theory(budget, 0.0), DivergenceError);
    EXPECT_THROW(ml_sensitivity_theory(budget, pi), DivergenceError);
}

TEST(MlSensitivityMinimum, ReachesCramerRaoAtHighSnr) {
    const auto m = ml_sensitivity_minimum(shot_noise_budget(1e6));
    EXPECT_NEAR(m.delta_phi / cr_bound(1e6), 1.0, 0.005);
    const auto m4 = ml_sensitivity_minimum(shot_noise_budget(1e4));
    EXPECT_TRUE(std::isfinite(m4.delta_phi));
    EXPECT_GT(m4.delta_phi, cr_bound(1e4));
    for (double snr : {1e3, 1e4, 1e5, 1e6}) {
        EXPECT_LT(ml_sensitivity_minimum(shot_noise_budget(snr)).delta_phi / cr_bound(snr), 1.01);
    }
}

TEST(MlSensitivityMinimum, ReferenceMinimaAcrossSnr) {
    const std::pair<double, double> table[] = {
        {1.0, 2.19737}, {10.0, 0.470104}, {1e3, 0.0447437}, {1e4, 0.0141428},
        {std::pow(10.0, 5.61), 0.00221572},
    };
    for (auto [snr, expected] : table) {
        EXPECT_NEAR(ml_sensitivity_minimum(shot_noise_budget(snr)).delta_phi, expected,
                    2e-5 * expected)
            << snr;
    }
}

TEST(MlSensitivityMinimum, AgreesWithIndependentGoldenSearch) {
    const PhotonBudget budget = shot_noise_budget(300.0);
    const auto [phi, value] = oracle::golden_minimum(
        [&](double p) { return ml_sensitivity_theory(budget, p); }, 1e-3, 1.0, 1e-12);
    const auto m = ml_sensitivity_minimum(budget);
    EXPECT_NEAR(m.delta_phi, value, 1e-9 * value);
    EXPECT_NEAR(std::abs(m.phi), phi, 1e-4 * phi);
}

TEST(SensitivityFromCurve, MatchesTheoryOnDenseGrid) {
    const auto ifo = InterferometerConfig::from_snr(1e4, 67100.0);
    const auto grid = linspace(-0.06, 0.06, 121);  // 1e-3 rad spacing
    const auto sweep = theory_sweep(ifo, 1.0, grid, SweepOptions{});
    const auto curve = sensitivity_from_curve(sweep);
    const PhotonBudget budget{ifo.n_c_total, ifo.n_th};
    for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
        // Skip the stationary point, where the difference quotient is coarse,
        // and the far tail beyond 1.5 FWHM, where the curvature is.
        if (std::abs(grid[k]) < 5e-3 || std::abs(grid[k]) > 1.5 * theoretical_fwhm(1e4)) {
            continue;
        }
        const double theory = ml_sensitivity_theory(budget, grid[k]);
        EXPECT_NEAR(curve.delta_phi[k], theory, 0.01 * theory) << grid[k];
    }
    const double curve_min = minimum_sensitivity(curve).delta_phi;
    const double theory_min = ml_sensitivity_minimum(budget).delta_phi;
    EXPECT_NEAR(curve_min, theory_min, 0.01 * theory_min);
}

TEST(SensitivityFromCurve, FlatSegmentIsInfinite) {
    SweepResult sweep;
    sweep.phase_grid = {0.0, 1.0, 2.0, 3.0};
    for (double v : {0.5, 0.5, 0.5, 0.2}) {
        sweep.estimates.push_back(ParityEstimate{v, 0.1});
    }
    const auto curve = sensitivity_from_curve(sweep);
    EXPECT_TRUE(std::isinf(curve.delta_phi[0]));
    EXPECT_TRUE(std::isinf(curve.delta_phi[1]));
    EXPECT_TRUE(std::isfinite(curve.delta_phi[3]));
}

TEST(SensitivityFromCurve, SymmetricSweepGivesSymmetricCurve) {
    const auto ifo = InterferometerConfig::from_snr(500.0, 3.0);
    const auto grid = linspace(-0.4, 0.4, 41);
    const auto curve = sensitivity_from_curve(theory_sweep(ifo, 1.0, grid, SweepOptions{}));
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double a = curve.delta_phi[k], b = curve.delta_phi[grid.size() - 1 - k];
        if (std::isfinite(a)) {
            EXPECT_NEAR(a, b, 1e-9 * a);
        }
    }
}

TEST(SensitivityFromCurve, NeedsThreePoints) {
    SweepResult sweep;
    sweep.phase_grid = {0.0, 1.0};
    sweep.estimates.resize(2);
    EXPECT_THROW(sensitivity_from_curve(sweep), DomainError);
}

TEST(SweepResult, ValidationRejectsBadGrids) {
    SweepResult sweep;
    sweep.phase_grid = {0.0, 0.0, 1.0};
    sweep.estimates.resize(3);
    EXPECT_THROW(validate(sweep), DomainError);
    sweep.phase_grid = {0.0, 1.0};
    EXPECT_THROW(validate(sweep), DomainError);
}

TEST(ThresholdSensitivity, SaturatedDiskDiverges) {
    const PhotonBudget budget = shot_noise_budget(100.0);
    EXPECT_THROW(threshold_sensitivity_theory(budget, 0.3, ThresholdConfig{1e4}), DivergenceError);
}

TEST(ThresholdSensitivity, ReferenceFactorAtOnePointFiveSigma) {
    const double snr = std::pow(10.0, 5.61);
    const auto exact = threshold_sensitivity_minimum(shot_noise_budget(snr), ThresholdConfig{1.5});
    EXPECT_NEAR(exact.delta_phi / cr_bound(snr), 1.50482, 2e-3);
    const auto sqrt_p = threshold_sensitivity_minimum(
        shot_noise_budget(snr), ThresholdConfig{1.5, BernoulliErrorModel::paper_sqrt_p});
    EXPECT_NEAR(sqrt_p.delta_phi / cr_bound(snr), 1.7547, 2e-3);
}

TEST(ThresholdSensitivity, ReferenceFactorsAcrossRadius) {
    const std::pair<double, double> table[] = {
        {1.0, 1.91424}, {1.5, 1.50482}, {2.0, 1.36686}, {3.0, 1.29417}, {4.0, 1.27471},
        {5.0, 1.26657}, {6.0, 1.26236}, {8.0, 1.25832}, {10.0, 1.25649}, {15.0, 1.25472},
    };
    const double snr = 1e6;
    for (auto [a, expected] : table) {
        const auto m = threshold_sensitivity_minimum(shot_noise_budget(snr), ThresholdConfig{a});
        EXPECT_NEAR(m.delta_phi / cr_bound(snr), expected, 1.5e-3 * expected) << a;
    }
}

TEST(ThresholdSensitivity, HalvingSnrScalesByRootTwo) {
    for (double a : {1.0, 1.5, 3.0}) {
        const ThresholdConfig cfg{a};
        const double hi = threshold_sensitivity_minimum(shot_noise_budget(1e6), cfg).delta_phi;
        const double lo = threshold_sensitivity_minimum(shot_noise_budget(5e5), cfg).delta_phi;
        EXPECT_NEAR(lo / hi, std::sqrt(2.0), 0.01 * std::sqrt(2.0)) << a;
    }
}

TEST(ThresholdSensitivity, NeverBeatsCramerRao) {
    for (double a : {0.5, 1.0, 2.0, 5.0, 20.0}) {
        for (auto model : {BernoulliErrorModel::exact_bernoulli, BernoulliErrorModel::paper_sqrt_p}) {
            const auto m = threshold_sensitivity_minimum(shot_noise_budget(1e5), ThresholdConfig{a, model});
            EXPECT_GE(m.delta_phi / cr_bound(1e5), 1.0);
        }
    }
}

TEST(FitParityModel, NoiselessSweepRecoversSnr) {
    const auto ifo = InterferometerConfig::from_snr(1e4, 67100.0);
    const double w = theoretical_fwhm(1e4);
    const auto sweep = theory_sweep(ifo, 1.0, linspace(-2.0 * w, 2.0 * w, 81), SweepOptions{});
    const auto fit = fit_parity_model(sweep);
    EXPECT_NEAR(fit.snr_hat, 1e4, 1e-3 * 1e4);
    EXPECT_NEAR(fit.n_th_hat, 67100.0, 1e-3 * 67100.0);
    EXPECT_NEAR(fit.fwhm, w, 1e-3 * w);
    EXPECT_GT(fit.fwhm, 0.0);
}

TEST(FitParityModel, MonteCarloSweepWithinFivePercent) {
    const double snr = std::pow(10.0, 3.88);
    const auto ifo = InterferometerConfig::from_snr(snr, 67100.0);
    const double w = theoretical_fwhm(snr);
    const auto sweep =
        monte_carlo_sweep(ifo, 1.0, linspace(-2.0 * w, 2.0 * w, 41), small_sweep(200, 200, 17));
    const auto fit = fit_parity_model(sweep);
    EXPECT_NEAR(fit.snr_hat, snr, 0.05 * snr);
}

TEST(FitParityModel, NarrowSweepFails) {
    const auto ifo = InterferometerConfig::from_snr(1e4, 10.0);
    const double w = theoretical_fwhm(1e4);
    const auto sweep = theory_sweep(ifo, 1.0, linspace(-0.2 * w, 0.2 * w, 21), SweepOptions{});
    EXPECT_THROW(fit_parity_model(sweep), FitFailure);
}

TEST(MonteCarloSweep, IndependentOfThreadCount) {
    const auto ifo = InterferometerConfig::from_snr(200.0, 5.0);
    const auto grid = linspace(-0.3, 0.3, 9);
    auto opts = small_sweep(50, 20, 3);
    for (auto method : {EstimatorMethod::ml, EstimatorMethod::threshold}) {
        opts.method = method;
        opts.threads = 1;
        const auto a = monte_carlo_sweep(ifo, 1.0, grid, opts);
        opts.threads = 4;
        const auto b = monte_carlo_sweep(ifo, 1.0, grid, opts);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            EXPECT_EQ(a.estimates[k].value, b.estimates[k].value);
            EXPECT_EQ(a.estimates[k].std_error, b.estimates[k].std_error);
            EXPECT_EQ(a.spread[k], b.spread[k]);
        }
    }
}

TEST(MonteCarloSweep, TimeseriesSourceAgreesWithDirect) {
    const auto ifo = InterferometerConfig::from_snr(50.0, 2.0, 0.0, 25e-9);
    const std::vector<double> grid{-0.2, 0.0, 0.2};
    auto opts = small_sweep(200, 20, 4);
    const auto direct = monte_carlo_sweep(ifo, 25e-9, grid, opts);
    opts.source = EnsembleSource::timeseries;
    const auto via = monte_carlo_sweep(ifo, 25e-9, grid, opts);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double se = direct.estimates[k].std_error / std::sqrt(200.0 * 20.0);
        EXPECT_NEAR(via.estimates[k].value, direct.estimates[k].value, 6.0 * se);
    }
}

TEST(Tradeoff, UniversalAcrossSnr) {
    for (double a : {0.5, 1.0, 1.7, 2.5, 4.0}) {
        TradeoffOptions hi, lo;
        hi.snr = 1e6;
        lo.snr = 1e5;
        const auto p = tradeoff_point(a, hi), q = tradeoff_point(a, lo);
        EXPECT_NEAR(q.resolution, p.resolution, 0.005 * p.resolution) << a;
        EXPECT_NEAR(q.sensitivity, p.sensitivity, 0.005 * p.sensitivity) << a;
    }
}

TEST(Tradeoff, ResolutionBranchIncreasesWithRadius) {
    const auto curve = tradeoff_curve(linspace(0.25, 6.0, 40));
    for (std::size_t k = 1; k < curve.size(); ++k) {
        EXPECT_GT(curve[k].resolution, curve[k - 1].resolution);
    }
    // Small disks resolve at the Gaussian-limited width.
    EXPECT_NEAR(curve.front().resolution, 1.0, 0.02);
}

TEST(Tradeoff, SensitivityBranchHasSingleInteriorMinimum) {
    // Over the full reachable range of radii at SNR 1e4 the sensitivity
    // branch first falls and then rises again.
    TradeoffOptions options;
    options.snr = 1e4;
    std::vector<double> grid;
    for (double a = 0.5; a < 120.0; a *= 1.15) {
        grid.push_back(a);
    }
    const auto curve = tradeoff_curve(grid, options);
    std::size_t best = 0;
    for (std::size_t k = 0; k < curve.size(); ++k) {
        if (curve[k].sensitivity < curve[best].sensitivity) best = k;
    }
    EXPECT_GT(best, 0u);
    EXPECT_LT(best + 1, curve.size());
    for (std::size_t k = 1; k <= best; ++k) {
        EXPECT_LE(curve[k].sensitivity, curve[k - 1].sensitivity * (1.0 + 1e-6)) << grid[k];
    }
    for (std::size_t k = best + 1; k < curve.size(); ++k) {
        EXPECT_GE(curve[k].sensitivity, curve[k - 1].sensitivity * (1.0 - 1e-6)) << grid[k];
    }
}

TEST(Tradeoff, BalancePointNearOnePointSeven) {
    EXPECT_NEAR(balance_point(), 1.70, 0.02);
    TradeoffOptions sqrt_p;
    sqrt_p.error_model = BernoulliErrorModel::paper_sqrt_p;
    EXPECT_NEAR(balance_point(sqrt_p, 1.0, 3.0), 2.05, 0.03);
    EXPECT_THROW(balance_point(TradeoffOptions{}, 3.0, 4.0), DomainError);
}

TEST(ThresholdFactorSearch, ExactModelReachesLimit) {
    const auto exact = min_sensitivity_factor(BernoulliErrorModel::exact_bernoulli);
    EXPECT_GE(exact.factor, 1.0);
    EXPECT_NEAR(exact.factor, std::sqrt(pi / 2.0), 2e-3);
    const auto sqrt_p = min_sensitivity_factor(BernoulliErrorModel::paper_sqrt_p);
    EXPECT_GE(sqrt_p.factor, 1.0);
    EXPECT_NEAR(sqrt_p.factor, 1.5725, 2e-3);
}

// The best radius grows like SNR^(1/4) and the factor approaches its limit
// from above with an SNR^(-1/2) correction.
TEST(ThresholdFactorSearch, ConvergesAsInverseRootSnr) {
    const double limit = std::sqrt(pi / 2.0);
    const double f5 = min_sensitivity_factor(BernoulliErrorModel::exact_bernoulli, 1e5).factor;
    const double f6 = min_sensitivity_factor(BernoulliErrorModel::exact_bernoulli, 1e6).factor;
    const double f7 = min_sensitivity_factor(BernoulliErrorModel::exact_bernoulli, 1e7).factor;
    EXPECT_GT(f5, f6);
    EXPECT_GT(f6, f7);
    EXPECT_GT(f7, limit);
    EXPECT_NEAR((f5 - limit) / (f6 - limit), std::sqrt(10.0), 0.6);
    EXPECT_NEAR(f6, f7, 1e-3 * f7);
}

TEST(ThresholdFactorSearchLimits, DISABLED_StableToOnePartInThousandFromTenToTheFive) {
    for (auto model : {BernoulliErrorModel::exact_bernoulli, BernoulliErrorModel::paper_sqrt_p}) {
        const double f6 = min_sensitivity_factor(model, 1e6).factor;
        const double f5 = min_sensitivity_factor(model, 1e5).factor;
        EXPECT_NEAR(f5, f6, 1e-3 * f6);
    }
}

TEST(Roc, EndpointsMonotoneAndAboveDiagonal) {
    const auto ifo = InterferometerConfig::from_snr(std::pow(10.0, 5.61), 67100.0);
    const double cr = cr_bound(std::pow(10.0, 5.61));
    std::vector<double> grid{0.0};
    for (double a = 0.05; a < 12.0; a += 0.05) grid.push_back(a);
    grid.push_back(1e3);
    double previous_area = 0.0;
    for (double ad : {0.2, 0.5, 1.0, 2.0, 3.0}) {
        ROCConfig roc;
        roc.acceptable_deviation = ad * cr;
        roc.a_grid = grid;
        const auto curve = roc_curve(ifo, roc, 1.0);
        EXPECT_NEAR(curve.front().false_positive_rate, 0.0, 1e-15);
        EXPECT_NEAR(curve.front().true_positive_rate, 0.0, 1e-15);
        EXPECT_NEAR(curve.back().false_positive_rate, 1.0, 1e-12);
        EXPECT_NEAR(curve.back().true_positive_rate, 1.0, 1e-12);
        for (std::size_t k = 0; k < curve.size(); ++k) {
            EXPECT_GE(curve[k].true_positive_rate, curve[k].false_positive_rate - 1e-15);
            if (k > 0) {
                EXPECT_GE(curve[k].true_positive_rate, curve[k - 1].true_positive_rate);
                EXPECT_GE(curve[k].false_positive_rate, curve[k - 1].false_positive_rate);
            }
        }
        const double area = roc_area(curve);
        EXPECT_GT(area, previous_area);
        previous_area = area;
    }
}

TEST(Roc, RatesSaturateWithoutRounding) {
    const auto ifo = InterferometerConfig::from_snr(std::pow(10.0, 5.61), 67100.0);
    ROCConfig roc;
    roc.acceptable_deviation = 0.2 * cr_bound(std::pow(10.0, 5.61));
    for (double a = 6.0; a < 40.0; a += 0.5) roc.a_grid.push_back(a);
    for (const auto& p : roc_curve(ifo, roc, 1.0)) {
        EXPECT_GE(p.true_positive_rate, p.false_positive_rate) << p.a_over_sigma;
        EXPECT_LE(p.true_positive_rate, 1.0);
    }
    EXPECT_EQ(roc_curve(ifo, roc, 1.0).back().true_positive_rate, 1.0);
}

TEST(Roc, RejectsInvalidConfig) {
    const auto ifo = InterferometerConfig::from_snr(100.0, 1.0);
    ROCConfig roc;
    roc.a_grid = {1.0};
    EXPECT_THROW(roc_curve(ifo, roc, 1.0), DomainError);
    roc.acceptable_deviation = 0.1;
    roc.phase_prior_max = 0.05;
    EXPECT_THROW(roc_curve(ifo, roc, 1.0), DomainError);
}
