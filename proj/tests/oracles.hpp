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


// Reference computations used by the tests. None of these call into the
// library, so agreement with it is a genuine cross-check.

#ifndef PARITYSIM_TESTS_ORACLES_HPP
#define PARITYSIM_TESTS_ORACLES_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include <boost/math/distributions/non_central_chi_squared.hpp>

namespace oracle {

inline constexpr double kPi = std::numbers::pi;

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
struct GaussLegendre {
    std::vector<double> x, w;

    explicit GaussLegendre(int n) : x(n), w(n) {
        for (int i = 0; i < n; ++i) {
            double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0, p1 = 0.0;
                for (int k = 1; k <= n; ++k) {
                    const double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
                }
                dp = n * (z * p0 - p1) / (z * z - 1.0);
                const double dz = p0 / dp;
                z -= dz;
                if (std::abs(dz) < 1e-16) {
                    break;
                }
            }
            x[i] = z;
            w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
    }

    // Composite rule over `panels` equal panels of [lo, hi].
    double integrate(const std::function<double(double)>& f, double lo, double hi,
                     int panels) const {
        double total = 0.0;
        const double h = (hi - lo) / panels;
        for (int k = 0; k < panels; ++k) {
            const double c = lo + (k + 0.5) * h;
            for (std::size_t i = 0; i < x.size(); ++i) {
                total += w[i] * f(c + 0.5 * h * x[i]);
            }
        }
        return 0.5 * h * total;
    }
};

// P(R <= a) for a 2-D isotropic Gaussian displaced by nu, by brute-force
// quadrature: Gauss-Legendre in r, trapezoid (spectrally exact for periodic
// integrands) in the angle.
inline double rician_cdf_quadrature(double nu, double sigma, double a) {
    if (a <= 0.0) {
        return 0.0;
    }
    static const GaussLegendre rule(20);
    const double s2 = sigma * sigma;
    // Outside [nu - 14 sigma, nu + 14 sigma] the radial density is < 1e-40.
    const double lo = std::max(0.0, nu - 14.0 * sigma);
    const double hi = std::min(a, nu + 14.0 * sigma);
    if (hi <= lo) {
        return a <= lo ? 0.0 : 1.0;
    }
    auto radial = [&](double r) {
        const double kappa = r * nu / s2;
        const int n_theta = 64 + 2 * static_cast<int>(kappa + 10.0 * std::sqrt(kappa));
        // density = exp(-(r-nu)^2/2s2) * exp(-kappa (1 - cos t)) / (2 pi s2)
        double sum = 0.0;
        for (int k = 0; k < n_theta; ++k) {
            const double t = 2.0 * kPi * k / n_theta;
            sum += std::exp(-kappa * (1.0 - std::cos(t)));
        }
        const double angular = sum / n_theta;  // mean over the circle
        return r * std::exp(-(r - nu) * (r - nu) / (2.0 * s2)) * angular / s2;
    };
    return rule.integrate(radial, lo, hi, 200);
}

// Same probability through Boost's noncentral chi-squared with 2 dof.
inline double rician_cdf_chi2(double nu, double sigma, double a) {
    const double lambda = (nu / sigma) * (nu / sigma);
    if (lambda == 0.0) {
        return 1.0 - std::exp(-0.5 * (a / sigma) * (a / sigma));
    }
    boost::math::non_central_chi_squared dist(2.0, lambda);
    return boost::math::cdf(dist, (a / sigma) * (a / sigma));
}

// Laguerre polynomial L_n(x) by the three-term recurrence (valid for x < 0,
// which std::laguerre rejects).
inline double laguerre(int n, double x) {
    double prev = 1.0, cur = 1.0 - x;
    if (n == 0) return prev;
    for (int k = 1; k < n; ++k) {
        const double next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

// Photon-number distribution of a displaced thermal state with coherent
// photons nc and thermal photons nth (standard Laguerre form).
inline double displaced_thermal_pn(int n, double nc, double nth) {
    if (nth == 0.0) {
        if (nc == 0.0) return n == 0 ? 1.0 : 0.0;
        return std::exp(-nc + n * std::log(nc) - std::lgamma(n + 1.0));
    }
    const double lag = laguerre(n, -nc / (nth * (1.0 + nth)));
    return std::exp(n * std::log(nth) - (n + 1.0) * std::log1p(nth) - nc / (1.0 + nth)) * lag;
}

// <(-1)^N> by summing the Fock distribution.
inline double parity_fock_sum(double nc, double nth, int n_max = 400) {
    double total = 0.0;
    for (int n = 0; n <= n_max; ++n) {
        total += (n % 2 == 0 ? 1.0 : -1.0) * displaced_thermal_pn(n, nc, nth);
    }
    return total;
}

// Direct parity phase uncertainty at the dark port, by error propagation of
// the Fock-sum parity (variance of a +/-1 observable is 1 - <P>^2).
inline double direct_parity_sensitivity_fock(double nc_total, double nth, double phi) {
    auto parity = [&](double f) {
        const double s = std::sin(0.5 * f);
        return parity_fock_sum(nc_total * s * s, nth);
    };
    const double h = 1e-5;
    const double slope = (parity(phi + h) - parity(phi - h)) / (2.0 * h);
    const double p = parity(phi);
    return std::sqrt(1.0 - p * p) / std::abs(slope);
}

// Per-sample standard deviation of the ML parity estimate by the delta
// method with the Fisher information of (mu_x, mu_p, sigma2) for a 2-D
// isotropic Gaussian: diag(1/s2, 1/s2, 1/s2^2).
inline double ml_parity_error_fisher(double mu, double sigma2) {
    auto parity = [](double mx, double mp, double s2) {
        return std::exp(-(mx * mx + mp * mp) / (2.0 * s2)) / (2.0 * s2);
    };
    const double h = 1e-6;
    const double gx = (parity(mu + h, 0, sigma2) - parity(mu - h, 0, sigma2)) / (2 * h);
    const double gp = (parity(mu, h, sigma2) - parity(mu, -h, sigma2)) / (2 * h);
    const double hs = h * sigma2;
    const double gs = (parity(mu, 0, sigma2 + hs) - parity(mu, 0, sigma2 - hs)) / (2 * hs);
    const double var = gx * gx * sigma2 + gp * gp * sigma2 + gs * gs * sigma2 * sigma2;
    return std::sqrt(var);
}

// Naive O(N^2) DFT power sum, for Parseval checks.
inline double dft_total_power(const std::vector<double>& x) {
    const std::size_t n = x.size();
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double re = 0.0, im = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double ang = -2.0 * kPi * static_cast<double>((k * j) % n) / n;
            re += x[j] * std::cos(ang);
            im += x[j] * std::sin(ang);
        }
        total += re * re + im * im;
    }
    return total / static_cast<double>(n);
}

// Independent radial samples of a displaced 2-D Gaussian (std library RNG).
inline std::vector<double> radial_samples(double nu, double sigma, std::size_t n,
                                          std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, sigma);
    std::vector<double> out(n);
    for (auto& r : out) {
        r = std::hypot(nu + gauss(rng), gauss(rng));
    }
    return out;
}

inline double sample_mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double sample_variance(const std::vector<double>& v) {
    const double m = sample_mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

// Least-squares slope of y on x.
inline double regression_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double mx = sample_mean(x), my = sample_mean(y);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxy += (x[k] - mx) * (y[k] - my);
        sxx += (x[k] - mx) * (x[k] - mx);
    }
    return sxy / sxx;
}

// Golden-section minimum of a unimodal function on [lo, hi].
inline std::pair<double, double> golden_minimum(const std::function<double(double)>& f, double lo,
                                                double hi, double tol) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
    double fc = f(c), fd = f(d);
    while (hi - lo > tol * (std::abs(c) + std::abs(d) + 1e-300)) {
        if (fc < fd) {
            hi = d; d = c; fd = fc;
            c = hi - g * (hi - lo); fc = f(c);
        } else {
            lo = c; c = d; fc = fd;
            d = lo + g * (hi - lo); fd = f(d);
        }
    }
    const double x = 0.5 * (lo + hi);
    return {x, f(x)};
}

}  // namespace oracle

#endif  // PARITYSIM_TESTS_ORACLES_HPP
