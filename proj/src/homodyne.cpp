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

#include "paritysim/homodyne.hpp"

#include <charconv>
#include <cmath>
#include <complex>
#include <istream>
#include <numbers>
#include <ostream>

#include "paritysim/csv.hpp"
#include "paritysim/errors.hpp"
#include "paritysim/random.hpp"

namespace paritysim {

namespace {

constexpr double kGridTolerance = 1e-6;

bool near_integer(double value) {
    return std::abs(value - std::round(value)) <= kGridTolerance * std::max(1.0, std::abs(value));
}

// exp(-2 pi i * bin * j / N) with the angle reduced modulo N in integers, so
// that large j keep full precision.
std::complex<double> twiddle(std::size_t bin, std::size_t j, std::size_t n) {
    const double angle =
        2.0 * std::numbers::pi * static_cast<double>((bin * j) % n) / static_cast<double>(n);
    return {std::cos(angle), -std::sin(angle)};
}

TimeSeries synthesize_with(const AcquisitionConfig& acq, const GaussianState& state,
                           NormalStream& rng, bool noiseless) {
    const std::size_t n = acq.sample_count();
    const std::size_t bin = acq.carrier_bin();
    const double amplitude = acq.volts_per_unit * state.mu();
    // Per-sample deviation whose carrier-bin projection has variance sigma2
    // per quadrature after the 2/N scaling.
    const double noise_dev =
        noiseless ? 0.0
                  : acq.volts_per_unit * state.sigma() * std::sqrt(0.5 * static_cast<double>(n));

    TimeSeries series;
    series.sample_rate_hz = acq.sample_rate_hz;
    series.samples.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double carrier_phase =
            2.0 * std::numbers::pi * static_cast<double>((bin * j) % n) / static_cast<double>(n);
        double v = amplitude * std::cos(carrier_phase + state.theta());
        if (!noiseless) {
            v += noise_dev * rng.normal();
        }
        series.samples[j] = v;
    }
    return series;
}

}  // namespace

std::size_t AcquisitionConfig::sample_count() const {
    return static_cast<std::size_t>(std::llround(sample_rate_hz * window_s));
}

std::size_t AcquisitionConfig::carrier_bin() const {
    return static_cast<std::size_t>(std::llround(carrier_hz * window_s));
}

std::vector<std::string> check(const AcquisitionConfig& acq) {
    std::vector<std::string> problems;
    if (!(acq.carrier_hz > 0.0) || !std::isfinite(acq.carrier_hz)) {
        problems.emplace_back("carrier_hz must be positive");
    }
    if (!(acq.sample_rate_hz > 0.0) || !std::isfinite(acq.sample_rate_hz)) {
        problems.emplace_back("sample_rate_hz must be positive");
    }
    if (!(acq.window_s > 0.0) || !std::isfinite(acq.window_s)) {
        problems.emplace_back("window_s must be positive");
    }
    if (!(acq.volts_per_unit > 0.0) || !std::isfinite(acq.volts_per_unit)) {
        problems.emplace_back("volts_per_unit must be positive");
    }
    if (!problems.empty()) {
        return problems;
    }
    if (acq.sample_rate_hz < 2.0 * acq.carrier_hz) {
        problems.emplace_back("sample_rate_hz is below the Nyquist rate of the carrier");
    }
    if (!near_integer(acq.sample_rate_hz * acq.window_s) || acq.sample_count() < 2) {
        problems.emplace_back("window must hold an integer number (>= 2) of samples");
    }
    if (!near_integer(acq.carrier_hz * acq.window_s)) {
        problems.emplace_back("carrier is off the DFT grid: carrier_hz * window_s is not an integer");
    } else if (problems.empty() && 2 * acq.carrier_bin() >= acq.sample_count()) {
        problems.emplace_back("carrier bin must lie strictly below the Nyquist bin");
    }
    return problems;
}

void validate(const AcquisitionConfig& acq) {
    const auto problems = check(acq);
    if (!problems.empty()) {
        throw DomainError(problems.front());
    }
}

IQEnsemble sample_phase_space(const GaussianState& state, std::size_t n, std::uint64_t seed) {
    if (n == 0) {
        throw DomainError("ensemble size must be at least 1");
    }
    NormalStream rng(derive_stream_key(seed, {}));
    const double cx = state.center_x();
    const double cp = state.center_p();
    const double sigma = state.sigma();

    IQEnsemble ensemble;
    ensemble.seed = seed;
    ensemble.provenance = EnsembleSource::direct;
    ensemble.samples.resize(n);
    for (auto& s : ensemble.samples) {
        s.i = cx + sigma * rng.normal();
        s.q = cp + sigma * rng.normal();
    }
    return ensemble;
}

TimeSeries synthesize_timeseries(const AcquisitionConfig& acq, const GaussianState& state,
                                 std::uint64_t seed, SynthesisOptions options) {
    validate(acq);
    NormalStream rng(derive_stream_key(seed, {}));
    return synthesize_with(acq, state, rng, options.noiseless);
}

IQSample extract_iq(const TimeSeries& series, const AcquisitionConfig& acq,
                    double reference_phase) {
    validate(acq);
    const std::size_t n = acq.sample_count();
    if (series.samples.size() != n) {
        throw DomainError("time series holds " + std::to_string(series.samples.size()) +
                          " samples, acquisition expects " + std::to_string(n));
    }
    const std::size_t bin = acq.carrier_bin();
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) {
        acc += series.samples[j] * twiddle(bin, j, n);
    }
    const std::complex<double> z =
        acc * (2.0 / (static_cast<double>(n) * acq.volts_per_unit)) * std::polar(1.0, -reference_phase);
    return {z.real(), z.imag()};
}

IQEnsemble ensemble_from_timeseries(const AcquisitionConfig& acq, const GaussianState& state,
                                    std::size_t n, std::uint64_t seed) {
    if (n == 0) {
        throw DomainError("ensemble size must be at least 1");
    }
    validate(acq);
    IQEnsemble ensemble;
    ensemble.seed = seed;
    ensemble.provenance = EnsembleSource::timeseries;
    ensemble.samples.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        NormalStream rng(derive_stream_key(seed, {k}));
        const TimeSeries series = synthesize_with(acq, state, rng, false);
        ensemble.samples[k] = extract_iq(series, acq, 0.0);
    }
    return ensemble;
}

void write_timeseries_csv(const TimeSeries& series, std::ostream& out) {
    out << "sample_rate_hz," << format_number(series.sample_rate_hz) << '\n';
    out << "amplitude\n";
    for (double v : series.samples) {
        // Full round-trip precision; the 12-digit table format would lose bits.
        char buffer[32];
        auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), v);
        out.write(buffer, end - buffer);
        out << '\n';
    }
    if (!out) {
        throw IoError("failed writing time series");
    }
}

TimeSeries read_timeseries_csv(std::istream& in) {
    TimeSeries series;
    std::string line;
    if (!std::getline(in, line) || line.rfind("sample_rate_hz,", 0) != 0) {
        throw DomainError("time series CSV must start with 'sample_rate_hz,<rate>'");
    }
    series.sample_rate_hz = parse_number(std::string_view(line).substr(15));
    if (std::getline(in, line) && !line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != "amplitude") {
        throw DomainError("time series CSV is missing the 'amplitude' header");
    }
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") {
            continue;
        }
        series.samples.push_back(parse_number(line));
    }
    return series;
}

}  // namespace paritysim
