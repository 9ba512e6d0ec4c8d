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

// Sampled-carrier measurement chain: synthesize a window of the dark-port
// signal, then take the DFT coefficient at the carrier bin relative to a phase
// reference. Each window yields one (i, q) point in phase space.

#ifndef PARITYSIM_HOMODYNE_HPP
#define PARITYSIM_HOMODYNE_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "paritysim/core_states.hpp"

namespace paritysim {

struct AcquisitionConfig {
    double carrier_hz = 4.96e9;
    double sample_rate_hz = 20e9;
    double window_s = 25e-9;
    double volts_per_unit = 1.0;

    /// round(sample_rate * window); 500 with the defaults.
    std::size_t sample_count() const;
    /// round(carrier * window); 124 with the defaults.
    std::size_t carrier_bin() const;
};

/// Human-readable list of violated acquisition invariants; empty when valid.
std::vector<std::string> check(const AcquisitionConfig& acq);
/// Throws DomainError with the first violation.
void validate(const AcquisitionConfig& acq);

struct TimeSeries {
    std::vector<double> samples;
    double sample_rate_hz = 0.0;
};

struct IQSample {
    double i = 0.0;
    double q = 0.0;
};

enum class EnsembleSource { direct, timeseries };

struct IQEnsemble {
    std::vector<IQSample> samples;
    std::uint64_t seed = 0;
    EnsembleSource provenance = EnsembleSource::direct;

    std::size_t size() const noexcept { return samples.size(); }
};

/// `n` independent draws from the state's Wigner density.
IQEnsemble sample_phase_space(const GaussianState& state, std::size_t n, std::uint64_t seed);

struct SynthesisOptions {
    /// Emit the bare carrier; the state's variance is ignored.
    bool noiseless = false;
};

/// One window of A cos(2 pi f t + theta) plus white Gaussian noise, scaled so
/// that extract_iq with a zero reference returns a draw from the state.
TimeSeries synthesize_timeseries(const AcquisitionConfig& acq, const GaussianState& state,
                                 std::uint64_t seed, SynthesisOptions options = {});

/// Carrier-bin DFT coefficient scaled by 2/N and 1/volts_per_unit, rotated by
/// -reference_phase.
IQSample extract_iq(const TimeSeries& series, const AcquisitionConfig& acq,
                    double reference_phase);

/// `n` rounds of synthesize + extract; window k draws its noise from the
/// stream keyed by (seed, k).
IQEnsemble ensemble_from_timeseries(const AcquisitionConfig& acq, const GaussianState& state,
                                    std::size_t n, std::uint64_t seed);

/// CSV layout: `sample_rate_hz,<rate>` then an `amplitude` header, then one
/// amplitude per row.
void write_timeseries_csv(const TimeSeries& series, std::ostream& out);
TimeSeries read_timeseries_csv(std::istream& in);

}  // namespace paritysim

#endif  // PARITYSIM_HOMODYNE_HPP
