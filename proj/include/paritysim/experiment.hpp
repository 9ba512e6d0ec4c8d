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

// Reproducible experiment runner.
//
// An ExperimentConfig is read from JSON (schema in docs/config.md), validated,
// and executed into a directory of figure-ready CSV tables plus a
// manifest.json. All decibel quantities in the config are converted to linear
// values here; the numerical library below this layer is linear-only.

#ifndef PARITYSIM_EXPERIMENT_HPP
#define PARITYSIM_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "paritysim/estimators.hpp"
#include "paritysim/homodyne.hpp"

namespace paritysim {

enum class ExperimentMode {
    parity_sweep,
    sensitivity,
    tradeoff,
    roc,
    integration_time,
    timeseries_demo,
};

std::string_view to_string(ExperimentMode mode);

enum class GridUnits { fwhm, radians };

struct GridSpec {
    double min = 0.0;
    double max = 0.0;
    std::size_t points = 0;

    std::vector<double> values() const;
};

struct PhaseGridSpec {
    GridSpec range{-2.0, 2.0, 81};
    /// `fwhm` scales the range by the theoretical FWHM at each SNR.
    GridUnits units = GridUnits::fwhm;
};

struct ExperimentConfig {
    ExperimentMode mode = ExperimentMode::parity_sweep;
    std::vector<double> snr_db_list{14.8, 26.3, 38.8, 45.9, 56.1};
    PhaseGridSpec phase_grid;
    std::size_t n_samples = 200;
    std::size_t repeats = 200;
    std::vector<EstimatorMethod> estimators{EstimatorMethod::ml};
    std::vector<double> a_over_sigma_list{1.5};
    BernoulliErrorModel error_model = BernoulliErrorModel::exact_bernoulli;
    MlErrorModel ml_error_model = MlErrorModel::fisher_propagated;
    double extinction_db = 90.0;
    double n_th = 67100.0;
    EnsembleSource source = EnsembleSource::direct;
    AcquisitionConfig acquisition;

    double tradeoff_snr_db = 60.0;
    GridSpec tradeoff_a_grid{0.25, 4.0, 76};

    double roc_snr_db = 56.1;
    std::vector<double> roc_deviation_cr{0.2, 0.5, 1.0, 2.0, 3.0};
    double roc_prior_factor = 10.0;
    GridSpec roc_a_grid{0.0, 8.0, 81};

    double integration_snr_db = 45.9;
    std::vector<double> integration_time_factors{1.0, 10.0, 100.0, 1e3, 1e4, 1e5};

    /// Demo phase for the timeseries-demo mode, in units of the FWHM.
    double demo_phase_fwhm = 0.5;

    std::uint64_t seed = 1;
};

/// Parses a JSON document; missing keys take defaults. Throws ConfigError
/// naming the field for unknown keys or ill-typed values.
ExperimentConfig config_from_json(const nlohmann::json& doc);
ExperimentConfig config_from_json_text(std::string_view text);
nlohmann::json to_json(const ExperimentConfig& config);

/// Sets `key` (dotted for nested objects, e.g. acquisition.carrier_hz) in a
/// config document. `value_text` is parsed as JSON, falling back to a plain
/// string, and comma-separated numbers become a list for list-valued keys.
void apply_override(nlohmann::json& doc, std::string_view key, std::string_view value_text);

/// Lists violated invariants ("field: message") without running anything.
std::vector<std::string> validate(const ExperimentConfig& config);

/// FNV-1a 64 of the canonical JSON form, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

struct RunOptions {
    /// Write directly into the output directory instead of <mode>/<timestamp>/.
    bool flat = false;
    unsigned threads = 0;
};

struct RunManifest {
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string version;
    std::string timestamp;
    std::filesystem::path output_dir;
    std::vector<std::string> files;
    /// Curves whose parity fit failed; their rows carry status fit_failure.
    std::size_t fit_failures = 0;
};

nlohmann::json to_json(const RunManifest& manifest);

/// Executes the configured mode. Throws ConfigError when validation fails and
/// IoError when outputs cannot be written.
RunManifest run_experiment(const ExperimentConfig& config, const std::filesystem::path& output_root,
                           const RunOptions& options = {});

std::string_view library_version();

}  // namespace paritysim

#endif  // PARITYSIM_EXPERIMENT_HPP
