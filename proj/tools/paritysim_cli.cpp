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


// Command-line front end. Links only the C interface.

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "paritysim/paritysim.h"

namespace {

enum ExitCode {
    kExitOk = 0,
    kExitOther = 1,
    kExitConfig = 2,
    kExitFitFailure = 3,
    kExitIo = 4,
};

int exit_code_for(psim_status status) {
    switch (status) {
        case PSIM_OK: return kExitOk;
        case PSIM_ERR_CONFIG: return kExitConfig;
        case PSIM_ERR_FIT_FAILURE: return kExitFitFailure;
        case PSIM_ERR_IO: return kExitIo;
        default: return kExitOther;
    }
}

int report(psim_status status) {
    std::cerr << "paritysim: " << psim_status_name(status) << ": " << psim_last_error() << "\n";
    return exit_code_for(status);
}

// Loads the config and applies `--key value` / `--key=value` overrides whose
// names match config keys (dotted for nested objects).
psim_status load(const std::string& path, const std::vector<std::string>& extras,
                 psim_experiment** out) {
    psim_status status = path.empty() ? psim_experiment_default(out)
                                      : psim_experiment_load(path.c_str(), out);
    if (status != PSIM_OK) {
        return status;
    }
    for (size_t k = 0; k < extras.size(); ++k) {
        std::string token = extras[k];
        if (token.rfind("--", 0) != 0) {
            std::cerr << "paritysim: unexpected argument '" << token << "'\n";
            return PSIM_ERR_CONFIG;
        }
        token = token.substr(2);
        std::string value;
        const auto eq = token.find('=');
        if (eq != std::string::npos) {
            value = token.substr(eq + 1);
            token.resize(eq);
        } else if (k + 1 < extras.size()) {
            value = extras[++k];
        } else {
            std::cerr << "paritysim: option --" << token << " needs a value\n";
            return PSIM_ERR_CONFIG;
        }
        status = psim_experiment_set(*out, token.c_str(), value.c_str());
        if (status != PSIM_OK) {
            return status;
        }
    }
    return PSIM_OK;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"paritysim: parity-detection phase estimation experiments"};
    app.set_version_flag("--version", std::string(psim_version()));
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string seed_text;
    bool flat = false;
    unsigned threads = 0;

    auto* run = app.add_subcommand("run", "Run an experiment and write CSV tables plus manifest.json");
    run->add_option("--config", config_path, "JSON experiment configuration")->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "Output root (default: $PARITYSIM_OUT or ./results)");
    run->add_option("--seed", seed_text, "Override the config seed (unsigned 64-bit)");
    run->add_flag("--flat", flat, "Write directly into the output root");
    run->add_option("--threads", threads, "Worker threads (0 = all cores)");
    run->allow_extras();
    run->footer("Any config key may be overridden as --<key> <value>, e.g. --repeats 50 "
                "--snr_db_list 14.8,26.3 --acquisition.carrier_hz 5e9");

    auto* check = app.add_subcommand("validate", "List configuration violations without running");
    check->add_option("--config", config_path, "JSON experiment configuration")->check(CLI::ExistingFile);
    check->allow_extras();

    std::string series_path;
    double reference_phase = 0.0;
    auto* extract = app.add_subcommand("extract", "Extract I/Q from a recorded time-series CSV");
    extract->add_option("--input", series_path, "Time-series CSV")->required()->check(CLI::ExistingFile);
    extract->add_option("--reference-phase", reference_phase, "Reference phase in radians");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    if (*extract) {
        psim_timeseries* series = nullptr;
        psim_status status = psim_timeseries_read(series_path.c_str(), &series);
        if (status != PSIM_OK) {
            return report(status);
        }
        psim_acquisition acq;
        psim_default_acquisition(&acq);
        double i = 0.0, q = 0.0;
        status = psim_extract_iq(series, &acq, reference_phase, &i, &q);
        psim_timeseries_free(series);
        if (status != PSIM_OK) {
            return report(status);
        }
        std::cout.precision(12);
        std::cout << "i,q\n" << i << "," << q << "\n";
        return kExitOk;
    }

    CLI::App* active = *run ? run : check;
    std::vector<std::string> extras = active->remaining();
    if (*run && !seed_text.empty()) {
        extras.push_back("--seed");
        extras.push_back(seed_text);
    }

    psim_experiment* experiment = nullptr;
    psim_status status = load(config_path, extras, &experiment);
    if (status != PSIM_OK) {
        psim_experiment_free(experiment);
        return status == PSIM_ERR_CONFIG && psim_last_error()[0] == '\0' ? kExitConfig : report(status);
    }

    size_t violations = 0;
    size_t length = 0;
    psim_experiment_validate(experiment, &violations, nullptr, 0, &length);
    std::string listing(length + 1, '\0');
    psim_experiment_validate(experiment, &violations, listing.data(), listing.size(), &length);
    listing.resize(length);

    if (*check) {
        std::cout << listing;
        if (violations == 0) {
            std::cout << "config ok\n";
        }
        psim_experiment_free(experiment);
        return violations == 0 ? kExitOk : kExitConfig;
    }
    if (violations != 0) {
        std::cerr << listing;
        psim_experiment_free(experiment);
        return kExitConfig;
    }

    if (out_dir.empty()) {
        const char* env = std::getenv("PARITYSIM_OUT");
        out_dir = env && *env ? env : "results";
    }
    size_t fit_failures = 0;
    std::string manifest(1 << 16, '\0');
    status = psim_experiment_run(experiment, out_dir.c_str(), flat ? 1 : 0, threads, &fit_failures,
                                 manifest.data(), manifest.size(), &length);
    psim_experiment_free(experiment);
    if (status != PSIM_OK) {
        return report(status);
    }
    manifest.resize(std::min(length, manifest.size() - 1));
    std::cout << manifest << "\n";
    if (fit_failures != 0) {
        std::cerr << "paritysim: " << fit_failures << " curve fit(s) failed; rows marked fit_failure\n";
        return kExitFitFailure;
    }
    return kExitOk;
}
