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


// Exercises the shared library through its C header only.

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include "paritysim/paritysim.h"

namespace fs = std::filesystem;

TEST(CApi, VersionAndStatusNames) {
    EXPECT_STRNE(psim_version(), "");
    EXPECT_STREQ(psim_status_name(PSIM_OK), "ok");
    EXPECT_STREQ(psim_status_name(PSIM_ERR_CONFIG), "configuration error");
}

TEST(CApi, StateLifecycleAndParity) {
    psim_state* s = nullptr;
    ASSERT_EQ(psim_state_from_photons(1.0, 0.0, 0.0, &s), PSIM_OK);
    double parity = 0.0, w = 0.0, mu = 0.0, sigma2 = 0.0;
    ASSERT_EQ(psim_state_parity(s, &parity), PSIM_OK);
    EXPECT_NEAR(parity, std::exp(-2.0), 1e-15);
    ASSERT_EQ(psim_state_wigner(s, 0.0, 0.0, &w), PSIM_OK);
    EXPECT_NEAR(M_PI * w, parity, 1e-15);
    ASSERT_EQ(psim_state_params(s, &mu, nullptr, &sigma2), PSIM_OK);
    EXPECT_NEAR(mu, std::sqrt(2.0), 1e-15);
    EXPECT_EQ(sigma2, 0.5);
    psim_state_free(s);
    psim_state_free(nullptr);
}

TEST(CApi, ErrorsCarryStatusAndMessage) {
    psim_state* s = nullptr;
    EXPECT_EQ(psim_state_new(0.0, 0.0, 0.2, &s), PSIM_ERR_DOMAIN);
    EXPECT_EQ(s, nullptr);
    EXPECT_STRNE(psim_last_error(), "");
    EXPECT_EQ(psim_state_new(0.0, 0.0, 0.5, nullptr), PSIM_ERR_NULL_ARG);
    double out = 0.0;
    EXPECT_EQ(psim_theoretical_fwhm(0.5, &out), PSIM_ERR_DOMAIN);
    EXPECT_EQ(psim_cr_bound(2.0, &out), PSIM_OK);
    EXPECT_EQ(out, 1.0);
    EXPECT_STREQ(psim_last_error(), "");
}

TEST(CApi, InterferometerAndRician) {
    psim_interferometer ifo{1e6, 67100.0, 0.0, 1.0};
    double peak = 0.0;
    ASSERT_EQ(psim_parity_vs_phase(&ifo, 0.0, 1.0, &peak), PSIM_OK);
    EXPECT_NEAR(peak, 1.0 / 134201.0, 1e-18);
    ifo.extinction = 1.0;
    EXPECT_EQ(psim_parity_vs_phase(&ifo, 0.0, 1.0, &peak), PSIM_ERR_DOMAIN);
    double p = 0.0;
    ASSERT_EQ(psim_rician_cdf(0.0, 1.0, 1.0, &p), PSIM_OK);
    EXPECT_NEAR(p, 1.0 - std::exp(-0.5), 1e-14);
}

TEST(CApi, EnsemblesAndEstimators) {
    psim_state* s = nullptr;
    ASSERT_EQ(psim_state_new(0.0, 0.0, 0.5, &s), PSIM_OK);
    psim_ensemble* e = nullptr;
    ASSERT_EQ(psim_sample_phase_space(s, 20000, 7, &e), PSIM_OK);
    EXPECT_EQ(psim_ensemble_size(e), 20000u);
    double i = 0.0, q = 0.0;
    EXPECT_EQ(psim_ensemble_get(e, 0, &i, &q), PSIM_OK);
    EXPECT_EQ(psim_ensemble_get(e, 20000, &i, &q), PSIM_ERR_DOMAIN);
    psim_estimate ml{}, th{};
    ASSERT_EQ(psim_ml_estimate(e, PSIM_ML_FISHER_PROPAGATED, &ml), PSIM_OK);
    EXPECT_NEAR(ml.value, 1.0, 0.03);
    ASSERT_EQ(psim_threshold_estimate(e, 1.0, std::sqrt(0.5), PSIM_BERNOULLI_EXACT, &th), PSIM_OK);
    EXPECT_NEAR(th.value, 1.0 - std::exp(-0.5), 0.02);
    psim_ensemble_free(e);

    psim_acquisition acq;
    ASSERT_EQ(psim_default_acquisition(&acq), PSIM_OK);
    ASSERT_EQ(psim_ensemble_from_timeseries(&acq, s, 1, 1, &e), PSIM_OK);
    psim_ensemble* single = e;
    EXPECT_EQ(psim_ml_estimate(single, PSIM_ML_FISHER_PROPAGATED, &ml), PSIM_ERR_DEGENERATE);
    psim_ensemble_free(single);
    psim_state_free(s);
}

TEST(CApi, TimeseriesRoundTripThroughFile) {
    psim_state* s = nullptr;
    ASSERT_EQ(psim_state_new(10.0, M_PI / 2.0, 0.5, &s), PSIM_OK);
    psim_acquisition acq;
    psim_default_acquisition(&acq);
    psim_timeseries* ts = nullptr;
    ASSERT_EQ(psim_synthesize_timeseries(&acq, s, 1, 1, &ts), PSIM_OK);
    EXPECT_EQ(psim_timeseries_length(ts), 500u);
    const auto path = fs::temp_directory_path() / "paritysim_capi_series.csv";
    ASSERT_EQ(psim_timeseries_write(ts, path.c_str()), PSIM_OK);
    psim_timeseries* back = nullptr;
    ASSERT_EQ(psim_timeseries_read(path.c_str(), &back), PSIM_OK);
    double i = 0.0, q = 0.0;
    ASSERT_EQ(psim_extract_iq(back, &acq, 0.0, &i, &q), PSIM_OK);
    EXPECT_NEAR(std::atan2(q, i), M_PI / 2.0, 1e-9);
    EXPECT_EQ(psim_timeseries_read("/nonexistent/series.csv", &back), PSIM_ERR_IO);
    psim_timeseries_free(ts);
    psim_timeseries_free(back);
    psim_state_free(s);
    fs::remove(path);
}

TEST(CApi, ExperimentConfigurationAndRun) {
    psim_experiment* x = nullptr;
    ASSERT_EQ(psim_experiment_from_json(R"({"mode": "tradeoff"})", &x), PSIM_OK);
    EXPECT_EQ(psim_experiment_set(x, "tradeoff_a_grid.points", "5"), PSIM_OK);
    EXPECT_EQ(psim_experiment_set(x, "no_such_key", "5"), PSIM_ERR_CONFIG);
    EXPECT_NE(std::string(psim_last_error()).find("no_such_key"), std::string::npos);

    size_t length = 0, count = 99;
    ASSERT_EQ(psim_experiment_validate(x, &count, nullptr, 0, &length), PSIM_OK);
    EXPECT_EQ(count, 0u);

    char hash[8];
    ASSERT_EQ(psim_experiment_hash(x, hash, sizeof hash, &length), PSIM_OK);
    EXPECT_EQ(length, 16u);
    EXPECT_EQ(std::strlen(hash), 7u);  // truncated to fit

    const auto root = fs::temp_directory_path() / "paritysim_capi_run";
    fs::remove_all(root);
    std::string manifest(1 << 14, '\0');
    size_t failures = 1;
    ASSERT_EQ(psim_experiment_run(x, root.c_str(), 1, 0, &failures, manifest.data(),
                                  manifest.size(), &length),
              PSIM_OK)
        << psim_last_error();
    EXPECT_EQ(failures, 0u);
    EXPECT_TRUE(fs::exists(root / "tradeoff.csv"));
    EXPECT_TRUE(fs::exists(root / "manifest.json"));
    EXPECT_NE(manifest.find("\"config_hash\""), std::string::npos);

    ASSERT_EQ(psim_experiment_set(x, "repeats", "0"), PSIM_OK);
    ASSERT_EQ(psim_experiment_validate(x, &count, nullptr, 0, &length), PSIM_OK);
    EXPECT_EQ(count, 1u);
    EXPECT_EQ(psim_experiment_run(x, root.c_str(), 1, 0, nullptr, nullptr, 0, nullptr),
              PSIM_ERR_CONFIG);
    psim_experiment_free(x);
    EXPECT_EQ(psim_experiment_load("/nonexistent/config.json", &x), PSIM_ERR_IO);
    EXPECT_EQ(psim_experiment_from_json("{", &x), PSIM_ERR_CONFIG);
}
