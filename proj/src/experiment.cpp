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

#include "paritysim/experiment.hpp"

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstring>
#include <ctime>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "paritysim/csv.hpp"
#include "paritysim/errors.hpp"
#include "paritysim/interferometer.hpp"
#include "paritysim/metrology.hpp"
#include "paritysim/parallel.hpp"
#include "paritysim/random.hpp"

#ifndef PARITYSIM_VERSION
#define PARITYSIM_VERSION "0.0.0"
#endif

namespace paritysim {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Enum spellings

template <class E>
struct Spelling {
    E value;
    const char* text;
};

constexpr Spelling<ExperimentMode> kModes[] = {
    {ExperimentMode::parity_sweep, "parity-sweep"},
    {ExperimentMode::sensitivity, "sensitivity"},
    {ExperimentMode::tradeoff, "tradeoff"},
    {ExperimentMode::roc, "roc"},
    {ExperimentMode::integration_time, "integration-time"},
    {ExperimentMode::timeseries_demo, "timeseries-demo"},
};
constexpr Spelling<EstimatorMethod> kMethods[] = {
    {EstimatorMethod::ml, "ml"},
    {EstimatorMethod::threshold, "threshold"},
};
constexpr Spelling<BernoulliErrorModel> kBernoulli[] = {
    {BernoulliErrorModel::exact_bernoulli, "exact-bernoulli"},
    {BernoulliErrorModel::paper_sqrt_p, "paper-sqrt-p"},
};
constexpr Spelling<MlErrorModel> kMlErrors[] = {
    {MlErrorModel::fisher_propagated, "fisher-propagated"},
    {MlErrorModel::paper_printed, "paper-printed"},
};
constexpr Spelling<EnsembleSource> kSources[] = {
    {EnsembleSource::direct, "direct"},
    {EnsembleSource::timeseries, "timeseries"},
};
constexpr Spelling<GridUnits> kUnits[] = {
    {GridUnits::fwhm, "fwhm"},
    {GridUnits::radians, "rad"},
};

template <class E, std::size_t N>
const char* spell(const Spelling<E> (&table)[N], E value) {
    for (const auto& s : table) {
        if (s.value == value) {
            return s.text;
        }
    }
    return "?";
}

template <class E, std::size_t N>
E parse_enum(const Spelling<E> (&table)[N], const json& j, const std::string& field) {
    if (!j.is_string()) {
        throw ConfigError(field, "expected a string");
    }
    const auto text = j.get<std::string>();
    std::string options;
    for (const auto& s : table) {
        if (text == s.text) {
            return s.value;
        }
        options += options.empty() ? "" : ", ";
        options += s.text;
    }
    throw ConfigError(field, "unknown value '" + text + "' (expected one of " + options + ")");
}

// ---------------------------------------------------------------------------
// JSON readers with field-qualified errors

double read_number(const json& j, const std::string& field) {
    if (!j.is_number()) {
        throw ConfigError(field, "expected a number");
    }
    return j.get<double>();
}

std::uint64_t read_unsigned(const json& j, const std::string& field) {
    if (j.is_number_unsigned()) {
        return j.get<std::uint64_t>();
    }
    if (j.is_number_integer()) {
        if (j.get<std::int64_t>() < 0) {
            throw ConfigError(field, "must be non-negative");
        }
        return static_cast<std::uint64_t>(j.get<std::int64_t>());
    }
    if (j.is_number_float()) {
        const double v = j.get<double>();
        if (v >= 0.0 && v == std::floor(v) && v < 1.8e19) {
            return static_cast<std::uint64_t>(v);
        }
    }
    throw ConfigError(field, "expected a non-negative integer");
}

std::vector<double> read_numbers(const json& j, const std::string& field) {
    if (!j.is_array()) {
        throw ConfigError(field, "expected a list of numbers");
    }
    std::vector<double> out;
    for (std::size_t k = 0; k < j.size(); ++k) {
        out.push_back(read_number(j[k], field + "[" + std::to_string(k) + "]"));
    }
    return out;
}

class ObjectReader {
  public:
    ObjectReader(const json& obj, std::string prefix) : obj_(obj), prefix_(std::move(prefix)) {
        if (!obj_.is_object()) {
            throw ConfigError(prefix_.empty() ? "config" : prefix_, "expected a JSON object");
        }
    }

    const json* get(const char* key) {
        seen_.insert(key);
        auto it = obj_.find(key);
        return it == obj_.end() || it->is_null() ? nullptr : &*it;
    }

    std::string field(const char* key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

    void finish() const {
        for (auto it = obj_.begin(); it != obj_.end(); ++it) {
            if (!seen_.count(it.key())) {
                throw ConfigError(field(it.key().c_str()), "unknown configuration key");
            }
        }
    }

  private:
    const json& obj_;
    std::string prefix_;
    std::set<std::string> seen_;
};

GridSpec read_grid(const json& j, const std::string& field, GridSpec grid) {
    ObjectReader r(j, field);
    if (auto* v = r.get("min")) grid.min = read_number(*v, r.field("min"));
    if (auto* v = r.get("max")) grid.max = read_number(*v, r.field("max"));
    if (auto* v = r.get("points")) grid.points = read_unsigned(*v, r.field("points"));
    r.finish();
    return grid;
}

json grid_json(const GridSpec& g) {
    return json{{"min", g.min}, {"max", g.max}, {"points", g.points}};
}

// ---------------------------------------------------------------------------
// Output helpers

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

std::string utc_timestamp(const std::chrono::system_clock::time_point& now, bool compact) {
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), compact ? "%Y%m%dT%H%M%SZ" : "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing: " + std::strerror(errno));
    }
    out << content;
    out.flush();
    if (!out) {
        throw IoError("failed writing " + path.string() + ": " + std::strerror(errno));
    }
}

std::string cell(double v) { return format_number(v); }

std::string label(std::string_view s) { return std::string(s); }

// Tracks the CSV tables a run produces, in write order.
class Outputs {
  public:
    explicit Outputs(std::filesystem::path dir) : dir_(std::move(dir)) {}

    void write(const std::string& name, const CsvTable& table) {
        write_text(dir_ / name, table.str());
        files_.push_back(name);
    }

    void write_raw(const std::string& name, const std::string& content) {
        write_text(dir_ / name, content);
        files_.push_back(name);
    }

    const std::vector<std::string>& files() const { return files_; }

  private:
    std::filesystem::path dir_;
    std::vector<std::string> files_;
};

struct RunContext {
    const ExperimentConfig& config;
    unsigned threads;
    Outputs& outputs;
    std::size_t fit_failures = 0;
};

double extinction_of(const ExperimentConfig& c) { return db_to_linear(-c.extinction_db); }

InterferometerConfig interferometer_at(const ExperimentConfig& c, double snr_db) {
    return InterferometerConfig::from_snr(db_to_linear(snr_db), c.n_th, extinction_of(c),
                                          c.acquisition.window_s);
}

std::vector<double> phase_grid_for(const ExperimentConfig& c, double snr) {
    std::vector<double> grid = c.phase_grid.range.values();
    if (c.phase_grid.units == GridUnits::fwhm) {
        const double scale = theoretical_fwhm(snr);
        for (double& phi : grid) {
            phi *= scale;
        }
    }
    return grid;
}

// One estimator variant of a sweep: ML, or threshold at a given radius.
struct Variant {
    EstimatorMethod method;
    double a_over_sigma;  // 0 for ML
    std::size_t index;
};

std::vector<Variant> variants_of(const ExperimentConfig& c) {
    std::vector<Variant> out;
    std::size_t index = 0;
    for (auto method : c.estimators) {
        if (method == EstimatorMethod::ml) {
            out.push_back({method, 0.0, index++});
        } else {
            for (double a : c.a_over_sigma_list) {
                out.push_back({method, a, index++});
            }
        }
    }
    return out;
}

std::string a_cell(const Variant& v) {
    return v.method == EstimatorMethod::ml ? std::string() : cell(v.a_over_sigma);
}

SweepOptions sweep_options(const ExperimentConfig& c, const Variant& v, std::uint64_t seed,
                           unsigned threads) {
    SweepOptions o;
    o.method = v.method;
    o.threshold = ThresholdConfig{v.a_over_sigma, c.error_model};
    o.ml_error = c.ml_error_model;
    o.n_samples = c.n_samples;
    o.repeats = c.repeats;
    o.seed = seed;
    o.source = c.source;
    o.acquisition = c.acquisition;
    o.threads = threads;
    return o;
}

// Tags keep stream keys of different modes disjoint.
enum : std::uint64_t {
    kTagSweep = 1,
    kTagIntegration = 2,
    kTagDemo = 3,
};

void run_parity_sweep(RunContext& ctx) {
    const auto& c = ctx.config;
    CsvTable curves({"snr_db", "snr_linear", "estimator", "a_over_sigma", "phi_rad",
                     "phi_over_fwhm", "value", "std_error_per_sample", "spread_per_sample",
                     "theory"});
    CsvTable fits({"snr_db", "snr_linear", "estimator", "a_over_sigma", "status", "snr_hat",
                   "n_th_hat", "fwhm_rad", "theory_fwhm_rad", "residual"});
    for (std::size_t s = 0; s < c.snr_db_list.size(); ++s) {
        const double db = c.snr_db_list[s];
        const InterferometerConfig ifo = interferometer_at(c, db);
        const double t = ifo.t_ref;
        const double snr = snr_at_reference(ifo);
        const double fwhm = theoretical_fwhm(snr);
        const auto grid = phase_grid_for(c, snr);
        for (const auto& v : variants_of(c)) {
            const auto options = sweep_options(
                c, v, derive_stream_key(c.seed, {kTagSweep, s, v.index}), ctx.threads);
            const SweepResult sweep = monte_carlo_sweep(ifo, t, grid, options);
            const SweepResult theory = theory_sweep(ifo, t, grid, options);
            for (std::size_t k = 0; k < grid.size(); ++k) {
                const auto& e = sweep.estimates[k];
                curves.add_row({cell(db), cell(snr), label(to_string(v.method)), a_cell(v),
                                cell(grid[k]), cell(grid[k] / fwhm), cell(e.value),
                                cell(e.std_error), cell(sweep.spread[k]),
                                cell(theory.estimates[k].value)});
            }
            try {
                const ResolutionFit fit = fit_parity_model(sweep);
                fits.add_row({cell(db), cell(snr), label(to_string(v.method)), a_cell(v), "ok",
                              cell(fit.snr_hat), cell(fit.n_th_hat), cell(fit.fwhm), cell(fwhm),
                              cell(fit.residual)});
            } catch (const FitFailure& failure) {
                ++ctx.fit_failures;
                fits.add_row({cell(db), cell(snr), label(to_string(v.method)), a_cell(v),
                              "fit_failure", "nan", "nan", "nan", cell(fwhm),
                              cell(failure.residual())});
            }
        }
    }
    ctx.outputs.write("parity_sweep.csv", curves);
    ctx.outputs.write("resolution_fit.csv", fits);
}

void run_sensitivity(RunContext& ctx) {
    const auto& c = ctx.config;
    CsvTable curves({"snr_db", "estimator", "a_over_sigma", "phi_rad", "delta_phi_rad",
                     "delta_phi_spread_rad", "delta_phi_theory_rad", "cr_bound_rad"});
    CsvTable minima({"snr_db", "snr_linear", "estimator", "a_over_sigma", "min_delta_phi_rad",
                     "phi_at_min_rad", "theory_min_rad", "cr_bound_rad", "ratio_to_cr",
                     "theory_ratio_to_cr"});
    for (std::size_t s = 0; s < c.snr_db_list.size(); ++s) {
        const double db = c.snr_db_list[s];
        const InterferometerConfig ifo = interferometer_at(c, db);
        const double t = ifo.t_ref;
        const double snr = snr_at_reference(ifo);
        const double cr = cr_bound(snr);
        const PhotonBudget budget{ifo.n_c_total, ifo.n_th};
        const auto grid = phase_grid_for(c, snr);
        for (const auto& v : variants_of(c)) {
            const auto options = sweep_options(
                c, v, derive_stream_key(c.seed, {kTagSweep, s, v.index}), ctx.threads);
            const SweepResult sweep = monte_carlo_sweep(ifo, t, grid, options);
            const SensitivityCurve curve = sensitivity_from_curve(sweep);
            SweepResult by_spread = sweep;
            for (std::size_t k = 0; k < grid.size(); ++k) {
                by_spread.estimates[k].std_error = sweep.spread[k];
            }
            const SensitivityCurve spread_curve = sensitivity_from_curve(by_spread);
            const ThresholdConfig tcfg{v.a_over_sigma, c.error_model};
            for (std::size_t k = 0; k < grid.size(); ++k) {
                double theory = std::numeric_limits<double>::infinity();
                try {
                    theory = v.method == EstimatorMethod::ml
                                 ? ml_sensitivity_theory(budget, grid[k], c.ml_error_model)
                                 : threshold_sensitivity_theory(budget, grid[k], tcfg);
                } catch (const DivergenceError&) {
                }
                curves.add_row({cell(db), label(to_string(v.method)), a_cell(v), cell(grid[k]),
                                cell(curve.delta_phi[k]), cell(spread_curve.delta_phi[k]),
                                cell(theory), cell(cr)});
            }
            const SensitivityMinimum best = minimum_sensitivity(curve);
            const SensitivityMinimum theory_best =
                v.method == EstimatorMethod::ml ? ml_sensitivity_minimum(budget, c.ml_error_model)
                                                : threshold_sensitivity_minimum(budget, tcfg);
            minima.add_row({cell(db), cell(snr), label(to_string(v.method)), a_cell(v),
                            cell(best.delta_phi), cell(best.phi), cell(theory_best.delta_phi),
                            cell(cr), cell(best.delta_phi / cr),
                            cell(theory_best.delta_phi / cr)});
        }
    }
    ctx.outputs.write("sensitivity.csv", curves);
    ctx.outputs.write("sensitivity_min.csv", minima);
}

void run_tradeoff(RunContext& ctx) {
    const auto& c = ctx.config;
    TradeoffOptions options;
    options.snr = db_to_linear(c.tradeoff_snr_db);
    options.error_model = c.error_model;
    CsvTable table({"a_over_sigma", "resolution_over_cr", "sensitivity_over_cr"});
    for (const auto& p : tradeoff_curve(c.tradeoff_a_grid.values(), options)) {
        table.add_row({cell(p.a_over_sigma), cell(p.resolution), cell(p.sensitivity)});
    }
    ctx.outputs.write("tradeoff.csv", table);

    CsvTable summary({"error_model", "min_factor", "a_over_sigma_at_min", "phi_at_min_rad",
                      "snr_linear", "balance_a_over_sigma"});
    for (auto model : {BernoulliErrorModel::exact_bernoulli, BernoulliErrorModel::paper_sqrt_p}) {
        const ThresholdFactor factor = min_sensitivity_factor(model, options.snr);
        TradeoffOptions balance_options = options;
        balance_options.error_model = model;
        std::string balance = "nan";
        try {
            balance = cell(balance_point(balance_options, 0.5, 4.0));
        } catch (const DomainError&) {
        }
        summary.add_row({label(to_string(model)), cell(factor.factor), cell(factor.a_over_sigma),
                         cell(factor.phi), cell(factor.snr), balance});
    }
    ctx.outputs.write("threshold_factor.csv", summary);
}

void run_roc(RunContext& ctx) {
    const auto& c = ctx.config;
    const InterferometerConfig ifo = interferometer_at(c, c.roc_snr_db);
    const double cr = cr_bound(snr_at_reference(ifo));
    CsvTable table({"deviation_over_cr", "a_over_sigma", "false_positive_rate",
                    "true_positive_rate"});
    CsvTable areas({"deviation_over_cr", "area_under_curve"});
    for (double ad : c.roc_deviation_cr) {
        ROCConfig roc;
        roc.acceptable_deviation = ad * cr;
        roc.phase_prior_max = c.roc_prior_factor * roc.acceptable_deviation;
        roc.a_grid = c.roc_a_grid.values();
        const auto curve = roc_curve(ifo, roc, ifo.t_ref);
        for (const auto& p : curve) {
            table.add_row({cell(ad), cell(p.a_over_sigma), cell(p.false_positive_rate),
                           cell(p.true_positive_rate)});
        }
        areas.add_row({cell(ad), cell(roc_area(curve))});
    }
    ctx.outputs.write("roc.csv", table);
    ctx.outputs.write("roc_area.csv", areas);
}

void run_integration_time(RunContext& ctx) {
    const auto& c = ctx.config;
    const InterferometerConfig ifo = interferometer_at(c, c.integration_snr_db);
    CsvTable curves({"t_factor", "snr_linear", "leak_photons", "phi_rad", "parity_theory", "value",
                     "std_error_per_sample"});
    CsvTable peaks({"t_factor", "snr_linear", "leak_photons", "n_th", "peak_theory",
                    "peak_ratio_to_leak_free", "peak_ml", "status", "fwhm_fit_rad",
                    "theory_fwhm_rad"});
    const Variant ml{EstimatorMethod::ml, 0.0, 0};
    for (std::size_t f = 0; f < c.integration_time_factors.size(); ++f) {
        const double factor = c.integration_time_factors[f];
        const double t = factor * ifo.t_ref;
        const double snr = snr_at_time(ifo, t);
        const double leak = ifo.n_c_total * factor * ifo.extinction;
        const auto grid = phase_grid_for(c, snr);
        const auto options = sweep_options(
            c, ml, derive_stream_key(c.seed, {kTagIntegration, f}), ctx.threads);
        const SweepResult sweep = monte_carlo_sweep(ifo, t, grid, options);

        std::size_t centre = 0;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            if (std::abs(grid[k]) < std::abs(grid[centre])) {
                centre = k;
            }
            curves.add_row({cell(factor), cell(snr), cell(leak), cell(grid[k]),
                            cell(parity_vs_phase(ifo, grid[k], t)),
                            cell(sweep.estimates[k].value), cell(sweep.estimates[k].std_error)});
        }
        const double peak = parity_vs_phase(ifo, 0.0, t);
        const double leak_free_peak = 1.0 / (2.0 * ifo.n_th + 1.0);
        std::string status = "ok";
        std::string fwhm_fit = "nan";
        try {
            fwhm_fit = cell(fit_parity_model(sweep).fwhm);
        } catch (const FitFailure&) {
            status = "fit_failure";
            ++ctx.fit_failures;
        }
        peaks.add_row({cell(factor), cell(snr), cell(leak), cell(ifo.n_th), cell(peak),
                       cell(peak / leak_free_peak), cell(sweep.estimates[centre].value), status,
                       fwhm_fit, cell(theoretical_fwhm(snr))});
    }
    ctx.outputs.write("integration_time.csv", curves);
    ctx.outputs.write("integration_peak.csv", peaks);
}

void run_timeseries_demo(RunContext& ctx) {
    const auto& c = ctx.config;
    const InterferometerConfig ifo = interferometer_at(c, c.snr_db_list.front());
    const double snr = snr_at_reference(ifo);
    const double phi = c.demo_phase_fwhm * theoretical_fwhm(snr);
    const GaussianState state = output_state(ifo, phi, ifo.t_ref);

    const TimeSeries series =
        synthesize_timeseries(c.acquisition, state, derive_stream_key(c.seed, {kTagDemo, 0}));
    std::ostringstream series_csv;
    write_timeseries_csv(series, series_csv);
    ctx.outputs.write_raw("timeseries.csv", series_csv.str());

    const IQEnsemble via_series = ensemble_from_timeseries(
        c.acquisition, state, c.n_samples, derive_stream_key(c.seed, {kTagDemo, 1}));
    const IQEnsemble direct =
        sample_phase_space(state, c.n_samples, derive_stream_key(c.seed, {kTagDemo, 2}));

    CsvTable samples({"source", "index", "i", "q"});
    CsvTable summary({"source", "n", "mean_i", "mean_q", "var_i", "var_q", "expected_i",
                      "expected_q", "expected_var"});
    for (const IQEnsemble* e : {&via_series, &direct}) {
        const std::string source = e->provenance == EnsembleSource::direct ? "direct" : "timeseries";
        double mi = 0.0, mq = 0.0;
        for (std::size_t k = 0; k < e->size(); ++k) {
            samples.add_row({source, std::to_string(k), cell(e->samples[k].i),
                             cell(e->samples[k].q)});
            mi += e->samples[k].i;
            mq += e->samples[k].q;
        }
        const double n = static_cast<double>(e->size());
        mi /= n;
        mq /= n;
        double vi = 0.0, vq = 0.0;
        for (const auto& s : e->samples) {
            vi += (s.i - mi) * (s.i - mi);
            vq += (s.q - mq) * (s.q - mq);
        }
        const double denom = e->size() > 1 ? n - 1.0 : 1.0;
        summary.add_row({source, std::to_string(e->size()), cell(mi), cell(mq), cell(vi / denom),
                         cell(vq / denom), cell(state.center_x()), cell(state.center_p()),
                         cell(state.sigma2())});
    }
    ctx.outputs.write("iq_samples.csv", samples);
    ctx.outputs.write("iq_comparison.csv", summary);
}

std::filesystem::path choose_run_dir(const std::filesystem::path& root, ExperimentMode mode,
                                     const std::string& stamp) {
    const std::filesystem::path base = root / std::string(to_string(mode));
    std::filesystem::path dir = base / stamp;
    for (int suffix = 1; std::filesystem::exists(dir); ++suffix) {
        dir = base / (stamp + "-" + std::to_string(suffix));
    }
    return dir;
}

const std::set<std::string>& list_keys() {
    static const std::set<std::string> keys{"snr_db_list", "estimators", "a_over_sigma_list",
                                            "roc_deviation_cr", "integration_time_factors"};
    return keys;
}

json parse_scalar_or_string(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error&) {
        return json(std::string(text));
    }
}

}  // namespace

// ---------------------------------------------------------------------------

std::string_view to_string(ExperimentMode mode) { return spell(kModes, mode); }

std::string_view library_version() { return PARITYSIM_VERSION; }

std::vector<double> GridSpec::values() const {
    std::vector<double> out(points);
    if (points == 1) {
        out[0] = min;
        return out;
    }
    for (std::size_t k = 0; k < points; ++k) {
        out[k] = min + (max - min) * static_cast<double>(k) / static_cast<double>(points - 1);
    }
    return out;
}

ExperimentConfig config_from_json(const json& doc) {
    ExperimentConfig c;
    ObjectReader r(doc, "");
    if (auto* v = r.get("mode")) c.mode = parse_enum(kModes, *v, "mode");
    if (auto* v = r.get("snr_db_list")) c.snr_db_list = read_numbers(*v, "snr_db_list");
    if (auto* v = r.get("phase_grid")) {
        ObjectReader g(*v, "phase_grid");
        if (auto* x = g.get("min")) c.phase_grid.range.min = read_number(*x, "phase_grid.min");
        if (auto* x = g.get("max")) c.phase_grid.range.max = read_number(*x, "phase_grid.max");
        if (auto* x = g.get("points")) c.phase_grid.range.points = read_unsigned(*x, "phase_grid.points");
        if (auto* x = g.get("units")) c.phase_grid.units = parse_enum(kUnits, *x, "phase_grid.units");
        g.finish();
    }
    if (auto* v = r.get("n_samples")) c.n_samples = read_unsigned(*v, "n_samples");
    if (auto* v = r.get("repeats")) c.repeats = read_unsigned(*v, "repeats");
    if (auto* v = r.get("estimators")) {
        if (!v->is_array()) {
            throw ConfigError("estimators", "expected a list");
        }
        c.estimators.clear();
        for (std::size_t k = 0; k < v->size(); ++k) {
            c.estimators.push_back(
                parse_enum(kMethods, (*v)[k], "estimators[" + std::to_string(k) + "]"));
        }
    }
    if (auto* v = r.get("a_over_sigma_list")) c.a_over_sigma_list = read_numbers(*v, "a_over_sigma_list");
    if (auto* v = r.get("error_model")) c.error_model = parse_enum(kBernoulli, *v, "error_model");
    if (auto* v = r.get("ml_error_model")) c.ml_error_model = parse_enum(kMlErrors, *v, "ml_error_model");
    if (auto* v = r.get("extinction_db")) c.extinction_db = read_number(*v, "extinction_db");
    if (auto* v = r.get("n_th")) c.n_th = read_number(*v, "n_th");
    if (auto* v = r.get("source")) c.source = parse_enum(kSources, *v, "source");
    if (auto* v = r.get("acquisition")) {
        ObjectReader a(*v, "acquisition");
        if (auto* x = a.get("carrier_hz")) c.acquisition.carrier_hz = read_number(*x, a.field("carrier_hz"));
        if (auto* x = a.get("sample_rate_hz")) c.acquisition.sample_rate_hz = read_number(*x, a.field("sample_rate_hz"));
        if (auto* x = a.get("window_s")) c.acquisition.window_s = read_number(*x, a.field("window_s"));
        if (auto* x = a.get("volts_per_unit")) c.acquisition.volts_per_unit = read_number(*x, a.field("volts_per_unit"));
        a.finish();
    }
    if (auto* v = r.get("tradeoff_snr_db")) c.tradeoff_snr_db = read_number(*v, "tradeoff_snr_db");
    if (auto* v = r.get("tradeoff_a_grid")) c.tradeoff_a_grid = read_grid(*v, "tradeoff_a_grid", c.tradeoff_a_grid);
    if (auto* v = r.get("roc_snr_db")) c.roc_snr_db = read_number(*v, "roc_snr_db");
    if (auto* v = r.get("roc_deviation_cr")) c.roc_deviation_cr = read_numbers(*v, "roc_deviation_cr");
    if (auto* v = r.get("roc_prior_factor")) c.roc_prior_factor = read_number(*v, "roc_prior_factor");
    if (auto* v = r.get("roc_a_grid")) c.roc_a_grid = read_grid(*v, "roc_a_grid", c.roc_a_grid);
    if (auto* v = r.get("integration_snr_db")) c.integration_snr_db = read_number(*v, "integration_snr_db");
    if (auto* v = r.get("integration_time_factors")) c.integration_time_factors = read_numbers(*v, "integration_time_factors");
    if (auto* v = r.get("demo_phase_fwhm")) c.demo_phase_fwhm = read_number(*v, "demo_phase_fwhm");
    if (auto* v = r.get("seed")) c.seed = read_unsigned(*v, "seed");
    r.finish();
    return c;
}

ExperimentConfig config_from_json_text(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("config", std::string("malformed JSON: ") + e.what());
    }
    return config_from_json(doc);
}

json to_json(const ExperimentConfig& c) {
    json estimators = json::array();
    for (auto m : c.estimators) {
        estimators.push_back(spell(kMethods, m));
    }
    return json{
        {"mode", spell(kModes, c.mode)},
        {"snr_db_list", c.snr_db_list},
        {"phase_grid",
         {{"min", c.phase_grid.range.min},
          {"max", c.phase_grid.range.max},
          {"points", c.phase_grid.range.points},
          {"units", spell(kUnits, c.phase_grid.units)}}},
        {"n_samples", c.n_samples},
        {"repeats", c.repeats},
        {"estimators", estimators},
        {"a_over_sigma_list", c.a_over_sigma_list},
        {"error_model", spell(kBernoulli, c.error_model)},
        {"ml_error_model", spell(kMlErrors, c.ml_error_model)},
        {"extinction_db", c.extinction_db},
        {"n_th", c.n_th},
        {"source", spell(kSources, c.source)},
        {"acquisition",
         {{"carrier_hz", c.acquisition.carrier_hz},
          {"sample_rate_hz", c.acquisition.sample_rate_hz},
          {"window_s", c.acquisition.window_s},
          {"volts_per_unit", c.acquisition.volts_per_unit}}},
        {"tradeoff_snr_db", c.tradeoff_snr_db},
        {"tradeoff_a_grid", grid_json(c.tradeoff_a_grid)},
        {"roc_snr_db", c.roc_snr_db},
        {"roc_deviation_cr", c.roc_deviation_cr},
        {"roc_prior_factor", c.roc_prior_factor},
        {"roc_a_grid", grid_json(c.roc_a_grid)},
        {"integration_snr_db", c.integration_snr_db},
        {"integration_time_factors", c.integration_time_factors},
        {"demo_phase_fwhm", c.demo_phase_fwhm},
        {"seed", c.seed},
    };
}

void apply_override(json& doc, std::string_view key, std::string_view value_text) {
    if (key.empty()) {
        throw ConfigError("override", "empty key");
    }
    if (!doc.is_object()) {
        doc = json::object();
    }
    json* node = &doc;
    std::string leaf;
    std::size_t start = 0;
    for (;;) {
        const std::size_t dot = key.find('.', start);
        const std::string part(key.substr(start, dot == std::string_view::npos ? dot : dot - start));
        if (dot == std::string_view::npos) {
            leaf = part;
            break;
        }
        json& child = (*node)[part];
        if (!child.is_object()) {
            child = json::object();
        }
        node = &child;
        start = dot + 1;
    }

    json value;
    const bool is_list = node == &doc && list_keys().count(leaf) != 0;
    if (is_list && value_text.find(',') != std::string_view::npos && value_text.front() != '[') {
        value = json::array();
        std::size_t pos = 0;
        for (;;) {
            const std::size_t comma = value_text.find(',', pos);
            value.push_back(parse_scalar_or_string(value_text.substr(
                pos, comma == std::string_view::npos ? comma : comma - pos)));
            if (comma == std::string_view::npos) {
                break;
            }
            pos = comma + 1;
        }
    } else {
        value = parse_scalar_or_string(value_text);
        if (is_list && !value.is_array()) {
            value = json::array({value});
        }
    }
    (*node)[leaf] = std::move(value);
}

std::vector<std::string> validate(const ExperimentConfig& c) {
    std::vector<std::string> report;
    auto fail = [&report](const std::string& field, const std::string& message) {
        report.push_back(field + ": " + message);
    };
    auto check_list = [&](const std::vector<double>& values, const std::string& field, bool positive) {
        if (values.empty()) {
            fail(field, "must not be empty");
        }
        for (double v : values) {
            if (!std::isfinite(v) || (positive && !(v > 0.0))) {
                fail(field, positive ? "entries must be finite and positive" : "entries must be finite");
                break;
            }
        }
    };
    auto check_grid = [&](const GridSpec& g, const std::string& field, std::size_t min_points) {
        if (g.points < min_points) {
            fail(field + ".points", "must be at least " + std::to_string(min_points));
        }
        if (!std::isfinite(g.min) || !std::isfinite(g.max) || !(g.max > g.min)) {
            fail(field, "requires finite min < max");
        }
    };
    auto check_snr_db = [&](double db, const std::string& field) {
        if (!std::isfinite(db) || !(db_to_linear(db) > std::numbers::ln2)) {
            fail(field, "linear SNR must exceed ln 2 for a half-maximum crossing");
        }
    };

    if (c.n_samples < 1) {
        fail("n_samples", "must be at least 1");
    } else if (c.n_samples < 2 &&
               std::find(c.estimators.begin(), c.estimators.end(), EstimatorMethod::ml) !=
                   c.estimators.end()) {
        fail("n_samples", "maximum-likelihood estimation needs at least 2 samples");
    }
    if (c.repeats < 1) {
        fail("repeats", "must be at least 1");
    }
    check_list(c.snr_db_list, "snr_db_list", false);
    for (double db : c.snr_db_list) {
        check_snr_db(db, "snr_db_list");
    }
    const std::size_t min_phase_points = c.mode == ExperimentMode::sensitivity ? 3 : 1;
    check_grid(c.phase_grid.range, "phase_grid", min_phase_points);
    if (c.estimators.empty()) {
        fail("estimators", "must not be empty");
    }
    check_list(c.a_over_sigma_list, "a_over_sigma_list", true);
    if (!std::isfinite(c.extinction_db) || !(c.extinction_db > 0.0)) {
        fail("extinction_db", "must be finite and positive (leakage below unity)");
    }
    if (!std::isfinite(c.n_th) || c.n_th < 0.0) {
        fail("n_th", "must be finite and non-negative");
    }
    for (const auto& problem : check(c.acquisition)) {
        fail("acquisition", problem);
    }
    check_snr_db(c.tradeoff_snr_db, "tradeoff_snr_db");
    check_grid(c.tradeoff_a_grid, "tradeoff_a_grid", 1);
    if (c.tradeoff_a_grid.points >= 1 && !(c.tradeoff_a_grid.min > 0.0)) {
        fail("tradeoff_a_grid.min", "threshold radii must be positive");
    }
    check_snr_db(c.roc_snr_db, "roc_snr_db");
    check_list(c.roc_deviation_cr, "roc_deviation_cr", true);
    if (!std::isfinite(c.roc_prior_factor) || !(c.roc_prior_factor > 1.0)) {
        fail("roc_prior_factor", "must exceed 1");
    }
    check_grid(c.roc_a_grid, "roc_a_grid", 2);
    if (c.roc_a_grid.min < 0.0) {
        fail("roc_a_grid.min", "threshold radii must be non-negative");
    }
    check_snr_db(c.integration_snr_db, "integration_snr_db");
    check_list(c.integration_time_factors, "integration_time_factors", true);
    if (!std::isfinite(c.demo_phase_fwhm)) {
        fail("demo_phase_fwhm", "must be finite");
    }
    return report;
}

std::string config_hash(const ExperimentConfig& config) {
    const std::string canonical = to_json(config).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buffer[17];
    std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(h));
    return buffer;
}

json to_json(const RunManifest& m) {
    return json{
        {"artifact", "paritysim"},
        {"version", m.version},
        {"config_hash", m.config_hash},
        {"seed", m.seed},
        {"timestamp", m.timestamp},
        {"output_dir", m.output_dir.string()},
        {"files", m.files},
        {"fit_failures", m.fit_failures},
    };
}

RunManifest run_experiment(const ExperimentConfig& config, const std::filesystem::path& output_root,
                           const RunOptions& options) {
    const auto problems = validate(config);
    if (!problems.empty()) {
        const auto colon = problems.front().find(':');
        throw ConfigError(problems.front().substr(0, colon), problems.front().substr(colon + 2));
    }
    const auto now = std::chrono::system_clock::now();
    const std::filesystem::path dir =
        options.flat ? output_root : choose_run_dir(output_root, config.mode, utc_timestamp(now, true));
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    }

    Outputs outputs(dir);
    RunContext ctx{config, options.threads, outputs};
    switch (config.mode) {
        case ExperimentMode::parity_sweep: run_parity_sweep(ctx); break;
        case ExperimentMode::sensitivity: run_sensitivity(ctx); break;
        case ExperimentMode::tradeoff: run_tradeoff(ctx); break;
        case ExperimentMode::roc: run_roc(ctx); break;
        case ExperimentMode::integration_time: run_integration_time(ctx); break;
        case ExperimentMode::timeseries_demo: run_timeseries_demo(ctx); break;
    }

    RunManifest manifest;
    manifest.config_hash = config_hash(config);
    manifest.seed = config.seed;
    manifest.version = std::string(library_version());
    manifest.timestamp = utc_timestamp(now, false);
    manifest.output_dir = dir;
    manifest.files = outputs.files();
    manifest.fit_failures = ctx.fit_failures;

    json doc = to_json(manifest);
    doc["config"] = to_json(config);
    doc["mode"] = std::string(to_string(config.mode));
    doc["threads"] = resolve_threads(options.threads);
    write_text(dir / "manifest.json", doc.dump(2) + "\n");
    manifest.files.push_back("manifest.json");
    return manifest;
}

}  // namespace paritysim
