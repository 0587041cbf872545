#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "wtgeprp/dwt.hpp"
#include "wtgeprp/evolution.hpp"

namespace wtgeprp {

inline constexpr std::size_t kWindowSize = 7;  // six lags predict the next value

struct SeriesDataset {
    std::string name;
    std::vector<double> values;
    std::vector<std::string> labels;  // optional index labels (e.g. years)
    double train_fraction = 0.85;
};

inline void validate_dataset(const SeriesDataset& ds) {
    if (ds.values.size() < 2 * kWindowSize)
        throw std::invalid_argument("dataset '" + ds.name + "': needs at least " +
                                    std::to_string(2 * kWindowSize) + " rows, got " +
                                    std::to_string(ds.values.size()));
    detail::require_finite(ds.values);
    if (!ds.labels.empty() && ds.labels.size() != ds.values.size())
        throw std::invalid_argument("dataset '" + ds.name + "': label/value count mismatch");
    if (!(ds.train_fraction > 0.0 && ds.train_fraction < 1.0))
        throw std::invalid_argument("train fraction must be in (0,1)");
}

struct WindowedData {
    std::vector<TrainingRow> rows;
};

// Sliding-window rows: row j maps lags x[j..j+5] to target x[j+6].  The
// engine's terminal set fixes six lags, so only window size 7 is accepted.
inline WindowedData window(std::span<const double> x, std::size_t window_size = kWindowSize) {
    if (window_size != kWindowSize)
        throw std::invalid_argument("window: size must be 7 (six lag terminals)");
    if (x.size() < window_size)
        throw std::invalid_argument("window: series of length " + std::to_string(x.size()) +
                                    " shorter than window " + std::to_string(window_size));
    WindowedData wd;
    wd.rows.resize(x.size() - kLagCount);
    for (std::size_t j = 0; j + kLagCount < x.size(); ++j) {
        TrainingRow& row = wd.rows[j];
        for (std::size_t m = 0; m < kLagCount; ++m) row.lags[m] = x[j + m];
        row.target = x[j + kLagCount];
        row.target_index = j + kLagCount;
    }
    return wd;
}

// Chronological split at floor(rows * train_fraction); no shuffling.
inline std::pair<WindowedData, WindowedData> split(const WindowedData& wd, double train_fraction) {
    const auto n_train =
        static_cast<std::size_t>(std::floor(static_cast<double>(wd.rows.size()) * train_fraction));
    if (n_train == 0 || n_train >= wd.rows.size())
        throw std::invalid_argument("split: degenerate partition (" + std::to_string(n_train) +
                                    "/" + std::to_string(wd.rows.size() - n_train) + ")");
    WindowedData train, test;
    train.rows.assign(wd.rows.begin(), wd.rows.begin() + static_cast<std::ptrdiff_t>(n_train));
    test.rows.assign(wd.rows.begin() + static_cast<std::ptrdiff_t>(n_train), wd.rows.end());
    return {std::move(train), std::move(test)};
}

struct Metrics {
    double rmse = 0.0;
    double mae = 0.0;
};

inline Metrics metrics(std::span<const double> pred, std::span<const double> actual) {
    if (pred.size() != actual.size()) throw std::invalid_argument("metrics: length mismatch");
    if (pred.empty()) throw std::invalid_argument("metrics: empty input");
    double sq = 0.0, abs = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - actual[i];
        sq += d * d;
        abs += std::abs(d);
    }
    const auto n = static_cast<double>(pred.size());
    return {std::sqrt(sq / n), abs / n};
}

struct ForecastConfig {
    std::optional<Basis> basis;  // nullopt = wavelet bypass
    std::size_t levels = 0;      // 0 iff no basis
    Extension extension = Extension::symmetric;
    bool strict_causal = false;  // decompose the train prefix only, extend per test step
    EvolutionConfig evolution;   // evolution.rng_seed is the master seed
    // Per-generation progress sink: (component, generation, best fitness,
    // best expression).
    std::function<void(const std::string&, std::size_t, double, const std::string&)> progress;
};

struct ComponentModel {
    std::size_t component_id = 0;
    std::string component_name;
    EvolutionResult result;
    double train_fit_rmse = 0.0;  // on the component's own train targets
    std::vector<double> train_predictions, test_predictions;
};

struct ForecastReport {
    std::string method_label;
    std::string basis_name;  // "none" when bypassed
    std::size_t levels = 0;
    std::string extension_name;
    bool strict_causal = false;
    double train_fraction = 0.0;
    EvolutionConfig evolution_config;
    std::string dataset_name;
    std::size_t series_length = 0;

    std::vector<std::size_t> train_indices, test_indices;  // target positions in the series
    std::vector<double> train_actual, test_actual;         // original-series targets
    std::vector<double> train_predicted, test_predicted;   // same-index component sums
    std::vector<ComponentModel> components;
    Metrics fit, prediction;
};

inline std::string method_label(bool wavelet, std::size_t gene_count) {
    if (wavelet) return "WTGEPRP";
    return gene_count >= 2 ? "MC-GEP" : "GEP (baseline)";
}

namespace detail {

// Model output for one row; an invalid evaluation predicts 0 (the fitness-0
// contract).
inline double predict(const Program& p, const std::array<double, kLagCount>& lags) {
    const auto v = evaluate(p, lags);
    return v ? *v : 0.0;
}

inline TrainingSet training_set_from(const WindowedData& wd, std::string component_id) {
    TrainingSet ts;
    ts.rows = wd.rows;
    ts.component_id = std::move(component_id);
    return ts;
}

// Split at a known row count.  Unlike split(), the test side may be empty:
// strict-causal component rows are train-only.
inline WindowedData train_slice(const WindowedData& wd, std::size_t n_train) {
    if (wd.rows.size() < n_train)
        throw std::invalid_argument("component windowing produced too few rows");
    WindowedData train;
    train.rows.assign(wd.rows.begin(), wd.rows.begin() + static_cast<std::ptrdiff_t>(n_train));
    return train;
}

}  // namespace detail

// The full pipeline: decompose the series into additive components, window
// and chronologically split each, evolve one model per component on its
// train rows, predict test rows one step ahead from true lagged component
// values, and reconstruct by same-index addition.  Fit and prediction
// metrics compare the reconstructed sums against the original series.
//
// With levels = 0 the pipeline degenerates to a single model on the raw
// series; that single evolution uses the master seed directly, so it is
// bit-identical to calling evolve() on the raw windowed rows.  Wavelet
// components use seeds derived from (master, component_id).
//
// By default the decomposition runs over the full series before splitting
// (so test-period information reaches the component values; see README).
// strict_causal decomposes the train prefix only and re-extends it one test
// step at a time.
inline ForecastReport run_wtgeprp(const SeriesDataset& ds, const ForecastConfig& cfg) {
    validate_dataset(ds);
    validate_config(cfg.evolution);
    const bool wavelet = cfg.basis.has_value();
    if (wavelet != (cfg.levels >= 1))
        throw std::invalid_argument("basis 'none' requires levels 0 and vice versa");

    ForecastReport report;
    report.method_label = method_label(wavelet, cfg.evolution.gene_count);
    report.basis_name = wavelet ? basis_name(*cfg.basis) : "none";
    report.levels = cfg.levels;
    report.extension_name = extension_name(cfg.extension);
    report.strict_causal = cfg.strict_causal;
    report.train_fraction = ds.train_fraction;
    report.evolution_config = cfg.evolution;
    report.dataset_name = ds.name;
    report.series_length = ds.values.size();

    // Row geometry comes from the original series; every component has the
    // same length, hence the same windowing and split boundary.
    const WindowedData all_rows = window(ds.values);
    const auto [train_rows, test_rows] = split(all_rows, ds.train_fraction);
    const std::size_t n_train = train_rows.rows.size();
    const std::size_t n_test = test_rows.rows.size();
    for (const TrainingRow& r : train_rows.rows) {
        report.train_indices.push_back(r.target_index);
        report.train_actual.push_back(r.target);
    }
    for (const TrainingRow& r : test_rows.rows) {
        report.test_indices.push_back(r.target_index);
        report.test_actual.push_back(r.target);
    }

    const std::optional<FilterBank> bank =
        wavelet ? std::optional<FilterBank>(make_filter_bank(*cfg.basis)) : std::nullopt;

    // Component series available for training (and, in the default
    // protocol, also for test lags).
    std::vector<std::vector<double>> comp_series;
    if (!wavelet) {
        comp_series.push_back(ds.values);
    } else if (!cfg.strict_causal) {
        comp_series = components(ds.values, *bank, cfg.levels, cfg.extension).components;
    } else {
        // Train prefix: everything up to the last train target.
        const std::size_t prefix_len = n_train + kLagCount;
        const std::span<const double> prefix(ds.values.data(), prefix_len);
        comp_series = components(prefix, *bank, cfg.levels, cfg.extension).components;
    }
    const std::size_t n_components = comp_series.size();

    // Strict-causal test lags: re-decompose the series prefix before each
    // test target, once per step for all components.
    std::vector<std::vector<std::array<double, kLagCount>>> causal_lags;
    if (wavelet && cfg.strict_causal) {
        causal_lags.resize(n_test);
        for (std::size_t t = 0; t < n_test; ++t) {
            const std::size_t target_index = test_rows.rows[t].target_index;
            const std::span<const double> prefix(ds.values.data(), target_index);
            const auto step = components(prefix, *bank, cfg.levels, cfg.extension).components;
            causal_lags[t].resize(n_components);
            for (std::size_t ci = 0; ci < n_components; ++ci)
                for (std::size_t m = 0; m < kLagCount; ++m)
                    causal_lags[t][ci][m] = step[ci][step[ci].size() - kLagCount + m];
        }
    }

    report.train_predicted.assign(n_train, 0.0);
    report.test_predicted.assign(n_test, 0.0);

    for (std::size_t ci = 0; ci < n_components; ++ci) {
        ComponentModel cm;
        cm.component_id = ci;
        cm.component_name = wavelet ? component_label(ci, cfg.levels) : "raw";

        const WindowedData comp_rows = window(comp_series[ci]);
        const WindowedData comp_train = detail::train_slice(comp_rows, n_train);

        EvolutionConfig ecfg = cfg.evolution;
        ecfg.rng_seed = wavelet ? derive_stream_seed(cfg.evolution.rng_seed, ci)
                                : cfg.evolution.rng_seed;
        EvolveOptions eopts;
        if (cfg.progress) {
            const std::string name = cm.component_name;
            eopts.progress = [&cfg, name](std::size_t gen, double fit, const std::string& expr) {
                cfg.progress(name, gen, fit, expr);
            };
        }
        cm.result = evolve(detail::training_set_from(comp_train, cm.component_name), ecfg, eopts);

        // Train-side predictions on the component's own lags.
        cm.train_predictions.reserve(n_train);
        for (const TrainingRow& row : comp_train.rows)
            cm.train_predictions.push_back(detail::predict(cm.result.best_program, row.lags));
        {
            std::vector<double> comp_targets;
            comp_targets.reserve(n_train);
            for (const TrainingRow& row : comp_train.rows) comp_targets.push_back(row.target);
            cm.train_fit_rmse = metrics(cm.train_predictions, comp_targets).rmse;
        }

        // Test-side one-step-ahead predictions from true lagged component
        // values.
        cm.test_predictions.reserve(n_test);
        for (std::size_t t = 0; t < n_test; ++t) {
            const auto& lags = (wavelet && cfg.strict_causal) ? causal_lags[t][ci]
                                                              : comp_rows.rows[n_train + t].lags;
            cm.test_predictions.push_back(detail::predict(cm.result.best_program, lags));
        }

        for (std::size_t t = 0; t < n_train; ++t)
            report.train_predicted[t] += cm.train_predictions[t];
        for (std::size_t t = 0; t < n_test; ++t) report.test_predicted[t] += cm.test_predictions[t];
        report.components.push_back(std::move(cm));
    }

    report.fit = metrics(report.train_predicted, report.train_actual);
    report.prediction = metrics(report.test_predicted, report.test_actual);
    return report;
}

}  // namespace wtgeprp
