#pragma once

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "wtgeprp/csv.hpp"
#include "wtgeprp/forecast.hpp"

namespace wtgeprp::cli {

using json = nlohmann::ordered_json;

// Machine files print doubles with 17 significant digits (round-trip exact).
inline std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Human summaries print 3 decimals.
inline std::string f3(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

struct RunConfig {
    std::string input_path;
    std::string column = "value";
    std::optional<Basis> basis = Basis::coif5;
    std::size_t levels = 4;
    Extension extension = Extension::symmetric;
    double train_fraction = 0.85;
    bool strict_causal = false;
    bool progress = false;  // per-generation log to stderr
    EvolutionConfig evolution;
    std::string out_dir = "out";
};

inline void validate_run_config(const RunConfig& cfg) {
    if (cfg.basis.has_value() != (cfg.levels >= 1))
        throw std::runtime_error("basis 'none' requires --levels 0 and vice versa");
    if (cfg.levels > 5) throw std::runtime_error("--levels must be 0..5");
    if (!(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0))
        throw std::runtime_error("--train-fraction must be in (0,1)");
    if (cfg.input_path.empty()) throw std::runtime_error("--input is required");
}

// Validate every embedded filter bank; run once at CLI startup.
inline void validate_embedded_banks() {
    for (Basis b : kAllBases) (void)make_filter_bank(b);
}

inline json evolution_config_json(const EvolutionConfig& e) {
    return json{{"population_size", e.population_size},
                {"max_generations", e.max_generations},
                {"gene_mutation_rate", e.gene_mutation_rate},
                {"homeotic_mutation_rate", e.homeotic_mutation_rate},
                {"dc_mutation_rate", e.dc_mutation_rate},
                {"crossover_rate", e.crossover_rate},
                {"constant_mutation_rate", e.constant_mutation_rate},
                {"tournament_size", e.tournament_size},
                {"target_fitness", e.target_fitness},
                {"seed", e.rng_seed},
                {"gene_count", e.gene_count},
                {"gene_head_length", e.layout.head_len},
                {"homeotic_head_length", e.layout.home_head_len},
                {"constant_array_length", e.layout.const_count}};
}

inline json report_to_json(const ForecastReport& r, const RunConfig& cfg,
                           const SeriesSummary& summary) {
    json j;
    j["config"] = {{"input", cfg.input_path},
                   {"column", cfg.column},
                   {"method", r.method_label},
                   {"basis", r.basis_name},
                   {"levels", r.levels},
                   {"extension", r.extension_name},
                   {"strict_causal", r.strict_causal},
                   {"train_fraction", r.train_fraction},
                   {"evolution", evolution_config_json(r.evolution_config)}};
    j["dataset"] = {{"name", r.dataset_name},
                    {"length", summary.length},
                    {"min", summary.min},
                    {"max", summary.max},
                    {"mean", summary.mean}};
    j["fit"] = {{"rmse", r.fit.rmse}, {"mae", r.fit.mae}};
    j["prediction"] = {{"rmse", r.prediction.rmse}, {"mae", r.prediction.mae}};
    json comps = json::array();
    for (const ComponentModel& cm : r.components) {
        comps.push_back({{"name", cm.component_name},
                         {"best_fitness", cm.result.best_fitness},
                         {"train_fit_rmse", cm.train_fit_rmse},
                         {"generations_run", cm.result.generations_run},
                         {"expression", to_infix(cm.result.best_program)},
                         {"chromosome", to_text(cm.result.best)},
                         {"fitness_history", cm.result.fitness_history},
                         {"test_predictions", cm.test_predictions}});
    }
    j["components"] = comps;
    j["train"] = {{"indices", r.train_indices},
                  {"actual", r.train_actual},
                  {"predicted", r.train_predicted}};
    j["test"] = {{"indices", r.test_indices},
                 {"actual", r.test_actual},
                 {"predicted", r.test_predicted}};
    return j;
}

inline void write_predictions_csv(const std::string& path, const ForecastReport& r,
                                  const std::vector<std::string>& labels) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "index";
    if (!labels.empty()) out << ",label";
    out << ",partition,actual,predicted";
    for (const ComponentModel& cm : r.components) out << ',' << cm.component_name;
    out << '\n';
    auto emit = [&](std::size_t row, bool is_test) {
        const auto& idx = is_test ? r.test_indices : r.train_indices;
        const auto& actual = is_test ? r.test_actual : r.train_actual;
        const auto& pred = is_test ? r.test_predicted : r.train_predicted;
        out << idx[row];
        if (!labels.empty()) out << ',' << labels[idx[row]];
        out << ',' << (is_test ? "test" : "train") << ',' << g17(actual[row]) << ','
            << g17(pred[row]);
        for (const ComponentModel& cm : r.components)
            out << ',' << g17(is_test ? cm.test_predictions[row] : cm.train_predictions[row]);
        out << '\n';
    };
    for (std::size_t i = 0; i < r.train_indices.size(); ++i) emit(i, false);
    for (std::size_t i = 0; i < r.test_indices.size(); ++i) emit(i, true);
}

inline void write_models_txt(const std::string& path, const ForecastReport& r) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    for (const ComponentModel& cm : r.components) {
        out << "# component " << cm.component_name << '\n';
        out << "best_fitness " << g17(cm.result.best_fitness) << '\n';
        out << "train_fit_rmse " << g17(cm.train_fit_rmse) << '\n';
        out << "generations_run " << cm.result.generations_run << '\n';
        out << "expression " << to_infix(cm.result.best_program) << '\n';
        out << to_text(cm.result.best) << '\n';
    }
}

inline void print_summary(std::ostream& out, const ForecastReport& r) {
    out << "method            dataset               basis   levels  fit_rmse    fit_mae     "
           "pred_rmse   pred_mae\n";
    std::ostringstream row;
    auto pad = [&](const std::string& s, std::size_t w) {
        row << s;
        for (std::size_t i = s.size(); i < w; ++i) row << ' ';
    };
    pad(r.method_label, 18);
    pad(r.dataset_name.substr(0, 20), 22);
    pad(r.basis_name, 8);
    pad(std::to_string(r.levels), 8);
    pad(f3(r.fit.rmse), 12);
    pad(f3(r.fit.mae), 12);
    pad(f3(r.prediction.rmse), 12);
    row << f3(r.prediction.mae);
    out << row.str() << '\n';
}

// `run`: execute the pipeline, write report.json / predictions.csv /
// models.txt into the output directory and print a summary row.
inline ForecastReport run_command(const RunConfig& cfg, std::ostream& out) {
    validate_run_config(cfg);
    SeriesDataset ds = load_csv(cfg.input_path, cfg.column);
    ds.train_fraction = cfg.train_fraction;

    ForecastConfig fc;
    fc.basis = cfg.basis;
    fc.levels = cfg.levels;
    fc.extension = cfg.extension;
    fc.strict_causal = cfg.strict_causal;
    fc.evolution = cfg.evolution;
    if (cfg.progress) {
        fc.progress = [](const std::string& component, std::size_t gen, double fit,
                         const std::string& expr) {
            if (gen % 100 != 0) return;
            std::cerr << component << " gen " << gen << " fitness " << f3(fit) << "  " << expr
                      << '\n';
        };
    }

    const ForecastReport report = run_wtgeprp(ds, fc);

    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    const json j = report_to_json(report, cfg, summarize(ds.values));
    {
        std::ofstream jf(fs::path(cfg.out_dir) / "report.json");
        if (!jf) throw std::runtime_error("cannot write report.json in '" + cfg.out_dir + "'");
        jf << j.dump(2) << '\n';
    }
    write_predictions_csv((fs::path(cfg.out_dir) / "predictions.csv").string(), report,
                          ds.labels);
    write_models_txt((fs::path(cfg.out_dir) / "models.txt").string(), report);
    print_summary(out, report);
    return report;
}

struct GridSpec {
    std::vector<std::string> bases;      // basis names, "none" allowed
    std::vector<std::size_t> levels;     // paired with any basis except "none"
    std::vector<std::uint64_t> seeds;
    std::size_t jobs = 0;                // 0 = hardware concurrency
};

struct GridCell {
    std::string basis;
    std::size_t levels = 0;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    Metrics fit, prediction;
    double wall_time_s = 0.0;
    bool best = false;
};

// `grid`: sweep bases x levels x seeds, one pipeline run per cell.  Cells run
// concurrently (each owns its seed); failures are recorded and skipped.
// Writes grid.csv and flags the argmin-prediction-RMSE cell.  Returns the
// number of successful cells.
inline std::size_t grid_command(const GridSpec& spec, const RunConfig& base, std::ostream& out) {
    if (spec.bases.empty() || spec.levels.empty() || spec.seeds.empty())
        throw std::runtime_error("grid: bases, levels and seeds must all be nonempty");
    for (const std::string& b : spec.bases)
        if (b != "none" && !parse_basis(b))
            throw std::runtime_error("grid: unknown basis '" + b + "'");

    SeriesDataset ds = load_csv(base.input_path, base.column);
    ds.train_fraction = base.train_fraction;

    // Cell list sorted by (basis, levels, seed); "none" collapses levels to 0.
    std::vector<GridCell> cells;
    {
        std::vector<std::string> bases = spec.bases;
        std::sort(bases.begin(), bases.end());
        std::vector<std::size_t> levels = spec.levels;
        std::sort(levels.begin(), levels.end());
        std::vector<std::uint64_t> seeds = spec.seeds;
        std::sort(seeds.begin(), seeds.end());
        for (const std::string& b : bases) {
            std::vector<std::size_t> cell_levels =
                (b == "none") ? std::vector<std::size_t>{0} : levels;
            for (std::size_t lv : cell_levels)
                for (std::uint64_t seed : seeds) {
                    GridCell cell;
                    cell.basis = b;
                    cell.levels = lv;
                    cell.seed = seed;
                    cells.push_back(std::move(cell));
                }
        }
    }

    std::size_t jobs = spec.jobs ? spec.jobs : std::thread::hardware_concurrency();
    jobs = std::min<std::size_t>(std::max<std::size_t>(jobs, 1), cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            GridCell& cell = cells[i];
            const auto t0 = std::chrono::steady_clock::now();
            try {
                ForecastConfig fc;
                fc.basis = (cell.basis == "none") ? std::nullopt : parse_basis(cell.basis);
                fc.levels = cell.levels;
                fc.extension = base.extension;
                fc.strict_causal = base.strict_causal;
                fc.evolution = base.evolution;
                fc.evolution.rng_seed = cell.seed;
                const ForecastReport r = run_wtgeprp(ds, fc);
                cell.fit = r.fit;
                cell.prediction = r.prediction;
                cell.ok = true;
            } catch (const std::exception& e) {
                cell.error = e.what();
            }
            cell.wall_time_s =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();

    std::size_t ok_count = 0;
    std::size_t best_idx = cells.size();
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (!cells[i].ok) continue;
        ++ok_count;
        if (best_idx == cells.size() || cells[i].prediction.rmse < cells[best_idx].prediction.rmse)
            best_idx = i;
    }
    if (best_idx < cells.size()) cells[best_idx].best = true;

    namespace fs = std::filesystem;
    fs::create_directories(base.out_dir);
    const std::string grid_path = (fs::path(base.out_dir) / "grid.csv").string();
    {
        std::ofstream gf(grid_path);
        if (!gf) throw std::runtime_error("cannot write '" + grid_path + "'");
        gf << "basis,levels,seed,fit_rmse,fit_mae,pred_rmse,pred_mae,wall_time_s,status,best\n";
        for (const GridCell& c : cells) {
            gf << c.basis << ',' << c.levels << ',' << c.seed << ',';
            if (c.ok)
                gf << g17(c.fit.rmse) << ',' << g17(c.fit.mae) << ',' << g17(c.prediction.rmse)
                   << ',' << g17(c.prediction.mae);
            else
                gf << ",,,";
            std::string status = c.ok ? "ok" : c.error;
            for (char& ch : status)
                if (ch == ',' || ch == '\n') ch = ';';
            gf << ',' << g17(c.wall_time_s) << ',' << status << ',' << (c.best ? 1 : 0) << '\n';
        }
    }

    for (const GridCell& c : cells) {
        out << c.basis << " levels=" << c.levels << " seed=" << c.seed << ": ";
        if (c.ok)
            out << "pred_rmse=" << f3(c.prediction.rmse) << " pred_mae=" << f3(c.prediction.mae)
                << (c.best ? "  <-- best" : "") << '\n';
        else
            out << "error: " << c.error << '\n';
    }
    if (best_idx < cells.size())
        out << "best cell: basis=" << cells[best_idx].basis
            << " levels=" << cells[best_idx].levels << " seed=" << cells[best_idx].seed
            << " pred_rmse=" << f3(cells[best_idx].prediction.rmse) << '\n';
    return ok_count;
}

// `decompose`: write the additive components of the input series.
inline void decompose_command(const RunConfig& cfg, const std::string& out_path,
                              std::ostream& out) {
    if (!cfg.basis || cfg.levels < 1)
        throw std::runtime_error("decompose: needs a wavelet basis and levels >= 1");
    const SeriesDataset ds = load_csv(cfg.input_path, cfg.column);
    const FilterBank bank = make_filter_bank(*cfg.basis);
    const Decomposition dec = components(ds.values, bank, cfg.levels, cfg.extension);

    std::ofstream cf(out_path);
    if (!cf) throw std::runtime_error("cannot write '" + out_path + "'");
    cf << "index";
    if (!ds.labels.empty()) cf << ",label";
    cf << ",original";
    for (std::size_t c = 0; c < dec.components.size(); ++c)
        cf << ',' << component_label(c, dec.levels);
    cf << '\n';
    for (std::size_t i = 0; i < ds.values.size(); ++i) {
        cf << i;
        if (!ds.labels.empty()) cf << ',' << ds.labels[i];
        cf << ',' << g17(ds.values[i]);
        for (const auto& comp : dec.components) cf << ',' << g17(comp[i]);
        cf << '\n';
    }
    out << "wrote " << dec.components.size() << " components (" << basis_name(*cfg.basis)
        << ", " << cfg.levels << " levels) to " << out_path << '\n';
}

// `decode`: print the expression encoded by a serialized chromosome.
inline void decode_command(const std::string& chromosome_text, std::ostream& out) {
    const Chromosome c = chromosome_from_text(chromosome_text);
    const Program p = decode_chromosome(c);
    for (std::size_t i = 0; i < p.sub_trees.size(); ++i)
        out << "gene " << i << ": " << to_infix(p.sub_trees[i]) << '\n';
    out << "expression: " << to_infix(p) << '\n';
}

}  // namespace wtgeprp::cli
