// Command-line front end: CSV in, forecast reports out.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "wtgeprp/cli.hpp"

namespace {

using wtgeprp::cli::GridSpec;
using wtgeprp::cli::RunConfig;

void add_common_options(CLI::App* cmd, RunConfig& cfg, std::string& basis_name,
                        std::string& extension_name) {
    cmd->add_option("-i,--input", cfg.input_path, "input CSV file (header row required)")
        ->required();
    cmd->add_option("-c,--column", cfg.column, "value column name")->capture_default_str();
    cmd->add_option("--basis", basis_name, "wavelet basis: haar, db10, sym8, coif5 or none")
        ->capture_default_str();
    cmd->add_option("--levels", cfg.levels, "decomposition depth (0 = no wavelet)")
        ->capture_default_str();
    cmd->add_option("--extension", extension_name, "boundary extension: symmetric or periodic")
        ->capture_default_str();
}

void add_evolution_options(CLI::App* cmd, RunConfig& cfg) {
    auto& e = cfg.evolution;
    cmd->add_option("--train-fraction", cfg.train_fraction, "chronological train share")
        ->capture_default_str();
    cmd->add_option("--pop", e.population_size, "population size")->capture_default_str();
    cmd->add_option("--gens", e.max_generations, "generation budget")->capture_default_str();
    cmd->add_option("--genes", e.gene_count, "normal genes per chromosome (1 = plain GEP)")
        ->capture_default_str();
    cmd->add_option("--head", e.layout.head_len, "gene head length")->capture_default_str();
    cmd->add_option("--tournament", e.tournament_size, "tournament size")->capture_default_str();
    cmd->add_option("--gene-mutation-rate", e.gene_mutation_rate, "normal-gene mutation rate")
        ->capture_default_str();
    cmd->add_option("--home-mutation-rate", e.homeotic_mutation_rate,
                    "homeotic-gene mutation rate")
        ->capture_default_str();
    cmd->add_option("--dc-mutation-rate", e.dc_mutation_rate, "Dc-region mutation rate")
        ->capture_default_str();
    cmd->add_option("--crossover-rate", e.crossover_rate, "one-point crossover rate")
        ->capture_default_str();
    cmd->add_option("--constant-mutation-rate", e.constant_mutation_rate,
                    "per-constant replacement rate")
        ->capture_default_str();
    cmd->add_option("--target-fitness", e.target_fitness, "early-stop fitness threshold")
        ->capture_default_str();
    cmd->add_option("--seed", e.rng_seed, "master RNG seed")->capture_default_str();
    cmd->add_option("--threads", e.threads, "fitness evaluation threads (0 = auto)")
        ->capture_default_str();
    cmd->add_flag("--strict-causal", cfg.strict_causal,
                  "decompose the train prefix only; extend once per test step");
    cmd->add_option("-o,--out", cfg.out_dir, "output directory")->capture_default_str();
}

void resolve_basis(RunConfig& cfg, const std::string& basis_name) {
    if (basis_name == "none") {
        cfg.basis = std::nullopt;
        return;
    }
    const auto b = wtgeprp::parse_basis(basis_name);
    if (!b) throw std::runtime_error("unknown basis '" + basis_name + "'");
    cfg.basis = b;
}

void resolve_extension(RunConfig& cfg, const std::string& extension_name) {
    const auto e = wtgeprp::parse_extension(extension_name);
    if (!e) throw std::runtime_error("unknown extension '" + extension_name + "'");
    cfg.extension = *e;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wavelet-decomposed multicellular GEP time-series forecaster"};
    app.require_subcommand(1);
    // flags > config file > built-in defaults; INI sections are named after
    // the subcommand, e.g. [run] gens=500
    app.set_config("--config", "", "read options from an INI file (one section per subcommand)");

    RunConfig cfg;
    std::string basis_name = "coif5";
    std::string extension_name = "symmetric";

    auto* run = app.add_subcommand("run", "fit and forecast one configuration");
    add_common_options(run, cfg, basis_name, extension_name);
    add_evolution_options(run, cfg);
    run->add_flag("--progress", cfg.progress, "log per-generation best fitness to stderr");

    auto* grid = app.add_subcommand("grid", "sweep bases x levels x seeds");
    GridSpec spec;
    add_common_options(grid, cfg, basis_name, extension_name);
    add_evolution_options(grid, cfg);
    grid->add_option("--bases", spec.bases, "bases to sweep (e.g. haar,db10,sym8,coif5,none)")
        ->delimiter(',')
        ->required();
    grid->add_option("--levels-list", spec.levels, "depths to sweep (e.g. 4,5)")
        ->delimiter(',')
        ->required();
    grid->add_option("--seeds", spec.seeds, "seeds to sweep (e.g. 1,2,3)")
        ->delimiter(',')
        ->required();
    grid->add_option("--jobs", spec.jobs, "concurrent grid cells (0 = auto)")
        ->capture_default_str();

    auto* decomp = app.add_subcommand("decompose", "emit wavelet components only");
    add_common_options(decomp, cfg, basis_name, extension_name);
    std::string decomp_out = "components.csv";
    decomp->add_option("-o,--out", decomp_out, "output CSV path")->capture_default_str();

    auto* decode = app.add_subcommand("decode", "print the expression for a chromosome file");
    std::string chromosome_path;
    decode->add_option("chromosome", chromosome_path, "chromosome text file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        wtgeprp::cli::validate_embedded_banks();
        resolve_basis(cfg, basis_name);
        resolve_extension(cfg, extension_name);
        if (run->parsed()) {
            wtgeprp::cli::run_command(cfg, std::cout);
        } else if (grid->parsed()) {
            const std::size_t ok = wtgeprp::cli::grid_command(spec, cfg, std::cout);
            if (ok == 0) {
                std::cerr << "error: all grid cells failed\n";
                return 1;
            }
        } else if (decomp->parsed()) {
            wtgeprp::cli::decompose_command(cfg, decomp_out, std::cout);
        } else if (decode->parsed()) {
            wtgeprp::cli::decode_command(read_text_file(chromosome_path), std::cout);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
