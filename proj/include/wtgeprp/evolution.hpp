#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <future>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "wtgeprp/program.hpp"

namespace wtgeprp {

struct EvolutionConfig {
    std::size_t population_size = 100;
    std::size_t max_generations = 2000;
    double gene_mutation_rate = 0.3;      // per individual, normal head+tail
    double homeotic_mutation_rate = 0.2;  // per individual, homeotic head+tail
    double dc_mutation_rate = 0.25;       // per individual, Dc regions
    double crossover_rate = 0.3;          // per selected pair
    double constant_mutation_rate = 0.05; // per constant
    std::size_t tournament_size = 3;
    double target_fitness = 1.0;          // early stop when best >= this
    std::uint64_t rng_seed = 0;
    std::size_t gene_count = 2;
    GeneLayout layout{};
    std::size_t threads = 0;              // fitness evaluation; 0 = hardware
};

inline void validate_config(const EvolutionConfig& cfg) {
    validate_layout(cfg.layout);
    auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!prob(cfg.gene_mutation_rate) || !prob(cfg.homeotic_mutation_rate) ||
        !prob(cfg.dc_mutation_rate) || !prob(cfg.crossover_rate) ||
        !prob(cfg.constant_mutation_rate))
        throw std::invalid_argument("evolution config: rates must be in [0,1]");
    if (cfg.population_size < 2) throw std::invalid_argument("population size must be >= 2");
    if (cfg.tournament_size < 2) throw std::invalid_argument("tournament size must be >= 2");
    if (!(cfg.target_fitness > 0.0 && cfg.target_fitness <= 1.0))
        throw std::invalid_argument("target fitness must be in (0,1]");
    if (cfg.gene_count < 1 || cfg.gene_count > kMaxGenes)
        throw std::invalid_argument("gene count must be in 1..8");
}

struct TrainingRow {
    std::array<double, kLagCount> lags{};
    double target = 0.0;
    std::size_t target_index = 0;  // position of the target in the source series
};

struct TrainingSet {
    std::vector<TrainingRow> rows;
    std::string component_id;
};

// Fitness 1/(1+RMSE) over the training rows; any invalid evaluation maps the
// whole individual to fitness 0.
inline double fitness(const Program& p, const TrainingSet& data) {
    if (data.rows.empty()) throw std::invalid_argument("fitness: empty training set");
    double sq = 0.0;
    for (const TrainingRow& row : data.rows) {
        const auto v = evaluate(p, row.lags);
        if (!v) return 0.0;
        const double d = *v - row.target;
        sq += d * d;
    }
    const double rmse = std::sqrt(sq / static_cast<double>(data.rows.size()));
    if (!std::isfinite(rmse)) return 0.0;
    return 1.0 / (1.0 + rmse);
}

// Championship selection: `size` uniform draws with replacement, winner is
// the highest fitness, ties broken by lowest population index.
inline std::size_t tournament_select(std::span<const double> fitnesses, std::size_t size,
                                     Rng& rng) {
    if (fitnesses.empty()) throw std::invalid_argument("tournament: empty population");
    std::size_t best = rng.next_below(fitnesses.size());
    for (std::size_t i = 1; i < size; ++i) {
        const std::size_t cand = rng.next_below(fitnesses.size());
        if (fitnesses[cand] > fitnesses[best] ||
            (fitnesses[cand] == fitnesses[best] && cand < best))
            best = cand;
    }
    return best;
}

namespace detail {

// Two flips at distinct positions of a pooled region of length n.
inline std::pair<std::size_t, std::size_t> two_positions(std::size_t n, Rng& rng) {
    const std::size_t p1 = rng.next_below(n);
    std::size_t p2 = rng.next_below(n - 1);
    if (p2 >= p1) ++p2;
    return {p1, p2};
}

}  // namespace detail

// Region-respecting point mutation.  Table rates are per-individual
// application probabilities; a fired operator applies two symbol flips at
// distinct positions of each of its regions (every normal gene's head+tail
// for the gene operator, every Dc block for the Dc operator, the homeotic
// head+tail for the homeotic operator).  Constants are re-drawn
// independently with constant_mutation_rate.  With a single normal gene the
// homeotic gene stays pinned to its trivial form.
inline Chromosome mutate(const Chromosome& c, const EvolutionConfig& cfg, Rng& rng) {
    Chromosome out = c;
    const GeneLayout& lo = c.layout;
    const std::size_t k = c.gene_count();
    const std::size_t ht = lo.head_len + lo.tail_len();

    if (rng.chance(cfg.gene_mutation_rate)) {
        for (NormalGene& g : out.genes) {
            const auto [p1, p2] = detail::two_positions(ht, rng);
            for (std::size_t p : {p1, p2}) {
                if (p < lo.head_len)
                    g.head[p] = detail::random_head_symbol(rng);
                else
                    g.tail[p - lo.head_len] = detail::random_tail_symbol(rng);
            }
        }
    }
    if (rng.chance(cfg.dc_mutation_rate)) {
        for (NormalGene& g : out.genes) {
            const auto [p1, p2] = detail::two_positions(lo.dc_len(), rng);
            for (std::size_t p : {p1, p2})
                g.dc[p] = detail::random_dc_symbol(lo.const_count, rng);
        }
    }
    if (k >= 2 && rng.chance(cfg.homeotic_mutation_rate)) {
        const auto [p1, p2] = detail::two_positions(lo.home_symbols(), rng);
        for (std::size_t p : {p1, p2}) {
            if (p < lo.home_head_len)
                out.homeotic.head[p] = detail::random_home_head_symbol(k, rng);
            else
                out.homeotic.tail[p - lo.home_head_len] = detail::random_home_tail_symbol(k, rng);
        }
    }
    for (NormalGene& g : out.genes)
        for (double& v : g.constants)
            if (rng.chance(cfg.constant_mutation_rate)) v = rng.next_real(kConstMin, kConstMax);
    return out;
}

namespace detail {

inline std::size_t total_symbols(const Chromosome& c) {
    return c.gene_count() * c.layout.gene_symbols() + c.layout.home_symbols();
}

// Symbol at a linear position over head|tail|dc per gene, then homeotic
// head|tail.
inline char& symbol_at(Chromosome& c, std::size_t idx) {
    const GeneLayout& lo = c.layout;
    const std::size_t gs = lo.gene_symbols();
    if (idx < c.gene_count() * gs) {
        NormalGene& g = c.genes[idx / gs];
        std::size_t off = idx % gs;
        if (off < lo.head_len) return g.head[off];
        off -= lo.head_len;
        if (off < lo.tail_len()) return g.tail[off];
        return g.dc[off - lo.tail_len()];
    }
    std::size_t off = idx - c.gene_count() * gs;
    if (off < lo.home_head_len) return c.homeotic.head[off];
    return c.homeotic.tail[off - lo.home_head_len];
}

inline char symbol_at(const Chromosome& c, std::size_t idx) {
    return symbol_at(const_cast<Chromosome&>(c), idx);
}

}  // namespace detail

// One-point crossover on the linearized chromosome (normal-gene regions in
// order, homeotic gene last).  Symbols before `cut` come from the first
// parent, the rest from the second; a gene's constant array travels with its
// trailing symbol.  cut = 0 swaps the parents whole.
inline std::pair<Chromosome, Chromosome> crossover_at(const Chromosome& a, const Chromosome& b,
                                                      std::size_t cut) {
    if (a.layout != b.layout || a.gene_count() != b.gene_count())
        throw std::invalid_argument("crossover: chromosome layouts differ");
    const std::size_t total = detail::total_symbols(a);
    if (cut > total) throw std::invalid_argument("crossover: cut position out of range");
    Chromosome c1 = a, c2 = b;
    for (std::size_t idx = cut; idx < total; ++idx) {
        detail::symbol_at(c1, idx) = detail::symbol_at(b, idx);
        detail::symbol_at(c2, idx) = detail::symbol_at(a, idx);
    }
    const std::size_t gs = a.layout.gene_symbols();
    for (std::size_t i = 0; i < a.gene_count(); ++i) {
        const std::size_t last = (i + 1) * gs - 1;
        if (cut <= last) {
            c1.genes[i].constants = b.genes[i].constants;
            c2.genes[i].constants = a.genes[i].constants;
        }
    }
    return {std::move(c1), std::move(c2)};
}

inline std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b,
                                                   Rng& rng) {
    return crossover_at(a, b, rng.next_below(detail::total_symbols(a)));
}

struct EvolutionResult {
    Chromosome best;
    Program best_program;
    double best_fitness = 0.0;
    std::vector<double> fitness_history;  // best of each generation, non-decreasing
    std::size_t generations_run = 0;      // breeding steps beyond the initial population
};

struct EvolveOptions {
    // Called once per generation with (generation, best fitness, best
    // expression).
    std::function<void(std::size_t, double, const std::string&)> progress;
    // Diagnostic hook receiving every generation's full population.
    std::function<void(std::size_t, std::span<const Chromosome>)> population_hook;
    // Individuals planted into the initial population (truncated to the
    // population size; the remainder is random).
    std::vector<Chromosome> initial_population;
};

namespace detail {

// Decode + fitness for the whole population, results in index order.
// Evaluation is pure, so chunked threads cannot change results.
inline std::vector<double> evaluate_population(const std::vector<Chromosome>& pop,
                                               const TrainingSet& data, std::size_t threads) {
    std::vector<double> fits(pop.size());
    std::size_t want = threads ? threads : std::thread::hardware_concurrency();
    want = std::min<std::size_t>(std::max<std::size_t>(want, 1), pop.size());
    auto run_range = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) fits[i] = fitness(decode_chromosome(pop[i]), data);
    };
    if (want <= 1 || pop.size() < 16) {
        run_range(0, pop.size());
        return fits;
    }
    std::vector<std::future<void>> tasks;
    for (std::size_t t = 0; t < want; ++t) {
        const std::size_t lo = pop.size() * t / want;
        const std::size_t hi = pop.size() * (t + 1) / want;
        tasks.push_back(std::async(std::launch::async, run_range, lo, hi));
    }
    for (auto& task : tasks) task.get();
    return fits;
}

inline std::size_t best_index(std::span<const double> fits) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < fits.size(); ++i)
        if (fits[i] > fits[best]) best = i;
    return best;
}

}  // namespace detail

// The evolutionary loop: evaluate, record the best, copy it unchanged into
// the next generation (elitism), fill the remainder by tournament selection,
// crossover with probability crossover_rate, then mutation.  Stops when the
// best fitness reaches target_fitness or after max_generations breeding
// steps.  Fully deterministic given cfg.rng_seed.
inline EvolutionResult evolve(const TrainingSet& data, const EvolutionConfig& cfg,
                              const EvolveOptions& options = {}) {
    validate_config(cfg);
    if (data.rows.empty()) throw std::invalid_argument("evolve: empty training set");
    for (const TrainingRow& row : data.rows) {
        if (!std::isfinite(row.target)) throw std::invalid_argument("evolve: non-finite target");
        for (double v : row.lags)
            if (!std::isfinite(v)) throw std::invalid_argument("evolve: non-finite lag value");
    }

    Rng rng(cfg.rng_seed);
    std::vector<Chromosome> pop;
    pop.reserve(cfg.population_size);
    for (const Chromosome& c : options.initial_population) {
        if (pop.size() == cfg.population_size) break;
        if (!is_structurally_valid(c) || c.layout != cfg.layout ||
            c.gene_count() != cfg.gene_count)
            throw std::invalid_argument("evolve: planted individual is invalid for this config");
        pop.push_back(c);
    }
    while (pop.size() < cfg.population_size)
        pop.push_back(random_chromosome(cfg.layout, cfg.gene_count, rng));

    EvolutionResult result;
    std::size_t generation = 0;
    while (true) {
        const std::vector<double> fits = detail::evaluate_population(pop, data, cfg.threads);
        const std::size_t best = detail::best_index(fits);
        result.fitness_history.push_back(fits[best]);
        if (options.population_hook) options.population_hook(generation, pop);
        if (options.progress)
            options.progress(generation, fits[best], to_infix(decode_chromosome(pop[best])));

        if (fits[best] >= cfg.target_fitness || generation == cfg.max_generations) {
            result.best = pop[best];
            result.best_program = decode_chromosome(pop[best]);
            result.best_fitness = fits[best];
            result.generations_run = generation;
            return result;
        }

        std::vector<Chromosome> next;
        next.reserve(cfg.population_size);
        next.push_back(pop[best]);  // elite, unchanged
        while (next.size() < cfg.population_size) {
            const std::size_t i1 = tournament_select(fits, cfg.tournament_size, rng);
            const std::size_t i2 = tournament_select(fits, cfg.tournament_size, rng);
            Chromosome c1 = pop[i1];
            Chromosome c2 = pop[i2];
            if (rng.chance(cfg.crossover_rate)) std::tie(c1, c2) = crossover(pop[i1], pop[i2], rng);
            next.push_back(mutate(c1, cfg, rng));
            if (next.size() < cfg.population_size) next.push_back(mutate(c2, cfg, rng));
        }
        pop = std::move(next);
        ++generation;
    }
}

}  // namespace wtgeprp
