#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "evonas/config.hpp"
#include "evonas/run_history.hpp"

namespace evonas {

/// Instantiates the fitness backend the config names, building the dataset
/// for tinynet fitness and the (explicit or default) target for the
/// surrogate.
std::unique_ptr<FitnessBackend> make_fitness_backend(const RunConfig& cfg);

/// Executes the configured method and returns its history with the config
/// snapshot attached. A run is a pure function of the config; repeating it
/// yields an identical history.
RunHistory run_search(const RunConfig& cfg);

/// run_search plus history.jsonl / summary.json / curves.csv in out_dir.
RunHistory run_search_and_write(const RunConfig& cfg, const std::string& out_dir);

struct CompareRow {
    std::string method;
    std::uint64_t seed = 0;
    double best_fitness = 0.0;
    long evals = 0;
    double seconds = 0.0;
};

struct MethodMedians {
    std::string method;
    double best_fitness = 0.0;
    double evals = 0.0;
    double seconds = 0.0;
};

struct CompareResult {
    std::vector<CompareRow> rows;  // method-major, seeds in order within
    std::vector<MethodMedians> medians;
};

/// Equal-budget head-to-head: every (method, seed) pair runs with the
/// evaluation budget base.ga.budget_evals (required; generations stop
/// mattering) on the same fitness function. Seeds are base.seed,
/// base.seed+1, ..., base.seed+n_seeds-1. Needs >= 2 methods.
CompareResult run_compare(const RunConfig& base, const std::vector<SearchMethod>& methods, int n_seeds);

/// comparison.csv (method,seed,best_fitness,evals,seconds) and medians.csv.
void write_compare_outputs(const std::string& dir, const CompareResult& res);

/// The per-method medians as a fixed-width text table.
std::string format_median_table(const CompareResult& res);

}  // namespace evonas
