#pragma once

#include <filesystem>
#include <vector>

#include <nlohmann/json.hpp>

#include "evonas/genome.hpp"

namespace evonas {

/// One generation of a search run. For GA methods this is the full
/// population of that generation (length n_m); for random search each
/// record summarizes a chunk of draws and carries the running-best
/// candidate. elapsed_seconds is wall-clock and deliberately excluded from
/// history.jsonl so reruns with the same seed stay byte-identical; it still
/// reaches curves.csv.
struct GenerationRecord {
    int generation = 0;
    std::vector<Candidate> candidates;
    double best_fitness = 0.0;
    double mean_fitness = 0.0;
    double mean_loss = 0.0;
    long evals_so_far = 0;
    double elapsed_seconds = 0.0;
};

struct RunHistory {
    std::vector<GenerationRecord> records;
    long total_evaluations = 0;
    double total_seconds = 0.0;
    nlohmann::json config_snapshot;  // frozen copy of the run's configuration

    /// Highest-accuracy candidate across all records (earliest wins ties);
    /// nullptr when no candidate carries a fitness report.
    const Candidate* best_candidate() const;
};

void to_json(nlohmann::json& j, const GenerationRecord& r);
void from_json(const nlohmann::json& j, GenerationRecord& r);

/// Writes history.jsonl (one GenerationRecord per line), summary.json, and
/// curves.csv (columns: elapsed_seconds, generation, best_fitness,
/// mean_fitness, mean_loss) into dir, creating it if needed.
void write_run_outputs(const std::filesystem::path& dir, const RunHistory& history);

/// Rebuilds a RunHistory from a run directory. Throws std::runtime_error
/// ("no history found ...") when history.jsonl is absent or empty.
RunHistory load_run_history(const std::filesystem::path& dir);

}  // namespace evonas
