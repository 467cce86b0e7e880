#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "evonas/bigan.hpp"
#include "evonas/dataset.hpp"
#include "evonas/evaluator.hpp"
#include "evonas/ga.hpp"

namespace evonas {

enum class SearchMethod { proposed, small_set, large_set, random_search };

const char* to_string(SearchMethod m);
SearchMethod method_from_string(const std::string& s);

enum class FitnessKind { surrogate, tinynet };

const char* to_string(FitnessKind k);
FitnessKind fitness_kind_from_string(const std::string& s);

/// Where the trained-fitness backend gets its data: a deterministic
/// synthetic generator or an IDX image/label file pair.
struct DatasetSpec {
    std::string source = "synthetic";  // "synthetic" | "idx"
    SyntheticKind kind = SyntheticKind::rings;
    int n_samples = 240;
    tinynet::InputShape input_shape{1, 8, 8};
    std::uint64_t seed = 0;
    std::string images_path;
    std::string labels_path;
    int limit = 0;  // idx only; <= 0 keeps all samples
    double val_fraction = 0.25;

    void check() const;
};

Dataset load_dataset(const DatasetSpec& spec);

/// Everything one run needs. A run is a pure function of (RunConfig, seed):
/// identical inputs produce identical history files.
struct RunConfig {
    int schema_version = 1;
    SearchMethod method = SearchMethod::proposed;
    GaConfig ga;
    BiGanConfig bigan;
    tinynet::TrainConfig train;
    SearchLimits limits;
    FitnessKind fitness = FitnessKind::surrogate;
    /// Explicit surrogate target; default_surrogate(limits) when absent.
    std::optional<SurrogateSpec> surrogate;
    DatasetSpec dataset;
    std::uint64_t seed = 1;
    std::string out_dir = "run_output";
    int workers = 1;

    /// Throws std::invalid_argument on violated invariants (delegates to the
    /// sub-configs' own checks; budgets must be positive when present).
    void check() const;
};

/// Config-file problem: missing file, bad JSON, unknown key, wrong type, or
/// violated invariant. The message names the offending field path.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parses a config document, rejecting unknown keys. Throws ConfigError
/// with a field-level message ("ga.n_m: ...") on any problem.
RunConfig parse_run_config(const nlohmann::json& j);

/// Reads and parses the file. A missing file throws ConfigError whose
/// message starts with "config not found".
RunConfig load_run_config(const std::string& path);

void to_json(nlohmann::json& j, const SearchLimits& l);
void from_json(const nlohmann::json& j, SearchLimits& l);
void to_json(nlohmann::json& j, const GaConfig& c);
void from_json(const nlohmann::json& j, GaConfig& c);
void to_json(nlohmann::json& j, const DatasetSpec& d);
void from_json(const nlohmann::json& j, DatasetSpec& d);
void to_json(nlohmann::json& j, const RunConfig& c);

namespace tinynet {
void to_json(nlohmann::json& j, const TrainConfig& c);
void from_json(const nlohmann::json& j, TrainConfig& c);
}  // namespace tinynet

}  // namespace evonas
