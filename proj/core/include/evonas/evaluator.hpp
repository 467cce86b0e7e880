#pragma once

#include <memory>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "evonas/dataset.hpp"
#include "evonas/genome.hpp"

namespace evonas {

/// Analytic stand-in for trained accuracy with a known global optimum:
///   score = w_cont * exp(-mean over ACTIVE layers of ((count-target)/width)^2)
///         + w_disc * (fraction of the 5C+4D discrete gene fields matching
///                     target_genome)
/// Deterministic, in [0,1], and exactly 1 iff the candidate matches the
/// target on every discrete field and every active count.
struct SurrogateSpec {
    Genome target_genome;
    ContinuousParams target_counts;
    std::vector<double> filter_widths;  // one per potential conv layer
    std::vector<double> neuron_widths;  // one per potential dense layer
    double w_cont = 0.7;
    double w_disc = 0.3;

    /// Throws std::invalid_argument on non-positive widths, length
    /// mismatches, or weights not summing to 1.
    void check(const SearchLimits& limits) const;
};

double surrogate_fitness(const Candidate& candidate, const SurrogateSpec& spec);

/// A reproducible default target for a given search space: every layer
/// active, fields cycling through their choice sets, filter counts at 70%
/// of range, neuron counts at 25%, widths at 25% of range.
SurrogateSpec default_surrogate(const SearchLimits& limits);

/// Builds the candidate's network, trains it with early stopping, and
/// reports best validation accuracy as fitness. Build failures (e.g. conv
/// kernel exceeding the input) yield accuracy 0 with a diagnostic instead
/// of an exception, so evolution tolerates lethal genomes.
FitnessReport evaluate_trained(const Candidate& candidate, const Dataset& dataset, const tinynet::TrainConfig& cfg,
                               Rng& rng);

/// Fitness-function abstraction consumed by the search loops. Calls on
/// distinct candidates are independent; each receives its own rng stream
/// derived from (run seed, generation, candidate index), so evaluation
/// order never affects results.
class FitnessBackend {
public:
    virtual ~FitnessBackend() = default;
    virtual FitnessReport evaluate(const Candidate& candidate, Rng& rng) = 0;
    virtual const char* name() const = 0;
};

class SurrogateBackend final : public FitnessBackend {
public:
    SurrogateBackend(SurrogateSpec spec, const SearchLimits& limits);
    FitnessReport evaluate(const Candidate& candidate, Rng& rng) override;
    const char* name() const override { return "surrogate"; }
    const SurrogateSpec& spec() const { return spec_; }

private:
    SurrogateSpec spec_;
};

class TrainedBackend final : public FitnessBackend {
public:
    TrainedBackend(Dataset dataset, tinynet::TrainConfig cfg);
    FitnessReport evaluate(const Candidate& candidate, Rng& rng) override;
    const char* name() const override { return "tinynet"; }
    const Dataset& dataset() const { return dataset_; }

private:
    Dataset dataset_;
    tinynet::TrainConfig cfg_;
};

void to_json(nlohmann::json& j, const SurrogateSpec& s);
void from_json(const nlohmann::json& j, SurrogateSpec& s);

}  // namespace evonas
