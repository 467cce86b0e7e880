#pragma once

#include <string>

#include "evonas/ga.hpp"

namespace evonas {

enum class BaselineKind { small_set, large_set, random_search };

const char* to_string(BaselineKind k);
BaselineKind baseline_kind_from_string(const std::string& s);

/// Where baseline methods draw their continuous counts. small_set picks
/// uniformly from discrete choice lists; large_set (and random_search,
/// which reuses its sampler) picks any integer in the ranges.
struct BaselineVariant {
    BaselineKind kind = BaselineKind::small_set;
    std::vector<int> neuron_choices{16, 32, 64, 128, 256, 512, 1024, 2048, 4096};
    std::vector<int> filter_choices{1, 4, 16, 64, 256};
    std::pair<int, int> neuron_range{16, 4096};
    std::pair<int, int> filter_range{1, 256};

    static BaselineVariant small_set();
    static BaselineVariant large_set();
    /// large_set with ranges taken from the search limits' bounds.
    static BaselineVariant large_set_from(const SearchLimits& limits);

    void check() const;
};

/// One count per potential conv and dense layer, drawn per the variant.
ContinuousParams sample_counts(const BaselineVariant& variant, const SearchLimits& limits, Rng& rng);

/// Baseline GAs treat each count as an extra gene of its layer block:
/// 6 slots per conv layer (the 5 discrete fields plus the filter count,
/// in that order) and 5 per dense layer.
int baseline_slot_count(const SearchLimits& limits);

struct BaselineSlotRef {
    LayerKind kind = LayerKind::conv;
    int layer = 1;         // 1-based
    bool is_count = false;  // true: the layer's filter/neuron count gene
    SlotField field = SlotField::exists;  // valid when !is_count

    bool operator==(const BaselineSlotRef&) const = default;
};

/// 1-based index in [1, 6C+5D]; throws std::out_of_range otherwise.
BaselineSlotRef locate_baseline_slot(int index, const SearchLimits& limits);

/// The evolve loop with counts living on the genome: initial counts come
/// from sample_counts, crossover splices them inside their layer blocks,
/// and mutation draws over the 6C+5D slot space (count slots resample via
/// the variant's sampler, without excluding the current value).
RunHistory run_baseline_ga(const BaselineVariant& variant, const GaConfig& cfg, const SearchLimits& limits,
                           FitnessBackend& fitness, std::uint64_t seed, const EvolveOptions& opts = {});

/// budget_evals independent uniform candidates (genomes from random_genome,
/// counts from the variant's sampler). The history carries one record per
/// chunk of draws with the running-best candidate; best_fitness is
/// non-decreasing.
RunHistory run_random_search(long budget_evals, const SearchLimits& limits, const BaselineVariant& variant_for_counts,
                             FitnessBackend& fitness, std::uint64_t seed, const EvolveOptions& opts = {});

}  // namespace evonas
