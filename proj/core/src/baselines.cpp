#include "evonas/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <stdexcept>

#include "evonas/workers.hpp"

namespace evonas {

const char* to_string(BaselineKind k) {
    switch (k) {
        case BaselineKind::small_set: return "small_set";
        case BaselineKind::large_set: return "large_set";
        case BaselineKind::random_search: return "random_search";
    }
    return "?";
}

BaselineKind baseline_kind_from_string(const std::string& s) {
    if (s == "small_set") return BaselineKind::small_set;
    if (s == "large_set") return BaselineKind::large_set;
    if (s == "random_search" || s == "random") return BaselineKind::random_search;
    throw std::invalid_argument("unknown baseline kind: " + s);
}

BaselineVariant BaselineVariant::small_set() {
    BaselineVariant v;
    v.kind = BaselineKind::small_set;
    return v;
}

BaselineVariant BaselineVariant::large_set() {
    BaselineVariant v;
    v.kind = BaselineKind::large_set;
    return v;
}

BaselineVariant BaselineVariant::large_set_from(const SearchLimits& limits) {
    BaselineVariant v;
    v.kind = BaselineKind::large_set;
    v.filter_range = limits.filter_bounds;
    v.neuron_range = limits.neuron_bounds;
    return v;
}

void BaselineVariant::check() const {
    if (kind == BaselineKind::small_set) {
        if (neuron_choices.empty() || filter_choices.empty()) {
            throw std::invalid_argument("small_set needs non-empty choice lists");
        }
        for (int c : neuron_choices) {
            if (c < 1) throw std::invalid_argument("neuron choices must be >= 1");
        }
        for (int c : filter_choices) {
            if (c < 1) throw std::invalid_argument("filter choices must be >= 1");
        }
    } else {
        if (neuron_range.first < 1 || neuron_range.first > neuron_range.second ||
            filter_range.first < 1 || filter_range.first > filter_range.second) {
            throw std::invalid_argument("count ranges must satisfy 1 <= lo <= hi");
        }
    }
}

namespace {

int sample_filter(const BaselineVariant& v, Rng& rng) {
    if (v.kind == BaselineKind::small_set) {
        std::uniform_int_distribution<std::size_t> d(0, v.filter_choices.size() - 1);
        return v.filter_choices[d(rng)];
    }
    std::uniform_int_distribution<int> d(v.filter_range.first, v.filter_range.second);
    return d(rng);
}

int sample_neuron(const BaselineVariant& v, Rng& rng) {
    if (v.kind == BaselineKind::small_set) {
        std::uniform_int_distribution<std::size_t> d(0, v.neuron_choices.size() - 1);
        return v.neuron_choices[d(rng)];
    }
    std::uniform_int_distribution<int> d(v.neuron_range.first, v.neuron_range.second);
    return d(rng);
}

}  // namespace

ContinuousParams sample_counts(const BaselineVariant& variant, const SearchLimits& limits, Rng& rng) {
    ContinuousParams p;
    for (int i = 0; i < limits.max_conv_layers; ++i) p.filters.push_back(sample_filter(variant, rng));
    for (int i = 0; i < limits.max_dense_layers; ++i) p.neurons.push_back(sample_neuron(variant, rng));
    return p;
}

int baseline_slot_count(const SearchLimits& limits) {
    return 6 * limits.max_conv_layers + 5 * limits.max_dense_layers;
}

BaselineSlotRef locate_baseline_slot(int index, const SearchLimits& limits) {
    if (index < 1 || index > baseline_slot_count(limits)) {
        throw std::out_of_range("baseline slot index " + std::to_string(index) + " outside [1, " +
                                std::to_string(baseline_slot_count(limits)) + "]");
    }
    BaselineSlotRef ref;
    int i = index - 1;
    if (i < 6 * limits.max_conv_layers) {
        ref.kind = LayerKind::conv;
        ref.layer = i / 6 + 1;
        const int f = i % 6;
        static constexpr SlotField conv_fields[] = {SlotField::exists, SlotField::kernel_size, SlotField::activation,
                                                    SlotField::batch_norm, SlotField::max_pool};
        if (f < 5) {
            ref.field = conv_fields[f];
        } else {
            ref.is_count = true;
        }
        return ref;
    }
    i -= 6 * limits.max_conv_layers;
    ref.kind = LayerKind::dense;
    ref.layer = i / 5 + 1;
    const int f = i % 5;
    static constexpr SlotField dense_fields[] = {SlotField::exists, SlotField::activation, SlotField::batch_norm,
                                                 SlotField::dropout};
    if (f < 4) {
        ref.field = dense_fields[f];
    } else {
        ref.is_count = true;
    }
    return ref;
}

namespace {

/// Counts live on the genome: sampled at init, spliced by crossover, and
/// resampled (no exclusion) when mutation lands on a count slot.
class SetCountPolicy final : public CountPolicy {
public:
    SetCountPolicy(BaselineVariant variant, const SearchLimits& limits)
        : variant_(std::move(variant)), limits_(limits) {
        variant_.check();
    }

    void stamp_initial(Candidate& c, Rng& rng) override { c.params = sample_counts(variant_, limits_, rng); }

    long refresh(std::vector<Candidate>&, const Candidate*, int) override { return 0; }

    void mutate_candidate(Candidate& c, Rng& rng) override {
        std::uniform_int_distribution<int> d(1, baseline_slot_count(limits_));
        const BaselineSlotRef ref = locate_baseline_slot(d(rng), limits_);
        if (ref.is_count) {
            const auto idx = static_cast<std::size_t>(ref.layer - 1);
            if (ref.kind == LayerKind::conv) {
                c.params.filters[idx] = sample_filter(variant_, rng);
            } else {
                c.params.neurons[idx] = sample_neuron(variant_, rng);
            }
        } else {
            c.genome = mutate_field(c.genome, ref.kind, ref.layer, ref.field, limits_, rng);
        }
    }

private:
    BaselineVariant variant_;
    SearchLimits limits_;
};

}  // namespace

RunHistory run_baseline_ga(const BaselineVariant& variant, const GaConfig& cfg, const SearchLimits& limits,
                           FitnessBackend& fitness, std::uint64_t seed, const EvolveOptions& opts) {
    if (variant.kind == BaselineKind::random_search) {
        throw std::invalid_argument("run_baseline_ga expects the small_set or large_set variant");
    }
    SetCountPolicy policy(variant, limits);
    return evolve_with_policy(cfg, limits, fitness, policy, seed, opts);
}

RunHistory run_random_search(long budget_evals, const SearchLimits& limits, const BaselineVariant& variant_for_counts,
                             FitnessBackend& fitness, std::uint64_t seed, const EvolveOptions& opts) {
    if (budget_evals < 1) throw std::invalid_argument("random search budget must be >= 1");
    limits.check();
    variant_for_counts.check();

    const auto started = std::chrono::steady_clock::now();
    const auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    };
    constexpr long kChunk = 1000;  // one history record per chunk of draws

    Rng draw_rng = make_rng(seed, {stream::kInitPopulation});
    RunHistory hist;
    std::optional<Candidate> best;
    long done = 0;
    int chunk_index = 0;
    while (done < budget_evals) {
        const long k = std::min(kChunk, budget_evals - done);
        std::vector<Candidate> batch(static_cast<std::size_t>(k));
        for (auto& c : batch) {
            c.genome = random_genome(limits, draw_rng);
            c.params = sample_counts(variant_for_counts, limits, draw_rng);
        }
        parallel_for(static_cast<int>(k), opts.workers, [&](int i) {
            Rng r = make_rng(seed, {stream::kGaEval, static_cast<std::uint64_t>(done + i)});
            batch[static_cast<std::size_t>(i)].fitness = fitness.evaluate(batch[static_cast<std::size_t>(i)], r);
        });
        double sum = 0.0, loss_sum = 0.0;
        for (const auto& c : batch) {
            sum += c.fitness->accuracy;
            loss_sum += c.fitness->val_loss;
            if (!best || c.fitness->accuracy > best->fitness->accuracy) best = c;
        }
        done += k;

        GenerationRecord rec;
        rec.generation = chunk_index++;
        rec.candidates = {*best};
        rec.best_fitness = best->fitness->accuracy;
        rec.mean_fitness = sum / static_cast<double>(k);
        rec.mean_loss = loss_sum / static_cast<double>(k);
        rec.evals_so_far = done;
        rec.elapsed_seconds = elapsed();
        hist.records.push_back(std::move(rec));
    }
    hist.total_evaluations = done;
    hist.total_seconds = elapsed();
    return hist;
}

}  // namespace evonas
