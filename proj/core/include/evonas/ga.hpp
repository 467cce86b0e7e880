#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "evonas/bigan.hpp"
#include "evonas/evaluator.hpp"
#include "evonas/genome.hpp"
#include "evonas/run_history.hpp"

namespace evonas {

struct GaConfig {
    int n_m = 25;  // population size
    int t = 4;     // top-ranked parents kept
    int r = 2;     // random extras added
    int d = 1;     // dropped from the merged pool
    double mutation_fraction = 0.20;
    int generations = 10;
    std::optional<double> budget_seconds;
    std::optional<long> budget_evals;
    int bigan_iters_per_gen = 1;
    bool elitism = false;  // ablation only: carry the best candidate over

    /// Throws std::invalid_argument on violated invariants
    /// (t + r - d >= 2, n_m >= 2, t + r <= n_m, ...).
    void check() const;
};

/// Takes the t top-ranked indices (score ties broken by lower index), adds
/// r uniform-random others, then drops d uniform-random members of the
/// merged pool. Returns t+r-d population indices.
std::vector<int> select_parents(const std::vector<double>& scores, const GaConfig& cfg, Rng& rng);

/// The counter protocol: every pair takes two distinct parents with the
/// currently lowest usage counters (uniform among least-used), so counters
/// never spread more than necessary. Returns n_m pairs of pool entries.
std::vector<std::pair<int, int>> pair_parents(const std::vector<int>& pool, int n_m, Rng& rng);

/// Single-point prefix/suffix splice per layer kind: child conv layers
/// 1..id1 come from a, the rest from b; dense layers split at id2 the same
/// way. Continuous counts splice at the same cut points (they belong to
/// their layer blocks). Zero-active repair runs afterwards. The child's
/// fitness is cleared.
Candidate crossover_at(const Candidate& a, const Candidate& b, int id1, int id2);

/// Draws id1 uniform in [1,C] and id2 uniform in [1,D], then splices.
Candidate crossover(const Candidate& a, const Candidate& b, const SearchLimits& limits, Rng& rng);

/// Resamples one named gene field uniformly from its choice set excluding
/// the current value (booleans flip), then repairs.
Genome mutate_field(const Genome& genome, LayerKind kind, int layer, SlotField field, const SearchLimits& limits,
                    Rng& rng);

/// Resamples the slot's field uniformly from its choice set excluding the
/// current value, then repairs. Slot indices follow locate_slot.
Genome mutate_slot(const Genome& genome, int slot, const SearchLimits& limits, Rng& rng);

/// Picks the slot uniformly in [1, 5C+4D] and mutates it.
Genome mutate(const Genome& genome, const SearchLimits& limits, Rng& rng);

/// Strategy for sourcing continuous counts during evolution: the Bi-GAN
/// for the proposed method, set/range samplers for the baseline GAs.
class CountPolicy {
public:
    virtual ~CountPolicy() = default;

    /// Counts for a fresh initial-population candidate.
    virtual void stamp_initial(Candidate& c, Rng& rng) = 0;

    /// Runs once per generation before evaluation; may train internal state
    /// and restamp the counts of every not-yet-evaluated candidate (a
    /// carried-over elite keeps both its counts and its cached fitness).
    /// `best` is the best evaluated candidate so far (nullptr in generation
    /// 0). Returns how many fitness evaluations the refresh itself consumed.
    virtual long refresh(std::vector<Candidate>& pop, const Candidate* best, int generation) = 0;

    /// One uniformly chosen slot of the policy's mutation space: 5C+4D
    /// discrete slots for the proposed method, 6C+5D including the count
    /// genes for baselines.
    virtual void mutate_candidate(Candidate& c, Rng& rng) = 0;
};

struct EvolveOptions {
    int workers = 1;
};

/// The generational loop shared by the proposed method and the baseline
/// GAs: refresh counts, evaluate the population concurrently, select with
/// t/r/d, pair by counters, crossover, mutate ceil(mutation_fraction*n_m)
/// children, replace the population with the children. Stops at
/// cfg.generations or when a budget is exhausted (checked before each
/// generation starts).
RunHistory evolve_with_policy(const GaConfig& cfg, const SearchLimits& limits, FitnessBackend& fitness,
                              CountPolicy& policy, std::uint64_t seed, const EvolveOptions& opts = {});

/// The proposed method: counts proposed and refined by the Bi-GAN, one (or
/// bigan_iters_per_gen) Algorithm-1 iterations per generation. The Bi-GAN's
/// own evaluations build networks from the best genome found so far.
RunHistory evolve(const GaConfig& cfg, const SearchLimits& limits, FitnessBackend& fitness,
                  const BiGanConfig& bigan_cfg, std::uint64_t seed, const EvolveOptions& opts = {});

}  // namespace evonas
