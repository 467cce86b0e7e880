#include "evonas/ga.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "evonas/workers.hpp"

namespace evonas {

void GaConfig::check() const {
    if (n_m < 2) throw std::invalid_argument("ga.n_m must be >= 2");
    if (t < 1) throw std::invalid_argument("ga.t must be >= 1");
    if (r < 0 || d < 0) throw std::invalid_argument("ga.r and ga.d must be >= 0");
    if (t + r > n_m) throw std::invalid_argument("ga.t + ga.r must not exceed ga.n_m");
    if (t + r - d < 2) throw std::invalid_argument("ga.t + ga.r - ga.d must be >= 2");
    if (mutation_fraction < 0.0 || mutation_fraction > 1.0) {
        throw std::invalid_argument("ga.mutation_fraction must be in [0, 1]");
    }
    if (generations < 1) throw std::invalid_argument("ga.generations must be >= 1");
    if (bigan_iters_per_gen < 1) throw std::invalid_argument("ga.bigan_iters_per_gen must be >= 1");
    if (budget_evals && *budget_evals < 1) throw std::invalid_argument("ga.budget_evals must be >= 1");
    if (budget_seconds && !(*budget_seconds > 0.0)) throw std::invalid_argument("ga.budget_seconds must be > 0");
}

std::vector<int> select_parents(const std::vector<double>& scores, const GaConfig& cfg, Rng& rng) {
    const int n = static_cast<int>(scores.size());
    if (cfg.t + cfg.r > n) throw std::invalid_argument("selection needs t + r <= population size");
    if (cfg.t + cfg.r - cfg.d < 2) throw std::invalid_argument("selection needs t + r - d >= 2");

    std::vector<int> ranked(static_cast<std::size_t>(n));
    std::iota(ranked.begin(), ranked.end(), 0);
    std::stable_sort(ranked.begin(), ranked.end(),
                     [&](int a, int b) { return scores[static_cast<std::size_t>(a)] > scores[static_cast<std::size_t>(b)]; });

    std::vector<int> merged(ranked.begin(), ranked.begin() + cfg.t);
    std::vector<int> rest(ranked.begin() + cfg.t, ranked.end());
    std::sample(rest.begin(), rest.end(), std::back_inserter(merged), cfg.r, rng);

    // Drop d uniform-random members of the merged pool.
    std::vector<std::size_t> positions(merged.size());
    std::iota(positions.begin(), positions.end(), 0);
    std::vector<std::size_t> dropped;
    std::sample(positions.begin(), positions.end(), std::back_inserter(dropped), cfg.d, rng);
    std::sort(dropped.rbegin(), dropped.rend());
    for (std::size_t pos : dropped) merged.erase(merged.begin() + static_cast<long>(pos));
    return merged;
}

std::vector<std::pair<int, int>> pair_parents(const std::vector<int>& pool, int n_m, Rng& rng) {
    if (pool.size() < 2) throw std::invalid_argument("parent pool must hold at least 2 members");
    std::vector<int> counters(pool.size(), 0);
    auto pick_least_used = [&](int exclude) {
        int cmin = std::numeric_limits<int>::max();
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (static_cast<int>(i) == exclude) continue;
            cmin = std::min(cmin, counters[i]);
        }
        std::vector<int> least;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (static_cast<int>(i) != exclude && counters[i] == cmin) least.push_back(static_cast<int>(i));
        }
        std::uniform_int_distribution<std::size_t> d(0, least.size() - 1);
        return least[d(rng)];
    };
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(n_m));
    for (int k = 0; k < n_m; ++k) {
        const int first = pick_least_used(-1);
        const int second = pick_least_used(first);
        ++counters[static_cast<std::size_t>(first)];
        ++counters[static_cast<std::size_t>(second)];
        pairs.emplace_back(pool[static_cast<std::size_t>(first)], pool[static_cast<std::size_t>(second)]);
    }
    return pairs;
}

Candidate crossover_at(const Candidate& a, const Candidate& b, int id1, int id2) {
    const int c = static_cast<int>(a.genome.conv.size());
    const int d = static_cast<int>(a.genome.dense.size());
    if (static_cast<int>(b.genome.conv.size()) != c || static_cast<int>(b.genome.dense.size()) != d) {
        throw std::invalid_argument("crossover parents come from different search spaces");
    }
    if (id1 < 1 || id1 > c || id2 < 1 || id2 > d) throw std::invalid_argument("crossover cut point out of range");

    Candidate child;
    child.genome.conv.assign(a.genome.conv.begin(), a.genome.conv.begin() + id1);
    child.genome.conv.insert(child.genome.conv.end(), b.genome.conv.begin() + id1, b.genome.conv.end());
    child.genome.dense.assign(a.genome.dense.begin(), a.genome.dense.begin() + id2);
    child.genome.dense.insert(child.genome.dense.end(), b.genome.dense.begin() + id2, b.genome.dense.end());
    child.params.filters.assign(a.params.filters.begin(), a.params.filters.begin() + id1);
    child.params.filters.insert(child.params.filters.end(), b.params.filters.begin() + id1, b.params.filters.end());
    child.params.neurons.assign(a.params.neurons.begin(), a.params.neurons.begin() + id2);
    child.params.neurons.insert(child.params.neurons.end(), b.params.neurons.begin() + id2, b.params.neurons.end());
    repair_zero_active(child.genome);
    return child;
}

Candidate crossover(const Candidate& a, const Candidate& b, const SearchLimits& limits, Rng& rng) {
    std::uniform_int_distribution<int> d1(1, limits.max_conv_layers);
    std::uniform_int_distribution<int> d2(1, limits.max_dense_layers);
    const int id1 = d1(rng);
    const int id2 = d2(rng);
    return crossover_at(a, b, id1, id2);
}

namespace {

template <typename T>
T resample_excluding(const std::vector<T>& choices, T current, Rng& rng) {
    std::vector<T> alternatives;
    for (const T& c : choices) {
        if (!(c == current)) alternatives.push_back(c);
    }
    if (alternatives.empty()) return current;  // degenerate single-choice set
    std::uniform_int_distribution<std::size_t> d(0, alternatives.size() - 1);
    return alternatives[d(rng)];
}

}  // namespace

Genome mutate_field(const Genome& genome, LayerKind kind, int layer, SlotField field, const SearchLimits& limits,
                    Rng& rng) {
    Genome out = genome;
    const auto idx = static_cast<std::size_t>(layer - 1);
    if (kind == LayerKind::conv) {
        ConvLayerGene& g = out.conv[idx];
        switch (field) {
            case SlotField::exists: g.exists = !g.exists; break;
            case SlotField::kernel_size: g.kernel_size = resample_excluding(limits.kernel_choices, g.kernel_size, rng); break;
            case SlotField::activation: g.activation = resample_excluding(limits.activation_choices, g.activation, rng); break;
            case SlotField::batch_norm: g.batch_norm = !g.batch_norm; break;
            case SlotField::max_pool: g.max_pool = !g.max_pool; break;
            default: throw std::logic_error("slot field not valid for conv layers");
        }
    } else {
        DenseLayerGene& g = out.dense[idx];
        switch (field) {
            case SlotField::exists: g.exists = !g.exists; break;
            case SlotField::activation: g.activation = resample_excluding(limits.activation_choices, g.activation, rng); break;
            case SlotField::batch_norm: g.batch_norm = !g.batch_norm; break;
            case SlotField::dropout: g.dropout = !g.dropout; break;
            default: throw std::logic_error("slot field not valid for dense layers");
        }
    }
    repair_zero_active(out);
    return out;
}

Genome mutate_slot(const Genome& genome, int slot, const SearchLimits& limits, Rng& rng) {
    const SlotRef ref = locate_slot(slot, limits);
    return mutate_field(genome, ref.kind, ref.layer, ref.field, limits, rng);
}

Genome mutate(const Genome& genome, const SearchLimits& limits, Rng& rng) {
    std::uniform_int_distribution<int> d(1, param_slot_count(limits));
    return mutate_slot(genome, d(rng), limits, rng);
}

namespace {

GenerationRecord make_record(int generation, const std::vector<Candidate>& pop, long evals, double elapsed) {
    GenerationRecord rec;
    rec.generation = generation;
    rec.candidates = pop;
    double best = -std::numeric_limits<double>::infinity();
    double sum = 0.0, loss_sum = 0.0;
    for (const auto& c : pop) {
        const double acc = c.fitness ? c.fitness->accuracy : 0.0;
        best = std::max(best, acc);
        sum += acc;
        loss_sum += c.fitness ? c.fitness->val_loss : 0.0;
    }
    const auto n = static_cast<double>(pop.size());
    rec.best_fitness = best;
    rec.mean_fitness = sum / n;
    rec.mean_loss = loss_sum / n;
    rec.evals_so_far = evals;
    rec.elapsed_seconds = elapsed;
    return rec;
}

/// Counts from the Bi-GAN: one (or more) Algorithm-1 iterations per
/// generation, then every candidate's counts are restamped from the better
/// generator. The Bi-GAN's own fitness queries build candidates around the
/// best genome seen so far (the initial population's first genome before
/// anything is evaluated).
class BiGanCountPolicy final : public CountPolicy {
public:
    BiGanCountPolicy(const BiGanConfig& cfg, const SearchLimits& limits, FitnessBackend& backend,
                     std::uint64_t seed, int iters_per_gen)
        : cfg_(cfg),
          limits_(limits),
          backend_(backend),
          seed_(seed),
          iters_(iters_per_gen),
          state_(make_state(cfg, limits, seed)),
          iter_rng_(make_rng(seed, {stream::kBiGanIter})),
          stamp_rng_(make_rng(seed, {stream::kStamp})) {}

    void stamp_initial(Candidate& c, Rng& rng) override { c.params = random_params(limits_, rng); }

    long refresh(std::vector<Candidate>& pop, const Candidate* best, int) override {
        const Genome eval_genome = best ? best->genome : pop.front().genome;
        const FitnessOfParams fit = [&](const ContinuousParams& p) {
            Candidate c;
            c.genome = eval_genome;
            c.params = p;
            Rng r = make_rng(seed_, {stream::kBiGanEval, eval_counter_++});
            return backend_.evaluate(c, r).accuracy;
        };
        for (int it = 0; it < iters_; ++it) bigan_iteration(state_, fit, cfg_, iter_rng_);
        for (auto& c : pop) {
            if (c.fitness) continue;  // a carried-over elite keeps its counts
            c.params = propose_params(state_, stamp_rng_);
        }
        return 2L * cfg_.m * iters_;
    }

    void mutate_candidate(Candidate& c, Rng& rng) override { c.genome = mutate(c.genome, limits_, rng); }

private:
    static BiGanState make_state(const BiGanConfig& cfg, const SearchLimits& limits, std::uint64_t seed) {
        Rng r = make_rng(seed, {stream::kBiGanInit});
        return init_bigan(cfg, limits, r);
    }

    BiGanConfig cfg_;
    SearchLimits limits_;
    FitnessBackend& backend_;
    std::uint64_t seed_;
    int iters_;
    BiGanState state_;
    Rng iter_rng_;
    Rng stamp_rng_;
    std::uint64_t eval_counter_ = 0;
};

}  // namespace

RunHistory evolve_with_policy(const GaConfig& cfg, const SearchLimits& limits, FitnessBackend& fitness,
                              CountPolicy& policy, std::uint64_t seed, const EvolveOptions& opts) {
    cfg.check();
    limits.check();
    const auto started = std::chrono::steady_clock::now();
    const auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    };

    Rng init_rng = make_rng(seed, {stream::kInitPopulation});
    std::vector<Candidate> pop(static_cast<std::size_t>(cfg.n_m));
    for (auto& c : pop) {
        c.genome = random_genome(limits, init_rng);
        policy.stamp_initial(c, init_rng);
    }

    Rng evo_rng = make_rng(seed, {stream::kEvolution});
    RunHistory hist;
    long evals = 0;
    std::optional<Candidate> best;

    for (int gen = 0; gen < cfg.generations; ++gen) {
        if (cfg.budget_evals && evals >= *cfg.budget_evals) break;
        if (cfg.budget_seconds && elapsed() >= *cfg.budget_seconds) break;

        evals += policy.refresh(pop, best ? &*best : nullptr, gen);

        long newly_evaluated = 0;
        for (const auto& c : pop) newly_evaluated += c.fitness ? 0 : 1;
        parallel_for(cfg.n_m, opts.workers, [&](int i) {
            auto& cand = pop[static_cast<std::size_t>(i)];
            if (cand.fitness) return;  // the elite keeps its cached report
            Rng r = make_rng(seed, {stream::kGaEval, static_cast<std::uint64_t>(gen), static_cast<std::uint64_t>(i)});
            cand.fitness = fitness.evaluate(cand, r);
        });
        evals += newly_evaluated;

        for (const auto& c : pop) {
            if (!best || c.fitness->accuracy > best->fitness->accuracy) best = c;
        }
        hist.records.push_back(make_record(gen, pop, evals, elapsed()));

        std::vector<double> scores;
        scores.reserve(pop.size());
        for (const auto& c : pop) scores.push_back(c.fitness->accuracy);
        const std::vector<int> pool = select_parents(scores, cfg, evo_rng);
        const auto pairs = pair_parents(pool, cfg.n_m, evo_rng);

        std::vector<Candidate> children;
        children.reserve(static_cast<std::size_t>(cfg.n_m));
        for (const auto& [pa, pb] : pairs) {
            children.push_back(crossover(pop[static_cast<std::size_t>(pa)], pop[static_cast<std::size_t>(pb)],
                                         limits, evo_rng));
        }

        const int n_mut = static_cast<int>(std::ceil(cfg.mutation_fraction * cfg.n_m));
        std::vector<int> order(static_cast<std::size_t>(cfg.n_m));
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), evo_rng);
        for (int j = 0; j < n_mut && j < cfg.n_m; ++j) {
            policy.mutate_candidate(children[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])], evo_rng);
        }

        if (cfg.elitism && best) children.front() = *best;  // verbatim, fitness included
        pop = std::move(children);
    }

    hist.total_evaluations = evals;
    hist.total_seconds = elapsed();
    return hist;
}

RunHistory evolve(const GaConfig& cfg, const SearchLimits& limits, FitnessBackend& fitness,
                  const BiGanConfig& bigan_cfg, std::uint64_t seed, const EvolveOptions& opts) {
    BiGanCountPolicy policy(bigan_cfg, limits, fitness, seed, cfg.bigan_iters_per_gen);
    return evolve_with_policy(cfg, limits, fitness, policy, seed, opts);
}

}  // namespace evonas
