#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "evonas/genome.hpp"
#include "evonas/tensor.hpp"

namespace evonas {

/// Weights of a small fully connected net: dims = [in, hidden..., out],
/// w[k] row-major (dims[k+1] x dims[k]), b[k] of length dims[k+1].
struct MlpWeights {
    std::vector<int> dims;
    std::vector<std::vector<double>> w;
    std::vector<std::vector<double>> b;

    bool operator==(const MlpWeights&) const = default;
    /// Throws std::invalid_argument when layer dims do not chain.
    void check() const;
};

/// Fan-in-scaled uniform init (biases zero).
MlpWeights make_mlp(const std::vector<int>& dims, Rng& rng);

struct BiGanConfig {
    int noise_dim = 16;
    std::vector<int> gen_hidden{64, 64};
    std::vector<int> disc_hidden{64, 32};
    int m = 100;  // proposals scored per generator per iteration
    double gen_lr = 1e-3;
    double disc_lr = 1e-3;
    int probe_size = 16;

    void check() const;
};

/// Per-slot integer bounds for the generator output: the first conv_slots
/// components are filter counts, the remaining dense_slots are neuron
/// counts.
struct SlotBounds {
    int conv_slots = 1;
    int dense_slots = 1;
    std::pair<int, int> filter_bounds{1, 256};
    std::pair<int, int> neuron_bounds{10, 4000};

    static SlotBounds from(const SearchLimits& limits);
    int total() const { return conv_slots + dense_slots; }
    bool operator==(const SlotBounds&) const = default;
};

/// Two generators and one discriminator. better_label names the generator
/// (1 or 2) whose proposals currently score higher and whose output the
/// search consumes; the other one chases it with imitation steps. The
/// probe_noise batch is fixed at init and backs the stuck-detection rule.
struct BiGanState {
    MlpWeights g1, g2, d;
    int better_label = 1;
    int equal_streak = 0;
    Tensor probe_noise;  // (probe_size, noise_dim)
    SlotBounds bounds;
};

/// Noise is drawn uniform on (-1,1)^noise_dim throughout.
BiGanState init_bigan(const BiGanConfig& cfg, const SearchLimits& limits, Rng& rng);

/// Hidden layers apply leaky_relu; the output layer applies tanh, so every
/// component is strictly inside (-1,1).
std::vector<double> generator_forward(const MlpWeights& g, const std::vector<double>& z);

/// Maps each raw component through
///   round(raw*(pm_max-pm_min)/2 + (pm_max+pm_min)/2)
/// then clamps to [pm_min, pm_max].
ContinuousParams rescale(const std::vector<double>& raw, const SlotBounds& bounds);

/// Probability that the input came from the better generator: a single
/// logit through the logistic function, clamped away from 0 and 1 so log
/// terms stay finite.
double discriminator_forward(const MlpWeights& d, const std::vector<double>& g_raw);

struct BiGanIterationRecord {
    double acc1 = 0.0;
    double acc2 = 0.0;
    int better_label = 1;
    bool reinit_fired = false;
    /// True when the worse generator's update was withheld because both
    /// generators currently produce identical rescaled probe outputs (the
    /// stuck state); guarantees the re-init rule can fire deterministically.
    bool gb_step_skipped = false;
    /// Discriminator objective (1/m)*sum[log D(G_a(z)) + log(1-D(G_b(z)))]
    /// on this iteration's noise, before and after the ascent step.
    double disc_objective_before = 0.0;
    double disc_objective_after = 0.0;
    /// Generator objective (1/m)*sum log(1-D(G_b(z))) against the updated
    /// discriminator, before and after G_b's descent step.
    double gen_objective_before = 0.0;
    double gen_objective_after = 0.0;
};

using FitnessOfParams = std::function<double(const ContinuousParams&)>;

/// One Algorithm-1 step: checks the stuck rule, draws m noise vectors per
/// generator, scores both proposal batches through fitness_of (failures
/// count as 0), re-labels the better generator (ties keep the previous
/// label), takes one SGD ascent step on the discriminator and one descent
/// step on the worse generator. The better generator is never modified.
BiGanIterationRecord bigan_iteration(BiGanState& state, const FitnessOfParams& fitness_of, const BiGanConfig& cfg,
                                     Rng& rng);

/// True when G1 and G2 produce identical rescaled outputs on every probe
/// vector.
bool probe_outputs_equal(const BiGanState& state);

/// Advances the equal-output streak; after two consecutive stuck
/// iterations, re-randomizes the worse generator and resets the streak.
/// Returns whether the re-init fired.
bool reinit_if_stuck(BiGanState& state, Rng& rng);

/// Fresh noise through the better generator, rescaled.
ContinuousParams propose_params(const BiGanState& state, Rng& rng);

void to_json(nlohmann::json& j, const MlpWeights& m);
void from_json(const nlohmann::json& j, MlpWeights& m);
void to_json(nlohmann::json& j, const SlotBounds& b);
void from_json(const nlohmann::json& j, SlotBounds& b);
void to_json(nlohmann::json& j, const BiGanState& s);
void from_json(const nlohmann::json& j, BiGanState& s);
void to_json(nlohmann::json& j, const BiGanConfig& c);
void from_json(const nlohmann::json& j, BiGanConfig& c);

/// Checkpointing: versioned JSON, bit-exact round trip.
void save_bigan_state(const std::string& path, const BiGanState& state);
BiGanState load_bigan_state(const std::string& path);

}  // namespace evonas
