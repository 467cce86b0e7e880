#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "evonas/fitness_report.hpp"
#include "evonas/rng.hpp"

namespace evonas {

enum class Activation { relu, leaky_relu, sigmoid, tanh };

const char* to_string(Activation a);
Activation activation_from_string(const std::string& s);

/// One potential convolutional layer. Inactive genes (exists=false) keep
/// legal field values so crossover and mutation stay total functions.
struct ConvLayerGene {
    bool exists = true;
    int kernel_size = 3;
    Activation activation = Activation::relu;
    bool batch_norm = false;
    bool max_pool = false;

    bool operator==(const ConvLayerGene&) const = default;
};

/// One potential dense layer.
struct DenseLayerGene {
    bool exists = true;
    Activation activation = Activation::relu;
    bool batch_norm = false;
    bool dropout = false;

    bool operator==(const DenseLayerGene&) const = default;
};

/// Fixed-length discrete architecture encoding: exactly C conv genes and
/// D dense genes. At least one gene of each kind must be active.
struct Genome {
    std::vector<ConvLayerGene> conv;
    std::vector<DenseLayerGene> dense;

    bool operator==(const Genome&) const = default;

    int active_conv_count() const;
    int active_dense_count() const;
};

/// The search-space definition: maximum layer counts, integer bounds for
/// the continuous counts, and the discrete choice sets.
struct SearchLimits {
    int max_conv_layers = 3;       // C
    int max_dense_layers = 3;      // D
    std::pair<int, int> filter_bounds{1, 256};
    std::pair<int, int> neuron_bounds{10, 4000};
    std::vector<int> kernel_choices{3, 5};
    std::vector<Activation> activation_choices{
        Activation::relu, Activation::leaky_relu, Activation::sigmoid, Activation::tanh};

    /// Throws std::invalid_argument when bounds or choice sets are malformed.
    void check() const;
};

/// Integer filter count per potential conv layer and neuron count per
/// potential dense layer. Counts exist for inactive layers too; the network
/// builder ignores them.
struct ContinuousParams {
    std::vector<int> filters;
    std::vector<int> neurons;

    bool operator==(const ContinuousParams&) const = default;
};

/// Unit of evolution: discrete genome plus continuous counts, with the
/// latest fitness report once evaluated.
struct Candidate {
    Genome genome;
    ContinuousParams params;
    std::optional<FitnessReport> fitness;
};

struct Violation {
    std::string location;  // e.g. "conv[2].kernel_size"
    std::string message;
};

/// Samples every gene field uniformly from its choice set. If a draw leaves
/// all conv (or dense) genes inactive, layer 1's exists flag is forced true.
Genome random_genome(const SearchLimits& limits, Rng& rng);

/// Forces layer 1 active in any gene block with no active layers.
void repair_zero_active(Genome& genome);

/// Empty result means the genome satisfies every invariant. Violations name
/// the offending gene index and field.
std::vector<Violation> validate(const Genome& genome, const SearchLimits& limits);

std::vector<Violation> validate_params(const ContinuousParams& params, const SearchLimits& limits);

/// Number of mutable parameter slots: 5 per potential conv layer plus 4 per
/// potential dense layer.
int param_slot_count(const SearchLimits& limits);

enum class LayerKind { conv, dense };
enum class SlotField { exists, kernel_size, activation, batch_norm, max_pool, dropout };

const char* to_string(LayerKind k);
const char* to_string(SlotField f);

struct SlotRef {
    LayerKind kind;
    int layer;  // 1-based
    SlotField field;

    bool operator==(const SlotRef&) const = default;
};

/// Maps a 1-based slot index in [1, 5C+4D] to its gene field. Ordering is
/// conv layers first, each contributing (exists, kernel_size, activation,
/// batch_norm, max_pool), then dense layers contributing (exists,
/// activation, batch_norm, dropout). Throws std::out_of_range otherwise.
SlotRef locate_slot(int index, const SearchLimits& limits);

ContinuousParams random_params(const SearchLimits& limits, Rng& rng);

void to_json(nlohmann::json& j, const ConvLayerGene& g);
void from_json(const nlohmann::json& j, ConvLayerGene& g);
void to_json(nlohmann::json& j, const DenseLayerGene& g);
void from_json(const nlohmann::json& j, DenseLayerGene& g);
void to_json(nlohmann::json& j, const Genome& g);
void from_json(const nlohmann::json& j, Genome& g);
void to_json(nlohmann::json& j, const ContinuousParams& p);
void from_json(const nlohmann::json& j, ContinuousParams& p);
void to_json(nlohmann::json& j, const Candidate& c);
void from_json(const nlohmann::json& j, Candidate& c);

}  // namespace evonas
