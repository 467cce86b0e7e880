#include "evonas/genome.hpp"

#include <algorithm>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace evonas {

const char* to_string(Activation a) {
    switch (a) {
        case Activation::relu: return "relu";
        case Activation::leaky_relu: return "leaky_relu";
        case Activation::sigmoid: return "sigmoid";
        case Activation::tanh: return "tanh";
    }
    return "relu";
}

Activation activation_from_string(const std::string& s) {
    if (s == "relu") return Activation::relu;
    if (s == "leaky_relu") return Activation::leaky_relu;
    if (s == "sigmoid") return Activation::sigmoid;
    if (s == "tanh") return Activation::tanh;
    throw std::invalid_argument("unknown activation: " + s);
}

const char* to_string(LayerKind k) {
    return k == LayerKind::conv ? "conv" : "dense";
}

const char* to_string(SlotField f) {
    switch (f) {
        case SlotField::exists: return "exists";
        case SlotField::kernel_size: return "kernel_size";
        case SlotField::activation: return "activation";
        case SlotField::batch_norm: return "batch_norm";
        case SlotField::max_pool: return "max_pool";
        case SlotField::dropout: return "dropout";
    }
    return "exists";
}

int Genome::active_conv_count() const {
    return static_cast<int>(std::count_if(conv.begin(), conv.end(),
                                          [](const ConvLayerGene& g) { return g.exists; }));
}

int Genome::active_dense_count() const {
    return static_cast<int>(std::count_if(dense.begin(), dense.end(),
                                          [](const DenseLayerGene& g) { return g.exists; }));
}

void SearchLimits::check() const {
    if (max_conv_layers < 1) throw std::invalid_argument("limits: max_conv_layers must be >= 1");
    if (max_dense_layers < 1) throw std::invalid_argument("limits: max_dense_layers must be >= 1");
    auto check_bounds = [](const std::pair<int, int>& b, const char* name) {
        if (b.first < 1) throw std::invalid_argument(std::string("limits: ") + name + " minimum must be >= 1");
        if (b.first >= b.second) throw std::invalid_argument(std::string("limits: ") + name + " must satisfy min < max");
    };
    check_bounds(filter_bounds, "filter_bounds");
    check_bounds(neuron_bounds, "neuron_bounds");
    if (kernel_choices.empty()) throw std::invalid_argument("limits: kernel_choices must not be empty");
    if (activation_choices.empty()) throw std::invalid_argument("limits: activation_choices must not be empty");
}

namespace {

template <typename T>
const T& pick(const std::vector<T>& choices, Rng& rng) {
    std::uniform_int_distribution<std::size_t> d(0, choices.size() - 1);
    return choices[d(rng)];
}

bool coin(Rng& rng) {
    return std::uniform_int_distribution<int>(0, 1)(rng) == 1;
}

}  // namespace

void repair_zero_active(Genome& genome) {
    if (genome.active_conv_count() == 0 && !genome.conv.empty()) genome.conv[0].exists = true;
    if (genome.active_dense_count() == 0 && !genome.dense.empty()) genome.dense[0].exists = true;
}

Genome random_genome(const SearchLimits& limits, Rng& rng) {
    limits.check();
    Genome g;
    g.conv.resize(limits.max_conv_layers);
    g.dense.resize(limits.max_dense_layers);
    for (auto& c : g.conv) {
        c.exists = coin(rng);
        c.kernel_size = pick(limits.kernel_choices, rng);
        c.activation = pick(limits.activation_choices, rng);
        c.batch_norm = coin(rng);
        c.max_pool = coin(rng);
    }
    for (auto& d : g.dense) {
        d.exists = coin(rng);
        d.activation = pick(limits.activation_choices, rng);
        d.batch_norm = coin(rng);
        d.dropout = coin(rng);
    }
    repair_zero_active(g);
    return g;
}

std::vector<Violation> validate(const Genome& genome, const SearchLimits& limits) {
    std::vector<Violation> out;
    auto where = [](const char* kind, std::size_t i, const char* field) {
        return std::string(kind) + "[" + std::to_string(i + 1) + "]." + field;
    };
    if (static_cast<int>(genome.conv.size()) != limits.max_conv_layers) {
        out.push_back({"conv", "expected exactly " + std::to_string(limits.max_conv_layers) + " conv genes, got " +
                               std::to_string(genome.conv.size())});
    }
    if (static_cast<int>(genome.dense.size()) != limits.max_dense_layers) {
        out.push_back({"dense", "expected exactly " + std::to_string(limits.max_dense_layers) + " dense genes, got " +
                                std::to_string(genome.dense.size())});
    }
    for (std::size_t i = 0; i < genome.conv.size(); ++i) {
        const auto& c = genome.conv[i];
        if (std::find(limits.kernel_choices.begin(), limits.kernel_choices.end(), c.kernel_size) ==
            limits.kernel_choices.end()) {
            out.push_back({where("conv", i, "kernel_size"),
                           "value " + std::to_string(c.kernel_size) + " not in kernel choice set"});
        }
        if (std::find(limits.activation_choices.begin(), limits.activation_choices.end(), c.activation) ==
            limits.activation_choices.end()) {
            out.push_back({where("conv", i, "activation"),
                           std::string("value ") + to_string(c.activation) + " not in activation choice set"});
        }
    }
    for (std::size_t i = 0; i < genome.dense.size(); ++i) {
        const auto& d = genome.dense[i];
        if (std::find(limits.activation_choices.begin(), limits.activation_choices.end(), d.activation) ==
            limits.activation_choices.end()) {
            out.push_back({where("dense", i, "activation"),
                           std::string("value ") + to_string(d.activation) + " not in activation choice set"});
        }
    }
    if (genome.active_conv_count() == 0) out.push_back({"conv", "no active conv layer"});
    if (genome.active_dense_count() == 0) out.push_back({"dense", "no active dense layer"});
    return out;
}

std::vector<Violation> validate_params(const ContinuousParams& params, const SearchLimits& limits) {
    std::vector<Violation> out;
    if (static_cast<int>(params.filters.size()) != limits.max_conv_layers) {
        out.push_back({"filters", "expected " + std::to_string(limits.max_conv_layers) + " filter counts, got " +
                                  std::to_string(params.filters.size())});
    }
    if (static_cast<int>(params.neurons.size()) != limits.max_dense_layers) {
        out.push_back({"neurons", "expected " + std::to_string(limits.max_dense_layers) + " neuron counts, got " +
                                  std::to_string(params.neurons.size())});
    }
    for (std::size_t i = 0; i < params.filters.size(); ++i) {
        int v = params.filters[i];
        if (v < limits.filter_bounds.first || v > limits.filter_bounds.second) {
            out.push_back({"filters[" + std::to_string(i + 1) + "]",
                           "value " + std::to_string(v) + " outside filter bounds"});
        }
    }
    for (std::size_t i = 0; i < params.neurons.size(); ++i) {
        int v = params.neurons[i];
        if (v < limits.neuron_bounds.first || v > limits.neuron_bounds.second) {
            out.push_back({"neurons[" + std::to_string(i + 1) + "]",
                           "value " + std::to_string(v) + " outside neuron bounds"});
        }
    }
    return out;
}

int param_slot_count(const SearchLimits& limits) {
    limits.check();
    return 5 * limits.max_conv_layers + 4 * limits.max_dense_layers;
}

SlotRef locate_slot(int index, const SearchLimits& limits) {
    const int total = param_slot_count(limits);
    if (index < 1 || index > total) {
        throw std::out_of_range("slot index " + std::to_string(index) + " outside [1, " + std::to_string(total) + "]");
    }
    const int conv_slots = 5 * limits.max_conv_layers;
    if (index <= conv_slots) {
        const int layer = (index - 1) / 5 + 1;
        static constexpr SlotField kConvOrder[5] = {SlotField::exists, SlotField::kernel_size, SlotField::activation,
                                                    SlotField::batch_norm, SlotField::max_pool};
        return {LayerKind::conv, layer, kConvOrder[(index - 1) % 5]};
    }
    const int rel = index - conv_slots - 1;
    const int layer = rel / 4 + 1;
    static constexpr SlotField kDenseOrder[4] = {SlotField::exists, SlotField::activation, SlotField::batch_norm,
                                                 SlotField::dropout};
    return {LayerKind::dense, layer, kDenseOrder[rel % 4]};
}

ContinuousParams random_params(const SearchLimits& limits, Rng& rng) {
    ContinuousParams p;
    std::uniform_int_distribution<int> df(limits.filter_bounds.first, limits.filter_bounds.second);
    std::uniform_int_distribution<int> dn(limits.neuron_bounds.first, limits.neuron_bounds.second);
    p.filters.resize(limits.max_conv_layers);
    p.neurons.resize(limits.max_dense_layers);
    for (auto& v : p.filters) v = df(rng);
    for (auto& v : p.neurons) v = dn(rng);
    return p;
}

void to_json(nlohmann::json& j, const ConvLayerGene& g) {
    j = nlohmann::json{{"exists", g.exists},
                       {"kernel_size", g.kernel_size},
                       {"activation", to_string(g.activation)},
                       {"batch_norm", g.batch_norm},
                       {"max_pool", g.max_pool}};
}

void from_json(const nlohmann::json& j, ConvLayerGene& g) {
    g.exists = j.at("exists").get<bool>();
    g.kernel_size = j.at("kernel_size").get<int>();
    g.activation = activation_from_string(j.at("activation").get<std::string>());
    g.batch_norm = j.at("batch_norm").get<bool>();
    g.max_pool = j.at("max_pool").get<bool>();
}

void to_json(nlohmann::json& j, const DenseLayerGene& g) {
    j = nlohmann::json{{"exists", g.exists},
                       {"activation", to_string(g.activation)},
                       {"batch_norm", g.batch_norm},
                       {"dropout", g.dropout}};
}

void from_json(const nlohmann::json& j, DenseLayerGene& g) {
    g.exists = j.at("exists").get<bool>();
    g.activation = activation_from_string(j.at("activation").get<std::string>());
    g.batch_norm = j.at("batch_norm").get<bool>();
    g.dropout = j.at("dropout").get<bool>();
}

void to_json(nlohmann::json& j, const Genome& g) {
    j = nlohmann::json{{"conv", g.conv}, {"dense", g.dense}};
}

void from_json(const nlohmann::json& j, Genome& g) {
    g.conv = j.at("conv").get<std::vector<ConvLayerGene>>();
    g.dense = j.at("dense").get<std::vector<DenseLayerGene>>();
}

void to_json(nlohmann::json& j, const ContinuousParams& p) {
    j = nlohmann::json{{"filters", p.filters}, {"neurons", p.neurons}};
}

void from_json(const nlohmann::json& j, ContinuousParams& p) {
    p.filters = j.at("filters").get<std::vector<int>>();
    p.neurons = j.at("neurons").get<std::vector<int>>();
}

void to_json(nlohmann::json& j, const Candidate& c) {
    j = nlohmann::json{{"genome", c.genome}, {"params", c.params}};
    if (c.fitness) {
        j["fitness"] = nlohmann::json{{"accuracy", c.fitness->accuracy},
                                      {"epochs_run", c.fitness->epochs_run},
                                      {"val_loss", c.fitness->val_loss}};
        if (!c.fitness->diagnostic.empty()) j["fitness"]["diagnostic"] = c.fitness->diagnostic;
    } else {
        j["fitness"] = nullptr;
    }
}

void from_json(const nlohmann::json& j, Candidate& c) {
    c.genome = j.at("genome").get<Genome>();
    c.params = j.at("params").get<ContinuousParams>();
    c.fitness.reset();
    if (j.contains("fitness") && !j.at("fitness").is_null()) {
        FitnessReport r;
        const auto& f = j.at("fitness");
        r.accuracy = f.at("accuracy").get<double>();
        r.epochs_run = f.at("epochs_run").get<int>();
        r.val_loss = f.value("val_loss", 0.0);
        r.diagnostic = f.value("diagnostic", std::string{});
        c.fitness = r;
    }
}

}  // namespace evonas
