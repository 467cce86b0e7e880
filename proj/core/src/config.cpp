#include "evonas/config.hpp"

#include <fstream>
#include <initializer_list>
#include <string>

#include <nlohmann/json.hpp>

namespace evonas {

const char* to_string(SearchMethod m) {
    switch (m) {
        case SearchMethod::proposed: return "proposed";
        case SearchMethod::small_set: return "small_set";
        case SearchMethod::large_set: return "large_set";
        case SearchMethod::random_search: return "random";
    }
    return "?";
}

SearchMethod method_from_string(const std::string& s) {
    if (s == "proposed") return SearchMethod::proposed;
    if (s == "small_set") return SearchMethod::small_set;
    if (s == "large_set") return SearchMethod::large_set;
    if (s == "random" || s == "random_search") return SearchMethod::random_search;
    throw std::invalid_argument("unknown method: " + s +
                                " (expected proposed, small_set, large_set, or random)");
}

const char* to_string(FitnessKind k) {
    return k == FitnessKind::surrogate ? "surrogate" : "tinynet";
}

FitnessKind fitness_kind_from_string(const std::string& s) {
    if (s == "surrogate") return FitnessKind::surrogate;
    if (s == "tinynet") return FitnessKind::tinynet;
    throw std::invalid_argument("unknown fitness backend: " + s + " (expected surrogate or tinynet)");
}

void DatasetSpec::check() const {
    if (source == "synthetic") {
        if (n_samples < 10) throw std::invalid_argument("dataset.n_samples must be >= 10");
        if (input_shape.channels < 1 || input_shape.height < 1 || input_shape.width < 1) {
            throw std::invalid_argument("dataset.input_shape dimensions must be >= 1");
        }
    } else if (source == "idx") {
        if (images_path.empty() || labels_path.empty()) {
            throw std::invalid_argument("dataset.images_path and dataset.labels_path are required for idx data");
        }
        if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
            throw std::invalid_argument("dataset.val_fraction must lie in (0, 1)");
        }
    } else {
        throw std::invalid_argument("dataset.source must be \"synthetic\" or \"idx\"");
    }
}

Dataset load_dataset(const DatasetSpec& spec) {
    spec.check();
    if (spec.source == "synthetic") {
        return make_synthetic_dataset(spec.kind, spec.n_samples, spec.input_shape, spec.seed);
    }
    return load_idx(spec.images_path, spec.labels_path, spec.limit, spec.val_fraction);
}

void RunConfig::check() const {
    if (schema_version != 1) {
        throw std::invalid_argument("schema_version: expected 1, got " + std::to_string(schema_version));
    }
    ga.check();
    bigan.check();
    limits.check();
    if (!(train.learning_rate > 0.0)) throw std::invalid_argument("train.learning_rate must be positive");
    if (train.batch_size < 1) throw std::invalid_argument("train.batch_size must be >= 1");
    if (train.max_epochs < 0) throw std::invalid_argument("train.max_epochs must be >= 0");
    if (train.patience < 1) throw std::invalid_argument("train.patience must be >= 1");
    if (!(train.dropout_rate >= 0.0 && train.dropout_rate < 1.0)) {
        throw std::invalid_argument("train.dropout_rate must lie in [0, 1)");
    }
    if (workers < 1) throw std::invalid_argument("workers must be >= 1");
    if (surrogate) {
        if (fitness != FitnessKind::surrogate) {
            throw std::invalid_argument("surrogate: spec given but fitness is tinynet; exactly one backend applies");
        }
        surrogate->check(limits);
    }
    if (fitness == FitnessKind::tinynet) dataset.check();
    if (method == SearchMethod::random_search && !ga.budget_evals) {
        throw std::invalid_argument("ga.budget_evals: required for the random method");
    }
}

namespace {

/// Walks a JSON document remembering its position, so every error names the
/// exact field ("ga.n_m: ...").
class Reader {
public:
    Reader(const nlohmann::json& j, std::string path) : j_(&j), path_(std::move(path)) {}

    bool has(const std::string& key) const { return j_->contains(key); }

    Reader child(const std::string& key) const {
        const nlohmann::json& v = member(key);
        if (!v.is_object()) fail(key, "expected an object");
        return Reader(v, join(key));
    }

    template <typename T>
    T require(const std::string& key) const {
        return convert<T>(member(key), join(key));
    }

    template <typename T>
    T get(const std::string& key, T fallback) const {
        if (!j_->contains(key)) return fallback;
        return convert<T>((*j_)[key], join(key));
    }

    /// Converts a string field through an enum parser, keeping the path in
    /// the error message.
    template <typename Fn>
    auto get_parsed(const std::string& key, const std::string& fallback, Fn&& parse) const {
        const std::string s = get<std::string>(key, fallback);
        try {
            return parse(s);
        } catch (const std::exception& e) {
            fail(key, e.what());
        }
    }

    void allow_only(std::initializer_list<const char*> keys) const {
        for (auto it = j_->begin(); it != j_->end(); ++it) {
            bool known = false;
            for (const char* k : keys) {
                if (it.key() == k) {
                    known = true;
                    break;
                }
            }
            if (!known) fail(it.key(), "unknown field");
        }
    }

    [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
        throw ConfigError(join(key) + ": " + msg);
    }

private:
    const nlohmann::json& member(const std::string& key) const {
        if (!j_->contains(key)) fail(key, "missing required field");
        return (*j_)[key];
    }

    std::string join(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    template <typename T>
    static T convert(const nlohmann::json& v, const std::string& path) {
        try {
            return v.get<T>();
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(path + ": " + e.what());
        }
    }

    const nlohmann::json* j_;
    std::string path_;
};

GaConfig parse_ga(const Reader& r) {
    r.allow_only({"n_m", "t", "r", "d", "mutation_fraction", "generations", "budget_seconds", "budget_evals",
                  "bigan_iters_per_gen", "elitism"});
    GaConfig c;
    c.n_m = r.get("n_m", c.n_m);
    c.t = r.get("t", c.t);
    c.r = r.get("r", c.r);
    c.d = r.get("d", c.d);
    c.mutation_fraction = r.get("mutation_fraction", c.mutation_fraction);
    c.generations = r.get("generations", c.generations);
    if (r.has("budget_seconds")) c.budget_seconds = r.require<double>("budget_seconds");
    if (r.has("budget_evals")) c.budget_evals = r.require<long>("budget_evals");
    c.bigan_iters_per_gen = r.get("bigan_iters_per_gen", c.bigan_iters_per_gen);
    c.elitism = r.get("elitism", c.elitism);
    return c;
}

BiGanConfig parse_bigan(const Reader& r) {
    r.allow_only({"noise_dim", "gen_hidden", "disc_hidden", "m", "gen_lr", "disc_lr", "probe_size"});
    BiGanConfig c;
    c.noise_dim = r.get("noise_dim", c.noise_dim);
    c.gen_hidden = r.get("gen_hidden", c.gen_hidden);
    c.disc_hidden = r.get("disc_hidden", c.disc_hidden);
    c.m = r.get("m", c.m);
    c.gen_lr = r.get("gen_lr", c.gen_lr);
    c.disc_lr = r.get("disc_lr", c.disc_lr);
    c.probe_size = r.get("probe_size", c.probe_size);
    return c;
}

tinynet::TrainConfig parse_train(const Reader& r) {
    r.allow_only({"learning_rate", "batch_size", "max_epochs", "patience", "dropout_rate"});
    tinynet::TrainConfig c;
    c.learning_rate = r.get("learning_rate", c.learning_rate);
    c.batch_size = r.get("batch_size", c.batch_size);
    c.max_epochs = r.get("max_epochs", c.max_epochs);
    c.patience = r.get("patience", c.patience);
    c.dropout_rate = r.get("dropout_rate", c.dropout_rate);
    return c;
}

SearchLimits parse_limits(const Reader& r) {
    r.allow_only({"max_conv_layers", "max_dense_layers", "filter_bounds", "neuron_bounds", "kernel_choices",
                  "activation_choices"});
    SearchLimits l;
    l.max_conv_layers = r.get("max_conv_layers", l.max_conv_layers);
    l.max_dense_layers = r.get("max_dense_layers", l.max_dense_layers);
    l.filter_bounds = r.get("filter_bounds", l.filter_bounds);
    l.neuron_bounds = r.get("neuron_bounds", l.neuron_bounds);
    l.kernel_choices = r.get("kernel_choices", l.kernel_choices);
    if (r.has("activation_choices")) {
        const auto names = r.require<std::vector<std::string>>("activation_choices");
        l.activation_choices.clear();
        for (const auto& n : names) {
            try {
                l.activation_choices.push_back(activation_from_string(n));
            } catch (const std::exception& e) {
                r.fail("activation_choices", e.what());
            }
        }
    }
    return l;
}

DatasetSpec parse_dataset(const Reader& r) {
    r.allow_only({"source", "kind", "n_samples", "input_shape", "seed", "images_path", "labels_path", "limit",
                  "val_fraction"});
    DatasetSpec d;
    d.source = r.get("source", d.source);
    d.kind = r.get_parsed("kind", to_string(d.kind), synthetic_kind_from_string);
    d.n_samples = r.get("n_samples", d.n_samples);
    if (r.has("input_shape")) {
        const Reader s = r.child("input_shape");
        s.allow_only({"channels", "height", "width"});
        d.input_shape.channels = s.get("channels", d.input_shape.channels);
        d.input_shape.height = s.get("height", d.input_shape.height);
        d.input_shape.width = s.get("width", d.input_shape.width);
    }
    d.seed = r.get("seed", d.seed);
    d.images_path = r.get("images_path", d.images_path);
    d.labels_path = r.get("labels_path", d.labels_path);
    d.limit = r.get("limit", d.limit);
    d.val_fraction = r.get("val_fraction", d.val_fraction);
    return d;
}

}  // namespace

RunConfig parse_run_config(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config root: expected a JSON object");
    const Reader r(j, "");
    r.allow_only({"schema_version", "method", "ga", "bigan", "train", "limits", "fitness", "surrogate", "dataset",
                  "seed", "out_dir", "workers"});
    RunConfig c;
    c.schema_version = r.get("schema_version", c.schema_version);
    c.method = r.get_parsed("method", to_string(c.method), method_from_string);
    c.fitness = r.get_parsed("fitness", to_string(c.fitness), fitness_kind_from_string);
    if (r.has("ga")) c.ga = parse_ga(r.child("ga"));
    if (r.has("bigan")) c.bigan = parse_bigan(r.child("bigan"));
    if (r.has("train")) c.train = parse_train(r.child("train"));
    if (r.has("limits")) c.limits = parse_limits(r.child("limits"));
    if (r.has("surrogate")) {
        try {
            c.surrogate = j.at("surrogate").get<SurrogateSpec>();
        } catch (const nlohmann::json::exception& e) {
            r.fail("surrogate", e.what());
        }
    }
    if (r.has("dataset")) c.dataset = parse_dataset(r.child("dataset"));
    c.seed = r.get("seed", c.seed);
    c.out_dir = r.get("out_dir", c.out_dir);
    c.workers = r.get("workers", c.workers);
    try {
        c.check();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    return c;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("config not found: " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return parse_run_config(j);
}

void to_json(nlohmann::json& j, const SearchLimits& l) {
    std::vector<std::string> acts;
    for (Activation a : l.activation_choices) acts.emplace_back(to_string(a));
    j = nlohmann::json{{"max_conv_layers", l.max_conv_layers}, {"max_dense_layers", l.max_dense_layers},
                       {"filter_bounds", l.filter_bounds},     {"neuron_bounds", l.neuron_bounds},
                       {"kernel_choices", l.kernel_choices},   {"activation_choices", acts}};
}

void from_json(const nlohmann::json& j, SearchLimits& l) {
    l = parse_limits(Reader(j, "limits"));
}

void to_json(nlohmann::json& j, const GaConfig& c) {
    j = nlohmann::json{{"n_m", c.n_m},
                       {"t", c.t},
                       {"r", c.r},
                       {"d", c.d},
                       {"mutation_fraction", c.mutation_fraction},
                       {"generations", c.generations},
                       {"bigan_iters_per_gen", c.bigan_iters_per_gen},
                       {"elitism", c.elitism}};
    if (c.budget_seconds) j["budget_seconds"] = *c.budget_seconds;
    if (c.budget_evals) j["budget_evals"] = *c.budget_evals;
}

void from_json(const nlohmann::json& j, GaConfig& c) {
    c = parse_ga(Reader(j, "ga"));
}

void to_json(nlohmann::json& j, const DatasetSpec& d) {
    j = nlohmann::json{{"source", d.source},
                       {"n_samples", d.n_samples},
                       {"input_shape", {{"channels", d.input_shape.channels},
                                        {"height", d.input_shape.height},
                                        {"width", d.input_shape.width}}},
                       {"seed", d.seed},
                       {"kind", to_string(d.kind)}};
    if (d.source == "idx") {
        j["images_path"] = d.images_path;
        j["labels_path"] = d.labels_path;
        j["limit"] = d.limit;
        j["val_fraction"] = d.val_fraction;
    }
}

void from_json(const nlohmann::json& j, DatasetSpec& d) {
    d = parse_dataset(Reader(j, "dataset"));
}

void to_json(nlohmann::json& j, const RunConfig& c) {
    j = nlohmann::json{{"schema_version", c.schema_version},
                       {"method", to_string(c.method)},
                       {"fitness", to_string(c.fitness)},
                       {"seed", c.seed},
                       {"out_dir", c.out_dir},
                       {"workers", c.workers},
                       {"ga", c.ga},
                       {"bigan", c.bigan},
                       {"train", c.train},
                       {"limits", c.limits}};
    if (c.surrogate) j["surrogate"] = *c.surrogate;
    if (c.fitness == FitnessKind::tinynet) j["dataset"] = c.dataset;
}

namespace tinynet {

void to_json(nlohmann::json& j, const TrainConfig& c) {
    j = nlohmann::json{{"learning_rate", c.learning_rate},
                       {"batch_size", c.batch_size},
                       {"max_epochs", c.max_epochs},
                       {"patience", c.patience},
                       {"dropout_rate", c.dropout_rate}};
}

void from_json(const nlohmann::json& j, TrainConfig& c) {
    TrainConfig defaults;
    c.learning_rate = j.value("learning_rate", defaults.learning_rate);
    c.batch_size = j.value("batch_size", defaults.batch_size);
    c.max_epochs = j.value("max_epochs", defaults.max_epochs);
    c.patience = j.value("patience", defaults.patience);
    c.dropout_rate = j.value("dropout_rate", defaults.dropout_rate);
}

}  // namespace tinynet

}  // namespace evonas
