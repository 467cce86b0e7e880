#include "evonas/bigan.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace evonas {

namespace {

constexpr double kLeakySlope = 0.01;
constexpr double kProbClamp = 1e-12;

enum class OutKind { tanh_out, logit_out };

struct MlpCache {
    // acts[0] is the input; acts[k+1] is layer k's post-activation output
    // (post-tanh for generators, the raw logit for the discriminator).
    std::vector<std::vector<double>> acts;
};

std::vector<double> mlp_forward(const MlpWeights& mlp, const std::vector<double>& in, OutKind kind,
                                MlpCache* cache) {
    if (static_cast<int>(in.size()) != mlp.dims.front()) {
        throw std::invalid_argument("mlp input length does not match dims[0]");
    }
    std::vector<double> a = in;
    if (cache) cache->acts.assign(1, a);
    const std::size_t n_layers = mlp.w.size();
    for (std::size_t k = 0; k < n_layers; ++k) {
        const auto in_n = static_cast<std::size_t>(mlp.dims[k]);
        const auto out_n = static_cast<std::size_t>(mlp.dims[k + 1]);
        std::vector<double> s(out_n);
        for (std::size_t o = 0; o < out_n; ++o) {
            double acc = mlp.b[k][o];
            const double* wr = &mlp.w[k][o * in_n];
            for (std::size_t i = 0; i < in_n; ++i) acc += wr[i] * a[i];
            s[o] = acc;
        }
        if (k + 1 < n_layers) {
            for (auto& x : s) x = x > 0.0 ? x : kLeakySlope * x;
        } else if (kind == OutKind::tanh_out) {
            for (auto& x : s) x = std::tanh(x);
        }
        a = std::move(s);
        if (cache) cache->acts.push_back(a);
    }
    return a;
}

MlpWeights zero_like(const MlpWeights& mlp) {
    MlpWeights g;
    g.dims = mlp.dims;
    g.w.reserve(mlp.w.size());
    g.b.reserve(mlp.b.size());
    for (const auto& w : mlp.w) g.w.emplace_back(w.size(), 0.0);
    for (const auto& b : mlp.b) g.b.emplace_back(b.size(), 0.0);
    return g;
}

/// Backpropagates dout through the net, accumulating into grad and
/// returning the gradient w.r.t. the input. For tanh_out, dout is the
/// gradient w.r.t. the post-tanh output; for logit_out, w.r.t. the logit.
std::vector<double> mlp_backward(const MlpWeights& mlp, const MlpCache& cache, std::vector<double> dout,
                                 OutKind kind, MlpWeights& grad) {
    const std::size_t n_layers = mlp.w.size();
    std::vector<double> delta = std::move(dout);
    for (std::size_t k = n_layers; k-- > 0;) {
        const auto in_n = static_cast<std::size_t>(mlp.dims[k]);
        const auto out_n = static_cast<std::size_t>(mlp.dims[k + 1]);
        const auto& y = cache.acts[k + 1];
        if (k + 1 == n_layers) {
            if (kind == OutKind::tanh_out) {
                for (std::size_t o = 0; o < out_n; ++o) delta[o] *= 1.0 - y[o] * y[o];
            }
        } else {
            // Hidden leaky_relu: its output sign equals its pre-activation sign.
            for (std::size_t o = 0; o < out_n; ++o) delta[o] *= y[o] > 0.0 ? 1.0 : kLeakySlope;
        }
        const auto& x = cache.acts[k];
        std::vector<double> dprev(in_n, 0.0);
        for (std::size_t o = 0; o < out_n; ++o) {
            const double dl = delta[o];
            grad.b[k][o] += dl;
            double* gw = &grad.w[k][o * in_n];
            const double* wr = &mlp.w[k][o * in_n];
            for (std::size_t i = 0; i < in_n; ++i) {
                gw[i] += dl * x[i];
                dprev[i] += dl * wr[i];
            }
        }
        delta = std::move(dprev);
    }
    return delta;
}

void axpy(MlpWeights& dst, double scale, const MlpWeights& g) {
    for (std::size_t k = 0; k < dst.w.size(); ++k) {
        for (std::size_t i = 0; i < dst.w[k].size(); ++i) dst.w[k][i] += scale * g.w[k][i];
        for (std::size_t i = 0; i < dst.b[k].size(); ++i) dst.b[k][i] += scale * g.b[k][i];
    }
}

std::vector<double> draw_noise(int n, Rng& rng) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<double> z(static_cast<std::size_t>(n));
    for (auto& x : z) x = d(rng);
    return z;
}

double logistic(double s) { return 1.0 / (1.0 + std::exp(-s)); }

}  // namespace

void MlpWeights::check() const {
    if (dims.size() < 2) throw std::invalid_argument("mlp needs at least input and output dims");
    if (w.size() != dims.size() - 1 || b.size() != dims.size() - 1) {
        throw std::invalid_argument("mlp layer count does not match dims");
    }
    for (std::size_t k = 0; k + 1 < dims.size(); ++k) {
        if (dims[k] < 1 || dims[k + 1] < 1) throw std::invalid_argument("mlp dims must be positive");
        if (w[k].size() != static_cast<std::size_t>(dims[k]) * static_cast<std::size_t>(dims[k + 1]) ||
            b[k].size() != static_cast<std::size_t>(dims[k + 1])) {
            throw std::invalid_argument("mlp layer " + std::to_string(k) + " weights do not chain");
        }
    }
}

MlpWeights make_mlp(const std::vector<int>& dims, Rng& rng) {
    MlpWeights mlp;
    mlp.dims = dims;
    for (std::size_t k = 0; k + 1 < dims.size(); ++k) {
        const auto in_n = static_cast<std::size_t>(dims[k]);
        const auto out_n = static_cast<std::size_t>(dims[k + 1]);
        const double limit = std::sqrt(6.0 / static_cast<double>(in_n));
        std::uniform_real_distribution<double> d(-limit, limit);
        std::vector<double> w(in_n * out_n);
        for (auto& x : w) x = d(rng);
        mlp.w.push_back(std::move(w));
        mlp.b.emplace_back(out_n, 0.0);
    }
    mlp.check();
    return mlp;
}

void BiGanConfig::check() const {
    if (noise_dim < 1) throw std::invalid_argument("bigan.noise_dim must be >= 1");
    if (m < 1) throw std::invalid_argument("bigan.m must be >= 1");
    if (probe_size < 1) throw std::invalid_argument("bigan.probe_size must be >= 1");
    if (!(gen_lr > 0.0) || !(disc_lr > 0.0)) throw std::invalid_argument("bigan learning rates must be positive");
    for (int h : gen_hidden) {
        if (h < 1) throw std::invalid_argument("bigan.gen_hidden entries must be >= 1");
    }
    for (int h : disc_hidden) {
        if (h < 1) throw std::invalid_argument("bigan.disc_hidden entries must be >= 1");
    }
}

SlotBounds SlotBounds::from(const SearchLimits& limits) {
    SlotBounds b;
    b.conv_slots = limits.max_conv_layers;
    b.dense_slots = limits.max_dense_layers;
    b.filter_bounds = limits.filter_bounds;
    b.neuron_bounds = limits.neuron_bounds;
    return b;
}

BiGanState init_bigan(const BiGanConfig& cfg, const SearchLimits& limits, Rng& rng) {
    cfg.check();
    limits.check();
    BiGanState s;
    s.bounds = SlotBounds::from(limits);

    std::vector<int> gen_dims{cfg.noise_dim};
    gen_dims.insert(gen_dims.end(), cfg.gen_hidden.begin(), cfg.gen_hidden.end());
    gen_dims.push_back(s.bounds.total());
    std::vector<int> disc_dims{s.bounds.total()};
    disc_dims.insert(disc_dims.end(), cfg.disc_hidden.begin(), cfg.disc_hidden.end());
    disc_dims.push_back(1);

    s.g1 = make_mlp(gen_dims, rng);
    s.g2 = make_mlp(gen_dims, rng);
    s.d = make_mlp(disc_dims, rng);
    s.better_label = 1;
    s.equal_streak = 0;
    s.probe_noise = Tensor({static_cast<std::size_t>(cfg.probe_size), static_cast<std::size_t>(cfg.noise_dim)});
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (auto& x : s.probe_noise.v) x = d(rng);
    return s;
}

std::vector<double> generator_forward(const MlpWeights& g, const std::vector<double>& z) {
    return mlp_forward(g, z, OutKind::tanh_out, nullptr);
}

ContinuousParams rescale(const std::vector<double>& raw, const SlotBounds& bounds) {
    if (static_cast<int>(raw.size()) != bounds.total()) {
        throw std::invalid_argument("raw vector length does not match slot bounds");
    }
    auto map_one = [](double x, std::pair<int, int> pm) {
        const double lo = pm.first, hi = pm.second;
        const long v = std::lround(x * (hi - lo) / 2.0 + (hi + lo) / 2.0);
        return static_cast<int>(std::clamp(v, static_cast<long>(pm.first), static_cast<long>(pm.second)));
    };
    ContinuousParams p;
    for (int i = 0; i < bounds.conv_slots; ++i) p.filters.push_back(map_one(raw[static_cast<std::size_t>(i)], bounds.filter_bounds));
    for (int i = 0; i < bounds.dense_slots; ++i) {
        p.neurons.push_back(map_one(raw[static_cast<std::size_t>(bounds.conv_slots + i)], bounds.neuron_bounds));
    }
    return p;
}

double discriminator_forward(const MlpWeights& d, const std::vector<double>& g_raw) {
    const double logit = mlp_forward(d, g_raw, OutKind::logit_out, nullptr)[0];
    return std::clamp(logistic(logit), kProbClamp, 1.0 - kProbClamp);
}

bool probe_outputs_equal(const BiGanState& state) {
    const std::size_t n = state.probe_noise.shape[0];
    const std::size_t dim = state.probe_noise.shape[1];
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> z(state.probe_noise.v.begin() + static_cast<long>(i * dim),
                              state.probe_noise.v.begin() + static_cast<long>((i + 1) * dim));
        if (!(rescale(generator_forward(state.g1, z), state.bounds) ==
              rescale(generator_forward(state.g2, z), state.bounds))) {
            return false;
        }
    }
    return true;
}

bool reinit_if_stuck(BiGanState& state, Rng& rng) {
    if (probe_outputs_equal(state)) {
        ++state.equal_streak;
    } else {
        state.equal_streak = 0;
    }
    if (state.equal_streak >= 2) {
        MlpWeights& gb = state.better_label == 1 ? state.g2 : state.g1;
        gb = make_mlp(gb.dims, rng);
        state.equal_streak = 0;
        return true;
    }
    return false;
}

ContinuousParams propose_params(const BiGanState& state, Rng& rng) {
    const MlpWeights& ga = state.better_label == 1 ? state.g1 : state.g2;
    return rescale(generator_forward(ga, draw_noise(ga.dims.front(), rng)), state.bounds);
}

BiGanIterationRecord bigan_iteration(BiGanState& state, const FitnessOfParams& fitness_of, const BiGanConfig& cfg,
                                     Rng& rng) {
    BiGanIterationRecord rec;
    rec.reinit_fired = reinit_if_stuck(state, rng);
    // When the generators are still output-identical (stuck but not yet at
    // two strikes), updating G_b would perturb it nondeterministically
    // relative to the probe test; withholding its step keeps the rule's
    // "two consecutive iterations" contract exact. D still learns.
    const bool skip_gb = probe_outputs_equal(state);
    rec.gb_step_skipped = skip_gb;

    const auto m = static_cast<std::size_t>(cfg.m);
    auto score_batch = [&](const MlpWeights& g, std::vector<std::vector<double>>& noise,
                           std::vector<std::vector<double>>& raws) {
        double total = 0.0;
        noise.reserve(m);
        raws.reserve(m);
        for (std::size_t i = 0; i < m; ++i) {
            noise.push_back(draw_noise(cfg.noise_dim, rng));
            raws.push_back(generator_forward(g, noise.back()));
            double f = 0.0;
            try {
                f = fitness_of(rescale(raws.back(), state.bounds));
            } catch (const std::exception&) {
                f = 0.0;  // fitness failures count as accuracy 0
            }
            total += f;
        }
        return total / static_cast<double>(m);
    };
    std::vector<std::vector<double>> z1, z2, raw1, raw2;
    rec.acc1 = score_batch(state.g1, z1, raw1);
    rec.acc2 = score_batch(state.g2, z2, raw2);

    if (rec.acc1 > rec.acc2) {
        state.better_label = 1;
    } else if (rec.acc2 > rec.acc1) {
        state.better_label = 2;
    }  // tie keeps the previous label
    rec.better_label = state.better_label;

    const auto& raw_a = state.better_label == 1 ? raw1 : raw2;
    const auto& raw_b = state.better_label == 1 ? raw2 : raw1;
    const auto& z_b = state.better_label == 1 ? z2 : z1;
    const double inv_m = 1.0 / static_cast<double>(m);

    auto disc_objective = [&]() {
        double total = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            total += std::log(discriminator_forward(state.d, raw_a[i]));
            total += std::log(1.0 - discriminator_forward(state.d, raw_b[i]));
        }
        return total * inv_m;
    };

    // Discriminator: one ascent step on (1/m)*sum[log D(G_a(z)) + log(1-D(G_b(z)))].
    rec.disc_objective_before = disc_objective();
    MlpWeights d_grad = zero_like(state.d);
    for (std::size_t i = 0; i < m; ++i) {
        MlpCache cache;
        const double p = std::clamp(logistic(mlp_forward(state.d, raw_a[i], OutKind::logit_out, &cache)[0]),
                                    kProbClamp, 1.0 - kProbClamp);
        mlp_backward(state.d, cache, {(1.0 - p) * inv_m}, OutKind::logit_out, d_grad);
    }
    for (std::size_t i = 0; i < m; ++i) {
        MlpCache cache;
        const double p = std::clamp(logistic(mlp_forward(state.d, raw_b[i], OutKind::logit_out, &cache)[0]),
                                    kProbClamp, 1.0 - kProbClamp);
        mlp_backward(state.d, cache, {-p * inv_m}, OutKind::logit_out, d_grad);
    }
    axpy(state.d, cfg.disc_lr, d_grad);  // ascent
    rec.disc_objective_after = disc_objective();

    // Worse generator: one descent step on (1/m)*sum log(1-D(G_b(z))),
    // replaying the same noise that produced raw_b, against the updated
    // discriminator. The better generator's weights are never touched.
    MlpWeights& gb = state.better_label == 1 ? state.g2 : state.g1;
    auto gen_objective = [&]() {
        double total = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            total += std::log(1.0 - discriminator_forward(state.d, generator_forward(gb, z_b[i])));
        }
        return total * inv_m;
    };
    rec.gen_objective_before = gen_objective();
    if (!skip_gb) {
        MlpWeights g_grad = zero_like(gb);
        MlpWeights d_scratch = zero_like(state.d);  // discarded; D is fixed here
        for (std::size_t i = 0; i < m; ++i) {
            MlpCache gcache;
            const std::vector<double> raw = mlp_forward(gb, z_b[i], OutKind::tanh_out, &gcache);
            MlpCache dcache;
            const double p = std::clamp(logistic(mlp_forward(state.d, raw, OutKind::logit_out, &dcache)[0]),
                                        kProbClamp, 1.0 - kProbClamp);
            std::vector<double> dx = mlp_backward(state.d, dcache, {-p * inv_m}, OutKind::logit_out, d_scratch);
            mlp_backward(gb, gcache, std::move(dx), OutKind::tanh_out, g_grad);
        }
        axpy(gb, -cfg.gen_lr, g_grad);  // descent
    }
    rec.gen_objective_after = gen_objective();
    return rec;
}

void to_json(nlohmann::json& j, const MlpWeights& m) {
    j = nlohmann::json{{"dims", m.dims}, {"w", m.w}, {"b", m.b}};
}

void from_json(const nlohmann::json& j, MlpWeights& m) {
    j.at("dims").get_to(m.dims);
    j.at("w").get_to(m.w);
    j.at("b").get_to(m.b);
    m.check();
}

void to_json(nlohmann::json& j, const SlotBounds& b) {
    j = nlohmann::json{{"conv_slots", b.conv_slots},
                       {"dense_slots", b.dense_slots},
                       {"filter_bounds", b.filter_bounds},
                       {"neuron_bounds", b.neuron_bounds}};
}

void from_json(const nlohmann::json& j, SlotBounds& b) {
    j.at("conv_slots").get_to(b.conv_slots);
    j.at("dense_slots").get_to(b.dense_slots);
    j.at("filter_bounds").get_to(b.filter_bounds);
    j.at("neuron_bounds").get_to(b.neuron_bounds);
}

void to_json(nlohmann::json& j, const BiGanState& s) {
    j = nlohmann::json{{"version", 1},
                       {"g1", s.g1},
                       {"g2", s.g2},
                       {"d", s.d},
                       {"better_label", s.better_label},
                       {"equal_streak", s.equal_streak},
                       {"probe_noise", s.probe_noise},
                       {"bounds", s.bounds}};
}

void from_json(const nlohmann::json& j, BiGanState& s) {
    if (j.value("version", 0) != 1) throw std::invalid_argument("unsupported bigan state version");
    j.at("g1").get_to(s.g1);
    j.at("g2").get_to(s.g2);
    j.at("d").get_to(s.d);
    j.at("better_label").get_to(s.better_label);
    j.at("equal_streak").get_to(s.equal_streak);
    j.at("probe_noise").get_to(s.probe_noise);
    j.at("bounds").get_to(s.bounds);
}

void to_json(nlohmann::json& j, const BiGanConfig& c) {
    j = nlohmann::json{{"noise_dim", c.noise_dim}, {"gen_hidden", c.gen_hidden}, {"disc_hidden", c.disc_hidden},
                       {"m", c.m},                 {"gen_lr", c.gen_lr},         {"disc_lr", c.disc_lr},
                       {"probe_size", c.probe_size}};
}

void from_json(const nlohmann::json& j, BiGanConfig& c) {
    BiGanConfig defaults;
    c.noise_dim = j.value("noise_dim", defaults.noise_dim);
    c.gen_hidden = j.value("gen_hidden", defaults.gen_hidden);
    c.disc_hidden = j.value("disc_hidden", defaults.disc_hidden);
    c.m = j.value("m", defaults.m);
    c.gen_lr = j.value("gen_lr", defaults.gen_lr);
    c.disc_lr = j.value("disc_lr", defaults.disc_lr);
    c.probe_size = j.value("probe_size", defaults.probe_size);
}

void save_bigan_state(const std::string& path, const BiGanState& state) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write bigan state: " + path);
    f << nlohmann::json(state).dump(2) << '\n';
}

BiGanState load_bigan_state(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read bigan state: " + path);
    nlohmann::json j;
    f >> j;
    return j.get<BiGanState>();
}

}  // namespace evonas
