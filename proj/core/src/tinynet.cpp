#include "evonas/tinynet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

namespace evonas::tinynet {

namespace {

constexpr double kLeakySlope = 0.01;
constexpr double kBnMomentum = 0.9;
constexpr double kBnEpsilon = 1e-5;

double he_limit(std::size_t fan_in) {
    return std::sqrt(6.0 / static_cast<double>(fan_in));
}

void init_uniform(std::vector<double>& w, std::size_t fan_in, Rng& rng) {
    const double limit = he_limit(fan_in);
    std::uniform_real_distribution<double> d(-limit, limit);
    for (auto& x : w) x = d(rng);
}

}  // namespace

class Layer {
public:
    virtual ~Layer() = default;
    virtual Tensor forward(const Tensor& x, bool training, Rng& rng) = 0;
    virtual Tensor backward(const Tensor& dy) = 0;
    virtual void collect_params(std::vector<ParamView>&) {}
    virtual void set_dropout_rate(double) {}
};

namespace {

class Conv2d final : public Layer {
public:
    Conv2d(std::size_t in_channels, std::size_t filters, std::size_t kernel, Rng& rng)
        : cin_(in_channels), f_(filters), k_(kernel), pad_((kernel - 1) / 2) {
        w_.assign(f_ * cin_ * k_ * k_, 0.0);
        b_.assign(f_, 0.0);
        gw_.assign(w_.size(), 0.0);
        gb_.assign(b_.size(), 0.0);
        init_uniform(w_, cin_ * k_ * k_, rng);
    }

    Tensor forward(const Tensor& x, bool, Rng&) override {
        x_ = x;
        const std::size_t n = x.shape[0], h = x.shape[2], wd = x.shape[3];
        Tensor y({n, f_, h, wd});
        for (std::size_t ni = 0; ni < n; ++ni) {
            for (std::size_t f = 0; f < f_; ++f) {
                const double bias = b_[f];
                for (std::size_t i = 0; i < h; ++i) {
                    for (std::size_t j = 0; j < wd; ++j) {
                        double acc = bias;
                        for (std::size_t c = 0; c < cin_; ++c) {
                            for (std::size_t u = 0; u < k_; ++u) {
                                const long ii = static_cast<long>(i + u) - static_cast<long>(pad_);
                                if (ii < 0 || ii >= static_cast<long>(h)) continue;
                                for (std::size_t v = 0; v < k_; ++v) {
                                    const long jj = static_cast<long>(j + v) - static_cast<long>(pad_);
                                    if (jj < 0 || jj >= static_cast<long>(wd)) continue;
                                    acc += w_[((f * cin_ + c) * k_ + u) * k_ + v] *
                                           x.at4(ni, c, static_cast<std::size_t>(ii), static_cast<std::size_t>(jj));
                                }
                            }
                        }
                        y.at4(ni, f, i, j) = acc;
                    }
                }
            }
        }
        return y;
    }

    Tensor backward(const Tensor& dy) override {
        const std::size_t n = x_.shape[0], h = x_.shape[2], wd = x_.shape[3];
        Tensor dx(x_.shape);
        for (std::size_t ni = 0; ni < n; ++ni) {
            for (std::size_t f = 0; f < f_; ++f) {
                for (std::size_t i = 0; i < h; ++i) {
                    for (std::size_t j = 0; j < wd; ++j) {
                        const double g = dy.at4(ni, f, i, j);
                        if (g == 0.0) continue;
                        gb_[f] += g;
                        for (std::size_t c = 0; c < cin_; ++c) {
                            for (std::size_t u = 0; u < k_; ++u) {
                                const long ii = static_cast<long>(i + u) - static_cast<long>(pad_);
                                if (ii < 0 || ii >= static_cast<long>(h)) continue;
                                for (std::size_t v = 0; v < k_; ++v) {
                                    const long jj = static_cast<long>(j + v) - static_cast<long>(pad_);
                                    if (jj < 0 || jj >= static_cast<long>(wd)) continue;
                                    const std::size_t wi = ((f * cin_ + c) * k_ + u) * k_ + v;
                                    const auto iu = static_cast<std::size_t>(ii);
                                    const auto jv = static_cast<std::size_t>(jj);
                                    gw_[wi] += g * x_.at4(ni, c, iu, jv);
                                    dx.at4(ni, c, iu, jv) += g * w_[wi];
                                }
                            }
                        }
                    }
                }
            }
        }
        return dx;
    }

    void collect_params(std::vector<ParamView>& out) override {
        out.push_back({&w_, &gw_});
        out.push_back({&b_, &gb_});
    }

private:
    std::size_t cin_, f_, k_, pad_;
    std::vector<double> w_, b_, gw_, gb_;
    Tensor x_;
};

class Dense final : public Layer {
public:
    Dense(std::size_t in, std::size_t out, Rng& rng) : in_(in), out_(out) {
        w_.assign(out_ * in_, 0.0);
        b_.assign(out_, 0.0);
        gw_.assign(w_.size(), 0.0);
        gb_.assign(b_.size(), 0.0);
        init_uniform(w_, in_, rng);
    }

    Tensor forward(const Tensor& x, bool, Rng&) override {
        x_ = x;
        const std::size_t n = x.shape[0];
        Tensor y({n, out_});
        for (std::size_t ni = 0; ni < n; ++ni) {
            const double* xr = &x.v[ni * in_];
            for (std::size_t o = 0; o < out_; ++o) {
                const double* wr = &w_[o * in_];
                double acc = b_[o];
                for (std::size_t i = 0; i < in_; ++i) acc += wr[i] * xr[i];
                y.at2(ni, o) = acc;
            }
        }
        return y;
    }

    Tensor backward(const Tensor& dy) override {
        const std::size_t n = x_.shape[0];
        Tensor dx({n, in_});
        for (std::size_t ni = 0; ni < n; ++ni) {
            const double* xr = &x_.v[ni * in_];
            double* dxr = &dx.v[ni * in_];
            for (std::size_t o = 0; o < out_; ++o) {
                const double g = dy.at2(ni, o);
                if (g == 0.0) continue;
                gb_[o] += g;
                double* gwr = &gw_[o * in_];
                const double* wr = &w_[o * in_];
                for (std::size_t i = 0; i < in_; ++i) {
                    gwr[i] += g * xr[i];
                    dxr[i] += g * wr[i];
                }
            }
        }
        return dx;
    }

    void collect_params(std::vector<ParamView>& out) override {
        out.push_back({&w_, &gw_});
        out.push_back({&b_, &gb_});
    }

private:
    std::size_t in_, out_;
    std::vector<double> w_, b_, gw_, gb_;
    Tensor x_;
};

class ActivationLayer final : public Layer {
public:
    explicit ActivationLayer(Activation act) : act_(act) {}

    Tensor forward(const Tensor& x, bool, Rng&) override {
        y_ = x;
        switch (act_) {
            case Activation::relu:
                for (auto& v : y_.v) v = v > 0.0 ? v : 0.0;
                break;
            case Activation::leaky_relu:
                for (auto& v : y_.v) v = v > 0.0 ? v : kLeakySlope * v;
                break;
            case Activation::sigmoid:
                for (auto& v : y_.v) v = 1.0 / (1.0 + std::exp(-v));
                break;
            case Activation::tanh:
                for (auto& v : y_.v) v = std::tanh(v);
                break;
        }
        return y_;
    }

    Tensor backward(const Tensor& dy) override {
        Tensor dx = dy;
        switch (act_) {
            case Activation::relu:
                for (std::size_t i = 0; i < dx.v.size(); ++i) dx.v[i] = y_.v[i] > 0.0 ? dx.v[i] : 0.0;
                break;
            case Activation::leaky_relu:
                for (std::size_t i = 0; i < dx.v.size(); ++i) dx.v[i] *= y_.v[i] > 0.0 ? 1.0 : kLeakySlope;
                break;
            case Activation::sigmoid:
                for (std::size_t i = 0; i < dx.v.size(); ++i) dx.v[i] *= y_.v[i] * (1.0 - y_.v[i]);
                break;
            case Activation::tanh:
                for (std::size_t i = 0; i < dx.v.size(); ++i) dx.v[i] *= 1.0 - y_.v[i] * y_.v[i];
                break;
        }
        return dx;
    }

private:
    Activation act_;
    Tensor y_;
};

class MaxPool2x2 final : public Layer {
public:
    Tensor forward(const Tensor& x, bool, Rng&) override {
        in_shape_ = x.shape;
        const std::size_t n = x.shape[0], c = x.shape[1], h = x.shape[2], w = x.shape[3];
        const std::size_t oh = h / 2, ow = w / 2;
        Tensor y({n, c, oh, ow});
        argmax_.assign(y.size(), 0);
        std::size_t oi = 0;
        for (std::size_t ni = 0; ni < n; ++ni) {
            for (std::size_t ci = 0; ci < c; ++ci) {
                for (std::size_t i = 0; i < oh; ++i) {
                    for (std::size_t j = 0; j < ow; ++j, ++oi) {
                        std::size_t best_idx = 0;
                        double best = -std::numeric_limits<double>::infinity();
                        for (std::size_t u = 0; u < 2; ++u) {
                            for (std::size_t v = 0; v < 2; ++v) {
                                const std::size_t idx =
                                    ((ni * c + ci) * h + (2 * i + u)) * w + (2 * j + v);
                                if (x.v[idx] > best) {
                                    best = x.v[idx];
                                    best_idx = idx;
                                }
                            }
                        }
                        y.v[oi] = best;
                        argmax_[oi] = best_idx;
                    }
                }
            }
        }
        return y;
    }

    Tensor backward(const Tensor& dy) override {
        Tensor dx(in_shape_);
        for (std::size_t i = 0; i < dy.v.size(); ++i) dx.v[argmax_[i]] += dy.v[i];
        return dx;
    }

private:
    std::vector<std::size_t> in_shape_;
    std::vector<std::size_t> argmax_;
};

// Normalizes over all axes except axis 1 (channels for rank-4 input,
// features for rank-2 input).
class BatchNorm final : public Layer {
public:
    explicit BatchNorm(std::size_t channels) : c_(channels) {
        gamma_.assign(c_, 1.0);
        beta_.assign(c_, 0.0);
        ggamma_.assign(c_, 0.0);
        gbeta_.assign(c_, 0.0);
        running_mean_.assign(c_, 0.0);
        running_var_.assign(c_, 1.0);
    }

    Tensor forward(const Tensor& x, bool training, Rng&) override {
        const std::size_t spatial = x.v.size() / (x.shape[0] * c_);
        const std::size_t m = x.shape[0] * spatial;
        Tensor y(x.shape);
        if (training) {
            xhat_ = Tensor(x.shape);
            istd_.assign(c_, 0.0);
            m_ = m;
            for (std::size_t ci = 0; ci < c_; ++ci) {
                double mean = 0.0;
                for_channel(x, ci, [&](double v, std::size_t) { mean += v; });
                mean /= static_cast<double>(m);
                double var = 0.0;
                for_channel(x, ci, [&](double v, std::size_t) { var += (v - mean) * (v - mean); });
                var /= static_cast<double>(m);
                const double istd = 1.0 / std::sqrt(var + kBnEpsilon);
                istd_[ci] = istd;
                for_channel(x, ci, [&](double v, std::size_t idx) {
                    const double xh = (v - mean) * istd;
                    xhat_.v[idx] = xh;
                    y.v[idx] = gamma_[ci] * xh + beta_[ci];
                });
                running_mean_[ci] = kBnMomentum * running_mean_[ci] + (1.0 - kBnMomentum) * mean;
                running_var_[ci] = kBnMomentum * running_var_[ci] + (1.0 - kBnMomentum) * var;
            }
        } else {
            for (std::size_t ci = 0; ci < c_; ++ci) {
                const double istd = 1.0 / std::sqrt(running_var_[ci] + kBnEpsilon);
                const double mean = running_mean_[ci];
                for_channel(x, ci, [&](double v, std::size_t idx) {
                    y.v[idx] = gamma_[ci] * (v - mean) * istd + beta_[ci];
                });
            }
        }
        return y;
    }

    Tensor backward(const Tensor& dy) override {
        Tensor dx(dy.shape);
        const double m = static_cast<double>(m_);
        for (std::size_t ci = 0; ci < c_; ++ci) {
            double sum_dxhat = 0.0, sum_dxhat_xhat = 0.0;
            for_channel(dy, ci, [&](double g, std::size_t idx) {
                ggamma_[ci] += g * xhat_.v[idx];
                gbeta_[ci] += g;
                const double dxhat = g * gamma_[ci];
                sum_dxhat += dxhat;
                sum_dxhat_xhat += dxhat * xhat_.v[idx];
            });
            for_channel(dy, ci, [&](double g, std::size_t idx) {
                const double dxhat = g * gamma_[ci];
                dx.v[idx] = istd_[ci] / m * (m * dxhat - sum_dxhat - xhat_.v[idx] * sum_dxhat_xhat);
            });
        }
        return dx;
    }

    void collect_params(std::vector<ParamView>& out) override {
        out.push_back({&gamma_, &ggamma_});
        out.push_back({&beta_, &gbeta_});
    }

private:
    template <typename Fn>
    void for_channel(const Tensor& t, std::size_t ci, Fn&& fn) const {
        const std::size_t n = t.shape[0];
        const std::size_t spatial = t.v.size() / (n * c_);
        for (std::size_t ni = 0; ni < n; ++ni) {
            const std::size_t base = (ni * c_ + ci) * spatial;
            for (std::size_t s = 0; s < spatial; ++s) fn(t.v[base + s], base + s);
        }
    }

    std::size_t c_;
    std::size_t m_ = 1;
    std::vector<double> gamma_, beta_, ggamma_, gbeta_;
    std::vector<double> running_mean_, running_var_;
    Tensor xhat_;
    std::vector<double> istd_;
};

class Dropout final : public Layer {
public:
    explicit Dropout(double rate) : rate_(rate) {}

    Tensor forward(const Tensor& x, bool training, Rng& rng) override {
        if (!training || rate_ <= 0.0) {
            mask_.clear();
            return x;
        }
        Tensor y = x;
        mask_.assign(x.v.size(), 0.0);
        std::uniform_real_distribution<double> d(0.0, 1.0);
        const double keep = 1.0 - rate_;
        for (std::size_t i = 0; i < y.v.size(); ++i) {
            mask_[i] = d(rng) < keep ? 1.0 / keep : 0.0;
            y.v[i] *= mask_[i];
        }
        return y;
    }

    Tensor backward(const Tensor& dy) override {
        if (mask_.empty()) return dy;
        Tensor dx = dy;
        for (std::size_t i = 0; i < dx.v.size(); ++i) dx.v[i] *= mask_[i];
        return dx;
    }

    void set_dropout_rate(double p) override { rate_ = p; }

private:
    double rate_;
    std::vector<double> mask_;
};

class Flatten final : public Layer {
public:
    Tensor forward(const Tensor& x, bool, Rng&) override {
        in_shape_ = x.shape;
        Tensor y = x;
        y.shape = {x.shape[0], x.v.size() / x.shape[0]};
        return y;
    }

    Tensor backward(const Tensor& dy) override {
        Tensor dx = dy;
        dx.shape = in_shape_;
        return dx;
    }

private:
    std::vector<std::size_t> in_shape_;
};

void check_labels(const std::vector<int>& labels, int n_classes) {
    for (int y : labels) {
        if (y < 0 || y >= n_classes) {
            throw std::invalid_argument("label " + std::to_string(y) + " outside [0, " + std::to_string(n_classes) +
                                        ")");
        }
    }
}

// Recomputes spatial dims, pool skipping, and kernel feasibility. Idempotent,
// so hand-built specs get the same checks as genome-derived ones.
NetworkSpec resolve_spec(NetworkSpec spec) {
    std::size_t h = spec.input.height, w = spec.input.width;
    int layer_no = 0;
    for (auto& cb : spec.conv) {
        ++layer_no;
        if (cb.filters < 1) throw BuildError("conv layer " + std::to_string(layer_no) + ": filters must be >= 1");
        if (static_cast<std::size_t>(cb.kernel) > h || static_cast<std::size_t>(cb.kernel) > w) {
            throw BuildError("conv layer " + std::to_string(layer_no) + ": kernel " + std::to_string(cb.kernel) +
                             " exceeds input " + std::to_string(h) + "x" + std::to_string(w));
        }
        // Pool is skipped when halving would drop a spatial dim below 1.
        cb.pool_applied = cb.max_pool && h >= 2 && w >= 2;
        if (cb.pool_applied) {
            h /= 2;
            w /= 2;
        }
        cb.out_height = h;
        cb.out_width = w;
    }
    if (spec.n_classes < 2) throw BuildError("network needs at least 2 classes");
    for (std::size_t i = 0; i < spec.dense.size(); ++i) {
        if (spec.dense[i].units < 1) {
            throw BuildError("dense layer " + std::to_string(i + 1) + ": units must be >= 1");
        }
    }
    return spec;
}

}  // namespace

NetworkSpec make_spec(const Genome& genome, const ContinuousParams& params, InputShape input, int n_classes) {
    NetworkSpec spec;
    spec.input = input;
    spec.n_classes = n_classes;
    for (std::size_t i = 0; i < genome.conv.size(); ++i) {
        const auto& g = genome.conv[i];
        if (!g.exists) continue;
        ConvBlockSpec cb;
        cb.filters = i < params.filters.size() ? params.filters[i] : 1;
        cb.kernel = g.kernel_size;
        cb.activation = g.activation;
        cb.batch_norm = g.batch_norm;
        cb.max_pool = g.max_pool;
        spec.conv.push_back(cb);
    }
    for (std::size_t i = 0; i < genome.dense.size(); ++i) {
        const auto& g = genome.dense[i];
        if (!g.exists) continue;
        DenseBlockSpec db;
        db.units = i < params.neurons.size() ? params.neurons[i] : 1;
        db.activation = g.activation;
        db.batch_norm = g.batch_norm;
        db.dropout = g.dropout;
        spec.dense.push_back(db);
    }
    return resolve_spec(spec);
}

Network::Network(NetworkSpec spec, Rng& rng) : spec_(resolve_spec(std::move(spec))) {
    std::size_t channels = spec_.input.channels;
    for (const auto& cb : spec_.conv) {
        layers_.push_back(std::make_unique<Conv2d>(channels, cb.filters, cb.kernel, rng));
        channels = cb.filters;
        if (cb.batch_norm) layers_.push_back(std::make_unique<BatchNorm>(channels));
        layers_.push_back(std::make_unique<ActivationLayer>(cb.activation));
        if (cb.pool_applied) layers_.push_back(std::make_unique<MaxPool2x2>());
    }
    layers_.push_back(std::make_unique<Flatten>());
    std::size_t features = spec_.conv.empty()
                               ? spec_.input.flat()
                               : channels * spec_.conv.back().out_height * spec_.conv.back().out_width;
    for (const auto& db : spec_.dense) {
        layers_.push_back(std::make_unique<Dense>(features, db.units, rng));
        features = db.units;
        if (db.batch_norm) layers_.push_back(std::make_unique<BatchNorm>(features));
        layers_.push_back(std::make_unique<ActivationLayer>(db.activation));
        if (db.dropout) layers_.push_back(std::make_unique<Dropout>(0.5));
    }
    layers_.push_back(std::make_unique<Dense>(features, spec_.n_classes, rng));
}

Network::Network(Network&&) noexcept = default;
Network& Network::operator=(Network&&) noexcept = default;
Network::~Network() = default;

namespace {

void check_batch_shape(const Tensor& batch, const NetworkSpec& spec) {
    const bool has_conv = !spec.conv.empty();
    if (has_conv) {
        if (batch.shape.size() != 4 || batch.shape[1] != spec.input.channels ||
            batch.shape[2] != spec.input.height || batch.shape[3] != spec.input.width) {
            throw std::invalid_argument("batch shape does not match network input shape");
        }
    } else {
        const bool flat_ok = batch.shape.size() == 2 && batch.shape[1] == spec.input.flat();
        const bool full_ok = batch.shape.size() == 4 && batch.shape[1] == spec.input.channels &&
                             batch.shape[2] == spec.input.height && batch.shape[3] == spec.input.width;
        if (!flat_ok && !full_ok) throw std::invalid_argument("batch shape does not match network input shape");
    }
}

void softmax_rows(Tensor& logits) {
    const std::size_t n = logits.shape[0], k = logits.shape[1];
    for (std::size_t i = 0; i < n; ++i) {
        double* row = &logits.v[i * k];
        const double mx = *std::max_element(row, row + k);
        double sum = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            row[j] = std::exp(row[j] - mx);
            sum += row[j];
        }
        for (std::size_t j = 0; j < k; ++j) row[j] /= sum;
    }
}

}  // namespace

Tensor Network::forward(const Tensor& batch, bool training, Rng& rng) {
    check_batch_shape(batch, spec_);
    Tensor cur = batch;
    for (auto& layer : layers_) cur = layer->forward(cur, training, rng);
    softmax_rows(cur);
    return cur;
}

Tensor Network::forward(const Tensor& batch) {
    Rng dummy(0);
    return forward(batch, false, dummy);
}

double Network::loss_and_gradients(const Tensor& batch, const std::vector<int>& labels, bool training, Rng& rng) {
    check_labels(labels, spec_.n_classes);
    if (labels.size() != batch.shape[0]) throw std::invalid_argument("label count does not match batch size");
    zero_grads();
    Tensor probs = forward(batch, training, rng);
    const std::size_t n = probs.shape[0], k = probs.shape[1];
    double loss = 0.0;
    Tensor dlogits({n, k});
    for (std::size_t i = 0; i < n; ++i) {
        const double p = probs.at2(i, static_cast<std::size_t>(labels[i]));
        loss -= std::log(std::max(p, 1e-300));
        for (std::size_t j = 0; j < k; ++j) {
            dlogits.at2(i, j) = (probs.at2(i, j) - (static_cast<std::size_t>(labels[i]) == j ? 1.0 : 0.0)) /
                                static_cast<double>(n);
        }
    }
    loss /= static_cast<double>(n);
    Tensor grad = dlogits;
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) grad = (*it)->backward(grad);
    return loss;
}

double Network::loss_only(const Tensor& batch, const std::vector<int>& labels, bool training, Rng& rng) {
    check_labels(labels, spec_.n_classes);
    Tensor probs = forward(batch, training, rng);
    double loss = 0.0;
    for (std::size_t i = 0; i < probs.shape[0]; ++i) {
        loss -= std::log(std::max(probs.at2(i, static_cast<std::size_t>(labels[i])), 1e-300));
    }
    return loss / static_cast<double>(probs.shape[0]);
}

void Network::sgd_step(double learning_rate) {
    for (auto& p : params()) {
        for (std::size_t i = 0; i < p.value->size(); ++i) (*p.value)[i] -= learning_rate * (*p.grad)[i];
    }
}

void Network::zero_grads() {
    for (auto& p : params()) std::fill(p.grad->begin(), p.grad->end(), 0.0);
}

std::vector<ParamView> Network::params() {
    std::vector<ParamView> out;
    for (auto& layer : layers_) layer->collect_params(out);
    return out;
}

std::size_t Network::param_count() const {
    std::size_t n = 0;
    for (auto& layer : const_cast<Network*>(this)->layers_) {
        std::vector<ParamView> views;
        layer->collect_params(views);
        for (const auto& v : views) n += v.value->size();
    }
    return n;
}

void Network::set_dropout_rate(double p) {
    for (auto& layer : layers_) layer->set_dropout_rate(p);
}

double Network::accuracy(const LabeledData& data) {
    const std::size_t n = data.size();
    if (n == 0) return 0.0;
    std::size_t correct = 0;
    constexpr int kChunk = 64;
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t start = 0; start < n; start += kChunk) {
        const std::size_t stop = std::min(n, start + kChunk);
        std::vector<int> chunk(idx.begin() + static_cast<long>(start), idx.begin() + static_cast<long>(stop));
        Tensor probs = forward(gather_rows(data.inputs, chunk));
        for (std::size_t i = 0; i < chunk.size(); ++i) {
            std::size_t best = 0;
            for (std::size_t j = 1; j < probs.shape[1]; ++j) {
                if (probs.at2(i, j) > probs.at2(i, best)) best = j;
            }
            if (static_cast<int>(best) == data.labels[chunk[i]]) ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(n);
}

double Network::mean_loss(const LabeledData& data) {
    const std::size_t n = data.size();
    if (n == 0) return 0.0;
    double total = 0.0;
    constexpr int kChunk = 64;
    Rng dummy(0);
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t start = 0; start < n; start += kChunk) {
        const std::size_t stop = std::min(n, start + kChunk);
        std::vector<int> chunk(idx.begin() + static_cast<long>(start), idx.begin() + static_cast<long>(stop));
        std::vector<int> labels;
        labels.reserve(chunk.size());
        for (int i : chunk) labels.push_back(data.labels[i]);
        total += loss_only(gather_rows(data.inputs, chunk), labels, false, dummy) * static_cast<double>(chunk.size());
    }
    return total / static_cast<double>(n);
}

Network build_network(const Genome& genome, const ContinuousParams& params, InputShape input, int n_classes,
                      Rng& rng) {
    return Network(make_spec(genome, params, input, n_classes), rng);
}

Network build_network(const NetworkSpec& spec, Rng& rng) {
    return Network(spec, rng);
}

Tensor gather_rows(const Tensor& x, const std::vector<int>& indices) {
    std::vector<std::size_t> shape = x.shape;
    shape[0] = indices.size();
    Tensor out(shape);
    const std::size_t row = x.v.size() / x.shape[0];
    for (std::size_t i = 0; i < indices.size(); ++i) {
        std::copy_n(x.v.begin() + static_cast<long>(indices[i] * row), row,
                    out.v.begin() + static_cast<long>(i * row));
    }
    return out;
}

TrainResult train_with_early_stop(Network& net, const LabeledData& train_split, const LabeledData& val_split,
                                  const TrainConfig& cfg, Rng& rng) {
    if (train_split.size() == 0 || val_split.size() == 0) {
        throw std::invalid_argument("train and validation splits must be non-empty");
    }
    net.set_dropout_rate(cfg.dropout_rate);
    TrainResult result;
    if (cfg.max_epochs == 0) {
        result.best_val_accuracy = net.accuracy(val_split);
        result.final_val_loss = net.mean_loss(val_split);
        return result;
    }
    std::vector<int> order(train_split.size());
    std::iota(order.begin(), order.end(), 0);
    double best = -1.0;
    int streak = 0;
    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        result.epochs_run = epoch;
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
            std::vector<int> batch_idx(order.begin() + static_cast<long>(start),
                                       order.begin() + static_cast<long>(stop));
            std::vector<int> labels;
            labels.reserve(batch_idx.size());
            for (int i : batch_idx) labels.push_back(train_split.labels[i]);
            net.loss_and_gradients(gather_rows(train_split.inputs, batch_idx), labels, true, rng);
            net.sgd_step(cfg.learning_rate);
        }
        const double acc = net.accuracy(val_split);
        if (acc > best) {
            best = acc;
            streak = 0;
        } else if (++streak >= cfg.patience) {
            break;
        }
    }
    result.best_val_accuracy = best;
    result.final_val_loss = net.mean_loss(val_split);
    return result;
}

double grad_check(Network& net, double eps, Rng& rng, double corruption) {
    // One random batch of two samples with inputs in (-1, 1).
    const auto& spec = net.spec();
    Tensor batch = spec.conv.empty() ? Tensor({2, spec.input.flat()})
                                     : Tensor({2, spec.input.channels, spec.input.height, spec.input.width});
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (auto& v : batch.v) v = d(rng);
    std::vector<int> labels(2);
    std::uniform_int_distribution<int> dl(0, spec.n_classes - 1);
    for (auto& y : labels) y = dl(rng);

    const std::uint64_t mask_seed = rng();
    Rng mask_rng(mask_seed);
    net.loss_and_gradients(batch, labels, true, mask_rng);

    auto views = net.params();
    std::vector<double> analytic;
    for (const auto& p : views) analytic.insert(analytic.end(), p.grad->begin(), p.grad->end());
    if (corruption != 0.0 && !analytic.empty()) analytic[analytic.size() / 2] += corruption;

    double max_rel = 0.0;
    std::size_t flat = 0;
    for (auto& p : views) {
        for (std::size_t i = 0; i < p.value->size(); ++i, ++flat) {
            double& w = (*p.value)[i];
            const double orig = w;
            w = orig + eps;
            Rng rp(mask_seed);
            const double lp = net.loss_only(batch, labels, true, rp);
            w = orig - eps;
            Rng rm(mask_seed);
            const double lm = net.loss_only(batch, labels, true, rm);
            w = orig;
            const double fd = (lp - lm) / (2.0 * eps);
            const double a = analytic[flat];
            const double rel = std::abs(a - fd) / std::max(std::abs(a) + std::abs(fd), 1e-2);
            max_rel = std::max(max_rel, rel);
        }
    }
    return max_rel;
}

}  // namespace evonas::tinynet
