#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "evonas/genome.hpp"
#include "evonas/rng.hpp"
#include "evonas/tensor.hpp"

namespace evonas::tinynet {

/// Raised when a candidate cannot be instantiated as a network (for example
/// a conv kernel larger than its input). The message names the layer.
class BuildError : public std::runtime_error {
public:
    explicit BuildError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InputShape {
    std::size_t channels = 1;
    std::size_t height = 1;
    std::size_t width = 1;

    std::size_t flat() const { return channels * height * width; }
    bool operator==(const InputShape&) const = default;
};

struct ConvBlockSpec {
    int filters = 1;
    int kernel = 3;
    Activation activation = Activation::relu;
    bool batch_norm = false;
    bool max_pool = false;
    bool pool_applied = false;  // false when the pool was skipped to keep dims >= 1
    std::size_t out_height = 0;
    std::size_t out_width = 0;
};

struct DenseBlockSpec {
    int units = 1;
    Activation activation = Activation::relu;
    bool batch_norm = false;
    bool dropout = false;
};

/// Concrete layer stack derived from (genome, params): conv blocks in gene
/// order skipping inactive genes, flatten, dense blocks, then a final
/// classifier dense layer with softmax.
struct NetworkSpec {
    InputShape input;
    int n_classes = 2;
    std::vector<ConvBlockSpec> conv;
    std::vector<DenseBlockSpec> dense;
};

/// Builds the layer stack description and resolves pool skipping. Throws
/// BuildError when an active conv kernel exceeds the current spatial dims.
NetworkSpec make_spec(const Genome& genome, const ContinuousParams& params, InputShape input, int n_classes);

struct ParamView {
    std::vector<double>* value;
    std::vector<double>* grad;
};

struct TrainConfig {
    double learning_rate = 0.01;
    int batch_size = 32;
    int max_epochs = 20;
    int patience = 5;  // early-stop patience c
    double dropout_rate = 0.5;
};

struct LabeledData {
    Tensor inputs;            // (N, C, H, W) or (N, features)
    std::vector<int> labels;  // values in [0, n_classes)

    std::size_t size() const { return labels.size(); }
};

class Layer;

/// A feed-forward classifier assembled from a NetworkSpec. Forward returns
/// class probabilities; every row sums to 1. Instances are confined to one
/// evaluation task, distinct networks may train concurrently.
class Network {
public:
    Network(NetworkSpec spec, Rng& rng);
    Network(Network&&) noexcept;
    Network& operator=(Network&&) noexcept;
    ~Network();

    const NetworkSpec& spec() const { return spec_; }

    /// training=true enables dropout masks (drawn from rng) and batch-norm
    /// batch statistics; training=false is deterministic.
    Tensor forward(const Tensor& batch, bool training, Rng& rng);
    Tensor forward(const Tensor& batch);  // inference, no rng needed

    /// Mean softmax cross-entropy plus gradients for every trainable weight.
    double loss_and_gradients(const Tensor& batch, const std::vector<int>& labels, bool training, Rng& rng);

    /// Forward + loss without touching gradients (finite-difference probes).
    double loss_only(const Tensor& batch, const std::vector<int>& labels, bool training, Rng& rng);

    void sgd_step(double learning_rate);
    void zero_grads();

    std::vector<ParamView> params();
    std::size_t param_count() const;

    void set_dropout_rate(double p);

    double accuracy(const LabeledData& data);
    double mean_loss(const LabeledData& data);

private:
    NetworkSpec spec_;
    std::vector<std::unique_ptr<Layer>> layers_;
};

Network build_network(const Genome& genome, const ContinuousParams& params, InputShape input, int n_classes,
                      Rng& rng);
Network build_network(const NetworkSpec& spec, Rng& rng);

struct TrainResult {
    double best_val_accuracy = 0.0;
    int epochs_run = 0;
    double final_val_loss = 0.0;
};

/// SGD with early stopping: training halts once validation accuracy fails
/// to exceed its running best for cfg.patience consecutive epochs, or at
/// cfg.max_epochs. max_epochs=0 reports the untrained accuracy.
TrainResult train_with_early_stop(Network& net, const LabeledData& train_split, const LabeledData& val_split,
                                  const TrainConfig& cfg, Rng& rng);

/// Max relative error between analytic and central-difference gradients on
/// one random batch drawn from rng. `corruption` is a test hook: it offsets
/// one analytic gradient component so breaches are detectable.
double grad_check(Network& net, double eps, Rng& rng, double corruption = 0.0);

/// Row-gather along axis 0 (minibatch assembly).
Tensor gather_rows(const Tensor& x, const std::vector<int>& indices);

}  // namespace evonas::tinynet
