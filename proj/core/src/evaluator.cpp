#include "evonas/evaluator.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace evonas {

void SurrogateSpec::check(const SearchLimits& limits) const {
    const auto c = static_cast<std::size_t>(limits.max_conv_layers);
    const auto d = static_cast<std::size_t>(limits.max_dense_layers);
    if (target_genome.conv.size() != c || target_genome.dense.size() != d) {
        throw std::invalid_argument("surrogate target genome does not match search limits");
    }
    if (target_counts.filters.size() != c || target_counts.neurons.size() != d) {
        throw std::invalid_argument("surrogate target counts do not match search limits");
    }
    if (filter_widths.size() != c || neuron_widths.size() != d) {
        throw std::invalid_argument("surrogate widths do not match search limits");
    }
    for (double w : filter_widths) {
        if (!(w > 0.0)) throw std::invalid_argument("surrogate widths must be positive");
    }
    for (double w : neuron_widths) {
        if (!(w > 0.0)) throw std::invalid_argument("surrogate widths must be positive");
    }
    if (std::abs(w_cont + w_disc - 1.0) > 1e-12) {
        throw std::invalid_argument("surrogate weights must sum to 1");
    }
}

double surrogate_fitness(const Candidate& candidate, const SurrogateSpec& spec) {
    const Genome& g = candidate.genome;
    const Genome& t = spec.target_genome;

    // Continuous term: mean squared scaled distance over active layers only.
    double sq_sum = 0.0;
    int active = 0;
    for (std::size_t i = 0; i < g.conv.size(); ++i) {
        if (!g.conv[i].exists) continue;
        const double d = (candidate.params.filters[i] - spec.target_counts.filters[i]) / spec.filter_widths[i];
        sq_sum += d * d;
        ++active;
    }
    for (std::size_t i = 0; i < g.dense.size(); ++i) {
        if (!g.dense[i].exists) continue;
        const double d = (candidate.params.neurons[i] - spec.target_counts.neurons[i]) / spec.neuron_widths[i];
        sq_sum += d * d;
        ++active;
    }
    const double cont = active > 0 ? std::exp(-sq_sum / active) : 0.0;

    // Discrete term: matching fraction over all 5C+4D gene fields.
    int match = 0, total = 0;
    for (std::size_t i = 0; i < g.conv.size(); ++i) {
        match += g.conv[i].exists == t.conv[i].exists;
        match += g.conv[i].kernel_size == t.conv[i].kernel_size;
        match += g.conv[i].activation == t.conv[i].activation;
        match += g.conv[i].batch_norm == t.conv[i].batch_norm;
        match += g.conv[i].max_pool == t.conv[i].max_pool;
        total += 5;
    }
    for (std::size_t i = 0; i < g.dense.size(); ++i) {
        match += g.dense[i].exists == t.dense[i].exists;
        match += g.dense[i].activation == t.dense[i].activation;
        match += g.dense[i].batch_norm == t.dense[i].batch_norm;
        match += g.dense[i].dropout == t.dense[i].dropout;
        total += 4;
    }
    const double disc = static_cast<double>(match) / static_cast<double>(total);

    return spec.w_cont * cont + spec.w_disc * disc;
}

SurrogateSpec default_surrogate(const SearchLimits& limits) {
    SurrogateSpec s;
    const auto& acts = limits.activation_choices;
    for (int i = 0; i < limits.max_conv_layers; ++i) {
        ConvLayerGene g;
        g.exists = true;
        g.kernel_size = limits.kernel_choices[static_cast<std::size_t>(i) % limits.kernel_choices.size()];
        g.activation = acts[static_cast<std::size_t>(i) % acts.size()];
        g.batch_norm = i % 2 == 1;
        g.max_pool = false;
        s.target_genome.conv.push_back(g);
    }
    for (int i = 0; i < limits.max_dense_layers; ++i) {
        DenseLayerGene g;
        g.exists = true;
        g.activation = acts[static_cast<std::size_t>(i + 1) % acts.size()];
        g.batch_norm = false;
        g.dropout = i % 2 == 0;
        s.target_genome.dense.push_back(g);
    }
    const auto fb = limits.filter_bounds;
    const auto nb = limits.neuron_bounds;
    const double f_range = fb.second - fb.first;
    const double n_range = nb.second - nb.first;
    for (int i = 0; i < limits.max_conv_layers; ++i) {
        s.target_counts.filters.push_back(fb.first + static_cast<int>(std::lround(0.70 * f_range)));
        s.filter_widths.push_back(std::max(1.0, 0.25 * f_range));
    }
    for (int i = 0; i < limits.max_dense_layers; ++i) {
        s.target_counts.neurons.push_back(nb.first + static_cast<int>(std::lround(0.25 * n_range)));
        s.neuron_widths.push_back(std::max(1.0, 0.25 * n_range));
    }
    s.check(limits);
    return s;
}

FitnessReport evaluate_trained(const Candidate& candidate, const Dataset& dataset, const tinynet::TrainConfig& cfg,
                               Rng& rng) {
    FitnessReport report;
    const auto started = std::chrono::steady_clock::now();
    try {
        tinynet::Network net =
            tinynet::build_network(candidate.genome, candidate.params, dataset.input_shape, dataset.n_classes, rng);
        const tinynet::TrainResult tr = tinynet::train_with_early_stop(net, dataset.train, dataset.val, cfg, rng);
        report.accuracy = tr.best_val_accuracy;
        report.epochs_run = tr.epochs_run;
        report.val_loss = tr.final_val_loss;
    } catch (const tinynet::BuildError& e) {
        report.accuracy = 0.0;
        report.diagnostic = e.what();
    } catch (const std::exception& e) {
        // Totality guard: any candidate must yield a report.
        report.accuracy = 0.0;
        report.diagnostic = std::string("unexpected: ") + e.what();
    }
    report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return report;
}

SurrogateBackend::SurrogateBackend(SurrogateSpec spec, const SearchLimits& limits) : spec_(std::move(spec)) {
    spec_.check(limits);
}

FitnessReport SurrogateBackend::evaluate(const Candidate& candidate, Rng&) {
    FitnessReport report;
    report.accuracy = surrogate_fitness(candidate, spec_);
    report.val_loss = 1.0 - report.accuracy;
    return report;
}

TrainedBackend::TrainedBackend(Dataset dataset, tinynet::TrainConfig cfg)
    : dataset_(std::move(dataset)), cfg_(cfg) {}

FitnessReport TrainedBackend::evaluate(const Candidate& candidate, Rng& rng) {
    return evaluate_trained(candidate, dataset_, cfg_, rng);
}

void to_json(nlohmann::json& j, const SurrogateSpec& s) {
    j = nlohmann::json{{"target_genome", s.target_genome}, {"target_counts", s.target_counts},
                       {"filter_widths", s.filter_widths}, {"neuron_widths", s.neuron_widths},
                       {"w_cont", s.w_cont},               {"w_disc", s.w_disc}};
}

void from_json(const nlohmann::json& j, SurrogateSpec& s) {
    j.at("target_genome").get_to(s.target_genome);
    j.at("target_counts").get_to(s.target_counts);
    j.at("filter_widths").get_to(s.filter_widths);
    j.at("neuron_widths").get_to(s.neuron_widths);
    s.w_cont = j.value("w_cont", 0.7);
    s.w_disc = j.value("w_disc", 0.3);
}

}  // namespace evonas
