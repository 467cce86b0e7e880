#include <benchmark/benchmark.h>

#include "evonas/baselines.hpp"
#include "evonas/bigan.hpp"
#include "evonas/dataset.hpp"
#include "evonas/ga.hpp"

namespace {

using namespace evonas;

tinynet::Network small_conv_net(Rng& rng) {
    tinynet::NetworkSpec spec;
    spec.input = {1, 12, 12};
    spec.n_classes = 2;
    spec.conv.push_back({8, 3, Activation::relu, true, true});
    spec.conv.push_back({8, 3, Activation::relu, false, false});
    spec.dense.push_back({32, Activation::relu, false, true});
    return tinynet::build_network(spec, rng);
}

void BM_ConvForward(benchmark::State& state) {
    Rng rng(1);
    tinynet::Network net = small_conv_net(rng);
    const Dataset data = make_synthetic_dataset(SyntheticKind::rings, 64, {1, 12, 12}, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(net.forward(data.train.inputs));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(data.train.size()));
}
BENCHMARK(BM_ConvForward);

void BM_ConvTrainStep(benchmark::State& state) {
    Rng rng(2);
    tinynet::Network net = small_conv_net(rng);
    const Dataset data = make_synthetic_dataset(SyntheticKind::rings, 64, {1, 12, 12}, 2);
    for (auto _ : state) {
        net.zero_grads();
        benchmark::DoNotOptimize(net.loss_and_gradients(data.train.inputs, data.train.labels, true, rng));
        net.sgd_step(0.01);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(data.train.size()));
}
BENCHMARK(BM_ConvTrainStep);

void BM_SurrogateFitness(benchmark::State& state) {
    SearchLimits l;
    const SurrogateSpec spec = default_surrogate(l);
    Rng rng(3);
    Candidate c;
    c.genome = random_genome(l, rng);
    c.params = random_params(l, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(surrogate_fitness(c, spec));
    }
}
BENCHMARK(BM_SurrogateFitness);

void BM_CrossoverMutate(benchmark::State& state) {
    SearchLimits l;
    Rng rng(4);
    Candidate a, b;
    a.genome = random_genome(l, rng);
    a.params = random_params(l, rng);
    b.genome = random_genome(l, rng);
    b.params = random_params(l, rng);
    for (auto _ : state) {
        Candidate child = crossover(a, b, l, rng);
        child.genome = mutate(child.genome, l, rng);
        benchmark::DoNotOptimize(child);
    }
}
BENCHMARK(BM_CrossoverMutate);

void BM_BiGanIteration(benchmark::State& state) {
    SearchLimits l;
    BiGanConfig cfg;
    cfg.noise_dim = 16;
    cfg.gen_hidden = {64, 64};
    cfg.disc_hidden = {64, 32};
    cfg.m = 100;
    const SurrogateSpec spec = default_surrogate(l);
    Candidate base;
    base.genome = spec.target_genome;
    const FitnessOfParams fitness_of = [&](const ContinuousParams& p) {
        Candidate c = base;
        c.params = p;
        return surrogate_fitness(c, spec);
    };
    Rng rng(5);
    BiGanState st = init_bigan(cfg, l, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(bigan_iteration(st, fitness_of, cfg, rng));
    }
}
BENCHMARK(BM_BiGanIteration);

void BM_SurrogateGeneration(benchmark::State& state) {
    SearchLimits l;
    GaConfig cfg;
    cfg.n_m = 25;
    cfg.generations = 1;
    BiGanConfig bigan;
    bigan.noise_dim = 8;
    bigan.gen_hidden = {16};
    bigan.disc_hidden = {16};
    bigan.m = 20;
    bigan.probe_size = 8;
    SurrogateBackend fitness(default_surrogate(l), l);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(evolve(cfg, l, fitness, bigan, ++seed));
    }
}
BENCHMARK(BM_SurrogateGeneration);

}  // namespace

BENCHMARK_MAIN();
