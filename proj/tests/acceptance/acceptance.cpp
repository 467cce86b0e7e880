// Acceptance suite: each criterion is a standalone check invoked as
// `acceptance <1..8>`. Prints exactly one PASS/FAIL line and exits 0/1.
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "evonas/baselines.hpp"
#include "evonas/bigan.hpp"
#include "evonas/config.hpp"
#include "evonas/runner.hpp"

namespace fs = std::filesystem;
using namespace evonas;

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir(const std::string& tag) {
    const fs::path p =
        fs::temp_directory_path() / ("evonas_accept_" + tag + "_" + std::to_string(static_cast<long>(::getpid())));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

// --------------------------------------------------------------------------
// 1. Rescale exactness: the three anchor points with neuron bounds
//    (10, 4000) map to {10, 2005, 4000}, and rescaling is monotone over a
//    1001-point raw grid with the bounds met exactly at the ends.
bool criterion1(std::string& detail) {
    SlotBounds neuron_only;
    neuron_only.conv_slots = 0;
    neuron_only.dense_slots = 3;
    neuron_only.neuron_bounds = {10, 4000};

    const ContinuousParams anchors = rescale({-1.0, 0.0, 1.0}, neuron_only);
    if (anchors.neurons != std::vector<int>{10, 2005, 4000}) {
        std::ostringstream ss;
        ss << "anchor outputs {" << anchors.neurons[0] << ", " << anchors.neurons[1] << ", " << anchors.neurons[2]
           << "} instead of {10, 2005, 4000}";
        detail = ss.str();
        return false;
    }

    SlotBounds one_neuron = neuron_only;
    one_neuron.dense_slots = 1;
    SlotBounds one_filter;
    one_filter.conv_slots = 1;
    one_filter.dense_slots = 0;
    one_filter.filter_bounds = {1, 256};

    int prev_n = -1, prev_f = -1;
    int first_n = 0, last_n = 0, first_f = 0, last_f = 0;
    for (int i = 0; i <= 1000; ++i) {
        const double raw = -1.0 + 2.0 * i / 1000.0;
        const int n = rescale({raw}, one_neuron).neurons[0];
        const int f = rescale({raw}, one_filter).filters[0];
        if (n < prev_n || f < prev_f) {
            detail = "rescale is not monotone at grid point " + std::to_string(i);
            return false;
        }
        prev_n = n;
        prev_f = f;
        if (i == 0) first_n = n, first_f = f;
        if (i == 1000) last_n = n, last_f = f;
    }
    if (first_n != 10 || last_n != 4000 || first_f != 1 || last_f != 256) {
        detail = "rescale endpoints missed the bounds";
        return false;
    }
    detail = "anchors {10, 2005, 4000} exact; monotone over 1001 grid points with exact endpoints";
    return true;
}

// --------------------------------------------------------------------------
// 2. Gradient fidelity: analytic gradients vs central finite differences
//    (eps 1e-4) over >= 20 random small specs that jointly cover both kernel
//    sizes, pooling, batch norm (conv and dense), dropout, and all four
//    activations. Max relative error < 1e-4 (< 1e-3 for batch-norm specs).
bool criterion2(std::string& detail) {
    SearchLimits l;
    l.max_conv_layers = 2;
    l.max_dense_layers = 2;
    l.filter_bounds = {1, 4};
    l.neuron_bounds = {4, 12};
    const tinynet::InputShape input{1, 6, 6};

    bool k3 = false, k5 = false, pool = false, conv_bn = false, dense_bn = false, dropout = false;
    std::set<Activation> acts;
    const auto covered = [&] {
        return k3 && k5 && pool && conv_bn && dense_bn && dropout && acts.size() == 4;
    };

    Rng rng(202);
    int checked = 0;
    double worst_plain = 0.0, worst_bn = 0.0;
    for (int draw = 0; draw < 500 && (checked < 20 || !covered()); ++draw) {
        Candidate c;
        c.genome = random_genome(l, rng);
        c.params = random_params(l, rng);
        tinynet::NetworkSpec spec;
        try {
            spec = tinynet::make_spec(c.genome, c.params, input, 2);
        } catch (const tinynet::BuildError&) {
            continue;  // e.g. a 5x5 kernel after pooling below 5x5
        }
        bool has_bn = false;
        for (const auto& cb : spec.conv) {
            k3 = k3 || cb.kernel == 3;
            k5 = k5 || cb.kernel == 5;
            pool = pool || cb.pool_applied;
            conv_bn = conv_bn || cb.batch_norm;
            has_bn = has_bn || cb.batch_norm;
            acts.insert(cb.activation);
        }
        for (const auto& db : spec.dense) {
            dense_bn = dense_bn || db.batch_norm;
            dropout = dropout || db.dropout;
            has_bn = has_bn || db.batch_norm;
            acts.insert(db.activation);
        }

        tinynet::Network net = tinynet::build_network(spec, rng);
        const double err = tinynet::grad_check(net, 1e-4, rng);
        const double tol = has_bn ? 1e-3 : 1e-4;
        (has_bn ? worst_bn : worst_plain) = std::max(has_bn ? worst_bn : worst_plain, err);
        if (err >= tol) {
            std::ostringstream ss;
            ss << "spec " << checked << " max relative error " << err << " >= " << tol;
            detail = ss.str();
            return false;
        }
        ++checked;
    }
    if (checked < 20 || !covered()) {
        detail = "could not assemble a covering set of specs (checked " + std::to_string(checked) + ")";
        return false;
    }
    std::ostringstream ss;
    ss << checked << " specs, full feature coverage; worst error " << worst_plain << " (plain, tol 1e-4), "
       << worst_bn << " (batch norm, tol 1e-3)";
    detail = ss.str();
    return true;
}

// --------------------------------------------------------------------------
// 3. Genome closure: 1e5 random crossover+mutation+repair cycles across four
//    search-space shapes produce zero validation failures.
bool criterion3(std::string& detail) {
    const std::pair<int, int> shapes[] = {{1, 1}, {2, 3}, {3, 3}, {4, 2}};
    Rng rng(303);
    long cycles = 0, violations = 0;
    for (const auto& [c_layers, d_layers] : shapes) {
        SearchLimits l;
        l.max_conv_layers = c_layers;
        l.max_dense_layers = d_layers;
        Candidate a, b;
        a.genome = random_genome(l, rng);
        a.params = random_params(l, rng);
        b.genome = random_genome(l, rng);
        b.params = random_params(l, rng);
        for (int i = 0; i < 25000; ++i) {
            if (i % 100 == 0) {
                a.genome = random_genome(l, rng);
                a.params = random_params(l, rng);
                b.genome = random_genome(l, rng);
                b.params = random_params(l, rng);
            }
            Candidate child = crossover(a, b, l, rng);
            child.genome = mutate(child.genome, l, rng);
            if (!validate(child.genome, l).empty() || !validate_params(child.params, l).empty()) ++violations;
            (i % 2 == 0 ? a : b) = child;
            ++cycles;
        }
    }
    std::ostringstream ss;
    ss << cycles << " crossover+mutation+repair cycles, " << violations << " validation failures";
    detail = ss.str();
    return cycles == 100000 && violations == 0;
}

// --------------------------------------------------------------------------
// 4. Brute-force oracle equivalence on a C=D=1 space: exhaustive enumeration
//    of every discrete genome x an 8x8 count grid finds the known target as
//    the unique argmax with fitness 1, and random search with a budget of
//    5x the nominal space size reaches fitness >= 0.99 in >= 9/10 seeds.
bool criterion4(std::string& detail) {
    SearchLimits l;
    l.max_conv_layers = 1;
    l.max_dense_layers = 1;
    l.filter_bounds = {1, 64};
    l.neuron_bounds = {10, 200};

    SurrogateSpec spec;
    spec.target_genome.conv = {{true, 5, Activation::sigmoid, true, false}};
    spec.target_genome.dense = {{true, Activation::tanh, false, true}};
    spec.target_counts = {{28}, {119}};
    spec.filter_widths = {14.0};
    spec.neuron_widths = {160.0};
    spec.check(l);

    // 8-point grids through both count ranges; the targets sit on them.
    std::vector<int> filter_grid, neuron_grid;
    for (int i = 0; i < 8; ++i) {
        filter_grid.push_back(static_cast<int>(std::lround(1 + 63.0 * i / 7.0)));
        neuron_grid.push_back(static_cast<int>(std::lround(10 + 190.0 * i / 7.0)));
    }

    Candidate best;
    double best_fit = -1.0, second_fit = -1.0;
    long evaluated = 0;
    const bool flags[] = {false, true};
    for (int kernel : l.kernel_choices)
        for (Activation ca : l.activation_choices)
            for (bool cbn : flags)
                for (bool cpool : flags)
                    for (Activation da : l.activation_choices)
                        for (bool dbn : flags)
                            for (bool ddrop : flags) {
                                Candidate c;
                                c.genome.conv = {{true, kernel, ca, cbn, cpool}};
                                c.genome.dense = {{true, da, dbn, ddrop}};
                                for (int f : filter_grid)
                                    for (int n : neuron_grid) {
                                        c.params = {{f}, {n}};
                                        const double fit = surrogate_fitness(c, spec);
                                        ++evaluated;
                                        if (fit > best_fit) {
                                            second_fit = best_fit;
                                            best_fit = fit;
                                            best = c;
                                        } else if (fit > second_fit) {
                                            second_fit = fit;
                                        }
                                    }
                            }
    if (evaluated != 512L * 64) {
        detail = "enumeration visited " + std::to_string(evaluated) + " points instead of 32768";
        return false;
    }
    if (best_fit < 1.0 - 1e-12 || second_fit >= 1.0 - 1e-6 || !(best.genome == spec.target_genome) ||
        !(best.params == spec.target_counts)) {
        std::ostringstream ss;
        ss << "enumeration argmax missed the target (best " << best_fit << ", runner-up " << second_fit << ")";
        detail = ss.str();
        return false;
    }

    SurrogateBackend fitness(spec, l);
    const long budget = 5L * 4096 * 64;  // 5x the nominal genome x grid space
    int hits = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const RunHistory h = run_random_search(budget, l, BaselineVariant::large_set_from(l), fitness, seed);
        if (h.records.back().best_fitness >= 0.99) ++hits;
    }
    std::ostringstream ss;
    ss << "enumeration argmax equals the target with fitness 1 (runner-up " << second_fit << "); random search ("
       << budget << " draws) reached >= 0.99 in " << hits << "/10 seeds";
    detail = ss.str();
    return hits >= 9;
}

// --------------------------------------------------------------------------
// 5. Adversarial-proposer convergence: on a one-layer-each quadratic
//    surrogate, the better generator's mean rescaled probe output comes
//    within 10% of each bound's range of the target counts inside 200
//    iterations for >= 8/10 seeds; the re-initialization rule fires within
//    two iterations when both generators start identical.
bool criterion5(std::string& detail) {
    SearchLimits l;
    l.max_conv_layers = 1;
    l.max_dense_layers = 1;
    l.filter_bounds = {1, 256};
    l.neuron_bounds = {10, 4000};

    SurrogateSpec spec = default_surrogate(l);
    spec.target_counts = {{100}, {1500}};
    spec.filter_widths = {63.75};
    spec.neuron_widths = {997.5};
    spec.check(l);

    Candidate probe_candidate;
    probe_candidate.genome = spec.target_genome;
    const FitnessOfParams fitness_of = [&](const ContinuousParams& p) {
        Candidate c = probe_candidate;
        c.params = p;
        return surrogate_fitness(c, spec);
    };

    BiGanConfig cfg;
    cfg.noise_dim = 8;
    cfg.gen_hidden = {16};
    cfg.disc_hidden = {16};
    cfg.m = 20;
    cfg.probe_size = 16;
    cfg.gen_lr = 0.1;
    cfg.disc_lr = 0.1;

    const double filter_tol = 0.10 * (l.filter_bounds.second - l.filter_bounds.first);  // 25.5
    const double neuron_tol = 0.10 * (l.neuron_bounds.second - l.neuron_bounds.first);  // 399

    int converged = 0;
    std::vector<int> iters_used;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Rng rng(derive_seed(seed, {9100}));
        BiGanState st = init_bigan(cfg, l, rng);
        for (int it = 1; it <= 200; ++it) {
            bigan_iteration(st, fitness_of, cfg, rng);
            const MlpWeights& better = st.better_label == 1 ? st.g1 : st.g2;
            double mean_f = 0.0, mean_n = 0.0;
            const std::size_t probes = st.probe_noise.dim(0);
            for (std::size_t p = 0; p < probes; ++p) {
                std::vector<double> z(st.probe_noise.dim(1));
                for (std::size_t j = 0; j < z.size(); ++j) z[j] = st.probe_noise.at2(p, j);
                const ContinuousParams out = rescale(generator_forward(better, z), st.bounds);
                mean_f += out.filters[0];
                mean_n += out.neurons[0];
            }
            mean_f /= static_cast<double>(probes);
            mean_n /= static_cast<double>(probes);
            if (std::abs(mean_f - 100.0) <= filter_tol && std::abs(mean_n - 1500.0) <= neuron_tol) {
                ++converged;
                iters_used.push_back(it);
                break;
            }
        }
    }

    // Identical generators must trigger the re-init rule within 2 iterations.
    Rng rng(derive_seed(77, {9101}));
    BiGanState stuck = init_bigan(cfg, l, rng);
    stuck.g2 = stuck.g1;
    int fired_at = 0;
    for (int it = 1; it <= 2 && fired_at == 0; ++it) {
        if (bigan_iteration(stuck, fitness_of, cfg, rng).reinit_fired) fired_at = it;
    }

    std::ostringstream ss;
    ss << converged << "/10 seeds converged within 10% of range (iterations:";
    for (int it : iters_used) ss << " " << it;
    ss << "); re-init fired at iteration " << fired_at << " from identical generators";
    detail = ss.str();
    return converged >= 8 && fired_at >= 1 && fired_at <= 2;
}

// --------------------------------------------------------------------------
// 6. Method ordering at an equal 2000-evaluation surrogate budget over 20
//    seeds: median(proposed) > median(random search) strictly; proposed >=
//    small-set GA on >= 60% of seeds; median(large-set GA) < median(small-set
//    GA).
bool criterion6(std::string& detail) {
    RunConfig base;
    base.method = SearchMethod::proposed;
    base.fitness = FitnessKind::surrogate;
    base.limits = SearchLimits{};
    base.limits.max_conv_layers = 2;
    base.limits.max_dense_layers = 2;

    // Landscape where count precision decides the outcome: targets sit off
    // the small set's grid (nearest choices 16 and 512) by roughly two
    // thirds of a basin width, and the basins are narrow relative to the
    // full integer ranges, so blind re-sampling over (1,256) x (10,4000)
    // rarely lands inside them.  The continuous term carries most of the
    // weight so that count adaptation, not discrete matching, dominates.
    SurrogateSpec spec = default_surrogate(base.limits);
    spec.target_counts = {{24, 24}, {662, 662}};
    spec.filter_widths = {12, 12};
    spec.neuron_widths = {240, 240};
    spec.w_cont = 0.85;
    spec.w_disc = 0.15;
    base.surrogate = spec;

    base.ga.n_m = 10;
    base.ga.t = 3;
    base.ga.r = 2;
    base.ga.d = 1;
    base.ga.budget_evals = 2000;
    base.ga.bigan_iters_per_gen = 2;
    base.bigan.noise_dim = 8;
    base.bigan.gen_hidden = {16};
    base.bigan.disc_hidden = {16};
    base.bigan.m = 4;
    base.bigan.probe_size = 8;
    base.bigan.gen_lr = 0.2;
    base.bigan.disc_lr = 0.2;
    base.seed = 1;

    const std::vector<SearchMethod> methods{SearchMethod::proposed, SearchMethod::small_set, SearchMethod::large_set,
                                            SearchMethod::random_search};
    const int n_seeds = 20;
    const CompareResult res = run_compare(base, methods, n_seeds);

    std::vector<std::vector<double>> by_method(methods.size());
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        for (int s = 0; s < n_seeds; ++s) by_method[mi].push_back(res.rows[mi * n_seeds + s].best_fitness);
    }
    const double med_proposed = median(by_method[0]);
    const double med_small = median(by_method[1]);
    const double med_large = median(by_method[2]);
    const double med_random = median(by_method[3]);

    int proposed_wins = 0;
    for (int s = 0; s < n_seeds; ++s) proposed_wins += by_method[0][s] >= by_method[1][s];

    std::ostringstream ss;
    ss << "medians: proposed " << med_proposed << ", small-set " << med_small << ", large-set " << med_large
       << ", random " << med_random << "; proposed >= small-set on " << proposed_wins << "/20 seeds";
    detail = ss.str();
    return med_proposed > med_random && proposed_wins >= 12 && med_large < med_small;
}

// --------------------------------------------------------------------------
// 7. End-to-end trained-fitness run on the rings dataset (12x12): with
//    n_m=10, 10 generations, m=8, the best candidate reaches validation
//    accuracy >= 0.90 and its (conv-bearing) network beats the best
//    dense-only reference trained identically, median over 5 seeds.
bool criterion7(std::string& detail) {
    std::vector<double> best_acc, dense_acc;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        RunConfig cfg;
        cfg.method = SearchMethod::proposed;
        cfg.fitness = FitnessKind::tinynet;
        cfg.dataset.source = "synthetic";
        cfg.dataset.kind = SyntheticKind::rings;
        cfg.dataset.n_samples = 360;
        cfg.dataset.input_shape = {1, 12, 12};
        cfg.dataset.seed = 900 + seed;
        cfg.train.learning_rate = 0.01;
        cfg.train.batch_size = 16;
        cfg.train.max_epochs = 8;
        cfg.train.patience = 3;
        cfg.limits.max_conv_layers = 2;
        cfg.limits.max_dense_layers = 2;
        cfg.limits.filter_bounds = {1, 10};
        cfg.limits.neuron_bounds = {4, 48};
        cfg.ga.n_m = 10;
        cfg.ga.t = 3;
        cfg.ga.r = 2;
        cfg.ga.d = 1;
        cfg.ga.generations = 10;
        cfg.bigan.noise_dim = 6;
        cfg.bigan.gen_hidden = {16};
        cfg.bigan.disc_hidden = {16};
        cfg.bigan.m = 8;
        cfg.bigan.probe_size = 8;
        cfg.bigan.gen_lr = 0.1;
        cfg.bigan.disc_lr = 0.1;
        cfg.seed = seed;

        const RunHistory h = run_search(cfg);
        const Candidate* best = h.best_candidate();
        if (best == nullptr || best->genome.active_conv_count() == 0) {
            detail = "seed " + std::to_string(seed) + " produced no conv-bearing best candidate";
            return false;
        }
        best_acc.push_back(best->fitness->accuracy);

        // Dense-only references: the same data, training schedule, and
        // budget-free best over a spread of widths and depths.
        const Dataset data = load_dataset(cfg.dataset);
        double best_dense = 0.0;
        const std::vector<std::vector<int>> dense_stacks{{8}, {16}, {32}, {48}, {32, 16}, {48, 24}};
        Rng ref_rng(derive_seed(seed, {9700}));
        for (const auto& stack : dense_stacks) {
            tinynet::NetworkSpec spec;
            spec.input = data.input_shape;
            spec.n_classes = data.n_classes;
            for (int units : stack) spec.dense.push_back({units, Activation::relu, false, false});
            tinynet::Network net = tinynet::build_network(spec, ref_rng);
            const tinynet::TrainResult r = tinynet::train_with_early_stop(net, data.train, data.val, cfg.train, ref_rng);
            best_dense = std::max(best_dense, r.best_val_accuracy);
        }
        dense_acc.push_back(best_dense);
    }

    std::vector<double> gaps;
    for (std::size_t i = 0; i < best_acc.size(); ++i) gaps.push_back(best_acc[i] - dense_acc[i]);
    const double med_best = median(best_acc);
    const double med_gap = median(gaps);

    std::ostringstream ss;
    ss << "median best validation accuracy " << med_best << " (per seed:";
    for (double a : best_acc) ss << " " << a;
    ss << "); median margin over dense-only references " << med_gap;
    detail = ss.str();
    return med_best >= 0.90 && med_gap > 0.0;
}

// --------------------------------------------------------------------------
// 8. Determinism: repeating a run with the identical config and seed yields
//    a byte-identical history.jsonl, for both fitness backends.
bool criterion8(std::string& detail) {
    RunConfig surrogate_cfg;
    surrogate_cfg.method = SearchMethod::proposed;
    surrogate_cfg.limits.max_conv_layers = 2;
    surrogate_cfg.limits.max_dense_layers = 2;
    surrogate_cfg.ga.n_m = 6;
    surrogate_cfg.ga.t = 2;
    surrogate_cfg.ga.r = 2;
    surrogate_cfg.ga.d = 1;
    surrogate_cfg.ga.generations = 3;
    surrogate_cfg.bigan.noise_dim = 4;
    surrogate_cfg.bigan.gen_hidden = {8};
    surrogate_cfg.bigan.disc_hidden = {8};
    surrogate_cfg.bigan.m = 4;
    surrogate_cfg.bigan.probe_size = 4;
    surrogate_cfg.seed = 11;

    RunConfig trained_cfg;
    trained_cfg.method = SearchMethod::proposed;
    trained_cfg.fitness = FitnessKind::tinynet;
    trained_cfg.dataset.kind = SyntheticKind::rings;
    trained_cfg.dataset.n_samples = 120;
    trained_cfg.dataset.input_shape = {1, 8, 8};
    trained_cfg.dataset.seed = 3;
    trained_cfg.train.max_epochs = 2;
    trained_cfg.train.patience = 2;
    trained_cfg.train.batch_size = 16;
    trained_cfg.limits.max_conv_layers = 1;
    trained_cfg.limits.max_dense_layers = 1;
    trained_cfg.limits.filter_bounds = {1, 6};
    trained_cfg.limits.neuron_bounds = {4, 24};
    trained_cfg.ga.n_m = 4;
    trained_cfg.ga.t = 2;
    trained_cfg.ga.r = 1;
    trained_cfg.ga.d = 0;
    trained_cfg.ga.generations = 2;
    trained_cfg.bigan.noise_dim = 4;
    trained_cfg.bigan.gen_hidden = {8};
    trained_cfg.bigan.disc_hidden = {8};
    trained_cfg.bigan.m = 3;
    trained_cfg.bigan.probe_size = 4;
    trained_cfg.seed = 17;

    const RunConfig* const configs[] = {&surrogate_cfg, &trained_cfg};
    const char* names[] = {"surrogate", "trained"};
    std::ostringstream ss;
    for (int i = 0; i < 2; ++i) {
        const fs::path d1 = scratch_dir(std::string("det_") + names[i] + "_a");
        const fs::path d2 = scratch_dir(std::string("det_") + names[i] + "_b");
        run_search_and_write(*configs[i], d1.string());
        run_search_and_write(*configs[i], d2.string());
        const std::string h1 = read_bytes(d1 / "history.jsonl");
        const std::string h2 = read_bytes(d2 / "history.jsonl");
        fs::remove_all(d1);
        fs::remove_all(d2);
        if (h1.empty() || h1 != h2) {
            detail = std::string(names[i]) + " run reruns differ (or produced no history)";
            return false;
        }
        ss << names[i] << " history byte-identical over " << std::count(h1.begin(), h1.end(), '\n')
           << " records" << (i == 0 ? "; " : "");
    }
    detail = ss.str();
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::fprintf(stderr, "usage: acceptance <criterion 1..8>\n");
        return 2;
    }
    const int n = std::atoi(argv[1]);
    std::string detail;
    bool ok = false;
    try {
        switch (n) {
            case 1: ok = criterion1(detail); break;
            case 2: ok = criterion2(detail); break;
            case 3: ok = criterion3(detail); break;
            case 4: ok = criterion4(detail); break;
            case 5: ok = criterion5(detail); break;
            case 6: ok = criterion6(detail); break;
            case 7: ok = criterion7(detail); break;
            case 8: ok = criterion8(detail); break;
            default:
                std::fprintf(stderr, "usage: acceptance <criterion 1..8>\n");
                return 2;
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("unexpected exception: ") + e.what();
    }
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", n, detail.c_str());
    return ok ? 0 : 1;
}
