#include "evonas/runner.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "evonas/baselines.hpp"

namespace evonas {

std::unique_ptr<FitnessBackend> make_fitness_backend(const RunConfig& cfg) {
    if (cfg.fitness == FitnessKind::surrogate) {
        SurrogateSpec spec = cfg.surrogate ? *cfg.surrogate : default_surrogate(cfg.limits);
        return std::make_unique<SurrogateBackend>(std::move(spec), cfg.limits);
    }
    return std::make_unique<TrainedBackend>(load_dataset(cfg.dataset), cfg.train);
}

RunHistory run_search(const RunConfig& cfg) {
    cfg.check();
    const std::unique_ptr<FitnessBackend> backend = make_fitness_backend(cfg);
    EvolveOptions opts;
    opts.workers = cfg.workers;

    RunHistory hist;
    switch (cfg.method) {
        case SearchMethod::proposed:
            hist = evolve(cfg.ga, cfg.limits, *backend, cfg.bigan, cfg.seed, opts);
            break;
        case SearchMethod::small_set:
            hist = run_baseline_ga(BaselineVariant::small_set(), cfg.ga, cfg.limits, *backend, cfg.seed, opts);
            break;
        case SearchMethod::large_set:
            hist = run_baseline_ga(BaselineVariant::large_set_from(cfg.limits), cfg.ga, cfg.limits, *backend,
                                   cfg.seed, opts);
            break;
        case SearchMethod::random_search:
            hist = run_random_search(*cfg.ga.budget_evals, cfg.limits, BaselineVariant::large_set_from(cfg.limits),
                                     *backend, cfg.seed, opts);
            break;
    }
    hist.config_snapshot = nlohmann::json(cfg);
    return hist;
}

RunHistory run_search_and_write(const RunConfig& cfg, const std::string& out_dir) {
    RunHistory hist = run_search(cfg);
    write_run_outputs(out_dir, hist);
    return hist;
}

namespace {

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    return buf;
}

}  // namespace

CompareResult run_compare(const RunConfig& base, const std::vector<SearchMethod>& methods, int n_seeds) {
    if (methods.size() < 2) throw std::invalid_argument("compare needs at least two methods");
    if (n_seeds < 1) throw std::invalid_argument("compare needs at least one seed");
    if (!base.ga.budget_evals) {
        throw std::invalid_argument("ga.budget_evals: required for compare (it is the shared budget)");
    }

    CompareResult res;
    for (const SearchMethod method : methods) {
        std::vector<double> bests, evals, seconds;
        for (int s = 0; s < n_seeds; ++s) {
            RunConfig cfg = base;
            cfg.method = method;
            cfg.seed = base.seed + static_cast<std::uint64_t>(s);
            // The eval budget is the shared stopping rule; generation caps
            // would give methods with different per-generation costs unequal
            // treatment.
            cfg.ga.generations = std::numeric_limits<int>::max();
            const RunHistory hist = run_search(cfg);
            const Candidate* best = hist.best_candidate();

            CompareRow row;
            row.method = to_string(method);
            row.seed = cfg.seed;
            row.best_fitness = best && best->fitness ? best->fitness->accuracy : 0.0;
            row.evals = hist.total_evaluations;
            row.seconds = hist.total_seconds;
            bests.push_back(row.best_fitness);
            evals.push_back(static_cast<double>(row.evals));
            seconds.push_back(row.seconds);
            res.rows.push_back(std::move(row));
        }
        MethodMedians m;
        m.method = to_string(method);
        m.best_fitness = median(bests);
        m.evals = median(evals);
        m.seconds = median(seconds);
        res.medians.push_back(std::move(m));
    }
    return res;
}

void write_compare_outputs(const std::string& dir, const CompareResult& res) {
    std::filesystem::create_directories(dir);

    std::ofstream cmp(std::filesystem::path(dir) / "comparison.csv");
    if (!cmp) throw std::runtime_error("cannot write comparison.csv in " + dir);
    cmp << "method,seed,best_fitness,evals,seconds\n";
    for (const auto& r : res.rows) {
        cmp << r.method << ',' << r.seed << ',' << fmt(r.best_fitness) << ',' << r.evals << ',' << fmt(r.seconds)
            << '\n';
    }

    std::ofstream med(std::filesystem::path(dir) / "medians.csv");
    if (!med) throw std::runtime_error("cannot write medians.csv in " + dir);
    med << "method,median_best_fitness,median_evals,median_seconds\n";
    for (const auto& m : res.medians) {
        med << m.method << ',' << fmt(m.best_fitness) << ',' << fmt(m.evals) << ',' << fmt(m.seconds) << '\n';
    }
}

std::string format_median_table(const CompareResult& res) {
    std::string out;
    char line[128];
    std::snprintf(line, sizeof(line), "%-12s %18s %14s %16s\n", "method", "median_best_fitness", "median_evals",
                  "median_seconds");
    out += line;
    for (const auto& m : res.medians) {
        std::snprintf(line, sizeof(line), "%-12s %18.6f %14.1f %16.3f\n", m.method.c_str(), m.best_fitness, m.evals,
                      m.seconds);
        out += line;
    }
    return out;
}

}  // namespace evonas
