#include "evonas/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "evonas/report.hpp"
#include "evonas/runner.hpp"

namespace evonas {

namespace {

/// --out beats the EVONAS_OUT_DIR environment variable, which beats the
/// config file's out_dir.
std::string pick_out_dir(const std::optional<std::string>& cli_out, const std::string& config_out) {
    if (cli_out) return *cli_out;
    if (const char* env = std::getenv("EVONAS_OUT_DIR")) {
        if (*env != '\0') return env;
    }
    return config_out;
}

int cmd_search(const std::string& config_path, const std::optional<std::uint64_t>& seed,
               const std::optional<std::string>& out, const std::optional<int>& workers) {
    RunConfig cfg = load_run_config(config_path);
    if (seed) cfg.seed = *seed;
    if (workers) cfg.workers = *workers;
    const std::string out_dir = pick_out_dir(out, cfg.out_dir);
    const RunHistory hist = run_search_and_write(cfg, out_dir);

    const Candidate* best = hist.best_candidate();
    std::cout << "method " << to_string(cfg.method) << ", seed " << cfg.seed << ": " << hist.records.size()
              << " generations, " << hist.total_evaluations << " evaluations\n";
    if (best && best->fitness) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.6f", best->fitness->accuracy);
        std::cout << "best fitness " << buf << '\n';
    }
    std::cout << "outputs in " << out_dir << '\n';
    return 0;
}

int cmd_compare(const std::string& config_path, const std::string& methods_csv, int n_seeds,
                const std::optional<std::string>& out, const std::optional<int>& workers) {
    RunConfig cfg = load_run_config(config_path);
    if (workers) cfg.workers = *workers;

    std::vector<SearchMethod> methods;
    std::string token;
    std::istringstream in(methods_csv);
    while (std::getline(in, token, ',')) {
        if (!token.empty()) methods.push_back(method_from_string(token));
    }

    const CompareResult res = run_compare(cfg, methods, n_seeds);
    const std::string out_dir = pick_out_dir(out, cfg.out_dir);
    write_compare_outputs(out_dir, res);
    std::cout << format_median_table(res) << "outputs in " << out_dir << '\n';
    return 0;
}

struct GradCheckCase {
    std::string name;
    tinynet::NetworkSpec spec;
    double tolerance;
};

std::vector<GradCheckCase> gradcheck_matrix() {
    using tinynet::ConvBlockSpec;
    using tinynet::DenseBlockSpec;
    using tinynet::NetworkSpec;
    const tinynet::InputShape image{1, 6, 6};

    const auto conv = [](int f, int k, Activation a, bool bn, bool pool) {
        ConvBlockSpec c;
        c.filters = f;
        c.kernel = k;
        c.activation = a;
        c.batch_norm = bn;
        c.max_pool = pool;
        return c;
    };
    const auto dense = [](int units, Activation a, bool bn, bool drop) {
        DenseBlockSpec d;
        d.units = units;
        d.activation = a;
        d.batch_norm = bn;
        d.dropout = drop;
        return d;
    };
    const auto make = [&](std::string name, std::vector<ConvBlockSpec> cs, std::vector<DenseBlockSpec> ds) {
        NetworkSpec s;
        s.input = image;
        s.n_classes = 2;
        s.conv = std::move(cs);
        s.dense = std::move(ds);
        bool bn = false;
        for (const auto& c : s.conv) bn = bn || c.batch_norm;
        for (const auto& d : s.dense) bn = bn || d.batch_norm;
        return GradCheckCase{std::move(name), std::move(s), bn ? 1e-3 : 1e-4};
    };

    std::vector<GradCheckCase> cases;
    cases.push_back(make("dense_plain", {}, {dense(8, Activation::relu, false, false)}));
    cases.push_back(make("dense_batch_norm", {}, {dense(8, Activation::tanh, true, false)}));
    cases.push_back(make("dense_dropout", {}, {dense(8, Activation::sigmoid, false, true)}));
    cases.push_back(make("conv_k3", {conv(4, 3, Activation::relu, false, false)},
                         {dense(6, Activation::relu, false, false)}));
    cases.push_back(make("conv_k5_pool", {conv(3, 5, Activation::tanh, false, true)},
                         {dense(6, Activation::relu, false, false)}));
    cases.push_back(make("conv_batch_norm", {conv(4, 3, Activation::leaky_relu, true, false)},
                         {dense(6, Activation::relu, false, false)}));
    cases.push_back(make("conv_pool_stack",
                         {conv(3, 3, Activation::relu, false, true), conv(4, 3, Activation::relu, false, true)},
                         {dense(6, Activation::relu, false, false)}));
    cases.push_back(make("all_features", {conv(4, 5, Activation::sigmoid, true, true)},
                         {dense(8, Activation::leaky_relu, true, true)}));
    for (const Activation a : {Activation::relu, Activation::leaky_relu, Activation::sigmoid, Activation::tanh}) {
        cases.push_back(make(std::string("activation_") + to_string(a), {conv(3, 3, a, false, false)},
                             {dense(6, a, false, false)}));
    }
    return cases;
}

int cmd_gradcheck(double eps, bool corrupt) {
    const std::vector<GradCheckCase> cases = gradcheck_matrix();
    bool ok = true;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        Rng rng(9000 + i);
        tinynet::Network net(cases[i].spec, rng);
        const double corruption = corrupt ? 1e-2 : 0.0;
        const double max_rel = tinynet::grad_check(net, eps, rng, corruption);
        const bool pass = max_rel < cases[i].tolerance;
        ok = ok && pass;
        std::printf("%-22s max_rel=%.3e tol=%.0e %s\n", cases[i].name.c_str(), max_rel, cases[i].tolerance,
                    pass ? "ok" : "FAIL");
    }
    std::cout << (ok ? "gradient check passed" : "gradient check FAILED") << '\n';
    return ok ? 0 : 1;
}

int cmd_report(const std::string& run_dir) {
    const RunHistory hist = load_run_history(run_dir);
    std::cout << format_run_report(hist);
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"architecture and hyperparameter search: a genetic algorithm whose layer "
                 "counts are proposed by a two-generator adversarial network"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<int> workers;

    CLI::App* search = app.add_subcommand("search", "run one configured search and write its artifacts");
    search->add_option("--config", config_path, "JSON run configuration")->required();
    search->add_option("--seed", seed, "override the config's seed");
    search->add_option("--out", out, "output directory (beats EVONAS_OUT_DIR and the config)");
    search->add_option("--workers", workers, "max concurrent fitness evaluations");

    std::string methods_csv = "proposed,small_set,random";
    int n_seeds = 5;
    CLI::App* compare = app.add_subcommand("compare", "equal-budget head-to-head over several seeds");
    compare->add_option("--config", config_path, "JSON run configuration")->required();
    compare->add_option("--methods", methods_csv, "comma-separated methods (proposed,small_set,large_set,random)")
        ->required();
    compare->add_option("--seeds", n_seeds, "number of seeds per method")->required();
    compare->add_option("--out", out, "output directory (beats EVONAS_OUT_DIR and the config)");
    compare->add_option("--workers", workers, "max concurrent fitness evaluations");

    double eps = 1e-4;
    bool corrupt = false;
    CLI::App* gradcheck = app.add_subcommand("gradcheck", "finite-difference check of the trainer's gradients");
    gradcheck->add_option("--eps", eps, "finite-difference step");
    gradcheck->add_flag("--corrupt-gradient", corrupt, "negative control: corrupt one gradient entry");

    std::string run_dir;
    CLI::App* report = app.add_subcommand("report", "print the best candidate of a finished run");
    report->add_option("--run", run_dir, "run output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (search->parsed()) return cmd_search(config_path, seed, out, workers);
        if (compare->parsed()) return cmd_compare(config_path, methods_csv, n_seeds, out, workers);
        if (gradcheck->parsed()) return cmd_gradcheck(eps, corrupt);
        if (report->parsed()) return cmd_report(run_dir);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        // bad method names, violated config invariants: usage-class
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace evonas
