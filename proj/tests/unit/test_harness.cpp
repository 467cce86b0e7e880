#include <doctest.h>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "evonas/cli.hpp"
#include "evonas/config.hpp"
#include "evonas/report.hpp"
#include "evonas/runner.hpp"

using namespace evonas;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;

    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() / ("evonas_harness_" + std::to_string(++counter) + "_" +
                                            std::to_string(static_cast<long>(::getpid())));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    fs::path operator/(const std::string& name) const { return path / name; }
};

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

int count_lines(const fs::path& p) {
    std::ifstream in(p);
    int n = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) ++n;
    }
    return n;
}

/// A search config small enough for unit-test budgets.
nlohmann::json tiny_config() {
    return nlohmann::json{
        {"method", "proposed"},
        {"seed", 7},
        {"limits", {{"max_conv_layers", 2}, {"max_dense_layers", 2}}},
        {"ga", {{"n_m", 4}, {"t", 2}, {"r", 1}, {"d", 0}, {"generations", 2}}},
        {"bigan", {{"noise_dim", 4}, {"gen_hidden", {8}}, {"disc_hidden", {8}}, {"m", 3}, {"probe_size", 4}}},
    };
}

int cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("evonas");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

nlohmann::json history_json(const RunHistory& h) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& rec : h.records) j.push_back(rec);
    return j;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("config errors name the offending field") {
    SUBCASE("a wrong-typed field reports its dotted path") {
        nlohmann::json j = tiny_config();
        j["ga"]["n_m"] = "many";
        CHECK_THROWS_WITH_AS(parse_run_config(j), doctest::Contains("ga.n_m"), ConfigError);
    }

    SUBCASE("unknown keys are rejected by name at any depth") {
        nlohmann::json j = tiny_config();
        j["populations"] = 3;
        CHECK_THROWS_WITH_AS(parse_run_config(j), doctest::Contains("populations"), ConfigError);

        j = tiny_config();
        j["ga"]["nm"] = 3;
        CHECK_THROWS_WITH_AS(parse_run_config(j), doctest::Contains("ga.nm"), ConfigError);
    }

    SUBCASE("a non-object root is rejected") {
        CHECK_THROWS_WITH_AS(parse_run_config(nlohmann::json::array()), doctest::Contains("config root"),
                             ConfigError);
    }

    SUBCASE("an unknown method value is rejected") {
        nlohmann::json j = tiny_config();
        j["method"] = "gradient";
        CHECK_THROWS_WITH_AS(parse_run_config(j), doctest::Contains("method"), ConfigError);
    }

    SUBCASE("violated invariants surface as config errors") {
        nlohmann::json j = tiny_config();
        j["ga"]["t"] = 9;  // t + r > n_m
        CHECK_THROWS_AS(parse_run_config(j), ConfigError);
    }

    SUBCASE("a missing file is reported as such") {
        CHECK_THROWS_WITH_AS(load_run_config("/nonexistent/evonas.json"), doctest::Contains("config not found"),
                             ConfigError);
    }

    SUBCASE("malformed JSON mentions the file") {
        TempDir td;
        const fs::path p = td / "broken.json";
        write_text(p, "{ not json");
        CHECK_THROWS_WITH_AS(load_run_config(p.string()), doctest::Contains("broken.json"), ConfigError);
    }
}

TEST_CASE("config documents round-trip through their JSON form") {
    SUBCASE("a surrogate-fitness config with an explicit target") {
        RunConfig c;
        c.method = SearchMethod::small_set;
        c.limits.max_conv_layers = 2;
        c.limits.max_dense_layers = 2;
        c.limits.filter_bounds = {2, 100};
        c.limits.neuron_bounds = {12, 500};
        c.ga.n_m = 6;
        c.ga.t = 2;
        c.ga.r = 2;
        c.ga.d = 1;
        c.ga.generations = 4;
        c.ga.budget_evals = 500;
        c.bigan.m = 9;
        c.surrogate = default_surrogate(c.limits);
        c.seed = 123;
        c.out_dir = "elsewhere";
        c.workers = 2;

        const nlohmann::json j = c;
        const RunConfig back = parse_run_config(j);
        CHECK(nlohmann::json(back) == j);
        CHECK(back.method == c.method);
        CHECK(back.seed == c.seed);
        CHECK(back.workers == c.workers);
        REQUIRE(back.ga.budget_evals.has_value());
        CHECK(*back.ga.budget_evals == 500);
        REQUIRE(back.surrogate.has_value());
    }

    SUBCASE("a trained-fitness config keeps its dataset block") {
        RunConfig c;
        c.fitness = FitnessKind::tinynet;
        c.dataset.n_samples = 64;
        c.dataset.input_shape = {1, 6, 6};
        c.dataset.seed = 5;
        c.train.max_epochs = 3;
        c.limits.neuron_bounds = {4, 32};
        c.limits.filter_bounds = {1, 8};

        const nlohmann::json j = c;
        CHECK(j.contains("dataset"));
        const RunConfig back = parse_run_config(j);
        CHECK(nlohmann::json(back) == j);
        CHECK(back.fitness == FitnessKind::tinynet);
        CHECK(back.dataset.n_samples == 64);
        CHECK(back.train.max_epochs == 3);
    }
}

TEST_CASE("the search command writes its outputs and reports exit codes") {
    TempDir td;
    const fs::path cfg_path = td / "run.json";
    nlohmann::json cfg = tiny_config();
    write_text(cfg_path, cfg.dump(2));

    SUBCASE("a successful run leaves the three output files behind") {
        const fs::path out = td / "out";
        CHECK(cli({"search", "--config", cfg_path.string(), "--out", out.string()}) == 0);
        CHECK(fs::exists(out / "history.jsonl"));
        CHECK(fs::exists(out / "summary.json"));
        CHECK(fs::exists(out / "curves.csv"));
        CHECK(count_lines(out / "history.jsonl") == 2);  // one line per generation
        CHECK(count_lines(out / "curves.csv") == 3);     // header + 2 generations

        CHECK(cli({"report", "--run", out.string()}) == 0);
    }

    SUBCASE("a missing config file is a usage error") {
        CHECK(cli({"search", "--config", (td / "absent.json").string()}) == 2);
    }

    SUBCASE("a malformed config file is a usage error") {
        const fs::path bad = td / "bad.json";
        write_text(bad, "{\"method\": \"proposed\", \"ga\": {\"n_m\": []}}");
        CHECK(cli({"search", "--config", bad.string()}) == 2);
    }

    SUBCASE("unknown flags are usage errors") {
        CHECK(cli({"search", "--config", cfg_path.string(), "--definitely-not-a-flag"}) == 2);
        CHECK(cli({"frobnicate"}) == 2);
    }

    SUBCASE("reporting a directory without a run is a runtime error") {
        CHECK(cli({"report", "--run", (td / "empty").string()}) == 1);
    }
}

TEST_CASE("the output directory resolves flag over environment over config") {
    TempDir td;
    const fs::path cfg_dir = td / "from_config";
    const fs::path env_dir = td / "from_env";
    const fs::path flag_dir = td / "from_flag";
    nlohmann::json cfg = tiny_config();
    cfg["out_dir"] = cfg_dir.string();
    const fs::path cfg_path = td / "run.json";
    write_text(cfg_path, cfg.dump());

    ::setenv("EVONAS_OUT_DIR", env_dir.string().c_str(), 1);
    CHECK(cli({"search", "--config", cfg_path.string(), "--out", flag_dir.string()}) == 0);
    CHECK(fs::exists(flag_dir / "history.jsonl"));
    CHECK_FALSE(fs::exists(env_dir / "history.jsonl"));
    CHECK_FALSE(fs::exists(cfg_dir / "history.jsonl"));

    CHECK(cli({"search", "--config", cfg_path.string()}) == 0);
    CHECK(fs::exists(env_dir / "history.jsonl"));
    CHECK_FALSE(fs::exists(cfg_dir / "history.jsonl"));
    ::unsetenv("EVONAS_OUT_DIR");

    CHECK(cli({"search", "--config", cfg_path.string()}) == 0);
    CHECK(fs::exists(cfg_dir / "history.jsonl"));
}

TEST_CASE("equal-budget comparisons produce method-major rows and medians") {
    RunConfig base = parse_run_config(tiny_config());
    base.ga.budget_evals = 60;
    const std::vector<SearchMethod> methods{SearchMethod::proposed, SearchMethod::small_set,
                                            SearchMethod::random_search};

    const CompareResult res = run_compare(base, methods, 2);
    REQUIRE(res.rows.size() == 6);
    REQUIRE(res.medians.size() == 3);
    for (int mi = 0; mi < 3; ++mi) {
        for (int s = 0; s < 2; ++s) {
            const CompareRow& row = res.rows[mi * 2 + s];
            CHECK(row.method == to_string(methods[mi]));
            CHECK(row.seed == base.seed + static_cast<std::uint64_t>(s));
            CHECK(row.evals > 0);
            CHECK(row.evals <= 60);
            CHECK(row.best_fitness >= 0.0);
            CHECK(row.best_fitness <= 1.0);
        }
        CHECK(res.medians[mi].method == to_string(methods[mi]));
    }

    TempDir td;
    write_compare_outputs(td.path.string(), res);
    CHECK(count_lines(td / "comparison.csv") == 7);  // header + 6 rows
    CHECK(count_lines(td / "medians.csv") == 4);     // header + 3 methods

    const std::string table = format_median_table(res);
    for (const SearchMethod m : methods) {
        CHECK(table.find(to_string(m)) != std::string::npos);
    }

    SUBCASE("fewer than two methods is rejected") {
        CHECK_THROWS_AS(run_compare(base, {SearchMethod::proposed}, 2), std::invalid_argument);
    }

    SUBCASE("a missing evaluation budget is rejected") {
        RunConfig no_budget = base;
        no_budget.ga.budget_evals.reset();
        CHECK_THROWS_AS(run_compare(no_budget, methods, 1), std::invalid_argument);
    }
}

TEST_CASE("candidate listings parse back to the identical candidate") {
    SearchLimits l;
    Rng rng(80);

    SUBCASE("round-trip across random candidates, with and without fitness") {
        for (int i = 0; i < 200; ++i) {
            Candidate c;
            c.genome = random_genome(l, rng);
            c.params = random_params(l, rng);
            if (i % 2 == 0) {
                FitnessReport f;
                f.accuracy = 0.123456789012345 + i * 1e-6;
                f.epochs_run = i;
                f.val_loss = 1.25e-3 * (i + 1);
                c.fitness = f;
            }
            const Candidate back = parse_candidate_listing(format_candidate_listing(c));
            CHECK(back.genome == c.genome);
            CHECK(back.params == c.params);
            REQUIRE(back.fitness.has_value() == c.fitness.has_value());
            if (c.fitness) {
                CHECK(back.fitness->accuracy == c.fitness->accuracy);  // full-precision text
                CHECK(back.fitness->epochs_run == c.fitness->epochs_run);
                CHECK(back.fitness->val_loss == c.fitness->val_loss);
            }
        }
    }

    SUBCASE("the full report body parses as a listing too") {
        RunConfig cfg = parse_run_config(tiny_config());
        const RunHistory h = run_search(cfg);
        REQUIRE(h.best_candidate() != nullptr);
        const Candidate back = parse_candidate_listing(format_run_report(h));
        CHECK(back.genome == h.best_candidate()->genome);
        CHECK(back.params == h.best_candidate()->params);
    }

    SUBCASE("unrelated text is rejected") {
        CHECK_THROWS_WITH_AS(parse_candidate_listing("once upon a time"),
                             doctest::Contains("not a candidate listing"), std::runtime_error);
    }
}

TEST_CASE("run histories round-trip through the output files") {
    RunConfig cfg = parse_run_config(tiny_config());
    const RunHistory h = run_search(cfg);

    TempDir td;
    write_run_outputs(td.path, h);
    const RunHistory back = load_run_history(td.path);
    REQUIRE(back.records.size() == h.records.size());
    CHECK(history_json(back) == history_json(h));
    CHECK(back.total_evaluations == h.total_evaluations);

    SUBCASE("a directory without a history file refuses to load") {
        TempDir empty;
        CHECK_THROWS_WITH_AS(load_run_history(empty.path), doctest::Contains("no history found"),
                             std::runtime_error);
    }

    SUBCASE("an empty history file refuses to load") {
        TempDir empty;
        write_text(empty / "history.jsonl", "");
        CHECK_THROWS_WITH_AS(load_run_history(empty.path), doctest::Contains("no history found"),
                             std::runtime_error);
    }
}

TEST_CASE("a run is a pure function of its configuration") {
    RunConfig cfg = parse_run_config(tiny_config());
    cfg.ga.generations = 3;

    const RunHistory a = run_search(cfg);
    const RunHistory b = run_search(cfg);
    CHECK(history_json(a) == history_json(b));

    RunConfig threaded = cfg;
    threaded.workers = 3;
    const RunHistory c = run_search(threaded);
    CHECK(history_json(a) == history_json(c));

    RunConfig reseeded = cfg;
    reseeded.seed = cfg.seed + 1;
    const RunHistory d = run_search(reseeded);
    CHECK(history_json(a) != history_json(d));
}

TEST_CASE("the gradient-check command reports its verdict through the exit code") {
    CHECK(cli({"gradcheck"}) == 0);
    CHECK(cli({"gradcheck", "--corrupt-gradient"}) == 1);
}

}  // TEST_SUITE
