#include "evonas/run_history.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace evonas {

const Candidate* RunHistory::best_candidate() const {
    const Candidate* best = nullptr;
    for (const auto& rec : records) {
        for (const auto& c : rec.candidates) {
            if (!c.fitness) continue;
            if (!best || c.fitness->accuracy > best->fitness->accuracy) best = &c;
        }
    }
    return best;
}

void to_json(nlohmann::json& j, const GenerationRecord& r) {
    // elapsed_seconds is wall-clock noise; leaving it out keeps
    // history.jsonl byte-identical across same-seed reruns.
    j = nlohmann::json{{"generation", r.generation},     {"candidates", r.candidates},
                       {"best_fitness", r.best_fitness}, {"mean_fitness", r.mean_fitness},
                       {"mean_loss", r.mean_loss},       {"evals_so_far", r.evals_so_far}};
}

void from_json(const nlohmann::json& j, GenerationRecord& r) {
    j.at("generation").get_to(r.generation);
    j.at("candidates").get_to(r.candidates);
    j.at("best_fitness").get_to(r.best_fitness);
    j.at("mean_fitness").get_to(r.mean_fitness);
    j.at("mean_loss").get_to(r.mean_loss);
    j.at("evals_so_far").get_to(r.evals_so_far);
    r.elapsed_seconds = 0.0;
}

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

}  // namespace

void write_run_outputs(const std::filesystem::path& dir, const RunHistory& history) {
    std::filesystem::create_directories(dir);

    {
        std::ofstream f(dir / "history.jsonl", std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write " + (dir / "history.jsonl").string());
        for (const auto& rec : history.records) f << nlohmann::json(rec).dump() << '\n';
    }
    {
        const Candidate* best = history.best_candidate();
        nlohmann::json summary{{"config", history.config_snapshot},
                               {"generations", history.records.size()},
                               {"total_evaluations", history.total_evaluations},
                               {"total_seconds", history.total_seconds},
                               {"best_fitness", best ? nlohmann::json(best->fitness->accuracy) : nlohmann::json()},
                               {"best_candidate", best ? nlohmann::json(*best) : nlohmann::json()}};
        std::ofstream f(dir / "summary.json", std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write " + (dir / "summary.json").string());
        f << summary.dump(2) << '\n';
    }
    {
        std::ofstream f(dir / "curves.csv", std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write " + (dir / "curves.csv").string());
        f << "elapsed_seconds,generation,best_fitness,mean_fitness,mean_loss\n";
        for (const auto& rec : history.records) {
            f << fmt(rec.elapsed_seconds) << ',' << rec.generation << ',' << fmt(rec.best_fitness) << ','
              << fmt(rec.mean_fitness) << ',' << fmt(rec.mean_loss) << '\n';
        }
    }
}

RunHistory load_run_history(const std::filesystem::path& dir) {
    const auto path = dir / "history.jsonl";
    std::ifstream f(path);
    if (!f) throw std::runtime_error("no history found in " + dir.string());
    RunHistory h;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        h.records.push_back(nlohmann::json::parse(line).get<GenerationRecord>());
    }
    if (h.records.empty()) throw std::runtime_error("no history found in " + dir.string());

    const auto summary_path = dir / "summary.json";
    std::ifstream s(summary_path);
    if (s) {
        nlohmann::json j;
        s >> j;
        if (j.contains("config")) h.config_snapshot = j["config"];
        h.total_evaluations = j.value("total_evaluations", 0L);
        h.total_seconds = j.value("total_seconds", 0.0);
    } else {
        h.total_evaluations = h.records.back().evals_so_far;
    }
    return h;
}

}  // namespace evonas
