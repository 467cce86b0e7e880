#include "evonas/report.hpp"

#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

namespace evonas {

namespace {

std::string full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

const char* yn(bool b) { return b ? "yes" : "no"; }

bool parse_yn(const std::string& s) {
    if (s == "yes") return true;
    if (s == "no") return false;
    throw std::runtime_error("expected yes/no, got \"" + s + "\"");
}

/// Splits "k1=v1 k2=v2 ..." into a map; every token must contain '='.
std::map<std::string, std::string> parse_kv(const std::string& s) {
    std::map<std::string, std::string> kv;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw std::runtime_error("expected key=value, got \"" + tok + "\"");
        kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    return kv;
}

const std::string& want(const std::map<std::string, std::string>& kv, const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end()) throw std::runtime_error("missing field \"" + key + "\" in listing line");
    return it->second;
}

int to_int(const std::string& s) {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::runtime_error("bad integer \"" + s + "\"");
    return v;
}

double to_double(const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::runtime_error("bad number \"" + s + "\"");
    return v;
}

bool starts_with(const std::string& s, const char* prefix) { return s.rfind(prefix, 0) == 0; }

}  // namespace

std::string format_candidate_listing(const Candidate& c) {
    std::ostringstream out;
    if (c.fitness) {
        out << "fitness: accuracy=" << full(c.fitness->accuracy) << " epochs=" << c.fitness->epochs_run
            << " val_loss=" << full(c.fitness->val_loss) << '\n';
    } else {
        out << "fitness: none\n";
    }
    for (std::size_t i = 0; i < c.genome.conv.size(); ++i) {
        const auto& g = c.genome.conv[i];
        const int filters = i < c.params.filters.size() ? c.params.filters[i] : 1;
        out << "conv layer " << i + 1 << ": exists=" << yn(g.exists) << " kernel=" << g.kernel_size
            << " activation=" << to_string(g.activation) << " batch_norm=" << yn(g.batch_norm)
            << " max_pool=" << yn(g.max_pool) << " filters=" << filters << '\n';
    }
    for (std::size_t i = 0; i < c.genome.dense.size(); ++i) {
        const auto& g = c.genome.dense[i];
        const int neurons = i < c.params.neurons.size() ? c.params.neurons[i] : 1;
        out << "dense layer " << i + 1 << ": exists=" << yn(g.exists)
            << " activation=" << to_string(g.activation) << " batch_norm=" << yn(g.batch_norm)
            << " dropout=" << yn(g.dropout) << " neurons=" << neurons << '\n';
    }
    return out.str();
}

Candidate parse_candidate_listing(const std::string& text) {
    Candidate c;
    bool saw_fitness = false;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (starts_with(line, "fitness: ")) {
            saw_fitness = true;
            const std::string rest = line.substr(9);
            if (rest == "none") continue;
            const auto kv = parse_kv(rest);
            FitnessReport r;
            r.accuracy = to_double(want(kv, "accuracy"));
            r.epochs_run = to_int(want(kv, "epochs"));
            r.val_loss = to_double(want(kv, "val_loss"));
            c.fitness = r;
        } else if (starts_with(line, "conv layer ")) {
            const auto colon = line.find(':');
            if (colon == std::string::npos) throw std::runtime_error("malformed conv layer line");
            const int index = to_int(line.substr(11, colon - 11));
            if (index != static_cast<int>(c.genome.conv.size()) + 1) {
                throw std::runtime_error("conv layer lines out of order at index " + std::to_string(index));
            }
            const auto kv = parse_kv(line.substr(colon + 1));
            ConvLayerGene g;
            g.exists = parse_yn(want(kv, "exists"));
            g.kernel_size = to_int(want(kv, "kernel"));
            g.activation = activation_from_string(want(kv, "activation"));
            g.batch_norm = parse_yn(want(kv, "batch_norm"));
            g.max_pool = parse_yn(want(kv, "max_pool"));
            c.genome.conv.push_back(g);
            c.params.filters.push_back(to_int(want(kv, "filters")));
        } else if (starts_with(line, "dense layer ")) {
            const auto colon = line.find(':');
            if (colon == std::string::npos) throw std::runtime_error("malformed dense layer line");
            const int index = to_int(line.substr(12, colon - 12));
            if (index != static_cast<int>(c.genome.dense.size()) + 1) {
                throw std::runtime_error("dense layer lines out of order at index " + std::to_string(index));
            }
            const auto kv = parse_kv(line.substr(colon + 1));
            DenseLayerGene g;
            g.exists = parse_yn(want(kv, "exists"));
            g.activation = activation_from_string(want(kv, "activation"));
            g.batch_norm = parse_yn(want(kv, "batch_norm"));
            g.dropout = parse_yn(want(kv, "dropout"));
            c.genome.dense.push_back(g);
            c.params.neurons.push_back(to_int(want(kv, "neurons")));
        }
    }
    if (!saw_fitness || c.genome.conv.empty() || c.genome.dense.empty()) {
        throw std::runtime_error("text is not a candidate listing");
    }
    return c;
}

std::string format_run_report(const RunHistory& hist) {
    const Candidate* best = hist.best_candidate();
    if (!best) throw std::runtime_error("run history holds no evaluated candidate");
    std::ostringstream out;
    out << "generations: " << hist.records.size() << '\n'
        << "evaluations: " << hist.total_evaluations << '\n'
        << "best candidate\n"
        << format_candidate_listing(*best);
    return out.str();
}

}  // namespace evonas
