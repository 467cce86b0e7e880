#include <doctest.h>

#include <cmath>
#include <map>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "evonas/genome.hpp"

using namespace evonas;

namespace {

SearchLimits limits_cd(int c, int d) {
    SearchLimits l;
    l.max_conv_layers = c;
    l.max_dense_layers = d;
    return l;
}

}  // namespace

TEST_SUITE("genome") {

TEST_CASE("random genomes always keep one conv and one dense layer active") {
    const SearchLimits one = limits_cd(1, 1);
    Rng rng(42);
    for (int i = 0; i < 200; ++i) {
        const Genome g = random_genome(one, rng);
        CHECK(g.conv[0].exists);
        CHECK(g.dense[0].exists);
    }
}

TEST_CASE("random genomes pass validation for assorted limits") {
    for (const auto [c, d] : {std::pair{1, 1}, {3, 3}, {5, 2}, {2, 6}}) {
        const SearchLimits l = limits_cd(c, d);
        Rng rng(7 + c * 10 + d);
        for (int i = 0; i < 500; ++i) {
            const Genome g = random_genome(l, rng);
            CHECK(validate(g, l).empty());
        }
    }
}

TEST_CASE("activation choices are drawn uniformly") {
    // 10,000 draws, C=D=3: each of the 4 activations should show up with
    // frequency 0.25 +- 0.02 in every activation slot.
    const SearchLimits l = limits_cd(3, 3);
    Rng rng(99);
    const int n = 10000;
    std::map<std::pair<int, Activation>, int> counts;  // slot id -> activation -> count
    for (int i = 0; i < n; ++i) {
        const Genome g = random_genome(l, rng);
        for (int s = 0; s < 3; ++s) {
            ++counts[{s, g.conv[s].activation}];
            ++counts[{3 + s, g.dense[s].activation}];
        }
    }
    for (int slot = 0; slot < 6; ++slot) {
        for (const Activation a :
             {Activation::relu, Activation::leaky_relu, Activation::sigmoid, Activation::tanh}) {
            const double freq = counts[{slot, a}] / static_cast<double>(n);
            CHECK(std::abs(freq - 0.25) <= 0.02);
        }
    }
}

TEST_CASE("validation accepts legal genomes and names each violation") {
    const SearchLimits l = limits_cd(2, 2);
    Genome g;
    g.conv.assign(2, ConvLayerGene{});
    g.dense.assign(2, DenseLayerGene{});
    CHECK(validate(g, l).empty());

    SUBCASE("no active conv layer") {
        g.conv[0].exists = false;
        g.conv[1].exists = false;
        const auto v = validate(g, l);
        REQUIRE(!v.empty());
        bool found = false;
        for (const auto& violation : v) found = found || violation.message.find("no active conv layer") != std::string::npos;
        CHECK(found);
    }

    SUBCASE("kernel size outside the choice set names the slot") {
        g.conv[1].kernel_size = 4;
        const auto v = validate(g, l);
        REQUIRE(v.size() == 1);
        CHECK(v[0].location == "conv[2].kernel_size");  // layers are named 1-based
    }

    SUBCASE("wrong gene-vector lengths are violations") {
        g.conv.pop_back();
        CHECK(!validate(g, l).empty());
    }
}

TEST_CASE("parameter slot counts follow 5C+4D") {
    CHECK(param_slot_count(limits_cd(3, 3)) == 27);
    CHECK(param_slot_count(limits_cd(1, 1)) == 9);
    CHECK(param_slot_count(limits_cd(5, 2)) == 33);
}

TEST_CASE("slot indices map conv-major with the declared field order") {
    const SearchLimits l = limits_cd(3, 3);
    CHECK(locate_slot(1, l) == SlotRef{LayerKind::conv, 1, SlotField::exists});
    CHECK(locate_slot(5, l) == SlotRef{LayerKind::conv, 1, SlotField::max_pool});
    CHECK(locate_slot(6, l) == SlotRef{LayerKind::conv, 2, SlotField::exists});
    CHECK(locate_slot(15, l) == SlotRef{LayerKind::conv, 3, SlotField::max_pool});
    CHECK(locate_slot(16, l) == SlotRef{LayerKind::dense, 1, SlotField::exists});
    CHECK(locate_slot(27, l) == SlotRef{LayerKind::dense, 3, SlotField::dropout});
    CHECK_THROWS_AS(locate_slot(0, l), std::out_of_range);
    CHECK_THROWS_AS(locate_slot(28, l), std::out_of_range);
}

TEST_CASE("zero-active repair forces the first layer on") {
    Genome g;
    g.conv.assign(2, ConvLayerGene{});
    g.dense.assign(2, DenseLayerGene{});
    g.conv[0].exists = g.conv[1].exists = false;
    g.dense[0].exists = false;
    repair_zero_active(g);
    CHECK(g.conv[0].exists);
    CHECK_FALSE(g.conv[1].exists);
    // The dense block still had an active layer, so repair leaves it alone.
    CHECK_FALSE(g.dense[0].exists);
    CHECK(g.dense[1].exists);
}

TEST_CASE("random params respect the count bounds") {
    SearchLimits l = limits_cd(2, 3);
    l.filter_bounds = {1, 16};
    l.neuron_bounds = {4, 40};
    Rng rng(5);
    for (int i = 0; i < 300; ++i) {
        const ContinuousParams p = random_params(l, rng);
        REQUIRE(p.filters.size() == 2);
        REQUIRE(p.neurons.size() == 3);
        CHECK(validate_params(p, l).empty());
        for (int f : p.filters) CHECK((f >= 1 && f <= 16));
        for (int n : p.neurons) CHECK((n >= 4 && n <= 40));
    }
}

TEST_CASE("candidates round-trip through JSON") {
    const SearchLimits l = limits_cd(3, 3);
    Rng rng(11);
    Candidate c;
    c.genome = random_genome(l, rng);
    c.params = random_params(l, rng);
    FitnessReport r;
    r.accuracy = 0.875;
    r.epochs_run = 4;
    r.val_loss = 0.31;
    c.fitness = r;

    const nlohmann::json j = c;
    const auto back = j.get<Candidate>();
    CHECK(back.genome == c.genome);
    CHECK(back.params == c.params);
    REQUIRE(back.fitness.has_value());
    CHECK(back.fitness->accuracy == c.fitness->accuracy);
    CHECK(back.fitness->epochs_run == c.fitness->epochs_run);
    CHECK(back.fitness->val_loss == c.fitness->val_loss);

    Candidate unevaluated;
    unevaluated.genome = c.genome;
    unevaluated.params = c.params;
    const nlohmann::json j2 = unevaluated;
    CHECK_FALSE(j2.at("fitness").is_object());
    CHECK_FALSE(j2.get<Candidate>().fitness.has_value());
}

}  // TEST_SUITE
