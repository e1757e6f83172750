#include "support.hpp"

#include <sponge/structure.hpp>

#include <doctest.h>

using namespace sponge;
using test_support::fixture;
using test_support::Gen;

namespace {

// Independent pairwise disjointness check in doubles, no sweep or grouping.
bool good_bruteforce(const SpongeTemplate& t, const std::vector<int>& coords, bool strong) {
    std::set<std::vector<int>> distinct;
    for (const auto& digit : t.digits()) {
        std::vector<int> p;
        for (int c : coords) p.push_back(digit[c]);
        distinct.insert(p);
    }
    std::vector<std::vector<int>> items(distinct.begin(), distinct.end());
    for (std::size_t x = 0; x < items.size(); ++x) {
        for (std::size_t y = x + 1; y < items.size(); ++y) {
            bool overlap_all = true;
            for (std::size_t q = 0; q < coords.size() && overlap_all; ++q) {
                auto u = t.base(coords[q])[items[x][q]].image();
                auto v = t.base(coords[q])[items[y][q]].image();
                Number lo = u.lo < v.lo ? v.lo : u.lo;
                Number hi = u.hi < v.hi ? u.hi : v.hi;
                overlap_all = strong ? !(hi < lo) : lo < hi;
            }
            if (overlap_all) return false;
        }
    }
    return true;
}

}  // namespace

TEST_SUITE("structure") {

TEST_CASE("partial order examples") {
    auto phi1 = fixture("phi1.json");
    auto order = partial_order(phi1);
    // y (coordinate 1) ≺ x (coordinate 0): 1/2 ≥ 1/3
    CHECK(order.precedes(1, 0));
    CHECK_FALSE(order.precedes(0, 1));
    CHECK(order.precedes(0, 0));

    auto square = fixture("full_square.json");
    auto sq = partial_order(square);
    CHECK(sq.precedes(0, 1));
    CHECK(sq.precedes(1, 0));

    auto chain = parse_template(R"({"dimension":3,"bases":[{"grid":2},{"grid":3},{"grid":5}],"digits":[[0,0,0],[1,2,4]]})");
    auto ch = partial_order(chain);
    CHECK(ch.precedes(0, 1));
    CHECK(ch.precedes(1, 2));
    CHECK(ch.precedes(0, 2));
    CHECK_FALSE(ch.precedes(2, 0));
}

TEST_CASE("goodness examples") {
    auto phi1 = fixture("phi1.json");
    CHECK(is_good(phi1, {1}, false));
    CHECK_FALSE(is_good(phi1, {1}, true));
    CHECK(is_good(phi1, {0, 1}, false));
    CHECK(is_good(phi1, {}, true));
    auto slg9 = fixture("slg9.json");
    CHECK(is_good(slg9, {0}, true));
    CHECK(is_good(slg9, {0, 1}, true));
}

TEST_CASE("classification of Phi1") {
    auto c = classify(fixture("phi1.json"));
    CHECK(c.baranski);
    CHECK_FALSE(c.strongly_baranski);
    CHECK(c.distinguishable);
    CHECK(c.sierpinski);
    REQUIRE(c.lg_sigma.has_value());
    CHECK(*c.lg_sigma == std::vector<int>{1, 0});
    CHECK(c.lalley_gatzouras);
    CHECK_FALSE(c.strongly_lg);
}

TEST_CASE("classification of SLG9 and ties") {
    auto c = classify(fixture("slg9.json"));
    CHECK(c.strongly_lg);
    CHECK(c.strongly_baranski);
    REQUIRE(c.lg_sigma.has_value());
    CHECK(*c.lg_sigma == std::vector<int>{0, 1});

    auto sq = classify(fixture("full_square.json"));
    CHECK_FALSE(sq.lg_sigma.has_value());
    CHECK_FALSE(sq.distinguishable);
    CHECK_FALSE(sq.strongly_lg);
}

TEST_CASE("non-Sierpinski and mixed ratio templates") {
    // ratios differ between digits in coordinate 0, so no uniform order
    auto t = parse_template(R"({"dimension":2,
        "bases":[{"maps":[{"ratio":"1/2","offset":"0"},{"ratio":"1/4","offset":"3/4"}]},
                 {"maps":[{"ratio":"1/3","offset":"0"},{"ratio":"1/3","offset":"2/3"}]}],
        "digits":[[0,0],[1,1]]})");
    auto c = classify(t);
    CHECK_FALSE(c.sierpinski);
    CHECK_FALSE(c.lg_sigma.has_value());
    CHECK(c.strongly_baranski);
    auto order = partial_order(t);
    CHECK_FALSE(order.precedes(0, 1));
    CHECK_FALSE(order.precedes(1, 0));
}

TEST_CASE("irreducibility examples") {
    auto phi1 = irreducibility(fixture("phi1.json"));
    CHECK(phi1.irreducible);
    REQUIRE(phi1.witnesses[0].has_value());
    // witness for the x coordinate: (0,0) and (2,0)
    CHECK(phi1.witnesses[0]->a == 0);
    CHECK(phi1.witnesses[0]->b == 2);
    CHECK_FALSE(phi1.uniformly_irreducible);
    REQUIRE(phi1.counterexample.has_value());
    CHECK(phi1.counterexample->first == 0);
    CHECK(phi1.counterexample->second == 1);  // digit (1,1)

    auto phi2 = irreducibility(fixture("phi2.json"));
    CHECK_FALSE(phi2.irreducible);
    CHECK(phi2.first_reducible() == 0);

    auto phi3 = irreducibility(fixture("phi3.json"));
    CHECK(phi3.irreducible);
    CHECK(phi3.uniformly_irreducible);
}

TEST_CASE("measure profile examples") {
    auto phi1 = fixture("phi1.json");
    auto prof = measure_profile(phi1, BernoulliWeights::uniform(3));
    CHECK(prof.chi[0] == doctest::Approx(std::log(3.0)).epsilon(1e-14));
    CHECK(prof.chi[1] == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(prof.order.precedes(1, 0));
    CHECK_FALSE(prof.order.precedes(0, 1));
    CHECK(prof.distinct_lyapunov);
    CHECK(prof.good);
    CHECK(prof.exact_comparisons);
    CHECK(prof.level_sets == std::vector<std::vector<int>>{{1}, {0, 1}});
    CHECK(prof.irreducible_wrt.irreducible);

    auto sq = measure_profile(fixture("full_square.json"), BernoulliWeights::uniform(4));
    CHECK_FALSE(sq.distinct_lyapunov);

    CHECK_THROWS_AS(measure_profile(phi1, BernoulliWeights::uniform(2)), SpongeError);

    auto point = measure_profile(phi1, parse_weights(R"({"weights":["1","0","0"]})", phi1));
    CHECK_FALSE(point.warnings.empty());
}

TEST_CASE("exact Lyapunov ties are detected") {
    // digit ratios (1/2,1/8) and (1/8,1/2) under uniform weights tie exactly
    auto t = parse_template(R"({"dimension":2,
        "bases":[{"maps":[{"ratio":"1/2","offset":"0"},{"ratio":"1/8","offset":"7/8"}]},
                 {"maps":[{"ratio":"1/8","offset":"0"},{"ratio":"1/2","offset":"1/2"}]}],
        "digits":[[0,0],[1,1]]})");
    auto prof = measure_profile(t, BernoulliWeights::uniform(2));
    CHECK(prof.exact_comparisons);
    CHECK_FALSE(prof.distinct_lyapunov);
    auto skew = measure_profile(t, parse_weights(R"({"weights":["2/3","1/3"]})", t));
    CHECK(skew.distinct_lyapunov);
    CHECK(skew.order.precedes(0, 1));
}

TEST_CASE("diffuseness decisions") {
    CHECK(decide_diffuseness(fixture("slg9.json")).verdict == Diffuseness::Diffuse);
    CHECK(decide_diffuseness(fixture("reducible_45.json")).verdict == Diffuseness::NotDiffuseNoSubsets);
    CHECK(decide_diffuseness(fixture("reducible_94.json")).verdict == Diffuseness::NotDiffuseNoSubsets);
    CHECK(decide_diffuseness(fixture("phi1.json")).verdict == Diffuseness::Undecided);
    CHECK(decide_diffuseness(fixture("slg27.json")).verdict == Diffuseness::Diffuse);
}

TEST_CASE("property: consistency over random templates") {
    Gen gen(4242);
    for (int trial = 0; trial < 1000; ++trial) {
        auto t = trial % 2 ? gen.rational_template() : gen.grid_template();
        auto c = classify(t);
        if (c.strongly_baranski) CHECK(c.baranski);
        if (c.strongly_lg) CHECK(c.lg_sigma.has_value());
        if (c.strongly_lg) CHECK(c.lalley_gatzouras);

        auto order = partial_order(t);
        auto irr = irreducibility(t, order);
        if (irr.uniformly_irreducible) CHECK(irr.irreducible);
        CHECK(irr.uniformly_irreducible == uniformly_irreducible_bruteforce(t, order));

        // witnesses satisfy the defining inclusion
        for (int i = 0; i < t.dimension(); ++i) {
            if (!irr.witnesses[i]) continue;
            const auto& a = t.digit(irr.witnesses[i]->a);
            const auto& b = t.digit(irr.witnesses[i]->b);
            CHECK(a[i] != b[i]);
            for (int j = 0; j < t.dimension(); ++j) {
                if (a[j] != b[j]) CHECK(order.precedes(i, j));
            }
        }

        // goodness agrees with the naive pairwise check on every coordinate subset
        const int d = t.dimension();
        for (int mask = 1; mask < (1 << d); ++mask) {
            std::vector<int> coords;
            for (int c2 = 0; c2 < d; ++c2) {
                if (mask & (1 << c2)) coords.push_back(c2);
            }
            CHECK(is_good(t, coords, false) == good_bruteforce(t, coords, false));
            CHECK(is_good(t, coords, true) == good_bruteforce(t, coords, true));
        }

        // ≺_p refines ≺
        auto p = gen.weights(t.size(), true);
        auto prof = measure_profile(t, p);
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                if (order.precedes(i, j)) CHECK(prof.order.precedes(i, j));
            }
        }
        if (irr.irreducible) CHECK(prof.irreducible_wrt.irreducible);

        if (!irr.irreducible) CHECK(decide_diffuseness(t).verdict != Diffuseness::Diffuse);
    }
}

TEST_CASE("property: Sierpinski with sorted ratios gives a total order") {
    Gen gen(99);
    for (int trial = 0; trial < 200; ++trial) {
        auto t = gen.grid_template();
        std::vector<int> sizes;
        for (int c = 0; c < t.dimension(); ++c) sizes.push_back(*t.grid(c));
        auto order = partial_order(t);
        for (int i = 0; i < t.dimension(); ++i) {
            for (int j = 0; j < t.dimension(); ++j) {
                CHECK(order.precedes(i, j) == (sizes[i] <= sizes[j]));
                CHECK((order.precedes(i, j) || order.precedes(j, i)));
            }
        }
    }
}

}  // TEST_SUITE
