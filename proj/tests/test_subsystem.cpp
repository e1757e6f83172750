#include "support.hpp"

#include <sponge/dimension.hpp>
#include <sponge/structure.hpp>
#include <sponge/subsystem.hpp>

#include <doctest.h>

#include <cmath>
#include <set>

using namespace sponge;
using test_support::fixture;
using test_support::Gen;

namespace {

// Frozen from an independent exhaustive enumeration (set comprehension
// without grouping, fiber counts read off the surviving words).
constexpr std::size_t kPhi1S4 = 32;
constexpr double kPhi1S4Mass = 32.0 / 81.0;
constexpr double kPhi1Eps1N4Lower = 0.6487982101190621;
constexpr double kPhi1Eps2N6SMass = 0.5925925925925929;
constexpr double kPhi1Eps2N6DeltaSum = 0.2869449564440136;
constexpr double kPhi1Eps2N6Lower = 0.8645045546330739;
constexpr double kPhi1Eps2N6Upper = 0.943370773829506;
constexpr double kPhi3DeltaSum[] = {0.07086183495007814, 0.39409177908245624, 0.5856354496794209};
constexpr double kPhi3Lower[] = {1.0872865023809717, 1.2231973151785929, 1.3047438028571658};

BernoulliWeights uniform(const SpongeTemplate& t) { return BernoulliWeights::uniform(t.size()); }

// Direct reading of the chain definition, with no grouping: for each word,
// sum the masses of all words sharing its earlier-coordinate pattern.
std::vector<std::set<std::uint64_t>> naive_chain(const WordSet& S, const SpongeTemplate& t, const BernoulliWeights& p,
                                                 double eps) {
    const auto data = typicality_data(t, p);
    const int d = t.dimension();
    auto same_pattern = [&](const Word& u, const Word& v, int level) {
        for (std::size_t n = 0; n < u.size(); ++n) {
            for (int k = 0; k < level; ++k) {
                if (t.digit(u[n])[data.order[k]] != t.digit(v[n])[data.order[k]]) return false;
            }
        }
        return true;
    };
    auto mass = [&](const Word& w) {
        double m = 1;
        for (auto a : w) m *= p[a];
        return m;
    };
    std::vector<std::set<std::uint64_t>> chain{{S.codes.begin(), S.codes.end()}};
    for (int i = d; i >= 1; --i) {
        std::set<std::uint64_t> next;
        for (auto code : chain.back()) {
            Word w = decode_word(code, S.length, S.alphabet);
            double group = 0;
            for (auto other : chain.back()) {
                Word v = decode_word(other, S.length, S.alphabet);
                if (same_pattern(w, v, i - 1)) group += mass(v);
            }
            double cylinder = 1;
            for (auto a : w) cylinder *= data.class_mass[i - 1][a];
            if (group >= eps * cylinder) next.insert(code);
        }
        chain.push_back(next);
    }
    return chain;
}

}  // namespace

TEST_SUITE("subsystem") {

TEST_CASE("word codes round trip") {
    Word w{2, 0, 1, 1};
    CHECK(encode_word(w, 3) == 2 * 27 + 0 * 9 + 1 * 3 + 1);
    CHECK(decode_word(encode_word(w, 3), 4, 3) == w);
}

TEST_CASE("typical words on phi1") {
    auto t = fixture("phi1.json");
    auto S = typical_words(t, uniform(t), 0.1, 4);
    CHECK(S.size() == kPhi1S4);
    CHECK(S.mass == doctest::Approx(kPhi1S4Mass).epsilon(1e-12));
    CHECK(std::is_sorted(S.codes.begin(), S.codes.end()));
}

TEST_CASE("typical words: vacuous windows keep every word") {
    auto t = fixture("phi1.json");
    auto S = typical_words(t, uniform(t), 50.0, 5);
    CHECK(S.size() == 243);
    CHECK(S.mass == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("typical words: errors") {
    auto t = fixture("phi1.json");
    auto zero = BernoulliWeights(std::vector<Number>{Number::ratio(1, 2), Number::ratio(1, 2), Number(0)});
    CHECK_THROWS_WITH_AS(typical_words(t, zero, 0.1, 3), doctest::Contains("positive"), SpongeError);
    try {
        typical_words(t, uniform(t), 0.1, 20, 1000);
        FAIL("expected cap error");
    } catch (const SpongeError& e) {
        CHECK(e.code() == ErrorCode::EnumerationCapExceeded);
    }
}

TEST_CASE("typical words: Sierpinski templates are cut by information only") {
    // with constant ratios the contraction window holds for every word, so
    // eps = 0 keeps exactly the words whose information sums meet the mean
    auto t = fixture("phi3.json");
    auto S = typical_words(t, uniform(t), 0.0, 4);
    CHECK(S.size() == 256);  // uniform p: each letter carries the mean information
}

TEST_CASE("pruning chain on phi1 matches the naive comprehension") {
    auto t = fixture("phi1.json");
    auto p = uniform(t);
    auto S = typical_words(t, p, 0.1, 4);
    auto chain = prune_chain(S, t, p, 0.1);
    auto naive = naive_chain(S, t, p, 0.1);
    REQUIRE(chain.sets.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(std::set<std::uint64_t>(chain.sets[k].codes.begin(), chain.sets[k].codes.end()) == naive[k]);
        CHECK(chain.masses[k] == doctest::Approx(kPhi1S4Mass).epsilon(1e-12));
    }
}

TEST_CASE("pruning chain: zero threshold and full sets") {
    auto t = fixture("phi3.json");
    auto p = uniform(t);
    auto S = typical_words(t, p, 0.3, 3);
    auto chain = prune_chain(S, t, p, 0.0);
    CHECK(chain.sets.back().codes == S.codes);
    auto full = typical_words(t, p, 100.0, 3);
    REQUIRE(full.size() == 64);
    auto kept = prune_chain(full, t, p, 1.0);
    CHECK(kept.sets.back().size() == 64);
}

TEST_CASE("property: chain monotone, loss per step at most eps, agrees with naive") {
    Gen gen(41);
    int checked = 0;
    for (int trial = 0; trial < 60; ++trial) {
        auto t = gen.grid_template(2);
        if (t.size() < 2) continue;
        auto p = gen.weights(t.size(), false);
        const int N = gen.integer(2, 4);
        if (std::pow(double(t.size()), N) > 3000) continue;
        const double eps = gen.real(0.0, 0.6);
        auto S = typical_words(t, p, eps, N);
        auto chain = prune_chain(S, t, p, eps);
        auto naive = naive_chain(S, t, p, eps);
        for (std::size_t k = 0; k + 1 < chain.sets.size(); ++k) {
            const auto& big = chain.sets[k].codes;
            const auto& small = chain.sets[k + 1].codes;
            CHECK(std::includes(big.begin(), big.end(), small.begin(), small.end()));
            CHECK(chain.masses[k] - chain.masses[k + 1] <= eps + 1e-12);
        }
        for (std::size_t k = 0; k < chain.sets.size(); ++k) {
            CHECK(std::set<std::uint64_t>(chain.sets[k].codes.begin(), chain.sets[k].codes.end()) == naive[k]);
        }
        ++checked;
    }
    CHECK(checked > 20);
}

TEST_CASE("interior words") {
    CHECK(interior_word(fixture("phi1.json")) == Word{0, 1});
    CHECK(interior_word(fixture("phi2.json")) == Word{0, 1});
    CHECK(interior_word(fixture("phi3.json")) == Word{0, 1});
    auto origin = parse_template(R"({"dimension":2,"bases":[{"grid":3},{"grid":2}],"digits":[[0,0]]})");
    try {
        interior_word(origin);
        FAIL("expected NoInteriorWord");
    } catch (const SpongeError& e) {
        CHECK(e.code() == ErrorCode::NoInteriorWord);
    }
}

TEST_CASE("property: interior word agrees with breadth-first enumeration") {
    Gen gen(5);
    for (int trial = 0; trial < 200; ++trial) {
        auto t = gen.rational_template(2);
        std::optional<Word> expected;
        // literal length-then-lex search up to length 3
        for (int len = 1; len <= 3 && !expected; ++len) {
            Word w(len, 0);
            while (true) {
                auto box = apply_word(t, w);
                bool inside = true;
                for (const auto& iv : box) inside = inside && iv.lo > Number(0) && iv.hi < Number(1);
                if (inside) {
                    expected = w;
                    break;
                }
                int pos = len - 1;
                while (pos >= 0 && ++w[pos] == t.size()) w[pos--] = 0;
                if (pos < 0) break;
            }
        }
        if (expected) {
            CHECK(interior_word(t, 3) == *expected);
        } else {
            CHECK_THROWS_AS(interior_word(t, 3), SpongeError);
        }
    }
}

TEST_CASE("dimension bound spot value") {
    const double v = delta_bound(std::log(2.0), std::log(2.0), 0.5, 10, std::log(0.25));
    CHECK(v == doctest::Approx(4.0 / 17.0).epsilon(1e-12));
}

TEST_CASE("subsystem of phi1, small N clamps the bounds") {
    auto t = fixture("phi1.json");
    auto r = build_subsystem(t, uniform(t), 0.1, 4);
    CHECK(r.S_size == kPhi1S4);
    CHECK(r.tau == Word{0, 1});
    CHECK(r.psi->size() == r.chain_sizes.back());
    CHECK(r.delta == std::vector<double>{0.0, 0.0});
    CHECK(!r.warnings.empty());
    REQUIRE(r.formula_lower);
    CHECK(*r.formula_lower == doctest::Approx(kPhi1Eps1N4Lower).epsilon(1e-12));
    CHECK(*r.formula_upper == doctest::Approx(kPhi1Eps1N4Lower).epsilon(1e-12));
}

TEST_CASE("subsystem of phi1 at eps 0.2, N 6") {
    auto t = fixture("phi1.json");
    auto r = build_subsystem(t, uniform(t), 0.2, 6);
    CHECK(r.S_size == 432);
    CHECK(r.S_mass == doctest::Approx(kPhi1Eps2N6SMass).epsilon(1e-12));
    CHECK(r.chain_masses.back() >= r.S_mass - 2 * 0.2);
    CHECK(r.delta_sum == doctest::Approx(kPhi1Eps2N6DeltaSum).epsilon(1e-12));
    REQUIRE(r.formula_lower);
    CHECK(*r.formula_lower == doctest::Approx(kPhi1Eps2N6Lower).epsilon(1e-12));
    CHECK(*r.formula_upper == doctest::Approx(kPhi1Eps2N6Upper).epsilon(1e-12));
    CHECK(r.claim_holds);
    CHECK(r.t0_inequality_holds);
    if (r.strongly_lg) CHECK(*r.formula_lower >= r.delta_sum - 1e-9);
}

TEST_CASE("subsystem psi re-parses from its serialized form") {
    auto t = fixture("phi1.json");
    auto r = build_subsystem(t, uniform(t), 0.2, 6);
    auto again = parse_template(serialize_template(*r.psi));
    CHECK(again.size() == r.psi->size());
    CHECK(again.digits() == r.psi->digits());
}

TEST_CASE("convergence on phi3") {
    auto t = fixture("phi3.json");
    auto study = convergence_study(t, uniform(t), {0.1}, {4, 6, 8});
    REQUIRE(study.rows.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(study.rows[k].delta_sum == doctest::Approx(kPhi3DeltaSum[k]).epsilon(1e-12));
        REQUIRE(study.rows[k].formula_lower);
        CHECK(*study.rows[k].formula_lower == doctest::Approx(kPhi3Lower[k]).epsilon(1e-12));
        CHECK(study.rows[k].t0_mass == doctest::Approx(1.0).epsilon(1e-12));
        if (k > 0) CHECK(study.rows[k].delta_sum > study.rows[k - 1].delta_sum);
        CHECK(study.rows[k].delta_sum < study.rows[k].limit);
    }
    CHECK(study.rows.back().uniformly_irreducible);
    CHECK(study.ly_dimension == doctest::Approx(ly_dimension(t, uniform(t)).dimension));
}

TEST_CASE("full grid refused; full product grid approaches the scaled dimension") {
    auto t = fixture("full_square.json");
    // equal exponents are refused
    CHECK_THROWS_AS(build_subsystem(t, uniform(t), 0.1, 3), SpongeError);
    // all nine digits of a 1/4 by 1/5 product grid
    auto slg = fixture("slg9.json");
    auto study = convergence_study(slg, uniform(slg), {0.2}, {2, 3, 4});
    CHECK(study.ly_dimension == doctest::Approx(std::log(3.0) / std::log(4.0) + std::log(3.0) / std::log(5.0)));
    for (std::size_t k = 1; k < study.rows.size(); ++k) CHECK(study.rows[k].delta_sum > study.rows[k - 1].delta_sum);
    CHECK(study.rows.back().delta_sum < 0.8 / 1.2 * study.ly_dimension);
}

TEST_CASE("hypotheses are checked") {
    auto t = fixture("phi2.json");
    try {
        build_subsystem(t, uniform(t), 0.1, 4);
        FAIL("expected HypothesesViolated");
    } catch (const SpongeError& e) {
        CHECK(e.code() == ErrorCode::HypothesesViolated);
        CHECK(std::string(e.what()).find("irreducible") != std::string::npos);
    }
}

TEST_CASE("law of large numbers trend on a Sierpinski fixture") {
    auto t = fixture("phi1.json");
    auto p = BernoulliWeights::from_doubles({0.5, 0.3, 0.2});
    CHECK(typical_words(t, p, 0.2, 10).mass > typical_words(t, p, 0.2, 2).mass);
}

TEST_CASE("property: generated subsystems satisfy the invariants") {
    Gen gen(77);
    int built = 0;
    for (int trial = 0; trial < 80 && built < 25; ++trial) {
        auto t = gen.rational_template(2);
        if (t.size() < 2) continue;
        auto p = gen.weights(t.size(), false);
        const double eps = gen.real(0.05, 0.5);
        const int N = gen.integer(2, 4);
        if (std::pow(double(t.size()), N) > 5000) continue;
        SubsystemReport r;
        try {
            r = build_subsystem(t, p, eps, N);
        } catch (const SpongeError& e) {
            const auto code = e.code();
            CHECK((code == ErrorCode::HypothesesViolated || code == ErrorCode::EmptySubsystem ||
                   code == ErrorCode::NoInteriorWord));
            continue;
        }
        ++built;
        const int d = t.dimension();
        CHECK(r.chain_masses.back() >= r.S_mass - d * eps - 1e-12);
        CHECK(r.claim_holds);
        CHECK(r.t0_inequality_holds);
        CHECK(r.psi->size() == r.chain_sizes.back());
        if (r.psi->size() > 1 && classify(*r.psi).lg_sigma) CHECK(r.fiber_criterion == r.uniformly_irreducible);
        if (r.lower_bound_holds) CHECK(*r.lower_bound_holds);
    }
    CHECK(built >= 5);
}

}
