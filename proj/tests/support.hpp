#pragma once

#include <sponge/model.hpp>

#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace test_support {

inline std::string read_fixture(const std::string& name) {
    std::ifstream in(std::string(FIXTURE_DIR) + "/" + name);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline sponge::SpongeTemplate fixture(const std::string& name) { return sponge::parse_template(read_fixture(name)); }

/// Seeded generator for property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    bool coin() { return integer(0, 1) == 1; }
    std::mt19937_64& engine() { return rng_; }

    /// Random grid-type template: d in [1,max_d], grid sizes in [2,5], a
    /// random nonempty digit subset.
    sponge::SpongeTemplate grid_template(int max_d = 3);

    /// Random template with rational maps of varying ratios per base.
    sponge::SpongeTemplate rational_template(int max_d = 3);

    sponge::BernoulliWeights weights(std::size_t n, bool allow_zero = false);

    sponge::Word word(const sponge::SpongeTemplate& t, std::size_t length);

private:
    std::vector<sponge::Digit> random_digits(const std::vector<int>& sizes);
    std::mt19937_64 rng_;
};

inline std::vector<sponge::Digit> Gen::random_digits(const std::vector<int>& sizes) {
    std::vector<sponge::Digit> all{{}};
    for (int m : sizes) {
        std::vector<sponge::Digit> next;
        for (const auto& p : all) {
            for (int a = 0; a < m; ++a) {
                auto q = p;
                q.push_back(a);
                next.push_back(q);
            }
        }
        all = std::move(next);
    }
    double keep = real(0.2, 1.0);
    std::vector<sponge::Digit> chosen;
    for (const auto& digit : all) {
        if (real(0, 1) < keep) chosen.push_back(digit);
    }
    if (chosen.empty()) chosen.push_back(all[integer(0, static_cast<int>(all.size()) - 1)]);
    return chosen;
}

inline sponge::SpongeTemplate Gen::grid_template(int max_d) {
    int d = integer(1, max_d);
    std::vector<int> sizes;
    std::vector<std::vector<sponge::Similarity1D>> bases;
    std::vector<std::optional<int>> grids;
    for (int c = 0; c < d; ++c) {
        int m = integer(2, 5);
        sizes.push_back(m);
        std::vector<sponge::Similarity1D> maps;
        for (int a = 0; a < m; ++a) maps.emplace_back(sponge::Number::ratio(1, m), sponge::Number::ratio(a, m));
        bases.push_back(std::move(maps));
        grids.emplace_back(m);
    }
    return sponge::SpongeTemplate(std::move(bases), random_digits(sizes), std::move(grids));
}

inline sponge::SpongeTemplate Gen::rational_template(int max_d) {
    int d = integer(1, max_d);
    std::vector<int> sizes;
    std::vector<std::vector<sponge::Similarity1D>> bases;
    for (int c = 0; c < d; ++c) {
        int m = integer(1, 4);
        sizes.push_back(m);
        // stack m intervals of random rational length left to right, with
        // random gaps (sometimes zero) and random orientation
        const int den = 60;
        std::vector<int> lengths;
        int budget = den;
        for (int a = 0; a < m; ++a) {
            int most = std::max(1, budget / (m - a) - 1);
            int len = integer(1, std::min(most, den - 1));
            lengths.push_back(len);
            budget -= len;
        }
        std::vector<sponge::Similarity1D> maps;
        int pos = 0;
        for (int a = 0; a < m; ++a) {
            int slack = den - pos;
            for (int b = a; b < m; ++b) slack -= lengths[b];
            int gap = coin() ? 0 : integer(0, std::max(0, slack / (m - a)));
            pos += gap;
            bool flip = integer(0, 4) == 0;
            auto r = sponge::Number::ratio(flip ? -lengths[a] : lengths[a], den);
            auto o = sponge::Number::ratio(flip ? pos + lengths[a] : pos, den);
            maps.emplace_back(r, o);
            pos += lengths[a];
        }
        bases.push_back(std::move(maps));
    }
    return sponge::SpongeTemplate(std::move(bases), random_digits(sizes));
}

inline sponge::BernoulliWeights Gen::weights(std::size_t n, bool allow_zero) {
    std::vector<double> raw(n);
    double total = 0;
    for (auto& w : raw) {
        w = (allow_zero && integer(0, 5) == 0) ? 0.0 : -std::log(real(1e-9, 1.0));
        total += w;
    }
    if (total == 0) {
        raw[0] = 1;
        total = 1;
    }
    for (auto& w : raw) w /= total;
    return sponge::BernoulliWeights::from_doubles(raw);
}

inline sponge::Word Gen::word(const sponge::SpongeTemplate& t, std::size_t length) {
    sponge::Word w(length);
    for (auto& letter : w) letter = static_cast<std::size_t>(integer(0, static_cast<int>(t.size()) - 1));
    return w;
}

}  // namespace test_support
