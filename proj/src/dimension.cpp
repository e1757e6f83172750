#include <sponge/dimension.hpp>
#include <sponge/optimize.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

namespace sponge {

// ===========================================================================
// Moran equation

double moran_dimension(const std::vector<double>& ratios) {
    if (ratios.empty()) throw SpongeError(ErrorCode::EmptyList, "Moran equation needs at least one ratio");
    double rmax = 0.0;
    for (double r : ratios) {
        if (!(r > 0.0 && r < 1.0)) throw SpongeError(ErrorCode::InvalidArgument, "ratio outside (0,1)");
        rmax = std::max(rmax, r);
    }
    if (ratios.size() == 1) return 0.0;

    auto residual = [&](double s) {
        double sum = 0.0;
        for (double r : ratios) sum += std::pow(r, s);
        return sum - 1.0;
    };
    // Σ r^s ≤ n·rmax^s, so the root lies below log n / -log rmax
    double lo = 0.0;
    double hi = std::log(static_cast<double>(ratios.size())) / -std::log(rmax) + 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
        double mid = 0.5 * (lo + hi);
        (residual(mid) > 0 ? lo : hi) = mid;
    }
    double s = 0.5 * (lo + hi);
    // Newton polish; keep only steps that stay bracketed and reduce the residual
    for (int it = 0; it < 4; ++it) {
        double f = residual(s);
        double df = 0.0;
        for (double r : ratios) df += std::pow(r, s) * std::log(r);
        if (df == 0.0) break;
        double next = s - f / df;
        if (next < lo - 1e-12 || next > hi + 1e-12) break;
        if (std::fabs(residual(next)) >= std::fabs(f)) break;
        s = next;
    }
    return s;
}

// ===========================================================================
// Fibers and Assouad formulas

FiberSystem fiber_systems(const SpongeTemplate& t, const std::vector<int>& sigma) {
    const int d = t.dimension();
    std::vector<int> sorted = sigma;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> identity(d);
    std::iota(identity.begin(), identity.end(), 0);
    if (sorted != identity) throw SpongeError(ErrorCode::InvalidPermutation, "sigma is not a permutation of the coordinates");

    FiberSystem fs{sigma, std::vector<std::map<std::vector<int>, std::vector<int>>>(d)};
    for (const auto& digit : t.digits()) {
        std::vector<int> prefix;
        for (int k = 0; k < d; ++k) {
            auto& letters = fs.levels[k][prefix];
            int b = digit[sigma[k]];
            if (std::find(letters.begin(), letters.end(), b) == letters.end()) letters.push_back(b);
            prefix.push_back(b);
        }
    }
    for (auto& level : fs.levels) {
        for (auto& [prefix, letters] : level) std::sort(letters.begin(), letters.end());
    }
    return fs;
}

std::optional<std::vector<std::vector<int>>> contraction_blocks(const SpongeTemplate& t) {
    const int d = t.dimension();
    auto magnitude_cmp = [&](std::size_t a, int i, int j) { return compare(t.map(a, i).magnitude(), t.map(a, j).magnitude()); };
    std::vector<int> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return magnitude_cmp(0, i, j) > 0; });
    std::vector<std::vector<int>> blocks;
    for (int c : order) {
        if (!blocks.empty() && magnitude_cmp(0, blocks.back().front(), c) == 0) {
            blocks.back().push_back(c);
        } else {
            blocks.push_back({c});
        }
    }
    for (std::size_t a = 0; a < t.size(); ++a) {
        for (std::size_t k = 0; k < blocks.size(); ++k) {
            for (int c : blocks[k]) {
                if (magnitude_cmp(a, blocks[k].front(), c) != 0) return std::nullopt;
            }
            if (k + 1 < blocks.size() && magnitude_cmp(a, blocks[k].front(), blocks[k + 1].front()) <= 0) return std::nullopt;
        }
    }
    return blocks;
}

AssouadFormula assouad_formula(const SpongeTemplate& t) {
    auto blocks = contraction_blocks(t);
    if (!blocks) {
        throw SpongeError(ErrorCode::NotLalleyGatzouras, "no coordinate ordering contracts strictly and uniformly");
    }
    AssouadFormula out;
    out.blocks = *blocks;
    for (const auto& block : out.blocks) out.sigma.insert(out.sigma.end(), block.begin(), block.end());
    const auto cls = classify(t);
    if (out.blocks.size() < static_cast<std::size_t>(t.dimension())) {
        out.warnings.push_back("coordinates with identical contraction for every map are treated as one self-similar block");
    } else if (!cls.strongly_lg) {
        if (t.dimension() >= 3 && !cls.sierpinski) {
            out.warnings.push_back("formula conjectural for d>=3 non-strong case");
        } else {
            out.warnings.push_back("template is not strongly Lalley-Gatzouras; formula relies on the planar or Sierpinski case");
        }
    }

    const std::size_t levels = out.blocks.size();
    std::vector<std::map<std::vector<int>, std::set<std::vector<int>>>> fibers(levels);
    for (std::size_t a = 0; a < t.size(); ++a) {
        std::vector<int> prefix;
        for (std::size_t k = 0; k < levels; ++k) {
            std::vector<int> letter;
            for (int c : out.blocks[k]) letter.push_back(t.digit(a)[c]);
            fibers[k][prefix].insert(letter);
            prefix.insert(prefix.end(), letter.begin(), letter.end());
        }
    }
    out.fibers.resize(levels);
    for (std::size_t k = 0; k < levels; ++k) {
        const int lead = out.blocks[k].front();
        double lo = 1e300, hi = -1e300;
        for (const auto& [prefix, letters] : fibers[k]) {
            std::vector<double> ratios;
            for (const auto& letter : letters) ratios.push_back(t.base(lead)[letter.front()].magnitude().to_double());
            double s = moran_dimension(ratios);
            out.fibers[k].push_back({prefix, {letters.begin(), letters.end()}, s});
            lo = std::min(lo, s);
            hi = std::max(hi, s);
        }
        out.lower_terms.push_back(lo);
        out.upper_terms.push_back(hi);
        out.lower += lo;
        out.upper += hi;
    }
    return out;
}

// ===========================================================================
// Bernoulli measure dimension

LyEvaluator::LyEvaluator(const SpongeTemplate& t)
    : dimension_(t.dimension()), size_(t.size()), digits_(t.digits()), neg_log_(t.size(), std::vector<double>(t.dimension())) {
    for (std::size_t a = 0; a < size_; ++a) {
        for (int c = 0; c < dimension_; ++c) neg_log_[a][c] = -t.map(a, c).log_magnitude();
    }
}

const std::vector<std::vector<int>>& LyEvaluator::classes(const std::vector<int>& order) const {
    auto it = cache_.find(order);
    if (it != cache_.end()) return it->second;
    // level k: class of each digit under projection onto order[0..k]
    std::vector<std::vector<int>> table(dimension_, std::vector<int>(size_));
    std::vector<int> previous(size_, 0);
    for (int k = 0; k < dimension_; ++k) {
        std::map<std::pair<int, int>, int> ids;
        for (std::size_t a = 0; a < size_; ++a) {
            auto key = std::make_pair(previous[a], digits_[a][order[k]]);
            auto [pos, inserted] = ids.emplace(key, static_cast<int>(ids.size()));
            table[k][a] = pos->second;
        }
        previous = table[k];
    }
    return cache_.emplace(order, std::move(table)).first->second;
}

LyBreakdown LyEvaluator::breakdown(const std::vector<double>& p) const {
    LyBreakdown out;
    out.chi.assign(dimension_, 0.0);
    for (std::size_t a = 0; a < size_; ++a) {
        if (p[a] == 0.0) continue;
        for (int c = 0; c < dimension_; ++c) out.chi[c] += p[a] * neg_log_[a][c];
    }
    out.order.resize(dimension_);
    std::iota(out.order.begin(), out.order.end(), 0);
    std::stable_sort(out.order.begin(), out.order.end(), [&](int i, int j) { return out.chi[i] < out.chi[j]; });
    for (int k = 0; k + 1 < dimension_; ++k) {
        if (std::fabs(out.chi[out.order[k]] - out.chi[out.order[k + 1]]) <= 1e-9) {
            out.warnings.push_back("Lyapunov exponents tie; result does not depend on the tie-break");
            break;
        }
    }

    const auto& table = classes(out.order);
    std::vector<double> mass;
    double previous_entropy = 0.0;
    for (int k = 0; k < dimension_; ++k) {
        mass.assign(size_, 0.0);
        for (std::size_t a = 0; a < size_; ++a) mass[table[k][a]] += p[a];
        double entropy = 0.0;
        for (double m : mass) {
            if (m > 0.0) entropy -= m * std::log(m);
        }
        double h = std::max(0.0, entropy - previous_entropy);
        previous_entropy = entropy;
        out.entropy.push_back(h);
        const double chi = out.chi[out.order[k]];
        if (chi > 0.0) out.dimension += h / chi;
    }
    return out;
}

double LyEvaluator::operator()(const std::vector<double>& p) const { return breakdown(p).dimension; }

LyBreakdown ly_dimension(const SpongeTemplate& t, const BernoulliWeights& p) {
    if (p.size() != t.size()) {
        throw SpongeError(ErrorCode::InvalidWeights,
                          "weights have " + std::to_string(p.size()) + " entries for " + std::to_string(t.size()) + " digits");
    }
    return LyEvaluator(t).breakdown(p.values());
}

// ===========================================================================
// Closed form for grid carpets

double mcmullen_dimension(const SpongeTemplate& t) {
    if (t.dimension() != 2 || !is_sierpinski(t)) {
        throw SpongeError(ErrorCode::NotSierpinskiCarpet, "closed form needs a two-dimensional Sierpinski carpet");
    }
    auto cls = classify(t);
    if (!cls.baranski) throw SpongeError(ErrorCode::NotSierpinskiCarpet, "closed form needs non-overlapping base maps");
    const Number r0 = t.map(0, 0).magnitude();
    const Number r1 = t.map(0, 1).magnitude();
    int cmp = compare(r0, r1);
    if (cmp == 0) throw SpongeError(ErrorCode::NotSierpinskiCarpet, "closed form needs unequal coordinate ratios");
    // rows run along the slower (less contracted) coordinate
    const int slow = cmp > 0 ? 0 : 1;
    const int fast = 1 - slow;
    const double log_slow = t.map(0, slow).log_magnitude();
    const double log_fast = t.map(0, fast).log_magnitude();
    const double theta = log_slow / log_fast;
    std::map<int, int> rows;
    for (const auto& digit : t.digits()) ++rows[digit[slow]];
    double sum = 0.0;
    for (const auto& [row, count] : rows) sum += std::pow(static_cast<double>(count), theta);
    return std::log(sum) / -log_slow;
}

// ===========================================================================
// Dynamical dimension

namespace {

constexpr double kFloorWeight = 1e-12;

std::vector<double> softmax(const std::vector<double>& theta) {
    double top = *std::max_element(theta.begin(), theta.end());
    std::vector<double> p(theta.size());
    double total = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) total += p[i] = std::exp(theta[i] - top);
    double clamped_total = 0.0;
    for (auto& v : p) clamped_total += v = std::max(v / total, kFloorWeight);
    for (auto& v : p) v /= clamped_total;
    return p;
}

struct Ascent {
    std::vector<double> theta;
    double value;
    bool converged;
    int iterations;
};

Ascent ascend(const optimize::Objective& f, std::vector<double> theta, double tol) {
    auto quasi = optimize::bfgs_maximize(f, std::move(theta), tol);
    auto polish = optimize::nelder_mead_maximize(f, quasi.x, 0.05, tol * 1e-2);
    if (polish.value > quasi.value) return {polish.x, polish.value, quasi.converged || polish.converged, quasi.iterations + polish.iterations};
    return {quasi.x, quasi.value, quasi.converged, quasi.iterations + polish.iterations};
}

}  // namespace

DynamicalResult dynamical_dimension(const SpongeTemplate& t, const DynamicalOptions& options) {
    const std::size_t n = t.size();
    LyEvaluator evaluate(t);
    DynamicalResult out;
    if (n == 1) {
        out.value = evaluate({1.0});
        out.weights = {1.0};
        out.restarts.push_back({out.value, out.value, true, 0});
        return out;
    }

    auto objective = [&](const std::vector<double>& theta) {
        ++out.evaluations;
        return evaluate(softmax(theta));
    };

    const int restarts = std::max(1, options.restarts);
    std::vector<double> best_theta;
    double best = -1.0;
    for (int k = 0; k < restarts; ++k) {
        std::vector<double> theta(n, 0.0);
        if (k > 0) {
            // Dirichlet(1,...,1) draw from a per-restart stream
            std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                              static_cast<std::uint32_t>(k)};
            std::mt19937_64 rng(seq);
            std::gamma_distribution<double> gamma(1.0, 1.0);
            for (auto& v : theta) v = std::log(std::max(gamma(rng), 1e-300));
        }
        const double start = objective(theta);
        auto run = ascend(objective, theta, options.tol);
        out.restarts.push_back({start, run.value, run.converged, run.iterations});
        if (run.value > best) {
            best = run.value;
            best_theta = run.theta;
        }
    }
    out.value = best;
    out.weights = softmax(best_theta);

    // Boundary optima: drop negligible weights, re-polish on the support,
    // and keep the exact zeros if nothing is lost.
    std::vector<std::size_t> support;
    for (std::size_t a = 0; a < n; ++a) {
        if (out.weights[a] >= 1e-6) support.push_back(a);
    }
    if (support.size() < n) {
        auto expand = [&](const std::vector<double>& sub) {
            std::vector<double> p(n, 0.0);
            if (sub.empty()) return p;
            auto q = support.size() == 1 ? std::vector<double>{1.0} : softmax(sub);
            for (std::size_t k = 0; k < support.size(); ++k) p[support[k]] = q[k];
            return p;
        };
        auto restricted = [&](const std::vector<double>& sub) {
            ++out.evaluations;
            return evaluate(expand(sub));
        };
        std::vector<double> sub;
        for (std::size_t a : support) sub.push_back(std::log(out.weights[a]));
        std::vector<double> pruned_weights;
        double pruned_value;
        if (support.size() == 1) {
            pruned_weights = expand(sub);
            pruned_value = evaluate(pruned_weights);
        } else {
            auto run = ascend(restricted, sub, options.tol);
            pruned_weights = expand(run.theta);
            pruned_value = evaluate(pruned_weights);
        }
        if (pruned_value >= out.value - 1e-12) {
            out.value = std::max(out.value, pruned_value);
            out.weights = pruned_weights;
            out.pruned = true;
        }
    }
    return out;
}

// ===========================================================================
// Separation constant

SeparationConstant separation_constant(const SpongeTemplate& t, const std::vector<int>& sigma) {
    auto proper = lg_sigma(t);
    if (!proper || *proper != sigma) {
        throw SpongeError(ErrorCode::NotLalleyGatzouras, "sigma is not the strict contraction ordering of the template");
    }
    SeparationConstant out;
    std::vector<int> prefix;
    for (int c : sigma) {
        prefix.push_back(c);
        if (!is_good(t, prefix, true)) {
            out.value = Number(0);
            out.warnings.push_back("some prefix coordinate set is not strongly good; boxes touch");
            return out;
        }
    }
    prefix.clear();
    for (int c : sigma) {
        prefix.push_back(c);
        std::set<std::vector<int>> distinct;
        for (const auto& digit : t.digits()) {
            std::vector<int> proj;
            for (int q : prefix) proj.push_back(digit[q]);
            distinct.insert(proj);
        }
        std::vector<std::vector<int>> items(distinct.begin(), distinct.end());
        for (std::size_t x = 0; x < items.size(); ++x) {
            for (std::size_t y = x + 1; y < items.size(); ++y) {
                Number dist(0);
                for (std::size_t q = 0; q < prefix.size(); ++q) {
                    auto u = t.base(prefix[q])[items[x][q]].image();
                    auto v = t.base(prefix[q])[items[y][q]].image();
                    Number gap = v.lo - u.hi;
                    Number other = u.lo - v.hi;
                    if (other > gap) gap = other;
                    if (gap > dist) dist = gap;
                }
                if (!out.value || dist < *out.value) out.value = dist;
            }
        }
    }
    return out;
}

}  // namespace sponge
