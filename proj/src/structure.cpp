#include <sponge/structure.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace sponge {

namespace {

double separation_tolerance(const SpongeTemplate& t) { return t.is_exact() ? 0.0 : kSeparationTolerance; }

Number min_of(const Number& a, const Number& b) { return (a <=> b) == std::partial_ordering::greater ? b : a; }
Number max_of(const Number& a, const Number& b) { return (a <=> b) == std::partial_ordering::less ? b : a; }

// Closed intervals meet when the gap is at most tol; open ones when the
// overlap exceeds tol.
bool intervals_overlap(const Interval& u, const Interval& v, bool strong, double tol) {
    Number overlap = min_of(u.hi, v.hi) - max_of(u.lo, v.lo);
    int c = compare(overlap, Number(0), tol);
    return strong ? c >= 0 : c > 0;
}

/// Pairs of positions in `intervals` whose intervals overlap, by sweep.
std::vector<std::pair<std::size_t, std::size_t>> overlapping_pairs(const std::vector<Interval>& intervals, bool strong,
                                                                   double tol) {
    std::vector<std::size_t> order(intervals.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        auto c = intervals[x].lo <=> intervals[y].lo;
        if (c != 0) return c < 0;
        return x < y;
    });
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::vector<std::size_t> active;
    for (std::size_t v : order) {
        std::erase_if(active, [&](std::size_t u) { return compare(intervals[u].hi, intervals[v].lo, tol) < 0; });
        for (std::size_t u : active) {
            if (intervals_overlap(intervals[u], intervals[v], strong, tol)) out.emplace_back(std::min(u, v), std::max(u, v));
        }
        active.push_back(v);
    }
    return out;
}

/// Disjointness of a family of boxes given by base-index tuples. Items that
/// share an index in some coordinate can only be separated by the others,
/// so the check recurses on groups of equal index and on unions of groups
/// whose intervals overlap.
class BoxFamily {
public:
    BoxFamily(const SpongeTemplate& t, std::vector<int> coords, bool strong)
        : coords_(std::move(coords)), strong_(strong), tol_(separation_tolerance(t)) {
        std::set<std::vector<int>> distinct;
        for (const auto& digit : t.digits()) {
            std::vector<int> proj;
            for (int c : coords_) proj.push_back(digit[c]);
            distinct.insert(std::move(proj));
        }
        items_.assign(distinct.begin(), distinct.end());
        images_.resize(coords_.size());
        for (std::size_t q = 0; q < coords_.size(); ++q) {
            for (const auto& f : t.base(coords_[q])) images_[q].push_back(f.image());
        }
    }

    bool disjoint() const {
        std::vector<std::size_t> all(items_.size());
        std::iota(all.begin(), all.end(), 0);
        std::vector<std::size_t> positions(coords_.size());
        std::iota(positions.begin(), positions.end(), 0);
        return disjoint(all, positions);
    }

private:
    bool disjoint(const std::vector<std::size_t>& members, const std::vector<std::size_t>& positions) const {
        if (members.size() <= 1) return true;
        if (positions.empty()) return false;

        // split on the coordinate that separates the members the most
        std::size_t best = 0;
        std::size_t best_count = 0;
        for (std::size_t k = 0; k < positions.size(); ++k) {
            std::set<int> seen;
            for (auto m : members) seen.insert(items_[m][positions[k]]);
            if (seen.size() > best_count) {
                best_count = seen.size();
                best = k;
            }
        }
        const std::size_t q = positions[best];
        std::vector<std::size_t> rest = positions;
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(best));

        std::map<int, std::vector<std::size_t>> groups;
        for (auto m : members) groups[items_[m][q]].push_back(m);
        for (const auto& [index, group] : groups) {
            if (!disjoint(group, rest)) return false;
        }
        if (groups.size() < 2) return true;

        std::vector<int> keys;
        std::vector<Interval> intervals;
        for (const auto& [index, group] : groups) {
            keys.push_back(index);
            intervals.push_back(images_[q][index]);
        }
        for (auto [u, v] : overlapping_pairs(intervals, strong_, tol_)) {
            std::vector<std::size_t> merged = groups.at(keys[u]);
            const auto& other = groups.at(keys[v]);
            merged.insert(merged.end(), other.begin(), other.end());
            if (!disjoint(merged, rest)) return false;
        }
        return true;
    }

    std::vector<int> coords_;
    bool strong_;
    double tol_;
    std::vector<std::vector<int>> items_;
    std::vector<std::vector<Interval>> images_;
};

bool base_separated(const SpongeTemplate& t, int c, bool strong) {
    std::vector<Interval> images;
    for (const auto& f : t.base(c)) images.push_back(f.image());
    return overlapping_pairs(images, strong, separation_tolerance(t)).empty();
}

int compare_magnitudes(const SpongeTemplate& t, std::size_t a, int i, std::size_t b, int j) {
    return compare(t.map(a, i).magnitude(), t.map(b, j).magnitude());
}

}  // namespace

// ---------------------------------------------------------------------------

PartialOrder partial_order(const SpongeTemplate& t) {
    const int d = t.dimension();
    PartialOrder order{std::vector<std::vector<bool>>(d, std::vector<bool>(d, true))};
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            if (i == j) continue;
            for (std::size_t a = 0; a < t.size() && order.rel[i][j]; ++a) {
                if (compare_magnitudes(t, a, i, a, j) < 0) order.rel[i][j] = false;
            }
        }
    }
    return order;
}

bool is_good(const SpongeTemplate& t, const std::vector<int>& coords, bool strong) {
    if (coords.empty()) return true;
    for (int c : coords) {
        if (c < 0 || c >= t.dimension()) throw SpongeError(ErrorCode::InvalidArgument, "coordinate out of range");
    }
    return BoxFamily(t, coords, strong).disjoint();
}

bool is_sierpinski(const SpongeTemplate& t) {
    for (int c = 0; c < t.dimension(); ++c) {
        for (std::size_t a = 1; a < t.size(); ++a) {
            if (compare_magnitudes(t, a, c, 0, c) != 0) return false;
        }
    }
    return true;
}

std::optional<std::vector<int>> lg_sigma(const SpongeTemplate& t) {
    const int d = t.dimension();
    std::vector<int> sigma(d);
    std::iota(sigma.begin(), sigma.end(), 0);
    std::stable_sort(sigma.begin(), sigma.end(), [&](int i, int j) { return compare_magnitudes(t, 0, i, 0, j) > 0; });
    for (std::size_t a = 0; a < t.size(); ++a) {
        for (int k = 0; k + 1 < d; ++k) {
            if (compare_magnitudes(t, a, sigma[k], a, sigma[k + 1]) <= 0) return std::nullopt;
        }
    }
    return sigma;
}

Classification classify(const SpongeTemplate& t) {
    Classification out;
    out.baranski = true;
    out.strongly_baranski = true;
    for (int c = 0; c < t.dimension(); ++c) {
        out.baranski = out.baranski && base_separated(t, c, false);
        out.strongly_baranski = out.strongly_baranski && base_separated(t, c, true);
    }
    out.sierpinski = is_sierpinski(t);

    out.distinguishable = true;
    for (int i = 0; i < t.dimension() && out.distinguishable; ++i) {
        for (int j = i + 1; j < t.dimension() && out.distinguishable; ++j) {
            bool differs = false;
            for (std::size_t a = 0; a < t.size() && !differs; ++a) differs = compare_magnitudes(t, a, i, a, j) != 0;
            out.distinguishable = differs;
        }
    }

    out.lg_sigma = lg_sigma(t);
    if (out.lg_sigma) {
        out.lalley_gatzouras = true;
        out.strongly_lg = true;
        std::vector<int> prefix;
        for (int c : *out.lg_sigma) {
            prefix.push_back(c);
            if (out.lalley_gatzouras && !is_good(t, prefix, false)) out.lalley_gatzouras = false;
            if (out.strongly_lg && !is_good(t, prefix, true)) out.strongly_lg = false;
        }
        // strong goodness of every prefix implies goodness
        out.lalley_gatzouras = out.lalley_gatzouras || out.strongly_lg;
    }
    return out;
}

// ---------------------------------------------------------------------------

std::optional<int> Irreducibility::first_reducible() const {
    for (std::size_t i = 0; i < witnesses.size(); ++i) {
        if (!witnesses[i]) return static_cast<int>(i);
    }
    return std::nullopt;
}

Irreducibility irreducibility(const SpongeTemplate& t) { return irreducibility(t, partial_order(t)); }

Irreducibility irreducibility(const SpongeTemplate& t, const PartialOrder& order) {
    const int d = t.dimension();
    Irreducibility out;
    out.witnesses.resize(d);
    out.irreducible = true;
    out.uniformly_irreducible = true;
    for (int i = 0; i < d; ++i) {
        // a partner of a may differ from a only in coordinates j with i ≺ j,
        // so partners share the projection onto the remaining coordinates
        std::vector<int> fixed;
        for (int j = 0; j < d; ++j) {
            if (!order.precedes(i, j)) fixed.push_back(j);
        }
        std::map<std::vector<int>, std::vector<std::size_t>> groups;
        std::vector<std::vector<int>> key_of(t.size());
        for (std::size_t a = 0; a < t.size(); ++a) {
            for (int j : fixed) key_of[a].push_back(t.digit(a)[j]);
            groups[key_of[a]].push_back(a);
        }
        for (std::size_t a = 0; a < t.size(); ++a) {
            std::optional<std::size_t> partner;
            for (std::size_t b : groups[key_of[a]]) {
                if (t.digit(b)[i] != t.digit(a)[i]) {
                    partner = b;
                    break;
                }
            }
            if (partner && !out.witnesses[i]) out.witnesses[i] = WitnessPair{a, *partner};
            if (!partner && out.uniformly_irreducible) {
                out.uniformly_irreducible = false;
                out.counterexample = std::make_pair(i, a);
            }
        }
        if (!out.witnesses[i]) out.irreducible = false;
    }
    return out;
}

bool uniformly_irreducible_bruteforce(const SpongeTemplate& t, const PartialOrder& order) {
    const int d = t.dimension();
    for (int i = 0; i < d; ++i) {
        for (std::size_t a = 0; a < t.size(); ++a) {
            bool found = false;
            for (std::size_t b = 0; b < t.size() && !found; ++b) {
                if (t.digit(a)[i] == t.digit(b)[i]) continue;
                bool inside = true;
                for (int j = 0; j < d && inside; ++j) {
                    if (t.digit(a)[j] != t.digit(b)[j] && !order.precedes(i, j)) inside = false;
                }
                found = inside;
            }
            if (!found) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------

std::vector<double> lyapunov_exponents(const SpongeTemplate& t, const std::vector<double>& p) {
    std::vector<double> chi(t.dimension(), 0.0);
    for (std::size_t a = 0; a < t.size(); ++a) {
        if (p[a] == 0.0) continue;
        for (int c = 0; c < t.dimension(); ++c) chi[c] -= p[a] * t.map(a, c).log_magnitude();
    }
    return chi;
}

namespace {

// χ_i ≤ χ_j compared exactly: with p = n/Q this is ∏ r_{a,j}^{n_a} ≤ ∏ r_{a,i}^{n_a}.
// Only attempted for rational data with a small common denominator.
std::optional<std::vector<std::vector<int>>> exact_chi_comparison(const SpongeTemplate& t, const BernoulliWeights& p) {
    if (!t.is_exact() || !p.is_exact()) return std::nullopt;
    using boost::multiprecision::cpp_int;
    cpp_int common = 1;
    for (const auto& w : p.numbers()) {
        cpp_int den = boost::multiprecision::denominator(w.exact());
        common = common / boost::multiprecision::gcd(common, den) * den;
        if (common > 1000) return std::nullopt;
    }
    const unsigned total = common.convert_to<unsigned>();
    std::vector<unsigned> counts;
    for (const auto& w : p.numbers()) counts.push_back((w.exact() * total).convert_to<unsigned>());

    const int d = t.dimension();
    std::vector<Rational> product(d, Rational(1));
    for (int c = 0; c < d; ++c) {
        // collect exponents per distinct magnitude first to keep powers small
        std::map<Rational, unsigned> powers;
        for (std::size_t a = 0; a < t.size(); ++a) {
            if (counts[a]) powers[t.map(a, c).magnitude().exact()] += counts[a];
        }
        cpp_int num = 1, den = 1;
        for (const auto& [r, k] : powers) {
            num *= boost::multiprecision::pow(boost::multiprecision::numerator(r), k);
            den *= boost::multiprecision::pow(boost::multiprecision::denominator(r), k);
        }
        product[c] = Rational(num, den);
    }
    // χ_i ≤ χ_j  iff  product_i ≥ product_j
    std::vector<std::vector<int>> cmp(d, std::vector<int>(d, 0));
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            int c = product[j].compare(product[i]);
            cmp[i][j] = (c > 0) - (c < 0);
        }
    }
    return cmp;
}

}  // namespace

MeasureProfile measure_profile(const SpongeTemplate& t, const BernoulliWeights& p) {
    if (p.size() != t.size()) {
        throw SpongeError(ErrorCode::InvalidWeights,
                          "weights have " + std::to_string(p.size()) + " entries for " + std::to_string(t.size()) + " digits");
    }
    const int d = t.dimension();
    MeasureProfile out;
    out.chi = lyapunov_exponents(t, p.values());
    if (!p.all_positive()) out.warnings.push_back("some weights are zero");

    // cmp[i][j] = sign(χ_i − χ_j)
    std::vector<std::vector<int>> cmp(d, std::vector<int>(d, 0));
    if (auto exact = exact_chi_comparison(t, p)) {
        cmp = *exact;
        out.exact_comparisons = true;
    } else {
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                double diff = out.chi[i] - out.chi[j];
                cmp[i][j] = std::fabs(diff) <= 1e-9 ? 0 : (diff < 0 ? -1 : 1);
            }
        }
    }

    out.order.rel.assign(d, std::vector<bool>(d, false));
    out.distinct_lyapunov = true;
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            out.order.rel[i][j] = cmp[i][j] <= 0;
            if (i != j && cmp[i][j] == 0) out.distinct_lyapunov = false;
        }
    }
    out.irreducible_wrt = irreducibility(t, out.order);

    // I(p,x) only changes at the exponents themselves
    std::set<std::vector<int>> seen;
    std::vector<int> by_chi(d);
    std::iota(by_chi.begin(), by_chi.end(), 0);
    std::stable_sort(by_chi.begin(), by_chi.end(), [&](int i, int j) { return out.chi[i] < out.chi[j]; });
    for (int k : by_chi) {
        std::vector<int> level;
        for (int i = 0; i < d; ++i) {
            if (cmp[i][k] <= 0) level.push_back(i);
        }
        if (seen.insert(level).second) out.level_sets.push_back(level);
    }
    out.good = true;
    out.strongly_good = true;
    for (const auto& level : out.level_sets) {
        if (out.good && !is_good(t, level, false)) out.good = false;
        if (out.strongly_good && !is_good(t, level, true)) out.strongly_good = false;
    }
    out.good = out.good || out.strongly_good;
    return out;
}

// ---------------------------------------------------------------------------

std::string_view diffuseness_name(Diffuseness v) {
    switch (v) {
        case Diffuseness::Diffuse: return "diffuse";
        case Diffuseness::NotDiffuseNoSubsets: return "not_diffuse_no_subsets";
        case Diffuseness::NotDiffuse: return "not_diffuse";
        case Diffuseness::Undecided: return "undecided";
    }
    return "undecided";
}

DiffusenessDecision decide_diffuseness(const SpongeTemplate& t) {
    auto cls = classify(t);
    if (!cls.strongly_lg) {
        return {Diffuseness::Undecided,
                "the decision rule needs a strongly Lalley-Gatzouras sponge; try the empirical witness or flatness certificate"};
    }
    auto irr = irreducibility(t);
    if (irr.uniformly_irreducible) return {Diffuseness::Diffuse, "strongly Lalley-Gatzouras and uniformly irreducible"};
    if (!irr.irreducible) {
        return {Diffuseness::NotDiffuseNoSubsets,
                "strongly Lalley-Gatzouras and reducible at coordinate " + std::to_string(*irr.first_reducible())};
    }
    return {Diffuseness::NotDiffuse,
            "strongly Lalley-Gatzouras, irreducible but not uniformly; failure at coordinate " +
                std::to_string(irr.counterexample->first) + ", digit " + std::to_string(irr.counterexample->second)};
}

}  // namespace sponge
