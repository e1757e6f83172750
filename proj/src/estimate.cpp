#include <sponge/estimate.hpp>
#include <sponge/structure.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <random>
#include <unordered_map>

namespace sponge {

namespace {

double sup_distance(std::span<const double> u, std::span<const double> v) {
    double out = 0.0;
    for (std::size_t c = 0; c < u.size(); ++c) out = std::max(out, std::fabs(u[c] - v[c]));
    return out;
}

// Least-squares slope of y against x.
double slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxy += (x[k] - mx) * (y[k] - my);
        sxx += (x[k] - mx) * (x[k] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace

// ===========================================================================
// Sampling

int default_depth(const SpongeTemplate& t, double diameter) {
    double widest = 0.0;
    for (std::size_t a = 0; a < t.size(); ++a) {
        for (int c = 0; c < t.dimension(); ++c) widest = std::max(widest, t.map(a, c).magnitude().to_double());
    }
    return std::max(1, static_cast<int>(std::ceil(std::log(diameter) / std::log(widest) - 1e-12)));
}

PointCloud sample_points(const SpongeTemplate& t, std::size_t count, int depth, std::uint64_t seed) {
    PointCloud cloud;
    cloud.dimension = t.dimension();
    cloud.depth = depth > 0 ? depth : default_depth(t);
    cloud.seed = seed;
    cloud.coords.resize(count * static_cast<std::size_t>(cloud.dimension));
    FloatMaps maps(t);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> letter(0, t.size() - 1);
    Word word(static_cast<std::size_t>(cloud.depth));
    for (std::size_t k = 0; k < count; ++k) {
        for (auto& a : word) a = letter(rng);
        maps.coding_point(word, {cloud.coords.data() + k * cloud.dimension, static_cast<std::size_t>(cloud.dimension)});
    }
    return cloud;
}

// ===========================================================================
// Farthest-point net

namespace {

// Uniform grid over the cloud with hashed cells; a hash collision only adds
// candidates, and every candidate is checked by distance.
class CellGrid {
public:
    CellGrid(const PointCloud& cloud, double side) : cloud_(cloud), side_(side) {
        for (std::size_t k = 0; k < cloud.size(); ++k) cells_[key_of(cell_of(cloud.point(k)))].push_back(static_cast<std::uint32_t>(k));
    }

    double side() const { return side_; }

    template <class F>
    void for_neighbours(std::span<const double> p, F&& visit) const {
        const auto home = cell_of(p);
        const int d = cloud_.dimension;
        std::vector<std::int64_t> offset(d, -1);
        std::vector<std::int64_t> cell(d);
        while (true) {
            for (int c = 0; c < d; ++c) cell[c] = home[c] + offset[c];
            auto it = cells_.find(key_of(cell));
            if (it != cells_.end()) {
                for (auto j : it->second) visit(j);
            }
            int c = 0;
            while (c < d && ++offset[c] > 1) offset[c++] = -1;
            if (c == d) break;
        }
    }

private:
    std::vector<std::int64_t> cell_of(std::span<const double> p) const {
        std::vector<std::int64_t> out(p.size());
        for (std::size_t c = 0; c < p.size(); ++c) out[c] = static_cast<std::int64_t>(std::floor(p[c] / side_));
        return out;
    }

    static std::uint64_t key_of(const std::vector<std::int64_t>& cell) {
        std::uint64_t h = 0x9e3779b97f4a7c15ull;
        for (auto v : cell) {
            h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
            h *= 0xff51afd7ed558ccdull;
        }
        return h;
    }

    const PointCloud& cloud_;
    double side_;
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> cells_;
};

}  // namespace

SeparatedNet::SeparatedNet(const PointCloud& cloud) : cloud_(&cloud) {
    const std::size_t n = cloud.size();
    radius_.assign(n, 0.0);
    by_first_.resize(n);
    std::iota(by_first_.begin(), by_first_.end(), 0u);
    if (cloud.dimension > 0) {
        std::sort(by_first_.begin(), by_first_.end(),
                  [&](std::uint32_t a, std::uint32_t b) { return cloud.point(a)[0] < cloud.point(b)[0]; });
    }
    for (auto k : by_first_) first_sorted_.push_back(cloud.dimension > 0 ? cloud.point(k)[0] : 0.0);
    if (n == 0) return;

    // Gonzalez ordering. dist[j] is the distance from j to the chosen set;
    // a new centre can only lower dist[j] for points within the current
    // radius, which the grid (cell side >= radius) finds among the 3^d
    // neighbouring cells.
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::vector<char> chosen(n, 0);
    radius_[0] = std::numeric_limits<double>::infinity();
    chosen[0] = 1;
    double widest = 0.0;
    for (std::size_t j = 1; j < n; ++j) {
        dist[j] = sup_distance(cloud.point(j), cloud.point(0));
        widest = std::max(widest, dist[j]);
    }
    using Entry = std::pair<double, std::uint32_t>;
    std::priority_queue<Entry> heap;
    for (std::size_t j = 1; j < n; ++j) heap.emplace(dist[j], static_cast<std::uint32_t>(j));

    std::optional<CellGrid> grid;
    if (widest > 0.0) grid.emplace(cloud, widest);
    while (!heap.empty()) {
        auto [r, i] = heap.top();
        heap.pop();
        if (chosen[i] || r != dist[i]) continue;
        chosen[i] = 1;
        radius_[i] = r;
        if (r == 0.0) continue;  // duplicates never separate
        if (r < grid->side() / 2) grid.emplace(cloud, r);
        const auto p = cloud.point(i);
        grid->for_neighbours(p, [&](std::uint32_t j) {
            if (chosen[j]) return;
            const double dj = sup_distance(cloud.point(j), p);
            if (dj < dist[j]) {
                dist[j] = dj;
                heap.emplace(dj, j);
            }
        });
    }
}

std::vector<double> SeparatedNet::ball_radii(std::span<const double> center, double rho) const {
    const auto& cloud = *cloud_;
    std::vector<double> out;
    auto lo = std::lower_bound(first_sorted_.begin(), first_sorted_.end(), center[0] - rho);
    auto hi = std::upper_bound(first_sorted_.begin(), first_sorted_.end(), center[0] + rho);
    for (auto it = lo; it != hi; ++it) {
        const auto k = by_first_[static_cast<std::size_t>(it - first_sorted_.begin())];
        if (sup_distance(cloud.point(k), center) <= rho) out.push_back(radius_[k]);
    }
    return out;
}

std::vector<std::size_t> SeparatedNet::counts(std::span<const double> center, double rho, const std::vector<double>& deltas,
                                              std::size_t* ball_points) const {
    auto radii = ball_radii(center, rho);
    if (ball_points) *ball_points = radii.size();
    std::sort(radii.begin(), radii.end());
    std::vector<std::size_t> out;
    for (double delta : deltas) {
        out.push_back(static_cast<std::size_t>(radii.end() - std::lower_bound(radii.begin(), radii.end(), delta)));
    }
    return out;
}

std::size_t SeparatedNet::count(std::span<const double> center, double rho, double delta) const {
    return counts(center, rho, {delta}).front();
}

std::size_t count_separated(const PointCloud& cloud, std::span<const double> center, double rho, double delta) {
    if (!(rho > 0.0) || !(delta > 0.0)) throw SpongeError(ErrorCode::InvalidArgument, "rho and delta must be positive");
    return SeparatedNet(cloud).count(center, rho, delta);
}

// ===========================================================================
// Nested dyadic nets

namespace {

// Hashed grid holding only the current net points.
class NetGrid {
public:
    NetGrid(int dimension, double side) : d_(dimension), side_(side) {}

    void insert(std::span<const double> p, std::uint32_t k) { cells_[key(p, nullptr)].push_back(k); }

    template <class F>
    bool any_neighbour(std::span<const double> p, F&& near) const {
        std::vector<std::int64_t> offset(d_, -1);
        while (true) {
            auto it = cells_.find(key(p, offset.data()));
            if (it != cells_.end()) {
                for (auto j : it->second) {
                    if (near(j)) return true;
                }
            }
            int c = 0;
            while (c < d_ && ++offset[c] > 1) offset[c++] = -1;
            if (c == d_) return false;
        }
    }

private:
    std::uint64_t key(std::span<const double> p, const std::int64_t* offset) const {
        std::uint64_t h = 0x9e3779b97f4a7c15ull;
        for (int c = 0; c < d_; ++c) {
            auto v = static_cast<std::int64_t>(std::floor(p[c] / side_)) + (offset ? offset[c] : 0);
            h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
            h *= 0xff51afd7ed558ccdull;
        }
        return h;
    }

    int d_;
    double side_;
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> cells_;
};

}  // namespace

DyadicNets::DyadicNets(const PointCloud& cloud, int max_level) : cloud_(&cloud), max_level_(max_level) {
    if (max_level < 0) throw SpongeError(ErrorCode::InvalidArgument, "max_level must be non-negative");
    const std::size_t n = cloud.size();
    level_.assign(n, max_level + 1);
    by_first_.resize(n);
    std::iota(by_first_.begin(), by_first_.end(), 0u);
    if (cloud.dimension > 0) {
        std::sort(by_first_.begin(), by_first_.end(),
                  [&](std::uint32_t a, std::uint32_t b) { return cloud.point(a)[0] < cloud.point(b)[0]; });
    }
    for (auto k : by_first_) first_sorted_.push_back(cloud.dimension > 0 ? cloud.point(k)[0] : 0.0);

    std::vector<std::uint32_t> net;
    for (int j = 0; j <= max_level; ++j) {
        const double gap = std::ldexp(1.0, -j);
        NetGrid grid(cloud.dimension, gap);
        for (auto k : net) grid.insert(cloud.point(k), k);
        for (std::uint32_t k = 0; k < n; ++k) {
            if (level_[k] <= j) continue;
            const auto p = cloud.point(k);
            if (grid.any_neighbour(p, [&](std::uint32_t q) { return sup_distance(p, cloud.point(q)) < gap; })) continue;
            level_[k] = j;
            net.push_back(k);
            grid.insert(p, k);
        }
    }
}

std::vector<std::size_t> DyadicNets::counts(std::span<const double> center, double rho, const std::vector<int>& levels,
                                            std::size_t* ball_points) const {
    const auto& cloud = *cloud_;
    std::vector<int> inside;
    auto lo = std::lower_bound(first_sorted_.begin(), first_sorted_.end(), center[0] - rho);
    auto hi = std::upper_bound(first_sorted_.begin(), first_sorted_.end(), center[0] + rho);
    for (auto it = lo; it != hi; ++it) {
        const auto k = by_first_[static_cast<std::size_t>(it - first_sorted_.begin())];
        if (sup_distance(cloud.point(k), center) <= rho) inside.push_back(level_[k]);
    }
    if (ball_points) *ball_points = inside.size();
    std::sort(inside.begin(), inside.end());
    std::vector<std::size_t> out;
    for (int j : levels) {
        out.push_back(static_cast<std::size_t>(std::upper_bound(inside.begin(), inside.end(), j) - inside.begin()));
    }
    return out;
}

// ===========================================================================
// Assouad estimate

AssouadEstimate estimate_assouad(const PointCloud& cloud, const AssouadOptions& options,
                                 const std::vector<std::vector<double>>& extra_centres) {
    if (options.beta_exponents.empty() || options.rho_exponents.empty()) {
        throw SpongeError(ErrorCode::InvalidArgument, "beta and rho grids must be non-empty");
    }
    for (const auto& x : extra_centres) {
        if (static_cast<int>(x.size()) != cloud.dimension) {
            throw SpongeError(ErrorCode::InvalidArgument, "extra centre has the wrong dimension");
        }
    }
    if (cloud.size() == 0) throw SpongeError(ErrorCode::InsufficientPoints, "empty point cloud");
    auto betas = options.beta_exponents;
    std::sort(betas.begin(), betas.end());
    auto rhos = options.rho_exponents;
    std::sort(rhos.begin(), rhos.end());
    if (betas.front() < 0 || rhos.front() < 0) throw SpongeError(ErrorCode::InvalidArgument, "grid exponents must be non-negative");

    AssouadEstimate out;
    const DyadicNets nets(cloud, rhos.back() + betas.back());

    // centres: a seeded partial shuffle of the cloud, then the extras
    std::vector<std::size_t> pick(cloud.size());
    std::iota(pick.begin(), pick.end(), 0);
    std::mt19937_64 rng(options.seed);
    const std::size_t m = std::min(options.centers, cloud.size());
    for (std::size_t k = 0; k < m; ++k) {
        std::uniform_int_distribution<std::size_t> u(k, pick.size() - 1);
        std::swap(pick[k], pick[u(rng)]);
    }
    pick.resize(m);
    for (std::size_t k = 0; k < extra_centres.size(); ++k) pick.push_back(cloud.size() + k);
    auto centre_of = [&](std::size_t id) -> std::span<const double> {
        return id < cloud.size() ? cloud.point(id) : std::span<const double>(extra_centres[id - cloud.size()]);
    };

    std::map<int, std::pair<double, double>> extremes;  // per ρ: min and max slope
    for (int rho_exp : rhos) {
        const double rho = std::ldexp(1.0, -rho_exp);
        std::vector<int> levels;
        for (int b : betas) levels.push_back(rho_exp + b);
        for (std::size_t centre : pick) {
            std::size_t inside = 0;
            const auto counts = nets.counts(centre_of(centre), rho, levels, &inside);
            if (inside < options.min_ball_points) {
                ++out.skipped_balls;
                continue;
            }
            std::vector<double> x, y;
            for (std::size_t k = 0; k < betas.size(); ++k) {
                const bool resolved = counts[k] >= std::max<std::size_t>(1, options.min_count) &&
                                      static_cast<double>(counts[k]) * options.points_per_net_point <= static_cast<double>(inside);
                out.table.push_back({betas[k], rho_exp, centre, counts[k], inside, resolved});
                if (resolved) {
                    x.push_back(std::log1p(std::ldexp(2.0, betas[k])));
                    y.push_back(std::log(static_cast<double>(counts[k])));
                }
            }
            if (x.size() < std::max<std::size_t>(2, options.min_scales)) continue;
            const double s = slope(x, y);
            out.slopes.push_back({rho_exp, centre, s, x.size()});
            auto [it, fresh] = extremes.emplace(rho_exp, std::make_pair(s, s));
            if (!fresh) {
                it->second.first = std::min(it->second.first, s);
                it->second.second = std::max(it->second.second, s);
            }
        }
    }
    if (extremes.empty()) {
        throw SpongeError(ErrorCode::InsufficientPoints,
                          "no ball holds enough points to resolve " + std::to_string(options.min_scales) + " scales");
    }
    for (const auto& [rho_exp, range] : extremes) out.usable_rho.push_back(rho_exp);
    out.lower_delta1 = std::numeric_limits<double>::infinity();
    out.upper_delta1 = -std::numeric_limits<double>::infinity();
    out.lower_delta2 = std::numeric_limits<double>::infinity();
    out.upper_delta2 = -std::numeric_limits<double>::infinity();
    // smaller half of the usable ρ levels: the larger exponents
    const std::size_t half_start = out.usable_rho.size() / 2;
    for (std::size_t k = 0; k < out.usable_rho.size(); ++k) {
        const auto& range = extremes.at(out.usable_rho[k]);
        out.lower_delta1 = std::min(out.lower_delta1, range.first);
        out.upper_delta1 = std::max(out.upper_delta1, range.second);
        if (k >= half_start) {
            out.lower_delta2 = std::min(out.lower_delta2, range.first);
            out.upper_delta2 = std::max(out.upper_delta2, range.second);
        }
    }
    if (out.usable_rho.size() < rhos.size()) {
        out.warnings.push_back("some radii are below the sampling resolution and were left out");
    }
    return out;
}

std::vector<std::vector<double>> fixed_points(const SpongeTemplate& t) {
    FloatMaps maps(t);
    std::vector<std::vector<double>> out;
    for (std::size_t a = 0; a < t.size(); ++a) {
        std::vector<double> x;
        for (int c = 0; c < t.dimension(); ++c) x.push_back(maps.offset(a, c) / (1.0 - maps.ratio(a, c)));
        out.push_back(std::move(x));
    }
    return out;
}

AssouadEstimate estimate_assouad(const SpongeTemplate& t, std::size_t points, int depth, std::uint64_t seed,
                                 const AssouadOptions& options) {
    return estimate_assouad(sample_points(t, points, depth, seed), options, fixed_points(t));
}

// ===========================================================================
// Witness matrix

WitnessReport diffuseness_witness(const SpongeTemplate& t, const Word& prefix, double rho) {
    if (!(rho > 0.0 && rho <= 1.0)) throw SpongeError(ErrorCode::InvalidArgument, "rho must lie in (0,1]");
    for (auto a : prefix) {
        if (a >= t.size()) throw SpongeError(ErrorCode::InvalidArgument, "prefix uses an unknown digit");
    }
    const auto sigma = lg_sigma(t);
    if (!sigma) throw SpongeError(ErrorCode::NotLalleyGatzouras, "witness construction needs a strict contraction ordering");
    const int d = t.dimension();
    const auto order = partial_order(t);
    FloatMaps maps(t);

    WitnessReport out;
    out.sigma = *sigma;
    out.rho = rho;
    out.base_point.assign(d, 0.0);
    maps.coding_point(prefix, out.base_point);

    auto diameter = [&](const Word& w) {
        double widest = 0.0;
        for (int c = 0; c < d; ++c) {
            double r = 1.0;
            for (auto a : w) r *= std::fabs(maps.ratio(a, c));
            widest = std::max(widest, r);
        }
        return widest;
    };
    double tol = diameter(prefix);

    for (int k = 0; k < d; ++k) {
        const int c = out.sigma[k];
        // first depth at which the coordinate-c cylinder is at most rho
        int depth = 0;
        double width = 1.0;
        while (width > rho) {
            if (depth >= static_cast<int>(prefix.size())) break;
            width *= std::fabs(maps.ratio(prefix[depth], c));
            ++depth;
        }
        if (width > rho || depth + 1 > static_cast<int>(prefix.size())) {
            throw SpongeError(ErrorCode::PrefixTooShort,
                              "prefix of length " + std::to_string(prefix.size()) + " does not reach scale rho in coordinate " +
                                  std::to_string(c));
        }
        out.depths.push_back(depth);
        const std::size_t a = prefix[depth];
        // swap letter: differs at c and only in coordinates above c; among
        // those, the one whose branch centre is nearest in c
        std::optional<std::size_t> best;
        double best_gap = 0.0;
        for (std::size_t b = 0; b < t.size(); ++b) {
            if (t.digit(b)[c] == t.digit(a)[c]) continue;
            bool allowed = true;
            for (int j = 0; j < d && allowed; ++j) {
                if (t.digit(a)[j] != t.digit(b)[j] && !order.precedes(c, j)) allowed = false;
            }
            if (!allowed) continue;
            const double gap = std::fabs(maps.offset(b, c) + maps.ratio(b, c) / 2 - maps.offset(a, c) - maps.ratio(a, c) / 2);
            if (!best || gap < best_gap) {
                best = b;
                best_gap = gap;
            }
        }
        if (!best) {
            throw SpongeError(ErrorCode::ReducibleCoordinate,
                              "no digit differs from digit " + std::to_string(a) + " only in coordinate " + std::to_string(c) +
                                  " and more contracted ones");
        }
        out.swap_letters.push_back(*best);
        Word swapped = prefix;
        swapped[depth] = *best;
        tol = std::max(tol, diameter(swapped));
        std::vector<double> y(d);
        maps.coding_point(swapped, y);
        out.witnesses.push_back(y);
    }
    out.tolerance = 2 * tol;

    out.matrix.assign(d, std::vector<double>(d));
    out.upper_triangular = true;
    out.diagonal_bounded = true;
    out.in_ball = true;
    out.c = std::numeric_limits<double>::infinity();
    for (int k = 0; k < d; ++k) {
        for (int l = 0; l < d; ++l) {
            const int c = out.sigma[l];
            const double entry = out.witnesses[k][c] - out.base_point[c];
            out.matrix[k][l] = entry;
            out.entry_max = std::max(out.entry_max, std::fabs(entry));
            if (l < k) out.below_diagonal_max = std::max(out.below_diagonal_max, std::fabs(entry));
        }
        const double ratio = std::fabs(out.matrix[k][k]) / rho;
        out.diagonal_ratios.push_back(ratio);
        out.c = std::min(out.c, ratio);
        if (std::fabs(out.matrix[k][k]) > rho + out.tolerance) out.diagonal_bounded = false;
        if (sup_distance(out.witnesses[k], out.base_point) > rho + out.tolerance) out.in_ball = false;
    }
    out.upper_triangular = out.below_diagonal_max <= out.tolerance;
    return out;
}

// ===========================================================================
// Flatness certificate

FlatnessCertificate flatness_certificate(const SpongeTemplate& t, const PointCloud& cloud, const std::vector<int>& rho_exponents) {
    const auto irr = irreducibility(t);
    if (irr.irreducible) throw SpongeError(ErrorCode::NotReducible, "template is irreducible; no flat direction to certify");
    const auto sigma = lg_sigma(t);
    if (!sigma) throw SpongeError(ErrorCode::NotLalleyGatzouras, "certificate needs a strict contraction ordering");
    if (cloud.dimension != t.dimension()) throw SpongeError(ErrorCode::InvalidArgument, "cloud dimension differs from the template");

    FlatnessCertificate out;
    // earliest reducible coordinate along the contraction ordering
    std::size_t position = 0;
    while (irr.witnesses[sigma->at(position)]) ++position;
    out.coordinate = sigma->at(position);
    out.digit = 0;
    out.degenerate = position == 0;
    out.base_point = fixed_points(t)[out.digit];
    double widest = 0.0;
    for (std::size_t a = 0; a < t.size(); ++a) widest = std::max(widest, t.map(a, out.coordinate).magnitude().to_double());
    out.resolution = std::pow(widest, std::max(cloud.depth, 0));
    if (!out.degenerate) {
        const int previous = sigma->at(position - 1);
        out.alpha = t.map(out.digit, out.coordinate).log_magnitude() / t.map(out.digit, previous).log_magnitude();
    }

    std::vector<double> log_rho, log_dist;
    double low = std::numeric_limits<double>::infinity(), high = 0.0;
    for (int e : rho_exponents) {
        const double rho = std::ldexp(1.0, -e);
        FlatnessScale scale{e, 0, 0.0, 0.0};
        for (std::size_t k = 0; k < cloud.size(); ++k) {
            const auto p = cloud.point(k);
            if (sup_distance(p, out.base_point) > rho) continue;
            ++scale.ball_points;
            scale.max_distance = std::max(scale.max_distance, std::fabs(p[out.coordinate] - out.base_point[out.coordinate]));
        }
        scale.constant = scale.max_distance / std::pow(rho, out.alpha);
        if (scale.ball_points > 0 && scale.max_distance > 0.0) {
            log_rho.push_back(std::log(rho));
            log_dist.push_back(std::log(scale.max_distance));
            low = std::min(low, scale.constant);
            high = std::max(high, scale.constant);
        }
        out.scales.push_back(scale);
    }

    const auto populated = std::count_if(out.scales.begin(), out.scales.end(), [](const auto& s) { return s.ball_points > 0; });
    if (populated < static_cast<long>(out.scales.size())) out.warnings.push_back("some scales hold no sample points near x");
    if (out.degenerate) {
        double worst = 0.0;
        for (const auto& s : out.scales) worst = std::max(worst, s.max_distance);
        out.passed = populated > 0 && worst <= out.resolution;
        out.fitted_exponent = std::numeric_limits<double>::infinity();
        out.constant_spread = 1.0;
        return out;
    }
    if (log_rho.size() < 3) {
        out.warnings.push_back("too few populated scales to fit an exponent");
        return out;
    }
    out.fitted_exponent = slope(log_rho, log_dist);
    out.constant_spread = high / low;
    out.passed = out.constant_spread <= 8.0 && out.fitted_exponent >= out.alpha - 0.25;
    return out;
}

}  // namespace sponge
