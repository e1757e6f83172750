#pragma once

#include <sponge/model.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sponge {

struct PointCloud {
    int dimension = 0;
    std::vector<double> coords;  ///< row-major, `dimension` values per point
    int depth = 0;
    std::uint64_t seed = 0;

    std::size_t size() const { return dimension == 0 ? 0 : coords.size() / static_cast<std::size_t>(dimension); }
    std::span<const double> point(std::size_t k) const {
        return {coords.data() + k * static_cast<std::size_t>(dimension), static_cast<std::size_t>(dimension)};
    }
};

/// Smallest word length whose cylinders all have diameter at most `diameter`.
int default_depth(const SpongeTemplate& t, double diameter = 1e-4);

/// Centres of i.i.d. uniformly random cylinders of the given depth
/// (depth <= 0 picks default_depth). Deterministic in the seed.
PointCloud sample_points(const SpongeTemplate& t, std::size_t count, int depth, std::uint64_t seed);

/// Farthest-point ordering of a whole cloud in the sup metric. The points
/// whose insertion radius is at least δ form a maximal δ-separated subset
/// of the cloud, and these subsets grow as δ shrinks.
class SeparatedNet {
public:
    explicit SeparatedNet(const PointCloud& cloud);

    /// Net points at scale delta inside the closed ball B(center, rho).
    std::size_t count(std::span<const double> center, double rho, double delta) const;

    /// Same for several scales at once; `ball_points` receives the number
    /// of cloud points in the ball.
    std::vector<std::size_t> counts(std::span<const double> center, double rho, const std::vector<double>& deltas,
                                    std::size_t* ball_points = nullptr) const;

    const std::vector<double>& insertion_radius() const { return radius_; }

private:
    std::vector<double> ball_radii(std::span<const double> center, double rho) const;

    const PointCloud* cloud_;
    std::vector<double> radius_;              // by point index; +inf for the first point
    std::vector<std::uint32_t> by_first_;     // point indices sorted by first coordinate
    std::vector<double> first_sorted_;
};

/// Cardinality of the scale-delta net inside B(center, rho). Zero when the
/// ball holds no cloud point.
std::size_t count_separated(const PointCloud& cloud, std::span<const double> center, double rho, double delta);

/// Nested maximal separated subsets on the dyadic ladder: level j is a
/// maximal 2^-j separated subset of the cloud containing level j-1, grown
/// greedily in sample order. Sample order is random, so unlike the
/// farthest-point ordering the coarse levels do not crowd the edges of the
/// support.
class DyadicNets {
public:
    DyadicNets(const PointCloud& cloud, int max_level);

    /// Level at which each point joins; max_level + 1 when it never does.
    const std::vector<int>& levels() const { return level_; }
    int max_level() const { return max_level_; }

    /// Net points of levels 0..level inside B(center, rho), one entry per
    /// requested level; `ball_points` receives the number of cloud points
    /// in the ball.
    std::vector<std::size_t> counts(std::span<const double> center, double rho, const std::vector<int>& levels,
                                    std::size_t* ball_points = nullptr) const;

private:
    const PointCloud* cloud_;
    int max_level_;
    std::vector<int> level_;
    std::vector<std::uint32_t> by_first_;
    std::vector<double> first_sorted_;
};

struct AssouadOptions {
    std::vector<int> beta_exponents{2, 3, 4, 5, 6, 7};    ///< β = 2^-k
    std::vector<int> rho_exponents{1, 2, 3, 4, 5, 6, 7, 8, 9};  ///< ρ = 2^-m
    std::size_t centers = 256;
    std::uint64_t seed = 1;
    std::size_t min_ball_points = 10;
    /// A count is trusted only when the ball holds at least this many cloud
    /// points per net point; finer scales are below the sampling resolution.
    double points_per_net_point = 8.0;
    std::size_t min_scales = 4;  ///< resolved β values needed for a slope
    std::size_t min_count = 1;   ///< smaller counts are left out of the fit
};

struct CountRow {
    int beta_exponent = 0;
    int rho_exponent = 0;
    std::size_t center = 0;  ///< index into the cloud
    std::size_t count = 0;
    std::size_t ball_points = 0;
    bool resolved = false;
};

struct SlopeRow {
    int rho_exponent = 0;
    std::size_t center = 0;  ///< cloud index, or cloud size + k for the k-th extra centre
    double slope = 0.0;
    std::size_t scales = 0;
};

struct AssouadEstimate {
    /// inf (lower) or sup (upper) over every usable ρ
    double lower_delta1 = 0.0;
    double upper_delta1 = 0.0;
    /// the same restricted to the smaller half of the usable ρ levels
    double lower_delta2 = 0.0;
    double upper_delta2 = 0.0;
    std::vector<int> usable_rho;
    std::vector<CountRow> table;
    std::vector<SlopeRow> slopes;
    std::size_t skipped_balls = 0;
    std::vector<std::string> warnings;

    double lower() const { return lower_delta1; }
    double upper() const { return upper_delta1; }
};

/// Local covering exponents from net counts: for each centre and ρ, the
/// least-squares slope of log N_{βρ}(B(x,ρ)) against log(1 + 2/β) over
/// resolved β. The shifted regressor is the exact growth of a separated set
/// in a filled box of side 2ρ and agrees with -log β as β -> 0; it removes
/// the coarse-scale flattening caused by the box edges. Extra centres are
/// used in addition to the sampled ones. Throws InsufficientPoints when no
/// ball yields a slope.
AssouadEstimate estimate_assouad(const PointCloud& cloud, const AssouadOptions& options = {},
                                 const std::vector<std::vector<double>>& extra_centres = {});

/// Fixed points of the digit maps, one per digit.
std::vector<std::vector<double>> fixed_points(const SpongeTemplate& t);

/// Samples `points` cylinder centres first and adds the digit fixed points
/// as centres, since extreme local behaviour sits at periodic points.
AssouadEstimate estimate_assouad(const SpongeTemplate& t, std::size_t points, int depth, std::uint64_t seed,
                                 const AssouadOptions& options = {});

struct WitnessReport {
    std::vector<int> sigma;             ///< coordinates by increasing contraction
    double rho = 0.0;
    std::vector<double> base_point;     ///< x, indexed by coordinate
    std::vector<std::vector<double>> witnesses;  ///< y for each position of sigma
    std::vector<int> depths;            ///< N for each position of sigma
    std::vector<std::size_t> swap_letters;
    /// M[k][l] = y^(k) - x in coordinate sigma[l]
    std::vector<std::vector<double>> matrix;
    std::vector<double> diagonal_ratios;  ///< |M[k][k]| / rho
    double below_diagonal_max = 0.0;
    double entry_max = 0.0;
    double tolerance = 0.0;               ///< twice the largest cylinder diameter involved
    double c = 0.0;                       ///< smallest diagonal ratio
    bool upper_triangular = false;
    bool diagonal_bounded = false;        ///< every |M[k][k]| <= rho + tolerance
    bool in_ball = false;
};

/// Witness points for the hyperplane-escape argument at x = π(prefix).
/// Throws NotLalleyGatzouras, ReducibleCoordinate, PrefixTooShort.
WitnessReport diffuseness_witness(const SpongeTemplate& t, const Word& prefix, double rho);

struct FlatnessScale {
    int rho_exponent = 0;
    std::size_t ball_points = 0;
    double max_distance = 0.0;  ///< sup over the ball of the distance to L
    double constant = 0.0;      ///< max_distance / rho^alpha
};

struct FlatnessCertificate {
    int coordinate = 0;          ///< the coordinate normal to L
    std::size_t digit = 0;       ///< x is the fixed point of this digit
    std::vector<double> base_point;
    double alpha = 1.0;
    bool degenerate = false;     ///< L contains the attractor
    /// widest depth-n cylinder in the normal coordinate, n the cloud depth;
    /// sampled centres sit this close to the attractor
    double resolution = 0.0;
    std::vector<FlatnessScale> scales;
    double fitted_exponent = 0.0;
    double constant_spread = 0.0;  ///< max over min of the fitted constants
    bool passed = false;
    std::vector<std::string> warnings;
};

/// Empirical check that the attractor near a fixed point stays within
/// C·ρ^α of a coordinate hyperplane. Throws NotReducible for irreducible
/// templates and NotLalleyGatzouras without a contraction ordering.
FlatnessCertificate flatness_certificate(const SpongeTemplate& t, const PointCloud& cloud,
                                         const std::vector<int>& rho_exponents = {2, 3, 4, 5, 6, 7, 8});

}  // namespace sponge
