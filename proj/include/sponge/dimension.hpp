#pragma once

#include <sponge/model.hpp>
#include <sponge/structure.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sponge {

/// Root s of Σ r^s = 1. Throws EmptyList, and InvalidArgument for ratios
/// outside (0,1). A singleton gives 0.
double moran_dimension(const std::vector<double>& ratios);

/// Fibers of E along a coordinate ordering: level k maps each projection of
/// E onto the first k ordered coordinates to the letters of coordinate
/// sigma[k] that extend it.
struct FiberSystem {
    std::vector<int> sigma;
    std::vector<std::map<std::vector<int>, std::vector<int>>> levels;
};

/// Throws InvalidPermutation unless sigma is a permutation of the coordinates.
FiberSystem fiber_systems(const SpongeTemplate& t, const std::vector<int>& sigma);

struct FiberDimension {
    std::vector<int> prefix;                ///< indices on the earlier blocks
    std::vector<std::vector<int>> letters;  ///< index tuples on this block
    double dimension = 0.0;
};

/// Coordinates grouped into blocks, least contracted first: strictly
/// ordered between blocks, with equal contraction inside a block for
/// every map. Singleton blocks throughout is the Lalley-Gatzouras case.
std::optional<std::vector<std::vector<int>>> contraction_blocks(const SpongeTemplate& t);

struct AssouadFormula {
    std::vector<int> sigma;
    std::vector<std::vector<int>> blocks;
    double lower = 0.0;
    double upper = 0.0;
    std::vector<double> lower_terms;  ///< per level, min over fibers
    std::vector<double> upper_terms;  ///< per level, max over fibers
    std::vector<std::vector<FiberDimension>> fibers;
    std::vector<std::string> warnings;
};

/// Lower and upper Assouad dimension from fiber similarity dimensions.
/// Coordinates tied for every map form one self-similar block. Throws
/// NotLalleyGatzouras when no such block ordering exists.
AssouadFormula assouad_formula(const SpongeTemplate& t);

struct LyBreakdown {
    double dimension = 0.0;
    std::vector<int> order;       ///< coordinates by ascending exponent
    std::vector<double> chi;      ///< indexed by coordinate
    std::vector<double> entropy;  ///< conditional entropy per position in `order`
    std::vector<std::string> warnings;
};

/// Hausdorff dimension of the Bernoulli measure. Throws InvalidWeights.
LyBreakdown ly_dimension(const SpongeTemplate& t, const BernoulliWeights& p);

/// Fast evaluator of the same quantity for raw probability vectors; class
/// tables are cached per coordinate ordering.
class LyEvaluator {
public:
    explicit LyEvaluator(const SpongeTemplate& t);

    double operator()(const std::vector<double>& p) const;
    LyBreakdown breakdown(const std::vector<double>& p) const;

private:
    const std::vector<std::vector<int>>& classes(const std::vector<int>& order) const;

    int dimension_;
    std::size_t size_;
    std::vector<Digit> digits_;
    std::vector<std::vector<double>> neg_log_;  // [a][c] = -log|φ'_{a,c}|
    mutable std::map<std::vector<int>, std::vector<std::vector<int>>> cache_;
};

/// Closed form for two-dimensional grid carpets with unequal ratios.
/// Throws NotSierpinskiCarpet otherwise.
double mcmullen_dimension(const SpongeTemplate& t);

struct DynamicalOptions {
    int restarts = 16;
    double tol = 1e-10;
    std::uint64_t seed = 0;
};

struct RestartResult {
    double start_value = 0.0;
    double value = 0.0;
    bool converged = false;
    int iterations = 0;
};

struct DynamicalResult {
    double value = 0.0;
    std::vector<double> weights;
    std::vector<RestartResult> restarts;
    std::size_t evaluations = 0;
    bool pruned = false;  ///< the reported weights came from the support-pruned polish
};

/// Supremum of ly_dimension over the simplex, by multistart optimization.
DynamicalResult dynamical_dimension(const SpongeTemplate& t, const DynamicalOptions& options = {});

struct SeparationConstant {
    /// Smallest sup-metric gap between distinct prefix boxes; empty when
    /// there are no pairs to compare.
    std::optional<Number> value;
    std::vector<std::string> warnings;
};

/// Throws NotLalleyGatzouras when sigma is not a strict contraction ordering.
SeparationConstant separation_constant(const SpongeTemplate& t, const std::vector<int>& sigma);

}  // namespace sponge
