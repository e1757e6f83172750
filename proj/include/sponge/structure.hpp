#pragma once

#include <sponge/model.hpp>

#include <optional>
#include <string>
#include <vector>

namespace sponge {

/// Reflexive preorder on coordinates; rel[i][j] means i ≺ j.
struct PartialOrder {
    std::vector<std::vector<bool>> rel;

    bool precedes(int i, int j) const { return rel[i][j]; }
    int size() const { return static_cast<int>(rel.size()); }
};

/// i ≺ j iff every map contracts coordinate i no more than coordinate j.
PartialOrder partial_order(const SpongeTemplate& t);

/// Whether the boxes of the distinct projections of E onto `coords` are
/// pairwise disjoint, using open (strong = false) or closed unit cubes.
bool is_good(const SpongeTemplate& t, const std::vector<int>& coords, bool strong);

struct Classification {
    bool baranski = false;
    bool strongly_baranski = false;
    bool sierpinski = false;
    bool distinguishable = false;
    /// Coordinates listed from least to most contracted (0-based).
    std::optional<std::vector<int>> lg_sigma;
    bool lalley_gatzouras = false;  ///< lg_sigma present and every prefix set good
    bool strongly_lg = false;       ///< lg_sigma present and every prefix set strongly good
};

Classification classify(const SpongeTemplate& t);

/// The unique strict uniform contraction ordering, if any.
std::optional<std::vector<int>> lg_sigma(const SpongeTemplate& t);

/// True when each coordinate uses one contraction magnitude across all of E.
bool is_sierpinski(const SpongeTemplate& t);

struct WitnessPair {
    std::size_t a = 0;  ///< digit indices
    std::size_t b = 0;
};

struct Irreducibility {
    bool irreducible = false;
    /// Per coordinate: a pair differing there and only in coordinates above it.
    std::vector<std::optional<WitnessPair>> witnesses;
    bool uniformly_irreducible = false;
    /// First (coordinate, digit) admitting no partner, when not uniform.
    std::optional<std::pair<int, std::size_t>> counterexample;

    std::optional<int> first_reducible() const;
};

/// Irreducibility with respect to the template order ≺.
Irreducibility irreducibility(const SpongeTemplate& t);

/// Irreducibility with respect to an arbitrary coordinate preorder (≺_p).
Irreducibility irreducibility(const SpongeTemplate& t, const PartialOrder& order);

/// Definitional check of uniform irreducibility by brute-force quantifier
/// search over pairs; used to audit the grouped implementation.
bool uniformly_irreducible_bruteforce(const SpongeTemplate& t, const PartialOrder& order);

struct MeasureProfile {
    std::vector<double> chi;
    PartialOrder order;
    Irreducibility irreducible_wrt;
    bool distinct_lyapunov = false;
    bool good = false;
    bool strongly_good = false;
    bool exact_comparisons = false;  ///< χ ordering decided without tolerance
    std::vector<std::vector<int>> level_sets;
    std::vector<std::string> warnings;
};

/// Lyapunov exponents, the induced order and the goodness and
/// irreducibility of the measure. Throws InvalidWeights on arity mismatch.
MeasureProfile measure_profile(const SpongeTemplate& t, const BernoulliWeights& p);

/// Lyapunov exponents alone.
std::vector<double> lyapunov_exponents(const SpongeTemplate& t, const std::vector<double>& p);

enum class Diffuseness {
    Diffuse,
    NotDiffuseNoSubsets,  ///< reducible: not even a subset is diffuse
    NotDiffuse,           ///< irreducible but not uniformly so
    Undecided,
};

std::string_view diffuseness_name(Diffuseness v);

struct DiffusenessDecision {
    Diffuseness verdict = Diffuseness::Undecided;
    std::string reason;
};

DiffusenessDecision decide_diffuseness(const SpongeTemplate& t);

}  // namespace sponge
