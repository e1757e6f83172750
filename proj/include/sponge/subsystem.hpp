#pragma once

#include <sponge/model.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sponge {

/// Words of a fixed length over the digit alphabet, stored as base-|E|
/// integers with the first letter most significant. Codes are sorted.
struct WordSet {
    std::size_t length = 0;
    std::size_t alphabet = 0;
    std::vector<std::uint64_t> codes;
    double mass = 0.0;  ///< total product-measure mass

    std::size_t size() const { return codes.size(); }
    Word word(std::size_t k) const;
};

Word decode_word(std::uint64_t code, std::size_t length, std::size_t alphabet);
std::uint64_t encode_word(const Word& w, std::size_t alphabet);

/// Per-letter increments of the typicality constraints, with positions
/// listed by ascending Lyapunov exponent.
struct TypicalityData {
    std::vector<int> order;
    std::vector<double> chi;      ///< per position
    std::vector<double> entropy;  ///< conditional entropy per position
    /// [k][a]: mass of the class of digit a on the first k ordered
    /// coordinates; row 0 is all ones.
    std::vector<std::vector<double>> class_mass;
    std::vector<std::vector<double>> neg_log;  ///< [k][a] = -log|φ'_{a,order[k]}|
};

/// Throws NonPositiveWeights unless every weight is positive.
TypicalityData typicality_data(const SpongeTemplate& t, const BernoulliWeights& p);

/// All length-N words whose contraction and information sums sit in the
/// ε-windows around their means. Throws NonPositiveWeights, and
/// EnumerationCapExceeded when |E|^N exceeds `cap`.
WordSet typical_words(const SpongeTemplate& t, const BernoulliWeights& p, double eps, int N,
                      std::uint64_t cap = 10'000'000);

struct PruningChain {
    std::vector<WordSet> sets;  ///< T_d first, T_0 last
    std::vector<double> masses;
};

/// Backward pruning: a word survives a step when its class on the earlier
/// coordinates keeps at least an ε share of that class's full mass.
PruningChain prune_chain(const WordSet& S, const SpongeTemplate& t, const BernoulliWeights& p, double eps);

/// Shortest, then lexicographically first, word whose image box lies in
/// the open unit cube. Throws NoInteriorWord.
Word interior_word(const SpongeTemplate& t, int max_len = 8);

/// Per-coordinate dimension bound for the subsystem fibers; may be negative.
double delta_bound(double entropy, double chi, double eps, int N, double log_tau_ratio);

struct SubsystemOptions {
    int tau_max_len = 8;
    std::uint64_t cap = 10'000'000;
    std::optional<Word> tau;  ///< overrides the search when set
};

struct SubsystemReport {
    int N = 0;
    double eps = 0.0;
    std::vector<int> order;
    std::vector<double> chi;
    std::vector<double> entropy;
    std::size_t S_size = 0;
    double S_mass = 0.0;
    std::vector<std::size_t> chain_sizes;
    std::vector<double> chain_masses;  ///< T_d first
    Word tau;
    std::vector<std::uint64_t> members;  ///< T_0 codes, digit order of psi
    std::optional<SpongeTemplate> psi;
    std::vector<double> delta_raw;  ///< per position in `order`
    std::vector<double> delta;      ///< clamped at 0
    double delta_sum = 0.0;
    bool strongly_lg = false;
    std::optional<double> formula_lower;
    std::optional<double> formula_upper;
    bool uniformly_irreducible = false;    ///< definitional search
    int min_fiber_count = 0;
    bool fiber_criterion = false;          ///< every fiber has two letters
    bool claim_holds = false;              ///< T_0 classes equal T_i classes
    bool t0_inequality_holds = false;
    std::optional<bool> lower_bound_holds; ///< set when strongly_lg
    double ly_dimension = 0.0;
    double limit = 0.0;                    ///< (1-ε)/(1+ε) times the LY dimension
    std::vector<std::string> warnings;
};

/// Throws HypothesesViolated, EmptySubsystem, NonPositiveWeights,
/// EnumerationCapExceeded and NoInteriorWord.
SubsystemReport build_subsystem(const SpongeTemplate& t, const BernoulliWeights& p, double eps, int N,
                                const SubsystemOptions& options = {});

struct ConvergenceRow {
    double eps = 0.0;
    int N = 0;
    double delta_sum = 0.0;
    std::optional<double> formula_lower;
    double t0_mass = 0.0;
    bool uniformly_irreducible = false;
    double limit = 0.0;
};

struct ConvergenceStudy {
    std::vector<ConvergenceRow> rows;
    double ly_dimension = 0.0;
};

/// One row per (ε, N) pair. Throws InvalidArgument for an empty schedule or
/// N not strictly ascending.
ConvergenceStudy convergence_study(const SpongeTemplate& t, const BernoulliWeights& p,
                                   const std::vector<double>& eps_schedule, const std::vector<int>& N_schedule,
                                   const SubsystemOptions& options = {});

}  // namespace sponge
