#pragma once

#include <sponge/error.hpp>
#include <sponge/number.hpp>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sponge {

/// Closed interval [lo, hi].
struct Interval {
    Number lo;
    Number hi;
};

/// Axis-aligned box, one interval per coordinate.
using Box = std::vector<Interval>;

/// Contracting similarity x -> ratio * x + offset of [0,1] into itself.
/// Negative ratios (orientation reversing) are allowed.
class Similarity1D {
public:
    /// Throws RatioOutOfRange unless 0 < |ratio| < 1 and ImageEscapes unless
    /// the image of [0,1] lies in [0,1].
    Similarity1D(Number ratio, Number offset);

    const Number& ratio() const { return ratio_; }
    const Number& offset() const { return offset_; }
    Number magnitude() const { return ratio_.abs(); }
    double log_magnitude() const;

    Interval image() const;
    Number apply(const Number& x) const { return ratio_ * x + offset_; }

    /// this ∘ inner
    Similarity1D compose(const Similarity1D& inner) const;

private:
    struct Unchecked {};
    Similarity1D(Number ratio, Number offset, Unchecked) : ratio_(std::move(ratio)), offset_(std::move(offset)) {}

    Number ratio_;
    Number offset_;
};

/// One base index per coordinate.
using Digit = std::vector<int>;

/// A finite word over the digit set. Letters are positions in
/// SpongeTemplate::digits(), so a word of length N is an element of E^N.
using Word = std::vector<std::size_t>;

/// Diagonal IFS: a base IFS per coordinate and the selected digit set E.
/// Immutable once constructed; digit order is canonical for every report.
class SpongeTemplate {
public:
    SpongeTemplate(std::vector<std::vector<Similarity1D>> bases, std::vector<Digit> digits,
                   std::vector<std::optional<int>> grids = {});

    int dimension() const { return static_cast<int>(bases_.size()); }
    std::size_t size() const { return digits_.size(); }

    const std::vector<Similarity1D>& base(int coordinate) const { return bases_[coordinate]; }
    const std::vector<Digit>& digits() const { return digits_; }
    const Digit& digit(std::size_t a) const { return digits_[a]; }
    const Similarity1D& map(std::size_t a, int coordinate) const { return bases_[coordinate][digits_[a][coordinate]]; }

    /// Grid size m when the base was given as the shorthand {"grid": m}.
    std::optional<int> grid(int coordinate) const { return grids_[coordinate]; }

    /// True when every ratio and offset is an exact rational.
    bool is_exact() const { return exact_; }

private:
    std::vector<std::vector<Similarity1D>> bases_;
    std::vector<Digit> digits_;
    std::vector<std::optional<int>> grids_;
    bool exact_ = true;
};

/// Probability vector on E aligned with SpongeTemplate::digits().
class BernoulliWeights {
public:
    /// Throws NegativeWeight or SumNotOne. Exact inputs must sum to exactly 1;
    /// otherwise the sum must be within 1e-12 of 1.
    explicit BernoulliWeights(std::vector<Number> weights);
    static BernoulliWeights from_doubles(const std::vector<double>& weights);
    static BernoulliWeights uniform(std::size_t count);

    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t a) const { return values_[a]; }
    const std::vector<double>& values() const { return values_; }
    const std::vector<Number>& numbers() const { return numbers_; }
    bool all_positive() const;
    bool is_exact() const;

private:
    std::vector<Number> numbers_;
    std::vector<double> values_;
};

SpongeTemplate parse_template(std::string_view document);
std::string serialize_template(const SpongeTemplate& t);

BernoulliWeights parse_weights(std::string_view document, const SpongeTemplate& t);
std::string serialize_weights(const BernoulliWeights& w);

/// Mixture (1 - eta) * p + eta * uniform. Used to make every weight positive
/// before running the subsystem construction; never applied implicitly.
BernoulliWeights mix_with_uniform(const BernoulliWeights& p, double eta = 1e-3);

/// Composition of the coordinate maps along a word (leftmost map outermost).
Similarity1D compose_coordinate(const SpongeTemplate& t, std::span<const std::size_t> word, int coordinate);

/// The box φ_ω([0,1]^d). Exact whenever the template is exact.
Box apply_word(const SpongeTemplate& t, std::span<const std::size_t> word);

struct CodingPoint {
    std::vector<Number> point;   ///< φ_ω(1/2, ..., 1/2)
    std::vector<Number> radius;  ///< half-widths ∏ |φ'_{ω_n,i}| / 2
};

/// Centre of the cylinder box of a nonempty word together with the radius
/// that contains every coding point π(ωξ). Throws EmptyWord.
CodingPoint coding_point(const SpongeTemplate& t, std::span<const std::size_t> word);

/// Floating copy of the digit maps for hot loops (sampling, estimation).
class FloatMaps {
public:
    explicit FloatMaps(const SpongeTemplate& t);

    int dimension() const { return dimension_; }
    std::size_t size() const { return size_; }
    double ratio(std::size_t a, int i) const { return ratio_[a * dimension_ + i]; }
    double offset(std::size_t a, int i) const { return offset_[a * dimension_ + i]; }

    /// Floating coding_point centre; `out` receives d coordinates.
    void coding_point(std::span<const std::size_t> word, std::span<double> out) const;

private:
    int dimension_;
    std::size_t size_;
    std::vector<double> ratio_;
    std::vector<double> offset_;
};

}  // namespace sponge
