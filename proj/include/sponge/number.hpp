#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <string>
#include <string_view>
#include <variant>

namespace sponge {

using Rational = boost::multiprecision::cpp_rational;

/// Equality tolerance for predicates on floating inputs.
inline constexpr double kEqualTolerance = 1e-12;
/// Gap tolerance for separation (disjointness) predicates on floating inputs.
inline constexpr double kSeparationTolerance = 1e-9;

/// A scalar that is either an exact rational or a double.
///
/// Arithmetic stays exact while both operands are exact and degrades to
/// double as soon as one of them is floating. Rationals are always kept in
/// lowest terms with a positive denominator.
class Number {
public:
    Number() = default;
    Number(long long value) : value_(Rational(value)) {}  // NOLINT: implicit by intent
    Number(int value) : value_(Rational(value)) {}        // NOLINT
    explicit Number(Rational value) : value_(std::move(value)) {}

    static Number floating(double value);
    static Number ratio(long long numerator, long long denominator);

    /// Accepts "p/q", "p" (exact) or a decimal/scientific literal (floating).
    static Number parse(std::string_view text);

    bool is_exact() const { return std::holds_alternative<Rational>(value_); }
    const Rational& exact() const { return std::get<Rational>(value_); }
    double to_double() const;

    /// Exact values print as "p/q" or "p"; floating values print as the
    /// shortest round-tripping decimal, always carrying a '.' or exponent so
    /// that re-parsing keeps them floating.
    std::string to_string() const;

    Number abs() const;
    bool is_zero() const;
    int sign() const;

    friend Number operator+(const Number& a, const Number& b);
    friend Number operator-(const Number& a, const Number& b);
    friend Number operator*(const Number& a, const Number& b);
    friend Number operator/(const Number& a, const Number& b);
    friend Number operator-(const Number& a);

    Number& operator+=(const Number& b) { return *this = *this + b; }
    Number& operator*=(const Number& b) { return *this = *this * b; }

    /// Strict numeric ordering, no tolerance.
    friend std::partial_ordering operator<=>(const Number& a, const Number& b);
    friend bool operator==(const Number& a, const Number& b);

    /// Identical representation (exactness and value); used for round trips.
    bool identical(const Number& other) const { return value_ == other.value_; }

private:
    std::variant<Rational, double> value_{Rational(0)};
};

/// Three-way comparison honouring the exactness policy: exact when both
/// values are exact, otherwise equal within `tolerance`.
int compare(const Number& a, const Number& b, double tolerance = kEqualTolerance);

}  // namespace sponge
