#include <sponge/error.hpp>
#include <sponge/number.hpp>

#include <charconv>
#include <cmath>

namespace sponge {

namespace {

bool is_integer_literal(std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
    }
    return true;
}

boost::multiprecision::cpp_int parse_integer(std::string_view s) {
    bool negative = false;
    if (s.front() == '-' || s.front() == '+') {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    boost::multiprecision::cpp_int value{std::string(s)};
    return negative ? boost::multiprecision::cpp_int(-value) : value;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

}  // namespace

Number Number::floating(double value) {
    Number n;
    n.value_ = value;
    return n;
}

Number Number::ratio(long long numerator, long long denominator) {
    return Number(Rational(numerator, denominator));
}

Number Number::parse(std::string_view text) {
    std::string_view s = trim(text);
    if (s.empty()) throw SpongeError(ErrorCode::MalformedInput, "empty number literal");

    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        auto num = trim(s.substr(0, slash));
        auto den = trim(s.substr(slash + 1));
        if (!is_integer_literal(num) || !is_integer_literal(den)) {
            throw SpongeError(ErrorCode::MalformedInput, "bad rational literal '" + std::string(text) + "'");
        }
        auto d = parse_integer(den);
        if (d == 0) throw SpongeError(ErrorCode::MalformedInput, "zero denominator in '" + std::string(text) + "'");
        auto n = parse_integer(num);
        if (d < 0) {
            n = -n;
            d = -d;
        }
        return Number(Rational(n, d));
    }
    if (is_integer_literal(s)) return Number(Rational(parse_integer(s)));

    if (s.front() == '+') s.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) {
        throw SpongeError(ErrorCode::MalformedInput, "bad number literal '" + std::string(text) + "'");
    }
    return floating(value);
}

double Number::to_double() const {
    if (is_exact()) return exact().convert_to<double>();
    return std::get<double>(value_);
}

std::string Number::to_string() const {
    if (is_exact()) {
        const auto& q = exact();
        auto num = boost::multiprecision::numerator(q);
        auto den = boost::multiprecision::denominator(q);
        if (den == 1) return num.str();
        return num.str() + "/" + den.str();
    }
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), std::get<double>(value_));
    std::string out(buf, ptr);
    if (out.find_first_of(".eEn") == std::string::npos) out += ".0";
    return out;
}

Number Number::abs() const {
    if (is_exact()) return Number(Rational(boost::multiprecision::abs(exact())));
    return floating(std::fabs(std::get<double>(value_)));
}

bool Number::is_zero() const { return sign() == 0; }

int Number::sign() const {
    if (is_exact()) return exact().sign();
    double v = std::get<double>(value_);
    return (v > 0) - (v < 0);
}

Number operator+(const Number& a, const Number& b) {
    if (a.is_exact() && b.is_exact()) return Number(Rational(a.exact() + b.exact()));
    return Number::floating(a.to_double() + b.to_double());
}

Number operator-(const Number& a, const Number& b) {
    if (a.is_exact() && b.is_exact()) return Number(Rational(a.exact() - b.exact()));
    return Number::floating(a.to_double() - b.to_double());
}

Number operator*(const Number& a, const Number& b) {
    if (a.is_exact() && b.is_exact()) return Number(Rational(a.exact() * b.exact()));
    return Number::floating(a.to_double() * b.to_double());
}

Number operator/(const Number& a, const Number& b) {
    if (b.is_zero()) throw SpongeError(ErrorCode::InvalidArgument, "division by zero");
    if (a.is_exact() && b.is_exact()) return Number(Rational(a.exact() / b.exact()));
    return Number::floating(a.to_double() / b.to_double());
}

Number operator-(const Number& a) {
    if (a.is_exact()) return Number(Rational(-a.exact()));
    return Number::floating(-a.to_double());
}

std::partial_ordering operator<=>(const Number& a, const Number& b) {
    if (a.is_exact() && b.is_exact()) {
        int c = a.exact().compare(b.exact());
        return c < 0 ? std::partial_ordering::less
                     : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
    }
    return a.to_double() <=> b.to_double();
}

bool operator==(const Number& a, const Number& b) { return (a <=> b) == 0; }

int compare(const Number& a, const Number& b, double tolerance) {
    if (a.is_exact() && b.is_exact()) {
        int c = a.exact().compare(b.exact());
        return (c > 0) - (c < 0);
    }
    double x = a.to_double();
    double y = b.to_double();
    if (std::fabs(x - y) <= tolerance) return 0;
    return x < y ? -1 : 1;
}

}  // namespace sponge
