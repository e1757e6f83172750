#include <sponge/model.hpp>

#include <json.hpp>

#include <cmath>
#include <limits>
#include <set>

namespace sponge {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void malformed(const std::string& message) { throw SpongeError(ErrorCode::MalformedInput, message); }

json parse_document(std::string_view document) {
    try {
        return json::parse(document);
    } catch (const json::parse_error& e) {
        malformed(std::string("not a valid document: ") + e.what());
    }
}

// Scalars may be given as strings ("1/3", "0.25") or as plain numbers.
Number scalar_from_json(const json& value, const char* what) {
    if (value.is_string()) return Number::parse(value.get<std::string>());
    if (value.is_number_integer()) return Number(static_cast<long long>(value.get<std::int64_t>()));
    if (value.is_number_float()) {
        double x = value.get<double>();
        if (!std::isfinite(x)) malformed(std::string("non-finite ") + what);
        return Number::floating(x);
    }
    malformed(std::string("expected a number for ") + what);
}

int int_from_json(const json& value, const char* what) {
    if (!value.is_number_integer()) malformed(std::string("expected an integer for ") + what);
    auto v = value.get<std::int64_t>();
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
        malformed(std::string("integer out of range for ") + what);
    }
    return static_cast<int>(v);
}

}  // namespace

// ---------------------------------------------------------------------------

Similarity1D::Similarity1D(Number ratio, Number offset) : ratio_(std::move(ratio)), offset_(std::move(offset)) {
    Number mag = ratio_.abs();
    if (ratio_.is_zero() || compare(mag, Number(1), 0.0) >= 0) {
        throw SpongeError(ErrorCode::RatioOutOfRange, "contraction ratio " + ratio_.to_string() + " not in (0,1) in absolute value");
    }
    Interval img = image();
    if (compare(img.lo, Number(0)) < 0 || compare(img.hi, Number(1)) > 0) {
        throw SpongeError(ErrorCode::ImageEscapes, "map with ratio " + ratio_.to_string() + " and offset " +
                                                       offset_.to_string() + " sends [0,1] outside [0,1]");
    }
}

double Similarity1D::log_magnitude() const {
    if (ratio_.is_exact()) {
        // log of a rational without going through a possibly underflowing double
        const auto& q = ratio_.exact();
        auto num = boost::multiprecision::abs(boost::multiprecision::numerator(q));
        auto den = boost::multiprecision::denominator(q);
        auto log_int = [](const boost::multiprecision::cpp_int& v) {
            std::size_t bits = boost::multiprecision::msb(v);
            if (bits < 1000) return std::log(v.convert_to<double>());
            std::size_t shift = bits - 60;
            boost::multiprecision::cpp_int top = v >> shift;
            return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
        };
        return log_int(num) - log_int(den);
    }
    return std::log(std::fabs(ratio_.to_double()));
}

Interval Similarity1D::image() const {
    Number end = ratio_ + offset_;
    if (ratio_.sign() > 0) return {offset_, end};
    return {end, offset_};
}

Similarity1D Similarity1D::compose(const Similarity1D& inner) const {
    return Similarity1D(ratio_ * inner.ratio_, ratio_ * inner.offset_ + offset_, Unchecked{});
}

// ---------------------------------------------------------------------------

SpongeTemplate::SpongeTemplate(std::vector<std::vector<Similarity1D>> bases, std::vector<Digit> digits,
                               std::vector<std::optional<int>> grids)
    : bases_(std::move(bases)), digits_(std::move(digits)), grids_(std::move(grids)) {
    if (bases_.empty()) malformed("a template needs at least one coordinate");
    if (grids_.empty()) grids_.assign(bases_.size(), std::nullopt);
    if (grids_.size() != bases_.size()) malformed("grid annotations do not match the number of bases");
    for (std::size_t c = 0; c < bases_.size(); ++c) {
        if (bases_[c].empty()) malformed("base IFS for coordinate " + std::to_string(c) + " is empty");
        for (const auto& f : bases_[c]) {
            if (!f.ratio().is_exact() || !f.offset().is_exact()) exact_ = false;
        }
    }
    if (digits_.empty()) throw SpongeError(ErrorCode::EmptyDigitSet, "digit set is empty");
    std::set<Digit> seen;
    for (const auto& digit : digits_) {
        if (digit.size() != bases_.size()) {
            malformed("digit has " + std::to_string(digit.size()) + " entries, expected " + std::to_string(bases_.size()));
        }
        for (std::size_t c = 0; c < digit.size(); ++c) {
            if (digit[c] < 0 || static_cast<std::size_t>(digit[c]) >= bases_[c].size()) {
                malformed("digit entry " + std::to_string(digit[c]) + " out of range for coordinate " + std::to_string(c));
            }
        }
        if (!seen.insert(digit).second) {
            std::string text;
            for (int v : digit) text += (text.empty() ? "" : ",") + std::to_string(v);
            throw SpongeError(ErrorCode::DuplicateDigit, "digit (" + text + ") listed twice");
        }
    }
}

// ---------------------------------------------------------------------------

BernoulliWeights::BernoulliWeights(std::vector<Number> weights) : numbers_(std::move(weights)) {
    Number total;
    bool exact = true;
    for (std::size_t a = 0; a < numbers_.size(); ++a) {
        const auto& w = numbers_[a];
        if (w.sign() < 0) throw SpongeError(ErrorCode::NegativeWeight, "weight " + std::to_string(a) + " is negative");
        if (compare(w, Number(1), 0.0) > 0) throw SpongeError(ErrorCode::SumNotOne, "weight " + std::to_string(a) + " exceeds 1");
        exact = exact && w.is_exact();
        total += w;
        values_.push_back(w.to_double());
    }
    bool ok = exact ? total == Number(1) : std::fabs(total.to_double() - 1.0) <= kEqualTolerance;
    if (!ok) throw SpongeError(ErrorCode::SumNotOne, "weights sum to " + total.to_string());
}

BernoulliWeights BernoulliWeights::from_doubles(const std::vector<double>& weights) {
    std::vector<Number> numbers;
    numbers.reserve(weights.size());
    for (double w : weights) numbers.push_back(Number::floating(w));
    return BernoulliWeights(std::move(numbers));
}

BernoulliWeights BernoulliWeights::uniform(std::size_t count) {
    if (count == 0) throw SpongeError(ErrorCode::LengthMismatch, "uniform weights over an empty alphabet");
    return BernoulliWeights(std::vector<Number>(count, Number(Rational(1, static_cast<long long>(count)))));
}

bool BernoulliWeights::all_positive() const {
    for (const auto& w : numbers_) {
        if (w.sign() <= 0) return false;
    }
    return true;
}

bool BernoulliWeights::is_exact() const {
    for (const auto& w : numbers_) {
        if (!w.is_exact()) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------

SpongeTemplate parse_template(std::string_view document) {
    json doc = parse_document(document);
    if (!doc.is_object()) malformed("template must be an object");
    if (!doc.contains("bases") || !doc["bases"].is_array()) malformed("template needs a 'bases' array");
    if (!doc.contains("digits") || !doc["digits"].is_array()) malformed("template needs a 'digits' array");

    const json& bases_doc = doc["bases"];
    if (doc.contains("dimension")) {
        int d = int_from_json(doc["dimension"], "dimension");
        if (d < 1) malformed("dimension must be positive");
        if (static_cast<std::size_t>(d) != bases_doc.size()) malformed("'dimension' does not match the number of bases");
    }

    std::vector<std::vector<Similarity1D>> bases;
    std::vector<std::optional<int>> grids;
    for (const auto& base : bases_doc) {
        if (!base.is_object()) malformed("each base must be an object");
        if (base.contains("grid")) {
            int m = int_from_json(base["grid"], "grid");
            if (m < 1) malformed("grid size must be positive");
            if (m == 1) throw SpongeError(ErrorCode::RatioOutOfRange, "grid of size 1 does not contract");
            std::vector<Similarity1D> maps;
            for (int a = 0; a < m; ++a) maps.emplace_back(Number(Rational(1, m)), Number(Rational(a, m)));
            bases.push_back(std::move(maps));
            grids.emplace_back(m);
        } else if (base.contains("maps")) {
            if (!base["maps"].is_array()) malformed("'maps' must be an array");
            std::vector<Similarity1D> maps;
            for (const auto& m : base["maps"]) {
                if (!m.is_object() || !m.contains("ratio") || !m.contains("offset")) {
                    malformed("each map needs 'ratio' and 'offset'");
                }
                maps.emplace_back(scalar_from_json(m["ratio"], "ratio"), scalar_from_json(m["offset"], "offset"));
            }
            bases.push_back(std::move(maps));
            grids.emplace_back(std::nullopt);
        } else {
            malformed("each base needs 'grid' or 'maps'");
        }
    }

    std::vector<Digit> digits;
    for (const auto& entry : doc["digits"]) {
        if (!entry.is_array()) malformed("each digit must be an array of indices");
        Digit digit;
        for (const auto& v : entry) digit.push_back(int_from_json(v, "digit entry"));
        digits.push_back(std::move(digit));
    }
    return SpongeTemplate(std::move(bases), std::move(digits), std::move(grids));
}

std::string serialize_template(const SpongeTemplate& t) {
    json doc;
    doc["dimension"] = t.dimension();
    json bases = json::array();
    for (int c = 0; c < t.dimension(); ++c) {
        if (auto m = t.grid(c)) {
            bases.push_back(json{{"grid", *m}});
            continue;
        }
        json maps = json::array();
        for (const auto& f : t.base(c)) maps.push_back(json{{"ratio", f.ratio().to_string()}, {"offset", f.offset().to_string()}});
        bases.push_back(json{{"maps", std::move(maps)}});
    }
    doc["bases"] = std::move(bases);
    doc["digits"] = t.digits();
    return doc.dump();
}

BernoulliWeights parse_weights(std::string_view document, const SpongeTemplate& t) {
    json doc = parse_document(document);
    if (!doc.is_object() || !doc.contains("weights") || !doc["weights"].is_array()) {
        malformed("weights document needs a 'weights' array");
    }
    const json& list = doc["weights"];
    if (list.size() != t.size()) {
        throw SpongeError(ErrorCode::LengthMismatch, "got " + std::to_string(list.size()) + " weights for " +
                                                         std::to_string(t.size()) + " digits");
    }
    std::vector<Number> weights;
    for (const auto& w : list) weights.push_back(scalar_from_json(w, "weight"));
    return BernoulliWeights(std::move(weights));
}

std::string serialize_weights(const BernoulliWeights& w) {
    json list = json::array();
    for (const auto& n : w.numbers()) list.push_back(n.to_string());
    return json{{"weights", std::move(list)}}.dump();
}

BernoulliWeights mix_with_uniform(const BernoulliWeights& p, double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw SpongeError(ErrorCode::InvalidArgument, "mixing parameter must lie in [0,1]");
    std::vector<double> mixed(p.size());
    double share = eta / static_cast<double>(p.size());
    double total = 0.0;
    for (std::size_t a = 0; a < p.size(); ++a) total += mixed[a] = (1.0 - eta) * p[a] + share;
    for (double& v : mixed) v /= total;
    return BernoulliWeights::from_doubles(mixed);
}

// ---------------------------------------------------------------------------

Similarity1D compose_coordinate(const SpongeTemplate& t, std::span<const std::size_t> word, int coordinate) {
    // identity is not a contraction; apply_word handles the empty box itself
    if (word.empty()) throw SpongeError(ErrorCode::EmptyWord, "empty word has no contracting map");
    // build from the right so the leftmost letter ends up outermost
    Similarity1D out = t.map(word.back(), coordinate);
    for (std::size_t n = word.size() - 1; n-- > 0;) out = t.map(word[n], coordinate).compose(out);
    return out;
}

Box apply_word(const SpongeTemplate& t, std::span<const std::size_t> word) {
    Box box(t.dimension());
    if (word.empty()) {
        for (auto& iv : box) iv = {Number(0), Number(1)};
        return box;
    }
    for (int c = 0; c < t.dimension(); ++c) box[c] = compose_coordinate(t, word, c).image();
    return box;
}

CodingPoint coding_point(const SpongeTemplate& t, std::span<const std::size_t> word) {
    if (word.empty()) throw SpongeError(ErrorCode::EmptyWord, "coding point needs a nonempty word");
    CodingPoint out;
    const Number half(Rational(1, 2));
    for (int c = 0; c < t.dimension(); ++c) {
        Similarity1D f = compose_coordinate(t, word, c);
        out.point.push_back(f.apply(half));
        out.radius.push_back(f.magnitude() * half);
    }
    return out;
}

FloatMaps::FloatMaps(const SpongeTemplate& t) : dimension_(t.dimension()), size_(t.size()) {
    ratio_.resize(size_ * dimension_);
    offset_.resize(size_ * dimension_);
    for (std::size_t a = 0; a < size_; ++a) {
        for (int c = 0; c < dimension_; ++c) {
            ratio_[a * dimension_ + c] = t.map(a, c).ratio().to_double();
            offset_[a * dimension_ + c] = t.map(a, c).offset().to_double();
        }
    }
}

void FloatMaps::coding_point(std::span<const std::size_t> word, std::span<double> out) const {
    for (int c = 0; c < dimension_; ++c) out[c] = 0.5;
    for (std::size_t n = word.size(); n-- > 0;) {
        const std::size_t base = word[n] * dimension_;
        for (int c = 0; c < dimension_; ++c) out[c] = ratio_[base + c] * out[c] + offset_[base + c];
    }
}

}  // namespace sponge
