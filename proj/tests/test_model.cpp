#include "support.hpp"

#include <doctest.h>

using namespace sponge;
using test_support::fixture;
using test_support::Gen;

namespace {

Number q(long long n, long long d) { return Number::ratio(n, d); }

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const SpongeError& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("numbers parse exact and floating literals") {
    CHECK(Number::parse("1/3").is_exact());
    CHECK(Number::parse("2/6") == q(1, 3));
    CHECK(Number::parse("-4/-8").to_string() == "1/2");
    CHECK(Number::parse("7").to_string() == "7");
    CHECK_FALSE(Number::parse("0.25").is_exact());
    CHECK(Number::parse("0.25").to_double() == 0.25);
    CHECK(Number::parse("1e-3").to_double() == doctest::Approx(1e-3));
    CHECK(Number::floating(2.0).to_string() == "2.0");
    CHECK(code_of([] { Number::parse("1/0"); }) == ErrorCode::MalformedInput);
    CHECK(code_of([] { Number::parse("abc"); }) == ErrorCode::MalformedInput);
    CHECK(code_of([] { Number::parse(""); }) == ErrorCode::MalformedInput);
}

TEST_CASE("number arithmetic stays exact until a float enters") {
    Number a = q(1, 3) + q(1, 6);
    CHECK(a.is_exact());
    CHECK(a == q(1, 2));
    Number b = a * Number::floating(2.0);
    CHECK_FALSE(b.is_exact());
    CHECK(b.to_double() == 1.0);
    CHECK(compare(Number::floating(0.1 + 0.2), Number::floating(0.3)) == 0);
    CHECK(compare(q(1, 3), q(1, 3) + Number(Rational(1, 1000000000000000LL)), 1.0) < 0);
}

TEST_CASE("parse the Phi1 document") {
    auto t = fixture("phi1.json");
    CHECK(t.dimension() == 2);
    CHECK(t.size() == 3);
    CHECK(t.map(0, 0).ratio() == q(1, 3));
    CHECK(t.map(0, 1).ratio() == q(1, 2));
    CHECK(t.map(2, 0).offset() == q(2, 3));
    CHECK(t.is_exact());
    CHECK(t.grid(0) == 3);
}

TEST_CASE("full 2x2 grid") {
    auto t = fixture("full_square.json");
    CHECK(t.size() == 4);
    CHECK(t.base(0).size() == 2);
}

TEST_CASE("template validation errors") {
    auto bad = [](const char* doc) { return code_of([&] { parse_template(doc); }); };
    CHECK(bad(R"({"dimension":1,"bases":[{"maps":[{"ratio":"3/2","offset":"0"}]}],"digits":[[0]]})") ==
          ErrorCode::RatioOutOfRange);
    CHECK(bad(R"({"dimension":1,"bases":[{"maps":[{"ratio":"0","offset":"0"}]}],"digits":[[0]]})") ==
          ErrorCode::RatioOutOfRange);
    CHECK(bad(R"({"dimension":1,"bases":[{"maps":[{"ratio":"1/2","offset":"3/4"}]}],"digits":[[0]]})") ==
          ErrorCode::ImageEscapes);
    CHECK(bad(R"({"dimension":1,"bases":[{"maps":[{"ratio":"-1/2","offset":"1/4"}]}],"digits":[[0]]})") ==
          ErrorCode::ImageEscapes);
    CHECK(bad(R"({"dimension":1,"bases":[{"grid":2}],"digits":[[0],[0]]})") == ErrorCode::DuplicateDigit);
    CHECK(bad(R"({"dimension":1,"bases":[{"grid":2}],"digits":[]})") == ErrorCode::EmptyDigitSet);
    CHECK(bad(R"({"dimension":1,"bases":[{"grid":2}],"digits":[[2]]})") == ErrorCode::MalformedInput);
    CHECK(bad(R"({"dimension":2,"bases":[{"grid":2}],"digits":[[0]]})") == ErrorCode::MalformedInput);
    CHECK(bad(R"({"dimension":1,"bases":[{"maps":[]}],"digits":[[0]]})") == ErrorCode::MalformedInput);
    CHECK(bad("{not json") == ErrorCode::MalformedInput);
}

TEST_CASE("orientation reversing maps are accepted") {
    auto t = parse_template(R"({"dimension":1,"bases":[{"maps":[{"ratio":"-1/3","offset":"1/3"},{"ratio":0.5,"offset":0.5}]}],"digits":[[0],[1]]})");
    CHECK(t.map(0, 0).image().lo == Number(0));
    CHECK(t.map(0, 0).image().hi == q(1, 3));
    CHECK_FALSE(t.is_exact());
}

TEST_CASE("weights parsing") {
    auto t = fixture("phi1.json");
    auto u = parse_weights(R"({"weights":["1/3","1/3","1/3"]})", t);
    CHECK(u.is_exact());
    CHECK(u[1] == doctest::Approx(1.0 / 3));
    auto v = parse_weights(R"({"weights":["1/2","1/4","1/4"]})", t);
    CHECK(v.all_positive());
    CHECK(code_of([&] { parse_weights(R"({"weights":["1/2","1/4"]})", t); }) == ErrorCode::LengthMismatch);
    CHECK(code_of([&] { parse_weights(R"({"weights":["1/2","3/4","-1/4"]})", t); }) == ErrorCode::NegativeWeight);
    CHECK(code_of([&] { parse_weights(R"({"weights":["1/2","1/4","1/3"]})", t); }) == ErrorCode::SumNotOne);
    // floats only need to sum to 1 within 1e-12
    CHECK_NOTHROW(parse_weights(R"({"weights":[0.1,0.2,0.7]})", t));
    auto zero = parse_weights(R"({"weights":["1","0","0"]})", t);
    CHECK_FALSE(zero.all_positive());
    auto mixed = mix_with_uniform(zero);
    CHECK(mixed.all_positive());
    CHECK(mixed[1] == doctest::Approx(1e-3 / 3));
}

TEST_CASE("apply_word on Phi1") {
    auto t = fixture("phi1.json");
    Word empty;
    auto box = apply_word(t, empty);
    CHECK(box[0].lo == Number(0));
    CHECK(box[1].hi == Number(1));

    Word one{0};
    box = apply_word(t, one);
    CHECK(box[0].hi == q(1, 3));
    CHECK(box[1].hi == q(1, 2));

    // letters index digits(): (0,0) is 0 and (2,0) is 2
    Word two{0, 2};
    box = apply_word(t, two);
    CHECK(box[0].lo == q(2, 9));
    CHECK(box[0].hi == q(1, 3));
    CHECK(box[1].lo == Number(0));
    CHECK(box[1].hi == q(1, 4));
    CHECK(box[0].lo.is_exact());
}

TEST_CASE("coding_point on Phi1") {
    auto t = fixture("phi1.json");
    Word one{0};
    auto cp = coding_point(t, one);
    CHECK(cp.point[0] == q(1, 6));
    CHECK(cp.point[1] == q(1, 4));
    CHECK(cp.radius[0] == q(1, 6));
    CHECK(cp.radius[1] == q(1, 4));

    Word eight(8, 1);
    cp = coding_point(t, eight);
    CHECK(cp.radius[0] == q(1, 2 * 6561));
    CHECK(cp.radius[1] == q(1, 2 * 256));

    Word empty;
    CHECK(code_of([&] { coding_point(t, empty); }) == ErrorCode::EmptyWord);

    FloatMaps fm(t);
    Word two{0, 2};
    double out[2];
    fm.coding_point(two, out);
    auto exact = coding_point(t, two);
    CHECK(out[0] == doctest::Approx(exact.point[0].to_double()).epsilon(1e-15));
    CHECK(out[1] == doctest::Approx(exact.point[1].to_double()).epsilon(1e-15));
}

TEST_CASE("constant ratio words shrink geometrically") {
    auto t = parse_template(R"({"dimension":2,"bases":[{"grid":4},{"grid":4}],"digits":[[0,0],[3,1],[2,2]]})");
    Gen gen(11);
    for (std::size_t k = 1; k <= 10; ++k) {
        auto cp = coding_point(t, gen.word(t, k));
        Rational expect = 1;
        for (std::size_t n = 0; n < k; ++n) expect /= 4;
        CHECK(cp.radius[0] == Number(Rational(expect / 2)));
        CHECK(cp.radius[1] == Number(Rational(expect / 2)));
    }
}

TEST_CASE("property: nesting, concatenation and diameter law") {
    Gen gen(20240601);
    for (int trial = 0; trial < 1000; ++trial) {
        auto t = gen.rational_template();
        auto u = gen.word(t, gen.integer(0, 4));
        auto v = gen.word(t, gen.integer(1, 4));
        Word uv = u;
        uv.insert(uv.end(), v.begin(), v.end());
        auto outer = apply_word(t, u);
        auto inner = apply_word(t, uv);
        for (int c = 0; c < t.dimension(); ++c) {
            REQUIRE(inner[c].lo.is_exact());
            CHECK(inner[c].lo >= outer[c].lo);
            CHECK(inner[c].hi <= outer[c].hi);
            Number width(1);
            for (auto letter : uv) width *= t.map(letter, c).magnitude();
            CHECK(inner[c].hi - inner[c].lo == width);
        }
        // appending a single letter nests as well
        Word ua = u;
        ua.push_back(v.front());
        auto child = apply_word(t, ua);
        for (int c = 0; c < t.dimension(); ++c) {
            CHECK(child[c].lo >= outer[c].lo);
            CHECK(child[c].hi <= outer[c].hi);
        }
        // every coding point of uv lies in the box of uv
        auto cp = coding_point(t, uv);
        for (int c = 0; c < t.dimension(); ++c) {
            CHECK(cp.point[c] - cp.radius[c] == inner[c].lo);
            CHECK(cp.point[c] + cp.radius[c] == inner[c].hi);
        }
    }
}

TEST_CASE("property: serialization round trips bit identically") {
    Gen gen(77);
    for (int trial = 0; trial < 200; ++trial) {
        auto t = trial % 2 ? gen.rational_template() : gen.grid_template();
        std::string once = serialize_template(t);
        auto back = parse_template(once);
        CHECK(serialize_template(back) == once);
        REQUIRE(back.size() == t.size());
        CHECK(back.digits() == t.digits());
        for (std::size_t a = 0; a < t.size(); ++a) {
            for (int c = 0; c < t.dimension(); ++c) {
                CHECK(back.map(a, c).ratio().identical(t.map(a, c).ratio()));
                CHECK(back.map(a, c).offset().identical(t.map(a, c).offset()));
            }
        }
        auto w = gen.weights(t.size());
        auto wb = parse_weights(serialize_weights(w), t);
        for (std::size_t a = 0; a < w.size(); ++a) CHECK(wb.numbers()[a].identical(w.numbers()[a]));
    }
    auto floaty = parse_template(R"({"dimension":1,"bases":[{"maps":[{"ratio":0.3,"offset":0.1},{"ratio":"1/3","offset":"2/3"}]}],"digits":[[0],[1]]})");
    CHECK(serialize_template(parse_template(serialize_template(floaty))) == serialize_template(floaty));
}

}  // TEST_SUITE
