#include <doctest.h>

#include "hotstream/error.hpp"
#include "hotstream/rational.hpp"

using hotstream::Error;
using hotstream::ErrorCode;
using hotstream::Rational;

TEST_CASE("normalization") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(3, -6) == Rational(-1, 2));
    CHECK(Rational(3, -6).den() == 2);
    CHECK(Rational(0, 7) == Rational(0));
    CHECK_THROWS_AS(Rational(1, 0), Error);
}

TEST_CASE("parse and print") {
    CHECK(Rational::parse("1/4") == Rational(1, 4));
    CHECK(Rational::parse("3") == Rational(3));
    CHECK(Rational::parse("-2/6") == Rational(-1, 3));
    CHECK(Rational::parse("1/4").str() == "1/4");
    for (const char* bad : {"", "1/", "/2", "a/b", "1/0", "1.5", "1//2"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(Rational::parse(bad), Error);
    }
}

TEST_CASE("floor and ceil") {
    CHECK(Rational(7, 2).floor() == 3);
    CHECK(Rational(7, 2).ceil() == 4);
    CHECK(Rational(-7, 2).floor() == -4);
    CHECK(Rational(-7, 2).ceil() == -3);
    CHECK(Rational(6, 3).floor() == 2);
    CHECK(Rational(6, 3).ceil() == 2);
}

TEST_CASE("scaled thresholds are exact") {
    const Rational gamma = Rational(1, 8) / Rational(6);
    CHECK(gamma == Rational(1, 48));
    CHECK(gamma.ceil_mul(48) == 1);
    CHECK(gamma.ceil_mul(49) == 2);
    CHECK(gamma.ceil_mul(0) == 0);
    const Rational gap = Rational(1, 4) - Rational(1, 8);
    CHECK(gap.floor_mul(16) == 2);
    CHECK(gap.floor_mul(15) == 1);
    // 0.1 - 0.025 in doubles is not exactly 0.075
    CHECK((Rational(1, 10) - Rational(1, 40)).floor_mul(40000) == 3000);
}

TEST_CASE("arithmetic and ordering") {
    CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    CHECK(Rational(1, 3) - Rational(1, 2) == Rational(-1, 6));
    CHECK(Rational(2, 3) * Rational(3, 4) == Rational(1, 2));
    CHECK(Rational(1, 2) / Rational(1, 4) == Rational(2));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-1, 2) < Rational(0));
    CHECK(Rational(1, 10) > Rational(1, 11));
    CHECK_THROWS_AS(Rational(1, 2) / Rational(0), Error);
}

TEST_CASE("overflow is reported") {
    const Rational big(INT64_MAX, 1);
    CHECK_THROWS_AS(big * big, Error);
    try {
        (void)(big + big);
        FAIL("expected overflow");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::invalid_params);
    }
}
