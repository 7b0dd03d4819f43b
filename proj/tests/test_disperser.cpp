#include <doctest.h>

#include "hotstream/disperser.hpp"
#include "hotstream/error.hpp"
#include "hotstream/kernels.hpp"

#include <algorithm>
#include <set>

using namespace hotstream;

namespace {

// n=64, d=10, delta=5, xi=3/8, gamma=5/3, c_w=2: w_size=16, ell=4.
DisperserParams fixture_params() {
    return DisperserParams::make(64, 10, 5, Rational(3, 8), Rational(5, 3), Rational(2));
}

} // namespace

TEST_CASE("derived sizes") {
    const auto p = DisperserParams::make(64, 4, 4, Rational(1, 4), Rational(1, 6), Rational(2));
    CHECK(p.w_size == 96);
    CHECK(p.ell == 48);
    const auto f = fixture_params();
    CHECK(f.w_size == 16);
    CHECK(f.ell == 4);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(DisperserParams::make(0, 4, 4, Rational(1, 4), Rational(1, 6), Rational(2)), Error);
    CHECK_THROWS_AS(DisperserParams::make(8, 0, 4, Rational(1, 4), Rational(1, 6), Rational(2)), Error);
    CHECK_THROWS_AS(DisperserParams::make(8, 4, 0, Rational(1, 4), Rational(1, 6), Rational(2)), Error);
    CHECK_THROWS_AS(DisperserParams::make(8, 4, 4, Rational(1, 2), Rational(1, 6), Rational(2)), Error);
    CHECK_THROWS_AS(DisperserParams::make(8, 4, 4, Rational(0), Rational(1, 6), Rational(2)), Error);
    CHECK_THROWS_AS(DisperserParams::make(8, 4, 4, Rational(1, 4), Rational(1, 6), Rational(1)), Error);
    CHECK_THROWS_AS(DisperserParams::make(8, 4, 4, Rational(1, 4), Rational(0), Rational(2)), Error);
    CHECK_THROWS_AS(DisperserParams::make(8, 1u << 30, 4, Rational(1, 4), Rational(1, 6), Rational(2)), Error);
}

TEST_CASE("defaults") {
    const auto p = DisperserParams::defaults(1024, Rational(1, 48));
    CHECK(p.d == 100);
    CHECK(p.delta == 100);
    CHECK(p.xi == Rational(1, 4));
    CHECK(p.c_w == Rational(2));
    CHECK(p.w_size == 19200);
    CHECK(DisperserParams::defaults(2, Rational(1, 6)).d == 8);
    CHECK(DisperserParams::defaults(1024, Rational(1, 48), 12u).d == 12);
}

TEST_CASE("single element universe") {
    const auto p = DisperserParams::make(1, 3, 1, Rational(1, 4), Rational(1, 6), Rational(2));
    const auto d = Disperser::build_seeded(p, 99);
    const auto nb = d.neighbors(0);
    REQUIRE(nb.size() == 3);
    for (auto r : nb) CHECK(r < p.w_size);
    CHECK_THROWS_AS(d.neighbors(1), Error);
}

TEST_CASE("seeded construction is deterministic") {
    const auto p = DisperserParams::make(64, 4, 4, Rational(1, 4), Rational(1, 6), Rational(2));
    const auto a = Disperser::build_seeded(p, 1);
    const auto b = Disperser::build_seeded(p, 1);
    for (ElementId x = 0; x < 64; ++x) CHECK(a.neighbors(x) == b.neighbors(x));
    CHECK(a.neighbors(5) == a.neighbors(5));
    const auto c = Disperser::build_seeded(p, 2);
    bool differs = false;
    for (ElementId x = 0; x < 64; ++x) differs |= a.neighbors(x) != c.neighbors(x);
    CHECK(differs);
}

TEST_CASE("golden neighbor lists") {
    const auto p = DisperserParams::make(64, 4, 4, Rational(1, 4), Rational(1, 6), Rational(2));
    const auto d = Disperser::build_seeded(p, 1);
    CHECK(d.neighbors(5) == std::vector<std::uint32_t>{27, 45, 55, 2});
    CHECK(d.neighbors(0) == std::vector<std::uint32_t>{21, 65, 36, 8});
    CHECK(Disperser::build_seeded(p, 7).neighbors(63) == std::vector<std::uint32_t>{20, 18, 83, 29});
}

TEST_CASE("header round trip") {
    const auto p = fixture_params();
    const auto d = Disperser::build_seeded(p, 1234);
    const auto back = Disperser::from_header(d.header());
    CHECK(back.params() == p);
    CHECK(back.seed() == 1234);
    CHECK(back.construction() == Construction::seeded);
    for (ElementId x = 0; x < p.n; ++x) CHECK(back.neighbors(x) == d.neighbors(x));
    CHECK_THROWS_AS(Disperser::from_header("nonsense"), Error);
    CHECK_THROWS_AS(Disperser::from_header("disperser n=4"), Error);
    std::string tampered = d.header();
    tampered.replace(tampered.find(" w=16"), 5, " w=17");
    CHECK_THROWS_AS(Disperser::from_header(tampered), Error);
}

TEST_CASE("construction names") {
    for (auto c : {Construction::seeded, Construction::complete, Construction::shared})
        CHECK(parse_construction(to_string(c)) == c);
    CHECK_THROWS_AS(parse_construction("expander"), Error);
}

TEST_CASE("fixture passes exhaustive dispersion") {
    const auto d = Disperser::build_seeded(fixture_params(), 1);
    VerifyOptions opts;
    opts.mode = VerifyMode::exhaustive;
    const auto rep = verify_dispersion(d, opts);
    CHECK(rep.holds);
    CHECK(rep.exhaustive);
    CHECK(rep.checked == 635376);
    CHECK(rep.required == 10);
    CHECK(rep.min_cover == 10);
    CHECK_FALSE(rep.witness);
}

TEST_CASE("verdict agrees across kernel isas") {
    const auto d = Disperser::build_seeded(fixture_params(), 5);
    VerifyOptions opts;
    opts.mode = VerifyMode::exhaustive;
    const kernels::Isa before = kernels::active_isa();
    kernels::force(kernels::Isa::scalar);
    const auto s = verify_dispersion(d, opts);
    kernels::force(before);
    const auto v = verify_dispersion(d, opts);
    CHECK_FALSE(s.holds);
    CHECK(s.holds == v.holds);
    CHECK(s.min_cover == v.min_cover);
    CHECK(s.witness == v.witness);
}

TEST_CASE("seeded n=64 d=8 w=32 ell=4 fails with first witness") {
    const auto p = DisperserParams::make(64, 8, 2, Rational(1, 4), Rational(1), Rational(2));
    REQUIRE(p.w_size == 32);
    REQUIRE(p.ell == 4);
    VerifyOptions opts;
    opts.mode = VerifyMode::exhaustive;
    const auto rep = verify_dispersion(Disperser::build_seeded(p, 1), opts);
    CHECK_FALSE(rep.holds);
    CHECK(rep.required == 24);
    REQUIRE(rep.witness);
    CHECK(*rep.witness == std::vector<ElementId>{0, 1, 2, 3});
    CHECK(rep.min_cover == 22);
}

TEST_CASE("complete bipartite graph holds") {
    const auto p = DisperserParams::make(16, 8, 1, Rational(1, 4), Rational(4), Rational(2));
    REQUIRE(p.w_size == 8);
    const auto d = Disperser::build_complete(p);
    const auto nb = d.neighbors(3);
    CHECK(std::set<std::uint32_t>(nb.begin(), nb.end()).size() == 8);
    const auto rep = verify_dispersion(d);
    CHECK(rep.holds);
    CHECK(rep.exhaustive);
    CHECK(rep.min_cover == 8);
    CHECK_THROWS_AS(Disperser::build_complete(fixture_params()), Error);
}

TEST_CASE("shared neighbor list fails") {
    const auto p = DisperserParams::make(16, 2, 1, Rational(1, 4), Rational(1), Rational(2));
    REQUIRE(p.w_size == 8);
    REQUIRE(p.ell == 2);
    const auto rep = verify_dispersion(Disperser::build_shared(p));
    CHECK_FALSE(rep.holds);
    CHECK(rep.min_cover == 2);
    REQUIRE(rep.witness);
    CHECK(rep.witness->size() == 2);
}

TEST_CASE("sampled mode and budget") {
    const auto d = Disperser::build_seeded(fixture_params(), 1);
    VerifyOptions opts;
    opts.mode = VerifyMode::sampled;
    opts.samples = 2000;
    const auto rep = verify_dispersion(d, opts);
    CHECK(rep.holds);
    CHECK_FALSE(rep.exhaustive);
    CHECK(rep.checked == 2000);

    opts.mode = VerifyMode::exhaustive;
    opts.budget = 1000;
    try {
        verify_dispersion(d, opts);
        FAIL("expected budget error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::budget_exceeded);
    }
    opts.mode = VerifyMode::automatic;
    CHECK_FALSE(verify_dispersion(d, opts).exhaustive);

    const auto shared = Disperser::build_shared(DisperserParams::make(16, 2, 1, Rational(1, 4), Rational(1), Rational(2)));
    VerifyOptions s;
    s.mode = VerifyMode::sampled;
    s.samples = 10;
    CHECK_FALSE(verify_dispersion(shared, s).holds);
}

TEST_CASE("ell above n is vacuous") {
    const auto p = DisperserParams::make(8, 4, 4, Rational(1, 4), Rational(1, 6), Rational(2));
    REQUIRE(p.ell > p.n);
    const auto rep = verify_dispersion(Disperser::build_shared(p));
    CHECK(rep.holds);
    CHECK(rep.checked == 0);
}

TEST_CASE("binomial") {
    CHECK(binomial_saturating(64, 4) == 635376);
    CHECK(binomial_saturating(5, 0) == 1);
    CHECK(binomial_saturating(3, 5) == 0);
    CHECK(binomial_saturating(1000, 500) == UINT64_MAX);
}
