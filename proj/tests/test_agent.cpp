#include <doctest.h>

#include "hotstream/agent.hpp"
#include "hotstream/error.hpp"
#include "hotstream/oracle.hpp"
#include "hotstream/random.hpp"

using namespace hotstream;

namespace {

AgentConfig config(std::uint64_t n, Rational phi, Rational eps) {
    AgentConfig c;
    c.n = n;
    c.phi = phi;
    c.eps = eps;
    return c;
}

} // namespace

TEST_CASE("parameters") {
    const auto p = Parameters::from_config(config(16, Rational(9, 10), Rational(3, 5)));
    CHECK(p.gamma == Rational(1, 10));
    CHECK(p.tau == 10);
    CHECK(p.ceil_gamma_times(11) == 2);
    CHECK(p.report_threshold(20) == 6);
    CHECK_THROWS_AS(Parameters::from_config(config(16, Rational(1, 4), Rational(1, 4))), Error);
    CHECK_THROWS_AS(Parameters::from_config(config(16, Rational(1, 4), Rational(1, 2))), Error);
    CHECK_THROWS_AS(Parameters::from_config(config(16, Rational(1), Rational(1, 2))), Error);
    CHECK_THROWS_AS(Parameters::from_config(config(0, Rational(1, 2), Rational(1, 4))), Error);
    CHECK(Parameters::from_config(config(16, Rational(1, 4), Rational(1, 7))).tau == 42);
}

TEST_CASE("fresh agent") {
    Agent a(config(64, Rational(1, 2), Rational(1, 4)));
    CHECK(a.t() == 0);
    CHECK(a.queue_size() == 0);
    CHECK(a.entries().size() == 0);
    CHECK(a.query_hot().empty());
    CHECK(a.memory_footprint() == a.params().disperser.w_size + Agent::kCursorWords);
    CHECK(a.phase() == Phase::cleanup);
    CHECK(a.iteration() == 1);
}

TEST_CASE("single element for a full window") {
    Agent a(config(16, Rational(9, 10), Rational(3, 5)));
    const std::uint64_t tau = a.params().tau;
    for (std::uint64_t i = 1; i <= 2 * tau; ++i) {
        const std::size_t q = a.queue_size();
        a.step(StreamOperation::ins(3));
        CHECK(a.t() == i);
        if (i <= tau)
            CHECK(a.queue_size() == q + 1);
        else
            CHECK(a.queue_size() == q - 1);
    }
    CHECK(a.last_boundary() == Boundary::window_end);
    CHECK(a.queue_size() == 0);
    CHECK(a.entries().total_lambda() == 0);
    REQUIRE(a.entries().check(3));
    CHECK(a.entries().check(3)->total() == static_cast<std::int64_t>(2 * tau));
    CHECK(a.entries().check(3)->c == static_cast<std::int64_t>(2 * tau));
    CHECK(a.peak_queue_size() == tau + 1);
}

TEST_CASE("twenty inserts are reported") {
    Agent a(config(16, Rational(9, 10), Rational(3, 5)));
    for (int i = 0; i < 20; ++i) {
        a.step(StreamOperation::ins(5));
        CHECK(a.query_hot() == std::vector<ElementId>{5});
    }
}

TEST_CASE("round robin over many elements reports nothing") {
    // f = 1/8 for each id; phi - eps = 1/4
    Agent a(config(64, Rational(1, 2), Rational(1, 4)));
    for (int i = 0; i < 400; ++i) a.step(StreamOperation::ins(static_cast<ElementId>(i % 8)));
    CHECK(a.query_hot().empty());
}

TEST_CASE("cursor cycles through phases") {
    Agent a(config(16, Rational(9, 10), Rational(3, 5)));
    const std::uint64_t tau = a.params().tau;
    for (std::uint64_t i = 1; i <= 4 * tau; ++i) {
        a.step(StreamOperation::ins(i % 4));
        if (i % (2 * tau) == tau) CHECK(a.last_boundary() == Boundary::cleanup_end);
        else if (i % (2 * tau) == 0) CHECK(a.last_boundary() == Boundary::window_end);
        else CHECK(a.last_boundary() == Boundary::none);
        if (i % (2 * tau) == 0) CHECK(a.window_start() == i - 2 * tau);
    }
}

TEST_CASE("flush drains mid window") {
    Agent a(config(16, Rational(9, 10), Rational(3, 5)));
    for (int i = 0; i < 7; ++i) a.step(StreamOperation::ins(2));
    CHECK(a.queue_size() == 7);
    a.flush();
    CHECK(a.queue_size() == 0);
    CHECK(a.entries().total_lambda() == 0);
    CHECK(a.last_boundary() == Boundary::drained);
    CHECK(a.phase() == Phase::cleanup);
    CHECK(a.iteration() == 1);
    CHECK(a.entries().check(2)->c == 7);
    a.step(StreamOperation::del(2));
    CHECK(a.entries().check(2)->total() == 6);
}

TEST_CASE("out of universe") {
    Agent a(config(16, Rational(9, 10), Rational(3, 5)));
    try {
        a.step(StreamOperation::ins(16));
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::out_of_universe);
    }
    CHECK(a.t() == 0);
}

TEST_CASE("two agents replay identically") {
    const auto cfg = config(256, Rational(1, 4), Rational(1, 8));
    Agent a(cfg), b(cfg);
    SplitMix64 rng(11);
    ExactOracle o;
    for (int i = 0; i < 5000; ++i) {
        const ElementId x = rng.below(40);
        const auto op = (o.count(x) > 0 && rng.below(3) == 0) ? StreamOperation::del(x) : StreamOperation::ins(x);
        o.apply(op);
        a.step(op);
        b.step(op);
        CHECK(a.query_hot() == b.query_hot());
        CHECK(a.memory_footprint() == b.memory_footprint());
    }
}

TEST_CASE("custom disperser overrides") {
    auto cfg = config(64, Rational(1, 2), Rational(1, 4));
    cfg.d = 6;
    cfg.xi = Rational(1, 8);
    cfg.c_w = Rational(3);
    const Agent a(cfg);
    CHECK(a.params().disperser.d == 6);
    CHECK(a.params().disperser.delta == 6);
    // ceil(3 * 6 / (2 * 1/8 * 1/24))
    CHECK(a.params().disperser.w_size == 1728);
}
