#include <doctest.h>

#include "hotstream/kernels.hpp"
#include "hotstream/random.hpp"

#include <limits>
#include <vector>

namespace k = hotstream::kernels;
using hotstream::SplitMix64;

namespace {

std::vector<std::int64_t> random_values(SplitMix64& rng, std::size_t n, std::int64_t span) {
    std::vector<std::int64_t> v(n);
    for (auto& x : v) x = static_cast<std::int64_t>(rng.below(2 * span + 1)) - span;
    return v;
}

} // namespace

TEST_CASE("scalar kernels on small inputs") {
    const std::vector<std::int64_t> v{5, -1, 3, 3, 9, 0};
    CHECK(k::scalar::count_below(v, 3) == 2);
    CHECK(k::scalar::count_below(v, 10) == 6);
    CHECK(k::scalar::count_below({}, 0) == 0);
    const std::vector<std::uint32_t> idx{0, 2, 4};
    CHECK(k::scalar::gather_min(v, idx) == 3);
    CHECK(k::scalar::gather_min(v, {}) == std::numeric_limits<std::int64_t>::max());
    std::vector<std::uint64_t> a{0b1010, ~0ull}, b{0b0101, 0}, dst(2);
    CHECK(k::scalar::or_popcount(dst, a, b) == 4 + 64);
    CHECK(dst[0] == 0b1111);
}

TEST_CASE("scatter_add") {
    std::vector<std::int64_t> v(4, 0);
    const std::vector<std::uint32_t> idx{1, 3, 1};
    k::scatter_add(v, idx, 2);
    CHECK(v == std::vector<std::int64_t>{0, 4, 0, 2});
}

TEST_CASE("simd kernels match scalar") {
    if (!k::supported(k::Isa::avx2)) {
        MESSAGE("avx2 unavailable, equivalence skipped");
        return;
    }
    const auto& s = k::table_for(k::Isa::scalar);
    const auto& x = k::table_for(k::Isa::avx2);
    SplitMix64 rng(42);
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 15u, 16u, 17u, 63u, 100u, 1000u, 4099u}) {
        CAPTURE(n);
        for (int rep = 0; rep < 20; ++rep) {
            auto v = random_values(rng, n, 50);
            if (n > 0 && rep % 5 == 0) {
                v[0] = std::numeric_limits<std::int64_t>::min();
                v[n - 1] = std::numeric_limits<std::int64_t>::max();
            }
            const std::int64_t thr = static_cast<std::int64_t>(rng.below(121)) - 60;
            CHECK(s.count_below(v, thr) == x.count_below(v, thr));

            if (n > 0) {
                std::vector<std::uint32_t> idx(rng.below(40));
                for (auto& i : idx) i = static_cast<std::uint32_t>(rng.below(n));
                CHECK(s.gather_min(v, idx) == x.gather_min(v, idx));
            }

            std::vector<std::uint64_t> a(n), b(n), d1(n), d2(n);
            for (std::size_t i = 0; i < n; ++i) {
                a[i] = rng.next() & rng.next();
                b[i] = rng.next() & rng.next();
            }
            CHECK(s.or_popcount(d1, a, b) == x.or_popcount(d2, a, b));
            CHECK(d1 == d2);
        }
    }
}

TEST_CASE("forcing the isa") {
    const k::Isa before = k::active_isa();
    k::force(k::Isa::scalar);
    CHECK(k::active_isa() == k::Isa::scalar);
    const std::vector<std::int64_t> v{1, 2, 3};
    CHECK(k::active().count_below(v, 3) == 2);
    k::force(before);
    CHECK(k::active_isa() == before);
}
