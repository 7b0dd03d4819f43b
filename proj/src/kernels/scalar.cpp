#include "hotstream/kernels.hpp"

#include <bit>
#include <limits>

namespace hotstream::kernels::scalar {

std::size_t count_below(std::span<const std::int64_t> values, std::int64_t threshold) {
    std::size_t n = 0;
    for (std::int64_t v : values) n += (v < threshold) ? 1 : 0;
    return n;
}

std::int64_t gather_min(std::span<const std::int64_t> values, std::span<const std::uint32_t> idx) {
    std::int64_t m = std::numeric_limits<std::int64_t>::max();
    for (std::uint32_t i : idx) {
        std::int64_t v = values[i];
        if (v < m) m = v;
    }
    return m;
}

std::size_t or_popcount(std::span<std::uint64_t> dst, std::span<const std::uint64_t> a,
                        std::span<const std::uint64_t> b) {
    std::size_t bits = 0;
    for (std::size_t k = 0; k < dst.size(); ++k) {
        dst[k] = a[k] | b[k];
        bits += static_cast<std::size_t>(std::popcount(dst[k]));
    }
    return bits;
}

} // namespace hotstream::kernels::scalar
