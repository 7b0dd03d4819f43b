// Compiled with -mavx2; only reached after a runtime CPU check.
#include "hotstream/kernels.hpp"

#include <immintrin.h>

#include <bit>
#include <limits>

namespace hotstream::kernels::avx2 {

namespace {

// Per-byte popcount via nibble lookup, summed into four 64-bit lanes.
inline __m256i popcount_epi64(__m256i v) {
    const __m256i lookup = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                            0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
    const __m256i low_mask = _mm256_set1_epi8(0x0f);
    __m256i lo = _mm256_and_si256(v, low_mask);
    __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
    __m256i cnt = _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo), _mm256_shuffle_epi8(lookup, hi));
    return _mm256_sad_epu8(cnt, _mm256_setzero_si256());
}

inline std::int64_t hmin_epi64(__m256i v) {
    alignas(32) std::int64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), v);
    std::int64_t m = lanes[0];
    for (int k = 1; k < 4; ++k)
        if (lanes[k] < m) m = lanes[k];
    return m;
}

} // namespace

std::size_t count_below(std::span<const std::int64_t> values, std::int64_t threshold) {
    const std::size_t n = values.size();
    const std::int64_t* p = values.data();
    const __m256i thr = _mm256_set1_epi64x(threshold);
    std::size_t count = 0;
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + k));
        __m256i lt = _mm256_cmpgt_epi64(thr, v);
        count += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(_mm256_movemask_pd(_mm256_castsi256_pd(lt)))));
    }
    for (; k < n; ++k) count += (p[k] < threshold) ? 1 : 0;
    return count;
}

std::int64_t gather_min(std::span<const std::int64_t> values, std::span<const std::uint32_t> idx) {
    const std::size_t n = idx.size();
    const auto* base = reinterpret_cast<const long long*>(values.data());
    __m256i acc = _mm256_set1_epi64x(std::numeric_limits<std::int64_t>::max());
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m128i vi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx.data() + k));
        __m256i g = _mm256_i32gather_epi64(base, vi, 8);
        __m256i gt = _mm256_cmpgt_epi64(acc, g);
        acc = _mm256_blendv_epi8(acc, g, gt);
    }
    std::int64_t m = hmin_epi64(acc);
    for (; k < n; ++k) {
        std::int64_t v = values[idx[k]];
        if (v < m) m = v;
    }
    return m;
}

std::size_t or_popcount(std::span<std::uint64_t> dst, std::span<const std::uint64_t> a,
                        std::span<const std::uint64_t> b) {
    const std::size_t n = dst.size();
    __m256i total = _mm256_setzero_si256();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a.data() + k));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b.data() + k));
        __m256i o = _mm256_or_si256(va, vb);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst.data() + k), o);
        total = _mm256_add_epi64(total, popcount_epi64(o));
    }
    alignas(32) std::uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), total);
    std::size_t bits = static_cast<std::size_t>(lanes[0] + lanes[1] + lanes[2] + lanes[3]);
    for (; k < n; ++k) {
        dst[k] = a[k] | b[k];
        bits += static_cast<std::size_t>(std::popcount(dst[k]));
    }
    return bits;
}

} // namespace hotstream::kernels::avx2
