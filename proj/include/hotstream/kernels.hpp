#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

/// Data-parallel inner loops of the sketch.
///
/// Every kernel has a scalar reference version; an AVX2 version is compiled in
/// a separate translation unit on x86-64 and chosen at runtime when the CPU
/// supports it. The environment variable HOTSTREAM_ISA=scalar pins the scalar
/// path. Both paths must return identical results (see test_kernels).
namespace hotstream::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa) noexcept;

struct KernelTable {
    /// Number of values strictly below `threshold`.
    std::size_t (*count_below)(std::span<const std::int64_t> values, std::int64_t threshold);
    /// min over values[idx[k]]; idx must be non-empty and in range.
    std::int64_t (*gather_min)(std::span<const std::int64_t> values, std::span<const std::uint32_t> idx);
    /// dst = a | b word-wise, returns popcount(dst). All three spans have equal length.
    std::size_t (*or_popcount)(std::span<std::uint64_t> dst, std::span<const std::uint64_t> a,
                               std::span<const std::uint64_t> b);
};

bool supported(Isa isa) noexcept;
const KernelTable& table_for(Isa isa);

/// Table selected for this process (best supported ISA unless overridden).
const KernelTable& active() noexcept;
Isa active_isa() noexcept;
/// Switches the process-wide selection; throws if `isa` is unsupported.
void force(Isa isa);

/// values[idx[k]] += delta for each k, duplicates applied once per occurrence.
/// AVX2 has no scatter, so this stays scalar on every ISA.
void scatter_add(std::span<std::int64_t> values, std::span<const std::uint32_t> idx, std::int64_t delta) noexcept;

namespace scalar {
std::size_t count_below(std::span<const std::int64_t> values, std::int64_t threshold);
std::int64_t gather_min(std::span<const std::int64_t> values, std::span<const std::uint32_t> idx);
std::size_t or_popcount(std::span<std::uint64_t> dst, std::span<const std::uint64_t> a,
                        std::span<const std::uint64_t> b);
} // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define HOTSTREAM_HAVE_AVX2_KERNELS 1
namespace avx2 {
std::size_t count_below(std::span<const std::int64_t> values, std::int64_t threshold);
std::int64_t gather_min(std::span<const std::int64_t> values, std::span<const std::uint32_t> idx);
std::size_t or_popcount(std::span<std::uint64_t> dst, std::span<const std::uint64_t> a,
                        std::span<const std::uint64_t> b);
} // namespace avx2
#endif

} // namespace hotstream::kernels
