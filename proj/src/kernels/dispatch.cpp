#include "hotstream/error.hpp"
#include "hotstream/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace hotstream::kernels {

namespace {

constexpr KernelTable kScalar{&scalar::count_below, &scalar::gather_min, &scalar::or_popcount};

#ifdef HOTSTREAM_HAVE_AVX2_KERNELS
constexpr KernelTable kAvx2{&avx2::count_below, &avx2::gather_min, &avx2::or_popcount};
#endif

Isa detect() noexcept {
    if (const char* env = std::getenv("HOTSTREAM_ISA"); env && std::string(env) == "scalar") return Isa::scalar;
    return supported(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

std::atomic<const KernelTable*> g_active{nullptr};
std::atomic<Isa> g_isa{Isa::scalar};

} // namespace

std::string_view to_string(Isa isa) noexcept {
    return isa == Isa::avx2 ? "avx2" : "scalar";
}

bool supported(Isa isa) noexcept {
    if (isa == Isa::scalar) return true;
#ifdef HOTSTREAM_HAVE_AVX2_KERNELS
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const KernelTable& table_for(Isa isa) {
    if (!supported(isa))
        throw Error(ErrorCode::invalid_params, "ISA " + std::string(to_string(isa)) + " not supported on this CPU");
#ifdef HOTSTREAM_HAVE_AVX2_KERNELS
    if (isa == Isa::avx2) return kAvx2;
#endif
    return kScalar;
}

const KernelTable& active() noexcept {
    const KernelTable* t = g_active.load(std::memory_order_acquire);
    if (t == nullptr) {
        Isa isa = detect();
        t = &table_for(isa);
        g_isa.store(isa, std::memory_order_relaxed);
        g_active.store(t, std::memory_order_release);
    }
    return *t;
}

Isa active_isa() noexcept {
    active();
    return g_isa.load(std::memory_order_relaxed);
}

void force(Isa isa) {
    const KernelTable* t = &table_for(isa);
    g_isa.store(isa, std::memory_order_relaxed);
    g_active.store(t, std::memory_order_release);
}

void scatter_add(std::span<std::int64_t> values, std::span<const std::uint32_t> idx, std::int64_t delta) noexcept {
    for (std::uint32_t i : idx) values[i] += delta;
}

} // namespace hotstream::kernels
