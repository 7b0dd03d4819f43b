#include "hotstream/group_counters.hpp"

#include "hotstream/error.hpp"
#include "hotstream/kernels.hpp"

#include <array>
#include <istream>
#include <numeric>
#include <ostream>

namespace hotstream {

namespace {

void put_u64(std::ostream& os, std::uint64_t v) {
    std::array<char, 8> b{};
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(b.data(), 8);
}

std::uint64_t get_u64(std::istream& is) {
    std::array<char, 8> b{};
    if (!is.read(b.data(), 8)) throw Error(ErrorCode::io_error, "truncated counter snapshot");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i])) << (8 * i);
    return v;
}

} // namespace

void GroupCounterTable::apply(const Disperser& d, const StreamOperation& op) {
    std::vector<std::uint32_t> slots(d.degree());
    d.neighbors(op.element, slots);
    apply_slots(slots, op.kind);
}

void GroupCounterTable::apply_slots(std::span<const std::uint32_t> slots, OpKind kind) {
    const std::int64_t delta = kind == OpKind::insert ? 1 : -1;
    kernels::scatter_add(counts_, slots, delta);
    if (check_integrity_ && kind == OpKind::remove) {
        for (std::uint32_t s : slots) {
            if (counts_[s] < 0)
                throw Error(ErrorCode::integrity_violation,
                            "group counter " + std::to_string(s) + " went negative");
        }
    }
}

std::int64_t GroupCounterTable::min_counter(const Disperser& d, ElementId x) const {
    std::vector<std::uint32_t> slots(d.degree());
    d.neighbors(x, slots);
    return min_over(slots);
}

std::int64_t GroupCounterTable::min_over(std::span<const std::uint32_t> slots) const {
    return kernels::active().gather_min(counts_, slots);
}

std::size_t GroupCounterTable::count_below(std::int64_t threshold) const {
    return kernels::active().count_below(counts_, threshold);
}

std::int64_t GroupCounterTable::sum() const noexcept {
    return std::accumulate(counts_.begin(), counts_.end(), std::int64_t{0});
}

void GroupCounterTable::write_snapshot(std::ostream& os) const {
    put_u64(os, counts_.size());
    for (std::int64_t v : counts_) put_u64(os, static_cast<std::uint64_t>(v));
}

GroupCounterTable GroupCounterTable::read_snapshot(std::istream& is) {
    const std::uint64_t n = get_u64(is);
    if (n > (std::uint64_t{1} << 31)) throw Error(ErrorCode::io_error, "snapshot length out of range");
    GroupCounterTable t(n);
    for (auto& v : t.counts_) v = static_cast<std::int64_t>(get_u64(is));
    return t;
}

} // namespace hotstream
