#pragma once

#include "hotstream/disperser.hpp"
#include "hotstream/stream_op.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace hotstream {

/// One signed 64-bit counter per right vertex of the disperser.
///
/// Each counter is the net number of processed occurrences of all elements in
/// its group, counted once per occurrence of the slot in an element's neighbor
/// list. Counters stay signed so a stream that breaks the integrity constraint
/// shows up as a negative value instead of wrapping around.
class GroupCounterTable {
public:
    explicit GroupCounterTable(std::uint64_t w_size) : counts_(w_size, 0) {}

    std::size_t size() const noexcept { return counts_.size(); }
    std::span<const std::int64_t> counts() const noexcept { return counts_; }
    std::int64_t operator[](std::size_t i) const { return counts_[i]; }

    /// With checking on, a decrement that drives a slot below zero throws
    /// Error(integrity_violation).
    void set_integrity_checks(bool on) noexcept { check_integrity_ = on; }
    bool integrity_checks() const noexcept { return check_integrity_; }

    void apply(const Disperser& d, const StreamOperation& op);
    /// Same as apply() with the neighbor list already computed.
    void apply_slots(std::span<const std::uint32_t> slots, OpKind kind);

    std::int64_t min_counter(const Disperser& d, ElementId x) const;
    std::int64_t min_over(std::span<const std::uint32_t> slots) const;

    std::size_t count_below(std::int64_t threshold) const;

    std::int64_t sum() const noexcept;

    /// Length-prefixed little-endian snapshot: u64 length, then length i64 values.
    void write_snapshot(std::ostream& os) const;
    static GroupCounterTable read_snapshot(std::istream& is);

    /// Test hook: overwrite one slot.
    void poke(std::size_t slot, std::int64_t value) { counts_.at(slot) = value; }

    friend bool operator==(const GroupCounterTable&, const GroupCounterTable&) = default;

private:
    std::vector<std::int64_t> counts_;
    bool check_integrity_ = true;
};

} // namespace hotstream
