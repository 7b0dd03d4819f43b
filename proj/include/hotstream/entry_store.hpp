#pragma once

#include "hotstream/disperser.hpp"
#include "hotstream/group_counters.hpp"
#include "hotstream/stream_op.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace hotstream {

/// Counters of one individual entry as returned by EntryStore::check.
struct EntryCounters {
    std::int64_t c = 0;      ///< candidate counter
    std::int64_t r = 0;      ///< recent counter
    std::int64_t lambda = 0; ///< pending operations on this key

    std::int64_t total() const noexcept { return c + r; }
    friend bool operator==(const EntryCounters&, const EntryCounters&) = default;
};

/// Exact per-element bookkeeping for candidates and recently touched elements.
///
/// Two linked balanced trees: the primary tree is keyed by element id and owns
/// the counters; the secondary tree orders (c + r, id) by decreasing total with
/// ascending id on ties, and each primary node keeps an iterator to its
/// secondary node so a counter change re-keys it in O(log size).
class EntryStore {
public:
    std::optional<EntryCounters> check(ElementId x) const;
    bool contains(ElementId x) const { return primary_.count(x) != 0; }
    std::size_t size() const noexcept { return primary_.size(); }
    bool empty() const noexcept { return primary_.empty(); }

    /// Inserts <x, 0, 0, 0>. Throws Error(duplicate_key) if x is present.
    void add(ElementId x);

    /// lambda += 1 and r += sign(op); creates the entry if missing.
    void apply_recent(const StreamOperation& op);
    /// Exact inverse of apply_recent. Throws missing_entry / lambda_underflow.
    void rollback_recent(const StreamOperation& op);
    /// c += sign(op). Throws missing_entry.
    void apply_candidate(const StreamOperation& op);

    /// Removes x iff lambda(x) == 0 and min group counter of x < s.
    bool remove_if_small(ElementId x, std::int64_t s, const GroupCounterTable& table, const Disperser& d);
    /// Same, reusing a caller buffer of size d for the neighbor list.
    bool remove_if_small(ElementId x, std::int64_t s, const GroupCounterTable& table, const Disperser& d,
                         std::span<std::uint32_t> scratch);

    /// Keys with c + r > s, by decreasing c + r, ties by ascending key.
    std::vector<ElementId> get_larger_than(std::int64_t s) const;

    /// Keys in ascending order.
    std::vector<ElementId> keys() const;

    template <typename F>
    void for_each(F&& f) const {
        for (const auto& [key, e] : primary_) f(key, EntryCounters{e.c, e.r, e.lambda});
    }

    std::int64_t total_lambda() const noexcept;

    /// Debug dump, one "key c r lambda" line per entry in key order.
    void dump(std::ostream& os) const;

    /// Empty string when both trees agree; otherwise a description of the mismatch.
    std::string consistency_error() const;

private:
    struct RankKey {
        std::int64_t total;
        ElementId key;
    };
    struct RankOrder {
        bool operator()(const RankKey& a, const RankKey& b) const noexcept {
            return a.total != b.total ? a.total > b.total : a.key < b.key;
        }
    };
    using Secondary = std::set<RankKey, RankOrder>;

    struct Entry {
        std::int64_t c = 0;
        std::int64_t r = 0;
        std::int64_t lambda = 0;
        Secondary::iterator rank;
    };
    using Primary = std::map<ElementId, Entry>;

    Primary::iterator find_or_throw(ElementId x, const char* op);
    Primary::iterator insert_fresh(ElementId x);
    void rekey(ElementId x, Entry& e);

    Primary primary_;
    Secondary secondary_;
};

} // namespace hotstream
