#pragma once

// Map-based reference for the entry store and a randomized differential driver.

#include "hotstream/disperser.hpp"
#include "hotstream/entry_store.hpp"
#include "hotstream/error.hpp"
#include "hotstream/group_counters.hpp"
#include "hotstream/random.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <optional>
#include <string>
#include <vector>

namespace hotstream::testing {

class NaiveEntryStore {
public:
    std::optional<EntryCounters> check(ElementId x) const {
        auto it = m_.find(x);
        if (it == m_.end()) return std::nullopt;
        return it->second;
    }
    std::size_t size() const { return m_.size(); }
    void add(ElementId x) {
        if (m_.count(x)) throw Error(ErrorCode::duplicate_key, "dup");
        m_[x] = {};
    }
    void apply_recent(const StreamOperation& op) {
        auto& e = m_[op.element];
        e.lambda += 1;
        e.r += op.sign();
    }
    void rollback_recent(const StreamOperation& op) {
        auto it = m_.find(op.element);
        if (it == m_.end()) throw Error(ErrorCode::missing_entry, "missing");
        if (it->second.lambda < 1) throw Error(ErrorCode::lambda_underflow, "underflow");
        it->second.lambda -= 1;
        it->second.r -= op.sign();
    }
    void apply_candidate(const StreamOperation& op) {
        auto it = m_.find(op.element);
        if (it == m_.end()) throw Error(ErrorCode::missing_entry, "missing");
        it->second.c += op.sign();
    }
    bool remove_if_small(ElementId x, std::int64_t s, const GroupCounterTable& table, const Disperser& d) {
        auto it = m_.find(x);
        if (it == m_.end()) throw Error(ErrorCode::missing_entry, "missing");
        if (it->second.lambda != 0) return false;
        std::int64_t mn = INT64_MAX;
        for (auto r : d.neighbors(x)) mn = std::min(mn, table[r]);
        if (mn >= s) return false;
        m_.erase(it);
        return true;
    }
    std::vector<ElementId> get_larger_than(std::int64_t s) const {
        std::vector<std::pair<std::int64_t, ElementId>> v;
        for (const auto& [k, e] : m_)
            if (e.total() > s) v.push_back({-e.total(), k});
        std::sort(v.begin(), v.end());
        std::vector<ElementId> out;
        for (const auto& p : v) out.push_back(p.second);
        return out;
    }

private:
    std::map<ElementId, EntryCounters> m_;
};

/// Runs one random sequence of all eight operations against both stores.
/// Returns a description of the first mismatch, or nullopt.
inline std::optional<std::string> entry_store_trial(std::uint64_t seed, const Disperser& d) {
    SplitMix64 rng(seed);
    EntryStore real;
    NaiveEntryStore ref;
    GroupCounterTable table(d.w_size());
    for (std::size_t i = 0; i < table.size(); ++i) table.poke(i, static_cast<std::int64_t>(rng.below(5)));

    // kinds applied with apply_recent and not yet rolled back, per key
    std::unordered_map<ElementId, std::vector<OpKind>> pending;
    const std::uint64_t keys = 2 + rng.below(30);
    const std::uint64_t length = 1 + rng.below(80);
    for (std::uint64_t step = 0; step < length; ++step) {
        const ElementId x = rng.below(std::min<std::uint64_t>(keys, d.params().n));
        StreamOperation op = rng.below(2) ? StreamOperation::ins(x) : StreamOperation::del(x);
        const std::uint64_t which = rng.below(8);
        auto& mine = pending[x];
        if (which == 3 && !mine.empty()) {
            const std::size_t k = rng.below(mine.size());
            op.kind = mine[k];
            mine.erase(mine.begin() + static_cast<std::ptrdiff_t>(k));
        } else if (which == 2) {
            mine.push_back(op.kind);
        }
        const std::string where = "seed=" + std::to_string(seed) + " step=" + std::to_string(step) +
                                  " op#" + std::to_string(which) + " x=" + std::to_string(x);

        // returns the error code, or -1 when the call succeeded
        auto guarded = [](auto&& f) -> int {
            try {
                f();
                return -1;
            } catch (const Error& e) {
                return static_cast<int>(e.code());
            }
        };
        int a = -1, b = -1;
        switch (which) {
        case 0:
            if (real.check(x) != ref.check(x)) return where + " check differs";
            break;
        case 1:
            a = guarded([&] { real.add(x); });
            b = guarded([&] { ref.add(x); });
            break;
        case 2:
            real.apply_recent(op);
            ref.apply_recent(op);
            break;
        case 3:
            a = guarded([&] { real.rollback_recent(op); });
            b = guarded([&] { ref.rollback_recent(op); });
            break;
        case 4:
            a = guarded([&] { real.apply_candidate(op); });
            b = guarded([&] { ref.apply_candidate(op); });
            break;
        case 5: {
            const auto s = static_cast<std::int64_t>(rng.below(6));
            bool ra = false, rb = false;
            a = guarded([&] { ra = real.remove_if_small(x, s, table, d); });
            b = guarded([&] { rb = ref.remove_if_small(x, s, table, d); });
            if (ra != rb) return where + " remove_if_small result differs";
            break;
        }
        case 6: {
            const auto s = static_cast<std::int64_t>(rng.below(7)) - 3;
            if (real.get_larger_than(s) != ref.get_larger_than(s)) return where + " get_larger_than differs";
            break;
        }
        case 7:
            if (real.size() != ref.size()) return where + " size differs";
            break;
        }
        if (a != b) return where + " error outcome differs";
        if (auto err = real.consistency_error(); !err.empty()) return where + " " + err;
    }
    for (ElementId x = 0; x < keys && x < d.params().n; ++x)
        if (real.check(x) != ref.check(x)) return "seed=" + std::to_string(seed) + " final state differs";
    if (real.get_larger_than(INT64_MIN) != ref.get_larger_than(INT64_MIN))
        return "seed=" + std::to_string(seed) + " final order differs";
    return std::nullopt;
}

} // namespace hotstream::testing
