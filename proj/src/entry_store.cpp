#include "hotstream/entry_store.hpp"

#include "hotstream/error.hpp"

#include <ostream>
#include <sstream>

namespace hotstream {

std::optional<EntryCounters> EntryStore::check(ElementId x) const {
    auto it = primary_.find(x);
    if (it == primary_.end()) return std::nullopt;
    return EntryCounters{it->second.c, it->second.r, it->second.lambda};
}

EntryStore::Primary::iterator EntryStore::insert_fresh(ElementId x) {
    auto [it, inserted] = primary_.try_emplace(x);
    if (!inserted) throw Error(ErrorCode::duplicate_key, "entry " + std::to_string(x) + " already present");
    it->second.rank = secondary_.insert(RankKey{0, x}).first;
    return it;
}

void EntryStore::add(ElementId x) {
    insert_fresh(x);
}

EntryStore::Primary::iterator EntryStore::find_or_throw(ElementId x, const char* op) {
    auto it = primary_.find(x);
    if (it == primary_.end())
        throw Error(ErrorCode::missing_entry, std::string(op) + " on absent key " + std::to_string(x));
    return it;
}

void EntryStore::rekey(ElementId x, Entry& e) {
    auto node = secondary_.extract(e.rank);
    node.value() = RankKey{e.c + e.r, x};
    e.rank = secondary_.insert(std::move(node)).position;
}

void EntryStore::apply_recent(const StreamOperation& op) {
    auto it = primary_.find(op.element);
    if (it == primary_.end()) it = insert_fresh(op.element);
    Entry& e = it->second;
    e.lambda += 1;
    e.r += op.sign();
    rekey(op.element, e);
}

void EntryStore::rollback_recent(const StreamOperation& op) {
    Entry& e = find_or_throw(op.element, "rollback_recent")->second;
    if (e.lambda < 1)
        throw Error(ErrorCode::lambda_underflow, "rollback_recent with lambda 0 on key " + std::to_string(op.element));
    e.lambda -= 1;
    e.r -= op.sign();
    rekey(op.element, e);
}

void EntryStore::apply_candidate(const StreamOperation& op) {
    Entry& e = find_or_throw(op.element, "apply_candidate")->second;
    e.c += op.sign();
    rekey(op.element, e);
}

bool EntryStore::remove_if_small(ElementId x, std::int64_t s, const GroupCounterTable& table, const Disperser& d) {
    std::vector<std::uint32_t> scratch(d.degree());
    return remove_if_small(x, s, table, d, scratch);
}

bool EntryStore::remove_if_small(ElementId x, std::int64_t s, const GroupCounterTable& table, const Disperser& d,
                                 std::span<std::uint32_t> scratch) {
    auto it = find_or_throw(x, "remove_if_small");
    if (it->second.lambda != 0) return false;
    d.neighbors(x, scratch);
    if (table.min_over(scratch) >= s) return false;
    secondary_.erase(it->second.rank);
    primary_.erase(it);
    return true;
}

std::vector<ElementId> EntryStore::get_larger_than(std::int64_t s) const {
    std::vector<ElementId> out;
    for (const RankKey& rk : secondary_) {
        if (rk.total <= s) break;
        out.push_back(rk.key);
    }
    return out;
}

std::vector<ElementId> EntryStore::keys() const {
    std::vector<ElementId> out;
    out.reserve(primary_.size());
    for (const auto& kv : primary_) out.push_back(kv.first);
    return out;
}

std::int64_t EntryStore::total_lambda() const noexcept {
    std::int64_t sum = 0;
    for (const auto& kv : primary_) sum += kv.second.lambda;
    return sum;
}

void EntryStore::dump(std::ostream& os) const {
    for (const auto& [key, e] : primary_) os << key << ' ' << e.c << ' ' << e.r << ' ' << e.lambda << '\n';
}

std::string EntryStore::consistency_error() const {
    std::ostringstream os;
    if (primary_.size() != secondary_.size())
        os << "tree sizes differ: " << primary_.size() << " vs " << secondary_.size() << "; ";
    for (const auto& [key, e] : primary_) {
        if (e.rank->key != key || e.rank->total != e.c + e.r)
            os << "key " << key << " indexed as (" << e.rank->total << ", " << e.rank->key << "); ";
        if (e.lambda < 0) os << "key " << key << " has negative lambda; ";
        if ((e.r < 0 ? -e.r : e.r) > e.lambda) os << "key " << key << " has |r| > lambda; ";
    }
    for (const RankKey& rk : secondary_) {
        auto it = primary_.find(rk.key);
        if (it == primary_.end()) os << "secondary key " << rk.key << " has no primary entry; ";
    }
    return os.str();
}

} // namespace hotstream
