#pragma once

#include <cstdint>

namespace hotstream {

using ElementId = std::uint64_t;

enum class OpKind : std::uint8_t { insert, remove };

struct StreamOperation {
    OpKind kind = OpKind::insert;
    ElementId element = 0;

    static constexpr StreamOperation ins(ElementId x) noexcept { return {OpKind::insert, x}; }
    static constexpr StreamOperation del(ElementId x) noexcept { return {OpKind::remove, x}; }

    constexpr std::int64_t sign() const noexcept { return kind == OpKind::insert ? 1 : -1; }

    friend constexpr bool operator==(const StreamOperation&, const StreamOperation&) = default;
};

} // namespace hotstream
