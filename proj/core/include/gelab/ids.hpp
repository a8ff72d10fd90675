#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>

namespace gelab {

/// Integer identifier that does not convert implicitly between domains.
template <class Tag, class Rep = std::int64_t>
struct StrongId {
  using rep_type = Rep;
  Rep value{};

  constexpr StrongId() = default;
  constexpr explicit StrongId(Rep v) : value(v) {}

  friend constexpr auto operator<=>(const StrongId&, const StrongId&) = default;
  friend std::ostream& operator<<(std::ostream& os, const StrongId& id) { return os << id.value; }
};

struct ItemTag {};
struct PlayerTag {};
struct OrderTag {};

using ItemId = StrongId<ItemTag>;
using PlayerId = StrongId<PlayerTag>;
using OrderId = StrongId<OrderTag>;

/// Gold pieces. Always integral; accounts and the coffer never hold a negative amount.
using Gp = std::int64_t;

}  // namespace gelab

template <class Tag, class Rep>
struct std::hash<gelab::StrongId<Tag, Rep>> {
  std::size_t operator()(const gelab::StrongId<Tag, Rep>& id) const noexcept {
    return std::hash<Rep>{}(id.value);
  }
};
