#pragma once

#include <algorithm>
#include <climits>
#include <string>

#include "stretch/core.hpp"
#include "stretch/lower_game.hpp"

namespace stretch::detail {

inline constexpr int kMinusInf = INT_MIN / 4;
inline constexpr int kPlusInf = INT_MAX / 4;

inline std::string state_key(const LoadVector& loads, const ItemMultiset& sent) {
    std::string key;
    key.reserve(loads.size() * 2 + 32);
    append_key(key, loads);
    sent.append_key(key);
    return key;
}

inline ValueBounds merge_bounds(const ValueBounds& a, const ValueBounds& b) {
    return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

}  // namespace stretch::detail
