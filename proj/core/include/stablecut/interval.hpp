#pragma once

#include <string>

#include "stablecut/errors.hpp"

namespace stablecut {

/// Closed integer interval [lo, hi].  The interval is empty iff lo > hi;
/// the canonical empty interval is [0, -1].  Sizes are capped at 2^20.
struct Interval {
    int lo = 0;
    int hi = -1;

    static constexpr int kMaxSize = 1 << 20;

    Interval() = default;

    Interval(int lo_, int hi_) : lo(lo_), hi(hi_) {
        if (lo > hi) {  // normalize every empty interval to the canonical one
            lo = 0;
            hi = -1;
            return;
        }
        if (static_cast<long long>(hi) - lo + 1 > kMaxSize)
            throw TooLarge("interval [" + std::to_string(lo_) + ", " + std::to_string(hi_) +
                           "] exceeds the size cap");
    }

    static Interval empty() { return {}; }

    bool is_empty() const { return lo > hi; }
    int size() const { return is_empty() ? 0 : hi - lo + 1; }
    bool contains(int k) const { return lo <= k && k <= hi; }
    bool contains(const Interval& sub) const { return sub.is_empty() || (lo <= sub.lo && sub.hi <= hi); }

    bool operator==(const Interval&) const = default;

    std::string str() const {
        if (is_empty()) return "[]";
        return "[" + std::to_string(lo) + ", " + std::to_string(hi) + "]";
    }
};

}  // namespace stablecut
