#include "stablecut/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "stablecut/rotations.hpp"

namespace stablecut {

Matching::Matching(Permutation partner_of_woman)
    : women_to_men_(partner_of_woman), men_to_women_(partner_of_woman.inverse()) {}

StableCount StableCount::from_value(BigInt v) {
    if (v < 0) throw BadParameter("count cannot be negative");
    StableCount out{std::move(v), 0.0};
    if (out.value == 0) {
        out.log_value = -std::numeric_limits<double>::infinity();
        return out;
    }
    const unsigned bits = boost::multiprecision::msb(out.value) + 1;
    if (bits <= 900) {
        out.log_value = std::log(out.value.convert_to<double>());
    } else {
        const BigInt top = out.value >> (bits - 64);
        out.log_value = std::log(top.convert_to<double>()) + static_cast<double>(bits - 64) * std::log(2.0);
    }
    return out;
}

bool is_blocking_pair(const PreferenceStructure& prefs, const Matching& matching, int w, int m) {
    if (matching.domain() != prefs.domain()) throw DomainMismatch("matching and preferences disagree on domain");
    const int cur_m = matching.partner_of_woman(w);
    const int cur_w = matching.partner_of_man(m);
    if (cur_m == m) return false;
    return prefers(prefs, {w, Role::Woman}, m, cur_m) && prefers(prefs, {m, Role::Man}, w, cur_w);
}

bool is_stable(const PreferenceStructure& prefs, const Matching& matching) {
    const Interval dom = prefs.domain();
    for (int w = dom.lo; w <= dom.hi; ++w)
        for (int m = dom.lo; m <= dom.hi; ++m)
            if (is_blocking_pair(prefs, matching, w, m)) return false;
    return true;
}

Matching gale_shapley(const PreferenceStructure& prefs, Role proposing) {
    const Interval dom = prefs.domain();
    const int n = dom.size();
    const int lo = dom.lo;
    const Role receiving = proposing == Role::Woman ? Role::Man : Role::Woman;

    // order[p][k]: the k-th most desirable candidate of proposer p (0-based).
    std::vector<std::vector<int>> order(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n)));
    std::vector<std::vector<int>> recv_rank(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n)));
    for (int k = 0; k < n; ++k) {
        const Permutation inv = prefs.ranking({lo + k, proposing}).inverse();
        for (int r = 0; r < n; ++r) order[static_cast<size_t>(k)][static_cast<size_t>(r)] = inv(dom.hi - r) - lo;
        const Permutation& rr = prefs.ranking({lo + k, receiving});
        for (int c = 0; c < n; ++c) recv_rank[static_cast<size_t>(k)][static_cast<size_t>(c)] = rr(lo + c);
    }

    std::vector<int> next(static_cast<size_t>(n), 0);
    std::vector<int> partner_of_receiver(static_cast<size_t>(n), -1);
    std::priority_queue<int, std::vector<int>, std::greater<int>> free;  // lowest index proposes first
    for (int p = 0; p < n; ++p) free.push(p);

    while (!free.empty()) {
        const int p = free.top();
        free.pop();
        const int r = order[static_cast<size_t>(p)][static_cast<size_t>(next[static_cast<size_t>(p)]++)];
        const int held = partner_of_receiver[static_cast<size_t>(r)];
        if (held < 0) {
            partner_of_receiver[static_cast<size_t>(r)] = p;
        } else if (recv_rank[static_cast<size_t>(r)][static_cast<size_t>(p)] >
                   recv_rank[static_cast<size_t>(r)][static_cast<size_t>(held)]) {
            partner_of_receiver[static_cast<size_t>(r)] = p;
            free.push(held);
        } else {
            free.push(p);
        }
    }

    std::vector<int> partner_of_woman(static_cast<size_t>(n));
    if (proposing == Role::Woman) {
        // receiver = man; invert to get each woman's partner
        for (int m = 0; m < n; ++m) partner_of_woman[static_cast<size_t>(partner_of_receiver[static_cast<size_t>(m)])] = lo + m;
    } else {
        for (int w = 0; w < n; ++w) partner_of_woman[static_cast<size_t>(w)] = lo + partner_of_receiver[static_cast<size_t>(w)];
    }
    return Matching(Permutation(dom, std::move(partner_of_woman)));
}

std::vector<Matching> brute_force_stable(const PreferenceStructure& prefs) {
    const Interval dom = prefs.domain();
    if (dom.size() > 8) throw TooLarge("exhaustive stable-matching scan limited to size 8");
    std::vector<int> partner(static_cast<size_t>(dom.size()));
    std::iota(partner.begin(), partner.end(), dom.lo);
    std::vector<Matching> out;
    do {
        Matching m{Permutation(dom, partner)};
        if (is_stable(prefs, m)) out.push_back(std::move(m));
    } while (std::next_permutation(partner.begin(), partner.end()));
    return out;  // next_permutation yields partner arrays in lexicographic order
}

std::vector<std::pair<int, int>> stable_pairs(const PreferenceStructure& prefs, Budget* budget) {
    Budget local(kDefaultBudget);
    Budget& b = budget ? *budget : local;
    const RotationPoset poset = build_rotation_poset(prefs, b);
    std::vector<std::pair<int, int>> pairs;
    const Interval dom = prefs.domain();
    for (int w = dom.lo; w <= dom.hi; ++w) pairs.emplace_back(w, poset.men_optimal.partner_of_woman(w));
    for (const Rotation& rot : poset.rotations)
        for (const auto& p : rot.created) pairs.push_back(p);
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    return pairs;
}

std::vector<Matching> enumerate_stable(const PreferenceStructure& prefs, std::uint64_t limit, Budget* budget) {
    Budget local(kDefaultBudget);
    Budget& b = budget ? *budget : local;
    const RotationPoset poset = build_rotation_poset(prefs, b);
    // Every elimination prefix is its own stable matching, so the count is
    // at least R + 1; bail out before enumerating when that already busts.
    if (static_cast<std::uint64_t>(poset.size()) + 1 > limit)
        throw LimitExceeded("more than " + std::to_string(limit) + " stable matchings");
    std::vector<Matching> out;
    bool completed = for_each_downset(poset, b, [&](const std::vector<int>& downset) {
        if (out.size() >= limit) return false;
        out.push_back(apply_rotations(poset, downset));
        return true;
    });
    if (!completed) throw LimitExceeded("more than " + std::to_string(limit) + " stable matchings");
    std::sort(out.begin(), out.end(), [](const Matching& a, const Matching& b2) {
        return a.as_permutation().values() < b2.as_permutation().values();
    });
    return out;
}

StableCount count_stable(const PreferenceStructure& prefs, Budget* budget) {
    Budget local(kDefaultBudget);
    Budget& b = budget ? *budget : local;
    const RotationPoset poset = build_rotation_poset(prefs, b);
    return StableCount::from_value(count_downsets(poset, b));
}

}  // namespace stablecut
