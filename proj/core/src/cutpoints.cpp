#include "stablecut/cutpoints.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace stablecut {

namespace {

/// 2 * (|i - s| + |j - s|) for s = c + 1/2, an exact odd-sum integer.
/// The bound "x < (|i-s| + |j-s|) / 20" is equivalent to
/// "40 x < |2i-2c-1| + |2j-2c-1|" and is decided without rounding.
long long threshold_doubled(int i, int j, int c) {
    return std::llabs(2LL * i - 2LL * c - 1) + std::llabs(2LL * j - 2LL * c - 1);
}

long long floor_div(long long a, long long b) {  // b > 0
    return a >= 0 ? a / b : -((-a + b - 1) / b);
}

long long ceil_div(long long a, long long b) {  // b > 0
    return a >= 0 ? (a + b - 1) / b : -((-a) / b);
}

/// Statistic table for one instance: stat[role][person0][pos0].
using StatTable = std::array<std::vector<std::vector<int>>, 2>;

StatTable offset_table(const PreferenceStructure& prefs) {
    const int n = prefs.size();
    StatTable t;
    for (int g = 0; g < 2; ++g) t[static_cast<size_t>(g)].resize(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        t[0][static_cast<size_t>(k)] = all_offsets(prefs.woman_ranking(prefs.domain().lo + k));
        t[1][static_cast<size_t>(k)] = all_offsets(prefs.man_ranking(prefs.domain().lo + k));
    }
    return t;
}

StatTable displacement_table(const PreferenceStructure& prefs) {
    const int n = prefs.size();
    const int lo = prefs.domain().lo;
    StatTable t;
    for (int g = 0; g < 2; ++g) t[static_cast<size_t>(g)].resize(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        for (int g = 0; g < 2; ++g) {
            const Permutation& r = g == 0 ? prefs.woman_ranking(lo + k) : prefs.man_ranking(lo + k);
            std::vector<int> d(static_cast<size_t>(n));
            for (int p = 0; p < n; ++p) d[static_cast<size_t>(p)] = std::abs(r(lo + p) - (lo + p));
            t[static_cast<size_t>(g)][static_cast<size_t>(k)] = std::move(d);
        }
    }
    return t;
}

bool bound_ok(const PreferenceStructure& prefs, const StatTable& stat, int c) {
    const int n = prefs.size();
    const int lo = prefs.domain().lo;
    for (int g = 0; g < 2; ++g)
        for (int k = 0; k < n; ++k) {
            const auto& row = stat[static_cast<size_t>(g)][static_cast<size_t>(k)];
            for (int p = 0; p < n; ++p) {
                const int x = row[static_cast<size_t>(p)];
                if (x == 0) continue;  // threshold is always positive
                if (40LL * x >= threshold_doubled(lo + k, lo + p, c)) return false;
            }
        }
    return true;
}

/// Interior cut positions where every statistic obeys the 1/20 bound.
/// Each nonzero statistic x at (person i, position j) forbids the integer
/// range of c with |2i-2c-1| + |2j-2c-1| <= 40 x, which is contiguous.
std::vector<int> certified_from(const PreferenceStructure& prefs, const StatTable& stat) {
    const Interval dom = prefs.domain();
    const int n = dom.size();
    const int lo = dom.lo;
    if (n < 2) return {};
    std::vector<int> forbidden(static_cast<size_t>(n), 0);  // diff array over c = lo .. hi-1
    const auto mark = [&](int from, int to) {  // clamp to interior positions
        from = std::max(from, lo);
        to = std::min(to, dom.hi - 1);
        if (from > to) return;
        forbidden[static_cast<size_t>(from - lo)] += 1;
        if (to + 1 <= dom.hi - 1) forbidden[static_cast<size_t>(to + 1 - lo)] -= 1;
    };
    for (int g = 0; g < 2; ++g)
        for (int k = 0; k < n; ++k) {
            const auto& row = stat[static_cast<size_t>(g)][static_cast<size_t>(k)];
            const int i = lo + k;
            for (int p = 0; p < n; ++p) {
                const int x = row[static_cast<size_t>(p)];
                if (x == 0) continue;
                const int j = lo + p;
                if (2LL * std::abs(i - j) > 40LL * x) continue;  // no c is forbidden
                // |2i-2c-1| + |2j-2c-1| <= 40x  <=>  both linear branches hold:
                //   2(i+j) - 4c - 2 <= 40x  and  4c + 2 - 2(i+j) <= 40x
                const long long s2 = 2LL * (i + j);
                const long long cmin = ceil_div(s2 - 2 - 40LL * x, 4);
                const long long cmax = floor_div(40LL * x - 2 + s2, 4);
                mark(static_cast<int>(std::max<long long>(cmin, lo)), static_cast<int>(std::min<long long>(cmax, dom.hi - 1)));
            }
        }
    std::vector<int> cuts;
    int acc = 0;
    for (int c = lo; c <= dom.hi - 1; ++c) {
        acc += forbidden[static_cast<size_t>(c - lo)];
        if (acc == 0) cuts.push_back(c);
    }
    return cuts;
}

}  // namespace

StableCount BlockDecomposition::total() const {
    BigInt v = 1;
    for (const StableCount& c : per_block) v *= c.value;
    return StableCount::from_value(std::move(v));
}

bool rank_displacement_ok(const PreferenceStructure& prefs, CutPosition cut) {
    return bound_ok(prefs, displacement_table(prefs), cut.c);
}

bool lattice_bound_ok(const PreferenceStructure& prefs, CutPosition cut) {
    return bound_ok(prefs, offset_table(prefs), cut.c);
}

std::vector<int> certified_cuts(const PreferenceStructure& prefs) {
    return certified_from(prefs, offset_table(prefs));
}

namespace {

/// (b) of the exact test: some woman and man on opposite sides of c prefer
/// each other to their pessimal stable partners within their own sides.
bool crossing_block_exists(const PreferenceStructure& prefs, int c) {
    const Interval dom = prefs.domain();
    const PreferenceStructure left = induced_prefs(prefs, Interval(dom.lo, c));
    const PreferenceStructure right = induced_prefs(prefs, Interval(c + 1, dom.hi));
    // Pessimal partners: a woman's worst stable partner comes from the
    // men-proposing matching, a man's from the women-proposing one.
    const Matching left_men = gale_shapley(left, Role::Man);
    const Matching left_women = gale_shapley(left, Role::Woman);
    const Matching right_men = gale_shapley(right, Role::Man);
    const Matching right_women = gale_shapley(right, Role::Woman);
    for (int w = dom.lo; w <= dom.hi; ++w) {
        const bool w_left = w <= c;
        const int w_pess = (w_left ? left_men : right_men).partner_of_woman(w);
        const Permutation& wr = prefs.woman_ranking(w);
        for (int m = dom.lo; m <= dom.hi; ++m) {
            if ((m <= c) == w_left) continue;
            if (wr(m) <= wr(w_pess)) continue;
            const int m_pess = (m <= c ? left_women : right_women).partner_of_man(m);
            if (prefs.man_ranking(m)(w) > prefs.man_ranking(m)(m_pess)) return true;
        }
    }
    return false;
}

bool exact_cut_with_pairs(const PreferenceStructure& prefs, int c,
                          const std::vector<std::pair<int, int>>& pairs, Budget& budget) {
    budget.charge(static_cast<std::uint64_t>(pairs.size()) + 1, "exact cut pair scan");
    for (const auto& [w, m] : pairs)
        if ((w <= c) != (m <= c)) return false;  // a stable pair crosses s
    const std::uint64_t n = static_cast<std::uint64_t>(prefs.size());
    budget.charge(4 * n * n, "exact cut side matchings");
    return !crossing_block_exists(prefs, c);
}

/// Candidate interior cuts of `dom`, midmost first, lower c on ties.
std::vector<int> midmost_order(Interval dom) {
    std::vector<int> cs;
    for (int c = dom.lo; c < dom.hi; ++c) cs.push_back(c);
    std::stable_sort(cs.begin(), cs.end(), [&](int a, int b) {
        return std::abs(2 * a + 1 - dom.lo - dom.hi) < std::abs(2 * b + 1 - dom.lo - dom.hi);
    });
    return cs;
}

void exact_recursive(const PreferenceStructure& whole, Interval window, std::vector<int>& cuts, Budget& budget) {
    if (window.size() < 2) return;
    const PreferenceStructure sub =
        window == whole.domain() ? whole : induced_prefs(whole, window);
    const std::vector<std::pair<int, int>> pairs = stable_pairs(sub, &budget);
    for (int c : midmost_order(window)) {
        if (!exact_cut_with_pairs(sub, c, pairs, budget)) continue;
        cuts.push_back(c);
        exact_recursive(whole, Interval(window.lo, c), cuts, budget);
        exact_recursive(whole, Interval(c + 1, window.hi), cuts, budget);
        return;
    }
}

}  // namespace

bool is_lattice_cutpoint_exact(const PreferenceStructure& prefs, CutPosition cut, Budget* budget) {
    const Interval dom = prefs.domain();
    if (cut.c < dom.lo || cut.c >= dom.hi)
        throw OutOfDomain("cut " + std::to_string(cut.c) + " must satisfy " + std::to_string(dom.lo) +
                          " <= c < " + std::to_string(dom.hi));
    Budget local(kDefaultBudget);
    Budget& b = budget ? *budget : local;
    return exact_cut_with_pairs(prefs, cut.c, stable_pairs(prefs, &b), b);
}

std::vector<int> exact_cutpoints(const PreferenceStructure& prefs, Budget* budget) {
    const Interval dom = prefs.domain();
    if (dom.size() < 2) return {};
    Budget local(kDefaultBudget);
    Budget& b = budget ? *budget : local;
    const std::vector<std::pair<int, int>> pairs = stable_pairs(prefs, &b);
    // A stable pair (w, m) rules out every threshold between w and m, so
    // pre-mark those ranges and run the matching test only on survivors.
    std::vector<int> crossed(static_cast<size_t>(dom.size()), 0);
    for (const auto& [w, m] : pairs) {
        if (w == m) continue;
        crossed[static_cast<size_t>(std::min(w, m) - dom.lo)] += 1;
        crossed[static_cast<size_t>(std::max(w, m) - dom.lo)] -= 1;
    }
    std::vector<int> cuts;
    int acc = 0;
    const std::uint64_t n = static_cast<std::uint64_t>(dom.size());
    for (int c = dom.lo; c < dom.hi; ++c) {
        acc += crossed[static_cast<size_t>(c - dom.lo)];
        if (acc != 0) continue;
        b.charge(4 * n * n, "exact cut side matchings");
        if (!crossing_block_exists(prefs, c)) cuts.push_back(c);
    }
    return cuts;
}

BlockDecomposition decompose(const PreferenceStructure& prefs, DecomposeMethod method, Budget* budget) {
    Budget local(kDefaultBudget);
    Budget& b = budget ? *budget : local;
    const Interval dom = prefs.domain();
    std::vector<int> cuts;
    switch (method) {
        case DecomposeMethod::Certified:
            cuts = certified_cuts(prefs);
            break;
        case DecomposeMethod::Exact:
            exact_recursive(prefs, dom, cuts, b);
            break;
        case DecomposeMethod::Auto: {
            // Certified cuts are valid in every window, so they can seed the
            // exact recursion wholesale.
            cuts = certified_cuts(prefs);
            std::vector<int> seeds = cuts;
            int blo = dom.lo;
            for (size_t k = 0; k <= seeds.size(); ++k) {
                const int bhi = k < seeds.size() ? seeds[k] : dom.hi;
                exact_recursive(prefs, Interval(blo, bhi), cuts, b);
                blo = bhi + 1;
            }
            break;
        }
    }
    std::sort(cuts.begin(), cuts.end());

    BlockDecomposition out;
    out.domain = dom;
    out.cuts = cuts;
    out.method = method;
    int blo = dom.lo;
    for (size_t k = 0; k <= cuts.size(); ++k) {
        const int bhi = k < cuts.size() ? cuts[k] : dom.hi;
        out.blocks.emplace_back(blo, bhi);
        blo = bhi + 1;
    }
    for (const Interval& block : out.blocks) {
        const PreferenceStructure sub = block == dom ? prefs : induced_prefs(prefs, block);
        out.per_block.push_back(count_stable(sub, &b));
    }
    return out;
}

StableCount count_stable_factored(const PreferenceStructure& prefs, DecomposeMethod method, Budget* budget) {
    return decompose(prefs, method, budget).total();
}

}  // namespace stablecut
