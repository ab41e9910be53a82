#include "stablecut/rotations.hpp"

#include <algorithm>
#include <array>
#include <unordered_map>

namespace stablecut {

namespace {

/// Dense 0-based view of an instance, used by the chain walk.
struct Tables {
    int n = 0;
    int lo = 0;
    std::vector<std::vector<int>> rank_w;   // rank_w[w][m]: value woman w assigns man m
    std::vector<std::vector<int>> rank_m;   // rank_m[m][w]
    std::vector<std::vector<int>> order_m;  // man m's women, most preferred first

    explicit Tables(const PreferenceStructure& prefs) {
        n = prefs.size();
        lo = prefs.domain().lo;
        const int hi = prefs.domain().hi;
        rank_w.assign(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n)));
        rank_m.assign(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n)));
        order_m.assign(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n)));
        for (int w = 0; w < n; ++w) {
            const Permutation& r = prefs.woman_ranking(lo + w);
            for (int m = 0; m < n; ++m) rank_w[static_cast<size_t>(w)][static_cast<size_t>(m)] = r(lo + m);
        }
        for (int m = 0; m < n; ++m) {
            const Permutation& r = prefs.man_ranking(lo + m);
            for (int w = 0; w < n; ++w) rank_m[static_cast<size_t>(m)][static_cast<size_t>(w)] = r(lo + w);
            const Permutation inv = r.inverse();
            for (int k = 0; k < n; ++k)
                order_m[static_cast<size_t>(m)][static_cast<size_t>(k)] = inv(hi - k) - lo;
        }
    }

    /// 0-based position of woman w in man m's descending preference order.
    int pos_in_order(int m, int w) const {
        return (lo + n - 1) - rank_m[static_cast<size_t>(m)][static_cast<size_t>(w)];
    }
};

}  // namespace

RotationPoset build_rotation_poset(const PreferenceStructure& prefs, Budget& budget) {
    const int n = prefs.size();
    const int lo = prefs.domain().lo;
    budget.charge(static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n) + 16, "rotation setup");
    const Tables t(prefs);

    RotationPoset poset{gale_shapley(prefs, Role::Man), gale_shapley(prefs, Role::Woman), {}, {}};

    // Current matching along the chain, 0-based.
    std::vector<int> husband(static_cast<size_t>(n)), wife(static_cast<size_t>(n));
    for (int w = 0; w < n; ++w) {
        husband[static_cast<size_t>(w)] = poset.men_optimal.partner_of_woman(lo + w) - lo;
        wife[static_cast<size_t>(husband[static_cast<size_t>(w)])] = w;
    }

    // ptr[m]: first position of m's list that might still hold his successor
    // woman.  Partners only worsen for men and only improve for women along
    // the chain, so the pointer never has to move back.
    std::vector<int> ptr(static_cast<size_t>(n));
    for (int m = 0; m < n; ++m) ptr[static_cast<size_t>(m)] = t.pos_in_order(m, wife[static_cast<size_t>(m)]) + 1;

    const auto find_succ = [&](int m) -> int {
        auto& p = ptr[static_cast<size_t>(m)];
        while (p < n) {
            const int w = t.order_m[static_cast<size_t>(m)][static_cast<size_t>(p)];
            budget.charge(1, "rotation chain");
            if (t.rank_w[static_cast<size_t>(w)][static_cast<size_t>(m)] >
                t.rank_w[static_cast<size_t>(w)][static_cast<size_t>(husband[static_cast<size_t>(w)])])
                return w;
            ++p;  // w's partners only improve; she will never prefer m again
        }
        return -1;
    };

    // Records used to build the precedence digraph afterwards.
    std::unordered_map<std::int64_t, int> creator;  // pair key -> rotation creating it
    const auto pair_key = [n](int w, int m) { return static_cast<std::int64_t>(w) * n + m; };
    // Partner history per woman: (rotation, old man, new man), in chain order.
    std::vector<std::vector<std::array<int, 3>>> moves_w(static_cast<size_t>(n));
    std::vector<int> first_husband = husband;

    std::vector<int> color(static_cast<size_t>(n)), path_pos(static_cast<size_t>(n)), succ_of(static_cast<size_t>(n));

    for (;;) {
        // Search the successor graph of the current matching for a cycle.
        std::fill(color.begin(), color.end(), 0);  // 0 fresh, 1 on path, 2 dead
        std::vector<int> cycle;
        for (int s0 = 0; s0 < n && cycle.empty(); ++s0) {
            if (color[static_cast<size_t>(s0)] != 0) continue;
            std::vector<int> path;
            int cur = s0;
            for (;;) {
                budget.charge(1, "rotation walk");
                if (color[static_cast<size_t>(cur)] == 2) break;
                if (color[static_cast<size_t>(cur)] == 1) {
                    cycle.assign(path.begin() + path_pos[static_cast<size_t>(cur)], path.end());
                    break;
                }
                const int w = find_succ(cur);
                if (w < 0) {
                    color[static_cast<size_t>(cur)] = 2;
                    break;
                }
                succ_of[static_cast<size_t>(cur)] = w;
                color[static_cast<size_t>(cur)] = 1;
                path_pos[static_cast<size_t>(cur)] = static_cast<int>(path.size());
                path.push_back(cur);
                cur = husband[static_cast<size_t>(w)];
            }
            if (cycle.empty())
                for (int x : path) color[static_cast<size_t>(x)] = 2;
        }
        if (cycle.empty()) break;  // reached the men-pessimal matching

        const int idx = static_cast<int>(poset.rotations.size());
        const int r = static_cast<int>(cycle.size());
        Rotation rot;
        rot.broken.reserve(static_cast<size_t>(r));
        rot.created.reserve(static_cast<size_t>(r));
        for (int k = 0; k < r; ++k) {
            const int m = cycle[static_cast<size_t>(k)];
            rot.broken.emplace_back(lo + wife[static_cast<size_t>(m)], lo + m);
            rot.created.emplace_back(lo + succ_of[static_cast<size_t>(m)], lo + m);
        }
        // Eliminate: every cycle man moves to his successor woman.
        for (int k = 0; k < r; ++k) {
            const int m = cycle[static_cast<size_t>(k)];
            const int w = succ_of[static_cast<size_t>(m)];
            moves_w[static_cast<size_t>(w)].push_back({idx, husband[static_cast<size_t>(w)], m});
            creator[pair_key(w, m)] = idx;
        }
        for (int k = 0; k < r; ++k) {
            const int m = cycle[static_cast<size_t>(k)];
            const int w = succ_of[static_cast<size_t>(m)];
            wife[static_cast<size_t>(m)] = w;
            husband[static_cast<size_t>(w)] = m;
            ptr[static_cast<size_t>(m)] = t.pos_in_order(m, w) + 1;
        }
        poset.rotations.push_back(std::move(rot));
    }

    // The chain must have ended at the men-pessimal matching.
    for (int w = 0; w < n; ++w)
        if (husband[static_cast<size_t>(w)] != poset.men_pessimal.partner_of_woman(lo + w) - lo)
            throw Error("internal: rotation chain did not end at the men-pessimal matching");

    // Precedence digraph.
    const int R = poset.size();
    poset.preds.assign(static_cast<size_t>(R), {});
    std::vector<std::pair<int, int>> edges;  // (pred, succ)
    for (int i = 0; i < R; ++i) {
        const Rotation& rot = poset.rotations[static_cast<size_t>(i)];
        const int r = static_cast<int>(rot.broken.size());
        for (int k = 0; k < r; ++k) {
            const int w_from = rot.broken[static_cast<size_t>(k)].first - lo;
            const int m = rot.broken[static_cast<size_t>(k)].second - lo;
            const int w_to = rot.created[static_cast<size_t>(k)].first - lo;
            // (a) whatever rotation moved m to w_from must come first
            if (auto it = creator.find(pair_key(w_from, m)); it != creator.end() && it->second != i)
                edges.emplace_back(it->second, i);
            // (b) every woman strictly between w_from and w_to on m's list must
            // already have been lifted above m by the rotation that crossed her
            const int p_from = t.pos_in_order(m, w_from);
            const int p_to = t.pos_in_order(m, w_to);
            for (int p = p_from + 1; p < p_to; ++p) {
                budget.charge(1, "rotation digraph");
                const int w = t.order_m[static_cast<size_t>(m)][static_cast<size_t>(p)];
                const int rm = t.rank_w[static_cast<size_t>(w)][static_cast<size_t>(m)];
                if (t.rank_w[static_cast<size_t>(w)][static_cast<size_t>(first_husband[static_cast<size_t>(w)])] > rm)
                    continue;  // already above m in the men-optimal matching
                for (const auto& mv : moves_w[static_cast<size_t>(w)]) {
                    budget.charge(1, "rotation digraph");
                    if (t.rank_w[static_cast<size_t>(w)][static_cast<size_t>(mv[1])] < rm &&
                        t.rank_w[static_cast<size_t>(w)][static_cast<size_t>(mv[2])] > rm) {
                        if (mv[0] != i) edges.emplace_back(mv[0], i);
                        break;
                    }
                }
            }
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    for (const auto& [a, b] : edges) {
        if (a >= b) throw Error("internal: precedence edge against elimination order");
        poset.preds[static_cast<size_t>(b)].push_back(a);
    }
    return poset;
}

Matching apply_rotations(const RotationPoset& poset, const std::vector<int>& downset) {
    const Interval dom = poset.men_optimal.domain();
    std::vector<int> partner(static_cast<size_t>(dom.size()));
    for (int w = dom.lo; w <= dom.hi; ++w)
        partner[static_cast<size_t>(w - dom.lo)] = poset.men_optimal.partner_of_woman(w);
    for (int idx : downset)
        for (const auto& [w, m] : poset.rotations[static_cast<size_t>(idx)].created)
            partner[static_cast<size_t>(w - dom.lo)] = m;
    return Matching(Permutation(dom, std::move(partner)));
}

bool for_each_downset(const RotationPoset& poset, Budget& budget,
                      const std::function<bool(const std::vector<int>&)>& visit) {
    const int R = poset.size();
    std::vector<char> in(static_cast<size_t>(R), 0);
    std::vector<int> chosen;
    struct Frame {
        int idx;
        int phase;  // 0: try exclude, 1: try include, 2: unwind
    };
    std::vector<Frame> stack;
    stack.push_back({0, 0});
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.idx == R) {
            budget.charge(1, "downset visit");
            if (!visit(chosen)) return false;
            stack.pop_back();
            continue;
        }
        if (f.phase == 0) {
            f.phase = 1;
            stack.push_back({f.idx + 1, 0});
            continue;
        }
        if (f.phase == 1) {
            f.phase = 2;
            bool can_include = true;
            for (int p : poset.preds[static_cast<size_t>(f.idx)])
                if (!in[static_cast<size_t>(p)]) {
                    can_include = false;
                    break;
                }
            if (can_include) {
                in[static_cast<size_t>(f.idx)] = 1;
                chosen.push_back(f.idx);
                stack.push_back({f.idx + 1, 0});
                continue;
            }
        }
        if (in[static_cast<size_t>(f.idx)]) {
            in[static_cast<size_t>(f.idx)] = 0;
            chosen.pop_back();
        }
        stack.pop_back();
    }
    return true;
}

namespace {

using Mask = std::vector<std::uint64_t>;

struct MaskHash {
    size_t operator()(const Mask& m) const {
        std::uint64_t h = 0xCBF29CE484222325ull;
        for (std::uint64_t w : m) {
            h ^= w;
            h *= 0x100000001B3ull;
        }
        return static_cast<size_t>(h);
    }
};

bool mask_get(const Mask& m, int i) { return (m[static_cast<size_t>(i >> 6)] >> (i & 63)) & 1u; }
void mask_clear(Mask& m, int i) { m[static_cast<size_t>(i >> 6)] &= ~(1ull << (i & 63)); }
void mask_set(Mask& m, int i) { m[static_cast<size_t>(i >> 6)] |= 1ull << (i & 63); }

int mask_count(const Mask& m) {
    int c = 0;
    for (std::uint64_t w : m) c += __builtin_popcountll(w);
    return c;
}

struct DownsetCounter {
    int R;
    int W;
    std::vector<std::vector<int>> adj;  // undirected: preds and succs
    std::vector<Mask> anc, desc;        // strict reachability
    Budget& budget;
    std::unordered_map<Mask, BigInt, MaskHash> memo;

    BigInt count(Mask live) {
        budget.charge(static_cast<std::uint64_t>(W) + 4, "downset count");
        BigInt result = 1;
        // Factor over connected components of the live set.
        Mask seen(static_cast<size_t>(W), 0);
        for (int s = 0; s < R; ++s) {
            if (!mask_get(live, s) || mask_get(seen, s)) continue;
            Mask comp(static_cast<size_t>(W), 0);
            std::vector<int> queue{s};
            mask_set(seen, s);
            mask_set(comp, s);
            while (!queue.empty()) {
                const int v = queue.back();
                queue.pop_back();
                for (int u : adj[static_cast<size_t>(v)]) {
                    budget.charge(1, "downset components");
                    if (mask_get(live, u) && !mask_get(seen, u)) {
                        mask_set(seen, u);
                        mask_set(comp, u);
                        queue.push_back(u);
                    }
                }
            }
            result *= count_component(comp);
        }
        return result;
    }

    BigInt count_component(const Mask& comp) {
        const int sz = mask_count(comp);
        if (sz == 0) return 1;
        if (sz == 1) return 2;
        if (auto it = memo.find(comp); it != memo.end()) return it->second;
        budget.charge(static_cast<std::uint64_t>(sz), "downset pivot");
        // Pivot on the element whose removal (with its relatives) prunes most.
        int pivot = -1, best = -1;
        for (int v = 0; v < R; ++v) {
            if (!mask_get(comp, v)) continue;
            int cov = 0;
            for (int k = 0; k < W; ++k)
                cov += __builtin_popcountll((anc[static_cast<size_t>(v)][static_cast<size_t>(k)] |
                                             desc[static_cast<size_t>(v)][static_cast<size_t>(k)]) &
                                            comp[static_cast<size_t>(k)]);
            if (cov > best) {
                best = cov;
                pivot = v;
            }
        }
        // Downsets without the pivot exclude all its descendants; downsets
        // with it include all its ancestors.
        Mask without = comp, with = comp;
        mask_clear(without, pivot);
        mask_clear(with, pivot);
        for (int k = 0; k < W; ++k) {
            without[static_cast<size_t>(k)] &= ~desc[static_cast<size_t>(pivot)][static_cast<size_t>(k)];
            with[static_cast<size_t>(k)] &= ~anc[static_cast<size_t>(pivot)][static_cast<size_t>(k)];
        }
        BigInt value = count(without) + count(with);
        memo.emplace(comp, value);
        return value;
    }
};

}  // namespace

BigInt count_downsets(const RotationPoset& poset, Budget& budget) {
    const int R = poset.size();
    if (R == 0) return 1;
    if (R > 16384) throw BudgetExceeded("rotation poset too large to count: " + std::to_string(R) + " rotations");
    const int W = (R + 63) / 64;
    budget.charge(static_cast<std::uint64_t>(R) * static_cast<std::uint64_t>(W) * 2, "downset reachability");

    std::vector<std::vector<int>> succs(static_cast<size_t>(R));
    std::vector<std::vector<int>> adj(static_cast<size_t>(R));
    for (int i = 0; i < R; ++i)
        for (int p : poset.preds[static_cast<size_t>(i)]) {
            succs[static_cast<size_t>(p)].push_back(i);
            adj[static_cast<size_t>(p)].push_back(i);
            adj[static_cast<size_t>(i)].push_back(p);
        }

    std::vector<Mask> desc(static_cast<size_t>(R), Mask(static_cast<size_t>(W), 0));
    std::vector<Mask> anc(static_cast<size_t>(R), Mask(static_cast<size_t>(W), 0));
    for (int i = R - 1; i >= 0; --i)
        for (int s : succs[static_cast<size_t>(i)]) {
            mask_set(desc[static_cast<size_t>(i)], s);
            for (int k = 0; k < W; ++k)
                desc[static_cast<size_t>(i)][static_cast<size_t>(k)] |= desc[static_cast<size_t>(s)][static_cast<size_t>(k)];
        }
    for (int i = 0; i < R; ++i)
        for (int p : poset.preds[static_cast<size_t>(i)]) {
            mask_set(anc[static_cast<size_t>(i)], p);
            for (int k = 0; k < W; ++k)
                anc[static_cast<size_t>(i)][static_cast<size_t>(k)] |= anc[static_cast<size_t>(p)][static_cast<size_t>(k)];
        }

    DownsetCounter counter{R, W, std::move(adj), std::move(anc), std::move(desc), budget, {}};
    Mask all(static_cast<size_t>(W), 0);
    for (int i = 0; i < R; ++i) mask_set(all, i);
    return counter.count(all);
}

}  // namespace stablecut
