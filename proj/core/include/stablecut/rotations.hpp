#pragma once

#include <functional>

#include "stablecut/matching.hpp"

namespace stablecut {

/// One rotation of the stable-matching lattice: a cyclic sequence of matched
/// pairs (w_0,m_0), ..., (w_{r-1},m_{r-1}) such that eliminating it rematches
/// every m_i with w_{i+1} (indices mod r).  `broken` lists the pairs present
/// before elimination in cycle order, `created` the pairs present after;
/// created[i] pairs m_i = broken[i].second with w_{i+1}.
struct Rotation {
    std::vector<std::pair<int, int>> broken;   // (w_i, m_i)
    std::vector<std::pair<int, int>> created;  // (w_{i+1}, m_i)
};

/// Rotation structure of an instance.  Rotations are indexed in one
/// elimination order found by walking a maximal chain from the men-optimal
/// matching down to the men-pessimal one; that order is a linear extension
/// of the precedence digraph, whose direct predecessors are in `preds`.
/// Stable matchings correspond bijectively to the downsets of the digraph.
struct RotationPoset {
    Matching men_optimal;
    Matching men_pessimal;
    std::vector<Rotation> rotations;
    std::vector<std::vector<int>> preds;  // sorted direct predecessor indices

    int size() const { return static_cast<int>(rotations.size()); }
};

RotationPoset build_rotation_poset(const PreferenceStructure& prefs, Budget& budget);

/// Matching reached from the men-optimal one by eliminating the rotations of
/// a downset, given in increasing index order.
Matching apply_rotations(const RotationPoset& poset, const std::vector<int>& downset);

/// Visit every downset of the precedence digraph, each presented as an
/// increasing index list.  Returns false iff `visit` aborted the walk.
bool for_each_downset(const RotationPoset& poset, Budget& budget,
                      const std::function<bool(const std::vector<int>&)>& visit);

/// Number of downsets, via weakly-connected-component factorization and
/// pivot splitting with memoization.
BigInt count_downsets(const RotationPoset& poset, Budget& budget);

}  // namespace stablecut
