#pragma once

#include "stablecut/matching.hpp"

namespace stablecut {

/// A threshold between consecutive indices: the integer c stands for the
/// half-integer s = c + 1/2.  The bound predicates accept any c (a threshold
/// may sit outside the window); splitting operations require lo <= c < hi so
/// that both sides are nonempty.
struct CutPosition {
    int c;

    double s() const { return c + 0.5; }
};

enum class DecomposeMethod { Certified, Exact, Auto };

/// Partition of a domain into blocks at cut positions, with the exact number
/// of stable matchings of each block.  The product of the block counts is
/// the number of stable matchings of the whole instance.
struct BlockDecomposition {
    Interval domain;
    std::vector<int> cuts;              // ascending cut positions c
    std::vector<Interval> blocks;       // cuts.size() + 1 blocks covering the domain
    std::vector<StableCount> per_block;
    DecomposeMethod method = DecomposeMethod::Exact;

    StableCount total() const;
};

/// Displacement certificate at s = c + 1/2: every rank value everybody
/// assigns sits closer to the diagonal than a twentieth of the distance to
/// s, i.e. |rank_i(j) - j| < (|i - s| + |j - s|) / 20 for all persons i and
/// positions j.  Decided in exact integer arithmetic.  When it holds, no
/// stable matching contains a pair crossing s.
bool rank_displacement_ok(const PreferenceStructure& prefs, CutPosition cut);

/// Offset certificate at s = c + 1/2: offset(rank_i, j) < (|i-s| + |j-s|)/20
/// for all persons i and positions j.  Implies the displacement certificate
/// and survives restriction to subwindows, so certified cuts factor the
/// stable-matching lattice of every window containing them.
bool lattice_bound_ok(const PreferenceStructure& prefs, CutPosition cut);

/// All interior cut positions where lattice_bound_ok holds, ascending.
std::vector<int> certified_cuts(const PreferenceStructure& prefs);

/// Exact test: s splits the instance iff (a) no stable pair crosses s and
/// (b) no crossing pair prefer each other to their pessimal stable partners
/// within their respective sides.  Requires lo <= cut.c < hi.
bool is_lattice_cutpoint_exact(const PreferenceStructure& prefs, CutPosition cut, Budget* budget = nullptr);

/// All interior positions passing is_lattice_cutpoint_exact on the full
/// window, ascending, sharing one stable-pair computation across positions.
std::vector<int> exact_cutpoints(const PreferenceStructure& prefs, Budget* budget = nullptr);

/// Split the instance into blocks.  Certified uses the offset certificate at
/// every interior position simultaneously; Exact recursively splits at exact
/// lattice cutpoints, re-testing inside every sub-window (midmost candidates
/// first); Auto seeds the exact recursion with the certified pre-pass.
BlockDecomposition decompose(const PreferenceStructure& prefs, DecomposeMethod method, Budget* budget = nullptr);

/// Product of the block counts of decompose(); equals count_stable.
StableCount count_stable_factored(const PreferenceStructure& prefs, DecomposeMethod method, Budget* budget = nullptr);

}  // namespace stablecut
