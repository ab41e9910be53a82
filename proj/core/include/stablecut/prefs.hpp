#pragma once

#include <cstdint>
#include <vector>

#include "stablecut/mallows.hpp"
#include "stablecut/permutation.hpp"

namespace stablecut {

enum class Role { Woman, Man };

struct Person {
    int index;
    Role role;

    bool operator==(const Person&) const = default;
};

/// Complete two-sided preference profile on a shared index interval: every
/// woman ranks all men and every man ranks all women.  A ranking is a
/// permutation of the domain; a larger rank value means more desirable.
/// Immutable after construction.
class PreferenceStructure {
public:
    PreferenceStructure(Interval domain, std::vector<Permutation> women_rank, std::vector<Permutation> men_rank);

    const Interval& domain() const { return domain_; }
    int size() const { return domain_.size(); }

    const Permutation& ranking(const Person& who) const;
    const Permutation& woman_ranking(int index) const;
    const Permutation& man_ranking(int index) const;

    const std::vector<Permutation>& women() const { return women_rank_; }
    const std::vector<Permutation>& men() const { return men_rank_; }

    bool operator==(const PreferenceStructure&) const = default;

private:
    Interval domain_;
    std::vector<Permutation> women_rank_;
    std::vector<Permutation> men_rank_;
};

/// Everybody ranks in index order (person j has rank value j).
PreferenceStructure identity_prefs(Interval domain);

/// Independent Mallows rankings for the 2 * size people, one RngStream per
/// person labeled (role, index, trial) under the master seed.
PreferenceStructure sample_prefs(const MallowsParams& params, Interval domain, std::uint64_t master_seed,
                                 std::int64_t trial = 0);

/// True iff `who` ranks candidate a above candidate b.  Throws SamePerson
/// when a == b and OutOfDomain for indices outside the domain.
bool prefers(const PreferenceStructure& prefs, const Person& who, int a, int b);

/// Profile induced on a nonempty subinterval: keep the people inside the
/// window and replace each ranking by its induced permutation.
PreferenceStructure induced_prefs(const PreferenceStructure& prefs, Interval window);

/// Same profile with every index translated by delta.
PreferenceStructure shifted(const PreferenceStructure& prefs, int delta);

/// Copy of `prefs` with one two-person block planted at positions (a, a+1):
/// woman a+1 swaps the rank values of men a and a+1, and man a swaps the
/// rank values of women a and a+1.  All other rankings are unchanged.
PreferenceStructure with_swap_gadget(const PreferenceStructure& prefs, int a);

/// The swap gadget in an identity background on [-m, m], m >= 2: everybody
/// ranks in index order except woman 2 (prefers man 1 to man 2) and man 1
/// (prefers woman 1 to woman 2).  Has exactly two stable matchings.
PreferenceStructure gadget_structure(int m);

/// The same gadget translated onto [1, 2m+1] for 1-based experiments.
PreferenceStructure gadget_structure_shifted(int m);

}  // namespace stablecut
