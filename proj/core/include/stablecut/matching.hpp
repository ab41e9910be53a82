#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <utility>
#include <vector>

#include "stablecut/prefs.hpp"

namespace stablecut {

using BigInt = boost::multiprecision::cpp_int;

/// A perfect matching between the women and men of a common domain, stored
/// as the permutation sending each woman to her partner.
class Matching {
public:
    explicit Matching(Permutation partner_of_woman);

    const Interval& domain() const { return women_to_men_.domain(); }
    int size() const { return women_to_men_.size(); }

    int partner_of_woman(int w) const { return women_to_men_(w); }
    int partner_of_man(int m) const { return men_to_women_(m); }

    const Permutation& as_permutation() const { return women_to_men_; }

    bool operator==(const Matching& other) const { return women_to_men_ == other.women_to_men_; }

private:
    Permutation women_to_men_;
    Permutation men_to_women_;
};

/// Exact nonnegative integer together with its natural logarithm
/// (log_value = -inf only for a zero value).
struct StableCount {
    BigInt value;
    double log_value;

    static StableCount from_value(BigInt v);
    std::string decimal() const { return value.str(); }
};

/// Work budget shared across a counting or enumeration call; charge() throws
/// BudgetExceeded once the cap is spent.
class Budget {
public:
    explicit Budget(std::uint64_t units) : remaining_(units) {}

    void charge(std::uint64_t units, const char* where) {
        if (units > remaining_)
            throw BudgetExceeded(std::string("work budget exhausted in ") + where);
        remaining_ -= units;
    }

    std::uint64_t remaining() const { return remaining_; }

private:
    std::uint64_t remaining_;
};

inline constexpr std::uint64_t kDefaultBudget = 200'000'000;
inline constexpr std::uint64_t kDefaultEnumerationLimit = 1'000'000;

/// True iff w and m strictly prefer each other to their current partners.
bool is_blocking_pair(const PreferenceStructure& prefs, const Matching& matching, int w, int m);

/// True iff no blocking pair exists.  O(n^2).
bool is_stable(const PreferenceStructure& prefs, const Matching& matching);

/// Deferred-acceptance matching, optimal for the proposing side and
/// pessimal for the other.  Deterministic: proposers scan candidates in
/// decreasing rank value and the lowest-index free proposer moves first.
Matching gale_shapley(const PreferenceStructure& prefs, Role proposing);

/// All stable matchings by exhaustive scan, sorted by partner array.
/// Only for domains of size <= 8 (TooLarge otherwise).
std::vector<Matching> brute_force_stable(const PreferenceStructure& prefs);

/// All (woman, man) pairs that occur in at least one stable matching,
/// sorted lexicographically.
std::vector<std::pair<int, int>> stable_pairs(const PreferenceStructure& prefs, Budget* budget = nullptr);

/// All stable matchings, sorted lexicographically by partner array.
/// Throws LimitExceeded when more than `limit` exist.
std::vector<Matching> enumerate_stable(const PreferenceStructure& prefs, std::uint64_t limit = kDefaultEnumerationLimit,
                                       Budget* budget = nullptr);

/// Exact number of stable matchings.  Either returns the true count or
/// throws BudgetExceeded; never an approximation.
StableCount count_stable(const PreferenceStructure& prefs, Budget* budget = nullptr);

}  // namespace stablecut
