#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "stablecut/interval.hpp"

namespace stablecut {

/// A bijection of a nonempty closed integer interval onto itself.
/// Stored by position: values()[k] is the image of domain().lo + k.
class Permutation {
public:
    Permutation(Interval domain, std::vector<int> values);

    static Permutation identity(Interval domain);
    static Permutation reversal(Interval domain);

    const Interval& domain() const { return domain_; }
    int size() const { return domain_.size(); }
    const std::vector<int>& values() const { return values_; }

    /// Image of position j.  Throws OutOfDomain.
    int operator()(int j) const {
        if (!domain_.contains(j)) throw OutOfDomain("position " + std::to_string(j) + " not in " + domain_.str());
        return values_[static_cast<size_t>(j - domain_.lo)];
    }

    Permutation inverse() const;

    bool operator==(const Permutation&) const = default;

private:
    Interval domain_;
    std::vector<int> values_;
};

/// The four one-sided comparison counts of a permutation at a position j:
/// how many later (resp. earlier) positions carry a larger (resp. smaller)
/// value.  later_larger + later_smaller = hi - j and
/// earlier_larger + earlier_smaller = j - lo.
struct LStats {
    int later_larger = 0;    // #{i > j : pi(i) > pi(j)}
    int later_smaller = 0;   // #{i > j : pi(i) < pi(j)}
    int earlier_larger = 0;  // #{i < j : pi(i) > pi(j)}
    int earlier_smaller = 0; // #{i < j : pi(i) < pi(j)}

    bool operator==(const LStats&) const = default;
};

/// Positional Lehmer code over a closed interval: entries()[k] counts the
/// later positions holding a smaller value, so 0 <= entry(j) <= hi - j.
struct LehmerCode {
    Interval domain;
    std::vector<int> entries;

    bool operator==(const LehmerCode&) const = default;
};

/// A bijection of an arbitrary finite sorted set of integers onto itself,
/// kept with its original labels: labels[k] maps to values[k].
struct SubsetPermutation {
    std::vector<int> labels;
    std::vector<int> values;

    bool operator==(const SubsetPermutation&) const = default;
};

/// Validating constructor wrapper; throws NotABijection / EmptySubset / TooLarge.
Permutation make_permutation(Interval domain, std::vector<int> values);

/// Number of inverted pairs i < j with pi(i) > pi(j).  O(n log n).
std::int64_t inversion_number(const Permutation& p);

/// Permutation induced on a nonempty subinterval of the domain: the unique
/// bijection of `window` ordering its elements the way p orders them.
Permutation induced_permutation(const Permutation& p, Interval window);

/// Same, for an arbitrary nonempty sorted subset of the domain.
SubsetPermutation induced_permutation(const Permutation& p, std::span<const int> labels);

/// One-sided comparison counts at position j.  O(n).
LStats l_stats(const Permutation& p, int j);

/// max(later_smaller, earlier_larger) at position j: how far the value at j
/// can sit from j, and an upper bound for |pi(j) - j|.
int offset(const Permutation& p, int j);

/// offset() at every position, indexed by j - lo.  O(n log n).
std::vector<int> all_offsets(const Permutation& p);

/// Lehmer code of p; entry at j equals l_stats(p, j).later_smaller.
LehmerCode lehmer_encode(const Permutation& p);

/// Inverse of lehmer_encode: scanning positions upward, position j receives
/// the (entry(j) + 1)-th smallest value not yet assigned.
Permutation lehmer_decode(const LehmerCode& code);

/// True iff p maps i onto itself, acts as tau there, and maps the parts of
/// its own domain below and above i onto themselves — membership in the set
/// of permutations fixing the three blocks around i with restriction tau.
/// Throws DomainMismatch unless tau's domain equals i and i is a nonempty
/// subinterval of p's domain.
bool is_in_res(const Permutation& p, const Permutation& tau, Interval i);

}  // namespace stablecut
