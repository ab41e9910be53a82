#include "stablecut/permutation.hpp"

#include <algorithm>
#include <numeric>

namespace stablecut {

namespace {

/// Fenwick tree over [0, n) holding nonnegative integer counts.
class Fenwick {
public:
    explicit Fenwick(int n) : n_(n), tree_(static_cast<size_t>(n) + 1, 0) {}

    void add(int i, int delta) {
        for (++i; i <= n_; i += i & -i) tree_[static_cast<size_t>(i)] += delta;
    }

    /// Sum of counts over [0, i].
    std::int64_t prefix(int i) const {
        std::int64_t s = 0;
        for (++i; i > 0; i -= i & -i) s += tree_[static_cast<size_t>(i)];
        return s;
    }

    /// Smallest index i such that prefix(i) >= k, for k >= 1.
    int kth(std::int64_t k) const {
        int pos = 0;
        int log = 1;
        while ((1 << log) <= n_) ++log;
        for (int step = 1 << (log - 1); step > 0; step >>= 1) {
            if (pos + step <= n_ && tree_[static_cast<size_t>(pos + step)] < k) {
                pos += step;
                k -= tree_[static_cast<size_t>(pos)];
            }
        }
        return pos;  // 0-based index
    }

private:
    int n_;
    std::vector<std::int64_t> tree_;
};

void check_position(const Permutation& p, int j) {
    if (!p.domain().contains(j))
        throw OutOfDomain("position " + std::to_string(j) + " not in " + p.domain().str());
}

}  // namespace

Permutation::Permutation(Interval domain, std::vector<int> values) : domain_(domain), values_(std::move(values)) {
    if (domain_.is_empty()) throw EmptySubset("permutation domain must be nonempty");
    if (values_.size() != static_cast<size_t>(domain_.size()))
        throw NotABijection("expected " + std::to_string(domain_.size()) + " values, got " +
                            std::to_string(values_.size()));
    std::vector<bool> seen(values_.size(), false);
    for (int v : values_) {
        if (!domain_.contains(v)) throw NotABijection("value " + std::to_string(v) + " not in " + domain_.str());
        size_t k = static_cast<size_t>(v - domain_.lo);
        if (seen[k]) throw NotABijection("value " + std::to_string(v) + " repeated");
        seen[k] = true;
    }
}

Permutation Permutation::identity(Interval domain) {
    std::vector<int> v(static_cast<size_t>(domain.size()));
    std::iota(v.begin(), v.end(), domain.lo);
    return Permutation(domain, std::move(v));
}

Permutation Permutation::reversal(Interval domain) {
    std::vector<int> v(static_cast<size_t>(domain.size()));
    for (size_t k = 0; k < v.size(); ++k) v[k] = domain.hi - static_cast<int>(k);
    return Permutation(domain, std::move(v));
}

Permutation Permutation::inverse() const {
    std::vector<int> inv(values_.size());
    for (size_t k = 0; k < values_.size(); ++k)
        inv[static_cast<size_t>(values_[k] - domain_.lo)] = domain_.lo + static_cast<int>(k);
    return Permutation(domain_, std::move(inv));
}

Permutation make_permutation(Interval domain, std::vector<int> values) {
    return Permutation(domain, std::move(values));
}

std::int64_t inversion_number(const Permutation& p) {
    const auto& vals = p.values();
    const int n = p.size();
    Fenwick seen(n);
    std::int64_t inv = 0;
    // Scan right to left; count already-seen values smaller than the current one.
    for (int k = n - 1; k >= 0; --k) {
        int v = vals[static_cast<size_t>(k)] - p.domain().lo;
        if (v > 0) inv += seen.prefix(v - 1);
        seen.add(v, 1);
    }
    return inv;
}

Permutation induced_permutation(const Permutation& p, Interval window) {
    if (window.is_empty()) throw EmptySubset("cannot induce on an empty window");
    if (!p.domain().contains(window))
        throw NotSubinterval(window.str() + " is not a subinterval of " + p.domain().str());
    const int n = window.size();
    std::vector<int> idx(static_cast<size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return p(window.lo + a) < p(window.lo + b); });
    // idx[r] is the position (relative to window.lo) holding the (r+1)-th smallest value.
    std::vector<int> vals(static_cast<size_t>(n));
    for (int r = 0; r < n; ++r) vals[static_cast<size_t>(idx[static_cast<size_t>(r)])] = window.lo + r;
    return Permutation(window, std::move(vals));
}

SubsetPermutation induced_permutation(const Permutation& p, std::span<const int> labels) {
    if (labels.empty()) throw EmptySubset("cannot induce on an empty subset");
    SubsetPermutation out;
    out.labels.assign(labels.begin(), labels.end());
    for (size_t k = 0; k < out.labels.size(); ++k) {
        if (!p.domain().contains(out.labels[k]))
            throw OutOfDomain("label " + std::to_string(out.labels[k]) + " not in " + p.domain().str());
        if (k > 0 && out.labels[k] <= out.labels[k - 1])
            throw BadParameter("subset labels must be strictly increasing");
    }
    const size_t n = out.labels.size();
    std::vector<size_t> idx(n);
    std::iota(idx.begin(), idx.end(), size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return p(out.labels[a]) < p(out.labels[b]); });
    out.values.resize(n);
    for (size_t r = 0; r < n; ++r) out.values[idx[r]] = out.labels[r];
    return out;
}

LStats l_stats(const Permutation& p, int j) {
    check_position(p, j);
    LStats s;
    const int pj = p(j);
    for (int i = p.domain().lo; i <= p.domain().hi; ++i) {
        if (i == j) continue;
        const int pi = p(i);
        if (i > j) {
            (pi > pj ? s.later_larger : s.later_smaller)++;
        } else {
            (pi > pj ? s.earlier_larger : s.earlier_smaller)++;
        }
    }
    return s;
}

int offset(const Permutation& p, int j) {
    LStats s = l_stats(p, j);
    return std::max(s.later_smaller, s.earlier_larger);
}

std::vector<int> all_offsets(const Permutation& p) {
    const int n = p.size();
    const int lo = p.domain().lo;
    const auto& vals = p.values();
    std::vector<int> later_smaller(static_cast<size_t>(n)), earlier_larger(static_cast<size_t>(n));
    {
        Fenwick seen(n);
        for (int k = n - 1; k >= 0; --k) {
            int v = vals[static_cast<size_t>(k)] - lo;
            later_smaller[static_cast<size_t>(k)] = v > 0 ? static_cast<int>(seen.prefix(v - 1)) : 0;
            seen.add(v, 1);
        }
    }
    {
        Fenwick seen(n);
        for (int k = 0; k < n; ++k) {
            int v = vals[static_cast<size_t>(k)] - lo;
            earlier_larger[static_cast<size_t>(k)] = static_cast<int>(seen.prefix(n - 1) - seen.prefix(v));
            seen.add(v, 1);
        }
    }
    std::vector<int> out(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k)
        out[static_cast<size_t>(k)] = std::max(later_smaller[static_cast<size_t>(k)], earlier_larger[static_cast<size_t>(k)]);
    return out;
}

LehmerCode lehmer_encode(const Permutation& p) {
    const int n = p.size();
    const int lo = p.domain().lo;
    const auto& vals = p.values();
    LehmerCode code{p.domain(), std::vector<int>(static_cast<size_t>(n))};
    Fenwick seen(n);
    for (int k = n - 1; k >= 0; --k) {
        int v = vals[static_cast<size_t>(k)] - lo;
        code.entries[static_cast<size_t>(k)] = v > 0 ? static_cast<int>(seen.prefix(v - 1)) : 0;
        seen.add(v, 1);
    }
    return code;
}

Permutation lehmer_decode(const LehmerCode& code) {
    if (code.domain.is_empty()) throw EmptySubset("Lehmer code domain must be nonempty");
    const int n = code.domain.size();
    if (code.entries.size() != static_cast<size_t>(n))
        throw InvalidCode("expected " + std::to_string(n) + " entries, got " + std::to_string(code.entries.size()));
    for (int k = 0; k < n; ++k) {
        int c = code.entries[static_cast<size_t>(k)];
        if (c < 0 || c > n - 1 - k)
            throw InvalidCode("entry " + std::to_string(c) + " at position " +
                              std::to_string(code.domain.lo + k) + " outside [0, " + std::to_string(n - 1 - k) + "]");
    }
    Fenwick unused(n);
    for (int v = 0; v < n; ++v) unused.add(v, 1);
    std::vector<int> vals(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        int v = unused.kth(code.entries[static_cast<size_t>(k)] + 1);
        vals[static_cast<size_t>(k)] = code.domain.lo + v;
        unused.add(v, -1);
    }
    return Permutation(code.domain, std::move(vals));
}

bool is_in_res(const Permutation& p, const Permutation& tau, Interval i) {
    const Interval inner = tau.domain();
    if (inner.lo != i.lo || inner.hi != i.hi)
        throw DomainMismatch("restriction domain " + inner.str() + " differs from " + i.str());
    if (!p.domain().contains(inner))
        throw DomainMismatch(inner.str() + " is not a subinterval of " + p.domain().str());
    for (int j = p.domain().lo; j <= p.domain().hi; ++j) {
        const int v = p(j);
        if (j < inner.lo) {
            if (v >= inner.lo) return false;
        } else if (j > inner.hi) {
            if (v <= inner.hi) return false;
        } else {
            if (v != tau(j)) return false;
        }
    }
    return true;
}

}  // namespace stablecut
