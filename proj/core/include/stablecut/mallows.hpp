#pragma once

#include <utility>
#include <vector>

#include "stablecut/permutation.hpp"
#include "stablecut/rng.hpp"

namespace stablecut {

/// Parameters of the Mallows law with weight proportional to q^(inversions).
/// Only 0 < q < 1 is admissible here; the q = 0 boundary is served by
/// MallowsSampler, which degenerates to the identity permutation.
struct MallowsParams {
    double q;

    explicit MallowsParams(double q_) : q(q_) {
        if (!(q > 0.0) || !(q < 1.0))
            throw BadParameter("q must lie strictly between 0 and 1, got " + std::to_string(q_));
    }
};

/// Normalizing constant: the product over k = 1..n of (1 + q + ... + q^(k-1)).
/// Throws Overflow once the value leaves double range; use the log companion.
double mallows_partition(const MallowsParams& params, int n);

/// log of mallows_partition, computed stably term by term.
double mallows_log_partition(const MallowsParams& params, int n);

/// Probability of a permutation: q^(inversions) / partition.
double mallows_pmf(const MallowsParams& params, const Permutation& p);

/// Infinite product phi(q) = prod_{k >= 1} (1 - q^k), truncated once the
/// dropped tail changes the result by a relative 1e-14 or less
/// (-log prod_{k > K} (1 - q^k) <= q^(K+1) / (1 - q)^2).
double phi_q(const MallowsParams& params);
double log_phi_q(const MallowsParams& params);

/// Draw from the geometric-like law on {0, ..., max_value} with
/// P(L >= k) = (q^k + ... + q^max) / (1 + q + ... + q^max), by exact
/// closed-form inversion of one uniform draw.  Accepts q = 0 (returns 0).
int truncated_geometric(double q, int max_value, RngStream& rng);

/// P(L = k) for the law above.
double truncated_geometric_pmf(double q, int max_value, int k);

/// Exact sampler for the Mallows law on a fixed domain.  Draws one Lehmer
/// code entry per position (a truncated geometric) and decodes.  q may be 0,
/// in which case every draw is the identity; 0 <= q < 1 is required.
class MallowsSampler {
public:
    MallowsSampler(double q, Interval domain);

    Permutation operator()(RngStream& rng) const;

    double q() const { return q_; }
    const Interval& domain() const { return domain_; }

private:
    double q_;
    Interval domain_;
};

/// One Mallows draw on `domain`.
Permutation sample_mallows(const MallowsParams& params, Interval domain, RngStream& rng);

/// Full probability table on a domain of size <= 8 (TooLarge otherwise),
/// normalized by mallows_partition and sorted by value array.
std::vector<std::pair<std::vector<int>, double>> exact_mallows_table(const MallowsParams& params, Interval domain);

/// Convenience overload on [1, n].
std::vector<std::pair<std::vector<int>, double>> exact_mallows_table(const MallowsParams& params, int n);

}  // namespace stablecut
