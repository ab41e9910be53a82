#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stablecut/cutpoints.hpp"
#include "stablecut/mallows.hpp"

namespace stablecut {

/// A probability lower bound carried in natural-log form.  finite is false
/// exactly when the bound degenerates to a nonpositive value (its bracket
/// factor 1 - (4 q^(N/40) / (1 - q^(1/20)))^2 is <= 0); log_value is then
/// -infinity.
struct BoundValue {
    double log_value = 0.0;
    bool finite = true;
};

/// log of (1-q)^(8 N^2) * phi(q)^(4 N) * (1 - (4 q^(N/40) / (1 - q^(1/20)))^2),
/// a lower bound for the density of thresholds certified by the offset
/// certificate.  Entirely in log space; never underflows to -inf when the
/// bracket is positive.
BoundValue rho_lower_bound(const MallowsParams& params, int n_param);

struct BestBound {
    int best_n = 0;
    BoundValue bound;
};

/// Maximizes rho_lower_bound over n_param in [1, n_max]; returns the first
/// maximizing n.  Throws NoFiniteValue when every choice degenerates.
BestBound rho_lower_bound_best(const MallowsParams& params, int n_max);

/// log of q^2 (1-q)^(8 (N+m)^2) * phi(q)^(4 (N+m)) * (same bracket as
/// rho_lower_bound at N): the chance that a sampled window both reproduces
/// the planted two-person block on [-m, m] and satisfies the offset
/// certificate at +-(m + 1/2).  Requires m >= 2.
BoundValue gadget_event_lower_bound(const MallowsParams& params, int n_param, int m);

/// log of q^inv_tau * (1-q)^size_i * phi(q): a lower bound for the chance
/// that a Mallows draw fixes the complement parts of a window setwise and
/// restricts to a fixed pattern with inv_tau inversions on a subinterval of
/// size_i positions.  Always finite.
BoundValue res_lower_bound(const MallowsParams& params, std::int64_t inv_tau, std::int64_t size_i);

/// One growth-rate trial: an instance sampled under (master_seed, trial),
/// decomposed into blocks and counted exactly.
struct TrialResult {
    int trial = 0;
    std::string label;                // "seed=<master>:trial=<index>"
    double log_count = 0.0;           // log of the exact stable-matching count
    int block_count = 0;
    int max_block = 0;                // largest block size
    std::vector<double> block_gammas; // per-block log(count)/size diagnostics
};

struct GammaConfig {
    MallowsParams params{0.5};
    int n = 1;
    int trials = 1;
    std::uint64_t master_seed = 0;
    DecomposeMethod method = DecomposeMethod::Exact;
    std::uint64_t budget = kDefaultBudget;  // per trial
    int threads = 1;                        // affects speed only, never results
};

struct EstimateReport {
    GammaConfig config;
    std::vector<TrialResult> per_trial;  // successful trials in index order
    std::vector<int> failed_trials;      // budget-exhausted trial indices
    double gamma_hat = 0.0;              // mean of log_count / n
    double std_err = 0.0;                // sample stddev / sqrt(successes)
    int failures = 0;
};

/// Monte Carlo estimate of the exponential growth rate of the number of
/// stable matchings: per trial, sample an instance on [1, n], factor it into
/// blocks, count exactly, and record log(count)/n.  Trials that exhaust the
/// per-trial budget are recorded as failures, never dropped silently.
/// Throws AllTrialsFailed when no trial completes.  Bit-identical output for
/// any thread count.
EstimateReport estimate_gamma(const GammaConfig& config);

enum class CutKind { Certified, Exact };

struct DensityConfig {
    MallowsParams params{0.5};
    int n = 2;
    int trials = 1;
    std::uint64_t master_seed = 0;
    CutKind kind = CutKind::Certified;
    int margin = -1;  // boundary positions excluded per side; -1 = n / 10
    int threads = 1;
};

struct DensityReport {
    DensityConfig config;           // margin resolved to its effective value
    std::vector<double> per_trial;  // validated fraction per trial
    double density_hat = 0.0;
    double std_err = 0.0;
};

/// Fraction of candidate thresholds validated per instance, averaged over
/// seeded trials.  Candidates exclude `margin` positions at each end of the
/// window, since positions near the edge are biased toward the
/// infinite-volume density.  kind selects the certificate (Certified) or the
/// exact lattice test on the full window (Exact).
DensityReport estimate_cut_density(const DensityConfig& config);

/// One empirical tail comparison: P(statistic >= t) against a closed-form
/// bound, with the binomial sigma of the bound at the sample size.
struct TailCheck {
    std::string family;  // offset | later_smaller | earlier_larger | pair_order
    int t = 0;           // threshold, or index gap for pair_order
    double empirical = 0.0;
    double bound = 0.0;
    double sigma = 0.0;
    bool pass = true;  // empirical <= bound + 3 sigma
};

struct TailReport {
    double q = 0.0;
    int n = 0;
    std::int64_t samples = 0;
    std::uint64_t master_seed = 0;
    int center = 0;  // position j used for the single-position families
    std::vector<TailCheck> checks;
    bool pass = true;
};

/// Samples permutations of [1, n] and checks, at the center position and
/// for t = 0..10:   P(offset >= t) <= 2 q^t,
///                  P(later_smaller >= t) <= q^t,
///                  P(earlier_larger >= t) <= q^t,
/// and for gaps d:  P(pi(i) <= pi(j)) <= 4 q^d with i - j = d around the
/// center.  Each check passes iff empirical <= bound + 3 binomial sigma.
/// Requires samples >= 10^4.
TailReport verify_offset_tail(const MallowsParams& params, int n, std::int64_t samples, std::uint64_t master_seed);

struct LawReport {
    double q = 0.0;
    int n = 0;
    std::int64_t samples = 0;
    std::uint64_t master_seed = 0;
    double tv_joint = 0.0;          // empirical joint law vs exact table
    std::vector<double> lehmer_tv;  // per-position code-entry marginal vs
                                    // the truncated-geometric closed form
    double threshold = 0.0;         // pinned at 0.01
    bool pass = true;
};

/// Distributional exactness of the sampler on a small domain (n <= 8): total
/// variation of the empirical joint law against the exact table, and of each
/// positional code-entry marginal against its closed form, all <= 0.01.
LawReport verify_mallows_law(const MallowsParams& params, int n, std::int64_t samples, std::uint64_t master_seed);

struct DecayPoint {
    int margin = 0;      // positions trimmed from each side of the window
    int distance = 0;    // distance from the center to outside the window
    double probability = 0.0;  // P(offset(pi, j) > offset(pi_I, j))
    double sigma = 0.0;
};

struct DecayReport {
    double q = 0.0;
    int n = 0;
    std::int64_t samples = 0;
    std::uint64_t master_seed = 0;
    int center = 0;
    std::vector<DecayPoint> points;  // in the order the margins were given
    bool pass = true;
};

/// Estimates how often restriction changes the offset at the center: for
/// each margin, I trims that many positions from each side of [1, n] and the
/// probability P(offset(pi, j) > offset(pi_I, j)) is measured at j = center.
/// Margin 0 gives exactly 0.  Passes iff the probability is nonincreasing in
/// the distance from the center to the trimmed boundary, up to 3 sigma per
/// consecutive comparison.
DecayReport verify_restriction_offset_decay(const MallowsParams& params, int n, const std::vector<int>& margins,
                                            std::int64_t samples, std::uint64_t master_seed);

}  // namespace stablecut
