#include "stablecut/mallows.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace stablecut {

double mallows_partition(const MallowsParams& params, int n) {
    if (n < 0) throw BadParameter("n must be nonnegative");
    const double q = params.q;
    double z = 1.0;
    double qk = 1.0;
    double block = 0.0;  // 1 + q + ... + q^(k-1), built incrementally
    for (int k = 1; k <= n; ++k) {
        block += qk;
        qk *= q;
        z *= block;
        if (std::isinf(z)) throw Overflow("partition exceeds double range at n = " + std::to_string(k));
    }
    return z;
}

double mallows_log_partition(const MallowsParams& params, int n) {
    if (n < 0) throw BadParameter("n must be nonnegative");
    const double q = params.q;
    const double log_one_minus_q = std::log1p(-q);
    double acc = -static_cast<double>(n) * log_one_minus_q;
    double qk = 1.0;
    for (int k = 1; k <= n; ++k) {
        qk *= q;
        if (qk < 1e-19 * (1.0 - q)) {
            // Remaining terms total less than q^(k+1)/(1-q), already negligible.
            acc += std::log1p(-qk);
            break;
        }
        acc += std::log1p(-qk);
    }
    return acc;
}

double mallows_pmf(const MallowsParams& params, const Permutation& p) {
    const double log_pmf =
        static_cast<double>(inversion_number(p)) * std::log(params.q) - mallows_log_partition(params, p.size());
    return std::exp(log_pmf);
}

double log_phi_q(const MallowsParams& params) {
    const double q = params.q;
    const double tail_scale = (1.0 - q) * (1.0 - q);
    double acc = 0.0;
    double qk = 1.0;
    for (;;) {
        qk *= q;
        acc += std::log1p(-qk);
        if (qk * q / tail_scale < 1e-14) break;  // dropped tail below relative 1e-14
    }
    return acc;
}

double phi_q(const MallowsParams& params) { return std::exp(log_phi_q(params)); }

int truncated_geometric(double q, int max_value, RngStream& rng) {
    if (!(q >= 0.0) || q >= 1.0) throw BadParameter("truncated_geometric needs 0 <= q < 1");
    if (max_value < 0) throw BadParameter("max_value must be nonnegative");
    const double u = rng.next_unit();
    if (q == 0.0 || max_value == 0) return 0;
    const double log_q = std::log(q);
    const double p1 = 1.0 - std::pow(q, max_value + 1);
    const auto cdf = [&](int k) { return (1.0 - std::pow(q, k + 1)) / p1; };
    const double w = 1.0 - u * p1;
    const double kd = std::ceil(std::log(w) / log_q - 1.0);  // may be inf when w underflows
    int k = (kd > 0.0) ? (kd >= static_cast<double>(max_value) ? max_value : static_cast<int>(kd)) : 0;
    // Guard the closed form against floating-point edges: the result must be
    // the smallest k with u < cdf(k).
    while (k > 0 && u < cdf(k - 1)) --k;
    while (k < max_value && u >= cdf(k)) ++k;
    return k;
}

double truncated_geometric_pmf(double q, int max_value, int k) {
    if (!(q >= 0.0) || q >= 1.0) throw BadParameter("truncated_geometric_pmf needs 0 <= q < 1");
    if (k < 0 || k > max_value) return 0.0;
    if (q == 0.0) return k == 0 ? 1.0 : 0.0;
    return std::pow(q, k) * (1.0 - q) / (1.0 - std::pow(q, max_value + 1));
}

MallowsSampler::MallowsSampler(double q, Interval domain) : q_(q), domain_(domain) {
    if (!(q >= 0.0) || q >= 1.0) throw BadParameter("sampler needs 0 <= q < 1, got " + std::to_string(q));
    if (domain.is_empty()) throw EmptySubset("sampler domain must be nonempty");
}

Permutation MallowsSampler::operator()(RngStream& rng) const {
    if (q_ == 0.0) return Permutation::identity(domain_);
    const int n = domain_.size();
    LehmerCode code{domain_, std::vector<int>(static_cast<size_t>(n))};
    for (int k = 0; k < n; ++k) code.entries[static_cast<size_t>(k)] = truncated_geometric(q_, n - 1 - k, rng);
    return lehmer_decode(code);
}

Permutation sample_mallows(const MallowsParams& params, Interval domain, RngStream& rng) {
    return MallowsSampler(params.q, domain)(rng);
}

std::vector<std::pair<std::vector<int>, double>> exact_mallows_table(const MallowsParams& params, Interval domain) {
    if (domain.is_empty()) throw EmptySubset("table domain must be nonempty");
    if (domain.size() > 8) throw TooLarge("exact table limited to domains of size 8");
    const double z = mallows_partition(params, domain.size());
    std::vector<int> vals(static_cast<size_t>(domain.size()));
    std::iota(vals.begin(), vals.end(), domain.lo);
    std::vector<std::pair<std::vector<int>, double>> table;
    do {
        const Permutation p(domain, vals);
        table.emplace_back(vals, std::pow(params.q, static_cast<double>(inversion_number(p))) / z);
    } while (std::next_permutation(vals.begin(), vals.end()));
    return table;  // next_permutation order is lexicographic already
}

std::vector<std::pair<std::vector<int>, double>> exact_mallows_table(const MallowsParams& params, int n) {
    return exact_mallows_table(params, Interval(1, n));
}

}  // namespace stablecut
