#include "stablecut/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <thread>

namespace stablecut {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log of the bracket factor 1 - (4 q^(N/40) / (1 - q^(1/20)))^2, or -inf
/// when the factor is nonpositive.  log_b below is the log of the inner
/// fraction; the factor is positive iff the fraction is < 1.
double log_bracket(double q, int n_param) {
    const double log_q = std::log(q);
    // 1 - q^(1/20) = -expm1(log(q)/20), exact for q near 0 or 1.
    const double log_b = std::log(4.0) + n_param / 40.0 * log_q - std::log(-std::expm1(log_q / 20.0));
    if (log_b >= 0.0) return kNegInf;
    const double inner = std::exp(2.0 * log_b);
    if (inner >= 1.0) return kNegInf;
    return std::log1p(-inner);
}

/// Mean and standard error of a sample; std_err = 0 for a single point.
std::pair<double, double> mean_and_stderr(const std::vector<double>& xs) {
    const double k = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= k;
    if (xs.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (k - 1.0)) / std::sqrt(k)};
}

/// Runs body(0..count-1), on `threads` workers when threads > 1.  Any
/// escaping exception is rethrown for the lowest index that threw.
void run_indexed(int count, int threads, const std::function<void(int)>& body) {
    threads = std::max(1, std::min(threads, count));
    if (threads == 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(static_cast<size_t>(count));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            while (true) {
                const int i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    body(i);
                } catch (...) {
                    errors[static_cast<size_t>(i)] = std::current_exception();
                }
            }
        });
    for (std::thread& th : pool) th.join();
    for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);
}

/// Binomial sigma of an indicator mean at probability p over `samples`.
double binomial_sigma(double p, std::int64_t samples) {
    p = std::clamp(p, 0.0, 1.0);
    return std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
}

}  // namespace

BoundValue rho_lower_bound(const MallowsParams& params, int n_param) {
    if (n_param < 1) throw BadParameter("n_param must be >= 1");
    const double lb = log_bracket(params.q, n_param);
    if (lb == kNegInf) return {kNegInf, false};
    const double n = n_param;
    return {8.0 * n * n * std::log1p(-params.q) + 4.0 * n * log_phi_q(params) + lb, true};
}

BestBound rho_lower_bound_best(const MallowsParams& params, int n_max) {
    if (n_max < 1) throw BadParameter("n_max must be >= 1");
    const double log_q = std::log(params.q);
    const double log_phi = log_phi_q(params);
    const double log_one_minus_q = std::log1p(-params.q);
    const double log_den = std::log(-std::expm1(log_q / 20.0));
    BestBound best;
    best.bound = {kNegInf, false};
    for (int n = 1; n <= n_max; ++n) {
        const double log_b = std::log(4.0) + n / 40.0 * log_q - log_den;
        if (log_b >= 0.0) continue;
        const double inner = std::exp(2.0 * log_b);
        if (inner >= 1.0) continue;
        const double value = 8.0 * double(n) * n * log_one_minus_q + 4.0 * n * log_phi + std::log1p(-inner);
        if (!best.bound.finite || value > best.bound.log_value) best = {n, {value, true}};
    }
    if (!best.bound.finite)
        throw NoFiniteValue("no n in [1, " + std::to_string(n_max) + "] gives a positive bound at q = " +
                            std::to_string(params.q));
    return best;
}

BoundValue gadget_event_lower_bound(const MallowsParams& params, int n_param, int m) {
    if (n_param < 1) throw BadParameter("n_param must be >= 1");
    if (m < 2) throw BadParameter("m must be >= 2");
    const double lb = log_bracket(params.q, n_param);
    if (lb == kNegInf) return {kNegInf, false};
    const double w = n_param + m;
    return {2.0 * std::log(params.q) + 8.0 * w * w * std::log1p(-params.q) + 4.0 * w * log_phi_q(params) + lb, true};
}

BoundValue res_lower_bound(const MallowsParams& params, std::int64_t inv_tau, std::int64_t size_i) {
    if (inv_tau < 0) throw BadParameter("inv_tau must be >= 0");
    if (size_i < 1) throw BadParameter("size_i must be >= 1");
    return {static_cast<double>(inv_tau) * std::log(params.q) +
                static_cast<double>(size_i) * std::log1p(-params.q) + log_phi_q(params),
            true};
}

EstimateReport estimate_gamma(const GammaConfig& config) {
    if (config.n < 1) throw BadParameter("n must be >= 1");
    if (config.trials < 1) throw BadParameter("trials must be >= 1");
    const Interval dom(1, config.n);

    struct Slot {
        bool failed = false;
        TrialResult result;
    };
    std::vector<Slot> slots(static_cast<size_t>(config.trials));
    run_indexed(config.trials, config.threads, [&](int t) {
        Slot& slot = slots[static_cast<size_t>(t)];
        const PreferenceStructure prefs = sample_prefs(config.params, dom, config.master_seed, t);
        Budget budget(config.budget);
        try {
            const BlockDecomposition dec = decompose(prefs, config.method, &budget);
            TrialResult r;
            r.trial = t;
            r.label = "seed=" + std::to_string(config.master_seed) + ":trial=" + std::to_string(t);
            r.log_count = dec.total().log_value;
            r.block_count = static_cast<int>(dec.blocks.size());
            for (size_t b = 0; b < dec.blocks.size(); ++b) {
                r.max_block = std::max(r.max_block, dec.blocks[b].size());
                r.block_gammas.push_back(dec.per_block[b].log_value / dec.blocks[b].size());
            }
            slot.result = std::move(r);
        } catch (const BudgetExceeded&) {
            slot.failed = true;
        }
    });

    EstimateReport report;
    report.config = config;
    std::vector<double> gammas;
    for (int t = 0; t < config.trials; ++t) {
        Slot& slot = slots[static_cast<size_t>(t)];
        if (slot.failed) {
            report.failed_trials.push_back(t);
        } else {
            gammas.push_back(slot.result.log_count / config.n);
            report.per_trial.push_back(std::move(slot.result));
        }
    }
    report.failures = static_cast<int>(report.failed_trials.size());
    if (report.per_trial.empty())
        throw AllTrialsFailed("all " + std::to_string(config.trials) + " trials exhausted their budget");
    std::tie(report.gamma_hat, report.std_err) = mean_and_stderr(gammas);
    return report;
}

DensityReport estimate_cut_density(const DensityConfig& config) {
    if (config.n < 2) throw BadParameter("n must be >= 2");
    if (config.trials < 1) throw BadParameter("trials must be >= 1");
    const int margin = config.margin >= 0 ? config.margin : config.n / 10;
    const Interval dom(1, config.n);
    const int first = dom.lo + margin;
    const int last = dom.hi - 1 - margin;
    if (first > last) throw BadParameter("margin " + std::to_string(margin) + " leaves no candidate positions");

    DensityReport report;
    report.config = config;
    report.config.margin = margin;
    report.per_trial.assign(static_cast<size_t>(config.trials), 0.0);
    run_indexed(config.trials, config.threads, [&](int t) {
        const PreferenceStructure prefs = sample_prefs(config.params, dom, config.master_seed, t);
        std::vector<int> cuts;
        if (config.kind == CutKind::Certified) {
            cuts = certified_cuts(prefs);
        } else {
            Budget budget(kDefaultBudget);
            cuts = exact_cutpoints(prefs, &budget);
        }
        int ok = 0;
        for (int c : cuts)
            if (first <= c && c <= last) ++ok;
        report.per_trial[static_cast<size_t>(t)] = static_cast<double>(ok) / (last - first + 1);
    });
    std::tie(report.density_hat, report.std_err) = mean_and_stderr(report.per_trial);
    return report;
}

TailReport verify_offset_tail(const MallowsParams& params, int n, std::int64_t samples, std::uint64_t master_seed) {
    if (n < 2) throw BadParameter("n must be >= 2");
    if (samples < 10'000) throw BadParameter("samples must be >= 10000");
    const Interval dom(1, n);
    const int center = (dom.lo + dom.hi) / 2;
    constexpr int kMaxT = 10;
    // Largest pair gap that fits around the center: j = center - ceil(d/2)
    // and i = j + d must stay inside the domain.
    int max_gap = 0;
    for (int d = 1; d <= kMaxT; ++d) {
        const int j = center - (d + 1) / 2;
        if (j >= dom.lo && j + d <= dom.hi) max_gap = d;
    }

    std::vector<std::int64_t> off_hist(kMaxT + 1, 0);  // capped at kMaxT
    std::vector<std::int64_t> ls_hist(kMaxT + 1, 0);
    std::vector<std::int64_t> el_hist(kMaxT + 1, 0);
    std::vector<std::int64_t> pair_hits(static_cast<size_t>(max_gap) + 1, 0);

    const MallowsSampler sampler(params.q, dom);
    RngStream rng(master_seed, StreamRole::Permutation, 0, 0);
    for (std::int64_t s = 0; s < samples; ++s) {
        const Permutation pi = sampler(rng);
        const LStats stats = l_stats(pi, center);
        ls_hist[static_cast<size_t>(std::min(stats.later_smaller, kMaxT))] += 1;
        el_hist[static_cast<size_t>(std::min(stats.earlier_larger, kMaxT))] += 1;
        off_hist[static_cast<size_t>(std::min(std::max(stats.later_smaller, stats.earlier_larger), kMaxT))] += 1;
        for (int d = 1; d <= max_gap; ++d) {
            const int j = center - (d + 1) / 2;
            if (pi(j + d) <= pi(j)) pair_hits[static_cast<size_t>(d)] += 1;
        }
    }

    TailReport report;
    report.q = params.q;
    report.n = n;
    report.samples = samples;
    report.master_seed = master_seed;
    report.center = center;
    report.pass = true;
    const auto add_tail_family = [&](const std::string& family, const std::vector<std::int64_t>& hist, double factor) {
        std::int64_t at_least = samples;
        for (int t = 0; t <= kMaxT; ++t) {
            TailCheck check;
            check.family = family;
            check.t = t;
            check.empirical = static_cast<double>(at_least) / samples;
            check.bound = factor * std::pow(params.q, t);
            check.sigma = binomial_sigma(check.bound, samples);
            check.pass = check.empirical <= check.bound + 3.0 * check.sigma + 1e-12;
            report.pass = report.pass && check.pass;
            report.checks.push_back(std::move(check));
            at_least -= hist[static_cast<size_t>(t)];
        }
    };
    add_tail_family("offset", off_hist, 2.0);
    add_tail_family("later_smaller", ls_hist, 1.0);
    add_tail_family("earlier_larger", el_hist, 1.0);
    for (int d = 1; d <= max_gap; ++d) {
        TailCheck check;
        check.family = "pair_order";
        check.t = d;
        check.empirical = static_cast<double>(pair_hits[static_cast<size_t>(d)]) / samples;
        check.bound = 4.0 * std::pow(params.q, d);
        check.sigma = binomial_sigma(check.bound, samples);
        check.pass = check.empirical <= check.bound + 3.0 * check.sigma + 1e-12;
        report.pass = report.pass && check.pass;
        report.checks.push_back(std::move(check));
    }
    return report;
}

LawReport verify_mallows_law(const MallowsParams& params, int n, std::int64_t samples, std::uint64_t master_seed) {
    if (samples < 1) throw BadParameter("samples must be >= 1");
    const Interval dom(1, n);
    const auto table = exact_mallows_table(params, dom);  // throws TooLarge past n = 8
    std::map<std::vector<int>, size_t> row_of;
    for (size_t r = 0; r < table.size(); ++r) row_of[table[r].first] = r;

    std::vector<std::int64_t> joint_hits(table.size(), 0);
    std::vector<std::vector<std::int64_t>> code_hits(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) code_hits[static_cast<size_t>(k)].assign(static_cast<size_t>(n - k), 0);

    const MallowsSampler sampler(params.q, dom);
    RngStream rng(master_seed, StreamRole::Permutation, 0, 0);
    for (std::int64_t s = 0; s < samples; ++s) {
        const Permutation pi = sampler(rng);
        joint_hits[row_of.at(pi.values())] += 1;
        const LehmerCode code = lehmer_encode(pi);
        for (int k = 0; k < n; ++k) code_hits[static_cast<size_t>(k)][static_cast<size_t>(code.entries[static_cast<size_t>(k)])] += 1;
    }

    LawReport report;
    report.q = params.q;
    report.n = n;
    report.samples = samples;
    report.master_seed = master_seed;
    report.threshold = 0.01;
    double tv = 0.0;
    for (size_t r = 0; r < table.size(); ++r)
        tv += std::abs(static_cast<double>(joint_hits[r]) / samples - table[r].second);
    report.tv_joint = tv / 2.0;
    report.pass = report.tv_joint <= report.threshold;
    for (int k = 0; k < n; ++k) {
        double mtv = 0.0;
        const int max_entry = n - 1 - k;
        for (int v = 0; v <= max_entry; ++v)
            mtv += std::abs(static_cast<double>(code_hits[static_cast<size_t>(k)][static_cast<size_t>(v)]) / samples -
                            truncated_geometric_pmf(params.q, max_entry, v));
        report.lehmer_tv.push_back(mtv / 2.0);
        report.pass = report.pass && report.lehmer_tv.back() <= report.threshold;
    }
    return report;
}

DecayReport verify_restriction_offset_decay(const MallowsParams& params, int n, const std::vector<int>& margins,
                                            std::int64_t samples, std::uint64_t master_seed) {
    if (n < 2) throw BadParameter("n must be >= 2");
    if (samples < 1) throw BadParameter("samples must be >= 1");
    const Interval dom(1, n);
    const int center = (dom.lo + dom.hi) / 2;
    std::vector<Interval> windows;
    for (int m : margins) {
        if (m < 0) throw BadParameter("margins must be >= 0");
        const Interval window(dom.lo + m, dom.hi - m);
        if (window.size() < 1 || !window.contains(center))
            throw BadParameter("margin " + std::to_string(m) + " trims the center away");
        windows.push_back(window);
    }

    std::vector<std::int64_t> hits(margins.size(), 0);
    const MallowsSampler sampler(params.q, dom);
    RngStream rng(master_seed, StreamRole::Permutation, 0, 0);
    for (std::int64_t s = 0; s < samples; ++s) {
        const Permutation pi = sampler(rng);
        const int full = offset(pi, center);
        for (size_t k = 0; k < windows.size(); ++k) {
            if (windows[k] == dom) continue;  // restriction is the identity map
            if (full > offset(induced_permutation(pi, windows[k]), center)) hits[k] += 1;
        }
    }

    DecayReport report;
    report.q = params.q;
    report.n = n;
    report.samples = samples;
    report.master_seed = master_seed;
    report.center = center;
    for (size_t k = 0; k < margins.size(); ++k) {
        DecayPoint point;
        point.margin = margins[k];
        point.distance = std::min(center - (windows[k].lo - 1), (windows[k].hi + 1) - center);
        point.probability = static_cast<double>(hits[k]) / samples;
        point.sigma = binomial_sigma(point.probability, samples);
        report.points.push_back(point);
    }
    // Nonincreasing in distance within noise: compare consecutive points in
    // distance order; a shorter distance may only raise the probability.
    std::vector<const DecayPoint*> ordered;
    for (const DecayPoint& p : report.points) ordered.push_back(&p);
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const DecayPoint* a, const DecayPoint* b) { return a->distance > b->distance; });
    report.pass = true;
    for (size_t k = 1; k < ordered.size(); ++k) {
        const DecayPoint& far = *ordered[k - 1];
        const DecayPoint& near = *ordered[k];
        const double slack = 3.0 * std::sqrt(far.sigma * far.sigma + near.sigma * near.sigma);
        if (near.probability < far.probability - slack) report.pass = false;
    }
    return report;
}

}  // namespace stablecut
