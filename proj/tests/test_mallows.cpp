#include <cmath>
#include <map>
#include <vector>

#include "doctest.h"
#include "stablecut/mallows.hpp"

namespace sc = stablecut;

namespace {

// Empirical total variation against an exact table keyed by value arrays.
double table_tv(const std::map<std::vector<int>, std::int64_t>& histogram,
                const std::vector<std::pair<std::vector<int>, double>>& table, std::int64_t samples) {
    double tv = 0.0;
    for (const auto& [values, prob] : table) {
        const auto it = histogram.find(values);
        const double freq = it == histogram.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(samples);
        tv += std::abs(freq - prob);
    }
    return tv / 2.0;
}

}  // namespace

TEST_SUITE("mallows") {

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(sc::MallowsParams(0.0), sc::BadParameter);
    CHECK_THROWS_AS(sc::MallowsParams(1.0), sc::BadParameter);
    CHECK_THROWS_AS(sc::MallowsParams(-0.2), sc::BadParameter);
    CHECK_THROWS_AS(sc::MallowsParams(1.7), sc::BadParameter);
    CHECK_NOTHROW(sc::MallowsParams(1e-300));
    CHECK_NOTHROW(sc::MallowsParams(0.999999));
}

TEST_CASE("partition function pinned values") {
    const sc::MallowsParams half(0.5);
    CHECK(sc::mallows_partition(half, 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sc::mallows_partition(half, 2) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(sc::mallows_partition(half, 3) == doctest::Approx(2.625).epsilon(1e-14));
    CHECK(sc::mallows_log_partition(half, 3) == doctest::Approx(std::log(2.625)).epsilon(1e-13));
    CHECK(sc::mallows_partition(half, 0) == 1.0);  // empty product
    CHECK(sc::mallows_log_partition(half, 0) == 0.0);
    CHECK_THROWS_AS(sc::mallows_partition(half, -1), sc::BadParameter);
}

TEST_CASE("partition overflow falls back to the log companion") {
    const sc::MallowsParams p(0.9);
    CHECK_THROWS_AS(sc::mallows_partition(p, 400), sc::Overflow);
    const double log_z = sc::mallows_log_partition(p, 400);
    CHECK(std::isfinite(log_z));
    // Each factor lies in [1, 1/(1-q)], so log Z <= n log 10 here.
    CHECK(log_z > 0.0);
    CHECK(log_z < 400 * std::log(10.0));
}

TEST_CASE("pmf pinned values and normalization") {
    const sc::MallowsParams half(0.5);
    CHECK(sc::mallows_pmf(half, sc::Permutation::identity(sc::Interval{1, 2})) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(sc::mallows_pmf(half, sc::Permutation::reversal(sc::Interval{1, 2})) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    double total = 0.0;
    for (const auto& [values, prob] : sc::exact_mallows_table(half, 4)) {
        (void)values;
        total += prob;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("phi pinned values") {
    CHECK(sc::phi_q(sc::MallowsParams(0.5)) == doctest::Approx(0.2887880950866024).epsilon(1e-10));
    CHECK(sc::phi_q(sc::MallowsParams(1e-12)) == doctest::Approx(1.0 - 1e-12).epsilon(1e-13));
    CHECK(sc::log_phi_q(sc::MallowsParams(0.5)) == doctest::Approx(std::log(0.2887880950866024)).epsilon(1e-10));
    double prev = 1.0;
    for (double q = 0.1; q < 0.95; q += 0.1) {
        const double value = sc::phi_q(sc::MallowsParams(q));
        CHECK(value < prev);
        CHECK(value > 0.0);
        prev = value;
    }
}

TEST_CASE("truncated geometric pinned pmf") {
    CHECK(sc::truncated_geometric_pmf(0.5, 2, 0) == doctest::Approx(4.0 / 7.0).epsilon(1e-14));
    CHECK(sc::truncated_geometric_pmf(0.5, 2, 1) == doctest::Approx(2.0 / 7.0).epsilon(1e-14));
    CHECK(sc::truncated_geometric_pmf(0.5, 2, 2) == doctest::Approx(1.0 / 7.0).epsilon(1e-14));
    for (int max_value : {0, 1, 2, 5, 9}) {
        for (double q : {0.1, 0.5, 0.9}) {
            double total = 0.0;
            for (int k = 0; k <= max_value; ++k) total += sc::truncated_geometric_pmf(q, max_value, k);
            CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("truncated geometric draws") {
    sc::RngStream degenerate(5, sc::StreamRole::Aux, 0, 0);
    for (int rep = 0; rep < 50; ++rep) CHECK(sc::truncated_geometric(0.7, 0, degenerate) == 0);
    sc::RngStream zero_q(5, sc::StreamRole::Aux, 1, 0);
    for (int rep = 0; rep < 50; ++rep) CHECK(sc::truncated_geometric(0.0, 4, zero_q) == 0);

    // Empirical CDF within 0.005 of the closed form at a million draws.
    const int max_value = 5;
    const double q = 0.5;
    std::vector<std::int64_t> counts(max_value + 1, 0);
    sc::RngStream rng(5, sc::StreamRole::Aux, 2, 0);
    const std::int64_t samples = 1'000'000;
    for (std::int64_t s = 0; s < samples; ++s) ++counts[static_cast<size_t>(sc::truncated_geometric(q, max_value, rng))];
    double cdf_exact = 0.0;
    double cdf_emp = 0.0;
    for (int k = 0; k <= max_value; ++k) {
        cdf_exact += sc::truncated_geometric_pmf(q, max_value, k);
        cdf_emp += static_cast<double>(counts[static_cast<size_t>(k)]) / static_cast<double>(samples);
        CHECK(std::abs(cdf_emp - cdf_exact) < 0.005);
    }
}

TEST_CASE("sampler degenerate cases and determinism") {
    const sc::Interval dom{1, 8};
    sc::RngStream single(11, sc::StreamRole::Permutation, 0, 0);
    CHECK(sc::sample_mallows(sc::MallowsParams(0.3), sc::Interval{4, 4}, single) ==
          sc::Permutation::identity(sc::Interval{4, 4}));

    for (int trial = 0; trial < 10'000; ++trial) {
        sc::RngStream rng(11, sc::StreamRole::Permutation, 0, trial);
        if (sc::sample_mallows(sc::MallowsParams(1e-9), dom, rng) != sc::Permutation::identity(dom)) {
            FAIL("non-identity draw at q = 1e-9, trial ", trial);
        }
    }

    sc::RngStream a(99, sc::StreamRole::Permutation, 7, 3);
    sc::RngStream b(99, sc::StreamRole::Permutation, 7, 3);
    for (int rep = 0; rep < 20; ++rep)
        CHECK(sc::sample_mallows(sc::MallowsParams(0.6), dom, a) == sc::sample_mallows(sc::MallowsParams(0.6), dom, b));

    const sc::MallowsSampler zero(0.0, dom);
    sc::RngStream c(1, sc::StreamRole::Permutation, 0, 0);
    CHECK(zero(c) == sc::Permutation::identity(dom));
    CHECK_THROWS_AS(sc::MallowsSampler(1.0, dom), sc::BadParameter);
}

TEST_CASE("exact table pinned values") {
    const sc::MallowsParams half(0.5);
    const auto two = sc::exact_mallows_table(half, 2);
    REQUIRE(two.size() == 2);
    CHECK(two[0].first == std::vector<int>{1, 2});
    CHECK(two[0].second == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(two[1].first == std::vector<int>{2, 1});
    CHECK(two[1].second == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    const auto one = sc::exact_mallows_table(half, 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0].second == doctest::Approx(1.0).epsilon(1e-14));

    // n = 3: weights q^inv with inv = 0,1,1,2,2,3 in value-array order, over Z = 2.625.
    const auto three = sc::exact_mallows_table(half, 3);
    REQUIRE(three.size() == 6);
    const std::vector<double> weights{1.0, 0.5, 0.5, 0.25, 0.25, 0.125};
    for (size_t k = 0; k < three.size(); ++k) CHECK(three[k].second == doctest::Approx(weights[k] / 2.625).epsilon(1e-13));

    CHECK_THROWS_AS(sc::exact_mallows_table(half, 9), sc::TooLarge);
    CHECK_THROWS_AS(sc::exact_mallows_table(half, 0), sc::EmptySubset);

    // Off-origin domains carry the same law up to translation.
    const auto shifted = sc::exact_mallows_table(half, sc::Interval{-1, 0});
    REQUIRE(shifted.size() == 2);
    CHECK(shifted[0].first == std::vector<int>{-1, 0});
    CHECK(shifted[0].second == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("sampled law matches the exact table") {
    const sc::MallowsParams half(0.5);
    const sc::Interval dom{1, 4};
    const auto table = sc::exact_mallows_table(half, dom);
    std::map<std::vector<int>, std::int64_t> histogram;
    const std::int64_t samples = 200'000;
    for (std::int64_t s = 0; s < samples; ++s) {
        sc::RngStream rng(17, sc::StreamRole::Permutation, 0, s);
        ++histogram[sc::sample_mallows(half, dom, rng).values()];
    }
    CHECK(table_tv(histogram, table, samples) < 0.01);
}

TEST_CASE("restriction of a sample is Mallows on the window") {
    const sc::MallowsParams params(0.6);
    const sc::Interval dom{1, 8};
    const sc::Interval window{3, 5};
    const auto table = sc::exact_mallows_table(params, window);
    std::map<std::vector<int>, std::int64_t> histogram;
    const std::int64_t samples = 100'000;
    for (std::int64_t s = 0; s < samples; ++s) {
        sc::RngStream rng(23, sc::StreamRole::Permutation, 0, s);
        ++histogram[sc::induced_permutation(sc::sample_mallows(params, dom, rng), window).values()];
    }
    CHECK(table_tv(histogram, table, samples) < 0.01);
}

TEST_CASE("conditioning on fixed blocks leaves independent Mallows restrictions") {
    // Rejection-sample permutations of [1,5] whose blocks around [2,3] are fixed
    // setwise; the restriction to [2,3] must then be Mallows on [2,3] and
    // independent of the upper block's restriction.
    const sc::MallowsParams params(0.5);
    const sc::Interval dom{1, 5};
    const sc::Interval inner{2, 3};
    const sc::Interval upper{4, 5};
    std::int64_t kept = 0;
    std::int64_t inner_swapped = 0, upper_swapped = 0, both_swapped = 0;
    const std::int64_t samples = 400'000;
    for (std::int64_t s = 0; s < samples; ++s) {
        sc::RngStream rng(31, sc::StreamRole::Permutation, 0, s);
        const auto pi = sc::sample_mallows(params, dom, rng);
        if (pi(1) != 1) continue;
        bool inner_fixed = pi(2) >= 2 && pi(2) <= 3 && pi(3) >= 2 && pi(3) <= 3;
        if (!inner_fixed) continue;
        ++kept;
        if (pi(2) == 3) ++inner_swapped;
        if (pi(4) == 5) ++upper_swapped;
        if (pi(2) == 3 && pi(4) == 5) ++both_swapped;
    }
    REQUIRE(kept > 50'000);
    const double n = static_cast<double>(kept);
    const double p_inner = static_cast<double>(inner_swapped) / n;
    const double p_upper = static_cast<double>(upper_swapped) / n;
    const double p_both = static_cast<double>(both_swapped) / n;
    // Marginal of the inner restriction: swap probability q / (1 + q) = 1/3.
    CHECK(std::abs(p_inner - 1.0 / 3.0) < 0.01);
    CHECK(std::abs(p_upper - 1.0 / 3.0) < 0.01);
    // Independence of the two restrictions.
    CHECK(std::abs(p_both - p_inner * p_upper) < 0.01);
}

TEST_CASE("block-fixing probability meets its closed-form floor") {
    // P(pi in Fix(I, J)) for J = [1,6], I = [3,4] is Z(2)^2 / Z(6) exactly;
    // the product floor q^0 (1-q)^2 phi(q) must sit below it.
    const sc::MallowsParams params(0.5);
    const double exact = sc::mallows_partition(params, 2) * sc::mallows_partition(params, 2) /
                         sc::mallows_partition(params, 6);
    // By hand: Z(1/2,2)^2 / Z(1/2,6) = (9/4) / (615195/32768) = 8192/68355.
    CHECK(exact == doctest::Approx(8192.0 / 68355.0).epsilon(1e-12));
    const double floor = std::pow(1.0 - params.q, 2) * sc::phi_q(params);
    CHECK(floor < exact);

    const sc::Interval dom{1, 6};
    const sc::Interval inner{3, 4};
    const auto tau = sc::Permutation::identity(inner);
    std::int64_t hits = 0;
    const std::int64_t samples = 200'000;
    for (std::int64_t s = 0; s < samples; ++s) {
        sc::RngStream rng(37, sc::StreamRole::Permutation, 0, s);
        if (sc::is_in_res(sc::sample_mallows(params, dom, rng), tau, inner)) ++hits;
    }
    const double empirical = static_cast<double>(hits) / static_cast<double>(samples);
    const double sigma = std::sqrt(exact * (1.0 - exact) / static_cast<double>(samples));
    CHECK(std::abs(empirical - exact) < 3.0 * sigma + 1e-9);
    CHECK(empirical > floor - 3.0 * sigma);
}

}  // TEST_SUITE
