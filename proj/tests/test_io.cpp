#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "stablecut/io.hpp"
#include "stablecut/prefs.hpp"

namespace sc = stablecut;
using nlohmann::json;

namespace {

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

/// Asserts the parse fails and the diagnostic carries both the source path
/// and the expected JSON pointer.
template <typename F>
void check_parse_error(F&& parse, const std::string& fragment) {
    try {
        parse();
        FAIL_CHECK("expected ParseError mentioning '" << fragment << "'");
    } catch (const sc::ParseError& e) {
        CHECK(contains(e.what(), "in.json"));
        CHECK(contains(e.what(), fragment));
    }
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("permutation JSON is canonical, newline-terminated bytes") {
    const auto p = sc::make_permutation(sc::Interval{1, 3}, {2, 1, 3});
    CHECK(sc::to_json(p) == "{\"version\":\"stablecut 0.1.0\",\"domain\":[1,3],\"values\":[2,1,3]}\n");
    CHECK(sc::to_json(p, 0.5, 7) ==
          "{\"version\":\"stablecut 0.1.0\",\"domain\":[1,3],\"q\":0.5,\"seed\":7,\"values\":[2,1,3]}\n");
    CHECK(sc::permutation_from_json(sc::to_json(p, 0.5, 7)) == p);

    const auto shifted = sc::make_permutation(sc::Interval{-1, 1}, {0, -1, 1});
    CHECK(sc::permutation_from_json(sc::to_json(shifted)) == shifted);
    // Unknown sibling fields are ignored.
    CHECK(sc::permutation_from_json("{\"domain\":[1,2],\"values\":[2,1],\"note\":\"x\"}") ==
          sc::make_permutation(sc::Interval{1, 2}, {2, 1}));
}

TEST_CASE("permutation parse diagnostics carry path and pointer") {
    check_parse_error([] { sc::permutation_from_json("{nope", "in.json"); }, "not valid JSON");
    check_parse_error([] { sc::permutation_from_json("{\"domain\":[1,2]}", "in.json"); }, "/values: missing");
    check_parse_error([] { sc::permutation_from_json("{\"domain\":[1,2],\"values\":[1,\"x\"]}", "in.json"); },
                      "/values/1");
    check_parse_error([] { sc::permutation_from_json("{\"domain\":[1,2],\"values\":[1,1]}", "in.json"); },
                      "/values");
    check_parse_error([] { sc::permutation_from_json("{\"domain\":[1,2,3],\"values\":[1,2]}", "in.json"); },
                      "/domain");
    check_parse_error([] { sc::permutation_from_json("{\"domain\":[3,1],\"values\":[1,2]}", "in.json"); },
                      "/domain: lo exceeds hi");
    check_parse_error([] { sc::permutation_from_json("[1,2]", "in.json"); }, "expected an object");
}

TEST_CASE("preference JSON round-trips with provenance") {
    const auto prefs = sc::gadget_structure(2);
    const std::string text = sc::to_json(prefs, 0.3, 99);
    CHECK(text.back() == '\n');
    const sc::PrefsFile file = sc::prefs_from_json(text, "in.json");
    CHECK(file.prefs == prefs);
    REQUIRE(file.q.has_value());
    CHECK(*file.q == 0.3);
    REQUIRE(file.seed.has_value());
    CHECK(*file.seed == 99);
    // Re-serializing the parsed structure reproduces the bytes.
    CHECK(sc::to_json(file.prefs, file.q, file.seed) == text);

    const sc::PrefsFile bare = sc::prefs_from_json(sc::to_json(prefs));
    CHECK(bare.prefs == prefs);
    CHECK(!bare.q.has_value());
    CHECK(!bare.seed.has_value());
}

TEST_CASE("preference parse diagnostics point into the offending row") {
    const std::string good = sc::to_json(sc::identity_prefs(sc::Interval{1, 2}));
    json doc = json::parse(good);

    json short_row = doc;
    short_row["women"][0] = json::array({1});
    check_parse_error([&] { sc::prefs_from_json(short_row.dump(), "in.json"); }, "/women/0");

    json bad_count = doc;
    bad_count["men"].erase(1);
    check_parse_error([&] { sc::prefs_from_json(bad_count.dump(), "in.json"); }, "/men");

    json missing = doc;
    missing.erase("men");
    check_parse_error([&] { sc::prefs_from_json(missing.dump(), "in.json"); }, "/men: missing");

    json bad_q = doc;
    bad_q["q"] = "half";
    check_parse_error([&] { sc::prefs_from_json(bad_q.dump(), "in.json"); }, "/q");
}

TEST_CASE("preference CSV has one row per person with rank columns") {
    CHECK(sc::prefs_to_csv(sc::identity_prefs(sc::Interval{1, 2})) ==
          "role,index,r1,r2\n"
          "woman,1,1,2\n"
          "woman,2,1,2\n"
          "man,1,1,2\n"
          "man,2,1,2\n");
}

TEST_CASE("matching JSON round-trips") {
    const sc::Matching m(sc::make_permutation(sc::Interval{1, 2}, {2, 1}));
    CHECK(sc::to_json(m) == "{\"version\":\"stablecut 0.1.0\",\"domain\":[1,2],\"partner_of_woman\":[2,1]}\n");
    CHECK(sc::matching_from_json(sc::to_json(m)) == m);
    check_parse_error([] { sc::matching_from_json("{\"domain\":[1,2]}", "in.json"); },
                      "/partner_of_woman: missing");
    check_parse_error([] { sc::matching_from_json("{\"domain\":[1,2],\"partner_of_woman\":[1,1]}", "in.json"); },
                      "/partner_of_woman");
}

TEST_CASE("enumerated matchings serialize to JSON and CSV") {
    const auto prefs = sc::with_swap_gadget(sc::identity_prefs(sc::Interval{1, 2}), 1);
    const auto list = sc::enumerate_stable(prefs);
    REQUIRE(list.size() == 2);
    const std::string text = sc::matchings_to_json(list, prefs.domain());
    CHECK(text ==
          "{\"version\":\"stablecut 0.1.0\",\"domain\":[1,2],\"count\":2,\"matchings\":[[1,2],[2,1]]}\n");
    CHECK(sc::matchings_to_csv(list, prefs.domain()) == "w1,w2\n1,2\n2,1\n");
}

TEST_CASE("decomposition JSON carries decimal block counts") {
    const auto dec = sc::decompose(sc::gadget_structure(2), sc::DecomposeMethod::Exact);
    const json j = json::parse(sc::to_json(dec));
    CHECK(j["version"] == "stablecut 0.1.0");
    CHECK(j["method"] == "exact");
    CHECK(j["domain"] == json::array({-2, 2}));
    REQUIRE(j["blocks"].is_array());
    CHECK(j["blocks"].size() == j["block_counts"].size());
    long long product = 1;
    for (const auto& c : j["block_counts"]) {
        REQUIRE(c.is_string());
        product *= std::stoll(c.get<std::string>());
    }
    CHECK(product == 2);
    CHECK(j["total_log_count"].get<double>() == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("growth report serializes to JSON and CSV deterministically") {
    sc::GammaConfig config;
    config.params = sc::MallowsParams(0.5);
    config.n = 10;
    config.trials = 3;
    config.master_seed = 11;
    const auto report = sc::estimate_gamma(config);

    const std::string csv = sc::to_csv(report);
    const auto header_end = csv.find('\n');
    CHECK(csv.substr(0, header_end) == "q,n,trial,log_count,blocks,max_block,seed,method,version");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + static_cast<long>(report.per_trial.size()));
    CHECK(contains(csv, "0.5,10,0,"));
    CHECK(contains(csv, ",11,exact,stablecut 0.1.0"));

    const json j = json::parse(sc::to_json(report));
    CHECK(j["config"]["q"] == 0.5);
    CHECK(j["config"]["n"] == 10);
    CHECK(j["config"]["seed"] == 11);
    CHECK(j["config"]["method"] == "exact");
    CHECK(j["failures"] == 0);
    CHECK(j["per_trial"].size() == report.per_trial.size());
    CHECK(j["per_trial"][0]["label"] == "seed=11:trial=0");

    config.threads = 4;
    const auto threaded = sc::estimate_gamma(config);
    // CSV omits the thread count and must be byte-identical; JSON echoes the
    // requested threads in the config block but nothing else may move.
    CHECK(sc::to_csv(threaded) == csv);
    json jt = json::parse(sc::to_json(threaded));
    json j1 = json::parse(sc::to_json(report));
    CHECK(jt["config"]["threads"] == 4);
    jt["config"].erase("threads");
    j1["config"].erase("threads");
    CHECK(jt == j1);
}

TEST_CASE("density, tail, law, and decay reports are valid JSON") {
    sc::DensityConfig dcfg;
    dcfg.params = sc::MallowsParams(0.3);
    dcfg.n = 12;
    dcfg.trials = 2;
    dcfg.master_seed = 1;
    const json dj = json::parse(sc::to_json(sc::estimate_cut_density(dcfg)));
    CHECK(dj["config"]["kind"] == "certified");
    CHECK(dj["config"]["margin"] == 1);
    CHECK(dj["per_trial"].size() == 2);

    const json tj = json::parse(sc::to_json(sc::verify_offset_tail(sc::MallowsParams(0.5), 21, 20'000, 5)));
    CHECK(tj["center"] == 11);
    CHECK(!tj["checks"].empty());

    const json lj = json::parse(sc::to_json(sc::verify_mallows_law(sc::MallowsParams(0.5), 3, 20'000, 5)));
    CHECK(lj["threshold"] == 0.01);
    CHECK(lj["lehmer_tv"].is_array());

    const json yj = json::parse(
        sc::to_json(sc::verify_restriction_offset_decay(sc::MallowsParams(0.5), 15, {3, 5}, 5'000, 5)));
    REQUIRE(yj["points"].size() == 2);
    CHECK(yj["points"][0]["margin"] == 3);
}

TEST_CASE("exact probability tables key by the compact value array") {
    const auto table = sc::exact_mallows_table(sc::MallowsParams(0.5), 2);
    const json j = json::parse(sc::exact_table_to_json(table));
    REQUIRE(j.contains("[1,2]"));
    REQUIRE(j.contains("[2,1]"));
    CHECK(j["[1,2]"].get<double>() == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(j["[2,1]"].get<double>() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("method and kind names round-trip") {
    for (auto method : {sc::DecomposeMethod::Certified, sc::DecomposeMethod::Exact, sc::DecomposeMethod::Auto})
        CHECK(sc::method_from_name(sc::method_name(method)) == method);
    for (auto kind : {sc::CutKind::Certified, sc::CutKind::Exact})
        CHECK(sc::kind_from_name(sc::kind_name(kind)) == kind);
    CHECK(sc::method_name(sc::DecomposeMethod::Exact) == "exact");
    CHECK(sc::kind_name(sc::CutKind::Certified) == "certified");
    CHECK_THROWS_AS(sc::method_from_name("fast"), sc::BadParameter);
    CHECK_THROWS_AS(sc::kind_from_name(""), sc::BadParameter);
}

TEST_CASE("format_double is shortest-round-trip and total") {
    CHECK(sc::format_double(0.5) == "0.5");
    CHECK(sc::format_double(1e-60) == "1e-60");
    CHECK(sc::format_double(0.0) == "0");
    CHECK(sc::format_double(-2.0) == "-2");
    CHECK(sc::format_double(std::log(2.0)) == "0.6931471805599453");
    CHECK(sc::format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(sc::format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(sc::format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(std::stod(sc::format_double(0.1)) == 0.1);
}

}  // TEST_SUITE
