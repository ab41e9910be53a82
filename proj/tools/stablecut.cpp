// Command-line surface: every subcommand prints exactly one machine-readable
// document to stdout (or --out) and human diagnostics to stderr.
// Exit codes: 0 success, 2 validation/usage error, 3 work budget exhausted.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "stablecut/analysis.hpp"
#include "stablecut/io.hpp"
#include "stablecut/version.hpp"

namespace sc = stablecut;
using ordered_json = nlohmann::ordered_json;

namespace {

struct Opts {
    double q = 0.5;
    int n = 10;
    std::uint64_t seed = 0;
    int trials = 10;
    std::string method = "exact";
    std::uint64_t budget = sc::kDefaultBudget;
    std::uint64_t limit = sc::kDefaultEnumerationLimit;
    std::string format = "json";
    std::string out;
    int margin = -1;
    std::vector<int> margins{0, 5, 10, 15, 20};
    int threads = 1;
    std::int64_t samples = 100'000;
    std::string prefs_path;
    std::string proposing = "men";
    int n_param = 1;
    int n_max = 5000;
    int gadget_m = 2;
    std::int64_t inv_tau = 0;
    std::int64_t size_i = 1;
    bool rho = false;
    bool rho_best = false;
    bool gadget_event = false;
    bool res = false;
};

/// The one machine document of this invocation: --out file when given,
/// stdout otherwise.
void emit(const std::string& document, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << document;
        return;
    }
    std::ofstream file(out_path, std::ios::binary);
    if (!file) throw sc::ParseError(out_path + ": cannot open for writing");
    file << document;
    if (!file) throw sc::ParseError(out_path + ": write failed");
}

std::string slurp(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw sc::ParseError(path + ": cannot open");
    std::ostringstream buf;
    buf << file.rdbuf();
    return buf.str();
}

sc::PrefsFile load_prefs(const std::string& path) { return sc::prefs_from_json(slurp(path), path); }

void run_sample_perm(const Opts& o) {
    const sc::MallowsParams params(o.q);
    sc::RngStream rng(o.seed, sc::StreamRole::Permutation, 0, 0);
    const sc::Permutation pi = sc::sample_mallows(params, sc::Interval(1, o.n), rng);
    emit(sc::to_json(pi, o.q, o.seed), o.out);
    std::cerr << "sampled a Mallows(q=" << sc::format_double(o.q) << ") permutation of [1, " << o.n << "]\n";
}

void run_sample_prefs(const Opts& o) {
    const sc::MallowsParams params(o.q);
    const sc::PreferenceStructure prefs = sc::sample_prefs(params, sc::Interval(1, o.n), o.seed);
    if (o.format == "csv")
        emit(sc::prefs_to_csv(prefs), o.out);
    else
        emit(sc::to_json(prefs, o.q, o.seed), o.out);
    std::cerr << "sampled preference structure on [1, " << o.n << "], q=" << sc::format_double(o.q)
              << ", seed=" << o.seed << "\n";
}

void run_gale_shapley(const Opts& o) {
    const sc::PrefsFile file = load_prefs(o.prefs_path);
    const sc::Role role = o.proposing == "women" ? sc::Role::Woman : sc::Role::Man;
    const sc::Matching matching = sc::gale_shapley(file.prefs, role);
    emit(sc::to_json(matching), o.out);
    std::cerr << o.proposing << "-proposing deferred acceptance on " << file.prefs.domain().str() << "\n";
}

void run_enumerate(const Opts& o) {
    const sc::PrefsFile file = load_prefs(o.prefs_path);
    sc::Budget budget(o.budget);
    const std::vector<sc::Matching> list = sc::enumerate_stable(file.prefs, o.limit, &budget);
    if (o.format == "csv")
        emit(sc::matchings_to_csv(list, file.prefs.domain()), o.out);
    else
        emit(sc::matchings_to_json(list, file.prefs.domain()), o.out);
    std::cerr << list.size() << " stable matchings on " << file.prefs.domain().str() << "\n";
}

void run_count(const Opts& o) {
    const sc::PrefsFile file = load_prefs(o.prefs_path);
    sc::Budget budget(o.budget);
    const sc::StableCount count = sc::count_stable(file.prefs, &budget);
    emit(count.decimal() + "\n", o.out);
    std::cerr << "exact stable-matching count on " << file.prefs.domain().str() << "\n";
}

void run_cutpoints(const Opts& o) {
    const sc::PrefsFile file = load_prefs(o.prefs_path);
    std::vector<int> cuts;
    if (o.method == "certified") {
        cuts = sc::certified_cuts(file.prefs);
    } else if (o.method == "exact") {
        sc::Budget budget(o.budget);
        cuts = sc::exact_cutpoints(file.prefs, &budget);
    } else {
        throw sc::BadParameter("cutpoints expects --method certified or exact");
    }
    ordered_json j;
    j["version"] = sc::kVersion;
    j["domain"] = ordered_json::array({file.prefs.domain().lo, file.prefs.domain().hi});
    j["method"] = o.method;
    j["cuts"] = cuts;
    emit(j.dump() + "\n", o.out);
    std::cerr << cuts.size() << " " << o.method << " cut positions on " << file.prefs.domain().str() << "\n";
}

void run_decompose(const Opts& o) {
    const sc::PrefsFile file = load_prefs(o.prefs_path);
    sc::Budget budget(o.budget);
    const sc::BlockDecomposition dec = sc::decompose(file.prefs, sc::method_from_name(o.method), &budget);
    emit(sc::to_json(dec), o.out);
    std::cerr << dec.blocks.size() << " blocks, total log count " << sc::format_double(dec.total().log_value) << "\n";
}

void run_estimate_gamma(const Opts& o) {
    sc::GammaConfig config{sc::MallowsParams(o.q), o.n, o.trials, o.seed, sc::method_from_name(o.method), o.budget,
                           o.threads};
    const sc::EstimateReport report = sc::estimate_gamma(config);
    emit(o.format == "csv" ? sc::to_csv(report) : sc::to_json(report), o.out);
    std::cerr << "gamma_hat=" << sc::format_double(report.gamma_hat) << " std_err=" << sc::format_double(report.std_err)
              << " failures=" << report.failures << "\n";
}

void run_estimate_rho(const Opts& o) {
    sc::DensityConfig config{sc::MallowsParams(o.q), o.n,      o.trials, o.seed,
                             sc::kind_from_name(o.method),     o.margin, o.threads};
    const sc::DensityReport report = sc::estimate_cut_density(config);
    emit(sc::to_json(report), o.out);
    std::cerr << "density_hat=" << sc::format_double(report.density_hat)
              << " std_err=" << sc::format_double(report.std_err) << "\n";
}

void run_bounds(const Opts& o) {
    const int chosen = int(o.rho) + int(o.rho_best) + int(o.gadget_event) + int(o.res);
    if (chosen != 1)
        throw sc::BadParameter("bounds expects exactly one of --rho, --rho-best, --gadget-event, --res");
    const sc::MallowsParams params(o.q);
    ordered_json j;
    j["version"] = sc::kVersion;
    j["q"] = o.q;
    sc::BoundValue bound;
    if (o.rho) {
        j["kind"] = "rho";
        j["N"] = o.n_param;
        bound = sc::rho_lower_bound(params, o.n_param);
    } else if (o.rho_best) {
        j["kind"] = "rho_best";
        j["n_max"] = o.n_max;
        const sc::BestBound best = sc::rho_lower_bound_best(params, o.n_max);
        j["best_n"] = best.best_n;
        bound = best.bound;
    } else if (o.gadget_event) {
        j["kind"] = "gadget_event";
        j["N"] = o.n_param;
        j["m"] = o.gadget_m;
        bound = sc::gadget_event_lower_bound(params, o.n_param, o.gadget_m);
    } else {
        j["kind"] = "res";
        j["inv"] = o.inv_tau;
        j["size"] = o.size_i;
        bound = sc::res_lower_bound(params, o.inv_tau, o.size_i);
    }
    j["finite"] = bound.finite;
    if (bound.finite) {
        j["log_value"] = bound.log_value;
        j["value"] = std::exp(bound.log_value);  // may underflow to 0; log_value is exact
    } else {
        j["log_value"] = nullptr;
        j["value"] = 0.0;
    }
    emit(j.dump() + "\n", o.out);
    if (bound.finite)
        std::cerr << j["kind"].get<std::string>() << " lower bound: " << sc::format_double(std::exp(bound.log_value))
                  << " (log " << sc::format_double(bound.log_value) << ")\n";
    else
        std::cerr << j["kind"].get<std::string>() << " lower bound degenerates (bracket <= 0)\n";
}

void run_verify_tails(const Opts& o) {
    const sc::TailReport report = sc::verify_offset_tail(sc::MallowsParams(o.q), o.n, o.samples, o.seed);
    emit(sc::to_json(report), o.out);
    std::cerr << "tail checks " << (report.pass ? "pass" : "FAIL") << " at q=" << sc::format_double(o.q) << "\n";
}

void run_verify_law(const Opts& o) {
    const sc::LawReport report = sc::verify_mallows_law(sc::MallowsParams(o.q), o.n, o.samples, o.seed);
    emit(sc::to_json(report), o.out);
    std::cerr << "law check " << (report.pass ? "pass" : "FAIL")
              << " tv_joint=" << sc::format_double(report.tv_joint) << "\n";
}

void run_verify_decay(const Opts& o) {
    const sc::DecayReport report =
        sc::verify_restriction_offset_decay(sc::MallowsParams(o.q), o.n, o.margins, o.samples, o.seed);
    emit(sc::to_json(report), o.out);
    std::cerr << "restriction decay " << (report.pass ? "pass" : "FAIL") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stablecut: stable matchings of Mallows preference structures"};
    app.require_subcommand(1);
    Opts o;

    const auto add_q = [&](CLI::App* sub) { sub->add_option("--q", o.q, "Mallows parameter in (0,1)"); };
    const auto add_n = [&](CLI::App* sub) { sub->add_option("--n", o.n, "window size (domain [1, n])"); };
    const auto add_seed = [&](CLI::App* sub) { sub->add_option("--seed", o.seed, "master seed"); };
    const auto add_out = [&](CLI::App* sub) { sub->add_option("--out", o.out, "write the document here instead of stdout"); };
    const auto add_prefs = [&](CLI::App* sub) {
        sub->add_option("--prefs", o.prefs_path, "preference structure JSON file")->required();
    };
    const auto add_budget = [&](CLI::App* sub) { sub->add_option("--budget", o.budget, "work budget (abstract ops)"); };
    const auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    };
    const auto add_threads = [&](CLI::App* sub) {
        sub->add_option("--threads", o.threads, "worker threads (never changes output bytes)");
    };

    CLI::App* sample_perm = app.add_subcommand("sample-perm", "sample one Mallows permutation");
    add_q(sample_perm); add_n(sample_perm); add_seed(sample_perm); add_out(sample_perm);
    sample_perm->callback([&] { run_sample_perm(o); });

    CLI::App* sample_prefs = app.add_subcommand("sample-prefs", "sample a Mallows preference structure");
    add_q(sample_prefs); add_n(sample_prefs); add_seed(sample_prefs); add_format(sample_prefs); add_out(sample_prefs);
    sample_prefs->callback([&] { run_sample_prefs(o); });

    CLI::App* gs = app.add_subcommand("gale-shapley", "proposing-side-optimal stable matching");
    add_prefs(gs); add_out(gs);
    gs->add_option("--proposing", o.proposing, "women or men")->check(CLI::IsMember({"women", "men"}));
    gs->callback([&] { run_gale_shapley(o); });

    CLI::App* enumerate = app.add_subcommand("enumerate", "all stable matchings");
    add_prefs(enumerate); add_budget(enumerate); add_format(enumerate); add_out(enumerate);
    enumerate->add_option("--limit", o.limit, "fail once more than this many matchings exist");
    enumerate->callback([&] { run_enumerate(o); });

    CLI::App* count = app.add_subcommand("count", "exact number of stable matchings (bare decimal)");
    add_prefs(count); add_budget(count); add_out(count);
    count->callback([&] { run_count(o); });

    CLI::App* cutpoints = app.add_subcommand("cutpoints", "validated cut positions");
    add_prefs(cutpoints); add_budget(cutpoints); add_out(cutpoints);
    cutpoints->add_option("--method", o.method, "certified or exact")->check(CLI::IsMember({"certified", "exact"}));
    cutpoints->callback([&] { run_cutpoints(o); });

    CLI::App* decompose = app.add_subcommand("decompose", "block decomposition with exact per-block counts");
    add_prefs(decompose); add_budget(decompose); add_out(decompose);
    decompose->add_option("--method", o.method, "certified, exact, or auto")
        ->check(CLI::IsMember({"certified", "exact", "auto"}));
    decompose->callback([&] { run_decompose(o); });

    CLI::App* gamma = app.add_subcommand("estimate-gamma", "growth-rate estimate over seeded trials");
    add_q(gamma); add_n(gamma); add_seed(gamma); add_budget(gamma); add_format(gamma); add_threads(gamma); add_out(gamma);
    gamma->add_option("--trials", o.trials, "number of trials");
    gamma->add_option("--method", o.method, "certified, exact, or auto")
        ->check(CLI::IsMember({"certified", "exact", "auto"}));
    gamma->callback([&] { run_estimate_gamma(o); });

    CLI::App* rho = app.add_subcommand("estimate-rho", "validated-cut density over seeded trials");
    add_q(rho); add_n(rho); add_seed(rho); add_threads(rho); add_out(rho);
    rho->add_option("--trials", o.trials, "number of trials");
    rho->add_option("--method", o.method, "certified or exact")->check(CLI::IsMember({"certified", "exact"}));
    rho->add_option("--margin", o.margin, "boundary positions excluded per side (default n/10)");
    rho->callback([&] { run_estimate_rho(o); });

    CLI::App* bounds = app.add_subcommand("bounds", "closed-form probability lower bounds");
    add_q(bounds); add_out(bounds);
    bounds->add_flag("--rho", o.rho, "density bound at --N");
    bounds->add_flag("--rho-best", o.rho_best, "density bound maximized over N in [1, --n-max]");
    bounds->add_flag("--gadget-event", o.gadget_event, "planted-block event bound at --N, --m");
    bounds->add_flag("--res", o.res, "restriction-pattern bound at --inv, --size");
    bounds->add_option("--N", o.n_param, "bound parameter N");
    bounds->add_option("--n-max", o.n_max, "search limit for --rho-best");
    bounds->add_option("--m", o.gadget_m, "gadget half-width (>= 2)");
    bounds->add_option("--inv", o.inv_tau, "inversions of the fixed pattern");
    bounds->add_option("--size", o.size_i, "size of the fixed window");
    bounds->callback([&] { run_bounds(o); });

    CLI::App* tails = app.add_subcommand("verify-tails", "empirical tails against closed-form bounds");
    add_q(tails); add_n(tails); add_seed(tails); add_out(tails);
    tails->add_option("--samples", o.samples, "sample count (>= 10^4)");
    tails->callback([&] { run_verify_tails(o); });

    CLI::App* law = app.add_subcommand("verify-law", "sampler law against the exact table (n <= 8)");
    add_q(law); add_seed(law); add_out(law);
    int law_n = 4;
    law->add_option("--n", law_n, "window size (<= 8)");
    law->add_option("--samples", o.samples, "sample count");
    law->callback([&] { o.n = law_n; run_verify_law(o); });

    CLI::App* decay = app.add_subcommand("verify-decay", "restriction effect on the center offset");
    add_q(decay); add_n(decay); add_seed(decay); add_out(decay);
    decay->add_option("--samples", o.samples, "sample count");
    decay->add_option("--margin", o.margins, "margins to trim (repeatable)");
    decay->callback([&] { run_verify_decay(o); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help() << "\n";
        return 2;
    } catch (const sc::BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const sc::LimitExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const sc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
