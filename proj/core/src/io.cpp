#include "stablecut/io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "json.hpp"

#include "stablecut/version.hpp"

namespace stablecut {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& pointer, const std::string& what) {
    throw ParseError(path + ": " + (pointer.empty() ? "/" : pointer) + ": " + what);
}

json parse_document(const std::string& text, const std::string& path) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParseError(path + ": not valid JSON");
    return j;
}

const json& member(const json& j, const std::string& pointer, const std::string& key, const std::string& path) {
    if (!j.is_object()) fail(path, pointer, "expected an object");
    const auto it = j.find(key);
    if (it == j.end()) fail(path, pointer + "/" + key, "missing");
    return *it;
}

int as_int(const json& j, const std::string& pointer, const std::string& path) {
    if (!j.is_number_integer()) fail(path, pointer, "expected an integer");
    return j.get<int>();
}

std::vector<int> as_int_array(const json& j, const std::string& pointer, const std::string& path) {
    if (!j.is_array()) fail(path, pointer, "expected an array");
    std::vector<int> out;
    out.reserve(j.size());
    for (size_t k = 0; k < j.size(); ++k) out.push_back(as_int(j[k], pointer + "/" + std::to_string(k), path));
    return out;
}

Interval domain_of(const json& j, const std::string& path) {
    const std::vector<int> d = as_int_array(member(j, "", "domain", path), "/domain", path);
    if (d.size() != 2) fail(path, "/domain", "expected [lo, hi]");
    if (d[0] > d[1]) fail(path, "/domain", "lo exceeds hi");
    return Interval(d[0], d[1]);
}

json domain_json(Interval domain) { return json::array({domain.lo, domain.hi}); }

std::string finish(json j) { return j.dump() + "\n"; }

/// Serialize an in-library value under a path-aware error wrapper.
template <typename F>
auto checked(const std::string& path, const std::string& pointer, F&& build) {
    try {
        return build();
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        fail(path, pointer, e.what());
    }
}

json config_json(const GammaConfig& config) {
    json c;
    c["q"] = config.params.q;
    c["n"] = config.n;
    c["trials"] = config.trials;
    c["seed"] = config.master_seed;
    c["method"] = method_name(config.method);
    c["budget"] = config.budget;
    c["threads"] = config.threads;
    return c;
}

}  // namespace

std::string to_json(const Permutation& p) { return to_json(p, std::nullopt, std::nullopt); }

std::string to_json(const Permutation& p, std::optional<double> q, std::optional<std::uint64_t> seed) {
    json j;
    j["version"] = kVersion;
    j["domain"] = domain_json(p.domain());
    if (q) j["q"] = *q;
    if (seed) j["seed"] = *seed;
    j["values"] = p.values();
    return finish(std::move(j));
}

Permutation permutation_from_json(const std::string& text, const std::string& path) {
    const json j = parse_document(text, path);
    const Interval domain = domain_of(j, path);
    std::vector<int> values = as_int_array(member(j, "", "values", path), "/values", path);
    return checked(path, "/values", [&] { return make_permutation(domain, std::move(values)); });
}

std::string to_json(const PreferenceStructure& prefs, std::optional<double> q, std::optional<std::uint64_t> seed) {
    json j;
    j["version"] = kVersion;
    j["domain"] = domain_json(prefs.domain());
    if (q) j["q"] = *q;
    if (seed) j["seed"] = *seed;
    json women = json::array();
    for (const Permutation& r : prefs.women()) women.push_back(r.values());
    json men = json::array();
    for (const Permutation& r : prefs.men()) men.push_back(r.values());
    j["women"] = std::move(women);
    j["men"] = std::move(men);
    return finish(std::move(j));
}

PrefsFile prefs_from_json(const std::string& text, const std::string& path) {
    const json j = parse_document(text, path);
    const Interval domain = domain_of(j, path);
    const auto rankings = [&](const char* key) {
        const json& rows = member(j, "", key, path);
        const std::string pointer = std::string("/") + key;
        if (!rows.is_array()) fail(path, pointer, "expected an array of rank arrays");
        if (static_cast<int>(rows.size()) != domain.size())
            fail(path, pointer, "expected one ranking per person (" + std::to_string(domain.size()) + ")");
        std::vector<Permutation> out;
        for (size_t k = 0; k < rows.size(); ++k) {
            const std::string row_ptr = pointer + "/" + std::to_string(k);
            std::vector<int> values = as_int_array(rows[k], row_ptr, path);
            out.push_back(checked(path, row_ptr, [&] { return make_permutation(domain, std::move(values)); }));
        }
        return out;
    };
    PrefsFile file{checked(path, "", [&] { return PreferenceStructure(domain, rankings("women"), rankings("men")); }),
                   std::nullopt, std::nullopt};
    if (const auto it = j.find("q"); it != j.end() && !it->is_null()) {
        if (!it->is_number()) fail(path, "/q", "expected a number");
        file.q = it->get<double>();
    }
    if (const auto it = j.find("seed"); it != j.end() && !it->is_null()) {
        if (!it->is_number_unsigned() && !it->is_number_integer()) fail(path, "/seed", "expected an integer");
        file.seed = it->get<std::uint64_t>();
    }
    return file;
}

std::string prefs_to_csv(const PreferenceStructure& prefs) {
    const Interval dom = prefs.domain();
    std::ostringstream out;
    out << "role,index";
    for (int j = dom.lo; j <= dom.hi; ++j) out << ",r" << j;
    out << "\n";
    const auto rows = [&](const char* role, const std::vector<Permutation>& side) {
        for (int i = dom.lo; i <= dom.hi; ++i) {
            out << role << "," << i;
            for (int v : side[static_cast<size_t>(i - dom.lo)].values()) out << "," << v;
            out << "\n";
        }
    };
    rows("woman", prefs.women());
    rows("man", prefs.men());
    return out.str();
}

std::string to_json(const Matching& matching) {
    json j;
    j["version"] = kVersion;
    j["domain"] = domain_json(matching.domain());
    j["partner_of_woman"] = matching.as_permutation().values();
    return finish(std::move(j));
}

Matching matching_from_json(const std::string& text, const std::string& path) {
    const json j = parse_document(text, path);
    const Interval domain = domain_of(j, path);
    std::vector<int> values = as_int_array(member(j, "", "partner_of_woman", path), "/partner_of_woman", path);
    return checked(path, "/partner_of_woman", [&] { return Matching(make_permutation(domain, std::move(values))); });
}

std::string matchings_to_json(const std::vector<Matching>& list, Interval domain) {
    json j;
    j["version"] = kVersion;
    j["domain"] = domain_json(domain);
    j["count"] = list.size();
    json rows = json::array();
    for (const Matching& m : list) rows.push_back(m.as_permutation().values());
    j["matchings"] = std::move(rows);
    return finish(std::move(j));
}

std::string matchings_to_csv(const std::vector<Matching>& list, Interval domain) {
    std::ostringstream out;
    for (int w = domain.lo; w <= domain.hi; ++w) out << (w == domain.lo ? "w" : ",w") << w;
    out << "\n";
    for (const Matching& m : list) {
        const std::vector<int>& partners = m.as_permutation().values();
        for (size_t k = 0; k < partners.size(); ++k) out << (k == 0 ? "" : ",") << partners[k];
        out << "\n";
    }
    return out.str();
}

std::string to_json(const BlockDecomposition& dec) {
    json j;
    j["version"] = kVersion;
    j["domain"] = domain_json(dec.domain);
    j["method"] = method_name(dec.method);
    j["cuts"] = dec.cuts;
    json blocks = json::array();
    for (const Interval& b : dec.blocks) blocks.push_back(domain_json(b));
    j["blocks"] = std::move(blocks);
    json counts = json::array();
    for (const StableCount& c : dec.per_block) counts.push_back(c.decimal());
    j["block_counts"] = std::move(counts);
    j["total_log_count"] = dec.total().log_value;
    return finish(std::move(j));
}

std::string to_json(const EstimateReport& report) {
    json j;
    j["version"] = kVersion;
    j["config"] = config_json(report.config);
    j["gamma_hat"] = report.gamma_hat;
    j["std_err"] = report.std_err;
    j["failures"] = report.failures;
    j["failed_trials"] = report.failed_trials;
    json rows = json::array();
    for (const TrialResult& t : report.per_trial) {
        json r;
        r["trial"] = t.trial;
        r["label"] = t.label;
        r["log_count"] = t.log_count;
        r["block_count"] = t.block_count;
        r["max_block"] = t.max_block;
        r["block_gammas"] = t.block_gammas;
        rows.push_back(std::move(r));
    }
    j["per_trial"] = std::move(rows);
    return finish(std::move(j));
}

std::string to_csv(const EstimateReport& report) {
    std::ostringstream out;
    out << "q,n,trial,log_count,blocks,max_block,seed,method,version\n";
    for (const TrialResult& t : report.per_trial) {
        out << format_double(report.config.params.q) << "," << report.config.n << "," << t.trial << ","
            << format_double(t.log_count) << "," << t.block_count << "," << t.max_block << ","
            << report.config.master_seed << "," << method_name(report.config.method) << "," << kVersion << "\n";
    }
    return out.str();
}

std::string to_json(const DensityReport& report) {
    json j;
    j["version"] = kVersion;
    json c;
    c["q"] = report.config.params.q;
    c["n"] = report.config.n;
    c["trials"] = report.config.trials;
    c["seed"] = report.config.master_seed;
    c["kind"] = kind_name(report.config.kind);
    c["margin"] = report.config.margin;
    c["threads"] = report.config.threads;
    j["config"] = std::move(c);
    j["density_hat"] = report.density_hat;
    j["std_err"] = report.std_err;
    j["per_trial"] = report.per_trial;
    return finish(std::move(j));
}

std::string to_json(const TailReport& report) {
    json j;
    j["version"] = kVersion;
    j["q"] = report.q;
    j["n"] = report.n;
    j["samples"] = report.samples;
    j["seed"] = report.master_seed;
    j["center"] = report.center;
    j["pass"] = report.pass;
    json checks = json::array();
    for (const TailCheck& c : report.checks) {
        json row;
        row["family"] = c.family;
        row["t"] = c.t;
        row["empirical"] = c.empirical;
        row["bound"] = c.bound;
        row["sigma"] = c.sigma;
        row["pass"] = c.pass;
        checks.push_back(std::move(row));
    }
    j["checks"] = std::move(checks);
    return finish(std::move(j));
}

std::string to_json(const LawReport& report) {
    json j;
    j["version"] = kVersion;
    j["q"] = report.q;
    j["n"] = report.n;
    j["samples"] = report.samples;
    j["seed"] = report.master_seed;
    j["threshold"] = report.threshold;
    j["tv_joint"] = report.tv_joint;
    j["lehmer_tv"] = report.lehmer_tv;
    j["pass"] = report.pass;
    return finish(std::move(j));
}

std::string to_json(const DecayReport& report) {
    json j;
    j["version"] = kVersion;
    j["q"] = report.q;
    j["n"] = report.n;
    j["samples"] = report.samples;
    j["seed"] = report.master_seed;
    j["center"] = report.center;
    j["pass"] = report.pass;
    json points = json::array();
    for (const DecayPoint& p : report.points) {
        json row;
        row["margin"] = p.margin;
        row["distance"] = p.distance;
        row["probability"] = p.probability;
        row["sigma"] = p.sigma;
        points.push_back(std::move(row));
    }
    j["points"] = std::move(points);
    return finish(std::move(j));
}

std::string exact_table_to_json(const std::vector<std::pair<std::vector<int>, double>>& table) {
    json j;
    for (const auto& [values, prob] : table) j[json(values).dump()] = prob;
    return finish(std::move(j));
}

std::string method_name(DecomposeMethod method) {
    switch (method) {
        case DecomposeMethod::Certified: return "certified";
        case DecomposeMethod::Exact: return "exact";
        case DecomposeMethod::Auto: return "auto";
    }
    throw BadParameter("unknown method");
}

DecomposeMethod method_from_name(const std::string& name) {
    if (name == "certified") return DecomposeMethod::Certified;
    if (name == "exact") return DecomposeMethod::Exact;
    if (name == "auto") return DecomposeMethod::Auto;
    throw BadParameter("unknown method '" + name + "' (expected certified, exact, or auto)");
}

std::string kind_name(CutKind kind) {
    return kind == CutKind::Certified ? "certified" : "exact";
}

CutKind kind_from_name(const std::string& name) {
    if (name == "certified") return CutKind::Certified;
    if (name == "exact") return CutKind::Exact;
    throw BadParameter("unknown kind '" + name + "' (expected certified or exact)");
}

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

}  // namespace stablecut
