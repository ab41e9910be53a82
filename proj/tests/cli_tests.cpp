// End-to-end tests of the stablecut CLI.  argv[1] is the path to the
// binary.  Prints one line per check; exits with the number of failures.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "stablecut/io.hpp"
#include "stablecut/prefs.hpp"

namespace sc = stablecut;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int g_failures = 0;

void expect(bool condition, const std::string& what) {
    if (!condition) ++g_failures;
    std::cout << (condition ? "ok   " : "FAIL ") << what << std::endl;
}

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& path) {
    std::ifstream file(path, std::ios::binary);
    std::ostringstream buf;
    buf << file.rdbuf();
    return buf.str();
}

void spit(const fs::path& path, const std::string& text) {
    std::ofstream file(path, std::ios::binary);
    file << text;
}

class Cli {
public:
    Cli(std::string binary, fs::path dir) : binary_(std::move(binary)), dir_(std::move(dir)) {}

    RunResult run(const std::string& args) const {
        const fs::path err_file = dir_ / "stderr.txt";
        const std::string command = "\"" + binary_ + "\" " + args + " 2>\"" + err_file.string() + "\"";
        RunResult result;
        FILE* pipe = popen(command.c_str(), "r");
        if (!pipe) return result;
        std::array<char, 4096> buffer;
        size_t got;
        while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) result.out.append(buffer.data(), got);
        const int status = pclose(pipe);
        result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        result.err = slurp(err_file);
        return result;
    }

    fs::path file(const std::string& name) const { return dir_ / name; }

private:
    std::string binary_;
    fs::path dir_;
};

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: cli_tests <path-to-stablecut-binary>\n";
        return 1;
    }
    const fs::path dir = fs::temp_directory_path() / ("stablecut-cli-" + std::to_string(getpid()));
    fs::create_directories(dir);
    const Cli cli(argv[1], dir);

    {
        const RunResult r = cli.run("--help");
        expect(r.exit_code == 0, "--help exits 0");
        expect(contains(r.out, "estimate-gamma") && contains(r.out, "cutpoints"), "--help lists the subcommands");
    }
    {
        const RunResult r = cli.run("frobnicate");
        expect(r.exit_code == 2, "unknown subcommand exits 2");
    }
    {
        const RunResult r = cli.run("count --prefs " + cli.file("absent.json").string());
        expect(r.exit_code == 2, "missing input file exits 2");
        expect(contains(r.err, "absent.json"), "missing-file diagnostic names the file");
    }

    // A sampled instance round-trips through the documented formats.
    const fs::path prefs_path = cli.file("prefs.json");
    {
        const RunResult r = cli.run("sample-prefs --q 0.5 --n 6 --seed 9 --out " + prefs_path.string());
        expect(r.exit_code == 0 && r.out.empty(), "sample-prefs writes only to --out");
        const sc::PrefsFile file = sc::prefs_from_json(slurp(prefs_path), "prefs.json");
        expect(file.prefs.domain() == sc::Interval(1, 6), "sampled structure is on [1, 6]");
        expect(file.q.has_value() && *file.q == 0.5 && file.seed.has_value() && *file.seed == 9,
               "sampled structure records q and seed");
    }
    {
        const RunResult counted = cli.run("count --prefs " + prefs_path.string());
        expect(counted.exit_code == 0, "count exits 0");
        const long long count = std::stoll(counted.out);
        expect(count >= 1 && counted.out == std::to_string(count) + "\n", "count prints one bare decimal line");
        const RunResult enumerated = cli.run("enumerate --prefs " + prefs_path.string());
        expect(enumerated.exit_code == 0, "enumerate exits 0");
        const json doc = json::parse(enumerated.out);
        expect(doc["count"].get<long long>() == count, "enumerate count equals count output");
        expect(doc["matchings"].size() == static_cast<size_t>(count), "enumerate lists every matching");
        const RunResult csv = cli.run("enumerate --prefs " + prefs_path.string() + " --format csv");
        expect(csv.exit_code == 0 && csv.out.rfind("w1,w2,w3,w4,w5,w6\n", 0) == 0,
               "enumerate --format csv starts with the column header");
    }

    // The planted two-matching block, via files produced by the library.
    const fs::path gadget_path = cli.file("gadget.json");
    spit(gadget_path, sc::to_json(sc::gadget_structure(3)));
    {
        const RunResult r = cli.run("count --prefs " + gadget_path.string());
        expect(r.exit_code == 0 && r.out == "2\n", "planted-block count prints exactly 2");
    }
    {
        const RunResult men = cli.run("gale-shapley --prefs " + gadget_path.string() + " --proposing men");
        expect(men.exit_code == 0, "gale-shapley (men) exits 0");
        expect(json::parse(men.out)["partner_of_woman"] == json::array({-3, -2, -1, 0, 1, 2, 3}),
               "men-proposing yields the in-order matching");
        const RunResult women = cli.run("gale-shapley --prefs " + gadget_path.string() + " --proposing women");
        expect(json::parse(women.out)["partner_of_woman"] == json::array({-3, -2, -1, 0, 2, 1, 3}),
               "women-proposing yields the swapped matching");
    }
    {
        const fs::path wide_path = cli.file("gadget50.json");
        spit(wide_path, sc::to_json(sc::gadget_structure(50)));
        const RunResult r = cli.run("cutpoints --prefs " + wide_path.string() + " --method certified");
        expect(r.exit_code == 0, "cutpoints --method certified exits 0");
        const json doc = json::parse(r.out);
        const std::vector<int> cuts = doc["cuts"].get<std::vector<int>>();
        expect(cuts == sc::certified_cuts(sc::gadget_structure(50)), "CLI cuts equal the library cuts");
        const auto has = [&](int c) { return std::find(cuts.begin(), cuts.end(), c) != cuts.end(); };
        expect(has(-10) && !has(-9) && !has(11) && has(12), "certified cuts stop 10 and 12 positions from the block");
    }
    {
        const RunResult r = cli.run("decompose --prefs " + gadget_path.string() + " --method exact");
        expect(r.exit_code == 0, "decompose exits 0");
        const json doc = json::parse(r.out);
        expect(doc["method"] == "exact", "decompose echoes the method");
        long long product = 1;
        for (const auto& c : doc["block_counts"]) product *= std::stoll(c.get<std::string>());
        expect(product == 2, "block counts multiply to the stable-matching count");
        expect(std::abs(doc["total_log_count"].get<double>() - std::log(2.0)) < 1e-12,
               "total log count is log 2");
    }

    {
        const RunResult r = cli.run("bounds --rho --q 1e-60 --N 1");
        expect(r.exit_code == 0, "bounds --rho exits 0");
        const json doc = json::parse(r.out);
        expect(doc["finite"].get<bool>(), "bound at q=1e-60 is finite");
        expect(std::abs(doc["value"].get<double>() - 0.9839679519359199) < 1e-9,
               "bound value matches the pinned constant");
        const RunResult degenerate = cli.run("bounds --rho --q 0.01 --N 1");
        expect(json::parse(degenerate.out)["finite"] == false, "degenerate bracket reports finite=false");
        const RunResult none = cli.run("bounds --q 0.5");
        expect(none.exit_code == 2, "bounds with no kind flag exits 2");
    }

    {
        const std::string base = "estimate-gamma --q 0.5 --n 12 --trials 4 --seed 5 --format csv";
        const RunResult one = cli.run(base + " --threads 1");
        const RunResult two = cli.run(base + " --threads 2");
        expect(one.exit_code == 0 && two.exit_code == 0, "estimate-gamma exits 0");
        expect(one.out.rfind("q,n,trial,log_count,blocks,max_block,seed,method,version\n", 0) == 0,
               "estimate-gamma CSV carries the documented header");
        expect(!one.out.empty() && one.out == two.out, "estimate-gamma CSV is thread-invariant");
    }

    {
        const RunResult r = cli.run("verify-law --q 0.5 --n 3 --samples 20000 --seed 4");
        expect(r.exit_code == 0 && json::parse(r.out)["pass"].get<bool>(), "verify-law passes at n=3");
    }

    {
        const fs::path hard_path = cli.file("hard.json");
        spit(hard_path, sc::to_json(sc::sample_prefs(sc::MallowsParams(0.9), sc::Interval(1, 30), 2), 0.9, 2));
        const RunResult r = cli.run("count --prefs " + hard_path.string() + " --budget 10");
        expect(r.exit_code == 3, "exhausted work budget exits 3");
        expect(contains(r.err, "budget"), "budget diagnostic names the budget");

        // Aggregate exhaustion (every trial over budget) takes the same exit path.
        const RunResult e = cli.run("estimate-gamma --q 0.9 --n 30 --trials 4 --seed 2 --budget 10");
        expect(e.exit_code == 3, "estimator with all trials over budget exits 3");
        expect(contains(e.err, "budget"), "estimator budget diagnostic names the budget");
    }

    {
        const fs::path bad_path = cli.file("bad.json");
        spit(bad_path, "{oops");
        const RunResult r = cli.run("count --prefs " + bad_path.string());
        expect(r.exit_code == 2, "malformed JSON exits 2");
        expect(contains(r.err, "bad.json") && contains(r.err, "not valid JSON"),
               "malformed-JSON diagnostic names the file");
        const fs::path missing_path = cli.file("missing.json");
        spit(missing_path, "{\"domain\":[1,2],\"women\":[[1,2],[1,2]]}");
        const RunResult m = cli.run("count --prefs " + missing_path.string());
        expect(m.exit_code == 2 && contains(m.err, "/men"), "missing-field diagnostic carries the JSON pointer");
    }

    {
        const std::string base = "enumerate --prefs " + gadget_path.string();
        const RunResult direct = cli.run(base);
        const fs::path out_path = cli.file("enumerated.json");
        const RunResult filed = cli.run(base + " --out " + out_path.string());
        expect(filed.exit_code == 0 && filed.out.empty(), "--out suppresses stdout");
        expect(slurp(out_path) == direct.out, "--out bytes equal stdout bytes");
    }

    std::error_code ec;
    fs::remove_all(dir, ec);
    std::cout << (g_failures == 0 ? "all CLI checks passed" : std::to_string(g_failures) + " CLI checks failed")
              << std::endl;
    return g_failures;
}
