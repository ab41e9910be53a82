#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stablecut/analysis.hpp"
#include "stablecut/matching.hpp"

namespace stablecut {

/// Serializers produce canonical JSON: fixed field order, UTF-8, one
/// newline-terminated document per call.  Parsers throw ParseError with the
/// source path and the JSON pointer of the offending element.

/// {"domain": [lo, hi], "values": [...]} — extra sibling fields such as
/// "q", "seed", or "version" are preserved by writers that have them and
/// ignored by the reader.
std::string to_json(const Permutation& p);
std::string to_json(const Permutation& p, std::optional<double> q, std::optional<std::uint64_t> seed);
Permutation permutation_from_json(const std::string& text, const std::string& path = "<input>");

/// {"domain": [lo, hi], "q": ..., "seed": ..., "women": [[ranks]...],
///  "men": [[ranks]...]}; q and seed are optional provenance.
struct PrefsFile {
    PreferenceStructure prefs;
    std::optional<double> q;
    std::optional<std::uint64_t> seed;
};
std::string to_json(const PreferenceStructure& prefs, std::optional<double> q = std::nullopt,
                    std::optional<std::uint64_t> seed = std::nullopt);
PrefsFile prefs_from_json(const std::string& text, const std::string& path = "<input>");

/// One row per person: role, index, then that person's rank of every
/// candidate in domain order.
std::string prefs_to_csv(const PreferenceStructure& prefs);

/// {"domain": [lo, hi], "partner_of_woman": [...]}
std::string to_json(const Matching& matching);
Matching matching_from_json(const std::string& text, const std::string& path = "<input>");

/// Enumeration output: JSON list of partner arrays, or CSV with one row per
/// matching (one column per woman in domain order).
std::string matchings_to_json(const std::vector<Matching>& list, Interval domain);
std::string matchings_to_csv(const std::vector<Matching>& list, Interval domain);

/// Decomposition report: cuts, block extents, per-block exact counts as
/// decimal strings, method, and the total in log form.
std::string to_json(const BlockDecomposition& dec);

/// Full growth-rate report with config echo and version string.
std::string to_json(const EstimateReport& report);

/// One row per successful trial: q,n,trial,log_count,blocks,max_block, then
/// the reproduction columns seed,method,version.
std::string to_csv(const EstimateReport& report);

std::string to_json(const DensityReport& report);
std::string to_json(const TailReport& report);
std::string to_json(const LawReport& report);
std::string to_json(const DecayReport& report);

/// Exact probability table as a JSON map keyed by the value array's compact
/// JSON form, e.g. "[2,1,3]".
std::string exact_table_to_json(const std::vector<std::pair<std::vector<int>, double>>& table);

/// Names used in files and on the command line.
std::string method_name(DecomposeMethod method);
DecomposeMethod method_from_name(const std::string& name);
std::string kind_name(CutKind kind);
CutKind kind_from_name(const std::string& name);

/// Shortest round-trip decimal form of a double ("0.5", "1e-60", "inf");
/// used for every floating-point field so output bytes are reproducible.
std::string format_double(double value);

}  // namespace stablecut
