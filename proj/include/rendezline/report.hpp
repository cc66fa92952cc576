#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "rendezline/engine.hpp"
#include "rendezline/harness.hpp"

namespace rendezline {

/// One sweep cell as emitted by the CLI. Real fields hold values already
/// rounded to 9 significant digits, so CSV output parses back exactly.
struct OutputRow {
    std::string mode;
    int n = 0;
    double d = 0.0;
    double r = 0.0;
    int trials = 0;
    double mean_distance = 0.0;
    double distance_ratio = 0.0;
    double mean_rounds = 0.0;
    double mean_time = 0.0;
    double first_to_total_gap = 0.0;
    double stage3_onset_delta = 0.0;
    int failures = 0;
    double stderr_ratio = 0.0;

    bool operator==(const OutputRow&) const = default;
};

inline constexpr std::string_view kCsvHeader =
    "mode,n,d,r,trials,mean_distance,distance_ratio,mean_rounds,mean_time,"
    "first_to_total_gap,stage3_onset_delta,failures,stderr_ratio";

/// Rounds to 9 significant digits (identity on NaN and infinities).
double quantize(double x);

/// Shortest "%.9g"-style text of x.
std::string format_real(double x);

OutputRow make_row(const CellResult& result);
std::vector<OutputRow> make_rows(const std::vector<CellResult>& results);

void write_csv(std::ostream& out, const std::vector<OutputRow>& rows);
std::string to_csv(const std::vector<OutputRow>& rows);

/// Throws std::runtime_error on a malformed header or row.
std::vector<OutputRow> parse_csv(std::string_view text);

nlohmann::ordered_json to_json(const OutputRow& row);
nlohmann::ordered_json to_json(const SimConfig& config);
nlohmann::ordered_json to_json(const SweepSpec& spec);
nlohmann::ordered_json to_json(const TrialResult& result);
nlohmann::ordered_json to_json(const TimelineEntry& entry);

/// `lo..hi[..step]` inclusive, or a comma list of values and ranges.
std::vector<int> parse_int_range(std::string_view text);
std::vector<double> parse_real_range(std::string_view text);

/// "1:HH" → {1, "HH"}.
std::pair<RobotId, std::string> parse_flip_spec(std::string_view text);

}  // namespace rendezline
