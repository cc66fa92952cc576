#include "rendezline/report.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rendezline {

namespace {

std::string to_chars_string(double x, int precision) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, precision);
    return std::string(buf, res.ptr);
}

double parse_real(std::string_view text) {
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    }
    return value;
}

int parse_int(std::string_view text) {
    int value = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
    }
    return value;
}

std::vector<std::string_view> split(std::string_view text, std::string_view sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(text.substr(start));
            return parts;
        }
        parts.push_back(text.substr(start, pos - start));
        start = pos + sep.size();
    }
}

double json_number(double x) {
    return std::isfinite(x) ? x : 0.0;
}

}  // namespace

double quantize(double x) {
    if (!std::isfinite(x)) return x;
    return parse_real(to_chars_string(x, 9));
}

std::string format_real(double x) {
    return to_chars_string(x, 9);
}

OutputRow make_row(const CellResult& result) {
    const Cell& cell = result.cell;
    const AggregateStats& s = result.stats;
    OutputRow row;
    row.mode = std::string(to_string(cell.mode));
    row.n = cell.n;
    row.d = quantize(cell.d);
    row.r = quantize(cell.r);
    row.trials = s.trials;
    row.mean_distance = quantize(s.mean_distance);
    row.distance_ratio = quantize(s.distance_ratio);
    row.mean_rounds = quantize(s.mean_rounds);
    row.mean_time = quantize(s.mean_time);
    row.first_to_total_gap = quantize(s.mean_first_to_total_gap);
    row.stage3_onset_delta =
        quantize(rounds_vs_prediction(s, derive_params(cell.d, cell.r, cell.n), cell.n)
                     .stage3_onset_delta);
    row.failures = s.failure_count;
    row.stderr_ratio = quantize(s.stderr_ratio);
    return row;
}

std::vector<OutputRow> make_rows(const std::vector<CellResult>& results) {
    std::vector<OutputRow> rows;
    rows.reserve(results.size());
    for (const CellResult& r : results) rows.push_back(make_row(r));
    return rows;
}

void write_csv(std::ostream& out, const std::vector<OutputRow>& rows) {
    out << kCsvHeader << '\n';
    for (const OutputRow& row : rows) {
        out << row.mode << ',' << row.n << ',' << format_real(row.d) << ',' << format_real(row.r)
            << ',' << row.trials << ',' << format_real(row.mean_distance) << ','
            << format_real(row.distance_ratio) << ',' << format_real(row.mean_rounds) << ','
            << format_real(row.mean_time) << ',' << format_real(row.first_to_total_gap) << ','
            << format_real(row.stage3_onset_delta) << ',' << row.failures << ','
            << format_real(row.stderr_ratio) << '\n';
    }
}

std::string to_csv(const std::vector<OutputRow>& rows) {
    std::ostringstream out;
    write_csv(out, rows);
    return out.str();
}

std::vector<OutputRow> parse_csv(std::string_view text) {
    std::vector<std::string_view> lines = split(text, "\n");
    if (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty() || lines.front() != kCsvHeader) {
        throw std::runtime_error("CSV header does not match the output row layout");
    }
    std::vector<OutputRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split(lines[i], ",");
        if (fields.size() != 13) {
            throw std::runtime_error("CSV line " + std::to_string(i + 1) + " has " +
                                     std::to_string(fields.size()) + " fields, expected 13");
        }
        OutputRow row;
        row.mode = std::string(fields[0]);
        row.n = parse_int(fields[1]);
        row.d = parse_real(fields[2]);
        row.r = parse_real(fields[3]);
        row.trials = parse_int(fields[4]);
        row.mean_distance = parse_real(fields[5]);
        row.distance_ratio = parse_real(fields[6]);
        row.mean_rounds = parse_real(fields[7]);
        row.mean_time = parse_real(fields[8]);
        row.first_to_total_gap = parse_real(fields[9]);
        row.stage3_onset_delta = parse_real(fields[10]);
        row.failures = parse_int(fields[11]);
        row.stderr_ratio = parse_real(fields[12]);
        rows.push_back(std::move(row));
    }
    return rows;
}

nlohmann::ordered_json to_json(const OutputRow& row) {
    return {
        {"mode", row.mode},
        {"n", row.n},
        {"d", row.d},
        {"r", row.r},
        {"trials", row.trials},
        {"mean_distance", json_number(row.mean_distance)},
        {"distance_ratio", json_number(row.distance_ratio)},
        {"mean_rounds", json_number(row.mean_rounds)},
        {"mean_time", json_number(row.mean_time)},
        {"first_to_total_gap", json_number(row.first_to_total_gap)},
        {"stage3_onset_delta", json_number(row.stage3_onset_delta)},
        {"failures", row.failures},
        {"stderr_ratio", json_number(row.stderr_ratio)},
    };
}

nlohmann::ordered_json to_json(const SimConfig& config) {
    nlohmann::ordered_json j = {
        {"n", config.n},
        {"d", config.d},
        {"r", config.r},
        {"mode", to_string(config.mode)},
        {"epsilon", config.epsilon_mode == EpsilonMode::Off ? "off" : "per-robot-uniform"},
        {"seed", config.seed},
        {"max_rounds", config.round_cap()},
    };
    if (config.noise) j["noise"] = {{"mu", config.noise->mu}, {"sigma", config.noise->sigma}};
    const DerivedParams p = derive_params(config);
    j["derived"] = {{"k", p.k}, {"delta", p.delta}, {"alpha", p.alpha},
                    {"alpha_star", p.alpha_star}};
    return j;
}

nlohmann::ordered_json to_json(const SweepSpec& spec) {
    nlohmann::ordered_json modes = nlohmann::ordered_json::array();
    for (SweepMode m : spec.modes) modes.push_back(to_string(m));
    return {
        {"n", spec.n_values},
        {"d", spec.d_values},
        {"r", spec.r_values},
        {"modes", modes},
        {"epsilon", spec.epsilon_mode == EpsilonMode::Off ? "off" : "per-robot-uniform"},
        {"noise", {{"mu", spec.noise.mu}, {"sigma", spec.noise.sigma}}},
        {"trials", spec.trials_per_cell},
        {"seed", spec.base_seed},
    };
}

nlohmann::ordered_json to_json(const TrialResult& result) {
    nlohmann::ordered_json merges = nlohmann::ordered_json::array();
    for (const MergeEvent& m : result.merges) {
        merges.push_back({{"time", m.time},
                          {"absorbed_members", m.absorbed_members},
                          {"surviving_leader", m.surviving_leader},
                          {"position", m.position},
                          {"round", m.round}});
    }
    nlohmann::ordered_json j = {
        {"success", result.success},
        {"rendezvous_time", result.success ? nlohmann::ordered_json(result.rendezvous_time)
                                           : nlohmann::ordered_json(nullptr)},
        {"rendezvous_position", result.success
                                    ? nlohmann::ordered_json(result.rendezvous_position)
                                    : nlohmann::ordered_json(nullptr)},
        {"rnd_first", result.rnd_first},
        {"rnd_total", result.rnd_total},
        {"per_robot_distance", result.per_robot_distance},
        {"merges", merges},
    };
    return j;
}

nlohmann::ordered_json to_json(const TimelineEntry& entry) {
    nlohmann::ordered_json j = {
        {"time", entry.time},
        {"kind", to_string(entry.kind)},
        {"leader", entry.leader},
        {"position", entry.position},
        {"round", entry.round},
        {"members", entry.members},
    };
    if (entry.kind == EventKind::Meeting) j["absorbed_leader"] = entry.other_leader;
    if (entry.kind == EventKind::RoundStart) j["heads"] = entry.heads;
    return j;
}

std::vector<int> parse_int_range(std::string_view text) {
    std::vector<int> values;
    for (std::string_view piece : split(text, ",")) {
        const auto parts = split(piece, "..");
        if (parts.size() == 1) {
            values.push_back(parse_int(parts[0]));
            continue;
        }
        if (parts.size() > 3) throw std::invalid_argument("bad range '" + std::string(piece) + "'");
        const int lo = parse_int(parts[0]);
        const int hi = parse_int(parts[1]);
        const int step = parts.size() == 3 ? parse_int(parts[2]) : 1;
        if (step <= 0 || hi < lo) throw std::invalid_argument("bad range '" + std::string(piece) + "'");
        for (int v = lo; v <= hi; v += step) values.push_back(v);
    }
    return values;
}

std::vector<double> parse_real_range(std::string_view text) {
    std::vector<double> values;
    for (std::string_view piece : split(text, ",")) {
        const auto parts = split(piece, "..");
        if (parts.size() == 1) {
            values.push_back(parse_real(parts[0]));
            continue;
        }
        if (parts.size() > 3) throw std::invalid_argument("bad range '" + std::string(piece) + "'");
        const double lo = parse_real(parts[0]);
        const double hi = parse_real(parts[1]);
        const double step = parts.size() == 3 ? parse_real(parts[2]) : 1.0;
        if (!(step > 0.0) || hi < lo) throw std::invalid_argument("bad range '" + std::string(piece) + "'");
        const double slack = 1e-9 * step;
        for (int j = 0; lo + j * step <= hi + slack; ++j) {
            // 12 significant digits strips accumulation noise such as 1.2200000000000002
            values.push_back(parse_real(to_chars_string(lo + j * step, 12)));
        }
    }
    return values;
}

std::pair<RobotId, std::string> parse_flip_spec(std::string_view text) {
    const std::size_t colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw std::invalid_argument("flip spec must look like ROBOT:HT..., got '" +
                                    std::string(text) + "'");
    }
    const int robot = parse_int(text.substr(0, colon));
    const std::string_view flips = text.substr(colon + 1);
    for (char c : flips) {
        if (c != 'H' && c != 'T') {
            throw std::invalid_argument("flip strings may only contain H and T");
        }
    }
    return {robot, std::string(flips)};
}

}  // namespace rendezline
