#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "acceptance.hpp"
#include "json.hpp"
#include "rendezline/analysis.hpp"
#include "rendezline/engine.hpp"
#include "rendezline/harness.hpp"
#include "rendezline/report.hpp"

using namespace rendezline;
using nlohmann::ordered_json;

namespace {

constexpr int kExitArgument = 1;
constexpr int kExitVerification = 2;

// Scripted robots use their strings strictly; the rest draw from the seed.
class MixedFlipSource final : public FlipSource {
public:
    MixedFlipSource(std::uint64_t seed, std::map<RobotId, std::string> scripts)
        : random_(seed) {
        for (const auto& [robot, flips] : scripts) {
            scripted_.set(robot, flips);
            scripted_robots_.insert(robot);
        }
    }

    bool flip(RobotId robot) override {
        return scripted_robots_.count(robot) ? scripted_.flip(robot) : random_.flip(robot);
    }

private:
    RngFlipSource random_;
    ScriptedFlipSource scripted_;
    std::set<RobotId> scripted_robots_;
};

std::optional<std::uint64_t> seed_from_env() {
    const char* text = std::getenv("RENDEZLINE_SEED");
    if (text == nullptr || *text == '\0') return std::nullopt;
    std::size_t used = 0;
    const unsigned long long value = std::stoull(text, &used, 0);
    if (text[used] != '\0') throw std::invalid_argument("RENDEZLINE_SEED is not an integer");
    return value;
}

// Options given on the command line win over the file.
void apply_config_file(CLI::App& command, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file '" + path + "'");
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument(path + ":" + std::to_string(number) + ": expected key=value");
        }
        auto trim = [](std::string text) {
            const auto a = text.find_first_not_of(" \t\r");
            const auto b = text.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : text.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.rfind("--", 0) != 0) key = "--" + key;
        CLI::Option* option = nullptr;
        try {
            option = command.get_option(key);
        } catch (const CLI::OptionNotFound&) {
            throw std::invalid_argument(path + ":" + std::to_string(number) + ": unknown key '" +
                                        key.substr(2) + "'");
        }
        if (key == "--config") throw std::invalid_argument("config files cannot nest");
        if (option->count() > 0) continue;
        option->add_result(value);
        option->run_callback();
    }
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << text;
}

struct TrialArgs {
    std::string mode = "sync";
    int n = 2;
    double d = 10.0;
    double r = 1.26;
    std::vector<std::string> flips;
    std::vector<double> delays;
    std::uint64_t seed = 0;
    bool epsilon = false;
    bool noise = false;
    double noise_mu = GaussianNoise{}.mu;
    double noise_sigma = GaussianNoise{}.sigma;
    int max_rounds = 0;
    std::string output;
};

int run_trial_command(const TrialArgs& args) {
    SimConfig config;
    config.n = args.n;
    config.d = args.d;
    config.r = args.r;
    config.mode = parse_mode(args.mode);
    config.epsilon_mode = args.epsilon ? EpsilonMode::PerRobotUniform : EpsilonMode::Off;
    if (args.noise) config.noise = GaussianNoise{args.noise_mu, args.noise_sigma};
    config.seed = seed_from_env().value_or(args.seed);
    config.max_rounds = args.max_rounds;
    config.validate();

    std::map<RobotId, std::string> scripts;
    for (const std::string& spec : args.flips) {
        auto [robot, flips] = parse_flip_spec(spec);
        if (robot < 1 || robot > config.n) {
            throw std::invalid_argument("flip spec names robot " + std::to_string(robot) +
                                        " outside 1.." + std::to_string(config.n));
        }
        scripts[robot] = std::move(flips);
    }
    MixedFlipSource flips(config.seed, std::move(scripts));

    std::unique_ptr<DelaySource> delays;
    if (!args.delays.empty()) {
        if (config.mode != Mode::Async) throw std::invalid_argument("--delays needs --mode async");
        if (static_cast<int>(args.delays.size()) != config.n) {
            throw std::invalid_argument("--delays needs one value per robot");
        }
        delays = std::make_unique<FixedDelaySource>(args.delays);
    } else if (config.mode == Mode::Async) {
        delays = std::make_unique<RngDelaySource>(config.seed, config.delay_bound());
    } else {
        delays = std::make_unique<FixedDelaySource>(std::vector<double>{});
    }

    const TrialRun run = simulate(config, flips, *delays, TrialOptions{true});
    ordered_json timeline = ordered_json::array();
    for (const TimelineEntry& e : run.timeline) timeline.push_back(to_json(e));
    const ordered_json out = {
        {"config", to_json(config)},
        {"result", to_json(run.result)},
        {"timeline", timeline},
    };
    emit(out.dump(2) + "\n", args.output);
    return 0;
}

struct SweepArgs {
    std::vector<std::string> modes{"sync"};
    std::string n = "4..16";
    std::string d = "4..16";
    std::string r = "1.26";
    int trials = 1000;
    std::uint64_t seed = 0;
    int jobs = 0;
    bool epsilon = false;
    double noise_mu = GaussianNoise{}.mu;
    double noise_sigma = GaussianNoise{}.sigma;
    std::string out = "csv";
    std::string output;
};

int run_sweep_command(const SweepArgs& args) {
    SweepSpec spec;
    spec.modes.clear();
    for (const std::string& m : args.modes) spec.modes.push_back(parse_sweep_mode(m));
    spec.n_values = parse_int_range(args.n);
    spec.d_values = parse_real_range(args.d);
    spec.r_values = parse_real_range(args.r);
    spec.trials_per_cell = args.trials;
    spec.base_seed = seed_from_env().value_or(args.seed);
    spec.jobs = args.jobs;
    spec.epsilon_mode = args.epsilon ? EpsilonMode::PerRobotUniform : EpsilonMode::Off;
    spec.noise = GaussianNoise{args.noise_mu, args.noise_sigma};
    spec.validate();

    const std::vector<OutputRow> rows = make_rows(run_sweep(spec));
    if (args.out == "csv") {
        emit(to_csv(rows), args.output);
    } else {
        ordered_json list = ordered_json::array();
        for (const OutputRow& row : rows) list.push_back(to_json(row));
        const ordered_json out = {{"config", to_json(spec)}, {"rows", list}};
        emit(out.dump(2) + "\n", args.output);
    }
    return 0;
}

struct BoundsArgs {
    std::vector<std::string> modes{"sync", "async"};
    std::string n = "8";
    std::optional<int> k;
    std::optional<double> d;
    double r = 1.26;
    bool lemma_grid = false;
    std::string output;
};

int run_bounds_command(const BoundsArgs& args) {
    if (args.k.has_value() == args.d.has_value()) {
        throw std::invalid_argument("bounds needs exactly one of --k and --d");
    }
    if (!(args.r * args.r < 2.0)) {
        throw std::invalid_argument(
            "r must be below sqrt(2): the stage-3 bound has a pole at 2 - r^2 = 0");
    }
    ordered_json rows = ordered_json::array();
    for (int n : parse_int_range(args.n)) {
        const int k = args.k ? *args.k : derive_params(*args.d, args.r, n).k;
        for (const std::string& name : args.modes) {
            const Mode mode = parse_mode(name);
            const analysis::StageBounds b = mode == Mode::Sync
                                                ? analysis::stage_bounds_sync(n, k, args.r)
                                                : analysis::stage_bounds_async(n, k, args.r);
            ordered_json row = {
                {"mode", to_string(mode)},
                {"n", n},
                {"k", k},
                {"r", args.r},
                {"stage1", b.stage1},
                {"stage2", b.stage2},
                {"stage3", b.stage3},
                {"total", b.total()},
                {"competitive_ratio_bound",
                 analysis::competitive_ratio_bound(mode, n, std::pow(args.r, k), args.r)},
            };
            rows.push_back(row);
        }
    }
    ordered_json out = {{"rows", rows}};
    if (args.lemma_grid) {
        ordered_json grid = ordered_json::array();
        for (int n : parse_int_range(args.n)) {
            if (n < 4) continue;
            for (int k = 1; k <= 10; ++k) {
                const analysis::LemmaGridCounts c = analysis::lemma_grid_counts(n, k, args.r);
                grid.push_back({{"n", n},
                                {"k", k},
                                {"reach_checked", c.reach_checked},
                                {"reach_failed", c.reach_failed},
                                {"meet_checked", c.meet_checked},
                                {"meet_failed", c.meet_failed},
                                {"pass", c.reach_failed == 0 && c.meet_failed == 0}});
            }
        }
        out["lemma_grid"] = grid;
    }
    emit(out.dump(2) + "\n", args.output);
    return 0;
}

struct VerifyArgs {
    int jobs = 0;
    std::vector<int> only;
    bool verbose = false;
};

int run_verify_command(const VerifyArgs& args) {
    acceptance::Options options;
    options.jobs = args.jobs;
    options.only = args.only;
    if (args.verbose) options.log = &std::cerr;
    const auto results = acceptance::run(options);
    acceptance::print(std::cout, results);
    return acceptance::all_passed(results) ? 0 : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rendezvous of symmetric robots on a line: trials, sweeps, bounds"};
    app.require_subcommand(1);

    const std::vector<std::string> trial_modes{"sync", "async"};
    const std::vector<std::string> sweep_modes{"sync", "async", "async-noise"};

    TrialArgs trial;
    CLI::App* trial_cmd = app.add_subcommand("trial", "Run one trial and print its timeline as JSON");
    trial_cmd->add_option("--mode", trial.mode)->check(CLI::IsMember(trial_modes));
    trial_cmd->add_option("--n", trial.n, "Number of robots")->check(CLI::Range(2, 1 << 20));
    trial_cmd->add_option("--d", trial.d, "Half the spacing between neighbours");
    trial_cmd->add_option("--r", trial.r, "Expansion radius");
    trial_cmd->add_option("--flips", trial.flips, "Scripted coins per robot, e.g. 1:HHT 2:TH");
    trial_cmd->add_option("--delays", trial.delays, "Async start delays, one per robot");
    trial_cmd->add_option("--seed", trial.seed);
    trial_cmd->add_flag("--epsilon", trial.epsilon, "Per-robot uniform exponent offset");
    trial_cmd->add_flag("--noise", trial.noise, "Gaussian odometry noise (async only)");
    trial_cmd->add_option("--noise-mu", trial.noise_mu);
    trial_cmd->add_option("--noise-sigma", trial.noise_sigma);
    trial_cmd->add_option("--max-rounds", trial.max_rounds, "0 selects the default cap");
    trial_cmd->add_option("-o,--output", trial.output, "Write to a file instead of stdout");

    SweepArgs sweep;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo sweep over (mode, n, d, r)");
    std::string sweep_config;
    sweep_cmd->add_option("--config", sweep_config, "Flat key=value file mirroring the flags")
        ->check(CLI::ExistingFile);
    sweep_cmd->add_option("--mode", sweep.modes)
        ->delimiter(',')
        ->check(CLI::IsMember(sweep_modes));
    sweep_cmd->add_option("--n", sweep.n, "Integer range lo..hi[..step] or list");
    sweep_cmd->add_option("--d", sweep.d, "Real range lo..hi[..step] or list");
    sweep_cmd->add_option("--r", sweep.r, "Real range lo..hi[..step] or list");
    sweep_cmd->add_option("--trials", sweep.trials)->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--seed", sweep.seed);
    sweep_cmd->add_option("--jobs", sweep.jobs, "Worker threads, 0 for all cores")
        ->check(CLI::NonNegativeNumber);
    sweep_cmd->add_flag("--epsilon", sweep.epsilon);
    sweep_cmd->add_option("--noise-mu", sweep.noise_mu);
    sweep_cmd->add_option("--noise-sigma", sweep.noise_sigma);
    sweep_cmd->add_option("--out", sweep.out, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    sweep_cmd->add_option("-o,--output", sweep.output, "Write to a file instead of stdout");

    BoundsArgs bounds;
    int bounds_k = 0;
    double bounds_d = 0.0;
    CLI::App* bounds_cmd = app.add_subcommand("bounds", "Theoretical stage and ratio bounds");
    bounds_cmd->add_option("--mode", bounds.modes)
        ->delimiter(',')
        ->check(CLI::IsMember(trial_modes));
    bounds_cmd->add_option("--n", bounds.n, "Integer range lo..hi[..step] or list");
    CLI::Option* k_opt = bounds_cmd->add_option("--k", bounds_k)->check(CLI::NonNegativeNumber);
    CLI::Option* d_opt = bounds_cmd->add_option("--d", bounds_d, "Derive k from d");
    k_opt->excludes(d_opt);
    bounds_cmd->add_option("--r", bounds.r);
    bounds_cmd->add_flag("--lemma-grid", bounds.lemma_grid, "Add merging-lemma checks for k=1..10");
    bounds_cmd->add_option("-o,--output", bounds.output);

    VerifyArgs verify;
    CLI::App* verify_cmd = app.add_subcommand("verify", "Run the acceptance criteria");
    verify_cmd->add_option("--jobs", verify.jobs)->check(CLI::NonNegativeNumber);
    verify_cmd->add_option("--only", verify.only, "Criterion numbers to run")
        ->delimiter(',')
        ->check(CLI::Range(1, 9));
    verify_cmd->add_flag("-v,--verbose", verify.verbose, "Per-cell diagnostics on stderr");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitArgument;
    }

    try {
        if (*trial_cmd) return run_trial_command(trial);
        if (*sweep_cmd) {
            if (!sweep_config.empty()) apply_config_file(*sweep_cmd, sweep_config);
            return run_sweep_command(sweep);
        }
        if (*bounds_cmd) {
            if (*k_opt) bounds.k = bounds_k;
            if (*d_opt) bounds.d = bounds_d;
            return run_bounds_command(bounds);
        }
        return run_verify_command(verify);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitArgument;
    }
}
