// Command-line entry point: validate, run and compare subcommands.
//
// Exit codes: 0 success, 1 scenario validation failure, 2 usage error.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "romeo/report.hpp"
#include "romeo/run.hpp"
#include "romeo/scenario_text.hpp"

namespace romeo::cli {

inline constexpr int kOk = 0;
inline constexpr int kInvalid = 1;
inline constexpr int kUsage = 2;

namespace fs = std::filesystem;

inline std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read scenario file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw UsageError("cannot write '" + path.string() + "'");
    out << content;
}

/// Worker count for batches: ROMEO_SIM_THREADS if set to a positive integer,
/// otherwise the hardware concurrency.
inline std::size_t thread_budget() {
    if (const char* env = std::getenv("ROMEO_SIM_THREADS")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Runs every job with at most `threads` workers. Each job owns its slot.
template <typename Job>
void parallel_for(std::size_t count, std::size_t threads, Job job) {
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> failures(count);
    {
        std::vector<std::jthread> workers;
        for (std::size_t w = 0; w < threads; ++w) {
            workers.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        job(i);
                    } catch (...) {
                        failures[i] = std::current_exception();
                    }
                }
            });
        }
    }
    for (auto& f : failures) {
        if (f) std::rethrow_exception(f);
    }
}

struct OutputOptions {
    std::string format = "both";
    bool plot = false;
};

inline void write_result(const fs::path& dir, const SimulationResult& r, const OutputOptions& opts) {
    fs::create_directories(dir);
    if (opts.format == "csv" || opts.format == "both") {
        write_file(dir / "results.csv", emit_csv(r.results));
        write_file(dir / "accuracy.csv", emit_csv(r.accuracy));
        write_file(dir / "satisfaction.csv", emit_csv(r.satisfaction));
    }
    if (opts.format == "json" || opts.format == "both") write_file(dir / "result.json", emit_json(r));
    if (opts.plot && !r.results.empty()) {
        write_file(dir / "results.svg", render_plot(r.results));
        write_file(dir / "accuracy.svg", render_plot(r.accuracy));
        write_file(dir / "satisfaction.svg", render_plot(r.satisfaction));
    }
}

/// Mean of the present values; nullopt when none is present.
inline std::optional<double> mean_present(const std::vector<std::optional<double>>& values) {
    std::vector<double> present;
    for (const auto& v : values) {
        if (v) present.push_back(*v);
    }
    return mean_of(present);
}

inline std::string summary_row(const std::string& label, const SummaryStats& s) {
    return label + "," + detail::fixed6(s.mae) + "," + detail::fixed6(s.mean_satisfaction) + "," +
           detail::fixed6(s.mean_interaction_rate) + "\n";
}

/// Per-run summary rows followed by their mean.
inline std::string summary_table(const std::string& key, const std::vector<std::string>& labels,
                                 const std::vector<SimulationResult>& results, bool with_mean) {
    std::string out = key + ",mae,mean_satisfaction,mean_interaction_rate\n";
    std::vector<std::optional<double>> mae, sat, rate;
    for (std::size_t i = 0; i < results.size(); ++i) {
        out += summary_row(labels[i], results[i].summary);
        mae.push_back(results[i].summary.mae);
        sat.push_back(results[i].summary.mean_satisfaction);
        rate.push_back(results[i].summary.mean_interaction_rate);
    }
    if (with_mean) {
        SummaryStats mean{mean_present(mae), mean_present(sat), mean_present(rate), 0};
        out += summary_row("mean", mean);
    }
    return out;
}

/// "weighted_mean" or "time_decay_weighted_mean[:decay]".
inline EngineConfig engine_from_spec(const std::string& spec, EngineConfig base) {
    auto colon = spec.find(':');
    std::string name = spec.substr(0, colon);
    if (name == "weighted_mean" && colon == std::string::npos) {
        base.kind = EngineKind::WeightedMean;
        return base;
    }
    if (name == "time_decay_weighted_mean") {
        base.kind = EngineKind::TimeDecayWeightedMean;
        if (colon != std::string::npos) {
            std::string num = spec.substr(colon + 1);
            char* end = nullptr;
            double decay = std::strtod(num.c_str(), &end);
            if (num.empty() || *end != '\0' || !(decay > 0.0 && decay <= 1.0)) {
                throw UsageError("engine decay must be in (0,1]: '" + spec + "'");
            }
            base.decay = decay;
        }
        return base;
    }
    throw UsageError("unknown engine '" + spec + "'");
}

inline std::string engine_label(const std::string& spec) {
    std::string label = spec;
    std::replace(label.begin(), label.end(), ':', '-');
    return label;
}

inline int run_main(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Reputation framework simulator for federated identity systems", "romeo-sim"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::uint64_t seed = 0;
    std::string out_dir;
    OutputOptions opts;
    std::size_t seeds = 1;
    std::vector<std::string> engines;

    auto* validate = app.add_subcommand("validate", "Check a scenario file");
    validate->add_option("--scenario", scenario_path, "Scenario file")->required();

    auto* run_cmd = app.add_subcommand("run", "Run a scenario and write series");
    run_cmd->add_option("--scenario", scenario_path, "Scenario file")->required();
    auto* seed_opt = run_cmd->add_option("--seed", seed, "Seed (defaults to the scenario's seed)");
    run_cmd->add_option("--out", out_dir, "Output directory")->required();
    run_cmd->add_option("--format", opts.format, "csv, json or both")
        ->check(CLI::IsMember({"csv", "json", "both"}));
    run_cmd->add_flag("--plot", opts.plot, "Also write SVG charts");
    run_cmd->add_option("--seeds", seeds, "Run seeds seed..seed+N-1")->check(CLI::PositiveNumber);

    auto* compare = app.add_subcommand("compare", "Run one scenario under several engines");
    compare->add_option("--scenario", scenario_path, "Scenario file")->required();
    auto* cmp_seed_opt = compare->add_option("--seed", seed, "Seed (defaults to the scenario's seed)");
    compare->add_option("--out", out_dir, "Output directory")->required();
    compare->add_option("--engines", engines, "Comma-separated engine list")
        ->required()
        ->delimiter(',');
    compare->add_flag("--plot", opts.plot, "Also write SVG charts");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kUsage;
    }

    try {
        Scenario scenario = parse_scenario(read_file(scenario_path));

        if (validate->parsed()) {
            auto count = [](std::size_t n, const char* one, const char* many) {
                return std::to_string(n) + " " + (n == 1 ? one : many);
            };
            out << "ok: " << count(scenario.user_count(), "user", "users") << ", "
                << count(scenario.providers.size(), "provider", "providers") << ", "
                << count(scenario.relying_parties.size(), "relying party", "relying parties") << ", "
                << count(scenario.iterations, "iteration", "iterations") << "\n";
            return kOk;
        }

        if (run_cmd->parsed()) {
            if (seed_opt->count() == 0) seed = scenario.seed;
            std::vector<SimulationResult> results(seeds);
            parallel_for(seeds, thread_budget(),
                         [&](std::size_t i) { results[i] = run(scenario, seed + i); });
            std::vector<std::string> labels;
            for (std::size_t i = 0; i < seeds; ++i) {
                labels.push_back(std::to_string(seed + i));
                fs::path dir = seeds == 1 ? fs::path(out_dir)
                                          : fs::path(out_dir) / ("seed-" + labels.back());
                write_result(dir, results[i], opts);
            }
            std::string table = summary_table("seed", labels, results, seeds > 1);
            write_file(fs::path(out_dir) / "summary.csv", table);
            out << table;
            return kOk;
        }

        if (compare->parsed()) {
            if (cmp_seed_opt->count() == 0) seed = scenario.seed;
            std::vector<Scenario> variants;
            for (const auto& spec : engines) {
                Scenario v = scenario;
                v.engine = engine_from_spec(spec, scenario.engine);
                variants.push_back(std::move(v));
            }
            std::vector<SimulationResult> results(variants.size());
            parallel_for(variants.size(), thread_budget(),
                         [&](std::size_t i) { results[i] = run(variants[i], seed); });
            std::vector<std::string> labels;
            for (std::size_t i = 0; i < variants.size(); ++i) {
                labels.push_back(engines[i]);
                write_result(fs::path(out_dir) / engine_label(engines[i]), results[i], opts);
            }
            std::string table = summary_table("engine", labels, results, false);
            write_file(fs::path(out_dir) / "compare.csv", table);
            out << table;
            return kOk;
        }
    } catch (const ScenarioError& e) {
        for (const auto& msg : e.errors()) err << scenario_path << ": " << msg << "\n";
        return kInvalid;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

inline int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_main(std::move(args), out, err);
}

} // namespace romeo::cli
