// Command-line front end; talks to the library only through the C API.
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dyson_edge.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitTestFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

int exit_code_for(de_status s) {
    switch (s) {
        case DE_OK:
            return kExitPass;
        case DE_ERR_NUMERICAL:
        case DE_ERR_STEP_SIZE:
        case DE_ERR_INTERNAL:
        case DE_ERR_UNKNOWN:
            return kExitNumerical;
        default:
            return kExitUsage;
    }
}

int report_error(de_status s) {
    std::fprintf(stderr, "dyson-edge: %s: %s\n", de_status_name(s), de_last_error());
    return exit_code_for(s);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation and verification toolkit for multilevel Dyson Brownian motion and its edge limit"};
    app.set_version_flag("--version", std::string(de_version()));
    app.require_subcommand(1);

    std::string config;
    std::string out = "out";
    int parallelism = 1;
    std::optional<std::uint64_t> seed;
    bool quiet = false;

    const std::vector<std::pair<std::string, std::string>> batch_commands{
        {"sample-ensemble", "Draw top-level spectra (tridiagonal or dense)"},
        {"sample-corners", "Draw full corners arrays"},
        {"simulate-mdbm", "Integrate the multilevel dynamics from a warm start; edge spacing trajectories"},
        {"simulate-limit", "Integrate the edge limit spacing system from its stationary law"},
        {"verify", "Run the acceptance suite (config key 'suite', default built in)"},
        {"report", "Summarize report.json in the output directory"},
    };
    std::vector<CLI::App*> batch;
    for (const auto& [name, help] : batch_commands) {
        auto* sub = app.add_subcommand(name, help);
        auto* opt = sub->add_option("--config", config, "JSON configuration file")->check(CLI::ExistingFile);
        if (name != "verify" && name != "report") opt->required();
        sub->add_option("--out", out, "Output directory")->capture_default_str();
        sub->add_option("--parallelism", parallelism, "Worker threads")->check(CLI::Range(1, 1024))->capture_default_str();
        sub->add_option("--seed", seed, "Master seed; overrides the configuration");
        sub->add_flag("--quiet", quiet, "No progress output");
        batch.push_back(sub);
    }

    auto* suite_cmd = app.add_subcommand("default-suite", "Print the built-in acceptance suite as JSON");
    std::string manifest_dir;
    auto* check_cmd = app.add_subcommand("check-manifest", "Re-hash the outputs recorded in a manifest");
    check_cmd->add_option("dir", manifest_dir, "Output directory holding manifest.json")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    if (suite_cmd->parsed()) {
        size_t needed = 0;
        de_status s = de_default_suite_json(nullptr, 0, &needed);
        if (s != DE_OK && s != DE_ERR_BUFFER_TOO_SMALL) return report_error(s);
        std::string text(needed, '\0');
        s = de_default_suite_json(text.data(), text.size(), &needed);
        if (s != DE_OK) return report_error(s);
        std::fputs(text.c_str(), stdout);
        return kExitPass;
    }
    if (check_cmd->parsed()) {
        int ok = 0;
        const de_status s = de_verify_manifest(manifest_dir.c_str(), &ok);
        if (s != DE_OK) return report_error(s);
        std::printf("%s\n", ok ? "all outputs match their recorded hashes" : "hash mismatch or missing output");
        return ok ? kExitPass : kExitTestFailure;
    }

    for (auto* sub : batch) {
        if (!sub->parsed()) continue;
        const std::string command = sub->get_name();
        int tests_passed = 1;
        size_t failed_units = 0;
        const std::uint64_t seed_value = seed.value_or(0);
        const de_status s = de_batch_run(command.c_str(), config.empty() ? nullptr : config.c_str(), out.c_str(),
                                         parallelism, seed ? &seed_value : nullptr, quiet ? 0 : 1, &tests_passed,
                                         &failed_units);
        if (s != DE_OK) return report_error(s);
        if (failed_units > 0) {
            std::fprintf(stderr, "dyson-edge: %zu unit(s) failed; see %s/manifest.json\n", failed_units, out.c_str());
            return kExitNumerical;
        }
        if (command == "verify" || command == "report") {
            std::printf("%s: %s (details in %s/summary.csv)\n", command.c_str(), tests_passed ? "PASS" : "FAIL",
                        out.c_str());
            return tests_passed ? kExitPass : kExitTestFailure;
        }
        if (!quiet) std::printf("%s: outputs written to %s\n", command.c_str(), out.c_str());
        return kExitPass;
    }
    return kExitUsage;
}
