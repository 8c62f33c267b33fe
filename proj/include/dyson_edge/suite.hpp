#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dyson_edge/verify.hpp"

namespace dyson_edge {

/// Suite document:
///   {"seed": 42, "tests": [{"check": "<name>", "criterion": 1, <parameters>}, ...]}
/// Test i runs with seed derive_seed(seed, i). Unknown checks or parameters
/// are ConfigErrors.
struct SuiteOptions {
    int parallelism = 1;
    std::optional<std::uint64_t> seed;  // overrides the document seed
    /// Called after each test with its index and reports (progress output).
    std::function<void(std::size_t, const std::vector<TestReport>&, double seconds)> on_test;
};

/// Names of all checks a suite may reference.
std::vector<std::string> suite_check_names();

/// Runs every test in order; all reports concatenated.
std::vector<TestReport> run_suite(const nlohmann::json& suite, const SuiteOptions& options = {});

std::vector<TestReport> run_acceptance_suite(const std::filesystem::path& config_path,
                                             const SuiteOptions& options = {});

/// Acceptance suite covering criteria 1-12 with the default seed 42.
nlohmann::json default_suite();

/// True if every non-diagnostic report passes.
bool suite_passed(const std::vector<TestReport>& reports);

nlohmann::json report_to_json(const TestReport& r);
TestReport report_from_json(const nlohmann::json& j);

/// JSON array of reports, two-space indented, trailing newline.
std::string reports_to_json(const std::vector<TestReport>& reports);
std::vector<TestReport> reports_from_json(const std::string& text);

/// CSV with header name,criterion,diagnostic,statistic,threshold,pass.
std::string reports_to_csv(const std::vector<TestReport>& reports);

}  // namespace dyson_edge
