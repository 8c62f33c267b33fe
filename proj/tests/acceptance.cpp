// Runs the built-in acceptance suite and prints one verdict line per
// criterion 1-13. Criterion 13 (determinism) compares the full report of a
// run at parallelism 8 with a second run at parallelism 1.
//
// Exit status is 0 once every criterion has been evaluated, so that a red
// criterion shows up in the output rather than as a crashed test; pass
// --strict to get 1 when any criterion is red.
#include <chrono>
#include <cstdio>
#include <cstring>
#include <exception>
#include <map>
#include <string>
#include <vector>

#include "dyson_edge/io.hpp"
#include "dyson_edge/suite.hpp"

using namespace dyson_edge;

namespace {

// Wall-clock budgets per criterion in seconds. Statistical tolerances live in
// the suite itself (default_suite) and are printed with each item.
const std::map<int, double> kBudgetSeconds{
    {1, 1.0},    {2, 60.0},  {3, 120.0}, {4, 600.0},  {5, 300.0},  {6, 120.0},
    {7, 600.0},  {8, 600.0}, {9, 300.0}, {10, 60.0},  {11, 1.0},   {12, 1800.0},
};

struct CriterionResult {
    std::vector<TestReport> items;
    double seconds = 0.0;
};

std::map<int, CriterionResult> run_timed(const nlohmann::json& suite, int parallelism, std::string& report_json) {
    std::map<int, CriterionResult> by_criterion;
    SuiteOptions opt;
    opt.parallelism = parallelism;
    opt.on_test = [&](std::size_t i, const std::vector<TestReport>& reports, double seconds) {
        const int c = suite.at("tests").at(i).at("criterion").get<int>();
        auto& slot = by_criterion[c];
        slot.seconds += seconds;
        slot.items.insert(slot.items.end(), reports.begin(), reports.end());
        for (const auto& r : reports) {
            std::fprintf(stderr, "  [C%d] %-44s %s %.4g (<= %.4g)%s\n", c, r.name.c_str(), r.pass ? "pass" : "FAIL",
                         r.statistic, r.threshold, r.diagnostic ? " diagnostic" : "");
        }
        std::fprintf(stderr, "  [C%d] item %zu took %.1fs\n", c, i, seconds);
    };
    report_json = reports_to_json(run_suite(suite, opt));
    return by_criterion;
}

}  // namespace

int run(int argc, char** argv) {
    std::string report_path;
    bool strict = false;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--strict") == 0) {
            strict = true;
        } else if (std::strcmp(argv[i], "--report") == 0 && i + 1 < argc) {
            report_path = argv[++i];
        } else {
            std::fprintf(stderr, "usage: acceptance [--report FILE] [--strict]\n");
            return 2;
        }
    }

    const nlohmann::json suite = default_suite();
    std::fprintf(stderr, "run 1 of 2 (parallelism 8)\n");
    std::string first;
    const auto results = run_timed(suite, 8, first);
    std::fprintf(stderr, "run 2 of 2 (parallelism 1)\n");
    std::string second;
    run_timed(suite, 1, second);

    nlohmann::json summary = nlohmann::json::array();
    bool all_pass = true;
    for (int c = 1; c <= 12; ++c) {
        const auto it = results.find(c);
        const double budget = kBudgetSeconds.at(c);
        bool items_pass = it != results.end();
        std::string failed;
        int counted = 0;
        double seconds = 0.0;
        if (it != results.end()) {
            seconds = it->second.seconds;
            for (const auto& r : it->second.items) {
                if (r.diagnostic) continue;
                ++counted;
                if (!r.pass) {
                    items_pass = false;
                    failed += (failed.empty() ? "" : ", ") + r.name + "=" + format_double(r.statistic) + ">" +
                              format_double(r.threshold);
                }
            }
        }
        const bool time_ok = seconds < budget;
        const bool pass = items_pass && counted > 0 && time_ok;
        all_pass = all_pass && pass;
        std::printf("criterion %2d: %s  items %d%s  runtime %.1fs (budget %.0fs)%s\n", c, pass ? "PASS" : "FAIL", counted,
                    failed.empty() ? "" : ("  failed: " + failed).c_str(), seconds, budget,
                    time_ok ? "" : "  over budget");
        summary.push_back({{"criterion", c}, {"pass", pass}, {"items", counted}, {"failed", failed},
                           {"seconds", seconds}, {"budget_seconds", budget}});
    }
    const bool identical = first == second;
    all_pass = all_pass && identical;
    std::printf("criterion 13: %s  report at parallelism 8 vs 1: %s (%zu bytes)\n", identical ? "PASS" : "FAIL",
                identical ? "byte-identical" : "differs", first.size());
    summary.push_back({{"criterion", 13}, {"pass", identical}, {"report_bytes", first.size()}});
    std::fflush(stdout);

    if (!report_path.empty()) {
        nlohmann::json out{{"criteria", summary}, {"reports", nlohmann::json::parse(first)}};
        write_text_file(report_path, out.dump(2) + "\n");
    }
    return strict && !all_pass ? 1 : 0;
}

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "acceptance: %s\n", e.what());
        return 3;
    }
}
