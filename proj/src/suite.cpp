#include "dyson_edge/suite.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <set>

#include "dyson_edge/errors.hpp"
#include "dyson_edge/io.hpp"
#include "dyson_edge/rng.hpp"

namespace dyson_edge {

using nlohmann::json;

namespace {

// Reads parameters of one test entry, remembering which keys were consumed so
// that leftovers can be rejected.
class Params {
public:
    Params(const json& j, std::string where) : j_(j), where_(std::move(where)) {
        used_.insert("check");
        used_.insert("criterion");
    }

    double number(const char* key, double fallback) {
        used_.insert(key);
        if (!j_.contains(key)) return fallback;
        const auto& v = j_.at(key);
        if (!v.is_number()) fail(key, "expected a number");
        return v.get<double>();
    }

    int integer(const char* key, int fallback) {
        used_.insert(key);
        if (!j_.contains(key)) return fallback;
        const auto& v = j_.at(key);
        if (!v.is_number_integer()) fail(key, "expected an integer");
        return v.get<int>();
    }

    bool boolean(const char* key, bool fallback) {
        used_.insert(key);
        if (!j_.contains(key)) return fallback;
        const auto& v = j_.at(key);
        if (!v.is_boolean()) fail(key, "expected true or false");
        return v.get<bool>();
    }

    std::string text(const char* key, const std::string& fallback) {
        used_.insert(key);
        if (!j_.contains(key)) return fallback;
        const auto& v = j_.at(key);
        if (!v.is_string()) fail(key, "expected a string");
        return v.get<std::string>();
    }

    std::vector<double> numbers(const char* key, const std::vector<double>& fallback) {
        used_.insert(key);
        if (!j_.contains(key)) return fallback;
        const auto& v = j_.at(key);
        if (!v.is_array()) fail(key, "expected an array of numbers");
        std::vector<double> out;
        for (const auto& x : v) {
            if (!x.is_number()) fail(key, "expected an array of numbers");
            out.push_back(x.get<double>());
        }
        return out;
    }

    void finish() const {
        for (const auto& item : j_.items()) {
            if (!used_.count(item.key())) throw ConfigError(where_ + ": unknown parameter '" + item.key() + "'");
        }
    }

private:
    [[noreturn]] void fail(const char* key, const char* what) const {
        throw ConfigError(where_ + ": parameter '" + key + "': " + what);
    }

    const json& j_;
    std::string where_;
    std::set<std::string> used_;
};

using Runner = std::function<std::vector<TestReport>(Params&, const CheckContext&)>;

LimitRunParams limit_params(Params& p, const LimitRunParams& defaults) {
    LimitRunParams out = defaults;
    out.k = p.integer("k", out.k);
    out.beta = p.number("beta", out.beta);
    out.t0 = p.number("t0", out.t0);
    out.dt = p.number("dt", out.dt);
    out.n_paths = p.integer("n_paths", out.n_paths);
    out.times = p.numbers("times", out.times);
    out.threshold = p.number("threshold", out.threshold);
    return out;
}

const std::map<std::string, Runner>& registry() {
    static const std::map<std::string, Runner> runners{
        {"integral_2pi",
         [](Params& p, const CheckContext&) {
             const double tol = p.number("tolerance", 1e-8);
             p.finish();
             return std::vector<TestReport>{check_integral_2pi(tol)};
         }},
        {"semicircle_moments",
         [](Params& p, const CheckContext&) {
             const double tol = p.number("tolerance", 1e-10);
             p.finish();
             return check_semicircle_moments(tol);
         }},
        {"inverse_gap_identity",
         [](Params& p, const CheckContext& ctx) {
             const int n = p.integer("n", 100);
             const double beta = p.number("beta", 3.0);
             const int m = p.integer("n_samples", 2000);
             const double max_se = p.number("max_se", 3.0);
             p.finish();
             return check_inverse_gap_identity(n, beta, m, max_se, ctx);
         }},
        {"inverse_gap_limits",
         [](Params& p, const CheckContext& ctx) {
             const int n = p.integer("n", 200);
             const double beta = p.number("beta", 4.0);
             const int m = p.integer("n_samples", 2000);
             const double tol = p.number("tolerance", 0.1);
             const double lower = p.number("lower", 0.9);
             const double slack = p.number("slack", 0.1);
             p.finish();
             return check_inverse_gap_limits(n, beta, m, tol, lower, slack, ctx);
         }},
        {"fixed_time_spacings",
         [](Params& p, const CheckContext& ctx) {
             FixedTimeSpacingParams f;
             f.n = p.integer("n", f.n);
             f.beta = p.number("beta", f.beta);
             f.k = p.integer("k", f.k);
             f.n_samples = p.integer("n_samples", f.n_samples);
             const std::string sampler = p.text("sampler", "corners");
             if (sampler == "corners") f.sampler = SpacingSampler::corners;
             else if (sampler == "dense") f.sampler = SpacingSampler::dense;
             else throw ConfigError("fixed_time_spacings: sampler must be \"corners\" or \"dense\"");
             f.ks_threshold = p.number("ks_threshold", f.ks_threshold);
             f.correlation_threshold = p.number("correlation_threshold", f.correlation_threshold);
             f.counted_spacings = p.integer("counted_spacings", f.k);
             f.correlations_counted = p.boolean("correlations_counted", true);
             p.finish();
             return check_fixed_time_spacings(f, ctx);
         }},
        {"tridiagonal_vs_dense",
         [](Params& p, const CheckContext& ctx) {
             const int n = p.integer("n", 50);
             const int beta = p.integer("beta", 2);
             const int m = p.integer("n_samples", 5000);
             const double threshold = p.number("threshold", 0.04);
             p.finish();
             return std::vector<TestReport>{check_tridiagonal_vs_dense(n, beta, m, threshold, ctx)};
         }},
        {"corner_level_vs_dense",
         [](Params& p, const CheckContext& ctx) {
             const int n = p.integer("n", 8);
             const int beta = p.integer("beta", 1);
             const int m = p.integer("n_samples", 5000);
             const double threshold = p.number("threshold", 0.04);
             p.finish();
             return std::vector<TestReport>{check_corner_level_vs_dense(n, beta, m, threshold, ctx)};
         }},
        {"semicircle_rigidity",
         [](Params& p, const CheckContext& ctx) {
             const int n = p.integer("n", 500);
             const double beta = p.number("beta", 2.0);
             const int draws = p.integer("draws", 20);
             const int bins = p.integer("bins", 50);
             const double l1 = p.number("l1_threshold", 0.05);
             const double exponent = p.number("rigidity_exponent", 0.4);
             const double fraction = p.number("min_fraction", 0.99);
             p.finish();
             return check_semicircle_rigidity(n, beta, draws, bins, l1, exponent, fraction, ctx);
         }},
        {"stationarity",
         [](Params& p, const CheckContext& ctx) {
             const auto l = limit_params(p, LimitRunParams{});
             p.finish();
             return check_stationarity(l, ctx);
         }},
        {"restriction_consistency",
         [](Params& p, const CheckContext& ctx) {
             LimitRunParams d;
             d.times = {1.0};
             const auto l = limit_params(p, d);
             p.finish();
             return std::vector<TestReport>{check_restriction_consistency(l, ctx)};
         }},
        {"positivity",
         [](Params& p, const CheckContext& ctx) {
             LimitRunParams d;
             d.times = {1.0};
             d.n_paths = 1000;
             const auto l = limit_params(p, d);
             p.finish();
             return check_positivity(l, ctx);
         }},
        {"z_r_equivalence",
         [](Params& p, const CheckContext& ctx) {
             LimitRunParams d;
             d.times = {1.0};
             const auto l = limit_params(p, d);
             p.finish();
             return std::vector<TestReport>{check_z_r_equivalence(l, ctx)};
         }},
        {"bessel_domination",
         [](Params& p, const CheckContext& ctx) {
             const double beta = p.number("beta", 4.0);
             const double t0 = p.number("t0", 2.0 / beta);
             const double dimension = p.number("dimension", beta / 2.0);
             const double dt = p.number("dt", 1e-4);
             const double horizon = p.number("horizon", 1.0);
             const int paths = p.integer("n_paths", 100);
             p.finish();
             return check_bessel_domination(beta, t0, dimension, dt, horizon, paths, ctx);
         }},
        {"adjoint_annihilation",
         [](Params& p, const CheckContext& ctx) {
             const int k = p.integer("k", 1);
             const double beta = p.number("beta", 4.0);
             const double t0 = p.number("t0", 2.0 / beta);
             const int points = p.integer("n_points", 100);
             const double lo = p.number("lo", 0.2);
             const double hi = p.number("hi", 5.0);
             const double threshold = p.number("threshold", 1e-6);
             p.finish();
             return check_adjoint_annihilation(k, beta, t0, points, lo, hi, threshold, ctx);
         }},
        {"mdbm_spacings",
         [](Params& p, const CheckContext& ctx) {
             MdbmSpacingParams m;
             m.n = p.integer("n", m.n);
             m.k = p.integer("k", m.k);
             m.beta = p.number("beta", m.beta);
             m.t0 = p.number("t0", 2.0 / m.beta);
             m.dt = p.number("dt", m.dt);
             m.n_paths = p.integer("n_paths", m.n_paths);
             m.times = p.numbers("times", m.times);
             m.threshold = p.number("threshold", m.threshold);
             p.finish();
             return check_mdbm_spacings(m, ctx);
         }},
        {"remainder_limits",
         [](Params& p, const CheckContext& ctx) {
             const int n = p.integer("n", 200);
             const int k = p.integer("k", 2);
             const double beta = p.number("beta", 4.0);
             const double t0 = p.number("t0", 2.0 / beta);
             const int m = p.integer("n_samples", 500);
             const double tol = p.number("tolerance", 0.1);
             const double target = p.number("s_hat_target", 1.0);
             p.finish();
             return check_remainder_limits(n, k, beta, t0, m, tol, target, ctx);
         }},
    };
    return runners;
}

}  // namespace

std::vector<std::string> suite_check_names() {
    std::vector<std::string> out;
    for (const auto& [name, runner] : registry()) out.push_back(name);
    return out;
}

std::vector<TestReport> run_suite(const json& suite, const SuiteOptions& options) {
    if (!suite.is_object()) throw ConfigError("suite: expected a JSON object");
    for (const auto& item : suite.items()) {
        if (item.key() != "seed" && item.key() != "tests") {
            throw ConfigError("suite: unknown key '" + item.key() + "'");
        }
    }
    std::uint64_t seed = 42;
    if (suite.contains("seed")) {
        const auto& v = suite.at("seed");
        if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
            throw ConfigError("suite: 'seed' must be an unsigned integer");
        }
        seed = v.get<std::uint64_t>();
    }
    if (options.seed) seed = *options.seed;
    const json empty = json::array();
    const json& tests = suite.contains("tests") ? suite.at("tests") : empty;
    if (!tests.is_array()) throw ConfigError("suite: 'tests' must be an array");

    // Resolve everything before running anything, so a typo in the last entry
    // does not surface after an hour of simulation.
    struct Planned {
        const Runner* runner;
        int criterion;
        std::string where;
    };
    std::vector<Planned> plan;
    for (std::size_t i = 0; i < tests.size(); ++i) {
        const auto& t = tests[i];
        const std::string where = "suite test " + std::to_string(i);
        if (!t.is_object() || !t.contains("check") || !t.at("check").is_string()) {
            throw ConfigError(where + ": expected an object with a string 'check'");
        }
        const auto name = t.at("check").get<std::string>();
        const auto it = registry().find(name);
        if (it == registry().end()) throw ConfigError(where + ": unknown check '" + name + "'");
        int criterion = 0;
        if (t.contains("criterion")) {
            if (!t.at("criterion").is_number_integer()) throw ConfigError(where + ": 'criterion' must be an integer");
            criterion = t.at("criterion").get<int>();
        }
        plan.push_back({&it->second, criterion, where + " (" + name + ")"});
    }

    std::vector<TestReport> out;
    for (std::size_t i = 0; i < plan.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Params params(tests[i], plan[i].where);
        const CheckContext ctx{derive_seed(seed, i), options.parallelism};
        auto reports = (*plan[i].runner)(params, ctx);
        for (auto& r : reports) r.criterion = plan[i].criterion;
        if (options.on_test) {
            const double seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            options.on_test(i, reports, seconds);
        }
        out.insert(out.end(), reports.begin(), reports.end());
    }
    return out;
}

std::vector<TestReport> run_acceptance_suite(const std::filesystem::path& config_path, const SuiteOptions& options) {
    return run_suite(parse_json_strict(read_text_file(config_path), config_path.string()), options);
}

json default_suite() {
    json tests = json::array();
    const auto add = [&](int criterion, const char* check, json params = json::object()) {
        params["check"] = check;
        params["criterion"] = criterion;
        tests.push_back(std::move(params));
    };
    add(1, "integral_2pi");
    add(1, "semicircle_moments");
    add(2, "inverse_gap_identity", {{"n", 100}, {"beta", 3}, {"n_samples", 2000}, {"max_se", 3}});
    add(3, "inverse_gap_limits",
        {{"n", 200}, {"beta", 4}, {"n_samples", 2000}, {"tolerance", 0.1}, {"lower", 0.9}, {"slack", 0.1}});
    add(4, "fixed_time_spacings",
        {{"sampler", "corners"},
         {"n", 150},
         {"beta", 2},
         {"k", 3},
         {"n_samples", 4000},
         {"ks_threshold", 0.05},
         {"correlation_threshold", 0.05},
         {"counted_spacings", 1}});
    for (int beta : {1, 4}) {
        add(4, "fixed_time_spacings",
            {{"sampler", "dense"},
             {"n", 100},
             {"beta", beta},
             {"k", 2},
             {"n_samples", 2000},
             {"ks_threshold", 0.06},
             {"correlation_threshold", 0.05},
             {"correlations_counted", false}});
    }
    add(5, "tridiagonal_vs_dense", {{"n", 50}, {"beta", 2}, {"n_samples", 5000}, {"threshold", 0.04}});
    for (int beta : {1, 2, 4}) {
        add(5, "corner_level_vs_dense", {{"n", 8}, {"beta", beta}, {"n_samples", 5000}, {"threshold", 0.04}});
    }
    add(6, "semicircle_rigidity",
        {{"n", 500},
         {"beta", 2},
         {"draws", 20},
         {"bins", 50},
         {"l1_threshold", 0.05},
         {"rigidity_exponent", 0.4},
         {"min_fraction", 0.99}});
    const json limit = {{"k", 3}, {"beta", 4}, {"t0", 0.5}, {"dt", 1e-4}};
    const auto with = [&](json extra) {
        json j = limit;
        j.update(extra);
        return j;
    };
    add(7, "stationarity", with({{"n_paths", 4000}, {"times", {1, 5}}, {"threshold", 0.05}}));
    add(8, "restriction_consistency", with({{"n_paths", 4000}, {"times", {1}}, {"threshold", 0.05}}));
    add(9, "positivity", with({{"n_paths", 1000}, {"times", {1}}}));
    add(9, "z_r_equivalence", with({{"n_paths", 4000}, {"times", {1}}, {"threshold", 0.05}}));
    add(10, "bessel_domination",
        {{"beta", 4}, {"t0", 0.5}, {"dimension", 2}, {"dt", 1e-4}, {"horizon", 1}, {"n_paths", 100}});
    for (int k : {1, 2, 3}) {
        for (int beta : {4, 5}) {
            add(11, "adjoint_annihilation",
                {{"k", k}, {"beta", beta}, {"n_points", 100}, {"lo", 0.2}, {"hi", 5}, {"threshold", 1e-6}});
        }
    }
    add(12, "mdbm_spacings",
        {{"n", 60},
         {"k", 2},
         {"beta", 4},
         {"t0", 0.5},
         {"dt", 1e-4},
         {"n_paths", 1000},
         {"times", {0, 0.5}},
         {"threshold", 0.08}});
    add(12, "remainder_limits",
        {{"n", 200}, {"k", 2}, {"beta", 4}, {"t0", 0.5}, {"n_samples", 500}, {"tolerance", 0.1}, {"s_hat_target", 1}});
    return {{"seed", std::uint64_t{42}}, {"tests", tests}};
}

bool suite_passed(const std::vector<TestReport>& reports) {
    for (const auto& r : reports) {
        if (!r.diagnostic && !r.pass) return false;
    }
    return true;
}

namespace {

// NaN and infinities have no JSON literal; store them as strings.
json number_or_string(double x) {
    if (std::isfinite(x)) return x;
    return format_double(x);
}

double number_from(const json& j) {
    if (j.is_number()) return j.get<double>();
    const auto s = j.get<std::string>();
    if (s == "nan" || s == "-nan") return std::nan("");
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    throw StructuralError("report: bad number '" + s + "'");
}

}  // namespace

json report_to_json(const TestReport& r) {
    return {{"name", r.name},
            {"criterion", r.criterion},
            {"diagnostic", r.diagnostic},
            {"statistic", number_or_string(r.statistic)},
            {"threshold", number_or_string(r.threshold)},
            {"pass", r.pass},
            {"sample_sizes", r.sample_sizes},
            {"seed", r.seed},
            {"reference", r.reference},
            {"details", r.details}};
}

TestReport report_from_json(const json& j) {
    try {
        TestReport r;
        r.name = j.at("name").get<std::string>();
        r.criterion = j.at("criterion").get<int>();
        r.diagnostic = j.at("diagnostic").get<bool>();
        r.statistic = number_from(j.at("statistic"));
        r.threshold = number_from(j.at("threshold"));
        r.pass = j.at("pass").get<bool>();
        r.sample_sizes = j.at("sample_sizes").get<std::vector<std::int64_t>>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.reference = j.at("reference").get<std::string>();
        r.details = j.at("details").get<std::string>();
        return r;
    } catch (const json::exception& e) {
        throw StructuralError(std::string("report: ") + e.what());
    }
}

std::string reports_to_json(const std::vector<TestReport>& reports) {
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(report_to_json(r));
    return arr.dump(2) + "\n";
}

std::vector<TestReport> reports_from_json(const std::string& text) {
    const json arr = parse_json_strict(text, "report");
    if (!arr.is_array()) throw StructuralError("report: expected a JSON array");
    std::vector<TestReport> out;
    for (const auto& j : arr) out.push_back(report_from_json(j));
    return out;
}

std::string reports_to_csv(const std::vector<TestReport>& reports) {
    std::string out = "name,criterion,diagnostic,statistic,threshold,pass\n";
    for (const auto& r : reports) {
        out += r.name + "," + std::to_string(r.criterion) + "," + (r.diagnostic ? "1" : "0") + "," +
               format_double(r.statistic) + "," + format_double(r.threshold) + "," + (r.pass ? "1" : "0") + "\n";
    }
    return out;
}

}  // namespace dyson_edge
