#include "dyson_edge/batch.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <exception>

#include "dyson_edge/core_model.hpp"
#include "dyson_edge/ensemble.hpp"
#include "dyson_edge/errors.hpp"
#include "dyson_edge/limit.hpp"
#include "dyson_edge/mdbm.hpp"
#include "dyson_edge/parallel.hpp"
#include "dyson_edge/rng.hpp"
#include "dyson_edge/suite.hpp"

namespace dyson_edge {

using nlohmann::json;

std::string tool_version() { return "0.1.0"; }

namespace {

std::string utc_now() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct Unit {
    std::string text;
    bool failed = false;
    std::string kind;
    std::string message;
};

std::vector<double> observation_times(const SimConfig& c) {
    if (!c.observation_times.empty()) return c.observation_times;
    return {0.0, c.horizon};
}

std::string spectrum_rows(std::size_t sample, const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out += std::to_string(sample) + "," + std::to_string(i + 1) + "," + format_double(values[i]) + "\n";
    }
    return out;
}

std::string array_rows(std::size_t sample, const GtArray& a) {
    std::string out;
    for (int k = 1; k <= a.n_levels(); ++k) {
        const auto row = a.level(k);
        for (int i = 0; i < k; ++i) {
            out += std::to_string(sample) + "," + std::to_string(k) + "," + std::to_string(i + 1) + "," +
                   format_double(row[static_cast<std::size_t>(i)]) + "\n";
        }
    }
    return out;
}

std::string trajectory_rows(std::size_t path, const std::vector<double>& times, const std::vector<SpacingVector>& r) {
    std::string out;
    for (std::size_t j = 0; j < times.size(); ++j) {
        out += std::to_string(path) + "," + format_double(times[j]);
        for (double v : r[j].r) out += "," + format_double(v);
        out += "\n";
    }
    return out;
}

void record(RunManifest& m, const std::filesystem::path& dir, const std::string& name, const std::string& text) {
    write_text_file(dir / name, text);
    m.outputs.push_back({name, sha256_hex(text), text.size()});
}

}  // namespace

json manifest_to_json(const RunManifest& m) {
    json outputs = json::array();
    for (const auto& o : m.outputs) outputs.push_back({{"path", o.path}, {"sha256", o.sha256}, {"bytes", o.bytes}});
    json failures = json::array();
    for (const auto& f : m.failures) failures.push_back({{"unit", f.unit}, {"kind", f.kind}, {"message", f.message}});
    return {{"tool_version", m.tool_version}, {"command", m.command},       {"config", m.config},
            {"master_seed", m.master_seed},   {"unit_seeds", m.unit_seeds}, {"parallelism", m.parallelism},
            {"started", m.started},           {"finished", m.finished},     {"outputs", outputs},
            {"failures", failures},           {"tests_passed", m.tests_passed}};
}

RunManifest manifest_from_json(const json& j) {
    try {
        RunManifest m;
        m.tool_version = j.at("tool_version").get<std::string>();
        m.command = j.at("command").get<std::string>();
        m.config = j.at("config");
        m.master_seed = j.at("master_seed").get<std::uint64_t>();
        m.unit_seeds = j.at("unit_seeds").get<std::vector<std::uint64_t>>();
        m.parallelism = j.at("parallelism").get<int>();
        m.started = j.at("started").get<std::string>();
        m.finished = j.at("finished").get<std::string>();
        for (const auto& o : j.at("outputs")) {
            m.outputs.push_back({o.at("path").get<std::string>(), o.at("sha256").get<std::string>(),
                                 o.at("bytes").get<std::uint64_t>()});
        }
        for (const auto& f : j.at("failures")) {
            m.failures.push_back(
                {f.at("unit").get<std::uint64_t>(), f.at("kind").get<std::string>(), f.at("message").get<std::string>()});
        }
        m.tests_passed = j.at("tests_passed").get<bool>();
        return m;
    } catch (const json::exception& e) {
        throw StructuralError(std::string("manifest: ") + e.what());
    }
}

RunManifest batch_run(Command command, const RunConfig& config, int parallelism, const std::filesystem::path& out_dir,
                      std::optional<std::uint64_t> seed_override, bool progress) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

    RunManifest m;
    m.tool_version = tool_version();
    m.command = std::string(command_name(command));
    m.config = config_to_json(config);
    m.parallelism = std::max(1, parallelism);
    m.started = utc_now();
    const SimConfig& c = config.sim;

    if (command == Command::verify) {
        const json suite = config.suite.empty()
                               ? default_suite()
                               : parse_json_strict(read_text_file(config.suite), config.suite);
        SuiteOptions options;
        options.parallelism = m.parallelism;
        options.seed = seed_override;
        if (progress) {
            options.on_test = [](std::size_t i, const std::vector<TestReport>& reports, double seconds) {
                for (const auto& r : reports) {
                    std::fprintf(stderr, "[%zu] %-44s %s %.4g (<= %.4g)%s  %.1fs\n", i, r.name.c_str(),
                                 r.pass ? "PASS" : "FAIL", r.statistic, r.threshold, r.diagnostic ? " diag" : "",
                                 seconds);
                }
            };
        }
        m.master_seed = seed_override ? *seed_override
                                      : (suite.contains("seed") && suite.at("seed").is_number_integer()
                                             ? suite.at("seed").get<std::uint64_t>()
                                             : 42);
        const auto reports = run_suite(suite, options);
        const std::size_t n_tests = suite.contains("tests") ? suite.at("tests").size() : 0;
        for (std::size_t i = 0; i < n_tests; ++i) m.unit_seeds.push_back(derive_seed(m.master_seed, i));
        record(m, out_dir, "report.json", reports_to_json(reports));
        record(m, out_dir, "summary.csv", reports_to_csv(reports));
        m.tests_passed = suite_passed(reports);
    } else if (command == Command::report) {
        const auto reports = reports_from_json(read_text_file(out_dir / "report.json"));
        record(m, out_dir, "summary.csv", reports_to_csv(reports));
        m.tests_passed = suite_passed(reports);
    } else {
        m.master_seed = seed_override.value_or(c.seed);
        const auto count = static_cast<std::size_t>(c.n_samples);
        const auto times = observation_times(c);
        std::vector<Unit> units(count);
        parallel_for(count, m.parallelism, [&](std::size_t i) {
            RngStream rng(m.master_seed, i);
            try {
                switch (command) {
                    case Command::sample_ensemble: {
                        const auto spectrum =
                            config.sampler == Sampler::dense
                                ? sample_dense_corner_levels(c.n, static_cast<int>(c.beta), 1, rng, c.n * c.t0)[0]
                                : sample_beta_hermite(c.n, c.beta, c.n * c.t0, rng);
                        units[i].text = spectrum_rows(i, spectrum.values);
                        break;
                    }
                    case Command::sample_corners: {
                        const auto a = config.sampler == Sampler::dense
                                           ? sample_dense_corners(c.n, static_cast<int>(c.beta), rng, c.n * c.t0)
                                           : sample_corners_process(c.n, c.beta, c.n * c.t0, rng);
                        units[i].text = array_rows(i, a);
                        break;
                    }
                    case Command::simulate_mdbm:
                        units[i].text = trajectory_rows(i, times, run_spacing_trajectory(c, times, rng));
                        break;
                    case Command::simulate_limit:
                        units[i].text = trajectory_rows(i, times, run_limit_r(c.k, c.beta, c.t0, c.dt, times, rng));
                        break;
                    default:
                        break;
                }
            } catch (const std::exception& e) {
                units[i] = Unit{{}, true, error_kind(e), e.what()};
            }
        });
        std::string text;
        std::string name;
        switch (command) {
            case Command::sample_ensemble:
                name = "spectra.csv";
                text = "sample,index,value\n";
                break;
            case Command::sample_corners:
                name = "corners.csv";
                text = "sample,level,index,value\n";
                break;
            default:
                name = "trajectories.csv";
                text = trajectory_csv_header(c.k);
                break;
        }
        for (std::size_t i = 0; i < count; ++i) {
            m.unit_seeds.push_back(derive_seed(m.master_seed, i));
            if (units[i].failed) {
                m.failures.push_back({i, units[i].kind, units[i].message});
            } else {
                text += units[i].text;
            }
        }
        record(m, out_dir, name, text);
    }
    m.finished = utc_now();
    write_text_file(out_dir / "manifest.json", manifest_to_json(m).dump(2) + "\n");
    return m;
}

std::vector<std::string> verify_manifest(const std::filesystem::path& dir) {
    const auto m = manifest_from_json(parse_json_strict(read_text_file(dir / "manifest.json"), "manifest.json"));
    std::vector<std::string> bad;
    for (const auto& o : m.outputs) {
        const auto path = dir / o.path;
        if (!std::filesystem::exists(path) || sha256_file(path) != o.sha256) bad.push_back(o.path);
    }
    return bad;
}

}  // namespace dyson_edge
