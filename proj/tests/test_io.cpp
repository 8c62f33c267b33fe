#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <limits>
#include <set>
#include <string>

#include "dyson_edge/batch.hpp"
#include "dyson_edge/errors.hpp"
#include "dyson_edge/io.hpp"
#include "dyson_edge/suite.hpp"

#ifndef DE_SOURCE_DIR
#error "DE_SOURCE_DIR must point at the source tree"
#endif

using namespace dyson_edge;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("dyson_edge_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string message_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("minimal config gets the documented defaults") {
    const auto c = parse_config(json::parse(R"({"beta": 4, "t0": 0.5, "n": 60, "k": 2, "seed": 1})"));
    CHECK(c.sim.dt == 1e-4);
    CHECK(c.sim.horizon == 1.0);
    CHECK(c.sim.n_samples == 1000);
    CHECK(c.sim.seed == 1);
    CHECK(c.suite.empty());
    // the round trip through JSON is stable
    CHECK(config_to_json(parse_config(config_to_json(c))) == config_to_json(c));
}

TEST_CASE("config rejections name the field") {
    const auto msg = message_of([] {
        parse_config(json::parse(R"({"beta": 2, "n": 10, "k": 1})"), Command::simulate_mdbm);
    });
    CHECK(msg.find("beta") != std::string::npos);
    CHECK(msg.find(">= 4") != std::string::npos);
    CHECK_NOTHROW(parse_config(json::parse(R"({"beta": 2, "n": 10, "k": 1})"), Command::sample_corners));

    CHECK_THROWS_AS(parse_config(json::parse(R"({"betta": 4})")), ConfigError);
    CHECK(message_of([] { parse_config(json::parse(R"({"betta": 4})")); }).find("betta") != std::string::npos);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"n": 2.5})")), ConfigError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"n": "ten"})")), ConfigError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"seed": -1})")), ConfigError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"sampler": "dense", "beta": 3})")), ConfigError);
    CHECK_THROWS_AS(parse_config(json::parse(R"([1, 2])")), ConfigError);
}

TEST_CASE("duplicate keys are parse errors") {
    CHECK_THROWS_AS(parse_json_strict(R"({"beta": 4, "beta": 5})", "c.json"), ConfigError);
    CHECK_THROWS_AS(parse_json_strict(R"({"a": {"x": 1, "x": 2}})", "c.json"), ConfigError);
    CHECK_THROWS_AS(parse_json_strict(R"({"a": )", "c.json"), ConfigError);
    CHECK(parse_json_strict(R"({"a": {"x": 1}, "b": {"x": 2}})", "c.json").size() == 2);
}

TEST_CASE("missing config file") {
    CHECK_THROWS_AS(parse_config(fs::path("/nonexistent/config.json")), IoError);
}

TEST_CASE("array csv round trip") {
    const auto a = GtArray::from_rows({{1e-300}, {-1.0 / 3.0, 0.1}, {-2.5, 0.0, 7.0 / 9.0}});
    CHECK(array_from_csv(array_to_csv(a)) == a);
    const fs::path dir = scratch("csv");
    fs::create_directories(dir);
    write_array_csv(a, dir / "a.csv");
    CHECK(read_array_csv(dir / "a.csv") == a);
    CHECK(array_to_csv(a).rfind("level,index,value\n1,1,1e-300\n2,1,", 0) == 0);
    fs::remove_all(dir);
}

TEST_CASE("array csv errors") {
    CHECK_THROWS_AS(array_from_csv(""), StructuralError);
    CHECK_THROWS_AS(array_from_csv("level,value\n1,0\n"), StructuralError);
    CHECK_THROWS_AS(array_from_csv("level,index,value\n1,1,0\n2,1,0\n"), StructuralError);
    CHECK_THROWS_AS(array_from_csv("level,index,value\n1,1,x\n"), StructuralError);
    const std::string bad = "level,index,value\n1,1,0\n2,1,-1\n2,2,1\n3,1,-2\n3,2,-1.5\n3,3,2\n";
    CHECK_THROWS_AS(array_from_csv(bad), ValidationError);
    const auto msg = message_of([&] { array_from_csv(bad); });
    // x^2_1 = -1 lies above x^3_2 = -1.5
    CHECK(msg.find("level 2") != std::string::npos);
    CHECK(msg.find("index 1") != std::string::npos);
    CHECK(trajectory_csv_header(3) == "path,time,r_1,r_2,r_3\n");
}

TEST_CASE("number formatting") {
    for (double x : {0.1, 1.0 / 3.0, -2.5e-17, 1e300, 0.0}) CHECK(std::stod(format_double(x)) == x);
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(3.0) == "3");
}

TEST_CASE("sha256") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("batch outputs do not depend on parallelism") {
    for (const auto command : {Command::sample_ensemble, Command::sample_corners, Command::simulate_limit,
                               Command::simulate_mdbm}) {
        json doc = json::parse(R"({"beta": 4, "t0": 0.5, "n": 8, "k": 2, "seed": 7,
                                   "dt": 0.001, "horizon": 0.05, "n_samples": 24})");
        if (command == Command::sample_ensemble) doc["sampler"] = "tridiagonal";
        const RunConfig c = parse_config(doc, command);
        CAPTURE(command_name(command));
        const fs::path d1 = scratch("p1"), d8 = scratch("p8");
        const auto m1 = batch_run(command, c, 1, d1);
        const auto m8 = batch_run(command, c, 8, d8);
        REQUIRE(m1.outputs.size() == 1);
        REQUIRE(m8.outputs.size() == 1);
        CHECK(m1.outputs[0].sha256 == m8.outputs[0].sha256);
        CHECK(read_text_file(d1 / m1.outputs[0].path) == read_text_file(d8 / m8.outputs[0].path));
        CHECK(m1.unit_seeds == m8.unit_seeds);
        CHECK(m1.unit_seeds.size() == 24);
        CHECK(m1.failures.empty());
        CHECK(verify_manifest(d1).empty());
        fs::remove_all(d1);
        fs::remove_all(d8);
    }
}

TEST_CASE("seed override replaces the configured seed") {
    RunConfig c = parse_config(json::parse(R"({"beta": 2, "n": 5, "k": 1, "seed": 7, "n_samples": 3})"));
    const fs::path a = scratch("seed_a"), b = scratch("seed_b");
    const auto ma = batch_run(Command::sample_corners, c, 1, a, 99);
    c.sim.seed = 99;
    const auto mb = batch_run(Command::sample_corners, c, 1, b);
    CHECK(ma.master_seed == 99);
    CHECK(ma.outputs[0].sha256 == mb.outputs[0].sha256);
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("zero samples give an empty output and success") {
    const RunConfig c = parse_config(json::parse(R"({"beta": 4, "n": 5, "k": 1, "n_samples": 0})"));
    const fs::path d = scratch("empty");
    const auto m = batch_run(Command::simulate_limit, c, 4, d);
    REQUIRE(m.outputs.size() == 1);
    CHECK(m.failures.empty());
    const std::string text = read_text_file(d / m.outputs[0].path);
    CHECK(text == trajectory_csv_header(1));
    fs::remove_all(d);
}

TEST_CASE("manifest round trip and tamper detection") {
    const RunConfig c = parse_config(json::parse(R"({"beta": 2, "n": 4, "k": 1, "n_samples": 5})"));
    const fs::path d = scratch("tamper");
    const auto m = batch_run(Command::sample_corners, c, 2, d);
    const auto back = manifest_from_json(parse_json_strict(read_text_file(d / "manifest.json"), "manifest"));
    CHECK(manifest_to_json(back) == manifest_to_json(m));
    CHECK(back.tool_version == tool_version());
    CHECK(back.config == config_to_json(c));
    CHECK(verify_manifest(d).empty());
    {
        std::ofstream f(d / m.outputs[0].path, std::ios::app);
        f << "1,1,1,0\n";
    }
    CHECK(verify_manifest(d) == std::vector<std::string>{m.outputs[0].path});
    fs::remove(d / m.outputs[0].path);
    CHECK(verify_manifest(d).size() == 1);
    fs::remove_all(d);
}

TEST_CASE("verify and report commands") {
    const fs::path d = scratch("verify");
    fs::create_directories(d);
    write_text_file(d / "suite.json", R"({"seed": 3, "tests": [{"check": "integral_2pi", "criterion": 1}]})");
    RunConfig c;
    c.suite = (d / "suite.json").string();
    const auto m = batch_run(Command::verify, c, 1, d);
    CHECK(m.tests_passed);
    CHECK(m.master_seed == 3);
    CHECK(m.outputs.size() == 2);
    const auto reports = reports_from_json(read_text_file(d / "report.json"));
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].name == "integral_2pi");
    const auto r = batch_run(Command::report, RunConfig{}, 1, d);
    CHECK(r.tests_passed);
    CHECK(read_text_file(d / "summary.csv").rfind("name,criterion,diagnostic,statistic,threshold,pass\n", 0) == 0);
    fs::remove_all(d);
}

TEST_CASE("suite documents") {
    CHECK(run_suite(json::parse(R"({"seed": 1, "tests": []})")).empty());
    CHECK(suite_passed({}));
    const auto one = run_suite(json::parse(R"({"tests": [{"check": "integral_2pi", "criterion": 1}]})"));
    REQUIRE(one.size() == 1);
    CHECK(one[0].pass);
    CHECK(one[0].criterion == 1);
    CHECK_THROWS_AS(run_suite(json::parse(R"({"tests": [{"check": "nope"}]})")), ConfigError);
    CHECK_THROWS_AS(run_suite(json::parse(R"({"tests": [{"check": "integral_2pi", "tolerence": 1}]})")),
                    ConfigError);
    // a bad later item is caught before anything runs
    int ran = 0;
    SuiteOptions opt;
    opt.on_test = [&](std::size_t, const std::vector<TestReport>&, double) { ++ran; };
    CHECK_THROWS_AS(run_suite(json::parse(R"({"tests": [{"check": "integral_2pi"}, {"check": "nope"}]})"), opt),
                    ConfigError);
    CHECK(ran == 0);
}

TEST_CASE("suite reports are byte-identical across runs and parallelism") {
    const json suite = json::parse(R"({"seed": 42, "tests": [
        {"check": "inverse_gap_identity", "criterion": 2, "n": 20, "beta": 3, "n_samples": 200, "max_se": 3},
        {"check": "stationarity", "criterion": 7, "k": 2, "dt": 0.001, "n_paths": 100, "times": [0.2]}]})");
    SuiteOptions p1, p8;
    p8.parallelism = 8;
    const std::string a = reports_to_json(run_suite(suite, p1));
    CHECK(a == reports_to_json(run_suite(suite, p1)));
    CHECK(a == reports_to_json(run_suite(suite, p8)));
    SuiteOptions other;
    other.seed = 43;
    CHECK(a != reports_to_json(run_suite(suite, other)));
}

TEST_CASE("suites built in memory match parsed suites") {
    // json literals in C++ hold signed integers; parsed text holds unsigned ones
    json item{{"check", "inverse_gap_identity"}, {"criterion", 2}, {"n", 20}, {"beta", 3}, {"n_samples", 50}};
    const json built{{"seed", 42}, {"tests", json::array({item})}};
    const json parsed = json::parse(built.dump());
    CHECK(reports_to_json(run_suite(built)) == reports_to_json(run_suite(parsed)));
    CHECK_THROWS_AS(run_suite(json{{"seed", -1}, {"tests", json::array()}}), ConfigError);
    CHECK_THROWS_AS(run_suite(json{{"seed", 1.5}, {"tests", json::array()}}), ConfigError);
}

TEST_CASE("report serialization") {
    TestReport r = make_report("x", 0.25, 0.5, {10, 20}, 99, "ref", "details");
    r.criterion = 4;
    r.diagnostic = true;
    const auto back = reports_from_json(reports_to_json({r}));
    REQUIRE(back.size() == 1);
    CHECK(back[0].name == "x");
    CHECK(back[0].statistic == 0.25);
    CHECK(back[0].sample_sizes == std::vector<std::int64_t>{10, 20});
    CHECK(back[0].diagnostic);
    CHECK(back[0].criterion == 4);
    TestReport inf = make_report("inf", std::numeric_limits<double>::infinity(), 1.0, {}, 1, "");
    CHECK(std::isinf(reports_from_json(reports_to_json({inf}))[0].statistic));
}

TEST_CASE("shipped acceptance config is the built-in suite") {
    const fs::path shipped = fs::path(DE_SOURCE_DIR) / "config" / "acceptance_suite.json";
    CHECK(parse_json_strict(read_text_file(shipped), shipped.string()) == default_suite());
    // every criterion 1-12 is covered
    const auto suite = default_suite();
    std::set<int> criteria;
    for (const auto& t : suite.at("tests")) criteria.insert(t.at("criterion").get<int>());
    for (int c = 1; c <= 12; ++c) CHECK(criteria.count(c) == 1);
    CHECK(criteria.size() == 12);
}

TEST_CASE("example configs parse") {
    for (const auto& entry : fs::directory_iterator(fs::path(DE_SOURCE_DIR) / "config")) {
        if (entry.path().filename() == "acceptance_suite.json") continue;
        if (entry.path().extension() != ".json") continue;
        CAPTURE(entry.path().string());
        CHECK_NOTHROW(parse_config(entry.path()));
    }
}

TEST_CASE("config schema lists exactly the parser's keys and defaults") {
    const fs::path path = fs::path(DE_SOURCE_DIR) / "docs" / "config.schema.json";
    const auto schema = parse_json_strict(read_text_file(path), path.string());
    const auto defaults = config_to_json(RunConfig{});
    const auto& props = schema.at("properties");
    CHECK(props.size() == defaults.size());
    for (const auto& item : defaults.items()) {
        CAPTURE(item.key());
        REQUIRE(props.contains(item.key()));
        CHECK(props.at(item.key()).at("default") == item.value());
    }
}
