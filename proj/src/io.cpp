#include "dyson_edge/io.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "dyson_edge/core_model.hpp"
#include "dyson_edge/errors.hpp"

namespace dyson_edge {

using nlohmann::json;

json parse_json_strict(std::string_view text, const std::string& origin) {
    std::vector<std::set<std::string>> seen;
    const json::parser_callback_t check = [&](int, json::parse_event_t event, json& parsed) {
        switch (event) {
            case json::parse_event_t::object_start:
                seen.emplace_back();
                break;
            case json::parse_event_t::key: {
                const auto key = parsed.get<std::string>();
                if (!seen.back().insert(key).second) throw ConfigError(origin + ": duplicate key '" + key + "'");
                break;
            }
            case json::parse_event_t::object_end:
                seen.pop_back();
                break;
            default:
                break;
        }
        return true;
    };
    try {
        return json::parse(text.begin(), text.end(), check);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ": " + e.what());
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("failed reading " + path.string());
    return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) throw IoError("failed writing " + path.string());
}

namespace {

constexpr std::pair<Command, std::string_view> kCommands[] = {
    {Command::sample_ensemble, "sample-ensemble"}, {Command::sample_corners, "sample-corners"},
    {Command::simulate_mdbm, "simulate-mdbm"},     {Command::simulate_limit, "simulate-limit"},
    {Command::verify, "verify"},                   {Command::report, "report"},
};

}  // namespace

std::optional<Command> command_from_name(std::string_view name) {
    for (const auto& [c, n] : kCommands) {
        if (n == name) return c;
    }
    return std::nullopt;
}

std::string_view command_name(Command c) {
    for (const auto& [cmd, n] : kCommands) {
        if (cmd == c) return n;
    }
    return "?";
}

bool is_dynamics_command(Command c) { return c == Command::simulate_mdbm || c == Command::simulate_limit; }

namespace {

double number_field(const json& doc, const char* key) {
    const auto& v = doc.at(key);
    if (!v.is_number()) throw ConfigError(std::string("config field '") + key + "': expected a number");
    return v.get<double>();
}

std::int64_t integer_field(const json& doc, const char* key) {
    const auto& v = doc.at(key);
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (std::floor(d) == d && std::abs(d) < 9e15) return static_cast<std::int64_t>(d);
    }
    throw ConfigError(std::string("config field '") + key + "': expected an integer");
}

const char* sampler_name(Sampler s) {
    switch (s) {
        case Sampler::tridiagonal:
            return "tridiagonal";
        case Sampler::corners:
            return "corners";
        case Sampler::dense:
            return "dense";
    }
    return "?";
}

}  // namespace

RunConfig parse_config(const json& doc, std::optional<Command> command) {
    if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
    static const std::set<std::string> known{"beta", "t0",   "n",       "k",       "dt",   "horizon",
                                             "n_samples", "seed", "observation_times", "sampler", "suite"};
    for (const auto& item : doc.items()) {
        if (!known.count(item.key())) throw ConfigError("config field '" + item.key() + "': unknown key");
    }
    RunConfig out;
    SimConfig& c = out.sim;
    if (doc.contains("beta")) c.beta = number_field(doc, "beta");
    if (doc.contains("t0")) c.t0 = number_field(doc, "t0");
    if (doc.contains("dt")) c.dt = number_field(doc, "dt");
    if (doc.contains("horizon")) c.horizon = number_field(doc, "horizon");
    const auto narrow = [](std::int64_t v, const char* key) {
        if (v < 1 || v > std::numeric_limits<int>::max()) {
            throw ConfigError(std::string("config field '") + key + "': must be a positive integer");
        }
        return static_cast<int>(v);
    };
    if (doc.contains("n")) c.n = narrow(integer_field(doc, "n"), "n");
    if (doc.contains("k")) c.k = narrow(integer_field(doc, "k"), "k");
    if (doc.contains("n_samples")) c.n_samples = integer_field(doc, "n_samples");
    if (doc.contains("seed")) {
        const auto& v = doc.at("seed");
        if (v.is_number_unsigned()) {
            c.seed = v.get<std::uint64_t>();
        } else if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
            c.seed = static_cast<std::uint64_t>(v.get<std::int64_t>());
        } else {
            throw ConfigError("config field 'seed': expected an unsigned 64-bit integer");
        }
    }
    if (doc.contains("observation_times")) {
        const auto& v = doc.at("observation_times");
        if (!v.is_array()) throw ConfigError("config field 'observation_times': expected an array of numbers");
        for (const auto& t : v) {
            if (!t.is_number()) throw ConfigError("config field 'observation_times': expected an array of numbers");
            c.observation_times.push_back(t.get<double>());
        }
    }
    if (doc.contains("suite")) {
        const auto& v = doc.at("suite");
        if (!v.is_string()) throw ConfigError("config field 'suite': expected a file path string");
        out.suite = v.get<std::string>();
    }
    if (command == Command::sample_ensemble) out.sampler = Sampler::tridiagonal;
    if (doc.contains("sampler")) {
        const auto& v = doc.at("sampler");
        const std::string s = v.is_string() ? v.get<std::string>() : "";
        if (s == "tridiagonal") out.sampler = Sampler::tridiagonal;
        else if (s == "corners") out.sampler = Sampler::corners;
        else if (s == "dense") out.sampler = Sampler::dense;
        else throw ConfigError("config field 'sampler': expected \"tridiagonal\", \"corners\" or \"dense\"");
    }
    try {
        c.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("config field '") + e.what());
    }
    if (command && is_dynamics_command(*command) && c.beta < 4.0) {
        throw ConfigError("config field 'beta': " + std::string(command_name(*command)) +
                          " needs beta >= 4 (the multilevel dynamics is only defined there), got " +
                          format_double(c.beta));
    }
    if (out.sampler == Sampler::dense && c.beta != 1.0 && c.beta != 2.0 && c.beta != 4.0) {
        throw ConfigError("config field 'sampler': dense matrices need beta in {1, 2, 4}");
    }
    if (command == Command::sample_ensemble && out.sampler == Sampler::corners) {
        throw ConfigError("config field 'sampler': sample-ensemble uses \"tridiagonal\" or \"dense\"");
    }
    if (command == Command::sample_corners && out.sampler == Sampler::tridiagonal) {
        throw ConfigError("config field 'sampler': sample-corners uses \"corners\" or \"dense\"");
    }
    return out;
}

RunConfig parse_config(const std::filesystem::path& path, std::optional<Command> command) {
    return parse_config(parse_json_strict(read_text_file(path), path.string()), command);
}

json config_to_json(const RunConfig& config) {
    const SimConfig& c = config.sim;
    json j;
    j["beta"] = c.beta;
    j["t0"] = c.t0;
    j["n"] = c.n;
    j["k"] = c.k;
    j["dt"] = c.dt;
    j["horizon"] = c.horizon;
    j["n_samples"] = c.n_samples;
    j["seed"] = c.seed;
    j["observation_times"] = c.observation_times;
    j["sampler"] = sampler_name(config.sampler);
    j["suite"] = config.suite;
    return j;
}

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string array_to_csv(const GtArray& a) {
    std::string out = "level,index,value\n";
    for (int k = 1; k <= a.n_levels(); ++k) {
        const auto row = a.level(k);
        for (int i = 0; i < k; ++i) {
            out += std::to_string(k);
            out += ',';
            out += std::to_string(i + 1);
            out += ',';
            out += format_double(row[static_cast<std::size_t>(i)]);
            out += '\n';
        }
    }
    return out;
}

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) return out;
        start = pos + 1;
    }
}

template <class T>
T parse_number(std::string_view s, std::size_t line_no) {
    T v{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw StructuralError("line " + std::to_string(line_no) + ": cannot parse '" + std::string(s) + "'");
    }
    return v;
}

}  // namespace

GtArray array_from_csv(std::string_view text) {
    std::vector<std::string_view> lines;
    for (auto line : split(text, '\n')) {
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty()) lines.push_back(line);
    }
    if (lines.empty()) throw StructuralError("array csv: empty file");
    if (lines[0] != "level,index,value") throw StructuralError("array csv: expected header level,index,value");
    if (lines.size() == 1) throw StructuralError("array csv: no rows");
    std::vector<std::vector<double>> rows;
    for (std::size_t n = 1; n < lines.size(); ++n) {
        const auto fields = split(lines[n], ',');
        if (fields.size() != 3) throw StructuralError("line " + std::to_string(n + 1) + ": expected 3 fields");
        const int level = parse_number<int>(fields[0], n + 1);
        const int index = parse_number<int>(fields[1], n + 1);
        const double value = parse_number<double>(fields[2], n + 1);
        if (level == static_cast<int>(rows.size()) + 1 && index == 1) rows.emplace_back();
        if (rows.empty() || level != static_cast<int>(rows.size()) ||
            index != static_cast<int>(rows.back().size()) + 1 || index > level) {
            throw StructuralError("line " + std::to_string(n + 1) + ": expected level " +
                                  std::to_string(rows.size()) + " index " +
                                  std::to_string(rows.empty() ? 1 : rows.back().size() + 1) +
                                  " (rows must be complete and in order)");
        }
        if (!std::isfinite(value)) throw StructuralError("line " + std::to_string(n + 1) + ": non-finite value");
        rows.back().push_back(value);
    }
    if (rows.back().size() != rows.size()) throw StructuralError("array csv: last level is incomplete");
    GtArray a = GtArray::from_rows(rows);
    if (const auto v = find_interlacing_violation(a)) {
        throw ValidationError("array csv: interlacing violated at level " + std::to_string(v->level) + " index " +
                              std::to_string(v->index) + " (value " + format_double(v->value) + ", bound " +
                              format_double(v->bound) + ")");
    }
    return a;
}

void write_array_csv(const GtArray& a, const std::filesystem::path& path) { write_text_file(path, array_to_csv(a)); }

GtArray read_array_csv(const std::filesystem::path& path) { return array_from_csv(read_text_file(path)); }

std::string trajectory_csv_header(int k) {
    std::string h = "path,time";
    for (int i = 1; i <= k; ++i) h += ",r_" + std::to_string(i);
    return h + "\n";
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw InternalError("sha256: digest failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_text_file(path)); }

}  // namespace dyson_edge
