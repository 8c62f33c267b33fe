#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dyson_edge/types.hpp"

namespace dyson_edge {

/// Parses a JSON document; duplicate keys in any object are a ConfigError.
nlohmann::json parse_json_strict(std::string_view text, const std::string& origin);

/// Reads a whole file; IoError if it cannot be opened.
std::string read_text_file(const std::filesystem::path& path);

/// Writes `text` byte for byte (no newline translation).
void write_text_file(const std::filesystem::path& path, std::string_view text);

enum class Command { sample_ensemble, sample_corners, simulate_mdbm, simulate_limit, verify, report };

std::optional<Command> command_from_name(std::string_view name);
std::string_view command_name(Command c);

/// Whether a command integrates the dynamics (and so needs beta >= 4).
bool is_dynamics_command(Command c);

enum class Sampler { tridiagonal, corners, dense };

struct RunConfig {
    SimConfig sim;
    Sampler sampler = Sampler::corners;
    std::string suite;  // suite file for `verify`; empty means the built-in suite
};

/// Validated configuration from a JSON object with defaults applied.
///
/// Keys: beta, t0, n, k, dt, horizon, n_samples, seed, observation_times,
/// sampler, suite. Unknown keys, duplicate keys, wrong types and out-of-range
/// values are ConfigErrors that name the field.
RunConfig parse_config(const nlohmann::json& doc, std::optional<Command> command = std::nullopt);
RunConfig parse_config(const std::filesystem::path& path, std::optional<Command> command = std::nullopt);

nlohmann::json config_to_json(const RunConfig& config);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double x);

/// Long format: header "level,index,value", one row per particle, 1-based.
std::string array_to_csv(const GtArray& a);
GtArray array_from_csv(std::string_view text);

void write_array_csv(const GtArray& a, const std::filesystem::path& path);

/// Throws StructuralError for malformed content, ValidationError naming the
/// level and index of the first interlacing violation.
GtArray read_array_csv(const std::filesystem::path& path);

/// Header "path,time,r_1,...,r_k".
std::string trajectory_csv_header(int k);

/// Lower-case hex SHA-256 of a byte string or file.
std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace dyson_edge
