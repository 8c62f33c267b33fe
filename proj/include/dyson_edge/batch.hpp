#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dyson_edge/io.hpp"

namespace dyson_edge {

struct OutputFile {
    std::string path;  // relative to the output directory
    std::string sha256;
    std::uint64_t bytes = 0;
};

struct UnitFailure {
    std::uint64_t unit = 0;
    std::string kind;  // error class, e.g. "numerical"
    std::string message;
};

/// Everything needed to reproduce the outputs of one batch run.
struct RunManifest {
    std::string tool_version;
    std::string command;
    nlohmann::json config;
    std::uint64_t master_seed = 0;
    std::vector<std::uint64_t> unit_seeds;  // derive_seed(master_seed, unit)
    int parallelism = 1;
    std::string started;   // UTC, ISO 8601
    std::string finished;
    std::vector<OutputFile> outputs;
    std::vector<UnitFailure> failures;
    bool tests_passed = true;  // verify only
};

nlohmann::json manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j);

/// Runs config.sim.n_samples independent units (verify and report: the suite)
/// and writes outputs plus manifest.json into out_dir.
///
/// Unit i draws from RngStream(master_seed, i); per-unit text is buffered and
/// concatenated in unit order, so files do not depend on parallelism.
/// Failed units are listed in the manifest and left out of the outputs.
RunManifest batch_run(Command command, const RunConfig& config, int parallelism, const std::filesystem::path& out_dir,
                      std::optional<std::uint64_t> seed_override = std::nullopt, bool progress = false);

/// Recomputes the hashes of every output listed in dir/manifest.json; returns
/// the paths that are missing or differ.
std::vector<std::string> verify_manifest(const std::filesystem::path& dir);

std::string tool_version();

}  // namespace dyson_edge
