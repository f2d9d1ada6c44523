#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace corestab {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitInput = 2,      ///< unreadable or malformed input, invalid configuration
  kExitNumerical = 3,  ///< solver failure or training divergence
  kExitPartial = 4,    ///< some results were produced, others failed
};

/// Runs the `corestab` command line. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// FNV-1a 64 of a file's bytes, as 16 hex digits.
std::string file_hash(const std::filesystem::path& path);

struct RunManifest {
  std::string command;
  nlohmann::json config = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::vector<std::filesystem::path> inputs;
  double wall_time_seconds = 0.0;
};

nlohmann::json to_json(const RunManifest& m);

/// Writes `dir`/manifest.json.
void write_manifest(const std::filesystem::path& dir, const RunManifest& m);

}  // namespace corestab
