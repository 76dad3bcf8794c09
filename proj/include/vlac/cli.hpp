#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "vlac/aggregation.hpp"

namespace vlac::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDataError = 2;
inline constexpr int kExitNumericFailure = 3;

/// Settings shared by every subcommand. Built-in defaults come first;
/// a JSON config file and then flags override them.
struct RunConfig {
  Method method = Method::kVlac;
  ModelParams params;
  std::filesystem::path data_root = ".";
  std::filesystem::path output_dir;  ///< empty: same as data_root
};

/// Applies the keys present in a JSON config file on top of `config`.
void apply_config_file(RunConfig& config, const std::filesystem::path& path);

/// Entry point of the `vlac` executable. Logs go to `log` as one JSON object
/// per line; command results (paths, tables) go to `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& log);
int run(int argc, const char* const* argv);

}  // namespace vlac::cli
