#pragma once

#include <cstdint>
#include <string>

namespace lassoscreen {

/// Run configuration shared by the CLI workflows. Loaded from flat key=value
/// files ('#' starts a comment); every key can be overridden by the
/// command-line flag of the same name.
struct Config {
  double lambda_ratio = 0.5;
  int m = 2;
  double solver_tol = 1e-9;
  double lasso_tol = 1e-8;
  double margin = 1e-9;
  std::uint64_t seed = 1;
  int parallelism = 1;
  int n = 50;   // synthetic instance rows (gen/bench, or verify without files)
  int p = 500;  // synthetic instance columns
  std::string dict;
  std::string target;
  std::string out;

  /// Throws std::invalid_argument when a value is out of range.
  void validate() const;
};

/// Applies one key=value pair; throws std::invalid_argument on an unknown key
/// or unparseable value.
void apply_key_value(Config& config, const std::string& key, const std::string& value);

/// Parses a config file. Missing file throws IoError::missing_file.
Config load_config_file(const std::string& path);

}  // namespace lassoscreen
