#include "lassoscreen/config.hpp"

#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include "lassoscreen/errors.hpp"

namespace lassoscreen {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0')
    throw std::invalid_argument("config: bad number for " + key + ": '" + value + "'");
  return v;
}

long long parse_int(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const long long v = std::strtoll(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0')
    throw std::invalid_argument("config: bad integer for " + key + ": '" + value + "'");
  return v;
}

}  // namespace

void Config::validate() const {
  if (!(lambda_ratio > 0.0) || lambda_ratio > 1.0)
    throw std::invalid_argument("config: lambda_ratio must be in (0, 1]");
  if (m < 0) throw std::invalid_argument("config: m must be nonnegative");
  if (!(solver_tol > 0.0) || !(lasso_tol > 0.0) || !(margin > 0.0))
    throw std::invalid_argument("config: tolerances must be positive");
  if (parallelism < 1) throw std::invalid_argument("config: parallelism must be >= 1");
  if (n < 2 || p < 2) throw std::invalid_argument("config: n and p must be >= 2");
}

void apply_key_value(Config& config, const std::string& key, const std::string& value) {
  if (key == "lambda_ratio") config.lambda_ratio = parse_double(key, value);
  else if (key == "m") config.m = static_cast<int>(parse_int(key, value));
  else if (key == "solver_tol") config.solver_tol = parse_double(key, value);
  else if (key == "lasso_tol") config.lasso_tol = parse_double(key, value);
  else if (key == "margin") config.margin = parse_double(key, value);
  else if (key == "seed") config.seed = static_cast<std::uint64_t>(parse_int(key, value));
  else if (key == "parallelism") config.parallelism = static_cast<int>(parse_int(key, value));
  else if (key == "n") config.n = static_cast<int>(parse_int(key, value));
  else if (key == "p") config.p = static_cast<int>(parse_int(key, value));
  else if (key == "dict") config.dict = value;
  else if (key == "target") config.target = value;
  else if (key == "out") config.out = value;
  else throw std::invalid_argument("config: unknown key '" + key + "'");
}

Config load_config_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw IoError(IoCode::missing_file, path + ": cannot open config");
  Config config;
  std::string line;
  int line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                  ": expected key=value");
    apply_key_value(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return config;
}

}  // namespace lassoscreen
