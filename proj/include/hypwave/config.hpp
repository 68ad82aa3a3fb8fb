#pragma once

// Flat `key = value` configuration files. Lines starting with # are comments;
// unknown or repeated keys are errors.

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "hypwave/data.hpp"
#include "hypwave/inequality_lab.hpp"
#include "hypwave/morawetz.hpp"
#include "hypwave/solver.hpp"
#include "hypwave/truncation.hpp"

namespace hypwave {

using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config(std::istream& in);
ConfigMap read_config_file(const std::filesystem::path& path);

// Typed access to a ConfigMap. Every lookup records the value actually used
// (default or given) in resolved(); finish() rejects keys nobody asked for.
class ConfigReader {
 public:
  explicit ConfigReader(ConfigMap entries) : entries_(std::move(entries)) {}

  double get(const std::string& key, double fallback);
  int get(const std::string& key, int fallback);
  std::uint64_t get(const std::string& key, std::uint64_t fallback);
  std::string get(const std::string& key, const std::string& fallback);
  std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback);
  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  void finish() const;
  const nlohmann::json& resolved() const { return resolved_; }

 private:
  const std::string* raw(const std::string& key);

  ConfigMap entries_;
  std::set<std::string> used_;
  nlohmann::json resolved_ = nlohmann::json::object();
};

double parse_number(const std::string& key, const std::string& text);
// Finite values as numbers, the rest as "inf", "-inf" or "nan".
nlohmann::json json_number(double x);

DataSpec read_data_spec(ConfigReader& r, const DataSpec& defaults);

struct SolveConfig {
  double rmax = 16.0;
  int n = 1024;
  double delta = 0.25;
  std::uint64_t seed = 1;
  IntegratorConfig integrator{1e-3, 5.0, 10, Nonlinearity::Defocusing, 1e8, 0.0};
  DataSpec data;
  // weights and coefficients for the Morawetz columns
  double alpha = 0.9, alpha_tilde = 0.5;
  double c1 = 1e-2, c2 = 1e-3, c3 = 1e-3, c4 = 1e-4;
};

struct TruncationJob {
  TruncationConfig base;
  std::vector<double> s_values;  // one run per entry
};

struct WeightsConfig {
  WeightFamily family = WeightFamily::A1;
  double param = 0.0;
  double rmax = 16.0;
  int n = 1024;
};

struct StrichartzConfig {
  StrichartzTriple triple{4.0, 4.0, 0.5};
  std::vector<double> horizons{10.0, 20.0, 40.0};
  EnsembleSpec ensemble;
  double rmax = 48.0;
  int n = 2048;
  double dt = 0.02;
  double tolerance = 0.10;
};

// Each loader reads its keys, validates, and calls r.finish().
SolveConfig load_solve(ConfigReader& r);
TruncationJob load_truncation(ConfigReader& r);
WeightsConfig load_weights(ConfigReader& r);
SuiteConfig load_suite(ConfigReader& r);
StrichartzConfig load_strichartz(ConfigReader& r);

}  // namespace hypwave
