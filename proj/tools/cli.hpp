#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "oed/category.hpp"
#include "oed/design.hpp"

namespace oed::cli {

enum ExitCode : int {
  kSuccess = 0,
  kConfigError = 2,
  kAnalysisError = 3,
  kDataError = 4,
};

struct RunConfig {
  std::string suite = "coin";
  std::vector<std::string> models;  // empty: every model in the suite
  std::optional<std::vector<double>> prior;
  std::optional<OutcomePrior> outcomePrior;  // unset: uniform for coin, predictive for category
  int n = 1;
  category::ParameterMode parameterMode = category::ParameterMode::Point;
  std::array<double, 4> similarity{0.3, 0.3, 0.3, 0.3};
  std::string output;  // empty: standard output
  std::string format = "csv";
  std::vector<std::string> experiments;  // empty: the whole experiment space
  int nMin = 1;
  int nMax = 30;
  std::string data;
  bool prefix = false;
  std::optional<double> softmaxTemperature;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
};

/// A rejected configuration; line is 0 when the problem did not come from a file.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0) : std::runtime_error(what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Parses config JSON. `source` is the raw text, used to attach line numbers.
RunConfig parseConfig(const std::string& source);

/// Fills suite defaults and checks every field against the suite registry.
void validateConfig(RunConfig& config);

nlohmann::json configToJson(const RunConfig& config);

OutcomePrior effectiveOutcomePrior(const RunConfig& config);

/// Runs one command line (args excludes the program name). Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace oed::cli
