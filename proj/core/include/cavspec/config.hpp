#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cavspec/fit.hpp"
#include "cavspec/model.hpp"

namespace cavspec {

/// Parsed fit section of a config document; frequencies already in Gamma-units.
struct FitSpec {
  std::vector<FitParam> free;
  std::map<FitParam, double> initial;
  std::map<FitParam, std::pair<double, double>> bounds;
  int max_iterations = 500;
};

struct ParsedConfig {
  SystemConfig system;
  std::optional<double> gamma_mhz;  // Gamma-to-MHz calibration, when supplied
  std::optional<FitSpec> fit;
  std::string description;  // meta.description, if present
};

/// Parse and validate a JSON config document. Everything is converted to
/// Gamma-units internally; frequencies must carry a unit tag and using MHz
/// anywhere requires units.gamma_mhz. Unknown keys are rejected and every
/// error names the offending key path.
ParsedConfig parse_config(const std::string& text);

ParsedConfig load_config_file(const std::string& path);

/// Assemble a FitProblem from a parsed config and observed data.
FitProblem make_fit_problem(const ParsedConfig& config, const std::vector<double>& dp,
                            const std::vector<double>& intensity,
                            const std::vector<double>& weight);

}  // namespace cavspec
