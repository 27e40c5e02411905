#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gibbs/experiment.hpp"

namespace gibbs {

inline constexpr int kConfigSchema = 1;

/// Settings of `diagnose mgf`: the grid is theta* + offsets along the first
/// coordinate.
struct MgfSettings {
  std::vector<double> offsets{-0.3, -0.2, -0.1, 0.1, 0.2, 0.3};
  double omega = 1.0;
  double r = 2.0;
  std::size_t n = 100000;
};

/// CSV input for `sample`. kind is "regression" (column y, predictors in the
/// other columns), "classification" (x*, z* and y columns) or "two_sample"
/// (group and u columns).
struct DataSource {
  std::string path;
  std::string kind = "regression";
  LabelSet labels = LabelSet::PlusMinusOne;
};

struct ExperimentConfig {
  nlohmann::json document;
  ExperimentSpec spec;
  std::size_t full_replications = 0;
  std::optional<MgfSettings> mgf;
  std::optional<DataSource> data;
};

/// Throws ConfigError carrying "source:line:column" for malformed text.
nlohmann::json parse_json(std::string_view text, const std::string& source);
/// Throws ConfigError naming the file when it cannot be read.
nlohmann::json load_json_file(const std::string& path);

/// Throws ConfigError naming the offending field.
ExperimentConfig parse_config(const nlohmann::json& document,
                              const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path);

Dataset load_dataset(const DataSource& source);

/// Summary document: config echo, resolved learning rates per n, per-n
/// aggregates and the radius slope when defined.
nlohmann::json experiment_summary(const ExperimentConfig& config,
                                  const std::vector<ResultRow>& rows);

nlohmann::json to_json(const MgfReport& report);

}  // namespace gibbs
