#pragma once

// Config-driven experiment runner: a grid of (n, eps) cells, each run for a
// fixed number of trials with derived random streams, flushed to
// records.csv row by row, summarized into summary.json and SVG plots.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "critnoise/estimators.hpp"
#include "critnoise/observables.hpp"

namespace critnoise {

// eps per n: either explicit values or the rule eps = c * n^(-a) over a
// list of prefactors c.
struct EpsRule {
  bool is_explicit = false;
  std::vector<double> values;  // explicit eps list
  double a = 1.0 / 3.0;
  std::vector<double> c;

  std::vector<double> eps_for(std::uint64_t n) const;
};

struct StabilitySettings {
  bool enabled = false;
  double delta = 0.1;
  std::uint32_t j = 1;
};

struct ExperimentConfig {
  std::vector<std::uint64_t> n_grid;
  double lambda = 0.0;
  EpsRule eps_rule;
  std::uint64_t trials = 0;
  std::uint64_t inner_trials = 0;  // > 0 adds the nested estimator per cell
  Observable observable;
  std::uint64_t master_seed = 0;
  std::string output_dir = "out";
  bool record_aux = false;  // |C1|, diam C1, S2, Z columns
  StabilitySettings stability;

  void validate() const;
};

ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);
std::string experiment_config_to_json(const ExperimentConfig& cfg);

struct CellSummary {
  std::uint64_t n = 0;
  double eps = 0.0;
  double eps_scaled = 0.0;  // eps * n^(1/3)
  CovarianceEstimate cov;
  std::optional<ConditionalVarianceEstimate> cond_var;
  double median_dx = 0.0;
  std::optional<StabilityReport> stability;
};

struct ExperimentResult {
  std::vector<CellSummary> cells;
  std::string records_path;
  std::string summary_path;
  std::vector<std::string> plot_paths;
};

// The fixed records.csv column order.
extern const char* const kRecordsHeader;

ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace critnoise
