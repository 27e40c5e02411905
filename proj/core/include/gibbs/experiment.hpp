#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gibbs/diagnostics.hpp"
#include "gibbs/generators.hpp"
#include "gibbs/losses.hpp"
#include "gibbs/priors.hpp"
#include "gibbs/rates.hpp"
#include "gibbs/sampler.hpp"

namespace gibbs {

struct ExperimentSpec {
  Generator generator;
  std::vector<std::size_t> n_grid;
  std::size_t replications = 1;
  LossSpec loss;
  /// Coordinate priors with dim <= 0 take the loss's parameter dimension.
  PriorSpec prior;
  RateSchedule rate;
  /// The seed field is ignored; every row derives its own.
  MHConfig mh;
  /// Proposal scales are multiplied by n^-scale_n_power.
  double scale_n_power = 0.0;
  /// Use the schedule's t_n as the cap of a CappedSquaredLoss.
  bool cap_from_rate = false;
  /// An EmpiricalL2 divergence without points uses the design of the data.
  Divergence divergence = Euclid{};
  std::uint64_t base_seed = 0;
  std::optional<std::size_t> holdout;
  /// 0 selects GIBBS_WORKERS, then the hardware concurrency.
  std::size_t workers = 0;
  /// Record wall time per row (makes outputs run-dependent).
  bool timing = false;
  /// Level of the credible interval reported for scalar parameters.
  double level = 0.95;
};

/// Throws ConfigError on an empty grid, zero replications or an invalid part.
void validate(const ExperimentSpec& spec);

struct ResultRow {
  std::size_t n = 0;
  std::size_t rep = 0;
  std::uint64_t seed = 0;
  std::optional<double> omega;
  std::optional<double> radius_q90;
  std::optional<double> div_point_est;
  std::optional<double> misclass_est;
  std::optional<double> misclass_truth;
  std::optional<double> accept_rate;
  std::optional<double> wall_ms;
  std::optional<double> div_median;
  std::optional<std::pair<double, double>> interval;
  std::optional<bool> covered;
  std::string error;
};

struct ReplicationResult {
  ResultRow row;
  Chain chain;
  std::vector<double> divergences;
  Truth truth;
};

/// hash64(base_seed, n_index, rep_index).
std::uint64_t row_seed(std::uint64_t base_seed, std::size_t n_index, std::size_t rep);

/// Coordinate priors of unspecified dimension set to dim.
PriorSpec with_dimension(const PriorSpec& prior, int dim);

/// One (n, replication) cell. Errors propagate.
ReplicationResult run_replication(const ExperimentSpec& spec, std::size_t n_index,
                                  std::size_t rep);

/// Every cell, ordered by (n index, replication). A failing cell records its
/// message in `error` and the run continues.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);

std::size_t worker_count(const ExperimentSpec& spec);

struct Aggregate {
  std::size_t n = 0;
  std::size_t rows = 0;
  std::size_t failures = 0;
  std::optional<double> mean_omega;
  std::optional<double> mean_radius;
  std::optional<double> mean_div_point_est;
  std::optional<double> mean_misclass_est;
  std::optional<double> mean_misclass_truth;
  std::optional<double> mean_accept_rate;
  std::optional<double> coverage;
};

std::vector<Aggregate> aggregate(const std::vector<ResultRow>& rows);

/// Slope of log radius_q90 on log n across successful rows; empty with
/// fewer than three distinct n.
std::optional<RateFit> radius_fit(const std::vector<ResultRow>& rows);

inline constexpr const char* kResultColumns[] = {
    "n",           "rep",           "seed",           "omega",
    "radius_q90",  "div_point_est", "misclass_est",   "misclass_truth",
    "accept_rate", "wall_ms",       "error"};

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);
/// Long format: n, rep, statistic, value.
void write_radii_csv(std::ostream& out, const std::vector<ResultRow>& rows);

}  // namespace gibbs
