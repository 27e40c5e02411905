#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "gibbs/config.hpp"
#include "gibbs/csv.hpp"
#include "gibbs/experiment.hpp"
#include "gibbs/rng.hpp"

namespace gibbs {
namespace {

using nlohmann::json;

ExperimentSpec quantile_spec() {
  return parse_config(json::parse(R"({
    "schema": 1,
    "generator": {"type": "quantile", "tau": 0.5, "beta": [1, 2], "noise_sd": 1},
    "loss": {"type": "check", "tau": 0.5, "features": {"type": "linear", "k": 1}},
    "prior": {"type": "gaussian", "mean": 0, "sd": 10},
    "rate": {"type": "fixed", "omega": 1},
    "mh": {"steps": 3000, "burn_in": 1000, "thin": 2, "proposal_scale": 0.3},
    "divergence": {"type": "euclid"},
    "n_grid": [100, 400, 1600],
    "replications": 2,
    "base_seed": 77
  })")).spec;
}

std::string results_text(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  write_results_csv(out, rows);
  return out.str();
}

TEST(Experiment, RowSeedRule) {
  EXPECT_EQ(row_seed(5, 1, 2), hash64(5, 1, 2));
  EXPECT_NE(row_seed(5, 1, 2), row_seed(5, 2, 1));
}

TEST(Experiment, RowsAreOrderedAndDeterministic) {
  ExperimentSpec spec = quantile_spec();
  spec.workers = 1;
  const std::vector<ResultRow> a = run_experiment(spec);
  ASSERT_EQ(a.size(), 6u);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].n, spec.n_grid[k / 2]);
    EXPECT_EQ(a[k].rep, k % 2);
    EXPECT_EQ(a[k].seed, row_seed(77, k / 2, k % 2));
    EXPECT_TRUE(a[k].error.empty()) << a[k].error;
    ASSERT_TRUE(a[k].radius_q90.has_value());
    EXPECT_GT(*a[k].radius_q90, 0.0);
    EXPECT_FALSE(a[k].wall_ms.has_value());
  }
  spec.workers = 3;
  const std::vector<ResultRow> b = run_experiment(spec);
  EXPECT_EQ(results_text(a), results_text(b));

  // A single replication reproduces its row of the full run.
  const ReplicationResult one = run_replication(spec, 2, 1);
  EXPECT_EQ(one.row.radius_q90, a[5].radius_q90);
  EXPECT_EQ(one.divergences.size(), one.chain.draws.size());
}

TEST(Experiment, TimingOnlyWhenAsked) {
  ExperimentSpec spec = quantile_spec();
  spec.n_grid = {100};
  spec.replications = 1;
  spec.timing = true;
  const auto rows = run_experiment(spec);
  ASSERT_TRUE(rows[0].wall_ms.has_value());
  EXPECT_GE(*rows[0].wall_ms, 0.0);
}

TEST(Experiment, FailingCellsAreRecorded) {
  // Fully separated groups make the data-driven rate degenerate.
  const ExperimentSpec spec = parse_config(json::parse(R"({
    "schema": 1,
    "generator": {"type": "auc", "mu": 100},
    "loss": {"type": "auc"},
    "prior": {"type": "uniform", "lo": 0, "hi": 1},
    "rate": {"type": "auc", "multiplier": 1},
    "mh": {"steps": 200, "burn_in": 100, "thin": 1, "proposal_scale": 0.05},
    "divergence": {"type": "abs"},
    "n_grid": [20],
    "replications": 2,
    "base_seed": 1
  })")).spec;
  const std::vector<ResultRow> rows = run_experiment(spec);
  ASSERT_EQ(rows.size(), 2u);
  for (const ResultRow& r : rows) {
    EXPECT_NE(r.error.find("not positive"), std::string::npos) << r.error;
    EXPECT_FALSE(r.radius_q90.has_value());
  }
  const auto agg = aggregate(rows);
  ASSERT_EQ(agg.size(), 1u);
  EXPECT_EQ(agg[0].failures, 2u);
  EXPECT_FALSE(agg[0].mean_radius.has_value());

  const csv::Table t = csv::parse(results_text(rows));
  EXPECT_FALSE(t.rows[0][static_cast<std::size_t>(t.column("error"))].empty());
  EXPECT_TRUE(t.rows[0][static_cast<std::size_t>(t.column("radius_q90"))].empty());
}

TEST(Experiment, CsvLayout) {
  ResultRow r;
  r.n = 10;
  r.rep = 3;
  r.seed = 42;
  r.omega = 0.5;
  r.radius_q90 = 0.25;
  r.div_median = 0.125;
  const csv::Table t = csv::parse(results_text({r}));
  ASSERT_EQ(t.header.size(), std::size(kResultColumns));
  for (std::size_t c = 0; c < t.header.size(); ++c) EXPECT_EQ(t.header[c], kResultColumns[c]);
  EXPECT_EQ(t.rows[0][static_cast<std::size_t>(t.column("radius_q90"))], "0.25");
  EXPECT_EQ(t.rows[0][static_cast<std::size_t>(t.column("wall_ms"))], "");

  std::ostringstream radii;
  write_radii_csv(radii, {r});
  const csv::Table long_form = csv::parse(radii.str());
  ASSERT_EQ(long_form.rows.size(), 2u);
  EXPECT_EQ(long_form.rows[1][2], "radius_median");
  EXPECT_EQ(long_form.rows[1][3], "0.125");
}

TEST(Experiment, AggregateAndFit) {
  std::vector<ResultRow> rows;
  for (std::size_t n : {100u, 400u, 1600u})
    for (std::size_t rep = 0; rep < 2; ++rep) {
      ResultRow r;
      r.n = n;
      r.rep = rep;
      r.radius_q90 = 3.0 / std::sqrt(static_cast<double>(n));
      r.covered = rep == 0;
      rows.push_back(r);
    }
  const auto agg = aggregate(rows);
  ASSERT_EQ(agg.size(), 3u);
  EXPECT_EQ(agg[1].n, 400u);
  EXPECT_NEAR(*agg[1].mean_radius, 0.15, 1e-15);
  EXPECT_NEAR(*agg[1].coverage, 0.5, 1e-15);
  const auto fit = radius_fit(rows);
  ASSERT_TRUE(fit.has_value());
  EXPECT_NEAR(fit->slope, -0.5, 1e-12);
  rows.resize(4);
  EXPECT_FALSE(radius_fit(rows).has_value());
}

}  // namespace
}  // namespace gibbs
