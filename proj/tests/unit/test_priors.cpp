#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "gibbs/error.hpp"
#include "gibbs/priors.hpp"
#include "gibbs/stats.hpp"
#include "oracles.hpp"

namespace gibbs {
namespace {

TEST(Prior, GaussianAtZero) {
  const PriorSpec p{GaussianIid{0.0, 6.0, 6}};
  EXPECT_NEAR(log_prior(p, Eigen::VectorXd::Zero(6)), -16.264188, 1e-6);
  EXPECT_NEAR(log_prior(p, Eigen::VectorXd::Zero(6)),
              6.0 * std::log(1.0 / (6.0 * std::sqrt(2.0 * std::numbers::pi))), 1e-12);
  EXPECT_THROW(log_prior(p, Eigen::VectorXd::Zero(5)), ShapeError);
}

TEST(Prior, UniformAndLaplace) {
  const PriorSpec u{UniformBox{0.0, 2.0, 1}};
  EXPECT_NEAR(log_prior(u, Eigen::VectorXd::Constant(1, 1.0)), -std::log(2.0), 1e-15);
  EXPECT_EQ(log_prior(u, Eigen::VectorXd::Constant(1, 2.5)),
            -std::numeric_limits<double>::infinity());
  const PriorSpec l{LaplaceIid{2.0, 1}};
  EXPECT_NEAR(log_prior(l, Eigen::VectorXd::Constant(1, -0.5)), std::log(1.0) - 1.0, 1e-15);
}

TEST(Prior, OneDimensionalDensitiesIntegrateToOne) {
  for (const PriorSpec& p : {PriorSpec{GaussianIid{0.5, 2.0, 1}}, PriorSpec{LaplaceIid{3.0, 1}}}) {
    const double sigma = 2.0;
    const auto f = [&](double x) { return std::exp(log_prior(p, Eigen::VectorXd::Constant(1, x))); };
    // Split at the Laplace kink.
    const double total = oracle::simpson(f, -50.0 * sigma, 0.0, 200000) +
                         oracle::simpson(f, 0.0, 50.0 * sigma, 200000);
    EXPECT_NEAR(total, 1.0, 1e-6);
  }
}

TEST(Prior, TruncatedOutsideBound) {
  auto inner = std::make_shared<const PriorSpec>(PriorSpec{GaussianIid{0.0, 1.0, 3}});
  const PriorSpec t{Truncated{inner, 1.0, std::nullopt, {}}};
  EXPECT_EQ(log_prior(t, Eigen::Vector3d(0.2, -1.5, 0.0)),
            -std::numeric_limits<double>::infinity());
  EXPECT_DOUBLE_EQ(log_prior(t, Eigen::Vector3d(0.2, -0.5, 0.0)),
                   log_prior(*inner, Eigen::Vector3d(0.2, -0.5, 0.0)));
  EXPECT_FALSE(is_normalized(t));
}

TEST(Prior, TruncatedThroughBasis) {
  auto inner = std::make_shared<const PriorSpec>(PriorSpec{GaussianIid{0.0, 1.0, 6}});
  Truncated t{inner, 2.0, BasisSpec{CubicBSpline{0.0, 1.0, 6}},
              Eigen::VectorXd::LinSpaced(101, 0.0, 1.0)};
  // Constant coefficients give a constant function.
  EXPECT_NEAR(sup_norm(t, Eigen::VectorXd::Constant(6, -1.5)), 1.5, 1e-12);
}

TEST(Prior, SpikeSlabWorkedValues) {
  const SpikeSlab s{2, 1.0, 1.0, 1.0};
  EXPECT_NEAR(std::exp(spike_slab_log_mass(s, std::vector<int>{})), 4.0 / 7.0, 1e-15);
  EXPECT_NEAR(std::exp(spike_slab_log_mass(s, std::vector<int>{0})), 1.0 / 7.0, 1e-15);
  EXPECT_NEAR(std::exp(spike_slab_log_mass(s, std::vector<int>{1})), 1.0 / 7.0, 1e-15);
  EXPECT_NEAR(std::exp(spike_slab_log_mass(s, std::vector<int>{0, 1})), 1.0 / 7.0, 1e-15);
  EXPECT_NEAR(std::exp(spike_slab_log_size_mass(s, 1)), 2.0 / 7.0, 1e-15);
  EXPECT_THROW(spike_slab_log_mass(s, std::vector<int>{2}), PreconditionError);
  EXPECT_THROW(spike_slab_log_mass(s, std::vector<int>{0, 0}), PreconditionError);

  // Dense beta-only layout: log pi(S) plus the Laplace slab.
  const PriorSpec p{s};
  const double b = 0.7;
  EXPECT_NEAR(log_prior(p, Eigen::Vector2d(b, 0.0)),
              std::log(1.0 / 7.0) + std::log(0.5) - b, 1e-14);
  // Classifier layout adds the uniform sign.
  EXPECT_NEAR(log_prior(p, Eigen::Vector3d(-1.0, b, 0.0)),
              std::log(0.5) + std::log(1.0 / 7.0) + std::log(0.5) - b, 1e-14);
  const SparseParam sp{1, {0}, Eigen::VectorXd::Constant(1, b)};
  EXPECT_NEAR(log_prior(s, sp), log_prior(p, Eigen::Vector3d(1.0, b, 0.0)), 1e-14);
}

TEST(Prior, SpikeSlabSmallA) {
  const SpikeSlab s{1, 1e-300, 1.0, 1.0};
  EXPECT_NEAR(std::exp(spike_slab_log_mass(s, std::vector<int>{})), 0.5, 1e-12);
  EXPECT_NEAR(std::exp(spike_slab_log_mass(s, std::vector<int>{0})), 0.5, 1e-12);
}

TEST(Prior, SpikeSlabLargeQDoesNotOverflow) {
  const SpikeSlab s{2000, 1.0, 0.0001, 1.0};
  double total = 0.0;
  for (int k = 0; k <= 2000; ++k) total += std::exp(spike_slab_log_size_mass(s, k));
  EXPECT_NEAR(total, 1.0, 1e-9);
  // c q^a = 0.2 < 1: mass grows with size, ratio 5 between neighbours.
  EXPECT_NEAR(spike_slab_log_size_mass(s, 2000) - spike_slab_log_size_mass(s, 1999), std::log(5.0),
              1e-9);
  EXPECT_TRUE(std::isfinite(spike_slab_log_size_mass(s, 0)));
}

TEST(Prior, SpikeSlabSizesMatchEnumeration) {
  for (int q : {3, 7, 12}) {
    const SpikeSlab s{q, 0.5, 2.0, 1.0};
    const std::vector<double> f = oracle::size_masses(q, 0.5, 2.0);
    for (int k = 0; k <= q; ++k)
      EXPECT_NEAR(std::exp(spike_slab_log_size_mass(s, k)), f[static_cast<std::size_t>(k)], 1e-13);
  }
}

TEST(Prior, Sampling) {
  Rng rng(1);
  const PriorSpec g{GaussianIid{0.0, 1.0, 2}};
  Eigen::Vector2d sum = Eigen::Vector2d::Zero();
  for (int i = 0; i < 100000; ++i) sum += sample_prior(g, rng);
  EXPECT_LT((sum / 100000.0).cwiseAbs().maxCoeff(), 0.02);

  const SpikeSlab s{2, 1.0, 1.0, 1.0};
  int empty = 0;
  for (int i = 0; i < 100000; ++i) empty += sample_sparse(s, rng).support.empty();
  EXPECT_NEAR(empty / 100000.0, 4.0 / 7.0, 0.01);
}

TEST(Prior, TruncationInactiveAtLargeBound) {
  auto inner = std::make_shared<const PriorSpec>(PriorSpec{GaussianIid{0.0, 1.0, 1}});
  const PriorSpec t{Truncated{inner, 100.0, std::nullopt, {}}};
  Rng rng(2);
  std::vector<double> x(20000);
  for (double& v : x) v = sample_prior(t, rng)(0);
  EXPECT_NEAR(stats::mean(x), 0.0, 3.0 / std::sqrt(20000.0));
  EXPECT_NEAR(stats::variance(x), 1.0, 0.05);
}

TEST(Prior, TruncationDegenerate) {
  auto inner = std::make_shared<const PriorSpec>(PriorSpec{GaussianIid{50.0, 0.1, 1}});
  const PriorSpec t{Truncated{inner, 1.0, std::nullopt, {}}};
  Rng rng(3);
  EXPECT_THROW(sample_prior(t, rng), DegenerateError);
}

TEST(Prior, PoissonCount) {
  const PoissonCount c{5.0, 0};
  EXPECT_NEAR(poisson_log_mass(c, 5), -5.0 + 5.0 * std::log(5.0) - std::log(120.0), 1e-12);
  EXPECT_NEAR(poisson_log_mass(c, 5), -1.7403, 1e-4);
  // Restricted to J >= 1 and renormalized.
  const PoissonCount c1{5.0, 1};
  double total = 0.0;
  for (int j = 1; j < 60; ++j) total += std::exp(poisson_log_mass(c1, j));
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_EQ(poisson_log_mass(c1, 0), -std::numeric_limits<double>::infinity());
}

TEST(Prior, HierarchicalDensity) {
  HierarchicalBasis h;
  h.j_prior = {5.0, 0};
  h.mean = 0.0;
  h.sd = 1.0;
  EXPECT_NEAR(hierarchical_log_density(h, 3, Eigen::VectorXd::Zero(3)),
              poisson_log_mass(h.j_prior, 3) + 3.0 * std::log(1.0 / std::sqrt(2.0 * std::numbers::pi)),
              1e-12);
  EXPECT_THROW(hierarchical_log_density(h, 3, Eigen::VectorXd::Zero(2)), ShapeError);
}

TEST(Prior, CountPriorTailCondition) {
  // log pi(j) + c1 j log j stays bounded below over j <= 50.
  const PoissonCount c{5.0, 1};
  double lowest = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= 50; ++j) lowest = std::min(lowest, poisson_log_mass(c, j) + 2.0 * j * std::log(j));
  EXPECT_GT(lowest, -10.0);
}

TEST(Prior, Validation) {
  EXPECT_THROW(validate(PriorSpec{GaussianIid{0.0, 0.0, 1}}), ShapeError);
  EXPECT_THROW(validate(PriorSpec{SpikeSlab{0, 1.0, 1.0, 1.0}}), ShapeError);
  EXPECT_EQ(prior_name(PriorSpec{SpikeSlab{}}), "spike_slab");
}

}  // namespace
}  // namespace gibbs
