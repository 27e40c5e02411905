#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "gibbs/error.hpp"
#include "gibbs/rates.hpp"
#include "gibbs/rng.hpp"
#include "gibbs/stats.hpp"
#include "oracles.hpp"

namespace gibbs {
namespace {

TEST(Rate, FixedAndPowerLaw) {
  for (std::size_t n : {2u, 10u, 100000u}) EXPECT_EQ(rate_at(FixedRate{1.0}, n).omega, 1.0);
  EXPECT_NEAR(rate_at(PowerLawRate{2.0, 0.5}, 400).omega, 0.1, 1e-15);
  EXPECT_THROW(validate(RateSchedule{FixedRate{-1.0}}), ShapeError);
  EXPECT_NO_THROW(validate(RateSchedule{FixedRate{0.0}}));
}

TEST(Rate, HeavyTail) {
  const RateValue v = rate_at(HeavyTailRate{4.0}, 10000);
  EXPECT_NEAR(*v.cap, 10000.0, 1e-9);
  EXPECT_NEAR(v.omega, 0.01, 1e-15);
  EXPECT_NEAR(*v.epsilon, 0.30348, 1e-5);
  EXPECT_NEAR(*v.epsilon, std::sqrt(std::log(1e4)) * 0.1, 1e-14);
  EXPECT_THROW(rate_at(HeavyTailRate{4.0}, 1), PreconditionError);
  EXPECT_THROW(validate(RateSchedule{HeavyTailRate{3.0}}), ShapeError);
}

TEST(Rate, Tsybakov) {
  const double n = 100000.0;
  const RateValue v = rate_at(TsybakovRate{1.0}, 100000);
  const double eps = std::pow(std::log(n), 0.25) * std::pow(n, -0.2);
  EXPECT_NEAR(*v.epsilon, eps, 1e-14);
  EXPECT_NEAR(v.omega, eps, 1e-14);
  // The printed value 0.18417 agrees to four decimals.
  EXPECT_NEAR(*v.epsilon, 0.18417, 5e-5);
  const RateValue g = rate_at(TsybakovRate{2.0}, 5000);
  const double e2 = std::pow(std::log(5000.0), 2.0 / 6.0) * std::pow(5000.0, -2.0 / 7.0);
  EXPECT_NEAR(*g.epsilon, e2, 1e-14);
  EXPECT_NEAR(g.omega, std::sqrt(e2), 1e-14);
}

TEST(Rate, DataDrivenNeedsData) {
  EXPECT_THROW(rate_at(AucDataDriven{}, 100), PreconditionError);
  EXPECT_TRUE(is_data_driven(AucDataDriven{}));
}

TEST(AucCov, WorkedExample) {
  const std::vector<double> s0{0.1, 0.7}, s1{0.5, 0.9};
  const AucCovariances c = auc_covariances(s0, s1);
  EXPECT_DOUBLE_EQ(c.theta_hat, 0.75);
  EXPECT_NEAR(c.tau10, -0.0625, 1e-15);
  EXPECT_NEAR(c.tau01, -0.0625, 1e-15);
  // proxy = 4/(2*2*2) ... negative: tau10/0.5 + tau01/0.5 = -0.25
  EXPECT_THROW(auc_learning_rate(c, 2, 2, 1.0), DegenerateError);
  EXPECT_THROW(auc_covariances(std::vector<double>{0.1}, s1), PreconditionError);
}

TEST(AucCov, SeparatedGroups) {
  const AucCovariances c =
      auc_covariances(std::vector<double>{0.0, 0.1, 0.2}, std::vector<double>{1.0, 2.0});
  EXPECT_EQ(c.tau10, 0.0);
  EXPECT_EQ(c.tau01, 0.0);
  EXPECT_EQ(c.theta_hat, 1.0);
}

TEST(AucCov, MatchesBruteForcePairs) {
  Rng rng(4);
  std::vector<double> s0(9), s1(7);
  for (double& u : s0) u = std::round(rng.normal() * 2.0);
  for (double& u : s1) u = std::round(rng.normal(1.0, 1.0) * 2.0);
  const double m = 9, n = 7;
  const double theta = oracle::mann_whitney(s0, s1);
  double shared1 = 0.0, shared0 = 0.0;
  for (std::size_t j = 0; j < s1.size(); ++j)
    for (std::size_t i = 0; i < s0.size(); ++i)
      for (std::size_t k = 0; k < s0.size(); ++k)
        if (i != k && s1[j] > s0[i] && s1[j] > s0[k]) shared1 += 1.0;
  for (std::size_t i = 0; i < s0.size(); ++i)
    for (std::size_t j = 0; j < s1.size(); ++j)
      for (std::size_t l = 0; l < s1.size(); ++l)
        if (j != l && s1[j] > s0[i] && s1[l] > s0[i]) shared0 += 1.0;
  const AucCovariances c = auc_covariances(s0, s1);
  EXPECT_NEAR(c.theta_hat, theta, 1e-15);
  EXPECT_NEAR(c.tau10, shared1 / (n * m * (m - 1)) - theta * theta, 1e-14);
  EXPECT_NEAR(c.tau01, shared0 / (m * n * (n - 1)) - theta * theta, 1e-14);
}

TEST(AucCov, PopulationValue) {
  // tau10 = P(U1 > U0, U1 > U0') - theta^2 = E Phi(U1)^2 - theta^2 for
  // U0 ~ N(0, 1), U1 ~ N(1, 1).
  const auto f = [](double u) {
    const double p = oracle::normal_cdf(u, 4000);
    return oracle::phi(u - 1.0) * p * p;
  };
  const double theta = oracle::simpson(
      [](double u) { return oracle::phi(u - 1.0) * oracle::normal_cdf(u, 4000); }, -9.0, 11.0, 800);
  const double tau10 = oracle::simpson(f, -9.0, 11.0, 800) - theta * theta;

  Rng rng(99);
  std::vector<double> estimates;
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> s0(2000), s1(2000);
    for (double& u : s0) u = rng.normal();
    for (double& u : s1) u = rng.normal(1.0, 1.0);
    estimates.push_back(auc_covariances(s0, s1).tau10);
  }
  const double se = std::sqrt(stats::variance(estimates));
  EXPECT_LT(std::abs(estimates.front() - tau10), 3.0 * se);
  EXPECT_LT(std::abs(stats::mean(estimates) - tau10), 3.0 * se / std::sqrt(20.0));
}

TEST(AucRate, Formula) {
  const AucCovariances c{0.05, 0.05, 0.7};
  EXPECT_NEAR(auc_learning_rate(c, 100, 100, 1.0), 0.05, 1e-15);
  EXPECT_EQ(auc_learning_rate(c, 100, 100, 2.0), 2.0 * auc_learning_rate(c, 100, 100, 1.0));
  EXPECT_NEAR(auc_multiplier(LogMultiplier{}, 100, 100), std::log(200.0), 1e-15);
  EXPECT_NEAR(auc_multiplier(PowerMultiplier{2.0, 0.5}, 50, 50), 20.0, 1e-12);
}

}  // namespace
}  // namespace gibbs
