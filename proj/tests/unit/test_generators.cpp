#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "gibbs/error.hpp"
#include "gibbs/generators.hpp"
#include "gibbs/stats.hpp"
#include "oracles.hpp"

namespace gibbs {
namespace {

double mu1(double z) { return z * z * z - 3.0 * z * z + 5.0; }

TEST(Generator, Mcid1Eta) {
  const Truth t = truth_of(Mcid1Sim{});
  const std::vector<double> z{1.0};
  EXPECT_DOUBLE_EQ(t.function(z), 3.0);
  EXPECT_NEAR(t.eta(3.5, z), 0.86433, 1e-5);
  EXPECT_NEAR(t.eta(3.5, z), oracle::normal_cdf(1.1), 1e-12);
  // Just above and at the threshold: the margin.
  EXPECT_NEAR(t.eta(3.0 + 1e-12, z), oracle::normal_cdf(0.1), 1e-9);
  EXPECT_NEAR(t.eta(3.0, z), oracle::normal_cdf(-0.1), 1e-12);
  double margin = 1.0;
  for (int i = 0; i <= 60; ++i)
    for (int j = -200; j <= 200; ++j) {
      const std::vector<double> zz{i / 20.0};
      margin = std::min(margin, std::abs(2.0 * t.eta(mu1(zz[0]) + j / 50.0, zz) - 1.0));
    }
  EXPECT_GE(margin, 2.0 * oracle::normal_cdf(0.1) - 1.0 - 1e-12);
}

TEST(Generator, Mcid1Sample) {
  Rng rng(1);
  const Sample s = generate(Mcid1Sim{}, 20000, rng);
  const auto& d = s.data.classification();
  ASSERT_EQ(d.z.cols(), 1);
  std::vector<double> w;
  for (Eigen::Index i = 0; i < d.x.rows(); ++i) {
    ASSERT_GE(d.z(i, 0), 0.0);
    ASSERT_LE(d.z(i, 0), 3.0);
    w.push_back(d.x(i, 0) - mu1(d.z(i, 0)));
  }
  EXPECT_NEAR(stats::mean(w), 0.0, 3.0 / std::sqrt(20000.0));
  EXPECT_NEAR(stats::variance(w), 1.0, 0.05);
}

TEST(Generator, Mcid2Mean) {
  const Truth t = truth_of(Mcid2Sim{});
  EXPECT_DOUBLE_EQ(t.function(std::vector<double>{1.0, 0.5}), 2.0);
  EXPECT_EQ(default_holdout(Mcid2Sim{}), 1000u);
  EXPECT_EQ(default_holdout(Mcid1Sim{}), 100u);
}

TEST(Generator, QuantileTruth) {
  const QuantileRegSim g{0.75, Eigen::Vector2d(1.0, 2.0), 1.0};
  const Truth t = truth_of(g);
  for (double x : {0.0, 0.4, 1.0})
    EXPECT_NEAR(t.function(std::vector<double>{x}), 1.0 + 2.0 * x + 0.67449, 1e-5);
  Rng rng(2);
  const Sample s = generate(g, 40000, rng);
  const auto& d = s.data.regression();
  int below = 0;
  for (Eigen::Index i = 0; i < d.y.size(); ++i)
    below += d.y(i) < t.function(std::vector<double>{d.x(i, 0)});
  EXPECT_NEAR(below / 40000.0, 0.75, 3.0 * std::sqrt(0.75 * 0.25 / 40000.0));
}

TEST(Generator, AucTruth) {
  const double integral = oracle::simpson(
      [](double u) { return oracle::phi(u) * (1.0 - oracle::normal_cdf(u - 1.0, 4000)); }, -10.0, 10.0, 800);
  EXPECT_NEAR(truth_of(AucSim{1.0}).theta->coeff(0), integral, 1e-8);
  EXPECT_NEAR(integral, 0.76025, 1e-5);
  Rng rng(3);
  const Sample s = generate(AucSim{1.0}, 50, rng);
  EXPECT_EQ(s.data.two_sample().scores0.size(), 50u);
  EXPECT_EQ(s.data.two_sample().scores1.size(), 50u);
}

TEST(Generator, BayesRateOnHoldout) {
  // The misclassification of x > theta*(z) depends on w = x - mu(z) only:
  // E min(eta, 1 - eta) with w ~ N(0, 1).
  const auto err = [](double w) {
    const double eta = oracle::normal_cdf(w > 0.0 ? (w + 0.05) / 0.5 : (w - 0.05) / 0.5, 2000);
    return oracle::phi(w) * std::min(eta, 1.0 - eta);
  };
  const double bayes = oracle::simpson(err, -8.0, 0.0, 400) + oracle::simpson(err, 0.0, 8.0, 400);
  const Truth t = truth_of(Mcid1Sim{});
  Rng rng(4);
  const Sample h = generate(Mcid1Sim{}, 100000, rng);
  const double rate = holdout_misclassification(t.function, h.data);
  EXPECT_LT(std::abs(rate - bayes), 3.0 * std::sqrt(bayes * (1.0 - bayes) / 100000.0));
}

TEST(Generator, HoldoutExtremes) {
  ClassificationData d{Eigen::MatrixXd(4, 1), Eigen::VectorXi(4), Eigen::MatrixXd::Zero(4, 1), {}};
  d.x << -1, -0.5, 0.5, 1;
  d.y << -1, -1, 1, 1;
  const Dataset data{d};
  const FunctionParam zero{RawDictionary::from_terms({"1"}), Eigen::VectorXd::Zero(1)};
  EXPECT_EQ(holdout_misclassification(zero, data), 0.0);
  d.y = -d.y;
  EXPECT_EQ(holdout_misclassification(zero, Dataset{d}), 1.0);
}

TEST(Generator, MassartFlipRate) {
  const MassartClassifierSim g;
  const Eigen::VectorXd theta = *truth_of(g).theta;
  ASSERT_EQ(theta.size(), g.q + 1);
  EXPECT_EQ(theta(0), 1.0);
  EXPECT_EQ(theta(1), 2.0);
  EXPECT_EQ(theta(2), -2.0);
  Rng rng(5);
  const Sample s = generate(g, 20000, rng);
  const auto& d = s.data.classification();
  int flipped = 0;
  for (Eigen::Index i = 0; i < d.x.rows(); ++i)
    flipped += (d.x.row(i).dot(theta) > 0.0 ? 1 : 0) != d.y(i);
  EXPECT_NEAR(flipped / 20000.0, 0.1, 3.0 * std::sqrt(0.09 / 20000.0));
}

TEST(Generator, MeanCurveDesign) {
  Rng rng(6);
  const Sample s = generate(MeanCurveSim{"sine", 0.5}, 50, rng);
  const auto& d = s.data.regression();
  for (int i = 0; i < 50; ++i) EXPECT_DOUBLE_EQ(d.x(i, 0), (i + 1) / 50.0);
  EXPECT_THROW(named_curve("wiggle"), Error);
}

TEST(Generator, Deterministic) {
  Rng a(77), b(77);
  const Sample x = generate(HeavyTailSim{}, 30, a);
  const Sample y = generate(HeavyTailSim{}, 30, b);
  EXPECT_EQ(x.data.regression().y, y.data.regression().y);
  EXPECT_EQ(x.data.regression().x, y.data.regression().x);
}

TEST(Generator, Validation) {
  EXPECT_THROW(validate(Generator{QuantileRegSim{1.5, Eigen::Vector2d(1, 2), 1.0}}), ConfigError);
  EXPECT_THROW(validate(Generator{Mcid1Sim{0.05, 0.0}}), ConfigError);
  MassartClassifierSim m;
  m.support = {60};
  EXPECT_THROW(validate(Generator{m}), ConfigError);
  EXPECT_EQ(generator_name(Generator{AucSim{}}), "auc");
}

}  // namespace
}  // namespace gibbs
