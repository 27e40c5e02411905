#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "gibbs/error.hpp"
#include "gibbs/losses.hpp"
#include "gibbs/rng.hpp"
#include "oracles.hpp"

namespace gibbs {
namespace {

const BasisSpec kLine = RawDictionary::from_terms({"1", "x"});
const BasisSpec kConst = RawDictionary::from_terms({"1"});

Observation pair(double x, double y) { return RegPair{Eigen::VectorXd::Constant(1, x), y}; }

TEST(Loss, CheckValues) {
  // prediction 5 through the constant feature
  const Eigen::VectorXd theta = Eigen::VectorXd::Constant(1, 5.0);
  EXPECT_DOUBLE_EQ(loss_value(CheckLoss{0.25, kConst}, theta, pair(0.0, 2.0)), 2.25);
  for (double tau : {0.1, 0.5, 0.9})
    EXPECT_EQ(loss_value(CheckLoss{tau, kConst}, theta, pair(0.0, 5.0)), 0.0);
  EXPECT_DOUBLE_EQ(check_loss(0.25, 4.0), 1.0);
}

TEST(Loss, McidSigns) {
  const LossSpec mcid = McidLoss{kConst};
  const Eigen::VectorXd theta = Eigen::VectorXd::Constant(1, 1.0);
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(1, 2.0);
  const Eigen::VectorXd z = Eigen::VectorXd::Constant(1, 0.0);
  EXPECT_EQ(loss_value(mcid, theta, ClassTriple{x, 1, z}), 0.0);
  EXPECT_EQ(loss_value(mcid, theta, ClassTriple{x, -1, z}), 1.0);
  // sign(0) = -1: x on the threshold predicts -1
  const Eigen::VectorXd tie = Eigen::VectorXd::Constant(1, 1.0);
  EXPECT_EQ(loss_value(mcid, theta, ClassTriple{tie, -1, z}), 0.0);
  EXPECT_EQ(loss_value(mcid, theta, ClassTriple{tie, 1, z}), 1.0);
}

TEST(Loss, CappedSquared) {
  const Eigen::VectorXd theta = Eigen::VectorXd::Zero(1);
  EXPECT_EQ(loss_value(CappedSquaredLoss{kConst, 4.0}, theta, pair(0.0, 3.0)), 4.0);
  EXPECT_EQ(loss_value(CappedSquaredLoss{kConst, 4.0}, theta, pair(0.0, 1.5)), 2.25);
  EXPECT_THROW(validate(LossSpec{CappedSquaredLoss{kConst, 0.0}}), ShapeError);
  EXPECT_THROW(validate(LossSpec{CheckLoss{1.0, kConst}}), ShapeError);
}

TEST(Loss, VariantMismatch) {
  EXPECT_THROW(loss_value(AucLoss{}, Eigen::VectorXd::Zero(1), pair(0, 0)), ShapeError);
  EXPECT_THROW(loss_value(SquaredLoss{kLine}, Eigen::VectorXd::Zero(3), pair(0, 0)), ShapeError);
}

TEST(Risk, ZeroOneCounting) {
  ClassificationData d{Eigen::MatrixXd(10, 2), Eigen::VectorXi(10), Eigen::MatrixXd(),
                       LabelSet::ZeroOne};
  for (int i = 0; i < 10; ++i) {
    d.x(i, 0) = 1.0;
    d.x(i, 1) = i - 4.5;
    d.y(i) = i >= 5 ? 1 : 0;
  }
  // Flip three labels; theta = (0, 1) classifies by the sign of column 1.
  d.y(0) = 1;
  d.y(7) = 0;
  d.y(9) = 0;
  const Dataset data{d};
  const Eigen::Vector2d theta(0.0, 1.0);
  EXPECT_DOUBLE_EQ(empirical_risk(ZeroOneLinearLoss{}, theta, data).value, 0.3);
  const RiskEvaluator eval(ZeroOneLinearLoss{}, data);
  EXPECT_DOUBLE_EQ(eval(theta), 0.3);
  EXPECT_DOUBLE_EQ(eval.sparse_zero_one(0, std::vector<int>{0}, Eigen::VectorXd::Ones(1)), 0.3);
}

TEST(Risk, SquaredInterpolation) {
  RegressionData d{Eigen::MatrixXd(3, 1), Eigen::VectorXd(3)};
  d.x << 0, 1, 2;
  d.y << 1, 3, 5;
  EXPECT_EQ(empirical_risk(SquaredLoss{kLine}, Eigen::Vector2d(1, 2), Dataset{d}).value, 0.0);
}

TEST(Risk, CheckAverage) {
  RegressionData d{Eigen::MatrixXd::Zero(2, 1), Eigen::VectorXd(2)};
  d.y << 0, 2;
  const RiskValue r =
      empirical_risk(CheckLoss{0.5, kConst}, Eigen::VectorXd::Constant(1, 1.0), Dataset{d});
  EXPECT_DOUBLE_EQ(r.value, 0.5);
  EXPECT_EQ(r.n_used, 2u);
}

TEST(Risk, EvaluatorMatchesDirectSum) {
  Rng rng(11);
  RegressionData d{Eigen::MatrixXd(40, 1), Eigen::VectorXd(40)};
  for (int i = 0; i < 40; ++i) {
    d.x(i, 0) = rng.uniform();
    d.y(i) = rng.normal();
  }
  const Dataset data{d};
  const Eigen::Vector2d theta(0.2, -0.4);
  for (const LossSpec& loss : {LossSpec{CheckLoss{0.3, kLine}}, LossSpec{SquaredLoss{kLine}},
                               LossSpec{CappedSquaredLoss{kLine, 0.5}}}) {
    const RiskEvaluator eval(loss, data);
    EXPECT_NEAR(eval(theta), empirical_risk(loss, theta, data).value, 1e-14);
    EXPECT_NEAR(eval.unit_values(theta).sum() / 40.0, eval(theta), 1e-14);
  }
}

TEST(Auc, WorkedExample) {
  const std::vector<double> s0{0.1, 0.7}, s1{0.5, 0.9};
  EXPECT_DOUBLE_EQ(auc_empirical_risk(0.75, s0, s1), 0.1875);
  EXPECT_DOUBLE_EQ(auc_point_estimate(s0, s1), 0.75);
  EXPECT_EQ(auc_empirical_risk(0.0, std::vector<double>{1.0, 2.0}, std::vector<double>{0.0}), 0.0);
  EXPECT_EQ(auc_point_estimate(std::vector<double>{0.0}, std::vector<double>{1.0, 2.0}), 1.0);
  EXPECT_EQ(auc_point_estimate(std::vector<double>{1.0}, std::vector<double>{0.0}), 0.0);
  EXPECT_THROW(auc_point_estimate(std::vector<double>{}, s1), PreconditionError);
}

TEST(Auc, QuadraticIdentityAndFastPath) {
  Rng rng(5);
  std::vector<double> s0(30), s1(25);
  for (double& u : s0) u = rng.normal();
  for (double& u : s1) u = rng.normal(0.7, 1.0);
  const Dataset data(TwoSampleData{s0, s1});
  const double hat = oracle::mann_whitney(s0, s1);
  const double base = auc_empirical_risk(hat, s0, s1);
  const RiskEvaluator eval(AucLoss{}, data);
  for (double theta : {0.0, 0.3, hat, 0.9, 1.2}) {
    EXPECT_NEAR(auc_empirical_risk(theta, s0, s1) - base, (theta - hat) * (theta - hat), 1e-12);
    EXPECT_NEAR(eval(Eigen::VectorXd::Constant(1, theta)), auc_empirical_risk(theta, s0, s1),
                1e-12);
  }
  EXPECT_EQ(eval.terms(), 30u * 25u);
}

TEST(Erm, LeastSquares) {
  RegressionData d{Eigen::MatrixXd(2, 1), Eigen::VectorXd(2)};
  d.x << 0, 1;
  d.y << 0, 1;
  const Eigen::VectorXd beta = erm_least_squares(Dataset{d}, kLine);
  EXPECT_NEAR(beta(0), 0.0, 1e-12);
  EXPECT_NEAR(beta(1), 1.0, 1e-12);

  Rng rng(3);
  const BasisSpec spline = CubicBSpline{0.0, 1.0, 6};
  RegressionData e{Eigen::MatrixXd(60, 1), Eigen::VectorXd(60)};
  Eigen::VectorXd b0(6);
  b0 << 1, -2, 0.5, 3, 0, -1;
  for (int i = 0; i < 60; ++i) {
    e.x(i, 0) = rng.uniform();
    e.y(i) = b0.dot(eval_basis(spline, e.x(i, 0)));
  }
  EXPECT_LT((erm_least_squares(Dataset{e}, spline) - b0).norm(), 1e-8);

  RegressionData flat{Eigen::MatrixXd::Zero(5, 1), Eigen::VectorXd::Ones(5)};
  EXPECT_THROW(erm_least_squares(Dataset{flat}, kLine), ConditioningError);
}

TEST(Erm, MatchesGradientDescent) {
  Rng rng(8);
  const BasisSpec quad = RawDictionary::from_terms({"1", "x", "x^2"});
  RegressionData d{Eigen::MatrixXd(50, 1), Eigen::VectorXd(50)};
  for (int i = 0; i < 50; ++i) {
    d.x(i, 0) = rng.uniform(-1.0, 1.0);
    d.y(i) = 0.5 - d.x(i, 0) + 2.0 * d.x(i, 0) * d.x(i, 0) + 0.3 * rng.normal();
  }
  const Eigen::MatrixXd F = design_matrix(quad, d.x);
  // Plain gradient descent on the mean squared error.
  Eigen::VectorXd b = Eigen::VectorXd::Zero(3);
  const double step = 0.5 / (F.transpose() * F / 50.0).norm();
  for (int it = 0; it < 200000; ++it) {
    const Eigen::VectorXd grad = 2.0 / 50.0 * F.transpose() * (F * b - d.y);
    b -= step * grad;
    if (grad.norm() < 1e-13) break;
  }
  EXPECT_LT((erm_least_squares(Dataset{d}, quad) - b).norm(), 1e-5);
}

TEST(Loss, ParameterDimension) {
  const Dataset reg(RegressionData{Eigen::MatrixXd::Zero(3, 1), Eigen::VectorXd::Zero(3)});
  EXPECT_EQ(parameter_dimension(SquaredLoss{kLine}, reg), 2);
  EXPECT_EQ(parameter_dimension(AucLoss{}, reg), 0);
  EXPECT_EQ(loss_name(CheckLoss{0.5, kLine}), "check");
}

}  // namespace
}  // namespace gibbs
