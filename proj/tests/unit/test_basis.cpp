#include <gtest/gtest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "gibbs/basis.hpp"
#include "gibbs/error.hpp"
#include "oracles.hpp"

namespace gibbs {
namespace {

TEST(Basis, CubicPartitionOfUnity) {
  const BasisSpec b = CubicBSpline{0.0, 1.0, 6};
  for (int i = 0; i <= 1000; ++i) {
    const double x = i / 1000.0;
    const Eigen::VectorXd f = eval_basis(b, x);
    ASSERT_EQ(f.size(), 6);
    EXPECT_NEAR(f.sum(), 1.0, 1e-12) << "x = " << x;
    EXPECT_GE(f.minCoeff(), -1e-15);
  }
}

TEST(Basis, CubicMatchesCoxDeBoor) {
  const CubicBSpline s{-1.0, 2.0, 8};
  const std::vector<double> t = knots(s);
  ASSERT_EQ(t.size(), 12u);
  EXPECT_DOUBLE_EQ(t[3], -1.0);
  EXPECT_DOUBLE_EQ(t[8], 2.0);
  for (int i = 0; i <= 300; ++i) {
    const double x = -1.0 + 3.0 * i / 300.0;
    const Eigen::VectorXd f = eval_basis(BasisSpec{s}, x);
    for (int j = 0; j < 8; ++j) EXPECT_NEAR(f(j), oracle::cox_de_boor(t, j, 3, x), 1e-12);
  }
}

TEST(Basis, EndpointsAreInterpolated) {
  const BasisSpec b = CubicBSpline{0.0, 3.0, 6};
  EXPECT_NEAR(eval_basis(b, 0.0)(0), 1.0, 1e-15);
  EXPECT_NEAR(eval_basis(b, 3.0)(5), 1.0, 1e-15);
}

TEST(Basis, RawDictionary) {
  const BasisSpec b = RawDictionary::from_terms({"1", "x"});
  const Eigen::VectorXd f = eval_basis(b, 0.5);
  EXPECT_EQ(f, Eigen::Vector2d(1.0, 0.5));
  const BasisSpec m = RawDictionary::from_terms({"x1*x2^2", "x^3"});
  const std::vector<double> p{2.0, 3.0};
  const Eigen::VectorXd g = eval_basis(m, p);
  EXPECT_DOUBLE_EQ(g(0), 18.0);
  EXPECT_DOUBLE_EQ(g(1), 8.0);
  EXPECT_EQ(basis_arity(m), 2);
  EXPECT_THROW(RawDictionary::from_terms({"y"}), Error);
}

TEST(Basis, TensorSumsToOne) {
  const BasisSpec b = TensorBSpline{{0.0, 3.0, 4}, {0.0, 3.0, 4}};
  EXPECT_EQ(basis_size(b), 16);
  EXPECT_EQ(basis_arity(b), 2);
  const std::vector<double> p{0.7, 2.2};
  const Eigen::VectorXd f = eval_basis(b, p);
  ASSERT_EQ(f.size(), 16);
  EXPECT_NEAR(f.sum(), 1.0, 1e-12);
  const Eigen::VectorXd f1 = eval_basis(BasisSpec{CubicBSpline{0.0, 3.0, 4}}, 0.7);
  const Eigen::VectorXd f2 = eval_basis(BasisSpec{CubicBSpline{0.0, 3.0, 4}}, 2.2);
  EXPECT_NEAR(f(1 * 4 + 2), f1(1) * f2(2), 1e-15);
}

TEST(Basis, DomainErrors) {
  const BasisSpec b = CubicBSpline{0.0, 1.0, 6};
  EXPECT_THROW(eval_basis(b, 1.1), DomainError);
  EXPECT_THROW(eval_basis(b, -0.5), DomainError);
  EXPECT_NO_THROW(eval_basis(b, 1.0 + 1e-13));
  EXPECT_THROW(eval_basis(b, std::nan("")), DomainError);
}

TEST(Basis, DesignMatrix) {
  const BasisSpec raw = RawDictionary::from_terms({"1", "x"});
  const std::vector<double> xs{0.0, 1.0};
  const Eigen::MatrixXd F = design_matrix(raw, xs);
  Eigen::Matrix2d expected;
  expected << 1, 0, 1, 1;
  EXPECT_EQ(F, expected);

  const BasisSpec b = CubicBSpline{0.0, 1.0, 6};
  const Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(10, 0.0, 1.0);
  const Eigen::MatrixXd G = design_matrix(b, grid);
  for (Eigen::Index i = 0; i < G.rows(); ++i) EXPECT_NEAR(G.row(i).sum(), 1.0, 1e-12);
}

TEST(Basis, GramEigenvaluesBounded) {
  const int n = 100;
  Eigen::VectorXd xs(n);
  for (int i = 0; i < n; ++i) xs(i) = (i + 1.0) / n;
  const Eigen::MatrixXd F = design_matrix(BasisSpec{CubicBSpline{0.0, 1.0, 6}}, xs);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(F.transpose() * F);
  EXPECT_GT(eig.eigenvalues().minCoeff(), 0.0);
  EXPECT_LE(eig.eigenvalues().maxCoeff(), n);
}

TEST(Basis, Describe) {
  EXPECT_FALSE(describe(BasisSpec{CubicBSpline{0.0, 1.0, 6}}).empty());
}

}  // namespace
}  // namespace gibbs
