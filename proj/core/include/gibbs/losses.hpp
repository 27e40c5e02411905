#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "gibbs/basis.hpp"
#include "gibbs/model.hpp"

namespace gibbs {

/// Check (pinball) loss (y - f'theta)(tau - 1{y < f'theta}) on (x, y) pairs.
struct CheckLoss {
  double tau = 0.5;
  BasisSpec features;
};

/// (y - f'theta)^2 on (x, y) pairs.
struct SquaredLoss {
  BasisSpec features;
};

/// min{(y - f'theta)^2, cap}; the surrogate used for heavy-tailed responses.
struct CappedSquaredLoss {
  BasisSpec features;
  double cap = 1.0;
};

/// 1{y != 1{x'theta > 0}} with theta = (alpha, beta) and y in {0, 1}.
struct ZeroOneLinearLoss {};

/// (1 - y sign{x - theta(z)}) / 2 with theta(z) = beta' f(z), y in {-1, +1}
/// and sign(0) = -1.
struct McidLoss {
  BasisSpec basis;
};

/// {theta - 1(u1 > u0)}^2 over score pairs; ties count as discordant.
struct AucLoss {};

using LossSpec = std::variant<CheckLoss, SquaredLoss, CappedSquaredLoss,
                              ZeroOneLinearLoss, McidLoss, AucLoss>;

struct RiskValue {
  double value = 0.0;
  std::size_t n_used = 0;
};

/// Throws ShapeError for tau outside (0, 1) or a nonpositive cap.
void validate(const LossSpec& loss);

/// Length of theta the loss expects for the given data (0 when the data
/// variant does not fit the loss).
int parameter_dimension(const LossSpec& loss, const Dataset& data);

std::string loss_name(const LossSpec& loss);

/// sign(v) with the tie-break sign(0) = -1.
inline int strict_sign(double v) { return v > 0.0 ? 1 : -1; }

/// r (tau - 1{r < 0}) for residual r = y - prediction.
double check_loss(double tau, double residual);

double loss_value(const LossSpec& loss, const Eigen::VectorXd& theta,
                  const Observation& u);

/// n^-1 sum_i loss(theta, U_i), summed left to right. For AUC, the mean
/// over all m*n cross-group pairs.
RiskValue empirical_risk(const LossSpec& loss, const Eigen::VectorXd& theta,
                         const Dataset& data);

/// Per-unit losses: one per observation, or one per (scores0[i], scores1[i])
/// pair for the AUC loss (requires m == n).
Eigen::VectorXd unit_losses(const LossSpec& loss, const Eigen::VectorXd& theta,
                            const Dataset& data);

double auc_pair_loss(double theta, double u0, double u1);
double auc_empirical_risk(double theta, std::span<const double> scores0,
                          std::span<const double> scores1);

/// Fraction of concordant cross-group pairs, #{(i, j): u1_j > u0_i} / (mn).
double auc_point_estimate(std::span<const double> scores0,
                          std::span<const double> scores1);

/// Condition-number threshold for the normal equations.
inline constexpr double kMaxConditionNumber = 1e12;

/// argmin_beta sum_i (y_i - beta' f(x_i))^2 via the normal equations
/// F'F beta = F'y, solved with column-pivoted QR. Throws ConditioningError
/// when F'F is singular or has condition number above 1e12.
Eigen::VectorXd erm_least_squares(const Dataset& data, const BasisSpec& basis);
Eigen::VectorXd least_squares(const Eigen::MatrixXd& F, const Eigen::VectorXd& y);

/// Empirical risk with the data-dependent parts (design matrices, the AUC
/// concordance fraction) computed once. This is what the samplers call on
/// every step.
class RiskEvaluator {
 public:
  RiskEvaluator(LossSpec loss, const Dataset& data);

  double operator()(const Eigen::VectorXd& theta) const;

  /// Loss of each observation (iid data only).
  Eigen::VectorXd unit_values(const Eigen::VectorXd& theta) const;

  /// Zero-one loss for theta = (alpha, beta) with beta supported on
  /// `support`; coefficients in `values`. Avoids forming the dense vector.
  double sparse_zero_one(int alpha, std::span<const int> support,
                         const Eigen::VectorXd& values) const;

  const LossSpec& loss() const { return loss_; }
  std::size_t terms() const { return terms_; }
  int dimension() const { return dimension_; }

 private:
  LossSpec loss_;
  std::size_t terms_ = 0;
  int dimension_ = 0;
  Eigen::MatrixXd design_;  // features of x (regression) or z (MCID), or x
  Eigen::VectorXd response_;
  Eigen::VectorXd score_;   // MCID diagnostic measure x
  Eigen::VectorXi labels_;
  double auc_hat_ = 0.0;
};

}  // namespace gibbs
