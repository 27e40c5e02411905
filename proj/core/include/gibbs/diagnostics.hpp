#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "gibbs/basis.hpp"
#include "gibbs/losses.hpp"
#include "gibbs/model.hpp"
#include "gibbs/rng.hpp"
#include "gibbs/sampler.hpp"

namespace gibbs {

/// Draws a fresh dataset of the given size.
using DataSampler = std::function<Dataset(std::size_t, Rng&)>;
/// Draws covariate points, one per row.
using CovariateSampler = std::function<Eigen::MatrixXd(std::size_t, Rng&)>;

/// ||theta - theta*||_2.
struct Euclid {};

/// |theta - theta*| for scalar parameters.
struct AbsScalar {};

/// ||f_theta - theta*||_{n,2} = (n^-1 sum_i (f_theta(x_i) - theta*(x_i))^2)^{1/2}
/// over the rows of xs.
struct EmpiricalL2 {
  BasisSpec basis;
  Eigen::MatrixXd xs;
};

/// L2(P) norm of f_theta - theta* under the covariate law, by Monte Carlo.
struct L2P {
  BasisSpec basis;
  CovariateSampler covariates;
  std::size_t n = 10000;
  // Set by freeze().
  Eigen::MatrixXd points;
  Eigen::MatrixXd design;
};

/// {R(theta) - R(theta*)}^{1/2} with R estimated on fresh data, clamped at 0.
struct RiskDiffSqrt {
  LossSpec loss;
  DataSampler sampler;
  std::size_t n = 10000;
  // Set by freeze().
  std::shared_ptr<const Dataset> frozen;
  std::shared_ptr<const RiskEvaluator> evaluator;
};

/// P{theta(Z) ^ theta*(Z) <= X <= theta(Z) v theta*(Z)} under the joint law
/// of (X, Z), with theta(z) = beta' f(z). The sampler must return
/// classification data carrying x (first column) and z.
struct MCIDMeasure {
  BasisSpec basis;
  DataSampler sampler;
  std::size_t n = 10000;
  // Set by freeze().
  Eigen::VectorXd scores;
  Eigen::MatrixXd z;
  Eigen::MatrixXd design;
};

using Divergence =
    std::variant<Euclid, AbsScalar, EmpiricalL2, L2P, RiskDiffSqrt, MCIDMeasure>;

/// theta* as a parameter vector or as a function of the covariate.
using Comparand = std::variant<Eigen::VectorXd, RealFunction>;

struct DivergenceValue {
  double value = 0.0;
  double std_error = 0.0;
};

std::string divergence_name(const Divergence& div);
bool is_monte_carlo(const Divergence& div);

/// Draws the Monte Carlo sample of an MC divergence once, so that repeated
/// evaluations share it. A no-op for the exact divergences.
Divergence freeze(const Divergence& div, Rng& rng);

/// d(theta, theta*). MC variants use the frozen sample when present and
/// otherwise draw one from rng; they return exactly 0 without sampling when
/// theta equals a vector comparand. Throws ShapeError on mismatched shapes.
DivergenceValue divergence_value(const Divergence& div, const Eigen::VectorXd& theta,
                                 const Comparand& star, Rng& rng);
/// Same, for exact or frozen divergences (throws PreconditionError otherwise).
DivergenceValue divergence_value(const Divergence& div, const Eigen::VectorXd& theta,
                                 const Comparand& star);

/// d(draw, theta*) for every draw of the chain. Requires an exact or
/// frozen divergence.
std::vector<double> divergence_trace(const Divergence& div, const Chain& chain,
                                     const Comparand& star);

struct MVEstimate {
  double m_hat = 0.0;
  double v_hat = 0.0;
  double m_std_error = 0.0;
  double v_std_error = 0.0;
};

/// Mean and variance of l_theta(U) - l_theta*(U) over N fresh units. For the
/// AUC loss the units are score pairs (the sampler must return m = n).
MVEstimate mv_estimate(const LossSpec& loss, const Eigen::VectorXd& theta,
                       const Eigen::VectorXd& theta_star, const DataSampler& generator,
                       std::size_t N, Rng& rng);

struct MgfPoint {
  Eigen::VectorXd theta;
  double estimate = 0.0;   // MC mean of exp{-omega (l_theta - l_theta*)}
  double std_error = 0.0;
  double log_estimate = 0.0;
  double annealed = 0.0;   // -log(estimate) / omega
  double divergence = 0.0;
  double divergence_power = 0.0;  // d^r
  double k_hat = 0.0;      // -log(estimate) / (omega d^r)
  double k_std_error = 0.0;
};

struct MgfReport {
  std::vector<MgfPoint> points;
  double min_k_hat = 0.0;
  /// min over the grid of k_hat - 3 * k_std_error.
  double min_k_lower = 0.0;
  double omega = 0.0;
  double r = 1.0;
  std::size_t n = 0;
};

/// Empirical check of P exp{-omega (l_theta - l_theta*)} < exp{-K omega d^r}
/// on every grid point, all points sharing one sample of N units. Throws
/// PreconditionError for a grid point at divergence 0 and DegenerateError
/// when an exponent exceeds 700 (loss unbounded below on the draws).
MgfReport mgf_condition_check(const LossSpec& loss, const std::vector<Eigen::VectorXd>& grid,
                              const Eigen::VectorXd& theta_star, double omega,
                              const Divergence& div, double r, const DataSampler& generator,
                              std::size_t N, Rng& rng);

/// Fraction of draws with d(draw, theta*) > radius.
double posterior_mass_outside(const Chain& chain, const Divergence& div,
                              const Comparand& star, double radius);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_abs_residual = 0.0;
  std::vector<std::pair<double, double>> pairs;
};

/// OLS of log(radius) on log(n). Needs three distinct n and positive radii.
RateFit concentration_slope(const std::vector<std::pair<double, double>>& pairs);

/// (F'F)^-1 F' theta*(x_{1:n}) for the rows of xs.
Eigen::VectorXd projection_target(const BasisSpec& basis, const Eigen::MatrixXd& xs,
                                  const Eigen::VectorXd& star_values);

}  // namespace gibbs
