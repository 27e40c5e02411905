#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "gibbs/basis.hpp"
#include "gibbs/model.hpp"
#include "gibbs/rng.hpp"

namespace gibbs {

/// Z ~ U[0, 3], X | z ~ N(mu(z), 1) with mu(z) = z^3 - 3z^2 + 5, and
/// P(Y = 1 | x, z) = Phi((x - mu(z) -+ shift) / sd), the shift subtracted
/// above mu(z) and added below it.
struct Mcid1Sim {
  double shift = 0.05;
  double sd = 0.5;
};

/// Z ~ U[0, 3]^2, X | z ~ N(z1 + 2 z2, 1), same response law as Mcid1Sim.
struct Mcid2Sim {
  double shift = 0.05;
  double sd = 1.0;
};

/// x ~ U[0, 1]^k, y = beta_0 + beta_{1:k}' x + sd * e with e ~ N(0, 1);
/// k = beta.size() - 1.
struct QuantileRegSim {
  double tau = 0.5;
  Eigen::VectorXd beta = Eigen::Vector2d(1.0, 2.0);
  double noise_sd = 1.0;
};

/// U0 ~ N(0, 1) (m draws), U1 ~ N(mu, 1) (n draws, m = n).
struct AucSim {
  double mu = 1.0;
};

/// x ~ U[-1, 1]^k, y = beta_0 + beta_{1:k}' x + t_df.
struct HeavyTailSim {
  double df = 4.0;
  Eigen::VectorXd beta = Eigen::Vector2d(0.5, 1.0);
};

/// Fixed design x_i = i / n, y_i = f(x_i) + sd * e_i. Named functions:
/// "sine" sin(2 pi x), "quadratic" (x - 1/2)^2, "bump" exp(-32 (x - 1/2)^2).
struct MeanCurveSim {
  std::string function = "sine";
  double noise_sd = 0.5;
};

/// Linear classification with Massart noise: x ~ U[-1, 1]^{q+1},
/// label 1{x' theta* > 0} flipped with probability `flip`, theta* = (1, beta*)
/// with beta* zero outside `support` (0-based). Labels in {0, 1}.
struct MassartClassifierSim {
  int q = 50;
  std::vector<int> support{0, 1};
  std::vector<double> values{2.0, -2.0};
  double flip = 0.1;
};

using Generator = std::variant<Mcid1Sim, Mcid2Sim, QuantileRegSim, AucSim, HeavyTailSim,
                               MeanCurveSim, MassartClassifierSim>;

/// What is known about the data-generating law.
struct Truth {
  /// theta* as a parameter vector, when the law defines one.
  std::optional<Eigen::VectorXd> theta;
  /// theta* as a function of the covariate (MCID threshold, conditional
  /// quantile or mean curve).
  RealFunction function;
  /// P(Y = 1 | x, z) for the MCID laws.
  std::function<double(double, std::span<const double>)> eta;
};

struct Sample {
  Dataset data;
  Truth truth;
};

/// Throws ConfigError on invalid parameters.
void validate(const Generator& gen);
std::string generator_name(const Generator& gen);

Sample generate(const Generator& gen, std::size_t n, Rng& rng);
Truth truth_of(const Generator& gen);

/// Default hold-out size (100 for Mcid1Sim, 1000 for Mcid2Sim, else 0).
std::size_t default_holdout(const Generator& gen);

/// Fraction of points with y != sign(x - theta(z)), sign(0) = -1.
double holdout_misclassification(const FunctionParam& mcid, const Dataset& holdout);
double holdout_misclassification(const RealFunction& mcid, const Dataset& holdout);

/// Bayes-optimal mean curve for MeanCurveSim.
RealFunction named_curve(const std::string& name);

/// Term names {"1", "x"} (k = 1) or {"1", "x1", ..., "xk"} for a linear
/// dictionary.
std::vector<std::string> linear_terms(int k);

}  // namespace gibbs
