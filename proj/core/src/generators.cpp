#include "gibbs/generators.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "gibbs/error.hpp"
#include "gibbs/stats.hpp"
#include "overloaded.hpp"

namespace gibbs {
namespace {

using detail::overloaded;

double mcid1_mean(double z) { return z * z * z - 3.0 * z * z + 5.0; }
double mcid2_mean(std::span<const double> z) { return z[0] + 2.0 * z[1]; }

// P(Y = 1 | x) around threshold mu, with the margin shift.
double mcid_eta(double x, double mu, double shift, double sd) {
  const double center = x > mu ? mu - shift : mu + shift;
  return stats::normal_cdf((x - center) / sd);
}

Dataset mcid_data(std::size_t n, std::size_t dz, Rng& rng,
                  const std::function<double(std::span<const double>)>& mean, double shift,
                  double sd) {
  ClassificationData d;
  const auto rows = static_cast<Eigen::Index>(n);
  d.x.resize(rows, 1);
  d.y.resize(rows);
  d.z.resize(rows, static_cast<Eigen::Index>(dz));
  d.labels = LabelSet::PlusMinusOne;
  std::vector<double> z(dz);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (std::size_t k = 0; k < dz; ++k) z[k] = rng.uniform(0.0, 3.0);
    const double mu = mean(z);
    const double x = rng.normal(mu, 1.0);
    const double eta = mcid_eta(x, mu, shift, sd);
    for (std::size_t k = 0; k < dz; ++k) d.z(i, static_cast<Eigen::Index>(k)) = z[k];
    d.x(i, 0) = x;
    d.y(i) = rng.uniform() < eta ? 1 : -1;
  }
  return Dataset(std::move(d));
}

Dataset linear_regression(std::size_t n, const Eigen::VectorXd& beta, double lo, double hi,
                          Rng& rng, const std::function<double()>& noise) {
  RegressionData d;
  const auto rows = static_cast<Eigen::Index>(n);
  const Eigen::Index k = beta.size() - 1;
  d.x.resize(rows, k);
  d.y.resize(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    double mean = beta(0);
    for (Eigen::Index j = 0; j < k; ++j) {
      d.x(i, j) = rng.uniform(lo, hi);
      mean += beta(j + 1) * d.x(i, j);
    }
    d.y(i) = mean + noise();
  }
  return Dataset(std::move(d));
}

RealFunction linear_function(const Eigen::VectorXd& beta) {
  return [beta](std::span<const double> x) {
    double v = beta(0);
    for (Eigen::Index j = 1; j < beta.size(); ++j) v += beta(j) * x[static_cast<std::size_t>(j - 1)];
    return v;
  };
}

Eigen::VectorXd massart_theta(const MassartClassifierSim& g) {
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(g.q + 1);
  theta(0) = 1.0;
  for (std::size_t k = 0; k < g.support.size(); ++k)
    theta(g.support[k] + 1) = g.values[k];
  return theta;
}

}  // namespace

void validate(const Generator& gen) {
  std::visit(overloaded{
                 [](const Mcid1Sim& g) {
                   if (!(g.sd > 0.0) || !(g.shift >= 0.0))
                     throw ConfigError("mcid1: sd must be > 0 and shift >= 0");
                 },
                 [](const Mcid2Sim& g) {
                   if (!(g.sd > 0.0) || !(g.shift >= 0.0))
                     throw ConfigError("mcid2: sd must be > 0 and shift >= 0");
                 },
                 [](const QuantileRegSim& g) {
                   if (!(g.tau > 0.0 && g.tau < 1.0)) throw ConfigError("quantile: tau must lie in (0, 1)");
                   if (!(g.noise_sd > 0.0)) throw ConfigError("quantile: noise sd must be > 0");
                   if (g.beta.size() < 1) throw ConfigError("quantile: beta needs an intercept");
                 },
                 [](const AucSim& g) {
                   if (!std::isfinite(g.mu)) throw ConfigError("auc: mu must be finite");
                 },
                 [](const HeavyTailSim& g) {
                   if (!(g.df > 2.0)) throw ConfigError("heavy_tail: df must be > 2");
                   if (g.beta.size() < 1) throw ConfigError("heavy_tail: beta needs an intercept");
                 },
                 [](const MeanCurveSim& g) {
                   if (!(g.noise_sd > 0.0)) throw ConfigError("mean_curve: noise sd must be > 0");
                   named_curve(g.function);
                 },
                 [](const MassartClassifierSim& g) {
                   if (g.q < 1) throw ConfigError("massart: q must be >= 1");
                   if (!(g.flip >= 0.0 && g.flip < 0.5))
                     throw ConfigError("massart: flip probability must lie in [0, 1/2)");
                   if (g.support.size() != g.values.size())
                     throw ConfigError("massart: support and values differ in length");
                   std::set<int> seen;
                   for (int k : g.support)
                     if (k < 0 || k >= g.q || !seen.insert(k).second)
                       throw ConfigError("massart: support indices must be distinct, in 0..q-1");
                 },
             },
             gen);
}

std::string generator_name(const Generator& gen) {
  return std::visit(overloaded{
                        [](const Mcid1Sim&) { return std::string("mcid1"); },
                        [](const Mcid2Sim&) { return std::string("mcid2"); },
                        [](const QuantileRegSim&) { return std::string("quantile"); },
                        [](const AucSim&) { return std::string("auc"); },
                        [](const HeavyTailSim&) { return std::string("heavy_tail"); },
                        [](const MeanCurveSim&) { return std::string("mean_curve"); },
                        [](const MassartClassifierSim&) { return std::string("massart"); },
                    },
                    gen);
}

RealFunction named_curve(const std::string& name) {
  if (name == "sine")
    return [](std::span<const double> x) { return std::sin(2.0 * std::numbers::pi * x[0]); };
  if (name == "quadratic")
    return [](std::span<const double> x) { return (x[0] - 0.5) * (x[0] - 0.5); };
  if (name == "bump")
    return [](std::span<const double> x) { return std::exp(-32.0 * (x[0] - 0.5) * (x[0] - 0.5)); };
  throw ConfigError("unknown mean curve '" + name + "' (expected sine, quadratic or bump)");
}

Truth truth_of(const Generator& gen) {
  validate(gen);
  return std::visit(
      overloaded{
          [](const Mcid1Sim& g) {
            Truth t;
            t.function = [](std::span<const double> z) { return mcid1_mean(z[0]); };
            t.eta = [g](double x, std::span<const double> z) {
              return mcid_eta(x, mcid1_mean(z[0]), g.shift, g.sd);
            };
            return t;
          },
          [](const Mcid2Sim& g) {
            Truth t;
            t.function = [](std::span<const double> z) { return mcid2_mean(z); };
            t.eta = [g](double x, std::span<const double> z) {
              return mcid_eta(x, mcid2_mean(z), g.shift, g.sd);
            };
            return t;
          },
          [](const QuantileRegSim& g) {
            Eigen::VectorXd theta = g.beta;
            theta(0) += g.noise_sd * stats::normal_quantile(g.tau);
            Truth t;
            t.theta = theta;
            t.function = linear_function(theta);
            return t;
          },
          [](const AucSim& g) {
            Truth t;
            t.theta = Eigen::VectorXd::Constant(1, stats::normal_cdf(g.mu / std::sqrt(2.0)));
            return t;
          },
          [](const HeavyTailSim& g) {
            Truth t;
            t.theta = g.beta;
            t.function = linear_function(g.beta);
            return t;
          },
          [](const MeanCurveSim& g) {
            Truth t;
            t.function = named_curve(g.function);
            return t;
          },
          [](const MassartClassifierSim& g) {
            Truth t;
            t.theta = massart_theta(g);
            return t;
          },
      },
      gen);
}

Sample generate(const Generator& gen, std::size_t n, Rng& rng) {
  if (n < 1) throw PreconditionError("generate needs n >= 1");
  Truth truth = truth_of(gen);
  Dataset data = std::visit(
      overloaded{
          [&](const Mcid1Sim& g) {
            return mcid_data(n, 1, rng, [](std::span<const double> z) { return mcid1_mean(z[0]); },
                             g.shift, g.sd);
          },
          [&](const Mcid2Sim& g) { return mcid_data(n, 2, rng, mcid2_mean, g.shift, g.sd); },
          [&](const QuantileRegSim& g) {
            return linear_regression(n, g.beta, 0.0, 1.0, rng,
                                     [&] { return g.noise_sd * rng.normal(); });
          },
          [&](const AucSim& g) {
            TwoSampleData d;
            d.scores0.resize(n);
            d.scores1.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
              d.scores0[i] = rng.normal();
              d.scores1[i] = rng.normal(g.mu, 1.0);
            }
            return Dataset(std::move(d));
          },
          [&](const HeavyTailSim& g) {
            return linear_regression(n, g.beta, -1.0, 1.0, rng,
                                     [&] { return rng.student_t(g.df); });
          },
          [&](const MeanCurveSim& g) {
            RegressionData d;
            const auto rows = static_cast<Eigen::Index>(n);
            d.x.resize(rows, 1);
            d.y.resize(rows);
            for (Eigen::Index i = 0; i < rows; ++i) {
              const double x = static_cast<double>(i + 1) / static_cast<double>(n);
              d.x(i, 0) = x;
              d.y(i) = truth.function(std::span<const double>(&x, 1)) + g.noise_sd * rng.normal();
            }
            return Dataset(std::move(d));
          },
          [&](const MassartClassifierSim& g) {
            const Eigen::VectorXd theta = *truth.theta;
            ClassificationData d;
            const auto rows = static_cast<Eigen::Index>(n);
            d.x.resize(rows, g.q + 1);
            d.y.resize(rows);
            d.labels = LabelSet::ZeroOne;
            for (Eigen::Index i = 0; i < rows; ++i) {
              double margin = 0.0;
              for (int j = 0; j <= g.q; ++j) {
                d.x(i, j) = rng.uniform(-1.0, 1.0);
                margin += theta(j) * d.x(i, j);
              }
              int label = margin > 0.0 ? 1 : 0;
              if (rng.uniform() < g.flip) label = 1 - label;
              d.y(i) = label;
            }
            return Dataset(std::move(d));
          },
      },
      gen);
  return {std::move(data), std::move(truth)};
}

std::size_t default_holdout(const Generator& gen) {
  if (std::holds_alternative<Mcid1Sim>(gen)) return 100;
  if (std::holds_alternative<Mcid2Sim>(gen)) return 1000;
  return 0;
}

double holdout_misclassification(const RealFunction& mcid, const Dataset& holdout) {
  if (!holdout.is_classification())
    throw ShapeError("hold-out misclassification needs classification data");
  const auto& d = holdout.classification();
  if (d.labels != LabelSet::PlusMinusOne || d.x.cols() < 1)
    throw ShapeError("hold-out data must carry a score and labels in {-1, +1}");
  std::size_t errors = 0;
  std::vector<double> z(static_cast<std::size_t>(d.z.cols()));
  for (Eigen::Index i = 0; i < d.x.rows(); ++i) {
    for (Eigen::Index k = 0; k < d.z.cols(); ++k) z[static_cast<std::size_t>(k)] = d.z(i, k);
    const int predicted = d.x(i, 0) - mcid(z) > 0.0 ? 1 : -1;
    errors += predicted != d.y(i) ? 1 : 0;
  }
  return static_cast<double>(errors) / static_cast<double>(d.x.rows());
}

double holdout_misclassification(const FunctionParam& mcid, const Dataset& holdout) {
  return holdout_misclassification(
      RealFunction([&](std::span<const double> z) { return eval_function(mcid, z); }), holdout);
}

std::vector<std::string> linear_terms(int k) {
  std::vector<std::string> terms{"1"};
  if (k == 1) {
    terms.emplace_back("x");
    return terms;
  }
  for (int j = 1; j <= k; ++j) terms.push_back("x" + std::to_string(j));
  return terms;
}

}  // namespace gibbs
