#include "gibbs/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "gibbs/error.hpp"
#include "gibbs/stats.hpp"
#include "overloaded.hpp"

namespace gibbs {
namespace {

using detail::overloaded;

constexpr double kMaxExponent = 700.0;

std::vector<double> row(const Eigen::MatrixXd& m, Eigen::Index i) {
  std::vector<double> out(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index j = 0; j < m.cols(); ++j) out[static_cast<std::size_t>(j)] = m(i, j);
  return out;
}

// theta*(x_i) for every row of `points`, given its design matrix.
Eigen::VectorXd star_values(const Comparand& star, const Eigen::MatrixXd& design,
                            const Eigen::MatrixXd& points) {
  return std::visit(overloaded{
                        [&](const Eigen::VectorXd& beta) -> Eigen::VectorXd {
                          if (beta.size() != design.cols())
                            throw ShapeError("theta* has the wrong number of coefficients");
                          return design * beta;
                        },
                        [&](const RealFunction& f) -> Eigen::VectorXd {
                          Eigen::VectorXd out(points.rows());
                          for (Eigen::Index i = 0; i < points.rows(); ++i) {
                            const std::vector<double> x = row(points, i);
                            out(i) = f(x);
                          }
                          return out;
                        },
                    },
                    star);
}

const Eigen::VectorXd& star_vector(const Comparand& star, const char* what) {
  const auto* v = std::get_if<Eigen::VectorXd>(&star);
  if (!v) throw ShapeError(std::string(what) + " needs theta* as a parameter vector");
  return *v;
}

bool equals_star(const Eigen::VectorXd& theta, const Comparand& star) {
  const auto* v = std::get_if<Eigen::VectorXd>(&star);
  return v && v->size() == theta.size() && *v == theta;
}

void require_length(const Eigen::VectorXd& theta, Eigen::Index expected, const char* what) {
  if (theta.size() != expected)
    throw ShapeError(std::string(what) + ": parameter has length " +
                     std::to_string(theta.size()) + ", expected " + std::to_string(expected));
}

DivergenceValue function_l2(const Eigen::MatrixXd& design, const Eigen::MatrixXd& points,
                            const Eigen::VectorXd& theta, const Comparand& star,
                            bool monte_carlo) {
  require_length(theta, design.cols(), "function divergence");
  const Eigen::VectorXd diff = design * theta - star_values(star, design, points);
  const Eigen::VectorXd sq = diff.array().square();
  const double n = static_cast<double>(sq.size());
  const double mean_sq = sq.sum() / n;
  DivergenceValue out{std::sqrt(mean_sq), 0.0};
  if (monte_carlo && sq.size() > 1 && mean_sq > 0.0) {
    const double var = (sq.array() - mean_sq).square().sum() / (n - 1.0);
    out.std_error = std::sqrt(var / n) / (2.0 * out.value);
  }
  return out;
}

DivergenceValue mcid_measure(const MCIDMeasure& d, const Eigen::VectorXd& theta,
                             const Comparand& star) {
  require_length(theta, d.design.cols(), "MCID divergence");
  const Eigen::VectorXd fitted = d.design * theta;
  const Eigen::VectorXd truth = star_values(star, d.design, d.z);
  std::size_t inside = 0;
  for (Eigen::Index i = 0; i < fitted.size(); ++i) {
    const double lo = std::min(fitted(i), truth(i));
    const double hi = std::max(fitted(i), truth(i));
    inside += (lo <= d.scores(i) && d.scores(i) <= hi) ? 1 : 0;
  }
  const double n = static_cast<double>(fitted.size());
  const double p = static_cast<double>(inside) / n;
  return {p, std::sqrt(p * (1.0 - p) / n)};
}

DivergenceValue risk_difference(const RiskDiffSqrt& d, const Eigen::VectorXd& theta,
                                const Comparand& star) {
  const Eigen::VectorXd& s = star_vector(star, "risk-difference divergence");
  const RiskEvaluator& risk = *d.evaluator;
  require_length(theta, risk.dimension(), "risk-difference divergence");
  require_length(s, risk.dimension(), "risk-difference divergence");
  double mean = 0.0;
  double se = 0.0;
  if (std::holds_alternative<AucLoss>(d.loss)) {
    mean = risk(theta) - risk(s);
  } else {
    const Eigen::VectorXd diff = risk.unit_values(theta) - risk.unit_values(s);
    const double n = static_cast<double>(diff.size());
    mean = diff.sum() / n;
    if (diff.size() > 1)
      se = std::sqrt((diff.array() - mean).square().sum() / (n - 1.0) / n);
  }
  if (mean <= 0.0) return {0.0, std::sqrt(se)};
  const double value = std::sqrt(mean);
  return {value, se / (2.0 * value)};
}

bool is_frozen(const Divergence& div) {
  return std::visit(overloaded{
                        [](const L2P& d) { return d.design.rows() > 0; },
                        [](const RiskDiffSqrt& d) { return d.evaluator != nullptr; },
                        [](const MCIDMeasure& d) { return d.design.rows() > 0; },
                        [](const auto&) { return true; },
                    },
                    div);
}

}  // namespace

std::string divergence_name(const Divergence& div) {
  return std::visit(overloaded{
                        [](const Euclid&) { return std::string("euclid"); },
                        [](const AbsScalar&) { return std::string("abs"); },
                        [](const EmpiricalL2&) { return std::string("empirical_l2"); },
                        [](const L2P&) { return std::string("l2p"); },
                        [](const RiskDiffSqrt&) { return std::string("risk_diff_sqrt"); },
                        [](const MCIDMeasure&) { return std::string("mcid"); },
                    },
                    div);
}

bool is_monte_carlo(const Divergence& div) {
  return std::holds_alternative<L2P>(div) || std::holds_alternative<RiskDiffSqrt>(div) ||
         std::holds_alternative<MCIDMeasure>(div);
}

Divergence freeze(const Divergence& div, Rng& rng) {
  return std::visit(
      overloaded{
          [&](const L2P& d) -> Divergence {
            if (!d.covariates) throw PreconditionError("L2P divergence has no covariate sampler");
            L2P out = d;
            out.points = d.covariates(d.n, rng);
            out.design = design_matrix(d.basis, out.points);
            return out;
          },
          [&](const RiskDiffSqrt& d) -> Divergence {
            if (!d.sampler) throw PreconditionError("risk-difference divergence has no sampler");
            RiskDiffSqrt out = d;
            out.frozen = std::make_shared<const Dataset>(d.sampler(d.n, rng));
            out.evaluator = std::make_shared<const RiskEvaluator>(d.loss, *out.frozen);
            return out;
          },
          [&](const MCIDMeasure& d) -> Divergence {
            if (!d.sampler) throw PreconditionError("MCID divergence has no sampler");
            const Dataset data = d.sampler(d.n, rng);
            const auto& c = data.classification();
            if (c.x.cols() < 1 || c.z.cols() < 1)
              throw ShapeError("MCID divergence needs data with a score and covariates");
            MCIDMeasure out = d;
            out.scores = c.x.col(0);
            out.z = c.z;
            out.design = design_matrix(d.basis, c.z);
            return out;
          },
          [](const auto& d) -> Divergence { return d; },
      },
      div);
}

DivergenceValue divergence_value(const Divergence& div, const Eigen::VectorXd& theta,
                                 const Comparand& star, Rng& rng) {
  if (is_monte_carlo(div) && equals_star(theta, star)) return {0.0, 0.0};
  if (!is_frozen(div)) return divergence_value(freeze(div, rng), theta, star);
  return divergence_value(div, theta, star);
}

DivergenceValue divergence_value(const Divergence& div, const Eigen::VectorXd& theta,
                                 const Comparand& star) {
  if (is_monte_carlo(div) && equals_star(theta, star)) return {0.0, 0.0};
  if (!is_frozen(div))
    throw PreconditionError(divergence_name(div) + " divergence needs a frozen sample or an rng");
  return std::visit(
      overloaded{
          [&](const Euclid&) {
            const Eigen::VectorXd& s = star_vector(star, "Euclidean divergence");
            require_length(theta, s.size(), "Euclidean divergence");
            return DivergenceValue{(theta - s).norm(), 0.0};
          },
          [&](const AbsScalar&) {
            const Eigen::VectorXd& s = star_vector(star, "absolute divergence");
            require_length(theta, 1, "absolute divergence");
            require_length(s, 1, "absolute divergence");
            return DivergenceValue{std::abs(theta(0) - s(0)), 0.0};
          },
          [&](const EmpiricalL2& d) {
            if (d.xs.rows() == 0) throw PreconditionError("empirical L2 needs design points");
            return function_l2(design_matrix(d.basis, d.xs), d.xs, theta, star, false);
          },
          [&](const L2P& d) { return function_l2(d.design, d.points, theta, star, true); },
          [&](const RiskDiffSqrt& d) { return risk_difference(d, theta, star); },
          [&](const MCIDMeasure& d) { return mcid_measure(d, theta, star); },
      },
      div);
}

std::vector<double> divergence_trace(const Divergence& div, const Chain& chain,
                                     const Comparand& star) {
  // Function divergences evaluate blocks of draws with one matrix product.
  const Eigen::MatrixXd* design = nullptr;
  const Eigen::MatrixXd* points = nullptr;
  Eigen::MatrixXd empirical_design;
  const MCIDMeasure* mcid = std::get_if<MCIDMeasure>(&div);
  if (const auto* d = std::get_if<EmpiricalL2>(&div)) {
    empirical_design = design_matrix(d->basis, d->xs);
    design = &empirical_design;
    points = &d->xs;
  } else if (const auto* d = std::get_if<L2P>(&div); d && is_frozen(div)) {
    design = &d->design;
    points = &d->points;
  } else if (mcid && is_frozen(div)) {
    design = &mcid->design;
    points = &mcid->z;
  }

  std::vector<double> out;
  out.reserve(chain.draws.size());
  if (!design) {
    for (const Eigen::VectorXd& theta : chain.draws)
      out.push_back(divergence_value(div, theta, star).value);
    return out;
  }

  const Eigen::VectorXd truth = star_values(star, *design, *points);
  const double count = static_cast<double>(design->rows());
  constexpr std::size_t kBlock = 128;
  for (std::size_t start = 0; start < chain.draws.size(); start += kBlock) {
    const std::size_t width = std::min(kBlock, chain.draws.size() - start);
    Eigen::MatrixXd thetas(design->cols(), static_cast<Eigen::Index>(width));
    for (std::size_t k = 0; k < width; ++k) {
      require_length(chain.draws[start + k], design->cols(), "function divergence");
      thetas.col(static_cast<Eigen::Index>(k)) = chain.draws[start + k];
    }
    const Eigen::MatrixXd fitted = *design * thetas;
    for (Eigen::Index k = 0; k < fitted.cols(); ++k) {
      if (equals_star(chain.draws[start + static_cast<std::size_t>(k)], star)) {
        out.push_back(0.0);
        continue;
      }
      if (mcid) {
        std::size_t inside = 0;
        for (Eigen::Index i = 0; i < fitted.rows(); ++i) {
          const double lo = std::min(fitted(i, k), truth(i));
          const double hi = std::max(fitted(i, k), truth(i));
          inside += (lo <= mcid->scores(i) && mcid->scores(i) <= hi) ? 1 : 0;
        }
        out.push_back(static_cast<double>(inside) / count);
      } else {
        out.push_back(std::sqrt((fitted.col(k) - truth).squaredNorm() / count));
      }
    }
  }
  return out;
}

MVEstimate mv_estimate(const LossSpec& loss, const Eigen::VectorXd& theta,
                       const Eigen::VectorXd& theta_star, const DataSampler& generator,
                       std::size_t N, Rng& rng) {
  if (N < 100) throw PreconditionError("mv_estimate needs N >= 100");
  if (theta == theta_star) return {};
  const Dataset data = generator(N, rng);
  const Eigen::VectorXd diff = unit_losses(loss, theta, data) - unit_losses(loss, theta_star, data);
  const double n = static_cast<double>(diff.size());
  const double m = diff.sum() / n;
  const Eigen::ArrayXd centered = diff.array() - m;
  const double v = centered.square().sum() / (n - 1.0);
  const double m4 = centered.square().square().sum() / n;
  MVEstimate out;
  out.m_hat = m;
  out.v_hat = v;
  out.m_std_error = std::sqrt(v / n);
  out.v_std_error = std::sqrt(std::max(m4 - v * v, 0.0) / n);
  return out;
}

MgfReport mgf_condition_check(const LossSpec& loss, const std::vector<Eigen::VectorXd>& grid,
                              const Eigen::VectorXd& theta_star, double omega,
                              const Divergence& div, double r, const DataSampler& generator,
                              std::size_t N, Rng& rng) {
  if (!(omega > 0.0)) throw PreconditionError("MGF check needs omega > 0");
  if (!(r > 0.0)) throw PreconditionError("MGF check needs r > 0");
  if (grid.empty()) throw PreconditionError("MGF check needs a nonempty grid");
  if (N < 2) throw PreconditionError("MGF check needs N >= 2");

  const Divergence frozen = freeze(div, rng);
  std::vector<double> divergences;
  for (const Eigen::VectorXd& theta : grid) {
    const double d = divergence_value(frozen, theta, Comparand{theta_star}).value;
    if (!(d > 0.0))
      throw PreconditionError("MGF grid point at divergence 0 from theta*");
    divergences.push_back(d);
  }

  const Dataset data = generator(N, rng);
  const Eigen::VectorXd star_losses = unit_losses(loss, theta_star, data);
  MgfReport report;
  report.omega = omega;
  report.r = r;
  report.n = static_cast<std::size_t>(star_losses.size());
  report.min_k_hat = std::numeric_limits<double>::infinity();
  report.min_k_lower = std::numeric_limits<double>::infinity();
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const Eigen::VectorXd excess = unit_losses(loss, grid[g], data) - star_losses;
    const Eigen::ArrayXd exponent = -omega * excess.array();
    if (exponent.maxCoeff() > kMaxExponent)
      throw DegenerateError("exponentiated excess loss overflows; the loss is unbounded "
                            "below on the draws");
    const Eigen::ArrayXd e = exponent.exp();
    const double n = static_cast<double>(e.size());
    MgfPoint p;
    p.theta = grid[g];
    p.estimate = e.sum() / n;
    p.std_error = std::sqrt((e - p.estimate).square().sum() / (n - 1.0) / n);
    p.log_estimate = std::log(p.estimate);
    p.annealed = -p.log_estimate / omega;
    p.divergence = divergences[g];
    p.divergence_power = std::pow(p.divergence, r);
    p.k_hat = -p.log_estimate / (omega * p.divergence_power);
    p.k_std_error = p.std_error / (p.estimate * omega * p.divergence_power);
    report.min_k_hat = std::min(report.min_k_hat, p.k_hat);
    report.min_k_lower = std::min(report.min_k_lower, p.k_hat - 3.0 * p.k_std_error);
    report.points.push_back(std::move(p));
  }
  return report;
}

double posterior_mass_outside(const Chain& chain, const Divergence& div,
                              const Comparand& star, double radius) {
  if (chain.draws.empty()) throw PreconditionError("posterior mass of an empty chain");
  if (!(radius > 0.0)) throw PreconditionError("radius must be positive");
  const std::vector<double> d = divergence_trace(div, chain, star);
  const auto outside = std::count_if(d.begin(), d.end(), [&](double v) { return v > radius; });
  return static_cast<double>(outside) / static_cast<double>(d.size());
}

RateFit concentration_slope(const std::vector<std::pair<double, double>>& pairs) {
  std::set<double> distinct;
  std::vector<double> log_n, log_r;
  for (const auto& [n, radius] : pairs) {
    if (!(n > 0.0)) throw PreconditionError("sample sizes must be positive");
    if (!(radius > 0.0)) throw PreconditionError("radii must be positive");
    distinct.insert(n);
    log_n.push_back(std::log(n));
    log_r.push_back(std::log(radius));
  }
  if (distinct.size() < 3) throw PreconditionError("rate fit needs at least 3 distinct n");
  const stats::LineFit fit = stats::fit_line(log_n, log_r);
  return {fit.slope, fit.intercept, fit.max_abs_residual, pairs};
}

Eigen::VectorXd projection_target(const BasisSpec& basis, const Eigen::MatrixXd& xs,
                                  const Eigen::VectorXd& star_values) {
  return least_squares(design_matrix(basis, xs), star_values);
}

}  // namespace gibbs
