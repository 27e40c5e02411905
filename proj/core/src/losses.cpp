#include "gibbs/losses.hpp"

#include <algorithm>
#include <cmath>

#include "gibbs/error.hpp"
#include "overloaded.hpp"

namespace gibbs {

using detail::overloaded;

namespace {

const BasisSpec* feature_basis(const LossSpec& loss) {
  return std::visit(overloaded{
                        [](const CheckLoss& l) -> const BasisSpec* { return &l.features; },
                        [](const SquaredLoss& l) -> const BasisSpec* { return &l.features; },
                        [](const CappedSquaredLoss& l) -> const BasisSpec* {
                          return &l.features;
                        },
                        [](const auto&) -> const BasisSpec* { return nullptr; },
                    },
                    loss);
}

// Loss of a regression-type family given residual r = y - prediction.
double residual_loss(const LossSpec& loss, double r) {
  return std::visit(overloaded{
                        [&](const CheckLoss& l) { return check_loss(l.tau, r); },
                        [&](const SquaredLoss&) { return r * r; },
                        [&](const CappedSquaredLoss& l) { return std::min(r * r, l.cap); },
                        [](const auto&) -> double {
                          throw ShapeError("loss is not a residual loss");
                        },
                    },
                    loss);
}

void require_dimension(const Eigen::VectorXd& theta, Eigen::Index expected,
                       const char* what) {
  if (theta.size() != expected)
    throw ShapeError(std::string(what) + ": theta has length " +
                     std::to_string(theta.size()) + ", expected " +
                     std::to_string(expected));
}

double mcid_loss(int y, double x, double threshold) {
  return 0.5 * (1.0 - y * strict_sign(x - threshold));
}

}  // namespace

void validate(const LossSpec& loss) {
  std::visit(overloaded{
                 [](const CheckLoss& l) {
                   if (!(l.tau > 0.0 && l.tau < 1.0))
                     throw ShapeError("check loss needs tau in (0, 1)");
                 },
                 [](const CappedSquaredLoss& l) {
                   if (!(l.cap > 0.0)) throw ShapeError("loss cap must be positive");
                 },
                 [](const auto&) {},
             },
             loss);
}

int parameter_dimension(const LossSpec& loss, const Dataset& data) {
  if (const auto* basis = feature_basis(loss))
    return data.is_regression() ? basis_size(*basis) : 0;
  return std::visit(
      overloaded{
          [&](const ZeroOneLinearLoss&) {
            return data.is_classification()
                       ? static_cast<int>(data.classification().x.cols())
                       : 0;
          },
          [&](const McidLoss& l) {
            return data.is_classification() ? basis_size(l.basis) : 0;
          },
          [&](const AucLoss&) { return data.is_two_sample() ? 1 : 0; },
          [](const auto&) { return 0; },
      },
      loss);
}

std::string loss_name(const LossSpec& loss) {
  return std::visit(overloaded{
                        [](const CheckLoss&) { return std::string("check"); },
                        [](const SquaredLoss&) { return std::string("squared"); },
                        [](const CappedSquaredLoss&) { return std::string("capped_squared"); },
                        [](const ZeroOneLinearLoss&) { return std::string("zero_one"); },
                        [](const McidLoss&) { return std::string("mcid"); },
                        [](const AucLoss&) { return std::string("auc"); },
                    },
                    loss);
}

double check_loss(double tau, double residual) {
  return residual * (tau - (residual < 0.0 ? 1.0 : 0.0));
}

double loss_value(const LossSpec& loss, const Eigen::VectorXd& theta,
                  const Observation& u) {
  validate(loss);
  if (const auto* basis = feature_basis(loss)) {
    const auto* p = std::get_if<RegPair>(&u);
    if (!p) throw ShapeError(loss_name(loss) + " loss needs an (x, y) pair");
    require_dimension(theta, basis_size(*basis), "residual loss");
    const double prediction =
        theta.dot(eval_basis(*basis, std::span<const double>(p->x.data(), p->x.size())));
    return residual_loss(loss, p->y - prediction);
  }
  return std::visit(
      overloaded{
          [&](const ZeroOneLinearLoss&) {
            const auto* t = std::get_if<ClassTriple>(&u);
            if (!t) throw ShapeError("zero-one loss needs a labelled observation");
            require_dimension(theta, t->x.size(), "zero-one loss");
            const int predicted = t->x.dot(theta) > 0.0 ? 1 : 0;
            const int actual = t->y == 1 ? 1 : 0;
            return predicted == actual ? 0.0 : 1.0;
          },
          [&](const McidLoss& l) {
            const auto* t = std::get_if<ClassTriple>(&u);
            if (!t || t->x.size() < 1)
              throw ShapeError("MCID loss needs an (x, y, z) triple");
            if (t->y != 1 && t->y != -1)
              throw ShapeError("MCID loss needs labels in {-1, +1}");
            const double threshold =
                eval_function({l.basis, theta}, std::span<const double>(t->z.data(), t->z.size()));
            return mcid_loss(t->y, t->x(0), threshold);
          },
          [&](const AucLoss&) {
            const auto* s = std::get_if<ScorePair>(&u);
            if (!s) throw ShapeError("AUC loss needs a (u0, u1) score pair");
            require_dimension(theta, 1, "AUC loss");
            return auc_pair_loss(theta(0), s->u0, s->u1);
          },
          [](const auto&) -> double { throw ShapeError("unhandled loss"); },
      },
      loss);
}

RiskValue empirical_risk(const LossSpec& loss, const Eigen::VectorXd& theta,
                         const Dataset& data) {
  if (std::holds_alternative<AucLoss>(loss)) {
    const auto& d = data.two_sample();
    require_dimension(theta, 1, "AUC loss");
    return {auc_empirical_risk(theta(0), d.scores0, d.scores1), data.risk_terms()};
  }
  if (data.is_two_sample())
    throw ShapeError(loss_name(loss) + " loss cannot use two-sample data");
  double sum = 0.0;
  const std::size_t n = data.size();
  for (std::size_t i = 0; i < n; ++i) sum += loss_value(loss, theta, data.observation(i));
  return {sum / static_cast<double>(n), n};
}

Eigen::VectorXd unit_losses(const LossSpec& loss, const Eigen::VectorXd& theta,
                            const Dataset& data) {
  if (std::holds_alternative<AucLoss>(loss)) {
    const auto& d = data.two_sample();
    if (d.scores0.size() != d.scores1.size())
      throw ShapeError("paired AUC units need m == n");
    require_dimension(theta, 1, "AUC loss");
    Eigen::VectorXd out(static_cast<Eigen::Index>(d.scores0.size()));
    for (std::size_t i = 0; i < d.scores0.size(); ++i)
      out(static_cast<Eigen::Index>(i)) = auc_pair_loss(theta(0), d.scores0[i], d.scores1[i]);
    return out;
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(data.size()));
  for (std::size_t i = 0; i < data.size(); ++i)
    out(static_cast<Eigen::Index>(i)) = loss_value(loss, theta, data.observation(i));
  return out;
}

double auc_pair_loss(double theta, double u0, double u1) {
  const double d = theta - (u1 > u0 ? 1.0 : 0.0);
  return d * d;
}

double auc_empirical_risk(double theta, std::span<const double> scores0,
                          std::span<const double> scores1) {
  if (scores0.empty() || scores1.empty())
    throw PreconditionError("AUC risk needs both groups nonempty");
  double sum = 0.0;
  for (double u0 : scores0)
    for (double u1 : scores1) sum += auc_pair_loss(theta, u0, u1);
  return sum / (static_cast<double>(scores0.size()) * static_cast<double>(scores1.size()));
}

double auc_point_estimate(std::span<const double> scores0,
                          std::span<const double> scores1) {
  if (scores0.empty() || scores1.empty())
    throw PreconditionError("AUC estimate needs both groups nonempty");
  std::vector<double> sorted0(scores0.begin(), scores0.end());
  std::sort(sorted0.begin(), sorted0.end());
  std::uint64_t concordant = 0;
  for (double u1 : scores1)
    concordant += static_cast<std::uint64_t>(
        std::lower_bound(sorted0.begin(), sorted0.end(), u1) - sorted0.begin());
  return static_cast<double>(concordant) /
         (static_cast<double>(scores0.size()) * static_cast<double>(scores1.size()));
}

Eigen::VectorXd least_squares(const Eigen::MatrixXd& F, const Eigen::VectorXd& y) {
  if (F.rows() != y.size()) throw ShapeError("design and response lengths differ");
  const Eigen::MatrixXd gram = F.transpose() * F;
  const Eigen::VectorXd rhs = F.transpose() * y;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > kMaxConditionNumber)
    throw ConditioningError("normal equations are singular or ill-conditioned "
                            "(eigenvalue range [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + "])");
  return gram.colPivHouseholderQr().solve(rhs);
}

Eigen::VectorXd erm_least_squares(const Dataset& data, const BasisSpec& basis) {
  const auto& d = data.regression();
  return least_squares(design_matrix(basis, d.x), d.y);
}

RiskEvaluator::RiskEvaluator(LossSpec loss, const Dataset& data)
    : loss_(std::move(loss)), terms_(data.risk_terms()) {
  validate(loss_);
  dimension_ = parameter_dimension(loss_, data);
  if (dimension_ == 0)
    throw ShapeError(loss_name(loss_) + " loss does not fit this dataset variant");
  if (const auto* basis = feature_basis(loss_)) {
    const auto& d = data.regression();
    design_ = design_matrix(*basis, d.x);
    response_ = d.y;
    return;
  }
  std::visit(overloaded{
                 [&](const ZeroOneLinearLoss&) {
                   const auto& d = data.classification();
                   design_ = d.x;
                   labels_ = d.y.unaryExpr([](int y) { return y == 1 ? 1 : 0; });
                 },
                 [&](const McidLoss& l) {
                   const auto& d = data.classification();
                   if (d.labels != LabelSet::PlusMinusOne)
                     throw ShapeError("MCID loss needs labels in {-1, +1}");
                   if (d.x.cols() < 1) throw ShapeError("MCID data needs a score column");
                   design_ = design_matrix(l.basis, d.z);
                   score_ = d.x.col(0);
                   labels_ = d.y;
                 },
                 [&](const AucLoss&) {
                   const auto& d = data.two_sample();
                   auc_hat_ = auc_point_estimate(d.scores0, d.scores1);
                 },
                 [](const auto&) {},
             },
             loss_);
}

Eigen::VectorXd RiskEvaluator::unit_values(const Eigen::VectorXd& theta) const {
  require_dimension(theta, dimension_, "risk evaluation");
  if (std::holds_alternative<AucLoss>(loss_))
    throw PreconditionError("per-observation losses are not defined for two-sample data");
  const Eigen::VectorXd linear = design_ * theta;
  Eigen::VectorXd out(linear.size());
  if (feature_basis(loss_)) {
    for (Eigen::Index i = 0; i < linear.size(); ++i)
      out(i) = residual_loss(loss_, response_(i) - linear(i));
    return out;
  }
  if (std::holds_alternative<ZeroOneLinearLoss>(loss_)) {
    for (Eigen::Index i = 0; i < linear.size(); ++i)
      out(i) = (linear(i) > 0.0 ? 1 : 0) != labels_(i) ? 1.0 : 0.0;
    return out;
  }
  for (Eigen::Index i = 0; i < linear.size(); ++i)
    out(i) = mcid_loss(labels_(i), score_(i), linear(i));
  return out;
}

double RiskEvaluator::operator()(const Eigen::VectorXd& theta) const {
  if (std::holds_alternative<AucLoss>(loss_)) {
    require_dimension(theta, dimension_, "risk evaluation");
    // mean of (t - I)^2 = t^2 - 2 t mean(I) + mean(I) since I^2 = I.
    const double t = theta(0);
    return t * t - 2.0 * t * auc_hat_ + auc_hat_;
  }
  const Eigen::VectorXd units = unit_values(theta);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < units.size(); ++i) sum += units(i);
  return sum / static_cast<double>(terms_);
}

double RiskEvaluator::sparse_zero_one(int alpha, std::span<const int> support,
                                      const Eigen::VectorXd& values) const {
  if (!std::holds_alternative<ZeroOneLinearLoss>(loss_))
    throw ShapeError("sparse evaluation is only defined for the zero-one loss");
  if (static_cast<Eigen::Index>(support.size()) != values.size())
    throw ShapeError("support and coefficient lengths differ");
  Eigen::VectorXd margin = alpha * design_.col(0);
  for (std::size_t k = 0; k < support.size(); ++k) {
    const int column = support[k] + 1;
    if (column < 1 || column >= design_.cols())
      throw PreconditionError("support index out of range");
    margin += values(static_cast<Eigen::Index>(k)) * design_.col(column);
  }
  std::size_t errors = 0;
  for (Eigen::Index i = 0; i < margin.size(); ++i)
    errors += ((margin(i) > 0.0 ? 1 : 0) != labels_(i));
  return static_cast<double>(errors) / static_cast<double>(terms_);
}

}  // namespace gibbs
