#include "gibbs/model.hpp"

#include <cmath>
#include <string>

#include "gibbs/error.hpp"
#include "overloaded.hpp"

namespace gibbs {

using detail::overloaded;

namespace {

bool label_ok(int y, LabelSet labels) {
  return labels == LabelSet::PlusMinusOne ? (y == -1 || y == 1)
                                          : (y == 0 || y == 1);
}

}  // namespace

Dataset::Dataset(RegressionData data) : storage_(std::move(data)) {
  const auto& d = std::get<RegressionData>(storage_);
  if (d.y.size() == 0) throw PreconditionError("dataset must be nonempty");
  if (d.x.rows() != d.y.size())
    throw ShapeError("regression data: x has " + std::to_string(d.x.rows()) +
                     " rows but y has " + std::to_string(d.y.size()));
  if (!d.x.allFinite() || !d.y.allFinite())
    throw PreconditionError("regression data contains nonfinite values");
}

Dataset::Dataset(ClassificationData data) : storage_(std::move(data)) {
  const auto& d = std::get<ClassificationData>(storage_);
  if (d.y.size() == 0) throw PreconditionError("dataset must be nonempty");
  if (d.x.rows() != d.y.size())
    throw ShapeError("classification data: x and y lengths differ");
  if (d.z.cols() > 0 && d.z.rows() != d.y.size())
    throw ShapeError("classification data: z and y lengths differ");
  for (Eigen::Index i = 0; i < d.y.size(); ++i)
    if (!label_ok(d.y(i), d.labels))
      throw PreconditionError("label " + std::to_string(d.y(i)) +
                              " outside the declared label set");
  if (!d.x.allFinite() || !d.z.allFinite())
    throw PreconditionError("classification data contains nonfinite values");
}

Dataset::Dataset(TwoSampleData data) : storage_(std::move(data)) {
  const auto& d = std::get<TwoSampleData>(storage_);
  if (d.scores0.empty() || d.scores1.empty())
    throw PreconditionError("two-sample data needs m >= 1 and n >= 1");
  for (double u : d.scores0)
    if (!std::isfinite(u)) throw PreconditionError("nonfinite score");
  for (double u : d.scores1)
    if (!std::isfinite(u)) throw PreconditionError("nonfinite score");
}

Dataset Dataset::from_observations(std::span<const Observation> obs,
                                   LabelSet labels) {
  if (obs.empty()) throw PreconditionError("dataset must be nonempty");
  const auto kind = obs.front().index();
  for (const auto& o : obs)
    if (o.index() != kind)
      throw ShapeError("observations must all be of the same variant");
  const auto n = static_cast<Eigen::Index>(obs.size());

  if (std::holds_alternative<RegPair>(obs.front())) {
    const auto k = std::get<RegPair>(obs.front()).x.size();
    RegressionData d{Eigen::MatrixXd(n, k), Eigen::VectorXd(n)};
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& p = std::get<RegPair>(obs[static_cast<std::size_t>(i)]);
      if (p.x.size() != k) throw ShapeError("predictor dimension varies");
      d.x.row(i) = p.x.transpose();
      d.y(i) = p.y;
    }
    return Dataset(std::move(d));
  }
  if (std::holds_alternative<ClassTriple>(obs.front())) {
    const auto& first = std::get<ClassTriple>(obs.front());
    const auto k = first.x.size();
    const auto p = first.z.size();
    ClassificationData d{Eigen::MatrixXd(n, k), Eigen::VectorXi(n),
                         Eigen::MatrixXd(n, p), labels};
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& t = std::get<ClassTriple>(obs[static_cast<std::size_t>(i)]);
      if (t.x.size() != k || t.z.size() != p)
        throw ShapeError("predictor or covariate dimension varies");
      d.x.row(i) = t.x.transpose();
      d.y(i) = t.y;
      if (p > 0) d.z.row(i) = t.z.transpose();
    }
    return Dataset(std::move(d));
  }
  if (std::holds_alternative<Score>(obs.front())) {
    TwoSampleData d;
    for (const auto& o : obs) {
      const auto& s = std::get<Score>(o);
      if (s.group == 0)
        d.scores0.push_back(s.u);
      else if (s.group == 1)
        d.scores1.push_back(s.u);
      else
        throw PreconditionError("score group must be 0 or 1");
    }
    return Dataset(std::move(d));
  }
  // Pairs: unzip into two equally sized samples.
  TwoSampleData d;
  for (const auto& o : obs) {
    const auto& s = std::get<ScorePair>(o);
    d.scores0.push_back(s.u0);
    d.scores1.push_back(s.u1);
  }
  return Dataset(std::move(d));
}

std::size_t Dataset::size() const {
  return std::visit(
      overloaded{
          [](const RegressionData& d) { return static_cast<std::size_t>(d.y.size()); },
          [](const ClassificationData& d) {
            return static_cast<std::size_t>(d.y.size());
          },
          [](const TwoSampleData& d) { return d.scores0.size() + d.scores1.size(); },
      },
      storage_);
}

std::size_t Dataset::risk_terms() const {
  if (const auto* d = std::get_if<TwoSampleData>(&storage_))
    return d->scores0.size() * d->scores1.size();
  return size();
}

Observation Dataset::observation(std::size_t i) const {
  if (i >= size()) throw PreconditionError("observation index out of range");
  const auto row = static_cast<Eigen::Index>(i);
  return std::visit(
      overloaded{
          [&](const RegressionData& d) -> Observation {
            return RegPair{d.x.row(row).transpose(), d.y(row)};
          },
          [&](const ClassificationData& d) -> Observation {
            Eigen::VectorXd z = d.z.cols() > 0 ? Eigen::VectorXd(d.z.row(row).transpose())
                                               : Eigen::VectorXd();
            return ClassTriple{d.x.row(row).transpose(), d.y(row), z};
          },
          [&](const TwoSampleData& d) -> Observation {
            if (i < d.scores0.size()) return Score{0, d.scores0[i]};
            return Score{1, d.scores1[i - d.scores0.size()]};
          },
      },
      storage_);
}

const RegressionData& Dataset::regression() const {
  if (const auto* d = std::get_if<RegressionData>(&storage_)) return *d;
  throw ShapeError("dataset does not hold (x, y) regression pairs");
}

const ClassificationData& Dataset::classification() const {
  if (const auto* d = std::get_if<ClassificationData>(&storage_)) return *d;
  throw ShapeError("dataset does not hold binary-response triples");
}

const TwoSampleData& Dataset::two_sample() const {
  if (const auto* d = std::get_if<TwoSampleData>(&storage_)) return *d;
  throw ShapeError("dataset does not hold two-sample scores");
}

Dataset concat(const Dataset& a, const Dataset& b) {
  if (a.storage().index() != b.storage().index())
    throw ShapeError("cannot concatenate datasets of different variants");
  auto vstack = [](const Eigen::MatrixXd& top, const Eigen::MatrixXd& bottom) {
    if (top.cols() != bottom.cols()) throw ShapeError("column counts differ");
    Eigen::MatrixXd out(top.rows() + bottom.rows(), top.cols());
    out << top, bottom;
    return out;
  };
  if (a.is_regression()) {
    const auto& x = a.regression();
    const auto& y = b.regression();
    Eigen::VectorXd resp(x.y.size() + y.y.size());
    resp << x.y, y.y;
    return Dataset(RegressionData{vstack(x.x, y.x), resp});
  }
  if (a.is_classification()) {
    const auto& x = a.classification();
    const auto& y = b.classification();
    if (x.labels != y.labels) throw ShapeError("label conventions differ");
    Eigen::VectorXi resp(x.y.size() + y.y.size());
    resp << x.y, y.y;
    return Dataset(
        ClassificationData{vstack(x.x, y.x), resp, vstack(x.z, y.z), x.labels});
  }
  TwoSampleData out = a.two_sample();
  const auto& other = b.two_sample();
  out.scores0.insert(out.scores0.end(), other.scores0.begin(), other.scores0.end());
  out.scores1.insert(out.scores1.end(), other.scores1.begin(), other.scores1.end());
  return Dataset(std::move(out));
}

double eval_function(const FunctionParam& fp, std::span<const double> x) {
  if (fp.beta.size() != basis_size(fp.basis))
    throw ShapeError("coefficient length " + std::to_string(fp.beta.size()) +
                     " does not match basis size " +
                     std::to_string(basis_size(fp.basis)));
  return fp.beta.dot(eval_basis(fp.basis, x));
}

double eval_function(const FunctionParam& fp, double x) {
  return eval_function(fp, std::span<const double>(&x, 1));
}

Eigen::VectorXd ClassifierParam::dense() const {
  Eigen::VectorXd theta(beta.size() + 1);
  theta(0) = alpha;
  theta.tail(beta.size()) = beta;
  return theta;
}

ClassifierParam ClassifierParam::from_dense(const Eigen::VectorXd& theta) {
  if (theta.size() < 1) throw ShapeError("classifier needs at least alpha");
  if (theta(0) != 1.0 && theta(0) != -1.0)
    throw ShapeError("classifier alpha must be -1 or +1");
  return {static_cast<int>(theta(0)), theta.tail(theta.size() - 1)};
}

}  // namespace gibbs
