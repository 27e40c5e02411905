#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "gibbs/basis.hpp"

namespace gibbs {

/// Predictor/response pair.
struct RegPair {
  Eigen::VectorXd x;
  double y = 0.0;
};

/// Label conventions for binary responses.
enum class LabelSet { PlusMinusOne, ZeroOne };

/// Binary response with predictor x and optional covariate z.
struct ClassTriple {
  Eigen::VectorXd x;
  int y = 0;
  Eigen::VectorXd z;
};

/// One classifier score tagged with its group (0 or 1).
struct Score {
  int group = 0;
  double u = 0.0;
};

/// One (group-0, group-1) score pair; the unit of the AUC loss.
struct ScorePair {
  double u0 = 0.0;
  double u1 = 0.0;
};

using Observation = std::variant<RegPair, ClassTriple, Score, ScorePair>;

/// Column-oriented regression sample: row i of x is x_i.
struct RegressionData {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
};

/// Binary-response sample. z may have zero columns.
struct ClassificationData {
  Eigen::MatrixXd x;
  Eigen::VectorXi y;
  Eigen::MatrixXd z;
  LabelSet labels = LabelSet::PlusMinusOne;
};

/// Two independent score samples; m = scores0.size(), n = scores1.size().
struct TwoSampleData {
  std::vector<double> scores0;
  std::vector<double> scores1;
};

/// A homogeneous, validated sample. Immutable once built.
class Dataset {
 public:
  using Storage = std::variant<RegressionData, ClassificationData, TwoSampleData>;

  // Throw PreconditionError/ShapeError when the invariants fail (empty data,
  // mismatched lengths, labels outside the declared set, nonfinite values).
  explicit Dataset(RegressionData data);
  explicit Dataset(ClassificationData data);
  explicit Dataset(TwoSampleData data);

  /// Builds a dataset from a list of observations of one variant.
  static Dataset from_observations(std::span<const Observation> observations,
                                   LabelSet labels = LabelSet::PlusMinusOne);

  /// Number of observations (m + n for two-sample data).
  std::size_t size() const;

  /// Number of terms the empirical risk averages over: n for iid data and
  /// m * n (all cross-group pairs) for two-sample data.
  std::size_t risk_terms() const;

  Observation observation(std::size_t i) const;

  const Storage& storage() const { return storage_; }
  const RegressionData& regression() const;
  const ClassificationData& classification() const;
  const TwoSampleData& two_sample() const;

  bool is_regression() const { return storage_.index() == 0; }
  bool is_classification() const { return storage_.index() == 1; }
  bool is_two_sample() const { return storage_.index() == 2; }

 private:
  Storage storage_;
};

/// Concatenates two datasets of the same variant.
Dataset concat(const Dataset& a, const Dataset& b);

/// theta(x) = beta' f(x).
struct FunctionParam {
  BasisSpec basis;
  Eigen::VectorXd beta;
};

double eval_function(const FunctionParam& fp, std::span<const double> x);
double eval_function(const FunctionParam& fp, double x);

/// Linear classifier (alpha, beta) with alpha in {-1, +1}.
struct ClassifierParam {
  int alpha = 1;
  Eigen::VectorXd beta;

  /// Dense theta = (alpha, beta).
  Eigen::VectorXd dense() const;
  static ClassifierParam from_dense(const Eigen::VectorXd& theta);
};

}  // namespace gibbs
