#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "gibbs/basis.hpp"
#include "gibbs/rng.hpp"

namespace gibbs {

/// dim independent N(mean, sd^2) coordinates.
struct GaussianIid {
  double mean = 0.0;
  double sd = 1.0;
  int dim = 1;
};

/// dim independent Laplace(rate) coordinates, density (rate/2) e^{-rate|b|}.
struct LaplaceIid {
  double rate = 1.0;
  int dim = 1;
};

/// dim independent Uniform(lo, hi) coordinates.
struct UniformBox {
  double lo = 0.0;
  double hi = 1.0;
  int dim = 1;
};

/// Sparse configuration prior on beta in R^q:
///   pi(S) = C(q, |S|)^-1 f(|S|),  f(s) proportional to (c q^a)^-s on 0..q,
///   beta_S | S  ~  prod_{k in S} Laplace(lambda).
/// Applied to a classifier theta = (alpha, beta) of length q + 1 it also
/// carries the uniform prior on alpha in {-1, +1}.
struct SpikeSlab {
  int q = 1;
  double a = 1.0;
  double c = 1.0;
  double lambda = 1.0;

  /// lambda = sqrt(log q), floored at 1 for tiny q.
  static double default_lambda(int q);
};

/// Poisson(mean) marginal for the number of basis functions, restricted to
/// J >= min_j and renormalized (no renormalization when min_j = 0).
struct PoissonCount {
  double mean = 5.0;
  int min_j = 1;
};

/// pi(J) * N(mean, sd^2)^J over beta_J; the basis for J functions comes from
/// basis_factory. J is fixed within a chain; the length of theta is J.
struct HierarchicalBasis {
  PoissonCount j_prior;
  double mean = 0.0;
  double sd = 1.0;
  std::function<BasisSpec(int)> basis_factory;
};

struct PriorSpec;

/// Restriction of `inner` to {theta : ||theta||_inf <= bound}, the sup norm
/// taken over the rows of `grid` through `basis` (or over the coordinates
/// of theta when no basis is set, or through the hierarchical factory).
/// The density is left unnormalized; the normalizer cancels in MH.
struct Truncated {
  std::shared_ptr<const PriorSpec> inner;
  double bound = 1.0;
  std::optional<BasisSpec> basis;
  Eigen::MatrixXd grid;
};

struct PriorSpec {
  std::variant<GaussianIid, LaplaceIid, UniformBox, SpikeSlab, HierarchicalBasis,
               Truncated>
      kind;
};

/// Sparse classifier parameter: alpha, sorted 0-based support S of beta and
/// its nonzero values.
struct SparseParam {
  int alpha = 1;
  std::vector<int> support;
  Eigen::VectorXd values;

  Eigen::VectorXd dense_beta(int q) const;
  /// (alpha, beta) of length q + 1.
  Eigen::VectorXd dense(int q) const;
};

void validate(const PriorSpec& prior);
std::string prior_name(const PriorSpec& prior);

/// Log density (continuous part) plus log mass (discrete part); -inf
/// outside the support. Truncated priors report the unnormalized density.
double log_prior(const PriorSpec& prior, const Eigen::VectorXd& theta);

/// False for priors whose log_prior omits a normalizing constant.
bool is_normalized(const PriorSpec& prior);

/// log pi(S) for a 0-based index set. Throws PreconditionError on indices
/// outside 0..q-1 or duplicates.
double spike_slab_log_mass(const SpikeSlab& prior, std::span<const int> support);

/// log f(s) for configuration size s.
double spike_slab_log_size_mass(const SpikeSlab& prior, int size);

double log_prior(const SpikeSlab& prior, const SparseParam& theta);

/// log pi(J) + log N(beta; mean, sd^2 I_J); -inf when J is outside the
/// support of the count prior.
double hierarchical_log_density(const HierarchicalBasis& prior, int J,
                                const Eigen::VectorXd& beta);
double poisson_log_mass(const PoissonCount& prior, int J);

/// Exact draw. Spike-and-slab draws are returned dense, beta only (length q).
/// Truncated priors use rejection and throw DegenerateError when 10^6
/// attempts produce no acceptance.
Eigen::VectorXd sample_prior(const PriorSpec& prior, Rng& rng);
SparseParam sample_sparse(const SpikeSlab& prior, Rng& rng);
int sample_count(const PoissonCount& prior, Rng& rng);

/// Prior standard deviation of one coordinate (used to size proposals).
double coordinate_scale(const PriorSpec& prior);

/// sup-norm of theta as seen by a truncated prior.
double sup_norm(const Truncated& prior, const Eigen::VectorXd& theta);

}  // namespace gibbs
