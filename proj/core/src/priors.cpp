#include "gibbs/priors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "gibbs/error.hpp"
#include "overloaded.hpp"

namespace gibbs {

using detail::overloaded;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_dim(const Eigen::VectorXd& theta, int dim, const char* what) {
  if (theta.size() != dim)
    throw ShapeError(std::string(what) + " prior has dimension " +
                     std::to_string(dim) + " but theta has length " +
                     std::to_string(theta.size()));
}

double normal_log_density(const Eigen::VectorXd& x, double mean, double sd) {
  const double log_norm = -std::log(sd) - 0.5 * std::log(2.0 * std::numbers::pi);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double z = (x(i) - mean) / sd;
    sum += log_norm - 0.5 * z * z;
  }
  return sum;
}

double laplace_log_density(const Eigen::VectorXd& x, double rate) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    sum += std::log(0.5 * rate) - rate * std::abs(x(i));
  return sum;
}

double log_binomial(int q, int s) {
  return std::lgamma(q + 1.0) - std::lgamma(s + 1.0) - std::lgamma(q - s + 1.0);
}

// log of sum_{t=0}^{q} r^t with log r = -log(c q^a) < 0 typically; computed
// as a log-sum-exp so large q cannot overflow.
double log_size_normalizer(const SpikeSlab& p) {
  const double step = -(std::log(p.c) + p.a * std::log(static_cast<double>(p.q)));
  const double top = step >= 0.0 ? step * p.q : 0.0;
  double sum = 0.0;
  for (int t = 0; t <= p.q; ++t) sum += std::exp(step * t - top);
  return top + std::log(sum);
}

}  // namespace

double SpikeSlab::default_lambda(int q) {
  return q >= 3 ? std::sqrt(std::log(static_cast<double>(q))) : 1.0;
}

Eigen::VectorXd SparseParam::dense_beta(int q) const {
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(q);
  for (std::size_t k = 0; k < support.size(); ++k)
    beta(support[k]) = values(static_cast<Eigen::Index>(k));
  return beta;
}

Eigen::VectorXd SparseParam::dense(int q) const {
  Eigen::VectorXd theta(q + 1);
  theta(0) = alpha;
  theta.tail(q) = dense_beta(q);
  return theta;
}

void validate(const PriorSpec& prior) {
  std::visit(overloaded{
                 [](const GaussianIid& p) {
                   if (!(p.sd > 0.0) || p.dim < 1)
                     throw ShapeError("Gaussian prior needs sd > 0 and dim >= 1");
                 },
                 [](const LaplaceIid& p) {
                   if (!(p.rate > 0.0) || p.dim < 1)
                     throw ShapeError("Laplace prior needs rate > 0 and dim >= 1");
                 },
                 [](const UniformBox& p) {
                   if (!(p.lo < p.hi) || p.dim < 1)
                     throw ShapeError("uniform prior needs lo < hi and dim >= 1");
                 },
                 [](const SpikeSlab& p) {
                   if (p.q < 1 || !(p.a > 0.0) || !(p.c > 0.0) || !(p.lambda > 0.0))
                     throw ShapeError("spike-and-slab prior needs q >= 1 and a, c, lambda > 0");
                 },
                 [](const HierarchicalBasis& p) {
                   if (!(p.sd > 0.0) || !(p.j_prior.mean > 0.0) || p.j_prior.min_j < 0)
                     throw ShapeError("hierarchical prior needs sd > 0 and a positive count mean");
                 },
                 [](const Truncated& p) {
                   if (!p.inner) throw ShapeError("truncated prior needs an inner prior");
                   if (!(p.bound > 0.0)) throw ShapeError("truncation bound must be positive");
                   validate(*p.inner);
                 },
             },
             prior.kind);
}

std::string prior_name(const PriorSpec& prior) {
  return std::visit(overloaded{
                        [](const GaussianIid&) { return std::string("gaussian"); },
                        [](const LaplaceIid&) { return std::string("laplace"); },
                        [](const UniformBox&) { return std::string("uniform"); },
                        [](const SpikeSlab&) { return std::string("spike_slab"); },
                        [](const HierarchicalBasis&) { return std::string("hierarchical"); },
                        [](const Truncated&) { return std::string("truncated"); },
                    },
                    prior.kind);
}

double spike_slab_log_size_mass(const SpikeSlab& p, int size) {
  if (size < 0 || size > p.q) return kNegInf;
  const double step = -(std::log(p.c) + p.a * std::log(static_cast<double>(p.q)));
  return step * size - log_size_normalizer(p);
}

double spike_slab_log_mass(const SpikeSlab& p, std::span<const int> support) {
  std::vector<int> s(support.begin(), support.end());
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end())
    throw PreconditionError("configuration has duplicate indices");
  for (int k : s)
    if (k < 0 || k >= p.q)
      throw PreconditionError("configuration index " + std::to_string(k) +
                              " outside 0.." + std::to_string(p.q - 1));
  const int size = static_cast<int>(s.size());
  return spike_slab_log_size_mass(p, size) - log_binomial(p.q, size);
}

double log_prior(const SpikeSlab& p, const SparseParam& theta) {
  if (theta.alpha != 1 && theta.alpha != -1) return kNegInf;
  if (static_cast<Eigen::Index>(theta.support.size()) != theta.values.size())
    throw ShapeError("support and coefficient lengths differ");
  return std::log(0.5) + spike_slab_log_mass(p, theta.support) +
         laplace_log_density(theta.values, p.lambda);
}

double poisson_log_mass(const PoissonCount& p, int J) {
  if (J < p.min_j) return kNegInf;
  const double log_pmf = -p.mean + J * std::log(p.mean) - std::lgamma(J + 1.0);
  if (p.min_j == 0) return log_pmf;
  // Mass of {J >= min_j} = 1 - P(J < min_j).
  double below = 0.0;
  for (int k = 0; k < p.min_j; ++k)
    below += std::exp(-p.mean + k * std::log(p.mean) - std::lgamma(k + 1.0));
  return log_pmf - std::log1p(-below);
}

double hierarchical_log_density(const HierarchicalBasis& p, int J,
                                const Eigen::VectorXd& beta) {
  if (beta.size() != J)
    throw ShapeError("hierarchical prior: beta length differs from J");
  const double log_count = poisson_log_mass(p.j_prior, J);
  if (log_count == kNegInf) return kNegInf;
  return log_count + normal_log_density(beta, p.mean, p.sd);
}

double sup_norm(const Truncated& p, const Eigen::VectorXd& theta) {
  const BasisSpec* basis = p.basis ? &*p.basis : nullptr;
  BasisSpec from_factory;
  if (!basis) {
    if (const auto* h = std::get_if<HierarchicalBasis>(&p.inner->kind);
        h && h->basis_factory) {
      from_factory = h->basis_factory(static_cast<int>(theta.size()));
      basis = &from_factory;
    }
  }
  if (!basis || p.grid.rows() == 0) return theta.cwiseAbs().maxCoeff();
  return (design_matrix(*basis, p.grid) * theta).cwiseAbs().maxCoeff();
}

double log_prior(const PriorSpec& prior, const Eigen::VectorXd& theta) {
  return std::visit(
      overloaded{
          [&](const GaussianIid& p) {
            require_dim(theta, p.dim, "Gaussian");
            return normal_log_density(theta, p.mean, p.sd);
          },
          [&](const LaplaceIid& p) {
            require_dim(theta, p.dim, "Laplace");
            return laplace_log_density(theta, p.rate);
          },
          [&](const UniformBox& p) {
            require_dim(theta, p.dim, "uniform");
            for (Eigen::Index i = 0; i < theta.size(); ++i)
              if (theta(i) < p.lo || theta(i) > p.hi) return kNegInf;
            return -p.dim * std::log(p.hi - p.lo);
          },
          [&](const SpikeSlab& p) {
            const bool classifier = theta.size() == p.q + 1;
            if (!classifier && theta.size() != p.q)
              throw ShapeError("spike-and-slab prior expects length q or q + 1");
            double base = 0.0;
            Eigen::VectorXd beta = theta;
            if (classifier) {
              if (theta(0) != 1.0 && theta(0) != -1.0) return kNegInf;
              base = std::log(0.5);
              beta = theta.tail(p.q);
            }
            std::vector<int> support;
            std::vector<double> values;
            for (int k = 0; k < p.q; ++k)
              if (beta(k) != 0.0) {
                support.push_back(k);
                values.push_back(beta(k));
              }
            const Eigen::Map<const Eigen::VectorXd> v(values.data(),
                                                      static_cast<Eigen::Index>(values.size()));
            return base + spike_slab_log_mass(p, support) + laplace_log_density(v, p.lambda);
          },
          [&](const HierarchicalBasis& p) {
            return hierarchical_log_density(p, static_cast<int>(theta.size()), theta);
          },
          [&](const Truncated& p) {
            if (sup_norm(p, theta) > p.bound) return kNegInf;
            return log_prior(*p.inner, theta);
          },
      },
      prior.kind);
}

bool is_normalized(const PriorSpec& prior) {
  return !std::holds_alternative<Truncated>(prior.kind);
}

int sample_count(const PoissonCount& p, Rng& rng) {
  for (;;) {
    const auto J = static_cast<int>(rng.poisson(p.mean));
    if (J >= p.min_j) return J;
  }
}

SparseParam sample_sparse(const SpikeSlab& p, Rng& rng) {
  validate(PriorSpec{p});
  // Size by inversion of the truncated geometric.
  const double u = rng.uniform();
  double cdf = 0.0;
  int size = p.q;
  for (int s = 0; s <= p.q; ++s) {
    cdf += std::exp(spike_slab_log_size_mass(p, s));
    if (u < cdf) {
      size = s;
      break;
    }
  }
  // Uniform subset of that size: partial Fisher-Yates.
  std::vector<int> index(static_cast<std::size_t>(p.q));
  std::iota(index.begin(), index.end(), 0);
  for (int k = 0; k < size; ++k) {
    const auto j = k + static_cast<int>(rng.below(static_cast<std::uint64_t>(p.q - k)));
    std::swap(index[static_cast<std::size_t>(k)], index[static_cast<std::size_t>(j)]);
  }
  SparseParam out;
  out.alpha = (rng() >> 63) ? 1 : -1;
  out.support.assign(index.begin(), index.begin() + size);
  std::sort(out.support.begin(), out.support.end());
  out.values.resize(size);
  for (int k = 0; k < size; ++k) out.values(k) = rng.laplace(p.lambda);
  return out;
}

Eigen::VectorXd sample_prior(const PriorSpec& prior, Rng& rng) {
  validate(prior);
  return std::visit(
      overloaded{
          [&](const GaussianIid& p) {
            Eigen::VectorXd x(p.dim);
            for (int i = 0; i < p.dim; ++i) x(i) = rng.normal(p.mean, p.sd);
            return x;
          },
          [&](const LaplaceIid& p) {
            Eigen::VectorXd x(p.dim);
            for (int i = 0; i < p.dim; ++i) x(i) = rng.laplace(p.rate);
            return x;
          },
          [&](const UniformBox& p) {
            Eigen::VectorXd x(p.dim);
            for (int i = 0; i < p.dim; ++i) x(i) = rng.uniform(p.lo, p.hi);
            return x;
          },
          [&](const SpikeSlab& p) { return sample_sparse(p, rng).dense_beta(p.q); },
          [&](const HierarchicalBasis& p) {
            const int J = sample_count(p.j_prior, rng);
            Eigen::VectorXd x(J);
            for (int i = 0; i < J; ++i) x(i) = rng.normal(p.mean, p.sd);
            return x;
          },
          [&](const Truncated& p) {
            constexpr std::uint64_t kMaxAttempts = 1'000'000;
            for (std::uint64_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
              Eigen::VectorXd x = sample_prior(*p.inner, rng);
              if (sup_norm(p, x) <= p.bound) return x;
            }
            throw DegenerateError("truncated prior: no draw within the sup-norm bound in 1e6 attempts");
          },
      },
      prior.kind);
}

double coordinate_scale(const PriorSpec& prior) {
  return std::visit(overloaded{
                        [](const GaussianIid& p) { return p.sd; },
                        [](const LaplaceIid& p) { return std::sqrt(2.0) / p.rate; },
                        [](const UniformBox& p) { return (p.hi - p.lo) / std::sqrt(12.0); },
                        [](const SpikeSlab& p) { return std::sqrt(2.0) / p.lambda; },
                        [](const HierarchicalBasis& p) { return p.sd; },
                        [](const Truncated& p) { return coordinate_scale(*p.inner); },
                    },
                    prior.kind);
}

}  // namespace gibbs
