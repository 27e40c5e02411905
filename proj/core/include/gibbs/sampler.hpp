#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gibbs/losses.hpp"
#include "gibbs/model.hpp"
#include "gibbs/priors.hpp"
#include "gibbs/rng.hpp"

namespace gibbs {

/// Pi_n(theta) proportional to exp{-omega N R_n(theta)} Pi(theta), with N the
/// number of risk terms (n, or m*n for two-sample data).
///
/// omega = 0 is accepted and gives the prior back. Copies share the data.
class GibbsTarget {
 public:
  GibbsTarget(LossSpec loss, PriorSpec prior, Dataset data, double omega);

  double log_unnormalized(const Eigen::VectorXd& theta) const;
  double log_unnormalized(const SparseParam& theta) const;

  /// omega * N * R_n(theta).
  double risk_term(const Eigen::VectorXd& theta) const;
  double risk_term(const SparseParam& theta) const;

  const LossSpec& loss() const { return state_->risk.loss(); }
  const PriorSpec& prior() const { return state_->prior; }
  const Dataset& data() const { return state_->data; }
  double omega() const { return omega_; }
  int dimension() const { return state_->risk.dimension(); }
  std::size_t risk_terms() const { return state_->risk.terms(); }
  std::string describe() const;

  /// Same loss, prior and data at another learning rate.
  GibbsTarget with_omega(double omega) const;

 private:
  struct State {
    PriorSpec prior;
    Dataset data;
    RiskEvaluator risk;
  };
  GibbsTarget(std::shared_ptr<const State> state, double omega);

  std::shared_ptr<const State> state_;
  double omega_ = 1.0;
};

/// Probabilities of the sparse kernel's moves. add + remove + within = 1.
struct SparseMoves {
  double add = 1.0 / 3.0;
  double remove = 1.0 / 3.0;
  double within = 1.0 / 3.0;
  double alpha_flip = 0.05;
};

struct MHConfig {
  std::size_t steps = 50000;
  std::size_t burn_in = 10000;
  std::size_t thin = 5;
  /// Per-coordinate random-walk sd; a single entry is broadcast, an empty
  /// vector selects default_proposal_scale.
  Eigen::VectorXd proposal_scale;
  std::uint64_t seed = 0;
  std::optional<Eigen::VectorXd> init;
  std::size_t max_init_attempts = 1000;
  SparseMoves moves;
};

/// Throws ConfigError unless steps > burn_in and thin >= 1, scales are
/// positive and the move probabilities sum to 1.
void validate(const MHConfig& config);

/// Number of draws a chain keeps: (steps - burn_in) / thin.
std::size_t kept_draws(const MHConfig& config);

template <typename Draw>
struct BasicChain {
  std::vector<Draw> draws;
  std::vector<double> log_density;
  std::size_t accepted = 0;
  std::size_t steps = 0;
  std::uint64_t seed = 0;
  double omega = 0.0;
  std::string target;

  double acceptance_rate() const {
    return steps == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(steps);
  }
};

using Chain = BasicChain<Eigen::VectorXd>;
using SparseChain = BasicChain<SparseParam>;

/// 2.4 / sqrt(J) times the prior's coordinate sd.
double default_proposal_scale(const GibbsTarget& target);

/// min(1, e^delta).
double acceptance_probability(double log_ratio);

/// Metropolis decision. Always consumes one uniform.
bool metropolis_accept(double log_ratio, Rng& rng);

/// Symmetric Gaussian random-walk Metropolis. Throws InitializationError
/// when no starting point with finite density is found.
Chain mh_run(const GibbsTarget& target, const MHConfig& config);

/// Add / remove / within-model kernel over (alpha, S, beta_S) for a target
/// whose prior is SpikeSlab. theta has length q + 1 (classifier) or q.
SparseChain ss_mh_run(const GibbsTarget& target, const MHConfig& config);

/// Dense copies of the draws (length q + 1 or q, as the target expects).
Chain densify(const SparseChain& chain, int q, bool classifier);

Eigen::VectorXd posterior_mean(const Chain& chain);

/// Equal-tailed interval from type-7 quantiles at (1 -+ level) / 2.
std::pair<double, double> credible_interval(const Chain& chain, int coordinate, double level);
std::pair<double, double> credible_interval(
    const Chain& chain, const std::function<double(const Eigen::VectorXd&)>& functional,
    double level);

/// Trace of one coordinate.
std::vector<double> coordinate_trace(const Chain& chain, int coordinate);

}  // namespace gibbs
