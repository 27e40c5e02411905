#include "gibbs/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gibbs/error.hpp"
#include "gibbs/stats.hpp"

namespace gibbs {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

const SpikeSlab& require_spike_slab(const GibbsTarget& target) {
  const auto* p = std::get_if<SpikeSlab>(&target.prior().kind);
  if (!p) throw ShapeError("sparse sampler needs a spike-and-slab prior");
  return *p;
}

bool classifier_layout(const SpikeSlab& p, const GibbsTarget& target) {
  if (target.dimension() == p.q + 1) return true;
  if (target.dimension() == p.q) return false;
  throw ShapeError("spike-and-slab q = " + std::to_string(p.q) +
                   " does not fit a parameter of length " +
                   std::to_string(target.dimension()));
}

// A prior draw of the target's dimension. Hierarchical priors are sampled
// with J held at the target's dimension.
Eigen::VectorXd draw_with_dimension(const PriorSpec& prior, int dim, Rng& rng) {
  if (const auto* h = std::get_if<HierarchicalBasis>(&prior.kind)) {
    Eigen::VectorXd x(dim);
    for (int i = 0; i < dim; ++i) x(i) = rng.normal(h->mean, h->sd);
    return x;
  }
  if (const auto* t = std::get_if<Truncated>(&prior.kind);
      t && std::holds_alternative<HierarchicalBasis>(t->inner->kind)) {
    constexpr int kAttempts = 100000;
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
      Eigen::VectorXd x = draw_with_dimension(*t->inner, dim, rng);
      if (sup_norm(*t, x) <= t->bound) return x;
    }
    throw DegenerateError("truncated prior: no draw within the bound");
  }
  if (const auto* s = std::get_if<SpikeSlab>(&prior.kind); s && dim == s->q + 1)
    return sample_sparse(*s, rng).dense(s->q);
  return sample_prior(prior, rng);
}

Eigen::VectorXd broadcast_scale(const MHConfig& config, const GibbsTarget& target) {
  const int dim = target.dimension();
  if (config.proposal_scale.size() == 0)
    return Eigen::VectorXd::Constant(dim, default_proposal_scale(target));
  if (config.proposal_scale.size() == 1)
    return Eigen::VectorXd::Constant(dim, config.proposal_scale(0));
  if (config.proposal_scale.size() != dim)
    throw ShapeError("proposal scale has " + std::to_string(config.proposal_scale.size()) +
                     " entries for a parameter of length " + std::to_string(dim));
  return config.proposal_scale;
}

template <typename Draw>
BasicChain<Draw> empty_chain(const GibbsTarget& target, const MHConfig& config) {
  BasicChain<Draw> chain;
  chain.steps = config.steps;
  chain.seed = config.seed;
  chain.omega = target.omega();
  chain.target = target.describe();
  chain.draws.reserve(kept_draws(config));
  chain.log_density.reserve(kept_draws(config));
  return chain;
}

bool keep_step(const MHConfig& config, std::size_t step) {
  return step >= config.burn_in && (step - config.burn_in + 1) % config.thin == 0;
}

// The r-th index in 0..q-1 that is not in the sorted support.
int nth_outside(const std::vector<int>& support, int r) {
  int candidate = r;
  for (int member : support) {
    if (member <= candidate)
      ++candidate;
    else
      break;
  }
  return candidate;
}

SparseParam sparse_from_dense(const Eigen::VectorXd& theta, int q, bool classifier) {
  SparseParam out;
  Eigen::VectorXd beta = theta;
  if (classifier) {
    if (theta(0) != 1.0 && theta(0) != -1.0)
      throw InitializationError("classifier init needs alpha in {-1, +1}");
    out.alpha = theta(0) > 0.0 ? 1 : -1;
    beta = theta.tail(q);
  }
  std::vector<double> values;
  for (int k = 0; k < q; ++k)
    if (beta(k) != 0.0) {
      out.support.push_back(k);
      values.push_back(beta(k));
    }
  out.values = Eigen::Map<const Eigen::VectorXd>(values.data(),
                                                 static_cast<Eigen::Index>(values.size()));
  return out;
}

double laplace_log_density(double x, double rate) {
  return std::log(0.5 * rate) - rate * std::abs(x);
}

}  // namespace

GibbsTarget::GibbsTarget(LossSpec loss, PriorSpec prior, Dataset data, double omega)
    : omega_(omega) {
  if (!(omega >= 0.0) || !std::isfinite(omega))
    throw PreconditionError("learning rate must be finite and >= 0");
  validate(loss);
  validate(prior);
  RiskEvaluator risk(std::move(loss), data);
  state_ = std::make_shared<const State>(State{std::move(prior), std::move(data), std::move(risk)});
  if (state_->risk.dimension() <= 0)
    throw ShapeError("loss " + loss_name(state_->risk.loss()) + " does not fit the data");
}

GibbsTarget::GibbsTarget(std::shared_ptr<const State> state, double omega)
    : state_(std::move(state)), omega_(omega) {
  if (!(omega >= 0.0) || !std::isfinite(omega))
    throw PreconditionError("learning rate must be finite and >= 0");
}

GibbsTarget GibbsTarget::with_omega(double omega) const { return GibbsTarget(state_, omega); }

double GibbsTarget::risk_term(const Eigen::VectorXd& theta) const {
  if (theta.size() != dimension())
    throw ShapeError("parameter has length " + std::to_string(theta.size()) + ", expected " +
                     std::to_string(dimension()));
  return omega_ * static_cast<double>(risk_terms()) * state_->risk(theta);
}

double GibbsTarget::risk_term(const SparseParam& theta) const {
  const SpikeSlab& p = require_spike_slab(*this);
  const bool classifier = classifier_layout(p, *this);
  if (classifier && std::holds_alternative<ZeroOneLinearLoss>(loss()))
    return omega_ * static_cast<double>(risk_terms()) *
           state_->risk.sparse_zero_one(theta.alpha, theta.support, theta.values);
  return risk_term(classifier ? theta.dense(p.q) : theta.dense_beta(p.q));
}

double GibbsTarget::log_unnormalized(const Eigen::VectorXd& theta) const {
  if (theta.size() != dimension())
    throw ShapeError("parameter has length " + std::to_string(theta.size()) + ", expected " +
                     std::to_string(dimension()));
  const double lp = log_prior(state_->prior, theta);
  if (lp == kNegInf || omega_ == 0.0) return lp;
  return -risk_term(theta) + lp;
}

double GibbsTarget::log_unnormalized(const SparseParam& theta) const {
  const SpikeSlab& p = require_spike_slab(*this);
  const bool classifier = classifier_layout(p, *this);
  double lp = log_prior(p, theta);
  if (lp == kNegInf) return lp;
  if (!classifier) lp -= std::log(0.5);
  if (omega_ == 0.0) return lp;
  return -risk_term(theta) + lp;
}

std::string GibbsTarget::describe() const {
  return "loss=" + loss_name(loss()) + " prior=" + prior_name(prior()) +
         " dim=" + std::to_string(dimension()) + " terms=" + std::to_string(risk_terms());
}

void validate(const MHConfig& config) {
  if (config.steps <= config.burn_in) throw ConfigError("mh: steps must exceed burn_in");
  if (config.thin < 1) throw ConfigError("mh: thin must be >= 1");
  for (Eigen::Index i = 0; i < config.proposal_scale.size(); ++i)
    if (!(config.proposal_scale(i) > 0.0) || !std::isfinite(config.proposal_scale(i)))
      throw ConfigError("mh: proposal scales must be positive");
  const SparseMoves& m = config.moves;
  if (m.add < 0.0 || m.remove < 0.0 || m.within < 0.0 ||
      std::abs(m.add + m.remove + m.within - 1.0) > 1e-12)
    throw ConfigError("mh: move probabilities must be nonnegative and sum to 1");
  if (m.alpha_flip < 0.0 || m.alpha_flip > 1.0)
    throw ConfigError("mh: alpha flip probability must lie in [0, 1]");
}

std::size_t kept_draws(const MHConfig& config) {
  return (config.steps - config.burn_in) / config.thin;
}

double default_proposal_scale(const GibbsTarget& target) {
  return 2.4 / std::sqrt(static_cast<double>(target.dimension())) *
         coordinate_scale(target.prior());
}

double acceptance_probability(double log_ratio) {
  if (std::isnan(log_ratio)) return 0.0;
  return log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
}

bool metropolis_accept(double log_ratio, Rng& rng) {
  return rng.uniform() < acceptance_probability(log_ratio);
}

Chain mh_run(const GibbsTarget& target, const MHConfig& config) {
  validate(config);
  const Eigen::VectorXd scale = broadcast_scale(config, target);
  const int dim = target.dimension();
  Rng rng(config.seed, 0);

  Eigen::VectorXd current;
  double current_lp = kNegInf;
  if (config.init) {
    current = *config.init;
    current_lp = target.log_unnormalized(current);
    if (!std::isfinite(current_lp))
      throw InitializationError("supplied initial point has zero posterior density");
  } else {
    for (std::size_t attempt = 0; attempt < config.max_init_attempts; ++attempt) {
      try {
        current = draw_with_dimension(target.prior(), dim, rng);
      } catch (const DegenerateError& e) {
        throw InitializationError(e.what());
      }
      if (current.size() != dim) continue;
      current_lp = target.log_unnormalized(current);
      if (std::isfinite(current_lp)) break;
    }
    if (!std::isfinite(current_lp))
      throw InitializationError("no prior draw with finite posterior density in " +
                                std::to_string(config.max_init_attempts) + " attempts");
  }

  Chain chain = empty_chain<Eigen::VectorXd>(target, config);
  Eigen::VectorXd proposal(dim);
  for (std::size_t step = 0; step < config.steps; ++step) {
    for (int i = 0; i < dim; ++i) proposal(i) = current(i) + scale(i) * rng.normal();
    const double proposal_lp = target.log_unnormalized(proposal);
    if (metropolis_accept(proposal_lp - current_lp, rng)) {
      current = proposal;
      current_lp = proposal_lp;
      ++chain.accepted;
    }
    if (keep_step(config, step)) {
      chain.draws.push_back(current);
      chain.log_density.push_back(current_lp);
    }
  }
  return chain;
}

SparseChain ss_mh_run(const GibbsTarget& target, const MHConfig& config) {
  validate(config);
  const SpikeSlab& prior = require_spike_slab(target);
  const bool classifier = classifier_layout(prior, target);
  const int q = prior.q;
  if (q < 1) throw PreconditionError("sparse sampler needs q >= 1");
  const double walk_scale =
      config.proposal_scale.size() > 0 ? config.proposal_scale(0) : std::sqrt(2.0) / prior.lambda;
  const SparseMoves& moves = config.moves;
  Rng rng(config.seed, 0);

  SparseParam current;
  double current_lp = kNegInf;
  if (config.init) {
    if (config.init->size() != target.dimension())
      throw ShapeError("initial point has the wrong length");
    current = sparse_from_dense(*config.init, q, classifier);
    current_lp = target.log_unnormalized(current);
    if (!std::isfinite(current_lp))
      throw InitializationError("supplied initial point has zero posterior density");
  } else {
    for (std::size_t attempt = 0; attempt < config.max_init_attempts; ++attempt) {
      current = sample_sparse(prior, rng);
      if (!classifier) current.alpha = 1;
      current_lp = target.log_unnormalized(current);
      if (std::isfinite(current_lp)) break;
    }
    if (!std::isfinite(current_lp))
      throw InitializationError("no prior draw with finite posterior density in " +
                                std::to_string(config.max_init_attempts) + " attempts");
  }

  SparseChain chain = empty_chain<SparseParam>(target, config);
  for (std::size_t step = 0; step < config.steps; ++step) {
    SparseParam proposal = current;
    double log_q_ratio = 0.0;  // log q(current | proposal) - log q(proposal | current)
    bool valid = true;
    const int size = static_cast<int>(current.support.size());
    const double u = rng.uniform();

    if (u < moves.add) {
      if (size == q) {
        valid = false;
      } else {
        const int index = nth_outside(
            current.support, static_cast<int>(rng.below(static_cast<std::uint64_t>(q - size))));
        const double value = rng.laplace(prior.lambda);
        const auto pos = static_cast<Eigen::Index>(
            std::lower_bound(current.support.begin(), current.support.end(), index) -
            current.support.begin());
        proposal.support.insert(proposal.support.begin() + pos, index);
        Eigen::VectorXd values(size + 1);
        values << current.values.head(pos), value, current.values.tail(size - pos);
        proposal.values = values;
        log_q_ratio = std::log(moves.remove / (size + 1.0)) -
                      std::log(moves.add / static_cast<double>(q - size)) -
                      laplace_log_density(value, prior.lambda);
        if (moves.remove == 0.0) valid = false;
      }
    } else if (u < moves.add + moves.remove) {
      if (size == 0) {
        valid = false;
      } else {
        const auto pos = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(size)));
        const double value = current.values(pos);
        proposal.support.erase(proposal.support.begin() + pos);
        Eigen::VectorXd values(size - 1);
        values << current.values.head(pos), current.values.tail(size - 1 - pos);
        proposal.values = values;
        log_q_ratio = std::log(moves.add / static_cast<double>(q - size + 1)) +
                      laplace_log_density(value, prior.lambda) -
                      std::log(moves.remove / static_cast<double>(size));
        if (moves.add == 0.0) valid = false;
      }
    } else {
      for (Eigen::Index k = 0; k < proposal.values.size(); ++k)
        proposal.values(k) += walk_scale * rng.normal();
    }
    if (classifier && rng.uniform() < moves.alpha_flip) proposal.alpha = -proposal.alpha;

    double proposal_lp = kNegInf;
    if (valid) proposal_lp = target.log_unnormalized(proposal);
    const bool accept = metropolis_accept(proposal_lp - current_lp + log_q_ratio, rng);
    if (valid && accept) {
      current = std::move(proposal);
      current_lp = proposal_lp;
      ++chain.accepted;
    }
    if (keep_step(config, step)) {
      chain.draws.push_back(current);
      chain.log_density.push_back(current_lp);
    }
  }
  return chain;
}

Chain densify(const SparseChain& chain, int q, bool classifier) {
  Chain out;
  out.accepted = chain.accepted;
  out.steps = chain.steps;
  out.seed = chain.seed;
  out.omega = chain.omega;
  out.target = chain.target;
  out.log_density = chain.log_density;
  out.draws.reserve(chain.draws.size());
  for (const SparseParam& d : chain.draws)
    out.draws.push_back(classifier ? d.dense(q) : d.dense_beta(q));
  return out;
}

Eigen::VectorXd posterior_mean(const Chain& chain) {
  if (chain.draws.empty()) throw PreconditionError("posterior mean of an empty chain");
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(chain.draws.front().size());
  for (const Eigen::VectorXd& d : chain.draws) sum += d;
  return sum / static_cast<double>(chain.draws.size());
}

std::vector<double> coordinate_trace(const Chain& chain, int coordinate) {
  if (chain.draws.empty()) throw PreconditionError("empty chain");
  if (coordinate < 0 || coordinate >= chain.draws.front().size())
    throw PreconditionError("coordinate " + std::to_string(coordinate) + " out of range");
  std::vector<double> trace;
  trace.reserve(chain.draws.size());
  for (const Eigen::VectorXd& d : chain.draws) trace.push_back(d(coordinate));
  return trace;
}

std::pair<double, double> credible_interval(const Chain& chain, int coordinate, double level) {
  if (!chain.draws.empty() && (coordinate < 0 || coordinate >= chain.draws.front().size()))
    throw PreconditionError("coordinate " + std::to_string(coordinate) + " out of range");
  return credible_interval(
      chain, [&](const Eigen::VectorXd& theta) { return theta(coordinate); }, level);
}

std::pair<double, double> credible_interval(
    const Chain& chain, const std::function<double(const Eigen::VectorXd&)>& functional,
    double level) {
  if (chain.draws.empty()) throw PreconditionError("credible interval of an empty chain");
  if (!(level > 0.0 && level < 1.0)) throw PreconditionError("level must lie in (0, 1)");
  std::vector<double> values;
  values.reserve(chain.draws.size());
  for (const Eigen::VectorXd& d : chain.draws) values.push_back(functional(d));
  std::sort(values.begin(), values.end());
  return {stats::quantile_sorted(values, (1.0 - level) / 2.0),
          stats::quantile_sorted(values, (1.0 + level) / 2.0)};
}

}  // namespace gibbs
