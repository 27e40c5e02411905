#include "gibbs/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <ostream>
#include <set>
#include <thread>

#include "gibbs/csv.hpp"
#include "gibbs/error.hpp"
#include "gibbs/stats.hpp"
#include "overloaded.hpp"

namespace gibbs {
namespace {

using detail::overloaded;

struct ResolvedRate {
  double omega = 0.0;
  std::optional<double> cap;
};

ResolvedRate resolve_rate(const ExperimentSpec& spec, const Dataset& data, std::size_t n) {
  if (const auto* auc = std::get_if<AucDataDriven>(&spec.rate)) {
    const auto& d = data.two_sample();
    const AucCovariances cov = auc_covariances(d.scores0, d.scores1);
    const double a = auc_multiplier(auc->multiplier, d.scores0.size(), d.scores1.size());
    return {auc_learning_rate(cov, d.scores0.size(), d.scores1.size(), a), {}};
  }
  const RateValue v = rate_at(spec.rate, n);
  return {v.omega, v.cap};
}

LossSpec resolve_loss(const ExperimentSpec& spec, const ResolvedRate& rate) {
  LossSpec loss = spec.loss;
  if (auto* capped = std::get_if<CappedSquaredLoss>(&loss); capped && spec.cap_from_rate) {
    if (!rate.cap) throw ConfigError("the rate schedule defines no cap for the capped loss");
    capped->cap = *rate.cap;
  }
  return loss;
}

bool wants_function(const Divergence& div) {
  return std::holds_alternative<EmpiricalL2>(div) || std::holds_alternative<L2P>(div) ||
         std::holds_alternative<MCIDMeasure>(div);
}

Comparand comparand(const Divergence& div, const Truth& truth) {
  if (wants_function(div) && truth.function) return truth.function;
  if (truth.theta) return *truth.theta;
  if (truth.function) return truth.function;
  throw ConfigError("the generator defines no theta* for this divergence");
}

const BasisSpec* mcid_basis(const LossSpec& loss) {
  const auto* m = std::get_if<McidLoss>(&loss);
  return m ? &m->basis : nullptr;
}

std::optional<double> mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  return stats::mean(v);
}

}  // namespace

void validate(const ExperimentSpec& spec) {
  if (spec.n_grid.empty()) throw ConfigError("n_grid must not be empty");
  for (std::size_t n : spec.n_grid)
    if (n < 2) throw ConfigError("n_grid entries must be >= 2");
  if (spec.replications < 1) throw ConfigError("replications must be >= 1");
  if (!(spec.level > 0.0 && spec.level < 1.0)) throw ConfigError("level must lie in (0, 1)");
  if (!std::isfinite(spec.scale_n_power)) throw ConfigError("mh.scale_n_power must be finite");
  validate(spec.generator);
  validate(spec.mh);
  try {
    validate(spec.loss);
    validate(spec.rate);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

std::uint64_t row_seed(std::uint64_t base_seed, std::size_t n_index, std::size_t rep) {
  return hash64(base_seed, static_cast<std::uint64_t>(n_index), static_cast<std::uint64_t>(rep));
}

PriorSpec with_dimension(const PriorSpec& prior, int dim) {
  return std::visit(overloaded{
                        [&](GaussianIid p) {
                          if (p.dim <= 0) p.dim = dim;
                          return PriorSpec{p};
                        },
                        [&](LaplaceIid p) {
                          if (p.dim <= 0) p.dim = dim;
                          return PriorSpec{p};
                        },
                        [&](UniformBox p) {
                          if (p.dim <= 0) p.dim = dim;
                          return PriorSpec{p};
                        },
                        [&](Truncated p) {
                          p.inner = std::make_shared<const PriorSpec>(with_dimension(*p.inner, dim));
                          return PriorSpec{p};
                        },
                        [&](const auto& p) { return PriorSpec{p}; },
                    },
                    prior.kind);
}

ReplicationResult run_replication(const ExperimentSpec& spec, std::size_t n_index,
                                  std::size_t rep) {
  if (n_index >= spec.n_grid.size()) throw PreconditionError("n index out of range");
  const auto started = std::chrono::steady_clock::now();
  ReplicationResult result;
  ResultRow& row = result.row;
  row.n = spec.n_grid[n_index];
  row.rep = rep;
  row.seed = row_seed(spec.base_seed, n_index, rep);

  Rng data_rng(row.seed, 0);
  Sample sample = generate(spec.generator, row.n, data_rng);
  result.truth = sample.truth;

  const ResolvedRate rate = resolve_rate(spec, sample.data, row.n);
  row.omega = rate.omega;
  const LossSpec loss = resolve_loss(spec, rate);
  const int dim = parameter_dimension(loss, sample.data);
  if (dim <= 0)
    throw ConfigError("loss " + loss_name(loss) + " does not fit the " +
                      generator_name(spec.generator) + " data");
  const GibbsTarget target(loss, with_dimension(spec.prior, dim), sample.data, rate.omega);

  MHConfig mh = spec.mh;
  mh.seed = hash64(row.seed, 1);
  if (mh.proposal_scale.size() == 0)
    mh.proposal_scale = Eigen::VectorXd::Constant(1, default_proposal_scale(target));
  mh.proposal_scale *= std::pow(static_cast<double>(row.n), -spec.scale_n_power);

  if (const auto* ss = std::get_if<SpikeSlab>(&target.prior().kind)) {
    const SparseChain sparse = ss_mh_run(target, mh);
    result.chain = densify(sparse, ss->q, target.dimension() == ss->q + 1);
  } else {
    result.chain = mh_run(target, mh);
  }
  row.accept_rate = result.chain.acceptance_rate();
  const Eigen::VectorXd mean = posterior_mean(result.chain);

  Divergence div = spec.divergence;
  if (auto* l2 = std::get_if<EmpiricalL2>(&div); l2 && l2->xs.rows() == 0)
    l2->xs = sample.data.regression().x;
  Rng div_rng(row.seed, 2);
  div = freeze(div, div_rng);
  const Comparand star = comparand(div, sample.truth);
  result.divergences = divergence_trace(div, result.chain, star);
  std::vector<double> sorted = result.divergences;
  std::sort(sorted.begin(), sorted.end());
  row.radius_q90 = stats::quantile_sorted(sorted, 0.9);
  row.div_median = stats::quantile_sorted(sorted, 0.5);
  row.div_point_est = divergence_value(div, mean, star).value;

  if (mean.size() == 1) {
    row.interval = credible_interval(result.chain, 0, spec.level);
    if (sample.truth.theta && sample.truth.theta->size() == 1) {
      const double t = (*sample.truth.theta)(0);
      row.covered = row.interval->first <= t && t <= row.interval->second;
    }
  }

  const std::size_t holdout = spec.holdout.value_or(default_holdout(spec.generator));
  if (const BasisSpec* basis = mcid_basis(loss); basis && holdout > 0) {
    Rng holdout_rng(row.seed, 3);
    const Sample test = generate(spec.generator, holdout, holdout_rng);
    row.misclass_est = holdout_misclassification(FunctionParam{*basis, mean}, test.data);
    if (sample.truth.function)
      row.misclass_truth = holdout_misclassification(sample.truth.function, test.data);
  }

  if (spec.timing)
    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                            started)
                      .count();
  return result;
}

std::size_t worker_count(const ExperimentSpec& spec) {
  if (spec.workers > 0) return spec.workers;
  if (const char* env = std::getenv("GIBBS_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
  validate(spec);
  const std::size_t reps = spec.replications;
  const std::size_t total = spec.n_grid.size() * reps;
  std::vector<ResultRow> rows(total);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= total) return;
      const std::size_t n_index = k / reps;
      const std::size_t rep = k % reps;
      try {
        rows[k] = run_replication(spec, n_index, rep).row;
      } catch (const std::exception& e) {
        ResultRow failed;
        failed.n = spec.n_grid[n_index];
        failed.rep = rep;
        failed.seed = row_seed(spec.base_seed, n_index, rep);
        failed.error = e.what();
        rows[k] = std::move(failed);
      }
    }
  };
  const std::size_t workers = std::min(worker_count(spec), total);
  if (workers <= 1) {
    work();
    return rows;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (std::thread& t : pool) t.join();
  return rows;
}

std::vector<Aggregate> aggregate(const std::vector<ResultRow>& rows) {
  std::map<std::size_t, std::vector<const ResultRow*>> by_n;
  std::vector<std::size_t> order;
  for (const ResultRow& r : rows) {
    if (!by_n.count(r.n)) order.push_back(r.n);
    by_n[r.n].push_back(&r);
  }
  std::vector<Aggregate> out;
  for (std::size_t n : order) {
    Aggregate a;
    a.n = n;
    std::vector<double> omega, radius, point, est, truth, accept, covered;
    for (const ResultRow* r : by_n[n]) {
      ++a.rows;
      if (!r->error.empty()) {
        ++a.failures;
        continue;
      }
      if (r->omega) omega.push_back(*r->omega);
      if (r->radius_q90) radius.push_back(*r->radius_q90);
      if (r->div_point_est) point.push_back(*r->div_point_est);
      if (r->misclass_est) est.push_back(*r->misclass_est);
      if (r->misclass_truth) truth.push_back(*r->misclass_truth);
      if (r->accept_rate) accept.push_back(*r->accept_rate);
      if (r->covered) covered.push_back(*r->covered ? 1.0 : 0.0);
    }
    a.mean_omega = mean_of(omega);
    a.mean_radius = mean_of(radius);
    a.mean_div_point_est = mean_of(point);
    a.mean_misclass_est = mean_of(est);
    a.mean_misclass_truth = mean_of(truth);
    a.mean_accept_rate = mean_of(accept);
    a.coverage = mean_of(covered);
    out.push_back(a);
  }
  return out;
}

std::optional<RateFit> radius_fit(const std::vector<ResultRow>& rows) {
  std::vector<std::pair<double, double>> pairs;
  std::set<std::size_t> distinct;
  for (const ResultRow& r : rows)
    if (r.error.empty() && r.radius_q90 && *r.radius_q90 > 0.0) {
      pairs.emplace_back(static_cast<double>(r.n), *r.radius_q90);
      distinct.insert(r.n);
    }
  if (distinct.size() < 3) return std::nullopt;
  return concentration_slope(pairs);
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  csv::write_row(out, std::vector<std::string>(std::begin(kResultColumns), std::end(kResultColumns)));
  for (const ResultRow& r : rows)
    csv::write_row(out, {std::to_string(r.n), std::to_string(r.rep), std::to_string(r.seed),
                         csv::format_optional(r.omega), csv::format_optional(r.radius_q90),
                         csv::format_optional(r.div_point_est),
                         csv::format_optional(r.misclass_est),
                         csv::format_optional(r.misclass_truth),
                         csv::format_optional(r.accept_rate), csv::format_optional(r.wall_ms),
                         r.error});
}

void write_radii_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  csv::write_row(out, {"n", "rep", "statistic", "value"});
  for (const ResultRow& r : rows) {
    if (!r.error.empty()) continue;
    const auto emit = [&](const char* name, const std::optional<double>& v) {
      if (v) csv::write_row(out, {std::to_string(r.n), std::to_string(r.rep), name,
                                  csv::format_double(*v)});
    };
    emit("radius_q90", r.radius_q90);
    emit("radius_median", r.div_median);
    emit("div_point_est", r.div_point_est);
  }
}

}  // namespace gibbs
