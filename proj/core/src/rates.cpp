#include "gibbs/rates.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gibbs/error.hpp"
#include "gibbs/losses.hpp"
#include "overloaded.hpp"

namespace gibbs {

using detail::overloaded;

void validate(const RateSchedule& schedule) {
  std::visit(overloaded{
                 [](const FixedRate& r) {
                   if (!(r.omega >= 0.0)) throw ShapeError("fixed learning rate must be >= 0");
                 },
                 [](const PowerLawRate& r) {
                   if (!(r.c > 0.0) || !(r.gamma >= 0.0))
                     throw ShapeError("power-law rate needs c > 0 and gamma >= 0");
                 },
                 [](const HeavyTailRate& r) {
                   if (!(r.s > 3.0)) throw ShapeError("heavy-tail rate needs s > 3");
                 },
                 [](const TsybakovRate& r) {
                   if (!(r.gamma > 0.0)) throw ShapeError("Tsybakov rate needs gamma > 0");
                 },
                 [](const AucDataDriven& r) {
                   if (const auto* f = std::get_if<FixedMultiplier>(&r.multiplier);
                       f && !(f->value > 0.0))
                     throw ShapeError("AUC rate multiplier must be positive");
                   if (const auto* p = std::get_if<PowerMultiplier>(&r.multiplier);
                       p && !(p->c > 0.0))
                     throw ShapeError("AUC rate multiplier must be positive");
                 },
             },
             schedule);
}

std::string rate_name(const RateSchedule& schedule) {
  return std::visit(overloaded{
                        [](const FixedRate&) { return std::string("fixed"); },
                        [](const PowerLawRate&) { return std::string("power_law"); },
                        [](const HeavyTailRate&) { return std::string("heavy_tail"); },
                        [](const TsybakovRate&) { return std::string("tsybakov"); },
                        [](const AucDataDriven&) { return std::string("auc"); },
                    },
                    schedule);
}

bool is_data_driven(const RateSchedule& schedule) {
  return std::holds_alternative<AucDataDriven>(schedule);
}

RateValue rate_at(const RateSchedule& schedule, std::size_t n) {
  validate(schedule);
  const double dn = static_cast<double>(n);
  auto need_log = [&] {
    if (n < 2) throw PreconditionError("schedule uses log n and needs n >= 2");
    return std::log(dn);
  };
  return std::visit(
      overloaded{
          [&](const FixedRate& r) { return RateValue{r.omega, {}, {}}; },
          [&](const PowerLawRate& r) {
            if (n < 1) throw PreconditionError("power-law rate needs n >= 1");
            return RateValue{r.c * std::pow(dn, -r.gamma), {}, {}};
          },
          [&](const HeavyTailRate& r) {
            const double log_n = need_log();
            const double t = std::pow(dn, 2.0 / (r.s - 2.0));
            const double eps =
                std::sqrt(log_n) * std::pow(dn, -(r.s - 3.0) / (2.0 * r.s - 4.0));
            return RateValue{1.0 / std::sqrt(t), t, eps};
          },
          [&](const TsybakovRate& r) {
            const double log_n = need_log();
            const double g = r.gamma;
            const double eps = std::pow(log_n, g / (2.0 + 2.0 * g)) *
                               std::pow(dn, -g / (3.0 + 2.0 * g));
            return RateValue{std::pow(eps, 1.0 / g), {}, eps};
          },
          [&](const AucDataDriven&) -> RateValue {
            throw PreconditionError(
                "the AUC learning rate is data-driven; use auc_learning_rate");
          },
      },
      schedule);
}

AucCovariances auc_covariances(std::span<const double> scores0,
                               std::span<const double> scores1) {
  const std::size_t m = scores0.size();
  const std::size_t n = scores1.size();
  if (m < 2 || n < 2)
    throw PreconditionError("AUC covariances need at least two scores per group");

  std::vector<double> sorted0(scores0.begin(), scores0.end());
  std::vector<double> sorted1(scores1.begin(), scores1.end());
  std::sort(sorted0.begin(), sorted0.end());
  std::sort(sorted1.begin(), sorted1.end());

  double shared1 = 0.0;  // sum_j c_j (c_j - 1)
  for (double u1 : scores1) {
    const auto c = static_cast<double>(
        std::lower_bound(sorted0.begin(), sorted0.end(), u1) - sorted0.begin());
    shared1 += c * (c - 1.0);
  }
  double shared0 = 0.0;  // sum_i d_i (d_i - 1)
  for (double u0 : scores0) {
    const auto d = static_cast<double>(
        sorted1.end() - std::upper_bound(sorted1.begin(), sorted1.end(), u0));
    shared0 += d * (d - 1.0);
  }
  const double dm = static_cast<double>(m);
  const double dn = static_cast<double>(n);
  const double theta = auc_point_estimate(scores0, scores1);
  return {shared1 / (dn * dm * (dm - 1.0)) - theta * theta,
          shared0 / (dm * dn * (dn - 1.0)) - theta * theta, theta};
}

double auc_learning_rate(const AucCovariances& cov, std::size_t m, std::size_t n,
                         double multiplier) {
  if (m < 1 || n < 1) throw PreconditionError("AUC learning rate needs m, n >= 1");
  const double dm = static_cast<double>(m);
  const double dn = static_cast<double>(n);
  const double lambda = dm / (dm + dn);
  const double proxy = cov.tau10 / lambda + cov.tau01 / (1.0 - lambda);
  if (!(proxy > 0.0))
    throw DegenerateError("AUC learning rate: variance proxy " + std::to_string(proxy) +
                          " is not positive");
  return multiplier * (dm + dn) / (2.0 * dm * dn) / proxy;
}

double auc_multiplier(const AucMultiplier& multiplier, std::size_t m, std::size_t n) {
  const double total = static_cast<double>(m + n);
  return std::visit(overloaded{
                        [](const FixedMultiplier& f) { return f.value; },
                        [&](const LogMultiplier&) { return std::log(total); },
                        [&](const PowerMultiplier& p) { return p.c * std::pow(total, p.power); },
                    },
                    multiplier);
}

}  // namespace gibbs
