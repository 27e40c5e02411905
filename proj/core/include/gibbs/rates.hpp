#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>

namespace gibbs {

/// omega_n = omega.
struct FixedRate {
  double omega = 1.0;
};

/// omega_n = c * n^-gamma.
struct PowerLawRate {
  double c = 1.0;
  double gamma = 0.0;
};

/// Heavy-tailed responses with tail index s > 3:
///   t_n = n^{2/(s-2)},  omega_n = t_n^{-1/2},
///   eps_n = (log n)^{1/2} n^{-(s-3)/(2s-4)}.
struct HeavyTailRate {
  double s = 4.0;
};

/// Tsybakov margin exponent gamma > 0:
///   eps_n = (log n)^{gamma/(2+2gamma)} n^{-gamma/(3+2gamma)},
///   omega_n = eps_n^{1/gamma}.
struct TsybakovRate {
  double gamma = 1.0;
};

/// Multiplier a_n applied to the data-driven AUC rate.
struct FixedMultiplier {
  double value = 1.0;
};
/// a_n = log(m + n).
struct LogMultiplier {};
/// a_n = c (m + n)^power.
struct PowerMultiplier {
  double c = 1.0;
  double power = 0.0;
};
using AucMultiplier = std::variant<FixedMultiplier, LogMultiplier, PowerMultiplier>;

/// a_n * omega_hat_n resolved from the two-sample data.
struct AucDataDriven {
  AucMultiplier multiplier = LogMultiplier{};
};

using RateSchedule =
    std::variant<FixedRate, PowerLawRate, HeavyTailRate, TsybakovRate, AucDataDriven>;

/// A schedule evaluated at n. cap (t_n) and epsilon are set for the
/// schedules that define them.
struct RateValue {
  double omega = 0.0;
  std::optional<double> cap;
  std::optional<double> epsilon;
};

void validate(const RateSchedule& schedule);
std::string rate_name(const RateSchedule& schedule);
bool is_data_driven(const RateSchedule& schedule);

/// Exact formula evaluation. Throws PreconditionError for n < 2 on the
/// schedules that take log n, and for data-driven schedules.
RateValue rate_at(const RateSchedule& schedule, std::size_t n);

/// Empirical AUC and the two U-statistic covariance estimates:
///   tau10 = sum_j c_j (c_j - 1) / (n m (m-1)) - theta^2, with c_j the number
///           of group-0 scores below group-1 score j (shared group-1 score);
///   tau01 = sum_i d_i (d_i - 1) / (m n (n-1)) - theta^2, with d_i the number
///           of group-1 scores above group-0 score i.
struct AucCovariances {
  double tau10 = 0.0;
  double tau01 = 0.0;
  double theta_hat = 0.0;
};

/// Requires m >= 2 and n >= 2.
AucCovariances auc_covariances(std::span<const double> scores0,
                               std::span<const double> scores1);

/// multiplier * (m+n)/(2mn) * (tau10/lambda + tau01/(1-lambda))^-1 with
/// lambda = m/(m+n). Throws DegenerateError when the bracket is <= 0.
double auc_learning_rate(const AucCovariances& cov, std::size_t m, std::size_t n,
                         double multiplier);

double auc_multiplier(const AucMultiplier& multiplier, std::size_t m, std::size_t n);

}  // namespace gibbs
