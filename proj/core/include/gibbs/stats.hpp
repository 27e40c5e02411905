#pragma once

#include <span>
#include <vector>

namespace gibbs::stats {

double mean(std::span<const double> x);
/// Unbiased sample variance; 0 for fewer than two values.
double variance(std::span<const double> x);

/// Type-7 (linear interpolation) quantile: h = (N-1)p, interpolate between
/// the order statistics at floor(h) and floor(h)+1.
double quantile(std::span<const double> x, double p);
double quantile_sorted(std::span<const double> sorted, double p);

/// Effective sample size by Geyer's initial monotone positive sequence.
double effective_sample_size(std::span<const double> x);

double normal_cdf(double x);
double normal_quantile(double p);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_abs_residual = 0.0;
};

/// Ordinary least squares of y on x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace gibbs::stats
