#pragma once

#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace gibbs {

/// A real function of a point; used for dictionary terms and true curves.
using RealFunction = std::function<double(std::span<const double>)>;

/// Clamped cubic B-splines with uniform interior knots on [lo, hi].
///
/// The knot vector is lo (x4), lo + k*h for k = 1..J-4, hi (x4) with
/// h = (hi - lo) / (J - 3). Evaluates the first coordinate of a point.
struct CubicBSpline {
  double lo = 0.0;
  double hi = 1.0;
  int num_basis = 4;
};

/// Products f1[j1](x[0]) * f2[j2](x[1]), ordered j1-major:
/// index = j1 * J2 + j2.
struct TensorBSpline {
  CubicBSpline first;
  CubicBSpline second;
};

/// A finite list of named component functions.
struct RawDictionary {
  std::vector<std::string> names;
  std::vector<RealFunction> terms;

  /// Builds monomial terms from names such as "1", "x", "x^3", "x2",
  /// "x1*x2^2". A bare "x" refers to coordinate 1; "xk" to coordinate k.
  static RawDictionary from_terms(const std::vector<std::string>& names);
};

using BasisSpec = std::variant<CubicBSpline, TensorBSpline, RawDictionary>;

/// Number of basis functions J.
int basis_size(const BasisSpec& basis);

/// Number of point coordinates the basis reads (1 for cubic, 2 for tensor,
/// highest referenced coordinate for a dictionary).
int basis_arity(const BasisSpec& basis);

/// Tolerance outside [lo, hi] within which points are clamped.
inline constexpr double kDomainTolerance = 1e-12;

/// f(x) as a J-vector. Throws DomainError for points beyond the tolerance.
Eigen::VectorXd eval_basis(const BasisSpec& basis, std::span<const double> x);
Eigen::VectorXd eval_basis(const BasisSpec& basis, double x);

/// Row i is eval_basis(points.row(i)). Points are stored one per row.
Eigen::MatrixXd design_matrix(const BasisSpec& basis,
                              const Eigen::MatrixXd& points);
Eigen::MatrixXd design_matrix(const BasisSpec& basis,
                              std::span<const double> points);

/// Knot vector of a clamped cubic basis (J + 4 entries).
std::vector<double> knots(const CubicBSpline& spline);

std::string describe(const BasisSpec& basis);

}  // namespace gibbs
