#include "gibbs/basis.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <sstream>

#include "gibbs/error.hpp"
#include "overloaded.hpp"

namespace gibbs {

namespace {

using detail::overloaded;

void validate(const CubicBSpline& s) {
  if (!(s.lo < s.hi)) throw ShapeError("B-spline domain requires lo < hi");
  if (s.num_basis < 4)
    throw ShapeError("cubic B-spline basis needs at least 4 functions");
}

double clamp_to_domain(const CubicBSpline& s, double x) {
  if (std::isnan(x)) throw DomainError("B-spline evaluated at NaN");
  if (x < s.lo) {
    if (x < s.lo - kDomainTolerance) {
      std::ostringstream msg;
      msg << "point " << x << " outside B-spline domain [" << s.lo << ", "
          << s.hi << "]";
      throw DomainError(msg.str());
    }
    return s.lo;
  }
  if (x > s.hi) {
    if (x > s.hi + kDomainTolerance) {
      std::ostringstream msg;
      msg << "point " << x << " outside B-spline domain [" << s.lo << ", "
          << s.hi << "]";
      throw DomainError(msg.str());
    }
    return s.hi;
  }
  return x;
}

// Writes the four nonzero cubic basis values at x into out[first..first+3]
// (de Boor's triangular recursion) and returns first.
int cubic_nonzero(const CubicBSpline& s, double x, std::array<double, 4>& out) {
  const int J = s.num_basis;
  const int intervals = J - 3;
  const double h = (s.hi - s.lo) / intervals;
  auto knot = [&](int i) {
    if (i <= 3) return s.lo;
    if (i >= J) return s.hi;
    return s.lo + (i - 3) * h;
  };
  int span = 3 + static_cast<int>(std::floor((x - s.lo) / h));
  span = std::clamp(span, 3, J - 1);
  // Guard against rounding in the division placing x one interval off.
  while (span > 3 && x < knot(span)) --span;
  while (span < J - 1 && x >= knot(span + 1)) ++span;

  std::array<double, 4> left{}, right{};
  out[0] = 1.0;
  for (int j = 1; j <= 3; ++j) {
    left[j] = x - knot(span + 1 - j);
    right[j] = knot(span + j) - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double temp = out[r] / (right[r + 1] + left[j - r]);
      out[r] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    out[j] = saved;
  }
  return span - 3;
}

void eval_cubic_into(const CubicBSpline& s, double x, double* dst) {
  x = clamp_to_domain(s, x);
  std::array<double, 4> local{};
  const int first = cubic_nonzero(s, x, local);
  std::fill(dst, dst + s.num_basis, 0.0);
  for (int r = 0; r < 4; ++r) dst[first + r] = local[r];
}

void eval_into(const BasisSpec& basis, std::span<const double> x,
               double* dst) {
  std::visit(
      overloaded{
          [&](const CubicBSpline& s) {
            validate(s);
            if (x.empty()) throw ShapeError("cubic B-spline needs a 1-d point");
            eval_cubic_into(s, x[0], dst);
          },
          [&](const TensorBSpline& t) {
            validate(t.first);
            validate(t.second);
            if (x.size() < 2)
              throw ShapeError("tensor B-spline needs a 2-d point");
            std::vector<double> f1(t.first.num_basis), f2(t.second.num_basis);
            eval_cubic_into(t.first, x[0], f1.data());
            eval_cubic_into(t.second, x[1], f2.data());
            const std::size_t J2 = f2.size();
            for (std::size_t a = 0; a < f1.size(); ++a)
              for (std::size_t b = 0; b < J2; ++b)
                dst[a * J2 + b] = f1[a] * f2[b];
          },
          [&](const RawDictionary& d) {
            for (std::size_t j = 0; j < d.terms.size(); ++j)
              dst[j] = d.terms[j](x);
          },
      },
      basis);
}

// One factor of a monomial term: coordinate index (0-based) and power.
struct Factor {
  std::size_t coord;
  int power;
};

std::vector<Factor> parse_term(const std::string& name) {
  std::vector<Factor> factors;
  if (name == "1") return factors;
  std::stringstream ss(name);
  std::string piece;
  while (std::getline(ss, piece, '*')) {
    if (piece.empty() || piece[0] != 'x')
      throw ShapeError("cannot parse dictionary term '" + name + "'");
    std::size_t pos = 1;
    std::size_t coord = 1;
    if (pos < piece.size() && std::isdigit(static_cast<unsigned char>(piece[pos]))) {
      coord = 0;
      while (pos < piece.size() &&
             std::isdigit(static_cast<unsigned char>(piece[pos])))
        coord = coord * 10 + static_cast<std::size_t>(piece[pos++] - '0');
      if (coord == 0)
        throw ShapeError("dictionary coordinates are 1-based: '" + name + "'");
    }
    int power = 1;
    if (pos < piece.size()) {
      if (piece[pos] != '^' || pos + 1 >= piece.size())
        throw ShapeError("cannot parse dictionary term '" + name + "'");
      power = std::stoi(piece.substr(pos + 1));
    }
    factors.push_back({coord - 1, power});
  }
  return factors;
}

}  // namespace

RawDictionary RawDictionary::from_terms(const std::vector<std::string>& names) {
  RawDictionary dict;
  for (const auto& name : names) {
    auto factors = parse_term(name);
    dict.names.push_back(name);
    dict.terms.emplace_back([factors, name](std::span<const double> x) {
      double v = 1.0;
      for (const auto& f : factors) {
        if (f.coord >= x.size())
          throw ShapeError("dictionary term '" + name +
                           "' reads a coordinate the point does not have");
        v *= std::pow(x[f.coord], f.power);
      }
      return v;
    });
  }
  return dict;
}

int basis_size(const BasisSpec& basis) {
  return std::visit(
      overloaded{
          [](const CubicBSpline& s) { return s.num_basis; },
          [](const TensorBSpline& t) {
            return t.first.num_basis * t.second.num_basis;
          },
          [](const RawDictionary& d) { return static_cast<int>(d.terms.size()); },
      },
      basis);
}

int basis_arity(const BasisSpec& basis) {
  return std::visit(
      overloaded{
          [](const CubicBSpline&) { return 1; },
          [](const TensorBSpline&) { return 2; },
          [](const RawDictionary& d) {
            std::size_t arity = 1;
            for (const auto& name : d.names)
              for (const auto& f : parse_term(name))
                arity = std::max(arity, f.coord + 1);
            return static_cast<int>(arity);
          },
      },
      basis);
}

Eigen::VectorXd eval_basis(const BasisSpec& basis, std::span<const double> x) {
  Eigen::VectorXd f(basis_size(basis));
  eval_into(basis, x, f.data());
  return f;
}

Eigen::VectorXd eval_basis(const BasisSpec& basis, double x) {
  return eval_basis(basis, std::span<const double>(&x, 1));
}

Eigen::MatrixXd design_matrix(const BasisSpec& basis,
                              const Eigen::MatrixXd& points) {
  const Eigen::Index n = points.rows();
  const int J = basis_size(basis);
  // Fill row-major then copy; rows of a column-major matrix are strided.
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> F(n, J);
  std::vector<double> point(static_cast<std::size_t>(points.cols()));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < points.cols(); ++k)
      point[static_cast<std::size_t>(k)] = points(i, k);
    eval_into(basis, point, F.row(i).data());
  }
  return F;
}

Eigen::MatrixXd design_matrix(const BasisSpec& basis,
                              std::span<const double> points) {
  Eigen::MatrixXd P(static_cast<Eigen::Index>(points.size()), 1);
  for (std::size_t i = 0; i < points.size(); ++i)
    P(static_cast<Eigen::Index>(i), 0) = points[i];
  return design_matrix(basis, P);
}

std::vector<double> knots(const CubicBSpline& s) {
  validate(s);
  std::vector<double> t;
  const double h = (s.hi - s.lo) / (s.num_basis - 3);
  for (int i = 0; i < 4; ++i) t.push_back(s.lo);
  for (int k = 1; k <= s.num_basis - 4; ++k) t.push_back(s.lo + k * h);
  for (int i = 0; i < 4; ++i) t.push_back(s.hi);
  return t;
}

std::string describe(const BasisSpec& basis) {
  std::ostringstream out;
  std::visit(overloaded{
                 [&](const CubicBSpline& s) {
                   out << "bspline(J=" << s.num_basis << ", [" << s.lo << ", "
                       << s.hi << "])";
                 },
                 [&](const TensorBSpline& t) {
                   out << "tensor_bspline(" << t.first.num_basis << "x"
                       << t.second.num_basis << ")";
                 },
                 [&](const RawDictionary& d) {
                   out << "dictionary{";
                   for (std::size_t j = 0; j < d.names.size(); ++j)
                     out << (j ? "," : "") << d.names[j];
                   out << "}";
                 },
             },
             basis);
  return out.str();
}

}  // namespace gibbs
