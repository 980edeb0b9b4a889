#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace roq {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

/// Nodes and weights of a discrete inner product.
///
/// One-dimensional rules keep `y` empty. Two-dimensional rules are tensor
/// products stored x-major: node k = (x[k], y[k]) with k = ix * ny + iy, so a
/// node index is a stable identifier for DEIM point selection.
struct QuadratureRule {
  std::string kind;  // "trapezoid", "gauss_legendre", "tensor", ...
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> weights;
  std::vector<Interval> domain;          // one entry per dimension
  std::vector<std::size_t> factor_sizes;  // {M} in 1D, {Mx, My} in 2D

  std::size_t size() const { return weights.size(); }
  int dimension() const { return static_cast<int>(domain.size()); }
  std::span<const double> weight_span() const { return weights; }

  /// Sum of weights; the measure of the domain for a consistent rule.
  double weight_sum() const;

  /// Short stable fingerprint of kind, size, domain and weights.
  std::string fingerprint() const;
};

/// Endpoint-inclusive equidistant rule with M-1 intervals on [a, b].
QuadratureRule trapezoidal_rule(double a, double b, std::size_t M);

/// M-point Gauss-Legendre rule on [-1, 1]. Nodes are Legendre roots found by
/// Newton iteration from Chebyshev-like initial guesses.
QuadratureRule gauss_legendre_rule(std::size_t M);

/// Gauss-Legendre rule mapped to [a, b].
QuadratureRule gauss_legendre_rule(std::size_t M, double a, double b);

/// Cartesian product of two one-dimensional rules, x-major.
QuadratureRule tensor_product_rule(const QuadratureRule& rx, const QuadratureRule& ry);

/// Affine transport of a one-dimensional rule onto [a, b].
QuadratureRule map_to_interval(const QuadratureRule& rule, double a, double b);

/// Absolute condition number sum_k |w_k|.
double condition_number(std::span<const double> weights);
double condition_number(std::span<const std::complex<double>> weights);

/// Integrates samples taken at the rule's nodes.
double integrate(const QuadratureRule& rule, std::span<const double> values);

/// CSV `index,node_x[,node_y],weight` with 17 significant digits.
void write_rule_csv(std::ostream& out, const QuadratureRule& rule);

}  // namespace roq
