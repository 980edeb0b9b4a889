#include "roq/quadrature.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>

#include "roq/error.hpp"
#include "roq/hash.hpp"

namespace roq {

namespace {

constexpr double kNewtonTolerance = 1e-15;
constexpr int kNewtonMaxIterations = 100;

struct LegendreValue {
  double p;   // P_M(x)
  double dp;  // P'_M(x)
};

LegendreValue legendre_with_derivative(std::size_t M, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (std::size_t k = 2; k <= M; ++k) {
    const double kk = static_cast<double>(k);
    const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
    p0 = p1;
    p1 = p2;
  }
  // P'_M = M (x P_M - P_{M-1}) / (x^2 - 1); roots never sit at +-1.
  const double m = static_cast<double>(M);
  return {p1, m * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

double QuadratureRule::weight_sum() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

std::string QuadratureRule::fingerprint() const {
  Fnv1a h;
  h.text(kind).value(static_cast<std::uint64_t>(size()));
  for (const auto& iv : domain) h.value(iv.lo).value(iv.hi);
  h.values(x).values(y).values(weights);
  return h.hex();
}

QuadratureRule trapezoidal_rule(double a, double b, std::size_t M) {
  if (M < 2) throw ArgumentError("trapezoidal_rule: need at least 2 nodes");
  if (!(a < b)) throw ArgumentError("trapezoidal_rule: require a < b");
  QuadratureRule rule;
  rule.kind = "trapezoid";
  rule.domain = {{a, b}};
  rule.factor_sizes = {M};
  rule.x.resize(M);
  rule.weights.resize(M);
  const double h = (b - a) / static_cast<double>(M - 1);
  for (std::size_t k = 0; k < M; ++k) {
    rule.x[k] = a + (b - a) * static_cast<double>(k) / static_cast<double>(M - 1);
    rule.weights[k] = h;
  }
  rule.x.back() = b;
  rule.weights.front() = rule.weights.back() = 0.5 * h;
  return rule;
}

QuadratureRule gauss_legendre_rule(std::size_t M) {
  if (M < 1) throw ArgumentError("gauss_legendre_rule: need at least 1 node");
  QuadratureRule rule;
  rule.kind = "gauss_legendre";
  rule.domain = {{-1.0, 1.0}};
  rule.factor_sizes = {M};
  rule.x.assign(M, 0.0);
  rule.weights.assign(M, 0.0);
  const double m = static_cast<double>(M);
  // Roots come in +-pairs; solve for the positive half (descending) and mirror.
  for (std::size_t i = 0; i < (M + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (m + 0.5));
    if (M % 2 == 1 && i == M / 2) x = 0.0;
    LegendreValue v{};
    bool converged = false;
    for (int it = 0; it < kNewtonMaxIterations; ++it) {
      v = legendre_with_derivative(M, x);
      const double dx = v.p / v.dp;
      x -= dx;
      if (std::abs(dx) <= kNewtonTolerance) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw ConvergenceError("gauss_legendre_rule: Newton failed for root " + std::to_string(i),
                             x, i);
    }
    v = legendre_with_derivative(M, x);
    const double w = 2.0 / ((1.0 - x * x) * v.dp * v.dp);
    rule.x[M - 1 - i] = x;
    rule.x[i] = -x;
    rule.weights[M - 1 - i] = w;
    rule.weights[i] = w;
  }
  if (M % 2 == 1) rule.x[M / 2] = 0.0;
  return rule;
}

QuadratureRule gauss_legendre_rule(std::size_t M, double a, double b) {
  return map_to_interval(gauss_legendre_rule(M), a, b);
}

QuadratureRule tensor_product_rule(const QuadratureRule& rx, const QuadratureRule& ry) {
  if (rx.dimension() != 1 || ry.dimension() != 1) {
    throw ArgumentError("tensor_product_rule: factors must be one-dimensional");
  }
  QuadratureRule rule;
  rule.kind = "tensor(" + rx.kind + "," + ry.kind + ")";
  rule.domain = {rx.domain[0], ry.domain[0]};
  rule.factor_sizes = {rx.size(), ry.size()};
  const std::size_t n = rx.size() * ry.size();
  rule.x.reserve(n);
  rule.y.reserve(n);
  rule.weights.reserve(n);
  for (std::size_t i = 0; i < rx.size(); ++i) {
    for (std::size_t j = 0; j < ry.size(); ++j) {
      rule.x.push_back(rx.x[i]);
      rule.y.push_back(ry.x[j]);
      rule.weights.push_back(rx.weights[i] * ry.weights[j]);
    }
  }
  return rule;
}

QuadratureRule map_to_interval(const QuadratureRule& rule, double a, double b) {
  if (rule.dimension() != 1) throw ArgumentError("map_to_interval: rule must be 1D");
  if (!(a < b)) throw ArgumentError("map_to_interval: require a < b");
  const double c = rule.domain[0].lo;
  const double d = rule.domain[0].hi;
  const double scale = (b - a) / (d - c);
  QuadratureRule out = rule;
  out.domain = {{a, b}};
  for (std::size_t k = 0; k < rule.size(); ++k) {
    out.x[k] = a + (rule.x[k] - c) * scale;
    out.weights[k] = rule.weights[k] * scale;
  }
  return out;
}

double condition_number(std::span<const double> weights) {
  double s = 0.0;
  for (double w : weights) s += std::abs(w);
  return s;
}

double condition_number(std::span<const std::complex<double>> weights) {
  double s = 0.0;
  for (const auto& w : weights) s += std::abs(w);
  return s;
}

double integrate(const QuadratureRule& rule, std::span<const double> values) {
  if (values.size() != rule.size()) throw DimensionError("integrate: length mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) s += rule.weights[k] * values[k];
  return s;
}

void write_rule_csv(std::ostream& out, const QuadratureRule& rule) {
  const auto old = out.precision(17);
  out << (rule.dimension() == 2 ? "index,node_x,node_y,weight\n" : "index,node_x,weight\n");
  for (std::size_t k = 0; k < rule.size(); ++k) {
    out << k << ',' << rule.x[k];
    if (rule.dimension() == 2) out << ',' << rule.y[k];
    out << ',' << rule.weights[k] << '\n';
  }
  out.precision(old);
}

}  // namespace roq
