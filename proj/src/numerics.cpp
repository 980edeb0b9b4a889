#include "roq/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "roq/error.hpp"

namespace roq {

namespace {

void check_length(std::ptrdiff_t n, std::size_t weights, const char* what) {
  if (n != static_cast<std::ptrdiff_t>(weights)) {
    throw DimensionError(std::string(what) + ": vector length " + std::to_string(n) +
                         " does not match rule size " + std::to_string(weights));
  }
}

Eigen::Map<const RealVector> as_eigen(std::span<const double> w) {
  return {w.data(), static_cast<Eigen::Index>(w.size())};
}

}  // namespace

Complex discrete_inner_product(const ComplexVector& f, const ComplexVector& g,
                               std::span<const double> weights) {
  check_length(f.size(), weights.size(), "discrete_inner_product");
  check_length(g.size(), weights.size(), "discrete_inner_product");
  Complex acc{0.0, 0.0};
  for (Eigen::Index k = 0; k < f.size(); ++k) {
    acc += weights[k] * std::conj(f[k]) * g[k];
  }
  return acc;
}

double discrete_norm(const ComplexVector& f, std::span<const double> weights) {
  check_length(f.size(), weights.size(), "discrete_norm");
  double acc = 0.0;
  for (Eigen::Index k = 0; k < f.size(); ++k) acc += weights[k] * std::norm(f[k]);
  return std::sqrt(acc);
}

ComplexVector discrete_inner_products(const ComplexVector& v, const ComplexMatrix& columns,
                                      std::span<const double> weights) {
  check_length(v.size(), weights.size(), "discrete_inner_products");
  check_length(columns.rows(), weights.size(), "discrete_inner_products");
  const ComplexVector wv = as_eigen(weights).cast<Complex>().cwiseProduct(v);
  return columns.transpose() * wv.conjugate();
}

GramSchmidtResult gram_schmidt_append(const ComplexMatrix& basis, const ComplexVector& v,
                                      std::span<const double> weights, int passes,
                                      std::ptrdiff_t columns) {
  check_length(v.size(), weights.size(), "gram_schmidt_append");
  if (passes < 1) throw ArgumentError("gram_schmidt_append: passes must be >= 1");
  const std::ptrdiff_t n = columns < 0 ? basis.cols() : columns;
  if (n > basis.cols()) throw DimensionError("gram_schmidt_append: column count exceeds basis");
  if (n > 0) check_length(basis.rows(), weights.size(), "gram_schmidt_append");

  GramSchmidtResult out;
  out.input_norm = discrete_norm(v, weights);
  out.residual = v;
  if (n > 0) {
    const auto Q = basis.leftCols(n);
    const ComplexVector w = as_eigen(weights).cast<Complex>();
    for (int pass = 0; pass < passes; ++pass) {
      // coefficients <q_l, r>_d = q_l^H (w .* r)
      const ComplexVector coeffs = Q.adjoint() * w.cwiseProduct(out.residual);
      out.residual.noalias() -= Q * coeffs;
    }
  }
  out.residual_norm = discrete_norm(out.residual, weights);
  out.breakdown = !(out.residual_norm >= kBreakdownTolerance * out.input_norm) ||
                  out.input_norm == 0.0;
  if (out.residual_norm > 0.0) out.residual /= out.residual_norm;
  return out;
}

ComplexVector solve_lower_triangular(const ComplexMatrix& L, const ComplexVector& b) {
  if (L.rows() != L.cols()) throw DimensionError("solve_lower_triangular: matrix not square");
  if (L.rows() != b.size()) throw DimensionError("solve_lower_triangular: rhs length mismatch");
  const Eigen::Index n = L.rows();
  const double scale = n > 0 ? L.diagonal().cwiseAbs().maxCoeff() : 0.0;
  ComplexVector c(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex d = L(i, i);
    if (!(std::abs(d) > kSingularTolerance * scale)) {
      throw SingularError("solve_lower_triangular: zero pivot at row " + std::to_string(i));
    }
    Complex acc = b[i];
    for (Eigen::Index j = 0; j < i; ++j) acc -= L(i, j) * c[j];
    c[i] = acc / d;
  }
  return c;
}

ComplexVector solve_upper_triangular(const ComplexMatrix& U, const ComplexVector& b) {
  if (U.rows() != U.cols()) throw DimensionError("solve_upper_triangular: matrix not square");
  if (U.rows() != b.size()) throw DimensionError("solve_upper_triangular: rhs length mismatch");
  const Eigen::Index n = U.rows();
  const double scale = n > 0 ? U.diagonal().cwiseAbs().maxCoeff() : 0.0;
  ComplexVector c(n);
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    const Complex d = U(i, i);
    if (!(std::abs(d) > kSingularTolerance * scale)) {
      throw SingularError("solve_upper_triangular: zero pivot at row " + std::to_string(i));
    }
    Complex acc = b[i];
    for (Eigen::Index j = i + 1; j < n; ++j) acc -= U(i, j) * c[j];
    c[i] = acc / d;
  }
  return c;
}

ComplexVector solve_dense(const ComplexMatrix& A, const ComplexVector& b) {
  if (A.rows() != A.cols()) throw DimensionError("solve_dense: matrix not square");
  if (A.rows() != b.size()) throw DimensionError("solve_dense: rhs length mismatch");
  const Eigen::Index n = A.rows();
  ComplexMatrix lu = A;
  ComplexVector x = b;
  const double scale = n > 0 ? A.cwiseAbs().maxCoeff() : 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index pivot = k;
    for (Eigen::Index i = k + 1; i < n; ++i) {
      if (std::abs(lu(i, k)) > std::abs(lu(pivot, k))) pivot = i;
    }
    if (!(std::abs(lu(pivot, k)) > kSingularTolerance * scale)) {
      throw SingularError("solve_dense: matrix is singular at column " + std::to_string(k));
    }
    if (pivot != k) {
      lu.row(k).swap(lu.row(pivot));
      std::swap(x[k], x[pivot]);
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const Complex f = lu(i, k) / lu(k, k);
      lu(i, k) = f;
      lu.row(i).tail(n - k - 1) -= f * lu.row(k).tail(n - k - 1);
      x[i] -= f * x[k];
    }
  }
  return solve_upper_triangular(lu, x);
}

double operator_two_norm(std::ptrdiff_t rows, std::ptrdiff_t cols,
                         const std::function<ComplexVector(const ComplexVector&)>& apply,
                         const std::function<ComplexVector(const ComplexVector&)>& apply_adjoint,
                         const PowerIterationOptions& options) {
  if (rows <= 0 || cols <= 0) throw ArgumentError("matrix_two_norm: empty operator");
  ComplexVector x = ComplexVector::Ones(cols);
  x /= x.norm();
  double lambda = 0.0;
  for (int it = 0; it < options.max_iterations; ++it) {
    ComplexVector y = apply_adjoint(apply(x));
    // Rayleigh quotient x^H A^H A x with ||x|| = 1.
    const double next = std::abs(x.dot(y));
    const double ynorm = y.norm();
    if (ynorm == 0.0) return 0.0;
    x = y / ynorm;
    if (it > 0 && std::abs(next - lambda) <= options.relative_tolerance * next) {
      return std::sqrt(next);
    }
    lambda = next;
  }
  throw ConvergenceError("matrix_two_norm: power iteration did not converge",
                         std::sqrt(lambda));
}

double matrix_two_norm(const ComplexMatrix& A, const PowerIterationOptions& options) {
  return operator_two_norm(
      A.rows(), A.cols(), [&A](const ComplexVector& x) -> ComplexVector { return A * x; },
      [&A](const ComplexVector& y) -> ComplexVector { return A.adjoint() * y; }, options);
}

std::ptrdiff_t argmax_abs(const ComplexVector& v) {
  if (v.size() == 0) throw ArgumentError("argmax_abs: empty vector");
  std::ptrdiff_t best = 0;
  double best_val = std::norm(v[0]);
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    const double a = std::norm(v[i]);
    if (a > best_val) {
      best_val = a;
      best = i;
    }
  }
  return best;
}

}  // namespace roq
