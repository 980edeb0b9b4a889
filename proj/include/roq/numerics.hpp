#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>

#include <Eigen/Dense>

namespace roq {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Discrete weighted inner product sum_k w_k conj(f_k) g_k. Conjugate-linear in `f`.
Complex discrete_inner_product(const ComplexVector& f, const ComplexVector& g,
                               std::span<const double> weights);

/// ||f||_d = sqrt(<f, f>_d). Requires nonnegative weights.
double discrete_norm(const ComplexVector& f, std::span<const double> weights);

/// Inner products of `v` against every column of `columns`: out_j = <v, col_j>_d.
ComplexVector discrete_inner_products(const ComplexVector& v, const ComplexMatrix& columns,
                                      std::span<const double> weights);

/// Relative breakdown threshold for Gram-Schmidt: residual_norm < tol * ||v||_d.
inline constexpr double kBreakdownTolerance = 1e-14;
inline constexpr int kDefaultGramSchmidtPasses = 2;

struct GramSchmidtResult {
  ComplexVector residual;   // normalized when residual_norm > 0
  double residual_norm = 0; // ||v - P v||_d before normalization
  double input_norm = 0;    // ||v||_d
  bool breakdown = false;   // residual_norm < kBreakdownTolerance * input_norm
};

/// Orthogonalizes `v` against the (discretely orthonormal) columns of `basis`.
///
/// Iterated classical Gram-Schmidt with `passes` sweeps. Only the first `columns`
/// columns of `basis` take part when `columns` is given, so a preallocated basis
/// can be grown in place. Breakdown is reported, not thrown: the caller decides.
GramSchmidtResult gram_schmidt_append(const ComplexMatrix& basis, const ComplexVector& v,
                                      std::span<const double> weights,
                                      int passes = kDefaultGramSchmidtPasses,
                                      std::ptrdiff_t columns = -1);

/// Forward substitution for L c = b. L square lower-triangular; entries above the
/// diagonal are ignored.
ComplexVector solve_lower_triangular(const ComplexMatrix& L, const ComplexVector& b);

/// Back substitution for U c = b. U square upper-triangular; entries below the
/// diagonal are ignored.
ComplexVector solve_upper_triangular(const ComplexMatrix& U, const ComplexVector& b);

/// Dense solve A x = b by LU with partial pivoting.
ComplexVector solve_dense(const ComplexMatrix& A, const ComplexVector& b);

/// Pivots with |p| <= kSingularTolerance * (largest pivot magnitude) are singular.
inline constexpr double kSingularTolerance = 1e-14;

struct PowerIterationOptions {
  double relative_tolerance = 1e-10;
  int max_iterations = 10000;
};

/// Largest singular value sqrt(lambda_max(A^H A)) by power iteration on A^H A,
/// started from the all-ones vector.
double matrix_two_norm(const ComplexMatrix& A, const PowerIterationOptions& options = {});

/// Same as matrix_two_norm for an operator given only by its action. `apply` maps
/// a length-`cols` vector to a length-`rows` vector; `apply_adjoint` the reverse.
double operator_two_norm(std::ptrdiff_t rows, std::ptrdiff_t cols,
                         const std::function<ComplexVector(const ComplexVector&)>& apply,
                         const std::function<ComplexVector(const ComplexVector&)>& apply_adjoint,
                         const PowerIterationOptions& options = {});

/// Index of the entry of largest modulus; ties resolve to the lowest index.
std::ptrdiff_t argmax_abs(const ComplexVector& v);

}  // namespace roq
