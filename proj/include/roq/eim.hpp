#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "roq/greedy.hpp"
#include "roq/numerics.hpp"
#include "roq/quadrature.hpp"

namespace roq {

/// DEIM interpolation data for a basis V.
///
/// With the residual formulation, U = V T for a unit upper-triangular T and
/// L = P^T U is lower triangular, so P^T V = L T^{-1}. Operators built by the
/// dense variant leave L, T, U empty and carry P^T V instead.
struct EimOperator {
  std::vector<std::size_t> point_indices;
  std::vector<double> nodes_x;
  std::vector<double> nodes_y;  // empty for 1D rules
  ComplexMatrix L;
  ComplexMatrix T;
  ComplexMatrix U;
  ComplexMatrix PtV;  // V rows at the points, always present
  std::string basis_ref;

  std::size_t size() const { return point_indices.size(); }
  bool triangular() const { return L.size() > 0; }

  /// The operator for the leading j basis columns and points.
  EimOperator truncated(std::size_t j) const;

  /// Coefficients a with (P^T V) a = b.
  ComplexVector coefficients(const ComplexVector& values_at_points) const;
  ComplexMatrix coefficients(const ComplexMatrix& values_at_points) const;

  /// (P^T V)^{-1}, formed column by column.
  ComplexMatrix inverse() const;
};

/// Relative threshold on the residual maximum below which columns are dependent.
inline constexpr double kDeimIndependenceTolerance = 1e-14;

/// DEIM point selection, lower-triangular residual formulation.
EimOperator build_deim(const ComplexMatrix& V, const QuadratureRule& rule,
                       const std::string& basis_ref = {});
EimOperator build_deim(const ReducedBasis& basis);

/// Reference formulation: each step solves the dense system (P^T V_i) c = P^T e_i.
EimOperator build_deim_dense(const ComplexMatrix& V, const QuadratureRule& rule);

/// V (P^T V)^{-1} b.
ComplexVector eim_interpolate(const EimOperator& op, const ComplexMatrix& V,
                              const ComplexVector& values_at_points);

struct LebesgueConstants {
  double lambda_2 = 0;        // ||| D V (P^T V)^{-1} D_P^{-1} |||_2
  double lambda_2_bound = 0;  // ||| D V |||_2 ||| (P^T V)^{-1} D_P^{-1} |||_2
  double lambda_inf = 0;      // max row sum of | V (P^T V)^{-1} |
};

/// Lebesgue constants of the interpolation operator measured in the discrete
/// norm with weights w (D = diag(sqrt(w))). Unit weights give the plain matrix norms.
LebesgueConstants lebesgue_constants(const EimOperator& op, const ComplexMatrix& V,
                                     std::span<const double> weights);
LebesgueConstants lebesgue_constants(const EimOperator& op, const ComplexMatrix& V);

struct InterpolationErrorRow {
  double projection_error = 0;
  double interpolation_error = 0;
  double bound_lambda = 0;  // lambda_2 * projection error
  double bound_norms = 0;   // lambda_2_bound * projection error
  bool ordered = false;     // interpolation <= bound_lambda <= bound_norms (+ slack)
};

struct InterpolationErrorReport {
  LebesgueConstants lebesgue;
  std::vector<InterpolationErrorRow> rows;
  bool all_ordered() const;
  double max_interpolation_error() const;
};

inline constexpr double kBoundSlack = 1e-12;

/// Projection and interpolation errors of every column of `samples`.
InterpolationErrorReport interpolation_error_report(const EimOperator& op, const ReducedBasis& basis,
                                                    const ComplexMatrix& samples);

}  // namespace roq
