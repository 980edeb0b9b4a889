#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "roq/eim.hpp"
#include "roq/greedy.hpp"
#include "roq/numerics.hpp"
#include "roq/quadrature.hpp"

namespace roq {

/// The vector s = w^T V of basis integrals that ROQ weights reproduce.
struct BasisIntegrals {
  ComplexVector values;
  bool overridden = false;
};

/// s_j = sum_k w_k V_kj under the basis rule.
BasisIntegrals basis_integrals(const ComplexMatrix& V, std::span<const double> weights);
BasisIntegrals basis_integrals(const ReducedBasis& basis);

/// Replaces the rule-computed integrals with exact ones supplied by the caller.
BasisIntegrals override_basis_integrals(const ReducedBasis& basis, const ComplexVector& integrals);

struct RoqRule {
  std::vector<std::size_t> point_indices;
  std::vector<double> points_x;
  std::vector<double> points_y;
  ComplexVector weights;
  std::string parent_ref;
  std::string basis_ref;
  std::optional<ComplexVector> override_integrals;

  std::size_t size() const { return point_indices.size(); }
  double condition_number() const;
};

/// Weights for the leading m basis columns and points: w^T = s^T (P^T V)^{-1},
/// solved as L^T w = T^T s on the leading blocks (dense transpose solve otherwise).
ComplexVector roq_weights(const EimOperator& eim, const ComplexVector& integrals, std::size_t m);

/// Full-size rule with w_roq^T = s^T (P^T V)^{-1}.
RoqRule build_roq(const ComplexMatrix& V, const EimOperator& eim, const QuadratureRule& parent,
                  const BasisIntegrals& integrals);
RoqRule build_roq(const ReducedBasis& basis, const EimOperator& eim);
RoqRule build_roq(const ReducedBasis& basis, const EimOperator& eim,
                  const BasisIntegrals& integrals);

struct BasisIntegrationCheck {
  double max_abs = 0;       // max_j |sum_l w_l V(p_l, j) - s_j|
  double max_relative = 0;  // same, each column divided by sum_k |w_k V_kj|
};

/// How well the ROQ reproduces the (possibly overridden) basis integrals.
BasisIntegrationCheck verify_basis_integration(const RoqRule& roq, const ComplexMatrix& V,
                                               const QuadratureRule& parent);
BasisIntegrationCheck verify_basis_integration(const RoqRule& roq, const ReducedBasis& basis);

/// sum_l w_l conj(h_i(p_l)) h_j(p_l).
Complex roq_inner_product(const RoqRule& roq, const ComplexVector& h_i_at_points,
                          const ComplexVector& h_j_at_points);

/// sum_l w_l g(p_l) for a product already formed at the points.
Complex roq_integrate(const RoqRule& roq, const ComplexVector& g_at_points);

/// Rule from the leading m' basis columns and points.
RoqRule truncate_roq(const ComplexMatrix& V, const EimOperator& eim, const QuadratureRule& parent,
                     const BasisIntegrals& integrals, std::size_t m_prime);
RoqRule truncate_roq(const ReducedBasis& basis, const EimOperator& eim, std::size_t m_prime);

struct RoqBuild {
  ReducedBasis basis;
  EimOperator eim;
  RoqRule rule;
};

/// ROQ for a different parent rule: orthonormalize the greedy products (columns of
/// `products`, in greedy order, sampled on `new_rule`) under the new weights,
/// then run DEIM and the weight solve there.
RoqBuild roq_new_grid(const ComplexMatrix& products, const QuadratureRule& new_rule);

/// Per-pair a-posteriori check |I_d - I_roq| <= |Omega|_d Lambda ||g - P g||_d with
/// |Omega|_d = sum_k |w_k| of the parent rule.
struct MonitorRow {
  Complex exact_d;
  Complex roq;
  double error = 0;
  double projection_error = 0;
  double bound = 0;
  bool holds = false;
};

struct MonitorReport {
  double omega_d = 0;
  double lambda_2 = 0;
  std::vector<MonitorRow> rows;
  bool all_hold() const;
};

MonitorReport roq_error_monitor(const RoqRule& roq, const ReducedBasis& product_basis,
                                const EimOperator& eim, const ComplexMatrix& products);

/// `rank,node_index,node_value,weight_re,weight_im`, 17 significant digits.
void write_roq_csv(std::ostream& out, const RoqRule& roq);

}  // namespace roq
