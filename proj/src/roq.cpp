#include "roq/roq.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "roq/error.hpp"

namespace roq {

namespace {

Eigen::Map<const RealVector> as_eigen(std::span<const double> w) {
  return {w.data(), static_cast<Eigen::Index>(w.size())};
}

}  // namespace

double RoqRule::condition_number() const {
  return weights.cwiseAbs().sum();
}

BasisIntegrals basis_integrals(const ComplexMatrix& V, std::span<const double> weights) {
  if (V.rows() != static_cast<Eigen::Index>(weights.size())) {
    throw DimensionError("basis_integrals: basis rows do not match rule size");
  }
  return {V.transpose() * as_eigen(weights).cast<Complex>(), false};
}

BasisIntegrals basis_integrals(const ReducedBasis& basis) {
  return basis_integrals(basis.V, basis.rule.weights);
}

BasisIntegrals override_basis_integrals(const ReducedBasis& basis, const ComplexVector& integrals) {
  if (integrals.size() != basis.V.cols()) {
    throw DimensionError("override_basis_integrals: need one integral per basis column");
  }
  return {integrals, true};
}

ComplexVector roq_weights(const EimOperator& eim, const ComplexVector& integrals, std::size_t m) {
  if (m < 1 || m > eim.size()) throw ArgumentError("roq_weights: size out of range");
  if (integrals.size() < static_cast<Eigen::Index>(m)) {
    throw DimensionError("roq_weights: fewer basis integrals than basis columns");
  }
  const auto j = static_cast<Eigen::Index>(m);
  const ComplexVector s = integrals.head(j);
  if (eim.triangular()) {
    // (P^T V)^T w = s with P^T V = L T^{-1}  =>  L^T w = T^T s
    const ComplexVector rhs = eim.T.topLeftCorner(j, j).transpose().triangularView<Eigen::Lower>() * s;
    const ComplexMatrix Lt = eim.L.topLeftCorner(j, j).transpose();
    return solve_upper_triangular(Lt, rhs);
  }
  return solve_dense(eim.PtV.topLeftCorner(j, j).transpose(), s);
}

namespace {

RoqRule assemble(const EimOperator& eim, const QuadratureRule& parent,
                 const BasisIntegrals& integrals, std::size_t m) {
  RoqRule roq;
  roq.point_indices.assign(eim.point_indices.begin(), eim.point_indices.begin() + m);
  roq.points_x.assign(eim.nodes_x.begin(), eim.nodes_x.begin() + m);
  if (!eim.nodes_y.empty()) roq.points_y.assign(eim.nodes_y.begin(), eim.nodes_y.begin() + m);
  roq.parent_ref = parent.fingerprint();
  roq.basis_ref = eim.basis_ref;
  if (integrals.overridden) {
    roq.override_integrals = integrals.values.head(static_cast<Eigen::Index>(m));
  }
  roq.weights = roq_weights(eim, integrals.values, m);
  return roq;
}

}  // namespace

RoqRule build_roq(const ComplexMatrix& V, const EimOperator& eim, const QuadratureRule& parent,
                  const BasisIntegrals& integrals) {
  const auto m = static_cast<Eigen::Index>(eim.size());
  if (V.cols() != m || integrals.values.size() != m) {
    throw DimensionError("build_roq: basis, interpolation and integral sizes disagree");
  }
  if (V.rows() != static_cast<Eigen::Index>(parent.size())) {
    throw DimensionError("build_roq: basis rows do not match parent rule");
  }
  return assemble(eim, parent, integrals, eim.size());
}

RoqRule build_roq(const ReducedBasis& basis, const EimOperator& eim) {
  return build_roq(basis.V, eim, basis.rule, basis_integrals(basis));
}

RoqRule build_roq(const ReducedBasis& basis, const EimOperator& eim,
                  const BasisIntegrals& integrals) {
  return build_roq(basis.V, eim, basis.rule, integrals);
}

BasisIntegrationCheck verify_basis_integration(const RoqRule& roq, const ComplexMatrix& V,
                                               const QuadratureRule& parent) {
  if (V.cols() != static_cast<Eigen::Index>(roq.size())) {
    throw DimensionError("verify_basis_integration: basis size does not match rule");
  }
  const ComplexVector target =
      roq.override_integrals ? *roq.override_integrals : basis_integrals(V, parent.weights).values;
  const RealVector scale = V.cwiseAbs().transpose() * as_eigen(parent.weights).cwiseAbs();
  BasisIntegrationCheck out;
  for (Eigen::Index j = 0; j < V.cols(); ++j) {
    Complex acc{0.0, 0.0};
    for (std::size_t l = 0; l < roq.size(); ++l) {
      acc += roq.weights[static_cast<Eigen::Index>(l)] * V(static_cast<Eigen::Index>(roq.point_indices[l]), j);
    }
    const double dev = std::abs(acc - target[j]);
    out.max_abs = std::max(out.max_abs, dev);
    out.max_relative = std::max(out.max_relative, scale[j] > 0.0 ? dev / scale[j] : dev);
  }
  return out;
}

BasisIntegrationCheck verify_basis_integration(const RoqRule& roq, const ReducedBasis& basis) {
  return verify_basis_integration(roq, basis.V, basis.rule);
}

Complex roq_inner_product(const RoqRule& roq, const ComplexVector& h_i, const ComplexVector& h_j) {
  const auto m = static_cast<Eigen::Index>(roq.size());
  if (h_i.size() != m || h_j.size() != m) {
    throw DimensionError("roq_inner_product: inputs must have one value per ROQ point");
  }
  Complex acc{0.0, 0.0};
  for (Eigen::Index l = 0; l < m; ++l) acc += roq.weights[l] * std::conj(h_i[l]) * h_j[l];
  return acc;
}

Complex roq_integrate(const RoqRule& roq, const ComplexVector& g) {
  if (g.size() != static_cast<Eigen::Index>(roq.size())) {
    throw DimensionError("roq_integrate: input must have one value per ROQ point");
  }
  return roq.weights.transpose() * g;
}

RoqRule truncate_roq(const ComplexMatrix& V, const EimOperator& eim, const QuadratureRule& parent,
                     const BasisIntegrals& integrals, std::size_t m_prime) {
  if (m_prime < 1 || m_prime > eim.size()) throw ArgumentError("truncate_roq: m' out of range");
  if (V.cols() < static_cast<Eigen::Index>(m_prime) ||
      V.rows() != static_cast<Eigen::Index>(parent.size())) {
    throw DimensionError("truncate_roq: basis shape does not match operator or parent rule");
  }
  return assemble(eim, parent, integrals, m_prime);
}

RoqRule truncate_roq(const ReducedBasis& basis, const EimOperator& eim, std::size_t m_prime) {
  return truncate_roq(basis.V, eim, basis.rule, basis_integrals(basis), m_prime);
}

RoqBuild roq_new_grid(const ComplexMatrix& products, const QuadratureRule& new_rule) {
  if (products.rows() != static_cast<Eigen::Index>(new_rule.size())) {
    throw DimensionError("roq_new_grid: products are not sampled on the new rule");
  }
  RoqBuild out;
  ReducedBasis& b = out.basis;
  b.rule = new_rule;
  b.snapshots = products;
  b.V.resize(products.rows(), products.cols());
  b.greedy_errors.push_back(1.0);
  for (Eigen::Index i = 0; i < products.cols(); ++i) {
    const GramSchmidtResult gs =
        gram_schmidt_append(b.V, products.col(i), new_rule.weights, kDefaultGramSchmidtPasses, i);
    if (gs.breakdown) {
      throw ResolutionError("roq_new_grid: product " + std::to_string(i) +
                            " is dependent on the previous ones under the new rule; "
                            "the new grid does not resolve the product space");
    }
    b.V.col(i) = gs.residual;
    b.greedy_indices.push_back(static_cast<std::size_t>(i));
    b.greedy_errors.push_back(gs.residual_norm / gs.input_norm);
  }
  b.converged = true;
  out.eim = build_deim(b);
  out.rule = build_roq(b, out.eim);
  return out;
}

bool MonitorReport::all_hold() const {
  return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.holds; });
}

MonitorReport roq_error_monitor(const RoqRule& roq, const ReducedBasis& product_basis,
                                const EimOperator& eim, const ComplexMatrix& products) {
  const auto& w = product_basis.rule.weights;
  if (products.rows() != static_cast<Eigen::Index>(w.size())) {
    throw DimensionError("roq_error_monitor: products do not match rule size");
  }
  MonitorReport rep;
  rep.omega_d = condition_number(std::span<const double>(w));
  rep.lambda_2 = lebesgue_constants(eim, product_basis.V, w).lambda_2;
  const RealVector proj = projection_errors(products, product_basis.V, w);
  const ComplexVector exact = products.transpose() * as_eigen(w).cast<Complex>();
  ComplexMatrix at_points(static_cast<Eigen::Index>(roq.size()), products.cols());
  for (std::size_t l = 0; l < roq.size(); ++l) {
    at_points.row(static_cast<Eigen::Index>(l)) = products.row(roq.point_indices[l]);
  }
  const ComplexVector approx = at_points.transpose() * roq.weights;
  for (Eigen::Index s = 0; s < products.cols(); ++s) {
    MonitorRow row;
    row.exact_d = exact[s];
    row.roq = approx[s];
    row.error = std::abs(exact[s] - approx[s]);
    row.projection_error = proj[s];
    row.bound = rep.omega_d * rep.lambda_2 * proj[s];
    row.holds = row.error <= row.bound + kBoundSlack;
    rep.rows.push_back(row);
  }
  return rep;
}

void write_roq_csv(std::ostream& out, const RoqRule& roq) {
  const auto old = out.precision(17);
  out << "rank,node_index,node_value,weight_re,weight_im\n";
  for (std::size_t l = 0; l < roq.size(); ++l) {
    const Complex w = roq.weights[static_cast<Eigen::Index>(l)];
    out << l << ',' << roq.point_indices[l] << ',' << roq.points_x[l] << ',' << w.real() << ','
        << w.imag() << '\n';
  }
  out.precision(old);
}

}  // namespace roq
