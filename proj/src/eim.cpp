#include "roq/eim.hpp"

#include <algorithm>
#include <cmath>

#include "roq/error.hpp"

namespace roq {

namespace {

ComplexMatrix rows_at(const ComplexMatrix& A, const std::vector<std::size_t>& idx) {
  ComplexMatrix out(static_cast<Eigen::Index>(idx.size()), A.cols());
  for (std::size_t a = 0; a < idx.size(); ++a) out.row(static_cast<Eigen::Index>(a)) = A.row(idx[a]);
  return out;
}

void fill_nodes(EimOperator& op, const QuadratureRule& rule) {
  op.nodes_x.clear();
  op.nodes_y.clear();
  for (auto p : op.point_indices) {
    op.nodes_x.push_back(rule.x.at(p));
    if (!rule.y.empty()) op.nodes_y.push_back(rule.y.at(p));
  }
}

void check_basis(const ComplexMatrix& V, const QuadratureRule& rule, const char* who) {
  if (V.cols() == 0) throw ArgumentError(std::string(who) + ": empty basis");
  if (V.rows() != static_cast<Eigen::Index>(rule.size())) {
    throw DimensionError(std::string(who) + ": basis rows do not match rule size");
  }
  if (V.cols() > V.rows()) throw DimensionError(std::string(who) + ": more columns than nodes");
}

std::size_t select_point(const ComplexVector& r, double column_scale, std::size_t step) {
  const auto p = argmax_abs(r);
  if (!(std::abs(r[p]) > kDeimIndependenceTolerance * column_scale)) {
    throw DegenerateError("build_deim: basis column " + std::to_string(step) +
                          " is numerically dependent on the previous ones");
  }
  return static_cast<std::size_t>(p);
}

// Largest singular value of A via power iteration on the small Gram matrix A^H A.
double gram_two_norm(const ComplexMatrix& A) {
  const ComplexMatrix G = A.adjoint() * A;
  return operator_two_norm(
      G.rows(), G.cols(), [&G](const ComplexVector& x) -> ComplexVector { return G * x; },
      [](const ComplexVector& y) -> ComplexVector { return y; });
}

}  // namespace

EimOperator EimOperator::truncated(std::size_t j) const {
  if (j < 1 || j > size()) throw ArgumentError("EimOperator::truncated: size out of range");
  const auto jj = static_cast<Eigen::Index>(j);
  EimOperator out;
  out.point_indices.assign(point_indices.begin(), point_indices.begin() + jj);
  out.nodes_x.assign(nodes_x.begin(), nodes_x.begin() + jj);
  if (!nodes_y.empty()) out.nodes_y.assign(nodes_y.begin(), nodes_y.begin() + jj);
  if (triangular()) {
    out.L = L.topLeftCorner(jj, jj);
    out.T = T.topLeftCorner(jj, jj);
    out.U = U.leftCols(jj);
  }
  out.PtV = PtV.topLeftCorner(jj, jj);
  out.basis_ref = basis_ref;
  return out;
}

ComplexMatrix EimOperator::coefficients(const ComplexMatrix& b) const {
  if (b.rows() != static_cast<Eigen::Index>(size())) {
    throw DimensionError("eim: number of values does not match number of points");
  }
  if (triangular()) {
    const ComplexMatrix y = L.triangularView<Eigen::Lower>().solve(b);
    return T.triangularView<Eigen::Upper>() * y;
  }
  ComplexMatrix out(b.rows(), b.cols());
  for (Eigen::Index c = 0; c < b.cols(); ++c) out.col(c) = solve_dense(PtV, b.col(c));
  return out;
}

ComplexVector EimOperator::coefficients(const ComplexVector& b) const {
  if (b.size() != static_cast<Eigen::Index>(size())) {
    throw DimensionError("eim: number of values does not match number of points");
  }
  if (triangular()) return T.triangularView<Eigen::Upper>() * solve_lower_triangular(L, b);
  return solve_dense(PtV, b);
}

ComplexMatrix EimOperator::inverse() const {
  const auto n = static_cast<Eigen::Index>(size());
  return coefficients(ComplexMatrix(ComplexMatrix::Identity(n, n)));
}

EimOperator build_deim(const ComplexMatrix& V, const QuadratureRule& rule,
                       const std::string& basis_ref) {
  check_basis(V, rule, "build_deim");
  const Eigen::Index M = V.rows();
  const Eigen::Index m = V.cols();
  EimOperator op;
  op.basis_ref = basis_ref;
  op.U.resize(M, m);
  op.L = ComplexMatrix::Zero(m, m);
  op.T = ComplexMatrix::Zero(m, m);
  ComplexVector b(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto e = V.col(i);
    ComplexVector r = e;
    if (i > 0) {
      for (Eigen::Index a = 0; a < i; ++a) b[a] = e[op.point_indices[a]];
      const ComplexVector c = op.L.topLeftCorner(i, i).triangularView<Eigen::Lower>().solve(b.head(i));
      r.noalias() -= op.U.leftCols(i) * c;
      op.T.col(i).head(i) = -(op.T.topLeftCorner(i, i).triangularView<Eigen::Upper>() * c);
      // The interpolation residual vanishes at earlier points; make it exact.
      for (Eigen::Index a = 0; a < i; ++a) r[op.point_indices[a]] = 0.0;
    }
    op.T(i, i) = 1.0;
    const std::size_t p = select_point(r, e.cwiseAbs().maxCoeff(), static_cast<std::size_t>(i));
    op.U.col(i) = r;
    op.point_indices.push_back(p);
    op.L.row(i).head(i + 1) = op.U.row(static_cast<Eigen::Index>(p)).head(i + 1);
  }
  op.PtV = rows_at(V, op.point_indices);
  fill_nodes(op, rule);
  return op;
}

EimOperator build_deim(const ReducedBasis& basis) {
  return build_deim(basis.V, basis.rule, basis.fingerprint());
}

EimOperator build_deim_dense(const ComplexMatrix& V, const QuadratureRule& rule) {
  check_basis(V, rule, "build_deim_dense");
  const Eigen::Index m = V.cols();
  EimOperator op;
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto e = V.col(i);
    ComplexVector r = e;
    if (i > 0) {
      const ComplexMatrix A = rows_at(V.leftCols(i), op.point_indices);
      ComplexVector b(i);
      for (Eigen::Index a = 0; a < i; ++a) b[a] = e[op.point_indices[a]];
      r.noalias() -= V.leftCols(i) * solve_dense(A, b);
      for (Eigen::Index a = 0; a < i; ++a) r[op.point_indices[a]] = 0.0;
    }
    op.point_indices.push_back(select_point(r, e.cwiseAbs().maxCoeff(), static_cast<std::size_t>(i)));
  }
  op.PtV = rows_at(V, op.point_indices);
  fill_nodes(op, rule);
  return op;
}

ComplexVector eim_interpolate(const EimOperator& op, const ComplexMatrix& V,
                              const ComplexVector& values_at_points) {
  if (V.cols() != static_cast<Eigen::Index>(op.size())) {
    throw DimensionError("eim_interpolate: basis size does not match operator");
  }
  return V * op.coefficients(values_at_points);
}

LebesgueConstants lebesgue_constants(const EimOperator& op, const ComplexMatrix& V,
                                     std::span<const double> weights) {
  if (V.rows() != static_cast<Eigen::Index>(weights.size()) ||
      V.cols() != static_cast<Eigen::Index>(op.size())) {
    throw DimensionError("lebesgue_constants: shape mismatch");
  }
  RealVector d(V.rows());
  for (Eigen::Index k = 0; k < d.size(); ++k) {
    if (!(weights[k] > 0.0)) throw DomainError("lebesgue_constants: weights must be positive");
    d[k] = std::sqrt(weights[k]);
  }
  const ComplexMatrix Binv = op.inverse();
  ComplexMatrix B2 = Binv;
  for (Eigen::Index a = 0; a < B2.cols(); ++a) B2.col(a) /= d[op.point_indices[a]];
  const ComplexMatrix DV = d.cast<Complex>().asDiagonal() * V;

  LebesgueConstants out;
  out.lambda_2 = gram_two_norm(DV * B2);
  out.lambda_2_bound = gram_two_norm(DV) * gram_two_norm(B2);
  out.lambda_inf = (V * Binv).cwiseAbs().rowwise().sum().maxCoeff();
  return out;
}

LebesgueConstants lebesgue_constants(const EimOperator& op, const ComplexMatrix& V) {
  const std::vector<double> ones(static_cast<std::size_t>(V.rows()), 1.0);
  return lebesgue_constants(op, V, ones);
}

bool InterpolationErrorReport::all_ordered() const {
  return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.ordered; });
}

double InterpolationErrorReport::max_interpolation_error() const {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, r.interpolation_error);
  return m;
}

InterpolationErrorReport interpolation_error_report(const EimOperator& op, const ReducedBasis& basis,
                                                    const ComplexMatrix& samples) {
  const auto& w = basis.rule.weights;
  if (samples.rows() != static_cast<Eigen::Index>(w.size())) {
    throw DimensionError("interpolation_error_report: samples do not match rule size");
  }
  InterpolationErrorReport rep;
  rep.lebesgue = lebesgue_constants(op, basis.V, w);
  const RealVector proj = projection_errors(samples, basis.V, w);
  const ComplexMatrix interp = basis.V * op.coefficients(rows_at(samples, op.point_indices));
  const Eigen::Map<const RealVector> wv(w.data(), static_cast<Eigen::Index>(w.size()));
  const RealVector ierr =
      (wv.asDiagonal() * (samples - interp).cwiseAbs2()).colwise().sum().cwiseSqrt().transpose();
  for (Eigen::Index s = 0; s < samples.cols(); ++s) {
    InterpolationErrorRow row;
    row.projection_error = proj[s];
    row.interpolation_error = ierr[s];
    row.bound_lambda = rep.lebesgue.lambda_2 * proj[s];
    row.bound_norms = rep.lebesgue.lambda_2_bound * proj[s];
    row.ordered = row.interpolation_error <= row.bound_lambda + kBoundSlack &&
                  row.bound_lambda <= row.bound_norms + kBoundSlack;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace roq
