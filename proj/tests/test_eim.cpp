#include <doctest.h>

#include "oracles.hpp"
#include "roq/eim.hpp"
#include "roq/error.hpp"
#include "roq/families.hpp"
#include "roq/greedy.hpp"

using namespace roq;

namespace {

ReducedBasis gw_basis(std::size_t K, std::size_t M, double tol) {
  const GwPreset p;
  const auto rule = gauss_legendre_rule(M, p.fmin, p.fmax);
  std::vector<Parameter> params;
  for (double m : log_training_set(p.mc_min_kg(), p.mc_max_kg(), K)) params.push_back({m});
  return rb_greedy(sample_family(gw_family(p), params, rule, true), tol);
}

ComplexMatrix rows_at(const ComplexMatrix& V, const std::vector<std::size_t>& idx) {
  ComplexMatrix out(static_cast<Eigen::Index>(idx.size()), V.cols());
  for (std::size_t l = 0; l < idx.size(); ++l) out.row(static_cast<Eigen::Index>(l)) = V.row(static_cast<Eigen::Index>(idx[l]));
  return out;
}

}  // namespace

TEST_SUITE("eim") {
  TEST_CASE("first point is the arg max of the first column") {
    const auto r = trapezoidal_rule(0, 1, 9);
    ComplexMatrix V = ComplexMatrix::Constant(9, 1, 0.1);
    V(6, 0) = Complex(0, -2.0);
    CHECK(build_deim(V, r).point_indices == std::vector<std::size_t>{6});
  }

  TEST_CASE("unit vectors select their own positions") {
    const auto r = trapezoidal_rule(0, 1, 8);
    ComplexMatrix V = ComplexMatrix::Zero(8, 4);
    const std::vector<std::size_t> pos = {5, 1, 7, 2};
    for (int k = 0; k < 4; ++k) V(static_cast<Eigen::Index>(pos[k]), k) = 1.0;
    CHECK(build_deim(V, r).point_indices == pos);
  }

  TEST_CASE("triangular structure, interpolation and nesting") {
    const ReducedBasis b = gw_basis(300, 400, 1e-6);
    const EimOperator op = build_deim(b);
    const auto n = static_cast<Eigen::Index>(op.size());
    REQUIRE(op.triangular());
    const ComplexMatrix PtU = rows_at(op.U, op.point_indices);
    for (Eigen::Index a = 0; a < n; ++a) {
      CHECK(std::abs(PtU(a, a)) > 0.0);
      for (Eigen::Index c = a + 1; c < n; ++c) CHECK(PtU(a, c) == Complex(0.0, 0.0));
    }
    // Interpolating a basis column reproduces it at every node.
    for (Eigen::Index k : {Eigen::Index{0}, n / 2, n - 1}) {
      const ComplexVector at = rows_at(b.V.col(k), op.point_indices).col(0);
      CHECK((eim_interpolate(op, b.V, at) - b.V.col(k)).cwiseAbs().maxCoeff() < 1e-12);
    }
    // Points of a column prefix are a prefix of the points.
    for (Eigen::Index j : {Eigen::Index{1}, Eigen::Index{5}, n - 1}) {
      const EimOperator pre = build_deim(b.V.leftCols(j), b.rule);
      CHECK(std::equal(pre.point_indices.begin(), pre.point_indices.end(), op.point_indices.begin()));
      const EimOperator t = op.truncated(static_cast<std::size_t>(j));
      CHECK(t.point_indices == pre.point_indices);
    }
  }

  TEST_CASE("dense-U variant selects the same points") {
    const auto r = trapezoidal_rule(0, 1, 20);
    for (unsigned s = 0; s < 100; ++s) {
      const ComplexMatrix V = oracle::random_matrix(20, 6, 1000 + s);
      const EimOperator a = build_deim(V, r);
      const EimOperator d = build_deim_dense(V, r);
      CHECK(a.point_indices == d.point_indices);
      CHECK((V * a.inverse() - V * d.inverse()).cwiseAbs().maxCoeff() < 1e-10);
    }
  }

  TEST_CASE("square case reproduces any input") {
    const auto r = gauss_legendre_rule(12);
    ComplexMatrix Q(12, 12);
    for (Eigen::Index i = 0; i < 12; ++i) {
      Q.col(i) = gram_schmidt_append(Q, oracle::random_vector(12, 40 + static_cast<unsigned>(i)), r.weights, 2, i).residual;
    }
    const EimOperator op = build_deim(Q, r);
    const ComplexVector g = oracle::random_vector(12, 77);
    const ComplexVector at = rows_at(g, op.point_indices).col(0);
    CHECK((eim_interpolate(op, Q, at) - g).cwiseAbs().maxCoeff() < 1e-12);
    const LebesgueConstants lc = lebesgue_constants(op, Q, r.weights);
    CHECK(std::abs(lc.lambda_2 - 1.0) < 1e-8);
  }

  TEST_CASE("Lebesgue constants against dense eigen-decomposition") {
    const ReducedBasis b = gw_basis(200, 300, 1e-4);
    const EimOperator op = build_deim(b);
    const LebesgueConstants lc = lebesgue_constants(op, b.V, b.rule.weights);
    CHECK(lc.lambda_2 <= lc.lambda_2_bound * (1 + 1e-10));
    CHECK(lc.lambda_2 >= 1.0 - 1e-8);
    // Orthonormal V: the weighted constant is the norm of the weighted inverse point matrix.
    const ComplexMatrix B = rows_at(b.V, op.point_indices);
    RealVector dp(static_cast<Eigen::Index>(op.size()));
    for (std::size_t l = 0; l < op.size(); ++l) dp[static_cast<Eigen::Index>(l)] = std::sqrt(b.rule.weights[op.point_indices[l]]);
    const ComplexMatrix Binv = B.inverse();
    const ComplexMatrix K = Binv * dp.cwiseInverse().cast<Complex>().asDiagonal();
    CHECK(std::abs(lc.lambda_2 - oracle::two_norm(K)) < 1e-8 * lc.lambda_2);
    const ComplexMatrix VB = b.V * Binv;
    CHECK(std::abs(lc.lambda_inf - VB.cwiseAbs().rowwise().sum().maxCoeff()) < 1e-10 * lc.lambda_inf);
  }

  TEST_CASE("error report ordering") {
    const ReducedBasis b = gw_basis(200, 300, 1e-4);
    const EimOperator op = build_deim(b);
    const auto rep = interpolation_error_report(op, b, b.V.leftCols(3));
    CHECK(rep.max_interpolation_error() < 1e-12);
    const GwPreset p;
    std::vector<Parameter> params;
    for (int k = 0; k < 50; ++k) params.push_back({p.mc_min_kg() * (1.0 + 0.173 * k)});
    const auto samples = sample_family(gw_family(p), params, b.rule, true).samples;
    const auto r2 = interpolation_error_report(op, b, samples);
    CHECK(r2.all_ordered());
    for (const auto& row : r2.rows) {
      CHECK(row.interpolation_error <= row.bound_lambda + kBoundSlack);
      CHECK(row.bound_lambda <= row.bound_norms + kBoundSlack);
    }
  }

  TEST_CASE("dependent columns are rejected") {
    const auto r = trapezoidal_rule(0, 1, 10);
    ComplexMatrix V = oracle::random_matrix(10, 3, 8);
    V.col(2) = V.col(0) - 2.0 * V.col(1);
    CHECK_THROWS_AS(build_deim(V, r), DegenerateError);
  }
}
