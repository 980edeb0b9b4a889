#pragma once

// Independent reference implementations for the unit tests: 50-digit arithmetic
// and Eigen's dense self-adjoint eigensolver, never the library routines.

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <complex>
#include <random>
#include <utility>
#include <vector>

#include "roq/numerics.hpp"

namespace oracle {

using mp = boost::multiprecision::cpp_bin_float_50;

inline mp pi() { return boost::math::constants::pi<mp>(); }

struct mpc {
  mp re = 0, im = 0;
};

inline mpc mul_conj(std::complex<double> f, std::complex<double> g) {
  // conj(f) * g
  const mp a = f.real(), b = f.imag(), c = g.real(), d = g.imag();
  return {a * c + b * d, a * d - b * c};
}

inline mpc inner(const roq::ComplexVector& f, const roq::ComplexVector& g,
                 const std::vector<double>& w) {
  mpc acc;
  for (Eigen::Index k = 0; k < f.size(); ++k) {
    const mpc t = mul_conj(f[k], g[k]);
    acc.re += mp(w[static_cast<std::size_t>(k)]) * t.re;
    acc.im += mp(w[static_cast<std::size_t>(k)]) * t.im;
  }
  return acc;
}

/// P_n(x) and P_n'(x) by the three-term recurrence in 50 digits.
inline std::pair<mp, mp> legendre(int n, const mp& x) {
  mp p0 = 1, p1 = x;
  if (n == 0) return {mp(1), mp(0)};
  for (int k = 2; k <= n; ++k) {
    mp p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  const mp dp = n * (x * p1 - p0) / (x * x - 1);
  return {p1, dp};
}

/// Gauss-Legendre nodes and weights on [-1, 1] in 50 digits (ascending).
inline std::pair<std::vector<mp>, std::vector<mp>> gauss_legendre(int M) {
  std::vector<mp> x(M), w(M);
  for (int i = 0; i < M; ++i) {
    mp r = -boost::multiprecision::cos(pi() * (i + mp(0.75)) / (M + mp(0.5)));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(M, r);
      const mp dx = p / dp;
      r -= dx;
      if (boost::multiprecision::abs(dx) < mp("1e-45")) break;
    }
    const auto [p, dp] = legendre(M, r);
    x[i] = r;
    w[i] = 2 / ((1 - r * r) * dp * dp);
  }
  return {x, w};
}

/// Largest singular value from the eigenvalues of A^H A.
inline double two_norm(const roq::ComplexMatrix& A) {
  const roq::ComplexMatrix G = A.adjoint() * A;
  Eigen::SelfAdjointEigenSolver<roq::ComplexMatrix> es(G);
  return std::sqrt(es.eigenvalues().maxCoeff());
}

inline roq::ComplexMatrix random_matrix(Eigen::Index r, Eigen::Index c, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  roq::ComplexMatrix A(r, c);
  for (Eigen::Index k = 0; k < A.size(); ++k) A.data()[k] = {u(gen), u(gen)};
  return A;
}

inline roq::ComplexVector random_vector(Eigen::Index n, unsigned seed) {
  return random_matrix(n, 1, seed).col(0);
}

}  // namespace oracle
