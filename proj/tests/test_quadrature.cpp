#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "roq/error.hpp"
#include "roq/quadrature.hpp"

using namespace roq;

TEST_SUITE("quadrature") {
  TEST_CASE("two-point trapezoid") {
    const auto r = trapezoidal_rule(-1, 1, 2);
    CHECK(r.x == std::vector<double>{-1.0, 1.0});
    CHECK(r.weights == std::vector<double>{1.0, 1.0});
    CHECK_THROWS_AS(trapezoidal_rule(-1, 1, 1), ArgumentError);
  }

  TEST_CASE("trapezoid integrates x to zero and has endpoint-inclusive spacing") {
    for (std::size_t M : {2u, 3u, 100u, 1001u}) {
      const auto r = trapezoidal_rule(-1, 1, M);
      CHECK(std::abs(integrate(r, r.x)) < 1e-14);
    }
    const auto r = trapezoidal_rule(-1, 1, 1000);
    CHECK(r.x[887] == doctest::Approx(0.775775775775776).epsilon(1e-15));
    CHECK(std::abs(r.x[887] - (-1.0 + 887.0 * 2.0 / 999.0)) < 1e-15);
  }

  TEST_CASE("small Gauss-Legendre rules") {
    const auto r1 = gauss_legendre_rule(1);
    CHECK(std::abs(r1.x[0]) < 1e-16);
    CHECK(std::abs(r1.weights[0] - 2.0) < 1e-15);
    const auto r2 = gauss_legendre_rule(2);
    CHECK(std::abs(r2.x[0] + 1.0 / std::sqrt(3.0)) < 1e-15);
    CHECK(std::abs(r2.x[1] - 1.0 / std::sqrt(3.0)) < 1e-15);
    CHECK(std::abs(r2.weights[0] - 1.0) < 1e-15);
    const auto r5 = gauss_legendre_rule(5);
    std::vector<double> x8(5);
    for (int k = 0; k < 5; ++k) x8[k] = std::pow(r5.x[k], 8);
    CHECK(std::abs(integrate(r5, x8) - 2.0 / 9.0) < 1e-15);
  }

  TEST_CASE("Gauss-Legendre nodes and weights match a 50-digit Newton solve") {
    for (int M : {7, 64, 150, 401}) {
      const auto r = gauss_legendre_rule(static_cast<std::size_t>(M));
      const auto [x, w] = oracle::gauss_legendre(M);
      double dx = 0, dw = 0;
      for (int k = 0; k < M; ++k) {
        dx = std::max(dx, std::abs(r.x[k] - x[k].convert_to<double>()));
        dw = std::max(dw, std::abs(r.weights[k] - w[k].convert_to<double>()));
      }
      CHECK(dx < 1e-15);
      CHECK(dw < 1e-15);
    }
  }

  TEST_CASE("condition number is 2 for positive rules on [-1, 1]") {
    for (std::size_t M = 1; M <= 200; M += 13) {
      CHECK(std::abs(condition_number(std::span<const double>(gauss_legendre_rule(M).weights)) - 2.0) < 1e-12);
    }
    CHECK(std::abs(condition_number(std::span<const double>(trapezoidal_rule(-1, 1, 77).weights)) - 2.0) < 1e-14);
    const std::vector<std::complex<double>> cw = {{0, 1}, {-1, 0}, {3, 4}};
    CHECK(condition_number(std::span<const std::complex<double>>(cw)) == doctest::Approx(7.0));
  }

  TEST_CASE("tensor product rules") {
    const auto t = trapezoidal_rule(-1, 1, 2);
    const auto tt = tensor_product_rule(t, t);
    CHECK(tt.size() == 4);
    for (double w : tt.weights) CHECK(w == 1.0);
    CHECK(std::abs(tt.weight_sum() - 4.0) < 1e-15);
    const auto g = gauss_legendre_rule(3);
    const auto gg = tensor_product_rule(g, g);
    std::vector<double> f(gg.size());
    for (std::size_t k = 0; k < gg.size(); ++k) f[k] = gg.x[k] * gg.x[k] * gg.y[k] * gg.y[k];
    CHECK(std::abs(integrate(gg, f) - 4.0 / 9.0) < 1e-14);
    CHECK_THROWS_AS(tensor_product_rule(gg, g), ArgumentError);
  }

  TEST_CASE("mapping to an interval") {
    const auto g = gauss_legendre_rule(2);
    const auto same = map_to_interval(g, -1, 1);
    CHECK(same.x == g.x);
    CHECK(same.weights == g.weights);
    const auto m = map_to_interval(g, 0, 2);
    CHECK(std::abs(m.x[0] - (1 - 1 / std::sqrt(3.0))) < 1e-15);
    CHECK(std::abs(m.x[1] - (1 + 1 / std::sqrt(3.0))) < 1e-15);
    CHECK(std::abs(m.weights[0] - 1.0) < 1e-15);
    const auto band = gauss_legendre_rule(1701, 40.0, 366.3383434841933);
    CHECK(std::abs(band.weight_sum() - (366.3383434841933 - 40.0)) < 1e-11);
    CHECK_THROWS_AS(map_to_interval(g, 2, 1), ArgumentError);
  }

  TEST_CASE("fingerprint and CSV are deterministic") {
    const auto a = gauss_legendre_rule(33), b = gauss_legendre_rule(33);
    CHECK(a.fingerprint() == b.fingerprint());
    CHECK(a.fingerprint() != gauss_legendre_rule(34).fingerprint());
    std::ostringstream sa, sb;
    write_rule_csv(sa, a);
    write_rule_csv(sb, b);
    CHECK(sa.str() == sb.str());
  }
}
