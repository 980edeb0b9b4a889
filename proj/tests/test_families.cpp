#include <doctest.h>

#include <boost/math/special_functions/legendre.hpp>

#include "oracles.hpp"
#include "roq/error.hpp"
#include "roq/families.hpp"

using namespace roq;
using oracle::mp;

namespace {

const PhysicalConstants kC;

mp mp_psd(const mp& f) {
  const mp y = f / 150;
  return mp("9e-46") * (boost::multiprecision::pow(mp("4.49") * y, -56) +
                        mp("0.16") * boost::multiprecision::pow(y, mp("-4.52")) + mp("0.52") +
                        mp("0.32") * y * y);
}

mp mp_phase(const mp& mc, const mp& f) {
  const mp G("6.67384e-11"), c("299792458");
  return -oracle::pi() / 4 +
         mp(3) / 128 * boost::multiprecision::pow(oracle::pi() * G / (c * c * c) * f * mc, mp(-5) / 3);
}

}  // namespace

TEST_SUITE("families") {
  TEST_CASE("weight absorption") {
    const ComplexVector h = ComplexVector::Ones(3);
    const std::vector<double> one(3, 1.0), four(3, 4.0), bad = {1.0, 0.0, 1.0};
    CHECK((absorb_weight(h, one) - h).norm() == 0.0);
    CHECK((absorb_weight(h, four) - 2.0 * h).norm() == 0.0);
    CHECK_THROWS_AS(absorb_weight(h, bad), DomainError);
  }

  TEST_CASE("chirp mass") {
    CHECK(chirp_mass(7.0, 7.0) == doctest::Approx(7.0 * std::pow(2.0, -0.2)).epsilon(1e-15));
    CHECK(chirp_mass(3.0, 3.0) == doctest::Approx(2.611651689888372).epsilon(1e-15));
    CHECK(chirp_mass(30.0, 30.0) == doctest::Approx(26.11651689888372).epsilon(1e-15));
    CHECK(chirp_mass(2.0, 5.0) == doctest::Approx(chirp_mass(5.0, 2.0)).epsilon(1e-15));
    CHECK_THROWS_AS(chirp_mass(0.0, 1.0), DomainError);
  }

  TEST_CASE("detector noise curve") {
    CHECK(std::abs(ligo_psd(150.0) / 9.0e-46 - 1.0) < 1e-12);
    CHECK(ligo_psd(300.0) > ligo_psd(150.0));
    for (double f : {40.0, 100.0, 366.3383434841933}) {
      const double ref = mp_psd(mp(f)).convert_to<double>();
      CHECK(std::abs(ligo_psd(f) / ref - 1.0) < 1e-12);
    }
    CHECK_THROWS_AS(ligo_psd(0.0), DomainError);
  }

  TEST_CASE("stationary phase waveform") {
    const double mc = 2.611651689888372 * kC.solar_mass;
    for (double f : {40.0, 97.5, 366.3383434841933}) {
      const Complex h = spa_waveform(mc, f, 2.5);
      CHECK(std::abs(std::abs(h) - 2.5 * std::pow(f, -7.0 / 6.0)) < 1e-15);
    }
    // Phase at 40 Hz, compared modulo 2 pi through cos and sin.
    const mp ph = mp_phase(mp(2.611651689888372) * mp("1.98892e30"), mp(40));
    const Complex h = spa_waveform(mc, 40.0) * std::pow(40.0, 7.0 / 6.0);
    const double cr = boost::multiprecision::cos(ph).convert_to<double>();
    const double sr = boost::multiprecision::sin(ph).convert_to<double>();
    // The phase is ~1e5 rad, so 1e-10 relative leaves ~1e-5 absolute in the angle.
    const double rel = std::abs(std::arg(h * Complex(cr, -sr))) / ph.convert_to<double>();
    CHECK(rel < 1e-10);
    const Complex heavy = spa_waveform(1e40, 40.0);
    CHECK(std::abs(std::arg(heavy) + std::numbers::pi / 4) < 1e-12);
    CHECK_THROWS_AS(spa_waveform(mc, -1.0), DomainError);
    CHECK_THROWS_AS(spa_waveform(0.0, 40.0), DomainError);
  }

  TEST_CASE("log-spaced training set") {
    const double A = 2.611651689888372 * kC.solar_mass, B = 26.11651689888372 * kC.solar_mass;
    const auto t = log_training_set(A, B, 3000);
    CHECK(t.front() == A);
    CHECK(t.back() == B);
    const mp e = mp(A) * boost::multiprecision::pow(mp(B) / mp(A), mp(1500) / 2999);
    CHECK(std::abs(t[1500] / e.convert_to<double>() - 1.0) < 1e-14);
    const auto t3 = log_training_set(2.0, 8.0, 3);
    CHECK(t3[1] == doctest::Approx(4.0).epsilon(1e-15));
    CHECK_THROWS_AS(log_training_set(3.0, 1.0, 5), ArgumentError);
  }

  TEST_CASE("number of cycles") {
    const double A = 2.611651689888372 * kC.solar_mass;
    CHECK(n_cycles(A, 40.0, 40.0) == 0.0);
    CHECK(n_cycles(A, 40, 366.3383434841933) > n_cycles(2 * A, 40, 366.3383434841933));
    const mp G("6.67384e-11"), c("299792458"), mc = mp(A);
    const auto N = [&](const mp& f) {
      return 1 / (32 * boost::multiprecision::pow(oracle::pi(), mp(8) / 3)) *
             boost::multiprecision::pow(G * mc / (c * c * c), mp(-5) / 3) *
             boost::multiprecision::pow(f, mp(-5) / 3);
    };
    const double ref = (N(mp(40)) - N(mp(366.3383434841933))).convert_to<double>();
    CHECK(std::abs(n_cycles(A, 40, 366.3383434841933) / ref - 1.0) < 1e-10);
    CHECK_THROWS_AS(n_cycles(A, 50, 40), ArgumentError);
  }

  TEST_CASE("normalized Legendre matches Boost") {
    for (int l : {0, 1, 2, 7, 23, 120}) {
      for (double x : {-1.0, -0.3, 0.0, 0.77, 1.0}) {
        const double ref = std::sqrt((2.0 * l + 1.0) / 2.0) * boost::math::legendre_p(l, x);
        CHECK(std::abs(normalized_legendre(l, x) - ref) < 1e-13 * std::max(1.0, std::abs(ref)));
      }
    }
  }

  TEST_CASE("analytic families") {
    const auto leg = analytic_family("legendre");
    CHECK(std::abs(leg.evaluate({0.0}, 0.37, 0.0) - 1.0 / std::sqrt(2.0)) < 1e-15);
    const auto runge = analytic_family("runge");
    CHECK(std::abs(runge.evaluate({}, 0.0, 0.0) - 1.0) < 1e-15);
    CHECK(std::abs(runge.evaluate({}, 1.0, 0.0) - 0.5) < 1e-15);
    CHECK(std::abs(runge.evaluate({}, -1.0, 0.0) - 0.5) < 1e-15);
    const auto r = gauss_legendre_rule(200);
    std::vector<double> f(200);
    for (int k = 0; k < 200; ++k) f[k] = runge.evaluate({}, r.x[k], 0.0).real();
    CHECK(std::abs(integrate(r, f) - 1.5707963267948966) < 1e-14);
    CHECK_THROWS_AS(analytic_family("nope"), ArgumentError);
  }

  TEST_CASE("sampling and normalization") {
    const auto r = trapezoidal_rule(-1, 1, 50);
    const auto s = sample_family(analytic_family("legendre"), {{0.0}, {3.0}, {3.0}}, r, true);
    CHECK(std::abs(discrete_norm(s.samples.col(0), r.weights) - 1.0) < 1e-14);
    CHECK((s.samples.col(1) - s.samples.col(2)).norm() == 0.0);
    CHECK(s.normalized);

    const GwPreset preset;
    const auto gw = gw_family(preset);
    const auto rule = gauss_legendre_rule(1701, preset.fmin, preset.fmax);
    const auto gs = sample_family(gw, {{preset.mc_min_kg()}}, rule, true);
    CHECK(std::abs(discrete_norm(gs.samples.col(0), rule.weights) - 1.0) < 1e-13);

    // Norm of W^{1/2} h by 50-digit direct summation.
    mp acc = 0;
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const mp f = rule.x[k];
      acc += mp(rule.weights[k]) * boost::multiprecision::pow(f, mp(-7) / 3) / mp_psd(f);
    }
    const double ref = boost::multiprecision::sqrt(acc).convert_to<double>();
    CHECK(std::abs(gs.original_norms[0] / ref - 1.0) < 1e-12);

    // The fast sampler agrees with the pointwise evaluator.
    const auto pointwise = sample_family(analytic_family("legendre"), {{5.0}}, r, false);
    for (int k = 0; k < 50; ++k) {
      CHECK(std::abs(pointwise.samples(k, 0) - normalized_legendre(5, r.x[k])) < 1e-14);
    }
    ComplexVector direct(static_cast<Eigen::Index>(rule.size()));
    for (std::size_t k = 0; k < rule.size(); ++k) {
      direct[static_cast<Eigen::Index>(k)] =
          spa_waveform(preset.mc_min_kg(), rule.x[k]) / std::sqrt(ligo_psd(rule.x[k])) / gs.original_norms[0];
    }
    CHECK((direct - gs.samples.col(0)).cwiseAbs().maxCoeff() < 1e-9);
  }

  TEST_CASE("zero function cannot be normalized") {
    FunctionFamily zero;
    zero.name = "zero";
    zero.parameter_domain = {{0, 1}};
    zero.evaluate = [](const Parameter&, double, double) { return Complex(0.0, 0.0); };
    zero.weight = [](double, double) { return 1.0; };
    CHECK_THROWS_AS(sample_family(zero, {{0.5}}, trapezoidal_rule(0, 1, 5), true), DegenerateError);
  }
}
