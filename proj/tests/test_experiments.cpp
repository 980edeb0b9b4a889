#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "roq/error.hpp"
#include "roq/experiments.hpp"

using namespace roq;
namespace fs = std::filesystem;

namespace {

std::vector<double> synthetic(double C, double c0, double alpha, std::size_t n) {
  std::vector<double> e(n);
  for (std::size_t k = 0; k < n; ++k) e[k] = C * std::exp(-c0 * std::pow(static_cast<double>(k), alpha));
  return e;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("roq-unit-" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_SUITE("fit") {
  TEST_CASE("round trip of the published two-step fit") {
    const auto e = synthetic(4.19e-3, 0.981, 0.923, 30);
    const DecayFit f = fit_exponential_decay(e, 0);
    CHECK(std::abs(f.C / 4.19e-3 - 1) < 0.01);
    CHECK(std::abs(f.c0 / 0.981 - 1) < 0.01);
    CHECK(std::abs(f.alpha / 0.923 - 1) < 0.01);
    CHECK_FALSE(f.at_grid_boundary);
  }

  TEST_CASE("fit after a slow region uses the onset") {
    std::vector<double> e = {1.0, 0.9, 0.5, 0.2};
    for (double v : synthetic(3.98e-3, 1.07, 0.875, 25)) e.push_back(v);
    const std::size_t onset = decay_onset(e, 5e-3);
    CHECK(onset == 4);
    const DecayFit f = fit_exponential_decay(e, onset);
    CHECK(std::abs(f.alpha - 0.875) < 0.01);
    CHECK(f.n_min == 4);
    CHECK(f.points == 25);
  }

  TEST_CASE("degenerate and invalid sequences") {
    CHECK_THROWS_AS(fit_exponential_decay(std::vector<double>(10, 0.5), 0), DegenerateError);
    CHECK_THROWS_AS(fit_exponential_decay(std::vector<double>{1.0, 0.0, 0.1, 0.01}, 0), DomainError);
    CHECK_THROWS_AS(fit_exponential_decay(std::vector<double>{1.0, 0.1}, 0), ArgumentError);
  }

  TEST_CASE("algebraic decay is flagged at the grid boundary") {
    std::vector<double> e;
    for (int n = 1; n <= 200; ++n) e.push_back(std::pow(n, -3.0));
    const DecayFit f = fit_exponential_decay(e, 0);
    CHECK(f.at_grid_boundary);
    CHECK(f.alpha == doctest::Approx(kFitAlphaMin));
  }
}

TEST_SUITE("validate") {
  TEST_CASE("counter RNG is reproducible and uniform in [0, 1)") {
    const CounterRng a(42), b(42), c(43);
    double mean = 0;
    for (std::uint64_t k = 0; k < 10000; ++k) {
      CHECK(a.uniform(k) == b.uniform(k));
      CHECK(a.uniform(k) >= 0.0);
      CHECK(a.uniform(k) < 1.0);
      mean += a.uniform(k);
    }
    CHECK(std::abs(mean / 10000 - 0.5) < 0.02);
    CHECK(a.bits(7) != c.bits(7));
    const double d = draw_parameter(a, 3, {2.0, 8.0}, true);
    CHECK(d >= 2.0);
    CHECK(d <= 8.0);
    CHECK_THROWS_AS(draw_parameter(a, 3, {0.0, 8.0}, true), DomainError);
  }

  TEST_CASE("single point family: the max error is that pair's error") {
    const GwPreset p;
    FunctionFamily fam = gw_family(p);
    const double mc = 5.0 * p.constants.solar_mass;
    fam.parameter_domain = {{mc, mc}};
    const QuadratureRule rule = gauss_legendre_rule(300, p.fmin, p.fmax);
    std::vector<Parameter> params;
    for (double m : log_training_set(p.mc_min_kg(), p.mc_max_kg(), 100)) params.push_back({m});
    const ReducedBasis b1 = rb_greedy(sample_family(fam, params, rule, true), 1e-6);
    const ReducedBasis b2 = two_step_greedy(b1, 1e-6);
    const EimOperator e2 = build_deim(b2);
    NestedRoq nr{"single", &b2.V, &e2, &b2.rule, basis_integrals(b2), {b2.size()}};
    MonteCarloPairs pairs;
    const auto rep = monte_carlo_validate({nr}, fam, {p.fmin, p.fmax}, 3, 7, 1200, &pairs);
    REQUIRE(rep.size() == 1);
    CHECK(pairs.mu_i[0] == doctest::Approx(mc));
    CHECK(std::abs(pairs.reference[0] - 1.0) < 1e-12);
    const RoqRule q = build_roq(b2, e2);
    const auto s = sample_family(fam, {{mc}}, rule, true).samples;
    ComplexVector at(static_cast<Eigen::Index>(q.size()));
    for (std::size_t l = 0; l < q.size(); ++l) at[static_cast<Eigen::Index>(l)] = s(static_cast<Eigen::Index>(q.point_indices[l]), 0);
    const double single = std::abs(roq_inner_product(q, at, at) - pairs.reference[0]);
    CHECK(std::abs(rep[0].rows[0].max_error_roq - single) < 1e-14);
    CHECK(rep[0].reference_accepted);

    const auto again = monte_carlo_validate({nr}, fam, {p.fmin, p.fmax}, 3, 7, 1200);
    CHECK(again[0].rows[0].max_error_roq == rep[0].rows[0].max_error_roq);
  }
}

TEST_SUITE("experiments") {
  TEST_CASE("config defaults, overlay and hash") {
    ExperimentConfig c = ExperimentConfig::defaults("legendre_weights");
    CHECK(c.K == 24);
    CHECK(c.M == 1000);
    CHECK(c.rule_kind == "trap");
    const std::string h = c.hash();
    c.output_dir = "/somewhere/else";
    CHECK(c.hash() == h);
    c.merge(Json{{"K", 12}, {"rule_kind", "gauss_legendre"}});
    CHECK(c.K == 12);
    CHECK(c.rule_kind == "gl");
    CHECK(c.hash() != h);
    CHECK_THROWS_AS(c.merge(Json{{"bogus", 1}}), ArgumentError);
    CHECK_THROWS_AS(c.merge(Json{{"tolerance", -1.0}}), ArgumentError);
    CHECK_THROWS_AS(ExperimentConfig::defaults("nope"), ArgumentError);
    CHECK(ExperimentConfig::experiments().size() == 10);
  }

  TEST_CASE("small experiments write reproducible files") {
    ExperimentConfig c = ExperimentConfig::defaults("conditioning");
    c.K = 30;
    const fs::path a = scratch("cond-a"), b = scratch("cond-b");
    c.output_dir = a;
    const ExperimentResult r = run_experiment(c);
    CHECK(r.all_hard_passed());
    c.output_dir = b;
    run_experiment(c);
    CHECK(slurp(a / "conditioning.csv") == slurp(b / "conditioning.csv"));
    CHECK(slurp(a / "conditioning.csv").rfind("# config_hash=", 0) == 0);
    const Json rep = Json::parse(slurp(a / "report.json"));
    CHECK(rep["experiment"] == "conditioning");
    CHECK(rep["criteria"].size() == r.criteria.size());
    fs::remove_all(a);
    fs::remove_all(b);
  }

  TEST_CASE("GW pipeline at reduced size") {
    ExperimentConfig c = ExperimentConfig::defaults("gw_roq");
    c.K = 150;
    c.M = 400;
    c.mc_draws = 200;
    c.m_prime = 20;
    c.output_dir = scratch("gw");
    GwPipeline gw(c);
    const ExperimentResult r = run_experiment(c, &gw);
    CHECK(gw.roq.has_value());
    CHECK(fs::exists(c.output_dir / "roq_m20.csv"));
    CHECK(fs::exists(c.output_dir / "validation_gl.csv"));
    bool theorem1 = false;
    for (const auto& k : r.criteria) {
      if (k.name == "theorem1_basis_integration_gw") theorem1 = k.passed;
      CHECK(k.id != 6);
    }
    CHECK(theorem1);
    fs::remove_all(c.output_dir);
  }
}
