#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "roq/error.hpp"
#include "roq/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"roq-kit: reduced order quadrature experiments"};
  app.require_subcommand(0, 1);

  std::string experiment;
  std::string config_path;
  std::optional<double> tolerance;
  std::optional<std::size_t> K, M, m_prime, seed_index, mc_draws;
  std::optional<std::uint64_t> rng_seed;
  std::optional<std::string> rule, out;
  bool allow_direct = false;
  bool list = false;

  app.add_option("experiment", experiment, "experiment to run");
  app.add_flag("--list", list, "list experiments and exit");
  app.add_option("--config", config_path, "JSON config overlaid on the experiment defaults")
      ->check(CLI::ExistingFile);
  app.add_option("--tolerance", tolerance, "greedy tolerance on the projection error");
  app.add_option("--k", K, "training set size (or basis size for Legendre experiments)");
  app.add_option("--m", M, "parent rule size");
  app.add_option("--m-prime", m_prime, "also write the ROQ rule truncated to this size");
  app.add_option("--rule", rule, "parent rule")->check(CLI::IsMember({"gl", "trap"}));
  app.add_option("--seed-index", seed_index, "training index of the greedy seed");
  app.add_option("--mc-draws", mc_draws, "Monte Carlo pairs");
  app.add_option("--rng-seed", rng_seed, "Monte Carlo seed");
  app.add_option("--out", out, "output directory");
  app.add_flag("--allow-direct-greedy", allow_direct, "run the direct product greedy as well");

  CLI11_PARSE(app, argc, argv);

  if (list || experiment.empty()) {
    for (const auto& e : roq::ExperimentConfig::experiments()) std::cout << e << '\n';
    return experiment.empty() && !list ? 2 : 0;
  }

  try {
    roq::ExperimentConfig cfg = roq::ExperimentConfig::defaults(experiment);
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      cfg.merge(roq::Json::parse(in));
      cfg.experiment = experiment;
    }
    if (tolerance) cfg.tolerance = *tolerance;
    if (K) cfg.K = *K;
    if (M) cfg.M = *M;
    if (m_prime) cfg.m_prime = *m_prime;
    if (rule) cfg.rule_kind = *rule;
    if (seed_index) cfg.seed_index = *seed_index;
    if (mc_draws) cfg.mc_draws = *mc_draws;
    if (rng_seed) cfg.rng_seed = *rng_seed;
    if (out) cfg.output_dir = *out;
    if (allow_direct) cfg.allow_direct_greedy = true;

    const roq::ExperimentResult res = roq::run_experiment(cfg);
    for (const auto& c : res.criteria) {
      std::printf("%-5s %-40s value=%-12.6g threshold=%-10.3g %s%s\n",
                  c.passed ? "PASS" : (c.hard ? "FAIL" : "warn"), c.name.c_str(), c.value,
                  c.threshold, c.detail.c_str(), c.id ? (" [criterion " + std::to_string(c.id) + "]").c_str() : "");
    }
    std::printf("report: %s\n", (cfg.output_dir / "report.json").string().c_str());
    return res.all_hard_passed() ? 0 : 1;
  } catch (const roq::Error& e) {
    std::fprintf(stderr, "roq-kit: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "roq-kit: %s\n", e.what());
    return 3;
  }
}
