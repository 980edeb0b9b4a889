#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "roq/eim.hpp"
#include "roq/families.hpp"
#include "roq/greedy.hpp"
#include "roq/io.hpp"
#include "roq/random.hpp"
#include "roq/roq.hpp"

namespace roq {

/// Least-squares fit log(err_i) = log C - c0 (i - n_min)^alpha over i >= n_min, so C is
/// the error where the fast decay starts.
struct DecayFit {
  double C = 0;
  double c0 = 0;
  double alpha = 0;
  double rms_log_residual = 0;
  std::size_t n_min = 0;
  std::size_t points = 0;
  bool at_grid_boundary = false;  // alpha pinned at 0.3 or 1.5: poor fit
};

inline constexpr double kFitAlphaMin = 0.3;
inline constexpr double kFitAlphaMax = 1.5;
inline constexpr double kFitAlphaStep = 0.005;

DecayFit fit_exponential_decay(std::span<const double> errors, std::size_t n_min);

/// One past the last index whose error is still >= threshold: where the fast
/// decay starts.
std::size_t decay_onset(std::span<const double> errors, double threshold);

/// A ROQ family of nested rules (all truncations of one basis) to validate.
struct NestedRoq {
  std::string label;
  const ComplexMatrix* V = nullptr;
  const EimOperator* eim = nullptr;
  const QuadratureRule* parent = nullptr;
  BasisIntegrals integrals;
  std::vector<std::size_t> m_values;
};

struct ValidationRow {
  std::size_t m = 0;
  double max_error_roq = 0;    // max |I_c - I_roq|
  double max_error_d = 0;      // max |I_c - I_d| of the parent rule
  double max_error_d_roq = 0;  // max |I_d - I_roq|
};

struct ValidationReport {
  std::string label;
  std::vector<ValidationRow> rows;
  std::size_t draws = 0;
  std::size_t reference_nodes = 0;
  double reference_doubling_change = 0;
  bool reference_accepted = false;
  double seconds = 0;
  std::optional<DecayFit> fit;

  std::vector<double> max_errors() const;
};

struct MonteCarloPairs {
  std::vector<double> mu_i;
  std::vector<double> mu_j;
  ComplexVector reference;  // I_c per pair
  std::vector<double> scale;  // 1 / (||h_i|| ||h_j||) under the reference rule
};

/// Accept the reference rule when doubling it changes the value by less than this.
inline constexpr double kReferenceAcceptance = 1e-8;

/// Monte Carlo validation of ROQ inner products of normalized pairs drawn from a
/// one-parameter family (log-uniform draws when the family asks for them). The
/// reference rule is Gauss-Legendre with `reference_nodes` nodes on the family's
/// physical interval.
std::vector<ValidationReport> monte_carlo_validate(const std::vector<NestedRoq>& rules,
                                                   const FunctionFamily& family,
                                                   const Interval& band, std::size_t draws,
                                                   std::uint64_t rng_seed,
                                                   std::size_t reference_nodes,
                                                   MonteCarloPairs* pairs_out = nullptr);

/// Draw k of a pair sampler: parameter in [lo, hi], log-uniform if requested.
double draw_parameter(const CounterRng& rng, std::uint64_t counter, const Interval& domain,
                      bool log_uniform);

struct ExperimentConfig {
  std::string experiment;
  double tolerance = 1e-6;  // on the projection error sigma, not sigma^2
  std::size_t K = 3000;
  std::size_t M = 1701;
  std::string rule_kind = "gl";  // "gl" or "trap"
  std::size_t seed_index = 0;
  std::size_t mc_draws = 20000;
  std::uint64_t rng_seed = 20130415;
  std::filesystem::path output_dir = "roq-out";
  PhysicalConstants constants;
  std::size_t m_prime = 0;  // 0 = full rule
  bool allow_direct_greedy = false;
  double onset_threshold = 5e-3;

  /// Published settings for each experiment.
  static ExperimentConfig defaults(const std::string& experiment);
  static const std::vector<std::string>& experiments();

  Json to_json() const;
  /// Overlays keys present in `j` onto this config.
  void merge(const Json& j);
  std::string hash() const;
};

struct Criterion {
  int id = 0;  // acceptance criterion number; 0 for auxiliary checks
  std::string name;
  bool passed = false;
  bool hard = true;
  double value = 0;
  double threshold = 0;
  std::string detail;
};

struct ExperimentResult {
  std::string experiment;
  std::vector<Criterion> criteria;
  Json summary;

  bool all_hard_passed() const;
};

/// Shared state of the gravitational-wave pipeline, built lazily so that several
/// experiments can reuse the expensive stages.
struct GwPipeline {
  GwPreset preset;
  FunctionFamily family;
  QuadratureRule rule;
  std::optional<SampledFunctionSet> training;
  std::optional<ReducedBasis> first;
  std::optional<ReducedBasis> products;
  std::optional<EimOperator> eim_first;
  std::optional<EimOperator> eim_products;
  std::optional<RoqRule> roq;
  std::string key;
  double seconds_first = 0;
  double seconds_products = 0;

  explicit GwPipeline(const ExperimentConfig& cfg);
  static std::string key_for(const ExperimentConfig& cfg);

  const ReducedBasis& first_stage();
  const ReducedBasis& product_basis();
  const EimOperator& first_eim();
  const EimOperator& product_eim();
  const RoqRule& roq_rule();

 private:
  ExperimentConfig cfg_;
};

/// Runs one experiment, writes its files under cfg.output_dir and report.json.
/// `shared` lets callers reuse a GW pipeline across experiments with the same key.
ExperimentResult run_experiment(const ExperimentConfig& cfg, GwPipeline* shared = nullptr);

}  // namespace roq
