#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "roq/families.hpp"
#include "roq/numerics.hpp"
#include "roq/quadrature.hpp"

namespace roq {

/// Orthonormal basis produced by a greedy run.
///
/// `greedy_errors[k]` is the largest training projection error after k basis
/// elements, so it has n + 1 entries: the initial 1, then one per append; the
/// last entry is below `tolerance` when the run converged.
struct ReducedBasis {
  ComplexMatrix V;          // nodes x n, orthonormal under `rule`
  ComplexMatrix snapshots;  // the selected training columns, same order
  std::vector<std::size_t> greedy_indices;
  std::vector<Parameter> greedy_parameters;
  std::vector<double> greedy_errors;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // product bases only
  QuadratureRule rule;
  double tolerance = 0.0;
  std::size_t seed_index = 0;
  bool converged = false;

  std::size_t size() const { return static_cast<std::size_t>(V.cols()); }
  std::string fingerprint() const;
};

/// The columns a greedy sweep runs over. Implementations must return
/// `inner_products(e)[k] = <e, column(k)>_d` for every training column.
class TrainingSource {
 public:
  virtual ~TrainingSource() = default;
  virtual std::ptrdiff_t rows() const = 0;
  virtual std::ptrdiff_t size() const = 0;
  virtual ComplexVector column(std::ptrdiff_t k) const = 0;
  virtual ComplexVector inner_products(const ComplexVector& e,
                                       std::span<const double> weights) const = 0;
  virtual Parameter parameter(std::ptrdiff_t k) const = 0;
  virtual std::pair<std::size_t, std::size_t> pair(std::ptrdiff_t) const { return {0, 0}; }
  virtual bool is_product() const { return false; }
};

/// Explicitly stored training columns.
class DenseTrainingSource : public TrainingSource {
 public:
  explicit DenseTrainingSource(const SampledFunctionSet& set);
  DenseTrainingSource(ComplexMatrix columns, std::vector<Parameter> parameters);

  std::ptrdiff_t rows() const override { return columns_.rows(); }
  std::ptrdiff_t size() const override { return columns_.cols(); }
  ComplexVector column(std::ptrdiff_t k) const override { return columns_.col(k); }
  ComplexVector inner_products(const ComplexVector& e,
                               std::span<const double> weights) const override;
  Parameter parameter(std::ptrdiff_t k) const override;

 private:
  ComplexMatrix columns_;
  std::vector<Parameter> parameters_;
};

/// Normalized products conj(h_i) h_j of n factor columns, never materialized.
/// Column k corresponds to (i, j) = (k / n, k % n).
class ProductTrainingSource : public TrainingSource {
 public:
  ProductTrainingSource(ComplexMatrix factors, std::vector<Parameter> parameters,
                        std::span<const double> weights);

  std::ptrdiff_t rows() const override { return factors_.rows(); }
  std::ptrdiff_t size() const override { return factors_.cols() * factors_.cols(); }
  ComplexVector column(std::ptrdiff_t k) const override;
  ComplexVector inner_products(const ComplexVector& e,
                               std::span<const double> weights) const override;
  Parameter parameter(std::ptrdiff_t k) const override;
  std::pair<std::size_t, std::size_t> pair(std::ptrdiff_t k) const override;
  bool is_product() const override { return true; }

  /// ||conj(h_i) h_j||_d, row-major n x n.
  const RealVector& product_norms() const { return norms_; }

 private:
  ComplexMatrix factors_;
  std::vector<Parameter> parameters_;
  RealVector norms_;
};

struct GreedyOptions {
  double tolerance = 1e-6;
  std::size_t seed_index = 0;
  int passes = kDefaultGramSchmidtPasses;
  std::size_t max_basis = 0;  // 0 = no cap
};

/// ||h - P_n h||_d with the same iterated Gram-Schmidt as the greedy.
double projection_error(const ComplexVector& h, const ReducedBasis& basis,
                        int passes = kDefaultGramSchmidtPasses);

/// Projection error of every column of `samples` onto `V` (batched).
RealVector projection_errors(const ComplexMatrix& samples, const ComplexMatrix& V,
                             std::span<const double> weights,
                             int passes = kDefaultGramSchmidtPasses);

/// RB greedy over normalized training columns. Projection errors are tracked by
/// downdating sigma_j^2 -= |<e_new, h_j>|^2 after every append.
ReducedBasis rb_greedy(const TrainingSource& training, const QuadratureRule& rule,
                       const GreedyOptions& options);
ReducedBasis rb_greedy(const SampledFunctionSet& training, double tolerance,
                       std::size_t seed_index = 0);

/// Materialized product space: column i * n + j = conj(h_i) h_j / ||.||_d.
SampledFunctionSet product_training_space(const SampledFunctionSet& functions);

enum class ProductMode { greedy_waveforms, orthonormal_basis };

/// Greedy over the n^2 products of the first-stage snapshots (or basis vectors).
ReducedBasis two_step_greedy(const ReducedBasis& first_stage, double tolerance,
                             ProductMode mode = ProductMode::greedy_waveforms,
                             std::size_t seed_index = 0);

inline constexpr std::size_t kDirectGreedyColumnLimit = 10'000'000;

struct DirectGreedyOptions {
  bool allow = false;           // the direct greedy is opt-in
  bool override_memory_guard = false;
  std::size_t seed_index = 0;
};

/// Greedy over all K^2 products of the K training columns.
ReducedBasis direct_product_greedy(const SampledFunctionSet& training, double tolerance,
                                   const DirectGreedyOptions& options);

}  // namespace roq
