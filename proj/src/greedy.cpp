#include "roq/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "roq/error.hpp"
#include "roq/hash.hpp"

namespace roq {

namespace {

Eigen::Map<const RealVector> as_eigen(std::span<const double> w) {
  return {w.data(), static_cast<Eigen::Index>(w.size())};
}

Parameter concat(const Parameter& a, const Parameter& b) {
  Parameter out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

std::string ReducedBasis::fingerprint() const {
  Fnv1a h;
  h.text(rule.fingerprint());
  h.value(static_cast<std::uint64_t>(V.rows())).value(static_cast<std::uint64_t>(V.cols()));
  h.bytes(V.data(), sizeof(Complex) * static_cast<std::size_t>(V.size()));
  for (auto i : greedy_indices) h.value(static_cast<std::uint64_t>(i));
  return h.hex();
}

DenseTrainingSource::DenseTrainingSource(const SampledFunctionSet& set)
    : DenseTrainingSource(set.samples, set.parameters) {
  if (!set.normalized) throw ArgumentError("training set must be normalized");
}

DenseTrainingSource::DenseTrainingSource(ComplexMatrix columns, std::vector<Parameter> parameters)
    : columns_(std::move(columns)), parameters_(std::move(parameters)) {
  if (!parameters_.empty() && static_cast<std::ptrdiff_t>(parameters_.size()) != columns_.cols()) {
    throw DimensionError("DenseTrainingSource: parameter count does not match columns");
  }
}

ComplexVector DenseTrainingSource::inner_products(const ComplexVector& e,
                                                  std::span<const double> weights) const {
  return discrete_inner_products(e, columns_, weights);
}

Parameter DenseTrainingSource::parameter(std::ptrdiff_t k) const {
  if (parameters_.empty()) return {static_cast<double>(k)};
  return parameters_.at(static_cast<std::size_t>(k));
}

ProductTrainingSource::ProductTrainingSource(ComplexMatrix factors,
                                             std::vector<Parameter> parameters,
                                             std::span<const double> weights)
    : factors_(std::move(factors)), parameters_(std::move(parameters)) {
  if (factors_.rows() != static_cast<Eigen::Index>(weights.size())) {
    throw DimensionError("ProductTrainingSource: factor rows do not match rule size");
  }
  const Eigen::Index n = factors_.cols();
  const Eigen::MatrixXd mod2 = factors_.cwiseAbs2();
  const Eigen::MatrixXd gram = mod2.transpose() * (as_eigen(weights).asDiagonal() * mod2);
  norms_.resize(n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double nrm = std::sqrt(gram(i, j));
      if (!(nrm > 0.0)) {
        throw DegenerateError("product training space: zero-norm product (" + std::to_string(i) +
                              ", " + std::to_string(j) + ")");
      }
      norms_[i * n + j] = nrm;
    }
  }
}

ComplexVector ProductTrainingSource::column(std::ptrdiff_t k) const {
  const auto [i, j] = pair(k);
  return factors_.col(static_cast<Eigen::Index>(i)).conjugate().cwiseProduct(
             factors_.col(static_cast<Eigen::Index>(j))) /
         norms_[k];
}

ComplexVector ProductTrainingSource::inner_products(const ComplexVector& e,
                                                    std::span<const double> weights) const {
  // <e, conj(h_i) h_j> = sum_x w conj(e) conj(h_i) h_j = (H^H diag(w conj e) H)_{ij}
  const ComplexVector d = as_eigen(weights).cast<Complex>().cwiseProduct(e.conjugate());
  const ComplexMatrix dh = d.asDiagonal() * factors_;
  const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> A =
      factors_.adjoint() * dh;
  ComplexVector out = Eigen::Map<const ComplexVector>(A.data(), A.size());
  return out.cwiseQuotient(norms_.cast<Complex>());
}

Parameter ProductTrainingSource::parameter(std::ptrdiff_t k) const {
  const auto [i, j] = pair(k);
  if (parameters_.empty()) return {static_cast<double>(i), static_cast<double>(j)};
  return concat(parameters_.at(i), parameters_.at(j));
}

std::pair<std::size_t, std::size_t> ProductTrainingSource::pair(std::ptrdiff_t k) const {
  const auto n = static_cast<std::ptrdiff_t>(factors_.cols());
  if (k < 0 || k >= n * n) throw ArgumentError("ProductTrainingSource: column out of range");
  return {static_cast<std::size_t>(k / n), static_cast<std::size_t>(k % n)};
}

double projection_error(const ComplexVector& h, const ReducedBasis& basis, int passes) {
  return gram_schmidt_append(basis.V, h, basis.rule.weights, passes).residual_norm;
}

RealVector projection_errors(const ComplexMatrix& samples, const ComplexMatrix& V,
                             std::span<const double> weights, int passes) {
  if (samples.rows() != static_cast<Eigen::Index>(weights.size()) ||
      (V.cols() > 0 && V.rows() != samples.rows())) {
    throw DimensionError("projection_errors: shape mismatch");
  }
  ComplexMatrix R = samples;
  if (V.cols() > 0) {
    const auto W = as_eigen(weights).cast<Complex>().asDiagonal();
    for (int p = 0; p < passes; ++p) {
      const ComplexMatrix C = V.adjoint() * (W * R);
      R.noalias() -= V * C;
    }
  }
  return (as_eigen(weights).asDiagonal() * R.cwiseAbs2()).colwise().sum().cwiseSqrt().transpose();
}

namespace {
constexpr double kRefreshRatio = 1e3 * std::numeric_limits<double>::epsilon();
constexpr Eigen::Index kRefreshBlock = 512;
}  // namespace

ReducedBasis rb_greedy(const TrainingSource& training, const QuadratureRule& rule,
                       const GreedyOptions& options) {
  const std::ptrdiff_t K = training.size();
  const std::ptrdiff_t M = training.rows();
  if (M != static_cast<std::ptrdiff_t>(rule.size())) {
    throw DimensionError("rb_greedy: training rows do not match rule size");
  }
  if (K < 1) throw ArgumentError("rb_greedy: empty training set");
  if (!(options.tolerance > 0.0)) throw ArgumentError("rb_greedy: tolerance must be positive");
  if (static_cast<std::ptrdiff_t>(options.seed_index) >= K) {
    throw ArgumentError("rb_greedy: seed index out of range");
  }
  const std::span<const double> w = rule.weights;
  const std::size_t cap = options.max_basis == 0 ? static_cast<std::size_t>(K)
                                                 : std::min<std::size_t>(options.max_basis, K);

  ReducedBasis out;
  out.rule = rule;
  out.tolerance = options.tolerance;
  out.seed_index = options.seed_index;
  out.greedy_errors.push_back(1.0);

  ComplexMatrix V(M, std::min<std::size_t>(cap, 64));
  ComplexMatrix S(M, V.cols());
  std::ptrdiff_t n = 0;
  RealVector sigma2 = RealVector::Ones(K);
  std::ptrdiff_t next = static_cast<std::ptrdiff_t>(options.seed_index);
  double refresh_level = 1.0;
  const double tol2 = options.tolerance * options.tolerance;

  while (true) {
    const ComplexVector h = training.column(next);
    const GramSchmidtResult gs = gram_schmidt_append(V, h, w, options.passes, n);
    if (gs.breakdown) {
      throw DegenerateError("rb_greedy: Gram-Schmidt breakdown at basis size " +
                            std::to_string(n) + " before tolerance was met");
    }
    if (n == V.cols()) {
      const Eigen::Index grow = std::min<Eigen::Index>(2 * V.cols(), static_cast<Eigen::Index>(cap));
      V.conservativeResize(Eigen::NoChange, grow);
      S.conservativeResize(Eigen::NoChange, grow);
    }
    V.col(n) = gs.residual;
    S.col(n) = h;
    ++n;
    out.greedy_indices.push_back(static_cast<std::size_t>(next));
    out.greedy_parameters.push_back(training.parameter(next));
    if (training.is_product()) out.pairs.push_back(training.pair(next));

    const ComplexVector c = training.inner_products(gs.residual, w);
    sigma2 -= c.cwiseAbs2();
    for (auto idx : out.greedy_indices) sigma2[static_cast<Eigen::Index>(idx)] = 0.0;

    auto pick = [&] {
      std::ptrdiff_t b = 0;
      for (Eigen::Index k = 1; k < K; ++k) {
        if (sigma2[k] > sigma2[b]) b = k;
      }
      return b;
    };
    std::ptrdiff_t best = pick();
    double best_val = sigma2[best];
    const double floor = kRefreshRatio * std::sqrt(refresh_level);
    if (best_val < floor && tol2 < floor) {
      // downdated values carry an absolute error of order eps * sqrt(refresh_level)
      for (Eigen::Index k0 = 0; k0 < K; k0 += kRefreshBlock) {
        const Eigen::Index nb = std::min<Eigen::Index>(kRefreshBlock, K - k0);
        ComplexMatrix block(M, nb);
        for (Eigen::Index k = 0; k < nb; ++k) block.col(k) = training.column(k0 + k);
        sigma2.segment(k0, nb) = projection_errors(block, V.leftCols(n), w, options.passes).cwiseAbs2();
      }
      for (auto idx : out.greedy_indices) sigma2[static_cast<Eigen::Index>(idx)] = 0.0;
      best = pick();
      best_val = sigma2[best];
      refresh_level = best_val;
    }
    const double err = std::sqrt(std::max(best_val, 0.0));
    out.greedy_errors.push_back(err);
    if (err < options.tolerance) {
      out.converged = true;
      break;
    }
    if (static_cast<std::size_t>(n) >= cap) break;
    next = best;
  }
  out.V = V.leftCols(n);
  out.snapshots = S.leftCols(n);
  return out;
}

ReducedBasis rb_greedy(const SampledFunctionSet& training, double tolerance,
                       std::size_t seed_index) {
  GreedyOptions opts;
  opts.tolerance = tolerance;
  opts.seed_index = seed_index;
  return rb_greedy(DenseTrainingSource(training), training.rule, opts);
}

SampledFunctionSet product_training_space(const SampledFunctionSet& functions) {
  if (!functions.normalized) throw ArgumentError("product_training_space: input must be normalized");
  const ProductTrainingSource src(functions.samples, functions.parameters, functions.rule.weights);
  SampledFunctionSet out;
  out.rule = functions.rule;
  out.family = functions.family + "_products";
  out.normalized = true;
  out.samples.resize(src.rows(), src.size());
  out.parameters.reserve(static_cast<std::size_t>(src.size()));
  out.original_norms.reserve(static_cast<std::size_t>(src.size()));
  for (std::ptrdiff_t k = 0; k < src.size(); ++k) {
    out.samples.col(k) = src.column(k);
    out.parameters.push_back(src.parameter(k));
    out.original_norms.push_back(src.product_norms()[k]);
  }
  return out;
}

ReducedBasis two_step_greedy(const ReducedBasis& first_stage, double tolerance, ProductMode mode,
                             std::size_t seed_index) {
  if (first_stage.size() == 0) throw ArgumentError("two_step_greedy: empty first stage");
  const ComplexMatrix& factors =
      mode == ProductMode::greedy_waveforms ? first_stage.snapshots : first_stage.V;
  const ProductTrainingSource src(factors, first_stage.greedy_parameters,
                                  first_stage.rule.weights);
  GreedyOptions opts;
  opts.tolerance = tolerance;
  opts.seed_index = seed_index;
  return rb_greedy(src, first_stage.rule, opts);
}

ReducedBasis direct_product_greedy(const SampledFunctionSet& training, double tolerance,
                                   const DirectGreedyOptions& options) {
  if (!options.allow) {
    throw ArgumentError("direct_product_greedy: disabled; pass the explicit opt-in flag");
  }
  if (!training.normalized) throw ArgumentError("direct_product_greedy: input must be normalized");
  const std::size_t K = training.size();
  if (K * K > kDirectGreedyColumnLimit && !options.override_memory_guard) {
    throw ArgumentError("direct_product_greedy: K^2 = " + std::to_string(K * K) +
                        " exceeds the column limit");
  }
  const ProductTrainingSource src(training.samples, training.parameters, training.rule.weights);
  GreedyOptions opts;
  opts.tolerance = tolerance;
  opts.seed_index = options.seed_index;
  return rb_greedy(src, training.rule, opts);
}

}  // namespace roq
