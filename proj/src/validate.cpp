#include <algorithm>
#include <chrono>
#include <cmath>

#include "roq/error.hpp"
#include "roq/experiments.hpp"

namespace roq {

namespace {

struct SampledPair {
  ComplexVector hi;
  ComplexVector hj;
};

SampledPair sample_pair(const ColumnSampler& sampler, std::size_t n, double mu_i, double mu_j) {
  SampledPair s{ComplexVector(static_cast<Eigen::Index>(n)), ComplexVector(static_cast<Eigen::Index>(n))};
  sampler({mu_i}, std::span<Complex>(s.hi.data(), n));
  sampler({mu_j}, std::span<Complex>(s.hj.data(), n));
  return s;
}

Complex weighted_product_sum(const SampledPair& s, const std::vector<double>& w) {
  Complex acc{0.0, 0.0};
  for (std::size_t k = 0; k < w.size(); ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    acc += w[k] * std::conj(s.hi[kk]) * s.hj[kk];
  }
  return acc;
}

double weighted_norm(const ComplexVector& h, const std::vector<double>& w) {
  return discrete_norm(h, w);
}

}  // namespace

std::vector<double> ValidationReport::max_errors() const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.max_error_roq);
  return out;
}

double draw_parameter(const CounterRng& rng, std::uint64_t counter, const Interval& domain,
                      bool log_uniform) {
  const double u = rng.uniform(counter);
  if (log_uniform) {
    if (!(domain.lo > 0.0)) throw DomainError("draw_parameter: log-uniform needs a positive domain");
    return domain.lo * std::exp(u * std::log(domain.hi / domain.lo));
  }
  return domain.lo + u * (domain.hi - domain.lo);
}

std::vector<ValidationReport> monte_carlo_validate(const std::vector<NestedRoq>& rules,
                                                   const FunctionFamily& family,
                                                   const Interval& band, std::size_t draws,
                                                   std::uint64_t rng_seed,
                                                   std::size_t reference_nodes,
                                                   MonteCarloPairs* pairs_out) {
  if (draws < 1) throw ArgumentError("monte_carlo_validate: need at least one draw");
  if (family.parameter_domain.size() != 1) {
    throw ArgumentError("monte_carlo_validate: family must have one parameter");
  }
  const auto t0 = std::chrono::steady_clock::now();
  const CounterRng rng(rng_seed);
  const Interval domain = family.parameter_domain[0];

  const QuadratureRule ref = gauss_legendre_rule(reference_nodes, band.lo, band.hi);
  const QuadratureRule ref2 = gauss_legendre_rule(2 * reference_nodes, band.lo, band.hi);
  const ColumnSampler ref_sampler = family.sampler_for(ref);

  struct RuleState {
    ColumnSampler sampler;
    ComplexMatrix G;        // products at the ROQ points, one row per draw
    ComplexMatrix W;        // truncated weights, one column per m
    ComplexVector I_d;
    std::size_t mmax = 0;
  };
  std::vector<RuleState> states(rules.size());
  for (std::size_t r = 0; r < rules.size(); ++r) {
    const NestedRoq& nr = rules[r];
    if (!nr.V || !nr.eim || !nr.parent || nr.m_values.empty()) {
      throw ArgumentError("monte_carlo_validate: incomplete rule description");
    }
    RuleState& st = states[r];
    st.mmax = *std::max_element(nr.m_values.begin(), nr.m_values.end());
    if (st.mmax > nr.eim->size()) throw ArgumentError("monte_carlo_validate: m exceeds basis size");
    st.sampler = family.sampler_for(*nr.parent);
    st.G.resize(static_cast<Eigen::Index>(draws), static_cast<Eigen::Index>(st.mmax));
    st.W = ComplexMatrix::Zero(static_cast<Eigen::Index>(st.mmax),
                               static_cast<Eigen::Index>(nr.m_values.size()));
    for (std::size_t c = 0; c < nr.m_values.size(); ++c) {
      const std::size_t m = nr.m_values[c];
      st.W.col(static_cast<Eigen::Index>(c)).head(static_cast<Eigen::Index>(m)) =
          roq_weights(*nr.eim, nr.integrals.values, m);
    }
    st.I_d.resize(static_cast<Eigen::Index>(draws));
  }

  MonteCarloPairs pairs;
  pairs.mu_i.resize(draws);
  pairs.mu_j.resize(draws);
  pairs.reference.resize(static_cast<Eigen::Index>(draws));
  pairs.scale.resize(draws);
  double doubling = 0.0;
  const std::size_t doubling_checks = std::min<std::size_t>(draws, 64);

  for (std::size_t p = 0; p < draws; ++p) {
    const double mi = draw_parameter(rng, 2 * p, domain, family.log_uniform);
    const double mj = draw_parameter(rng, 2 * p + 1, domain, family.log_uniform);
    pairs.mu_i[p] = mi;
    pairs.mu_j[p] = mj;
    const SampledPair sr = sample_pair(ref_sampler, ref.size(), mi, mj);
    const double ni = weighted_norm(sr.hi, ref.weights);
    const double nj = weighted_norm(sr.hj, ref.weights);
    const double scale = 1.0 / (ni * nj);
    const Complex Ic = weighted_product_sum(sr, ref.weights) * scale;
    pairs.reference[static_cast<Eigen::Index>(p)] = Ic;
    pairs.scale[p] = scale;
    if (p < doubling_checks) {
      const ColumnSampler s2 = family.sampler_for(ref2);
      const SampledPair d = sample_pair(s2, ref2.size(), mi, mj);
      const Complex I2 = weighted_product_sum(d, ref2.weights) /
                         (weighted_norm(d.hi, ref2.weights) * weighted_norm(d.hj, ref2.weights));
      doubling = std::max(doubling, std::abs(I2 - Ic));
    }
    for (std::size_t r = 0; r < rules.size(); ++r) {
      RuleState& st = states[r];
      const QuadratureRule& parent = *rules[r].parent;
      const SampledPair sp = sample_pair(st.sampler, parent.size(), mi, mj);
      st.I_d[static_cast<Eigen::Index>(p)] = weighted_product_sum(sp, parent.weights) * scale;
      const auto& idx = rules[r].eim->point_indices;
      for (std::size_t l = 0; l < st.mmax; ++l) {
        const auto k = static_cast<Eigen::Index>(idx[l]);
        st.G(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(l)) =
            std::conj(sp.hi[k]) * sp.hj[k] * scale;
      }
    }
  }

  std::vector<ValidationReport> reports;
  for (std::size_t r = 0; r < rules.size(); ++r) {
    const RuleState& st = states[r];
    const ComplexMatrix I_roq = st.G * st.W;
    ValidationReport rep;
    rep.label = rules[r].label;
    rep.draws = draws;
    rep.reference_nodes = reference_nodes;
    rep.reference_doubling_change = doubling;
    rep.reference_accepted = doubling < kReferenceAcceptance;
    const double err_d = (pairs.reference - st.I_d).cwiseAbs().maxCoeff();
    for (std::size_t c = 0; c < rules[r].m_values.size(); ++c) {
      ValidationRow row;
      row.m = rules[r].m_values[c];
      const auto col = I_roq.col(static_cast<Eigen::Index>(c));
      row.max_error_roq = (pairs.reference - col).cwiseAbs().maxCoeff();
      row.max_error_d = err_d;
      row.max_error_d_roq = (st.I_d - col).cwiseAbs().maxCoeff();
      rep.rows.push_back(row);
    }
    reports.push_back(std::move(rep));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (auto& rep : reports) rep.seconds = secs;
  if (pairs_out) *pairs_out = std::move(pairs);
  return reports;
}

}  // namespace roq
