#include "roq/io.hpp"

#include <fstream>
#include <ostream>

#include "roq/error.hpp"

namespace roq {

Json to_json(const PhysicalConstants& c) {
  return {{"G", c.G}, {"c", c.c}, {"solar_mass", c.solar_mass}};
}

Json rule_json(const QuadratureRule& rule) {
  Json domain = Json::array();
  for (const auto& iv : rule.domain) domain.push_back({iv.lo, iv.hi});
  return {{"kind", rule.kind},
          {"size", rule.size()},
          {"factor_sizes", rule.factor_sizes},
          {"domain", domain},
          {"fingerprint", rule.fingerprint()}};
}

Json basis_json(const ReducedBasis& basis) {
  Json j = {{"size", basis.size()},
            {"tolerance", basis.tolerance},
            {"seed_index", basis.seed_index},
            {"tie_break", "lowest_index"},
            {"converged", basis.converged},
            {"rule", rule_json(basis.rule)},
            {"fingerprint", basis.fingerprint()},
            {"greedy_indices", basis.greedy_indices},
            {"greedy_errors", basis.greedy_errors}};
  if (!basis.pairs.empty()) {
    Json pairs = Json::array();
    for (const auto& [a, b] : basis.pairs) pairs.push_back({a, b});
    j["pairs"] = pairs;
  }
  return j;
}

Json eim_json(const EimOperator& op) {
  Json j = {{"size", op.size()},
            {"basis_ref", op.basis_ref},
            {"formulation", op.triangular() ? "residual_lower_triangular" : "dense"},
            {"point_indices", op.point_indices},
            {"nodes_x", op.nodes_x}};
  if (!op.nodes_y.empty()) j["nodes_y"] = op.nodes_y;
  return j;
}

Json roq_json(const RoqRule& roq) {
  Json j = {{"m", roq.size()},
            {"parent_ref", roq.parent_ref},
            {"basis_ref", roq.basis_ref},
            {"override", roq.override_integrals.has_value()},
            {"condition_number", roq.condition_number()}};
  if (roq.override_integrals) {
    Json v = Json::array();
    for (Eigen::Index k = 0; k < roq.override_integrals->size(); ++k) {
      v.push_back({(*roq.override_integrals)[k].real(), (*roq.override_integrals)[k].imag()});
    }
    j["override_integrals"] = v;
  }
  return j;
}

Json samples_json(const SampledFunctionSet& set, const PhysicalConstants& constants) {
  return {{"family", set.family},
          {"size", set.size()},
          {"normalized", set.normalized},
          {"parameters", set.parameters},
          {"rule", rule_json(set.rule)},
          {"constants", to_json(constants)}};
}

void write_basis_csv(std::ostream& out, const ReducedBasis& basis) {
  const auto old = out.precision(17);
  out << "node_index,column,re,im\n";
  for (Eigen::Index j = 0; j < basis.V.cols(); ++j) {
    for (Eigen::Index k = 0; k < basis.V.rows(); ++k) {
      out << k << ',' << j << ',' << basis.V(k, j).real() << ',' << basis.V(k, j).imag() << '\n';
    }
  }
  out.precision(old);
}

void write_greedy_parameters_csv(std::ostream& out, const ReducedBasis& basis) {
  const auto old = out.precision(17);
  const std::size_t dim = basis.greedy_parameters.empty() ? 0 : basis.greedy_parameters[0].size();
  out << "rank,training_index";
  for (std::size_t d = 0; d < dim; ++d) out << ",param" << d;
  out << ",greedy_error\n";
  for (std::size_t r = 0; r < basis.size(); ++r) {
    out << r << ',' << basis.greedy_indices[r];
    for (double p : basis.greedy_parameters[r]) out << ',' << p;
    out << ',' << basis.greedy_errors[r] << '\n';
  }
  out.precision(old);
}

void write_eim_factor_csv(std::ostream& out, const EimOperator& op) {
  const auto old = out.precision(17);
  out << "row,col,re,im\n";
  const ComplexMatrix& F = op.triangular() ? op.L : op.PtV;
  for (Eigen::Index a = 0; a < F.rows(); ++a) {
    for (Eigen::Index b = 0; b < F.cols(); ++b) {
      if (F(a, b) == Complex{0.0, 0.0}) continue;
      out << a << ',' << b << ',' << F(a, b).real() << ',' << F(a, b).imag() << '\n';
    }
  }
  out.precision(old);
}

OutputDir::OutputDir(std::filesystem::path dir, std::string config_hash)
    : dir_(std::move(dir)), hash_(std::move(config_hash)) {
  std::filesystem::create_directories(dir_);
}

std::filesystem::path OutputDir::csv(const std::string& name,
                                     const std::function<void(std::ostream&)>& body) const {
  const auto p = dir_ / name;
  std::ofstream f(p);
  if (!f) throw ArgumentError("cannot open " + p.string() + " for writing");
  f << "# config_hash=" << hash_ << '\n';
  body(f);
  return p;
}

std::filesystem::path OutputDir::json(const std::string& name, Json payload) const {
  const auto p = dir_ / name;
  std::ofstream f(p);
  if (!f) throw ArgumentError("cannot open " + p.string() + " for writing");
  payload["config_hash"] = hash_;
  f << payload.dump(2) << '\n';
  return p;
}

}  // namespace roq
