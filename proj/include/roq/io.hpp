#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "roq/eim.hpp"
#include "roq/families.hpp"
#include "roq/greedy.hpp"
#include "roq/quadrature.hpp"
#include "roq/roq.hpp"

namespace roq {

using Json = nlohmann::ordered_json;

Json to_json(const PhysicalConstants& c);
Json rule_json(const QuadratureRule& rule);
Json basis_json(const ReducedBasis& basis);
Json eim_json(const EimOperator& op);
Json roq_json(const RoqRule& roq);
Json samples_json(const SampledFunctionSet& set, const PhysicalConstants& constants);

/// Basis columns as `node_index,column,re,im`.
void write_basis_csv(std::ostream& out, const ReducedBasis& basis);
/// `rank,training_index,parameters...,greedy_error`.
void write_greedy_parameters_csv(std::ostream& out, const ReducedBasis& basis);
/// The lower-triangular factor P^T U as `row,col,re,im` (nonzeros only).
void write_eim_factor_csv(std::ostream& out, const EimOperator& op);

/// Writes a file, prefixing CSV payloads with a `# config_hash=...` line.
class OutputDir {
 public:
  OutputDir(std::filesystem::path dir, std::string config_hash);

  const std::filesystem::path& path() const { return dir_; }
  std::filesystem::path csv(const std::string& name, const std::function<void(std::ostream&)>& body) const;
  std::filesystem::path json(const std::string& name, Json payload) const;

 private:
  std::filesystem::path dir_;
  std::string hash_;
};

}  // namespace roq
