#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include "hml/circuit.hpp"

namespace hml {

// Offline-phase consumption. Unset comparison rates resolve against the
// circuit bitwidth: bitwidth*20 triples and bitwidth bits per comparison.
struct Preprocessing {
  double triples_per_mul = 1;
  std::optional<double> triples_per_comparison;
  std::optional<double> bits_per_comparison;

  double comparison_triples(std::uint32_t bitwidth) const {
    return triples_per_comparison.value_or(20.0 * bitwidth);
  }
  double comparison_bits(std::uint32_t bitwidth) const {
    return bits_per_comparison.value_or(static_cast<double>(bitwidth));
  }

  friend bool operator==(const Preprocessing&, const Preprocessing&) = default;
};

using ResourceVector = std::map<std::string, double>;

struct CostModel {
  std::string name;
  std::map<GateKind, ResourceVector> gate_costs;
  std::map<GateKind, std::int64_t> depth_weights;
  Preprocessing preprocessing;
  std::optional<std::uint64_t> prime_modulus;
  // (operand kind, user kind) -> cost per edge.
  std::map<std::pair<GateKind, GateKind>, ResourceVector> edge_costs;

  bool covers(GateKind k) const { return is_structural(k) || gate_costs.count(k) > 0; }
  // 0 for unknown kinds and resources.
  double cost(GateKind k, const std::string& resource) const;
  // Sum over every resource of the kind.
  double total_cost(GateKind k) const;
  std::int64_t depth_weight(GateKind k) const;
  std::set<std::string> resources() const;

  friend bool operator==(const CostModel&, const CostModel&) = default;
};

class CostModelError : public Error {
 public:
  using Error::Error;
};

// JSON: {name, gate_costs:{KIND:{resource:num}}, depth_weights:{KIND:num},
// preprocessing:{triples_per_mul, triples_per_comparison, bits_per_comparison},
// prime_modulus, edge_costs:[{from, to, costs:{...}}]}.
CostModel parse_cost_model(std::string_view json_text);
CostModel load_cost_model(const std::string& path);
std::string cost_model_to_json(const CostModel& m, int indent = 2);

// Builtin models. `bitwidth` scales the word-gate prices of the bit-level models.
CostModel secret_sharing_model(std::uint32_t bitwidth = 64);
CostModel mult_depth_model(std::uint32_t bitwidth = 64);
CostModel boolean_model(std::uint32_t bitwidth = 64);

// "secret_sharing", "mult_depth", "boolean"; otherwise a JSON file path.
CostModel resolve_cost_model(const std::string& name_or_path, std::uint32_t bitwidth);

}  // namespace hml
