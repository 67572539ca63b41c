#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hml/circuit.hpp"
#include "hml/cost_model.hpp"

namespace hml {

class ModelCoverageError : public Error {
 public:
  explicit ModelCoverageError(GateKind kind);
  GateKind kind() const { return kind_; }

 private:
  GateKind kind_;
};

class ObjectiveMissingError : public Error {
 public:
  using Error::Error;
};

struct PreprocessingBudget {
  std::uint64_t triples = 0;
  std::uint64_t random_bits = 0;

  friend bool operator==(const PreprocessingBudget&, const PreprocessingBudget&) = default;
};

struct ResourceReport {
  std::string model_name;
  ResourceVector totals;
  std::map<GateKind, std::uint64_t> gate_counts;  // structural kinds excluded
  std::int64_t depth = 0;
  PreprocessingBudget preprocessing;
};

// Forward walk in id order. `transfer(node, operand_states)` yields the state
// of `node`; operand states are passed as pointers in operand order.
template <typename State, typename Transfer>
std::vector<State> accumulate(const Circuit& c, Transfer&& transfer) {
  std::vector<State> states;
  states.reserve(c.nodes.size());
  std::vector<const State*> ops;
  for (const Node& n : c.nodes) {
    ops.clear();
    for (NodeId o : n.operands) ops.push_back(&states[o]);
    states.push_back(transfer(n, ops));
  }
  return states;
}

// Longest path where each node contributes its weight; max over all nodes.
std::int64_t critical_path(const Circuit& c, const std::map<GateKind, std::int64_t>& weights);

// A multiplicative gate needing a Beaver triple: Mul, And, Or, Xor with no
// Plain operand; Mux, MuxBit with a non-Plain selector and a non-Plain arm.
bool consumes_triple(const Circuit& c, NodeId id);
// Lt, Leq, Eq over a non-Plain operand.
bool is_secret_comparison(const Circuit& c, NodeId id);

// Triples: per_mul * consumes_triple gates + per_comparison * secret
// comparisons. Bits: bits_per_comparison * secret comparisons. Rounded up.
PreprocessingBudget preprocessing_requirements(const Circuit& c, const CostModel& m);

// Throws ModelCoverageError for a kind the model does not price.
ResourceReport estimate(const Circuit& c, const CostModel& m);

// Ascending by the objective total; ties by model name.
std::vector<std::pair<std::string, double>> rank_backends(const Circuit& c,
                                                          const std::vector<CostModel>& models,
                                                          const std::string& objective);

std::string report_to_json(const ResourceReport& r, int indent = 2);

}  // namespace hml
