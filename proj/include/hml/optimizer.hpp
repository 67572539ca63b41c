#pragma once

#include <span>
#include <string>
#include <vector>

#include "hml/circuit.hpp"
#include "hml/cost_model.hpp"

namespace hml {

// Balanced binary reduction: L-1 applications of `op`, depth ceil(log2 L).
// The left half takes the extra element. `xs` must be nonempty.
template <typename T, typename Op>
T tree_reduce(std::span<const T> xs, Op&& op) {
  if (xs.size() == 1) return xs.front();
  const std::size_t mid = (xs.size() + 1) / 2;
  T left = tree_reduce(xs.first(mid), op);
  T right = tree_reduce(xs.subspan(mid), op);
  return op(left, right);
}

// Every pass maps a validated circuit to a validated, semantically equal one.
Circuit const_fold(const Circuit& c);
Circuit peephole(const Circuit& c);
Circuit strength_reduce(const Circuit& c);
Circuit pow_rewrite(const Circuit& c);
Circuit cse(const Circuit& c);
Circuit dce(const Circuit& c);
// Chooses between equivalent comparison encodings by model cost: the objective
// resource when given, else the sum over all resources. Ties keep the input.
Circuit cmp_rewrite(const Circuit& c, const CostModel& model, const std::string& objective = "");

std::vector<std::string> default_pass_list();

struct OptimizeOptions {
  std::vector<std::string> passes = default_pass_list();
  CostModel model = secret_sharing_model();
  std::string objective;
  int max_rounds = 10;
};

// Runs the pass list until the circuit stops changing or max_rounds is hit.
// Throws Error for an unknown pass name.
Circuit optimize(const Circuit& c, const OptimizeOptions& opts = {});

// Parses "a,b,c"; rejects unknown names.
std::vector<std::string> parse_pass_list(const std::string& text);

}  // namespace hml
