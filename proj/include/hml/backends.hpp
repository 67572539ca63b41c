#pragma once

// Circuit execution: cleartext reference interpreter, an n-out-of-n additive
// secret-sharing simulator with Beaver multiplication, and the boolean
// gate-list format.

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hml/circuit.hpp"
#include "hml/cost_model.hpp"
#include "hml/estimator.hpp"

namespace hml {

// ---------------------------------------------------------------- field

// Elements of Z_p, p = 2^61 - 1. Always reduced: 0 <= v < p.
namespace field {

inline constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

std::uint64_t add(std::uint64_t a, std::uint64_t b);
std::uint64_t sub(std::uint64_t a, std::uint64_t b);
std::uint64_t mul(std::uint64_t a, std::uint64_t b);
// Signed embedding v mod p, and the centered lift back into (-p/2, p/2).
std::uint64_t embed(std::int64_t v);
std::int64_t lift(std::uint64_t a);
std::uint64_t random(std::mt19937_64& rng);

}  // namespace field

using Fe = std::uint64_t;

// ---------------------------------------------------------------- sharing

class IncompleteSharesError : public Error {
 public:
  using Error::Error;
};
class TripleExhaustedError : public Error {
 public:
  using Error::Error;
};
class PlayerMismatchError : public Error {
 public:
  using Error::Error;
};
class BudgetExceededError : public Error {
 public:
  using Error::Error;
};

// One share per player, keyed by player. Sum of shares = secret (mod p).
struct ShareVector {
  std::map<Party, Fe> shares;
  OwnerSet players;
  OwnerSet provider;
  OwnerSet observers;
  std::uint32_t threshold = 0;
};

// Shares among players {0..n-1}: n-1 uniform shares, the last one completes
// the sum. Throws Error if n < 2.
ShareVector share(Fe value, std::uint32_t n, std::mt19937_64& rng);
ShareVector share(Fe value, std::uint32_t n, std::uint64_t seed);
// Throws IncompleteSharesError unless every player's share is present.
Fe reconstruct(const ShareVector& sv);

struct BeaverTriple {
  ShareVector a, b, c;  // c = a * b
  bool consumed = false;
};

BeaverTriple make_triple(std::uint32_t n, std::mt19937_64& rng);

struct BeaverStats {
  std::uint64_t rounds = 0;
  std::uint64_t multicasts = 0;
};

// Opens d = x - a and e = y - b, then z_i = c_i + d*b_i + e*a_i, with d*e
// added by the lowest-numbered player. Marks `t` consumed.
ShareVector beaver_mul(const ShareVector& x, const ShareVector& y, BeaverTriple& t,
                       BeaverStats* stats = nullptr);

// ---------------------------------------------------------------- inputs

using InputMap = std::map<std::pair<Party, std::string>, std::int64_t>;
using OutputMap = std::map<std::string, std::int64_t>;

class MissingInputError : public Error {
 public:
  using Error::Error;
};
class OverflowContractError : public Error {
 public:
  using Error::Error;
};

// {"parties": {"<id>": {"<name>": int | [int, ...]}}}; arrays expand to
// name[0], name[1], ...
InputMap parse_inputs_json(std::string_view text);
std::string outputs_to_json(const OutputMap& outputs, int indent = 2);

// ---------------------------------------------------------------- clear

// Evaluates nodes in id order. Bool-level circuits take word inputs (bit k of
// the value feeds bit port k) and reassemble output bits with sign extension.
// `evaluations`, when given, receives the number of gates evaluated.
OutputMap interpret_clear(const Circuit& c, const InputMap& inputs,
                          std::uint64_t* evaluations = nullptr);

// ---------------------------------------------------------------- shared

struct ExecTrace {
  std::uint64_t rounds = 0;
  std::uint64_t multicasts = 0;
  std::uint64_t triples_consumed = 0;
  std::uint64_t bits_consumed = 0;

  friend bool operator==(const ExecTrace&, const ExecTrace&) = default;
};

// One read of share material. `parties` lists whose shares were read; local
// steps read exactly one party, reveals and idealized comparisons read all.
struct ShareAccess {
  NodeId node = 0;
  std::string op;
  std::vector<Party> parties;
};

struct SharedResult {
  OutputMap outputs;
  ExecTrace trace;
  PreprocessingBudget offline;
  std::vector<ShareAccess> access_log;
};

struct SimulateOptions {
  std::uint32_t parties = 3;
  std::uint64_t seed = 0;
  CostModel model = secret_sharing_model();
  bool record_access = false;
};

// Offline phase generates exactly preprocessing_requirements(c, model); the
// online phase throws BudgetExceededError if it needs more. Above bitwidth 61
// inputs and constants must stay under 2^31 in magnitude (OverflowContractError).
SharedResult simulate_shared(const Circuit& c, const InputMap& inputs, const SimulateOptions& opts = {});

// ---------------------------------------------------------------- gate list

class LevelError : public Error {
 public:
  using Error::Error;
};

struct GateListGate {
  std::string op;  // AND XOR INV OR MUX
  std::vector<std::uint32_t> ins;
  std::uint32_t out = 0;
};

struct GateListInput {
  std::uint32_t wire = 0;
  Party party = 0;
  std::string name;
  std::uint32_t bit = 0;
};

struct GateListOutput {
  std::uint32_t wire = 0;
  std::string name;
  std::uint32_t bit = 0;
  OwnerSet audience;
};

struct GateList {
  std::uint32_t bitwidth = 0;
  std::uint32_t num_wires = 0;
  std::vector<GateListGate> gates;
  std::vector<GateListInput> inputs;
  std::vector<std::pair<std::uint32_t, int>> constants;  // wire, value
  std::vector<GateListOutput> outputs;
};

// Header `<#gates> <#wires>`, then `<#input wires> <#output wires>`, then one
// line per gate `<arity> 1 <in...> <out> <OP>`. Wires: inputs, then constants,
// then gate outputs. Trailing `const`, `in`, `out` and `bitwidth` lines carry
// the port bindings. Throws LevelError unless the circuit is Bool level.
std::string emit_gatelist(const Circuit& c);
GateList parse_gatelist(std::string_view text);
OutputMap evaluate_gatelist(const GateList& g, const InputMap& inputs);

}  // namespace hml
