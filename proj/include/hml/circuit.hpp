#pragma once

// Acyclic multi-level circuit IR. Node ids are positions in `nodes` and every
// operand id is smaller than the id of its user, so id order is topological.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hml/common.hpp"
#include "hml/types.hpp"

namespace hml {

using NodeId = std::uint32_t;

enum class GateKind {
  // word level
  Const,
  Input,
  Add,
  Sub,
  Mul,
  MulPlain,
  Lt,
  Leq,
  Eq,
  Mux,
  Reveal,
  // bit level
  ConstBit,
  InputBit,
  And,
  Or,
  Xor,
  Not,
  MuxBit,
  RevealBit,
};

inline constexpr GateKind kAllGateKinds[] = {
    GateKind::Const,    GateKind::Input,  GateKind::Add,   GateKind::Sub,      GateKind::Mul,
    GateKind::MulPlain, GateKind::Lt,     GateKind::Leq,   GateKind::Eq,       GateKind::Mux,
    GateKind::Reveal,   GateKind::ConstBit, GateKind::InputBit, GateKind::And, GateKind::Or,
    GateKind::Xor,      GateKind::Not,    GateKind::MuxBit, GateKind::RevealBit,
};

const char* to_string(GateKind k);
std::optional<GateKind> parse_gate_kind(std::string_view name);

bool is_bool_kind(GateKind k);
// Const, Input, ConstBit, InputBit: no computation, excluded from gate counts.
bool is_structural(GateKind k);
bool is_reveal(GateKind k);
bool is_commutative(GateKind k);
std::size_t arity(GateKind k);
// Const, MulPlain, ConstBit.
bool has_payload(GateKind k);

enum class Level { Arith, Bool, Mixed };

const char* to_string(Level l);
Level parse_level(std::string_view name);

// Ownership / sharing metadata of a node.
struct Meta {
  enum class Kind { Plain, Enc, Shared };

  Kind kind = Kind::Plain;
  OwnerSet provider;
  OwnerSet players;    // Shared only
  OwnerSet observers;  // Shared only
  std::uint32_t threshold = 0;

  static Meta plain() { return {}; }
  static Meta enc(OwnerSet provider) { return {Kind::Enc, std::move(provider), {}, {}, 0}; }
  static Meta shared(OwnerSet provider, OwnerSet players, OwnerSet observers,
                     std::uint32_t threshold) {
    return {Kind::Shared, std::move(provider), std::move(players), std::move(observers),
            threshold};
  }

  friend auto operator<=>(const Meta&, const Meta&) = default;
  friend bool operator==(const Meta&, const Meta&) = default;
};

std::string to_string(const Meta& m);

class CircuitError : public Error {
 public:
  using Error::Error;
};
class ArityError : public CircuitError {
 public:
  using CircuitError::CircuitError;
};
class ForwardReferenceError : public CircuitError {
 public:
  using CircuitError::CircuitError;
};
class ShareMismatchError : public CircuitError {
 public:
  using CircuitError::CircuitError;
};

// Share-metadata combination for a binary gate. Requires equal players and
// threshold; AdditiveShare also requires |players| == threshold.
Meta combine_share_meta(const Meta& a, const Meta& b, const Scheme& scheme);

// Meta of a gate over `a` and `b`: Plain is neutral, Enc unites providers,
// Shared follows combine_share_meta.
Meta combine_meta(const Meta& a, const Meta& b, const Scheme& scheme);

struct Node {
  GateKind kind = GateKind::Const;
  std::vector<NodeId> operands;
  Meta meta;
  std::optional<std::int64_t> payload;
  OwnerSet audience;  // Reveal and RevealBit only

  friend bool operator==(const Node&, const Node&) = default;
};

struct InputPort {
  NodeId node = 0;
  Party party = 0;
  std::string name;
  std::optional<std::uint32_t> bit;  // Bool level: bit index of the word

  friend bool operator==(const InputPort&, const InputPort&) = default;
};

struct OutputPort {
  NodeId node = 0;
  OwnerSet audience;
  std::string name;
  std::optional<std::uint32_t> bit;

  friend bool operator==(const OutputPort&, const OutputPort&) = default;
};

class Circuit {
 public:
  Circuit() = default;
  Circuit(Level level, std::uint32_t bitwidth);

  Level level = Level::Arith;
  std::uint32_t bitwidth = 64;
  std::vector<Node> nodes;
  std::vector<InputPort> inputs;
  std::vector<OutputPort> outputs;

  std::size_t size() const { return nodes.size(); }
  const Node& operator[](NodeId id) const { return nodes.at(id); }

  // Appends a node; returns its id. Throws ArityError, ForwardReferenceError.
  NodeId add_node(GateKind kind, std::vector<NodeId> operands, Meta meta = {},
                  std::optional<std::int64_t> payload = std::nullopt);
  NodeId add_const(std::int64_t value);
  NodeId add_input(Party party, std::string name, Meta meta,
                   std::optional<std::uint32_t> bit = std::nullopt);
  NodeId add_reveal(NodeId value, OwnerSet audience);
  void add_output(NodeId reveal, std::string name, std::optional<std::uint32_t> bit = std::nullopt);

  std::size_t count(GateKind k) const;

  friend bool operator==(const Circuit&, const Circuit&) = default;
};

// Empty when well formed. Never throws.
std::vector<std::string> validate(const Circuit& c, const Scheme& scheme = Scheme::generic());

// Identity order; valid because ids are topological.
std::vector<NodeId> topological_eval_order(const Circuit& c);

// Two's-complement wrap of v to `bitwidth` bits.
std::int64_t wrap(std::int64_t v, std::uint32_t bitwidth);

// Cleartext semantics of one gate on word (or 0/1 bit) values. Shared by
// constant folding and the interpreter. Const/Input kinds are not handled.
std::int64_t eval_gate(GateKind kind, std::span<const std::int64_t> args,
                       std::optional<std::int64_t> payload, std::uint32_t bitwidth);

// JSON interchange: {level, bitwidth, nodes:[{id,kind,operands,meta,payload}],
// inputs, outputs}. Parsing rejects ids that differ from array positions.
std::string circuit_to_json(const Circuit& c, int indent = 2);
Circuit circuit_from_json(std::string_view text);

}  // namespace hml
