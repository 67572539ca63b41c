#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hml/circuit.hpp"
#include "hml/typecheck.hpp"

namespace hml {

enum class ComparisonEncoding {
  Direct,      // a >= b  =>  (b < a) + (a == b)
  RewriteGeq,  // a >= b  =>  1 - (a < b)
  Auto,        // rewrite form; cmp_rewrite picks per cost model
};

const char* to_string(ComparisonEncoding e);
ComparisonEncoding parse_comparison_encoding(const std::string& name);

struct LowerConfig {
  std::uint32_t bitwidth = 64;
  Level target_level = Level::Arith;
  ComparisonEncoding comparison_encoding = ComparisonEncoding::Auto;
  Scheme scheme = Scheme::generic();
  // Oblivious conditionals emit Mux; otherwise b*x + (1-b)*y.
  bool keep_mux = true;
};

class LowerError : public Error {
 public:
  enum class Code {
    BoundMissing,
    BoundNegative,
    NonConstBound,
    NonConstLength,
    SideEffectUndetectable,
    EmptyArray,
    FuelExhausted,
    IndexOutOfRange,
    Unsupported,
    Internal,
  };

  LowerError(Code code, Position pos, const std::string& message);
  Code code() const { return code_; }
  Position position() const { return pos_; }

 private:
  Code code_;
  Position pos_;
};

const char* to_string(LowerError::Code c);

// Typed program to a validated circuit at cfg.target_level.
Circuit lower_program(const TypedProgram& p, const LowerConfig& cfg);

// Balanced selection tree over `arr` by a private index: depth ceil(log2 L),
// L-1 Mux gates. Out-of-range indices select the nearest end.
NodeId lower_private_index(Circuit& c, const std::vector<NodeId>& arr, NodeId idx,
                           const Scheme& scheme = Scheme::generic());

// Element k becomes Mux(Eq(idx, k), val, arr[k]); `arr` is not modified.
std::vector<NodeId> lower_private_update(Circuit& c, const std::vector<NodeId>& arr, NodeId idx,
                                         NodeId val, const Scheme& scheme = Scheme::generic());

// Arith circuit to a Bool circuit with bitwidth-bit two's-complement words.
class BitblastError : public Error {
 public:
  using Error::Error;
};
Circuit bitblast(const Circuit& c);

// Bool circuit to an Arith circuit over {0,1} values.
Circuit bool_to_arith(const Circuit& c);

}  // namespace hml
